#include "panelkit/external_solver.hpp"

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <fstream>
#include <sstream>
#include <thread>

#include "panelkit/error.hpp"

namespace fs = std::filesystem;

namespace panelkit {

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + p.string());
}

std::string tail(const std::string& s, std::size_t n = 2000) { return s.size() <= n ? s : "..." + s.substr(s.size() - n); }

void quarantine(const fs::path& work, const fs::path& q) {
  std::error_code ec;
  fs::remove_all(q, ec);
  fs::create_directories(q.parent_path(), ec);
  fs::rename(work, q, ec);
}

}  // namespace

ProcessResult run_process(const std::vector<std::string>& argv, const fs::path& cwd, const std::string& stdin_text,
                          double timeout_s, const std::string& log_stem) {
  if (argv.empty()) throw Error(ErrorKind::ConfigError, "empty command");
  const fs::path in_file = cwd / (log_stem + ".stdin");
  const fs::path out_file = cwd / (log_stem + ".stdout");
  const fs::path err_file = cwd / (log_stem + ".stderr");
  spit(in_file, stdin_text);

  std::vector<char*> args;
  for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
  args.push_back(nullptr);

  const pid_t pid = fork();
  if (pid < 0) throw Error(ErrorKind::ExternalSolverFailure, "fork failed");
  if (pid == 0) {
    setpgid(0, 0);
    if (chdir(cwd.c_str()) != 0) _exit(126);
    const int fi = open(in_file.c_str(), O_RDONLY);
    const int fo = open(out_file.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
    const int fe = open(err_file.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
    if (fi < 0 || fo < 0 || fe < 0) _exit(126);
    dup2(fi, 0);
    dup2(fo, 1);
    dup2(fe, 2);
    execvp(args[0], args.data());
    _exit(127);
  }

  ProcessResult res;
  const auto deadline = std::chrono::steady_clock::now() + std::chrono::duration<double>(timeout_s);
  int status = 0;
  while (true) {
    const pid_t w = waitpid(pid, &status, WNOHANG);
    if (w == pid) break;
    if (w < 0) throw Error(ErrorKind::ExternalSolverFailure, "waitpid failed");
    if (std::chrono::steady_clock::now() > deadline) {
      kill(-pid, SIGKILL);
      kill(pid, SIGKILL);
      waitpid(pid, &status, 0);
      res.timed_out = true;
      break;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  if (WIFEXITED(status)) res.exit_code = WEXITSTATUS(status);
  else if (WIFSIGNALED(status)) res.exit_code = 128 + WTERMSIG(status);
  res.stdout_text = slurp(out_file);
  res.stderr_text = slurp(err_file);
  return res;
}

ExternalOutputs run_external_solver(const ExternalSolverConfig& cfg, const fs::path& deck_dir, const fs::path& work_dir,
                                    const fs::path& quarantine_dir) {
  if (cfg.panair.empty()) throw Error(ErrorKind::ConfigError, "external backend needs a solver executable");
  std::error_code ec;
  fs::remove_all(work_dir, ec);
  fs::create_directories(work_dir);
  for (const auto& entry : fs::directory_iterator(deck_dir)) {
    if (entry.is_regular_file()) fs::copy_file(entry.path(), work_dir / entry.path().filename());
  }

  auto step = [&](const std::string& exe, const std::string& input, const std::string& stem) {
    const auto r = run_process({exe, input}, work_dir, input + "\n", cfg.timeout_s, stem);
    if (r.timed_out) {
      quarantine(work_dir, quarantine_dir);
      throw Error(ErrorKind::Timeout, stem + " exceeded " + std::to_string(cfg.timeout_s) + " s");
    }
    if (r.exit_code != 0) {
      quarantine(work_dir, quarantine_dir);
      throw Error(ErrorKind::ExternalSolverFailure, stem + " exited with code " + std::to_string(r.exit_code) +
                                                        "\n--- stdout ---\n" + tail(r.stdout_text) +
                                                        "\n--- stderr ---\n" + tail(r.stderr_text));
    }
  };

  if (!cfg.panin.empty()) step(cfg.panin, "model.aux", "panin");
  step(cfg.panair, "a502.in", "panair");

  for (const char* f : {"agps", "ffmf"}) {
    if (!fs::exists(work_dir / f)) {
      quarantine(work_dir, quarantine_dir);
      throw Error(ErrorKind::ExternalSolverFailure, std::string("solver finished without writing '") + f + "'");
    }
  }
  ExternalOutputs out;
  out.agps_text = slurp(work_dir / "agps");
  out.ffmf_text = slurp(work_dir / "ffmf");
  if (fs::exists(work_dir / "ffm")) out.ffm_text = slurp(work_dir / "ffm");
  return out;
}

}  // namespace panelkit
