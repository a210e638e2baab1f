#pragma once

// File-and-exit-code adapter around the legacy executables. The deck
// directory is copied into a scratch work directory, the preprocessor (when
// configured) and the solver run there, and the solver must leave "agps" and
// "ffmf" files behind. On failure the work directory is moved aside intact.

#include <filesystem>
#include <string>
#include <vector>

namespace panelkit {

struct ProcessResult {
  int exit_code = 0;  ///< 128 + signal when killed by a signal
  bool timed_out = false;
  std::string stdout_text;
  std::string stderr_text;
};

/// Runs argv[0] (PATH lookup when it has no slash) in `cwd` with `stdin_text`
/// on standard input. Output is captured through files in `cwd`. The process
/// group is killed after `timeout_s` seconds.
ProcessResult run_process(const std::vector<std::string>& argv, const std::filesystem::path& cwd,
                          const std::string& stdin_text, double timeout_s, const std::string& log_stem);

struct ExternalSolverConfig {
  std::string panin;   ///< optional; empty means the prepared a502.in is used as is
  std::string panair;  ///< required
  double timeout_s = 3600.0;
};

struct ExternalOutputs {
  std::string agps_text;
  std::string ffmf_text;
  std::string ffm_text;  ///< empty when the solver did not write one
};

/// Throws ExternalSolverFailure (exit code and captured output in the message)
/// or Timeout. In both cases `work_dir` has been renamed to `quarantine_dir`.
ExternalOutputs run_external_solver(const ExternalSolverConfig& cfg, const std::filesystem::path& deck_dir,
                                    const std::filesystem::path& work_dir,
                                    const std::filesystem::path& quarantine_dir);

}  // namespace panelkit
