// panelkit: mesh -> networks -> decks -> solve -> visualization files.
//
// Exit codes: 0 ok, 1 validation or gate failure, 2 usage or config error,
// 3 external solver failure.

#include <CLI11.hpp>

#include <iostream>

#include "panelkit/error.hpp"
#include "panelkit/pipeline.hpp"

using namespace panelkit;

namespace {

int exit_code_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::ConfigError:
    case ErrorKind::IoError:
    case ErrorKind::InvalidFlowConditions: return 2;
    case ErrorKind::ExternalSolverFailure:
    case ErrorKind::Timeout: return 3;
    default: return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"panel-method preprocessing, solve and postprocessing pipeline"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<double> alphas;
  std::string backend;
  bool force = false;
  unsigned jobs = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("config_file", config_path, "pipeline config (JSON)");
    sub->add_option("--config", config_path, "pipeline config (JSON)");
    sub->add_option("--alpha", alphas, "angles of attack in degrees, comma separated")->delimiter(',');
    sub->add_option("--backend", backend, "solver backend")->check(CLI::IsMember({"embedded", "external"}));
    sub->add_flag("--force", force, "emit decks despite a failing abutment gate (watermarked)");
    sub->add_option("--jobs", jobs, "threads for influence assembly")->check(CLI::PositiveNumber);
  };
  CLI::App* check = app.add_subcommand("check", "build networks and report abutment and orientation");
  CLI::App* prep = app.add_subcommand("prep", "write LaWGS, auxiliary and a502 decks");
  CLI::App* run = app.add_subcommand("run", "solve with the embedded or external backend");
  CLI::App* post = app.add_subcommand("post", "write Tecplot data, macro and drag polar");
  CLI::App* all = app.add_subcommand("all", "prep, run and post");
  for (auto* s : {check, prep, run, post, all}) add_common(s);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  if (config_path.empty()) {
    std::cerr << "error: a config file is required\n";
    return 2;
  }

  try {
    PipelineConfig cfg = PipelineConfig::load(config_path);
    if (!alphas.empty()) cfg.flow.alphas = alphas;
    if (!backend.empty()) cfg.backend = backend == "external" ? Backend::External : Backend::Embedded;
    if (force) cfg.force = true;
    if (jobs > 0) cfg.jobs = jobs;
    cfg.validate();

    Pipeline p(cfg);
    if (check->parsed()) {
      const CheckOutcome out = p.check();
      std::cout << out.report;
      return out.exit_code;
    }
    if (prep->parsed()) p.prep();
    if (run->parsed()) p.run();
    if (post->parsed()) p.post();
    if (all->parsed()) p.all();
    std::cout << "ok: " << cfg.output_dir.string() << "\n";
    return 0;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
