#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "horoflow/errors.hpp"
#include "horoflow/pipeline.hpp"

namespace {

horoflow::RunOptions options_from_env(bool quiet) {
  horoflow::RunOptions o;
  o.quiet = quiet;
  if (const char* env = std::getenv("HOROFLOW_OUT"); env && *env) o.out_dir = env;
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"IMCF and Shi-Tam flows on AdS-Schwarzschild backgrounds"};
  app.set_version_flag("--version", horoflow::version());
  app.require_subcommand(1);
  bool quiet = false;
  app.add_flag("--quiet,-q", quiet, "suppress progress output");

  std::string path;
  auto* run = app.add_subcommand("run", "flow, lapse, mass and inequality for one scenario");
  run->add_option("config", path, "scenario TOML file")->required();
  auto* ineq = app.add_subcommand("inequality", "evaluate and stress the Penrose functional");
  ineq->add_option("config", path, "scenario TOML file")->required();
  auto* sweep = app.add_subcommand("sweep", "run every *.toml in a directory concurrently");
  sweep->add_option("config-dir", path, "directory of scenario files")->required();
  for (auto* sub : {run, ineq, sweep}) sub->add_flag("--quiet,-q", quiet, "suppress progress output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : horoflow::kExitConfig;
  }

  const horoflow::RunOptions opt = options_from_env(quiet);
  try {
    if (*sweep) {
      int worst = 0;
      for (const auto& e : horoflow::run_sweep(path, opt)) {
        if (!quiet)
          std::cout << e.config.filename().string() << "\t" << e.outcome.exit_code << "\t"
                    << e.outcome.dir.string() << "\n";
        worst = std::max(worst, e.outcome.exit_code);
      }
      return worst;
    }
    const horoflow::RunConfig config = horoflow::parse_config(path);
    const auto out = *run ? horoflow::run_scenario(config, opt) : horoflow::run_inequality(config, opt);
    if (out.exit_code != 0) std::cerr << "horoflow: " << out.message << "\n";
    return out.exit_code;
  } catch (const horoflow::ConfigError& e) {
    std::cerr << "horoflow: config error: " << e.what() << "\n";
    return horoflow::kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "horoflow: " << e.what() << "\n";
    return horoflow::kExitNumerical;
  }
}
