#include <cstdio>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "app/config.hpp"
#include "app/runner.hpp"
#include "cbcount/errors.hpp"

namespace app = cbcount::app;

int main(int argc, char** argv) {
  CLI::App cli{"cbcount: rational points of bounded height on conic bundles"};
  cli.set_version_flag("--version", std::string("cbcount ") + app::kEngineVersion);
  cli.require_subcommand(1);
  cli.fallthrough();

  std::string config_path;
  unsigned threads = 1;
  std::string json_out, csv_out;
  bool print_report = false;
  cli.add_option("-c,--config", config_path, "run configuration (JSON)")->required();
  cli.add_option("-j,--threads", threads, "worker threads for fibre-level parallel work")->check(CLI::Range(1u, 1024u));
  cli.add_option("--json", json_out, "write the JSON report here (overrides output.json)");
  cli.add_option("--csv", csv_out, "write the CSV table here (overrides output.csv)");
  cli.add_flag("--print", print_report, "print the full JSON report on stdout");

  const std::map<std::string, std::string> about{
      {"validate", "structural checks on the surface and the height model"},
      {"count", "N(U, H, B) over the B grid, with a per-fibre breakdown"},
      {"fibre", "point counts and local densities of the fibre over params.y"},
      {"density", "sigma_p (params.p) or all local densities of the fibre over params.y"},
      {"peyre-sum", "partial sums of the fibre leading constants up to H(y) <= params.T"},
      {"probe", "global count against the matched partial sums, with a line fit"},
      {"bt-probe", "Tamagawa numbers along y = (1, t) for squarefree t <= params.t_max"},
      {"northcott-probe", "section heights on the hyperbolic family with params.a"},
      {"import-cubic", "blow up the cubic along its line and emit a surface config"},
  };
  for (const auto& name : app::subcommands()) cli.add_subcommand(name, about.at(name));

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = cli.exit(e);
    return rc == 0 ? 0 : app::kExitInput;
  }
  const std::string command = cli.get_subcommands().front()->get_name();

  app::RunConfig cfg;
  try {
    // validate reports failing checks itself instead of refusing the config
    cfg = app::parse_config_file(config_path, command != "validate");
  } catch (const cbcount::InputError& e) {
    nlohmann::ordered_json rec = {{"command", command},
                                  {"status", "error"},
                                  {"exit_code", app::kExitInput},
                                  {"version", app::kEngineVersion},
                                  {"error", {{"kind", "input"}, {"message", e.what()}}}};
    std::cerr << rec.dump() << "\n";
    return app::kExitInput;
  }
  if (!json_out.empty()) cfg.output_json = json_out;
  if (!csv_out.empty()) cfg.output_csv = csv_out;

  const app::RunResult result = app::run(command, cfg, app::RunOptions{threads});
  try {
    const std::string summary = app::write_artifacts(result, cfg, command);
    if (print_report || cfg.output_json.empty()) {
      std::cout << result.report.dump(2) << "\n";
    } else {
      std::cout << summary << "\n";
    }
    if (result.exit_code != app::kExitOk) std::cerr << result.report["error"].dump() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "{\"status\":\"error\",\"error\":{\"kind\":\"other\",\"message\":" << nlohmann::json(e.what()).dump()
              << "}}\n";
    return app::kExitOther;
  }
  return result.exit_code;
}
