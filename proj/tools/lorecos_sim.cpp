// lorecos-sim: run LORECOS-AODVjr / CONTROL-AODVjr / AODVjr scenarios.
//
//   lorecos-sim run --scenario scenarios/topology1-lorecos.ini [--algo control]
//                   [--duration-ms 100000] [--out DIR] [--trace]
//   lorecos-sim compare A.ini B.ini --out DIR [--duration-ms N] [--trace]
//   lorecos-sim scenario --topology 2 --algo lorecos > topology2-lorecos.ini

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lorecos/runner.hpp"
#include "lorecos/scenario.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Discrete-event simulator for joint localization and AODVjr routing"};
  app.require_subcommand(1);

  const std::vector<std::string> algos{"lorecos", "control", "plain"};

  auto* run_cmd = app.add_subcommand("run", "Run one scenario and write its reports");
  std::string scenario;
  std::optional<std::string> algo;
  std::optional<std::uint64_t> duration;
  std::optional<std::string> out_dir;
  bool trace = false;
  run_cmd->add_option("--scenario", scenario, "Scenario file")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--algo", algo, "Override the algorithm")->check(CLI::IsMember(algos));
  run_cmd->add_option("--duration-ms", duration, "Override the run duration");
  run_cmd->add_option("--out", out_dir, "Output directory (default: the scenario's out_dir)");
  run_cmd->add_flag("--trace", trace, "Also write trace.csv");

  auto* cmp_cmd = app.add_subcommand("compare", "Run two scenarios on the same setup and compare them");
  std::string scenario_a;
  std::string scenario_b;
  std::string cmp_out = "out/compare";
  std::optional<std::uint64_t> cmp_duration;
  bool cmp_trace = false;
  cmp_cmd->add_option("scenario_a", scenario_a, "Baseline scenario (a)")->required()->check(CLI::ExistingFile);
  cmp_cmd->add_option("scenario_b", scenario_b, "Compared scenario (b)")->required()->check(CLI::ExistingFile);
  cmp_cmd->add_option("--out", cmp_out, "Output directory")->capture_default_str();
  cmp_cmd->add_option("--duration-ms", cmp_duration, "Override both run durations");
  cmp_cmd->add_flag("--trace", cmp_trace, "Also write trace.csv for both runs");

  auto* gen_cmd = app.add_subcommand("scenario", "Print a reference scenario file");
  int topology = 1;
  std::string gen_algo = "lorecos";
  gen_cmd->add_option("--topology", topology, "Reference layout")->check(CLI::Range(1, 3))->capture_default_str();
  gen_cmd->add_option("--algo", gen_algo, "Algorithm")->check(CLI::IsMember(algos))->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  if (*run_cmd) {
    lorecos::RunRequest request;
    request.scenario_path = scenario;
    if (algo) request.algo = lorecos::parse_algorithm(*algo);
    request.duration_ms = duration;
    if (out_dir) request.out_dir = *out_dir;
    request.trace = trace;
    return lorecos::run(request, std::cout, std::cerr);
  }
  if (*cmp_cmd) {
    lorecos::RunRequest a;
    a.scenario_path = scenario_a;
    a.duration_ms = cmp_duration;
    a.trace = cmp_trace;
    lorecos::RunRequest b = a;
    b.scenario_path = scenario_b;
    return lorecos::compare(a, b, cmp_out, std::cout, std::cerr);
  }
  if (*gen_cmd) {
    std::cout << lorecos::format_scenario(lorecos::canonical_scenario(topology, *lorecos::parse_algorithm(gen_algo)));
    return 0;
  }
  return 0;
}
