// netinf-sim: run scenarios and generate synthetic workloads.
//
//   netinf-sim run --scenario s.txt --seed 1 --system llc --metrics out.csv [--per-tick] [--validate]
//   netinf-sim gen --nodes 60 --hosts 40 --objects 100 --events 200 --seed 1 --out s.txt
//
// Exit codes: 0 success, 1 scenario error, 2 runtime error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "netinf/error.hpp"
#include "netinf/simulator.hpp"
#include "netinf/workload.hpp"

namespace {

constexpr int kScenarioError = 1;
constexpr int kRuntimeError = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"NetInf late locator construction simulator"};
  app.require_subcommand(1);

  std::string scenario_path, metrics_path, system_name = "llc";
  std::uint64_t seed = 0;
  bool per_tick = false, validate = false;
  double spot_check = 0.0;
  auto* run_cmd = app.add_subcommand("run", "Run a scenario and write metrics CSV");
  run_cmd->add_option("--scenario", scenario_path, "Scenario file")->required();
  run_cmd->add_option("--seed", seed, "Random seed");
  run_cmd->add_option("--system", system_name, "llc | flat-dht | anchor")
      ->check(CLI::IsMember({"llc", "flat-dht", "anchor"}));
  run_cmd->add_option("--metrics", metrics_path, "Output CSV path (stdout if omitted)");
  run_cmd->add_flag("--per-tick", per_tick, "Emit one row per tick before the total row");
  run_cmd->add_flag("--validate", validate, "Full invariant sweep after every event (slow)");
  run_cmd->add_option("--spot-check", spot_check, "Fraction of events followed by an invariant sweep")
      ->check(CLI::Range(0.0, 1.0));

  netinf::WorkloadParams params;
  std::uint64_t gen_seed = 0;
  std::string out_path;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic scenario");
  gen_cmd->add_option("--nodes", params.nodes, "Routers plus access nodes");
  gen_cmd->add_option("--hosts", params.hosts, "Hosts");
  gen_cmd->add_option("--objects", params.objects, "Objects published at tick 0");
  gen_cmd->add_option("--events", params.events, "Timed events after publication");
  gen_cmd->add_option("--move-prob", params.move_prob, "Probability an event is a move")->check(CLI::Range(0.0, 1.0));
  gen_cmd->add_option("--get-prob", params.get_prob, "Probability an event is a get")->check(CLI::Range(0.0, 1.0));
  gen_cmd->add_option("--depth", params.nesting_depth, "Maximum access network nesting depth");
  gen_cmd->add_option("--multihome-prob", params.multihome_prob, "Probability of a second parent")
      ->check(CLI::Range(0.0, 1.0));
  gen_cmd->add_option("--resolvers", params.resolvers, "DHT resolver count")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--cachecap", params.cache_capacity, "Per-host cache capacity");
  gen_cmd->add_option("--events-per-tick", params.events_per_tick, "Events sharing one tick");
  gen_cmd->add_option("--seed", gen_seed, "Random seed");
  gen_cmd->add_option("--out", out_path, "Output scenario path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kScenarioError;
  }

  try {
    if (*gen_cmd) {
      write_file(out_path, netinf::format_scenario(netinf::generate_workload(params, gen_seed)));
      return 0;
    }

    auto scenario = netinf::parse_scenario(read_file(scenario_path));
    netinf::RunOptions options;
    options.system = netinf::parse_system(system_name);
    options.validate = validate;
    options.spot_check_fraction = spot_check;
    auto csv = netinf::to_csv(netinf::run(scenario, seed, options), per_tick);
    if (metrics_path.empty()) {
      std::cout << csv;
    } else {
      write_file(metrics_path, csv);
    }
    return 0;
  } catch (const netinf::Error& e) {
    std::cerr << "netinf-sim: " << e.what() << '\n';
    return e.code() == netinf::Errc::ScenarioError ? kScenarioError : kRuntimeError;
  } catch (const std::exception& e) {
    std::cerr << "netinf-sim: " << e.what() << '\n';
    return kRuntimeError;
  }
}
