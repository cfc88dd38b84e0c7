// Command-line front end for the mission simulator: single runs with trace
// and metrics output, seed sweeps, and static state-graph verification.
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hunt/fsm.hpp"
#include "hunt/scenario.hpp"
#include "hunt/sim.hpp"

namespace {

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

void print_warnings(const std::vector<hunt::MonitorEvent>& events) {
  for (const hunt::MonitorEvent& e : events)
    if (e.kind == hunt::MonitorEvent::Kind::warning)
      std::fprintf(stderr, "warning t=%.2f [%s] %s\n", e.timestamp,
                   e.state.c_str(), e.detail.c_str());
}

int cmd_run(const std::string& scenario_path, std::uint64_t seed,
            bool seed_set, const std::string& trace_path,
            const std::string& metrics_path) {
  hunt::Scenario sc = hunt::load_scenario(scenario_path);
  if (seed_set) sc.seed = seed;

  hunt::SimOptions opt;
  opt.record_trace = !trace_path.empty();
  const hunt::SimResult r = hunt::run_scenario(sc, opt);

  print_warnings(r.events);
  if (!trace_path.empty()) write_file(trace_path, r.trace);
  if (!metrics_path.empty()) write_file(metrics_path, r.metrics.to_json());
  std::fputs(r.metrics.to_json().c_str(), stdout);
  return r.metrics.violations > 0 ? 1 : 0;
}

int cmd_sweep(const std::string& scenario_path, const std::string& seeds) {
  const auto dots = seeds.find("..");
  if (dots == std::string::npos)
    throw CLI::ValidationError("--seeds", "expected a range like 1..20");
  const std::uint64_t lo = std::stoull(seeds.substr(0, dots));
  const std::uint64_t hi = std::stoull(seeds.substr(dots + 2));
  if (hi < lo) throw CLI::ValidationError("--seeds", "range is backwards");

  hunt::Scenario sc = hunt::load_scenario(scenario_path);
  int runs = 0, clean = 0, full_pops = 0;
  double total_sum = 0.0;

  for (std::uint64_t seed = lo; seed <= hi; ++seed) {
    sc.seed = seed;
    const hunt::SimResult r = hunt::run_scenario(sc);
    const hunt::SimMetrics& m = r.metrics;
    ++runs;
    if (m.violations == 0) ++clean;
    if (m.kind == "chase") {
      std::printf("seed %llu: top %.2f m/s, %d brake entries, "
                  "%d violations\n",
                  static_cast<unsigned long long>(seed), m.top_speed,
                  m.brake_entries, m.violations);
      continue;
    }
    if (m.pops() == m.balloons) ++full_pops;
    total_sum += m.total_s;
    std::string tries = "[";
    for (std::size_t i = 0; i < m.tries.size(); ++i) {
      tries += std::to_string(m.tries[i]);
      if (i + 1 < m.tries.size()) tries += ",";
    }
    tries += "]";
    std::printf("seed %llu: popped %d/%d, tries %s, total %.1f s, "
                "%d violations, %d fence warnings\n",
                static_cast<unsigned long long>(seed), m.pops(), m.balloons,
                tries.c_str(), m.total_s, m.violations, m.fence_warnings);
  }

  if (sc.kind == hunt::Scenario::Kind::hunt && sc.balloons.size() > 0)
    std::printf("summary: %d/%d runs popped everything, %d/%d clean of "
                "violations, mean completion %.1f s\n",
                full_pops, runs, clean, runs, total_sum / runs);
  else
    std::printf("summary: %d/%d runs clean of violations\n", clean, runs);
  return clean == runs ? 0 : 1;
}

int cmd_verify(const std::string& which) {
  hunt::StateGraph graph;
  if (which == "hunt")
    graph = hunt::BalloonMission::graph();
  else if (which == "chase")
    graph = hunt::ChaseMission::graph();
  else
    throw CLI::ValidationError("mission", "expected 'hunt' or 'chase'");

  const std::vector<hunt::GraphDefect> defects = hunt::verify(graph);
  bool errors = false;
  for (const hunt::GraphDefect& d : defects) {
    const bool error = d.severity == hunt::GraphDefect::Severity::error;
    errors = errors || error;
    std::printf("%s: %s\n", error ? "error" : "warning", d.message.c_str());
  }
  if (defects.empty())
    std::printf("state graph '%s' verifies clean (%zu states)\n",
                which.c_str(), graph.successors.size());
  return errors ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic mission simulator for the balloon-hunt and "
               "ball-chase tasks"};
  app.require_subcommand(1);

  std::string scenario_path, trace_path, metrics_path, seeds, which;
  std::uint64_t seed = 0;

  CLI::App* run = app.add_subcommand("run", "Run one scenario and print the "
                                            "metrics JSON");
  run->add_option("scenario", scenario_path, "Scenario JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  CLI::Option* seed_opt =
      run->add_option("--seed", seed, "Override the scenario's RNG seed");
  run->add_option("--trace", trace_path, "Write the per-tick CSV trace here");
  run->add_option("--metrics", metrics_path, "Write the metrics JSON here");

  CLI::App* sweep = app.add_subcommand("sweep", "Run a scenario across a "
                                                "range of seeds");
  sweep->add_option("scenario", scenario_path, "Scenario JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  sweep->add_option("--seeds", seeds, "Inclusive seed range, e.g. 1..20")
      ->required();

  CLI::App* verify = app.add_subcommand("verify-fsm", "Statically verify a "
                                                      "mission state graph");
  verify->add_option("mission", which, "Which graph: hunt or chase")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed())
      return cmd_run(scenario_path, seed, seed_opt->count() > 0, trace_path,
                     metrics_path);
    if (sweep->parsed()) return cmd_sweep(scenario_path, seeds);
    return cmd_verify(which);
  } catch (const CLI::ValidationError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
