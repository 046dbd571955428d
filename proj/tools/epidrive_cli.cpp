// epidrive command line: run scripted driving scenarios and export traces.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "epidrive/error.hpp"
#include "epidrive/export.hpp"
#include "epidrive/rule_file.hpp"
#include "epidrive/scenario.hpp"

namespace {

constexpr int kExitNondeterministic = 13;

struct RunOptions {
  std::string scenario;
  std::string out_csv;
  std::string out_plot;
  std::optional<double> dt;
  bool seed_check = false;
};

int run_command(const RunOptions& opt) {
  epidrive::ScenarioSpec spec = epidrive::load_scenario(opt.scenario);
  if (opt.dt) {
    spec.dt = *opt.dt;
    epidrive::validate(spec);
  }
  const epidrive::Simulator sim(spec.plant);
  const epidrive::Trace trace = epidrive::run(sim, spec);

  std::size_t no_fire = 0;
  for (const auto& s : trace.samples) no_fire += s.no_fire ? 1 : 0;
  fmt::print("scenario '{}': {} ticks, dt={} s\n", spec.name, trace.samples.size(), spec.dt);
  if (!trace.samples.empty()) {
    const auto& last = trace.samples.back();
    fmt::print("final t={:.3f} s  omega2={:.4f}  omega5={:.4f}  omega_arm={:.4f} rad/s  "
               "mode={}\n",
               last.time, last.omega_engine, last.omega_motor, last.omega_arm,
               epidrive::mode_name(last.mode));
  }
  fmt::print("no-fire ticks: {}\n", no_fire);

  if (!opt.out_csv.empty()) {
    epidrive::export_csv(trace, opt.out_csv);
    fmt::print("wrote {}\n", opt.out_csv);
  }
  if (!opt.out_plot.empty()) {
    epidrive::export_plot(trace, opt.out_plot);
    fmt::print("wrote {}\n", opt.out_plot);
  }
  if (opt.seed_check) {
    const epidrive::Trace again = epidrive::run(epidrive::Simulator(spec.plant), spec);
    const bool same = epidrive::format_csv(trace) == epidrive::format_csv(again);
    fmt::print("seed-check: {}\n", same ? "PASS (byte-identical traces)" : "FAIL");
    if (!same) return kExitNondeterministic;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid epicyclic drivetrain simulator with a fuzzy pedal controller"};
  app.require_subcommand(1);

  RunOptions run_opt;
  CLI::App* run = app.add_subcommand("run", "Simulate a scenario file");
  run->add_option("scenario", run_opt.scenario, "Scenario YAML file")->required();
  run->add_option("--out-csv", run_opt.out_csv, "Write the trace as CSV");
  run->add_option("--out-plot", run_opt.out_plot, "Write an SVG speed plot");
  run->add_option("--dt", run_opt.dt, "Override the tick length in seconds");
  run->add_flag("--seed-check", run_opt.seed_check,
                "Run twice and verify byte-identical traces");

  std::string dump_path;
  CLI::App* dump = app.add_subcommand("dump", "Print a scenario with every default filled in");
  dump->add_option("scenario", dump_path, "Scenario YAML file")->required();

  CLI::App* rules = app.add_subcommand("rules", "Print the shipped controller rule base");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return run_command(run_opt);
    if (*dump) {
      std::cout << epidrive::dump_scenario(epidrive::load_scenario(dump_path));
      return 0;
    }
    if (*rules) {
      std::cout << epidrive::shipped_rule_text();
      return 0;
    }
  } catch (const epidrive::Error& e) {
    fmt::print(stderr, "epidrive: {}: {}\n", epidrive::category_name(e.category()), e.what());
    return e.exit_code();
  } catch (const std::exception& e) {
    fmt::print(stderr, "epidrive: {}\n", e.what());
    return 1;
  }
  return 0;
}
