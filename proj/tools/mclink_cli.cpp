// SPDX-License-Identifier: Apache-2.0
//
// mclink: batch front-end for the molecular-communication link model.
//
//   mclink ber-curve        --config spec.json [overrides]
//   mclink optimize         --config spec.json [overrides]
//   mclink unknown-location --config spec.json [overrides]
//   mclink isi              --config spec.json [overrides]
//   mclink particle         --config spec.json [overrides]
//   mclink preset <figN>    [overrides]
//
// Overrides: --out PATH, --format {csv,json}, --seed U64, --trials N,
//            --grid N, --algorithm {alg1,alg2,grid,all}.
// Exit codes: 0 success, 2 configuration error, 3 numeric failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include <mclink/mclink.hpp>

namespace {

using namespace mclink;

struct Overrides {
  std::string config;
  std::string out;
  std::string format;
  std::string algorithm;
  std::uint64_t seed = 0;
  long long trials = -1;
  int grid = 0;
  bool seed_set = false, trials_set = false, grid_set = false;

  void apply(SweepSpec& s) const {
    if (!out.empty()) s.out = out;
    if (!format.empty()) s.format = format;
    if (!algorithm.empty()) s.algorithms = {algorithm};
    if (seed_set) s.seed = seed;
    if (trials_set) s.trials = trials;
    if (grid_set) s.grid_points = grid;
  }
};

void add_override_flags(CLI::App* cmd, Overrides& ov) {
  cmd->add_option("--out", ov.out, "Output path (default: stdout)");
  cmd->add_option("--format", ov.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--seed", ov.seed, "Master seed for stochastic columns")
      ->each([&ov](const std::string&) { ov.seed_set = true; });
  cmd->add_option("--trials", ov.trials, "Monte Carlo trials per cell")
      ->each([&ov](const std::string&) { ov.trials_set = true; });
  cmd->add_option("--grid", ov.grid, "Grid-oracle resolution")
      ->each([&ov](const std::string&) { ov.grid_set = true; });
  cmd->add_option("--algorithm", ov.algorithm, "Optimizer selection")
      ->check(CLI::IsMember({"alg1", "alg2", "grid", "all"}));
}

SweepSpec load_spec(const std::string& path) {
  if (path.empty())
    throw ConfigError("config: --config PATH is required for this subcommand");
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open \"" + path + "\"");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config: \"" + path + "\" is not valid JSON: " + e.what());
  }
  return j.get<SweepSpec>();
}

void emit(const Table& table, const SweepSpec& spec) {
  std::ofstream file;
  std::ostream* os = &std::cout;
  if (!spec.out.empty()) {
    file.open(spec.out);
    if (!file)
      throw ConfigError("out: cannot open \"" + spec.out + "\" for writing");
    os = &file;
  }
  if (spec.format == "json") {
    json j = table;
    *os << j.dump(2) << "\n";
  } else {
    write_csv(*os, table);
  }
  os->flush();
  if (!*os) throw NumericError("out: write failed");
}

void run_op(SweepOp op, const Overrides& ov) {
  SweepSpec spec = load_spec(ov.config);
  ov.apply(spec);
  Preset p;
  p.op = op;
  p.spec = std::move(spec);
  emit(run(p), p.spec);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Molecular-communication link model: BER curves, detection-"
               "interval optimization, and validation sweeps"};
  app.require_subcommand(1);

  Overrides ov;
  std::string preset_name;

  struct Sub {
    const char* name;
    const char* help;
    SweepOp op;
  };
  const Sub subs[] = {
      {"ber-curve", "BER vs T_r/T_b at fixed geometry", SweepOp::ber_curve},
      {"optimize", "Optimal detection interval vs d_I/d", SweepOp::optimize},
      {"unknown-location", "Optimal detection interval vs location bound a",
       SweepOp::unknown_location},
      {"isi", "Monte Carlo ISI sweep over T_b", SweepOp::isi},
      {"particle", "Brownian particle validation of hit probabilities",
       SweepOp::particle},
  };
  for (const Sub& sub : subs) {
    CLI::App* cmd = app.add_subcommand(sub.name, sub.help);
    cmd->add_option("--config", ov.config, "SweepSpec JSON document")
        ->check(CLI::ExistingFile);
    add_override_flags(cmd, ov);
  }
  CLI::App* pre = app.add_subcommand("preset", "Run a named figure recipe");
  pre->add_option("name", preset_name,
                  "fig2|fig3|fig4|fig5|fig6|fig7|fig8|fig10|fig11")
      ->required();
  add_override_flags(pre, ov);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;  // malformed invocation is a configuration error
  }

  try {
    if (pre->parsed()) {
      Preset p = preset(preset_name);
      ov.apply(p.spec);
      emit(run(p), p.spec);
      return 0;
    }
    for (const Sub& sub : subs)
      if (app.get_subcommand(sub.name)->parsed()) {
        run_op(sub.op, ov);
        return 0;
      }
    std::cerr << "error: no subcommand selected\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 3;
  }
}
