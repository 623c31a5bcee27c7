// Copyright 2026 The brlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// brlab: command-line front end.
//
// Exit codes: 0 success, 1 check failure, 2 usage error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "brlab/bounds.hpp"
#include "brlab/dynamics.hpp"
#include "brlab/errors.hpp"
#include "brlab/exact_oracle.hpp"
#include "brlab/harness.hpp"
#include "brlab/random.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kUsage = 2;

struct Globals {
  int K = 10;
  std::uint64_t trials = 1000;
  std::uint64_t seed = 0;
  int parallelism = 1;
  std::string format = "csv";
  std::string out = "-";
  std::string start;
  double alpha = 0.5;
  double beta = 0.2;
  double sigma = 0.5;
};

brlab::Profile parse_start(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) {
    throw brlab::InvalidParameter("--start expects \"s1,s2\", got \"" + s + "\"");
  }
  try {
    std::size_t a = 0, b = 0;
    const int s1 = std::stoi(s.substr(0, comma), &a);
    const int s2 = std::stoi(s.substr(comma + 1), &b);
    if (a != comma || b != s.size() - comma - 1) throw std::invalid_argument(s);
    return {s1, s2};
  } catch (const std::logic_error&) {
    throw brlab::InvalidParameter("--start expects \"s1,s2\", got \"" + s + "\"");
  }
}

brlab::ExperimentConfig make_config(const Globals& g, brlab::Experiment e) {
  brlab::ExperimentConfig cfg;
  cfg.experiment = e;
  cfg.K = g.K;
  cfg.trials = g.trials;
  cfg.base_seed = g.seed;
  cfg.parallelism = g.parallelism;
  brlab::BoundParams params;
  params.alpha = g.alpha;
  params.beta = g.beta;
  params.sigma = g.sigma;
  params.validate();
  cfg.params = params;
  if (!g.start.empty()) cfg.start = parse_start(g.start);
  cfg.validate();
  return cfg;
}

// Writes `text` to `path`, "-" meaning stdout.
void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << text;
  if (!out) throw std::runtime_error("failed writing " + path);
}

int run_report(const Globals& g, brlab::Experiment e) {
  const auto cfg = make_config(g, e);
  const auto fmt = brlab::report_format_from_string(g.format);
  brlab::emit_report(brlab::run_experiment(cfg), fmt, g.out);
  return kOk;
}

int run_trap_census(const Globals& g) {
  const auto cfg = make_config(g, brlab::Experiment::kTrapCensus);
  std::ostringstream text;
  brlab::write_trap_census_jsonl(text, brlab::run_experiment(cfg));
  write_text(g.out, text.str());
  return kOk;
}

int run_exact(const Globals& g) {
  const auto summary = brlab::exact_summary(g.K, g.parallelism);
  write_text(g.out, brlab::to_json(summary).dump(2) + "\n");
  return kOk;
}

int run_verify(const Globals& g, const std::string& which, int K_max, bool diagnostics) {
  const auto report = brlab::verify_bounds(which, K_max, g.alpha, g.beta, diagnostics);
  write_text(g.out, report.to_json().dump(2) + "\n");
  return report.violations == 0 ? kOk : kCheckFailed;
}

int run_trajectory(const Globals& g, const std::string& process, const std::string& game_path,
                   std::size_t cap) {
  brlab::Stream stream = brlab::make_stream(g.seed);
  std::optional<brlab::Game> game;
  if (!game_path.empty()) {
    std::ifstream in(game_path);
    if (!in) throw brlab::InvalidParameter("cannot read game file " + game_path);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw brlab::InvalidParameter(game_path + ": " + e.what());
    }
    game = brlab::game_from_json(j);
  } else {
    game = brlab::generate_game(g.K, stream);
  }
  const brlab::Profile start = g.start.empty() ? brlab::Profile{1, 1} : parse_start(g.start);
  brlab::check_profile(*game, start);
  brlab::RunOptions opts;
  if (cap > 0) opts.trajectory_cap = cap;
  const brlab::Process kind = brlab::process_from_string(process);
  std::ostringstream text;
  if (kind == brlab::Process::kBest) {
    brlab::write_trajectory_csv(text, brlab::run_best_response(*game, stream, start, opts).second);
  } else {
    const auto sinks = brlab::fast_sink_decomposition(*game, brlab::Process::kBetter);
    brlab::write_trajectory_csv(
        text, brlab::run_better_response(*game, stream, sinks, start, opts).second);
  }
  write_text(g.out, text.str());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Best-response dynamics in random ordinal games"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--K", g.K, "Strategies per player");
  app.add_option("--trials", g.trials, "Monte Carlo trials");
  app.add_option("--seed", g.seed, "Base seed");
  app.add_option("--parallelism", g.parallelism, "Worker threads");
  app.add_option("--format", g.format, "Report format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", g.out, "Output path, - for stdout");
  app.add_option("--start", g.start, "Start profile \"s1,s2\"");
  app.add_option("--alpha", g.alpha, "Trap-class exponent");
  app.add_option("--beta", g.beta, "Exponent of the kais2 right-hand side");
  app.add_option("--sigma", g.sigma, "Top-set exponent for the Delta event");

  std::string experiment = "pne-census";
  auto* simulate = app.add_subcommand("simulate", "Run any experiment and emit its report");
  simulate->add_option("--experiment", experiment, "Experiment name")
      ->check(CLI::IsMember({"pne-census", "brd-convergence", "better-convergence",
                             "trap-census", "delta-event", "coexistence"}));
  auto* pne = app.add_subcommand("pne-census", "Count pure Nash equilibria");
  auto* traps = app.add_subcommand("trap-census", "Per-game trap census as JSON lines");
  auto* delta = app.add_subcommand("delta-event", "Rate of the top-set coincidence event");
  auto* coexist = app.add_subcommand("coexistence", "Rate of traps alongside a PNE");
  auto* exact = app.add_subcommand("exact", "Exhaustive ordinal-class summary for K = 2 or 3");

  std::string which;
  int K_max = 0;
  bool diagnostics = false;
  auto* verify = app.add_subcommand("verify-bounds", "Check an inequality over a grid");
  verify->add_option("--which", which, "Inequality family")
      ->required()
      ->check(CLI::IsMember({"comb", "cocomb", "prodratio", "kais1", "kais2", "stirling", "riemann"}));
  verify->add_option("--K-max", K_max, "Largest K on the grid")->required();
  verify->add_flag("--diagnostics", diagnostics, "Include per-point diagnostics");

  std::string process = "best";
  std::string game_path;
  std::size_t cap = 0;
  auto* trajectory = app.add_subcommand("trajectory", "Record one run as CSV");
  trajectory->add_option("--process", process, "best or better")
      ->check(CLI::IsMember({"best", "better"}));
  trajectory->add_option("--game", game_path, "Replay a game from JSON {K, p1, p2}");
  trajectory->add_option("--cap", cap, "Maximum recorded profiles");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*simulate) return run_report(g, brlab::experiment_from_string(experiment));
    if (*pne) return run_report(g, brlab::Experiment::kPneCensus);
    if (*traps) return run_trap_census(g);
    if (*delta) return run_report(g, brlab::Experiment::kDeltaEvent);
    if (*coexist) return run_report(g, brlab::Experiment::kCoexistence);
    if (*exact) return run_exact(g);
    if (*verify) return run_verify(g, which, K_max, diagnostics);
    if (*trajectory) return run_trajectory(g, process, game_path, cap);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const brlab::CapacityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kCheckFailed;
  }
  return kUsage;
}
