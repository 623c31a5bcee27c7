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

#include "brlab/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <boost/math/distributions/normal.hpp>
#include <fmt/core.h>

#include "brlab/dynamics.hpp"
#include "brlab/errors.hpp"
#include "brlab/random.hpp"

namespace brlab {
namespace {

bool needs_graph(Experiment e) {
  return e == Experiment::kBetterConvergence || e == Experiment::kTrapCensus ||
         e == Experiment::kCoexistence;
}

TrialRecord run_trial(const ExperimentConfig& cfg, std::uint64_t i) {
  TrialRecord rec;
  rec.seed = trial_seed(cfg.base_seed, static_cast<std::uint64_t>(cfg.K), i);
  Stream stream = make_stream(rec.seed);
  const Game g = generate_game(cfg.K, stream);
  const Profile start = cfg.start_profile();
  rec.n_pne = static_cast<int>(enumerate_pne(g).size());
  rec.start_is_pne = is_pne(g, start);

  switch (cfg.experiment) {
    case Experiment::kPneCensus:
      rec.success = rec.n_pne == 0;
      break;
    case Experiment::kBrdConvergence: {
      const auto [outcome, traj] = run_best_response(g, stream, start);
      rec.success = outcome.kind == OutcomeKind::kConverged;
      break;
    }
    case Experiment::kDeltaEvent:
      rec.success = delta_event_occurs(g, cfg.bound_params().sigma);
      break;
    case Experiment::kBetterConvergence:
    case Experiment::kTrapCensus:
    case Experiment::kCoexistence: {
      const ResponseIndex index(g);
      const auto sinks = fast_sink_decomposition(g, index, Process::kBetter, cfg.max_nodes);
      const auto traps = find_traps(g, sinks);
      rec.has_trap = !traps.empty();
      if (cfg.experiment == Experiment::kBetterConvergence) {
        const auto [outcome, traj] = run_better_response(g, index, stream, sinks, start);
        rec.success = outcome.kind == OutcomeKind::kConverged;
      } else if (cfg.experiment == Experiment::kTrapCensus) {
        rec.success = rec.has_trap;
        const double alpha = cfg.bound_params().alpha;
        for (const auto& t : traps) {
          rec.traps.push_back({t.size, t.R, t.C, classify_large_trap(t, alpha)});
        }
      } else {
        rec.success = rec.has_trap && rec.n_pne > 0;
      }
      break;
    }
  }
  return rec;
}

std::string format_double(double x) { return fmt::format("{}", x); }

nlohmann::json estimate_json(const Estimate& e) {
  return {{"p_hat", e.p_hat},         {"ci_low", e.ci_low},
          {"ci_high", e.ci_high},     {"trials", e.trials},
          {"successes", e.successes}, {"seed", e.seed},
          {"confidence", e.confidence}};
}

}  // namespace

std::string to_string(Experiment e) {
  switch (e) {
    case Experiment::kPneCensus: return "pne-census";
    case Experiment::kBrdConvergence: return "brd-convergence";
    case Experiment::kBetterConvergence: return "better-convergence";
    case Experiment::kTrapCensus: return "trap-census";
    case Experiment::kDeltaEvent: return "delta-event";
    case Experiment::kCoexistence: return "coexistence";
  }
  return "?";
}

Experiment experiment_from_string(const std::string& s) {
  for (Experiment e : {Experiment::kPneCensus, Experiment::kBrdConvergence,
                       Experiment::kBetterConvergence, Experiment::kTrapCensus,
                       Experiment::kDeltaEvent, Experiment::kCoexistence}) {
    if (to_string(e) == s) return e;
  }
  throw InvalidParameter("unknown experiment: " + s);
}

void ExperimentConfig::validate() const {
  if (K < 1) throw InvalidParameter(fmt::format("K must be >= 1, got {}", K));
  if (trials < 1) throw InvalidParameter("trials must be >= 1");
  if (parallelism < 1) throw InvalidParameter("parallelism must be >= 1");
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw InvalidParameter("confidence must lie in (0,1)");
  }
  if (params) params->validate();
  if (start && (start->s1 < 1 || start->s1 > K || start->s2 < 1 || start->s2 > K)) {
    throw InvalidParameter(fmt::format("start {} out of range for K={}", to_string(*start), K));
  }
  const auto nodes = static_cast<std::size_t>(K) * K;
  if (needs_graph(experiment) && nodes > max_nodes) {
    throw CapacityError(fmt::format(
        "{} at K={} needs a {}-node response graph (cap {})",
        to_string(experiment), K, nodes, max_nodes));
  }
}

double Estimate::band(double p, std::uint64_t n, double sigmas) {
  return sigmas * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

Estimate wilson_estimate(std::uint64_t successes, std::uint64_t trials,
                         double confidence, std::uint64_t seed) {
  if (trials == 0) throw InsufficientData("no trials");
  const boost::math::normal_distribution<double> normal;
  const double z = boost::math::quantile(normal, 1.0 - (1.0 - confidence) / 2.0);
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z / denom * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  Estimate e;
  e.p_hat = p;
  e.ci_low = std::clamp(std::min(center - half, p), 0.0, 1.0);
  e.ci_high = std::clamp(std::max(center + half, p), 0.0, 1.0);
  e.trials = trials;
  e.successes = successes;
  e.seed = seed;
  e.confidence = confidence;
  return e;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentReport report;
  report.config = cfg;
  report.trials.resize(cfg.trials);

  const int workers = static_cast<int>(
      std::min<std::uint64_t>(static_cast<std::uint64_t>(cfg.parallelism), cfg.trials));
  auto work = [&](int w) {
    for (std::uint64_t i = w; i < cfg.trials; i += workers) {
      report.trials[i] = run_trial(cfg, i);
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          work(w);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  std::uint64_t successes = 0, start_pne = 0, has_pne = 0, cond_hits = 0;
  double sum = 0.0, sum_sq = 0.0;
  for (const auto& rec : report.trials) {
    successes += rec.success;
    start_pne += rec.start_is_pne;
    ++report.pne_histogram[rec.n_pne];
    sum += rec.n_pne;
    sum_sq += static_cast<double>(rec.n_pne) * rec.n_pne;
    if (rec.n_pne > 0) {
      ++has_pne;
      if (cfg.experiment == Experiment::kBetterConvergence) cond_hits += rec.success;
      if (cfg.experiment == Experiment::kCoexistence) cond_hits += rec.has_trap;
    }
    for (const auto& t : rec.traps) ++report.trap_classes[to_string(t.cls)];
  }
  const double n = static_cast<double>(cfg.trials);
  report.mean_pne = sum / n;
  report.std_pne = cfg.trials > 1
                       ? std::sqrt(std::max(0.0, (sum_sq - sum * sum / n) / (n - 1.0)))
                       : 0.0;
  report.estimate = wilson_estimate(successes, cfg.trials, cfg.confidence, cfg.base_seed);
  report.start_is_pne = wilson_estimate(start_pne, cfg.trials, cfg.confidence, cfg.base_seed);
  if ((cfg.experiment == Experiment::kBetterConvergence ||
       cfg.experiment == Experiment::kCoexistence) &&
      has_pne > 0) {
    report.conditional = wilson_estimate(cond_hits, has_pne, cfg.confidence, cfg.base_seed);
  }
  return report;
}

Estimate conditional_rate(const ExperimentReport& report, Conditioning cond) {
  if (report.config.experiment != Experiment::kBetterConvergence) {
    throw InvalidParameter("conditional_rate needs a better-convergence experiment");
  }
  std::uint64_t events = 0, hits = 0;
  for (const auto& rec : report.trials) {
    const bool in = cond == Conditioning::kHasPne ? rec.n_pne > 0 : rec.n_pne == 0;
    if (!in) continue;
    ++events;
    hits += rec.success;
  }
  if (events == 0) {
    throw InsufficientData("no trial satisfied the conditioning event");
  }
  return wilson_estimate(hits, events, report.config.confidence, report.config.base_seed);
}

Estimate conditional_rate(const ExperimentConfig& cfg, Conditioning cond) {
  return conditional_rate(run_experiment(cfg), cond);
}

ReportFormat report_format_from_string(const std::string& s) {
  if (s == "csv") return ReportFormat::kCsv;
  if (s == "json") return ReportFormat::kJson;
  throw InvalidParameter("format must be csv or json, got " + s);
}

nlohmann::json ExperimentReport::to_json() const {
  nlohmann::json hist = nlohmann::json::object();
  for (const auto& [k, count] : pne_histogram) hist[std::to_string(k)] = count;
  nlohmann::json j = {
      {"experiment", to_string(config.experiment)},
      {"K", config.K},
      {"trials", config.trials},
      {"seed", config.base_seed},
      {"start", {config.start_profile().s1, config.start_profile().s2}},
      {"estimate", estimate_json(estimate)},
      {"pne_histogram", hist},
      {"mean_pne", mean_pne},
      {"std_pne", std_pne},
      {"start_is_pne", estimate_json(start_is_pne)},
  };
  if (conditional) j["conditional"] = estimate_json(*conditional);
  if (config.experiment == Experiment::kTrapCensus) {
    nlohmann::json classes = nlohmann::json::object();
    for (const auto& [name, count] : trap_classes) classes[name] = count;
    j["trap_classes"] = classes;
  }
  return j;
}

std::string format_report(const ExperimentReport& report, ReportFormat format) {
  if (format == ReportFormat::kJson) return report.to_json().dump(2) + "\n";
  const Estimate& e = report.estimate;
  return fmt::format("{}\n{},{},{},{},{},{},{}\n", kCsvHeader,
                     to_string(report.config.experiment), report.config.K,
                     report.config.trials, report.config.base_seed,
                     format_double(e.p_hat), format_double(e.ci_low),
                     format_double(e.ci_high));
}

void emit_report(const ExperimentReport& report, ReportFormat format,
                 const std::string& path) {
  const std::string text = format_report(report, format);
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << text;
  out.flush();
  if (!out) throw std::runtime_error("failed writing " + path);
}

void write_trap_census_jsonl(std::ostream& out, const ExperimentReport& report) {
  for (const auto& rec : report.trials) {
    nlohmann::json traps = nlohmann::json::array();
    for (const auto& t : rec.traps) {
      traps.push_back({{"size", t.size}, {"R", t.R}, {"C", t.C}, {"class", to_string(t.cls)}});
    }
    nlohmann::json line = {{"seed", rec.seed},
                           {"K", report.config.K},
                           {"n_pne", rec.n_pne},
                           {"traps", traps}};
    out << line.dump() << '\n';
  }
}

}  // namespace brlab
