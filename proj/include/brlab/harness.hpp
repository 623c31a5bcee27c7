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

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "brlab/bounds.hpp"
#include "brlab/game.hpp"
#include "brlab/response_graph.hpp"
#include "json.hpp"

namespace brlab {

enum class Experiment {
  kPneCensus,
  kBrdConvergence,     // best response
  kBetterConvergence,  // better response
  kTrapCensus,
  kDeltaEvent,
  kCoexistence,
};

std::string to_string(Experiment e);
Experiment experiment_from_string(const std::string& s);

struct ExperimentConfig {
  Experiment experiment = Experiment::kPneCensus;
  int K = 2;
  std::uint64_t trials = 1000;
  std::uint64_t base_seed = 0;
  int parallelism = 1;
  std::optional<BoundParams> params;  // alpha for trap classes, sigma for delta
  std::optional<Profile> start;       // default (1,1)
  double confidence = 0.95;
  std::size_t max_nodes = kDefaultMaxNodes;

  void validate() const;
  BoundParams bound_params() const { return params.value_or(BoundParams{}); }
  Profile start_profile() const { return start.value_or(Profile{1, 1}); }
};

struct Estimate {
  double p_hat = 0.0;
  double ci_low = 0.0;
  double ci_high = 1.0;
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
  std::uint64_t seed = 0;
  double confidence = 0.95;

  // Half-width of the +-`sigmas` normal band at probability p.
  static double band(double p, std::uint64_t n, double sigmas);
};

// Wilson score interval.
Estimate wilson_estimate(std::uint64_t successes, std::uint64_t trials,
                         double confidence, std::uint64_t seed);

struct TrapSummary {
  int size = 0;
  std::vector<int> R;
  std::vector<int> C;
  TrapClass cls = TrapClass::kSmall;
};

// What one trial measured. Fields not used by the experiment keep defaults.
struct TrialRecord {
  std::uint64_t seed = 0;  // seed of the trial's stream
  int n_pne = 0;
  bool start_is_pne = false;
  bool success = false;  // the experiment's indicator
  bool has_trap = false;
  std::vector<TrapSummary> traps;
};

struct ExperimentReport {
  ExperimentConfig config;
  Estimate estimate;
  std::map<int, std::uint64_t> pne_histogram;
  double mean_pne = 0.0;
  double std_pne = 0.0;
  Estimate start_is_pne;
  // better-convergence: P(converge | PNE exists); coexistence:
  // P(trap | PNE exists).
  std::optional<Estimate> conditional;
  std::map<std::string, std::uint64_t> trap_classes;
  std::vector<TrialRecord> trials;

  nlohmann::json to_json() const;
};

// Trial i draws a game, and then any dynamics, from the stream seeded with
// trial_seed(base_seed, K, i); output is independent of parallelism.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

enum class Conditioning { kHasPne, kNoPne };

// P(better response converges | conditioning event). Throws
// InsufficientData when no trial satisfies the condition.
Estimate conditional_rate(const ExperimentReport& report,
                          Conditioning cond = Conditioning::kHasPne);
Estimate conditional_rate(const ExperimentConfig& cfg,
                          Conditioning cond = Conditioning::kHasPne);

enum class ReportFormat { kCsv, kJson };
ReportFormat report_format_from_string(const std::string& s);

inline constexpr const char* kCsvHeader = "experiment,K,trials,seed,p_hat,ci_low,ci_high";

std::string format_report(const ExperimentReport& report, ReportFormat format);

// Writes to `path`, or stdout for "-". I/O errors name the path.
void emit_report(const ExperimentReport& report, ReportFormat format,
                 const std::string& path);

// One JSON object per trial: seed, K, n_pne, traps.
void write_trap_census_jsonl(std::ostream& out, const ExperimentReport& report);

}  // namespace brlab
