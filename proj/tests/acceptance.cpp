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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Pass a list of criterion numbers to run a subset.

#include <fmt/core.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "brlab/bounds.hpp"
#include "brlab/dynamics.hpp"
#include "brlab/exact_oracle.hpp"
#include "brlab/harness.hpp"
#include "support.hpp"

namespace brlab {
namespace {

struct Verdict {
  bool pass = true;
  std::vector<std::string> notes;

  void expect(bool ok, std::string note) {
    pass = pass && ok;
    notes.push_back((ok ? "" : "!! ") + std::move(note));
  }
};

int workers() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

ExperimentReport run(Experiment e, int K, std::uint64_t N, std::uint64_t seed,
                     std::optional<BoundParams> params = std::nullopt) {
  ExperimentConfig cfg;
  cfg.experiment = e;
  cfg.K = K;
  cfg.trials = N;
  cfg.base_seed = seed;
  cfg.parallelism = workers();
  cfg.params = params;
  return run_experiment(cfg);
}

// |p_hat - p| within k standard errors of p at N trials.
bool within_sigmas(double p_hat, double p, std::uint64_t N, double k) {
  return std::abs(p_hat - p) <= Estimate::band(p, N, k) + 1e-12;
}

Verdict exact_regression() {
  Verdict v;
  const ExactSummary two = exact_summary(2, workers());
  v.expect(two.pne_pmf == std::map<int, Rational>{{0, Rational(1, 8)},
                                                  {1, Rational(3, 4)},
                                                  {2, Rational(1, 8)}},
           "K=2 pne_pmf " + to_json(two).at("pne_pmf").dump());
  v.expect(two.p_trap == Rational(1, 8), "K=2 p_trap " + to_string(two.p_trap));
  v.expect(two.p_converge_brd == Rational(7, 8), "K=2 better " + to_string(two.p_converge_brd));
  v.expect(two.p_converge_BRD == Rational(7, 8), "K=2 best " + to_string(two.p_converge_BRD));
  const ExactSummary three = exact_summary(3, workers());
  v.expect(three.mean_pne() == 1, "K=3 mean PNE " + to_string(three.mean_pne()));
  return v;
}

Verdict oracle_agreement() {
  Verdict v;
  const std::uint64_t N = 50000;
  for (int K : {2, 3}) {
    const ExactSummary e = exact_summary(K, workers());
    const auto census = run(Experiment::kPneCensus, K, N, 201);
    for (const auto& [n, p] : e.pne_pmf) {
      const auto it = census.pne_histogram.find(n);
      const double hat = it == census.pne_histogram.end() ? 0.0 : double(it->second) / N;
      v.expect(within_sigmas(hat, p.convert_to<double>(), N, 3),
               fmt::format("K={} P(#PNE={}) {:.4f} vs {}", K, n, hat, to_string(p)));
    }
    struct Target {
      Experiment e;
      Rational truth;
    };
    for (const Target& t : {Target{Experiment::kTrapCensus, e.p_trap},
                            Target{Experiment::kBrdConvergence, e.p_converge_BRD},
                            Target{Experiment::kBetterConvergence, e.p_converge_brd}}) {
      const auto r = run(t.e, K, N, 202);
      v.expect(within_sigmas(r.estimate.p_hat, t.truth.convert_to<double>(), N, 3),
               fmt::format("K={} {} {:.4f} vs {}", K, to_string(t.e), r.estimate.p_hat,
                           to_string(t.truth)));
    }
  }
  return v;
}

Verdict mean_pne_identity() {
  Verdict v;
  const std::uint64_t N = 100000;
  for (int K : {5, 30}) {
    const auto r = run(Experiment::kPneCensus, K, N, 301);
    v.expect(std::abs(r.mean_pne - 1.0) <= 3 * r.std_pne / std::sqrt(double(N)),
             fmt::format("K={} mean #PNE {:.4f} (sd {:.4f})", K, r.mean_pne, r.std_pne));
    const double p = 1.0 / (K * K);
    v.expect(within_sigmas(r.start_is_pne.p_hat, p, N, 3),
             fmt::format("K={} P((1,1) PNE) {:.5f} vs {:.5f}", K, r.start_is_pne.p_hat, p));
  }
  return v;
}

Verdict poisson_limit() {
  Verdict v;
  const auto r = run(Experiment::kPneCensus, 30, 100000, 401);
  v.expect(std::abs(r.estimate.p_hat - std::exp(-1.0)) <= 0.02,
           fmt::format("K=30 P(#PNE=0) {:.4f} vs e^-1 {:.4f}", r.estimate.p_hat, std::exp(-1.0)));
  return v;
}

Verdict better_response_convergence() {
  Verdict v;
  const auto r = run(Experiment::kBetterConvergence, 100, 5000, 501);
  const double target = 1.0 - std::exp(-1.0);
  v.expect(std::abs(r.estimate.p_hat - target) <= 0.03,
           fmt::format("K=100 P(converge) {:.4f} vs {:.4f}", r.estimate.p_hat, target));
  const Estimate c = conditional_rate(r);
  v.expect(c.p_hat >= 0.9 && c.ci_low > 0.8,
           fmt::format("K=100 P(converge | PNE) {:.4f} CI [{:.4f}, {:.4f}] n={}", c.p_hat,
                       c.ci_low, c.ci_high, c.trials));
  return v;
}

Verdict best_response_decay() {
  Verdict v;
  std::map<int, Estimate> est;
  for (int K : {25, 100, 400}) {
    est[K] = run(Experiment::kBrdConvergence, K, 10000, 601).estimate;
    v.expect(est[K].p_hat <= brd_upper_bound(K),
             fmt::format("K={} P(converge) {:.4f} <= {:.4f}", K, est[K].p_hat,
                         brd_upper_bound(K)));
  }
  v.expect(est[400].p_hat < est[25].p_hat && est[400].ci_high < est[25].ci_low,
           fmt::format("CI K=400 [{:.4f}, {:.4f}] below K=25 [{:.4f}, {:.4f}]", est[400].ci_low,
                       est[400].ci_high, est[25].ci_low, est[25].ci_high));
  return v;
}

Verdict formula_evaluator() {
  Verdict v;
  v.expect(brd_convergence_formula_exact(2) == Rational(3, 4),
           "formula(2) " + to_string(brd_convergence_formula_exact(2)));
  v.expect(brd_convergence_formula_exact(3) == Rational(53, 81),
           "formula(3) " + to_string(brd_convergence_formula_exact(3)));
  int worst = 0;
  for (int K = 2; K <= 10000; ++K) {
    if (brd_convergence_formula(K) > brd_upper_bound(K)) worst = K;
  }
  v.expect(worst == 0, worst == 0 ? "formula <= bound on [2, 10^4]"
                                  : fmt::format("formula > bound at K={}", worst));
  for (int K : {2, 10, 1000}) {
    const RiemannChain c = riemann_chain(K);
    v.expect(c.holds(), fmt::format("K={} chain {:.4f} <= {:.4f} <= {:.4f}", K, c.product_sum,
                                    c.gaussian_sum, c.sqrt_bound));
  }
  return v;
}

Verdict combinatorial_brute_force() {
  Verdict v;
  CombinatorialTally all;
  for (int K = 1; K <= 5; ++K) {
    const auto t = exhaustive_combinatorial_checks(K);
    all.comb_checked += t.comb_checked;
    all.comb_violations += t.comb_violations;
    all.cocomb_checked += t.cocomb_checked;
    all.cocomb_violations += t.cocomb_violations;
    all.prodratio_checked += t.prodratio_checked;
    all.prodratio_violations += t.prodratio_violations;
  }
  v.expect(all.comb_violations + all.cocomb_violations + all.prodratio_violations == 0,
           fmt::format("K<=5 comb {}/{} cocomb {}/{} prodratio {}/{} (violations/checked)",
                       all.comb_violations, all.comb_checked, all.cocomb_violations,
                       all.cocomb_checked, all.prodratio_violations, all.prodratio_checked));
  const auto r = random_combinatorial_checks(6, 100000, 801);
  v.expect(r.comb_violations + r.cocomb_violations + r.prodratio_violations == 0,
           fmt::format("K=6 random comb {}/{} cocomb {}/{} prodratio {}/{}", r.comb_violations,
                       r.comb_checked, r.cocomb_violations, r.cocomb_checked,
                       r.prodratio_violations, r.prodratio_checked));
  return v;
}

Verdict trap_structure() {
  Verdict v;
  int games_with_traps = 0, traps_seen = 0, bad_size = 0, bad_closure = 0, bad_neighbor = 0,
      bad_singletons = 0;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    Stream s = trial_stream(901, 15, i);
    const Game g = generate_game(15, s);
    const auto pne = enumerate_pne(g);
    const auto sinks = sink_decomposition(build_graph(g, Process::kBetter));
    const auto traps = find_traps(g, sinks);
    games_with_traps += !traps.empty();
    for (const auto& t : traps) {
      ++traps_seen;
      bad_size += t.size < 4;
      bad_closure += !testing::oracle_is_closed_and_connected(g, t.profiles);
      bad_neighbor += testing::oracle_neighbors_pne(t.profiles, pne);
    }
    int singletons = 0;
    for (int c : sinks.sink_components()) singletons += sinks.component_size[c] == 1;
    bad_singletons += singletons != static_cast<int>(pne.size());
  }
  v.expect(bad_size == 0 && bad_closure == 0 && bad_neighbor == 0,
           fmt::format("{} traps in {} games: size<4 {}, not closed/connected {}, PNE neighbor {}",
                       traps_seen, games_with_traps, bad_size, bad_closure, bad_neighbor));
  v.expect(bad_singletons == 0, fmt::format("singleton sinks != #PNE on {} games", bad_singletons));
  return v;
}

Verdict coexistence_rarity() {
  Verdict v;
  const auto r = run(Experiment::kCoexistence, 20, 5000, 1001);
  v.expect(r.estimate.p_hat <= 0.05,
           fmt::format("K=20 P(trap and PNE) {:.4f} CI [{:.4f}, {:.4f}]", r.estimate.p_hat,
                       r.estimate.ci_low, r.estimate.ci_high));
  return v;
}

// Fraction of the 24 player-2 rank matrices at K = 2 in which one row beats
// the other in both columns.
double two_by_two_delta_rate() {
  std::array<int, 4> z = {1, 2, 3, 4};
  int hits = 0, total = 0;
  do {
    ++total;
    const bool top_beats = z[0] > z[2] && z[1] > z[3];
    const bool bottom_beats = z[2] > z[0] && z[3] > z[1];
    hits += top_beats || bottom_beats;
  } while (std::next_permutation(z.begin(), z.end()));
  return double(hits) / total;
}

Verdict lemma_consistency() {
  Verdict v;
  BoundParams p;
  p.sigma = 0.8;
  const auto big = run(Experiment::kDeltaEvent, 100, 10000, 1101, p);
  v.expect(big.estimate.successes == 0,
           fmt::format("K=100 sigma=0.8: {} events in 10000 (bound {:.3g})",
                       big.estimate.successes, lemma1_bound(100, 0.8)));
  p.sigma = 0.5;  // ceil(2^0.5) = 2 = K
  const double exact = two_by_two_delta_rate();
  const auto small = run(Experiment::kDeltaEvent, 2, 10000, 1102, p);
  v.expect(within_sigmas(small.estimate.p_hat, exact, 10000, 3),
           fmt::format("K=2 u=2 rate {:.4f} vs {:.4f}", small.estimate.p_hat, exact));
  return v;
}

Verdict appendix_numerics() {
  Verdict v;
  double prev = std::numeric_limits<double>::infinity();
  std::string trail;
  bool nonincreasing = true;
  for (int K : {100, 200, 400, 800}) {
    const double r = kais1_ratio(K, 0.5);
    nonincreasing = nonincreasing && std::isfinite(r) && r <= prev;
    trail += fmt::format(" {}:{:.4g}", K, r);
    prev = r;
  }
  v.expect(nonincreasing, "kais1 ratio" + trail);
  prev = std::numeric_limits<double>::infinity();
  trail.clear();
  bool decreasing = true;
  for (int K : {100, 200, 300, 400}) {
    const double gap = kais2_gap(K, 0.5, 0.2);
    decreasing = decreasing && std::isfinite(gap) && gap < prev;
    trail += fmt::format(" {}:{:.4g}", K, gap);
    prev = gap;
  }
  v.expect(decreasing, "kais2 gap decreasing" + trail);
  v.expect(prev < 0.0, fmt::format("kais2 gap at K=400 {:.4g} < 0", prev));
  int bad = 0;
  for (int n = 1; n <= 170; ++n) bad += !stirling_bounds_check(n);
  v.expect(bad == 0, fmt::format("Stirling bounds fail at {} of 170 n", bad));
  return v;
}

Verdict determinism_and_invariance() {
  Verdict v;
  int mismatched = 0;
  for (Experiment e : {Experiment::kPneCensus, Experiment::kBrdConvergence,
                       Experiment::kBetterConvergence, Experiment::kTrapCensus,
                       Experiment::kDeltaEvent, Experiment::kCoexistence}) {
    ExperimentConfig cfg;
    cfg.experiment = e;
    cfg.K = 12;
    cfg.trials = 2000;
    cfg.base_seed = 1301;
    cfg.parallelism = 1;
    const auto one = run_experiment(cfg);
    cfg.parallelism = 8;
    const auto eight = run_experiment(cfg);
    for (ReportFormat f : {ReportFormat::kCsv, ReportFormat::kJson}) {
      mismatched += format_report(one, f) != format_report(eight, f);
    }
  }
  v.expect(mismatched == 0, fmt::format("{} report mismatches between 1 and 8 workers", mismatched));

  int variant = 0;
  for (std::uint64_t i = 0; i < 100; ++i) {
    Stream s = trial_stream(1302, 6, i);
    const Game g = generate_game(6, s);
    const Game h = testing::monotone_transform(g, 1.3 + 0.01 * i, 5.0);
    bool same = enumerate_pne(g) == enumerate_pne(h) &&
                sink_decomposition(build_graph(g, Process::kBetter)).membership ==
                    sink_decomposition(build_graph(h, Process::kBetter)).membership;
    for (int x = 0; x < g.num_profiles() && same; ++x) {
      for (Player p : {Player::kOne, Player::kTwo}) {
        same = same && better_responses(g, g.profile(x), p) == better_responses(h, h.profile(x), p);
      }
    }
    Stream a = make_stream(i), b = make_stream(i);
    same = same && run_best_response(g, a).second.steps == run_best_response(h, b).second.steps;
    variant += !same;
  }
  v.expect(variant == 0, fmt::format("{} of 100 games change under a monotone transform", variant));

  int disagree = 0;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    Stream s = trial_stream(1303, 10, i);
    const Game g = generate_game(10, s);
    const auto [out, traj] = run_best_response(g, s);
    bool graph_converges = out.kind == OutcomeKind::kConverged;
    if (traj.steps.size() >= 2) {
      // Continue the alternating walk on the best-response graph.
      const ResponseGraph graph = build_graph(g, Process::kBest);
      const SinkDecomposition sinks = sink_decomposition(graph);
      Profile p = traj.steps[1];
      Player mover = traj.movers[0];
      std::set<Profile> seen;
      while (seen.insert(p).second && !is_pne(g, p)) {
        mover = other(mover);
        p = *best_response(g, p, mover);
      }
      const int comp = sinks.membership[g.index(p)];
      graph_converges = sinks.sink[comp] && sinks.component_size[comp] == 1;
    }
    disagree += graph_converges != (out.kind == OutcomeKind::kConverged);
  }
  v.expect(disagree == 0, fmt::format("revisit vs graph classification differ on {} of 1000", disagree));
  return v;
}

struct Criterion {
  int id;
  const char* name;
  std::function<Verdict()> check;
};

}  // namespace
}  // namespace brlab

int main(int argc, char** argv) {
  using namespace brlab;
  const std::vector<Criterion> criteria = {
      {1, "exact oracle regression", exact_regression},
      {2, "oracle and Monte Carlo agree at K = 2, 3", oracle_agreement},
      {3, "mean PNE count is 1", mean_pne_identity},
      {4, "Poisson limit of P(no PNE)", poisson_limit},
      {5, "better-response convergence at K = 100", better_response_convergence},
      {6, "best-response convergence decays", best_response_decay},
      {7, "convergence formula evaluator", formula_evaluator},
      {8, "combinatorial propositions brute force", combinatorial_brute_force},
      {9, "trap structure at K = 15", trap_structure},
      {10, "trap and PNE coexistence is rare", coexistence_rarity},
      {11, "top-set event consistency", lemma_consistency},
      {12, "appendix numerics", appendix_numerics},
      {13, "determinism and invariance", determinism_and_invariance},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  int failed = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.check();
    } catch (const std::exception& e) {
      v.expect(false, std::string("exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failed += !v.pass;
    fmt::print("{} criterion {:>2}: {} ({:.1f}s)\n", v.pass ? "PASS" : "FAIL", c.id, c.name, secs);
    for (const auto& n : v.notes) fmt::print("      {}\n", n);
    std::fflush(stdout);
  }
  fmt::print("{} criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
