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

#include "brlab/exact_oracle.hpp"

#include <algorithm>
#include <future>
#include <numeric>

#include <fmt/core.h>

#include "brlab/errors.hpp"
#include "brlab/response_graph.hpp"

namespace brlab {
namespace {

void check_supported(int K) {
  if (K != 2 && K != 3) {
    throw UnsupportedSize(fmt::format(
        "exact enumeration supports K in {{2, 3}}, got {}", K));
  }
}

const std::vector<std::vector<int>>& permutations(int K) {
  static const auto table = [] {
    std::vector<std::vector<std::vector<int>>> t(4);
    for (int k = 2; k <= 3; ++k) {
      std::vector<int> p(k);
      std::iota(p.begin(), p.end(), 0);
      do {
        t[k].push_back(p);
      } while (std::next_permutation(p.begin(), p.end()));
    }
    return t;
  }();
  return table[K];
}

struct Tally {
  std::map<int, std::uint64_t> pne_counts;
  std::uint64_t traps = 0;
  Rational brd = 0;
  Rational BRD = 0;
  bool trap_free_always_converges = true;

  void merge(const Tally& o) {
    for (const auto& [k, n] : o.pne_counts) pne_counts[k] += n;
    traps += o.traps;
    brd += o.brd;
    BRD += o.BRD;
    trap_free_always_converges =
        trap_free_always_converges && o.trap_free_always_converges;
  }
};

Tally tally_range(int K, std::uint64_t begin, std::uint64_t end) {
  Tally t;
  for (std::uint64_t i = begin; i < end; ++i) {
    const Game g = class_at(K, i).to_game();
    ++t.pne_counts[static_cast<int>(enumerate_pne(g).size())];
    const bool trapped = !find_traps(g).empty();
    if (trapped) ++t.traps;
    const Rational better =
        absorption_probabilities_exact(g, Process::kBetter, {1, 1}).converge;
    if (!trapped && better != 1) t.trap_free_always_converges = false;
    t.brd += better;
    t.BRD += absorption_probabilities_exact(g, Process::kBest, {1, 1}).converge;
  }
  return t;
}

}  // namespace

Game OrdinalClass::to_game() const {
  const int n = K * K;
  std::vector<int> p1(n), p2(n);
  for (int c = 0; c < K; ++c) {
    for (int pos = 0; pos < K; ++pos) p1[col_orders[c][pos] * K + c] = pos * K + c + 1;
  }
  for (int r = 0; r < K; ++r) {
    for (int pos = 0; pos < K; ++pos) p2[r * K + row_orders[r][pos]] = pos * K + r + 1;
  }
  return Game(K, std::move(p1), std::move(p2));
}

std::uint64_t class_count(int K) {
  check_supported(K);
  std::uint64_t n = 1;
  const auto perms = permutations(K).size();
  for (int i = 0; i < 2 * K; ++i) n *= perms;
  return n;
}

OrdinalClass class_at(int K, std::uint64_t index) {
  check_supported(K);
  const auto& perms = permutations(K);
  const std::uint64_t radix = perms.size();
  if (index >= class_count(K)) {
    throw InvalidParameter(fmt::format("class index {} out of range", index));
  }
  OrdinalClass c;
  c.K = K;
  for (int d = 0; d < 2 * K; ++d) {
    const auto& p = perms[index % radix];
    index /= radix;
    (d < K ? c.col_orders : c.row_orders).push_back(p);
  }
  return c;
}

OrdinalClasses::OrdinalClasses(int K) : K_(K), count_(class_count(K)) {}

OrdinalClasses enumerate_classes(int K) { return OrdinalClasses(K); }

Rational ExactSummary::mean_pne() const {
  Rational m = 0;
  for (const auto& [k, p] : pne_pmf) m += p * k;
  return m;
}

ExactSummary exact_summary(int K, int workers) {
  const std::uint64_t total = class_count(K);
  workers = std::max(1, workers);
  std::vector<std::future<Tally>> parts;
  for (int w = 0; w < workers; ++w) {
    const std::uint64_t begin = total * w / workers;
    const std::uint64_t end = total * (w + 1) / workers;
    parts.push_back(std::async(workers == 1 ? std::launch::deferred : std::launch::async,
                               tally_range, K, begin, end));
  }
  Tally all;
  for (auto& p : parts) all.merge(p.get());

  ExactSummary s;
  s.K = K;
  const Rational n(total);
  for (const auto& [k, count] : all.pne_counts) s.pne_pmf[k] = Rational(count) / n;
  s.p_trap = Rational(all.traps) / n;
  s.p_converge_brd = all.brd / n;
  s.p_converge_BRD = all.BRD / n;
  s.trap_free_always_converges = all.trap_free_always_converges;
  return s;
}

nlohmann::json to_json(const ExactSummary& s) {
  nlohmann::json pmf = nlohmann::json::object();
  for (const auto& [k, p] : s.pne_pmf) pmf[std::to_string(k)] = to_string(p);
  return {{"K", s.K},
          {"pne_pmf", pmf},
          {"mean_pne", to_string(s.mean_pne())},
          {"p_trap", to_string(s.p_trap)},
          {"p_converge_brd", to_string(s.p_converge_brd)},
          {"p_converge_BRD", to_string(s.p_converge_BRD)},
          {"trap_free_always_converges", s.trap_free_always_converges}};
}

}  // namespace brlab
