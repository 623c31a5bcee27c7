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

// Closed-form convergence estimates and the combinatorial inequalities behind
// them. Small cases use exact integers/rationals; large ones use log-gamma.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "brlab/numeric.hpp"
#include "json.hpp"

namespace brlab {

// Per-column weights c_1..c_K (e.g. trap members per column).
struct ColumnWeightVector {
  std::vector<int> c;

  int K() const { return static_cast<int>(c.size()); }
  int ell() const;
  int nonzero() const;
};

struct BoundParams {
  double alpha = 0.5;
  double beta = 0.2;   // must be < alpha / 2
  double sigma = 0.5;
  double cnst = 1.0;   // fitted, not derived

  void validate() const;
};

// floor(K^e) with a tolerance for exact integer powers.
long long floor_pow(double K, double e);

// 1/K + (1/K) sum_{t=1}^{2K-3} prod_{j=1}^{t} (K - 1 - floor(j/2)) / K.
double brd_convergence_formula(int K);
Rational brd_convergence_formula_exact(int K);

// 1/K + sqrt(pi/K).
double brd_upper_bound(int K);

// The three quantities bounded in sequence on the way to the sqrt(pi/K)
// bound: the product sum, 2 sum_{t=1}^{K-2} exp(-t^2/K), and sqrt(K pi).
struct RiemannChain {
  double product_sum = 0;
  double gaussian_sum = 0;
  double sqrt_bound = 0;

  bool first_link() const { return product_sum <= gaussian_sum; }
  bool second_link() const { return gaussian_sum <= sqrt_bound; }
  bool holds() const { return first_link() && second_link(); }
};
RiemannChain riemann_chain(int K);
bool riemann_chain_check(int K);

// Poisson(1) mass at k.
double poisson_pne_pmf(int k);

// prod c_i!(K-c_i)! over all K entries.
BigInt column_factorial_product(const ColumnWeightVector& c, int K);

// prod c_i!(K-c_i)! <= (m!)^q ((K-m)!)^q (K!)^(K-q), q = floor(ell/m).
bool check_prop_comb(const ColumnWeightVector& c, int m, int K);

// Product over the j nonzero entries of c_i!(K-c_i)! <=
// (ell-j+1)! (K-ell+j-1)! ((K-1)!)^(j-1) (K!)^(ell-j). Requires ell < K and
// at least one nonzero entry.
bool check_prop_cocomb(const ColumnWeightVector& c, int K);
// As printed: product over all K entries, and (K-ell+j-1) without factorial.
// Diagnostics only; it has counterexamples such as c = (2,0,0), K = 3.
bool check_prop_cocomb_literal(const ColumnWeightVector& c, int K);

// prod binom(m,c_i)/binom(K,c_i).
Rational binomial_ratio_product(const ColumnWeightVector& c, int m, int K);
// binomial_ratio_product <= (m/K)^ell, for entries <= m and ell < K.
bool check_prod_ratio(const ColumnWeightVector& c, int m, int K);

// log of the small-trap union bound
// sum_{n=4}^{floor(K^a)} sum_{j=2}^{n-2}
//   (K-n+j-1)!(n-j+1)! / (K^(j-1) j! (K-j)!) binom(n+K-1,K) (j/K)^n,
// or -inf for an empty sum.
double kais1_log_sum(int K, double alpha);
// The sum above times K^(3-2 alpha); 0 for an empty sum.
double kais1_ratio(int K, double alpha);

// ln(sum_{n=floor(K^a)}^{K^2} binom(n+K-1,K) binom(K,N)^(-floor(n/N)))
//   - ln(K^(-beta K^a)), N = floor(K^(a/2)).
double kais2_gap(int K, double alpha, double beta);

// e^(1/(12n+1)) < n! e^n / (sqrt(2 pi) n^(n+1/2)) < e^(1/(12n)), evaluated
// with 50 significant digits.
bool stirling_bounds_check(int n);

// cnst K^(-3+2a) + K^2 (1/2)^(K^(a/2)) + K^(-K^a).
double theorem2_rhs(int K, const BoundParams& params);

// K^2 (1/2)^(K^sigma).
double lemma1_bound(int K, double sigma);

// Grid verification used by the CLI. `which` is one of comb, cocomb,
// prodratio, kais1, kais2, stirling, riemann.
struct BoundsReport {
  std::string which;
  std::uint64_t checked = 0;
  std::uint64_t violations = 0;
  nlohmann::json grid_values = nlohmann::json::array();
  nlohmann::json diagnostics;  // null unless requested

  nlohmann::json to_json() const;
};

BoundsReport verify_bounds(const std::string& which, int K_max, double alpha,
                           double beta, bool diagnostics = false);

// Exhaustive check of the three combinatorial propositions for one K, over
// every admissible (c, m).
struct CombinatorialTally {
  std::uint64_t comb_checked = 0, comb_violations = 0;
  std::uint64_t cocomb_checked = 0, cocomb_violations = 0;
  std::uint64_t cocomb_literal_violations = 0;
  std::uint64_t prodratio_checked = 0, prodratio_violations = 0;
};
CombinatorialTally exhaustive_combinatorial_checks(int K);
// `cases` random admissible draws per proposition at size K.
CombinatorialTally random_combinatorial_checks(int K, std::uint64_t cases,
                                               std::uint64_t seed);

}  // namespace brlab
