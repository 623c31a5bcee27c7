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

#include "brlab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <fmt/core.h>

#include "brlab/errors.hpp"
#include "brlab/random.hpp"

namespace brlab {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidParameter(what);
}

void require_unit_interval(double x, const char* name) {
  require(x > 0.0 && x < 1.0, fmt::format("{} must lie in (0,1), got {}", name, x));
}

BigInt power(const BigInt& base, int exp) {
  return boost::multiprecision::pow(base, static_cast<unsigned>(exp));
}

Rational power(const Rational& base, int exp) {
  Rational r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

void check_entries(const ColumnWeightVector& c, int hi, int K) {
  require(c.K() == K, fmt::format("weight vector has {} entries, expected K={}", c.K(), K));
  for (int v : c.c) {
    require(v >= 0 && v <= hi, fmt::format("weight {} outside [0,{}]", v, hi));
  }
}

// Calls f on every vector in [0, hi]^K.
template <typename F>
void for_each_vector(int K, int hi, F&& f) {
  ColumnWeightVector c{std::vector<int>(K, 0)};
  for (;;) {
    f(c);
    int i = 0;
    while (i < K && c.c[i] == hi) c.c[i++] = 0;
    if (i == K) return;
    ++c.c[i];
  }
}

}  // namespace

int ColumnWeightVector::ell() const {
  int s = 0;
  for (int v : c) s += v;
  return s;
}

int ColumnWeightVector::nonzero() const {
  return static_cast<int>(std::count_if(c.begin(), c.end(), [](int v) { return v != 0; }));
}

void BoundParams::validate() const {
  require_unit_interval(alpha, "alpha");
  require_unit_interval(sigma, "sigma");
  require(beta < alpha / 2.0, fmt::format("beta must be < alpha/2, got {}", beta));
  require(cnst > 0.0, "cnst must be positive");
}

long long floor_pow(double K, double e) {
  const double x = std::pow(K, e);
  const double nearest = std::round(x);
  if (std::abs(x - nearest) <= 1e-9 * std::max(1.0, x)) {
    return static_cast<long long>(nearest);
  }
  return static_cast<long long>(std::floor(x));
}

double brd_convergence_formula(int K) {
  require(K >= 2, fmt::format("K must be >= 2, got {}", K));
  const double k = K;
  double sum = 0.0;
  double prod = 1.0;
  for (int t = 1; t <= 2 * K - 3; ++t) {
    prod *= (k - 1.0 - t / 2) / k;
    sum += prod;
  }
  return 1.0 / k + sum / k;
}

Rational brd_convergence_formula_exact(int K) {
  require(K >= 2, fmt::format("K must be >= 2, got {}", K));
  Rational sum = 0;
  Rational prod = 1;
  for (int t = 1; t <= 2 * K - 3; ++t) {
    prod *= Rational(K - 1 - t / 2, K);
    sum += prod;
  }
  return Rational(1, K) + sum / K;
}

double brd_upper_bound(int K) {
  require(K >= 1, fmt::format("K must be >= 1, got {}", K));
  return 1.0 / K + std::sqrt(std::numbers::pi / K);
}

RiemannChain riemann_chain(int K) {
  require(K >= 2, fmt::format("K must be >= 2, got {}", K));
  const double k = K;
  RiemannChain r;
  double prod = 1.0;
  for (int t = 1; t <= 2 * K - 3; ++t) {
    prod *= (k - 1.0 - t / 2) / k;
    r.product_sum += prod;
  }
  for (int t = 1; t <= K - 2; ++t) {
    r.gaussian_sum += 2.0 * std::exp(-static_cast<double>(t) * t / k);
  }
  r.sqrt_bound = std::sqrt(k * std::numbers::pi);
  return r;
}

bool riemann_chain_check(int K) { return riemann_chain(K).holds(); }

double poisson_pne_pmf(int k) {
  require(k >= 0, "k must be nonnegative");
  return std::exp(-1.0 - log_factorial(k));
}

BigInt column_factorial_product(const ColumnWeightVector& c, int K) {
  BigInt p = 1;
  for (int v : c.c) p *= factorial(v) * factorial(K - v);
  return p;
}

bool check_prop_comb(const ColumnWeightVector& c, int m, int K) {
  require(m >= 1 && m <= K, fmt::format("m must lie in [1,{}], got {}", K, m));
  check_entries(c, m, K);
  const int q = c.ell() / m;
  const BigInt rhs = power(factorial(m), q) * power(factorial(K - m), q) *
                     power(factorial(K), K - q);
  return column_factorial_product(c, K) <= rhs;
}

namespace {

struct CocombTerms {
  int ell;
  int j;
};

CocombTerms cocomb_terms(const ColumnWeightVector& c, int K) {
  check_entries(c, K, K);
  const int ell = c.ell();
  const int j = c.nonzero();
  require(ell < K, fmt::format("ell(c) = {} must be < K = {}", ell, K));
  require(j >= 1, "c must have at least one nonzero entry");
  return {ell, j};
}

}  // namespace

bool check_prop_cocomb(const ColumnWeightVector& c, int K) {
  const auto [ell, j] = cocomb_terms(c, K);
  BigInt lhs = 1;
  for (int v : c.c) {
    if (v != 0) lhs *= factorial(v) * factorial(K - v);
  }
  const BigInt rhs = factorial(ell - j + 1) * factorial(K - ell + j - 1) *
                     power(factorial(K - 1), j - 1) * power(factorial(K), ell - j);
  return lhs <= rhs;
}

bool check_prop_cocomb_literal(const ColumnWeightVector& c, int K) {
  const auto [ell, j] = cocomb_terms(c, K);
  const BigInt rhs = factorial(ell - j + 1) * BigInt(K - ell + j - 1) *
                     power(factorial(K - 1), j - 1) * power(factorial(K), ell - j);
  return column_factorial_product(c, K) <= rhs;
}

Rational binomial_ratio_product(const ColumnWeightVector& c, int m, int K) {
  Rational p = 1;
  for (int v : c.c) p *= Rational(binomial(m, v), binomial(K, v));
  return p;
}

bool check_prod_ratio(const ColumnWeightVector& c, int m, int K) {
  require(m >= 1 && m <= K, fmt::format("m must lie in [1,{}], got {}", K, m));
  check_entries(c, m, K);
  const int ell = c.ell();
  require(ell < K, fmt::format("ell(c) = {} must be < K = {}", ell, K));
  return binomial_ratio_product(c, m, K) <= power(Rational(m, K), ell);
}

double kais1_log_sum(int K, double alpha) {
  require(K >= 5, fmt::format("K must be >= 5, got {}", K));
  require_unit_interval(alpha, "alpha");
  const double k = K;
  const long long top = floor_pow(k, alpha);
  double acc = kNegInf;
  for (long long n = 4; n <= top; ++n) {
    const double log_binom = log_binomial(n + k - 1.0, k);
    for (long long j = 2; j <= n - 2; ++j) {
      const double term = log_factorial(k - n + j - 1) + log_factorial(n - j + 1) -
                          (j - 1) * std::log(k) - log_factorial(j) -
                          log_factorial(k - j) + log_binom +
                          n * std::log(static_cast<double>(j) / k);
      acc = log_add(acc, term);
    }
  }
  return acc;
}

double kais1_ratio(int K, double alpha) {
  const double log_sum = kais1_log_sum(K, alpha);
  if (log_sum == kNegInf) return 0.0;
  return std::exp(log_sum + (3.0 - 2.0 * alpha) * std::log(static_cast<double>(K)));
}

double kais2_gap(int K, double alpha, double beta) {
  require(K >= 2, fmt::format("K must be >= 2, got {}", K));
  require_unit_interval(alpha, "alpha");
  require(beta < alpha / 2.0, fmt::format("beta must be < alpha/2, got {}", beta));
  const double k = K;
  const long long N = floor_pow(k, alpha / 2.0);
  const long long lo = floor_pow(k, alpha);
  const double log_binom_KN = log_binomial(k, static_cast<double>(N));
  double acc = kNegInf;
  for (long long n = lo; n <= static_cast<long long>(K) * K; ++n) {
    acc = log_add(acc, log_binomial(n + k - 1.0, k) -
                           static_cast<double>(n / N) * log_binom_KN);
  }
  const double log_rhs = -beta * std::pow(k, alpha) * std::log(k);
  return acc - log_rhs;
}

bool stirling_bounds_check(int n) {
  require(n >= 1, fmt::format("n must be >= 1, got {}", n));
  using Float = boost::multiprecision::cpp_bin_float_50;
  const Float x = n;
  const Float pi = boost::math::constants::pi<Float>();
  const Float ratio = Float(factorial(n)) * exp(x) / (sqrt(2 * pi) * pow(x, x + Float(0.5)));
  const Float lower = exp(Float(1) / (12 * x + 1));
  const Float upper = exp(Float(1) / (12 * x));
  return lower < ratio && ratio < upper;
}

double theorem2_rhs(int K, const BoundParams& params) {
  require(K >= 1, fmt::format("K must be >= 1, got {}", K));
  params.validate();
  const double k = K;
  const double a = params.alpha;
  return params.cnst * std::pow(k, -3.0 + 2.0 * a) +
         k * k * std::pow(0.5, std::pow(k, a / 2.0)) +
         std::pow(k, -std::pow(k, a));
}

double lemma1_bound(int K, double sigma) {
  require(K >= 1, fmt::format("K must be >= 1, got {}", K));
  require_unit_interval(sigma, "sigma");
  const double k = K;
  return k * k * std::pow(0.5, std::pow(k, sigma));
}

CombinatorialTally exhaustive_combinatorial_checks(int K) {
  require(K >= 1, "K must be >= 1");
  CombinatorialTally t;
  for (int m = 1; m <= K; ++m) {
    for_each_vector(K, m, [&](const ColumnWeightVector& c) {
      ++t.comb_checked;
      if (!check_prop_comb(c, m, K)) ++t.comb_violations;
      if (c.ell() < K) {
        ++t.prodratio_checked;
        if (!check_prod_ratio(c, m, K)) ++t.prodratio_violations;
      }
    });
  }
  for_each_vector(K, K, [&](const ColumnWeightVector& c) {
    if (c.ell() >= K || c.nonzero() == 0) return;
    ++t.cocomb_checked;
    if (!check_prop_cocomb(c, K)) ++t.cocomb_violations;
    if (!check_prop_cocomb_literal(c, K)) ++t.cocomb_literal_violations;
  });
  return t;
}

CombinatorialTally random_combinatorial_checks(int K, std::uint64_t cases,
                                               std::uint64_t seed) {
  require(K >= 2, "K must be >= 2");
  Stream stream = make_stream(mix64(seed));
  auto uniform = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(stream);
  };
  // Drops `units` unit weights into random columns holding fewer than `cap`.
  auto scatter = [&](int units, int cap) {
    ColumnWeightVector c{std::vector<int>(K, 0)};
    for (int u = 0; u < units; ++u) {
      int col;
      do {
        col = uniform(0, K - 1);
      } while (c.c[col] >= cap);
      ++c.c[col];
    }
    return c;
  };
  CombinatorialTally t;
  for (std::uint64_t i = 0; i < cases; ++i) {
    {
      const int m = uniform(1, K);
      ColumnWeightVector c{std::vector<int>(K)};
      for (int& v : c.c) v = uniform(0, m);
      ++t.comb_checked;
      if (!check_prop_comb(c, m, K)) ++t.comb_violations;
    }
    {
      const ColumnWeightVector c = scatter(uniform(1, K - 1), K);
      ++t.cocomb_checked;
      if (!check_prop_cocomb(c, K)) ++t.cocomb_violations;
      if (!check_prop_cocomb_literal(c, K)) ++t.cocomb_literal_violations;
    }
    {
      const int m = uniform(1, K);
      const ColumnWeightVector c = scatter(uniform(0, K - 1), m);
      ++t.prodratio_checked;
      if (!check_prod_ratio(c, m, K)) ++t.prodratio_violations;
    }
  }
  return t;
}

nlohmann::json BoundsReport::to_json() const {
  nlohmann::json j = {{"which", which},
                      {"checked", checked},
                      {"violations", violations},
                      {"grid_values", grid_values}};
  if (!diagnostics.is_null()) j["diagnostics"] = diagnostics;
  return j;
}

BoundsReport verify_bounds(const std::string& which, int K_max, double alpha,
                           double beta, bool diagnostics) {
  BoundsReport r;
  r.which = which;
  if (which == "comb" || which == "cocomb" || which == "prodratio") {
    require(K_max >= 1, "K-max must be >= 1");
    std::uint64_t literal = 0;
    for (int K = 1; K <= K_max; ++K) {
      const auto t = exhaustive_combinatorial_checks(K);
      std::uint64_t checked, violations;
      if (which == "comb") {
        checked = t.comb_checked;
        violations = t.comb_violations;
      } else if (which == "cocomb") {
        checked = t.cocomb_checked;
        violations = t.cocomb_violations;
        literal += t.cocomb_literal_violations;
      } else {
        checked = t.prodratio_checked;
        violations = t.prodratio_violations;
      }
      r.checked += checked;
      r.violations += violations;
      r.grid_values.push_back({{"K", K}, {"checked", checked}, {"violations", violations}});
    }
    if (diagnostics && which == "cocomb") {
      r.diagnostics = {{"literal_statement_violations", literal},
                       {"example", {{"K", 3}, {"c", {2, 0, 0}},
                                    {"corrected", check_prop_cocomb({{2, 0, 0}}, 3)},
                                    {"literal", check_prop_cocomb_literal({{2, 0, 0}}, 3)}}}};
    }
  } else if (which == "riemann") {
    require(K_max >= 2, "K-max must be >= 2");
    for (int K = 2; K <= K_max; ++K) {
      const auto chain = riemann_chain(K);
      ++r.checked;
      const bool below = brd_convergence_formula(K) <= brd_upper_bound(K);
      if (!chain.holds() || !below) {
        ++r.violations;
        r.grid_values.push_back({{"K", K},
                                 {"product_sum", chain.product_sum},
                                 {"gaussian_sum", chain.gaussian_sum},
                                 {"sqrt_bound", chain.sqrt_bound},
                                 {"formula_below_bound", below}});
      }
    }
  } else if (which == "stirling") {
    require(K_max >= 1, "K-max must be >= 1");
    for (int n = 1; n <= K_max; ++n) {
      ++r.checked;
      if (!stirling_bounds_check(n)) {
        ++r.violations;
        r.grid_values.push_back({{"n", n}});
      }
    }
  } else if (which == "kais1") {
    double prev = std::numeric_limits<double>::infinity();
    for (int K = 100; K <= K_max; K *= 2) {
      const double v = kais1_ratio(K, alpha);
      ++r.checked;
      if (!std::isfinite(v) || v > prev) ++r.violations;
      r.grid_values.push_back({{"K", K}, {"ratio", v}});
      prev = v;
    }
  } else if (which == "kais2") {
    double prev = std::numeric_limits<double>::infinity();
    double last = 0.0;
    for (int K = 100; K <= K_max; K += 100) {
      const double v = kais2_gap(K, alpha, beta);
      ++r.checked;
      if (!std::isfinite(v) || v >= prev) ++r.violations;
      r.grid_values.push_back({{"K", K}, {"gap", v}});
      prev = last = v;
    }
    if (r.checked > 0 && last >= 0.0) ++r.violations;
  } else {
    throw InvalidParameter("unknown bound family: " + which);
  }
  return r;
}

}  // namespace brlab
