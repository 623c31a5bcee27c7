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

#include "brlab/game.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include <fmt/core.h>

#include "brlab/errors.hpp"

namespace brlab {
namespace {

bool is_rank_permutation(const std::vector<int>& ranks, int n) {
  if (static_cast<int>(ranks.size()) != n) return false;
  std::vector<char> seen(n + 1, 0);
  for (int r : ranks) {
    if (r < 1 || r > n || seen[r]) return false;
    seen[r] = 1;
  }
  return true;
}

std::uint64_t digest_of(int K, const std::vector<int>& p1,
                        const std::vector<int>& p2) {
  std::uint64_t h = mix64(static_cast<std::uint64_t>(K));
  for (int v : p1) h = mix64(h ^ static_cast<std::uint64_t>(v));
  for (int v : p2) h = mix64(h ^ (static_cast<std::uint64_t>(v) << 32));
  return h;
}

std::vector<int> ranks_of(std::span<const double> z) {
  std::vector<int> order(z.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return z[a] < z[b]; });
  std::vector<int> ranks(z.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i > 0 && z[order[i]] == z[order[i - 1]]) {
      throw InvalidParameter("payoffs contain ties");
    }
    ranks[order[i]] = static_cast<int>(i) + 1;
  }
  return ranks;
}

std::vector<int> random_permutation(int n, Stream& stream) {
  std::vector<int> ranks(n);
  std::iota(ranks.begin(), ranks.end(), 1);
  std::shuffle(ranks.begin(), ranks.end(), stream);
  return ranks;
}

void check_K(int K) {
  if (K < 1) throw InvalidParameter(fmt::format("K must be >= 1, got {}", K));
}

}  // namespace

Player player_from_int(int p) {
  if (p != 1 && p != 2) {
    throw InvalidParameter(fmt::format("player must be 1 or 2, got {}", p));
  }
  return static_cast<Player>(p);
}

std::string to_string(Profile s) { return fmt::format("({},{})", s.s1, s.s2); }

Game::Game(int K, std::vector<int> p1, std::vector<int> p2)
    : K_(K), p1_(std::move(p1)), p2_(std::move(p2)) {
  check_K(K);
  if (!is_rank_permutation(p1_, K * K) || !is_rank_permutation(p2_, K * K)) {
    throw InvalidParameter(
        fmt::format("payoff matrices must be permutations of 1..{}", K * K));
  }
  digest_ = digest_of(K_, p1_, p2_);
}

Game Game::from_payoffs(int K, std::span<const double> z1,
                        std::span<const double> z2) {
  check_K(K);
  const auto n = static_cast<std::size_t>(K) * K;
  if (z1.size() != n || z2.size() != n) {
    throw InvalidParameter("payoff matrix size does not match K");
  }
  return Game(K, ranks_of(z1), ranks_of(z2));
}

Game generate_game(int K, Stream& stream) {
  check_K(K);
  auto p1 = random_permutation(K * K, stream);
  auto p2 = random_permutation(K * K, stream);
  return Game(K, std::move(p1), std::move(p2));
}

Game generate_game_float(int K, Stream& stream) {
  check_K(K);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  auto draw = [&] {
    std::vector<double> z(static_cast<std::size_t>(K) * K);
    for (;;) {
      for (auto& v : z) v = unif(stream);
      std::vector<double> sorted = z;
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end()) {
        return z;
      }
    }
  };
  auto z1 = draw();
  auto z2 = draw();
  return Game::from_payoffs(K, z1, z2);
}

void check_profile(const Game& g, Profile s) {
  if (!g.valid(s)) {
    throw InvalidParameter(fmt::format("profile {} out of range for K={}",
                                       to_string(s), g.K()));
  }
}

std::vector<Profile> better_responses(const Game& g, Profile s,
                                      Player player) {
  check_profile(g, s);
  const int current = g.payoff(player, s);
  std::vector<Profile> out;
  for (int k = 1; k <= g.K(); ++k) {
    Profile t = player == Player::kOne ? Profile{k, s.s2} : Profile{s.s1, k};
    if (t != s && g.payoff(player, t) > current) out.push_back(t);
  }
  return out;
}

std::optional<Profile> best_response(const Game& g, Profile s, Player player) {
  check_profile(g, s);
  Profile best = s;
  for (int k = 1; k <= g.K(); ++k) {
    Profile t = player == Player::kOne ? Profile{k, s.s2} : Profile{s.s1, k};
    if (g.payoff(player, t) > g.payoff(player, best)) best = t;
  }
  if (best == s) return std::nullopt;
  return best;
}

ResponseSets response_sets(const Game& g, Profile s, Player player) {
  ResponseSets out{s, player, better_responses(g, s, player), {}};
  if (auto b = best_response(g, s, player)) out.best.push_back(*b);
  return out;
}

bool is_pne(const Game& g, Profile s) {
  return !best_response(g, s, Player::kOne) &&
         !best_response(g, s, Player::kTwo);
}

std::vector<Profile> enumerate_pne(const Game& g) {
  const int K = g.K();
  // Column maxima for player 1, row maxima for player 2.
  std::vector<int> col_best(K, 0), row_best(K, 0);
  for (int r = 0; r < K; ++r) {
    for (int c = 0; c < K; ++c) {
      const int i = r * K + c;
      if (g.payoff(Player::kOne, i) > g.payoff(Player::kOne, col_best[c] * K + c)) {
        col_best[c] = r;
      }
      if (g.payoff(Player::kTwo, i) > g.payoff(Player::kTwo, r * K + row_best[r])) {
        row_best[r] = c;
      }
    }
  }
  std::vector<Profile> out;
  for (int r = 0; r < K; ++r) {
    const int c = row_best[r];
    if (col_best[c] == r) out.push_back({r + 1, c + 1});
  }
  return out;
}

ResponseIndex::ResponseIndex(const Game& g) : K_(g.K()) {
  const int K = K_;
  const auto n = static_cast<std::size_t>(K) * K;
  for (auto& v : order_) v.resize(n);
  for (auto& v : pos_) v.resize(n);
  std::vector<int> line(K);
  for (int c = 0; c < K; ++c) {
    std::iota(line.begin(), line.end(), 0);
    std::sort(line.begin(), line.end(), [&](int a, int b) {
      return g.payoff(Player::kOne, a * K + c) < g.payoff(Player::kOne, b * K + c);
    });
    for (int p = 0; p < K; ++p) {
      order_[0][c * K + p] = line[p];
      pos_[0][line[p] * K + c] = p;
    }
  }
  for (int r = 0; r < K; ++r) {
    std::iota(line.begin(), line.end(), 0);
    std::sort(line.begin(), line.end(), [&](int a, int b) {
      return g.payoff(Player::kTwo, r * K + a) < g.payoff(Player::kTwo, r * K + b);
    });
    for (int p = 0; p < K; ++p) {
      order_[1][r * K + p] = line[p];
      pos_[1][r * K + line[p]] = p;
    }
  }
}

int ResponseIndex::at_position(Player p, int index, int pos) const {
  const int r = index / K_;
  const int c = index % K_;
  if (p == Player::kOne) return order_[0][c * K_ + pos] * K_ + c;
  return r * K_ + order_[1][r * K_ + pos];
}

nlohmann::json to_json(const Game& g) {
  const int K = g.K();
  auto matrix = [&](Player p) {
    nlohmann::json rows = nlohmann::json::array();
    for (int r = 0; r < K; ++r) {
      nlohmann::json row = nlohmann::json::array();
      for (int c = 0; c < K; ++c) row.push_back(g.payoff(p, r * K + c));
      rows.push_back(std::move(row));
    }
    return rows;
  };
  return {{"K", K}, {"p1", matrix(Player::kOne)}, {"p2", matrix(Player::kTwo)}};
}

Game game_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("K") || !j.contains("p1") ||
      !j.contains("p2")) {
    throw InvalidParameter("game JSON must have keys K, p1, p2");
  }
  const int K = j.at("K").get<int>();
  check_K(K);
  auto flatten = [&](const nlohmann::json& m) {
    if (!m.is_array() || static_cast<int>(m.size()) != K) {
      throw InvalidParameter("payoff matrix must have K rows");
    }
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(K) * K);
    for (const auto& row : m) {
      if (!row.is_array() || static_cast<int>(row.size()) != K) {
        throw InvalidParameter("payoff matrix rows must have K entries");
      }
      for (const auto& v : row) out.push_back(v.get<int>());
    }
    return out;
  };
  return Game(K, flatten(j.at("p1")), flatten(j.at("p2")));
}

}  // namespace brlab
