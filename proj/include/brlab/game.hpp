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

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "brlab/random.hpp"
#include "json.hpp"

namespace brlab {

enum class Player : int { kOne = 1, kTwo = 2 };

constexpr Player other(Player p) {
  return p == Player::kOne ? Player::kTwo : Player::kOne;
}
constexpr int to_int(Player p) { return static_cast<int>(p); }
Player player_from_int(int p);

// A pure strategy profile; both strategies are 1-based. s1 picks the row
// (player 1), s2 the column (player 2).
struct Profile {
  int s1 = 1;
  int s2 = 1;
  auto operator<=>(const Profile&) const = default;
};

std::string to_string(Profile s);

// Two-player K x K game with ordinal payoffs. Each player's matrix holds a
// permutation of 1..K^2 (row-major), larger rank meaning larger payoff.
// Player 1 deviates within a column, player 2 within a row.
class Game {
 public:
  // Throws InvalidParameter unless each matrix is a permutation of 1..K^2.
  Game(int K, std::vector<int> p1, std::vector<int> p2);

  // Converts real-valued payoffs to ranks. Ties within a player's matrix are
  // rejected.
  static Game from_payoffs(int K, std::span<const double> z1,
                           std::span<const double> z2);

  int K() const { return K_; }
  int num_profiles() const { return K_ * K_; }

  bool valid(Profile s) const {
    return s.s1 >= 1 && s.s1 <= K_ && s.s2 >= 1 && s.s2 <= K_;
  }
  int index(Profile s) const { return (s.s1 - 1) * K_ + (s.s2 - 1); }
  Profile profile(int index) const {
    return {index / K_ + 1, index % K_ + 1};
  }

  int payoff(Player p, Profile s) const { return ranks(p)[index(s)]; }
  int payoff(Player p, int index) const { return ranks(p)[index]; }
  const std::vector<int>& ranks(Player p) const {
    return p == Player::kOne ? p1_ : p2_;
  }

  // Stable 64-bit fingerprint of both matrices.
  std::uint64_t digest() const { return digest_; }

  bool operator==(const Game& other) const {
    return K_ == other.K_ && p1_ == other.p1_ && p2_ == other.p2_;
  }

 private:
  int K_;
  std::vector<int> p1_;
  std::vector<int> p2_;
  std::uint64_t digest_;
};

// The improving deviations of `player` at `profile`; `best` is the unique
// maximizer when `better` is nonempty.
struct ResponseSets {
  Profile profile;
  Player player;
  std::vector<Profile> better;
  std::vector<Profile> best;
};

// Independent uniform permutations for both players. K = 0 is rejected.
Game generate_game(int K, Stream& stream);

// Uniform(0,1) payoffs, redrawn on exact ties, then converted to ranks.
Game generate_game_float(int K, Stream& stream);

void check_profile(const Game& g, Profile s);

// Deviations of `player` that strictly raise their payoff, ordered by
// strategy index.
std::vector<Profile> better_responses(const Game& g, Profile s, Player player);

std::optional<Profile> best_response(const Game& g, Profile s, Player player);

ResponseSets response_sets(const Game& g, Profile s, Player player);

bool is_pne(const Game& g, Profile s);

// All pure Nash equilibria in row-major order.
std::vector<Profile> enumerate_pne(const Game& g);

// Per-line payoff orders, for O(1) response queries. Player 1's lines are
// columns, player 2's lines are rows. Position K-1 is the line's best.
class ResponseIndex {
 public:
  explicit ResponseIndex(const Game& g);

  int K() const { return K_; }

  // Position of profile `index` in its deviation line for `player`.
  int position(Player p, int index) const {
    return pos_[slot(p)][index];
  }
  int improving_count(Player p, int index) const {
    return K_ - 1 - position(p, index);
  }
  // Profile index holding position `pos` in the line that contains `index`.
  int at_position(Player p, int index, int pos) const;
  // Next-better profile in the deviation line, or -1 at the line's best.
  int next_better(Player p, int index) const {
    int pos = position(p, index);
    return pos + 1 < K_ ? at_position(p, index, pos + 1) : -1;
  }
  int line_best(Player p, int index) const {
    return at_position(p, index, K_ - 1);
  }
  bool is_pne(int index) const {
    return improving_count(Player::kOne, index) == 0 &&
           improving_count(Player::kTwo, index) == 0;
  }

 private:
  static int slot(Player p) { return p == Player::kOne ? 0 : 1; }

  int K_;
  // order_[0][col * K + pos] = row; order_[1][row * K + pos] = col.
  std::vector<int> order_[2];
  std::vector<int> pos_[2];
};

nlohmann::json to_json(const Game& g);
Game game_from_json(const nlohmann::json& j);

}  // namespace brlab
