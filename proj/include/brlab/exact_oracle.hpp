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
#include <iterator>
#include <map>
#include <vector>

#include "brlab/game.hpp"
#include "brlab/numeric.hpp"
#include "json.hpp"

namespace brlab {

// Ordinal equivalence class of a K x K game. Player i only compares payoffs
// within their own deviation line, so per-line orders determine every
// response set. Orders list strategies from worst to best.
struct OrdinalClass {
  int K = 0;
  std::vector<std::vector<int>> col_orders;  // [col] -> rows, 0-based
  std::vector<std::vector<int>> row_orders;  // [row] -> cols, 0-based

  // A game in this class: rank = position * K + line + 1.
  Game to_game() const;
};

// (K!)^(2K).
std::uint64_t class_count(int K);
// Mixed-radix decoding: digits 0..K-1 pick column orders, K..2K-1 row orders,
// each digit indexing permutations in lexicographic order.
OrdinalClass class_at(int K, std::uint64_t index);

// Every class exactly once, for K in {2, 3}.
class OrdinalClasses {
 public:
  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = OrdinalClass;
    using difference_type = std::ptrdiff_t;
    using pointer = const OrdinalClass*;
    using reference = OrdinalClass;

    iterator(int K, std::uint64_t i) : K_(K), i_(i) {}
    OrdinalClass operator*() const { return class_at(K_, i_); }
    iterator& operator++() {
      ++i_;
      return *this;
    }
    bool operator==(const iterator& o) const { return i_ == o.i_; }

   private:
    int K_;
    std::uint64_t i_;
  };

  explicit OrdinalClasses(int K);
  iterator begin() const { return {K_, 0}; }
  iterator end() const { return {K_, count_}; }
  std::uint64_t size() const { return count_; }

 private:
  int K_;
  std::uint64_t count_;
};

// Throws UnsupportedSize outside {2, 3}.
OrdinalClasses enumerate_classes(int K);

struct ExactSummary {
  int K = 0;
  std::map<int, Rational> pne_pmf;
  Rational p_trap;
  Rational p_converge_brd;   // better response, from (1,1)
  Rational p_converge_BRD;   // best response, from (1,1)
  // Every trap-free class converges under better response with probability 1.
  bool trap_free_always_converges = true;

  Rational mean_pne() const;
};

// Uniform average over all classes. `workers` splits the index range; the
// result does not depend on it.
ExactSummary exact_summary(int K, int workers = 1);

nlohmann::json to_json(const ExactSummary& s);

}  // namespace brlab
