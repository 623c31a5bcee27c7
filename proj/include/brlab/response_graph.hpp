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

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "brlab/game.hpp"
#include "brlab/numeric.hpp"

namespace brlab {

// Which improving deviations a dynamic may take: any (better response) or
// only the maximizer (best response).
enum class Process { kBetter, kBest };

std::string to_string(Process p);
Process process_from_string(const std::string& s);

inline constexpr std::size_t kDefaultMaxEdges = 50'000'000;
inline constexpr std::size_t kDefaultMaxNodes = 4'000'000;

// Digraph on the K^2 profiles (node = row-major profile index). Better-kind
// graphs carry every improving deviation of both players; best-kind graphs
// carry at most one edge per player.
struct ResponseGraph {
  Process kind = Process::kBetter;
  int K = 0;
  std::uint64_t game_digest = 0;
  std::vector<std::size_t> offsets;  // size K^2 + 1
  std::vector<int> targets;

  int num_nodes() const { return K * K; }
  std::size_t num_edges() const { return targets.size(); }
  std::span<const int> successors(int node) const {
    return {targets.data() + offsets[node], targets.data() + offsets[node + 1]};
  }
  int out_degree(int node) const {
    return static_cast<int>(offsets[node + 1] - offsets[node]);
  }
};

// Throws CapacityError when the edge count would exceed `max_edges`.
ResponseGraph build_graph(const Game& g, Process kind,
                          std::size_t max_edges = kDefaultMaxEdges);

// Strongly connected components of a response graph, numbered in increasing
// order of their smallest member so that equal partitions compare equal.
struct SinkDecomposition {
  Process kind = Process::kBetter;
  int K = 0;
  std::uint64_t game_digest = 0;
  std::vector<int> membership;       // node -> component
  std::vector<int> component_size;
  std::vector<char> sink;            // component has no leaving edge

  int num_components() const { return static_cast<int>(component_size.size()); }
  bool is_sink_node(int node) const { return sink[membership[node]] != 0; }
  std::vector<int> members(int component) const;
  std::vector<int> sink_components() const;

  bool operator==(const SinkDecomposition&) const = default;
};

// Condensation of the explicit graph (Boost.Graph strong components).
SinkDecomposition sink_decomposition(const ResponseGraph& graph);

// Same decomposition computed from a reduced graph with at most two edges per
// node. For better responses each node keeps only the next-better deviation
// of each player, which preserves reachability and therefore the SCCs and
// sink flags. Throws CapacityError above `max_nodes`.
SinkDecomposition fast_sink_decomposition(const Game& g,
                                          const ResponseIndex& index,
                                          Process kind,
                                          std::size_t max_nodes = kDefaultMaxNodes);
SinkDecomposition fast_sink_decomposition(const Game& g, Process kind);

// A sink component of the better-response graph with at least two members.
struct TrapReport {
  int component = -1;
  std::vector<Profile> profiles;  // row-major order
  int size = 0;
  std::vector<int> R;  // members per row (player 1 strategy)
  std::vector<int> C;  // members per column (player 2 strategy)
};

std::vector<TrapReport> find_traps(const Game& g);
std::vector<TrapReport> find_traps(const Game& g, const SinkDecomposition& sinks);

enum class TrapClass { kA1, kA2, kSmall };
std::string to_string(TrapClass c);

// A1: some row or column holds >= K^(alpha/2) members. A2: otherwise, and the
// trap has more than K^alpha members. Small: neither.
TrapClass classify_large_trap(const TrapReport& trap, double alpha);

struct Absorption {
  SinkDecomposition sinks;
  std::map<int, double> probability;  // sink component -> probability
  double converge = 0.0;              // mass on singleton sinks
};

struct ExactAbsorption {
  SinkDecomposition sinks;
  std::map<int, Rational> probability;
  Rational converge;
};

// Exact absorption law of the dynamic started at `start`: a player is picked
// with probability 1/2 and moves uniformly within their improving set (or
// their best response), falling back to the other player when empty.
// Dense elimination for K <= 8, BiCGSTAB above.
Absorption absorption_probabilities(const Game& g, Process process,
                                    Profile start);
ExactAbsorption absorption_probabilities_exact(const Game& g, Process process,
                                               Profile start);

// Size of the top set M_{i,u} for a given sigma: ceil(K^sigma), capped at K.
int delta_top_size(int K, double sigma);

// True iff some row i and another row j satisfy: on each column holding one
// of row i's ceil(K^sigma) largest player-2 payoffs, row i's player-2 payoff
// exceeds row j's.
bool delta_event_occurs(const Game& g, double sigma);
bool delta_event_occurs_with_top(const Game& g, int top);

}  // namespace brlab
