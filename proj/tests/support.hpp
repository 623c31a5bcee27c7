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

// Fixture games and brute-force oracles shared by the unit and acceptance
// suites. Nothing here calls ResponseIndex, the SCC routines or the linear
// solvers; the oracles work from the raw response sets.

#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "brlab/game.hpp"
#include "brlab/response_graph.hpp"

namespace brlab::testing {

// Two PNE at (1,1) and (2,2), no trap.
inline Game two_pne_game() { return Game(2, {4, 1, 2, 3}, {4, 3, 1, 2}); }

// Matching pennies: the four profiles form one best/better-response cycle.
inline Game matching_pennies() { return Game(2, {4, 1, 2, 3}, {1, 4, 3, 2}); }

inline Game single_cell_game() { return Game(1, {1}, {1}); }

// Successor lists straight from better_responses / best_response.
inline std::vector<std::vector<int>> oracle_edges(const Game& g, Process kind) {
  std::vector<std::vector<int>> adj(g.num_profiles());
  for (int v = 0; v < g.num_profiles(); ++v) {
    const Profile s = g.profile(v);
    for (Player p : {Player::kOne, Player::kTwo}) {
      if (kind == Process::kBetter) {
        for (Profile t : better_responses(g, s, p)) adj[v].push_back(g.index(t));
      } else if (auto t = best_response(g, s, p)) {
        adj[v].push_back(g.index(*t));
      }
    }
  }
  return adj;
}

// reach[u][v]: v reachable from u (reflexive), by repeated BFS.
inline std::vector<std::vector<char>> oracle_reachability(
    const std::vector<std::vector<int>>& adj) {
  const int n = static_cast<int>(adj.size());
  std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
  for (int u = 0; u < n; ++u) {
    std::vector<int> queue{u};
    reach[u][u] = 1;
    for (std::size_t h = 0; h < queue.size(); ++h) {
      for (int w : adj[queue[h]]) {
        if (!reach[u][w]) {
          reach[u][w] = 1;
          queue.push_back(w);
        }
      }
    }
  }
  return reach;
}

// Sink classes by mutual reachability: each sink class as a sorted node set.
inline std::set<std::vector<int>> oracle_sink_classes(const Game& g, Process kind) {
  const auto adj = oracle_edges(g, kind);
  const auto reach = oracle_reachability(adj);
  const int n = g.num_profiles();
  std::set<std::vector<int>> sinks;
  for (int u = 0; u < n; ++u) {
    std::vector<int> cls;
    bool closed = true;
    for (int v = 0; v < n; ++v) {
      if (reach[u][v] && reach[v][u]) cls.push_back(v);
      if (reach[u][v] && !reach[v][u]) closed = false;
    }
    if (closed) sinks.insert(cls);
  }
  return sinks;
}

// Transition law of either dynamic from the raw response sets.
inline std::vector<std::map<int, double>> oracle_kernel(const Game& g, Process kind) {
  std::vector<std::map<int, double>> P(g.num_profiles());
  for (int v = 0; v < g.num_profiles(); ++v) {
    const Profile s = g.profile(v);
    std::vector<Profile> sets[2];
    for (Player p : {Player::kOne, Player::kTwo}) {
      auto& out = sets[to_int(p) - 1];
      if (kind == Process::kBetter) {
        out = better_responses(g, s, p);
      } else if (auto t = best_response(g, s, p)) {
        out.push_back(*t);
      }
    }
    const int nonempty = !sets[0].empty() + !sets[1].empty();
    if (nonempty == 0) {
      P[v][v] = 1.0;
      continue;
    }
    for (const auto& set : sets) {
      for (Profile t : set) P[v][g.index(t)] += 1.0 / nonempty / set.size();
    }
  }
  return P;
}

// Probability mass on each sink class after iterating the chain until the
// mass outside sink classes drops below `tol`.
inline std::map<std::vector<int>, double> oracle_absorption(const Game& g, Process kind,
                                                            Profile start,
                                                            double tol = 1e-14) {
  const auto P = oracle_kernel(g, kind);
  const auto sinks = oracle_sink_classes(g, kind);
  std::vector<int> sink_of(g.num_profiles(), -1);
  std::vector<std::vector<int>> classes(sinks.begin(), sinks.end());
  for (std::size_t c = 0; c < classes.size(); ++c) {
    for (int v : classes[c]) sink_of[v] = static_cast<int>(c);
  }
  std::vector<double> dist(g.num_profiles(), 0.0);
  dist[g.index(start)] = 1.0;
  for (int iter = 0; iter < 1'000'000; ++iter) {
    double transient = 0.0;
    for (int v = 0; v < g.num_profiles(); ++v) {
      if (sink_of[v] < 0) transient += dist[v];
    }
    if (transient < tol) break;
    std::vector<double> next(g.num_profiles(), 0.0);
    for (int v = 0; v < g.num_profiles(); ++v) {
      if (dist[v] == 0.0) continue;
      for (const auto& [w, p] : P[v]) next[w] += dist[v] * p;
    }
    dist.swap(next);
  }
  std::map<std::vector<int>, double> out;
  for (std::size_t c = 0; c < classes.size(); ++c) {
    double mass = 0.0;
    for (int v : classes[c]) mass += dist[v];
    if (mass > 0.0) out[classes[c]] = mass;
  }
  return out;
}

// Trap conditions checked directly on response sets: closure under every
// better-response deviation, and strong connectivity of the member set.
inline bool oracle_is_closed_and_connected(const Game& g, const std::vector<Profile>& members) {
  std::set<int> in;
  for (Profile p : members) in.insert(g.index(p));
  const auto adj = oracle_edges(g, Process::kBetter);
  for (int v : in) {
    for (int w : adj[v]) {
      if (!in.count(w)) return false;
    }
  }
  const int root = *in.begin();
  for (bool forward : {true, false}) {
    std::set<int> seen{root};
    std::vector<int> queue{root};
    for (std::size_t h = 0; h < queue.size(); ++h) {
      for (int v : in) {
        const bool edge = forward
            ? std::find(adj[queue[h]].begin(), adj[queue[h]].end(), v) != adj[queue[h]].end()
            : std::find(adj[v].begin(), adj[v].end(), queue[h]) != adj[v].end();
        if (edge && !seen.count(v)) {
          seen.insert(v);
          queue.push_back(v);
        }
      }
    }
    if (seen.size() != in.size()) return false;
  }
  return true;
}

// True if any member shares a row or column with a PNE.
inline bool oracle_neighbors_pne(const std::vector<Profile>& members,
                                 const std::vector<Profile>& pne) {
  for (Profile t : members) {
    for (Profile e : pne) {
      if (t != e && (t.s1 == e.s1 || t.s2 == e.s2)) return true;
    }
  }
  return false;
}

// Applies a strictly increasing map to ranks and re-ranks: a different
// real-valued game in the same ordinal class.
inline Game monotone_transform(const Game& g, double power, double shift) {
  std::vector<double> z1, z2;
  for (int v = 0; v < g.num_profiles(); ++v) {
    z1.push_back(std::pow(g.payoff(Player::kOne, v), power) + shift);
    z2.push_back(std::exp(0.01 * g.payoff(Player::kTwo, v)) * power - shift);
  }
  return Game::from_payoffs(g.K(), z1, z2);
}

}  // namespace brlab::testing
