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

#include "brlab/response_graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <type_traits>
#include <utility>

#include <Eigen/Sparse>
#include <boost/graph/compressed_sparse_row_graph.hpp>
#include <boost/graph/strong_components.hpp>
#include <boost/property_map/property_map.hpp>
#include <fmt/core.h>

#include "brlab/errors.hpp"
#include "brlab/linear_solve.hpp"

namespace brlab {
namespace {

// Renumbers raw component ids by order of first appearance over nodes
// 0..n-1 and fills sizes.
void canonicalize(SinkDecomposition& d, const std::vector<int>& raw,
                  int raw_count) {
  std::vector<int> remap(raw_count, -1);
  int next = 0;
  d.membership.resize(raw.size());
  for (std::size_t v = 0; v < raw.size(); ++v) {
    int& m = remap[raw[v]];
    if (m < 0) m = next++;
    d.membership[v] = m;
  }
  d.component_size.assign(next, 0);
  for (int m : d.membership) ++d.component_size[m];
  d.sink.assign(next, 1);
}

template <typename Successors>
void mark_non_sinks(SinkDecomposition& d, int n, Successors&& successors) {
  for (int v = 0; v < n; ++v) {
    successors(v, [&](int w) {
      if (d.membership[v] != d.membership[w]) d.sink[d.membership[v]] = 0;
    });
  }
}

// Iterative Tarjan over a graph given by a successor visitor with at most
// two successors per node.
template <typename Successors>
std::pair<std::vector<int>, int> tarjan(int n, Successors&& successors) {
  std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
  std::vector<int> stack;
  std::vector<char> on_stack(n, 0);
  struct Frame {
    int node;
    int next_edge;
    int succ[2];
    int count;
  };
  std::vector<Frame> call;
  int counter = 0;
  int components = 0;
  for (int root = 0; root < n; ++root) {
    if (index[root] >= 0) continue;
    auto push = [&](int v) {
      Frame f{v, 0, {-1, -1}, 0};
      successors(v, [&](int w) { f.succ[f.count++] = w; });
      index[v] = low[v] = counter++;
      stack.push_back(v);
      on_stack[v] = 1;
      call.push_back(f);
    };
    push(root);
    while (!call.empty()) {
      Frame& f = call.back();
      if (f.next_edge < f.count) {
        const int w = f.succ[f.next_edge++];
        if (index[w] < 0) {
          push(w);
        } else if (on_stack[w]) {
          low[f.node] = std::min(low[f.node], index[w]);
        }
        continue;
      }
      const int v = f.node;
      if (low[v] == index[v]) {
        int w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp[w] = components;
        } while (w != v);
        ++components;
      }
      call.pop_back();
      if (!call.empty()) {
        const int parent = call.back().node;
        low[parent] = std::min(low[parent], low[v]);
      }
    }
  }
  return {std::move(comp), components};
}

// Visits the improving targets of `node` with their transition weights.
template <typename Scalar, typename Visit>
void for_each_transition(const ResponseIndex& idx, Process process, int node,
                         Visit&& visit) {
  const int n1 = idx.improving_count(Player::kOne, node);
  const int n2 = idx.improving_count(Player::kTwo, node);
  auto emit = [&](Player p, int count, Scalar weight) {
    if (process == Process::kBest) {
      visit(idx.line_best(p, node), weight);
      return;
    }
    const Scalar each = weight / Scalar(count);
    const int pos = idx.position(p, node);
    for (int q = pos + 1; q < idx.K(); ++q) visit(idx.at_position(p, node, q), each);
  };
  if (n1 > 0 && n2 > 0) {
    emit(Player::kOne, n1, Scalar(1) / Scalar(2));
    emit(Player::kTwo, n2, Scalar(1) / Scalar(2));
  } else if (n1 > 0) {
    emit(Player::kOne, n1, Scalar(1));
  } else if (n2 > 0) {
    emit(Player::kTwo, n2, Scalar(1));
  }
}

template <typename Scalar>
std::map<int, Scalar> absorb(const Game& g, Process process, Profile start,
                             const SinkDecomposition& sinks, bool dense) {
  const ResponseIndex idx(g);
  const int s0 = g.index(start);
  std::map<int, Scalar> prob;
  if (sinks.is_sink_node(s0)) {
    prob[sinks.membership[s0]] = Scalar(1);
    return prob;
  }

  // Transient states reachable from the start.
  std::vector<int> local(g.num_profiles(), -1);
  std::vector<int> transient{s0};
  local[s0] = 0;
  for (std::size_t head = 0; head < transient.size(); ++head) {
    for_each_transition<double>(idx, process, transient[head], [&](int t, double) {
      if (!sinks.is_sink_node(t) && local[t] < 0) {
        local[t] = static_cast<int>(transient.size());
        transient.push_back(t);
      }
    });
  }
  const std::size_t n = transient.size();

  // Expected visits v solve (I - Q)^T v = e_start; absorption into C is then
  // sum_s v_s P(s, C).
  std::vector<Scalar> visits;
  if constexpr (std::is_floating_point_v<Scalar>) {
    if (!dense) {
      std::vector<Eigen::Triplet<double>> triplets;
      for (std::size_t i = 0; i < n; ++i) {
        triplets.emplace_back(i, i, 1.0);
        for_each_transition<double>(idx, process, transient[i], [&](int t, double p) {
          if (local[t] >= 0) triplets.emplace_back(local[t], i, -p);
        });
      }
      Eigen::SparseMatrix<double> A(n, n);
      A.setFromTriplets(triplets.begin(), triplets.end());
      Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
      b[0] = 1.0;
      Eigen::BiCGSTAB<Eigen::SparseMatrix<double>, Eigen::IncompleteLUT<double>> solver;
      solver.setTolerance(1e-14);
      solver.setMaxIterations(10 * static_cast<int>(n) + 100);
      solver.compute(A);
      Eigen::VectorXd x = solver.solve(b);
      const double residual = (A * x - b).lpNorm<Eigen::Infinity>();
      if (!(residual <= 1e-10)) {
        throw InternalError(fmt::format("absorption solve residual {}", residual));
      }
      visits.assign(x.data(), x.data() + n);
    }
  }
  if (visits.empty()) {
    detail::DenseMatrix<Scalar> A(n);
    for (std::size_t i = 0; i < n; ++i) {
      A(i, i) += Scalar(1);
      for_each_transition<Scalar>(idx, process, transient[i], [&](int t, const Scalar& p) {
        if (local[t] >= 0) A(local[t], i) -= p;
      });
    }
    std::vector<Scalar> b(n, Scalar(0));
    b[0] = Scalar(1);
    visits = detail::gaussian_solve(std::move(A), std::move(b));
  }

  for (std::size_t i = 0; i < n; ++i) {
    for_each_transition<Scalar>(idx, process, transient[i], [&](int t, const Scalar& p) {
      if (local[t] < 0) prob[sinks.membership[t]] += visits[i] * p;
    });
  }
  return prob;
}

}  // namespace

std::string to_string(Process p) {
  return p == Process::kBetter ? "better" : "best";
}

Process process_from_string(const std::string& s) {
  if (s == "better") return Process::kBetter;
  if (s == "best") return Process::kBest;
  throw InvalidParameter("process must be 'better' or 'best', got " + s);
}

ResponseGraph build_graph(const Game& g, Process kind, std::size_t max_edges) {
  const int K = g.K();
  const std::size_t n = static_cast<std::size_t>(K) * K;
  const std::size_t expected =
      kind == Process::kBetter ? n * static_cast<std::size_t>(K - 1) : 2 * n;
  if (expected > max_edges) {
    throw CapacityError(fmt::format(
        "{}-response graph at K={} needs up to {} edges (cap {})",
        to_string(kind), K, expected, max_edges));
  }
  ResponseGraph graph;
  graph.kind = kind;
  graph.K = K;
  graph.game_digest = g.digest();
  graph.offsets.reserve(n + 1);
  graph.offsets.push_back(0);
  for (int v = 0; v < static_cast<int>(n); ++v) {
    const Profile s = g.profile(v);
    for (Player p : {Player::kOne, Player::kTwo}) {
      if (kind == Process::kBetter) {
        for (Profile t : better_responses(g, s, p)) graph.targets.push_back(g.index(t));
      } else if (auto t = best_response(g, s, p)) {
        graph.targets.push_back(g.index(*t));
      }
    }
    graph.offsets.push_back(graph.targets.size());
  }
  return graph;
}

std::vector<int> SinkDecomposition::members(int component) const {
  std::vector<int> out;
  for (int v = 0; v < static_cast<int>(membership.size()); ++v) {
    if (membership[v] == component) out.push_back(v);
  }
  return out;
}

std::vector<int> SinkDecomposition::sink_components() const {
  std::vector<int> out;
  for (int c = 0; c < num_components(); ++c) {
    if (sink[c]) out.push_back(c);
  }
  return out;
}

SinkDecomposition sink_decomposition(const ResponseGraph& graph) {
  using CsrGraph =
      boost::compressed_sparse_row_graph<boost::directedS, boost::no_property,
                                         boost::no_property, boost::no_property,
                                         int, std::size_t>;
  const int n = graph.num_nodes();
  std::vector<std::pair<int, int>> edges;
  edges.reserve(graph.num_edges());
  for (int v = 0; v < n; ++v) {
    for (int w : graph.successors(v)) edges.emplace_back(v, w);
  }
  CsrGraph csr(boost::edges_are_sorted, edges.begin(), edges.end(), n);
  std::vector<int> raw(n);
  const int count = boost::strong_components(
      csr, boost::make_iterator_property_map(raw.begin(),
                                             boost::get(boost::vertex_index, csr)));

  SinkDecomposition d;
  d.kind = graph.kind;
  d.K = graph.K;
  d.game_digest = graph.game_digest;
  canonicalize(d, raw, count);
  mark_non_sinks(d, n, [&](int v, auto&& f) {
    for (int w : graph.successors(v)) f(w);
  });
  return d;
}

SinkDecomposition fast_sink_decomposition(const Game& g,
                                          const ResponseIndex& index,
                                          Process kind, std::size_t max_nodes) {
  const auto n_nodes = static_cast<std::size_t>(g.num_profiles());
  if (n_nodes > max_nodes) {
    throw CapacityError(fmt::format(
        "response graph at K={} has {} nodes (cap {})", g.K(), n_nodes, max_nodes));
  }
  const int n = static_cast<int>(n_nodes);
  auto successors = [&](int v, auto&& f) {
    for (Player p : {Player::kOne, Player::kTwo}) {
      if (index.improving_count(p, v) == 0) continue;
      f(kind == Process::kBetter ? index.next_better(p, v) : index.line_best(p, v));
    }
  };
  auto [raw, count] = tarjan(n, successors);
  SinkDecomposition d;
  d.kind = kind;
  d.K = g.K();
  d.game_digest = g.digest();
  canonicalize(d, raw, count);
  mark_non_sinks(d, n, successors);
  return d;
}

SinkDecomposition fast_sink_decomposition(const Game& g, Process kind) {
  return fast_sink_decomposition(g, ResponseIndex(g), kind);
}

std::vector<TrapReport> find_traps(const Game& g, const SinkDecomposition& sinks) {
  if (sinks.K != g.K() || sinks.game_digest != g.digest() ||
      sinks.kind != Process::kBetter) {
    throw InvalidParameter("decomposition does not belong to this game's better-response graph");
  }
  const int K = g.K();
  std::vector<TrapReport> traps;
  std::vector<int> slot(sinks.num_components(), -1);
  for (int c = 0; c < sinks.num_components(); ++c) {
    if (sinks.sink[c] && sinks.component_size[c] >= 2) {
      slot[c] = static_cast<int>(traps.size());
      TrapReport t;
      t.component = c;
      t.size = sinks.component_size[c];
      t.R.assign(K, 0);
      t.C.assign(K, 0);
      traps.push_back(std::move(t));
    }
  }
  if (traps.empty()) return traps;
  for (int v = 0; v < g.num_profiles(); ++v) {
    const int s = slot[sinks.membership[v]];
    if (s < 0) continue;
    const Profile p = g.profile(v);
    traps[s].profiles.push_back(p);
    ++traps[s].R[p.s1 - 1];
    ++traps[s].C[p.s2 - 1];
  }
  return traps;
}

std::vector<TrapReport> find_traps(const Game& g) {
  return find_traps(g, fast_sink_decomposition(g, Process::kBetter));
}

std::string to_string(TrapClass c) {
  switch (c) {
    case TrapClass::kA1: return "A1";
    case TrapClass::kA2: return "A2";
    case TrapClass::kSmall: return "Small";
  }
  return "?";
}

TrapClass classify_large_trap(const TrapReport& trap, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw InvalidParameter(fmt::format("alpha must lie in (0,1), got {}", alpha));
  }
  const double K = static_cast<double>(trap.R.size());
  const int max_line = std::max(*std::max_element(trap.R.begin(), trap.R.end()),
                                *std::max_element(trap.C.begin(), trap.C.end()));
  if (max_line >= std::pow(K, alpha / 2.0)) return TrapClass::kA1;
  if (trap.size > std::pow(K, alpha)) return TrapClass::kA2;
  return TrapClass::kSmall;
}

Absorption absorption_probabilities(const Game& g, Process process,
                                    Profile start) {
  check_profile(g, start);
  Absorption out;
  out.sinks = fast_sink_decomposition(g, process);
  out.probability = absorb<double>(g, process, start, out.sinks, g.K() <= 8);
  double total = 0.0;
  for (const auto& [comp, p] : out.probability) {
    total += p;
    if (out.sinks.component_size[comp] == 1) out.converge += p;
  }
  if (!(std::abs(total - 1.0) <= 1e-10)) {
    throw InternalError(fmt::format("absorption probabilities sum to {}", total));
  }
  return out;
}

ExactAbsorption absorption_probabilities_exact(const Game& g, Process process,
                                               Profile start) {
  check_profile(g, start);
  ExactAbsorption out;
  out.sinks = fast_sink_decomposition(g, process);
  out.probability = absorb<Rational>(g, process, start, out.sinks, true);
  Rational total = 0;
  for (const auto& [comp, p] : out.probability) {
    total += p;
    if (out.sinks.component_size[comp] == 1) out.converge += p;
  }
  if (total != 1) {
    throw InternalError("exact absorption probabilities do not sum to 1");
  }
  return out;
}

int delta_top_size(int K, double sigma) {
  if (!(sigma > 0.0 && sigma < 1.0)) {
    throw InvalidParameter(fmt::format("sigma must lie in (0,1), got {}", sigma));
  }
  const double x = std::pow(static_cast<double>(K), sigma);
  const double nearest = std::round(x);
  const double u = std::abs(x - nearest) <= 1e-9 * x ? nearest : std::ceil(x);
  return std::clamp(static_cast<int>(u), 1, K);
}

bool delta_event_occurs_with_top(const Game& g, int top) {
  const int K = g.K();
  if (top < 1 || top > K) {
    throw InvalidParameter(fmt::format("top size must lie in [1,{}], got {}", K, top));
  }
  const auto& z = g.ranks(Player::kTwo);
  std::vector<int> cols(K);
  for (int i = 0; i < K; ++i) {
    std::iota(cols.begin(), cols.end(), 0);
    std::partial_sort(cols.begin(), cols.begin() + top, cols.end(),
                      [&](int a, int b) { return z[i * K + a] > z[i * K + b]; });
    for (int j = 0; j < K; ++j) {
      if (j == i) continue;
      bool dominates = true;
      for (int t = 0; t < top && dominates; ++t) {
        dominates = z[i * K + cols[t]] > z[j * K + cols[t]];
      }
      if (dominates) return true;
    }
  }
  return false;
}

bool delta_event_occurs(const Game& g, double sigma) {
  return delta_event_occurs_with_top(g, delta_top_size(g.K(), sigma));
}

}  // namespace brlab
