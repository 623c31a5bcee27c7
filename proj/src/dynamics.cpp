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

#include "brlab/dynamics.hpp"

#include <algorithm>
#include <random>

#include <fmt/core.h>

#include "brlab/errors.hpp"

namespace brlab {
namespace {

Player draw_player(Stream& stream) {
  std::bernoulli_distribution coin(0.5);
  return coin(stream) ? Player::kOne : Player::kTwo;
}

int uniform_below(int n, Stream& stream) {
  return std::uniform_int_distribution<int>(0, n - 1)(stream);
}

class Recorder {
 public:
  Recorder(Trajectory& t, std::size_t cap) : t_(t), cap_(cap) {}

  void start(Profile s) { t_.steps.push_back(s); }
  void add(Profile s, Player mover) {
    if (t_.steps.size() >= cap_) {
      t_.truncated = true;
      return;
    }
    t_.steps.push_back(s);
    t_.movers.push_back(mover);
  }

 private:
  Trajectory& t_;
  std::size_t cap_;
};

std::size_t cap_for(const Game& g, const RunOptions& options) {
  return std::max<std::size_t>(
      1, options.trajectory_cap.value_or(4 * static_cast<std::size_t>(g.K())));
}

// Deterministic best-response successor of a profile where at most one
// player can improve.
std::optional<Profile> forced_successor(const Game& g, Profile s) {
  if (auto t = best_response(g, s, Player::kOne)) return t;
  return best_response(g, s, Player::kTwo);
}

}  // namespace

Step brd_step(const Game& g, Profile s, Stream& stream) {
  check_profile(g, s);
  const Player first = draw_player(stream);
  for (Player p : {first, other(first)}) {
    auto options = better_responses(g, s, p);
    if (options.empty()) continue;
    std::sort(options.begin(), options.end(), [&](Profile a, Profile b) {
      return g.payoff(p, a) < g.payoff(p, b);
    });
    return {options[uniform_below(static_cast<int>(options.size()), stream)], p};
  }
  return {s, std::nullopt};
}

Step brd_step(const Game& g, const ResponseIndex& index, Profile s,
              Stream& stream) {
  check_profile(g, s);
  const int v = g.index(s);
  const Player first = draw_player(stream);
  for (Player p : {first, other(first)}) {
    const int n = index.improving_count(p, v);
    if (n == 0) continue;
    const int pos = index.position(p, v) + 1 + uniform_below(n, stream);
    return {g.profile(index.at_position(p, v, pos)), p};
  }
  return {s, std::nullopt};
}

Step best_step(const Game& g, Profile s, Stream& stream) {
  check_profile(g, s);
  const Player first = draw_player(stream);
  for (Player p : {first, other(first)}) {
    if (auto t = best_response(g, s, p)) return {*t, p};
  }
  return {s, std::nullopt};
}

std::pair<RunOutcome, Trajectory> run_best_response(const Game& g,
                                                    Stream& stream,
                                                    Profile start,
                                                    const RunOptions& options) {
  check_profile(g, start);
  const int K = g.K();
  RunOutcome outcome;
  Trajectory trajectory;
  Recorder rec(trajectory, cap_for(g, options));
  rec.start(start);

  // A line is consumed once its best response lies on the path.
  std::vector<char> row_used(K, 0), col_used(K, 0);
  const bool col_best = !best_response(g, start, Player::kOne);
  const bool row_best = !best_response(g, start, Player::kTwo);
  if (col_best && row_best) {
    outcome.kind = OutcomeKind::kConverged;
    outcome.pne = start;
    return {outcome, trajectory};
  }
  if (col_best) col_used[start.s2 - 1] = 1;
  if (row_best) row_used[start.s1 - 1] = 1;

  Profile cur = start;
  const std::size_t limit = 2 * static_cast<std::size_t>(K) + 1;
  for (std::size_t t = 1; t <= limit; ++t) {
    const Step step = best_step(g, cur, stream);
    if (!step.mover) throw InternalError("best-response run stalled off a PNE");
    const Profile next = step.next;
    rec.add(next, *step.mover);
    outcome.detection_step = t;
    if (is_pne(g, next)) {
      outcome.kind = OutcomeKind::kConverged;
      outcome.pne = next;
      return {outcome, trajectory};
    }
    bool revisit;
    if (*step.mover == Player::kOne) {
      revisit = row_used[next.s1 - 1] != 0;
      col_used[next.s2 - 1] = 1;
    } else {
      revisit = col_used[next.s2 - 1] != 0;
      row_used[next.s1 - 1] = 1;
    }
    if (revisit) {
      outcome.kind = OutcomeKind::kTrapped;
      // From here the walk is deterministic; follow it to its cycle.
      std::vector<int> seen_at(g.num_profiles(), -1);
      std::vector<int> walk;
      Profile p = next;
      while (seen_at[g.index(p)] < 0) {
        seen_at[g.index(p)] = static_cast<int>(walk.size());
        walk.push_back(g.index(p));
        auto succ = forced_successor(g, p);
        if (!succ) throw InternalError("trapped best-response walk reached a PNE");
        p = *succ;
      }
      const int cycle_start = seen_at[g.index(p)];
      outcome.trap_id = *std::min_element(walk.begin() + cycle_start, walk.end());
      if (options.confirm_periodic) {
        if (cycle_start != 0) {
          throw InternalError(fmt::format(
              "profile {} flagged as trapped is not on its limit cycle",
              to_string(next)));
        }
        outcome.period = walk.size();
      }
      return {outcome, trajectory};
    }
    cur = next;
  }
  throw InternalError(fmt::format(
      "best-response run exceeded {} transitions without classification", limit));
}

std::pair<RunOutcome, Trajectory> run_better_response(
    const Game& g, const ResponseIndex& index, Stream& stream,
    const SinkDecomposition& sinks, Profile start, const RunOptions& options) {
  check_profile(g, start);
  if (sinks.kind != Process::kBetter || sinks.K != g.K() ||
      sinks.game_digest != g.digest() ||
      static_cast<int>(sinks.membership.size()) != g.num_profiles()) {
    throw InvalidParameter(
        "sink decomposition does not match this game's better-response graph");
  }
  RunOutcome outcome;
  Trajectory trajectory;
  Recorder rec(trajectory, cap_for(g, options));
  rec.start(start);

  Profile cur = start;
  std::size_t t = 0;
  while (!sinks.is_sink_node(g.index(cur))) {
    const Step step = brd_step(g, index, cur, stream);
    if (!step.mover) throw InternalError("better-response run stalled off a sink");
    cur = step.next;
    rec.add(cur, *step.mover);
    ++t;
  }
  const int comp = sinks.membership[g.index(cur)];
  outcome.detection_step = t;
  if (sinks.component_size[comp] == 1) {
    outcome.kind = OutcomeKind::kConverged;
    outcome.pne = cur;
  } else {
    outcome.kind = OutcomeKind::kTrapped;
    outcome.trap_id = comp;
  }
  return {outcome, trajectory};
}

std::pair<RunOutcome, Trajectory> run_better_response(
    const Game& g, Stream& stream, const SinkDecomposition& sinks,
    Profile start, const RunOptions& options) {
  return run_better_response(g, ResponseIndex(g), stream, sinks, start, options);
}

void write_trajectory_csv(std::ostream& out, const Trajectory& t) {
  out << "step,s1,s2,mover\n";
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    const int mover = i == 0 ? 0 : to_int(t.movers[i - 1]);
    out << i << ',' << t.steps[i].s1 << ',' << t.steps[i].s2 << ',' << mover
        << '\n';
  }
}

}  // namespace brlab
