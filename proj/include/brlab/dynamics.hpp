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
#include <optional>
#include <ostream>
#include <utility>
#include <vector>

#include "brlab/game.hpp"
#include "brlab/random.hpp"
#include "brlab/response_graph.hpp"

namespace brlab {

struct Step {
  Profile next;
  std::optional<Player> mover;  // absent at a PNE
};

// One better-response transition: a uniformly drawn player moves to a uniform
// element of their improving set, or the other player does if it is empty.
// Improving sets are enumerated in increasing payoff order, so both
// overloads consume the stream identically.
Step brd_step(const Game& g, Profile s, Stream& stream);
Step brd_step(const Game& g, const ResponseIndex& index, Profile s,
              Stream& stream);

// One best-response transition, same player-selection rule.
Step best_step(const Game& g, Profile s, Stream& stream);

struct Trajectory {
  std::vector<Profile> steps;  // steps[0] is the start profile
  std::vector<Player> movers;  // movers[t] produced steps[t + 1]
  bool truncated = false;      // recording stopped at the length cap
};

enum class OutcomeKind { kConverged, kTrapped };

struct RunOutcome {
  OutcomeKind kind = OutcomeKind::kConverged;
  std::optional<Profile> pne;
  std::size_t detection_step = 0;  // transitions taken when classified
  // Best response: smallest profile index on the limit cycle. Better
  // response: component index in the sink decomposition.
  std::optional<int> trap_id;
  // Best response with confirm_periodic: length of the limit cycle.
  std::optional<std::size_t> period;
};

struct RunOptions {
  // Maximum number of recorded profiles; default 4K.
  std::optional<std::size_t> trajectory_cap;
  // Best response only: walk on past the trap and verify the orbit closes.
  bool confirm_periodic = false;
};

// Best-response dynamics. A run is trapped at the first transition that
// enters a row or column whose best response already lies on the path
// (unless the new profile is a PNE). This happens within 2K - 1 transitions,
// or 2K when the start is a best response for neither player.
std::pair<RunOutcome, Trajectory> run_best_response(const Game& g,
                                                    Stream& stream,
                                                    Profile start = {1, 1},
                                                    const RunOptions& options = {});

// Better-response dynamics until the walk enters a sink component of the
// game's better-response graph. `sinks` must come from this game.
std::pair<RunOutcome, Trajectory> run_better_response(
    const Game& g, Stream& stream, const SinkDecomposition& sinks,
    Profile start = {1, 1}, const RunOptions& options = {});
std::pair<RunOutcome, Trajectory> run_better_response(
    const Game& g, const ResponseIndex& index, Stream& stream,
    const SinkDecomposition& sinks, Profile start = {1, 1},
    const RunOptions& options = {});

// CSV with header "step,s1,s2,mover"; mover is 0 for the start row.
void write_trajectory_csv(std::ostream& out, const Trajectory& t);

}  // namespace brlab
