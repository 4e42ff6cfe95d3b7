// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Token-game view of a collaboration. Tokens sit on sequence flows;
// messages queue per (sender pool, receiver pool) channel.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "demobpmn/bpmn.hpp"
#include "demobpmn/simulator.hpp"
#include "demobpmn/trace.hpp"

namespace demobpmn::sim {

inline const std::string kAnother = "another";
inline const std::string kDone = "done";

struct Node {
  const FlowNode* src = nullptr;
  int pool = 0;
  std::vector<int> in;
  std::vector<int> out;
  int message = -1;
  std::vector<int> targets;  // pools reached by a send
  std::vector<int> sources;  // pools a receiver hears from
  std::optional<TraceStep> step;
  bool revoke_send = false;
  int start_slot = -1;  // none start events
  bool has_card = false;
  unsigned low = 1;
  std::optional<unsigned> high;
};

struct Flow {
  int source = 0;
  int target = 0;
  std::string guard;
};

struct Marking {
  std::vector<std::uint8_t> tokens;
  std::vector<std::uint8_t> starts;
  std::vector<std::vector<int>> channels;
  std::vector<std::uint8_t> counters;
  std::uint8_t revokes = 0;

  std::string key() const;
};

struct Move {
  int node = -1;
  int in_flow = -1;
  int out_flow = -1;
  int catch_node = -1;  // event-based gateways fire together with the catch
  int channel = -1;
};

struct Moves {
  std::vector<Move> moves;
  bool local = false;          // all moves belong to one node and are invisible
  bool bound_blocked = false;  // something could not move because of a bound
};

enum class Admission { Allowed, Bounded, Forbidden };

enum class Reduction {
  None,
  Local,  // invisible moves first
  Safe,   // also non-revoke sends and single-source receives; hides act order
};

struct Net {
  explicit Net(const BpmnGraph& graph);

  std::vector<Node> nodes;
  std::vector<Flow> flows;
  std::vector<std::string> messages;
  std::vector<std::string> pool_ids;
  std::vector<std::vector<int>> pool_nodes;
  std::vector<int> none_starts;

  Marking initial() const;
  bool idle(const Marking& m, int pool) const;
  bool complete(const Marking& m) const;
  Admission admit(const Marking& m, int gateway, int flow, const Bounds& bounds) const;
  void deliverable(const Marking& m, int receiver, std::vector<int>& out) const;
  /// Under a reduction, only the moves of the first node that can move
  /// without interfering with other pools are returned when there is one.
  Moves moves(const Marking& m, const Bounds& bounds, Reduction reduce = Reduction::Local) const;
  /// Returns the send node when the move performed an act.
  std::optional<int> apply(Marking& m, const Move& mv) const;

  std::vector<std::string> stuck_nodes(const Marking& m) const;
  std::vector<std::string> queued_messages(const Marking& m) const;
  Trace trace_of(const std::vector<int>& sends) const;
};

}  // namespace demobpmn::sim
