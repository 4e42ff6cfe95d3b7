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

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "demobpmn/diagnostic.hpp"

namespace demobpmn {

/// The BPMN 2.0 model namespace every emitted document is bound to.
inline constexpr std::string_view kBpmnModelNs = "http://www.omg.org/spec/BPMN/20100524/MODEL";

enum class NodeKind { StartEvent, IntermediateCatchEvent, EndEvent, Task, Gateway };
enum class EventTrigger { None, Message };
enum class EndResult { None, Terminate };
enum class TaskVariant { Abstract, Send, Receive };
enum class GatewayVariant { Exclusive, EventBased, Parallel };

struct FlowNode {
  std::string id;
  std::string name;
  NodeKind kind = NodeKind::Task;
  EventTrigger trigger = EventTrigger::None;  // start events
  EndResult result = EndResult::None;         // end events
  TaskVariant task = TaskVariant::Abstract;
  GatewayVariant gateway = GatewayVariant::Exclusive;
  std::string message;  // message start, catch, send and receive

  bool is_event() const {
    return kind == NodeKind::StartEvent || kind == NodeKind::IntermediateCatchEvent || kind == NodeKind::EndEvent;
  }
  bool is_send() const { return kind == NodeKind::Task && task == TaskVariant::Send; }
  /// Waits for a message: message start, intermediate catch, receive task.
  bool is_receiver() const {
    return (kind == NodeKind::StartEvent && trigger == EventTrigger::Message) ||
           kind == NodeKind::IntermediateCatchEvent || (kind == NodeKind::Task && task == TaskVariant::Receive);
  }
  bool is_gateway(GatewayVariant v) const { return kind == NodeKind::Gateway && gateway == v; }

  auto operator<=>(const FlowNode&) const = default;

  static FlowNode start(std::string id, std::string name);
  static FlowNode message_start(std::string id, std::string name, std::string message);
  static FlowNode catch_event(std::string id, std::string name, std::string message);
  static FlowNode end(std::string id, std::string name, EndResult result = EndResult::None);
  static FlowNode task_node(std::string id, std::string name);
  static FlowNode send_task(std::string id, std::string name, std::string message);
  static FlowNode receive_task(std::string id, std::string name, std::string message);
  static FlowNode gateway_node(std::string id, std::string name, GatewayVariant variant);
};

struct SequenceFlow {
  std::string id;
  std::string source;
  std::string target;
  std::optional<std::string> guard;

  auto operator<=>(const SequenceFlow&) const = default;
};

struct MessageFlow {
  std::string id;
  std::string source;
  std::string target;
  std::string message;

  auto operator<=>(const MessageFlow&) const = default;
};

struct Message {
  std::string id;
  std::string name;

  auto operator<=>(const Message&) const = default;
};

struct Lane {
  std::string id;
  std::string name;
  std::vector<std::string> nodes;

  auto operator<=>(const Lane&) const = default;
};

/// Payload reference only; carries no data semantics.
struct DataObject {
  std::string id;
  std::string name;

  auto operator<=>(const DataObject&) const = default;
};

struct Pool {
  std::string id;          // participant id
  std::string name;
  std::string process_id;  // id of the process the participant references
  std::vector<Lane> lanes;
  std::vector<FlowNode> nodes;
  std::vector<SequenceFlow> sequence_flows;
  std::vector<DataObject> data_objects;

  const FlowNode* find_node(std::string_view node_id) const;
  FlowNode* find_node(std::string_view node_id);
  std::vector<const SequenceFlow*> outgoing(std::string_view node_id) const;
  std::vector<const SequenceFlow*> incoming(std::string_view node_id) const;

  auto operator<=>(const Pool&) const = default;
};

/// A collaboration: one participant (pool) per process plus the messages
/// exchanged between them. Element order is declaration order and is what
/// the serializers emit.
struct BpmnGraph {
  std::vector<Pool> pools;
  std::vector<Message> messages;
  std::vector<MessageFlow> message_flows;

  bool empty() const { return pools.empty() && messages.empty() && message_flows.empty(); }

  const Pool* find_pool(std::string_view pool_id) const;
  /// Pool index holding the node, or nullopt.
  std::optional<std::size_t> pool_of(std::string_view node_id) const;
  const FlowNode* find_node(std::string_view node_id) const;
  const Message* find_message(std::string_view message_id) const;

  /// Every element id mapped to a short description of its kind.
  std::map<std::string, std::string> id_index() const;

  auto operator<=>(const BpmnGraph&) const = default;
};

/// Rule ids: SEQ_SCOPE, MSG_CROSS, START_IN, END_OUT, REACH, COREACH,
/// ID_UNIQ, EBG_TARGETS, DANGLING.
Diagnostics validate_bpmn(const BpmnGraph& graph);

struct XmlOptions {
  /// Emit a diagram-interchange section with a naive layered layout.
  bool layout = false;
};

/// Throws Error(InvalidGraph) when validation fails.
std::string to_xml(const BpmnGraph& graph, const XmlOptions& options = {});

struct ParsedBpmn {
  BpmnGraph graph;
  std::map<std::string, std::pair<int, int>> positions;  // element id -> line, column
};

/// Throws Error(XmlSyntax | UnsupportedElement | Dangling).
ParsedBpmn parse_bpmn(std::string_view text);
BpmnGraph from_xml(std::string_view text);

std::string to_dot(const BpmnGraph& graph);

}  // namespace demobpmn
