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

#include "demobpmn/bpmn.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace demobpmn {

FlowNode FlowNode::start(std::string id, std::string name) {
  FlowNode n;
  n.id = std::move(id);
  n.name = std::move(name);
  n.kind = NodeKind::StartEvent;
  return n;
}

FlowNode FlowNode::message_start(std::string id, std::string name, std::string message) {
  FlowNode n = start(std::move(id), std::move(name));
  n.trigger = EventTrigger::Message;
  n.message = std::move(message);
  return n;
}

FlowNode FlowNode::catch_event(std::string id, std::string name, std::string message) {
  FlowNode n;
  n.id = std::move(id);
  n.name = std::move(name);
  n.kind = NodeKind::IntermediateCatchEvent;
  n.message = std::move(message);
  return n;
}

FlowNode FlowNode::end(std::string id, std::string name, EndResult result) {
  FlowNode n;
  n.id = std::move(id);
  n.name = std::move(name);
  n.kind = NodeKind::EndEvent;
  n.result = result;
  return n;
}

FlowNode FlowNode::task_node(std::string id, std::string name) {
  FlowNode n;
  n.id = std::move(id);
  n.name = std::move(name);
  n.kind = NodeKind::Task;
  return n;
}

FlowNode FlowNode::send_task(std::string id, std::string name, std::string message) {
  FlowNode n = task_node(std::move(id), std::move(name));
  n.task = TaskVariant::Send;
  n.message = std::move(message);
  return n;
}

FlowNode FlowNode::receive_task(std::string id, std::string name, std::string message) {
  FlowNode n = task_node(std::move(id), std::move(name));
  n.task = TaskVariant::Receive;
  n.message = std::move(message);
  return n;
}

FlowNode FlowNode::gateway_node(std::string id, std::string name, GatewayVariant variant) {
  FlowNode n;
  n.id = std::move(id);
  n.name = std::move(name);
  n.kind = NodeKind::Gateway;
  n.gateway = variant;
  return n;
}

const FlowNode* Pool::find_node(std::string_view node_id) const {
  for (const FlowNode& n : nodes) {
    if (n.id == node_id) {
      return &n;
    }
  }
  return nullptr;
}

FlowNode* Pool::find_node(std::string_view node_id) {
  for (FlowNode& n : nodes) {
    if (n.id == node_id) {
      return &n;
    }
  }
  return nullptr;
}

std::vector<const SequenceFlow*> Pool::outgoing(std::string_view node_id) const {
  std::vector<const SequenceFlow*> out;
  for (const SequenceFlow& f : sequence_flows) {
    if (f.source == node_id) {
      out.push_back(&f);
    }
  }
  return out;
}

std::vector<const SequenceFlow*> Pool::incoming(std::string_view node_id) const {
  std::vector<const SequenceFlow*> out;
  for (const SequenceFlow& f : sequence_flows) {
    if (f.target == node_id) {
      out.push_back(&f);
    }
  }
  return out;
}

const Pool* BpmnGraph::find_pool(std::string_view pool_id) const {
  for (const Pool& p : pools) {
    if (p.id == pool_id) {
      return &p;
    }
  }
  return nullptr;
}

std::optional<std::size_t> BpmnGraph::pool_of(std::string_view node_id) const {
  for (std::size_t i = 0; i < pools.size(); ++i) {
    if (pools[i].find_node(node_id)) {
      return i;
    }
  }
  return std::nullopt;
}

const FlowNode* BpmnGraph::find_node(std::string_view node_id) const {
  for (const Pool& p : pools) {
    if (const FlowNode* n = p.find_node(node_id)) {
      return n;
    }
  }
  return nullptr;
}

const Message* BpmnGraph::find_message(std::string_view message_id) const {
  for (const Message& m : messages) {
    if (m.id == message_id) {
      return &m;
    }
  }
  return nullptr;
}

namespace {

std::string node_kind_name(const FlowNode& n) {
  switch (n.kind) {
    case NodeKind::StartEvent: return n.trigger == EventTrigger::Message ? "message start event" : "start event";
    case NodeKind::IntermediateCatchEvent: return "intermediate catch event";
    case NodeKind::EndEvent: return n.result == EndResult::Terminate ? "terminate end event" : "end event";
    case NodeKind::Task:
      switch (n.task) {
        case TaskVariant::Abstract: return "task";
        case TaskVariant::Send: return "send task";
        case TaskVariant::Receive: return "receive task";
      }
      break;
    case NodeKind::Gateway:
      switch (n.gateway) {
        case GatewayVariant::Exclusive: return "exclusive gateway";
        case GatewayVariant::EventBased: return "event-based gateway";
        case GatewayVariant::Parallel: return "parallel gateway";
      }
      break;
  }
  return "node";
}

}  // namespace

std::map<std::string, std::string> BpmnGraph::id_index() const {
  std::map<std::string, std::string> out;
  for (const Message& m : messages) out.emplace(m.id, "message");
  for (const MessageFlow& f : message_flows) out.emplace(f.id, "message flow");
  for (const Pool& p : pools) {
    out.emplace(p.id, "participant");
    out.emplace(p.process_id, "process");
    for (const Lane& l : p.lanes) out.emplace(l.id, "lane");
    for (const DataObject& d : p.data_objects) out.emplace(d.id, "data object");
    for (const FlowNode& n : p.nodes) out.emplace(n.id, node_kind_name(n));
    for (const SequenceFlow& f : p.sequence_flows) out.emplace(f.id, "sequence flow");
  }
  return out;
}

// ---------------------------------------------------------------------------

Diagnostics validate_bpmn(const BpmnGraph& graph) {
  Diagnostics out;
  auto add = [&](const char* rule, const std::string& element, std::string message) {
    out.push_back(Diagnostic{Severity::Error, rule, Locus{{}, 0, 0, element}, std::move(message)});
  };

  std::set<std::string> seen;
  auto claim = [&](const std::string& id) {
    if (id.empty()) {
      add("ID_UNIQ", id, "element without an id");
    } else if (!seen.insert(id).second) {
      add("ID_UNIQ", id, "id '" + id + "' is used more than once");
    }
  };
  for (const Message& m : graph.messages) claim(m.id);
  for (const Pool& p : graph.pools) {
    claim(p.id);
    if (!p.process_id.empty()) claim(p.process_id);  // black-box pools have no process
    for (const Lane& l : p.lanes) claim(l.id);
    for (const DataObject& d : p.data_objects) claim(d.id);
    for (const FlowNode& n : p.nodes) claim(n.id);
    for (const SequenceFlow& f : p.sequence_flows) claim(f.id);
  }
  for (const MessageFlow& f : graph.message_flows) claim(f.id);

  for (const MessageFlow& f : graph.message_flows) {
    if (!graph.find_message(f.message)) {
      add("DANGLING", f.id, "message flow references undeclared message '" + f.message + "'");
    }
    auto src = graph.pool_of(f.source);
    auto dst = graph.pool_of(f.target);
    if (!src) add("DANGLING", f.id, "message flow source '" + f.source + "' does not exist");
    if (!dst) add("DANGLING", f.id, "message flow target '" + f.target + "' does not exist");
    if (src && dst && *src == *dst) {
      add("MSG_CROSS", f.id, "message flow connects two nodes of pool '" + graph.pools[*src].id + "'");
    }
  }

  for (const Pool& pool : graph.pools) {
    for (const Lane& l : pool.lanes) {
      for (const std::string& ref : l.nodes) {
        if (!pool.find_node(ref)) {
          add("DANGLING", l.id, "lane references '" + ref + "', which is not a node of its pool");
        }
      }
    }
    for (const FlowNode& n : pool.nodes) {
      if (!n.message.empty() && !graph.find_message(n.message)) {
        add("DANGLING", n.id, "references undeclared message '" + n.message + "'");
      }
    }

    std::vector<const SequenceFlow*> local;
    for (const SequenceFlow& f : pool.sequence_flows) {
      bool ok = true;
      for (const std::string* end : {&f.source, &f.target}) {
        if (pool.find_node(*end)) {
          continue;
        }
        ok = false;
        if (graph.pool_of(*end)) {
          add("SEQ_SCOPE", f.id, "sequence flow leaves pool '" + pool.id + "' via '" + *end + "'");
        } else {
          add("DANGLING", f.id, "sequence flow references missing node '" + *end + "'");
        }
      }
      if (ok) {
        local.push_back(&f);
      }
    }

    for (const FlowNode& n : pool.nodes) {
      if (n.kind == NodeKind::StartEvent && !pool.incoming(n.id).empty()) {
        add("START_IN", n.id, "start event has an incoming sequence flow");
      }
      if (n.kind == NodeKind::EndEvent && !pool.outgoing(n.id).empty()) {
        add("END_OUT", n.id, "end event has an outgoing sequence flow");
      }
      if (n.is_gateway(GatewayVariant::EventBased)) {
        for (const SequenceFlow* f : pool.outgoing(n.id)) {
          const FlowNode* t = pool.find_node(f->target);
          if (t && !(t->kind == NodeKind::IntermediateCatchEvent ||
                     (t->kind == NodeKind::Task && t->task == TaskVariant::Receive))) {
            add("EBG_TARGETS", f->id, "event-based gateway '" + n.id + "' leads to '" + t->id + "', which waits for no event");
          }
        }
      }
    }

    auto sweep = [&](bool forward) {
      std::set<std::string> reached;
      std::deque<std::string> work;
      for (const FlowNode& n : pool.nodes) {
        if (n.kind == (forward ? NodeKind::StartEvent : NodeKind::EndEvent)) {
          reached.insert(n.id);
          work.push_back(n.id);
        }
      }
      while (!work.empty()) {
        std::string id = std::move(work.front());
        work.pop_front();
        for (const SequenceFlow* f : local) {
          const std::string& from = forward ? f->source : f->target;
          const std::string& to = forward ? f->target : f->source;
          if (from == id && reached.insert(to).second) {
            work.push_back(to);
          }
        }
      }
      return reached;
    };
    const std::set<std::string> reachable = sweep(true);
    const std::set<std::string> coreachable = sweep(false);
    for (const FlowNode& n : pool.nodes) {
      if (n.kind != NodeKind::StartEvent && !reachable.count(n.id)) {
        add("REACH", n.id, "not reachable from a start event of pool '" + pool.id + "'");
      }
      if (!coreachable.count(n.id)) {
        add("COREACH", n.id, "no path to an end event of pool '" + pool.id + "'");
      }
    }
  }
  return out;
}

}  // namespace demobpmn
