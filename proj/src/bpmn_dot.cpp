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

#include <sstream>

#include "demobpmn/bpmn.hpp"

namespace demobpmn {

namespace {

std::string quoted(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') {
      out += '\\';
    }
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  out += '"';
  return out;
}

const char* shape_of(const FlowNode& n) {
  switch (n.kind) {
    case NodeKind::StartEvent: return "circle";
    case NodeKind::IntermediateCatchEvent: return "doublecircle";
    case NodeKind::EndEvent: return "circle, penwidth=3";
    case NodeKind::Task: return n.task == TaskVariant::Abstract ? "box, style=rounded" : "box";
    case NodeKind::Gateway: return "diamond";
  }
  return "box";
}

std::string label_of(const FlowNode& n) {
  std::string prefix;
  if (n.kind == NodeKind::Gateway) {
    prefix = n.gateway == GatewayVariant::Exclusive ? "X " : n.gateway == GatewayVariant::EventBased ? "EB " : "+ ";
  } else if (n.is_send()) {
    prefix = "send ";
  }
  return prefix + (n.name.empty() ? n.id : n.name);
}

}  // namespace

std::string to_dot(const BpmnGraph& graph) {
  std::ostringstream out;
  out << "digraph bpmn {\n";
  if (graph.pools.empty() && graph.message_flows.empty()) {
    out << "}\n";
    return out.str();
  }
  out << "  rankdir=LR;\n";
  for (const Pool& pool : graph.pools) {
    out << "  subgraph " << quoted("cluster_" + pool.id) << " {\n";
    out << "    label=" << quoted(pool.name.empty() ? pool.id : pool.name) << ";\n";
    for (const FlowNode& n : pool.nodes) {
      out << "    " << quoted(n.id) << " [label=" << quoted(label_of(n)) << ", shape=" << shape_of(n) << "];\n";
    }
    for (const SequenceFlow& f : pool.sequence_flows) {
      out << "    " << quoted(f.source) << " -> " << quoted(f.target);
      if (f.guard && !f.guard->empty()) {
        out << " [label=" << quoted(*f.guard) << "]";
      }
      out << ";\n";
    }
    out << "  }\n";
  }
  for (const MessageFlow& f : graph.message_flows) {
    std::string label = f.message;
    if (const Message* m = graph.find_message(f.message)) {
      label = m->name;
    }
    out << "  " << quoted(f.source) << " -> " << quoted(f.target) << " [style=dashed, constraint=false, label="
        << quoted(label) << "];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace demobpmn
