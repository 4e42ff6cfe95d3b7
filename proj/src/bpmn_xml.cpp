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

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "demobpmn/bpmn.hpp"
#include "demobpmn/error.hpp"
#include "xml.hpp"

namespace demobpmn {

namespace {

constexpr std::string_view kDiNs = "http://www.omg.org/spec/BPMN/20100524/DI";
constexpr std::string_view kDcNs = "http://www.omg.org/spec/DD/20100524/DC";
constexpr std::string_view kDdiNs = "http://www.omg.org/spec/DD/20100524/DI";

using Attrs = std::vector<std::pair<std::string, std::string>>;

Attrs id_name(const std::string& id, const std::string& name) {
  Attrs a{{"id", id}};
  if (!name.empty()) {
    a.emplace_back("name", name);
  }
  return a;
}

void write_node(xml::Writer& w, const FlowNode& n) {
  Attrs attrs = id_name(n.id, n.name);
  switch (n.kind) {
    case NodeKind::StartEvent:
      if (n.trigger == EventTrigger::Message) {
        w.open("bpmn:startEvent", attrs);
        w.empty("bpmn:messageEventDefinition", {{"messageRef", n.message}});
        w.close();
      } else {
        w.empty("bpmn:startEvent", attrs);
      }
      return;
    case NodeKind::IntermediateCatchEvent:
      w.open("bpmn:intermediateCatchEvent", attrs);
      w.empty("bpmn:messageEventDefinition", {{"messageRef", n.message}});
      w.close();
      return;
    case NodeKind::EndEvent:
      if (n.result == EndResult::Terminate) {
        w.open("bpmn:endEvent", attrs);
        w.empty("bpmn:terminateEventDefinition");
        w.close();
      } else {
        w.empty("bpmn:endEvent", attrs);
      }
      return;
    case NodeKind::Task:
      switch (n.task) {
        case TaskVariant::Abstract: w.empty("bpmn:task", attrs); return;
        case TaskVariant::Send:
          attrs.emplace_back("messageRef", n.message);
          w.empty("bpmn:sendTask", attrs);
          return;
        case TaskVariant::Receive:
          attrs.emplace_back("messageRef", n.message);
          w.empty("bpmn:receiveTask", attrs);
          return;
      }
      return;
    case NodeKind::Gateway:
      switch (n.gateway) {
        case GatewayVariant::Exclusive: w.empty("bpmn:exclusiveGateway", attrs); return;
        case GatewayVariant::EventBased: w.empty("bpmn:eventBasedGateway", attrs); return;
        case GatewayVariant::Parallel: w.empty("bpmn:parallelGateway", attrs); return;
      }
      return;
  }
}

struct Box {
  int x, y, w, h;
  int cx() const { return x + w / 2; }
  int cy() const { return y + h / 2; }
};

// Layered left-to-right: a node's column is its BFS depth from the pool's
// start events; rows fill top-down within a column.
void write_layout(xml::Writer& w, const BpmnGraph& graph) {
  std::map<std::string, Box> boxes;
  std::vector<Box> pool_boxes;
  int top = 40;
  for (const Pool& pool : graph.pools) {
    std::map<std::string, int> depth;
    std::deque<std::string> work;
    for (const FlowNode& n : pool.nodes) {
      if (n.kind == NodeKind::StartEvent) {
        depth[n.id] = 0;
        work.push_back(n.id);
      }
    }
    while (!work.empty()) {
      std::string id = work.front();
      work.pop_front();
      for (const SequenceFlow* f : pool.outgoing(id)) {
        if (!depth.count(f->target)) {
          depth[f->target] = depth[id] + 1;
          work.push_back(f->target);
        }
      }
    }
    std::map<int, int> rows;
    int max_rows = 1;
    int max_col = 0;
    for (const FlowNode& n : pool.nodes) {
      const int col = depth.count(n.id) ? depth[n.id] : 0;
      const int row = rows[col]++;
      max_rows = std::max(max_rows, row + 1);
      max_col = std::max(max_col, col);
      int bw = 100;
      int bh = 80;
      if (n.is_event()) {
        bw = bh = 36;
      } else if (n.kind == NodeKind::Gateway) {
        bw = bh = 50;
      }
      const int cx = 160 + col * 140 + 50;
      const int cy = top + 30 + row * 110 + 40;
      boxes[n.id] = Box{cx - bw / 2, cy - bh / 2, bw, bh};
    }
    const int height = max_rows * 110 + 60;
    pool_boxes.push_back(Box{100, top, 160 + (max_col + 1) * 140, height});
    top += height + 40;
  }

  auto bounds = [&](const Box& b) {
    w.empty("dc:Bounds", {{"x", std::to_string(b.x)},
                          {"y", std::to_string(b.y)},
                          {"width", std::to_string(b.w)},
                          {"height", std::to_string(b.h)}});
  };
  auto edge = [&](const std::string& id, const std::string& from, const std::string& to) {
    w.open("bpmndi:BPMNEdge", {{"id", id + "_di"}, {"bpmnElement", id}});
    for (const std::string* end : {&from, &to}) {
      const Box& b = boxes[*end];
      w.empty("di:waypoint", {{"x", std::to_string(b.cx())}, {"y", std::to_string(b.cy())}});
    }
    w.close();
  };

  w.open("bpmndi:BPMNDiagram", {{"id", "diagram"}});
  w.open("bpmndi:BPMNPlane", {{"id", "plane"}, {"bpmnElement", "collaboration"}});
  for (std::size_t i = 0; i < graph.pools.size(); ++i) {
    const Pool& pool = graph.pools[i];
    w.open("bpmndi:BPMNShape", {{"id", pool.id + "_di"}, {"bpmnElement", pool.id}, {"isHorizontal", "true"}});
    bounds(pool_boxes[i]);
    w.close();
    for (const FlowNode& n : pool.nodes) {
      w.open("bpmndi:BPMNShape", {{"id", n.id + "_di"}, {"bpmnElement", n.id}});
      bounds(boxes[n.id]);
      w.close();
    }
    for (const SequenceFlow& f : pool.sequence_flows) {
      edge(f.id, f.source, f.target);
    }
  }
  for (const MessageFlow& f : graph.message_flows) {
    edge(f.id, f.source, f.target);
  }
  w.close();
  w.close();
}

}  // namespace

std::string to_xml(const BpmnGraph& graph, const XmlOptions& options) {
  if (Diagnostics ds = validate_bpmn(graph); !ds.empty()) {
    throw Error(ErrorKind::InvalidGraph, "graph fails validation: " + format_diagnostic(ds.front()) +
                                             (ds.size() > 1 ? " (+" + std::to_string(ds.size() - 1) + " more)" : ""));
  }
  xml::Writer w;
  Attrs root{{"xmlns:bpmn", std::string(kBpmnModelNs)}};
  if (options.layout && !graph.pools.empty()) {
    root.emplace_back("xmlns:bpmndi", std::string(kDiNs));
    root.emplace_back("xmlns:dc", std::string(kDcNs));
    root.emplace_back("xmlns:di", std::string(kDdiNs));
  }
  root.emplace_back("id", "definitions");
  root.emplace_back("targetNamespace", "urn:demobpmn");
  if (graph.empty()) {
    w.empty("bpmn:definitions", root);
    return w.str();
  }
  w.open("bpmn:definitions", root);
  for (const Message& m : graph.messages) {
    w.empty("bpmn:message", id_name(m.id, m.name));
  }
  if (!graph.pools.empty() || !graph.message_flows.empty()) {
    w.open("bpmn:collaboration", {{"id", "collaboration"}});
    for (const Pool& p : graph.pools) {
      Attrs a = id_name(p.id, p.name);
      if (!p.process_id.empty()) {
        a.emplace_back("processRef", p.process_id);
      }
      w.empty("bpmn:participant", a);
    }
    for (const MessageFlow& f : graph.message_flows) {
      w.empty("bpmn:messageFlow",
              {{"id", f.id}, {"sourceRef", f.source}, {"targetRef", f.target}, {"messageRef", f.message}});
    }
    w.close();
  }
  for (const Pool& p : graph.pools) {
    if (p.process_id.empty()) {
      continue;
    }
    if (p.lanes.empty() && p.nodes.empty() && p.sequence_flows.empty() && p.data_objects.empty()) {
      w.empty("bpmn:process", {{"id", p.process_id}, {"isExecutable", "false"}});
      continue;
    }
    w.open("bpmn:process", {{"id", p.process_id}, {"isExecutable", "false"}});
    if (!p.lanes.empty()) {
      w.open("bpmn:laneSet", {{"id", p.process_id + "_lanes"}});
      for (const Lane& l : p.lanes) {
        if (l.nodes.empty()) {
          w.empty("bpmn:lane", id_name(l.id, l.name));
          continue;
        }
        w.open("bpmn:lane", id_name(l.id, l.name));
        for (const std::string& ref : l.nodes) {
          w.text_element("bpmn:flowNodeRef", ref);
        }
        w.close();
      }
      w.close();
    }
    for (const DataObject& d : p.data_objects) {
      w.empty("bpmn:dataObject", id_name(d.id, d.name));
    }
    for (const FlowNode& n : p.nodes) {
      write_node(w, n);
    }
    for (const SequenceFlow& f : p.sequence_flows) {
      Attrs a{{"id", f.id}};
      if (f.guard) {
        a.emplace_back("name", *f.guard);
      }
      a.emplace_back("sourceRef", f.source);
      a.emplace_back("targetRef", f.target);
      w.empty("bpmn:sequenceFlow", a);
    }
    w.close();
  }
  if (options.layout && !graph.pools.empty()) {
    write_layout(w, graph);
  }
  w.close();
  return w.str();
}

// ---------------------------------------------------------------------------
// Reader

namespace {

class Reader {
 public:
  ParsedBpmn read(std::string_view text) {
    xml::Element root = xml::parse(text);
    if (root.ns != kBpmnModelNs || root.local != "definitions") {
      throw Error(ErrorKind::UnsupportedElement,
                  at(root) + "root element must be definitions in the BPMN model namespace, found <" + root.qname + ">");
    }
    std::vector<const xml::Element*> participants;
    std::map<std::string, const xml::Element*> processes;
    std::vector<std::string> process_order;
    for (const xml::Element& child : root.children) {
      if (!is_model(child)) {
        continue;
      }
      if (child.local == "message") {
        Message m{required(child, "id"), optional(child, "name")};
        note(m.id, child);
        out_.graph.messages.push_back(std::move(m));
      } else if (child.local == "collaboration") {
        for (const xml::Element& c : child.children) {
          if (!is_model(c) || ignorable(c)) {
            continue;
          }
          if (c.local == "participant") {
            participants.push_back(&c);
          } else if (c.local == "messageFlow") {
            MessageFlow f{required(c, "id"), required(c, "sourceRef"), required(c, "targetRef"),
                          optional(c, "messageRef")};
            note(f.id, c);
            out_.graph.message_flows.push_back(std::move(f));
          } else {
            unsupported(c);
          }
        }
      } else if (child.local == "process") {
        const std::string id = required(child, "id");
        processes[id] = &child;
        process_order.push_back(id);
      } else if (!ignorable(child)) {
        unsupported(child);
      }
    }

    std::set<std::string> used;
    for (const xml::Element* p : participants) {
      Pool pool;
      pool.id = required(*p, "id");
      pool.name = optional(*p, "name");
      pool.process_id = optional(*p, "processRef");
      note(pool.id, *p);
      if (!pool.process_id.empty()) {
        auto it = processes.find(pool.process_id);
        if (it == processes.end()) {
          throw Error(ErrorKind::Dangling, at(*p) + "participant '" + pool.id + "' references missing process '" +
                                               pool.process_id + "'");
        }
        used.insert(pool.process_id);
        note(pool.process_id, *it->second);
        read_process(*it->second, pool);
      }
      out_.graph.pools.push_back(std::move(pool));
    }
    for (const std::string& id : process_order) {
      if (!used.count(id)) {
        throw Error(ErrorKind::Dangling, at(*processes[id]) + "process '" + id + "' has no participant");
      }
    }
    check_references();
    return std::move(out_);
  }

 private:
  static bool is_model(const xml::Element& e) { return e.ns == kBpmnModelNs; }

  static bool ignorable(const xml::Element& e) {
    return e.local == "documentation" || e.local == "extensionElements" || e.local == "incoming" ||
           e.local == "outgoing" || e.local == "conditionExpression";
  }

  static std::string at(const xml::Element& e) {
    return std::to_string(e.line) + ":" + std::to_string(e.column) + ": ";
  }

  [[noreturn]] static void unsupported(const xml::Element& e) {
    throw Error(ErrorKind::UnsupportedElement, at(e) + "unsupported element '" + e.local + "'");
  }

  static std::string required(const xml::Element& e, const char* attr) {
    if (const std::string* v = e.attribute(attr)) {
      return *v;
    }
    throw Error(ErrorKind::XmlSyntax, at(e) + "<" + e.qname + "> lacks required attribute " + attr);
  }

  static std::string optional(const xml::Element& e, const char* attr) {
    const std::string* v = e.attribute(attr);
    return v ? *v : std::string();
  }

  void note(const std::string& id, const xml::Element& e) { out_.positions.emplace(id, std::make_pair(e.line, e.column)); }

  // The single event definition of an event element, if any.
  static const xml::Element* event_definition(const xml::Element& e) {
    const xml::Element* found = nullptr;
    for (const xml::Element& c : e.children) {
      if (!is_model(c) || ignorable(c)) {
        continue;
      }
      if (c.local != "messageEventDefinition" && c.local != "terminateEventDefinition") {
        unsupported(c);
      }
      if (found) {
        throw Error(ErrorKind::UnsupportedElement, at(c) + "multiple event definitions on '" + required(e, "id") + "'");
      }
      found = &c;
    }
    return found;
  }

  static void no_children(const xml::Element& e) {
    for (const xml::Element& c : e.children) {
      if (is_model(c) && !ignorable(c)) {
        unsupported(c);
      }
    }
  }

  void read_process(const xml::Element& proc, Pool& pool) {
    for (const xml::Element& c : proc.children) {
      if (!is_model(c) || ignorable(c)) {
        continue;
      }
      const std::string& k = c.local;
      if (k == "laneSet") {
        for (const xml::Element& l : c.children) {
          if (!is_model(l) || ignorable(l)) {
            continue;
          }
          if (l.local != "lane") {
            unsupported(l);
          }
          Lane lane{required(l, "id"), optional(l, "name"), {}};
          note(lane.id, l);
          for (const xml::Element& ref : l.children) {
            if (!is_model(ref) || ignorable(ref)) {
              continue;
            }
            if (ref.local != "flowNodeRef") {
              unsupported(ref);
            }
            std::string text = ref.text;
            text.erase(0, text.find_first_not_of(" \t\r\n"));
            text.erase(text.find_last_not_of(" \t\r\n") + 1);
            lane.nodes.push_back(std::move(text));
          }
          pool.lanes.push_back(std::move(lane));
        }
        continue;
      }
      if (k == "dataObject") {
        DataObject d{required(c, "id"), optional(c, "name")};
        note(d.id, c);
        pool.data_objects.push_back(std::move(d));
        continue;
      }
      if (k == "sequenceFlow") {
        SequenceFlow f{required(c, "id"), required(c, "sourceRef"), required(c, "targetRef"), std::nullopt};
        if (const std::string* name = c.attribute("name")) {
          f.guard = *name;
        }
        note(f.id, c);
        pool.sequence_flows.push_back(std::move(f));
        continue;
      }

      const std::string id = required(c, "id");
      const std::string name = optional(c, "name");
      FlowNode node;
      if (k == "startEvent" || k == "intermediateCatchEvent" || k == "endEvent") {
        const xml::Element* def = event_definition(c);
        if (k == "startEvent") {
          if (def && def->local != "messageEventDefinition") {
            unsupported(*def);
          }
          node = def ? FlowNode::message_start(id, name, required(*def, "messageRef")) : FlowNode::start(id, name);
        } else if (k == "intermediateCatchEvent") {
          if (!def || def->local != "messageEventDefinition") {
            throw Error(ErrorKind::UnsupportedElement, at(c) + "intermediate catch event '" + id +
                                                           "' must carry a messageEventDefinition");
          }
          node = FlowNode::catch_event(id, name, required(*def, "messageRef"));
        } else {
          if (def && def->local != "terminateEventDefinition") {
            unsupported(*def);
          }
          node = FlowNode::end(id, name, def ? EndResult::Terminate : EndResult::None);
        }
      } else if (k == "task") {
        no_children(c);
        node = FlowNode::task_node(id, name);
      } else if (k == "sendTask") {
        no_children(c);
        node = FlowNode::send_task(id, name, optional(c, "messageRef"));
      } else if (k == "receiveTask") {
        no_children(c);
        node = FlowNode::receive_task(id, name, optional(c, "messageRef"));
      } else if (k == "exclusiveGateway") {
        no_children(c);
        node = FlowNode::gateway_node(id, name, GatewayVariant::Exclusive);
      } else if (k == "eventBasedGateway") {
        no_children(c);
        node = FlowNode::gateway_node(id, name, GatewayVariant::EventBased);
      } else if (k == "parallelGateway") {
        no_children(c);
        node = FlowNode::gateway_node(id, name, GatewayVariant::Parallel);
      } else {
        unsupported(c);
      }
      note(id, c);
      pool.nodes.push_back(std::move(node));
    }
  }

  [[noreturn]] void dangling(const std::string& owner, const std::string& what) const {
    std::string where;
    if (auto it = out_.positions.find(owner); it != out_.positions.end()) {
      where = std::to_string(it->second.first) + ":" + std::to_string(it->second.second) + ": ";
    }
    throw Error(ErrorKind::Dangling, where + "'" + owner + "' references missing " + what);
  }

  void check_references() const {
    const BpmnGraph& g = out_.graph;
    for (const MessageFlow& f : g.message_flows) {
      if (!g.find_node(f.source)) dangling(f.id, "source '" + f.source + "'");
      if (!g.find_node(f.target)) dangling(f.id, "target '" + f.target + "'");
      if (!f.message.empty() && !g.find_message(f.message)) dangling(f.id, "message '" + f.message + "'");
    }
    for (const Pool& p : g.pools) {
      for (const FlowNode& n : p.nodes) {
        if (!n.message.empty() && !g.find_message(n.message)) dangling(n.id, "message '" + n.message + "'");
      }
      for (const SequenceFlow& f : p.sequence_flows) {
        if (!g.find_node(f.source)) dangling(f.id, "source '" + f.source + "'");
        if (!g.find_node(f.target)) dangling(f.id, "target '" + f.target + "'");
      }
      for (const Lane& l : p.lanes) {
        for (const std::string& ref : l.nodes) {
          if (!p.find_node(ref)) dangling(l.id, "flow node '" + ref + "'");
        }
      }
    }
  }

  ParsedBpmn out_;
};

}  // namespace

ParsedBpmn parse_bpmn(std::string_view text) { return Reader().read(text); }

BpmnGraph from_xml(std::string_view text) { return parse_bpmn(text).graph; }

}  // namespace demobpmn
