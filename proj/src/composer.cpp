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

#include "demobpmn/composer.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <utility>

#include "demobpmn/error.hpp"

namespace demobpmn {

namespace {

std::string tk_of_block(const BpmnGraph& block) {
  for (const auto& m : block.messages) {
    if (auto label = parse_message_name(m.name)) return label->tk;
  }
  throw Error(ErrorKind::InvalidGraph, "block has no transaction messages");
}

std::string find_anchor(const BpmnGraph& block, const std::string& parent_tk, CtpState event) {
  auto act = act_producing(event);
  if (act) {
    auto pool_index = static_cast<std::size_t>(*performer(*act) == Party::Initiator ? 0 : 1);
    std::string name = message_name(*act, parent_tk);
    if (pool_index < block.pools.size()) {
      for (const auto& n : block.pools[pool_index].nodes) {
        if (!n.is_send()) continue;
        const Message* m = block.find_message(n.message);
        if (m && m->name == name) return n.id;
      }
    }
  }
  throw Error(ErrorKind::AnchorMissing,
              "no anchor for event " + std::string(event_code(event)) + " of " + parent_tk);
}

// Fragment of a child's initiator pool: start removed, ends joined.
struct Fragment {
  std::string entry;
  std::string exit;
};

Fragment inline_initiator(Pool& host, Pool child) {
  Fragment frag;
  std::set<std::string> ends;
  std::string start;
  for (const auto& n : child.nodes) {
    if (n.kind == NodeKind::StartEvent && n.trigger == EventTrigger::None) start = n.id;
    if (n.kind == NodeKind::EndEvent) ends.insert(n.id);
  }
  if (start.empty()) throw Error(ErrorKind::InvalidGraph, "child initiator pool " + child.id + " has no start");
  std::string child_prefix = child.id.substr(0, child.id.rfind('_'));
  frag.exit = child_prefix + "_I_join";

  for (auto& n : child.nodes) {
    if (n.id == start || ends.count(n.id)) continue;
    host.nodes.push_back(std::move(n));
  }
  host.nodes.push_back(FlowNode::gateway_node(frag.exit, "join", GatewayVariant::Exclusive));
  for (auto& f : child.sequence_flows) {
    if (f.source == start) {
      frag.entry = f.target;
      continue;
    }
    if (ends.count(f.target)) f.target = frag.exit;
    host.sequence_flows.push_back(std::move(f));
  }
  for (auto& d : child.data_objects) host.data_objects.push_back(std::move(d));
  return frag;
}

class Splicer {
 public:
  Splicer(Pool& host, std::string prefix) : host_(host), prefix_(std::move(prefix)) {}

  // Moves the tail's single outgoing flow so it leaves from `exit`, and
  // returns the flow target that used to follow the tail.
  std::string detach(const std::string& tail) {
    auto it = std::find_if(host_.sequence_flows.begin(), host_.sequence_flows.end(),
                           [&](const SequenceFlow& f) { return f.source == tail; });
    if (it == host_.sequence_flows.end()) throw Error(ErrorKind::InvalidGraph, "anchor " + tail + " has no successor");
    std::string next = it->target;
    host_.sequence_flows.erase(it);
    return next;
  }

  std::string gateway(const std::string& local, const std::string& name) {
    std::string id = prefix_ + "_" + local;
    host_.nodes.push_back(FlowNode::gateway_node(id, name, GatewayVariant::Exclusive));
    return id;
  }

  void flow(const std::string& source, const std::string& target, std::optional<std::string> guard = std::nullopt) {
    host_.sequence_flows.push_back({prefix_ + "_f" + std::to_string(++count_), source, target, std::move(guard)});
  }

 private:
  Pool& host_;
  std::string prefix_;
  int count_ = 0;
};

// Splices the fragment after `tail`; returns the new tail.
std::string wrap(Pool& host, const std::string& tail, const Fragment& frag, const ResponseLink& link) {
  Splicer s(host, link.child_tk + "_C");
  std::string next = s.detach(tail);
  const auto& card = link.cardinality;
  std::string label = link.child_tk + " " + card.to_string();
  bool repeat = !card.high || *card.high > 1;
  bool optional = card.low == 0;

  std::string in = tail;
  std::string out;
  std::string skip_split;
  if (optional) {
    skip_split = s.gateway("option", label);
    s.flow(in, skip_split);
  }
  std::string first = frag.entry;
  std::string loop_merge;
  if (repeat) {
    loop_merge = s.gateway("repeat", "repeat " + link.child_tk);
    s.flow(loop_merge, frag.entry);
    first = loop_merge;
  }
  if (optional) {
    s.flow(skip_split, first, "init " + link.child_tk);
  } else {
    s.flow(in, first);
  }
  out = frag.exit;
  if (repeat) {
    std::string loop = s.gateway("loop", label);
    s.flow(out, loop);
    s.flow(loop, loop_merge, "another");
    out = loop;
  }
  if (optional) {
    std::string join = s.gateway("option_join", "join " + link.child_tk);
    s.flow(out, join, repeat ? std::optional<std::string>("done") : std::nullopt);
    s.flow(skip_split, join, "skip");
    s.flow(join, next);
    return join;
  }
  s.flow(out, next, repeat ? std::optional<std::string>("done") : std::nullopt);
  return repeat ? out : frag.exit;
}

BpmnGraph compose_tree(const DemoModel& model, const TransactionKind& tk, const ExpandOptions& options,
                       std::set<std::string>& visiting) {
  if (!visiting.insert(tk.id).second) throw Error(ErrorKind::InvalidModel, "cycle through " + tk.id);
  ExpandOptions local = options;
  local.id_prefix = tk.id;
  BpmnGraph graph = expand_transaction(tk, local);

  std::map<std::string, std::string> tails;
  for (const auto& point : insertion_points(model, tk.id, graph)) {
    const TransactionKind* child = model.find(point.link.child_tk);
    if (!child) throw Error(ErrorKind::InvalidModel, "unknown transaction kind " + point.link.child_tk);
    BpmnGraph sub = compose_tree(model, *child, options, visiting);

    auto host_index = *graph.pool_of(point.anchor);
    Pool child_initiator = std::move(sub.pools.front());
    for (std::size_t i = 1; i < sub.pools.size(); ++i) graph.pools.push_back(std::move(sub.pools[i]));
    Pool& host = graph.pools[host_index];
    Fragment frag = inline_initiator(host, std::move(child_initiator));

    auto [it, fresh] = tails.emplace(point.anchor, point.anchor);
    it->second = wrap(host, it->second, frag, point.link);

    for (auto& m : sub.messages) graph.messages.push_back(std::move(m));
    for (auto& f : sub.message_flows) graph.message_flows.push_back(std::move(f));
  }
  visiting.erase(tk.id);
  return graph;
}

void require_valid(const DemoModel& model) {
  auto diags = validate_model(model);
  if (!diags.empty()) throw Error(ErrorKind::InvalidModel, diags.front().message);
}

}  // namespace

std::vector<InsertionPoint> insertion_points(const DemoModel& model, std::string_view parent_tk,
                                             const BpmnGraph& parent_block) {
  std::vector<InsertionPoint> points;
  for (const ResponseLink* link : model.links_from(parent_tk)) {
    points.push_back({std::string(parent_tk), find_anchor(parent_block, std::string(parent_tk), link->parent_event),
                      *link});
  }
  return points;
}

std::vector<InsertionPoint> insertion_points(const DemoModel& model, const BpmnGraph& parent_block) {
  return insertion_points(model, tk_of_block(parent_block), parent_block);
}

BpmnGraph compose(const DemoModel& model, const ExpandOptions& options) {
  require_valid(model);
  auto rs = roots(model);
  if (rs.size() != 1) {
    throw Error(ErrorKind::InvalidModel,
                "expected exactly one root transaction kind, found " + std::to_string(rs.size()));
  }
  std::set<std::string> visiting;
  return compose_tree(model, rs.front(), options, visiting);
}

std::vector<BpmnGraph> compose_all(const DemoModel& model, const ExpandOptions& options) {
  require_valid(model);
  std::vector<BpmnGraph> out;
  for (const auto& root : roots(model)) {
    std::set<std::string> visiting;
    out.push_back(compose_tree(model, root, options, visiting));
  }
  return out;
}

}  // namespace demobpmn
