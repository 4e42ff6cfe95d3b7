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

#include "demobpmn/expander.hpp"

#include <map>
#include <set>
#include <utility>
#include <vector>

#include "demobpmn/error.hpp"

namespace demobpmn {

namespace {

ActKind milestone_act(Milestone m) {
  static constexpr ActKind kActs[] = {ActKind::Request, ActKind::Promise, ActKind::Declare, ActKind::Accept};
  return kActs[static_cast<int>(m)];
}

std::string message_code(ActKind act, std::optional<ActKind> answers) {
  std::string code(short_code(act));
  if (answers) code += "-" + std::string(short_code(milestone_act(milestone_of(*answers))));
  return code;
}

// Builds one pool. Flows target symbolic keys; keys alias each other and are
// finally bound to nodes. A node reached from more than one flow gets an
// exclusive merge in front of it.
class PoolBuilder {
 public:
  PoolBuilder(std::string pool_id, std::string name, std::string prefix) : prefix_(std::move(prefix)) {
    pool_.id = std::move(pool_id);
    pool_.name = std::move(name);
    pool_.process_id = pool_.id + "_process";
  }

  const std::string& prefix() const { return prefix_; }

  bool has(const std::string& local) const { return bound_.count(local) != 0; }

  // Adds a node whose id is prefix_ + "_" + node.id; the local id is its key.
  std::string add(FlowNode node) {
    std::string local = node.id;
    node.id = prefix_ + "_" + local;
    bound_[local] = node.id;
    pool_.nodes.push_back(std::move(node));
    return local;
  }

  void alias(const std::string& key, const std::string& target) { alias_[key] = target; }

  void link(const std::string& source, const std::string& key, std::optional<std::string> guard = std::nullopt) {
    pending_.push_back({source, key, std::move(guard)});
  }

  Pool finish() {
    std::map<std::string, int> indegree;
    for (const auto& p : pending_) ++indegree[resolve(p.key)];
    std::set<std::string> merged;
    for (const auto& p : pending_) {
      std::string target = resolve(p.key);
      std::string source = node_id(p.source);
      if (indegree[target] < 2) {
        emit(source, node_id(target), p.guard);
        continue;
      }
      std::string merge_local = "merge_" + target;
      if (merged.insert(target).second) {
        std::string name = "merge";
        add(FlowNode::gateway_node(merge_local, name, GatewayVariant::Exclusive));
        emit(node_id(merge_local), node_id(target), std::nullopt);
      }
      emit(source, node_id(merge_local), p.guard);
    }
    pending_.clear();
    return std::move(pool_);
  }

 private:
  struct PendingFlow {
    std::string source;
    std::string key;
    std::optional<std::string> guard;
  };

  std::string resolve(std::string key) const {
    for (int hops = 0; hops < 64; ++hops) {
      auto it = alias_.find(key);
      if (it == alias_.end()) break;
      key = it->second;
    }
    if (!bound_.count(key)) throw Error(ErrorKind::InvalidGraph, "unbound block key " + key);
    return key;
  }

  std::string node_id(const std::string& local) const { return bound_.at(resolve(local)); }

  void emit(std::string source, std::string target, std::optional<std::string> guard) {
    pool_.sequence_flows.push_back(
        {prefix_ + "_f" + std::to_string(++flow_count_), std::move(source), std::move(target), std::move(guard)});
  }

  Pool pool_;
  std::string prefix_;
  std::map<std::string, std::string> bound_;
  std::map<std::string, std::string> alias_;
  std::vector<PendingFlow> pending_;
  int flow_count_ = 0;
};

class BlockBuilder {
 public:
  BlockBuilder(const TransactionKind& tk, const ExpandOptions& options)
      : tk_(tk),
        options_(options),
        prefix_(options.id_prefix.empty() ? tk.id : options.id_prefix),
        initiator_(prefix_ + "_initiator", tk.initiator_role.empty() ? "initiator" : tk.initiator_role,
                   prefix_ + "_I"),
        executor_(prefix_ + "_executor", tk.executor_role.empty() ? "executor" : tk.executor_role, prefix_ + "_E") {}

  PoolBuilder& pool(Party p) { return p == Party::Initiator ? initiator_ : executor_; }

  std::string message(ActKind act, std::optional<ActKind> answers = std::nullopt) {
    std::string code = message_code(act, answers);
    std::string id = prefix_ + "_msg_" + code;
    if (!registered_.count(id)) {
      registered_.insert(id);
      graph_.messages.push_back({id, message_name(act, tk_.id, answers)});
    }
    return id;
  }

  std::string send(Party p, const std::string& local, ActKind act, std::optional<ActKind> answers = std::nullopt) {
    std::string name(to_string(answers ? *answers : act));
    if (answers) name = std::string(to_string(act)) + " " + name;
    return pool(p).add(FlowNode::send_task(local, name, message(act, answers)));
  }

  std::string receive(Party p, const std::string& local, ActKind act, std::optional<ActKind> answers = std::nullopt,
                      bool start = false) {
    std::string name = message_code(act, answers) + " received";
    std::string msg = message(act, answers);
    return pool(p).add(start ? FlowNode::message_start(local, name, msg) : FlowNode::catch_event(local, name, msg));
  }

  std::string execution(Party p) {
    return pool(p).add(FlowNode::task_node("execute", "execute(" + tk_.id + ")"));
  }

  BpmnGraph finish() {
    graph_.pools.push_back(initiator_.finish());
    graph_.pools.push_back(executor_.finish());
    int count = 0;
    for (std::size_t a = 0; a < graph_.pools.size(); ++a) {
      for (const auto& sender : graph_.pools[a].nodes) {
        if (!sender.is_send()) continue;
        for (std::size_t b = 0; b < graph_.pools.size(); ++b) {
          if (a == b) continue;
          for (const auto& receiver : graph_.pools[b].nodes) {
            if (receiver.is_receiver() && receiver.message == sender.message) {
              graph_.message_flows.push_back(
                  {prefix_ + "_mf" + std::to_string(++count), sender.id, receiver.id, sender.message});
            }
          }
        }
      }
    }
    return std::move(graph_);
  }

  const ExpandOptions& options() const { return options_; }

 private:
  const TransactionKind& tk_;
  ExpandOptions options_;
  std::string prefix_;
  PoolBuilder initiator_;
  PoolBuilder executor_;
  BpmnGraph graph_;
  std::set<std::string> registered_;
};

constexpr Party I = Party::Initiator;
constexpr Party E = Party::Executor;

void build_basic(BlockBuilder& b) {
  auto& ip = b.pool(I);
  auto s = ip.add(FlowNode::start("start", "start"));
  auto rq = b.send(I, "send_rq", ActKind::Request);
  auto pm = b.receive(I, "catch_pm", ActKind::Promise);
  auto da = b.receive(I, "catch_da", ActKind::Declare);
  auto ac = b.send(I, "send_ac", ActKind::Accept);
  auto end = ip.add(FlowNode::end("end_accepted", "accepted"));
  ip.link(s, rq);
  ip.link(rq, pm);
  ip.link(pm, da);
  ip.link(da, ac);
  ip.link(ac, end);

  auto& ep = b.pool(E);
  auto srq = b.receive(E, "start_rq", ActKind::Request, std::nullopt, true);
  auto epm = b.send(E, "send_pm", ActKind::Promise);
  auto eda = b.send(E, "send_da", ActKind::Declare);
  auto eac = b.receive(E, "catch_ac", ActKind::Accept);
  auto eend = ep.add(FlowNode::end("end_accepted", "accepted"));
  ep.link(srq, epm);
  if (b.options().include_production) {
    auto ex = b.execution(E);
    ep.link(epm, ex);
    ep.link(ex, eda);
  } else {
    ep.link(epm, eda);
  }
  ep.link(eda, eac);
  ep.link(eac, eend);
}

void build_standard(BlockBuilder& b) {
  auto& ip = b.pool(I);
  auto s = ip.add(FlowNode::start("start", "start"));
  auto rq = b.send(I, "send_rq", ActKind::Request);
  auto g1 = ip.add(FlowNode::gateway_node("wait_requested", "await response", GatewayVariant::EventBased));
  auto pm = b.receive(I, "catch_pm", ActKind::Promise);
  auto dc = b.receive(I, "catch_dc", ActKind::Decline);
  auto x1 = ip.add(FlowNode::gateway_node("choose_declined", "declined", GatewayVariant::Exclusive));
  auto qt = b.send(I, "send_qt", ActKind::Quit);
  auto eq = ip.add(FlowNode::end("end_quit", "quit"));
  auto g2 = ip.add(FlowNode::gateway_node("wait_promised", "await result", GatewayVariant::EventBased));
  auto da = b.receive(I, "catch_da", ActKind::Declare);
  auto st = b.receive(I, "catch_st", ActKind::Stop);
  auto es = ip.add(FlowNode::end("end_stopped", "stopped"));
  auto x2 = ip.add(FlowNode::gateway_node("choose_declared", "declared", GatewayVariant::Exclusive));
  auto ac = b.send(I, "send_ac", ActKind::Accept);
  auto ea = ip.add(FlowNode::end("end_accepted", "accepted"));
  auto rj = b.send(I, "send_rj", ActKind::Reject);
  ip.link(s, rq);
  ip.link(rq, g1);
  ip.link(g1, pm);
  ip.link(g1, dc);
  ip.link(dc, x1);
  ip.link(x1, rq, std::string(guard::kReRequest));
  ip.link(x1, qt, "quit");
  ip.link(qt, eq);
  ip.link(pm, g2);
  ip.link(g2, da);
  ip.link(g2, st);
  ip.link(st, es);
  ip.link(da, x2);
  ip.link(x2, ac, "accept");
  ip.link(ac, ea);
  ip.link(x2, rj, "reject");
  ip.link(rj, g2);

  auto& ep = b.pool(E);
  auto srq = b.receive(E, "start_rq", ActKind::Request, std::nullopt, true);
  auto x1e = ep.add(FlowNode::gateway_node("choose_requested", "requested", GatewayVariant::Exclusive));
  auto epm = b.send(E, "send_pm", ActKind::Promise);
  auto eda = b.send(E, "send_da", ActKind::Declare);
  auto g2e = ep.add(FlowNode::gateway_node("wait_declared", "await assessment", GatewayVariant::EventBased));
  auto eac = b.receive(E, "catch_ac", ActKind::Accept);
  auto eea = ep.add(FlowNode::end("end_accepted", "accepted"));
  auto erj = b.receive(E, "catch_rj", ActKind::Reject);
  auto x2e = ep.add(FlowNode::gateway_node("choose_rejected", "rejected", GatewayVariant::Exclusive));
  auto est = b.send(E, "send_st", ActKind::Stop);
  auto ees = ep.add(FlowNode::end("end_stopped", "stopped"));
  auto edc = b.send(E, "send_dc", ActKind::Decline);
  auto g1e = ep.add(FlowNode::gateway_node("wait_declined", "await decision", GatewayVariant::EventBased));
  auto crq = b.receive(E, "catch_rq", ActKind::Request);
  auto cqt = b.receive(E, "catch_qt", ActKind::Quit);
  auto eeq = ep.add(FlowNode::end("end_quit", "quit"));
  ep.link(srq, x1e);
  ep.link(x1e, epm, "promise");
  if (b.options().include_production) {
    auto ex = b.execution(E);
    ep.link(epm, ex);
    ep.link(ex, eda);
  } else {
    ep.link(epm, eda);
  }
  ep.link(eda, g2e);
  ep.link(g2e, eac);
  ep.link(eac, eea);
  ep.link(g2e, erj);
  ep.link(erj, x2e);
  ep.link(x2e, eda, std::string(guard::kReDeclare));
  ep.link(x2e, est, "stop");
  ep.link(est, ees);
  ep.link(x1e, edc, "decline");
  ep.link(edc, g1e);
  ep.link(g1e, crq);
  ep.link(g1e, cqt);
  ep.link(crq, x1e);
  ep.link(cqt, eeq);
}

// Complete level. The local configurations below are the CTP states plus
// pending revokes; exactly one party holds the floor in each and chooses,
// the other waits on an event-based gateway (or has ended).
struct Option {
  std::string guard;
  std::optional<ActKind> act;  // none: end
  std::optional<ActKind> answers;
  std::string next;
};

struct Config {
  Party floor;
  std::vector<Option> options;
};

std::string pending_config(Milestone m, const std::string& resume) {
  return "pending_" + std::string(short_code(milestone_act(m))) + "_" + resume;
}

std::string rollback_config(Milestone m) {
  switch (m) {
    case Milestone::Request: return "again";
    case Milestone::Promise: return "requested";
    case Milestone::Declare: return "promised";
    case Milestone::Accept: return "rejected";
  }
  return "again";
}

Option revoke_option(Milestone m, const std::string& here) {
  ActKind rv = revoke_of(m);
  return {std::string(to_string(rv)), rv, std::nullopt, pending_config(m, here)};
}

Config config_of(const std::string& key) {
  using A = ActKind;
  if (key == "init") return {I, {{"request", A::Request, {}, "requested"}}};
  if (key == "again") return {I, {{"request", A::Request, {}, "requested"}, {std::string(guard::kEnd), {}, {}, ""}}};
  if (key == "requested") return {E, {{"promise", A::Promise, {}, "promised"}, {"decline", A::Decline, {}, "declined"}}};
  if (key == "declined")
    return {I, {{std::string(guard::kReRequest), A::Request, {}, "requested"}, revoke_option(Milestone::Request, key)}};
  if (key == "promised")
    return {E, {{"declare", A::Declare, {}, "declared"}, revoke_option(Milestone::Promise, key)}};
  if (key == "declared")
    return {I,
            {{"accept", A::Accept, {}, "accepted"},
             {"reject", A::Reject, {}, "rejected"},
             revoke_option(Milestone::Request, key)}};
  if (key == "rejected")
    return {E,
            {{std::string(guard::kReDeclare), A::Declare, {}, "declared"},
             revoke_option(Milestone::Promise, key),
             revoke_option(Milestone::Declare, key)}};
  if (key == "accepted")
    return {I,
            {{std::string(guard::kEnd), {}, {}, ""},
             revoke_option(Milestone::Accept, key),
             revoke_option(Milestone::Request, key)}};
  // pending_<code>_<resume>
  auto rest = key.substr(8);
  auto cut = rest.find('_');
  ActKind base = *parse_act(rest.substr(0, cut));
  std::string resume = rest.substr(cut + 1);
  Milestone m = milestone_of(base);
  ActKind rv = revoke_of(m);
  return {responder_of(rv),
          {{"allow", A::Allow, rv, rollback_config(m)}, {"refuse", A::Refuse, rv, resume}}};
}

bool executor_idle(const std::string& key) { return key == "init" || key == "again" || key == "accepted"; }

std::string end_name(const std::string& key) { return key == "accepted" ? "accepted" : "revoked"; }

void build_complete(BlockBuilder& b) {
  std::vector<std::string> order{"init"};
  std::set<std::string> seen{"init"};
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (const auto& opt : config_of(order[i]).options) {
      if (!opt.next.empty() && seen.insert(opt.next).second) order.push_back(opt.next);
    }
  }

  for (Party p : {I, E}) {
    auto& pb = b.pool(p);
    auto cfg = [](const std::string& key) { return "cfg_" + key; };
    auto end_key = [&](const std::string& key) {
      std::string local = "end_" + key;
      if (!pb.has(local)) pb.add(FlowNode::end(local, end_name(key)));
      return local;
    };
    // Shared per message and successor, so rq/pm/da/... get one task each
    // while rv-x and rf-x get one per configuration.
    auto send_key = [&](const Option& opt) {
      std::string code = message_code(*opt.act, opt.answers);
      std::string local = "send_" + code + (is_revoke(*opt.act) || *opt.act == ActKind::Refuse ? "_" + opt.next : "");
      if (!pb.has(local)) {
        b.send(p, local, *opt.act, opt.answers);
        if (b.options().include_production && *opt.act == ActKind::Promise) {
          auto ex = b.execution(p);
          pb.link(local, ex);
          pb.link(ex, cfg(opt.next));
        } else {
          pb.link(local, cfg(opt.next));
        }
      }
      return local;
    };

    if (p == I) pb.link(pb.add(FlowNode::start("start", "start")), cfg("init"));

    for (const auto& key : order) {
      Config c = config_of(key);
      if (c.floor == p) {
        if (c.options.size() == 1) {
          const auto& only = c.options[0];
          pb.alias(cfg(key), only.act ? send_key(only) : end_key(key));
          continue;
        }
        auto split = pb.add(FlowNode::gateway_node("choose_" + key, key, GatewayVariant::Exclusive));
        pb.alias(cfg(key), split);
        for (const auto& opt : c.options) {
          pb.link(split, opt.act ? send_key(opt) : end_key(key), opt.guard);
        }
        continue;
      }
      if (p == E && executor_idle(key)) {
        if (key != "init") pb.alias(cfg(key), end_key(key));
        for (const auto& opt : c.options) {
          if (!opt.act) continue;
          std::string local = "start_" + message_code(*opt.act, opt.answers);
          if (pb.has(local)) continue;
          b.receive(p, local, *opt.act, opt.answers, true);
          pb.link(local, cfg(opt.next));
        }
        continue;
      }
      std::vector<std::string> catches;
      for (const auto& opt : c.options) {
        std::string local = "catch_" + message_code(*opt.act, opt.answers) + "_" + key;
        b.receive(p, local, *opt.act, opt.answers);
        pb.link(local, cfg(opt.next));
        catches.push_back(local);
      }
      if (catches.size() == 1) {
        pb.alias(cfg(key), catches[0]);
      } else {
        auto wait = pb.add(FlowNode::gateway_node("wait_" + key, key, GatewayVariant::EventBased));
        pb.alias(cfg(key), wait);
        for (const auto& c2 : catches) pb.link(wait, c2);
      }
    }
  }
}

}  // namespace

Party MessageLabel::party() const {
  if (answers) return responder_of(*answers);
  return *performer(act);
}

std::string message_name(ActKind act, std::string_view tk, std::optional<ActKind> answers) {
  return message_code(act, answers) + "(" + std::string(tk) + ")";
}

std::optional<MessageLabel> parse_message_name(std::string_view name) {
  auto open = name.find('(');
  if (open == std::string_view::npos || name.size() < open + 2 || name.back() != ')') return std::nullopt;
  std::string_view code = name.substr(0, open);
  MessageLabel label;
  label.tk = std::string(name.substr(open + 1, name.size() - open - 2));
  if (label.tk.empty()) return std::nullopt;
  if (code.size() > 3 && (code.substr(0, 3) == "al-" || code.substr(0, 3) == "rf-")) {
    auto base = parse_act(code.substr(3));
    if (!base || (*base != ActKind::Request && *base != ActKind::Promise && *base != ActKind::Declare &&
                  *base != ActKind::Accept)) {
      return std::nullopt;
    }
    label.act = code[0] == 'a' ? ActKind::Allow : ActKind::Refuse;
    label.answers = revoke_of(milestone_of(*base));
    return label;
  }
  auto act = parse_act(code);
  if (!act || *act == ActKind::Allow || *act == ActKind::Refuse) return std::nullopt;
  label.act = *act;
  return label;
}

BlockStats block_stats(const BpmnGraph& graph) {
  BlockStats s;
  s.pools = graph.pools.size();
  s.messages = graph.messages.size();
  s.message_flows = graph.message_flows.size();
  for (const auto& pool : graph.pools) {
    s.lanes += pool.lanes.size();
    s.sequence_flows += pool.sequence_flows.size();
    for (const auto& n : pool.nodes) {
      switch (n.kind) {
        case NodeKind::StartEvent:
          ++s.start_events;
          if (n.trigger == EventTrigger::Message) ++s.message_start_events;
          break;
        case NodeKind::IntermediateCatchEvent: ++s.intermediate_catch_events; break;
        case NodeKind::EndEvent: ++s.end_events; break;
        case NodeKind::Task:
          if (n.task == TaskVariant::Send) ++s.send_tasks;
          else if (n.task == TaskVariant::Receive) ++s.receive_tasks;
          else ++s.tasks;
          break;
        case NodeKind::Gateway:
          if (n.gateway == GatewayVariant::Exclusive) ++s.exclusive_gateways;
          else if (n.gateway == GatewayVariant::EventBased) ++s.event_based_gateways;
          else ++s.parallel_gateways;
          break;
      }
    }
  }
  return s;
}

BpmnGraph expand_transaction(const TransactionKind& tk, const ExpandOptions& options) {
  BlockBuilder b(tk, options);
  switch (options.level) {
    case PatternLevel::Basic: build_basic(b); break;
    case PatternLevel::Standard: build_standard(b); break;
    case PatternLevel::Complete: build_complete(b); break;
  }
  return b.finish();
}

}  // namespace demobpmn
