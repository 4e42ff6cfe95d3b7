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

#include "demobpmn/simulator.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <random>
#include <regex>
#include <set>
#include <sstream>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

#include "demobpmn/ctp.hpp"
#include "demobpmn/error.hpp"
#include "demobpmn/expander.hpp"
#include "net.hpp"

namespace demobpmn::sim {

namespace {

bool is_counted_loop(const std::string& guard) {
  return guard == guard::kReRequest || guard == guard::kReDeclare || guard == kAnother;
}

bool is_revoke_guard(const std::string& guard) { return guard.rfind("revoke_", 0) == 0; }

}  // namespace

Net::Net(const BpmnGraph& graph) {
  std::map<std::string, int> node_index;
  std::map<std::string, int> message_index;
  for (const auto& m : graph.messages) {
    message_index[m.id] = static_cast<int>(messages.size());
    messages.push_back(m.id);
  }
  static const std::regex card_re(R"((\d+)\.\.(\d+|\*)$)");
  for (std::size_t p = 0; p < graph.pools.size(); ++p) {
    pool_ids.push_back(graph.pools[p].id);
    for (const auto& n : graph.pools[p].nodes) {
      Node node;
      node.src = &n;
      node.pool = static_cast<int>(p);
      if (!n.message.empty()) {
        auto it = message_index.find(n.message);
        if (it == message_index.end()) throw Error(ErrorKind::Dangling, "unknown message " + n.message);
        node.message = it->second;
      }
      if (n.is_send()) {
        const Message* m = graph.find_message(n.message);
        if (auto label = m ? parse_message_name(m->name) : std::nullopt) {
          node.step = TraceStep{label->party(), label->act, label->tk};
          node.revoke_send = is_revoke(label->act);
        }
      }
      std::smatch match;
      if (n.is_gateway(GatewayVariant::Exclusive) && std::regex_search(n.name, match, card_re)) {
        node.has_card = true;
        node.low = static_cast<unsigned>(std::stoul(match[1].str()));
        if (match[2].str() != "*") node.high = static_cast<unsigned>(std::stoul(match[2].str()));
      }
      if (n.kind == NodeKind::StartEvent && n.trigger == EventTrigger::None) {
        node.start_slot = static_cast<int>(none_starts.size());
        none_starts.push_back(static_cast<int>(nodes.size()));
      }
      node_index[n.id] = static_cast<int>(nodes.size());
      nodes.push_back(std::move(node));
    }
  }
  for (const auto& pool : graph.pools) {
    for (const auto& f : pool.sequence_flows) {
      auto s = node_index.find(f.source);
      auto t = node_index.find(f.target);
      if (s == node_index.end() || t == node_index.end()) {
        throw Error(ErrorKind::Dangling, "sequence flow " + f.id + " has a dangling end");
      }
      int index = static_cast<int>(flows.size());
      flows.push_back({s->second, t->second, f.guard.value_or("")});
      nodes[s->second].out.push_back(index);
      nodes[t->second].in.push_back(index);
    }
  }
  for (const auto& mf : graph.message_flows) {
    auto s = node_index.find(mf.source);
    auto t = node_index.find(mf.target);
    if (s == node_index.end() || t == node_index.end()) {
      throw Error(ErrorKind::Dangling, "message flow " + mf.id + " has a dangling end");
    }
    auto& targets = nodes[s->second].targets;
    int tp = nodes[t->second].pool;
    if (std::find(targets.begin(), targets.end(), tp) == targets.end()) targets.push_back(tp);
    auto& sources = nodes[t->second].sources;
    int sp = nodes[s->second].pool;
    if (std::find(sources.begin(), sources.end(), sp) == sources.end()) sources.push_back(sp);
  }
  pool_nodes.resize(pool_ids.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) pool_nodes[nodes[i].pool].push_back(static_cast<int>(i));
}

Marking Net::initial() const {
  Marking m;
  m.tokens.assign(flows.size(), 0);
  m.starts.assign(none_starts.size(), 1);
  m.channels.assign(pool_ids.size() * pool_ids.size(), {});
  m.counters.assign(nodes.size(), 0);
  return m;
}

std::string Marking::key() const {
  std::string k;
  k.reserve(tokens.size() + starts.size() + counters.size() + 16);
  k.append(tokens.begin(), tokens.end());
  k.append(starts.begin(), starts.end());
  k.append(counters.begin(), counters.end());
  k.push_back(static_cast<char>(revokes));
  for (const auto& ch : channels) {
    k.push_back(static_cast<char>(ch.size()));
    for (int msg : ch) {
      k.push_back(static_cast<char>(msg & 0xff));
      k.push_back(static_cast<char>(msg >> 8));
    }
  }
  return k;
}

bool Net::idle(const Marking& m, int pool) const {
  for (int n : pool_nodes[pool]) {
    const Node& node = nodes[n];
    if (node.start_slot >= 0 && m.starts[node.start_slot]) return false;
    for (int f : node.out) {
      if (m.tokens[f]) return false;
    }
  }
  return true;
}

bool Net::complete(const Marking& m) const {
  for (auto t : m.tokens) {
    if (t) return false;
  }
  for (auto s : m.starts) {
    if (s) return false;
  }
  for (const auto& ch : m.channels) {
    if (!ch.empty()) return false;
  }
  return true;
}

Admission Net::admit(const Marking& m, int gateway, int flow, const Bounds& bounds) const {
  const Node& node = nodes[gateway];
  const std::string& g = flows[flow].guard;
  unsigned c = m.counters[gateway];
  if (g == kAnother) {
    if (node.has_card && node.high && c + 1 >= *node.high) return Admission::Forbidden;
    return c < bounds.loop ? Admission::Allowed : Admission::Bounded;
  }
  if (g == kDone) {
    if (node.has_card && c + 1 < node.low) return Admission::Forbidden;
    return Admission::Allowed;
  }
  if (is_counted_loop(g)) return c < bounds.loop ? Admission::Allowed : Admission::Bounded;
  if (is_revoke_guard(g)) return m.revokes < bounds.revoke ? Admission::Allowed : Admission::Bounded;
  return Admission::Allowed;
}

void Net::deliverable(const Marking& m, int receiver, std::vector<int>& out) const {
  const Node& r = nodes[receiver];
  int pools = static_cast<int>(pool_ids.size());
  for (int src : r.sources) {
    const auto& ch = m.channels[src * pools + r.pool];
    if (!ch.empty() && ch.front() == r.message) out.push_back(src * pools + r.pool);
  }
}

Moves Net::moves(const Marking& m, const Bounds& bounds, Reduction reduce) const {
  Moves result;
  std::vector<Move> global;
  std::vector<int> channels;
  std::vector<int> pool_tokens;
  if (reduce == Reduction::Safe) {
    pool_tokens.assign(pool_ids.size(), 0);
    for (std::size_t f = 0; f < flows.size(); ++f) pool_tokens[nodes[flows[f].source].pool] += m.tokens[f];
  }
  // A receive that no other pool can take away or reorder.
  auto safe_receive = [&](const Node& node) {
    return reduce == Reduction::Safe && node.sources.size() == 1 && pool_tokens[node.pool] == 1 &&
           channels.size() == 1;
  };
  for (int n = 0; n < static_cast<int>(nodes.size()); ++n) {
    const Node& node = nodes[n];
    const FlowNode& fn = *node.src;
    std::vector<Move> local;
    auto marked_in = [&]() -> int {
      for (int f : node.in) {
        if (m.tokens[f]) return f;
      }
      return -1;
    };
    switch (fn.kind) {
      case NodeKind::StartEvent:
        if (fn.trigger == EventTrigger::None) {
          if (m.starts[node.start_slot]) local.push_back({n});
        } else if (idle(m, node.pool)) {
          channels.clear();
          deliverable(m, n, channels);
          for (int ch : channels) global.push_back({n, -1, -1, -1, ch});
        }
        break;
      case NodeKind::IntermediateCatchEvent: {
        int f = marked_in();
        if (f < 0) break;
        channels.clear();
        deliverable(m, n, channels);
        if (safe_receive(node)) local.push_back({n, f, -1, -1, channels.front()});
        else for (int ch : channels) global.push_back({n, f, -1, -1, ch});
        break;
      }
      case NodeKind::EndEvent: {
        int f = marked_in();
        if (f < 0) break;
        if (fn.result == EndResult::Terminate) global.push_back({n, f});
        else local.push_back({n, f});
        break;
      }
      case NodeKind::Task: {
        int f = marked_in();
        if (f < 0) break;
        if (fn.task == TaskVariant::Receive) {
          channels.clear();
          deliverable(m, n, channels);
          if (safe_receive(node)) local.push_back({n, f, -1, -1, channels.front()});
          else for (int ch : channels) global.push_back({n, f, -1, -1, ch});
        } else if (fn.task == TaskVariant::Send) {
          if (node.revoke_send && m.revokes >= bounds.revoke) result.bound_blocked = true;
          else if (reduce == Reduction::Safe && !node.revoke_send) local.push_back({n, f});
          else global.push_back({n, f});
        } else {
          local.push_back({n, f});
        }
        break;
      }
      case NodeKind::Gateway: {
        if (fn.gateway == GatewayVariant::Parallel) {
          bool all = !node.in.empty();
          for (int f : node.in) all = all && m.tokens[f];
          if (all) local.push_back({n});
          break;
        }
        int f = marked_in();
        if (f < 0) break;
        if (fn.gateway == GatewayVariant::EventBased) {
          std::vector<Move> options;
          std::set<int> heard;
          for (int out : node.out) {
            int target = flows[out].target;
            if (!nodes[target].src->is_receiver()) continue;
            heard.insert(nodes[target].sources.begin(), nodes[target].sources.end());
            channels.clear();
            deliverable(m, target, channels);
            for (int ch : channels) options.push_back({n, f, out, target, ch});
          }
          // With one sender the channel head alone decides the branch.
          bool safe = reduce == Reduction::Safe && heard.size() == 1 && pool_tokens[node.pool] == 1 &&
                      options.size() == 1;
          for (auto& mv : options) (safe ? local : global).push_back(mv);
          break;
        }
        if (node.out.size() <= 1) {
          local.push_back({n, f, node.out.empty() ? -1 : node.out.front()});
          break;
        }
        for (int out : node.out) {
          switch (admit(m, n, out, bounds)) {
            case Admission::Allowed: local.push_back({n, f, out}); break;
            case Admission::Bounded: result.bound_blocked = true; break;
            case Admission::Forbidden: break;
          }
        }
        break;
      }
    }
    if (!local.empty()) {
      if (reduce != Reduction::None) {
        result.moves = std::move(local);
        result.local = true;
        return result;
      }
      for (auto& mv : local) result.moves.push_back(mv);
    }
  }
  for (auto& mv : global) result.moves.push_back(mv);
  return result;
}

std::optional<int> Net::apply(Marking& m, const Move& mv) const {
  const Node& node = nodes[mv.node];
  const FlowNode& fn = *node.src;
  auto put = [&](int f) {
    if (m.tokens[f] == 0xff) throw Error(ErrorKind::BoundExceeded, "token overflow on a sequence flow");
    ++m.tokens[f];
  };
  auto put_all = [&](const Node& x) {
    for (int f : x.out) put(f);
  };
  if (mv.in_flow >= 0) --m.tokens[mv.in_flow];
  if (mv.channel >= 0) m.channels[mv.channel].erase(m.channels[mv.channel].begin());

  switch (fn.kind) {
    case NodeKind::StartEvent:
      if (node.start_slot >= 0) m.starts[node.start_slot] = 0;
      put_all(node);
      return std::nullopt;
    case NodeKind::EndEvent:
      if (fn.result == EndResult::Terminate) {
        for (int n : pool_nodes[node.pool]) {
          for (int f : nodes[n].out) m.tokens[f] = 0;
        }
      }
      return std::nullopt;
    case NodeKind::IntermediateCatchEvent: put_all(node); return std::nullopt;
    case NodeKind::Task:
      put_all(node);
      if (fn.task == TaskVariant::Send) {
        int pools = static_cast<int>(pool_ids.size());
        for (int target : node.targets) m.channels[node.pool * pools + target].push_back(node.message);
        if (node.revoke_send) ++m.revokes;
        if (node.step) return mv.node;
      }
      return std::nullopt;
    case NodeKind::Gateway:
      if (fn.gateway == GatewayVariant::Parallel) {
        for (int f : node.in) --m.tokens[f];
        put_all(node);
        return std::nullopt;
      }
      if (fn.gateway == GatewayVariant::EventBased) {
        put_all(nodes[mv.catch_node]);
        return std::nullopt;
      }
      if (mv.out_flow >= 0) {
        const std::string& g = flows[mv.out_flow].guard;
        if (is_counted_loop(g)) ++m.counters[mv.node];
        else if (g == kDone) m.counters[mv.node] = 0;
        put(mv.out_flow);
      }
      return std::nullopt;
  }
  return std::nullopt;
}

std::vector<std::string> Net::stuck_nodes(const Marking& m) const {
  std::vector<std::string> out;
  for (std::size_t f = 0; f < flows.size(); ++f) {
    if (m.tokens[f]) out.push_back(nodes[flows[f].target].src->id);
  }
  return out;
}

std::vector<std::string> Net::queued_messages(const Marking& m) const {
  std::vector<std::string> out;
  for (const auto& ch : m.channels) {
    for (int msg : ch) out.push_back(messages[msg]);
  }
  return out;
}

Trace Net::trace_of(const std::vector<int>& sends) const {
  Trace t;
  for (int n : sends) t.steps.push_back(*nodes[n].step);
  return t;
}

}  // namespace demobpmn::sim

namespace demobpmn {

namespace {

using sim::Marking;
using sim::Move;
using sim::Net;

constexpr std::size_t kMaxSteps = 1000000;

std::optional<ActKind> act_after(const Net& net, int flow) {
  int n = net.flows[flow].target;
  for (int hops = 0; hops < 64; ++hops) {
    const auto& node = net.nodes[n];
    if (node.src->is_send()) return node.step ? std::optional<ActKind>(node.step->act) : std::nullopt;
    if (!node.src->is_gateway(GatewayVariant::Exclusive) || node.out.size() != 1) return std::nullopt;
    n = net.flows[node.out.front()].target;
  }
  return std::nullopt;
}

std::string describe_stuck(const Net& net, const Marking& m, const std::vector<int>& sends) {
  std::ostringstream out;
  out << "deadlock after '" << format_trace(net.trace_of(sends)) << "'";
  auto stuck = net.stuck_nodes(m);
  if (!stuck.empty()) {
    out << "; waiting at";
    for (const auto& s : stuck) out << ' ' << s;
  }
  auto queued = net.queued_messages(m);
  if (!queued.empty()) {
    out << "; undelivered";
    for (const auto& q : queued) out << ' ' << q;
  }
  return out.str();
}

ScriptRun run(const Net& net, const ChoicePolicy& policy, const Bounds& bounds, bool pause) {
  std::mt19937_64 rng(policy.seed);
  auto pick_random = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  std::size_t script_pos = 0;
  Marking m = net.initial();
  std::vector<int> sends;
  ScriptRun result;
  for (std::size_t step = 0; step < kMaxSteps; ++step) {
    auto mv = net.moves(m, bounds);
    if (mv.moves.empty()) {
      result.trace = net.trace_of(sends);
      if (net.complete(m)) {
        result.status = ScriptRun::Status::Complete;
      } else if (mv.bound_blocked) {
        result.status = ScriptRun::Status::BoundBlocked;
      } else {
        result.status = ScriptRun::Status::Deadlock;
        if (!pause) throw Error(ErrorKind::Deadlock, describe_stuck(net, m, sends));
      }
      return result;
    }
    std::size_t pick = 0;
    if (mv.local && mv.moves.size() > 1) {
      std::vector<std::string> labels;
      for (const auto& candidate : mv.moves) labels.push_back(net.flows[candidate.out_flow].guard);
      switch (policy.strategy) {
        case ChoicePolicy::Strategy::Exhaustive: break;
        case ChoicePolicy::Strategy::Random: pick = pick_random(labels.size()); break;
        case ChoicePolicy::Strategy::Scripted: {
          if (script_pos == policy.script.size()) {
            if (!pause) throw Error(ErrorKind::BoundExceeded, "script exhausted at " + net.nodes[mv.moves[0].node].src->id);
            PendingChoice choice;
            const auto& gw = net.nodes[mv.moves[0].node];
            choice.gateway = gw.src->id;
            choice.pool = net.pool_ids[gw.pool];
            choice.labels = labels;
            for (const auto& candidate : mv.moves) choice.acts.push_back(act_after(net, candidate.out_flow));
            result.status = ScriptRun::Status::AwaitingChoice;
            result.trace = net.trace_of(sends);
            result.choice = std::move(choice);
            return result;
          }
          const std::string& want = policy.script[script_pos++];
          auto it = std::find(labels.begin(), labels.end(), want);
          if (it == labels.end()) {
            std::string offered;
            for (const auto& l : labels) offered += (offered.empty() ? "" : ", ") + l;
            throw Error(ErrorKind::ScriptMismatch,
                        "script label '" + want + "' not offered at " + net.nodes[mv.moves[0].node].src->id +
                            " (offered: " + offered + ")");
          }
          pick = static_cast<std::size_t>(it - labels.begin());
          break;
        }
      }
    } else if (!mv.local && mv.moves.size() > 1 && policy.strategy == ChoicePolicy::Strategy::Random) {
      pick = pick_random(mv.moves.size());
    }
    if (auto sent = net.apply(m, mv.moves[pick])) sends.push_back(*sent);
  }
  throw Error(ErrorKind::BoundExceeded, "step limit reached");
}

using Suffixes = std::set<std::vector<int>>;

class Enumerator {
 public:
  Enumerator(const Net& net, const Bounds& bounds) : net_(net), bounds_(bounds) {}

  const Suffixes& visit(const Marking& m) {
    std::string key = m.key();
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    if (!on_stack_.insert(key).second) return empty_;
    Suffixes result;
    auto mv = net_.moves(m, bounds_);
    if (mv.moves.empty()) {
      if (net_.complete(m)) result.insert(std::vector<int>{});
    }
    for (const auto& move : mv.moves) {
      Marking next = m;
      auto sent = net_.apply(next, move);
      const Suffixes& sub = visit(next);
      for (const auto& suffix : sub) {
        if (!sent) {
          result.insert(suffix);
          continue;
        }
        std::vector<int> word;
        word.reserve(suffix.size() + 1);
        word.push_back(*sent);
        word.insert(word.end(), suffix.begin(), suffix.end());
        result.insert(std::move(word));
      }
    }
    on_stack_.erase(key);
    return memo_.emplace(std::move(key), std::move(result)).first->second;
  }

 private:
  const Net& net_;
  Bounds bounds_;
  std::unordered_map<std::string, Suffixes> memo_;
  std::unordered_set<std::string> on_stack_;
  Suffixes empty_;
};

}  // namespace

Trace simulate(const BpmnGraph& graph, const ChoicePolicy& policy, const Bounds& bounds) {
  Net net(graph);
  auto result = run(net, policy, bounds, false);
  if (result.status == ScriptRun::Status::BoundBlocked) {
    throw Error(ErrorKind::BoundExceeded, "run cut by a bound after '" + format_trace(result.trace) + "'");
  }
  return result.trace;
}

ScriptRun run_script(const BpmnGraph& graph, const std::vector<std::string>& script, const Bounds& bounds) {
  Net net(graph);
  return run(net, ChoicePolicy::scripted(script), bounds, true);
}

TraceSet enumerate_bpmn_traces(const BpmnGraph& graph, const Bounds& bounds) {
  Net net(graph);
  Enumerator e(net, bounds);
  TraceSet out;
  for (const auto& word : e.visit(net.initial())) out.insert(net.trace_of(word));
  return out;
}

DeadlockReport find_deadlocks(const BpmnGraph& graph, const Bounds& bounds, std::size_t max_witnesses) {
  Net net(graph);
  DeadlockReport report;
  std::unordered_set<std::string> seen;
  std::vector<int> parent;
  std::vector<int> sent_by;
  std::deque<std::pair<Marking, int>> queue;

  auto sends_to = [&](int id) {
    std::vector<int> sends;
    for (; id >= 0; id = parent[id]) {
      if (sent_by[id] >= 0) sends.push_back(sent_by[id]);
    }
    std::reverse(sends.begin(), sends.end());
    return sends;
  };

  Marking start = net.initial();
  seen.insert(start.key());
  parent.push_back(-1);
  sent_by.push_back(-1);
  queue.emplace_back(std::move(start), 0);
  while (!queue.empty()) {
    auto [m, id] = std::move(queue.front());
    queue.pop_front();
    auto mv = net.moves(m, bounds, sim::Reduction::Safe);
    if (mv.moves.empty()) {
      if (!net.complete(m) && !mv.bound_blocked) {
        report.witnesses.push_back({net.trace_of(sends_to(id)), net.stuck_nodes(m), net.queued_messages(m)});
        if (report.witnesses.size() >= max_witnesses) break;
      }
      continue;
    }
    for (const auto& move : mv.moves) {
      Marking next = m;
      auto sent = net.apply(next, move);
      if (!seen.insert(next.key()).second) continue;
      parent.push_back(id);
      sent_by.push_back(sent ? *sent : -1);
      queue.emplace_back(std::move(next), static_cast<int>(parent.size()) - 1);
    }
  }
  report.states = seen.size();
  return report;
}

ProjectionReport check_projections(const BpmnGraph& graph, PatternLevel level, const Bounds& bounds,
                                   std::size_t max_witnesses) {
  Net net(graph);
  const CtpMachine machine = build_ctp(level);
  std::map<std::string, int> tk_index;
  for (const auto& node : net.nodes) {
    if (node.step) tk_index.emplace(node.step->tk, static_cast<int>(tk_index.size()));
  }
  std::map<Configuration, int> config_ids;
  std::vector<Configuration> configs;
  auto intern = [&](const Configuration& c) {
    auto [it, fresh] = config_ids.emplace(c, static_cast<int>(configs.size()));
    if (fresh) configs.push_back(c);
    return it->second;
  };
  // Per transaction kind: interned configuration, or -1 before the first act.
  using Projection = std::vector<int>;
  auto key_of = [](const Marking& m, const Projection& p) {
    std::string k = m.key();
    for (int c : p) k += std::to_string(c) + ',';
    return k;
  };

  ProjectionReport report;
  std::unordered_set<std::string> seen;
  std::vector<int> parent;
  std::vector<int> sent_by;
  std::deque<std::tuple<Marking, Projection, int>> queue;
  auto sends_to = [&](int id) {
    std::vector<int> sends;
    for (; id >= 0; id = parent[id]) {
      if (sent_by[id] >= 0) sends.push_back(sent_by[id]);
    }
    std::reverse(sends.begin(), sends.end());
    return sends;
  };
  auto refuse = [&](const std::vector<int>& sends) {
    ++report.refused;
    if (report.witnesses.size() < max_witnesses) report.witnesses.push_back(net.trace_of(sends));
  };

  Marking start = net.initial();
  Projection none(tk_index.size(), -1);
  seen.insert(key_of(start, none));
  parent.push_back(-1);
  sent_by.push_back(-1);
  queue.emplace_back(std::move(start), std::move(none), 0);
  while (!queue.empty()) {
    auto [m, proj, id] = std::move(queue.front());
    queue.pop_front();
    auto mv = net.moves(m, bounds);
    if (mv.moves.empty()) {
      if (!net.complete(m)) continue;
      for (int c : proj) {
        if (c >= 0 && !is_quasi_terminal(machine, configs[c])) {
          refuse(sends_to(id));
          break;
        }
      }
      continue;
    }
    for (const auto& move : mv.moves) {
      Marking next = m;
      Projection next_proj = proj;
      auto sent = net.apply(next, move);
      if (sent && net.nodes[*sent].step) {
        const TraceStep& s = *net.nodes[*sent].step;
        int& slot = next_proj[tk_index.at(s.tk)];
        const Configuration current = slot < 0 ? machine.initial() : configs[slot];
        auto stepped = try_step(machine, current, s.party, s.act);
        if (!stepped && slot >= 0 && is_quasi_terminal(machine, current) && s.act == ActKind::Request) {
          stepped = try_step(machine, machine.initial(), s.party, s.act);
        }
        if (!stepped) {
          auto sends = sends_to(id);
          sends.push_back(*sent);
          refuse(sends);
          continue;
        }
        slot = intern(*stepped);
      }
      if (!seen.insert(key_of(next, next_proj)).second) continue;
      parent.push_back(id);
      sent_by.push_back(sent ? *sent : -1);
      queue.emplace_back(std::move(next), std::move(next_proj), static_cast<int>(parent.size()) - 1);
    }
  }
  report.states = seen.size();
  return report;
}

}  // namespace demobpmn
