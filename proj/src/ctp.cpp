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

#include "demobpmn/ctp.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>

#include "demobpmn/error.hpp"

namespace demobpmn {

namespace {

struct ActInfo {
  ActKind act;
  std::string_view name;
  std::string_view code;
};

constexpr ActInfo kActInfo[] = {
    {ActKind::Request, "request", "rq"},
    {ActKind::Promise, "promise", "pm"},
    {ActKind::Decline, "decline", "dc"},
    {ActKind::Declare, "declare", "da"},
    {ActKind::Accept, "accept", "ac"},
    {ActKind::Reject, "reject", "rj"},
    {ActKind::Quit, "quit", "qt"},
    {ActKind::Stop, "stop", "st"},
    {ActKind::RevokeRequest, "revoke_request", "rv-rq"},
    {ActKind::RevokePromise, "revoke_promise", "rv-pm"},
    {ActKind::RevokeDeclare, "revoke_declare", "rv-da"},
    {ActKind::RevokeAccept, "revoke_accept", "rv-ac"},
    {ActKind::Allow, "allow", "al"},
    {ActKind::Refuse, "refuse", "rf"},
};

constexpr std::pair<CtpState, std::string_view> kStateNames[] = {
    {CtpState::Initiated, "initiated"}, {CtpState::Requested, "requested"},
    {CtpState::Promised, "promised"},   {CtpState::Declared, "declared"},
    {CtpState::Accepted, "accepted"},   {CtpState::Declined, "declined"},
    {CtpState::Rejected, "rejected"},   {CtpState::Quit, "quit"},
    {CtpState::Stopped, "stopped"},
};

const ActInfo& info(ActKind act) { return kActInfo[static_cast<int>(act)]; }

}  // namespace

std::string_view to_string(PatternLevel level) {
  switch (level) {
    case PatternLevel::Basic: return "basic";
    case PatternLevel::Standard: return "standard";
    case PatternLevel::Complete: return "complete";
  }
  return "?";
}

std::string_view to_string(Party party) {
  return party == Party::Initiator ? "initiator" : "executor";
}

std::string_view to_string(ActKind act) { return info(act).name; }

std::string_view short_code(ActKind act) { return info(act).code; }

std::string_view to_string(CtpState state) { return kStateNames[static_cast<int>(state)].second; }

std::optional<PatternLevel> parse_level(std::string_view text) {
  for (PatternLevel l : {PatternLevel::Basic, PatternLevel::Standard, PatternLevel::Complete}) {
    if (to_string(l) == text) {
      return l;
    }
  }
  return std::nullopt;
}

std::optional<ActKind> parse_act(std::string_view text) {
  for (const ActInfo& a : kActInfo) {
    if (a.name == text || a.code == text) {
      return a.act;
    }
  }
  return std::nullopt;
}

std::optional<CtpState> parse_state(std::string_view text) {
  for (const auto& [state, name] : kStateNames) {
    if (name == text) {
      return state;
    }
  }
  return std::nullopt;
}

Party counterparty(Party party) {
  return party == Party::Initiator ? Party::Executor : Party::Initiator;
}

bool is_revoke(ActKind act) {
  return act == ActKind::RevokeRequest || act == ActKind::RevokePromise ||
         act == ActKind::RevokeDeclare || act == ActKind::RevokeAccept;
}

ActKind revoke_of(Milestone m) {
  switch (m) {
    case Milestone::Request: return ActKind::RevokeRequest;
    case Milestone::Promise: return ActKind::RevokePromise;
    case Milestone::Declare: return ActKind::RevokeDeclare;
    case Milestone::Accept: return ActKind::RevokeAccept;
  }
  return ActKind::RevokeRequest;
}

std::optional<Milestone> revoked_milestone(ActKind revoke) {
  switch (revoke) {
    case ActKind::RevokeRequest: return Milestone::Request;
    case ActKind::RevokePromise: return Milestone::Promise;
    case ActKind::RevokeDeclare: return Milestone::Declare;
    case ActKind::RevokeAccept: return Milestone::Accept;
    default: return std::nullopt;
  }
}

Milestone milestone_of(ActKind act) {
  switch (act) {
    case ActKind::Request:
    case ActKind::RevokeRequest: return Milestone::Request;
    case ActKind::Promise:
    case ActKind::RevokePromise: return Milestone::Promise;
    case ActKind::Declare:
    case ActKind::RevokeDeclare: return Milestone::Declare;
    case ActKind::Accept:
    case ActKind::RevokeAccept: return Milestone::Accept;
    default: throw Error(ErrorKind::InvalidAct, std::string(to_string(act)) + " is not a milestone act");
  }
}

std::optional<Party> performer(ActKind act) {
  switch (act) {
    case ActKind::Request:
    case ActKind::Accept:
    case ActKind::Reject:
    case ActKind::Quit:
    case ActKind::RevokeRequest:
    case ActKind::RevokeAccept: return Party::Initiator;
    case ActKind::Promise:
    case ActKind::Decline:
    case ActKind::Declare:
    case ActKind::Stop:
    case ActKind::RevokePromise:
    case ActKind::RevokeDeclare: return Party::Executor;
    case ActKind::Allow:
    case ActKind::Refuse: return std::nullopt;
  }
  return std::nullopt;
}

Party responder_of(ActKind revoke) { return counterparty(*performer(revoke)); }

std::optional<ActKind> act_producing(CtpState state) {
  switch (state) {
    case CtpState::Requested: return ActKind::Request;
    case CtpState::Promised: return ActKind::Promise;
    case CtpState::Declared: return ActKind::Declare;
    case CtpState::Accepted: return ActKind::Accept;
    case CtpState::Declined: return ActKind::Decline;
    case CtpState::Rejected: return ActKind::Reject;
    case CtpState::Quit: return ActKind::Quit;
    case CtpState::Stopped: return ActKind::Stop;
    case CtpState::Initiated: return std::nullopt;
  }
  return std::nullopt;
}

ConfigurationKey key_of(const Configuration& c) {
  return ConfigurationKey{c.state, c.occurred.mask(), c.pending};
}

CtpMachine::CtpMachine(PatternLevel level) : level_(level) {
  using S = CtpState;
  using A = ActKind;
  constexpr Party I = Party::Initiator;
  constexpr Party E = Party::Executor;
  transitions_ = {
      {S::Initiated, I, A::Request, S::Requested},
      {S::Requested, E, A::Promise, S::Promised},
      {S::Promised, E, A::Declare, S::Declared},
      {S::Declared, I, A::Accept, S::Accepted},
  };
  if (level == PatternLevel::Basic) {
    return;
  }
  transitions_.insert(transitions_.end(), {
                                              {S::Requested, E, A::Decline, S::Declined},
                                              {S::Declined, I, A::Request, S::Requested},
                                              {S::Declared, I, A::Reject, S::Rejected},
                                              {S::Rejected, E, A::Declare, S::Declared},
                                          });
  if (level == PatternLevel::Standard) {
    transitions_.push_back({S::Declined, I, A::Quit, S::Quit});
    transitions_.push_back({S::Rejected, E, A::Stop, S::Stopped});
  }
}

std::set<CtpState> CtpMachine::states() const {
  std::set<CtpState> out;
  for (const Transition& t : transitions_) {
    out.insert(t.from);
    out.insert(t.to);
  }
  return out;
}

std::set<ActKind> CtpMachine::alphabet() const {
  std::set<ActKind> out;
  for (const Transition& t : transitions_) {
    out.insert(t.act);
  }
  if (has_revocations()) {
    for (Milestone m : kMilestones) {
      out.insert(revoke_of(m));
    }
    out.insert(ActKind::Allow);
    out.insert(ActKind::Refuse);
  }
  return out;
}

CtpState CtpMachine::rollback_target(ActKind revoke) {
  switch (revoke) {
    case ActKind::RevokeRequest: return CtpState::Initiated;
    case ActKind::RevokePromise: return CtpState::Requested;
    case ActKind::RevokeDeclare: return CtpState::Promised;
    case ActKind::RevokeAccept: return CtpState::Rejected;
    default: throw Error(ErrorKind::InvalidAct, std::string(to_string(revoke)) + " is not a revoke");
  }
}

namespace {

std::string describe(const ConfigurationKey& k) {
  std::string out(to_string(k.state));
  if (k.pending) {
    out += '+';
    out += short_code(k.pending->revoke);
  }
  return out;
}

}  // namespace

std::string CtpMachine::transition_table() const {
  std::ostringstream out;
  for (const Transition& t : transitions_) {
    out << to_string(t.from) << '\t' << to_string(t.party) << '\t' << short_code(t.act) << '\t'
        << to_string(t.to) << '\n';
  }
  if (!has_revocations()) {
    return out.str();
  }
  // Revocation rows are listed per reachable configuration, since whether a
  // revoke is possible depends on the occurred flags and not on the state.
  std::set<ConfigurationKey> seen;
  std::deque<Configuration> work{initial()};
  std::vector<std::pair<ConfigurationKey, std::pair<Party, ActKind>>> rows;
  std::map<ConfigurationKey, std::vector<std::tuple<Party, ActKind, ConfigurationKey>>> edges;
  while (!work.empty()) {
    Configuration c = work.front();
    work.pop_front();
    c.revoke_count = 0;
    if (!seen.insert(key_of(c)).second) {
      continue;
    }
    for (auto [party, act] : enabled_acts(*this, c)) {
      Configuration next = step(*this, c, party, act);
      edges[key_of(c)].emplace_back(party, act, key_of(next));
      work.push_back(next);
    }
  }
  for (const auto& [from, list] : edges) {
    for (const auto& [party, act, to] : list) {
      if (is_revoke(act) || act == ActKind::Allow || act == ActKind::Refuse) {
        out << describe(from) << '\t' << to_string(party) << '\t' << short_code(act) << '\t'
            << describe(to) << '\n';
      }
    }
  }
  return out.str();
}

CtpMachine build_ctp(PatternLevel level) { return CtpMachine(level); }

namespace {

std::string act_error(const Configuration& config, Party party, ActKind act) {
  std::string msg(to_string(party));
  msg += " cannot perform ";
  msg += to_string(act);
  msg += " in state ";
  msg += to_string(config.state);
  return msg;
}

// Shared by step and try_step: nullopt plus an error kind on refusal.
std::optional<Configuration> advance(const CtpMachine& machine, const Configuration& config,
                                     Party party, ActKind act, ErrorKind* why) {
  if (config.pending) {
    const ActKind revoke = config.pending->revoke;
    if (act != ActKind::Allow && act != ActKind::Refuse) {
      *why = ErrorKind::PendingRevoke;
      return std::nullopt;
    }
    if (party != responder_of(revoke)) {
      *why = ErrorKind::InvalidAct;
      return std::nullopt;
    }
    Configuration next = config;
    next.pending.reset();
    if (act == ActKind::Refuse) {
      next.state = config.pending->resume;
      return next;
    }
    next.state = CtpMachine::rollback_target(revoke);
    const auto from = static_cast<int>(*revoked_milestone(revoke));
    for (Milestone m : kMilestones) {
      if (static_cast<int>(m) >= from) {
        next.occurred.reset(m);
      }
    }
    return next;
  }

  *why = ErrorKind::InvalidAct;
  if (act == ActKind::Allow || act == ActKind::Refuse) {
    return std::nullopt;
  }
  if (is_revoke(act)) {
    if (!machine.has_revocations() || performer(act) != party ||
        !config.occurred.has(*revoked_milestone(act)) || config.state == CtpState::Quit ||
        config.state == CtpState::Stopped) {
      return std::nullopt;
    }
    Configuration next = config;
    next.pending = PendingRevoke{act, config.state};
    ++next.revoke_count;
    return next;
  }
  for (const Transition& t : machine.transitions()) {
    if (t.from == config.state && t.party == party && t.act == act) {
      Configuration next = config;
      next.state = t.to;
      switch (act) {
        case ActKind::Request:
        case ActKind::Promise:
        case ActKind::Declare:
        case ActKind::Accept: next.occurred.set(milestone_of(act)); break;
        default: break;
      }
      return next;
    }
  }
  return std::nullopt;
}

}  // namespace

Configuration step(const CtpMachine& machine, const Configuration& config, Party party,
                   ActKind act) {
  ErrorKind why = ErrorKind::InvalidAct;
  if (auto next = advance(machine, config, party, act, &why)) {
    return *next;
  }
  if (why == ErrorKind::PendingRevoke) {
    throw Error(why, std::string(to_string(act)) + " attempted while " +
                         std::string(to_string(config.pending->revoke)) + " is pending");
  }
  throw Error(why, act_error(config, party, act));
}

std::optional<Configuration> try_step(const CtpMachine& machine, const Configuration& config,
                                      Party party, ActKind act) {
  ErrorKind why;
  return advance(machine, config, party, act, &why);
}

std::vector<std::pair<Party, ActKind>> enabled_acts(const CtpMachine& machine,
                                                    const Configuration& config) {
  std::vector<std::pair<Party, ActKind>> out;
  for (Party party : {Party::Initiator, Party::Executor}) {
    for (ActKind act : kAllActs) {
      if (try_step(machine, config, party, act)) {
        out.emplace_back(party, act);
      }
    }
  }
  return out;
}

bool is_terminal(const CtpMachine&, const Configuration& config) {
  if (config.pending) {
    return false;
  }
  return config.state == CtpState::Accepted || config.state == CtpState::Quit ||
         config.state == CtpState::Stopped;
}

bool is_quasi_terminal(const CtpMachine& machine, const Configuration& config) {
  if (is_terminal(machine, config)) {
    return true;
  }
  return machine.has_revocations() && !config.pending && config.state == CtpState::Initiated &&
         config.revoke_count > 0;
}

namespace {

struct Walker {
  const CtpMachine& machine;
  unsigned loop_bound;
  unsigned revoke_bound;
  TraceSet out;
  Trace current;

  void walk(const Configuration& c, unsigned rerequests, unsigned redeclares) {
    if (is_quasi_terminal(machine, c)) {
      out.insert(current);
    }
    for (auto [party, act] : enabled_acts(machine, c)) {
      unsigned rr = rerequests;
      unsigned rd = redeclares;
      if (act == ActKind::Request && c.state == CtpState::Declined && ++rr > loop_bound) {
        continue;
      }
      if (act == ActKind::Declare && c.state == CtpState::Rejected && ++rd > loop_bound) {
        continue;
      }
      if (is_revoke(act) && c.revoke_count + 1 > revoke_bound) {
        continue;
      }
      current.steps.push_back(TraceStep{party, act, {}});
      walk(step(machine, c, party, act), rr, rd);
      current.steps.pop_back();
    }
  }
};

}  // namespace

TraceSet enumerate_traces(const CtpMachine& machine, unsigned loop_bound, unsigned revoke_bound) {
  Walker w{machine, loop_bound, revoke_bound, {}, {}};
  w.walk(machine.initial(), 0, 0);
  return std::move(w.out);
}

std::optional<Configuration> replay(const CtpMachine& machine, const Trace& trace) {
  Configuration c = machine.initial();
  for (const TraceStep& s : trace.steps) {
    auto next = try_step(machine, c, s.party, s.act);
    if (!next) {
      return std::nullopt;
    }
    c = *next;
  }
  return c;
}

bool accepts(const CtpMachine& machine, const Trace& trace) {
  auto end = replay(machine, trace);
  return end && is_quasi_terminal(machine, *end);
}

bool accepts_instances(const CtpMachine& machine, const Trace& trace) {
  Configuration c = machine.initial();
  bool started = false;
  for (const TraceStep& s : trace.steps) {
    auto next = try_step(machine, c, s.party, s.act);
    if (!next && started && is_quasi_terminal(machine, c) && s.act == ActKind::Request) {
      next = try_step(machine, machine.initial(), s.party, s.act);
    }
    if (!next) {
      return false;
    }
    c = *next;
    started = true;
  }
  return !started || is_quasi_terminal(machine, c);
}

}  // namespace demobpmn
