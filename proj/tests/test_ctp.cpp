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

#include <map>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "demobpmn/ctp.hpp"
#include "demobpmn/error.hpp"

using namespace demobpmn;

namespace {

// Standard pattern written out by hand, independent of build_ctp.
const std::map<std::pair<std::string, std::string>, std::string> kStandard = {
    {{"in", "rq"}, "rq"}, {{"rq", "pm"}, "pm"}, {{"rq", "dc"}, "dc"}, {{"dc", "rq"}, "rq"},
    {{"dc", "qt"}, "qt"}, {{"pm", "da"}, "da"}, {{"da", "ac"}, "ac"}, {{"da", "rj"}, "rj"},
    {{"rj", "da"}, "da"}, {{"rj", "st"}, "st"},
};

void brute(const std::string& state, std::vector<std::string>& word, unsigned u, unsigned rerq, unsigned reda,
           std::set<std::vector<std::string>>& out) {
  if (state == "ac" || state == "qt" || state == "st") {
    out.insert(word);
    return;
  }
  for (const char* code : {"rq", "pm", "dc", "da", "ac", "rj", "qt", "st"}) {
    auto it = kStandard.find({state, code});
    if (it == kStandard.end()) continue;
    unsigned r1 = rerq + (state == "dc" && it->second == "rq");
    unsigned r2 = reda + (state == "rj" && it->second == "da");
    if (r1 > u || r2 > u) continue;
    word.push_back(code);
    brute(it->second, word, u, r1, r2, out);
    word.pop_back();
  }
}

std::set<std::vector<std::string>> brute_force(unsigned u) {
  std::set<std::vector<std::string>> out;
  std::vector<std::string> word;
  brute("in", word, u, 0, 0, out);
  return out;
}

std::vector<std::string> codes(const Trace& t) {
  std::vector<std::string> out;
  for (const auto& s : t.steps) out.emplace_back(short_code(s.act));
  return out;
}

Configuration run(const CtpMachine& m, std::initializer_list<std::pair<Party, ActKind>> acts) {
  Configuration c = m.initial();
  for (auto [p, a] : acts) c = step(m, c, p, a);
  return c;
}

constexpr Party I = Party::Initiator;
constexpr Party E = Party::Executor;

bool has(const std::vector<std::pair<Party, ActKind>>& v, Party p, ActKind a) {
  return std::find(v.begin(), v.end(), std::make_pair(p, a)) != v.end();
}

}  // namespace

TEST_CASE("basic machine is the happy path") {
  auto m = build_ctp(PatternLevel::Basic);
  CHECK(m.transitions().size() == 4);
  CHECK(m.states().size() == 5);
}

TEST_CASE("standard alphabet") {
  auto m = build_ctp(PatternLevel::Standard);
  std::set<ActKind> want = {ActKind::Request, ActKind::Promise, ActKind::Decline, ActKind::Declare,
                            ActKind::Accept,  ActKind::Reject,  ActKind::Quit,    ActKind::Stop};
  CHECK(m.alphabet() == want);
}

TEST_CASE("rollback targets") {
  CHECK(CtpMachine::rollback_target(ActKind::RevokeRequest) == CtpState::Initiated);
  CHECK(CtpMachine::rollback_target(ActKind::RevokePromise) == CtpState::Requested);
  CHECK(CtpMachine::rollback_target(ActKind::RevokeDeclare) == CtpState::Promised);
  CHECK(CtpMachine::rollback_target(ActKind::RevokeAccept) == CtpState::Rejected);
}

TEST_CASE("step") {
  auto std_m = build_ctp(PatternLevel::Standard);
  auto c = run(std_m, {{I, ActKind::Request}, {E, ActKind::Promise}});
  CHECK(c.state == CtpState::Promised);
  CHECK(c.occurred.has(Milestone::Request));
  CHECK(c.occurred.has(Milestone::Promise));
  CHECK_FALSE(c.occurred.has(Milestone::Declare));

  auto basic = build_ctp(PatternLevel::Basic);
  auto requested = run(basic, {{I, ActKind::Request}});
  try {
    step(basic, requested, E, ActKind::Decline);
    FAIL("decline accepted at basic level");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidAct);
  }
  CHECK_FALSE(try_step(basic, requested, I, ActKind::Promise));

  auto full = build_ctp(PatternLevel::Complete);
  auto rolled = run(full, {{I, ActKind::Request},
                           {E, ActKind::Promise},
                           {E, ActKind::Declare},
                           {I, ActKind::Accept},
                           {I, ActKind::RevokeAccept},
                           {E, ActKind::Allow}});
  CHECK(rolled.state == CtpState::Rejected);
  CHECK(rolled.occurred.mask() == 0b0111);
}

TEST_CASE("pending revoke blocks other acts") {
  auto m = build_ctp(PatternLevel::Complete);
  auto c = run(m, {{I, ActKind::Request}, {E, ActKind::Promise}, {E, ActKind::RevokePromise}});
  try {
    step(m, c, E, ActKind::Declare);
    FAIL("declare accepted while a revoke is pending");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::PendingRevoke);
  }
}

TEST_CASE("enabled acts") {
  auto m = build_ctp(PatternLevel::Standard);
  auto declared = run(m, {{I, ActKind::Request}, {E, ActKind::Promise}, {E, ActKind::Declare}});
  auto acts = enabled_acts(m, declared);
  CHECK(acts.size() == 2);
  CHECK(has(acts, I, ActKind::Accept));
  CHECK(has(acts, I, ActKind::Reject));

  auto quit = run(m, {{I, ActKind::Request}, {E, ActKind::Decline}, {I, ActKind::Quit}});
  CHECK(enabled_acts(m, quit).empty());

  auto full = build_ctp(PatternLevel::Complete);
  auto rejected = run(full, {{I, ActKind::Request}, {E, ActKind::Promise}, {E, ActKind::Declare}, {I, ActKind::Reject}});
  auto more = enabled_acts(full, rejected);
  CHECK(has(more, E, ActKind::Declare));
  CHECK(has(more, E, ActKind::RevokeDeclare));
}

TEST_CASE("terminal configurations") {
  auto std_m = build_ctp(PatternLevel::Standard);
  auto full = build_ctp(PatternLevel::Complete);
  auto happy = {std::make_pair(I, ActKind::Request), std::make_pair(E, ActKind::Promise),
                std::make_pair(E, ActKind::Declare), std::make_pair(I, ActKind::Accept)};
  Configuration a = std_m.initial();
  for (auto [p, x] : happy) a = step(std_m, a, p, x);
  CHECK(is_terminal(std_m, a));

  auto rejected = run(full, {{I, ActKind::Request}, {E, ActKind::Promise}, {E, ActKind::Declare}, {I, ActKind::Reject}});
  CHECK_FALSE(is_terminal(full, rejected));

  Configuration b = full.initial();
  for (auto [p, x] : happy) b = step(full, b, p, x);
  auto pending = step(full, b, I, ActKind::RevokeAccept);
  CHECK_FALSE(is_terminal(full, pending));
  CHECK_FALSE(enabled_acts(full, pending).empty());
}

TEST_CASE("trace oracles") {
  auto basic = build_ctp(PatternLevel::Basic);
  for (unsigned u : {0u, 1u, 2u}) {
    auto ts = enumerate_traces(basic, u, 0);
    REQUIRE(ts.size() == 1);
    CHECK(format_trace(*ts.begin()) == "rq·pm·da·ac");
  }

  auto std_m = build_ctp(PatternLevel::Standard);
  std::set<std::string> zero;
  for (const auto& t : enumerate_traces(std_m, 0, 0)) zero.insert(format_trace(t));
  CHECK(zero == std::set<std::string>{"rq·pm·da·ac", "rq·dc·qt", "rq·pm·da·rj·st"});

  for (unsigned u = 0; u <= 3; ++u) {
    CAPTURE(u);
    auto ts = enumerate_traces(std_m, u, 0);
    std::set<std::vector<std::string>> got;
    for (const auto& t : ts) got.insert(codes(t));
    auto want = brute_force(u);
    CHECK(got == want);
    CHECK(ts.size() == (u + 1) + 2 * (u + 1) * (u + 1));
  }
  CHECK(enumerate_traces(std_m, 1, 0).size() == 10);
  CHECK(enumerate_traces(std_m, 2, 0).size() == 21);
}

TEST_CASE("every enumerated trace is accepted") {
  for (auto level : {PatternLevel::Basic, PatternLevel::Standard, PatternLevel::Complete}) {
    auto m = build_ctp(level);
    for (const auto& t : enumerate_traces(m, 1, 2)) {
      CAPTURE(format_trace(t, TraceFormat::WithParty));
      CHECK(accepts(m, t));
      CHECK(t.steps.front().act == ActKind::Request);
    }
  }
}

namespace {

// Reachable configurations of a level, bounded by revoke count.
std::vector<Configuration> reachable(const CtpMachine& m, unsigned max_revokes) {
  std::set<Configuration> seen{m.initial()};
  std::vector<Configuration> order{m.initial()};
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (auto [p, a] : enabled_acts(m, order[i])) {
      auto next = step(m, order[i], p, a);
      if (next.revoke_count > max_revokes) continue;
      if (seen.insert(next).second) order.push_back(next);
    }
  }
  return order;
}

}  // namespace

TEST_CASE("level monotonicity") {
  auto basic = build_ctp(PatternLevel::Basic);
  auto std_m = build_ctp(PatternLevel::Standard);
  auto full = build_ctp(PatternLevel::Complete);
  for (const auto& c : reachable(basic, 0)) {
    auto b = enabled_acts(basic, c);
    auto s = enabled_acts(std_m, c);
    auto f = enabled_acts(full, c);
    for (auto pa : b) CHECK(has(s, pa.first, pa.second));
    for (auto pa : s) {
      if (pa.second == ActKind::Quit || pa.second == ActKind::Stop) continue;
      CHECK(has(f, pa.first, pa.second));
    }
  }
  // Standard configurations without quit/stop carry over as well.
  for (const auto& c : reachable(std_m, 0)) {
    for (auto pa : enabled_acts(std_m, c)) {
      if (pa.second == ActKind::Quit || pa.second == ActKind::Stop) continue;
      CHECK(has(enabled_acts(full, c), pa.first, pa.second));
    }
  }
}

TEST_CASE("revocation properties") {
  auto m = build_ctp(PatternLevel::Complete);
  for (const auto& c : reachable(m, 2)) {
    if (c.pending) continue;
    for (auto [p, a] : enabled_acts(m, c)) {
      if (!is_revoke(a)) continue;
      auto pending = step(m, c, p, a);
      auto back = step(m, pending, counterparty(p), ActKind::Refuse);
      CHECK(key_of(back) == key_of(c));

      auto allowed = step(m, pending, counterparty(p), ActKind::Allow);
      Milestone x = milestone_of(a);
      for (Milestone y : kMilestones) {
        if (y >= x) CHECK_FALSE(allowed.occurred.has(y));
        else CHECK(allowed.occurred.has(y) == c.occurred.has(y));
      }
      CHECK(allowed.state == CtpMachine::rollback_target(a));
    }
  }
}

TEST_CASE("determinism and no silent deadlock") {
  for (auto level : {PatternLevel::Basic, PatternLevel::Standard, PatternLevel::Complete}) {
    auto m = build_ctp(level);
    for (const auto& c : reachable(m, 2)) {
      auto acts = enabled_acts(m, c);
      if (acts.empty()) CHECK(is_terminal(m, c));
      for (auto [p, a] : acts) CHECK(step(m, c, p, a) == step(m, c, p, a));
    }
  }
}

TEST_CASE("transition table rows are tab separated") {
  auto table = build_ctp(PatternLevel::Basic).transition_table();
  CHECK(table.find("requested\texecutor\tpm\tpromised") != std::string::npos);
}
