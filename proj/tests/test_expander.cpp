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

#include <set>

#include "doctest.h"
#include "demobpmn/ctp.hpp"
#include "demobpmn/expander.hpp"

using namespace demobpmn;

namespace {

const TransactionKind kTk{"TK01", "patient problem diagnosing", "CA00", "A01"};

BpmnGraph block(PatternLevel level, bool production = false) {
  ExpandOptions o;
  o.level = level;
  o.include_production = production;
  return expand_transaction(kTk, o);
}

}  // namespace

TEST_CASE("basic block counts") {
  auto s = block_stats(block(PatternLevel::Basic));
  CHECK(s.pools == 2);
  CHECK(s.flow_nodes() == 11);
  CHECK(s.events() == 7);
  CHECK(s.send_tasks == 4);
  CHECK(s.gateways() == 0);
  CHECK(s.sequence_flows == 9);
  CHECK(s.message_flows == 4);
  CHECK(s.message_start_events == 1);
}

TEST_CASE("standard block counts") {
  auto s = block_stats(block(PatternLevel::Standard));
  CHECK(s.events() == 16);
  CHECK(s.send_tasks == 8);
  CHECK(s.gateways() == 12);
  CHECK(s.sequence_flows == 38);
  CHECK(s.message_flows == 9);
  CHECK(s.message_start_events == 1);
}

TEST_CASE("production task") {
  auto plain = block(PatternLevel::Basic);
  auto with = block(PatternLevel::Basic, true);
  auto a = block_stats(plain);
  auto b = block_stats(with);
  CHECK(b.tasks == a.tasks + 1);
  CHECK(b.sequence_flows == a.sequence_flows + 1);
  CHECK(b.message_flows == a.message_flows);
  const Pool& e = with.pools[1];
  const FlowNode* task = e.find_node("TK01_E_execute");
  REQUIRE(task);
  CHECK(task->name == "execute(TK01)");
  auto in = e.incoming(task->id);
  auto out = e.outgoing(task->id);
  REQUIRE(in.size() == 1);
  REQUIRE(out.size() == 1);
  CHECK(in[0]->source == "TK01_E_send_pm");
  CHECK(out[0]->target == "TK01_E_send_da");
  for (auto level : {PatternLevel::Standard, PatternLevel::Complete}) {
    CHECK(block_stats(block(level, true)).tasks == 1);
  }
}

TEST_CASE("pools follow the roles") {
  auto g = block(PatternLevel::Standard);
  REQUIRE(g.pools.size() == 2);
  CHECK(g.pools[0].id == "TK01_initiator");
  CHECK(g.pools[0].name == "CA00");
  CHECK(g.pools[1].name == "A01");

  ExpandOptions o;
  o.id_prefix = "X";
  auto prefixed = expand_transaction(kTk, o);
  CHECK(prefixed.pools[0].id == "X_initiator");
  for (const auto& m : prefixed.messages) CHECK(m.name.find("(TK01)") != std::string::npos);
}

TEST_CASE("blocks are valid and deterministic") {
  for (auto level : {PatternLevel::Basic, PatternLevel::Standard, PatternLevel::Complete}) {
    for (bool production : {false, true}) {
      auto g = block(level, production);
      CHECK(validate_bpmn(g).empty());
      CHECK(g == block(level, production));
    }
  }
}

TEST_CASE("message names cover the act alphabet") {
  for (auto level : {PatternLevel::Basic, PatternLevel::Standard, PatternLevel::Complete}) {
    std::set<ActKind> acts;
    for (const auto& m : block(level).messages) {
      auto label = parse_message_name(m.name);
      REQUIRE(label);
      CHECK(label->tk == "TK01");
      acts.insert(label->act);
    }
    CHECK(acts == build_ctp(level).alphabet());
  }
}

TEST_CASE("message name codec") {
  CHECK(message_name(ActKind::Promise, "TK01") == "pm(TK01)");
  CHECK(message_name(ActKind::Allow, "TK01", ActKind::RevokeDeclare) == "al-da(TK01)");
  auto l = parse_message_name("rf-ac(TK07)");
  REQUIRE(l);
  CHECK(l->act == ActKind::Refuse);
  CHECK(l->answers == ActKind::RevokeAccept);
  CHECK(l->party() == Party::Executor);
  CHECK(parse_message_name("rv-rq(TK01)")->party() == Party::Initiator);
  CHECK_FALSE(parse_message_name("pm"));
  CHECK_FALSE(parse_message_name("al(TK01)"));
  CHECK_FALSE(parse_message_name("zz(TK01)"));
}

TEST_CASE("first request starts the executor, re-requests are caught") {
  auto g = block(PatternLevel::Standard);
  const Pool& e = g.pools[1];
  std::size_t starts = 0;
  std::size_t catches = 0;
  for (const auto& n : e.nodes) {
    if (n.message != "TK01_msg_rq") continue;
    if (n.kind == NodeKind::StartEvent) ++starts;
    if (n.kind == NodeKind::IntermediateCatchEvent) ++catches;
  }
  CHECK(starts == 1);
  CHECK(catches == 1);
  std::size_t from_send = 0;
  for (const auto& f : g.message_flows) from_send += f.source == "TK01_I_send_rq";
  CHECK(from_send == 2);
}

TEST_CASE("empty graph stats") { CHECK(block_stats(BpmnGraph{}) == BlockStats{}); }
