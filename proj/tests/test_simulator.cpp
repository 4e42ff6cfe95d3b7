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

#include "doctest.h"
#include "demobpmn/composer.hpp"
#include "demobpmn/ctp.hpp"
#include "demobpmn/error.hpp"
#include "demobpmn/expander.hpp"
#include "demobpmn/simulator.hpp"

using namespace demobpmn;

namespace {

BpmnGraph block(PatternLevel level, bool production = false) {
  ExpandOptions o;
  o.level = level;
  o.include_production = production;
  return expand_transaction({"TK01", "x", "CA00", "A01"}, o);
}

std::string run(const BpmnGraph& g, const ChoicePolicy& p, Bounds b = {}) {
  return format_trace(simulate(g, p, b));
}

ErrorKind failure(const BpmnGraph& g, const ChoicePolicy& p) {
  try {
    simulate(g, p);
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::Io;
}

}  // namespace

TEST_CASE("basic block has one behaviour") {
  auto g = block(PatternLevel::Basic);
  CHECK(run(g, ChoicePolicy::exhaustive()) == "rq·pm·da·ac");
  for (std::uint64_t seed = 0; seed < 5; ++seed) CHECK(run(g, ChoicePolicy::random(seed)) == "rq·pm·da·ac");
  auto ts = enumerate_bpmn_traces(g);
  REQUIRE(ts.size() == 1);
  CHECK(format_trace(*ts.begin(), TraceFormat::WithTransaction) == "rq(TK01)·pm(TK01)·da(TK01)·ac(TK01)");
  CHECK(enumerate_bpmn_traces(block(PatternLevel::Basic, true)) == ts);
}

TEST_CASE("scripted standard runs") {
  auto g = block(PatternLevel::Standard);
  CHECK(run(g, ChoicePolicy::scripted({"decline", "quit"})) == "rq·dc·qt");
  CHECK(run(g, ChoicePolicy::scripted({"promise", "reject", "re-declare", "accept"})) == "rq·pm·da·rj·da·ac");
  CHECK(failure(g, ChoicePolicy::scripted({"decline"})) == ErrorKind::BoundExceeded);
  CHECK(failure(g, ChoicePolicy::scripted({"dance"})) == ErrorKind::ScriptMismatch);
  auto script = ChoicePolicy::scripted({"decline", "re-request", "promise", "reject", "stop"});
  CHECK(run(g, script) == run(g, script));
}

TEST_CASE("loop bounds cut choices") {
  auto g = block(PatternLevel::Standard);
  Bounds none{0, 0};
  CHECK(failure(g, ChoicePolicy::scripted({"decline", "re-request"})) == ErrorKind::BoundExceeded);
  // With no loop budget the only way out of a decline is quitting.
  CHECK(run(g, ChoicePolicy::scripted({"decline"}), none) == "rq·dc·qt");
}

TEST_CASE("trace sets equal the pattern machine") {
  for (auto level : {PatternLevel::Basic, PatternLevel::Standard}) {
    for (unsigned u : {0u, 1u, 2u}) {
      CAPTURE(u);
      auto diagram = strip_transactions(enumerate_bpmn_traces(block(level), {u, 0}));
      CHECK(diagram == enumerate_traces(build_ctp(level), u, 0));
    }
  }
  CHECK(enumerate_bpmn_traces(block(PatternLevel::Standard), {1, 0}).size() == 10);
}

TEST_CASE("complete block traces are pattern traces") {
  auto m = build_ctp(PatternLevel::Complete);
  auto diagram = strip_transactions(enumerate_bpmn_traces(block(PatternLevel::Complete), {1, 2}));
  auto pattern = enumerate_traces(m, 1, 2);
  CHECK_FALSE(diagram.empty());
  CHECK(std::includes(pattern.begin(), pattern.end(), diagram.begin(), diagram.end()));
}

TEST_CASE("revocation choices") {
  auto g = block(PatternLevel::Complete);
  auto allowed = run_script(g, {"promise", "declare", "accept", "revoke_accept", "allow"});
  REQUIRE(allowed.status == ScriptRun::Status::AwaitingChoice);
  CHECK(format_trace(allowed.trace) == "rq·pm·da·ac·rv-ac·al");
  CHECK(allowed.choice->pool == "TK01_executor");
  auto& acts = allowed.choice->acts;
  CHECK(std::count(acts.begin(), acts.end(), std::optional<ActKind>(ActKind::Declare)) == 1);
  CHECK(std::count(acts.begin(), acts.end(), std::optional<ActKind>(ActKind::RevokeDeclare)) == 1);

  auto before = run_script(g, {"promise", "declare", "accept"});
  auto refused = run_script(g, {"promise", "declare", "accept", "revoke_accept", "refuse"});
  REQUIRE(before.choice);
  REQUIRE(refused.choice);
  CHECK(before.choice->gateway == refused.choice->gateway);
  CHECK(before.choice->labels == refused.choice->labels);

  auto done = run_script(g, {"promise", "declare", "accept", "end"});
  CHECK(done.status == ScriptRun::Status::Complete);
}

TEST_CASE("deadlock detection") {
  for (auto level : {PatternLevel::Basic, PatternLevel::Standard, PatternLevel::Complete}) {
    CHECK(find_deadlocks(block(level)).deadlock_free());
  }
  auto g = block(PatternLevel::Standard);
  auto& flows = g.message_flows;
  flows.erase(std::remove_if(flows.begin(), flows.end(), [](const MessageFlow& f) { return f.message == "TK01_msg_st"; }),
              flows.end());
  auto report = find_deadlocks(g);
  REQUIRE_FALSE(report.deadlock_free());
  CHECK(format_trace(report.witnesses[0].trace) == "rq·pm·da·rj·st");
  CHECK(failure(g, ChoicePolicy::scripted({"promise", "reject", "stop"})) == ErrorKind::Deadlock);

  auto conf = check_conformance(g, PatternLevel::Standard);
  CHECK_FALSE(conf.pass());
  CHECK(conf.to_text().find("deadlock: FAIL") != std::string::npos);
}

TEST_CASE("conformance reports") {
  auto basic = check_conformance(block(PatternLevel::Basic), PatternLevel::Basic);
  CHECK(basic.pass());
  CHECK(basic.to_text().find("1 = 1 traces") != std::string::npos);
  CHECK(basic.to_json().find("\"verdict\": \"PASS\"") != std::string::npos);

  auto standard = check_conformance(block(PatternLevel::Standard), PatternLevel::Standard);
  CHECK(standard.pass());
  CHECK(standard.bpmn_traces == 21);

  auto complete = check_conformance(block(PatternLevel::Complete), PatternLevel::Complete);
  CHECK(complete.pass());
  CHECK(complete.revocation == true);

  // A standard block checked against the basic machine has extra traces.
  auto wrong = check_conformance(block(PatternLevel::Standard), PatternLevel::Basic);
  CHECK_FALSE(wrong.pass());
  CHECK_FALSE(wrong.extra.empty());
}

TEST_CASE("composed PoliGyn") {
  auto model = parse_model_file(std::string(CORPUS_DIR) + "/poligyn.demo").model;
  for (auto level : {PatternLevel::Basic, PatternLevel::Standard}) {
    ExpandOptions o;
    o.level = level;
    auto g = compose(model, o);
    CHECK(find_deadlocks(g).deadlock_free());
    auto traces = enumerate_bpmn_traces(g, {1, 0});
    CHECK_FALSE(traces.empty());
    for (const auto& t : traces) {
      for (const auto& tk : model.transaction_kinds) {
        auto part = strip_transactions(project(t, tk.id));
        if (part.empty()) continue;
        CHECK(accepts_instances(build_ctp(level), part));
      }
    }
  }
}

TEST_CASE("projection check") {
  auto model = parse_model_file(std::string(CORPUS_DIR) + "/poligyn.demo").model;
  for (auto level : {PatternLevel::Basic, PatternLevel::Standard}) {
    ExpandOptions o;
    o.level = level;
    auto report = check_projections(compose(model, o), level, {1, 0});
    CHECK(report.ok());
    CHECK(report.states > 1);
  }
  CHECK(check_projections(block(PatternLevel::Complete), PatternLevel::Complete).ok());

  // Promise messages relabelled as declares: a declare before any promise.
  auto g = block(PatternLevel::Standard);
  for (auto& msg : g.messages) {
    if (msg.name == "pm(TK01)") msg.name = "da(TK01)";
  }
  auto bad = check_projections(g, PatternLevel::Standard);
  CHECK_FALSE(bad.ok());
  REQUIRE_FALSE(bad.witnesses.empty());
  CHECK(format_trace(bad.witnesses[0]) == "rq·da");

  // The standard block leaves the basic machine through qt, dc and rj.
  CHECK_FALSE(check_projections(block(PatternLevel::Standard), PatternLevel::Basic).ok());
}
