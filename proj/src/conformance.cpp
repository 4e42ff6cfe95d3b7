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
#include <sstream>

#include "demobpmn/ctp.hpp"
#include "demobpmn/error.hpp"
#include "demobpmn/simulator.hpp"
#include "json.hpp"

namespace demobpmn {

namespace {

constexpr std::size_t kMaxCounterexamples = 10;

bool offers(const PendingChoice& choice, ActKind act) {
  return std::find(choice.acts.begin(), choice.acts.end(), std::optional<ActKind>(act)) != choice.acts.end();
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : ", ") + s;
  return out;
}

// After the accept is revoked and the revoke allowed, the executor is back at
// rejected and may redo or revoke its declare; a refused revoke puts the
// initiator back in front of the choice it had before revoking.
void check_revocation(const BpmnGraph& graph, const Bounds& bounds, ConformanceReport& report) {
  const CtpMachine machine = build_ctp(PatternLevel::Complete);
  const std::vector<std::string> accepted = {"promise", "declare", "accept"};
  auto with = [&](std::initializer_list<std::string> more) {
    auto s = accepted;
    s.insert(s.end(), more);
    return s;
  };
  bool ok = true;
  try {
    auto allowed = run_script(graph, with({"revoke_accept", "allow"}), bounds);
    if (allowed.status != ScriptRun::Status::AwaitingChoice) {
      ok = false;
      report.revocation_notes.push_back("allow: run did not stop at a choice");
    } else {
      const auto& c = *allowed.choice;
      bool executor = graph.pools.size() > 1 && c.pool == graph.pools[1].id;
      bool redo = offers(c, ActKind::Declare) && offers(c, ActKind::RevokeDeclare);
      auto config = replay(machine, strip_transactions(allowed.trace));
      bool ctp_agrees = config && config->state == CtpState::Rejected;
      ok = ok && executor && redo && ctp_agrees;
      report.revocation_notes.push_back("allow: after '" + format_trace(allowed.trace) + "' " + c.pool +
                                        " chooses among " + join(c.labels) + (redo ? "" : " (declare or revoke_declare missing)") +
                                        (ctp_agrees ? "" : " (CTP not in rejected)"));
    }
    auto before = run_script(graph, accepted, bounds);
    auto refused = run_script(graph, with({"revoke_accept", "refuse"}), bounds);
    bool same = before.choice && refused.choice && before.choice->gateway == refused.choice->gateway &&
                before.choice->labels == refused.choice->labels;
    ok = ok && same;
    report.revocation_notes.push_back(
        std::string("refuse: ") + (same ? "back at " + refused.choice->gateway : "choice differs from before the revoke"));
  } catch (const Error& e) {
    ok = false;
    report.revocation_notes.push_back(std::string("scripted run failed: ") + e.what());
  }
  report.revocation = ok;
}

}  // namespace

ConformanceReport check_conformance(const BpmnGraph& graph, PatternLevel level, const Bounds& bounds) {
  ConformanceReport report;
  report.level = level;
  report.bounds = bounds;
  report.inclusion = level == PatternLevel::Complete;

  TraceSet diagram = strip_transactions(enumerate_bpmn_traces(graph, bounds));
  TraceSet pattern = enumerate_traces(build_ctp(level), bounds.loop, bounds.revoke);
  report.bpmn_traces = diagram.size();
  report.ctp_traces = pattern.size();
  std::set_difference(pattern.begin(), pattern.end(), diagram.begin(), diagram.end(),
                      std::back_inserter(report.missing));
  std::set_difference(diagram.begin(), diagram.end(), pattern.begin(), pattern.end(),
                      std::back_inserter(report.extra));
  report.deadlocks = find_deadlocks(graph, bounds);
  if (level == PatternLevel::Complete) check_revocation(graph, bounds, report);
  return report;
}

std::string ConformanceReport::to_text() const {
  std::ostringstream out;
  out << "conformance: " << to_string(level) << " pattern, loop bound " << bounds.loop << ", revoke bound "
      << bounds.revoke << "\n";
  out << "traces: " << bpmn_traces;
  if (inclusion) out << " of " << ctp_traces << " traces (inclusion)";
  else out << (bpmn_traces == ctp_traces && missing.empty() ? " = " : " != ") << ctp_traces << " traces";
  out << (traces_ok() ? "" : " FAIL") << "\n";
  auto list = [&](const char* what, const std::vector<Trace>& traces) {
    for (std::size_t i = 0; i < traces.size() && i < kMaxCounterexamples; ++i) {
      out << "  " << what << ": " << format_trace(traces[i]) << "\n";
    }
    if (traces.size() > kMaxCounterexamples) out << "  ... " << traces.size() - kMaxCounterexamples << " more\n";
  };
  if (!inclusion) list("missing", missing);
  list("extra", extra);
  if (deadlocks.deadlock_free()) {
    out << "deadlock: none (" << deadlocks.states << " states)\n";
  } else {
    out << "deadlock: FAIL\n";
    for (const auto& w : deadlocks.witnesses) {
      out << "  after '" << format_trace(w.trace) << "' waiting at " << join(w.stuck);
      if (!w.messages.empty()) out << "; undelivered " << join(w.messages);
      out << "\n";
    }
  }
  if (revocation) {
    out << "revocation: " << (*revocation ? "PASS" : "FAIL") << "\n";
    for (const auto& note : revocation_notes) out << "  " << note << "\n";
  }
  out << "verdict: " << (pass() ? "PASS" : "FAIL") << "\n";
  return out.str();
}

std::string ConformanceReport::to_json() const {
  using nlohmann::ordered_json;
  auto traces = [](const std::vector<Trace>& ts) {
    ordered_json a = ordered_json::array();
    for (const auto& t : ts) a.push_back(format_trace(t));
    return a;
  };
  ordered_json j;
  j["level"] = std::string(to_string(level));
  j["bounds"] = {{"loop", bounds.loop}, {"revoke", bounds.revoke}};
  j["traces"] = {{"relation", inclusion ? "inclusion" : "equality"},
                 {"bpmn", bpmn_traces},
                 {"ctp", ctp_traces},
                 {"ok", traces_ok()},
                 {"missing", inclusion ? ordered_json::array() : traces(missing)},
                 {"extra", traces(extra)}};
  ordered_json witnesses = ordered_json::array();
  for (const auto& w : deadlocks.witnesses) {
    witnesses.push_back({{"trace", format_trace(w.trace)}, {"stuck", w.stuck}, {"messages", w.messages}});
  }
  j["deadlock"] = {{"ok", deadlocks.deadlock_free()}, {"states", deadlocks.states}, {"witnesses", witnesses}};
  if (revocation) j["revocation"] = {{"ok", *revocation}, {"notes", revocation_notes}};
  else j["revocation"] = nullptr;
  j["verdict"] = pass() ? "PASS" : "FAIL";
  return j.dump(2) + "\n";
}

}  // namespace demobpmn
