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

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "demobpmn/acts.hpp"
#include "demobpmn/bpmn.hpp"
#include "demobpmn/trace.hpp"

namespace demobpmn {

/// Exploration limits. `loop` caps every counted back edge (guards
/// "re-request", "re-declare", "another") per gateway; `revoke` caps the
/// revoke messages sent in one run.
struct Bounds {
  unsigned loop = 2;
  unsigned revoke = 2;
};

struct ChoicePolicy {
  enum class Strategy { Exhaustive, Random, Scripted };

  Strategy strategy = Strategy::Exhaustive;
  std::uint64_t seed = 0;
  std::vector<std::string> script;  // guard labels, consumed in order

  static ChoicePolicy exhaustive() { return {}; }
  static ChoicePolicy random(std::uint64_t seed) { return {Strategy::Random, seed, {}}; }
  static ChoicePolicy scripted(std::vector<std::string> labels) {
    return {Strategy::Scripted, 0, std::move(labels)};
  }
};

/// Runs one execution. Exclusive choices follow the policy (exhaustive takes
/// the first admissible guard). Throws Deadlock when tokens remain and
/// nothing can move, BoundExceeded when only bounded moves remain or a script
/// runs out, ScriptMismatch when a scripted label is not on offer.
Trace simulate(const BpmnGraph& graph, const ChoicePolicy& policy, const Bounds& bounds = {});

/// An exclusive decision waiting for input.
struct PendingChoice {
  std::string gateway;
  std::string pool;
  std::vector<std::string> labels;
  /// Act performed right after each label, when the branch leads to a send.
  std::vector<std::optional<ActKind>> acts;
};

struct ScriptRun {
  enum class Status { Complete, AwaitingChoice, Deadlock, BoundBlocked };

  Status status = Status::Complete;
  Trace trace;
  std::optional<PendingChoice> choice;  // set when awaiting a choice
};

/// Follows the script and stops at the first exclusive decision after it is
/// used up. Throws ScriptMismatch on a label that is not on offer.
ScriptRun run_script(const BpmnGraph& graph, const std::vector<std::string>& script, const Bounds& bounds = {});

/// Every trace of a run reaching completion (no tokens, no queued
/// messages). Runs cut by a bound are dropped.
TraceSet enumerate_bpmn_traces(const BpmnGraph& graph, const Bounds& bounds = {});

struct DeadlockWitness {
  Trace trace;                        // acts performed on the way
  std::vector<std::string> stuck;     // node ids holding or awaiting a token
  std::vector<std::string> messages;  // undelivered message ids
};

struct DeadlockReport {
  std::size_t states = 0;
  std::vector<DeadlockWitness> witnesses;

  bool deadlock_free() const { return witnesses.empty(); }
};

DeadlockReport find_deadlocks(const BpmnGraph& graph, const Bounds& bounds = {}, std::size_t max_witnesses = 3);

struct ProjectionReport {
  std::size_t states = 0;
  std::size_t refused = 0;
  std::vector<Trace> witnesses;  // shortest refused prefixes

  bool ok() const { return refused == 0; }
};

/// Explores every bounded run and replays the acts of each transaction kind,
/// in order, against the CTP at `level` as back-to-back instances. A run is
/// refused when an act has no transition or when it completes with some
/// instance short of an end point.
ProjectionReport check_projections(const BpmnGraph& graph, PatternLevel level, const Bounds& bounds = {},
                                   std::size_t max_witnesses = 3);

struct ConformanceReport {
  PatternLevel level = PatternLevel::Standard;
  Bounds bounds;
  bool inclusion = false;  // complete level: diagram traces only need to be CTP traces
  std::size_t bpmn_traces = 0;
  std::size_t ctp_traces = 0;
  std::vector<Trace> missing;  // CTP traces the diagram cannot produce
  std::vector<Trace> extra;    // diagram traces the CTP refuses
  DeadlockReport deadlocks;
  std::optional<bool> revocation;  // complete level only
  std::vector<std::string> revocation_notes;

  bool traces_ok() const { return extra.empty() && (inclusion || missing.empty()); }
  bool pass() const { return traces_ok() && deadlocks.deadlock_free() && revocation.value_or(true); }

  std::string to_text() const;
  std::string to_json() const;
};

/// Compares a single-transaction block with the pattern machine of `level`.
ConformanceReport check_conformance(const BpmnGraph& graph, PatternLevel level, const Bounds& bounds = {});

}  // namespace demobpmn
