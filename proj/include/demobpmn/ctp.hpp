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

#include <bitset>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "demobpmn/acts.hpp"
#include "demobpmn/trace.hpp"

namespace demobpmn {

struct PendingRevoke {
  ActKind revoke = ActKind::RevokeRequest;
  CtpState resume = CtpState::Initiated;

  auto operator<=>(const PendingRevoke&) const = default;
};

class Occurred {
 public:
  bool has(Milestone m) const { return bits_.test(static_cast<std::size_t>(m)); }
  void set(Milestone m) { bits_.set(static_cast<std::size_t>(m)); }
  void reset(Milestone m) { bits_.reset(static_cast<std::size_t>(m)); }
  unsigned long mask() const { return bits_.to_ulong(); }

  static Occurred from_mask(unsigned long mask) {
    Occurred o;
    o.bits_ = std::bitset<4>(mask);
    return o;
  }

  bool operator==(const Occurred&) const = default;
  auto operator<=>(const Occurred& other) const { return mask() <=> other.mask(); }

 private:
  std::bitset<4> bits_;
};

struct Configuration {
  CtpState state = CtpState::Initiated;
  Occurred occurred;
  std::optional<PendingRevoke> pending;
  unsigned revoke_count = 0;

  bool operator==(const Configuration&) const = default;
  auto operator<=>(const Configuration&) const = default;
};

/// Same configuration with the revoke history dropped; this is what level
/// comparisons and the refuse round-trip identify configurations by.
struct ConfigurationKey {
  CtpState state;
  unsigned long occurred;
  std::optional<PendingRevoke> pending;

  auto operator<=>(const ConfigurationKey&) const = default;
};
ConfigurationKey key_of(const Configuration& c);

struct Transition {
  CtpState from;
  Party party;
  ActKind act;
  CtpState to;

  auto operator<=>(const Transition&) const = default;
};

/// Labelled transition system of one transaction at a chosen pattern level.
/// The plain transitions are tabulated; the revocation protocol (complete
/// level only) is rule-based since it applies to every state in which the
/// revoked act has occurred.
class CtpMachine {
 public:
  explicit CtpMachine(PatternLevel level);

  PatternLevel level() const { return level_; }
  const std::vector<Transition>& transitions() const { return transitions_; }
  bool has_revocations() const { return level_ == PatternLevel::Complete; }
  std::set<CtpState> states() const;
  std::set<ActKind> alphabet() const;

  /// rv-rq -> initiated, rv-pm -> requested, rv-da -> promised, rv-ac -> rejected.
  static CtpState rollback_target(ActKind revoke);

  Configuration initial() const { return Configuration{}; }

  /// Tab-separated "state party act successor" rows.
  std::string transition_table() const;

 private:
  PatternLevel level_;
  std::vector<Transition> transitions_;
};

CtpMachine build_ctp(PatternLevel level);

/// Throws Error(InvalidAct) or Error(PendingRevoke).
Configuration step(const CtpMachine& machine, const Configuration& config, Party party,
                   ActKind act);

/// Non-throwing variant of step.
std::optional<Configuration> try_step(const CtpMachine& machine, const Configuration& config,
                                      Party party, ActKind act);

std::vector<std::pair<Party, ActKind>> enabled_acts(const CtpMachine& machine,
                                                    const Configuration& config);

bool is_terminal(const CtpMachine& machine, const Configuration& config);

/// A point where a trace may legitimately end: terminal, or (complete level)
/// back in `initiated` after an allowed revoke_request.
bool is_quasi_terminal(const CtpMachine& machine, const Configuration& config);

}  // namespace demobpmn

namespace demobpmn {

/// Maximal traces from the initial configuration, ending in a terminal or
/// quasi-terminal configuration. Each structural loop (declined -> request,
/// rejected -> declare) fires at most `loop_bound` times and at most
/// `revoke_bound` revokes fire in total. Paths that exhaust a bound short
/// of an end point are dropped.
TraceSet enumerate_traces(const CtpMachine& machine, unsigned loop_bound, unsigned revoke_bound);

/// Replays `trace` from the initial configuration; nullopt if a step is
/// refused. The result need not be terminal.
std::optional<Configuration> replay(const CtpMachine& machine, const Trace& trace);

/// True iff the trace replays and ends terminal or quasi-terminal.
bool accepts(const CtpMachine& machine, const Trace& trace);

/// Acceptance of a sequence of back-to-back instances of one transaction:
/// a request arriving once an instance has ended starts the next one.
bool accepts_instances(const CtpMachine& machine, const Trace& trace);

}  // namespace demobpmn
