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

#include <compare>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "demobpmn/acts.hpp"

namespace demobpmn {

/// One performed coordination act. `tk` is empty for traces of a bare
/// pattern machine and names the transaction kind for simulated diagrams.
struct TraceStep {
  Party party = Party::Initiator;
  ActKind act = ActKind::Request;
  std::string tk;

  bool operator==(const TraceStep&) const = default;
};

struct Trace {
  std::vector<TraceStep> steps;

  bool operator==(const Trace&) const = default;
  /// Lexicographic by short codes, then party, then transaction kind.
  std::strong_ordering operator<=>(const Trace& other) const;

  bool empty() const { return steps.empty(); }
  std::size_t size() const { return steps.size(); }
};

using TraceSet = std::set<Trace>;

enum class TraceFormat {
  Codes,           // rq·pm·da·ac
  WithParty,       // I:rq·E:pm
  WithTransaction  // rq(TK01)·pm(TK01)
};

inline constexpr std::string_view kStepSeparator = "\xC2\xB7";  // U+00B7

std::string format_trace(const Trace& trace, TraceFormat format = TraceFormat::Codes);

/// Accepts every format_trace output; "." is accepted as separator too.
/// Without a party prefix the party is the act's performer; allow/refuse
/// then need one, so they resolve against the most recent revoke.
std::optional<Trace> parse_trace(std::string_view line);

/// Drops transaction-kind tags so diagram traces compare with pattern traces.
Trace strip_transactions(const Trace& trace);
TraceSet strip_transactions(const TraceSet& traces);

/// Steps belonging to one transaction kind, in order.
Trace project(const Trace& trace, const std::string& tk);

}  // namespace demobpmn
