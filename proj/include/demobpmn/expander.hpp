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
#include <optional>
#include <string>
#include <string_view>

#include "demobpmn/acts.hpp"
#include "demobpmn/bpmn.hpp"
#include "demobpmn/demo_model.hpp"

namespace demobpmn {

struct ExpandOptions {
  bool include_production = false;
  std::string id_prefix;  // defaults to the transaction kind id
  PatternLevel level = PatternLevel::Standard;
};

struct BlockStats {
  std::size_t pools = 0;
  std::size_t lanes = 0;
  std::size_t messages = 0;
  std::size_t start_events = 0;
  std::size_t message_start_events = 0;
  std::size_t intermediate_catch_events = 0;
  std::size_t end_events = 0;
  std::size_t tasks = 0;  // abstract
  std::size_t send_tasks = 0;
  std::size_t receive_tasks = 0;
  std::size_t exclusive_gateways = 0;
  std::size_t event_based_gateways = 0;
  std::size_t parallel_gateways = 0;
  std::size_t sequence_flows = 0;
  std::size_t message_flows = 0;

  std::size_t events() const { return start_events + intermediate_catch_events + end_events; }
  std::size_t activities() const { return tasks + send_tasks + receive_tasks; }
  std::size_t gateways() const { return exclusive_gateways + event_based_gateways + parallel_gateways; }
  std::size_t flow_nodes() const { return events() + activities() + gateways(); }

  bool operator==(const BlockStats&) const = default;
};

BlockStats block_stats(const BpmnGraph& graph);

/// Two-pool collaboration realising one transaction at the chosen level.
/// Pools are "<prefix>_initiator" and "<prefix>_executor", named after the
/// roles; each coordination act is a send task in its performer's pool with
/// a message named "<code>(<tk id>)".
BpmnGraph expand_transaction(const TransactionKind& tk, const ExpandOptions& options = {});

/// Decoded message name: "pm(TK01)" -> promise of TK01; "al-rq(TK01)" ->
/// allow answering revoke_request.
struct MessageLabel {
  ActKind act = ActKind::Request;
  std::optional<ActKind> answers;  // revoke answered by allow/refuse
  std::string tk;

  /// Party performing the act.
  Party party() const;
};

std::string message_name(ActKind act, std::string_view tk, std::optional<ActKind> answers = std::nullopt);
std::optional<MessageLabel> parse_message_name(std::string_view name);

// Guard labels on the exclusive splits of generated blocks.
namespace guard {
inline constexpr std::string_view kReRequest = "re-request";
inline constexpr std::string_view kReDeclare = "re-declare";
inline constexpr std::string_view kEnd = "end";
}  // namespace guard

}  // namespace demobpmn
