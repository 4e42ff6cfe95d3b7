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

#include <cstdint>
#include <optional>
#include <string_view>

namespace demobpmn {

enum class PatternLevel { Basic, Standard, Complete };

enum class Party { Initiator, Executor };

enum class ActKind {
  Request,
  Promise,
  Decline,
  Declare,
  Accept,
  Reject,
  Quit,
  Stop,
  RevokeRequest,
  RevokePromise,
  RevokeDeclare,
  RevokeAccept,
  Allow,
  Refuse,
};

inline constexpr ActKind kAllActs[] = {
    ActKind::Request,       ActKind::Promise,       ActKind::Decline,       ActKind::Declare,
    ActKind::Accept,        ActKind::Reject,        ActKind::Quit,          ActKind::Stop,
    ActKind::RevokeRequest, ActKind::RevokePromise, ActKind::RevokeDeclare, ActKind::RevokeAccept,
    ActKind::Allow,         ActKind::Refuse,
};

enum class CtpState {
  Initiated,
  Requested,
  Promised,
  Declared,
  Accepted,
  Declined,
  Rejected,
  Quit,
  Stopped,
};

/// The four revocable acts, in rollback order request < promise < declare < accept.
enum class Milestone : std::uint8_t { Request = 0, Promise = 1, Declare = 2, Accept = 3 };

inline constexpr Milestone kMilestones[] = {Milestone::Request, Milestone::Promise,
                                            Milestone::Declare, Milestone::Accept};

// Names and short codes. Parsers return nullopt on unknown input.
std::string_view to_string(PatternLevel level);
std::string_view to_string(Party party);
std::string_view to_string(ActKind act);
std::string_view to_string(CtpState state);
std::string_view short_code(ActKind act);
std::optional<PatternLevel> parse_level(std::string_view text);
std::optional<ActKind> parse_act(std::string_view text);  // accepts names and short codes
std::optional<CtpState> parse_state(std::string_view text);

Party counterparty(Party party);

bool is_revoke(ActKind act);
ActKind revoke_of(Milestone m);
Milestone milestone_of(ActKind act);  // request/promise/declare/accept and their revokes
std::optional<Milestone> revoked_milestone(ActKind revoke);

/// Fixed performer. Allow and refuse have none of their own: they belong to
/// the counterparty of the revoke in flight, so this returns nullopt for them.
std::optional<Party> performer(ActKind act);

/// Performer of allow/refuse given the revoke they answer.
Party responder_of(ActKind revoke);

/// The act whose performance produces `state` (requested -> request, ...).
std::optional<ActKind> act_producing(CtpState state);

}  // namespace demobpmn
