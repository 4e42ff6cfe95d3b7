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

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "demobpmn/acts.hpp"
#include "demobpmn/diagnostic.hpp"

namespace demobpmn {

struct TransactionKind {
  std::string id;    // letter prefix + digits, e.g. TK01
  std::string name;  // free text
  std::string initiator_role;
  std::string executor_role;

  auto operator<=>(const TransactionKind&) const = default;
};

/// low..high, high absent meaning unbounded ("*").
struct CardinalityRange {
  unsigned low = 1;
  std::optional<unsigned> high = 1;

  bool unbounded() const { return !high.has_value(); }
  bool valid() const { return !high || (*high >= 1 && low <= *high); }
  std::string to_string() const;
  static std::optional<CardinalityRange> parse(std::string_view text);

  auto operator<=>(const CardinalityRange&) const = default;
};

/// (parent_tk/parent_event) -> [child_tk/rq] cardinality
struct ResponseLink {
  std::string parent_tk;
  CtpState parent_event = CtpState::Promised;
  std::string child_tk;
  ActKind child_act = ActKind::Request;
  CardinalityRange cardinality;

  auto operator<=>(const ResponseLink&) const = default;
};

struct DemoModel {
  std::vector<TransactionKind> transaction_kinds;  // declaration order
  std::vector<ResponseLink> response_links;        // file order

  const TransactionKind* find(std::string_view id) const;
  std::vector<const ResponseLink*> links_from(std::string_view parent_tk) const;
  bool empty() const { return transaction_kinds.empty() && response_links.empty(); }

  auto operator<=>(const DemoModel&) const = default;
};

/// Source positions of the parsed declarations, parallel to the model's
/// vectors. Kept apart from DemoModel so structural equality ignores layout.
struct SourceMap {
  std::string file;
  std::vector<std::pair<int, int>> transaction_positions;
  std::vector<std::pair<int, int>> link_positions;
};

struct ParseResult {
  DemoModel model;
  Diagnostics diagnostics;
  SourceMap source;

  bool ok() const { return diagnostics.empty(); }
};

/// Line-oriented DSL:
///   transaction <ID> "<name>" initiator <ROLE> executor <ROLE>
///   (<ID>/<evt>) -> [<ID>/rq] <low>..<high|*>
/// with <evt> one of rq pm da ac dc rj and '#' starting a comment.
/// Rule ids: SYNTAX, DUP_ID, REF, CARD. Never throws.
ParseResult parse_model(std::string_view text, const std::string& file = {});

/// JSON form: {"transactions": [...], "links": [...]}, field names as in the
/// structs above. Never throws.
ParseResult parse_model_json(std::string_view text, const std::string& file = {});

/// Dispatches on the extension: ".json" goes to the JSON reader.
ParseResult parse_model_file(const std::string& path);

/// Rule ids: FOREST, ACYCLIC, REF, CARD (plus DUP_ID and EVENT for models
/// built in code). Empty iff the model is well formed. With a source map the
/// findings carry file positions.
Diagnostics validate_model(const DemoModel& model, const SourceMap* source = nullptr);

/// Transaction kinds that are no link's child, in declaration order.
std::vector<TransactionKind> roots(const DemoModel& model);

/// Canonical DSL text; parse_model inverts it.
std::string serialize_model(const DemoModel& model);

std::string serialize_model_json(const DemoModel& model);

/// Short event code used in the DSL ("pm" for promised, ...).
std::string_view event_code(CtpState state);
std::optional<CtpState> parse_event_code(std::string_view code);

}  // namespace demobpmn
