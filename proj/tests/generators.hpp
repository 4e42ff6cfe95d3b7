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

#include <random>
#include <string>

#include "demobpmn/demo_model.hpp"

namespace demobpmn::testing {

// A random valid forest: every kind after the first may hang under an
// earlier one.
inline DemoModel random_forest(std::mt19937& rng) {
  static const char* kEvents[] = {"rq", "pm", "da", "ac", "dc", "rj"};
  static const char* kCards[] = {"0..1", "1..1", "1..*", "0..*", "2..5", "0..3"};
  static const char* kWords[] = {"patient", "problem", "diagnosing", "order", "stock", "check", "x-ray"};
  auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
  DemoModel m;
  int n = pick(8);
  for (int i = 0; i < n; ++i) {
    TransactionKind tk;
    tk.id = std::string(pick(2) ? "TK" : "T") + (i < 9 ? "0" : "") + std::to_string(i + 1);
    int words = 1 + pick(3);
    for (int w = 0; w < words; ++w) tk.name += (w ? " " : "") + std::string(kWords[pick(7)]);
    tk.initiator_role = i == 0 ? "CA00" : "A" + std::to_string(pick(20));
    tk.executor_role = "A" + std::to_string(i + 1);
    m.transaction_kinds.push_back(tk);
    if (i > 0 && pick(3) != 0) {
      ResponseLink link;
      link.parent_tk = m.transaction_kinds[pick(i)].id;
      link.parent_event = *parse_event_code(kEvents[pick(6)]);
      link.child_tk = tk.id;
      link.cardinality = *CardinalityRange::parse(kCards[pick(6)]);
      m.response_links.push_back(link);
    }
  }
  return m;
}

}  // namespace demobpmn::testing
