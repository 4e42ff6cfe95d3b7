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

#include <string>
#include <string_view>
#include <vector>

#include "demobpmn/bpmn.hpp"
#include "demobpmn/demo_model.hpp"
#include "demobpmn/expander.hpp"

namespace demobpmn {

struct InsertionPoint {
  std::string parent_tk;
  std::string anchor;  // node id in the initiating pool
  ResponseLink link;
};

/// One point per response link of `parent_tk`, in link order. Throws
/// AnchorMissing when the parent event's act has no send task in the block.
std::vector<InsertionPoint> insertion_points(const DemoModel& model, std::string_view parent_tk,
                                             const BpmnGraph& parent_block);

/// Same, with the parent read off the block's messages.
std::vector<InsertionPoint> insertion_points(const DemoModel& model, const BpmnGraph& parent_block);

/// One collaboration for a single-rooted model: the root initiator pool plus
/// an executor pool per transaction kind. Children's initiator fragments are
/// inlined after their anchor; optional and repeated links get gateway
/// wrappers whose names end in the cardinality ("TK03 1..*").
/// Throws InvalidModel (invalid or multi-rooted model) or AnchorMissing.
BpmnGraph compose(const DemoModel& model, const ExpandOptions& options = {});

/// One collaboration per root, in declaration order.
std::vector<BpmnGraph> compose_all(const DemoModel& model, const ExpandOptions& options = {});

}  // namespace demobpmn
