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

#include <ostream>
#include <string>
#include <vector>

namespace demobpmn {

enum class Severity { Error, Warning };

/// Where a finding points: a source position (1-based, 0 when unknown)
/// and/or the id of a model element.
struct Locus {
  std::string file;
  int line = 0;
  int column = 0;
  std::string element;

  auto operator<=>(const Locus&) const = default;
};

struct Diagnostic {
  Severity severity = Severity::Error;
  std::string rule;
  Locus locus;
  std::string message;

  auto operator<=>(const Diagnostic&) const = default;
};

using Diagnostics = std::vector<Diagnostic>;

/// Renders "file:line:col: error [RULE] message (element)". Missing parts
/// are omitted rather than printed as zeros.
std::string format_diagnostic(const Diagnostic& d);

std::ostream& operator<<(std::ostream& out, const Diagnostic& d);

bool has_rule(const Diagnostics& ds, const std::string& rule);

}  // namespace demobpmn
