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

#include "demobpmn/diagnostic.hpp"

#include <algorithm>
#include <sstream>

#include "demobpmn/error.hpp"

namespace demobpmn {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidAct: return "InvalidAct";
    case ErrorKind::PendingRevoke: return "PendingRevoke";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::XmlSyntax: return "XmlSyntax";
    case ErrorKind::UnsupportedElement: return "UnsupportedElement";
    case ErrorKind::Dangling: return "Dangling";
    case ErrorKind::InvalidGraph: return "InvalidGraph";
    case ErrorKind::InvalidModel: return "InvalidModel";
    case ErrorKind::AnchorMissing: return "AnchorMissing";
    case ErrorKind::UnknownTransaction: return "UnknownTransaction";
    case ErrorKind::Deadlock: return "Deadlock";
    case ErrorKind::BoundExceeded: return "BoundExceeded";
    case ErrorKind::ScriptMismatch: return "ScriptMismatch";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

std::string format_diagnostic(const Diagnostic& d) {
  std::ostringstream out;
  if (!d.locus.file.empty()) {
    out << d.locus.file << ':';
  }
  if (d.locus.line > 0) {
    out << d.locus.line << ':' << d.locus.column << ':';
  }
  if (out.tellp() > 0) {
    out << ' ';
  }
  out << (d.severity == Severity::Error ? "error" : "warning") << " [" << d.rule << "] "
      << d.message;
  if (!d.locus.element.empty()) {
    out << " (" << d.locus.element << ')';
  }
  return out.str();
}

std::ostream& operator<<(std::ostream& out, const Diagnostic& d) {
  return out << format_diagnostic(d);
}

bool has_rule(const Diagnostics& ds, const std::string& rule) {
  return std::any_of(ds.begin(), ds.end(), [&](const Diagnostic& d) { return d.rule == rule; });
}

}  // namespace demobpmn
