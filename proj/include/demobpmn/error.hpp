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

#include <stdexcept>
#include <string>

namespace demobpmn {

enum class ErrorKind {
  InvalidAct,
  PendingRevoke,
  SyntaxError,
  XmlSyntax,
  UnsupportedElement,
  Dangling,
  InvalidGraph,
  InvalidModel,
  AnchorMissing,
  UnknownTransaction,
  Deadlock,
  BoundExceeded,
  ScriptMismatch,
  Io,
};

const char* to_string(ErrorKind kind);

/// Base exception for every failure surfaced by the library. The kind is
/// what callers (and the CLI's exit-code mapping) dispatch on.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace demobpmn
