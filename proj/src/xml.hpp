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

// Minimal namespace-aware XML reader and an indenting writer. Enough for
// BPMN interchange documents: elements, attributes, character data,
// comments, CDATA, processing instructions and the predefined/numeric
// entities. DTDs are rejected.

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace demobpmn::xml {

struct Element {
  std::string qname;
  std::string local;
  std::string ns;  // resolved namespace URI, empty if none
  std::vector<std::pair<std::string, std::string>> attributes;
  std::vector<Element> children;
  std::string text;
  int line = 0;
  int column = 0;

  /// Lookup by qualified name as written.
  const std::string* attribute(std::string_view name) const;
};

/// Throws Error(XmlSyntax) with "line:col" in the message.
Element parse(std::string_view text);

std::string escape(std::string_view text);

class Writer {
 public:
  Writer();

  void open(std::string_view name, const std::vector<std::pair<std::string, std::string>>& attrs = {});
  void empty(std::string_view name, const std::vector<std::pair<std::string, std::string>>& attrs = {});
  void text_element(std::string_view name, std::string_view text,
                    const std::vector<std::pair<std::string, std::string>>& attrs = {});
  void close();

  std::string str() const { return out_; }

 private:
  void start_tag(std::string_view name, const std::vector<std::pair<std::string, std::string>>& attrs);
  void indent();

  std::string out_;
  std::vector<std::string> stack_;
};

}  // namespace demobpmn::xml
