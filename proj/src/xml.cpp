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

#include "xml.hpp"

#include <cctype>
#include <map>
#include <optional>

#include "demobpmn/error.hpp"

namespace demobpmn::xml {

const std::string* Element::attribute(std::string_view name) const {
  for (const auto& [k, v] : attributes) {
    if (k == name) {
      return &v;
    }
  }
  return nullptr;
}

namespace {

bool name_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == ':' || static_cast<unsigned char>(c) >= 0x80;
}

bool name_char(char c) {
  return name_start(c) || std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '.';
}

void append_utf8(std::string& out, unsigned long cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(text) {}

  Element document() {
    skip_prolog();
    if (at_end() || peek() != '<') {
      fail("expected root element");
    }
    std::vector<std::map<std::string, std::string>> scopes;
    Element root = element(scopes);
    skip_misc();
    if (!at_end()) {
      fail("content after root element");
    }
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorKind::XmlSyntax, std::to_string(line_) + ":" + std::to_string(col_) + ": " + what);
  }

  bool at_end() const { return pos_ >= s_.size(); }
  char peek() const { return s_[pos_]; }
  bool starts(std::string_view lit) const { return s_.substr(pos_, lit.size()) == lit; }

  void advance(std::size_t n = 1) {
    for (std::size_t i = 0; i < n && pos_ < s_.size(); ++i, ++pos_) {
      if (s_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
    }
  }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) {
      advance();
    }
  }

  void skip_until(std::string_view terminator, const char* what) {
    while (!at_end() && !starts(terminator)) {
      advance();
    }
    if (at_end()) {
      fail(std::string("unterminated ") + what);
    }
    advance(terminator.size());
  }

  void skip_misc() {
    for (;;) {
      skip_ws();
      if (starts("<!--")) {
        skip_until("-->", "comment");
      } else if (starts("<?")) {
        skip_until("?>", "processing instruction");
      } else {
        return;
      }
    }
  }

  void skip_prolog() {
    if (starts("\xEF\xBB\xBF")) {
      pos_ += 3;
    }
    skip_misc();
    if (starts("<!DOCTYPE")) {
      fail("document type declarations are not supported");
    }
  }

  std::string name() {
    if (at_end() || !name_start(peek())) {
      fail("expected a name");
    }
    std::size_t start = pos_;
    while (!at_end() && name_char(peek())) {
      advance();
    }
    return std::string(s_.substr(start, pos_ - start));
  }

  void entity(std::string& out) {
    advance();  // '&'
    std::size_t start = pos_;
    while (!at_end() && peek() != ';' && pos_ - start < 12) {
      advance();
    }
    if (at_end() || peek() != ';') {
      fail("malformed entity reference");
    }
    std::string_view ref = s_.substr(start, pos_ - start);
    advance();
    if (ref == "lt") out += '<';
    else if (ref == "gt") out += '>';
    else if (ref == "amp") out += '&';
    else if (ref == "quot") out += '"';
    else if (ref == "apos") out += '\'';
    else if (ref.size() > 1 && ref[0] == '#') {
      unsigned long cp = 0;
      try {
        cp = ref[1] == 'x' ? std::stoul(std::string(ref.substr(2)), nullptr, 16)
                           : std::stoul(std::string(ref.substr(1)), nullptr, 10);
      } catch (const std::exception&) {
        fail("malformed character reference");
      }
      if (cp == 0 || cp > 0x10FFFF) {
        fail("character reference out of range");
      }
      append_utf8(out, cp);
    } else {
      fail("unknown entity '&" + std::string(ref) + ";'");
    }
  }

  std::string attribute_value() {
    if (at_end() || (peek() != '"' && peek() != '\'')) {
      fail("expected quoted attribute value");
    }
    const char quote = peek();
    advance();
    std::string out;
    while (!at_end() && peek() != quote) {
      if (peek() == '<') {
        fail("'<' in attribute value");
      }
      if (peek() == '&') {
        entity(out);
      } else {
        out += peek();
        advance();
      }
    }
    if (at_end()) {
      fail("unterminated attribute value");
    }
    advance();
    return out;
  }

  static std::pair<std::string, std::string> split(const std::string& qname) {
    auto colon = qname.find(':');
    if (colon == std::string::npos) {
      return {"", qname};
    }
    return {qname.substr(0, colon), qname.substr(colon + 1)};
  }

  std::optional<std::string> resolve(const std::vector<std::map<std::string, std::string>>& scopes,
                                     const std::string& prefix) const {
    for (auto it = scopes.rbegin(); it != scopes.rend(); ++it) {
      if (auto f = it->find(prefix); f != it->end()) {
        return f->second;
      }
    }
    if (prefix.empty()) {
      return std::string();
    }
    if (prefix == "xml") {
      return std::string("http://www.w3.org/XML/1998/namespace");
    }
    return std::nullopt;
  }

  Element element(std::vector<std::map<std::string, std::string>>& scopes) {
    Element e;
    e.line = line_;
    e.column = col_;
    advance();  // '<'
    e.qname = name();
    std::map<std::string, std::string> scope;
    for (;;) {
      const bool had_space = !at_end() && std::isspace(static_cast<unsigned char>(peek()));
      skip_ws();
      if (at_end()) {
        fail("unterminated start tag <" + e.qname + ">");
      }
      if (peek() == '/' || peek() == '>') {
        break;
      }
      if (!had_space) {
        fail("expected whitespace between attributes");
      }
      std::string key = name();
      skip_ws();
      if (at_end() || peek() != '=') {
        fail("expected '=' after attribute " + key);
      }
      advance();
      skip_ws();
      std::string value = attribute_value();
      for (const auto& [k, v] : e.attributes) {
        if (k == key) {
          fail("duplicate attribute " + key);
        }
      }
      if (key == "xmlns") {
        scope[""] = value;
      } else if (key.rfind("xmlns:", 0) == 0) {
        scope[key.substr(6)] = value;
      }
      e.attributes.emplace_back(std::move(key), std::move(value));
    }
    scopes.push_back(std::move(scope));
    auto [prefix, local] = split(e.qname);
    auto ns = resolve(scopes, prefix);
    if (!ns) {
      fail("undeclared namespace prefix '" + prefix + "'");
    }
    e.ns = *ns;
    e.local = local;

    if (peek() == '/') {
      advance();
      if (at_end() || peek() != '>') {
        fail("expected '>'");
      }
      advance();
      scopes.pop_back();
      return e;
    }
    advance();  // '>'

    for (;;) {
      if (at_end()) {
        fail("unexpected end of document inside <" + e.qname + ">");
      }
      if (starts("</")) {
        advance(2);
        std::string closing = name();
        skip_ws();
        if (at_end() || peek() != '>') {
          fail("expected '>'");
        }
        advance();
        if (closing != e.qname) {
          fail("mismatched end tag </" + closing + "> for <" + e.qname + ">");
        }
        break;
      }
      if (starts("<!--")) {
        skip_until("-->", "comment");
      } else if (starts("<![CDATA[")) {
        advance(9);
        std::size_t start = pos_;
        skip_until("]]>", "CDATA section");
        e.text.append(s_.substr(start, pos_ - 3 - start));
      } else if (starts("<?")) {
        skip_until("?>", "processing instruction");
      } else if (peek() == '<') {
        e.children.push_back(element(scopes));
      } else if (peek() == '&') {
        entity(e.text);
      } else {
        e.text += peek();
        advance();
      }
    }
    scopes.pop_back();
    return e;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

}  // namespace

Element parse(std::string_view text) { return Parser(text).document(); }

std::string escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\n': out += "&#10;"; break;
      case '\r': out += "&#13;"; break;
      case '\t': out += "&#9;"; break;
      default: out += c;
    }
  }
  return out;
}

Writer::Writer() { out_ = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"; }

void Writer::indent() { out_.append(stack_.size() * 2, ' '); }

void Writer::start_tag(std::string_view name, const std::vector<std::pair<std::string, std::string>>& attrs) {
  indent();
  out_ += '<';
  out_ += name;
  for (const auto& [k, v] : attrs) {
    out_ += ' ';
    out_ += k;
    out_ += "=\"";
    out_ += escape(v);
    out_ += '"';
  }
}

void Writer::open(std::string_view name, const std::vector<std::pair<std::string, std::string>>& attrs) {
  start_tag(name, attrs);
  out_ += ">\n";
  stack_.emplace_back(name);
}

void Writer::empty(std::string_view name, const std::vector<std::pair<std::string, std::string>>& attrs) {
  start_tag(name, attrs);
  out_ += "/>\n";
}

void Writer::text_element(std::string_view name, std::string_view text,
                          const std::vector<std::pair<std::string, std::string>>& attrs) {
  start_tag(name, attrs);
  out_ += '>';
  out_ += escape(text);
  out_ += "</";
  out_ += name;
  out_ += ">\n";
}

void Writer::close() {
  std::string name = std::move(stack_.back());
  stack_.pop_back();
  indent();
  out_ += "</";
  out_ += name;
  out_ += ">\n";
}

}  // namespace demobpmn::xml
