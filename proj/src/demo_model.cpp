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

#include "demobpmn/demo_model.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

namespace demobpmn {

namespace {

constexpr std::pair<CtpState, std::string_view> kEventCodes[] = {
    {CtpState::Requested, "rq"}, {CtpState::Promised, "pm"}, {CtpState::Declared, "da"},
    {CtpState::Accepted, "ac"},  {CtpState::Declined, "dc"}, {CtpState::Rejected, "rj"},
};

bool is_tk_id(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size() && std::isalpha(static_cast<unsigned char>(s[i]))) {
    ++i;
  }
  if (i == 0 || i == s.size()) {
    return false;
  }
  return std::all_of(s.begin() + static_cast<long>(i), s.end(),
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

bool is_role_id(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) {
    return false;
  }
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
  });
}

bool is_link_event(CtpState s) {
  return std::any_of(std::begin(kEventCodes), std::end(kEventCodes),
                     [&](const auto& e) { return e.first == s; });
}

}  // namespace

std::string_view event_code(CtpState state) {
  for (const auto& [s, code] : kEventCodes) {
    if (s == state) {
      return code;
    }
  }
  return to_string(state);
}

std::optional<CtpState> parse_event_code(std::string_view code) {
  for (const auto& [s, c] : kEventCodes) {
    if (c == code) {
      return s;
    }
  }
  return std::nullopt;
}

std::string CardinalityRange::to_string() const {
  return std::to_string(low) + ".." + (high ? std::to_string(*high) : std::string("*"));
}

std::optional<CardinalityRange> CardinalityRange::parse(std::string_view text) {
  auto dots = text.find("..");
  if (dots == std::string_view::npos || dots == 0) {
    return std::nullopt;
  }
  auto number = [](std::string_view s) -> std::optional<unsigned> {
    if (s.empty() || s.size() > 9 ||
        !std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      return std::nullopt;
    }
    return static_cast<unsigned>(std::stoul(std::string(s)));
  };
  auto low = number(text.substr(0, dots));
  std::string_view rest = text.substr(dots + 2);
  if (!low) {
    return std::nullopt;
  }
  CardinalityRange r;
  r.low = *low;
  if (rest == "*") {
    r.high.reset();
  } else if (auto high = number(rest); high && *high >= r.low && *high > 0) {
    r.high = *high;
  } else {
    return std::nullopt;
  }
  return r;
}

const TransactionKind* DemoModel::find(std::string_view id) const {
  auto it = std::find_if(transaction_kinds.begin(), transaction_kinds.end(),
                         [&](const TransactionKind& tk) { return tk.id == id; });
  return it == transaction_kinds.end() ? nullptr : &*it;
}

std::vector<const ResponseLink*> DemoModel::links_from(std::string_view parent_tk) const {
  std::vector<const ResponseLink*> out;
  for (const ResponseLink& l : response_links) {
    if (l.parent_tk == parent_tk) {
      out.push_back(&l);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// DSL reader

namespace {

struct Token {
  enum Kind { Word, String, Punct } kind;
  std::string text;
  int column;
};

class LineParser {
 public:
  LineParser(std::string_view line, int line_no, const std::string& file, Diagnostics& diags)
      : line_(line), line_no_(line_no), file_(file), diags_(diags) {}

  // Returns false after reporting a SYNTAX diagnostic.
  bool tokenize(std::vector<Token>& out) {
    std::size_t i = 0;
    while (i < line_.size()) {
      char c = line_[i];
      if (c == '#') {
        break;
      }
      if (c == ' ' || c == '\t' || c == '\r') {
        ++i;
        continue;
      }
      const int col = static_cast<int>(i) + 1;
      if (c == '"') {
        std::string text;
        ++i;
        bool closed = false;
        while (i < line_.size()) {
          if (line_[i] == '\\' && i + 1 < line_.size()) {
            text += line_[i + 1];
            i += 2;
          } else if (line_[i] == '"') {
            closed = true;
            ++i;
            break;
          } else {
            text += line_[i++];
          }
        }
        if (!closed) {
          report("SYNTAX", col, "unterminated string");
          return false;
        }
        out.push_back({Token::String, std::move(text), col});
      } else if (c == '-' && i + 1 < line_.size() && line_[i + 1] == '>') {
        out.push_back({Token::Punct, "->", col});
        i += 2;
      } else if (c == '(' || c == ')' || c == '[' || c == ']' || c == '/') {
        out.push_back({Token::Punct, std::string(1, c), col});
        ++i;
      } else if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '*' || c == '.' || c == '-') {
        std::size_t start = i;
        while (i < line_.size()) {
          char d = line_[i];
          if (std::isalnum(static_cast<unsigned char>(d)) || d == '_' || d == '*' || d == '.' ||
              (d == '-' && !(i + 1 < line_.size() && line_[i + 1] == '>'))) {
            ++i;
          } else {
            break;
          }
        }
        out.push_back({Token::Word, std::string(line_.substr(start, i - start)), col});
      } else {
        report("SYNTAX", col, std::string("unexpected character '") + c + "'");
        return false;
      }
    }
    return true;
  }

  void report(const std::string& rule, int col, const std::string& message) {
    diags_.push_back(Diagnostic{Severity::Error, rule, Locus{file_, line_no_, col, {}}, message});
  }

 private:
  std::string_view line_;
  int line_no_;
  const std::string& file_;
  Diagnostics& diags_;
};

bool expect(const std::vector<Token>& toks, std::size_t i, Token::Kind kind, std::string_view text,
            LineParser& p, int end_col) {
  if (i >= toks.size()) {
    p.report("SYNTAX", end_col, "expected '" + std::string(text) + "' at end of line");
    return false;
  }
  if (toks[i].kind != kind || (kind != Token::String && !text.empty() && toks[i].text != text)) {
    p.report("SYNTAX", toks[i].column,
             "expected '" + std::string(text.empty() ? "identifier" : text) + "', found '" + toks[i].text + "'");
    return false;
  }
  return true;
}

struct PendingRef {
  std::string id;
  int line;
  int column;
};

}  // namespace

ParseResult parse_model(std::string_view text, const std::string& file) {
  ParseResult result;
  result.source.file = file;
  std::vector<PendingRef> refs;
  std::map<std::string, int> declared_at;

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    ++line_no;
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;

    LineParser p(line, line_no, file, result.diagnostics);
    std::vector<Token> toks;
    if (!p.tokenize(toks) || toks.empty()) {
      continue;
    }
    const int end_col = static_cast<int>(line.size()) + 1;

    if (toks[0].kind == Token::Word && toks[0].text == "transaction") {
      if (!expect(toks, 1, Token::Word, "", p, end_col) ||
          !expect(toks, 2, Token::String, "\"name\"", p, end_col) ||
          !expect(toks, 3, Token::Word, "initiator", p, end_col) ||
          !expect(toks, 4, Token::Word, "", p, end_col) ||
          !expect(toks, 5, Token::Word, "executor", p, end_col) ||
          !expect(toks, 6, Token::Word, "", p, end_col)) {
        continue;
      }
      if (toks.size() > 7) {
        p.report("SYNTAX", toks[7].column, "trailing input '" + toks[7].text + "'");
        continue;
      }
      if (!is_tk_id(toks[1].text)) {
        p.report("SYNTAX", toks[1].column, "transaction id '" + toks[1].text + "' must be letters followed by digits");
        continue;
      }
      if (!is_role_id(toks[4].text) || !is_role_id(toks[6].text)) {
        const Token& bad = is_role_id(toks[4].text) ? toks[6] : toks[4];
        p.report("SYNTAX", bad.column, "malformed actor role '" + bad.text + "'");
        continue;
      }
      if (auto it = declared_at.find(toks[1].text); it != declared_at.end()) {
        p.report("DUP_ID", toks[1].column,
                 "transaction " + toks[1].text + " already declared on line " + std::to_string(it->second));
        continue;
      }
      declared_at[toks[1].text] = line_no;
      result.model.transaction_kinds.push_back({toks[1].text, toks[2].text, toks[4].text, toks[6].text});
      result.source.transaction_positions.emplace_back(line_no, toks[0].column);
      continue;
    }

    if (toks[0].kind == Token::Punct && toks[0].text == "(") {
      // ( ID / evt ) -> [ ID / rq ] card
      if (!expect(toks, 1, Token::Word, "", p, end_col) || !expect(toks, 2, Token::Punct, "/", p, end_col) ||
          !expect(toks, 3, Token::Word, "", p, end_col) || !expect(toks, 4, Token::Punct, ")", p, end_col) ||
          !expect(toks, 5, Token::Punct, "->", p, end_col) || !expect(toks, 6, Token::Punct, "[", p, end_col) ||
          !expect(toks, 7, Token::Word, "", p, end_col) || !expect(toks, 8, Token::Punct, "/", p, end_col) ||
          !expect(toks, 9, Token::Word, "", p, end_col) || !expect(toks, 10, Token::Punct, "]", p, end_col)) {
        continue;
      }
      if (toks.size() < 12) {
        p.report("CARD", end_col, "missing cardinality range");
        continue;
      }
      if (toks.size() > 12) {
        p.report("SYNTAX", toks[12].column, "trailing input '" + toks[12].text + "'");
        continue;
      }
      ResponseLink link;
      link.parent_tk = toks[1].text;
      link.child_tk = toks[7].text;
      auto evt = parse_event_code(toks[3].text);
      if (!evt) {
        p.report("SYNTAX", toks[3].column, "unknown event '" + toks[3].text + "' (expected rq, pm, da, ac, dc or rj)");
        continue;
      }
      link.parent_event = *evt;
      if (toks[9].text != "rq") {
        p.report("SYNTAX", toks[9].column, "response links may only initiate a request, found '" + toks[9].text + "'");
        continue;
      }
      auto card = CardinalityRange::parse(toks[11].text);
      if (!card || !card->valid()) {
        p.report("CARD", toks[11].column, "bad cardinality range '" + toks[11].text + "'");
        continue;
      }
      link.cardinality = *card;
      refs.push_back({link.parent_tk, line_no, toks[1].column});
      refs.push_back({link.child_tk, line_no, toks[7].column});
      result.model.response_links.push_back(std::move(link));
      result.source.link_positions.emplace_back(line_no, toks[0].column);
      continue;
    }

    p.report("SYNTAX", toks[0].column, "expected 'transaction' or a response link, found '" + toks[0].text + "'");
  }

  // References may point forward, so they are resolved after the whole file.
  std::vector<bool> bad_link(result.model.response_links.size(), false);
  for (std::size_t i = 0; i < refs.size(); ++i) {
    if (!declared_at.count(refs[i].id)) {
      result.diagnostics.push_back(Diagnostic{Severity::Error, "REF", Locus{file, refs[i].line, refs[i].column, {}},
                                              "unknown transaction kind " + refs[i].id});
      bad_link[i / 2] = true;
    }
  }
  if (std::find(bad_link.begin(), bad_link.end(), true) != bad_link.end()) {
    std::vector<ResponseLink> kept;
    std::vector<std::pair<int, int>> kept_pos;
    for (std::size_t i = 0; i < bad_link.size(); ++i) {
      if (!bad_link[i]) {
        kept.push_back(result.model.response_links[i]);
        kept_pos.push_back(result.source.link_positions[i]);
      }
    }
    result.model.response_links = std::move(kept);
    result.source.link_positions = std::move(kept_pos);
  }
  std::stable_sort(result.diagnostics.begin(), result.diagnostics.end(),
                   [](const Diagnostic& a, const Diagnostic& b) {
                     return std::pair(a.locus.line, a.locus.column) < std::pair(b.locus.line, b.locus.column);
                   });
  return result;
}

// ---------------------------------------------------------------------------
// JSON reader

namespace {

std::pair<int, int> line_col_of(std::string_view text, std::size_t byte) {
  int line = 1;
  int col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

ParseResult parse_model_json(std::string_view text, const std::string& file) {
  using nlohmann::json;
  ParseResult result;
  result.source.file = file;
  auto fail = [&](const std::string& rule, const std::string& message, std::pair<int, int> at = {1, 1}) {
    result.diagnostics.push_back(Diagnostic{Severity::Error, rule, Locus{file, at.first, at.second, {}}, message});
  };

  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    fail("SYNTAX", e.what(), line_col_of(text, e.byte > 0 ? e.byte - 1 : 0));
    return result;
  }
  if (!doc.is_object()) {
    fail("SYNTAX", "top-level value must be an object");
    return result;
  }

  auto get_string = [](const json& obj, const char* key) -> std::optional<std::string> {
    auto it = obj.find(key);
    if (it == obj.end() || !it->is_string()) {
      return std::nullopt;
    }
    return it->get<std::string>();
  };

  std::set<std::string> ids;
  if (auto it = doc.find("transactions"); it != doc.end()) {
    if (!it->is_array()) {
      fail("SYNTAX", "\"transactions\" must be an array");
      return result;
    }
    int index = 0;
    for (const json& t : *it) {
      ++index;
      const std::string where = "transactions[" + std::to_string(index - 1) + "]";
      if (!t.is_object()) {
        fail("SYNTAX", where + " must be an object");
        continue;
      }
      auto id = get_string(t, "id");
      auto name = get_string(t, "name");
      auto ini = get_string(t, "initiator_role");
      auto exe = get_string(t, "executor_role");
      if (!id || !name || !ini || !exe) {
        fail("SYNTAX", where + " needs string fields id, name, initiator_role, executor_role");
        continue;
      }
      if (!is_tk_id(*id) || !is_role_id(*ini) || !is_role_id(*exe)) {
        fail("SYNTAX", where + " has a malformed identifier");
        continue;
      }
      if (!ids.insert(*id).second) {
        fail("DUP_ID", "transaction " + *id + " declared twice");
        continue;
      }
      result.model.transaction_kinds.push_back({*id, *name, *ini, *exe});
      result.source.transaction_positions.emplace_back(0, 0);
    }
  }
  if (auto it = doc.find("links"); it != doc.end()) {
    if (!it->is_array()) {
      fail("SYNTAX", "\"links\" must be an array");
      return result;
    }
    int index = 0;
    for (const json& l : *it) {
      const std::string where = "links[" + std::to_string(index++) + "]";
      if (!l.is_object()) {
        fail("SYNTAX", where + " must be an object");
        continue;
      }
      auto parent = get_string(l, "parent_tk");
      auto event = get_string(l, "parent_event");
      auto child = get_string(l, "child_tk");
      auto act = get_string(l, "child_act").value_or("request");
      auto card = get_string(l, "cardinality");
      if (!parent || !event || !child || !card) {
        fail("SYNTAX", where + " needs string fields parent_tk, parent_event, child_tk, cardinality");
        continue;
      }
      ResponseLink link;
      link.parent_tk = *parent;
      link.child_tk = *child;
      auto state = parse_event_code(*event);
      if (!state) {
        state = parse_state(*event);
      }
      if (!state || !is_link_event(*state)) {
        fail("SYNTAX", where + ": unknown parent_event '" + *event + "'");
        continue;
      }
      link.parent_event = *state;
      if (parse_act(act) != ActKind::Request) {
        fail("SYNTAX", where + ": child_act must be request");
        continue;
      }
      auto range = CardinalityRange::parse(*card);
      if (!range || !range->valid()) {
        fail("CARD", where + ": bad cardinality range '" + *card + "'");
        continue;
      }
      link.cardinality = *range;
      bool ok = true;
      for (const std::string* ref : {&link.parent_tk, &link.child_tk}) {
        if (!ids.count(*ref)) {
          fail("REF", where + ": unknown transaction kind " + *ref);
          ok = false;
        }
      }
      if (ok) {
        result.model.response_links.push_back(std::move(link));
        result.source.link_positions.emplace_back(0, 0);
      }
    }
  }
  return result;
}

ParseResult parse_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    ParseResult r;
    r.diagnostics.push_back(Diagnostic{Severity::Error, "IO", Locus{path, 0, 0, {}}, "cannot read file"});
    return r;
  }
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0) {
    return parse_model_json(text, path);
  }
  return parse_model(text, path);
}

// ---------------------------------------------------------------------------
// Validation

Diagnostics validate_model(const DemoModel& model, const SourceMap* source) {
  Diagnostics out;
  auto tk_locus = [&](std::size_t i) {
    Locus l;
    l.element = model.transaction_kinds[i].id;
    if (source) {
      l.file = source->file;
      if (i < source->transaction_positions.size()) {
        std::tie(l.line, l.column) = source->transaction_positions[i];
      }
    }
    return l;
  };
  auto link_locus = [&](std::size_t i) {
    const ResponseLink& k = model.response_links[i];
    Locus l;
    l.element = "(" + k.parent_tk + "/" + std::string(event_code(k.parent_event)) + ") -> [" + k.child_tk + "/rq]";
    if (source) {
      l.file = source->file;
      if (i < source->link_positions.size()) {
        std::tie(l.line, l.column) = source->link_positions[i];
      }
    }
    return l;
  };
  auto add = [&](const char* rule, Locus locus, std::string message) {
    out.push_back(Diagnostic{Severity::Error, rule, std::move(locus), std::move(message)});
  };

  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < model.transaction_kinds.size(); ++i) {
    const TransactionKind& tk = model.transaction_kinds[i];
    if (!index.emplace(tk.id, i).second) {
      add("DUP_ID", tk_locus(i), "transaction " + tk.id + " declared twice");
    }
  }

  std::map<std::string, std::size_t> first_parent_link;
  std::map<std::string, std::vector<std::pair<std::string, std::size_t>>> children;
  for (std::size_t i = 0; i < model.response_links.size(); ++i) {
    const ResponseLink& l = model.response_links[i];
    bool refs_ok = true;
    for (const std::string* ref : {&l.parent_tk, &l.child_tk}) {
      if (!index.count(*ref)) {
        add("REF", link_locus(i), "unknown transaction kind " + *ref);
        refs_ok = false;
      }
    }
    if (!l.cardinality.valid()) {
      add("CARD", link_locus(i), "bad cardinality range " + l.cardinality.to_string());
    }
    if (!is_link_event(l.parent_event) || l.child_act != ActKind::Request) {
      add("EVENT", link_locus(i), "links run from rq/pm/da/ac/dc/rj to a request");
    }
    if (!refs_ok) {
      continue;
    }
    if (auto [it, fresh] = first_parent_link.emplace(l.child_tk, i); !fresh) {
      add("FOREST", link_locus(i), l.child_tk + " is already initiated by " + model.response_links[it->second].parent_tk);
    }
    children[l.parent_tk].emplace_back(l.child_tk, i);
  }

  // Colour DFS; every back edge closes one cycle.
  enum Colour { White, Grey, Black };
  std::map<std::string, Colour> colour;
  std::vector<std::size_t> back_edges;
  auto visit = [&](auto& self, const std::string& id) -> void {
    colour[id] = Grey;
    for (const auto& [child, link] : children[id]) {
      if (colour[child] == Grey) {
        back_edges.push_back(link);
      } else if (colour[child] == White) {
        self(self, child);
      }
    }
    colour[id] = Black;
  };
  for (const TransactionKind& tk : model.transaction_kinds) {
    if (colour[tk.id] == White) {
      visit(visit, tk.id);
    }
  }
  std::sort(back_edges.begin(), back_edges.end());
  for (std::size_t link : back_edges) {
    const ResponseLink& l = model.response_links[link];
    add("ACYCLIC", link_locus(link),
        l.parent_tk == l.child_tk ? l.parent_tk + " initiates itself"
                                  : "link " + l.parent_tk + " -> " + l.child_tk + " closes a cycle");
  }
  return out;
}

std::vector<TransactionKind> roots(const DemoModel& model) {
  std::set<std::string> children;
  for (const ResponseLink& l : model.response_links) {
    children.insert(l.child_tk);
  }
  std::vector<TransactionKind> out;
  for (const TransactionKind& tk : model.transaction_kinds) {
    if (!children.count(tk.id)) {
      out.push_back(tk);
    }
  }
  return out;
}

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') {
      out += '\\';
    }
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::string serialize_model(const DemoModel& model) {
  std::ostringstream out;
  for (const TransactionKind& tk : model.transaction_kinds) {
    out << "transaction " << tk.id << ' ' << quote(tk.name) << " initiator " << tk.initiator_role
        << " executor " << tk.executor_role << '\n';
  }
  if (!model.transaction_kinds.empty() && !model.response_links.empty()) {
    out << '\n';
  }
  for (const ResponseLink& l : model.response_links) {
    out << '(' << l.parent_tk << '/' << event_code(l.parent_event) << ") -> [" << l.child_tk << "/rq] "
        << l.cardinality.to_string() << '\n';
  }
  return out.str();
}

std::string serialize_model_json(const DemoModel& model) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["transactions"] = ordered_json::array();
  doc["links"] = ordered_json::array();
  for (const TransactionKind& tk : model.transaction_kinds) {
    doc["transactions"].push_back(
        {{"id", tk.id}, {"name", tk.name}, {"initiator_role", tk.initiator_role}, {"executor_role", tk.executor_role}});
  }
  for (const ResponseLink& l : model.response_links) {
    doc["links"].push_back({{"parent_tk", l.parent_tk},
                            {"parent_event", std::string(to_string(l.parent_event))},
                            {"child_tk", l.child_tk},
                            {"child_act", std::string(to_string(l.child_act))},
                            {"cardinality", l.cardinality.to_string()}});
  }
  return doc.dump(2) + "\n";
}

}  // namespace demobpmn
