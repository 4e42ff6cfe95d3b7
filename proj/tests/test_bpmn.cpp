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

#include <cctype>
#include <random>
#include <regex>
#include <set>

#include "doctest.h"
#include "demobpmn/bpmn.hpp"
#include "demobpmn/composer.hpp"
#include "demobpmn/error.hpp"
#include "demobpmn/expander.hpp"
#include "generators.hpp"

using namespace demobpmn;

namespace {

BpmnGraph block(PatternLevel level, bool production = false) {
  ExpandOptions o;
  o.level = level;
  o.include_production = production;
  return expand_transaction({"TK01", "patient problem diagnosing", "CA00", "A01"}, o);
}

std::set<std::string> rules(const Diagnostics& ds) {
  std::set<std::string> out;
  for (const auto& d : ds) out.insert(d.rule);
  return out;
}

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto at = text.find(needle); at != std::string::npos; at = text.find(needle, at + 1)) ++n;
  return n;
}

Pool& pool(BpmnGraph& g, std::size_t i) { return g.pools.at(i); }

std::string node_with(const Pool& p, NodeKind kind) {
  for (const auto& n : p.nodes) {
    if (n.kind == kind) return n.id;
  }
  return {};
}

// Recursive-descent check of the DOT subset: graph, subgraph, attribute
// statements, node and edge statements with attribute lists.
class DotChecker {
 public:
  explicit DotChecker(std::string text) : s_(std::move(text)) {}

  bool ok() {
    try {
      expect_word("digraph");
      id();
      block();
      skip();
      return pos_ == s_.size();
    } catch (const std::runtime_error&) {
      return false;
    }
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool peek(char c) {
    skip();
    return pos_ < s_.size() && s_[pos_] == c;
  }
  void expect(char c) {
    if (!peek(c)) throw std::runtime_error(std::string("expected ") + c);
    ++pos_;
  }
  void expect_word(const std::string& w) {
    skip();
    if (s_.compare(pos_, w.size(), w) != 0) throw std::runtime_error("expected " + w);
    pos_ += w.size();
  }
  std::string id() {
    skip();
    if (pos_ >= s_.size()) throw std::runtime_error("eof");
    std::size_t start = pos_;
    if (s_[pos_] == '"') {
      for (++pos_; pos_ < s_.size() && s_[pos_] != '"'; ++pos_) {
        if (s_[pos_] == '\\') ++pos_;
      }
      if (pos_ >= s_.size()) throw std::runtime_error("unterminated string");
      ++pos_;
      return s_.substr(start, pos_ - start);
    }
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' || s_[pos_] == '.')) ++pos_;
    if (start == pos_) throw std::runtime_error("expected id");
    return s_.substr(start, pos_ - start);
  }
  void attr_list() {
    expect('[');
    while (!peek(']')) {
      id();
      expect('=');
      id();
      if (peek(',') || peek(';')) ++pos_;
    }
    expect(']');
  }
  void block() {
    expect('{');
    while (!peek('}')) statement();
    expect('}');
  }
  void statement() {
    skip();
    if (s_.compare(pos_, 8, "subgraph") == 0) {
      pos_ += 8;
      id();
      block();
      return;
    }
    id();
    if (peek('=')) {
      ++pos_;
      id();
    } else {
      while (peek('-')) {
        expect_word("->");
        id();
      }
      if (peek('[')) attr_list();
    }
    if (peek(';')) ++pos_;
  }

  std::string s_;
  std::size_t pos_ = 0;
};

std::vector<BpmnGraph> sample_graphs() {
  std::vector<BpmnGraph> out;
  for (auto level : {PatternLevel::Basic, PatternLevel::Standard, PatternLevel::Complete}) {
    out.push_back(block(level));
    out.push_back(block(level, true));
  }
  std::mt19937 rng(3);
  for (int i = 0; i < 30; ++i) {
    auto model = testing::random_forest(rng);
    auto level = static_cast<PatternLevel>(i % 3);
    ExpandOptions o;
    o.level = level;
    try {
      for (auto& g : compose_all(model, o)) out.push_back(std::move(g));
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::AnchorMissing);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("generated graphs validate") {
  for (const auto& g : sample_graphs()) CHECK(validate_bpmn(g).empty());
}

TEST_CASE("validator mutations hit exactly their rule") {
  SUBCASE("message flow inside one pool") {
    auto g = block(PatternLevel::Basic);
    g.message_flows[0].target = node_with(pool(g, 0), NodeKind::IntermediateCatchEvent);
    g.message_flows[0].source = pool(g, 0).nodes[1].id;
    CHECK(rules(validate_bpmn(g)) == std::set<std::string>{"MSG_CROSS"});
  }
  SUBCASE("flow into a start event") {
    auto g = block(PatternLevel::Basic);
    auto& p = pool(g, 0);
    p.sequence_flows.push_back({"extra", p.nodes[1].id, node_with(p, NodeKind::StartEvent), std::nullopt});
    CHECK(rules(validate_bpmn(g)) == std::set<std::string>{"START_IN"});
  }
  SUBCASE("dangling reference") {
    auto g = block(PatternLevel::Basic);
    g.message_flows[0].target = "nowhere";
    CHECK(rules(validate_bpmn(g)) == std::set<std::string>{"DANGLING"});
  }
  SUBCASE("flow out of an end event") {
    auto g = block(PatternLevel::Basic);
    auto& p = pool(g, 0);
    p.sequence_flows.push_back({"extra", node_with(p, NodeKind::EndEvent), p.nodes[1].id, std::nullopt});
    CHECK(rules(validate_bpmn(g)) == std::set<std::string>{"END_OUT"});
  }
  SUBCASE("sequence flow across pools") {
    auto g = block(PatternLevel::Basic);
    pool(g, 0).sequence_flows[0].target = pool(g, 1).nodes[1].id;
    CHECK(rules(validate_bpmn(g)).count("SEQ_SCOPE") == 1);
  }
  SUBCASE("duplicate id") {
    auto g = block(PatternLevel::Basic);
    pool(g, 1).nodes.back().id = pool(g, 0).nodes.back().id;
    CHECK(rules(validate_bpmn(g)).count("ID_UNIQ") == 1);
  }
  SUBCASE("event-based gateway before a task") {
    auto g = block(PatternLevel::Standard);
    auto& p = pool(g, 0);
    for (auto& f : p.sequence_flows) {
      const FlowNode* src = p.find_node(f.source);
      if (src->is_gateway(GatewayVariant::EventBased)) {
        p.nodes.push_back(FlowNode::task_node("odd", "odd"));
        p.sequence_flows.push_back({"odd_in", f.source, "odd", std::nullopt});
        p.sequence_flows.push_back({"odd_out", "odd", f.target, std::nullopt});
        break;
      }
    }
    CHECK(rules(validate_bpmn(g)) == std::set<std::string>{"EBG_TARGETS"});
  }
  SUBCASE("unreachable and dead-end nodes") {
    auto g = block(PatternLevel::Basic);
    auto& p = pool(g, 0);
    p.nodes.push_back(FlowNode::task_node("island", "island"));
    auto r = rules(validate_bpmn(g));
    CHECK(r.count("REACH") == 1);
    CHECK(r.count("COREACH") == 1);
  }
}

TEST_CASE("xml output") {
  auto empty = to_xml(BpmnGraph{});
  CHECK(count(empty, "collaboration") == 0);
  CHECK(count(empty, "definitions") >= 1);
  CHECK(from_xml(empty).empty());

  auto xml = to_xml(block(PatternLevel::Basic));
  CHECK(count(xml, "<bpmn:participant ") == 2);
  CHECK(count(xml, "<bpmn:messageFlow ") == 4);
  CHECK(xml.find(std::string(kBpmnModelNs)) != std::string::npos);
  CHECK(xml == to_xml(block(PatternLevel::Basic)));

  auto bad = block(PatternLevel::Basic);
  bad.message_flows[0].target = "nowhere";
  CHECK_THROWS_AS(to_xml(bad), Error);
}

TEST_CASE("xml round-trip") {
  for (const auto& g : sample_graphs()) {
    for (bool layout : {false, true}) {
      auto xml = to_xml(g, XmlOptions{layout});
      auto back = from_xml(xml);
      CHECK(back == g);
      CHECK(to_xml(back, XmlOptions{layout}) == xml);
    }
  }
}

TEST_CASE("xml reader errors") {
  auto xml = to_xml(block(PatternLevel::Basic));
  auto kind_of = [](const std::string& text) {
    try {
      from_xml(text);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::Io;
  };
  CHECK(kind_of(xml.substr(0, xml.size() / 2)) == ErrorKind::XmlSyntax);

  auto unsupported = xml;
  auto at = unsupported.find("<bpmn:sendTask");
  unsupported.insert(at, "<bpmn:subProcess id=\"sp\"/>\n");
  CHECK(kind_of(unsupported) == ErrorKind::UnsupportedElement);
  try {
    from_xml(unsupported);
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("subProcess") != std::string::npos);
  }

  auto dangling = xml;
  auto ref = dangling.find("targetRef=\"");
  dangling.insert(ref + 11, "missing_");
  CHECK(kind_of(dangling) == ErrorKind::Dangling);

  auto foreign = xml;
  foreign.insert(foreign.find("<bpmn:sendTask"), "<bpmn:documentation>note</bpmn:documentation>\n");
  CHECK(kind_of(foreign) == ErrorKind::Io);
}

TEST_CASE("dot output") {
  CHECK(to_dot(BpmnGraph{}) == "digraph bpmn {\n}\n");
  auto dot = to_dot(block(PatternLevel::Basic));
  CHECK(count(dot, "subgraph \"cluster_") == 2);
  CHECK(count(dot, "[style=dashed") == 4);
  CHECK(count(dot, " -> ") - count(dot, "[style=dashed") == 9);
  for (const auto& g : sample_graphs()) CHECK(DotChecker(to_dot(g)).ok());
  CHECK(DotChecker(to_dot(BpmnGraph{})).ok());
  CHECK_FALSE(DotChecker("digraph { a -> }").ok());
}
