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

#include <fstream>
#include <random>

#include "doctest.h"
#include "demobpmn/demo_model.hpp"
#include "generators.hpp"

using namespace demobpmn;

namespace {

const char* kPoliGyn =
    "transaction TK01 \"patient problem diagnosing\" initiator CA00 executor A01\n"
    "transaction TK02 \"enclosed transaction two\" initiator A01 executor A02\n"
    "transaction TK03 \"enclosed transaction three\" initiator A01 executor A03\n"
    "(TK01/pm) -> [TK02/rq] 0..1\n"
    "(TK01/pm) -> [TK03/rq] 1..*\n";

std::size_t count_rule(const Diagnostics& ds, const std::string& rule) {
  return static_cast<std::size_t>(std::count_if(ds.begin(), ds.end(), [&](const Diagnostic& d) { return d.rule == rule; }));
}

}  // namespace

TEST_CASE("PoliGyn model") {
  auto r = parse_model(kPoliGyn, "poligyn.demo");
  REQUIRE(r.ok());
  CHECK(r.model.transaction_kinds.size() == 3);
  CHECK(r.model.response_links.size() == 2);
  CHECK(r.model.response_links[0].child_tk == "TK02");
  CHECK(r.model.response_links[0].cardinality.to_string() == "0..1");
  CHECK(r.model.response_links[1].cardinality.to_string() == "1..*");
  CHECK(validate_model(r.model).empty());
  auto rs = roots(r.model);
  REQUIRE(rs.size() == 1);
  CHECK(rs[0].id == "TK01");
  CHECK(parse_model(serialize_model(r.model)).model == r.model);
}

TEST_CASE("empty input") {
  auto r = parse_model("");
  CHECK(r.ok());
  CHECK(r.model.transaction_kinds.empty());
  CHECK(roots(r.model).empty());
  CHECK(serialize_model(r.model).empty());
}

TEST_CASE("diagnostics carry positions") {
  auto r = parse_model("transaction TK01 \"a\" initiator CA00 executor A01\n\n(TK01/pm) -> [TK09/rq] 1..1\n", "m.demo");
  REQUIRE(r.diagnostics.size() == 1);
  CHECK(r.diagnostics[0].rule == "REF");
  CHECK(r.diagnostics[0].locus.line == 3);
  CHECK(format_diagnostic(r.diagnostics[0]).rfind("m.demo:3:", 0) == 0);

  auto bad = parse_model("transaction TK01 initiator CA00\n");
  CHECK(has_rule(bad.diagnostics, "SYNTAX"));

  auto card = parse_model("transaction TK01 \"a\" initiator X executor Y\ntransaction TK02 \"b\" initiator Y executor Z\n"
                          "(TK01/pm) -> [TK02/rq] 3..1\n");
  CHECK(has_rule(card.diagnostics, "CARD"));

  auto dup = parse_model("transaction TK01 \"a\" initiator X executor Y\ntransaction TK01 \"b\" initiator Y executor Z\n");
  CHECK(has_rule(dup.diagnostics, "DUP_ID"));
}

TEST_CASE("validate_model rules") {
  auto base = parse_model("transaction TK01 \"a\" initiator X executor Y\n"
                          "transaction TK02 \"b\" initiator Y executor Z\n"
                          "transaction TK03 \"c\" initiator Y executor W\n")
                  .model;
  auto cyclic = base;
  cyclic.response_links = {{"TK01", CtpState::Promised, "TK02", ActKind::Request, {}},
                           {"TK02", CtpState::Promised, "TK01", ActKind::Request, {}}};
  auto ds = validate_model(cyclic);
  CHECK(ds.size() == 1);
  CHECK(count_rule(ds, "ACYCLIC") == 1);

  auto shared = base;
  shared.response_links = {{"TK01", CtpState::Promised, "TK03", ActKind::Request, {}},
                           {"TK02", CtpState::Promised, "TK03", ActKind::Request, {}}};
  ds = validate_model(shared);
  CHECK(ds.size() == 1);
  CHECK(count_rule(ds, "FOREST") == 1);

  auto dangling = base;
  dangling.response_links = {{"TK01", CtpState::Promised, "TK09", ActKind::Request, {}}};
  CHECK(count_rule(validate_model(dangling), "REF") == 1);

  auto card = base;
  card.response_links = {{"TK01", CtpState::Promised, "TK02", ActKind::Request, {2, 1}}};
  CHECK(count_rule(validate_model(card), "CARD") == 1);
}

TEST_CASE("two trees give both roots in declaration order") {
  auto m = parse_model("transaction B01 \"b\" initiator X executor Y\n"
                       "transaction A01 \"a\" initiator X executor Z\n")
               .model;
  auto rs = roots(m);
  REQUIRE(rs.size() == 2);
  CHECK(rs[0].id == "B01");
  CHECK(rs[1].id == "A01");
}

TEST_CASE("cardinality text") {
  for (const char* text : {"0..1", "1..1", "1..*", "0..*", "2..7"}) {
    auto c = CardinalityRange::parse(text);
    REQUIRE(c);
    CHECK(c->to_string() == text);
  }
  CHECK_FALSE(CardinalityRange::parse("1..0"));
  CHECK_FALSE(CardinalityRange::parse("*..1"));
}

TEST_CASE("round-trip over random forests") {
  std::mt19937 rng(7);
  for (int i = 0; i < 200; ++i) {
    auto m = testing::random_forest(rng);
    CAPTURE(serialize_model(m));
    REQUIRE(validate_model(m).empty());
    auto r = parse_model(serialize_model(m));
    CHECK(r.ok());
    CHECK(r.model == m);
    auto j = parse_model_json(serialize_model_json(m));
    CHECK(j.ok());
    CHECK(j.model == m);
    if (!m.transaction_kinds.empty()) CHECK_FALSE(roots(m).empty());
  }
}

TEST_CASE("parsing is total") {
  std::mt19937 rng(11);
  const std::string alphabet = "transction TK01\"()/->[]*.0123456789 #\n\t";
  for (int i = 0; i < 500; ++i) {
    std::string text;
    int n = std::uniform_int_distribution<int>(0, 80)(rng);
    for (int k = 0; k < n; ++k) text += alphabet[std::uniform_int_distribution<std::size_t>(0, alphabet.size() - 1)(rng)];
    CHECK_NOTHROW(parse_model(text));
    CHECK_NOTHROW(parse_model_json(text));
  }
}

TEST_CASE("corpus files") {
  auto poligyn = parse_model_file(std::string(CORPUS_DIR) + "/poligyn.demo");
  CHECK(poligyn.ok());
  CHECK(validate_model(poligyn.model, &poligyn.source).empty());

  auto cyclic = parse_model_file(std::string(CORPUS_DIR) + "/cyclic.demo");
  REQUIRE(cyclic.ok());
  auto ds = validate_model(cyclic.model, &cyclic.source);
  REQUIRE(ds.size() == 1);
  CHECK(ds[0].rule == "ACYCLIC");
  CHECK(ds[0].locus.line > 0);

  auto missing = parse_model_file(std::string(CORPUS_DIR) + "/no_such_file.demo");
  CHECK(has_rule(missing.diagnostics, "IO"));
}
