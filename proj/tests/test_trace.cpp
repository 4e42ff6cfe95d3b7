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

#include "doctest.h"
#include "demobpmn/ctp.hpp"
#include "demobpmn/trace.hpp"

using namespace demobpmn;

TEST_CASE("trace formats round-trip") {
  auto m = build_ctp(PatternLevel::Complete);
  for (const auto& t : enumerate_traces(m, 1, 2)) {
    for (auto f : {TraceFormat::Codes, TraceFormat::WithParty}) {
      auto back = parse_trace(format_trace(t, f));
      REQUIRE(back);
      CHECK(*back == t);
    }
  }
}

TEST_CASE("parse_trace") {
  auto t = parse_trace("rq.pm.da.ac");
  REQUIRE(t);
  CHECK(format_trace(*t) == "rq·pm·da·ac");
  CHECK(format_trace(*t, TraceFormat::WithParty) == "I:rq·E:pm·E:da·I:ac");

  auto r = parse_trace("rq·pm·rv-pm·al");
  REQUIRE(r);
  CHECK(r->steps[3].party == Party::Initiator);

  auto tagged = parse_trace("rq(TK01)·rq(TK02)");
  REQUIRE(tagged);
  CHECK(tagged->steps[1].tk == "TK02");
  CHECK(format_trace(*tagged, TraceFormat::WithTransaction) == "rq(TK01)·rq(TK02)");
  CHECK(project(*tagged, "TK02").size() == 1);
  CHECK(strip_transactions(*tagged).steps[1].tk.empty());

  CHECK_FALSE(parse_trace("rq·xx"));
}

TEST_CASE("ordering is by short codes first") {
  auto a = *parse_trace("rq·dc·qt");
  auto b = *parse_trace("rq·pm·da·ac");
  CHECK(a < b);
}
