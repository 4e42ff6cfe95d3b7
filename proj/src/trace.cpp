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

#include "demobpmn/trace.hpp"

#include <algorithm>
#include <sstream>

namespace demobpmn {

std::strong_ordering Trace::operator<=>(const Trace& other) const {
  const std::size_t n = std::min(steps.size(), other.steps.size());
  for (std::size_t i = 0; i < n; ++i) {
    const TraceStep& a = steps[i];
    const TraceStep& b = other.steps[i];
    if (auto c = short_code(a.act).compare(short_code(b.act)); c != 0) {
      return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
    }
    if (a.party != b.party) {
      return a.party < b.party ? std::strong_ordering::less : std::strong_ordering::greater;
    }
    if (auto c = a.tk <=> b.tk; c != 0) {
      return c;
    }
  }
  return steps.size() <=> other.steps.size();
}

std::string format_trace(const Trace& trace, TraceFormat format) {
  std::string out;
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const TraceStep& s = trace.steps[i];
    if (i > 0) {
      out += kStepSeparator;
    }
    if (format == TraceFormat::WithParty) {
      out += s.party == Party::Initiator ? "I:" : "E:";
    }
    out += short_code(s.act);
    if (format == TraceFormat::WithTransaction && !s.tk.empty()) {
      out += '(';
      out += s.tk;
      out += ')';
    }
  }
  return out;
}

namespace {

std::vector<std::string_view> split_steps(std::string_view line) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size();) {
    if (i == line.size()) {
      parts.push_back(line.substr(start, i - start));
      break;
    }
    if (line.substr(i, kStepSeparator.size()) == kStepSeparator) {
      parts.push_back(line.substr(start, i - start));
      i += kStepSeparator.size();
      start = i;
    } else if (line[i] == '.') {
      parts.push_back(line.substr(start, i - start));
      start = ++i;
    } else {
      ++i;
    }
  }
  return parts;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '\n')) {
    s.remove_suffix(1);
  }
  return s;
}

}  // namespace

std::optional<Trace> parse_trace(std::string_view line) {
  line = trim(line);
  Trace trace;
  if (line.empty()) {
    return trace;
  }
  std::vector<ActKind> open_revokes;
  for (std::string_view part : split_steps(line)) {
    part = trim(part);
    TraceStep step;
    std::optional<Party> party;
    if (part.size() > 2 && part[1] == ':') {
      if (part[0] == 'I' || part[0] == 'i') {
        party = Party::Initiator;
      } else if (part[0] == 'E' || part[0] == 'e') {
        party = Party::Executor;
      } else {
        return std::nullopt;
      }
      part.remove_prefix(2);
    }
    if (auto open = part.find('('); open != std::string_view::npos) {
      if (part.back() != ')') {
        return std::nullopt;
      }
      step.tk = std::string(part.substr(open + 1, part.size() - open - 2));
      part = part.substr(0, open);
    }
    auto act = parse_act(part);
    if (!act) {
      return std::nullopt;
    }
    step.act = *act;
    if (!party) {
      party = performer(*act);
    }
    if (!party) {
      if (open_revokes.empty()) {
        return std::nullopt;
      }
      party = responder_of(open_revokes.back());
    }
    if (is_revoke(*act)) {
      open_revokes.push_back(*act);
    } else if ((*act == ActKind::Allow || *act == ActKind::Refuse) && !open_revokes.empty()) {
      open_revokes.pop_back();
    }
    step.party = *party;
    trace.steps.push_back(std::move(step));
  }
  return trace;
}

Trace strip_transactions(const Trace& trace) {
  Trace out = trace;
  for (TraceStep& s : out.steps) {
    s.tk.clear();
  }
  return out;
}

TraceSet strip_transactions(const TraceSet& traces) {
  TraceSet out;
  for (const Trace& t : traces) {
    out.insert(strip_transactions(t));
  }
  return out;
}

Trace project(const Trace& trace, const std::string& tk) {
  Trace out;
  std::copy_if(trace.steps.begin(), trace.steps.end(), std::back_inserter(out.steps),
               [&](const TraceStep& s) { return s.tk == tk; });
  return out;
}

}  // namespace demobpmn
