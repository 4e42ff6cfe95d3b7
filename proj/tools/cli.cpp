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

#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "demobpmn/bpmn.hpp"
#include "demobpmn/composer.hpp"
#include "demobpmn/demo_model.hpp"
#include "demobpmn/error.hpp"
#include "demobpmn/expander.hpp"
#include "demobpmn/simulator.hpp"
#include "json.hpp"

namespace demobpmn::cli {

namespace {

struct Config {
  std::string input;
  std::string output;
  std::string tk;
  std::string level = "standard";
  std::string format;
  std::string script;
  bool include_production = false;
  bool layout = false;
  unsigned loop_bound = 2;
  unsigned revoke_bound = 2;
  std::uint64_t seed = 0;
  bool seeded = false;
};

// Raised after the message has been printed.
struct Exit {
  int code;
};

int code_of(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Io:
    case ErrorKind::SyntaxError:
    case ErrorKind::XmlSyntax:
    case ErrorKind::UnsupportedElement:
    case ErrorKind::Dangling: return kInputError;
    default: return kFailed;
  }
}

bool has_extension(const std::string& path, const std::string& ext) {
  return std::filesystem::path(path).extension() == ext;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, path + ": cannot read file");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw Error(ErrorKind::Io, path + ": cannot write file");
}

class Session {
 public:
  Session(const Config& config, std::ostream& out, std::ostream& err) : c_(config), out_(out), err_(err) {}

  ExpandOptions expand_options() const {
    ExpandOptions o;
    o.level = *parse_level(c_.level);
    o.include_production = c_.include_production;
    return o;
  }

  Bounds bounds() const { return {c_.loop_bound, c_.revoke_bound}; }

  void emit(const std::string& text) {
    if (c_.output.empty()) out_ << text;
    else write_file(c_.output, text);
  }

  // Prints diagnostics; returns the exit status they imply.
  int report(const Diagnostics& ds) {
    int code = kOk;
    for (const auto& d : ds) {
      err_ << format_diagnostic(d) << "\n";
      code = std::max(code, d.rule == "SYNTAX" || d.rule == "IO" ? kInputError : kFailed);
    }
    return code;
  }

  ParseResult model_or_exit(bool validate) {
    ParseResult r = parse_model_file(c_.input);
    if (int code = report(r.diagnostics)) throw Exit{code};
    if (validate) {
      if (int code = report(validate_model(r.model, &r.source))) throw Exit{code};
    }
    return r;
  }

  ParsedBpmn bpmn_or_exit() {
    std::string text = read_file(c_.input);
    try {
      return parse_bpmn(text);
    } catch (const Error& e) {
      err_ << c_.input << ":" << e.what() << "\n";
      throw Exit{code_of(e.kind())};
    }
  }

  BpmnGraph graph_or_exit() {
    if (has_extension(c_.input, ".bpmn")) return bpmn_or_exit().graph;
    return compose(model_or_exit(true).model, expand_options());
  }

  std::string render(const BpmnGraph& g) {
    if (c_.format == "dot") return to_dot(g);
    if (c_.format == "json") return stats_json(g);
    return to_xml(g, XmlOptions{c_.layout});
  }

  static std::string stats_json(const BpmnGraph& g) {
    BlockStats s = block_stats(g);
    nlohmann::ordered_json j = {{"pools", s.pools},
                                {"messages", s.messages},
                                {"events", s.events()},
                                {"message_start_events", s.message_start_events},
                                {"send_tasks", s.send_tasks},
                                {"tasks", s.tasks},
                                {"exclusive_gateways", s.exclusive_gateways},
                                {"event_based_gateways", s.event_based_gateways},
                                {"sequence_flows", s.sequence_flows},
                                {"message_flows", s.message_flows}};
    return j.dump(2) + "\n";
  }

  int compile() {
    auto model = model_or_exit(true).model;
    auto graphs = compose_all(model, expand_options());
    auto rs = roots(model);
    if (graphs.size() == 1 || c_.output.empty()) {
      std::string text;
      for (const auto& g : graphs) text += render(g);
      emit(text);
      return kOk;
    }
    std::filesystem::path base(c_.output);
    for (std::size_t i = 0; i < graphs.size(); ++i) {
      auto path = base.parent_path() / (base.stem().string() + "_" + rs[i].id + base.extension().string());
      write_file(path.string(), render(graphs[i]));
    }
    return kOk;
  }

  int expand() {
    auto model = model_or_exit(false).model;
    const TransactionKind* tk = model.find(c_.tk);
    if (!tk) {
      err_ << c_.input << ": unknown transaction kind '" << c_.tk << "'\n";
      return kFailed;
    }
    emit(render(expand_transaction(*tk, expand_options())));
    return kOk;
  }

  int validate() {
    if (!has_extension(c_.input, ".bpmn")) {
      model_or_exit(true);
      return kOk;
    }
    ParsedBpmn parsed = bpmn_or_exit();
    Diagnostics ds = validate_bpmn(parsed.graph);
    for (auto& d : ds) {
      d.locus.file = c_.input;
      if (auto it = parsed.positions.find(d.locus.element); it != parsed.positions.end()) {
        d.locus.line = it->second.first;
        d.locus.column = it->second.second;
      }
    }
    return report(ds);
  }

  int simulate() {
    BpmnGraph g = graph_or_exit();
    ChoicePolicy policy;
    if (!c_.script.empty()) {
      std::vector<std::string> labels;
      std::stringstream in(c_.script);
      for (std::string label; std::getline(in, label, ',');) labels.push_back(label);
      policy = ChoicePolicy::scripted(labels);
    } else if (c_.seeded) {
      policy = ChoicePolicy::random(c_.seed);
    }
    Trace t = simulate_graph(g, policy);
    std::set<std::string> tks;
    for (const auto& s : t.steps) tks.insert(s.tk);
    emit(format_trace(t, tks.size() > 1 ? TraceFormat::WithTransaction : TraceFormat::Codes) + "\n");
    return kOk;
  }

  Trace simulate_graph(const BpmnGraph& g, const ChoicePolicy& policy) { return demobpmn::simulate(g, policy, bounds()); }

  int conformance() {
    BpmnGraph g;
    if (c_.input.empty()) {
      g = expand_transaction({"TK01", "transaction", "initiator", "executor"}, expand_options());
    } else if (has_extension(c_.input, ".bpmn")) {
      g = bpmn_or_exit().graph;
    } else {
      auto model = model_or_exit(true).model;
      if (model.transaction_kinds.size() != 1) {
        err_ << c_.input << ": conformance needs a model with exactly one transaction kind\n";
        return kFailed;
      }
      g = expand_transaction(model.transaction_kinds.front(), expand_options());
    }
    auto report = check_conformance(g, *parse_level(c_.level), bounds());
    emit(c_.format == "json" ? report.to_json() : report.to_text());
    return report.pass() ? kOk : kFailed;
  }

  int roundtrip() {
    std::string text = read_file(c_.input);
    BpmnGraph g;
    try {
      g = from_xml(text);
    } catch (const Error& e) {
      err_ << c_.input << ":" << e.what() << "\n";
      return code_of(e.kind());
    }
    std::string again = to_xml(g, XmlOptions{text.find("BPMNDiagram") != std::string::npos});
    if (!c_.output.empty()) write_file(c_.output, again);
    if (again == text) return kOk;
    std::size_t at = std::mismatch(text.begin(), text.end(), again.begin(), again.end()).first - text.begin();
    err_ << c_.input << ":" << 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(at), '\n')
         << ": re-serialization differs\n";
    return kFailed;
  }

 private:
  const Config& c_;
  std::ostream& out_;
  std::ostream& err_;
};

void add_common(CLI::App* sub, Config& c, bool output = true) {
  sub->add_option("--level", c.level, "Pattern level")
      ->check(CLI::IsMember({"basic", "standard", "complete"}))
      ->capture_default_str();
  sub->add_flag("--include-production", c.include_production, "Insert the production task");
  sub->add_option("--loop-bound", c.loop_bound, "Loop bound")->capture_default_str();
  sub->add_option("--revoke-bound", c.revoke_bound, "Revoke bound")->capture_default_str();
  if (output) sub->add_option("-o,--output", c.output, "Output file (default stdout)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config c;
  CLI::App app{"DEMO transactions to BPMN collaborations", "demobpmn"};
  app.require_subcommand(1);

  auto* compile = app.add_subcommand("compile", "Compose a model into one BPMN collaboration");
  compile->add_option("model", c.input, "Model file (.demo or .json)")->required();
  add_common(compile, c);
  compile->add_option("--format", c.format, "xml, dot or json")->check(CLI::IsMember({"xml", "dot", "json"}));
  compile->add_flag("--layout", c.layout, "Emit diagram interchange");

  auto* expand = app.add_subcommand("expand", "Building block of one transaction kind");
  expand->add_option("model", c.input, "Model file")->required();
  expand->add_option("transaction", c.tk, "Transaction kind id")->required();
  add_common(expand, c);
  expand->add_option("--format", c.format, "xml, dot or json")->check(CLI::IsMember({"xml", "dot", "json"}));
  expand->add_flag("--layout", c.layout, "Emit diagram interchange");

  auto* validate = app.add_subcommand("validate", "Check a model or BPMN file");
  validate->add_option("file", c.input, "Model or .bpmn file")->required();

  auto* simulate = app.add_subcommand("simulate", "Run the diagram once and print its trace");
  simulate->add_option("file", c.input, "Model or .bpmn file")->required();
  add_common(simulate, c);
  auto* seed = simulate->add_option("--seed", c.seed, "Random choices with this seed");
  simulate->add_option("--script", c.script, "Comma-separated guard labels");

  auto* conformance = app.add_subcommand("conformance", "Compare a block with the transaction pattern");
  conformance->add_option("file", c.input, "Single-transaction model or .bpmn (default: generated block)");
  add_common(conformance, c);
  conformance->add_option("--format", c.format, "text or json")->check(CLI::IsMember({"text", "json"}));

  auto* roundtrip = app.add_subcommand("roundtrip", "Re-serialize a .bpmn file and compare bytes");
  roundtrip->add_option("file", c.input, ".bpmn file")->required();
  roundtrip->add_option("-o,--output", c.output, "Write the re-serialized document");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kInputError;
  }
  c.seeded = seed->count() > 0;

  Session s(c, out, err);
  try {
    if (*compile) return s.compile();
    if (*expand) return s.expand();
    if (*validate) return s.validate();
    if (*simulate) return s.simulate();
    if (*conformance) return s.conformance();
    if (*roundtrip) return s.roundtrip();
  } catch (const Exit& e) {
    return e.code;
  } catch (const Error& e) {
    err << "demobpmn: " << to_string(e.kind()) << ": " << e.what() << "\n";
    return code_of(e.kind());
  }
  return kInputError;
}

}  // namespace demobpmn::cli
