// tmc: command-line front end for thinging-machine models.
//
// Exit status: 0 ok, 1 validation errors, 2 syntax errors, 3 conformance
// failure, 4 usage or I/O error.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "thimac/dsl.hpp"
#include "thimac/events.hpp"
#include "thimac/simulator.hpp"
#include "thimac/validator.hpp"

namespace {

using namespace thimac;

enum Exit : int { kOk = 0, kInvalid = 1, kSyntax = 2, kNonConforming = 3, kUsage = 4 };

struct UsageError {
  std::string message;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError{"cannot read '" + path + "'"};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError{"cannot write '" + path + "'"};
  out << text;
}

// Parses a model file; prints diagnostics and yields the exit status on failure.
std::optional<Document> load(const std::string& path, int& status) {
  ParseResult r = parse(SourceDocument{read_file(path), path});
  for (const auto& d : r.diagnostics) std::cerr << format_diagnostic(d, path) << "\n";
  if (!r.ok()) status = r.has_syntax_error() ? kSyntax : kInvalid;
  return std::move(r.document);
}

int line_of(const Document& doc, const Diagnostic& d) {
  std::string key;
  const std::string first = d.subject.substr(0, d.subject.find_first_of(" -"));
  if (d.code == "V1" || d.code == "V4")
    key = "thimac:" + d.subject;
  else if (d.code == "V2" || d.code == "V3")
    key = "flow:" + first;
  else if (d.code == "V5" || d.code == "V6")
    key = "stage:" + d.subject;
  else if (d.code == "B1" || d.code == "B2")
    key = "event:" + first;
  else if (d.code == "B3")
    key = "behavior:" + d.subject;
  auto it = doc.positions.find(key);
  return it == doc.positions.end() ? 1 : it->second.line;
}

void print_diagnostics(const Document& doc, const std::string& path,
                       const std::vector<Diagnostic>& diags) {
  for (const auto& d : diags)
    std::cerr << d.code << " " << severity_name(d.severity) << " " << path << ":"
              << line_of(doc, d) << " " << d.subject << " — " << d.message << "\n";
}

nlohmann::json to_json(const Document& doc, const std::string& path,
                       const std::vector<Diagnostic>& diags) {
  auto out = nlohmann::json::array();
  for (const auto& d : diags)
    out.push_back({{"code", d.code},
                   {"severity", severity_name(d.severity)},
                   {"path", path},
                   {"line", line_of(doc, d)},
                   {"subject", d.subject},
                   {"message", d.message}});
  return out;
}

std::vector<Diagnostic> all_findings(const Document& doc) {
  auto diags = validate(doc.model);
  for (const auto& b : doc.behaviors) {
    auto more = check_behavior(doc.model, doc.events, b);
    diags.insert(diags.end(), more.begin(), more.end());
  }
  return diags;
}

int cmd_validate(const std::string& path, bool json) {
  int status = kOk;
  auto doc = load(path, status);
  if (!doc) return status;
  auto diags = all_findings(*doc);
  print_diagnostics(*doc, path, diags);
  if (json) std::cout << to_json(*doc, path, diags).dump(2) << "\n";
  return has_errors(diags) ? kInvalid : kOk;
}

std::string event_code(const Document& doc, const EventDef& e) {
  try {
    return encode_actions(event_action_sequence(doc.model, e));
  } catch (const Error& err) {
    if (err.code() != Errc::NonLinearRegion) throw;
  }
  std::string out = "decomposed:";
  for (const auto& g : decompose(e)) out += " " + encode_actions(event_action_sequence(doc.model, g));
  return out;
}

int cmd_events(const std::string& path, bool encode_only) {
  int status = kOk;
  auto doc = load(path, status);
  if (!doc) return status;
  for (const auto& e : doc->events) {
    std::cout << e.id << " " << event_code(*doc, e);
    if (!encode_only) {
      std::cout << " [" << e.region.size() << (e.region.size() == 1 ? " stage" : " stages") << "]";
      if (e.time) std::cout << " time " << e.time->start << ".." << e.time->end;
    }
    std::cout << "\n";
  }
  return kOk;
}

int cmd_behavior(const std::string& path, const std::string& name, const std::string& dot) {
  int status = kOk;
  auto doc = load(path, status);
  if (!doc) return status;
  std::vector<const BehaviorModel*> chosen;
  for (const auto& b : doc->behaviors)
    if (name.empty() || b.name == name) chosen.push_back(&b);
  if (!name.empty() && chosen.empty()) throw UsageError{"no behavior '" + name + "'"};
  for (const BehaviorModel* b : chosen) {
    print_diagnostics(*doc, path, check_behavior(doc->model, doc->events, *b));
    std::cout << b->name << ": " << b->events.size() << " events, " << b->edges.size()
              << " edges\n";
  }
  if (!dot.empty()) {
    if (chosen.empty()) throw UsageError{"no behavior to export"};
    write_output(dot, behavior_dot(*chosen.front()));
  }
  return kOk;
}

int cmd_simulate(const std::string& path, const std::string& scenario_path,
                 const std::string& behavior, const std::string& trace_out, bool transitive) {
  int status = kOk;
  auto doc = load(path, status);
  if (!doc) return status;
  auto diags = validate(doc->model);
  if (has_errors(diags)) {
    print_diagnostics(*doc, path, diags);
    return kInvalid;
  }

  Scenario scenario;
  try {
    scenario = parse_scenario(doc->model, read_file(scenario_path));
  } catch (const Error& e) {
    throw UsageError{scenario_path + ": " + e.what()};
  }

  Trace trace;
  try {
    trace = run(doc->model, scenario);
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return kInvalid;
  }
  if (!trace_out.empty()) write_output(trace_out, format_trace(trace));

  Projection p = project(trace, doc->events);
  for (const auto& o : p.occurrences)
    std::cout << o.event << " " << o.time.start << ".." << o.time.end << "\n";
  for (std::size_t i : p.uncovered) {
    const auto& e = trace.entries[i];
    std::cout << "uncovered " << e.time.start << " " << e.stage.str() << "\n";
  }

  if (behavior.empty()) return kOk;
  const BehaviorModel* b = doc->find_behavior(behavior);
  if (!b) throw UsageError{"no behavior '" + behavior + "'"};
  try {
    Conformance c = conforms(p, *b, transitive);
    if (!c.ok) {
      std::cerr << "conformance: violation: " << c.message << "\n";
      return kNonConforming;
    }
  } catch (const Error& e) {
    std::cerr << "conformance: " << e.what() << "\n";
    return kNonConforming;
  }
  std::cerr << "conformance: ok\n";
  return kOk;
}

int cmd_export(const std::string& path, const std::string& dot, const std::string& highlight) {
  int status = kOk;
  auto doc = load(path, status);
  if (!doc) return status;
  std::optional<Region> region;
  if (!highlight.empty()) {
    const EventDef* e = doc->find_event(highlight);
    if (!e) throw UsageError{"no event '" + highlight + "'"};
    region = subdiagram(doc->model, e->region);
  }
  write_output(dot.empty() ? "-" : dot, emit_dot(doc->model, region));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parse, validate, segment and simulate thinging-machine models"};
  app.require_subcommand(1);

  std::string file, scenario, behavior, trace_out, dot, highlight, name;
  bool json = false, encode = false, list = false, transitive = false;

  auto* validate_cmd = app.add_subcommand("validate", "Check a model and print diagnostics");
  validate_cmd->add_option("file", file, "Model file (.tm)")->required();
  validate_cmd->add_flag("--json", json, "Also print diagnostics as JSON on standard output");

  auto* events_cmd = app.add_subcommand("events", "List events with their action codes");
  events_cmd->add_option("file", file, "Model file (.tm)")->required();
  auto* enc = events_cmd->add_flag("--encode", encode, "Print only event ids and codes");
  auto* lst = events_cmd->add_flag("--list", list, "Print codes with region sizes (default)");
  enc->excludes(lst);

  auto* behavior_cmd = app.add_subcommand("behavior", "Check chronologies against the model");
  behavior_cmd->add_option("file", file, "Model file (.tm)")->required();
  behavior_cmd->add_option("--name", name, "Behavior to check (default: all)");
  behavior_cmd->add_option("--dot", dot, "Write the chronology as DOT ('-' for stdout)");

  auto* simulate_cmd = app.add_subcommand("simulate", "Run a scenario and project the trace");
  simulate_cmd->add_option("file", file, "Model file (.tm)")->required();
  simulate_cmd->add_option("scenario", scenario, "Scenario file")->required();
  simulate_cmd->add_option("--behavior", behavior, "Check conformance against this chronology");
  simulate_cmd->add_option("--trace", trace_out, "Write the trace here ('-' for stdout)");
  simulate_cmd->add_flag("--transitive", transitive, "Accept pairs joined by a path");

  auto* export_cmd = app.add_subcommand("export", "Render the static model as DOT");
  export_cmd->add_option("file", file, "Model file (.tm)")->required();
  export_cmd->add_option("--dot", dot, "Output path ('-' or absent for stdout)");
  export_cmd->add_option("--highlight", highlight, "Event whose region to highlight");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*validate_cmd) return cmd_validate(file, json);
    if (*events_cmd) return cmd_events(file, encode);
    if (*behavior_cmd) return cmd_behavior(file, name, dot);
    if (*simulate_cmd) return cmd_simulate(file, scenario, behavior, trace_out, transitive);
    if (*export_cmd) return cmd_export(file, dot, highlight);
  } catch (const UsageError& e) {
    std::cerr << "tmc: " << e.message << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "tmc: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
