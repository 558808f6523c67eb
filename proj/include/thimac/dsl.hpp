#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "thimac/diagnostic.hpp"
#include "thimac/events.hpp"
#include "thimac/model.hpp"

namespace thimac {

struct SourceDocument {
  std::string text;
  std::optional<std::string> path;
};

/// Positions are 1-based; columns count bytes.
struct ParseDiagnostic {
  Severity severity = Severity::Error;
  std::string code;  // "SyntaxError" or the model error that rejected a declaration
  std::string message;
  int line = 1;
  int column = 1;
};

struct SourcePosition {
  int line = 1;
  int column = 1;
};

/// Everything a .tm file declares.
struct Document {
  StaticModel model;
  std::vector<EventDef> events;
  std::vector<BehaviorModel> behaviors;
  /// Declaration positions keyed "thimac:<id>", "stage:<id>", "flow:<id>",
  /// "trigger:<id>", "event:<id>" and "behavior:<name>".
  std::map<std::string, SourcePosition> positions;

  const EventDef* find_event(const std::string& id) const;
  const BehaviorModel* find_behavior(const std::string& name) const;
};

struct ParseResult {
  std::optional<Document> document;  // absent when any error was reported
  std::vector<ParseDiagnostic> diagnostics;

  bool ok() const { return document.has_value(); }
  bool has_syntax_error() const;
};

ParseResult parse(const SourceDocument& doc);

/// Canonical text: thimacs depth-first in declaration order, stages in kind
/// order, flows by anchor then id, then triggers, events and behaviors in
/// declaration order. Stable under parse.
std::string serialize(const StaticModel& model, const std::vector<EventDef>& events = {},
                      const std::vector<BehaviorModel>& behaviors = {});
std::string serialize(const Document& doc);

/// Equality of everything the text format carries; flow and trigger ids are
/// ignored, their content is compared in canonical order.
bool structurally_equal(const Document& a, const Document& b);

/// Graphviz digraph: one cluster per thimac, solid flows, dashed triggers,
/// filled nodes for the highlighted region.
std::string emit_dot(const StaticModel& model, const std::optional<Region>& highlight = {});

/// "line:column: error: message"
std::string format_diagnostic(const ParseDiagnostic& d, const std::optional<std::string>& path);

}  // namespace thimac
