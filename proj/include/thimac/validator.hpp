#pragma once

#include <map>
#include <string>
#include <vector>

#include "thimac/action_kind.hpp"
#include "thimac/diagnostic.hpp"
#include "thimac/model.hpp"

namespace thimac {

/// Whole-model checks V1..V6, sorted and free of duplicates.
std::vector<Diagnostic> validate(const StaticModel& model);

bool has_errors(const std::vector<Diagnostic>& diagnostics);

enum class Role { Source, Sink, Agent };

std::string_view role_name(Role role);

struct VerbStep {
  Role role;
  ActionKind kind;

  bool operator==(const VerbStep&) const = default;
};

using Decomposition = std::vector<VerbStep>;

struct LexiconEntry {
  Decomposition steps;
  bool corpus_verified = true;
};

/// Maps ordinary verbs onto chains of generic actions.
class VerbLexicon {
public:
  /// Throws IllegalSuccession when the chain, instantiated at its roles, is
  /// not a legal succession (same role = same machine).
  void add(const std::string& verb, Decomposition steps, bool corpus_verified = true);

  const std::map<std::string, LexiconEntry>& entries() const noexcept { return entries_; }
  const LexiconEntry* find(const std::string& verb) const;

  /// take, put, spread, fold, plus best-effort sell, change, display, give,
  /// clean and break.
  static VerbLexicon shipped();

private:
  std::map<std::string, LexiconEntry> entries_;
};

bool is_legal_decomposition(const Decomposition& steps);

/// Throws UnknownVerb when nothing is registered (case-insensitive).
Decomposition normalize_verb(const VerbLexicon& lexicon, const std::string& verb);

}  // namespace thimac
