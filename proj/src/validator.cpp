#include "thimac/validator.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace thimac {

namespace {

std::string flow_subject(const Flow& f) { return f.id.str() + " " + f.from.str() + "->" + f.to.str(); }

// Placement that tolerates dangling owners and corrupted nesting.
std::optional<Placement> safe_placement(const StaticModel& m, const Flow& f) {
  const Stage* a = m.find_stage(f.from);
  const Stage* b = m.find_stage(f.to);
  if (!a || !b) return std::nullopt;
  if (a->owner == b->owner) return Placement::SameMachine;
  if (m.is_ancestor(a->owner, b->owner) || m.is_ancestor(b->owner, a->owner))
    return Placement::Nested;
  return Placement::Separate;
}

}  // namespace

std::vector<Diagnostic> validate(const StaticModel& model) {
  std::set<Diagnostic> found;

  for (const auto& t : model.thimacs()) {
    std::set<ActionKind> kinds;
    for (const auto& sid : t.stage_ids) {
      const Stage* s = model.find_stage(sid);
      if (s && !kinds.insert(s->kind).second)
        found.insert({"V1", Severity::Error, t.id.str(),
                      "more than one " + std::string(kind_name(s->kind)) + " stage"});
    }

    // V4: the parent chain must reach a root within |thimacs| steps.
    const Thimac* cur = &t;
    std::size_t steps = 0;
    while (cur && cur->parent && steps <= model.thimacs().size()) {
      cur = model.find_thimac(*cur->parent);
      ++steps;
    }
    if (steps > model.thimacs().size())
      found.insert({"V4", Severity::Error, t.id.str(), "nesting does not terminate at a root"});
  }

  for (const auto& f : model.flows()) {
    auto where = safe_placement(model, f);
    if (!where) continue;
    ActionKind a = model.stage(f.from).kind;
    ActionKind b = model.stage(f.to).kind;
    try {
      check_flow_rule(a, b, *where);
    } catch (const Error& e) {
      bool crossing = e.code() == Errc::UnpairedBoundaryCrossing;
      found.insert({crossing ? "V3" : "V2", Severity::Error, flow_subject(f),
                    std::string(kind_name(a)) + " -> " + std::string(kind_name(b)) +
                        (crossing ? " crosses a boundary; only transfer -> transfer may"
                                  : " is not a legal succession")});
    }
  }

  for (const auto& s : model.stages()) {
    bool incident = false;
    bool boundary = false;
    for (const auto& f : model.flows()) {
      if (f.from != s.id && f.to != s.id) continue;
      incident = true;
      auto where = safe_placement(model, f);
      if (where && *where != Placement::SameMachine) boundary = true;
    }
    for (const auto& t : model.triggers())
      if (t.from == s.id || t.to == s.id) incident = true;

    if (!incident)
      found.insert({"V5", Severity::Warning, s.id.str(),
                    "dead potentiality: no flow or trigger touches this stage"});
    if (s.kind == ActionKind::Transfer && !boundary)
      found.insert({"V6", Severity::Warning, s.id.str(),
                    "dangling interface: transfer stage has no flow across its machine"});
  }

  return {found.begin(), found.end()};
}

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
  return std::any_of(diagnostics.begin(), diagnostics.end(),
                     [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

std::string_view role_name(Role role) {
  switch (role) {
    case Role::Source: return "source";
    case Role::Sink:   return "sink";
    case Role::Agent:  return "agent";
  }
  return "?";
}

bool is_legal_decomposition(const Decomposition& steps) {
  if (steps.empty()) return false;
  for (std::size_t i = 1; i < steps.size(); ++i) {
    Scope scope = steps[i - 1].role == steps[i].role ? Scope::SameMachine : Scope::CrossMachine;
    if (!legal_successor(steps[i - 1].kind, steps[i].kind, scope)) return false;
  }
  return true;
}

void VerbLexicon::add(const std::string& verb, Decomposition steps, bool corpus_verified) {
  if (!is_legal_decomposition(steps))
    throw Error(Errc::IllegalSuccession, "decomposition of '" + verb + "' is not a legal chain");
  entries_[verb] = LexiconEntry{std::move(steps), corpus_verified};
}

const LexiconEntry* VerbLexicon::find(const std::string& verb) const {
  auto it = entries_.find(verb);
  return it == entries_.end() ? nullptr : &it->second;
}

VerbLexicon VerbLexicon::shipped() {
  using K = ActionKind;
  using R = Role;
  const Decomposition handover_from_source = {
      {R::Source, K::Release}, {R::Source, K::Transfer}, {R::Sink, K::Transfer}, {R::Sink, K::Receive}};
  const Decomposition handover_from_agent = {
      {R::Agent, K::Release}, {R::Agent, K::Transfer}, {R::Sink, K::Transfer}, {R::Sink, K::Receive}};

  VerbLexicon lex;
  lex.add("take", handover_from_source);
  lex.add("put", handover_from_agent);
  lex.add("spread", {{R::Agent, K::Process}});
  lex.add("fold", {{R::Agent, K::Process}});

  // Best-effort readings; no worked example backs these.
  lex.add("sell", handover_from_source, false);
  lex.add("give", handover_from_agent, false);
  lex.add("change", {{R::Agent, K::Process}}, false);
  lex.add("clean", {{R::Agent, K::Process}}, false);
  lex.add("break", {{R::Agent, K::Process}, {R::Agent, K::Create}}, false);
  lex.add("display",
          {{R::Agent, K::Create}, {R::Agent, K::Release}, {R::Agent, K::Transfer},
           {R::Sink, K::Transfer}, {R::Sink, K::Receive}},
          false);
  return lex;
}

Decomposition normalize_verb(const VerbLexicon& lexicon, const std::string& verb) {
  std::string key = verb;
  std::transform(key.begin(), key.end(), key.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (const LexiconEntry* e = lexicon.find(key)) return e->steps;
  throw Error(Errc::UnknownVerb, "no generic decomposition registered for '" + verb + "'");
}

}  // namespace thimac
