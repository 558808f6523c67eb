#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "thimac/dsl.hpp"
#include "thimac/model.hpp"

namespace thimac {

// Raw access for building models the public interface refuses to build.
struct ModelSurgery {
  static FlowId raw_flow(StaticModel& m, const StageId& from, const StageId& to) {
    FlowId id("raw" + std::to_string(m.flows_.size() + 1));
    m.flows_.push_back({id, from, to, std::nullopt, std::nullopt});
    m.flow_index_.emplace(id, m.flows_.size() - 1);
    return id;
  }

  static StageId raw_stage(StaticModel& m, const ThimacId& owner, ActionKind kind,
                           const std::string& suffix) {
    StageId id(owner.str() + "." + suffix);
    m.stages_.push_back({id, kind, owner, std::nullopt});
    m.stage_index_.emplace(id, m.stages_.size() - 1);
    m.thimacs_[m.thimac_index_.at(owner)].stage_ids.push_back(id);
    return id;
  }

  static void set_parent(StaticModel& m, const ThimacId& child, const ThimacId& parent) {
    m.thimacs_[m.thimac_index_.at(child)].parent = parent;
  }
};

}  // namespace thimac

namespace testing_support {

inline std::filesystem::path corpus(const std::string& name) {
  return std::filesystem::path(THIMAC_CORPUS_DIR) / name;
}

inline std::filesystem::path golden(const std::string& name) {
  return std::filesystem::path(THIMAC_GOLDEN_DIR) / name;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline thimac::Document load(const std::string& corpus_name) {
  auto path = corpus(corpus_name);
  auto r = thimac::parse({slurp(path), path.string()});
  if (!r.ok()) {
    std::string msg = "parse failed for " + corpus_name;
    for (const auto& d : r.diagnostics) msg += "\n  " + thimac::format_diagnostic(d, corpus_name);
    throw std::runtime_error(msg);
  }
  return std::move(*r.document);
}

// Non-comment, whitespace-split rows of a golden table.
inline std::vector<std::vector<std::string>> table(const std::filesystem::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(slurp(p));
  for (std::string line; std::getline(in, line);) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream words(line);
    std::vector<std::string> row;
    for (std::string w; words >> w;) row.push_back(w);
    if (!row.empty()) rows.push_back(std::move(row));
  }
  return rows;
}

inline bool is_ancestor_path(const std::string& a, const std::string& b) {
  return b.size() > a.size() && b.compare(0, a.size(), a) == 0 && b[a.size()] == '.';
}

// Random forest of thimacs with random stages, wired only by flows that the
// succession table admits for the owners' relative placement. Flows are
// injected raw so the validator alone judges them.
inline thimac::StaticModel random_legal_model(std::mt19937& rng) {
  using namespace thimac;
  StaticModel m;
  std::uniform_int_distribution<int> n_thimacs(1, 8);
  std::vector<ThimacId> ids;
  const int n = n_thimacs(rng);
  for (int i = 0; i < n; ++i) {
    std::optional<ThimacId> parent;
    if (!ids.empty() && rng() % 2)
      parent = ids[std::uniform_int_distribution<std::size_t>(0, ids.size() - 1)(rng)];
    ids.push_back(m.add_thimac("M" + std::to_string(i), parent));
  }
  std::vector<StageId> stages;
  for (const auto& t : ids)
    for (ActionKind k : kAllKinds)
      if (rng() % 3 != 0) stages.push_back(m.add_stage(t, k));
  if (stages.empty()) return m;

  const std::string names[] = {"create", "process", "release", "transfer", "receive"};
  auto kind_of = [&](const StageId& s) {
    const std::string& v = s.str();
    std::string kw = v.substr(v.rfind('.') + 1);
    for (int i = 0; i < 5; ++i)
      if (kw == names[i]) return kAllKinds[i];
    throw std::logic_error("bad stage id");
  };
  auto owner_of = [](const StageId& s) { return s.str().substr(0, s.str().rfind('.')); };

  std::uniform_int_distribution<std::size_t> pick(0, stages.size() - 1);
  const int attempts = static_cast<int>(stages.size()) * 4;
  for (int i = 0; i < attempts; ++i) {
    const StageId& a = stages[pick(rng)];
    const StageId& b = stages[pick(rng)];
    ActionKind ka = kind_of(a), kb = kind_of(b);
    std::string oa = owner_of(a), ob = owner_of(b);
    bool ok;
    if (oa == ob)
      ok = legal_successor(ka, kb, Scope::SameMachine);
    else if (is_ancestor_path(oa, ob) || is_ancestor_path(ob, oa))
      ok = legal_successor(ka, kb, Scope::SameMachine) || legal_successor(ka, kb, Scope::CrossMachine);
    else
      ok = legal_successor(ka, kb, Scope::CrossMachine);
    if (ok) ModelSurgery::raw_flow(m, a, b);
  }
  return m;
}

}  // namespace testing_support
