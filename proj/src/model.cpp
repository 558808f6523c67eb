#include "thimac/model.hpp"

#include <algorithm>
#include <set>

namespace thimac {

namespace {

template <class Map, class Key>
auto lookup(const Map& index, const Key& key) -> std::optional<std::size_t> {
  auto it = index.find(key);
  if (it == index.end()) return std::nullopt;
  return it->second;
}

}  // namespace

ThimacId StaticModel::add_thimac(const std::string& name, const std::optional<ThimacId>& parent) {
  if (name.empty() || name.find('.') != std::string::npos)
    throw Error(Errc::InvalidName, "thimac name '" + name + "' must be non-empty and dot-free");
  if (parent && !thimac_index_.contains(*parent))
    throw Error(Errc::UnknownParent, "no thimac '" + parent->str() + "'");
  if (find_child(parent, name))
    throw Error(Errc::DuplicateSiblingName,
                "'" + name + "' already declared under " + (parent ? parent->str() : "the root"));

  ThimacId id(parent ? parent->str() + "." + name : name);
  thimacs_.push_back(Thimac{id, name, parent, {}, {}});
  thimac_index_.emplace(id, thimacs_.size() - 1);
  if (parent)
    thimacs_[thimac_index_.at(*parent)].child_ids.push_back(id);
  else
    roots_.push_back(id);
  return id;
}

StageId StaticModel::add_stage(const ThimacId& thimac, ActionKind kind,
                               const std::optional<std::string>& alias) {
  auto idx = lookup(thimac_index_, thimac);
  if (!idx) throw Error(Errc::UnknownThimac, "no thimac '" + thimac.str() + "'");
  if (stage_of(thimac, kind))
    throw Error(Errc::DuplicateKindInMachine,
                thimac.str() + " already has a " + std::string(kind_name(kind)) + " stage");
  if (alias) {
    if (alias->empty() || parse_kind(*alias))
      throw Error(Errc::InvalidName, "alias '" + *alias + "' is not usable");
    if (resolve_stage(thimac, *alias))
      throw Error(Errc::DuplicateAlias, "alias '" + *alias + "' reused in " + thimac.str());
  }

  StageId id(thimac.str() + "." + std::string(kind_name(kind)));
  stages_.push_back(Stage{id, kind, thimac, alias});
  stage_index_.emplace(id, stages_.size() - 1);
  thimacs_[*idx].stage_ids.push_back(id);
  return id;
}

void check_flow_rule(ActionKind from, ActionKind to, Placement placement) {
  auto describe = [&] {
    return std::string(kind_name(from)) + " -> " + std::string(kind_name(to));
  };
  switch (placement) {
    case Placement::SameMachine:
      if (!legal_successor(from, to, Scope::SameMachine))
        throw Error(Errc::IllegalSuccession, describe());
      return;
    case Placement::Nested:
      // A machine feeding its own submachine may use either reading.
      if (!legal_successor(from, to, Scope::SameMachine) &&
          !legal_successor(from, to, Scope::CrossMachine))
        throw Error(Errc::IllegalSuccession, describe());
      return;
    case Placement::Separate:
      if (!legal_successor(from, to, Scope::CrossMachine))
        throw Error(Errc::UnpairedBoundaryCrossing,
                    describe() + " crosses a machine boundary without transfer -> transfer");
      return;
  }
}

FlowId StaticModel::add_flow(const StageId& from, const StageId& to,
                             const std::optional<std::string>& carries,
                             const std::optional<int>& anchor) {
  const Stage& a = stage(from);
  const Stage& b = stage(to);
  check_flow_rule(a.kind, b.kind, placement(from, to));

  FlowId id("f" + std::to_string(flows_.size() + 1));
  flows_.push_back(Flow{id, from, to, carries, anchor});
  flow_index_.emplace(id, flows_.size() - 1);
  return id;
}

TriggerId StaticModel::add_trigger(const StageId& from, const StageId& to) {
  stage(from);
  stage(to);
  if (from == to) throw Error(Errc::SelfTrigger, from.str() + " cannot trigger itself");
  TriggerId id("g" + std::to_string(triggers_.size() + 1));
  triggers_.push_back(Trigger{id, from, to});
  return id;
}

const Thimac* StaticModel::find_thimac(const ThimacId& id) const {
  auto idx = lookup(thimac_index_, id);
  return idx ? &thimacs_[*idx] : nullptr;
}

const Stage* StaticModel::find_stage(const StageId& id) const {
  auto idx = lookup(stage_index_, id);
  return idx ? &stages_[*idx] : nullptr;
}

const Flow* StaticModel::find_flow(const FlowId& id) const {
  auto idx = lookup(flow_index_, id);
  return idx ? &flows_[*idx] : nullptr;
}

const Thimac& StaticModel::thimac(const ThimacId& id) const {
  if (auto* t = find_thimac(id)) return *t;
  throw Error(Errc::UnknownThimac, "no thimac '" + id.str() + "'");
}

const Stage& StaticModel::stage(const StageId& id) const {
  if (auto* s = find_stage(id)) return *s;
  throw Error(Errc::UnknownStage, "no stage '" + id.str() + "'");
}

const Flow& StaticModel::flow(const FlowId& id) const {
  if (auto* f = find_flow(id)) return *f;
  throw Error(Errc::UnknownFlow, "no flow '" + id.str() + "'");
}

const Stage* StaticModel::stage_of(const ThimacId& thimac, ActionKind kind) const {
  const Thimac* t = find_thimac(thimac);
  if (!t) return nullptr;
  for (const auto& sid : t->stage_ids) {
    const Stage* s = find_stage(sid);
    if (s && s->kind == kind) return s;
  }
  return nullptr;
}

const Stage* StaticModel::resolve_stage(const ThimacId& thimac,
                                        const std::string& kind_or_alias) const {
  if (auto kind = parse_kind(kind_or_alias)) return stage_of(thimac, *kind);
  const Thimac* t = find_thimac(thimac);
  if (!t) return nullptr;
  for (const auto& sid : t->stage_ids) {
    const Stage* s = find_stage(sid);
    if (s && s->alias == kind_or_alias) return s;
  }
  return nullptr;
}

const Thimac* StaticModel::find_child(const std::optional<ThimacId>& parent,
                                      const std::string& name) const {
  if (!parent) {
    for (const auto& r : roots_)
      if (thimac(r).name == name) return &thimac(r);
    return nullptr;
  }
  const Thimac* p = find_thimac(*parent);
  if (!p) return nullptr;
  for (const auto& c : p->child_ids)
    if (thimac(c).name == name) return &thimac(c);
  return nullptr;
}

std::vector<const Flow*> StaticModel::outgoing_flows(const StageId& s) const {
  std::vector<const Flow*> out;
  for (const auto& f : flows_)
    if (f.from == s) out.push_back(&f);
  return out;
}

std::vector<const Flow*> StaticModel::incoming_flows(const StageId& s) const {
  std::vector<const Flow*> out;
  for (const auto& f : flows_)
    if (f.to == s) out.push_back(&f);
  return out;
}

std::vector<const Trigger*> StaticModel::outgoing_triggers(const StageId& s) const {
  std::vector<const Trigger*> out;
  for (const auto& t : triggers_)
    if (t.from == s) out.push_back(&t);
  return out;
}

std::vector<const Trigger*> StaticModel::incoming_triggers(const StageId& s) const {
  std::vector<const Trigger*> out;
  for (const auto& t : triggers_)
    if (t.to == s) out.push_back(&t);
  return out;
}

bool StaticModel::is_ancestor(const ThimacId& ancestor, const ThimacId& descendant) const {
  const Thimac* t = find_thimac(descendant);
  // Bounded walk: a corrupted parent chain must not loop forever.
  for (std::size_t steps = 0; t && t->parent && steps <= thimacs_.size(); ++steps) {
    if (*t->parent == ancestor) return true;
    t = find_thimac(*t->parent);
  }
  return false;
}

Placement StaticModel::placement(const StageId& a, const StageId& b) const {
  const ThimacId& oa = stage(a).owner;
  const ThimacId& ob = stage(b).owner;
  if (oa == ob) return Placement::SameMachine;
  if (is_ancestor(oa, ob) || is_ancestor(ob, oa)) return Placement::Nested;
  return Placement::Separate;
}

Region subdiagram(const StaticModel& model, std::span<const StageId> stage_ids) {
  if (stage_ids.empty()) throw Error(Errc::EmptyRegion, "region has no stages");

  Region region;
  std::set<StageId> members;
  for (const auto& id : stage_ids) {
    model.stage(id);
    if (members.insert(id).second) region.stages.push_back(id);
  }

  // Union-find over region positions.
  std::map<StageId, std::size_t> pos;
  for (std::size_t i = 0; i < region.stages.size(); ++i) pos[region.stages[i]] = i;
  std::vector<std::size_t> parent(region.stages.size());
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::size_t components = region.stages.size();
  auto join = [&](const StageId& a, const StageId& b) {
    auto ra = find(pos.at(a)), rb = find(pos.at(b));
    if (ra != rb) {
      parent[ra] = rb;
      --components;
    }
  };

  for (const auto& f : model.flows()) {
    if (members.contains(f.from) && members.contains(f.to)) {
      region.flows.push_back(f.id);
      join(f.from, f.to);
    }
  }
  for (const auto& t : model.triggers()) {
    if (members.contains(t.from) && members.contains(t.to)) {
      region.triggers.push_back(t.id);
      join(t.from, t.to);
    }
  }
  region.connected = components == 1;
  return region;
}

}  // namespace thimac
