#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "thimac/action_kind.hpp"
#include "thimac/error.hpp"

namespace thimac {

/// String identifier tagged by the entity it names.
template <class Tag>
struct Id {
  std::string value;

  Id() = default;
  explicit Id(std::string v) : value(std::move(v)) {}

  const std::string& str() const noexcept { return value; }
  bool empty() const noexcept { return value.empty(); }
  auto operator<=>(const Id&) const = default;
};

using ThimacId = Id<struct ThimacTag>;
using StageId = Id<struct StageTag>;
using FlowId = Id<struct FlowTag>;
using TriggerId = Id<struct TriggerTag>;

struct Thimac {
  ThimacId id;  // dotted path from the root, e.g. "System.Books"
  std::string name;
  std::optional<ThimacId> parent;
  std::vector<StageId> stage_ids;  // at most one per kind
  std::vector<ThimacId> child_ids;
};

struct Stage {
  StageId id;  // owner path + "." + kind keyword
  ActionKind kind;
  ThimacId owner;
  std::optional<std::string> alias;
};

struct Flow {
  FlowId id;
  StageId from;
  StageId to;
  std::optional<std::string> carries;
  std::optional<int> anchor;
};

/// Dashed arrow: awakens the target stage, carries no thing.
struct Trigger {
  TriggerId id;
  StageId from;
  StageId to;
};

/// How the owners of two stages relate.
enum class Placement { SameMachine, Nested, Separate };

/// The timeless diagram of thimacs, stages, flows and triggers.
///
/// Every mutating operation checks the structural invariants and throws
/// thimac::Error on violation, so a model built only through this interface
/// is always well formed.
class StaticModel {
public:
  ThimacId add_thimac(const std::string& name, const std::optional<ThimacId>& parent = {});
  StageId add_stage(const ThimacId& thimac, ActionKind kind,
                    const std::optional<std::string>& alias = {});
  FlowId add_flow(const StageId& from, const StageId& to,
                  const std::optional<std::string>& carries = {},
                  const std::optional<int>& anchor = {});
  TriggerId add_trigger(const StageId& from, const StageId& to);

  std::span<const Thimac> thimacs() const noexcept { return thimacs_; }
  std::span<const Stage> stages() const noexcept { return stages_; }
  std::span<const Flow> flows() const noexcept { return flows_; }
  std::span<const Trigger> triggers() const noexcept { return triggers_; }
  std::span<const ThimacId> roots() const noexcept { return roots_; }

  const Thimac* find_thimac(const ThimacId& id) const;
  const Stage* find_stage(const StageId& id) const;
  const Flow* find_flow(const FlowId& id) const;

  const Thimac& thimac(const ThimacId& id) const;
  const Stage& stage(const StageId& id) const;
  const Flow& flow(const FlowId& id) const;

  /// The stage of the given kind in a thimac, if declared.
  const Stage* stage_of(const ThimacId& thimac, ActionKind kind) const;
  /// Stage by kind keyword or alias within one thimac.
  const Stage* resolve_stage(const ThimacId& thimac, const std::string& kind_or_alias) const;
  const Thimac* find_child(const std::optional<ThimacId>& parent, const std::string& name) const;

  std::vector<const Flow*> outgoing_flows(const StageId& stage) const;
  std::vector<const Flow*> incoming_flows(const StageId& stage) const;
  std::vector<const Trigger*> outgoing_triggers(const StageId& stage) const;
  std::vector<const Trigger*> incoming_triggers(const StageId& stage) const;

  bool is_ancestor(const ThimacId& ancestor, const ThimacId& descendant) const;
  Placement placement(const StageId& a, const StageId& b) const;

  bool empty() const noexcept { return thimacs_.empty(); }

private:
  friend struct ModelSurgery;

  std::vector<Thimac> thimacs_;
  std::vector<Stage> stages_;
  std::vector<Flow> flows_;
  std::vector<Trigger> triggers_;
  std::vector<ThimacId> roots_;

  std::map<ThimacId, std::size_t> thimac_index_;
  std::map<StageId, std::size_t> stage_index_;
  std::map<FlowId, std::size_t> flow_index_;
};

/// Induced subgraph over a set of stages.
struct Region {
  std::vector<StageId> stages;
  std::vector<FlowId> flows;
  std::vector<TriggerId> triggers;
  bool connected = false;
};

/// Stages plus every flow and trigger with both endpoints inside; connected
/// when the undirected graph over flows and triggers has one component.
Region subdiagram(const StaticModel& model, std::span<const StageId> stage_ids);

/// Checks that a flow of (from, to) between the given placements is allowed.
/// Throws IllegalSuccession or UnpairedBoundaryCrossing.
void check_flow_rule(ActionKind from, ActionKind to, Placement placement);

}  // namespace thimac

template <class Tag>
struct std::hash<thimac::Id<Tag>> {
  std::size_t operator()(const thimac::Id<Tag>& id) const noexcept {
    return std::hash<std::string>{}(id.value);
  }
};
