#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "thimac/action_kind.hpp"
#include "thimac/diagnostic.hpp"
#include "thimac/model.hpp"

namespace thimac {

using Tick = std::int64_t;

/// Interval that activates a region. Ticks are abstract units.
struct TimeSubthimac {
  Tick start = 0;
  Tick end = 0;

  bool operator==(const TimeSubthimac&) const = default;
};

/// A connected region of the static model, optionally scheduled in time.
/// Without a time it is a repeatable template.
struct EventDef {
  std::string id;
  std::string name;
  std::vector<StageId> region;  // declaration order, no duplicates
  std::optional<TimeSubthimac> time;

  bool operator==(const EventDef&) const = default;
};

/// Chronology of events: a precedence graph.
struct BehaviorModel {
  std::string name;
  std::vector<std::string> events;
  std::vector<std::pair<std::string, std::string>> edges;

  bool operator==(const BehaviorModel&) const = default;
};

/// How an event's region changed between two observations.
struct RegionDelta {
  std::vector<StageId> entered;
  std::vector<StageId> left;
  std::vector<StageId> retained;

  /// Part of the event is still where it was while part has already moved.
  bool fuzzy() const { return !entered.empty() && !left.empty() && !retained.empty(); }
};

EventDef define_event(const StaticModel& model, const std::string& name,
                      std::span<const StageId> region,
                      const std::optional<TimeSubthimac>& time = {});

std::string encode_actions(std::span<const ActionKind> seq);

/// Inverse of encode_actions. 'R' is resolved to release or receive by the
/// succession table; a code with two legal readings is rejected.
std::vector<ActionKind> decode_actions(std::string_view code);

/// Whether adjacent kinds chain legally (transfer -> transfer as a crossing).
bool is_legal_chain(std::span<const ActionKind> seq);

/// Kinds along the single flow chain through the region.
/// Throws NonLinearRegion when the induced flows do not form one path.
std::vector<ActionKind> event_action_sequence(const StaticModel& model, const EventDef& event);

/// One generic (single-stage) event per region stage.
std::vector<EventDef> decompose(const EventDef& event);

BehaviorModel build_behavior(const std::string& name, std::span<const std::string> events,
                             std::span<const std::pair<std::string, std::string>> edges);

/// B1/B2/B3 warnings for a chronology against the static model.
std::vector<Diagnostic> check_behavior(const StaticModel& model,
                                       std::span<const EventDef> events,
                                       const BehaviorModel& behavior);

RegionDelta event_moved(const EventDef& before, const EventDef& after);

/// Chronology as a DOT digraph.
std::string behavior_dot(const BehaviorModel& behavior);

}  // namespace thimac
