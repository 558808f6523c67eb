#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "thimac/events.hpp"
#include "thimac/model.hpp"

namespace thimac {

struct Injection {
  Tick tick = 0;
  ThimacId thimac;  // born at this thimac's create stage
  std::string label;
};

struct Scenario {
  std::vector<Injection> injections;
  /// (stage, n-th departure from that stage, counted from 0) -> flow to take
  std::map<std::pair<StageId, std::size_t>, FlowId> choices;
  Tick max_ticks = 1000;
};

/// Reads the line-oriented scenario format:
///   inject <tick> <thimac-path> <label>
///   choose <stage-ref> <occurrence> <flow-anchor-or-id>
///   max <ticks>
/// Blank lines and '#' comments are ignored. Throws InvalidScenario with the
/// offending line number.
Scenario parse_scenario(const StaticModel& model, std::string_view text);

/// Throws InvalidScenario when an injection or choice does not fit the model.
void check_scenario(const StaticModel& model, const Scenario& scenario);

struct ThingInstance {
  std::string id;
  std::string label;
  Tick born_at = 0;
  StageId location;
};

struct GenericEventInstance {
  std::string thing;
  std::string label;
  StageId stage;
  ActionKind kind;
  TimeSubthimac time;  // always one tick long

  bool operator==(const GenericEventInstance&) const = default;
};

struct Trace {
  std::vector<GenericEventInstance> entries;
  Tick final_tick = 0;
};

enum class ThingStatus { Moving, Resting, Waiting };

/// Complete state of one run. Advance it with step().
struct SimState {
  Scenario scenario;
  Tick tick = 0;
  std::vector<ThingInstance> things;
  std::vector<ThingStatus> status;         // parallel to things
  std::vector<std::optional<FlowId>> waiting_on;  // flow blocked at a gated stage
  std::vector<Tick> entered_at;            // parallel to things
  std::vector<std::pair<Tick, StageId>> activations;  // trigger effects due
  std::map<StageId, int> latches;          // activations with nobody waiting yet
  std::map<StageId, std::size_t> departures;
  std::size_t next_injection = 0;          // into the tick-sorted injections

  explicit SimState(Scenario s);

  /// Nothing can move and nothing is scheduled.
  bool quiescent() const;
};

/// Advances one tick. Things that entered a stage on the previous tick move
/// along one outgoing flow; triggers fired on the previous tick take effect
/// (a create target bears a new thing, any other target admits a waiting
/// thing or latches for the next arrival). Stages with incoming triggers
/// other than creates are gated: a thing may only enter them when admitted.
/// Emissions of one tick are sorted by stage id.
std::vector<GenericEventInstance> step(const StaticModel& model, SimState& state);

/// Steps until quiescence or max_ticks. Throws StuckThing when things are
/// still waiting at a gate once nothing else can happen.
Trace run(const StaticModel& model, const Scenario& scenario);

/// "<tick> <thing-label> <stage-ref> <kind>" per line.
std::string format_trace(const Trace& trace);

struct Occurrence {
  std::string event;
  TimeSubthimac time;  // first entry's start to last entry's end

  bool operator==(const Occurrence&) const = default;
};

struct Projection {
  std::vector<Occurrence> occurrences;
  std::vector<std::size_t> uncovered;  // trace entry indices inside no region

  std::vector<std::string> event_sequence() const;
};

/// Greedy segmentation of the trace into event occurrences: at each entry the
/// event whose region covers the longest run of consecutive entries wins,
/// earlier declarations breaking ties.
Projection project(const Trace& trace, std::span<const EventDef> events);

struct Conformance {
  bool ok = true;
  std::optional<std::size_t> violation;  // index i of the failing pair (i, i+1)
  std::string message;
};

/// Every adjacent pair of the projection must be a behavior edge, or, with
/// transitive set, connected by a path.
Conformance conforms(const Projection& projection, const BehaviorModel& behavior,
                     bool transitive = false);

}  // namespace thimac
