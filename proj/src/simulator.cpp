#include "thimac/simulator.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <sstream>

namespace thimac {

namespace {

[[noreturn]] void bad_scenario(std::size_t line, const std::string& msg) {
  throw Error(Errc::InvalidScenario, "line " + std::to_string(line) + ": " + msg);
}

std::optional<long long> to_integer(std::string_view s) {
  long long v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
  return v;
}

const Stage* resolve_stage_ref(const StaticModel& model, const std::string& ref) {
  auto dot = ref.rfind('.');
  if (dot == std::string::npos) return nullptr;
  return model.resolve_stage(ThimacId(ref.substr(0, dot)), ref.substr(dot + 1));
}

bool gated(const StaticModel& model, const Stage& stage) {
  return stage.kind != ActionKind::Create && !model.incoming_triggers(stage.id).empty();
}

// Default branch order: anchored flows by anchor, then declaration order.
const Flow* default_flow(std::vector<const Flow*> out) {
  std::stable_sort(out.begin(), out.end(), [](const Flow* a, const Flow* b) {
    if (a->anchor.has_value() != b->anchor.has_value()) return a->anchor.has_value();
    return a->anchor.value_or(0) < b->anchor.value_or(0);
  });
  return out.front();
}

}  // namespace

Scenario parse_scenario(const StaticModel& model, std::string_view text) {
  Scenario sc;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream words(raw);
    std::vector<std::string> w;
    for (std::string s; words >> s;) w.push_back(s);
    if (w.empty()) continue;

    if (w[0] == "inject") {
      if (w.size() != 4) bad_scenario(lineno, "expected: inject <tick> <thimac-path> <label>");
      auto tick = to_integer(w[1]);
      if (!tick || *tick < 0) bad_scenario(lineno, "tick must be a non-negative integer");
      if (!model.find_thimac(ThimacId(w[2]))) bad_scenario(lineno, "no thimac '" + w[2] + "'");
      if (!model.stage_of(ThimacId(w[2]), ActionKind::Create))
        bad_scenario(lineno, w[2] + " has no create stage");
      sc.injections.push_back({*tick, ThimacId(w[2]), w[3]});
    } else if (w[0] == "choose") {
      if (w.size() != 4)
        bad_scenario(lineno, "expected: choose <stage-ref> <occurrence> <flow-anchor-or-id>");
      const Stage* stage = resolve_stage_ref(model, w[1]);
      if (!stage) bad_scenario(lineno, "unknown stage '" + w[1] + "'");
      auto occurrence = to_integer(w[2]);
      if (!occurrence || *occurrence < 0)
        bad_scenario(lineno, "occurrence must be a non-negative integer");
      const Flow* chosen = nullptr;
      auto out = model.outgoing_flows(stage->id);
      if (auto anchor = to_integer(w[3])) {
        for (const Flow* f : out) {
          if (f->anchor != *anchor) continue;
          if (chosen) bad_scenario(lineno, "anchor " + w[3] + " is ambiguous at " + w[1]);
          chosen = f;
        }
      } else {
        for (const Flow* f : out)
          if (f->id.str() == w[3]) chosen = f;
      }
      if (!chosen) bad_scenario(lineno, "no flow '" + w[3] + "' leaves " + w[1]);
      sc.choices[{stage->id, static_cast<std::size_t>(*occurrence)}] = chosen->id;
    } else if (w[0] == "max") {
      auto ticks = w.size() == 2 ? to_integer(w[1]) : std::nullopt;
      if (!ticks || *ticks <= 0) bad_scenario(lineno, "expected: max <positive ticks>");
      sc.max_ticks = *ticks;
    } else {
      bad_scenario(lineno, "unknown directive '" + w[0] + "'");
    }
  }
  check_scenario(model, sc);
  return sc;
}

void check_scenario(const StaticModel& model, const Scenario& scenario) {
  if (scenario.max_ticks <= 0) throw Error(Errc::InvalidScenario, "max_ticks must be positive");
  for (const auto& inj : scenario.injections) {
    if (inj.tick < 0) throw Error(Errc::InvalidScenario, "negative injection tick");
    if (!model.find_thimac(inj.thimac))
      throw Error(Errc::InvalidScenario, "no thimac '" + inj.thimac.str() + "'");
    if (!model.stage_of(inj.thimac, ActionKind::Create))
      throw Error(Errc::InvalidScenario, inj.thimac.str() + " has no create stage");
  }
  for (const auto& [key, flow] : scenario.choices) {
    const Flow* f = model.find_flow(flow);
    if (!f || f->from != key.first)
      throw Error(Errc::InvalidScenario,
                  "chosen flow '" + flow.str() + "' does not leave " + key.first.str());
  }
}

SimState::SimState(Scenario s) : scenario(std::move(s)) {
  std::stable_sort(scenario.injections.begin(), scenario.injections.end(),
                   [](const Injection& a, const Injection& b) { return a.tick < b.tick; });
}

bool SimState::quiescent() const {
  if (next_injection < scenario.injections.size() || !activations.empty()) return false;
  return std::none_of(status.begin(), status.end(),
                      [](ThingStatus s) { return s == ThingStatus::Moving; });
}

std::vector<GenericEventInstance> step(const StaticModel& model, SimState& st) {
  const Tick now = st.tick;
  std::vector<GenericEventInstance> emitted;

  auto enter = [&](std::size_t i, const StageId& target) {
    const Stage& s = model.stage(target);
    st.things[i].location = target;
    st.entered_at[i] = now;
    st.waiting_on[i].reset();
    st.status[i] = model.outgoing_flows(target).empty() ? ThingStatus::Resting : ThingStatus::Moving;
    emitted.push_back({st.things[i].id, st.things[i].label, target, s.kind, {now, now + 1}});
    for (const Trigger* t : model.outgoing_triggers(target)) st.activations.emplace_back(now + 1, t->to);
  };

  auto bear = [&](const StageId& create, const std::string& label) {
    st.things.push_back({"t" + std::to_string(st.things.size() + 1), label, now, create});
    st.status.push_back(ThingStatus::Moving);
    st.waiting_on.emplace_back();
    st.entered_at.push_back(now);
    enter(st.things.size() - 1, create);
  };

  const auto& injections = st.scenario.injections;
  while (st.next_injection < injections.size() && injections[st.next_injection].tick <= now) {
    const Injection& inj = injections[st.next_injection++];
    const Stage* create = model.stage_of(inj.thimac, ActionKind::Create);
    if (!create) throw Error(Errc::InvalidScenario, inj.thimac.str() + " has no create stage");
    bear(create->id, inj.label);
  }

  std::vector<StageId> due;
  std::erase_if(st.activations, [&](const auto& a) {
    if (a.first > now) return false;
    due.push_back(a.second);
    return true;
  });
  const std::size_t existing = st.things.size();
  for (const auto& target : due) {
    const Stage& s = model.stage(target);
    if (s.kind == ActionKind::Create) {
      bear(target, model.thimac(s.owner).name);
      continue;
    }
    bool admitted = false;
    for (std::size_t i = 0; i < existing && !admitted; ++i) {
      if (st.status[i] != ThingStatus::Waiting || !st.waiting_on[i]) continue;
      if (model.flow(*st.waiting_on[i]).to != target) continue;
      enter(i, target);
      admitted = true;
    }
    if (!admitted) ++st.latches[target];
  }

  for (std::size_t i = 0; i < existing; ++i) {
    if (st.status[i] != ThingStatus::Moving || st.entered_at[i] >= now) continue;
    const StageId& here = st.things[i].location;
    std::size_t occurrence = st.departures[here]++;
    const Flow* flow = nullptr;
    if (auto it = st.scenario.choices.find({here, occurrence}); it != st.scenario.choices.end())
      flow = &model.flow(it->second);
    else
      flow = default_flow(model.outgoing_flows(here));

    const Stage& target = model.stage(flow->to);
    if (gated(model, target)) {
      int& latch = st.latches[target.id];
      if (latch == 0) {
        st.status[i] = ThingStatus::Waiting;
        st.waiting_on[i] = flow->id;
        continue;
      }
      --latch;
    }
    enter(i, target.id);
  }

  std::stable_sort(emitted.begin(), emitted.end(),
                   [](const auto& a, const auto& b) { return a.stage < b.stage; });
  ++st.tick;
  return emitted;
}

Trace run(const StaticModel& model, const Scenario& scenario) {
  check_scenario(model, scenario);
  SimState st(scenario);
  Trace trace;
  while (!st.quiescent() && st.tick < st.scenario.max_ticks) {
    auto emitted = step(model, st);
    trace.entries.insert(trace.entries.end(), emitted.begin(), emitted.end());
  }
  if (st.quiescent()) {
    for (std::size_t i = 0; i < st.things.size(); ++i) {
      if (st.status[i] != ThingStatus::Waiting) continue;
      const Flow& f = model.flow(*st.waiting_on[i]);
      throw Error(Errc::StuckThing, "at tick " + std::to_string(st.tick - 1) + ", " +
                                        st.things[i].label + " waits at " + f.from.str() +
                                        " for " + f.to.str() + " to be triggered");
    }
  }
  trace.final_tick = st.tick;
  return trace;
}

std::string format_trace(const Trace& trace) {
  std::ostringstream os;
  for (const auto& e : trace.entries)
    os << e.time.start << " " << e.label << " " << e.stage.str() << " " << kind_name(e.kind)
       << "\n";
  return os.str();
}

std::vector<std::string> Projection::event_sequence() const {
  std::vector<std::string> out;
  for (const auto& o : occurrences) out.push_back(o.event);
  return out;
}

Projection project(const Trace& trace, std::span<const EventDef> events) {
  std::vector<std::set<StageId>> regions;
  for (const auto& e : events) regions.emplace_back(e.region.begin(), e.region.end());

  Projection p;
  const auto& entries = trace.entries;
  std::size_t i = 0;
  while (i < entries.size()) {
    std::size_t best = 0, best_len = 0;
    for (std::size_t e = 0; e < regions.size(); ++e) {
      std::size_t len = 0;
      while (i + len < entries.size() && regions[e].contains(entries[i + len].stage)) ++len;
      if (len > best_len) {
        best = e;
        best_len = len;
      }
    }
    if (best_len == 0) {
      p.uncovered.push_back(i++);
      continue;
    }
    p.occurrences.push_back(
        {events[best].id, {entries[i].time.start, entries[i + best_len - 1].time.end}});
    i += best_len;
  }
  return p;
}

Conformance conforms(const Projection& projection, const BehaviorModel& behavior,
                     bool transitive) {
  std::set<std::string> known(behavior.events.begin(), behavior.events.end());
  for (const auto& o : projection.occurrences)
    if (!known.contains(o.event))
      throw Error(Errc::UnknownEventInProjection,
                  "'" + o.event + "' is not declared in behavior " + behavior.name);

  std::map<std::string, std::vector<std::string>> adj;
  for (const auto& [f, t] : behavior.edges) adj[f].push_back(t);
  auto reaches = [&](const std::string& from, const std::string& to) {
    std::set<std::string> seen{from};
    std::vector<std::string> stack{from};
    while (!stack.empty()) {
      auto v = stack.back();
      stack.pop_back();
      for (const auto& w : adj[v]) {
        if (w == to) return true;
        if (transitive && seen.insert(w).second) stack.push_back(w);
      }
    }
    return false;
  };

  const auto& occ = projection.occurrences;
  for (std::size_t i = 0; i + 1 < occ.size(); ++i) {
    if (reaches(occ[i].event, occ[i + 1].event)) continue;
    return {false, i,
            "(" + occ[i].event + ", " + occ[i + 1].event + ") is not a chronology edge of " +
                behavior.name};
  }
  return {};
}

}  // namespace thimac
