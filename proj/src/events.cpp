#include "thimac/events.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace thimac {

EventDef define_event(const StaticModel& model, const std::string& name,
                      std::span<const StageId> region,
                      const std::optional<TimeSubthimac>& time) {
  if (region.empty()) throw Error(Errc::EmptyRegion, "event " + name + " has no stages");
  if (time && (time->start < 0 || time->start > time->end))
    throw Error(Errc::InvalidTime, "event " + name + " has an inverted or negative interval");

  Region r = subdiagram(model, region);
  if (!r.connected)
    throw Error(Errc::DisconnectedRegion, "event " + name + " region is not connected");
  return EventDef{name, name, std::move(r.stages), time};
}

std::string encode_actions(std::span<const ActionKind> seq) {
  std::string out;
  out.reserve(seq.size());
  for (ActionKind k : seq) out.push_back(kind_letter(k));
  return out;
}

bool is_legal_chain(std::span<const ActionKind> seq) {
  for (std::size_t i = 1; i < seq.size(); ++i)
    if (!legal_successor(seq[i - 1], seq[i], chain_scope(seq[i - 1], seq[i]))) return false;
  return true;
}

std::vector<ActionKind> decode_actions(std::string_view code) {
  // Candidate kinds per position.
  std::vector<std::vector<ActionKind>> options;
  options.reserve(code.size());
  for (std::size_t i = 0; i < code.size(); ++i) {
    switch (code[i]) {
      case 'C': options.push_back({ActionKind::Create}); break;
      case 'P': options.push_back({ActionKind::Process}); break;
      case 'T': options.push_back({ActionKind::Transfer}); break;
      case 'R': options.push_back({ActionKind::Release, ActionKind::Receive}); break;
      default:
        throw Error(Errc::InvalidLetter, "'" + std::string(1, code[i]) + "' at position " +
                                             std::to_string(i + 1) + " is not one of C P R T");
    }
  }
  if (code.empty()) return {};

  // Forward pass: number of legal readings ending in each option, capped at 2,
  // plus a back-pointer for reconstruction of the unique reading.
  struct Cell {
    int count = 0;
    int back = -1;
  };
  std::vector<std::vector<Cell>> table(code.size());
  for (std::size_t j = 0; j < options[0].size(); ++j) table[0].push_back({1, -1});
  for (std::size_t i = 1; i < code.size(); ++i) {
    for (ActionKind cur : options[i]) {
      Cell cell;
      for (std::size_t p = 0; p < options[i - 1].size(); ++p) {
        ActionKind prev = options[i - 1][p];
        const Cell& pc = table[i - 1][p];
        if (pc.count == 0 || !legal_successor(prev, cur, chain_scope(prev, cur))) continue;
        cell.count = std::min(2, cell.count + pc.count);
        cell.back = static_cast<int>(p);
      }
      table[i].push_back(cell);
    }
  }

  int total = 0;
  int last = -1;
  for (std::size_t j = 0; j < table.back().size(); ++j) {
    if (table.back()[j].count == 0) continue;
    total += table.back()[j].count;
    last = static_cast<int>(j);
  }
  if (total == 0)
    throw Error(Errc::NoLegalReading, "'" + std::string(code) + "' has no legal reading");
  if (total > 1)
    throw Error(Errc::AmbiguousReading,
                "'" + std::string(code) + "' reads as more than one legal chain");

  std::vector<ActionKind> out(code.size());
  for (std::size_t i = code.size(); i-- > 0;) {
    out[i] = options[i][static_cast<std::size_t>(last)];
    last = table[i][static_cast<std::size_t>(last)].back;
  }
  return out;
}

std::vector<ActionKind> event_action_sequence(const StaticModel& model, const EventDef& event) {
  std::set<StageId> members(event.region.begin(), event.region.end());
  std::map<StageId, StageId> next;
  std::map<StageId, int> indegree;
  std::size_t edges = 0;
  for (const auto& f : model.flows()) {
    if (!members.contains(f.from) || !members.contains(f.to)) continue;
    if (next.contains(f.from) || ++indegree[f.to] > 1)
      throw Error(Errc::NonLinearRegion, "event " + event.id + " branches at " +
                                             (next.contains(f.from) ? f.from : f.to).str());
    next.emplace(f.from, f.to);
    ++edges;
  }
  if (edges + 1 != members.size())
    throw Error(Errc::NonLinearRegion, "event " + event.id + " is not a single flow chain");

  auto head = std::find_if(members.begin(), members.end(),
                           [&](const StageId& s) { return !indegree.contains(s); });
  if (head == members.end())
    throw Error(Errc::NonLinearRegion, "event " + event.id + " flows in a cycle");

  std::vector<ActionKind> seq;
  std::optional<StageId> cur = *head;
  while (cur) {
    seq.push_back(model.stage(*cur).kind);
    auto it = next.find(*cur);
    cur = it == next.end() ? std::nullopt : std::optional<StageId>(it->second);
    if (seq.size() > members.size())
      throw Error(Errc::NonLinearRegion, "event " + event.id + " flows in a cycle");
  }
  if (seq.size() != members.size())
    throw Error(Errc::NonLinearRegion, "event " + event.id + " is not a single flow chain");
  return seq;
}

std::vector<EventDef> decompose(const EventDef& event) {
  if (event.region.size() == 1) return {event};
  std::vector<EventDef> out;
  out.reserve(event.region.size());
  for (const auto& s : event.region)
    out.push_back(EventDef{event.id + "/" + s.str(), event.name, {s}, event.time});
  return out;
}

BehaviorModel build_behavior(const std::string& name, std::span<const std::string> events,
                             std::span<const std::pair<std::string, std::string>> edges) {
  std::set<std::string> declared(events.begin(), events.end());
  BehaviorModel b{name, {events.begin(), events.end()}, {}};
  for (const auto& [from, to] : edges) {
    for (const auto* e : {&from, &to})
      if (!declared.contains(*e)) throw Error(Errc::UnknownEvent, "no event '" + *e + "'");
    if (from == to) throw Error(Errc::SelfLoop, from + " -> " + to);
    b.edges.emplace_back(from, to);
  }
  return b;
}

namespace {

bool has_cycle(const BehaviorModel& b) {
  std::map<std::string, std::vector<std::string>> adj;
  for (const auto& [f, t] : b.edges) adj[f].push_back(t);
  std::map<std::string, int> color;  // 0 white, 1 grey, 2 black
  auto visit = [&](auto&& self, const std::string& v) -> bool {
    color[v] = 1;
    for (const auto& w : adj[v]) {
      if (color[w] == 1) return true;
      if (color[w] == 0 && self(self, w)) return true;
    }
    color[v] = 2;
    return false;
  };
  for (const auto& e : b.events)
    if (color[e] == 0 && visit(visit, e)) return true;
  return false;
}

}  // namespace

std::vector<Diagnostic> check_behavior(const StaticModel& model,
                                       std::span<const EventDef> events,
                                       const BehaviorModel& behavior) {
  std::map<std::string, const EventDef*> by_id;
  for (const auto& e : events) by_id[e.id] = &e;
  std::vector<Diagnostic> out;

  for (const auto& [from, to] : behavior.edges) {
    auto fi = by_id.find(from);
    auto ti = by_id.find(to);
    if (fi == by_id.end() || ti == by_id.end()) continue;
    std::set<StageId> src(fi->second->region.begin(), fi->second->region.end());
    std::set<StageId> dst(ti->second->region.begin(), ti->second->region.end());
    bool linked = std::any_of(model.flows().begin(), model.flows().end(), [&](const Flow& f) {
      return src.contains(f.from) && dst.contains(f.to);
    }) || std::any_of(model.triggers().begin(), model.triggers().end(), [&](const Trigger& t) {
      return src.contains(t.from) && dst.contains(t.to);
    });
    if (!linked)
      out.push_back({"B1", Severity::Warning, from + "->" + to,
                     "no flow or trigger leads from " + from + "'s region into " + to + "'s"});
  }

  // Sources have successors but no predecessors; everything else must be
  // reachable from one of them.
  std::map<std::string, std::vector<std::string>> adj;
  std::set<std::string> has_pred, has_succ;
  for (const auto& [f, t] : behavior.edges) {
    adj[f].push_back(t);
    has_succ.insert(f);
    has_pred.insert(t);
  }
  std::set<std::string> reached;
  std::vector<std::string> stack;
  for (const auto& e : behavior.events)
    if (has_succ.contains(e) && !has_pred.contains(e)) {
      reached.insert(e);
      stack.push_back(e);
    }
  while (!stack.empty()) {
    auto v = stack.back();
    stack.pop_back();
    for (const auto& w : adj[v])
      if (reached.insert(w).second) stack.push_back(w);
  }
  for (const auto& e : behavior.events)
    if (!reached.contains(e))
      out.push_back({"B2", Severity::Warning, e, "event is not reachable from any source event"});

  if (has_cycle(behavior))
    out.push_back({"B3", Severity::Warning, behavior.name, "chronology contains a cycle"});

  std::sort(out.begin(), out.end());
  return out;
}

RegionDelta event_moved(const EventDef& before, const EventDef& after) {
  std::set<StageId> b(before.region.begin(), before.region.end());
  std::set<StageId> a(after.region.begin(), after.region.end());
  RegionDelta d;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(d.entered));
  std::set_difference(b.begin(), b.end(), a.begin(), a.end(), std::back_inserter(d.left));
  std::set_intersection(b.begin(), b.end(), a.begin(), a.end(), std::back_inserter(d.retained));
  return d;
}

std::string behavior_dot(const BehaviorModel& behavior) {
  std::ostringstream os;
  os << "digraph \"" << behavior.name << "\" {\n  rankdir=LR;\n  node [shape=ellipse];\n";
  for (const auto& e : behavior.events) os << "  \"" << e << "\";\n";
  for (const auto& [f, t] : behavior.edges) os << "  \"" << f << "\" -> \"" << t << "\";\n";
  os << "}\n";
  return os.str();
}

}  // namespace thimac
