#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "thimac/dsl.hpp"
#include "thimac/error.hpp"
#include "thimac/events.hpp"
#include "thimac/simulator.hpp"
#include "thimac/validator.hpp"

namespace py = pybind11;
using namespace thimac;

namespace {

std::vector<StageId> stage_ids(const std::vector<std::string>& ids) {
  return {ids.begin(), ids.end()};
}

std::vector<std::string> strings(const auto& ids) {
  std::vector<std::string> out;
  for (const auto& id : ids) out.push_back(id.str());
  return out;
}

std::optional<TimeSubthimac> to_time(const std::optional<std::pair<Tick, Tick>>& t) {
  if (!t) return std::nullopt;
  return TimeSubthimac{t->first, t->second};
}

py::object time_tuple(const std::optional<TimeSubthimac>& t) {
  if (!t) return py::none();
  return py::make_tuple(t->start, t->end);
}

Document parse_or_raise(const std::string& text, const std::optional<std::string>& path) {
  ParseResult r = parse(SourceDocument{text, path});
  if (r.ok()) return std::move(*r.document);
  std::string msg;
  for (const auto& d : r.diagnostics) msg += (msg.empty() ? "" : "\n") + format_diagnostic(d, path);
  throw py::value_error(msg);
}

}  // namespace

PYBIND11_MODULE(_thimac, m) {
  m.doc() = "Thinging-machine models: parse, validate, segment into events and simulate.";

  // Never destroyed: the interpreter owns the type for the process lifetime.
  static auto* thimac_error = new py::object(py::exception<Error>(m, "ThimacError", PyExc_ValueError));
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = (*thimac_error)(e.what());
      exc.attr("code") = std::string(errc_name(e.code()));
      exc.attr("detail") = e.detail();
      PyErr_SetObject(thimac_error->ptr(), exc.ptr());
    }
  });

  py::enum_<ActionKind>(m, "ActionKind")
      .value("CREATE", ActionKind::Create)
      .value("PROCESS", ActionKind::Process)
      .value("RELEASE", ActionKind::Release)
      .value("TRANSFER", ActionKind::Transfer)
      .value("RECEIVE", ActionKind::Receive);

  py::enum_<Scope>(m, "Scope")
      .value("SAME_MACHINE", Scope::SameMachine)
      .value("CROSS_MACHINE", Scope::CrossMachine);

  m.def("legal_successor", [](ActionKind a, ActionKind b, Scope s) { return legal_successor(a, b, s); },
        py::arg("from_kind"), py::arg("to_kind"), py::arg("scope"));
  m.def("kind_name", [](ActionKind k) { return std::string(kind_name(k)); });
  m.def("encode_actions", [](const std::vector<ActionKind>& seq) { return encode_actions(seq); });
  m.def("decode_actions", &decode_actions, py::arg("code"));

  py::class_<Diagnostic>(m, "Diagnostic")
      .def_readonly("code", &Diagnostic::code)
      .def_property_readonly("severity", [](const Diagnostic& d) { return std::string(severity_name(d.severity)); })
      .def_readonly("subject", &Diagnostic::subject)
      .def_readonly("message", &Diagnostic::message)
      .def("__repr__", [](const Diagnostic& d) {
        return "<Diagnostic " + d.code + " " + std::string(severity_name(d.severity)) + " " + d.subject + ">";
      });

  py::class_<StaticModel>(m, "StaticModel")
      .def(py::init<>())
      .def("add_thimac",
           [](StaticModel& s, const std::string& name, const std::optional<std::string>& parent) {
             std::optional<ThimacId> p;
             if (parent) p = ThimacId(*parent);
             return s.add_thimac(name, p).str();
           },
           py::arg("name"), py::arg("parent") = py::none())
      .def("add_stage",
           [](StaticModel& s, const std::string& thimac, ActionKind kind, const std::optional<std::string>& alias) {
             return s.add_stage(ThimacId(thimac), kind, alias).str();
           },
           py::arg("thimac"), py::arg("kind"), py::arg("alias") = py::none())
      .def("add_flow",
           [](StaticModel& s, const std::string& from, const std::string& to,
              const std::optional<std::string>& carries, const std::optional<int>& anchor) {
             return s.add_flow(StageId(from), StageId(to), carries, anchor).str();
           },
           py::arg("from_stage"), py::arg("to_stage"), py::arg("carries") = py::none(),
           py::arg("anchor") = py::none())
      .def("add_trigger",
           [](StaticModel& s, const std::string& from, const std::string& to) {
             return s.add_trigger(StageId(from), StageId(to)).str();
           },
           py::arg("from_stage"), py::arg("to_stage"))
      .def_property_readonly("roots", [](const StaticModel& s) { return strings(s.roots()); })
      .def_property_readonly("thimacs",
                             [](const StaticModel& s) {
                               std::vector<std::string> out;
                               for (const auto& t : s.thimacs()) out.push_back(t.id.str());
                               return out;
                             })
      .def_property_readonly("stages",
                             [](const StaticModel& s) {
                               py::list out;
                               for (const auto& st : s.stages())
                                 out.append(py::make_tuple(st.id.str(), st.kind, st.owner.str()));
                               return out;
                             })
      .def_property_readonly("flows",
                             [](const StaticModel& s) {
                               py::list out;
                               for (const auto& f : s.flows())
                                 out.append(py::dict(py::arg("id") = f.id.str(), py::arg("from") = f.from.str(),
                                                     py::arg("to") = f.to.str(), py::arg("carries") = f.carries,
                                                     py::arg("anchor") = f.anchor));
                               return out;
                             })
      .def_property_readonly("triggers",
                             [](const StaticModel& s) {
                               py::list out;
                               for (const auto& t : s.triggers())
                                 out.append(py::make_tuple(t.id.str(), t.from.str(), t.to.str()));
                               return out;
                             })
      .def("is_connected",
           [](const StaticModel& s, const std::vector<std::string>& ids) {
             auto v = stage_ids(ids);
             return subdiagram(s, v).connected;
           },
           py::arg("stages"));

  py::class_<EventDef>(m, "EventDef")
      .def_readonly("id", &EventDef::id)
      .def_readonly("name", &EventDef::name)
      .def_property_readonly("region", [](const EventDef& e) { return strings(e.region); })
      .def_property_readonly("time", [](const EventDef& e) { return time_tuple(e.time); })
      .def("__repr__", [](const EventDef& e) { return "<EventDef " + e.id + ">"; });

  py::class_<BehaviorModel>(m, "BehaviorModel")
      .def_readonly("name", &BehaviorModel::name)
      .def_readonly("events", &BehaviorModel::events)
      .def_readonly("edges", &BehaviorModel::edges);

  py::class_<RegionDelta>(m, "RegionDelta")
      .def_property_readonly("entered", [](const RegionDelta& d) { return strings(d.entered); })
      .def_property_readonly("left", [](const RegionDelta& d) { return strings(d.left); })
      .def_property_readonly("retained", [](const RegionDelta& d) { return strings(d.retained); })
      .def_property_readonly("fuzzy", &RegionDelta::fuzzy);

  py::class_<Document>(m, "Document")
      .def_readonly("model", &Document::model)
      .def_readonly("events", &Document::events)
      .def_readonly("behaviors", &Document::behaviors)
      .def("event", [](const Document& d, const std::string& id) {
        const EventDef* e = d.find_event(id);
        if (!e) throw py::key_error(id);
        return *e;
      })
      .def("behavior", [](const Document& d, const std::string& name) {
        const BehaviorModel* b = d.find_behavior(name);
        if (!b) throw py::key_error(name);
        return *b;
      });

  m.def("parse", &parse_or_raise, py::arg("text"), py::arg("path") = py::none(),
        "Parse .tm text; raises ValueError listing every diagnostic with its position.");
  m.def("serialize", py::overload_cast<const Document&>(&serialize), py::arg("document"));
  m.def("structurally_equal", &structurally_equal);
  m.def("emit_dot",
        [](const StaticModel& model, const std::optional<std::vector<std::string>>& highlight) {
          std::optional<Region> region;
          if (highlight) {
            auto v = stage_ids(*highlight);
            region = subdiagram(model, v);
          }
          return emit_dot(model, region);
        },
        py::arg("model"), py::arg("highlight") = py::none());

  m.def("validate", &validate, py::arg("model"));
  m.def("check_behavior", [](const Document& d, const BehaviorModel& b) { return check_behavior(d.model, d.events, b); },
        py::arg("document"), py::arg("behavior"));

  m.def("define_event",
        [](const StaticModel& model, const std::string& name, const std::vector<std::string>& region,
           const std::optional<std::pair<Tick, Tick>>& time) {
          auto v = stage_ids(region);
          return define_event(model, name, v, to_time(time));
        },
        py::arg("model"), py::arg("name"), py::arg("region"), py::arg("time") = py::none());
  m.def("event_action_sequence", &event_action_sequence, py::arg("model"), py::arg("event"));
  m.def("decompose", &decompose, py::arg("event"));
  m.def("event_moved", &event_moved, py::arg("before"), py::arg("after"));

  m.def("normalize_verb",
        [](const std::string& verb) {
          py::list out;
          for (const auto& step : normalize_verb(VerbLexicon::shipped(), verb))
            out.append(py::make_tuple(std::string(role_name(step.role)), step.kind));
          return out;
        },
        py::arg("verb"), "Generic decomposition of an ordinary verb as (role, kind) pairs.");

  py::class_<Scenario>(m, "Scenario").def_readwrite("max_ticks", &Scenario::max_ticks);
  m.def("parse_scenario", &parse_scenario, py::arg("model"), py::arg("text"));

  py::class_<Trace>(m, "Trace")
      .def_readonly("final_tick", &Trace::final_tick)
      .def_property_readonly("entries",
                             [](const Trace& t) {
                               py::list out;
                               for (const auto& e : t.entries)
                                 out.append(py::make_tuple(e.time.start, e.label, e.stage.str(), e.kind));
                               return out;
                             })
      .def("__str__", &format_trace);
  m.def("run", &run, py::arg("model"), py::arg("scenario"));

  py::class_<Projection>(m, "Projection")
      .def_property_readonly("occurrences",
                             [](const Projection& p) {
                               py::list out;
                               for (const auto& o : p.occurrences)
                                 out.append(py::make_tuple(o.event, o.time.start, o.time.end));
                               return out;
                             })
      .def_readonly("uncovered", &Projection::uncovered)
      .def("event_sequence", &Projection::event_sequence);
  m.def("project", [](const Trace& t, const std::vector<EventDef>& events) { return project(t, events); },
        py::arg("trace"), py::arg("events"));

  py::class_<Conformance>(m, "Conformance")
      .def_readonly("ok", &Conformance::ok)
      .def_readonly("violation", &Conformance::violation)
      .def_readonly("message", &Conformance::message)
      .def("__bool__", [](const Conformance& c) { return c.ok; });
  m.def("conforms", &conforms, py::arg("projection"), py::arg("behavior"), py::arg("transitive") = false);
}
