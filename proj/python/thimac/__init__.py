"""Thinging-machine modeling toolkit."""

from ._thimac import (
    ActionKind,
    BehaviorModel,
    Conformance,
    Diagnostic,
    Document,
    EventDef,
    Projection,
    RegionDelta,
    Scenario,
    Scope,
    StaticModel,
    ThimacError,
    Trace,
    check_behavior,
    conforms,
    decode_actions,
    decompose,
    define_event,
    emit_dot,
    encode_actions,
    event_action_sequence,
    event_moved,
    kind_name,
    legal_successor,
    normalize_verb,
    parse,
    parse_scenario,
    project,
    run,
    serialize,
    structurally_equal,
    validate,
)


def load(path):
    """Parse a .tm file."""
    with open(path, encoding="utf-8") as f:
        return parse(f.read(), str(path))


def simulate(document, scenario_text, behavior=None, transitive=False):
    """Run a scenario and project the trace; returns (trace, projection, conformance or None)."""
    trace = run(document.model, parse_scenario(document.model, scenario_text))
    projection = project(trace, document.events)
    verdict = None
    if behavior is not None:
        verdict = conforms(projection, document.behavior(behavior), transitive)
    return trace, projection, verdict


__all__ = [name for name in dir() if not name.startswith("_")]
