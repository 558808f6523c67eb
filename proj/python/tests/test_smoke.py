import os
from pathlib import Path

import pytest

import thimac
from thimac import ActionKind as K

CORPUS = Path(os.environ.get("THIMAC_CORPUS_DIR", Path(__file__).resolve().parents[2] / "corpus"))


def test_codec():
    seq = [K.CREATE, K.RELEASE, K.TRANSFER, K.TRANSFER, K.RECEIVE, K.PROCESS]
    assert thimac.encode_actions(seq) == "CRTTRP"
    assert thimac.decode_actions("CRTTRP") == seq
    with pytest.raises(thimac.ThimacError) as err:
        thimac.decode_actions("R")
    assert err.value.code == "AmbiguousReading"


def test_legality():
    assert thimac.legal_successor(K.TRANSFER, K.TRANSFER, thimac.Scope.CROSS_MACHINE)
    assert not thimac.legal_successor(K.CREATE, K.CREATE, thimac.Scope.SAME_MACHINE)


def test_build_model():
    m = thimac.StaticModel()
    x = m.add_thimac("X")
    c = m.add_stage(x, K.CREATE)
    r = m.add_stage(x, K.RELEASE)
    assert m.add_flow(c, r, carries="thing", anchor=1) == "f1"
    with pytest.raises(thimac.ThimacError) as err:
        m.add_flow(r, c)
    assert err.value.code == "IllegalSuccession"
    assert [d.code for d in thimac.validate(m)] == []


def test_library_corpus():
    doc = thimac.load(CORPUS / "library.tm")
    assert len(doc.model.roots) == 2
    assert len(doc.events) == 27
    assert not [d for d in thimac.validate(doc.model) if d.severity == "error"]
    e1 = doc.event("E1")
    assert thimac.encode_actions(thimac.event_action_sequence(doc.model, e1)) == "CRTTRP"
    assert len(thimac.decompose(e1)) == 6
    again = thimac.parse(thimac.serialize(doc))
    assert thimac.structurally_equal(doc, again)


def test_simulate_add_new_book():
    doc = thimac.load(CORPUS / "library.tm")
    scenario = (CORPUS / "add-new-book.scn").read_text()
    trace, projection, verdict = thimac.simulate(doc, scenario, behavior="main")
    assert projection.event_sequence() == ["E1", "E2", "E3", "E4", "E6", "E7", "E8", "E9", "E10"]
    assert verdict and verdict.ok
    assert trace.entries[0][2] == "Librarian.Request.create"


def test_toast_and_picnic():
    toast = thimac.load(CORPUS / "toast.tm")
    _, projection, verdict = thimac.simulate(toast, (CORPUS / "toast.scn").read_text(), behavior="buttering")
    assert projection.event_sequence() == ["jones_appears", "toast_handled", "butter_handled", "toast_buttered"]
    assert verdict.ok

    picnic = thimac.load(CORPUS / "picnic.tm")
    delta = thimac.event_moved(picnic.event("in_building"), picnic.event("in_garden"))
    assert set(delta.left) == set(picnic.event("in_building").region)
    assert delta.retained == [] and not delta.fuzzy
    assert thimac.event_moved(picnic.event("in_building"), picnic.event("moving")).fuzzy


def test_parse_errors_and_verbs():
    with pytest.raises(ValueError, match=r"1:12: error: SyntaxError"):
        thimac.parse("thimac X { take; }")
    assert thimac.normalize_verb("take") == [
        ("source", K.RELEASE), ("source", K.TRANSFER), ("sink", K.TRANSFER), ("sink", K.RECEIVE)]
    with pytest.raises(thimac.ThimacError):
        thimac.normalize_verb("frobnicate")


def test_dot():
    doc = thimac.load(CORPUS / "toast.tm")
    dot = thimac.emit_dot(doc.model, highlight=doc.event("toast_buttered").region)
    assert dot.startswith("digraph") and "fillcolor" in dot
