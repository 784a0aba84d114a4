import json

import pytest

from relmach import io
from relmach.automata import Dfa
from relmach.diagram import Box, Feedback, FeedbackZ, Seq
from relmach.dot import to_dot
from relmach.relcore import Alphabet, MachineError, obj, rel
from relmach.sofic import presentation
from relmach.transducer import lift_transducer

Ab = Alphabet("A", ("a", "b"))
Q2 = Alphabet("Q", ("q0", "q1"))
SWAP_REL = rel(obj(Ab), obj(Ab), {(("a",), ("b",)), (("b",), ("a",))})


def test_unknown_kind_rejected():
    with pytest.raises(MachineError):
        io.from_payload({"kind": "widget"})


def test_dfa_payload_validates_determinism():
    payload = {
        "kind": "dfa",
        "alphabet": {"name": "A", "elements": ["a"]},
        "states": {"name": "Q", "elements": ["0", "1"]},
        "trans": [["0", "a", "0"], ["0", "a", "1"]],
        "initial": ["0"],
        "final": [],
    }
    with pytest.raises(MachineError):
        io.from_payload(payload)


def test_kind_consistency_for_diagram_terms():
    d = Feedback(Q2, frozenset(), frozenset(), Box(rel(obj(Ab, Q2), obj(Ab, Q2), set())))
    payload = io.to_payload(d)
    assert payload["kind"] == "diagram"
    zd = FeedbackZ(Q2, Box(rel(obj(Ab, Q2), obj(Ab, Q2), set())))
    assert io.to_payload(zd)["kind"] == "zdiagram"
    broken = dict(io.to_payload(zd), kind="diagram")
    with pytest.raises(MachineError):
        io.from_payload(broken)


def test_words_serialize_as_symbol_arrays():
    greek = Alphabet("greek", ("alpha", "beta"))
    r = rel(obj(greek), obj(greek), {(("alpha",), ("beta",))})
    payload = io.to_payload(r)
    assert payload["pairs"] == [[["alpha"], ["beta"]]]


def test_canonical_ordering_is_alphabet_order():
    # states deliberately not in sorted-string order
    weird = Alphabet("Q", ("z", "a"))
    p = presentation(Ab, weird, {("z", "a", "a"), ("a", "b", "z")})
    payload = io.to_payload(p)
    assert payload["trans"] == [["z", "a", "a"], ["a", "b", "z"]]


def test_dumps_is_canonical_json():
    text = io.dumps(SWAP_REL)
    assert text == io.dumps(io.loads(text))
    parsed = json.loads(text)
    assert list(parsed) == sorted(parsed)


def test_dot_outputs():
    assert "digraph" in to_dot(lift_transducer(SWAP_REL))
    assert "a / b" in to_dot(lift_transducer(SWAP_REL))
    d = Seq(Box(SWAP_REL), Box(SWAP_REL))
    assert to_dot(d).count("seq") == 1
    p = presentation(Ab, Q2, {("q0", "a", "q1")}, root="q0")
    assert "color=red" in to_dot(p)
    with pytest.raises(MachineError):
        to_dot(object())


def test_dfa_round_trip_keeps_class():
    d = Dfa(Ab, Q2, frozenset({("q0", "a", "q1")}), frozenset({"q0"}), frozenset({"q1"}))
    assert isinstance(io.loads(io.dumps(d)), Dfa)
