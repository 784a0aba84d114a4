"""JSON interchange for every machine kind.

Each file is a single JSON document with a top-level ``kind`` tag.  Output
is canonical: object keys are sorted, words are arrays of symbol names,
and every array of symbols, pairs, or transitions is sorted in the
canonical order of its alphabets, so serialization is deterministic and
round-trip stable.
"""

from __future__ import annotations

import json

from .automata import Dfa, Nfa
from .diagram import Box, Diagram, Feedback, FeedbackZ, Id, Par, Seq, Swap, _contains_node
from .relcore import Alphabet, MachineError, Obj, Rel
from .simulation import SimCertificate, SimReport
from .sofic import Presentation, ZTransducer, presentation, ztransducer
from .transducer import Transducer, UniformRelationSample, transducer

KINDS = (
    "alphabet", "relation", "transducer", "nfa", "dfa",
    "presentation", "ztransducer", "diagram", "zdiagram", "certificate",
)


def _alphabet_payload(a: Alphabet) -> dict:
    return {"name": a.name, "elements": list(a.elements)}


def _parse_alphabet(p: dict) -> Alphabet:
    return Alphabet(p["name"], tuple(p["elements"]))


def _obj_payload(o: Obj) -> list:
    return [_alphabet_payload(w) for w in o.wires]


def _parse_obj(p: list) -> Obj:
    return Obj(tuple(_parse_alphabet(w) for w in p))


def _rel_payload(r: Rel) -> dict:
    return {
        "dom": _obj_payload(r.dom),
        "cod": _obj_payload(r.cod),
        "pairs": [[list(x), list(y)] for x, y in r.sorted_pairs()],
    }


def _parse_rel(p: dict) -> Rel:
    return Rel(
        _parse_obj(p["dom"]), _parse_obj(p["cod"]),
        frozenset((tuple(x), tuple(y)) for x, y in p["pairs"]),
    )


def _transducer_payload(t: Transducer) -> dict:
    return {
        "input": _alphabet_payload(t.input),
        "output": _alphabet_payload(t.output),
        "states": _alphabet_payload(t.states),
        "trans": [list(q) for q in t.sorted_quads()],
        "initial": t.states.sort(t.initial),
        "final": t.states.sort(t.final),
    }


def _parse_transducer(p: dict) -> Transducer:
    return transducer(
        _parse_alphabet(p["input"]), _parse_alphabet(p["output"]),
        _parse_alphabet(p["states"]),
        {tuple(q) for q in p["trans"]},
        p["initial"], p["final"],
    )


def _nfa_payload(n: Nfa) -> dict:
    return {
        "alphabet": _alphabet_payload(n.alphabet),
        "states": _alphabet_payload(n.states),
        "trans": [list(t) for t in n.sorted_trans()],
        "initial": n.states.sort(n.initial),
        "final": n.states.sort(n.final),
    }


def _parse_nfa(p: dict, cls=Nfa) -> Nfa:
    return cls(
        _parse_alphabet(p["alphabet"]), _parse_alphabet(p["states"]),
        frozenset(tuple(t) for t in p["trans"]),
        frozenset(p["initial"]), frozenset(p["final"]),
    )


def _presentation_payload(p: Presentation) -> dict:
    out = {
        "alphabet": _alphabet_payload(p.alphabet),
        "states": _alphabet_payload(p.states),
        "trans": [list(t) for t in p.sorted_trans()],
    }
    if p.root is not None:
        out["root"] = p.root
    return out


def _parse_presentation(p: dict) -> Presentation:
    return presentation(
        _parse_alphabet(p["alphabet"]), _parse_alphabet(p["states"]),
        {tuple(t) for t in p["trans"]}, p.get("root"),
    )


def _ztransducer_payload(z: ZTransducer) -> dict:
    t = Transducer(z.input, z.output, z.states, z.trans, frozenset(), frozenset())
    return {
        "input": _alphabet_payload(z.input),
        "output": _alphabet_payload(z.output),
        "states": _alphabet_payload(z.states),
        "trans": [list(q) for q in t.sorted_quads()],
    }


def _parse_ztransducer(p: dict) -> ZTransducer:
    return ztransducer(
        _parse_alphabet(p["input"]), _parse_alphabet(p["output"]),
        _parse_alphabet(p["states"]),
        {tuple(q) for q in p["trans"]},
    )


def _term_payload(d: Diagram) -> dict:
    match d:
        case Box(rel=r):
            return {"node": "box", "rel": _rel_payload(r)}
        case Id(o=o):
            return {"node": "id", "obj": _obj_payload(o)}
        case Swap(a=a, b=b):
            return {"node": "swap", "a": _alphabet_payload(a), "b": _alphabet_payload(b)}
        case Seq(first=f, second=s):
            return {"node": "seq", "first": _term_payload(f), "second": _term_payload(s)}
        case Par(left=l, right=r):
            return {"node": "par", "left": _term_payload(l), "right": _term_payload(r)}
        case Feedback(wire=w, initial=i, final=f, body=b):
            return {
                "node": "feedback",
                "wire": _alphabet_payload(w),
                "initial": w.sort(i),
                "final": w.sort(f),
                "body": _term_payload(b),
            }
        case FeedbackZ(wire=w, body=b):
            return {"node": "feedback-z", "wire": _alphabet_payload(w), "body": _term_payload(b)}
    raise MachineError(f"not a diagram: {d!r}")


def _parse_term(p: dict) -> Diagram:
    node = p["node"]
    if node == "box":
        return Box(_parse_rel(p["rel"]))
    if node == "id":
        return Id(_parse_obj(p["obj"]))
    if node == "swap":
        return Swap(_parse_alphabet(p["a"]), _parse_alphabet(p["b"]))
    if node == "seq":
        return Seq(_parse_term(p["first"]), _parse_term(p["second"]))
    if node == "par":
        return Par(_parse_term(p["left"]), _parse_term(p["right"]))
    if node == "feedback":
        wire = _parse_alphabet(p["wire"])
        return Feedback(wire, frozenset(p["initial"]), frozenset(p["final"]),
                        _parse_term(p["body"]))
    if node == "feedback-z":
        return FeedbackZ(_parse_alphabet(p["wire"]), _parse_term(p["body"]))
    raise MachineError(f"unknown diagram node {node!r}")


def _certificate_payload(c: SimCertificate) -> dict:
    return {"mode": c.mode, "s": _rel_payload(c.s)}


def _parse_certificate(p: dict) -> SimCertificate:
    return SimCertificate(_parse_rel(p["s"]), p["mode"])


def sample_payload(s: UniformRelationSample) -> dict:
    return {
        "kind": "sample",
        "input": _alphabet_payload(s.input),
        "output": _alphabet_payload(s.output),
        "max_len": s.max_len,
        "pairs": [[list(w), list(v)] for w, v in s.sorted_pairs()],
    }


def report_payload(r: SimReport) -> dict:
    out: dict = {"kind": "sim-report", "verdict": r.verdict}
    if r.failed_condition is not None:
        out["failed_condition"] = r.failed_condition
        out["witness"] = [list(part) for part in r.witness]
    return out


def to_payload(x) -> dict:
    if isinstance(x, Alphabet):
        return {"kind": "alphabet", **_alphabet_payload(x)}
    if isinstance(x, Rel):
        return {"kind": "relation", **_rel_payload(x)}
    if isinstance(x, Transducer):
        return {"kind": "transducer", **_transducer_payload(x)}
    if isinstance(x, Dfa):
        return {"kind": "dfa", **_nfa_payload(x)}
    if isinstance(x, Nfa):
        return {"kind": "nfa", **_nfa_payload(x)}
    if isinstance(x, Presentation):
        return {"kind": "presentation", **_presentation_payload(x)}
    if isinstance(x, ZTransducer):
        return {"kind": "ztransducer", **_ztransducer_payload(x)}
    if isinstance(x, SimCertificate):
        return {"kind": "certificate", **_certificate_payload(x)}
    if isinstance(x, (Box, Id, Swap, Seq, Par, Feedback, FeedbackZ)):
        kind = "zdiagram" if _contains_node(x, FeedbackZ) else "diagram"
        return {"kind": kind, "term": _term_payload(x)}
    raise MachineError(f"cannot serialize {type(x).__name__}")


def from_payload(p: dict):
    kind = p.get("kind")
    if kind == "alphabet":
        return _parse_alphabet(p)
    if kind == "relation":
        return _parse_rel(p)
    if kind == "transducer":
        return _parse_transducer(p)
    if kind == "nfa":
        return _parse_nfa(p, Nfa)
    if kind == "dfa":
        return _parse_nfa(p, Dfa)
    if kind == "presentation":
        return _parse_presentation(p)
    if kind == "ztransducer":
        return _parse_ztransducer(p)
    if kind in ("diagram", "zdiagram"):
        term = _parse_term(p["term"])
        has_z = _contains_node(term, FeedbackZ)
        if kind == "zdiagram" and _contains_node(term, Feedback):
            raise MachineError("zdiagram contains labelled feedback")
        if kind == "diagram" and has_z:
            raise MachineError("diagram contains unlabelled feedback")
        return term
    if kind == "certificate":
        return _parse_certificate(p)
    raise MachineError(f"unknown kind {kind!r}")


def dumps(x) -> str:
    payload = x if isinstance(x, dict) else to_payload(x)
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def loads(text: str):
    return from_payload(json.loads(text))


def save_file(path, x) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(x))


def load_file(path):
    with open(path, encoding="utf-8") as fh:
        return from_payload(json.load(fh))


def kind_of_file(path) -> str:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh).get("kind", "?")
