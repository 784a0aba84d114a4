"""Term language of string diagrams with labelled feedback.

Diagrams are ASTs built from relation boxes, identities, wire swaps,
sequential and parallel composition, and a feedback operator that loops
the last wire of a term back to its input.  In the finite-word language
the feedback carries initial/final label sets; in the bi-infinite variant
it carries none.

Every well-typed term collapses to a quasi-normal form: a single machine
(one relation box under one feedback), computed by structural recursion.
Equivalence of terms is decided exactly by pushing the normal form through
the determinize/minimize pipeline and comparing the canonical machines;
the pipeline's simulation certificates are returned so the decision can be
re-verified independently.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .automata import Dfa, Nfa, iso_check, nfa_to_transducer, transducer_to_nfa
from .relcore import (
    Alphabet,
    MachineError,
    Obj,
    Rel,
    TypeMismatch,
    cap_obj,
    identity,
    is_unit,
    obj,
    pack_obj,
    pack_rel,
    pack_tuple,
    pair_symbol,
    product_alphabet,
    swap as swap_rel,
)
from .simulation import TWO_SIDED, SimCertificate, check_fin, certificate_for_determinization, \
    certificate_for_minimization
from .sofic import ZTransducer, compose_z, presentation_of_ztransducer, presentations_equiv, \
    product_z, ztransducer
from .transducer import (
    Transducer,
    UniformRelationSample,
    behavior_upto,
    compose_transducers,
    finite_shift_at,
    lift_transducer,
    product_transducers,
    transducer,
)


@dataclass(frozen=True)
class Box:
    rel: Rel


@dataclass(frozen=True)
class Id:
    o: Obj


@dataclass(frozen=True)
class Swap:
    a: Alphabet
    b: Alphabet


@dataclass(frozen=True)
class Seq:
    first: "Diagram"
    second: "Diagram"


@dataclass(frozen=True)
class Par:
    left: "Diagram"
    right: "Diagram"


@dataclass(frozen=True)
class Feedback:
    wire: Alphabet
    initial: frozenset[str]
    final: frozenset[str]
    body: "Diagram"

    def __post_init__(self):
        object.__setattr__(self, "initial", self.wire.check_subset(self.initial))
        object.__setattr__(self, "final", self.wire.check_subset(self.final))


@dataclass(frozen=True)
class FeedbackZ:
    wire: Alphabet
    body: "Diagram"


Diagram = Union[Box, Id, Swap, Seq, Par, Feedback, FeedbackZ]


def _feedback_boundary(wire: Alphabet, body: Diagram) -> tuple[Obj, Obj]:
    if is_unit(wire):
        raise TypeMismatch("feedback over the unit wire is not supported")
    db, cb = type_of(body)
    for side, o in (("domain", db), ("codomain", cb)):
        flat = o.flat
        if not flat or flat[-1].elements != wire.elements:
            raise TypeMismatch(
                f"feedback wire {wire.name!r} must be the last {side} wire of the body"
            )
    return Obj(db.flat[:-1]), Obj(cb.flat[:-1])


def type_of(d: Diagram) -> tuple[Obj, Obj]:
    """Domain and codomain of a term, or a :class:`TypeMismatch`."""
    match d:
        case Box(rel=r):
            return r.dom, r.cod
        case Id(o=o):
            return o, o
        case Swap(a=a, b=b):
            return obj(a, b), obj(b, a)
        case Seq(first=f, second=s):
            df, cf = type_of(f)
            ds, cs = type_of(s)
            if cf.signature() != ds.signature():
                raise TypeMismatch("sequential composition of incompatible terms")
            return df, cs
        case Par(left=l, right=r):
            dl, cl = type_of(l)
            dr, cr = type_of(r)
            return dl + dr, cl + cr
        case Feedback(wire=w, body=b) | FeedbackZ(wire=w, body=b):
            return _feedback_boundary(w, b)
    raise MachineError(f"not a diagram: {d!r}")


def _contains_node(d: Diagram, kind) -> bool:
    match d:
        case Seq(first=f, second=s):
            return _contains_node(f, kind) or _contains_node(s, kind)
        case Par(left=l, right=r):
            return _contains_node(l, kind) or _contains_node(r, kind)
        case Feedback(body=b) | FeedbackZ(body=b):
            return isinstance(d, kind) or _contains_node(b, kind)
        case _:
            return isinstance(d, kind)


def node_count(d: Diagram) -> int:
    match d:
        case Seq(first=f, second=s) | Par(left=f, right=s):
            return 1 + node_count(f) + node_count(s)
        case Feedback(body=b) | FeedbackZ(body=b):
            return 1 + node_count(b)
        case _:
            return 1


def _unpackers(o: Obj):
    """Map a packed symbol of ``o`` to its flat tuple, by index."""
    packed = pack_obj(o)
    if is_unit(packed):
        return lambda s: ()
    table = dict(zip(packed.elements, o.tuples())) if len(o.flat) > 1 else None
    if table is None:
        return lambda s: (s,)
    return lambda s: table[s]


def _fold_quads(t_quads, body_dom: Obj, body_cod: Obj, spair):
    """Rewrite body quads, moving the last wire into the state component."""
    prefix_dom = Obj(body_dom.flat[:-1])
    prefix_cod = Obj(body_cod.flat[:-1])
    unpack_in = _unpackers(body_dom)
    unpack_out = _unpackers(body_cod)
    quads = set()
    for x, p, y, p2 in t_quads:
        xt = unpack_in(x)
        yt = unpack_out(y)
        quads.add((
            pack_tuple(prefix_dom, xt[:-1]),
            spair(p, xt[-1]),
            pack_tuple(prefix_cod, yt[:-1]),
            spair(p2, yt[-1]),
        ))
    return pack_obj(prefix_dom), pack_obj(prefix_cod), quads


def _retype(t: Transducer, input: Alphabet, output: Alphabet) -> Transducer:
    """Rename boundary symbols positionally (same cardinality and order)."""
    imap = dict(zip(t.input.elements, input.elements))
    omap = dict(zip(t.output.elements, output.elements))
    quads = {(imap[a], q, omap[b], q2) for a, q, b, q2 in t.quads()}
    return transducer(input, output, t.states, quads, t.initial, t.final)


def normal_form(d: Diagram) -> Transducer:
    """Collapse a finite-word term to its quasi-normal form: a transducer
    over the packed boundary alphabets."""
    match d:
        case Box(rel=r):
            return lift_transducer(pack_rel(r))
        case Id(o=o):
            return lift_transducer(pack_rel(identity(o)))
        case Swap(a=a, b=b):
            return lift_transducer(pack_rel(swap_rel(a, b)))
        case Seq(first=f, second=s):
            type_of(d)
            return compose_transducers(normal_form(f), normal_form(s))
        case Par(left=l, right=r):
            dom, cod = type_of(d)
            t = product_transducers(normal_form(l), normal_form(r))
            return _retype(t, pack_obj(dom), pack_obj(cod))
        case Feedback(wire=w, initial=i, final=f, body=b):
            _feedback_boundary(w, b)
            tb = normal_form(b)
            db, cb = type_of(b)
            states = product_alphabet(tb.states, w)
            spair = pair_symbol(tb.states, w)
            input, output, quads = _fold_quads(tb.quads(), db, cb, spair)
            return transducer(
                input, output, states, quads,
                {spair(p, q) for p in tb.initial for q in i},
                {spair(p, q) for p in tb.final for q in f},
            )
        case FeedbackZ():
            raise TypeMismatch("unlabelled feedback belongs to the bi-infinite language")
    raise MachineError(f"not a diagram: {d!r}")


def z_normal_form(d: Diagram) -> ZTransducer:
    """Collapse a bi-infinite term to its quasi-normal form machine."""
    match d:
        case Box(rel=r):
            t = lift_transducer(pack_rel(r))
            return ztransducer(t.input, t.output, t.states, t.quads())
        case Id(o=o):
            return z_normal_form(Box(identity(o)))
        case Swap(a=a, b=b):
            return z_normal_form(Box(swap_rel(a, b)))
        case Seq(first=f, second=s):
            type_of(d)
            return compose_z(z_normal_form(f), z_normal_form(s))
        case Par(left=l, right=r):
            dom, cod = type_of(d)
            z = product_z(z_normal_form(l), z_normal_form(r))
            imap = dict(zip(z.input.elements, pack_obj(dom).elements))
            omap = dict(zip(z.output.elements, pack_obj(cod).elements))
            quads = {(imap[a], q, omap[b], q2) for a, q, b, q2 in z.quads()}
            return ztransducer(pack_obj(dom), pack_obj(cod), z.states, quads)
        case FeedbackZ(wire=w, body=b):
            _feedback_boundary(w, b)
            zb = z_normal_form(b)
            db, cb = type_of(b)
            states = product_alphabet(zb.states, w)
            spair = pair_symbol(zb.states, w)
            input, output, quads = _fold_quads(zb.quads(), db, cb, spair)
            return ztransducer(input, output, states, quads)
        case Feedback():
            raise TypeMismatch("labelled feedback belongs to the finite-word language")
    raise MachineError(f"not a diagram: {d!r}")


# ---------------------------------------------------------------------------
# Direct denotational evaluation, independent of the normal form.

WordRel = set[tuple[tuple, tuple]]


def _denote(d: Diagram, k: int) -> WordRel:
    """The relation at word length k; words are tuples of flat tuples."""
    match d:
        case Box(rel=r):
            pairs = r.pairs
        case Id(o=o):
            pairs = identity(o).pairs
        case Swap(a=a, b=b):
            pairs = swap_rel(a, b).pairs
        case Seq(first=f, second=s):
            left = _denote(f, k)
            right = _denote(s, k)
            by_mid: dict[tuple, set[tuple]] = {}
            for v, u in right:
                by_mid.setdefault(v, set()).add(u)
            return {(w, u) for w, v in left for u in by_mid.get(v, ())}
        case Par(left=l, right=r):
            lrel = _denote(l, k)
            rrel = _denote(r, k)
            return {
                (
                    tuple(x1 + x2 for x1, x2 in zip(w1, w2)),
                    tuple(y1 + y2 for y1, y2 in zip(v1, v2)),
                )
                for w1, v1 in lrel
                for w2, v2 in rrel
            }
        case Feedback(wire=w, initial=i, final=f, body=b):
            shift = finite_shift_at(w, i, f, k)
            out: WordRel = set()
            for win, wout in _denote(b, k):
                u = tuple(pos[-1] for pos in win)
                t = tuple(pos[-1] for pos in wout)
                # (u, t) must lie in the transpose of the shift
                if (t, u) in shift:
                    out.add((
                        tuple(pos[:-1] for pos in win),
                        tuple(pos[:-1] for pos in wout),
                    ))
            return out
        case _:
            raise MachineError(f"cannot evaluate {d!r} over finite words")
    # base case: letterwise lift of an explicit relation
    level: WordRel = {((), ())}
    for _ in range(k):
        level = {(w + (x,), v + (y,)) for w, v in level for x, y in pairs}
    return level


def denotation_upto(d: Diagram, n: int) -> UniformRelationSample:
    """Evaluate the term constructor by constructor at each length ≤ n."""
    dom, cod = type_of(d)
    pairs = set()
    for k in range(n + 1):
        for w, v in _denote(d, k):
            pairs.add((
                tuple(pack_tuple(dom, pos) for pos in w),
                tuple(pack_tuple(cod, pos) for pos in v),
            ))
    return UniformRelationSample(pack_obj(dom), pack_obj(cod), n, frozenset(pairs))


def interpret_upto(d: Diagram, n: int) -> UniformRelationSample:
    """Behavior sample of a term, cross-checked between the normal-form
    route and the direct denotational route."""
    via_nf = behavior_upto(normal_form(d), n)
    direct = denotation_upto(d, n)
    if via_nf.pairs != direct.pairs:
        raise MachineError("internal error: evaluation routes disagree")
    return via_nf


# ---------------------------------------------------------------------------
# Exact equivalence of terms.

@dataclass(frozen=True)
class PipelineCertificate:
    """Machines and certificates produced while canonicalizing one term."""

    nfa: Nfa
    dfa: Dfa
    minimal: Dfa
    contains: SimCertificate
    follow: SimCertificate


@dataclass(frozen=True)
class EquivCertificate:
    left: PipelineCertificate
    right: PipelineCertificate
    iso: SimCertificate


def bend(d: Diagram) -> Diagram:
    """Turn a term A → B into an acceptor-shaped term B ++ A → 1 by bending
    the output back with a cap."""
    _, cod = type_of(d)
    cod = Obj(cod.flat)
    return Seq(Par(Id(cod), d), Box(cap_obj(cod)))


def _pipeline(d: Diagram) -> PipelineCertificate:
    nf = normal_form(bend(d))
    acceptor = transducer_to_nfa(nf)
    dfa, cert_det = certificate_for_determinization(acceptor)
    mdfa, cert_min = certificate_for_minimization(dfa)
    return PipelineCertificate(acceptor, dfa, mdfa, cert_det, cert_min)


def diagrams_equiv(d1: Diagram, d2: Diagram) -> tuple[bool, EquivCertificate | None]:
    """Decide whether two terms denote the same uniform relation.

    Both terms are bent into acceptors, normalized, determinized, and
    minimized; they are equivalent exactly when the minimal machines are
    isomorphic.  On success the full certificate chain is returned.
    """
    t1 = type_of(d1)
    t2 = type_of(d2)
    if t1[0].signature() != t2[0].signature() or t1[1].signature() != t2[1].signature():
        raise TypeMismatch("cannot compare terms of different types")
    left = _pipeline(d1)
    right = _pipeline(d2)
    mapping = iso_check(left.minimal, right.minimal)
    if mapping is None:
        return False, None
    iso_rel = Rel(
        obj(right.minimal.states), obj(left.minimal.states),
        frozenset(((q2,), (q1,)) for q1, q2 in mapping.items()),
    )
    return True, EquivCertificate(left, right, SimCertificate(iso_rel, TWO_SIDED))


def verify_equiv_certificate(cert: EquivCertificate) -> bool:
    """Re-check every simulation relation in a certificate chain."""
    for side in (cert.left, cert.right):
        ok_det = check_fin(
            nfa_to_transducer(side.nfa), nfa_to_transducer(side.dfa), side.contains
        ).ok
        ok_min = check_fin(
            nfa_to_transducer(side.minimal), nfa_to_transducer(side.dfa), side.follow
        ).ok
        if not (ok_det and ok_min):
            return False
    return check_fin(
        nfa_to_transducer(cert.left.minimal),
        nfa_to_transducer(cert.right.minimal),
        cert.iso,
    ).ok


def z_diagrams_equiv(d1: Diagram, d2: Diagram) -> bool:
    """Decide equality of bi-infinite terms via canonical presentations."""
    t1 = type_of(d1)
    t2 = type_of(d2)
    if t1[0].signature() != t2[0].signature() or t1[1].signature() != t2[1].signature():
        raise TypeMismatch("cannot compare terms of different types")
    p1 = presentation_of_ztransducer(z_normal_form(bend(d1)))
    p2 = presentation_of_ztransducer(z_normal_form(bend(d2)))
    return presentations_equiv(p1, p2)


# ---------------------------------------------------------------------------
# Sliding a relation around a feedback loop.

def slide(s: Rel, body: Diagram, initial, final, side: str = "left") -> tuple[Diagram, Diagram]:
    """Both sides of the sliding equation for ``s`` and an open loop body.

    ``body`` must have the sliding wire last on both boundaries: its domain
    ends in the codomain wire of ``s`` and its codomain in the domain wire.
    ``initial`` labels the domain-side wire of ``s`` and ``final`` the
    codomain-side wire; the other two label sets are forced (image and
    preimage under ``s``).  ``side`` selects which diagram comes first:
    "left" starts with the loop where ``s`` precedes the body.
    """
    if side not in ("left", "right"):
        raise MachineError(f"unknown side {side!r}")
    if len(s.dom.flat) != 1 or len(s.cod.flat) != 1:
        raise TypeMismatch("sliding expects a single-wire relation")
    wire_d = s.dom.flat[0]
    wire_c = s.cod.flat[0]
    db, cb = type_of(body)
    if not db.flat or db.flat[-1].elements != wire_c.elements:
        raise TypeMismatch("body domain must end in the codomain wire of the relation")
    if not cb.flat or cb.flat[-1].elements != wire_d.elements:
        raise TypeMismatch("body codomain must end in the domain wire of the relation")
    initial = wire_d.check_subset(initial)
    final = wire_c.check_subset(final)
    a_obj = Obj(db.flat[:-1])
    b_obj = Obj(cb.flat[:-1])

    image = frozenset(y[0] for x, y in s.pairs if x[0] in initial)
    preimage = frozenset(x[0] for x, y in s.pairs if y[0] in final)

    after = Feedback(wire_c, image, final, Seq(body, Par(Id(b_obj), Box(s))))
    before = Feedback(wire_d, initial, preimage, Seq(Par(Id(a_obj), Box(s)), body))
    return (before, after) if side == "left" else (after, before)
