"""Finite-word transducers: runs, behaviors, and the standard constructions.

A transducer reads an input letter and, depending on its current state,
nondeterministically emits an output letter and moves to a next state.
Its behavior is the length-preserving relation between input and output
words realized by runs from an initial to a final state.  Behaviors of
bounded length are materialized as :class:`UniformRelationSample` values;
exact (unbounded) comparisons go through the automata module.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .relcore import (
    UNIT,
    Alphabet,
    MachineError,
    Rel,
    TypeMismatch,
    is_unit,
    obj,
    pair_symbol,
    product_alphabet,
    unpair_symbol,
)

Quad = tuple[str, str, str, str]  # (input letter, state, output letter, next state)
Word = tuple[str, ...]


def trans_rel(input: Alphabet, output: Alphabet, states: Alphabet,
              quads: set[Quad] | frozenset[Quad]) -> Rel:
    """Build the transition relation A×Q → B×Q from explicit quadruples."""
    dom = obj(input, states)
    cod = obj(output, states)
    star = UNIT.elements[0]

    def dtup(a: str, q: str) -> Word:
        t = ()
        if not is_unit(input):
            t += (a,)
        if not is_unit(states):
            t += (q,)
        return t

    def ctup(b: str, q: str) -> Word:
        t = ()
        if not is_unit(output):
            t += (b,)
        if not is_unit(states):
            t += (q,)
        return t

    for a, q, b, q2 in quads:
        if is_unit(input) and a != star:
            raise MachineError(f"letter {a!r} not in unit input alphabet")
        if is_unit(output) and b != star:
            raise MachineError(f"letter {b!r} not in unit output alphabet")
    return Rel(dom, cod, frozenset((dtup(a, q), ctup(b, q2)) for a, q, b, q2 in quads))


def rel_quads(input: Alphabet, output: Alphabet, states: Alphabet, r: Rel) -> frozenset[Quad]:
    """Recover explicit quadruples from a transition relation."""
    star = UNIT.elements[0]
    out = set()
    for x, y in r.pairs:
        xs = list(x)
        ys = list(y)
        a = star if is_unit(input) else xs.pop(0)
        q = star if is_unit(states) else xs.pop(0)
        b = star if is_unit(output) else ys.pop(0)
        q2 = star if is_unit(states) else ys.pop(0)
        out.add((a, q, b, q2))
    return frozenset(out)


@dataclass(frozen=True)
class Transducer:
    input: Alphabet
    output: Alphabet
    states: Alphabet
    trans: Rel
    initial: frozenset[str]
    final: frozenset[str]

    def __post_init__(self):
        object.__setattr__(self, "initial", self.states.check_subset(self.initial))
        object.__setattr__(self, "final", self.states.check_subset(self.final))
        want_dom = obj(self.input, self.states).signature()
        want_cod = obj(self.output, self.states).signature()
        if self.trans.dom.signature() != want_dom or self.trans.cod.signature() != want_cod:
            raise TypeMismatch("transition relation is not typed A×Q → B×Q")

    def quads(self) -> frozenset[Quad]:
        return rel_quads(self.input, self.output, self.states, self.trans)

    def sorted_quads(self) -> list[Quad]:
        return sorted(
            self.quads(),
            key=lambda t: (
                self.states.index(t[1]),
                self.input.index(t[0]),
                self.output.index(t[2]),
                self.states.index(t[3]),
            ),
        )


def transducer(input: Alphabet, output: Alphabet, states: Alphabet,
               quads, initial, final) -> Transducer:
    return Transducer(
        input, output, states,
        trans_rel(input, output, states, set(quads)),
        frozenset(initial), frozenset(final),
    )


def materialize_states(t: Transducer) -> Transducer:
    """Replace a literal-unit state space by an ordinary singleton, so that
    state-typed relations about ``t`` have a real wire to attach to."""
    if not is_unit(t.states):
        return t
    from .relcore import material

    return transducer(t.input, t.output, material(t.states), t.quads(),
                      t.initial, t.final)


@dataclass(frozen=True)
class UniformRelationSample:
    """All related word pairs up to a length bound; pairs have equal length."""

    input: Alphabet
    output: Alphabet
    max_len: int
    pairs: frozenset[tuple[Word, Word]]

    def __post_init__(self):
        for w, v in self.pairs:
            if len(w) != len(v) or len(w) > self.max_len:
                raise MachineError(f"sample pair {(w, v)!r} violates uniform length bound")

    def at_length(self, k: int) -> frozenset[tuple[Word, Word]]:
        return frozenset(p for p in self.pairs if len(p[0]) == k)

    def sorted_pairs(self) -> list[tuple[Word, Word]]:
        ik = self.input.index
        ok = self.output.index
        return sorted(
            self.pairs,
            key=lambda p: (len(p[0]), tuple(map(ik, p[0])), tuple(map(ok, p[1]))),
        )


def behavior_upto(t: Transducer, n: int) -> UniformRelationSample:
    """Behavior sample computed by direct run enumeration."""
    step: dict[str, list[tuple[str, str, str]]] = {q: [] for q in t.states.elements}
    for a, q, b, q2 in t.quads():
        step[q].append((a, b, q2))
    pairs: set[tuple[Word, Word]] = set()
    frontier: set[tuple[str, Word, Word]] = {(q, (), ()) for q in t.initial}
    for q, w, v in frontier:
        if q in t.final:
            pairs.add((w, v))
    for _ in range(n):
        nxt: set[tuple[str, Word, Word]] = set()
        for q, w, v in frontier:
            for a, b, q2 in step[q]:
                item = (q2, w + (a,), v + (b,))
                nxt.add(item)
                if q2 in t.final:
                    pairs.add((item[1], item[2]))
        frontier = nxt
    return UniformRelationSample(t.input, t.output, n, frozenset(pairs))


def finite_shift_at(a: Alphabet, i, f, k: int) -> frozenset[tuple[Word, Word]]:
    """Length-k slice of the shift relation over ``a`` with end labels.

    Relates (w, v) of length k whenever i0·w = v·f0 for some i0 in ``i``
    and f0 in ``f``; at k = 0 the empty pair appears iff the label sets
    intersect.
    """
    i = a.check_subset(i)
    f = a.check_subset(f)
    if k == 0:
        return frozenset({((), ())}) if i & f else frozenset()
    out = set()
    for mid in itertools.product(a.elements, repeat=k - 1):
        for f0 in f:
            for i0 in i:
                out.add((mid + (f0,), (i0,) + mid))
    return frozenset(out)


def behavior_via_shift_upto(t: Transducer, n: int) -> UniformRelationSample:
    """Behavior sample computed by composing the letterwise lift of the
    transition relation with the transposed shift over the state alphabet.

    This is an independent evaluation route from :func:`behavior_upto`: the
    state-word pairs come from :func:`finite_shift_at`, and the letter pairs
    from the per-position lift sections.
    """
    letter_pairs: dict[tuple[str, str], list[tuple[str, str]]] = {}
    for a, q, b, q2 in t.quads():
        letter_pairs.setdefault((q, q2), []).append((a, b))
    pairs: set[tuple[Word, Word]] = set()
    for k in range(n + 1):
        for shift_w, shift_v in finite_shift_at(t.states, t.initial, t.final, k):
            # (u, _t) is in the transpose of the shift iff (_t, u) is in it.
            u, _t = shift_v, shift_w
            if k == 0:
                pairs.add(((), ()))
                continue
            sections = [letter_pairs.get((u[j], _t[j]), []) for j in range(k)]
            if any(not s for s in sections):
                continue
            for combo in itertools.product(*sections):
                pairs.add((tuple(a for a, _ in combo), tuple(b for _, b in combo)))
    return UniformRelationSample(t.input, t.output, n, frozenset(pairs))


def compose_transducers(t1: Transducer, t2: Transducer) -> Transducer:
    """Sequential composition; states multiply and behaviors compose."""
    if t1.output.elements != t2.input.elements:
        raise TypeMismatch(
            f"cannot compose transducers: output {t1.output.name!r} vs input {t2.input.name!r}"
        )
    states = product_alphabet(t1.states, t2.states)
    pair = pair_symbol(t1.states, t2.states)
    by_mid: dict[str, list[tuple[str, str, str]]] = {}
    for b, p, d, p2 in t2.quads():
        by_mid.setdefault(b, []).append((p, d, p2))
    quads = set()
    for a, q, b, q2 in t1.quads():
        for p, d, p2 in by_mid.get(b, ()):
            quads.add((a, pair(q, p), d, pair(q2, p2)))
    return transducer(
        t1.input, t2.output, states, quads,
        {pair(q, p) for q in t1.initial for p in t2.initial},
        {pair(q, p) for q in t1.final for p in t2.final},
    )


def product_transducers(t1: Transducer, t2: Transducer) -> Transducer:
    """Parallel product over the product alphabets, positionwise."""
    states = product_alphabet(t1.states, t2.states)
    spair = pair_symbol(t1.states, t2.states)
    ipair = pair_symbol(t1.input, t2.input)
    opair = pair_symbol(t1.output, t2.output)
    quads = set()
    for a, q, b, q2 in t1.quads():
        for c, p, d, p2 in t2.quads():
            quads.add((ipair(a, c), spair(q, p), opair(b, d), spair(q2, p2)))
    return transducer(
        product_alphabet(t1.input, t2.input),
        product_alphabet(t1.output, t2.output),
        states, quads,
        {spair(q, p) for q in t1.initial for p in t2.initial},
        {spair(q, p) for q in t1.final for p in t2.final},
    )


def lift_transducer(r: Rel) -> Transducer:
    """One-state transducer whose behavior is the letterwise lift of ``r``."""
    dflat = r.dom.flat
    cflat = r.cod.flat
    if len(dflat) > 1 or len(cflat) > 1:
        raise TypeMismatch("lift_transducer expects single-wire domain and codomain")
    input = dflat[0] if dflat else UNIT
    output = cflat[0] if cflat else UNIT
    star = UNIT.elements[0]
    quads = {
        (x[0] if x else star, star, y[0] if y else star, star)
        for x, y in r.pairs
    }
    return transducer(input, output, UNIT, quads, {star}, {star})


def to_automaton(t: Transducer) -> Transducer:
    """View a transducer over A, B as an acceptor over the product A×B."""
    ipair = pair_symbol(t.input, t.output)
    star = UNIT.elements[0]
    quads = {(ipair(a, b), q, star, q2) for a, q, b, q2 in t.quads()}
    return transducer(
        product_alphabet(t.input, t.output), UNIT, t.states, quads, t.initial, t.final
    )


def from_automaton(t: Transducer, input: Alphabet, output: Alphabet) -> Transducer:
    """Inverse of :func:`to_automaton`, splitting product letters by index."""
    if not is_unit(t.output):
        raise TypeMismatch("from_automaton expects a unit-output acceptor")
    want = product_alphabet(input, output)
    if t.input.elements != want.elements:
        raise TypeMismatch("acceptor alphabet is not the product of the given alphabets")
    unpair = unpair_symbol(input, output)
    quads = set()
    for ab, q, _, q2 in t.quads():
        a, b = unpair(ab)
        quads.add((a, q, b, q2))
    return transducer(input, output, t.states, quads, t.initial, t.final)


# ---------------------------------------------------------------------------
# Sample-level combinators, used as independent oracles in tests and by the
# diagram evaluator.

def lift_sample(r: Rel, n: int) -> UniformRelationSample:
    dflat = r.dom.flat
    cflat = r.cod.flat
    input = dflat[0] if dflat else UNIT
    output = cflat[0] if cflat else UNIT
    star = UNIT.elements[0]
    letters = [(x[0] if x else star, y[0] if y else star) for x, y in r.pairs]
    pairs: set[tuple[Word, Word]] = {((), ())}
    level = [((), ())]
    for _ in range(n):
        level = [(w + (a,), v + (b,)) for w, v in level for a, b in letters]
        pairs.update(level)
    return UniformRelationSample(input, output, n, frozenset(pairs))


def sample_compose(s1: UniformRelationSample, s2: UniformRelationSample) -> UniformRelationSample:
    if s1.output.elements != s2.input.elements:
        raise TypeMismatch("cannot compose samples over different middle alphabets")
    n = min(s1.max_len, s2.max_len)
    by_mid: dict[Word, set[Word]] = {}
    for v, u in s2.pairs:
        by_mid.setdefault(v, set()).add(u)
    pairs = {
        (w, u)
        for w, v in s1.pairs
        if len(w) <= n
        for u in by_mid.get(v, ())
    }
    return UniformRelationSample(s1.input, s2.output, n, frozenset(pairs))


def sample_product(s1: UniformRelationSample, s2: UniformRelationSample) -> UniformRelationSample:
    """Positionwise zip of equal-length pairs, over the product alphabets."""
    ipair = pair_symbol(s1.input, s2.input)
    opair = pair_symbol(s1.output, s2.output)
    n = min(s1.max_len, s2.max_len)
    by_len: dict[int, list[tuple[Word, Word]]] = {}
    for w, v in s2.pairs:
        by_len.setdefault(len(w), []).append((w, v))
    pairs = set()
    for w1, v1 in s1.pairs:
        k = len(w1)
        if k > n:
            continue
        for w2, v2 in by_len.get(k, ()):
            pairs.add((
                tuple(ipair(a, c) for a, c in zip(w1, w2)),
                tuple(opair(b, d) for b, d in zip(v1, v2)),
            ))
    return UniformRelationSample(
        product_alphabet(s1.input, s2.input),
        product_alphabet(s1.output, s2.output),
        n, frozenset(pairs),
    )
