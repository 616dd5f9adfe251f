"""Registry of checkable laws of the logic.

Each law is an equivalence, implication, or uniqueness claim that the evaluator
must satisfy on every model. check_law replays a law exhaustively over the
finite grids that matter for it: every world a side can be evaluated at without
structural errors, a sample of selectors (or all of them, for the two
independence laws), and every index in the side's resolution grid plus one
off-grid probe.

Two registered non-laws are deliberate counterexamples: plausible-looking
identities the semantics refutes. Each carries a pinned witness model on which
the check must come out failed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .core import FrequencySpec, Model, UnknownLaw, iter_admissible
from .formula import (
    And,
    Atom,
    BlackBox,
    Circle,
    Comparator,
    Formula,
    Next,
    Not,
    Or,
    Star,
    WhiteBox,
    expand_indexed_next,
    is_propositional,
    render,
)
from .semantics import OBSERVED, Engine, Evaluator, Member

_GEQ = Comparator.GEQ
_GT = Comparator.GT
_LEQ = Comparator.LEQ
_LT = Comparator.LT
_EQ = Comparator.EQ
_MAX = Comparator.MAX

_ONE = Fraction(1)
_ZERO = Fraction(0)


def next_horizon(f: Formula) -> int:
    """Worlds beyond the evaluation point that evaluating f may touch.

    Evaluation at world m is structurally safe iff m + horizon <= n. A next
    operand under star is flagged with an effectively infinite horizon, since
    star visits every world including the last.
    """
    if isinstance(f, Atom):
        return 0
    if isinstance(f, Not):
        return next_horizon(f.operand)
    if isinstance(f, (And, Or)):
        return max(next_horizon(f.left), next_horizon(f.right))
    if isinstance(f, (WhiteBox, Circle, BlackBox)):
        return next_horizon(f.operand)
    if isinstance(f, Star):
        return 0 if next_horizon(f.operand) == 0 else 10**9
    if isinstance(f, Next):
        return f.steps + next_horizon(f.operand)
    raise TypeError(f"not a formula: {f!r}")


def _reads_selector(f: Formula) -> bool:
    """Whether evaluating f under the observed selector reads the recorded
    prefix (and therefore needs the world to lie within it)."""
    if isinstance(f, (Atom, Next)):
        return True
    if isinstance(f, Not):
        return _reads_selector(f.operand)
    if isinstance(f, (And, Or)):
        return _reads_selector(f.left) or _reads_selector(f.right)
    if isinstance(f, (WhiteBox, Circle)):
        return _reads_selector(f.operand)
    return False  # BlackBox and Star quantify selectors away


def _star_safe(f: Formula) -> bool:
    return next_horizon(f) == 0


@dataclass(frozen=True)
class LawReport:
    """Result of replaying one law on one model."""

    law_id: str
    expected_pass: bool
    passed: bool
    instances: int
    counterexample: str | None

    @property
    def as_expected(self) -> bool:
        return self.passed == self.expected_pass


class _Ctx:
    """Shared evaluation context for all laws over one model."""

    def __init__(self, model: Model, engine: Engine):
        self.ev = Evaluator(model, engine)
        self.model = model
        self.spec = model.spec
        self.n = model.spec.n
        self._keys: dict = {}

    def _key(self, sel):
        k = self._keys.get(sel)
        if k is None:
            k = self.ev._selkey(sel)
            self._keys[sel] = k
        return k

    def truth(self, f: Formula, m: int, sel) -> bool:
        return self.ev._truth(f, self._key(sel), m)

    def group_size(self, m: int, sel) -> int:
        return len(self.ev._group(self._key(sel), m))

    def selector_sample(self) -> list:
        members = self.ev.members
        sels = [OBSERVED, Member(members[0]), Member(members[-1])]
        return list(dict.fromkeys(sels))

    def all_selectors(self) -> list:
        return [OBSERVED] + [Member(a) for a in self.ev.members]

    def contexts(self, *formulas) -> list:
        """(world, selector) pairs at which every given formula evaluates
        without structural errors."""
        h = max(next_horizon(f) for f in formulas)
        reads = any(_reads_selector(f) for f in formulas)
        top = self.n - h
        out = []
        for sel in self.selector_sample():
            limit = top
            if sel is OBSERVED and reads:
                limit = min(limit, len(self.model.observed))
            out.extend((m, sel) for m in range(1, limit + 1))
        return out


def _label(sel) -> str:
    return "observed" if sel is OBSERVED else "member " + ",".join(sel.assignment)


def _desc(tag: str, phi: Formula, q, m, sel) -> str:
    """Render one instance tuple for a report. Runners yield the raw tuple and
    this only runs for the instances that actually fail."""
    return f"{tag}: phi={render(phi)} q={q} world={m} selector={_label(sel)}"


def _grid(den: int, probe: bool = True) -> list:
    """All fractions i/den plus, optionally, one value off that grid."""
    out = [Fraction(i, den) for i in range(den + 1)]
    if probe:
        out.append(Fraction(1, 2 * den + 1))
    return out


def _taut(phi: Formula) -> Formula:
    return Or(phi, Not(phi))


def formula_family(spec: FrequencySpec) -> list:
    """Deterministic operand family used to instantiate the laws: atoms,
    connectives, and one formula per modality, built from the declared atoms."""
    names = spec.atoms
    p0 = Atom(names[0])
    p1 = Atom(names[1]) if len(names) > 1 else p0
    return [
        p0,
        Not(p0),
        And(p0, Not(p1)),
        Or(Not(p0), p1),
        WhiteBox(_GEQ, Fraction(1, 2), p0),
        Circle(_GT, Fraction(1, 3), p1),
        BlackBox(_LEQ, Fraction(1, 2), p0),
        Star(_GEQ, Fraction(1, 2), Or(p0, p1)),
        Next(_GEQ, Fraction(1, 2), 1, p0),
    ]


def _next_grid(cx: _Ctx, m: int, sel) -> list:
    """Index grid for next values in a context: the continuation-count grid,
    or coarse probes when no continuation exists."""
    g = cx.group_size(m, sel)
    if g == 0:
        return [_ZERO, Fraction(1, 2), _ONE]
    return _grid(g)


# law runners: each yields (instance description, ok)


def _law_le_box_dual(cx, fam):
    for box in (WhiteBox, BlackBox):
        for phi in fam:
            lhs0 = box(_LEQ, _ZERO, phi)
            rhs0 = box(_GEQ, _ONE, Not(phi))
            for m, sel in cx.contexts(lhs0, rhs0):
                for q in _grid(m):
                    lhs = box(_LEQ, q, phi)
                    rhs = box(_GEQ, 1 - q, Not(phi))
                    ok = cx.truth(lhs, m, sel) == cx.truth(rhs, m, sel)
                    yield (box.__name__, phi, q, m, sel), ok


def _law_eq_box_split(cx, fam):
    for phi in fam:
        shape = WhiteBox(_EQ, _ZERO, phi)
        for m, sel in cx.contexts(shape, Not(phi)):
            for q in _grid(m):
                lhs = WhiteBox(_EQ, q, phi)
                rhs = And(WhiteBox(_GEQ, q, phi), WhiteBox(_GEQ, 1 - q, Not(phi)))
                ok = cx.truth(lhs, m, sel) == cx.truth(rhs, m, sel)
                yield ("eq-box", phi, q, m, sel), ok


def _law_box_strict_negation(cx, fam):
    for phi in fam:
        shape = WhiteBox(_LT, _ZERO, phi)
        for m, sel in cx.contexts(shape):
            for q in _grid(m):
                a = cx.truth(WhiteBox(_LT, q, phi), m, sel)
                b = not cx.truth(WhiteBox(_GEQ, q, phi), m, sel)
                yield ("lt-not-geq", phi, q, m, sel), a == b
                c = cx.truth(WhiteBox(_GT, q, phi), m, sel)
                d = not cx.truth(WhiteBox(_LEQ, q, phi), m, sel)
                yield ("gt-not-leq", phi, q, m, sel), c == d


def _law_member_box_pin(cx, fam):
    n = cx.n
    for phi in fam:
        pin0 = Circle(_EQ, _ONE, _taut(phi))
        pairs = {}
        for m, sel in cx.contexts(BlackBox(_EQ, _ZERO, phi), pin0):
            pin = Circle(_EQ, Fraction(m, n), _taut(phi))
            for cmp in (_EQ, _LT, _GT):
                for q in _grid(m):
                    pair = pairs.get((m, cmp, q))
                    if pair is None:
                        lhs = BlackBox(cmp, q, phi)
                        rhs = And(pin, BlackBox(_GEQ, Fraction(1, m), And(pin, WhiteBox(cmp, q, phi))))
                        pair = pairs[(m, cmp, q)] = (lhs, rhs)
                    ok = cx.truth(pair[0], m, sel) == cx.truth(pair[1], m, sel)
                    yield (f"member-box-{cmp.value}", phi, q, m, sel), ok


def _law_circle_comparator_split(cx, fam):
    n = cx.n
    for phi in fam:
        shape = Circle(_EQ, _ZERO, phi)
        for m, sel in cx.contexts(shape, Not(phi)):
            reach = Fraction(m, n)
            pin = Circle(_GEQ, reach, _taut(phi))
            for q in _grid(n):
                eq_lhs = cx.truth(Circle(_EQ, q, phi), m, sel)
                gt_lhs = cx.truth(Circle(_GT, q, phi), m, sel)
                if q <= reach:
                    eq_rhs = cx.truth(
                        And(And(Circle(_GEQ, q, phi), pin), Circle(_GEQ, reach - q, Not(phi))),
                        m,
                        sel,
                    )
                    yield ("circle-eq", phi, q, m, sel), eq_lhs == eq_rhs
                    gt_rhs = cx.truth(
                        And(And(Circle(_GEQ, q, phi), pin), Not(Circle(_GEQ, reach - q, Not(phi)))),
                        m,
                        sel,
                    )
                    yield ("circle-gt", phi, q, m, sel), gt_lhs == gt_rhs
                else:
                    yield ("circle-eq-unreachable", phi, q, m, sel), not eq_lhs
                    yield ("circle-gt-unreachable", phi, q, m, sel), not gt_lhs
                lt_lhs = cx.truth(Circle(_LT, q, phi), m, sel)
                lt_rhs = not cx.truth(Circle(_GEQ, q, phi), m, sel)
                yield ("circle-lt", phi, q, m, sel), lt_lhs == lt_rhs
                le_lhs = cx.truth(Circle(_LEQ, q, phi), m, sel)
                le_rhs = cx.truth(Or(Circle(_EQ, q, phi), Circle(_LT, q, phi)), m, sel)
                yield ("circle-le", phi, q, m, sel), le_lhs == le_rhs


def _incoherence_probe(cx, m: int) -> Formula:
    """True exactly when the selector's observed shares at world m are not
    reachable by any admissible assignment: some atom's prefix share is met by
    no member."""
    parts = []
    for name in cx.spec.atoms:
        p = Atom(name)
        for i in range(m + 1):
            q = Fraction(i, m)
            parts.append(And(WhiteBox(_GEQ, q, p), Not(BlackBox(_GEQ, q, p))))
    out = parts[0]
    for part in parts[1:]:
        out = Or(out, part)
    return out


def _law_next_eq_split(cx, fam):
    for phi in fam:
        shape = Next(_EQ, _ZERO, 1, phi)
        for m, sel in cx.contexts(shape, Not(phi)):
            incoh = _incoherence_probe(cx, m)
            for q in _next_grid(cx, m, sel):
                lhs = Next(_EQ, q, 1, phi)
                rhs = And(
                    Next(_GEQ, q, 1, phi),
                    Or(incoh, Next(_GEQ, 1 - q, 1, Not(phi))),
                )
                ok = cx.truth(lhs, m, sel) == cx.truth(rhs, m, sel)
                yield ("next-eq", phi, q, m, sel), ok


def _law_next_strict_forms(cx, fam):
    for phi in fam:
        shape = Next(_LT, _ZERO, 1, phi)
        for m, sel in cx.contexts(shape, Not(phi)):
            for q in _next_grid(cx, m, sel):
                a = cx.truth(Next(_LT, q, 1, phi), m, sel)
                b = not cx.truth(Next(_GEQ, q, 1, phi), m, sel)
                yield ("next-lt", phi, q, m, sel), a == b
                c = cx.truth(Next(_LEQ, q, 1, phi), m, sel)
                d = cx.truth(Or(Next(_LT, q, 1, phi), Next(_EQ, q, 1, phi)), m, sel)
                yield ("next-le", phi, q, m, sel), c == d
                e = cx.truth(Next(_GT, q, 1, phi), m, sel)
                g = cx.truth(
                    And(Next(_GEQ, _ONE, 1, _taut(phi)), Not(Next(_LEQ, q, 1, phi))), m, sel
                )
                yield ("next-gt", phi, q, m, sel), e == g


def _law_member_box_max(cx, fam):
    for phi in fam:
        shape = BlackBox(_MAX, _ZERO, phi)
        for m, sel in cx.contexts(shape):
            for q in _grid(m):
                lhs = cx.truth(BlackBox(_MAX, q, phi), m, sel)
                rhs = cx.truth(
                    And(BlackBox(_GEQ, q, phi), Not(BlackBox(_GT, q, phi))), m, sel
                )
                yield ("member-box-max", phi, q, m, sel), lhs == rhs


def _law_star_le_dual(cx, fam):
    k = len(cx.ev.members)
    for phi in fam:
        if not _star_safe(phi):
            continue
        shape = Star(_LEQ, _ZERO, phi)
        for m, sel in cx.contexts(shape, Not(phi)):
            for q in _grid(k):
                a = cx.truth(Star(_LEQ, q, phi), m, sel)
                b = cx.truth(Star(_GEQ, 1 - q, Not(phi)), m, sel)
                yield ("star-le", phi, q, m, sel), a == b


def _law_star_eq_pinned(cx, fam):
    n = cx.n
    k = len(cx.ev.members)
    for phi in fam:
        if not _star_safe(phi):
            continue
        for q in _grid(k):
            parts = []
            for world in range(1, n + 1):
                pin = Circle(_EQ, Fraction(world, n), _taut(phi))
                parts.append(
                    And(
                        Star(_GEQ, q, And(phi, pin)),
                        Star(_GEQ, 1 - q, And(Not(phi), pin)),
                    )
                )
            rhs = parts[0]
            for part in parts[1:]:
                rhs = Or(rhs, part)
            a = cx.truth(Star(_EQ, q, phi), 1, OBSERVED)
            b = cx.truth(rhs, 1, OBSERVED)
            yield ("star-eq", phi, q, 1, OBSERVED), a == b


def _law_star_max_grid(cx, fam):
    k = len(cx.ev.members)
    for phi in fam:
        if not _star_safe(phi):
            continue
        for q in _grid(k, probe=False):
            lhs = cx.truth(Star(_MAX, q, phi), 1, OBSERVED)
            if q == 1:
                rhs = cx.truth(Star(_GEQ, _ONE, phi), 1, OBSERVED)
            else:
                rhs = cx.truth(
                    And(Star(_GEQ, q, phi), Not(Star(_GEQ, q + Fraction(1, k), phi))),
                    1,
                    OBSERVED,
                )
            yield ("star-max", phi, q, 1, OBSERVED), lhs == rhs
        probe = Fraction(1, 2 * k + 1)
        yield ("star-max-offgrid", phi, probe, 1, OBSERVED), not cx.truth(
            Star(_MAX, probe, phi), 1, OBSERVED
        )


def _law_star_gt_form(cx, fam):
    k = len(cx.ev.members)
    for phi in fam:
        if not _star_safe(phi):
            continue
        for q in _grid(k):
            a = cx.truth(Star(_GT, q, phi), 1, OBSERVED)
            b = cx.truth(And(Star(_GEQ, q, phi), Not(Star(_MAX, q, phi))), 1, OBSERVED)
            yield ("star-gt", phi, q, 1, OBSERVED), a == b


def _law_next_steps_expansion(cx, fam):
    for phi in fam:
        for steps in (1, 2, 3):
            shape = Next(_GEQ, _ZERO, steps, phi)
            # Reuse the built trees across contexts so memo lookups hit by identity.
            pairs = {}
            for m, sel in cx.contexts(shape):
                for cmp in Comparator:
                    for q in _next_grid(cx, m, sel):
                        pair = pairs.get((cmp, q))
                        if pair is None:
                            node = Next(cmp, q, steps, phi)
                            pair = pairs[(cmp, q)] = (node, expand_indexed_next(node))
                        a = cx.truth(pair[0], m, sel)
                        b = cx.truth(pair[1], m, sel)
                        yield (f"steps-{steps}-{cmp.value}", phi, q, m, sel), a == b


def _scalar_ops(cx, phi, m, sel):
    """The three scalar modalities with their index grids in one context."""
    yield "box", WhiteBox, _grid(m, probe=False)
    yield "circle", Circle, _grid(cx.n, probe=False)
    yield "next", Next, [q for q in _next_grid(cx, m, sel) if 0 <= q <= 1]


def _law_scalar_eq_unique(cx, fam):
    for phi in fam:
        for m, sel in cx.contexts(Next(_EQ, _ZERO, 1, phi)):
            for tag, op, grid in _scalar_ops(cx, phi, m, sel):
                args = (1, phi) if op is Next else (phi,)
                hits = sum(1 for q in grid if cx.truth(op(_EQ, q, *args), m, sel))
                yield (f"unique-eq-{tag}", phi, Fraction(hits), m, sel), hits <= 1


def _law_scalar_eq_is_max(cx, fam):
    for phi in fam:
        for m, sel in cx.contexts(Next(_EQ, _ZERO, 1, phi)):
            for tag, op, grid in _scalar_ops(cx, phi, m, sel):
                args = (1, phi) if op is Next else (phi,)
                for q in grid:
                    a = cx.truth(op(_EQ, q, *args), m, sel)
                    b = cx.truth(op(_MAX, q, *args), m, sel)
                    yield (f"eq-is-max-{tag}", phi, q, m, sel), a == b


def _law_max_unique(cx, fam):
    k = len(cx.ev.members)
    for phi in fam:
        for m, sel in cx.contexts(Next(_EQ, _ZERO, 1, phi)):
            for tag, op, grid in _scalar_ops(cx, phi, m, sel):
                args = (1, phi) if op is Next else (phi,)
                hits = sum(1 for q in grid if cx.truth(op(_MAX, q, *args), m, sel))
                yield (f"unique-max-{tag}", phi, Fraction(hits), m, sel), hits <= 1
            hits = sum(
                1 for q in _grid(m, probe=False) if cx.truth(BlackBox(_MAX, q, phi), m, sel)
            )
            yield ("unique-max-member-box", phi, Fraction(hits), m, sel), hits <= 1
            if _star_safe(phi):
                hits = sum(
                    1 for q in _grid(k, probe=False) if cx.truth(Star(_MAX, q, phi), m, sel)
                )
                yield ("unique-max-star", phi, Fraction(hits), m, sel), hits <= 1


def _law_star_eq_propositional(cx, fam):
    k = len(cx.ev.members)
    for phi in fam:
        if not is_propositional(phi):
            continue
        grid = _grid(k)
        hits = sum(1 for q in grid if cx.truth(Star(_EQ, q, phi), 1, OBSERVED))
        yield ("star-eq-unique", phi, Fraction(hits), 1, OBSERVED), hits <= 1
        for q in grid:
            a = cx.truth(Star(_EQ, q, phi), 1, OBSERVED)
            b = cx.truth(Star(_MAX, q, phi), 1, OBSERVED)
            yield ("star-eq-is-max", phi, q, 1, OBSERVED), a == b


def _law_member_box_witness(cx, fam):
    members = cx.ev.members
    for phi in fam:
        for m, sel in cx.contexts(BlackBox(_GEQ, _ZERO, phi)):
            for q in _grid(m):
                a = cx.truth(BlackBox(_GEQ, q, phi), m, sel)
                b = any(
                    cx.truth(WhiteBox(_GEQ, q, phi), m, Member(a_)) for a_ in members
                )
                yield ("member-box-witness", phi, q, m, sel), a == b


def _law_star_implies_member_box_atomic(cx, fam):
    k = len(cx.ev.members)
    for name in cx.spec.atoms:
        p = Atom(name)
        for m, sel in cx.contexts(Star(_GEQ, _ZERO, p), BlackBox(_GEQ, _ZERO, p)):
            for q in sorted(set(_grid(k) + _grid(cx.n))):
                a = cx.truth(Star(_GEQ, q, p), m, sel)
                b = cx.truth(BlackBox(_GEQ, q, p), m, sel)
                yield ("star-to-member-box", p, q, m, sel), (not a) or b


def _monotone(bools) -> bool:
    seq = list(bools)
    return all(not seq[i] or seq[i + 1] for i in range(len(seq) - 1))


def _law_circle_monotone(cx, fam):
    for phi in fam:
        shape = Circle(_GEQ, _ZERO, phi)
        ctxs = cx.contexts(shape)
        by_sel: dict = {}
        for m, sel in ctxs:
            by_sel.setdefault(sel, []).append(m)
        for sel, worlds in by_sel.items():
            for cmp in (_GEQ, _GT):
                for q in _grid(cx.n):
                    vec = [cx.truth(Circle(cmp, q, phi), m, sel) for m in sorted(worlds)]
                    ok = _monotone(vec)
                    yield (f"circle-monotone-{cmp.value}", phi, q, 0, sel), ok


def _law_member_box_atomic_decreasing(cx, fam):
    union = sorted({Fraction(i, m) for m in range(1, cx.n + 1) for i in range(m + 1)})
    for name in cx.spec.atoms:
        p = Atom(name)
        for q in union:
            vec = [cx.truth(BlackBox(_GEQ, q, p), m, OBSERVED) for m in range(1, cx.n + 1)]
            ok = _monotone(reversed(vec))
            yield ("member-box-decreasing", p, q, 0, OBSERVED), ok


def _law_star_context_free(cx, fam):
    k = len(cx.ev.members)
    sels = cx.all_selectors()
    coarse = sorted({_ZERO, Fraction(1, k), Fraction(1, 2), Fraction(k - 1, k), _ONE})
    for phi in fam:
        if not _star_safe(phi):
            continue
        for q in coarse:
            f = Star(_GEQ, q, phi)
            seen = {cx.truth(f, m, sel) for sel in sels for m in range(1, cx.n + 1)}
            yield ("star-context-free", phi, q, 0, OBSERVED), len(seen) == 1
        for q in _grid(k):
            f = Star(_GEQ, q, phi)
            seen = {
                cx.truth(f, m, sel)
                for sel in cx.selector_sample()
                for m in range(1, cx.n + 1)
            }
            yield ("star-grid-context-free", phi, q, 0, OBSERVED), len(seen) == 1


def _law_member_box_selector_free(cx, fam):
    sels = cx.all_selectors()
    for phi in fam:
        h = next_horizon(phi)
        for m in range(1, cx.n - h + 1):
            for q in _grid(m):
                f = BlackBox(_GEQ, q, phi)
                seen = {cx.truth(f, m, sel) for sel in sels}
                yield ("member-box-selector-free", phi, q, m, sels[0]), len(seen) == 1


def _law_star_idempotent(cx, fam):
    k = len(cx.ev.members)
    grid = _grid(k)
    for phi in fam:
        if not _star_safe(phi):
            continue
        for q in grid:
            if q == 0:
                continue
            for q2 in grid:
                inner = Star(_GEQ, q2, phi)
                a = cx.truth(Star(_GEQ, q, inner), 1, OBSERVED)
                b = cx.truth(inner, 1, OBSERVED)
                yield (f"star-idempotent-inner-{q2}", phi, q, 1, OBSERVED), a == b


def _law_circle_nesting_drop(cx, fam):
    for phi in fam:
        shape = Circle(_GEQ, _ZERO, Circle(_GEQ, _ZERO, phi))
        for m, sel in cx.contexts(shape):
            for q in _grid(cx.n):
                if q == 0:
                    continue
                for q2 in _grid(cx.n, probe=False):
                    inner = Circle(_GEQ, q2, phi)
                    a = cx.truth(Circle(_GEQ, q, inner), m, sel)
                    b = cx.truth(inner, m, sel)
                    yield (f"circle-drop-inner-{q2}", phi, q, m, sel), (not a) or b


def _law_truth_implies_circle(cx, fam):
    for phi in fam:
        for m, sel in cx.contexts(phi):
            a = cx.truth(phi, m, sel)
            b = cx.truth(Circle(_GEQ, Fraction(1, cx.n), phi), m, sel)
            yield ("truth-implies-circle", phi, _ZERO, m, sel), (not a) or b


def _nonlaw_member_box_eq_split(cx, fam):
    last = Atom(cx.spec.atoms[-1])
    witness = WhiteBox(_GEQ, Fraction(1, 2), WhiteBox(_GEQ, _ONE, last))
    for phi in list(fam) + [witness]:
        shape = BlackBox(_EQ, _ZERO, phi)
        for m, sel in cx.contexts(shape):
            for q in _grid(m):
                a = cx.truth(BlackBox(_EQ, q, phi), m, sel)
                b = cx.truth(And(BlackBox(_GEQ, q, phi), BlackBox(_LEQ, q, phi)), m, sel)
                yield ("member-box-eq-split", phi, q, m, sel), a == b


def _nonlaw_star_implies_member_box(cx, fam):
    k = len(cx.ev.members)
    last = Atom(cx.spec.atoms[-1])
    witness = BlackBox(_EQ, Fraction(1, 3), last)
    for phi in [f for f in fam if _star_safe(f)] + [witness]:
        for m, sel in cx.contexts(Star(_GEQ, _ZERO, phi), BlackBox(_GEQ, _ZERO, phi)):
            for q in sorted(set(_grid(k) + _grid(cx.n))):
                a = cx.truth(Star(_GEQ, q, phi), m, sel)
                b = cx.truth(BlackBox(_GEQ, q, phi), m, sel)
                yield ("star-implies-member-box", phi, q, m, sel), (not a) or b


@dataclass(frozen=True)
class LawSpec:
    law_id: str
    summary: str
    expected_pass: bool
    runner: object
    pinned_model: Model | None = None


def _pinned_fair4() -> Model:
    spec = FrequencySpec(
        ("Head", "Tail"), {"Head": Fraction(1, 2), "Tail": Fraction(1, 2)}, 4
    )
    return Model(spec)


def _pinned_biased3() -> Model:
    spec = FrequencySpec(
        ("Head", "Tail"), {"Head": Fraction(2, 3), "Tail": Fraction(1, 3)}, 3
    )
    return Model(spec)


_REGISTRY = [
    LawSpec(
        "le-box-dual",
        "box[<=q] phi equals box[>=1-q] !phi, for the prefix box and the member box",
        True,
        _law_le_box_dual,
    ),
    LawSpec(
        "eq-box-split",
        "box[=q] phi equals box[>=q] phi & box[>=1-q] !phi",
        True,
        _law_eq_box_split,
    ),
    LawSpec(
        "box-strict-negation",
        "box[<q] is the negation of box[>=q]; box[>q] of box[<=q]",
        True,
        _law_box_strict_negation,
    ),
    LawSpec(
        "member-box-pin",
        "bbox with =, <, > reduces to a pinned-world member search over box",
        True,
        _law_member_box_pin,
    ),
    LawSpec(
        "circle-comparator-split",
        "circ with =, <, <=, > reduces to >= forms (with the reachable-share pin)",
        True,
        _law_circle_comparator_split,
    ),
    LawSpec(
        "next-eq-split",
        "next[=q] equals next[>=q] & (incoherent-prefix | next[>=1-q] !phi)",
        True,
        _law_next_eq_split,
    ),
    LawSpec(
        "next-strict-forms",
        "next with <, <=, > reduces to >= and = forms",
        True,
        _law_next_strict_forms,
    ),
    LawSpec(
        "member-box-max",
        "bbox[max q] equals bbox[>=q] & !bbox[>q]",
        True,
        _law_member_box_max,
    ),
    LawSpec(
        "star-le-dual",
        "star[<=q] phi equals star[>=1-q] !phi",
        True,
        _law_star_le_dual,
    ),
    LawSpec(
        "star-eq-pinned",
        "star[=q] phi is a disjunction over worlds of exact-share star pairs",
        True,
        _law_star_eq_pinned,
    ),
    LawSpec(
        "star-max-grid",
        "star[max q] equals star[>=q] & !star[>= q + 1/|admissible|] on the grid",
        True,
        _law_star_max_grid,
    ),
    LawSpec(
        "star-gt-form",
        "star[>q] equals star[>=q] & !star[max q]",
        True,
        _law_star_gt_form,
    ),
    LawSpec(
        "next-steps-expansion",
        "next^i equals the unfolded next-or chain with i-1 inner nexts",
        True,
        _law_next_steps_expansion,
    ),
    LawSpec(
        "scalar-eq-unique",
        "at most one grid index satisfies box/circ/next with =",
        True,
        _law_scalar_eq_unique,
    ),
    LawSpec(
        "scalar-eq-is-max",
        "box/circ/next with = coincides with max",
        True,
        _law_scalar_eq_is_max,
    ),
    LawSpec(
        "max-unique",
        "at most one grid index satisfies any modality with max",
        True,
        _law_max_unique,
    ),
    LawSpec(
        "star-eq-propositional",
        "star[=q] on modality-free operands is unique and coincides with max",
        True,
        _law_star_eq_propositional,
    ),
    LawSpec(
        "member-box-witness",
        "bbox[>=q] holds iff some admissible member satisfies box[>=q]",
        True,
        _law_member_box_witness,
    ),
    LawSpec(
        "star-implies-member-box-atomic",
        "star[>=q] p implies bbox[>=q] p for bare atoms",
        True,
        _law_star_implies_member_box_atomic,
    ),
    LawSpec(
        "circle-monotone",
        "circ[>=q] and circ[>q], once true, stay true at later worlds",
        True,
        _law_circle_monotone,
    ),
    LawSpec(
        "member-box-atomic-decreasing",
        "bbox[>=q] p, once false, stays false at later worlds (bare atoms)",
        True,
        _law_member_box_atomic_decreasing,
    ),
    LawSpec(
        "star-context-free",
        "star truth never depends on the world or the selector",
        True,
        _law_star_context_free,
    ),
    LawSpec(
        "member-box-selector-free",
        "bbox truth never depends on the selector",
        True,
        _law_member_box_selector_free,
    ),
    LawSpec(
        "star-idempotent",
        "star[>=q] star[>=q'] phi equals star[>=q'] phi for q > 0",
        True,
        _law_star_idempotent,
    ),
    LawSpec(
        "circle-nesting-drop",
        "circ[>=q] circ[>=q'] phi implies circ[>=q'] phi for q > 0",
        True,
        _law_circle_nesting_drop,
    ),
    LawSpec(
        "truth-implies-circle",
        "phi at a world implies circ[>=1/n] phi there",
        True,
        _law_truth_implies_circle,
    ),
    LawSpec(
        "non-law-member-box-eq-split",
        "bbox[=q] is NOT bbox[>=q] & bbox[<=q]: member ratios need not meet",
        False,
        _nonlaw_member_box_eq_split,
        _pinned_fair4(),
    ),
    LawSpec(
        "non-law-star-implies-member-box",
        "star[>=q] phi does NOT imply bbox[>=q] phi beyond bare atoms",
        False,
        _nonlaw_star_implies_member_box,
        _pinned_biased3(),
    ),
]

_BY_ID = {spec.law_id: spec for spec in _REGISTRY}


def list_laws() -> list:
    """(law_id, summary, expected_pass) for every registered law, in order."""
    return [(s.law_id, s.summary, s.expected_pass) for s in _REGISTRY]


def pinned_model(law_id: str) -> Model | None:
    spec = _BY_ID.get(law_id)
    if spec is None:
        raise UnknownLaw(f"no law registered under {law_id!r}")
    return spec.pinned_model


def check_law(law_id: str, model: Model | None = None, engine: Engine = Engine.REFERENCE) -> LawReport:
    """Replay one law over a model (the law's pinned witness model if none is
    given) and report the first counterexample, if any."""
    spec = _BY_ID.get(law_id)
    if spec is None:
        raise UnknownLaw(f"no law registered under {law_id!r}")
    if model is None:
        model = spec.pinned_model
        if model is None:
            raise ValueError(f"law {law_id!r} has no pinned model; pass one")
    cx = _Ctx(model, engine)
    fam = formula_family(model.spec)
    instances = 0
    failure = None
    for parts, ok in spec.runner(cx, fam):
        instances += 1
        if not ok and failure is None:
            failure = _desc(*parts)
    return LawReport(law_id, spec.expected_pass, failure is None, instances, failure)


def check_all_laws(model: Model, law_ids=None, engine: Engine = Engine.REFERENCE) -> list:
    """Replay several laws with one shared evaluator over the model."""
    if law_ids is None:
        law_ids = [s.law_id for s in _REGISTRY]
    cx = _Ctx(model, engine)
    fam = formula_family(model.spec)
    out = []
    for law_id in law_ids:
        spec = _BY_ID.get(law_id)
        if spec is None:
            raise UnknownLaw(f"no law registered under {law_id!r}")
        instances = 0
        failure = None
        for parts, ok in spec.runner(cx, fam):
            instances += 1
            if not ok and failure is None:
                failure = _desc(*parts)
        out.append(LawReport(law_id, spec.expected_pass, failure is None, instances, failure))
    return out


def random_models(seed: int, count: int, max_n: int = 6, max_atoms: int = 3) -> list:
    """Deterministic family of small models for law sweeps: random sizes,
    targets, optional weights, and observed prefixes (some deliberately
    incompatible)."""
    rng = random.Random(seed)
    pool = ("a", "b", "c")
    out = []
    for _ in range(count):
        n = rng.randint(1, max_n)
        k = rng.randint(1, max_atoms)
        atoms = pool[:k]
        cuts = sorted(rng.randint(0, n) for _ in range(k - 1))
        edges = [0] + cuts + [n]
        counts = [edges[i + 1] - edges[i] for i in range(k)]
        target = {p: Fraction(c, n) for p, c in zip(atoms, counts)}
        spec = FrequencySpec(atoms, target, n)
        weights = None
        if rng.random() < 0.5:
            raw = [rng.randint(1, 5) for _ in range(k)]
            weights = {p: Fraction(w, sum(raw)) for p, w in zip(atoms, raw)}
        length = rng.randint(0, n)
        if rng.random() < 0.7:
            member = rng.choice(list(iter_admissible(spec)))
            observed = member[:length]
        else:
            observed = tuple(rng.choice(atoms) for _ in range(length))
        out.append(Model(spec, observed, weights))
    return out
