"""Truth evaluation over a model: reference enumeration plus closed-form fast paths.

Evaluation happens at a 1-based world index under a selector: OBSERVED reads the
model's recorded prefix (and fails past its end), Member(a) reads a specific
admissible assignment. The REFERENCE engine computes every quantifier by literal
enumeration of the admissible set. ACCELERATED answers two shapes without
enumeration: star over a modality-free operand (via the outcome measure) and
single-step next over a bare atom (via the closed form on remaining counts).
Both engines agree on every formula, including which error they raise.

Connectives are evaluated eagerly, so structural errors (horizon overruns, reads
past the observed prefix) surface deterministically rather than depending on
short-circuit order.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .core import (
    IncompatiblePrefix,
    Model,
    NextBeyondHorizon,
    NonPropositional,
    UnknownAtom,
    WorldBeyondObservation,
    iter_admissible,
    outcome_counts,
    validate_spec,
)
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
    atoms_of,
    is_propositional,
    render,
)


class Engine(Enum):
    REFERENCE = "reference"
    ACCELERATED = "accelerated"


class _Observed:
    def __repr__(self):
        return "OBSERVED"


OBSERVED = _Observed()


@dataclass(frozen=True)
class Member:
    """Selector pinning evaluation to one admissible assignment."""

    assignment: tuple

    def __post_init__(self):
        object.__setattr__(self, "assignment", tuple(self.assignment))


@dataclass(frozen=True)
class EvalContext:
    model: Model
    world: int
    selector: object = OBSERVED


_OBS_KEY = "__observed__"


def compare_measure(cmp: Comparator, q: Fraction, value: Fraction) -> bool:
    """Compare a scalar measure against the index. MAX asks for exact attainment,
    which on a scalar coincides with equality."""
    if cmp is Comparator.GEQ:
        return value >= q
    if cmp is Comparator.GT:
        return value > q
    if cmp is Comparator.LEQ:
        return value <= q
    if cmp is Comparator.LT:
        return value < q
    return value == q  # EQ and MAX


def _cmp_stats(cmp: Comparator, q: Fraction, stats) -> bool:
    """Existential comparison against a precomputed (max, min, value set) triple
    for a nonempty collection of exact measures."""
    top, bottom, values = stats
    if cmp is Comparator.GEQ:
        return top >= q
    if cmp is Comparator.GT:
        return top > q
    if cmp is Comparator.LEQ:
        return bottom <= q
    if cmp is Comparator.LT:
        return bottom < q
    if cmp is Comparator.EQ:
        return q in values
    return top == q  # MAX


def star_measure(spec, f: Formula) -> Fraction:
    """Target mass of the outcomes satisfying a modality-free formula.

    For such formulas the fraction of admissible assignments satisfying f is the
    same at every world and equals this measure.
    """
    validate_spec(spec)
    for name in atoms_of(f):
        if name not in spec.target:
            raise UnknownAtom(f"atom {name!r} not in spec")

    def holds(g: Formula, outcome: str) -> bool:
        if isinstance(g, Atom):
            return g.name == outcome
        if isinstance(g, Not):
            return not holds(g.operand, outcome)
        if isinstance(g, And):
            return holds(g.left, outcome) and holds(g.right, outcome)
        if isinstance(g, Or):
            return holds(g.left, outcome) or holds(g.right, outcome)
        raise NonPropositional(f"modal operator in {render(g)}")

    return sum(
        (spec.target[p] for p in spec.atoms if holds(f, p)), start=Fraction(0)
    )


def count_compatible(model: Model, m: int | None = None) -> int:
    """Number of admissible assignments extending the first m observed outcomes.

    Closed form: with d_p = remaining count of p, fill the n - m free positions by
    choosing slots atom by atom, giving a product of binomials. Zero iff some atom
    is already over target.
    """
    spec = model.spec
    if m is None:
        m = len(model.observed)
    if m < 0 or m > spec.n:
        raise ValueError(f"m={m} outside 0..{spec.n}")
    if m > len(model.observed):
        raise WorldBeyondObservation(f"only {len(model.observed)} outcomes observed")
    seen = outcome_counts(model.observed[:m], spec.atoms)
    want = spec.counts()
    if any(seen[p] > want[p] for p in spec.atoms):
        return 0
    free = spec.n - m
    total = 1
    for p in spec.atoms:
        d = want[p] - seen[p]
        total *= math.comb(free, d)
        free -= d
    return total


def next_value_atomic(model: Model, m: int, atom: str) -> Fraction:
    """Closed form for the single-step next value of a bare atom after m outcomes:
    (target count - observed count) / (n - m). Requires a compatible prefix; the
    value never depends on outcome weights."""
    spec = model.spec
    if atom not in spec.target:
        raise UnknownAtom(f"atom {atom!r} not in spec")
    if m < 0:
        raise ValueError(f"m={m} negative")
    if m >= spec.n:
        raise NextBeyondHorizon(f"no trial follows position {m} in a series of {spec.n}")
    if m > len(model.observed):
        raise WorldBeyondObservation(f"only {len(model.observed)} outcomes observed")
    seen = outcome_counts(model.observed[:m], spec.atoms)
    want = spec.counts()
    if any(seen[p] > want[p] for p in spec.atoms):
        raise IncompatiblePrefix(
            "no admissible assignment extends the observed prefix"
        )
    return Fraction(want[atom] - seen[atom], spec.n - m)


class Evaluator:
    """Caching evaluator bound to one model and engine.

    Reuse one instance when evaluating many formulas over the same model: truth
    values, per-world satisfaction fractions, prefix counts, and continuation
    groups are all memoized.
    """

    def __init__(self, model: Model, engine: Engine = Engine.ACCELERATED):
        self.model = model
        self.spec = model.spec
        self.engine = engine
        self.n = model.spec.n
        self._members: tuple | None = None
        self._truth_memo: dict = {}
        self._prefix_counts: dict = {}
        self._member_counts: dict = {}
        self._member_stats: dict = {}
        self._star_rows: dict = {}
        self._star_stats: dict = {}
        self._next_vals: dict = {}
        self._goal_cache: dict = {}
        self._groups: dict = {}
        self._want = model.spec.counts()

    @property
    def members(self) -> tuple:
        if self._members is None:
            self._members = tuple(iter_admissible(self.spec))
        return self._members

    # selector handling

    def _selkey(self, selector):
        if selector is OBSERVED:
            return _OBS_KEY
        if isinstance(selector, Member):
            a = selector.assignment
            if len(a) != self.n:
                raise ValueError(
                    f"assignment length {len(a)} does not match n={self.n}"
                )
            got = outcome_counts(a, self.spec.atoms)
            if got != self._want:
                raise ValueError("assignment is not admissible for this spec")
            return a
        raise TypeError(f"bad selector {selector!r}")

    def _outcome_at(self, selkey, w: int) -> str:
        if selkey == _OBS_KEY:
            if w > len(self.model.observed):
                raise WorldBeyondObservation(
                    f"world {w} beyond the {len(self.model.observed)} observed outcomes"
                )
            return self.model.observed[w - 1]
        return selkey[w - 1]

    def _prefix_of(self, selkey, m: int) -> tuple:
        if selkey == _OBS_KEY:
            if m > len(self.model.observed):
                raise WorldBeyondObservation(
                    f"continuations need the first {m} outcomes, "
                    f"only {len(self.model.observed)} observed"
                )
            return self.model.observed[:m]
        return selkey[:m]

    # memoized quantities

    def _prefix_count(self, f: Formula, selkey, m: int) -> int:
        key = (f, selkey)
        lst = self._prefix_counts.get(key)
        if lst is None:
            lst = [0]
            self._prefix_counts[key] = lst
        while len(lst) <= m:
            w = len(lst)
            lst.append(lst[-1] + (1 if self._truth(f, selkey, w) else 0))
        return lst[m]

    def _counts_over_members(self, f: Formula, m: int) -> list:
        key = (f, m)
        got = self._member_counts.get(key)
        if got is None:
            got = [self._prefix_count(f, a, m) for a in self.members]
            self._member_counts[key] = got
        return got

    def _member_ratio_stats(self, f: Formula, m: int) -> tuple:
        key = (f, m)
        stats = self._member_stats.get(key)
        if stats is None:
            ratios = [Fraction(c, m) for c in self._counts_over_members(f, m)]
            stats = (max(ratios), min(ratios), frozenset(ratios))
            self._member_stats[key] = stats
        return stats

    def _star_row(self, f: Formula) -> tuple:
        row = self._star_rows.get(f)
        if row is None:
            total = len(self.members)
            row = tuple(
                Fraction(sum(1 for a in self.members if self._truth(f, a, w)), total)
                for w in range(1, self.n + 1)
            )
            self._star_rows[f] = row
        return row

    def _star_row_stats(self, f: Formula) -> tuple:
        stats = self._star_stats.get(f)
        if stats is None:
            row = self._star_row(f)
            stats = (max(row), min(row), frozenset(row))
            self._star_stats[f] = stats
        return stats

    def _group(self, selkey, m: int) -> tuple:
        prefix = self._prefix_of(selkey, m)
        groups = self._groups.get(m)
        if groups is None:
            groups = {}
            for a in self.members:
                groups.setdefault(a[:m], []).append(a)
            groups = {k: tuple(v) for k, v in groups.items()}
            self._groups[m] = groups
        return groups.get(prefix, ())

    def _next_value(self, f: Next, selkey, m: int) -> Fraction:
        """Scalar measure of a next node: the fraction of compatible continuations
        satisfying the (unfolded) operand at the next world, or 0 when none exist.

        A steps=i node is sugar for next applied to the unfolding
        phi | next[>=1](phi | ...) with i-1 inner nexts. Horizon errors follow the
        unfolding: the outer next needs a successor world, and when continuations
        exist, eager evaluation instantiates the deepest inner next at w_{m+i-1},
        raising whenever m+i overruns n. With no continuation at all the value is
        the degenerate 0 and the inner chain is never reached.
        """
        if m >= self.n:
            raise NextBeyondHorizon(
                f"no trial follows position {m} in a series of {self.n}"
            )
        shape = (f.operand, f.steps)
        goal = self._goal_cache.get(shape)
        if goal is None:
            goal = f.operand
            for _ in range(f.steps - 1):
                goal = Or(f.operand, Next(Comparator.GEQ, Fraction(1), 1, goal))
            self._goal_cache[shape] = goal
        key = (goal, selkey, m)
        value = self._next_vals.get(key)
        if value is not None:
            return value
        if (
            self.engine is Engine.ACCELERATED
            and f.steps == 1
            and isinstance(f.operand, Atom)
        ):
            prefix = self._prefix_of(selkey, m)
            seen = outcome_counts(prefix, self.spec.atoms)
            if any(seen[p] > self._want[p] for p in self.spec.atoms):
                value = Fraction(0)
            else:
                value = Fraction(self._want[f.operand.name] - seen[f.operand.name], self.n - m)
        else:
            group = self._group(selkey, m)
            if not group:
                value = Fraction(0)
            else:
                sat = sum(1 for a in group if self._truth(goal, a, m + 1))
                value = Fraction(sat, len(group))
        self._next_vals[key] = value
        return value

    # truth

    def _truth(self, f: Formula, selkey, w: int) -> bool:
        key = (f, selkey, w)
        memo = self._truth_memo
        if key in memo:
            return memo[key]
        if isinstance(f, Atom):
            value = self._outcome_at(selkey, w) == f.name
        elif isinstance(f, Not):
            value = not self._truth(f.operand, selkey, w)
        elif isinstance(f, And):
            left = self._truth(f.left, selkey, w)
            right = self._truth(f.right, selkey, w)
            value = left and right
        elif isinstance(f, Or):
            left = self._truth(f.left, selkey, w)
            right = self._truth(f.right, selkey, w)
            value = left or right
        elif isinstance(f, WhiteBox):
            c = self._prefix_count(f.operand, selkey, w)
            value = compare_measure(f.cmp, f.q, Fraction(c, w))
        elif isinstance(f, Circle):
            c = self._prefix_count(f.operand, selkey, w)
            value = compare_measure(f.cmp, f.q, Fraction(c, self.n))
        elif isinstance(f, BlackBox):
            value = _cmp_stats(f.cmp, f.q, self._member_ratio_stats(f.operand, w))
        elif isinstance(f, Star):
            if self.engine is Engine.ACCELERATED and is_propositional(f.operand):
                value = compare_measure(f.cmp, f.q, star_measure(self.spec, f.operand))
            else:
                value = _cmp_stats(f.cmp, f.q, self._star_row_stats(f.operand))
        elif isinstance(f, Next):
            value = compare_measure(f.cmp, f.q, self._next_value(f, selkey, w))
        else:
            raise TypeError(f"not a formula: {f!r}")
        memo[key] = value
        return value

    def _check_formula(self, f: Formula):
        for name in atoms_of(f):
            if name not in self.spec.target:
                raise UnknownAtom(f"atom {name!r} not in spec")

    def evaluate(self, f: Formula, world: int, selector=OBSERVED) -> bool:
        self._check_formula(f)
        if not 1 <= world <= self.n:
            raise ValueError(f"world {world} outside 1..{self.n}")
        return self._truth(f, self._selkey(selector), world)

    def max_index(self, op: str, f: Formula, world: int, selector=OBSERVED, steps: int = 1) -> Fraction:
        """Largest q for which op[>=q] f holds at the given world: the measured
        ratio for box/circ/next, the best member ratio for bbox, the best world
        fraction for star."""
        self._check_formula(f)
        if not 1 <= world <= self.n:
            raise ValueError(f"world {world} outside 1..{self.n}")
        selkey = self._selkey(selector)
        if op == "box":
            return Fraction(self._prefix_count(f, selkey, world), world)
        if op == "circ":
            return Fraction(self._prefix_count(f, selkey, world), self.n)
        if op == "bbox":
            return Fraction(max(self._counts_over_members(f, world)), world)
        if op == "star":
            if self.engine is Engine.ACCELERATED and is_propositional(f):
                return star_measure(self.spec, f)
            return max(self._star_row(f))
        if op == "next":
            return self._next_value(Next(Comparator.GEQ, Fraction(1), steps, f), selkey, world)
        raise ValueError(f"unknown operator tag {op!r}")


def evaluate(ctx: EvalContext, f: Formula, engine: Engine = Engine.ACCELERATED) -> bool:
    """Truth of f at ctx.world under ctx.selector."""
    return Evaluator(ctx.model, engine).evaluate(f, ctx.world, ctx.selector)


def max_index(ctx: EvalContext, op: str, f: Formula, engine: Engine = Engine.ACCELERATED, steps: int = 1) -> Fraction:
    return Evaluator(ctx.model, engine).max_index(op, f, ctx.world, ctx.selector, steps)


def _short(text: str, width: int = 48) -> str:
    return text if len(text) <= width else text[: width - 3] + "..."


def _sel_label(selector) -> str:
    if selector is OBSERVED:
        return "observed"
    return "member " + ",".join(selector.assignment)


def explain(ctx: EvalContext, f: Formula, engine: Engine = Engine.ACCELERATED) -> str:
    """Multi-line account of why f holds or fails at ctx: one line per node with
    the exact measured ratio behind each modal verdict."""
    ev = Evaluator(ctx.model, engine)
    ev._check_formula(f)
    if not 1 <= ctx.world <= ev.n:
        raise ValueError(f"world {ctx.world} outside 1..{ev.n}")
    selkey = ev._selkey(ctx.selector)
    lines = [f"model: n={ev.n}, selector: {_sel_label(ctx.selector)}"]
    _explain(ev, f, selkey, ctx.world, 0, lines)
    return "\n".join(lines)


def _verdict(b: bool) -> str:
    return "true" if b else "false"


def _explain(ev: Evaluator, f: Formula, selkey, w: int, depth: int, lines: list):
    pad = "  " * depth
    head = _short(render(f))
    value = ev._truth(f, selkey, w)
    if isinstance(f, Atom):
        got = ev._outcome_at(selkey, w)
        lines.append(f"{pad}{head} @ w{w}: outcome is {got} -> {_verdict(value)}")
        return
    if isinstance(f, Not):
        lines.append(f"{pad}{head} @ w{w} -> {_verdict(value)}")
        _explain(ev, f.operand, selkey, w, depth + 1, lines)
        return
    if isinstance(f, (And, Or)):
        lines.append(f"{pad}{head} @ w{w} -> {_verdict(value)}")
        _explain(ev, f.left, selkey, w, depth + 1, lines)
        _explain(ev, f.right, selkey, w, depth + 1, lines)
        return
    if isinstance(f, (WhiteBox, Circle)):
        c = ev._prefix_count(f.operand, selkey, w)
        den = w if isinstance(f, WhiteBox) else ev.n
        lines.append(
            f"{pad}{head} @ w{w}: operand held in {c} of the first {w} worlds, "
            f"measure {Fraction(c, den)} -> {_verdict(value)}"
        )
        _explain(ev, f.operand, selkey, w, depth + 1, lines)
        return
    if isinstance(f, BlackBox):
        counts = ev._counts_over_members(f.operand, w)
        hist = Counter(Fraction(c, w) for c in counts)
        shown = sorted(hist)
        body = ", ".join(f"{frac}x{hist[frac]}" for frac in shown[:8])
        if len(shown) > 8:
            body += ", ..."
        lines.append(
            f"{pad}{head} @ w{w}: member ratios {{{body}}} over {len(counts)} "
            f"assignments -> {_verdict(value)}"
        )
        return
    if isinstance(f, Star):
        if ev.engine is Engine.ACCELERATED and is_propositional(f.operand):
            mu = star_measure(ev.spec, f.operand)
            lines.append(
                f"{pad}{head}: operand outcome measure {mu} at every world "
                f"-> {_verdict(value)}"
            )
            return
        row = ev._star_row(f.operand)
        body = ", ".join(f"w{i + 1}={frac}" for i, frac in enumerate(row[:8]))
        if len(row) > 8:
            body += ", ..."
        lines.append(
            f"{pad}{head}: per-world satisfaction fractions {body} "
            f"(max {max(row)}, min {min(row)}) -> {_verdict(value)}"
        )
        return
    if isinstance(f, Next):
        v = ev._next_value(f, selkey, w)
        group = None
        if not (
            ev.engine is Engine.ACCELERATED
            and f.steps == 1
            and isinstance(f.operand, Atom)
        ):
            group = ev._group(selkey, w)
        if group is None:
            detail = f"closed-form continuation value {v}"
        elif not group:
            detail = "no compatible continuation, value 0"
        else:
            detail = (
                f"{v * len(group)} of {len(group)} compatible continuations "
                f"satisfy the operand within {f.steps} step(s), value {v}"
            )
        lines.append(f"{pad}{head} @ w{w}: {detail} -> {_verdict(value)}")
        return
    raise TypeError(f"not a formula: {f!r}")
