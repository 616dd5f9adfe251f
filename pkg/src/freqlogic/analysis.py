"""Frequency analyses over a model: observed frequencies, compatibility verdicts,
exact completion probabilities, next-step distributions and their recurrence,
realization points, and joint-frequency feasibility.

All probabilities are exact rationals. Operations taking a world index m accept
m = 0 for the pre-series state where that makes sense.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .core import (
    FreqLogicError,
    Model,
    SpecError,
    UnknownAtom,
    WorldBeyondObservation,
    as_probability,
    iter_admissible,
    outcome_counts,
)
from .formula import (
    And,
    Atom,
    BlackBox,
    Circle,
    Comparator,
    Formula,
    Not,
    Or,
    Star,
    WhiteBox,
)
from .semantics import (
    OBSERVED,
    Engine,
    Evaluator,
    Member,
    compare_measure,
    count_compatible,
    next_value_atomic,
)


@dataclass(frozen=True)
class CompatibilityVerdict:
    """Outcome of the prefix-compatibility bounds check at a world.

    `bounds` maps each atom to (observed count, target count). When incompatible,
    `witness_atom` names the first over-target atom and `witness_formula` is a
    formula (the atom's over-shot share is observed, yet no admissible assignment
    ever reaches it) that is true at the offending world exactly because of the
    violation.
    """

    compatible: bool
    world: int
    bounds: dict
    witness_atom: str | None = None
    witness_formula: Formula | None = None

    @property
    def status(self) -> str:
        return "COMPATIBLE" if self.compatible else "INCOMPATIBLE"


def observed_frequency(model: Model, m: int, f: Formula) -> Fraction:
    """Relative frequency of f over the first m observed worlds (count / m)."""
    if m < 1:
        raise ValueError(f"m={m} must be at least 1")
    return Evaluator(model).max_index("box", f, m, OBSERVED)


def check_compatibility(model: Model, m: int | None = None) -> CompatibilityVerdict:
    """Bounds verdict: the prefix extends to an admissible assignment iff every
    atom satisfies observed <= target and target - observed <= n - m."""
    spec = model.spec
    if m is None:
        m = len(model.observed)
    if m < 0 or m > spec.n:
        raise ValueError(f"m={m} outside 0..{spec.n}")
    if m > len(model.observed):
        raise WorldBeyondObservation(f"only {len(model.observed)} outcomes observed")
    seen = outcome_counts(model.observed[:m], spec.atoms)
    want = spec.counts()
    bounds = {p: (seen[p], want[p]) for p in spec.atoms}
    # Counts on both sides sum to m and n, so an atom under-reachable within the
    # remaining n - m slots forces another one over target. Scanning for the
    # over-target atom alone therefore decides both bounds.
    bad = next((p for p in spec.atoms if seen[p] > want[p]), None)
    if bad is None:
        return CompatibilityVerdict(True, m, bounds)
    q = Fraction(seen[bad], spec.n)
    witness = And(Circle(Comparator.GEQ, q, Atom(bad)), Not(Star(Comparator.GEQ, q, Atom(bad))))
    return CompatibilityVerdict(False, m, bounds, bad, witness)


def completion_probability(model: Model, m: int | None = None) -> Fraction:
    """Probability that a uniformly random completion of the first m outcomes
    realizes the target frequencies: compatible count over |atoms|^(n-m).
    Ignores any weights on the model; see completion_probability_weighted."""
    spec = model.spec
    if m is None:
        m = len(model.observed)
    count = count_compatible(model, m)
    return Fraction(count, len(spec.atoms) ** (spec.n - m))


def completion_probability_weighted(model: Model, m: int | None = None) -> Fraction:
    """Completion probability when each remaining trial draws atom p independently
    with probability weights[p]: the compatible-arrangement count times the weight
    of any single compatible completion."""
    spec = model.spec
    if model.weights is None:
        raise SpecError("model has no outcome weights")
    if m is None:
        m = len(model.observed)
    if m < 0 or m > spec.n:
        raise ValueError(f"m={m} outside 0..{spec.n}")
    if m > len(model.observed):
        raise WorldBeyondObservation(f"only {len(model.observed)} outcomes observed")
    seen = outcome_counts(model.observed[:m], spec.atoms)
    want = spec.counts()
    if any(seen[p] > want[p] for p in spec.atoms):
        return Fraction(0)
    prob = Fraction(1)
    free = spec.n - m
    for p in spec.atoms:
        d = want[p] - seen[p]
        prob *= math.comb(free, d) * model.weights[p] ** d
        free -= d
    return prob


def next_outcome_distribution(model: Model, m: int | None = None) -> dict:
    """Exact conditional probability of each atom at trial m+1, given that the
    whole series realizes the target frequencies. Values sum to 1."""
    if m is None:
        m = len(model.observed)
    return {p: next_value_atomic(model, m, p) for p in model.spec.atoms}


def step_probability_update(P_m, q_next, model: Model, observed_atom: str) -> Fraction:
    """Advance the completion probability by one observed outcome.

    Uniform case: P_{m+1} = P_m * q * |atoms|; weighted: P_{m+1} = P_m * q / w[p],
    where q is the next-operator value of the observed atom at w_m. Zero stays
    zero without touching the weights (q or P being 0 pins the product)."""
    if observed_atom not in model.spec.target:
        raise UnknownAtom(f"atom {observed_atom!r} not in spec")
    P = as_probability(P_m)
    q = as_probability(q_next)
    if P == 0 or q == 0:
        return Fraction(0)
    if model.weights is not None:
        return P * q / model.weights[observed_atom]
    return P * q * len(model.spec.atoms)


def frequency_lcd(spec) -> int:
    """Least m making every m * target[p] integral; zero-frequency atoms are
    never assigned and do not constrain it."""
    denoms = [spec.target[p].denominator for p in spec.atoms if spec.target[p] != 0]
    return math.lcm(*denoms)


def realization_points(model: Model) -> set:
    """Worlds m where some admissible assignment hits the exact target proportions
    within the first m trials: the multiples of the frequency LCD."""
    lcd = frequency_lcd(model.spec)
    return set(range(lcd, model.spec.n + 1, lcd))


def realization_points_by_peak(model: Model, engine: Engine = Engine.ACCELERATED) -> set:
    """Realization points located semantically: worlds where the best admissible
    prefix-share of "every atom at target frequency" strictly peaks against both
    neighbors.

    Agrees with realization_points whenever the frequency LCD is at least 2. In
    the degenerate single-outcome case (LCD 1) the share is constant 1, no strict
    peak exists for n >= 2, and the two characterizations part ways.
    """
    spec = model.spec
    chi: Formula = WhiteBox(Comparator.GEQ, spec.target[spec.atoms[0]], Atom(spec.atoms[0]))
    for p in spec.atoms[1:]:
        chi = And(chi, WhiteBox(Comparator.GEQ, spec.target[p], Atom(p)))
    ev = Evaluator(model, engine)
    ratios = [ev.max_index("bbox", chi, m) for m in range(1, spec.n + 1)]
    points = set()
    for m in range(1, spec.n + 1):
        left = ratios[m - 2] if m > 1 else -1
        right = ratios[m] if m < spec.n else -1
        if ratios[m - 1] > left and ratios[m - 1] > right:
            points.add(m)
    return points


def joint_frequency_exists(model: Model, m: int, constraints, engine: Engine = Engine.ACCELERATED) -> bool:
    """Whether one admissible assignment meets every (formula, comparator, q)
    prefix-frequency constraint simultaneously at world m.

    Decided twice on purpose: by direct enumeration, and by evaluating the
    encoding that pins the world with an exact circle index and searches members
    through a black box. Disagreement raises (it would mean an evaluator bug).
    """
    spec = model.spec
    if not 1 <= m <= spec.n:
        raise ValueError(f"m={m} outside 1..{spec.n}")
    ev = Evaluator(model, engine)
    triples = [(f, cmp, as_probability(q)) for (f, cmp, q) in constraints]

    direct = any(
        all(
            compare_measure(cmp, q, ev.max_index("box", f, m, Member(a)))
            for (f, cmp, q) in triples
        )
        for a in ev.members
    )

    taut = Or(Atom(spec.atoms[0]), Not(Atom(spec.atoms[0])))
    pin = Circle(Comparator.EQ, Fraction(m, spec.n), taut)
    inner: Formula = pin
    for (f, cmp, q) in triples:
        inner = And(inner, WhiteBox(cmp, q, f))
    encoded = And(pin, BlackBox(Comparator.GEQ, Fraction(1, m), inner))
    by_formula = ev.evaluate(encoded, m, Member(next(iter_admissible(spec))))

    if direct != by_formula:
        raise FreqLogicError(
            f"joint-frequency routes disagree at m={m}: "
            f"enumeration={direct}, encoding={by_formula}"
        )
    return direct
