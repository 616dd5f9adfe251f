"""Frequency specifications, assignments, models, and admissible-set combinatorics.

A frequency spec fixes a finite alphabet of mutually exclusive outcomes, a target
relative frequency for each, and a series length n. The "admissible assignments" are
all length-n outcome sequences whose final per-atom counts hit the targets exactly;
everything else in the package quantifies over that set.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping, Sequence


class FreqLogicError(Exception):
    """Base class for all errors raised by this package."""


class SpecError(FreqLogicError):
    pass


class NonUnitMass(SpecError):
    """Target frequencies (or outcome weights) do not sum to exactly 1."""


class NonIntegralCount(SpecError):
    """Some target frequency times n is not an integer, so no assignment can realize it."""


class BadProbability(FreqLogicError):
    """A probability value outside [0, 1] or not an exact rational."""


class UnknownAtom(FreqLogicError):
    pass


class FormulaError(FreqLogicError):
    """Concrete-syntax parse error; `position` is a 0-based offset into the input."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class WorldBeyondObservation(FreqLogicError):
    """Evaluation under the observed selector required a position past the prefix."""


class NextBeyondHorizon(FreqLogicError):
    """A next operator was instantiated at a world with no successor inside the series."""


class IncompatiblePrefix(FreqLogicError):
    """No admissible assignment extends the observed prefix."""


class NonPropositional(FreqLogicError):
    """A modal operator occurred where only atoms and connectives are allowed."""


class SeriesComplete(FreqLogicError):
    pass


class SeriesIncomplete(FreqLogicError):
    pass


class UnknownLaw(FreqLogicError):
    pass


class ModelFileError(FreqLogicError):
    """Malformed model file; message includes the offending line number."""


Assignment = tuple  # length-n tuple of atom names
Observation = tuple  # length-m prefix, 0 <= m <= n

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


def as_probability(value) -> Fraction:
    """Coerce to an exact Fraction in [0, 1]."""
    if type(value) is Fraction:
        q = value
    else:
        try:
            q = Fraction(value)
        except (ValueError, TypeError, ZeroDivisionError) as exc:
            raise BadProbability(f"not an exact rational: {value!r}") from exc
    if q < 0 or q > 1:
        raise BadProbability(f"probability {q} outside [0, 1]")
    return q


def parse_probability(text: str) -> Fraction:
    """Parse '<int>' or '<int>/<int>' into a probability."""
    s = text.strip()
    if not re.fullmatch(r"\d+(/\d+)?", s):
        raise BadProbability(f"malformed probability {text!r}")
    return as_probability(s)


@dataclass(frozen=True)
class FrequencySpec:
    """Outcome alphabet with target relative frequencies over a series of length n.

    `atoms` order is significant: it fixes the enumeration order of admissible
    assignments and the display order everywhere.
    """

    atoms: tuple
    target: Mapping
    n: int

    def __post_init__(self):
        object.__setattr__(self, "atoms", tuple(self.atoms))
        object.__setattr__(
            self, "target", {a: Fraction(v) for a, v in dict(self.target).items()}
        )

    def counts(self) -> dict:
        """Exact per-atom counts target[p] * n (validation guarantees integrality)."""
        return {a: int(self.target[a] * self.n) for a in self.atoms}


def validate_spec(spec: FrequencySpec) -> FrequencySpec:
    """Check spec invariants; return the spec unchanged if they hold.

    Raises NonUnitMass when the targets do not sum to 1, NonIntegralCount when some
    target[p] * n is fractional, SpecError on structural defects (empty or duplicate
    atom list, bad names, n < 1, target keys not matching atoms).
    """
    if not spec.atoms:
        raise SpecError("spec needs at least one atom")
    if len(set(spec.atoms)) != len(spec.atoms):
        raise SpecError("duplicate atom names")
    for a in spec.atoms:
        if not _IDENT.match(a):
            raise SpecError(f"bad atom name {a!r}")
    if set(spec.target) != set(spec.atoms):
        raise SpecError("target frequencies must cover exactly the declared atoms")
    if spec.n < 1:
        raise SpecError(f"series length must be positive, got {spec.n}")
    mass = sum(spec.target.values())
    if mass != 1:
        raise NonUnitMass(f"target frequencies sum to {mass}, not 1")
    for a in spec.atoms:
        q = spec.target[a]
        if q < 0:
            raise SpecError(f"negative target frequency for {a}")
        if (q * spec.n).denominator != 1:
            raise NonIntegralCount(
                f"target {q} for {a} times n={spec.n} is not an integer"
            )
    return spec


def count_admissible(spec: FrequencySpec) -> int:
    """Number of admissible assignments: n! / prod(count_p!)."""
    validate_spec(spec)
    total = math.factorial(spec.n)
    for c in spec.counts().values():
        total //= math.factorial(c)
    return total


def iter_admissible(spec: FrequencySpec) -> Iterator[tuple]:
    """Yield every admissible assignment exactly once, lexicographically in the
    declared atom order."""
    validate_spec(spec)
    counts = spec.counts()
    remaining = [counts[a] for a in spec.atoms]
    out: list = []

    def rec(pos: int) -> Iterator[tuple]:
        if pos == spec.n:
            yield tuple(out)
            return
        for i, atom in enumerate(spec.atoms):
            if remaining[i]:
                remaining[i] -= 1
                out.append(atom)
                yield from rec(pos + 1)
                out.pop()
                remaining[i] += 1

    yield from rec(0)


def extends(prefix: Sequence, assignment: Sequence) -> bool:
    """True iff the assignment agrees with the prefix on positions 1..len(prefix)."""
    if len(prefix) > len(assignment):
        raise ValueError("prefix longer than assignment")
    return tuple(assignment[: len(prefix)]) == tuple(prefix)


def outcome_counts(seq: Sequence, atoms: Sequence) -> dict:
    counts = {a: 0 for a in atoms}
    for x in seq:
        if x not in counts:
            raise UnknownAtom(f"outcome {x!r} not in spec atoms")
        counts[x] += 1
    return counts


@dataclass(frozen=True)
class Model:
    """A validated spec plus the observed prefix and optional per-trial weights.

    Weights, when present, cover exactly the spec atoms and sum to 1; they drive the
    weighted completion probability but never affect formula truth.
    """

    spec: FrequencySpec
    observed: tuple = ()
    weights: Mapping | None = None

    def __post_init__(self):
        object.__setattr__(self, "observed", tuple(self.observed))
        validate_spec(self.spec)
        if len(self.observed) > self.spec.n:
            raise SpecError(
                f"observation length {len(self.observed)} exceeds n={self.spec.n}"
            )
        for a in self.observed:
            if a not in self.spec.target:
                raise UnknownAtom(f"observed outcome {a!r} not in spec atoms")
        if self.weights is not None:
            w = {a: Fraction(v) for a, v in dict(self.weights).items()}
            object.__setattr__(self, "weights", w)
            if set(w) != set(self.spec.atoms):
                raise SpecError("weights must cover exactly the spec atoms")
            if any(v < 0 for v in w.values()):
                raise SpecError("negative outcome weight")
            if sum(w.values()) != 1:
                raise NonUnitMass(f"weights sum to {sum(w.values())}, not 1")


_MODEL_LINE = re.compile(
    r"""^\s*(?:
        n\s*=\s*(?P<n>\d+)
      | freq\s+(?P<fatom>\w+)\s*=\s*(?P<ffrac>\d+(?:/\d+)?)
      | weight\s+(?P<watom>\w+)\s*=\s*(?P<wfrac>\d+(?:/\d+)?)
      | obs\s*=\s*(?P<obs>.*?)
    )\s*$""",
    re.VERBOSE,
)


def load_model(text: str) -> Model:
    """Parse the line-oriented model format.

    Grammar (one directive per line, '#' comments and blank lines ignored):

        n = <int>
        freq <atom> = <int>[/<int>]      (one per atom; order fixes atom order)
        weight <atom> = <int>[/<int>]    (optional; all atoms or none)
        obs = <atom>[,<atom>...]         (optional; may be empty)
    """
    n = None
    atoms: list = []
    target: dict = {}
    weights: dict = {}
    observed: tuple = ()
    saw_obs = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _MODEL_LINE.match(line)
        if not m:
            raise ModelFileError(f"line {lineno}: cannot parse {line!r}")
        if m["n"] is not None:
            if n is not None:
                raise ModelFileError(f"line {lineno}: duplicate n")
            n = int(m["n"])
        elif m["fatom"] is not None:
            a = m["fatom"]
            if a in target:
                raise ModelFileError(f"line {lineno}: duplicate freq for {a}")
            atoms.append(a)
            target[a] = parse_probability(m["ffrac"])
        elif m["watom"] is not None:
            a = m["watom"]
            if a in weights:
                raise ModelFileError(f"line {lineno}: duplicate weight for {a}")
            weights[a] = parse_probability(m["wfrac"])
        else:
            if saw_obs:
                raise ModelFileError(f"line {lineno}: duplicate obs")
            saw_obs = True
            body = m["obs"].strip()
            observed = tuple(s.strip() for s in body.split(",") if s.strip())
    if n is None:
        raise ModelFileError("missing 'n = <int>' line")
    if not atoms:
        raise ModelFileError("missing 'freq <atom> = ...' lines")
    spec = FrequencySpec(tuple(atoms), target, n)
    return Model(spec, observed, weights or None)


def load_model_file(path: str) -> Model:
    with open(path, encoding="utf-8") as fh:
        return load_model(fh.read())
