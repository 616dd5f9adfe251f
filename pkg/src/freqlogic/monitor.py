"""Streaming runtime monitor: feed outcomes one at a time, get an exact verdict
and probability report after each, and a membership summary at the end.

The running completion probability is advanced by the one-step recurrence
(multiply by the next-operator value of the observed atom, rescaled). With
debug checking on (the default), every step also recomputes it from scratch
and any mismatch raises instead of reporting a wrong number.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .analysis import (
    CompatibilityVerdict,
    check_compatibility,
    completion_probability,
    completion_probability_weighted,
    next_outcome_distribution,
    step_probability_update,
)
from .core import (
    FreqLogicError,
    FrequencySpec,
    Model,
    SeriesComplete,
    SeriesIncomplete,
    UnknownAtom,
)
from .semantics import next_value_atomic


@dataclass(frozen=True)
class MonitorConfig:
    """debug_check recomputes the running probability from scratch each step and
    raises on any disagreement with the recurrence. Disable it explicitly for
    long series once trusted."""

    debug_check: bool = True


@dataclass(frozen=True)
class StepReport:
    """Snapshot after ingesting one outcome.

    next_dist is None once the series is complete or the prefix can no longer
    be completed (there is no conditional next distribution to report).
    first_violation is the 1-based step at which compatibility was first lost,
    or None while the prefix is still viable.
    """

    step: int
    outcome: str
    observed_freq: dict
    verdict: CompatibilityVerdict
    completion_prob: Fraction
    next_dist: dict | None
    first_violation: int | None

    @property
    def compatible(self) -> bool:
        return self.verdict.compatible


@dataclass(frozen=True)
class SummaryReport:
    """End-of-series summary: whether the full trace is an admissible
    assignment, the exact final frequencies, and the first violation step."""

    steps: int
    member: bool
    final_freq: dict
    first_violation: int | None


@dataclass
class Monitor:
    """Mutable monitor state over one event series."""

    spec: FrequencySpec
    weights: dict | None = None
    config: MonitorConfig = field(default_factory=MonitorConfig)

    def __post_init__(self):
        # Model construction validates the spec and the weights.
        base = Model(self.spec, (), self.weights)
        self.weights = base.weights
        self._prefix: list = []
        self._counts = {p: 0 for p in self.spec.atoms}
        self.step = 0
        self.first_violation: int | None = None
        self.completion_prob = self._from_scratch(base)

    def _from_scratch(self, model: Model) -> Fraction:
        if self.weights is not None:
            return completion_probability_weighted(model)
        return completion_probability(model)

    def _model(self) -> Model:
        return Model(self.spec, tuple(self._prefix), self.weights)

    def ingest(self, outcome: str) -> StepReport:
        """Record the next outcome and report the resulting state."""
        if self.step >= self.spec.n:
            raise SeriesComplete(f"series of {self.spec.n} outcomes already complete")
        if outcome not in self.spec.target:
            raise UnknownAtom(f"atom {outcome!r} not in spec")

        before = self._model()
        if self.first_violation is None:
            q_next = next_value_atomic(before, self.step, outcome)
        else:
            q_next = Fraction(0)
        advanced = step_probability_update(self.completion_prob, q_next, before, outcome)

        self._prefix.append(outcome)
        self._counts[outcome] += 1
        self.step += 1
        now = self._model()

        if self.config.debug_check:
            fresh = self._from_scratch(now)
            if fresh != advanced:
                raise FreqLogicError(
                    f"step recurrence drifted at step {self.step}: "
                    f"{advanced} by recurrence, {fresh} from scratch"
                )
        self.completion_prob = advanced

        verdict = check_compatibility(now)
        if not verdict.compatible and self.first_violation is None:
            self.first_violation = self.step

        next_dist = None
        if self.step < self.spec.n and verdict.compatible:
            next_dist = next_outcome_distribution(now)

        return StepReport(
            step=self.step,
            outcome=outcome,
            observed_freq={p: Fraction(self._counts[p], self.step) for p in self.spec.atoms},
            verdict=verdict,
            completion_prob=self.completion_prob,
            next_dist=next_dist,
            first_violation=self.first_violation,
        )

    def finalize(self) -> SummaryReport:
        """Summary after all n outcomes; raises while the series is short."""
        if self.step < self.spec.n:
            raise SeriesIncomplete(
                f"observed {self.step} of {self.spec.n} outcomes"
            )
        want = self.spec.counts()
        member = all(self._counts[p] == want[p] for p in self.spec.atoms)
        if self.config.debug_check and member != (self.completion_prob == 1):
            raise FreqLogicError(
                "membership and completion probability disagree at the end"
            )
        return SummaryReport(
            steps=self.step,
            member=member,
            final_freq={p: Fraction(self._counts[p], self.spec.n) for p in self.spec.atoms},
            first_violation=self.first_violation,
        )


def load_trace(text: str, column: int | None = None) -> list:
    """Parse a trace: one outcome per line, blank lines and # comments skipped.
    With a column index, each line is split on commas first (no header row)."""
    out = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if column is not None:
            cells = [c.strip() for c in line.split(",")]
            if column >= len(cells):
                raise ValueError(
                    f"line {raw!r} has no column {column}"
                )
            out.append(cells[column])
        else:
            out.append(line)
    return out
