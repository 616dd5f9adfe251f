"""Formula AST, concrete syntax, and structural transforms.

Concrete syntax, tightest first: atoms and parentheses, then prefix operators
(`!`, and the modalities `box`, `bbox`, `circ`, `next`, `star`, each carrying an
index like `[>=2/3]` or `[max 1/2]`), then `&`, then `|`. A modality binds to the
smallest formula that follows it, so `!box[>=1] a & b` reads as `(!(box[>=1] a)) & b`.
`next` optionally takes a step horizon: `next^3[>=1/2] phi`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, fields
from enum import Enum
from fractions import Fraction

from .core import FormulaError, as_probability


class Comparator(Enum):
    GEQ = ">="
    LEQ = "<="
    LT = "<"
    GT = ">"
    EQ = "="
    MAX = "max"


@dataclass(frozen=True)
class Formula:
    # Formula trees are used as cache keys throughout evaluation, so the
    # structural hash is computed once per node and remembered.
    def __hash__(self):
        try:
            return self._hash
        except AttributeError:
            cls = type(self)
            h = hash((cls,) + tuple(getattr(self, n) for n in cls._hash_names))
            object.__setattr__(self, "_hash", h)
            return h


@dataclass(frozen=True)
class Atom(Formula):
    name: str

    __hash__ = Formula.__hash__


@dataclass(frozen=True)
class Not(Formula):
    operand: Formula

    __hash__ = Formula.__hash__


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula

    __hash__ = Formula.__hash__


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula

    __hash__ = Formula.__hash__


@dataclass(frozen=True)
class _Modal(Formula):
    cmp: Comparator
    q: Fraction
    operand: Formula

    def __post_init__(self):
        object.__setattr__(self, "q", as_probability(self.q))

    __hash__ = Formula.__hash__


@dataclass(frozen=True)
class WhiteBox(_Modal):
    """Share of the worlds up to and including the current one where the operand held."""

    __hash__ = Formula.__hash__


@dataclass(frozen=True)
class BlackBox(_Modal):
    """Like WhiteBox, but existential over all admissible assignments."""

    __hash__ = Formula.__hash__


@dataclass(frozen=True)
class Circle(_Modal):
    """Count of operand-worlds up to the current one, divided by the full length n."""

    __hash__ = Formula.__hash__


@dataclass(frozen=True)
class Star(_Modal):
    """Existential over worlds of the fraction of admissible assignments satisfying
    the operand there."""

    __hash__ = Formula.__hash__


@dataclass(frozen=True)
class Next(Formula):
    """Fraction of compatible continuations satisfying the operand within the next
    `steps` trials."""

    cmp: Comparator
    q: Fraction
    steps: int
    operand: Formula

    def __post_init__(self):
        object.__setattr__(self, "q", as_probability(self.q))
        if not isinstance(self.steps, int) or self.steps < 1:
            raise ValueError(f"next step horizon must be a positive int, got {self.steps}")

    __hash__ = Formula.__hash__


for _node in (Atom, Not, And, Or, WhiteBox, BlackBox, Circle, Star, Next):
    _node._hash_names = tuple(f.name for f in fields(_node))

_MODAL_NAMES = {
    "box": WhiteBox,
    "bbox": BlackBox,
    "circ": Circle,
    "star": Star,
    "next": Next,
}

_TOKEN = re.compile(
    r"""\s*(?:
        (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
      | (?P<num>\d+)
      | (?P<cmp>>=|<=|<|>|=)
      | (?P<punct>[!&|()\[\]/^])
    )""",
    re.VERBOSE,
)


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens: list = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                stripped = text[pos:].lstrip()
                if not stripped:
                    break
                at = len(text) - len(stripped)
                raise FormulaError(f"unexpected character {text[at]!r}", at)
            pos = m.end()
            for kind in ("ident", "num", "cmp", "punct"):
                if m[kind] is not None:
                    self.tokens.append((kind, m[kind], m.start(kind)))
                    break
        self.tokens.append(("eof", "", len(text)))
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str, value: str | None = None):
        tok = self.next()
        if tok[0] != kind or (value is not None and tok[1] != value):
            want = value if value is not None else kind
            found = repr(tok[1]) if tok[1] else "end of input"
            raise FormulaError(f"expected {want!r}, found {found}", tok[2])
        return tok

    def parse(self) -> Formula:
        f = self.or_expr()
        tok = self.peek()
        if tok[0] != "eof":
            raise FormulaError(f"trailing input {tok[1]!r}", tok[2])
        return f

    def or_expr(self) -> Formula:
        f = self.and_expr()
        while self.peek()[:2] == ("punct", "|"):
            self.next()
            f = Or(f, self.and_expr())
        return f

    def and_expr(self) -> Formula:
        f = self.unary()
        while self.peek()[:2] == ("punct", "&"):
            self.next()
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        kind, value, pos = self.peek()
        if (kind, value) == ("punct", "!"):
            self.next()
            return Not(self.unary())
        if kind == "ident" and value in _MODAL_NAMES:
            return self.modal()
        return self.primary()

    def modal(self) -> Formula:
        kind, name, pos = self.next()
        steps = 1
        if self.peek()[:2] == ("punct", "^"):
            if name != "next":
                raise FormulaError("step horizon is only valid on next", self.peek()[2])
            self.next()
            tok = self.expect("num")
            steps = int(tok[1])
            if steps < 1:
                raise FormulaError("step horizon must be positive", tok[2])
        self.expect("punct", "[")
        kind, value, pos = self.peek()
        if (kind, value) == ("ident", "max"):
            self.next()
            cmp = Comparator.MAX
        elif kind == "cmp":
            self.next()
            cmp = Comparator(value)
        else:
            raise FormulaError("expected a comparator or 'max' in the index", pos)
        q = self.fraction()
        self.expect("punct", "]")
        operand = self.unary()
        cls = _MODAL_NAMES[name]
        if cls is Next:
            return Next(cmp, q, steps, operand)
        return cls(cmp, q, operand)

    def fraction(self) -> Fraction:
        tok = self.expect("num")
        num = int(tok[1])
        den = 1
        if self.peek()[:2] == ("punct", "/"):
            self.next()
            den = int(self.expect("num")[1])
            if den == 0:
                raise FormulaError("zero denominator", tok[2])
        q = Fraction(num, den)
        if q > 1:
            raise FormulaError(f"probability {q} outside [0, 1]", tok[2])
        return q

    def primary(self) -> Formula:
        kind, value, pos = self.next()
        if kind == "ident":
            return Atom(value)
        if (kind, value) == ("punct", "("):
            f = self.or_expr()
            self.expect("punct", ")")
            return f
        found = repr(value) if value else "end of input"
        raise FormulaError(f"expected an atom, '(', '!', or a modality, found {found}", pos)


def parse(text: str) -> Formula:
    """Parse concrete syntax into a Formula; raises FormulaError with a position."""
    return _Parser(text).parse()


def _fmt_q(q: Fraction) -> str:
    return str(q) if q.denominator > 1 else str(q.numerator)


def _index_str(cmp: Comparator, q: Fraction) -> str:
    if cmp is Comparator.MAX:
        return f"[max {_fmt_q(q)}]"
    return f"[{cmp.value}{_fmt_q(q)}]"


_MODAL_BY_CLASS = {cls: name for name, cls in _MODAL_NAMES.items()}


def render(f: Formula) -> str:
    """Concrete syntax for f, parenthesized only where precedence demands it.

    `parse(render(f))` reproduces f exactly.
    """
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Not):
        return "!" + _wrap_unary(f.operand)
    if isinstance(f, And):
        left = _wrap(f.left, (Or,))
        right = _wrap(f.right, (Or, And))
        return f"{left} & {right}"
    if isinstance(f, Or):
        right = _wrap(f.right, (Or,))
        return f"{render(f.left)} | {right}"
    if isinstance(f, Next):
        head = "next" if f.steps == 1 else f"next^{f.steps}"
        return f"{head}{_index_str(f.cmp, f.q)} {_wrap_unary(f.operand)}"
    if isinstance(f, _Modal):
        name = _MODAL_BY_CLASS[type(f)]
        return f"{name}{_index_str(f.cmp, f.q)} {_wrap_unary(f.operand)}"
    raise TypeError(f"not a formula: {f!r}")


def _wrap(f: Formula, grouped: tuple) -> str:
    s = render(f)
    return f"({s})" if isinstance(f, grouped) else s


def _wrap_unary(f: Formula) -> str:
    return _wrap(f, (And, Or))


def atoms_of(f: Formula) -> frozenset:
    """All atom names occurring in f."""
    if isinstance(f, Atom):
        return frozenset((f.name,))
    if isinstance(f, Not):
        return atoms_of(f.operand)
    if isinstance(f, (And, Or)):
        return atoms_of(f.left) | atoms_of(f.right)
    if isinstance(f, (_Modal, Next)):
        return atoms_of(f.operand)
    raise TypeError(f"not a formula: {f!r}")


def is_propositional(f: Formula) -> bool:
    """True iff f contains no modal operator."""
    if isinstance(f, Atom):
        return True
    if isinstance(f, Not):
        return is_propositional(f.operand)
    if isinstance(f, (And, Or)):
        return is_propositional(f.left) and is_propositional(f.right)
    return False


def expand_indexed_next(f: Formula) -> Formula:
    """Rewrite every next^i with i > 1 into nested single-step nexts.

    Uses the unfolding phi_1 = phi, phi_{k+1} = phi | next[>=1] phi_k, and replaces
    next^i[cmp q] phi with next[cmp q] phi_i applied bottom-up.
    """
    if isinstance(f, Atom):
        return f
    if isinstance(f, Not):
        return Not(expand_indexed_next(f.operand))
    if isinstance(f, And):
        return And(expand_indexed_next(f.left), expand_indexed_next(f.right))
    if isinstance(f, Or):
        return Or(expand_indexed_next(f.left), expand_indexed_next(f.right))
    if isinstance(f, Next):
        inner = expand_indexed_next(f.operand)
        if f.steps == 1:
            return Next(f.cmp, f.q, 1, inner)
        acc = inner
        for _ in range(f.steps - 1):
            acc = Or(inner, Next(Comparator.GEQ, Fraction(1), 1, acc))
        return Next(f.cmp, f.q, 1, acc)
    if isinstance(f, _Modal):
        return type(f)(f.cmp, f.q, expand_indexed_next(f.operand))
    raise TypeError(f"not a formula: {f!r}")
