"""Fixed point data: canonical classes, collections, the five dimension-six
rewrite moves, and the localization-based validators.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .algebra import (
    InvalidWeight,
    Weight,
    as_weight,
    canonical_weight,
    dot,
    generic_covector,
    signature_constant,
)


class MoveError(ValueError):
    """A T62Move does not fit its schema or the collection it is applied to."""


@dataclass(frozen=True)
class FixedPointDatum:
    """Canonical representative [sign, w1, ..., wn].

    Build instances with make_datum; the constructor trusts its input.
    """

    sign: int
    weights: tuple[Weight, ...]

    @property
    def n(self) -> int:
        return len(self.weights)

    @property
    def k(self) -> int:
        return len(self.weights[0]) if self.weights else 0

    def sort_key(self):
        return (self.weights, -self.sign)

    def __lt__(self, other: "FixedPointDatum") -> bool:
        return self.sort_key() < other.sort_key()

    def __neg__(self) -> "FixedPointDatum":
        return FixedPointDatum(-self.sign, self.weights)

    def __str__(self) -> str:
        s = "+" if self.sign > 0 else "-"
        parts = [str(w[0]) if len(w) == 1 else "(" + ",".join(map(str, w)) + ")" for w in self.weights]
        return "[" + ",".join([s] + parts) + "]"

    __repr__ = __str__

    def scalars(self) -> tuple[int, ...]:
        """Weights as plain ints (k = 1 only)."""
        if self.k != 1:
            raise ValueError("scalar view needs k = 1")
        return tuple(w[0] for w in self.weights)


def make_datum(sign: int, raw_weights: Iterable) -> FixedPointDatum:
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    ws = []
    for w in raw_weights:
        cw, flipped = canonical_weight(w)
        if flipped:
            sign = -sign
        ws.append(cw)
    if not ws:
        raise InvalidWeight("a fixed point needs at least one weight")
    if len({len(w) for w in ws}) != 1:
        raise InvalidWeight("weights of mixed length")
    return FixedPointDatum(sign, tuple(sorted(ws)))


def negate_datum(d: FixedPointDatum) -> FixedPointDatum:
    return -d


def D(sign: int, *weights) -> FixedPointDatum:
    """Shorthand: D(+1, 1, 2, 3) is [+,1,2,3]."""
    return make_datum(sign, weights)


@dataclass(frozen=True)
class FixedPointCollection:
    """A multiset of fixed point data, kept as a sorted tuple."""

    k: int
    n: int
    points: tuple[FixedPointDatum, ...] = field(default=())

    def __post_init__(self):
        pts = tuple(sorted(self.points))
        for p in pts:
            if p.n != self.n or p.k != self.k:
                raise InvalidWeight(f"{p} does not have {self.n} weights in Z^{self.k}")
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def counter(self) -> Counter:
        return Counter(self.points)

    def replace(self, removed: Sequence[FixedPointDatum], added: Sequence[FixedPointDatum]) -> "FixedPointCollection":
        c = self.counter()
        for d in removed:
            if c[d] <= 0:
                raise MoveError(f"{d} is not in the collection")
            c[d] -= 1
        return FixedPointCollection(self.k, self.n, tuple(c.elements()) + tuple(added))

    def negated(self) -> "FixedPointCollection":
        return FixedPointCollection(self.k, self.n, tuple(-d for d in self.points))

    def max_weight(self) -> int:
        """Largest weight magnitude (k = 1)."""
        return max((abs(w[0]) for d in self.points for w in d.weights), default=0)

    def __str__(self) -> str:
        return "{" + ", ".join(map(str, self.points)) + "}"


def collection(k: int, n: int, data: Iterable[FixedPointDatum]) -> FixedPointCollection:
    return FixedPointCollection(k, n, tuple(data))


# ---------------------------------------------------------------- moves

MOVE_ARITY = {1: 0, 2: 2, 3: 4, 4: 4, 5: 8}


@dataclass(frozen=True)
class T62Move:
    op_id: int
    A: int
    B: int | None
    C: int
    orientation: int
    removed: tuple[FixedPointDatum, ...]
    added: tuple[FixedPointDatum, ...]

    def __str__(self) -> str:
        s = "+" if self.orientation > 0 else "-"
        if self.op_id == 1:
            return f"op1{s}({self.removed[0]})"
        params = f"A={self.A}" + (f",B={self.B}" if self.B is not None else "") + f",C={self.C}"
        return f"op{self.op_id}{s}({params})"


def _move_schema(op_id: int, A: int, B: int | None, C: int, s: int):
    """Removed and added data for one move, as in the five-operation theorem."""
    m = -s
    if op_id == 1:
        return [D(s, A, B, C), D(m, A, B, C)], []
    if op_id == 2:
        if not 0 < A < B < C:
            raise MoveError("op2 needs 0 < A < B < C")
        return (
            [D(s, A, B, C), D(m, C - A, C - B, C)],
            [D(s, A, B - A, C - A), D(m, B, B - A, C - B)],
        )
    if op_id == 3:
        if not (0 < A < C and 0 < B < C and A != B):
            raise MoveError("op3 needs 0 < A, B < C and A != B")
        return (
            [D(s, A, B, C), D(s, A, C - B, C)],
            [D(s, C - B, C - A, A), D(s, C - B, B, A), D(s, C - B, A - B, A), D(m, C - A, A - B, A)],
        )
    if op_id in (4, 5):
        if not 0 < A < C or C == 2 * A:
            raise MoveError(f"op{op_id} needs 0 < A < C and C != 2A")
        base = [D(s, C - A, C - 2 * A, A), D(s, C - A, A, A), D(s, C - A, A, A), D(m, C - 2 * A, A, A)]
        if op_id == 4:
            return [D(s, A, A, C), D(s, A, C - A, C)], base
        extra = [D(s, A, C - 2 * A, C - A), D(m, A, C - A, C - A), D(m, A, C - A, C - A), D(m, C - 2 * A, C - A, C - A)]
        return [D(s, C, A, A), D(m, C, C - A, C - A)], base + extra
    raise MoveError(f"unknown operation {op_id}")


def t62_move(op_id: int, A: int, B: int | None, C: int, orientation: int = 1) -> T62Move:
    """Build a move from its parameters; op1 uses A, B, C as the three weights."""
    if orientation not in (1, -1):
        raise MoveError("orientation must be +1 or -1")
    if op_id in (4, 5):
        B = None
    removed, added = _move_schema(op_id, A, B, C, orientation)
    return T62Move(op_id, A, B, C, orientation, tuple(removed), tuple(added))


def op1_move(d: FixedPointDatum) -> T62Move:
    """Remove d together with its negative."""
    a, b, c = d.scalars()
    return t62_move(1, a, b, c, d.sign)


def apply_t62(c: FixedPointCollection, m: T62Move) -> FixedPointCollection:
    if c.k != 1 or c.n != 3:
        raise MoveError("the five moves are defined for k = 1, n = 3")
    removed, added = _move_schema(m.op_id, m.A, m.B, m.C, m.orientation)
    if Counter(removed) != Counter(m.removed) or Counter(added) != Counter(m.added):
        raise MoveError(f"{m} does not match the schema of operation {m.op_id}")
    return c.replace(removed, added)


# ---------------------------------------------------------- validators


@dataclass(frozen=True)
class Verdict:
    ok: bool
    reason: str
    value: object = None

    def __bool__(self) -> bool:
        return self.ok


def circle_points(c: FixedPointCollection) -> list[tuple[int, list[int]]]:
    """Reduce to a circle action: integer weights, all positive, signs adjusted.

    For k = 1 this is the canonical form.  For k > 1 the weights are paired
    with a generic covector anchored at the first weight.
    """
    if not c.points:
        return []
    if c.k == 1:
        return [(d.sign, [w[0] for w in d.weights]) for d in c.points]
    ws = {w for d in c.points for w in d.weights}
    xi = generic_covector(sorted(ws), c.k, c.points[0].weights[0])
    out = []
    for d in c.points:
        sign, vals = d.sign, []
        for w in d.weights:
            v = dot(w, xi)
            if v < 0:
                sign, v = -sign, -v
            vals.append(v)
        out.append((sign, sorted(vals)))
    return out


def verify_abbv(c: FixedPointCollection) -> Verdict:
    """Sum of sign / product of weights; zero for every realizable collection."""
    total = Fraction(0)
    for sign, ws in circle_points(c):
        prod = 1
        for w in ws:
            prod *= w
        total += Fraction(sign, prod)
    return Verdict(total == 0, f"ABBV={total}", total)


def verify_signature(c: FixedPointCollection) -> Verdict:
    """Signature sum must be a constant integer, zero when n is odd."""
    const, value = signature_constant(circle_points(c))
    if not const:
        return Verdict(False, "signature sum is not constant", None)
    if c.n % 2 == 1 and value != 0:
        return Verdict(False, f"signature={value} but must vanish in dimension 2 mod 4", value)
    return Verdict(True, f"signature={value}", value)


def verify_min_weight_balance(c: FixedPointCollection) -> Verdict:
    """The smallest positive weight occurs equally often at + and - points."""
    pts = circle_points(c)
    if not pts:
        return Verdict(True, "empty collection", None)
    w = min(x for _, ws in pts for x in ws)
    plus = sum(ws.count(w) for s, ws in pts if s > 0)
    minus = sum(ws.count(w) for s, ws in pts if s < 0)
    return Verdict(plus == minus, f"smallest weight {w}: {plus} at +, {minus} at -", w)


def verify_sign_balance(c: FixedPointCollection) -> Verdict:
    """Equal numbers of + and - points when n is odd; vacuous otherwise."""
    pts = circle_points(c)
    plus = sum(1 for s, _ in pts if s > 0)
    minus = len(pts) - plus
    if c.n % 2 == 0:
        return Verdict(True, f"{plus} plus, {minus} minus (no constraint in dimension 0 mod 4)", plus - minus)
    return Verdict(plus == minus, f"{plus} plus, {minus} minus", plus - minus)


VALIDATORS = {
    "abbv": verify_abbv,
    "signature": verify_signature,
    "min_weight_balance": verify_min_weight_balance,
    "sign_balance": verify_sign_balance,
}


def verify_all(c: FixedPointCollection) -> dict[str, Verdict]:
    return {name: fn(c) for name, fn in VALIDATORS.items()}


def passes_validators(c: FixedPointCollection) -> bool:
    return all(v.ok for v in verify_all(c).values())
