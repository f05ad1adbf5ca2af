"""Exact integer and rational helpers shared by every other module.

Weights are tuples of Python ints (arbitrary precision).  Rationals are
``fractions.Fraction``.  Nothing in this package touches floating point.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterable, Sequence

Weight = tuple[int, ...]


class InvalidWeight(ValueError):
    """A weight was the zero vector or had the wrong length."""


class PoleError(ZeroDivisionError):
    """A rational evaluation hit a pole."""


def as_weight(w, k: int | None = None) -> Weight:
    """Coerce an int or an integer sequence to a weight tuple.

    Raises InvalidWeight for the zero vector or a length other than k.
    """
    if isinstance(w, int):
        vec = (w,)
    else:
        vec = tuple(int(x) for x in w)
    if k is not None and len(vec) != k:
        raise InvalidWeight(f"weight {vec} has length {len(vec)}, expected {k}")
    if not vec or not any(vec):
        raise InvalidWeight(f"weight {vec} is zero")
    return vec


def neg(w: Weight) -> Weight:
    return tuple(-x for x in w)


def add(u: Weight, v: Weight) -> Weight:
    return tuple(a + b for a, b in zip(u, v))


def sub(u: Weight, v: Weight) -> Weight:
    return tuple(a - b for a, b in zip(u, v))


def scale(c: int, w: Weight) -> Weight:
    return tuple(c * x for x in w)


def dot(u: Sequence[int], v: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(u, v))


def canonical_weight(w) -> tuple[Weight, bool]:
    """Return (w, False) if the first nonzero coordinate is positive, else (-w, True)."""
    vec = as_weight(w)
    for x in vec:
        if x:
            if x > 0:
                return vec, False
            return neg(vec), True
    raise InvalidWeight(f"weight {vec} is zero")  # unreachable, as_weight rejects zero


def multiple_of(w: Weight, l: Weight) -> int | None:
    """Return m with w == m*l, or None when w is not an integer multiple of l."""
    m = None
    for a, b in zip(w, l):
        if b == 0:
            if a != 0:
                return None
            continue
        if a % b:
            return None
        q = a // b
        if m is None:
            m = q
        elif m != q:
            return None
    return m


def smith_diagonal(rows: Sequence[Sequence[int]]) -> list[int]:
    """Nonzero elementary divisors of an integer matrix.

    Plain elementary row and column operations: move a smallest nonzero
    entry to the pivot, clear its row and column by division with
    remainder, and fix divisibility by folding a stray row back in.
    """
    a = [list(r) for r in rows]
    if not a or not a[0]:
        return []
    m, n = len(a), len(a[0])
    diag: list[int] = []
    t = 0
    while t < min(m, n):
        nonzero = [(abs(a[i][j]), i, j) for i in range(t, m) for j in range(t, n) if a[i][j]]
        if not nonzero:
            break
        _, pi, pj = min(nonzero)
        a[t], a[pi] = a[pi], a[t]
        for r in a:
            r[t], r[pj] = r[pj], r[t]
        while True:
            done = True
            for i in range(t + 1, m):
                q = a[i][t] // a[t][t]
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                if a[i][t]:
                    done = False
            for j in range(t + 1, n):
                q = a[t][j] // a[t][t]
                if q:
                    for r in a:
                        r[j] -= q * r[t]
                if a[t][j]:
                    done = False
            if not done:
                # a remainder is now smaller than the pivot; re-pivot on it
                cands = [(abs(a[i][t]), i, t) for i in range(t + 1, m) if a[i][t]]
                cands += [(abs(a[t][j]), t, j) for j in range(t + 1, n) if a[t][j]]
                _, pi, pj = min(cands)
                a[t], a[pi] = a[pi], a[t]
                for r in a:
                    r[t], r[pj] = r[pj], r[t]
                continue
            bad = [(i, j) for i in range(t + 1, m) for j in range(t + 1, n) if a[i][j] % a[t][t]]
            if bad:
                i, _ = bad[0]
                a[t] = [x + y for x, y in zip(a[t], a[i])]
                continue
            break
        diag.append(abs(a[t][t]))
        t += 1
    return diag


def spans_lattice(ws: Iterable, k: int) -> bool:
    """True iff the integer span of ws is all of Z^k."""
    if k < 1:
        raise ValueError("k must be positive")
    rows = [as_weight(w, k) for w in ws]
    if len(rows) < k:
        return False
    diag = smith_diagonal(rows)
    return len(diag) == k and all(d == 1 for d in diag)


def generic_covector(ws: Iterable, k: int, anchor) -> Weight:
    """Lexicographically first integer covector in growing L-infinity shells.

    Every weight must pair to a nonzero integer and the anchor must pair
    positively.
    """
    vecs = [as_weight(w, k) for w in ws]
    anc = as_weight(anchor, k)
    r = 1
    while True:
        for xi in itertools.product(range(-r, r + 1), repeat=k):
            if max(abs(x) for x in xi) != r:
                continue
            if dot(anc, xi) > 0 and all(dot(w, xi) for w in vecs):
                return xi
        r += 1


def eval_signature_sum(points: Iterable[tuple[int, Sequence[int]]], t) -> Fraction:
    """Evaluate sum of eps * prod (1+t^w)/(1-t^w) exactly.

    Weights must already be integers (pair with a covector first when k > 1).
    """
    t = Fraction(t)
    if t in (0, 1, -1):
        raise PoleError(f"t={t} is not an admissible sample point")
    total = Fraction(0)
    for sign, weights in points:
        term = Fraction(sign)
        for w in weights:
            p = t ** int(w)
            if p == 1:
                raise PoleError(f"t^{w} = 1 at t={t}")
            term *= (1 + p) / (1 - p)
        total += term
    return total


def signature_by_sampling(points: Sequence[tuple[int, Sequence[int]]]) -> tuple[bool, Fraction]:
    """Constancy test by evaluating at enough integer points.

    With W the total absolute weight and D = 2W+1, agreement at the D+1
    points t = 2..D+2 forces the cleared-denominator difference to vanish.
    Returns (constant?, value at t=2).
    """
    pts = [(s, [int(w) for w in ws]) for s, ws in points]
    W = sum(abs(w) for _, ws in pts for w in ws)
    D = 2 * W + 1
    first = eval_signature_sum(pts, 2)
    for t in range(3, D + 3):
        if eval_signature_sum(pts, t) != first:
            return False, first
    return True, first


def signature_series(points: Sequence[tuple[int, Sequence[int]]]) -> list[int]:
    """Taylor coefficients at t=0, up to degree W, of the signature sum.

    Each weight is made positive (flipping the sign), so every factor is
    (1+t^w)/(1-t^w) = 1 + 2t^w + 2t^2w + ...  The sum is P/Q with
    deg P, deg Q <= W, hence it is constant iff coefficients 1..W vanish.
    """
    pts = []
    for s, ws in points:
        sign = s
        pos = []
        for w in ws:
            w = int(w)
            if w == 0:
                raise PoleError("zero weight")
            if w < 0:
                sign, w = -sign, -w
            pos.append(w)
        pts.append((sign, pos))
    W = sum(w for _, ws in pts for w in ws)
    total = [0] * (W + 1)
    for sign, ws in pts:
        ser = [0] * (W + 1)
        ser[0] = 1
        for w in ws:
            # multiply by 1/(1-t^w), then by (1+t^w)
            for j in range(w, W + 1):
                ser[j] += ser[j - w]
            for j in range(W, w - 1, -1):
                ser[j] += ser[j - w]
        for j in range(W + 1):
            total[j] += sign * ser[j]
    return total


def signature_constant(points: Sequence[tuple[int, Sequence[int]]]) -> tuple[bool, int]:
    """Return (is_constant, constant term) of the signature sum."""
    coeffs = signature_series(points)
    return all(c == 0 for c in coeffs[1:]), coeffs[0]
