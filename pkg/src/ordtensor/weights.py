"""Repeated-averages weights and the block averaging operators.

Two weight hierarchies are computed exactly:

* ``p_weight(xi, E)`` -- the convex coefficients of the repeated
  averages hierarchy; rational, and summing to 1 over each maximal
  S_xi block.
* ``q_weight(xi, zeta, E)`` -- their square-root analogues, of the form
  ``1/sqrt(r)`` with integer radicand; the block sums of squares equal 1.

On top of the weights sit the averaging operators ``avg`` (level-xi
convex blocking of a vector collection indexed by finite sets) and
``avg2`` (the square-root re-blocking of those averages).  The vector
space is abstract: any values supporting ``+`` and scalar ``*`` work,
and absent keys read as the zero vector.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import chain
from typing import Iterable, Mapping

from .ordinal import ONE, Ordinal, as_ordinal
from .schreier import (
    Base,
    Conv,
    as_finite_set,
    decompose,
    is_maximal,
    member,
    split_blocks,
)

__all__ = [
    "Weight",
    "RadicalSum",
    "p_weight",
    "q_weight",
    "avg",
    "avg2",
    "avg2_terms",
    "segment_prefixes",
    "verify_perm",
    "PermReport",
]


def _square_free(r: int) -> tuple[int, int]:
    """Write r = s*s*rad with rad square-free; returns (s, rad)."""
    if r < 1:
        raise ValueError("radicand must be positive")
    s, rad, d = 1, 1, 2
    while d * d <= r:
        exp = 0
        while r % d == 0:
            r //= d
            exp += 1
        s *= d ** (exp // 2)
        if exp % 2:
            rad *= d
        d += 1
    return s, rad * r


@dataclass(frozen=True)
class Weight:
    """An exact positive scalar of the form ``ratio / sqrt(radicand)``.

    The radicand is kept square-free, so equal values have equal parts,
    and the square of a Weight is an exact rational.
    """

    ratio: Fraction
    radicand: int = 1

    def __post_init__(self):
        ratio = Fraction(self.ratio)
        s, rad = _square_free(self.radicand)
        object.__setattr__(self, "ratio", ratio / s)
        object.__setattr__(self, "radicand", rad)
        if self.ratio <= 0:
            raise ValueError("weights are strictly positive")

    def div_sqrt(self, m: int) -> "Weight":
        return Weight(self.ratio, self.radicand * m)

    def __mul__(self, other):
        if isinstance(other, Weight):
            return Weight(self.ratio * other.ratio, self.radicand * other.radicand)
        return Weight(self.ratio * Fraction(other), self.radicand)

    __rmul__ = __mul__

    def square(self) -> Fraction:
        return self.ratio * self.ratio / self.radicand

    def as_rational(self) -> Fraction | None:
        return self.ratio if self.radicand == 1 else None

    def __float__(self):
        return float(self.ratio) / self.radicand**0.5

    def __str__(self):
        a, b = self.ratio.numerator, self.ratio.denominator
        if self.radicand == 1:
            return f"{a}/{b}" if b != 1 else f"{a}"
        return f"{a}/({b}*sqrt({self.radicand}))"


class RadicalSum:
    """Exact accumulator for sums of terms ``c / sqrt(r)``.

    Terms are bucketed by square-free radicand; since distinct
    square-free radicals are linearly independent over the rationals,
    the representation is canonical and equality against a rational is
    decidable exactly.
    """

    __slots__ = ("_terms",)

    def __init__(self):
        self._terms: dict[int, Fraction] = {}

    def add(self, w: Weight, c=1) -> "RadicalSum":
        c = Fraction(c)
        if c == 0:
            return self
        key = w.radicand
        self._terms[key] = self._terms.get(key, Fraction(0)) + w.ratio * c
        if self._terms[key] == 0:
            del self._terms[key]
        return self

    def add_rational(self, c) -> "RadicalSum":
        return self.add(Weight(Fraction(1)), c)

    def as_rational(self) -> Fraction | None:
        if not self._terms:
            return Fraction(0)
        if set(self._terms) == {1}:
            return self._terms[1]
        return None

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            r = self.as_rational()
            return r is not None and r == other
        if isinstance(other, RadicalSum):
            return self._terms == other._terms
        return NotImplemented

    def __float__(self):
        return sum(float(c) / r**0.5 for r, c in self._terms.items())

    def __repr__(self):
        if not self._terms:
            return "RadicalSum(0)"
        parts = [f"{c}/sqrt({r})" if r != 1 else f"{c}" for r, c in sorted(self._terms.items())]
        return "RadicalSum(" + " + ".join(parts) + ")"


# -- the weight recursions ---------------------------------------------


def p_weight(xi, E) -> Fraction:
    """Level-xi repeated-averages weight of a non-empty finite set."""
    E = as_finite_set(E)
    if not E:
        raise ValueError("weights are defined for non-empty sets")
    return _p(as_ordinal(xi), E)


@lru_cache(maxsize=1 << 16)
def _p(xi: Ordinal, E: tuple[int, ...]) -> Fraction:
    if xi.is_zero():
        return Fraction(1)
    if xi.classify() == "successor":
        mu = xi.predecessor()
        last = split_blocks(Base(xi), E)[-1]
        inner_last = split_blocks(Base(mu), last)[-1]
        return _p(mu, inner_last) / last[0]
    last = split_blocks(Base(xi), E)[-1]
    nu = xi.fundamental(last[0])
    return _p(nu + ONE, last)


def q_weight(xi, zeta, E) -> Weight:
    """Square-root weight of a non-empty finite set at levels (xi, zeta)."""
    E = as_finite_set(E)
    if not E:
        raise ValueError("weights are defined for non-empty sets")
    return _q(as_ordinal(xi), as_ordinal(zeta), E)


def p_prefix_weights(xi, E) -> list[Fraction]:
    """p_weight of every initial segment of E, in one pass.

    The weight of a prefix is a product of reciprocals of block minima
    along a nested chain of greedy blocks, and greedy splits of a prefix
    truncate the splits of the full set, so all prefixes can share one
    descent.  Agrees with :func:`p_weight` term by term (tested); meant
    for long blocks where the per-prefix recursion would be quadratic.
    """
    E = as_finite_set(E)
    xi = as_ordinal(xi)
    out: list[Fraction | None] = [None] * len(E)

    def go(level: Ordinal, a: int, b: int, factor: Fraction):
        if level.is_zero():
            for j in range(a, b):
                out[j] = factor
            return
        kind = level.classify()
        c = a
        for block in split_blocks(Base(level), E[a:b]):
            d = c + len(block)
            if kind == "successor":
                go(level.predecessor(), c, d, factor / E[c])
            else:
                nu = level.fundamental(E[c])
                go(nu + ONE, c, d, factor)
            c = d

    go(xi, 0, len(E), Fraction(1))
    return out  # type: ignore[return-value]


def q_prefix_weights(xi, zeta, E) -> list[Weight]:
    """q_weight of every initial segment of E, in one pass.

    Same sharing as :func:`p_prefix_weights`; the radicand accumulates
    the block minima met along the descent through the convolution
    levels."""
    E = as_finite_set(E)
    xi, zeta = as_ordinal(xi), as_ordinal(zeta)
    out: list[Weight | None] = [None] * len(E)

    def go(level: Ordinal, a: int, b: int, radicand: int):
        if level.is_zero():
            w = Weight(Fraction(1), radicand)
            for j in range(a, b):
                out[j] = w
            return
        kind = level.classify()
        c = a
        for block in split_blocks(Conv(level, xi), E[a:b]):
            d = c + len(block)
            if kind == "successor":
                go(level.predecessor(), c, d, radicand * E[c])
            else:
                nu = level.fundamental(E[c])
                go(nu + ONE, c, d, radicand)
            c = d

    go(zeta, 0, len(E), 1)
    return out  # type: ignore[return-value]


@lru_cache(maxsize=1 << 16)
def _q(xi: Ordinal, zeta: Ordinal, E: tuple[int, ...]) -> Weight:
    if zeta.is_zero():
        return Weight(Fraction(1))
    if zeta.classify() == "successor":
        nu = zeta.predecessor()
        last = split_blocks(Conv(zeta, xi), E)[-1]
        inner_last = split_blocks(Conv(nu, xi), last)[-1]
        return _q(xi, nu, inner_last).div_sqrt(last[0])
    last = split_blocks(Conv(zeta, xi), E)[-1]
    nu = zeta.fundamental(last[0])
    return _q(xi, nu + ONE, last)


# -- averaging operators -----------------------------------------------


def _default_scale(c, v):
    return c * v


def segment_prefixes(blocks: Iterable[tuple[int, ...]], n: int) -> list[tuple[int, ...]]:
    """Initial segments of the union strictly extending the first n-1 blocks."""
    blocks = list(blocks)
    full = tuple(chain.from_iterable(blocks[:n]))
    start = len(full) - len(blocks[n - 1])
    return [full[:j] for j in range(start + 1, len(full) + 1)]


def avg(xi, stream, u: Mapping, n: int, *, scale=None, max_elements=None):
    """The n-th level-xi average of the collection ``u`` along a stream.

    Sums ``p_weight(xi, F) * u[F]`` over initial segments F of the
    stream lying in the n-th maximal S_xi block.  Coefficients are exact
    rationals; ``scale(c, v)`` can be supplied to control how they hit
    the vectors.  Returns scalar 0 when every key is absent.
    """
    xi = as_ordinal(xi)
    scale = scale or _default_scale
    blocks = decompose(Base(xi), stream, n, max_elements=max_elements)
    full = tuple(chain.from_iterable(blocks))
    ps = p_prefix_weights(xi, full)
    start = len(full) - len(blocks[-1])
    acc = None
    for j in range(start + 1, len(full) + 1):
        v = u.get(full[:j])
        if v is None:
            continue
        term = scale(ps[j - 1], v)
        acc = term if acc is None else acc + term
    return 0 if acc is None else acc


def avg2_terms(xi, zeta, stream, n: int, *, max_elements=None):
    """Exact coefficient table for the n-th square-root re-blocked average.

    Returns a list of ``(F, q, p)`` triples with q a :class:`Weight`
    and p a rational, F ranging over the initial segments in the n-th
    maximal S_zeta[S_xi] block of the stream.
    """
    xi, zeta = as_ordinal(xi), as_ordinal(zeta)
    blocks = decompose(Conv(zeta, xi), stream, n, max_elements=max_elements)
    full = tuple(chain.from_iterable(blocks))
    ps = p_prefix_weights(xi, full)
    qs = q_prefix_weights(xi, zeta, full)
    start = len(full) - len(blocks[-1])
    return [
        (full[:j], qs[j - 1], ps[j - 1]) for j in range(start + 1, len(full) + 1)
    ]


def avg2(xi, zeta, stream, u: Mapping, n: int, *, scale=None, max_elements=None):
    """The n-th square-root re-blocked average of the collection ``u``.

    Coefficients ``q*p`` are applied as exact rationals when the
    radical part is trivial and as floats otherwise; pass ``scale`` to
    override (it receives the coefficient and the vector).
    """
    terms = avg2_terms(xi, zeta, stream, n, max_elements=max_elements)
    acc = None
    for F, q, p in terms:
        v = u.get(F)
        if v is None:
            continue
        w = q * p
        if scale is not None:
            term = scale(w, v)
        else:
            c = w.as_rational()
            term = _default_scale(c if c is not None else float(w), v)
        acc = term if acc is None else acc + term
    return 0 if acc is None else acc


# -- permanence / convexity verification --------------------------------


@dataclass
class PermReport:
    """Exact pass/fail for the four weight identities on a decomposition."""

    perm_p: bool
    perm_q: bool
    convex: bool
    l2_convex: bool
    details: list = field(default_factory=list)

    def all_pass(self) -> bool:
        return self.perm_p and self.perm_q and self.convex and self.l2_convex


def verify_perm(xi, zeta, blocks) -> PermReport:
    """Check the weight identities on successive maximal convolution blocks.

    ``blocks`` must be the first members of an S_zeta[S_xi]
    decomposition of some stream.  All four identities are evaluated in
    exact arithmetic:

    * p is unchanged by deleting preceding complete S_xi blocks;
    * q is unchanged by deleting preceding complete S_zeta[S_xi] blocks;
    * p sums to 1 over each maximal S_xi block segment;
    * the squares of the q-weighted p-sums add to 1 over each maximal
      S_zeta[S_xi] block (q is constant on each inner segment, so each
      bracket squared is rational).
    """
    xi, zeta = as_ordinal(xi), as_ordinal(zeta)
    conv = Conv(zeta, xi)
    blocks = tuple(as_finite_set(b) for b in blocks)
    for b in blocks:
        if not member(conv, b) or not is_maximal(conv, b):
            raise ValueError(f"{b} is not a maximal block of the convolution")
    full = tuple(chain.from_iterable(blocks))
    details: list = []

    inner_bounds = []
    pos = 0
    for b in split_blocks(Base(xi), full):
        pos += len(b)
        inner_bounds.append(pos)
    conv_bounds = []
    pos = 0
    for b in blocks:
        pos += len(b)
        conv_bounds.append(pos)

    p_full = p_prefix_weights(xi, full)
    q_full = q_prefix_weights(xi, zeta, full)

    def check_perm(values_full, bounds, evaluate):
        # deleting the complete blocks before a prefix leaves its weight
        # unchanged: compare against a fresh evaluation of each suffix
        for cut in bounds[:-1]:
            suffix_values = evaluate(full[cut:])
            for j in range(cut + 1, len(full) + 1):
                if values_full[j - 1] != suffix_values[j - cut - 1]:
                    return False
        return True

    if xi.is_zero():
        perm_p = all(p == 1 for p in p_full)
    else:
        perm_p = check_perm(p_full, inner_bounds, lambda s: p_prefix_weights(xi, s))
    if zeta.is_zero():
        perm_q = all(q == Weight(Fraction(1)) for q in q_full)
    else:
        perm_q = check_perm(
            q_full, conv_bounds, lambda s: q_prefix_weights(xi, zeta, s)
        )

    convex = True
    for a, b in zip([0] + inner_bounds, inner_bounds):
        total = sum(p_full[a:b], Fraction(0))
        details.append(("convex_segment", full[a : min(b, a + 4)], str(total)))
        convex = convex and total == 1

    l2_convex = True
    for a, b in zip([0] + conv_bounds, conv_bounds):
        seg_starts = [a] + [p for p in inner_bounds if a < p < b] + [b]
        total = Fraction(0)
        constant_q = True
        for sa, sb in zip(seg_starts, seg_starts[1:]):
            qs = q_full[sa:sb]
            constant_q = constant_q and all(q == qs[0] for q in qs)
            psum = sum(p_full[sa:sb], Fraction(0))
            total += qs[0].square() * psum * psum
        details.append(("l2_segment", full[a : min(b, a + 4)], str(total)))
        l2_convex = l2_convex and constant_q and total == 1

    return PermReport(perm_p, perm_q, convex, l2_convex, details)
