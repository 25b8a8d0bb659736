"""Finite models of spaces of continuous functions on countable compacta.

Elements are step functions: finitely many constant pieces on ordinal
intervals ``(a, b]`` inside ``[0, top]``, zero elsewhere.  Ordinal
intervals of this form are clopen, so every such function is continuous,
and all the norm and support computations reduce to exact interval
arithmetic.  The dual side is modelled by finitely supported atomic
measures with exact rational weights.

Cantor schemes (dyadically nested, disjoint families of sets indexed by
sign sequences) and their Rademacher measures live here too; a scheme's
cells are either ordinal-interval unions or finite point sets.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Mapping, Sequence

from .ordinal import ONE, ZERO, Ordinal, as_ordinal

__all__ = [
    "Iv",
    "StepFunction",
    "AtomicMeasure",
    "CantorScheme",
    "indicator",
    "disjoint",
    "weak_p_norm",
    "weak_1_norm_exact",
    "rademacher",
    "default_selector",
    "weak2_norm_squared_exact",
    "weak2_norm_sampled",
    "compatible",
]


@dataclass(frozen=True)
class Iv:
    """The ordinal interval ``(lo, hi]``; ``lo=None`` denotes ``[0, hi]``."""

    lo: Ordinal | None
    hi: Ordinal

    def is_empty(self) -> bool:
        if self.lo is None:
            return False
        return self.hi <= self.lo

    def contains(self, pt: Ordinal) -> bool:
        if self.lo is None:
            return pt <= self.hi
        return self.lo < pt <= self.hi

    def intersect(self, other: "Iv") -> "Iv | None":
        if self.lo is None:
            lo = other.lo
        elif other.lo is None:
            lo = self.lo
        else:
            lo = self.lo if self.lo >= other.lo else other.lo
        hi = self.hi if self.hi <= other.hi else other.hi
        out = Iv(lo, hi)
        return None if out.is_empty() else out

    def least(self) -> Ordinal:
        return ZERO if self.lo is None else self.lo + ONE

    def __str__(self):
        if self.lo is None:
            return f"[0,{self.hi}]"
        return f"({self.lo},{self.hi}]"


def _iv_sort_key(iv: Iv):
    return (0, ZERO) if iv.lo is None else (1, iv.lo)


def normalize_union(ivs: Iterable[Iv]) -> tuple[Iv, ...]:
    """Sort, drop empties, and merge touching intervals."""
    parts = sorted((iv for iv in ivs if not iv.is_empty()), key=_iv_sort_key)
    out: list[Iv] = []
    for iv in parts:
        if out and iv.lo is not None and out[-1].hi >= iv.lo:
            if out[-1].hi < iv.hi:
                out[-1] = Iv(out[-1].lo, iv.hi)
        else:
            out.append(iv)
    return tuple(out)


def union_intersect(u: Iterable[Iv], v: Iterable[Iv]) -> tuple[Iv, ...]:
    u = normalize_union(u)
    v = normalize_union(v)
    out = []
    i = j = 0
    while i < len(u) and j < len(v):
        c = u[i].intersect(v[j])
        if c is not None:
            out.append(c)
        if u[i].hi <= v[j].hi:
            i += 1
        else:
            j += 1
    return normalize_union(out)


def union_contains(u: Iterable[Iv], small: Iterable[Iv]) -> bool:
    """Whether every point of ``small`` lies in the union ``u``."""
    u = normalize_union(u)
    for iv in normalize_union(small):
        hit = False
        for big in u:
            lo_ok = big.lo is None or (iv.lo is not None and big.lo <= iv.lo)
            if lo_ok and iv.hi <= big.hi:
                hit = True
                break
        if not hit:
            return False
    return True


def union_is_empty(u: Iterable[Iv]) -> bool:
    return all(iv.is_empty() for iv in u)


# -- step functions ----------------------------------------------------


class StepFunction:
    """A piecewise-constant function on ``[0, top]``, zero off its pieces.

    Values may be floats or exact rationals; arithmetic preserves the
    value type, so collections built from rational values stay exact
    under the averaging operators.
    """

    __slots__ = ("top", "pieces", "_start_keys")

    def __init__(self, top, pieces: Iterable[tuple[Iv, float]]):
        top = as_ordinal(top)
        clean: list[tuple[Iv, float]] = []
        for iv, v in pieces:
            if v == 0 or iv.is_empty():
                continue
            if iv.hi > top:
                raise ValueError(f"piece {iv} exceeds the domain top {top}")
            clean.append((iv, v))
        clean.sort(key=lambda pv: _iv_sort_key(pv[0]))
        merged: list[tuple[Iv, float]] = []
        prev_hi: Ordinal | None = None
        for iv, v in clean:
            if merged:
                piv, pv = merged[-1]
                if iv.lo is None or (prev_hi is not None and iv.lo < prev_hi):
                    raise ValueError("pieces overlap")
                if pv == v and iv.lo == piv.hi:
                    merged[-1] = (Iv(piv.lo, iv.hi), v)
                    prev_hi = iv.hi
                    continue
            merged.append((iv, v))
            prev_hi = iv.hi
        object.__setattr__(self, "top", top)
        object.__setattr__(self, "pieces", tuple(merged))
        object.__setattr__(
            self,
            "_start_keys",
            [ZERO if iv.lo is None else iv.lo for iv, _ in merged],
        )

    def __setattr__(self, name, value):
        raise AttributeError("StepFunction is immutable")

    def __call__(self, pt) -> float:
        pt = as_ordinal(pt)
        if pt > self.top:
            raise ValueError(f"{pt} is outside [0, {self.top}]")
        idx = bisect.bisect_right(self._start_keys, pt)
        for j in range(idx - 1, max(idx - 3, -1), -1):
            iv, v = self.pieces[j]
            if iv.contains(pt):
                return v
        return 0

    def sup_norm(self) -> float:
        return max((abs(v) for _, v in self.pieces), default=0)

    def support(self) -> tuple[Iv, ...]:
        return normalize_union(iv for iv, _ in self.pieces)

    def preimage(self, value: float) -> tuple[Iv, ...]:
        return normalize_union(iv for iv, v in self.pieces if v == value)

    def restrict(self, beta) -> "StepFunction":
        """Truncate the domain to ``[0, beta]``."""
        beta = as_ordinal(beta)
        if beta > self.top:
            raise ValueError("restriction endpoint exceeds the domain")
        window = Iv(None, beta)
        pieces = []
        for iv, v in self.pieces:
            cut = iv.intersect(window)
            if cut is not None:
                pieces.append((cut, v))
        return StepFunction(beta, pieces)

    def project(self, beta) -> "StepFunction":
        """Zero the values above ``beta``, keeping the domain."""
        beta = as_ordinal(beta)
        if beta > self.top:
            raise ValueError("projection endpoint exceeds the domain")
        window = Iv(None, beta)
        pieces = []
        for iv, v in self.pieces:
            cut = iv.intersect(window)
            if cut is not None:
                pieces.append((cut, v))
        return StepFunction(self.top, pieces)

    # linear structure --------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, float)) and other == 0:
            return self
        if not isinstance(other, StepFunction):
            return NotImplemented
        if other.top != self.top:
            raise ValueError("domain tops differ")
        cuts: set[Ordinal] = set()
        for f in (self, other):
            for iv, _ in f.pieces:
                if iv.lo is not None:
                    cuts.add(iv.lo)
                cuts.add(iv.hi)
        points = sorted(cuts)
        atoms: list[Iv] = [Iv(None, ZERO)]
        prev = ZERO
        for p in points:
            if p > prev:
                atoms.append(Iv(prev, p))
            prev = p
        pieces = []
        for atom in atoms:
            rep = atom.least()
            v = self(rep) + other(rep)
            if v != 0:
                pieces.append((atom, v))
        return StepFunction(self.top, pieces)

    __radd__ = __add__

    def __rmul__(self, c):
        return StepFunction(self.top, ((iv, c * v) for iv, v in self.pieces))

    __mul__ = __rmul__

    def __neg__(self):
        return (-1) * self

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        if not isinstance(other, StepFunction):
            return NotImplemented
        return self.top == other.top and self.pieces == other.pieces

    def __hash__(self):
        return hash((self.top, self.pieces))

    def to_json(self) -> list[dict]:
        return [{"interval": str(iv), "value": float(v)} for iv, v in self.pieces]

    def __repr__(self):
        body = ", ".join(f"{iv}={v:g}" for iv, v in self.pieces)
        return f"StepFunction[0,{self.top}]({body})"


def indicator(top, iv: Iv) -> StepFunction:
    return StepFunction(top, ((iv, 1.0),))


def disjoint(fs: Sequence[StepFunction]) -> bool:
    """True iff the supports are pairwise disjoint."""
    sups = [f.support() for f in fs]
    for i in range(len(sups)):
        for j in range(i + 1, len(sups)):
            if not union_is_empty(union_intersect(sups[i], sups[j])):
                return False
    return True


def _candidate_points(fs: Sequence[StepFunction]) -> list[Ordinal]:
    pts = {ZERO}
    for f in fs:
        for iv, _ in f.pieces:
            pts.add(iv.least())
            pts.add(iv.hi)
    return sorted(pts)


def weak_p_norm(fs: Sequence[StepFunction], p: float) -> float:
    """Weakly p-summing norm: the dual-ball supremum reduces to points.

    Extreme functionals of the dual ball are signed point evaluations,
    so the norm is the max over points of the coordinate-wise l_p sum.
    """
    best = 0.0
    for pt in _candidate_points(fs):
        s = sum(abs(f(pt)) ** p for f in fs) ** (1.0 / p)
        best = max(best, s)
    return best


def weak_1_norm_exact(fs: Sequence[StepFunction]) -> Fraction:
    """Exact weakly 1-summing norm (values must be dyadic floats)."""
    best = Fraction(0)
    for pt in _candidate_points(fs):
        s = sum(abs(Fraction(f(pt))) for f in fs)
        best = max(best, s)
    return best


# -- atomic measures ---------------------------------------------------


@dataclass(frozen=True)
class AtomicMeasure:
    """A finitely supported measure with exact rational weights."""

    atoms: tuple[tuple[object, Fraction], ...]

    def __post_init__(self):
        atoms = tuple((pt, Fraction(w)) for pt, w in self.atoms if w != 0)
        if len({pt for pt, _ in atoms}) != len(atoms):
            raise ValueError("atom points must be distinct")
        object.__setattr__(self, "atoms", atoms)

    @staticmethod
    def dirac(pt) -> "AtomicMeasure":
        return AtomicMeasure(((pt, Fraction(1)),))

    def total_variation(self) -> Fraction:
        return sum((abs(w) for _, w in self.atoms), Fraction(0))

    def pair(self, f: StepFunction) -> Fraction:
        """Exact pairing; function values must be dyadic floats."""
        return sum((w * Fraction(f(pt)) for pt, w in self.atoms), Fraction(0))

    def to_json(self) -> list[dict]:
        return [{"point": str(pt), "weight": str(w)} for pt, w in self.atoms]


def pair(mu: AtomicMeasure, f: StepFunction) -> Fraction:
    return mu.pair(f)


# -- Cantor schemes and Rademacher measures -----------------------------

Sign = tuple[int, ...]


def _cell_is_interval(cell) -> bool:
    return bool(cell) and isinstance(cell[0], Iv)


def cell_is_empty(cell) -> bool:
    if not cell:
        return True
    if _cell_is_interval(cell):
        return union_is_empty(cell)
    return False


def cell_subset(small, big) -> bool:
    if _cell_is_interval(big):
        return union_contains(big, small)
    return set(small) <= set(big)


def cell_disjoint(a, b) -> bool:
    if _cell_is_interval(a):
        return union_is_empty(union_intersect(a, b))
    return not (set(a) & set(b))


def cell_least(cell):
    if _cell_is_interval(cell):
        return normalize_union(cell)[0].least()
    return min(cell)


@dataclass(frozen=True)
class CantorScheme:
    """Nested disjoint cells indexed by sign sequences of length <= depth.

    For every ``d`` shorter than the depth, the two children partition
    into the parent: ``A_{d^(-1)}`` and ``A_{d^(1)}`` are disjoint,
    non-empty, and contained in ``A_d``.
    """

    depth: int
    cells: Mapping[Sign, tuple]

    def __post_init__(self):
        cells = dict(self.cells)
        for k in range(self.depth + 1):
            for d in product((-1, 1), repeat=k):
                if d not in cells:
                    raise ValueError(f"missing cell {d}")
                if cell_is_empty(cells[d]):
                    raise ValueError(f"cell {d} is empty")
        for k in range(self.depth):
            for d in product((-1, 1), repeat=k):
                minus, plus = cells[d + (-1,)], cells[d + (1,)]
                if not (cell_subset(minus, cells[d]) and cell_subset(plus, cells[d])):
                    raise ValueError(f"children of {d} not nested")
                if not cell_disjoint(minus, plus):
                    raise ValueError(f"children of {d} overlap")
        object.__setattr__(self, "cells", cells)

    def leaves(self) -> list[Sign]:
        return [d for d in product((-1, 1), repeat=self.depth)]

    def to_json(self) -> dict:
        out = {}
        for d, cell in sorted(self.cells.items(), key=lambda kv: (len(kv[0]), kv[0])):
            key = "".join("+" if e == 1 else "-" for e in d) or "()"
            if _cell_is_interval(cell):
                out[key] = [str(iv) for iv in cell]
            else:
                out[key] = [str(p) for p in cell]
        return out


def default_selector(scheme: CantorScheme) -> dict[Sign, object]:
    """Pick the least point of every leaf cell."""
    return {d: cell_least(scheme.cells[d]) for d in scheme.leaves()}


def rademacher(
    scheme: CantorScheme, selector: Mapping[Sign, object]
) -> tuple[AtomicMeasure, ...]:
    """The Rademacher measures of a scheme under a selector.

    ``mu_i`` places weight ``eps_i / 2^depth`` at the selected point of
    each leaf cell ``(eps_1, ..., eps_m)``.
    """
    m = scheme.depth
    for d in scheme.leaves():
        pt = selector[d]
        cell = scheme.cells[d]
        if _cell_is_interval(cell):
            ok = any(iv.contains(pt) for iv in cell)
        else:
            ok = pt in cell
        if not ok:
            raise ValueError(f"selector point {pt} is outside its cell {d}")
    denom = 2**m
    out = []
    for i in range(m):
        atoms = [
            (selector[d], Fraction(d[i], denom)) for d in scheme.leaves()
        ]
        out.append(AtomicMeasure(tuple(atoms)))
    return tuple(out)


def weak2_norm_squared_exact(measures: Sequence[AtomicMeasure]) -> Fraction:
    """Exact square of the weakly 2-summing norm of atomic measures.

    The predual ball's extreme points restricted to the finitely many
    atoms are sign vectors, so the supremum is an exhaustive max over
    sign assignments of the atom points.  Exponential in the number of
    atoms; intended for small schemes.
    """
    points = sorted({pt for mu in measures for pt, _ in mu.atoms}, key=str)
    weight_rows = []
    for mu in measures:
        lookup = dict(mu.atoms)
        weight_rows.append([lookup.get(pt, Fraction(0)) for pt in points])
    best = Fraction(0)
    for signs in product((-1, 1), repeat=len(points)):
        total = Fraction(0)
        for row in weight_rows:
            v = sum(w * s for w, s in zip(row, signs))
            total += v * v
        best = max(best, total)
    return best


def weak2_norm_sampled(
    measures: Sequence[AtomicMeasure], samples: int, seed: int
) -> float:
    """Sampled lower bound for the weakly 2-summing norm."""
    import numpy as np

    rng = np.random.default_rng(seed)
    points = sorted({pt for mu in measures for pt, _ in mu.atoms}, key=str)
    rows = np.array(
        [
            [float(dict(mu.atoms).get(pt, 0)) for pt in points]
            for mu in measures
        ]
    )
    best = 0.0
    for _ in range(samples):
        x = rng.choice([-1.0, 1.0], size=len(points))
        best = max(best, float(np.sqrt(((rows @ x) ** 2).sum())))
    return best


def compatible(funcs: Sequence[StepFunction], scheme: CantorScheme) -> bool:
    """Whether ``funcs[i-1]`` is identically ``eps`` on every cell ``d^(eps)``
    with ``|d| = i-1``; checked exactly on the interval representations."""
    if len(funcs) != scheme.depth:
        raise ValueError("need one function per scheme level")
    preimages = [
        {eps: normalize_union(f.preimage(float(eps))) for eps in (-1, 1)}
        for f in funcs
    ]
    for d, cell in scheme.cells.items():
        if not d:
            continue
        f = funcs[len(d) - 1]
        value = float(d[-1])
        if not _cell_is_interval(cell):
            if any(f(pt) != value for pt in cell):
                return False
            continue
        if not union_contains(preimages[len(d) - 1][d[-1]], cell):
            return False
    return True
