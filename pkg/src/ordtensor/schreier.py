"""Schreier families S_xi and their convolutions S_zeta[S_xi].

Membership, maximality, decomposition of integer streams into successive
maximal members, canonical representations of convolution members, and
node ranks in the derived-tree hierarchy.

Finite sets are plain tuples of strictly increasing positive integers.
Infinite sets are represented by caller-supplied iterators of strictly
increasing positive integers.

The recursive definitions are evaluated through a single primitive: the
length of the greedy maximal block of a sequence starting at a given
position.  A set belongs to a family exactly when it is an initial
segment of such a block; because the families are hereditary and
spreading, the greedy split into maximal blocks is canonical.  The test
suite checks this characterization against a brute-force partition
search over small ground sets.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Union

from .ordinal import ONE, Ordinal, as_ordinal, parse_ordinal

__all__ = [
    "Base",
    "Conv",
    "Family",
    "StreamExhausted",
    "BudgetExceeded",
    "member",
    "is_maximal",
    "split_blocks",
    "canonical_rep",
    "decompose",
    "node_rank",
    "node_rank_brute",
    "node_rank_exact",
    "least_shift",
    "parse_family",
    "family_str",
    "as_finite_set",
]


@dataclass(frozen=True)
class Base:
    """The family S_xi."""

    xi: Ordinal

    def __post_init__(self):
        object.__setattr__(self, "xi", as_ordinal(self.xi))


@dataclass(frozen=True)
class Conv:
    """The convolution S_zeta[S_xi]: unions of successive S_xi sets
    whose minima form an S_zeta set."""

    zeta: Ordinal
    xi: Ordinal

    def __post_init__(self):
        object.__setattr__(self, "zeta", as_ordinal(self.zeta))
        object.__setattr__(self, "xi", as_ordinal(self.xi))


Family = Union[Base, Conv]


class StreamExhausted(Exception):
    """An integer stream ended before the requested block completed."""


class BudgetExceeded(Exception):
    """A materialization budget was hit before the block completed."""


def as_finite_set(values: Iterable[int]) -> tuple[int, ...]:
    t = tuple(int(v) for v in values)
    if any(v < 1 for v in t):
        raise ValueError("elements must be positive integers")
    if any(a >= b for a, b in zip(t, t[1:])):
        raise ValueError("elements must be strictly increasing")
    return t


# -- the greedy block primitive ----------------------------------------


class _TupleSource:
    """Finite sequence adapter; IndexError signals a cut (partial) block."""

    __slots__ = ("seq",)

    def __init__(self, seq):
        self.seq = seq

    def get(self, i: int) -> int:
        if i >= len(self.seq):
            raise IndexError
        return self.seq[i]


def _base_block_end(xi: Ordinal, source, start: int) -> int:
    """Index just past the maximal S_xi block of the source from ``start``.

    Runs an explicit work stack of (level, blocks-remaining) frames, so
    high finite levels (which a set with a large minimum reaches through
    the limit diagonalization) do not recurse.  A finite source that
    ends mid-walk yields its end index: the block is cut short there.
    """
    pos = start
    stack = [[xi, 1]]
    while stack:
        frame = stack[-1]
        if frame[1] == 0:
            stack.pop()
            continue
        level = frame[0]
        try:
            m = source.get(pos)
        except IndexError:
            return pos
        if level.is_zero():
            pos += 1
            frame[1] -= 1
            continue
        frame[1] -= 1
        if level.classify() == "successor":
            stack.append([level.predecessor(), m])
        else:
            stack.append([level.fundamental(m) + ONE, 1])
    return pos


def _block_len(fam: Family, seq: tuple[int, ...], start: int) -> int:
    """Length of the greedy fam-block of ``seq`` beginning at ``start``.

    The block is the maximal member of ``fam`` that the elements
    ``seq[start:]`` begin to spell out; if the sequence ends first, the
    (partial) remainder consumed so far is returned.
    """
    n = len(seq)
    if start >= n:
        return 0
    if isinstance(fam, Base):
        return _base_block_end(fam.xi, _TupleSource(seq), start) - start
    # convolution: inner blocks whose minima spell a maximal outer block
    source = _TupleSource(seq)
    positions = [start]
    minima = []
    while positions[-1] < n:
        minima.append(seq[positions[-1]])
        positions.append(_base_block_end(fam.xi, source, positions[-1]))
    outer_len = _block_len(Base(fam.zeta), tuple(minima), 0)
    return positions[outer_len] - start


def member(fam: Family, E: Iterable[int]) -> bool:
    """Exact membership of a finite set in the family."""
    E = as_finite_set(E)
    return _member(fam, E)


@lru_cache(maxsize=1 << 18)
def _member(fam: Family, E: tuple[int, ...]) -> bool:
    if not E:
        return True
    return _block_len(fam, E, 0) == len(E)


def is_maximal(fam: Family, E: Iterable[int]) -> bool:
    """True iff E is a maximal member (no extension stays in the family).

    By the spreading property it is enough to test the single extension
    by ``max E + 1``.
    """
    E = as_finite_set(E)
    if not E:
        raise ValueError("the empty set is never maximal")
    if not _member(fam, E):
        raise ValueError(f"{E} is not a member of {family_str(fam)}")
    return not _member(fam, E + (E[-1] + 1,))


def split_blocks(fam: Family, E: Iterable[int]) -> tuple[tuple[int, ...], ...]:
    """Greedy decomposition of an arbitrary non-empty finite set.

    Returns successive blocks, each a member of ``fam``, where every
    block except possibly the last is maximal in ``fam``.
    """
    E = as_finite_set(E)
    if not E:
        raise ValueError("cannot split the empty set")
    blocks = []
    i = 0
    while i < len(E):
        j = i + _block_len(fam, E, i)
        blocks.append(E[i:j])
        i = j
    return tuple(blocks)


def canonical_rep(fam: Conv, E: Iterable[int]) -> tuple[tuple[int, ...], ...]:
    """Canonical representation of a convolution member.

    ``E = E_1 u ... u E_m`` with each ``E_i`` in S_xi, all but the last
    maximal in S_xi, and the minima forming an S_zeta set.
    """
    if not isinstance(fam, Conv):
        raise TypeError("canonical_rep applies to convolution families")
    E = as_finite_set(E)
    if not E:
        raise ValueError("the empty set has no canonical representation")
    if not _member(fam, E):
        raise ValueError(f"{E} is not a member of {family_str(fam)}")
    return split_blocks(Base(fam.xi), E)


# -- streams ----------------------------------------------------------


class _Buffered:
    """Strictly increasing integer stream with indexed lookahead."""

    def __init__(self, source: Iterable[int], max_elements: int | None = None):
        self._it = iter(source)
        self._buf: list[int] = []
        self._budget = max_elements

    def get(self, i: int) -> int:
        while len(self._buf) <= i:
            if self._budget is not None and len(self._buf) >= self._budget:
                raise BudgetExceeded(
                    f"block needs more than {self._budget} stream elements"
                )
            try:
                v = int(next(self._it))
            except StopIteration:
                raise StreamExhausted(
                    f"stream ended after {len(self._buf)} elements"
                ) from None
            if v < 1 or (self._buf and v <= self._buf[-1]):
                raise ValueError("stream must be strictly increasing and positive")
            self._buf.append(v)
        return self._buf[i]

    def slice(self, start: int, end: int) -> tuple[int, ...]:
        self.get(end - 1)
        return tuple(self._buf[start:end])


class _MinimaView:
    """Presents the minima of successive inner blocks as a sequence."""

    def __init__(self, inner: Family, bs, start: int):
        self._inner = inner
        self._bs = bs
        self._positions = [start]

    def get(self, i: int) -> int:
        while len(self._positions) <= i:
            self._positions.append(
                _take_block(self._inner, self._bs, self._positions[-1])
            )
        # make sure the block actually starts (pulls the element)
        return self._bs.get(self._positions[i])

    def position(self, i: int) -> int:
        while len(self._positions) <= i:
            self._positions.append(
                _take_block(self._inner, self._bs, self._positions[-1])
            )
        return self._positions[i]


def _take_block(fam: Family, bs, start: int) -> int:
    """Index just past the maximal fam-block starting at ``start``.

    Unlike :func:`_block_len` this works against a live stream and pulls
    exactly the elements it needs; the block returned is always a
    complete maximal member (the stream source raises on exhaustion).
    """
    if isinstance(fam, Base):
        return _base_block_end(fam.xi, bs, start)
    view = _MinimaView(Base(fam.xi), bs, start)
    outer_len = _base_block_end(fam.zeta, view, 0)
    return view.position(outer_len)


def decompose(
    fam: Family,
    stream: Iterable[int],
    k: int,
    *,
    max_elements: int | None = None,
) -> tuple[tuple[int, ...], ...]:
    """First k blocks of the fam-decomposition of an infinite set.

    The blocks are the successive maximal members of ``fam`` whose union
    is an initial segment of the stream.  Raises
    :class:`StreamExhausted` if the stream ends first, and
    :class:`BudgetExceeded` if ``max_elements`` is hit.
    """
    if k < 1:
        raise ValueError("k must be positive")
    bs = _Buffered(stream, max_elements)
    blocks = []
    pos = 0
    for _ in range(k):
        end = _take_block(fam, bs, pos)
        blocks.append(bs.slice(pos, end))
        pos = end
    return tuple(blocks)


# -- node ranks in the derived-tree hierarchy --------------------------


def node_rank(fam: Family, E: Iterable[int], trunc: int) -> int:
    """Rank of E in the derived trees of the family, truncated to [1, trunc].

    For S_1 the exact closed form ``min E - |E|`` is returned.  For
    other families the rank is computed by brute-force derived-tree
    iteration on the restriction of the family to subsets of
    ``[1, trunc]``; this is a lower bound of the untruncated rank and is
    exact when ``trunc`` is large enough that every extension of E
    inside the family fits below it.
    """
    E = as_finite_set(E)
    if not E:
        raise ValueError("rank of the empty node is not defined")
    if not _member(fam, E):
        raise ValueError(f"{E} is not a member of {family_str(fam)}")
    if isinstance(fam, Base) and fam.xi == ONE:
        return E[0] - len(E)
    return node_rank_brute(fam, E, trunc)


def node_rank_brute(fam: Family, E: Iterable[int], trunc: int) -> int:
    """Derived-tree iteration on the truncated family tree.

    Materializes the subtree of the family tree rooted at E (extensions
    of E by elements <= trunc) and repeatedly removes maximal nodes; the
    result is the number of rounds E survives.  Ranks are local: the
    round at which E disappears depends only on its subtree.
    """
    E = as_finite_set(E)
    if not E:
        raise ValueError("rank of the empty node is not defined")
    if not _member(fam, E):
        raise ValueError(f"{E} is not a member of {family_str(fam)}")
    children: dict[tuple[int, ...], list[tuple[int, ...]]] = {}
    stack = [E]
    while stack:
        node = stack.pop()
        kids = []
        for m in range(node[-1] + 1, trunc + 1):
            child = node + (m,)
            if _member(fam, child):
                kids.append(child)
        children[node] = kids
        stack.extend(kids)
    remaining = {node: len(kids) for node, kids in children.items()}
    parent = {
        kid: node for node, kids in children.items() for kid in kids
    }
    frontier = [node for node, cnt in remaining.items() if cnt == 0]
    rank = 0
    while True:
        if E in frontier:
            return rank
        next_frontier = []
        for node in frontier:
            p = parent[node]
            remaining[p] -= 1
            if remaining[p] == 0:
                next_frontier.append(p)
        frontier = next_frontier
        rank += 1


def node_rank_exact(fam: Family, E: Iterable[int]) -> Ordinal:
    """Exact ordinal rank of E in the (untruncated) family tree.

    Closed forms are available for S_1 and S_2; these are the families
    the tree machinery needs.  For S_1 the rank is ``min E - |E|``.  For
    S_2 with greedy S_1-blocks ``B_1 < ... < B_j`` the rank is
    ``w*(min E - j) + (min B_j - |B_j|)``: each unopened inner block
    contributes a factor of w, the unfinished block its remaining slots.
    The closed forms are validated against :func:`node_rank_brute` in
    the test suite.
    """
    E = as_finite_set(E)
    if not E:
        raise ValueError("rank of the empty node is not defined")
    if not _member(fam, E):
        raise ValueError(f"{E} is not a member of {family_str(fam)}")
    if isinstance(fam, Base) and fam.xi == ONE:
        return Ordinal.from_int(E[0] - len(E))
    if isinstance(fam, Base) and fam.xi == Ordinal.from_int(2):
        blocks = split_blocks(Base(ONE), E)
        open_blocks = E[0] - len(blocks)
        slots = blocks[-1][0] - len(blocks[-1])
        from .ordinal import OMEGA

        return OMEGA.mul_nat(open_blocks) + Ordinal.from_int(slots)
    raise NotImplementedError(
        f"no exact rank for {family_str(fam)}; use node_rank_brute"
    )


def least_shift(xi, zeta, bound: int = 10) -> int | None:
    """Least k such that every S_xi set within [k, bound] is in S_zeta.

    Empirical search on the finite ground set [1, bound]; returns None
    when no such k exists below the bound.
    """
    fam_xi, fam_zeta = Base(as_ordinal(xi)), Base(as_ordinal(zeta))
    from itertools import combinations

    for k in range(1, bound + 2):
        ok = True
        for size in range(1, bound - k + 2):
            for E in combinations(range(k, bound + 1), size):
                if _member(fam_xi, E) and not _member(fam_zeta, E):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return k
    return None


# -- descriptor text syntax -------------------------------------------


def family_str(fam: Family) -> str:
    if isinstance(fam, Base):
        return f"S[{fam.xi}]"
    return f"S[{fam.zeta}][S[{fam.xi}]]"


def parse_family(text: str) -> Family:
    """Parse ``S[<ordinal>]`` or ``S[<ordinal>][S[<ordinal>]]``."""
    s = text.strip()
    if not s.startswith("S["):
        raise ValueError(f"not a family descriptor: {text!r}")
    close = s.index("]", 2)
    first = parse_ordinal(s[2:close])
    rest = s[close + 1 :]
    if not rest:
        return Base(first)
    if not (rest.startswith("[S[") and rest.endswith("]]")):
        raise ValueError(f"not a family descriptor: {text!r}")
    inner = parse_ordinal(rest[3:-2])
    return Conv(first, inner)
