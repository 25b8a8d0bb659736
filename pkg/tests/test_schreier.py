from itertools import chain, combinations, count

import pytest

from ordtensor.ordinal import OMEGA, Ordinal
from ordtensor.schreier import (
    Base,
    BudgetExceeded,
    Conv,
    StreamExhausted,
    canonical_rep,
    decompose,
    family_str,
    is_maximal,
    least_shift,
    member,
    node_rank,
    node_rank_brute,
    node_rank_exact,
    parse_family,
    split_blocks,
)

from oracles import brute_member, subsets

F = Ordinal.from_int


class TestMemberExamples:
    def test_base_cases(self):
        assert member(Base(0), ())
        assert member(Base(0), (7,))
        assert not member(Base(0), (3, 4))

    def test_level_one(self):
        assert member(Base(1), (2, 5))
        assert not member(Base(1), (2, 5, 7))

    def test_convolution(self):
        assert member(Conv(1, 1), (2, 3, 4, 5, 6, 7))
        assert not member(Conv(1, 1), (1, 2, 3, 4))

    def test_input_validation(self):
        with pytest.raises(ValueError):
            member(Base(1), (2, 2))
        with pytest.raises(ValueError):
            member(Base(1), (0, 3))


class TestBruteAgreement:
    """The greedy-walk membership equals the definitional partition search."""

    FAMS = [
        Base(0),
        Base(1),
        Base(2),
        Base(3),
        Base(OMEGA),
        Base(OMEGA + 1),
        Conv(1, 1),
        Conv(2, 1),
        Conv(1, 2),
        Conv(0, 2),
        Conv(2, 2),
    ]

    @pytest.mark.parametrize("fam", FAMS, ids=family_str)
    def test_exhaustive_on_small_sets(self, fam):
        for E in subsets(range(1, 10)):
            assert member(fam, E) == brute_member(fam, E), E


class TestMaximal:
    def test_examples(self):
        assert is_maximal(Base(1), (2, 3))
        assert not is_maximal(Base(1), (3, 4))
        assert is_maximal(Base(0), (7,))

    def test_errors(self):
        with pytest.raises(ValueError):
            is_maximal(Base(1), ())
        with pytest.raises(ValueError):
            is_maximal(Base(1), (2, 5, 7))

    def test_agrees_with_all_extensions(self):
        # single-extension test suffices by spreading: cross-check against
        # trying every next element in a window
        for E in subsets(range(1, 8)):
            if not E or not member(Base(2), E):
                continue
            flagged = is_maximal(Base(2), E)
            extens = any(
                member(Base(2), E + (n,)) for n in range(E[-1] + 1, 20)
            )
            assert flagged == (not extens)


class TestDecompose:
    def test_examples(self):
        assert decompose(Base(0), count(3), 3) == ((3,), (4,), (5,))
        assert decompose(Base(1), count(3), 2) == ((3, 4, 5), (6, 7, 8, 9, 10, 11))
        assert decompose(Conv(1, 0), count(3), 1) == ((3, 4, 5),)

    def test_blocks_are_successive_maximal_members(self):
        for fam in [Base(1), Base(2), Conv(1, 1)]:
            blocks = decompose(fam, count(2), 2, max_elements=5000)
            for b in blocks:
                assert member(fam, b) and is_maximal(fam, b)
            flat = tuple(chain.from_iterable(blocks))
            assert flat == tuple(range(2, 2 + len(flat)))

    def test_reproducible_on_own_output(self):
        fam = Base(1)
        blocks = decompose(fam, count(4), 3)
        replay = chain(chain.from_iterable(blocks), count(blocks[-1][-1] + 1))
        assert decompose(fam, replay, 3) == blocks

    def test_stream_errors(self):
        with pytest.raises(StreamExhausted):
            decompose(Base(1), iter([3, 4]), 1)
        with pytest.raises(ValueError):
            decompose(Base(1), iter([3, 3, 4]), 1)
        with pytest.raises(BudgetExceeded):
            decompose(Base(2), count(3), 2, max_elements=100)


class TestDecomposeFuzz:
    """Sparse random streams: blocks stay maximal members whose union is
    an initial segment, and splitting the concatenation reproduces them."""

    FAMS = [Base(0), Base(1), Base(2), Base(3), Base(OMEGA), Base(OMEGA + 1),
            Conv(1, 1), Conv(2, 1), Conv(1, 2), Conv(1, OMEGA)]

    def test_sparse_streams(self):
        import random

        random.seed(20240817)
        checked = 0
        for fam in self.FAMS:
            for _ in range(8):
                start = random.randint(1, 6)
                vals = sorted(random.sample(range(start + 1, start + 4000), 3500))
                stream = chain([start], vals)
                try:
                    blocks = decompose(fam, stream, 2, max_elements=3000)
                except BudgetExceeded:
                    continue
                flat = tuple(chain.from_iterable(blocks))
                assert flat == tuple([start] + vals)[: len(flat)]
                for b in blocks:
                    assert member(fam, b) and is_maximal(fam, b)
                assert split_blocks(fam, flat) == blocks
                checked += 1
        assert checked >= 15


class TestCanonicalRep:
    def test_examples(self):
        assert canonical_rep(Conv(1, 0), (3, 4)) == ((3,), (4,))
        assert canonical_rep(Conv(1, 1), (2, 3, 5, 6, 7)) == ((2, 3), (5, 6, 7))
        for E in subsets(range(1, 9)):
            if E and member(Base(2), E):
                assert canonical_rep(Conv(0, 2), E) == (E,)

    def test_properties(self):
        fam = Conv(1, 1)
        for E in subsets(range(1, 9)):
            if not E or not member(fam, E):
                continue
            blocks = canonical_rep(fam, E)
            assert tuple(chain.from_iterable(blocks)) == E
            for b in blocks[:-1]:
                assert is_maximal(Base(1), b)
            assert member(Base(1), blocks[-1])
            assert member(Base(1), tuple(b[0] for b in blocks))

    def test_errors(self):
        with pytest.raises(TypeError):
            canonical_rep(Base(1), (2, 3))
        with pytest.raises(ValueError):
            canonical_rep(Conv(1, 1), (1, 2, 3))


class TestSuccessoridentity:
    @pytest.mark.parametrize("xi", [0, 1, 2])
    def test_agreement(self, xi):
        for E in subsets(range(1, 11)):
            assert member(Base(xi + 1), E) == member(Conv(1, xi), E)


class TestNodeRank:
    def test_examples(self):
        assert node_rank(Base(1), (5,), 20) == 4
        assert node_rank(Base(1), (3, 4, 5), 20) == 0
        assert node_rank_brute(Base(2), (2, 3), 12) >= 1

    def test_closed_form_matches_brute(self):
        for E in subsets(range(1, 11)):
            if E and member(Base(1), E):
                assert node_rank(Base(1), E, 2 * E[-1]) == node_rank_brute(
                    Base(1), E, 2 * E[-1]
                )

    def test_exact_base_two_closed_form(self):
        # nodes with no unopened inner block have finite complete subtrees
        for E in subsets(range(1, 9)):
            if not E or not member(Base(2), E):
                continue
            exact = node_rank_exact(Base(2), E)
            blocks = split_blocks(Base(1), E)
            if len(blocks) == E[0]:
                slots = blocks[-1][0] - len(blocks[-1])
                trunc = E[-1] + slots + 1
                assert exact == F(node_rank_brute(Base(2), E, trunc))
            else:
                # truncation can only see finitely far below a limit rank
                b1 = node_rank_brute(Base(2), E, E[-1] + 4)
                b2 = node_rank_brute(Base(2), E, E[-1] + 7)
                assert F(b1) < exact and F(b2) < exact
                assert b1 <= b2

    def test_exact_base_one(self):
        for E in subsets(range(1, 9)):
            if E and member(Base(1), E):
                assert node_rank_exact(Base(1), E) == F(E[0] - len(E))

    def test_errors(self):
        with pytest.raises(ValueError):
            node_rank(Base(1), (2, 5, 7), 20)
        with pytest.raises(NotImplementedError):
            node_rank_exact(Base(3), (2,))


class TestRegularity:
    @pytest.mark.parametrize(
        "fam", [Base(1), Base(2), Conv(1, 1)], ids=family_str
    )
    def test_hereditary_and_spreading(self, fam):
        members = [E for E in subsets(range(1, 9)) if E and member(fam, E)]
        for E in members:
            for sub in subsets(E):
                assert member(fam, sub)
            for spread in combinations(range(E[0], 11), len(E)):
                if all(s >= e for s, e in zip(spread, E)):
                    assert member(fam, spread)

    def test_inclusion_shift_exists(self):
        assert least_shift(1, 2, bound=10) is not None
        assert least_shift(1, OMEGA, bound=10) is not None


class TestDescriptorSyntax:
    @pytest.mark.parametrize(
        "text", ["S[0]", "S[1]", "S[w]", "S[w + 1]", "S[1][S[w]]", "S[2][S[1]]"]
    )
    def test_round_trip(self, text):
        assert family_str(parse_family(text)) == text

    def test_rejects_garbage(self):
        for bad in ["S", "S[]", "T[1]", "S[1][2]"]:
            with pytest.raises(ValueError):
                parse_family(bad)
