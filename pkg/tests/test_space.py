import math
from fractions import Fraction
from itertools import product

import pytest

from ordtensor.ordinal import OMEGA, Ordinal, omega_pow
from ordtensor.space import (
    AtomicMeasure,
    CantorScheme,
    Iv,
    StepFunction,
    compatible,
    default_selector,
    disjoint,
    indicator,
    normalize_union,
    rademacher,
    union_contains,
    union_intersect,
    weak2_norm_squared_exact,
    weak2_norm_sampled,
    weak_1_norm_exact,
    weak_p_norm,
)

F = Ordinal.from_int
W = OMEGA


def iv(a, b):
    return Iv(F(a), F(b))


class TestIntervals:
    def test_contains(self):
        assert iv(1, 3).contains(F(2))
        assert not iv(1, 3).contains(F(1))
        assert iv(1, 3).contains(F(3))
        assert Iv(None, F(3)).contains(F(0))

    def test_intersect(self):
        assert iv(0, 4).intersect(iv(2, 6)) == iv(2, 4)
        assert iv(0, 2).intersect(iv(2, 4)) is None
        assert Iv(None, F(2)).intersect(iv(1, 5)) == iv(1, 2)

    def test_least(self):
        assert iv(1, 2).least() == F(2)
        assert iv(0, 2).least() == F(1)
        assert Iv(None, F(5)).least() == F(0)
        assert Iv(W, W + 4).least() == W + 1

    def test_normalize_merges(self):
        u = normalize_union([iv(2, 3), iv(0, 1), iv(1, 2)])
        assert u == (iv(0, 3),)

    def test_union_ops(self):
        a = (iv(0, 2), iv(4, 6))
        b = (iv(1, 5),)
        assert union_intersect(a, b) == (iv(1, 2), iv(4, 5))
        assert union_contains(a, (iv(0, 1),))
        assert not union_contains(a, (iv(1, 5),))


class TestStepFunction:
    def test_eval_and_canonical(self):
        f = StepFunction(W, [(iv(0, 2), 1.0), (iv(2, 4), -1.0)])
        assert f(1) == 1.0 and f(3) == -1.0 and f(0) == 0 and f(5) == 0
        merged = StepFunction(W, [(iv(0, 2), 1.0), (iv(2, 4), 1.0)])
        assert merged.pieces == ((iv(0, 4), 1.0),)

    def test_rejects_overlap_and_overflow(self):
        with pytest.raises(ValueError):
            StepFunction(W, [(iv(0, 3), 1.0), (iv(2, 4), 1.0)])
        with pytest.raises(ValueError):
            StepFunction(F(3), [(iv(0, 5), 1.0)])

    def test_sup_and_support(self):
        f = StepFunction(W, [(iv(0, 2), 0.5), (iv(3, 4), -2.0)])
        assert f.sup_norm() == 2.0
        assert f.support() == (iv(0, 2), iv(3, 4))
        assert StepFunction(W, []).sup_norm() == 0

    def test_restrict_project(self):
        f = StepFunction(W, [(iv(0, 2), 1.0), (iv(2, 4), -1.0)])
        assert f.project(W) == f
        r = f.restrict(F(2))
        assert r.top == F(2) and r.pieces == ((iv(0, 2), 1.0),)
        p = f.project(F(2))
        assert p.top == W and p.pieces == ((iv(0, 2), 1.0),)
        assert r.sup_norm() <= f.sup_norm()

    def test_project_commutes_with_linear_combinations(self):
        f = StepFunction(W, [(iv(0, 3), 1.0)])
        g = StepFunction(W, [(iv(2, 5), -2.0)])
        lhs = (f + g).project(F(4))
        rhs = f.project(F(4)) + g.project(F(4))
        assert lhs == rhs
        assert (2.0 * f).project(F(2)) == 2.0 * f.project(F(2))

    def test_restrict_commutes_with_linear_combinations(self):
        f = StepFunction(W, [(iv(0, 3), 1.0)])
        g = StepFunction(W, [(iv(2, 5), -2.0)])
        assert (f + g).restrict(F(4)) == f.restrict(F(4)) + g.restrict(F(4))
        for beta in (2, 4, 6):
            assert all(
                piece.hi <= F(beta) for piece in f.project(F(beta)).support()
            )

    def test_add_scale_exact_values(self):
        f = StepFunction(W, [(iv(0, 2), Fraction(1, 3))])
        g = StepFunction(W, [(iv(1, 3), Fraction(2, 3))])
        h = f + g
        assert h(1) == Fraction(1, 3)
        assert h(2) == Fraction(1)
        assert h(3) == Fraction(2, 3)
        assert (Fraction(3) * f)(1) == Fraction(1)

    def test_ordinal_pieces(self):
        f = StepFunction(omega_pow(2), [(Iv(W.mul_nat(2), W.mul_nat(4)), -1.0)])
        assert f(W.mul_nat(3)) == -1.0
        assert f(W.mul_nat(2)) == 0
        assert f(W.mul_nat(4)) == -1.0


class TestDisjointAndWeakNorms:
    def test_disjoint(self):
        a = indicator(W, iv(0, 1))
        b = indicator(W, iv(1, 2))
        assert disjoint([a, b])
        assert not disjoint([a, a])
        assert disjoint([])

    def test_weak_p(self):
        a = indicator(W, iv(0, 1))
        b = indicator(W, iv(1, 2))
        assert weak_p_norm([a, b], 1) == 1.0
        c = StepFunction(W, [(iv(0, 2), 1.0)])
        d = StepFunction(W, [(iv(1, 3), 1.0)])
        assert weak_p_norm([c, d], 1) == 2.0
        assert math.isclose(weak_p_norm([c, d], 2), math.sqrt(2))
        assert weak_1_norm_exact([c, d]) == Fraction(2)


class TestAtomicMeasure:
    def test_pair(self):
        f = StepFunction(W, [(iv(0, 2), 1.0), (iv(2, 4), -1.0)])
        assert AtomicMeasure.dirac(F(1)).pair(f) == 1
        assert AtomicMeasure.dirac(F(3)).pair(f) == -1
        mu = AtomicMeasure(((F(1), Fraction(1, 2)), (F(3), Fraction(1, 2))))
        assert mu.pair(f) == 0
        assert mu.total_variation() == 1

    def test_zero_function(self):
        zero = StepFunction(W, [])
        mu = AtomicMeasure.dirac(F(5))
        assert mu.pair(zero) == 0

    def test_distinct_points(self):
        with pytest.raises(ValueError):
            AtomicMeasure(((F(1), Fraction(1)), (F(1), Fraction(2))))


def toy_scheme():
    cells = {
        (): (iv(0, 4),),
        (1,): (iv(0, 2),),
        (-1,): (iv(2, 4),),
        (1, 1): (iv(0, 1),),
        (1, -1): (iv(1, 2),),
        (-1, 1): (iv(2, 3),),
        (-1, -1): (iv(3, 4),),
    }
    return CantorScheme(depth=2, cells=cells)


class TestCantorScheme:
    def test_validation(self):
        toy_scheme()
        bad = {
            (): (iv(0, 4),),
            (1,): (iv(0, 3),),
            (-1,): (iv(2, 4),),  # overlaps the (1,) cell
        }
        with pytest.raises(ValueError):
            CantorScheme(depth=1, cells=bad)
        with pytest.raises(ValueError):
            CantorScheme(depth=1, cells={(): (iv(0, 2),), (1,): (iv(0, 1),)})

    def test_default_selector_least_points(self):
        sel = default_selector(toy_scheme())
        assert sel[(1, 1)] == F(1)
        assert sel[(1, -1)] == F(2)
        assert sel[(-1, -1)] == F(4)

    def test_point_set_cells(self):
        cells = {
            (): ((1,), (2,), (1, 2)),
            (1,): ((1,),),
            (-1,): ((2,), (1, 2)),
        }
        s = CantorScheme(depth=1, cells=cells)
        assert default_selector(s)[(1,)] == (1,)


class TestRademacher:
    def test_depth_one(self):
        cells = {(): (iv(0, 2),), (1,): (iv(0, 1),), (-1,): (iv(1, 2),)}
        s = CantorScheme(depth=1, cells=cells)
        (mu,) = rademacher(s, default_selector(s))
        assert dict(mu.atoms) == {F(1): Fraction(1, 2), F(2): Fraction(-1, 2)}
        assert mu.total_variation() == 1

    def test_depth_two_weights(self):
        s = toy_scheme()
        mus = rademacher(s, default_selector(s))
        for mu in mus:
            assert sorted(abs(w) for _, w in mu.atoms) == [Fraction(1, 4)] * 4

    def test_selector_outside_cell_rejected(self):
        s = toy_scheme()
        sel = default_selector(s)
        sel[(1, 1)] = F(4)
        with pytest.raises(ValueError):
            rademacher(s, sel)

    def test_weak2_bound_exact_and_sampled(self):
        s = toy_scheme()
        mus = rademacher(s, default_selector(s))
        sq = weak2_norm_squared_exact(mus)
        assert sq <= 1
        assert weak2_norm_sampled(mus, samples=32, seed=0) <= math.sqrt(float(sq)) + 1e-9


class TestCompatibility:
    def test_toy_compatible_family(self):
        f1 = StepFunction(W, [(iv(0, 2), 1.0), (iv(2, 4), -1.0)])
        f2 = StepFunction(W, [(iv(0, 1), 1.0), (iv(1, 2), -1.0),
                              (iv(2, 3), 1.0), (iv(3, 4), -1.0)])
        assert compatible([f1, f2], toy_scheme())
        assert not compatible([f2, f1], toy_scheme())
