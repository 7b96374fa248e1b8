"""Hessian matrix construction, symbolic determinants, vanishing verdicts."""

import random
from fractions import Fraction

import pytest

from hesse_lab.errors import DimensionError, DomainError
from hesse_lab.fields import DEFAULT_PRIME
from hesse_lab.hessian import (
    PolyMatrix,
    det_fraction_free,
    det_minor_expansion,
    generic_hessian_rank,
    hessian_matrix,
    hessian_vanishes,
    polar_image_dim,
    symbolic_determinant,
)
from hesse_lab.poly import Polynomial, monomials_of_degree, parse

PAPER_CUBIC = parse("x0*x3^2 + 2*x1*x3*x4 + x2*x4^2")
FERMAT_CUBIC = parse("x0^3 + x1^3 + x2^3")


def test_hessian_of_sum_of_squares_is_diagonal():
    f = parse("x0^2 + x1^2 + x2^2", nvars=4)
    h = hessian_matrix(f)
    for i in range(4):
        for j in range(4):
            expected = 2 if (i == j and i < 3) else 0
            assert h.entries[i][j] == Polynomial.constant(4, expected)


def test_hessian_paper_cubic_entries():
    # oracle: differentiate x0*x3^2 + 2*x1*x3*x4 + x2*x4^2 twice by hand
    h = hessian_matrix(PAPER_CUBIC)
    x3 = parse("x3", nvars=5)
    x4 = parse("x4", nvars=5)
    zero = Polynomial.zero(5)
    assert h.entries[0][3] == x3.scale(2)
    assert h.entries[0][4] == zero
    assert h.entries[1][3] == x4.scale(2)
    assert h.entries[1][4] == x3.scale(2)
    assert h.entries[2][4] == x4.scale(2)
    assert h.entries[3][3] == parse("2*x0", nvars=5)
    assert h.entries[3][4] == parse("2*x1", nvars=5)
    assert h.entries[4][4] == parse("2*x2", nvars=5)
    for i in range(3):
        for j in range(3):
            assert h.entries[i][j] == zero


def test_hessian_of_linear_is_zero_matrix():
    h = hessian_matrix(parse("x0 + 2*x1"))
    assert all(e.is_zero() for row in h.entries for e in row)


def test_hessian_symmetry(seed=31, cases=20):
    rng = random.Random(seed)
    for _ in range(cases):
        monos = monomials_of_degree(3, 3)
        f = Polynomial(3, {e: rng.randint(-5, 5) for e in monos})
        if not f:
            continue
        assert hessian_matrix(f).is_symmetric()


def test_euler_derived_identity():
    # H_f · x = (d-1) · grad(f) for homogeneous f of degree d
    for f in (PAPER_CUBIC, FERMAT_CUBIC, parse("x0^4 + x1^2*x2^2")):
        d = f.degree()
        h = hessian_matrix(f)
        xs = [Polynomial.variable(f.nvars, i) for i in range(f.nvars)]
        lhs = h.mul_poly_vector(xs)
        for i, fi in enumerate(f.gradient()):
            assert lhs[i] == fi.scale(d - 1)


def test_det_diag_with_zero():
    f = parse("x0^2 + x1^2 + x2^2", nvars=4)
    assert symbolic_determinant(hessian_matrix(f)).is_zero()


def test_det_paper_cubic_vanishes_both_algorithms():
    h = hessian_matrix(PAPER_CUBIC)
    assert symbolic_determinant(h, "minor_expansion").is_zero()
    assert symbolic_determinant(h, "fraction_free").is_zero()


def test_det_2x2():
    x0 = parse("x0", nvars=2)
    x1 = parse("x1", nvars=2)
    m = PolyMatrix([[x0, x1], [x1, x0]])
    assert symbolic_determinant(m) == parse("x0^2 - x1^2")


def test_det_fermat_cubic():
    det = symbolic_determinant(hessian_matrix(FERMAT_CUBIC))
    assert det == parse("216*x0*x1*x2")


def test_det_algorithms_agree_seeded(seed=37, cases=50):
    rng = random.Random(seed)
    monos = monomials_of_degree(3, 2) + monomials_of_degree(3, 1) + monomials_of_degree(3, 0)
    for _ in range(cases):
        entries = [
            [
                Polynomial(3, {e: rng.randint(-3, 3) for e in rng.sample(monos, 3)})
                for _ in range(4)
            ]
            for _ in range(4)
        ]
        m = PolyMatrix(entries)
        assert det_minor_expansion(m) == det_fraction_free(m)


def test_det_rejects_non_square_and_oversize():
    x = parse("x0")
    with pytest.raises(DimensionError):
        symbolic_determinant(PolyMatrix([[x, x]]))
    big = PolyMatrix([[x] * 9 for _ in range(9)])
    with pytest.raises(DomainError):
        symbolic_determinant(big)


def test_vanishes_symbolic_paper_cubic():
    v = hessian_vanishes(PAPER_CUBIC, mode="symbolic")
    assert v.vanishes is True
    assert v.error_bound == 0
    assert v.mode == "symbolic"


def test_vanishes_symbolic_fermat_false():
    assert hessian_vanishes(FERMAT_CUBIC, mode="symbolic").vanishes is False


def test_vanishes_probabilistic_cone():
    f = parse("x0^3 + x1^3", nvars=4)
    v = hessian_vanishes(f, mode="probabilistic", trials=3, seed=0)
    assert v.vanishes is True
    assert v.degree_bound == 4
    assert v.error_bound == Fraction(4, DEFAULT_PRIME) ** 3
    assert v.error_bound <= Fraction(8, DEFAULT_PRIME) ** 3


def test_probabilistic_consistent_with_symbolic(seed=41, cases=15):
    rng = random.Random(seed)
    monos = monomials_of_degree(3, 3)
    for case in range(cases):
        f = Polynomial(3, {e: rng.randint(-5, 5) for e in monos})
        if not f:
            continue
        sym = hessian_vanishes(f, mode="symbolic").vanishes
        prob = hessian_vanishes(f, mode="probabilistic", trials=3, seed=case).vanishes
        if sym:
            assert prob
        if not prob:
            assert not sym


def test_probabilistic_trials_validation():
    with pytest.raises(DomainError):
        hessian_vanishes(PAPER_CUBIC, mode="probabilistic", trials=0)


def test_generic_rank_paper_cubic():
    # oracle: H_f at (1,1,1,1,1) row-reduces to rank 4, and the polar
    # relation y1^2 - 4*y0*y2 forces rank <= 4 everywhere
    assert generic_hessian_rank(PAPER_CUBIC, seed=0) == 4
    assert polar_image_dim(PAPER_CUBIC, seed=0) == 3


def test_generic_rank_smooth_quadric():
    f = parse("x0^2 + x1^2 + x2^2 + x3^2")
    assert generic_hessian_rank(f, seed=0) == 4
    assert polar_image_dim(f, seed=0) == 3


def test_polar_dim_of_cone():
    f = parse("x0^3 + x1^3", nvars=4)
    assert polar_image_dim(f, seed=0) == 1


def test_polar_dim_rejects_low_degree():
    with pytest.raises(DomainError):
        polar_image_dim(parse("x0 + x1"))


def test_rank_monotone_in_samples():
    f = parse("x0^3 + x1^3", nvars=4)
    ranks = [generic_hessian_rank(f, samples=s, seed=7) for s in range(1, 6)]
    assert all(a <= b for a, b in zip(ranks, ranks[1:]))


def test_cone_implies_vanishing():
    # classical direction: every cone here must have vanishing Hessian
    for text, n in (("x0^3 + x1^3", 4), ("x0^4", 3), ("x0^2 + x0*x1", 3)):
        f = parse(text, nvars=n)
        assert hessian_vanishes(f, mode="symbolic").vanishes


def test_unknown_determinant_algorithm_rejected():
    m = hessian_matrix(FERMAT_CUBIC)
    with pytest.raises(DomainError):
        symbolic_determinant(m, "cofactor_magic")


def test_vanishes_rejects_bad_input():
    with pytest.raises(DomainError):
        hessian_vanishes(Polynomial.zero(3))
    with pytest.raises(DomainError):
        hessian_vanishes(parse("x0^2 + x1"))
    with pytest.raises(DomainError):
        hessian_vanishes(FERMAT_CUBIC, mode="numerology")
