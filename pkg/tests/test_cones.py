"""Cone tests, vertices, singular membership, restriction, projection lemma."""

import random
from fractions import Fraction

import pytest

from hesse_lab.errors import DomainError, RestrictionZeroError
from hesse_lab.cones import (
    HyperplaneChart,
    apply_linear_change,
    chart_for_hyperplane,
    cone_test,
    directional_derivative,
    projection_lemma_check,
    restrict,
    sing_membership,
    translation_invariant,
)
from hesse_lab.fields import substream
from hesse_lab.hessian import hessian_vanishes
from hesse_lab.linalg import invert, random_invertible
from hesse_lab.poly import parse

PAPER_CUBIC = parse("x0*x3^2 + 2*x1*x3*x4 + x2*x4^2")


def test_paper_cubic_not_a_cone():
    v = cone_test(PAPER_CUBIC)
    assert v.projective_dim == -1
    assert not v.is_cone


def test_cone_x0_x1_cubed():
    f = parse("x0^3 + x1^3", nvars=4)
    v = cone_test(f)
    assert v.projective_dim == 1
    # vertex is {x0 = x1 = 0}
    for vec in v.basis:
        assert vec[0] == 0 and vec[1] == 0


def test_cone_dim_invariant_under_coordinate_change():
    f = parse("x0^3 + x1^3", nvars=4)
    rng = substream(0, "test_change")
    a = random_invertible(4, rng)
    g = apply_linear_change(f, a)
    v = cone_test(g)
    assert v.projective_dim == 1
    # oracle: transform the known vertex basis by the inverse and re-verify
    ainv = invert(a)
    for e in ((0, 0, 1, 0), (0, 0, 0, 1)):
        w = ainv.mul_vector(list(e))
        assert directional_derivative(g, w).is_zero()


def test_vertex_certificate_translation_invariance():
    f = parse("x0^3 + x1^3", nvars=4)
    for v in cone_test(f).basis:
        assert translation_invariant(f, v)


def test_cone_implies_vanishing_hessian():
    for text, n in (("x0^3 + x1^3", 4), ("x0^2*x1 + x1^3", 4)):
        f = parse(text, nvars=n)
        assert cone_test(f).is_cone
        assert hessian_vanishes(f, mode="symbolic").vanishes


def test_sing_membership_paper_cubic():
    # all five partials contain x3 or x4 in every monomial
    assert sing_membership(PAPER_CUBIC, (1, 0, 0, 0, 0)) is True


def test_sing_membership_fermat():
    assert sing_membership(parse("x0^3 + x1^3 + x2^3"), (1, 0, 0)) is False


def test_sing_membership_generic_point():
    rng = substream(3, "sing")
    pt = [rng.randint(1, 9) for _ in range(5)]
    assert sing_membership(PAPER_CUBIC, pt) is False


def test_sing_membership_rejects_zero_vector():
    with pytest.raises(DomainError):
        sing_membership(PAPER_CUBIC, (0, 0, 0, 0, 0))


def _pencil_chart(c):
    # hyperplane x4 = c*x3 parametrized by (x0, x1, x2, x3)
    rows = (
        (1, 0, 0, 0),
        (0, 1, 0, 0),
        (0, 0, 1, 0),
        (0, 0, 0, 1),
        (0, 0, 0, c),
    )
    return HyperplaneChart(ambient_vars=5, parametrization=rows, dual_point=(0, 0, 0, -c, 1))


def test_restrict_paper_cubic_to_pencil():
    for c in (1, 2, Fraction(1, 2)):
        section = restrict(PAPER_CUBIC, _pencil_chart(c))
        expected = parse("x3^2", nvars=4) * (
            parse("x0", nvars=4)
            + parse("x1", nvars=4).scale(2 * c)
            + parse("x2", nvars=4).scale(c * c)
        )
        assert section == expected
        assert section.degree() == PAPER_CUBIC.degree()


def test_restrict_quadric_drop_last_variable():
    f = parse("x0^2 + x1^2 + x2^2")
    chart = chart_for_hyperplane((0, 0, 1))
    assert restrict(f, chart) == parse("x0^2 + x1^2")


def test_restrict_vanishing_is_an_error():
    f = parse("x2", nvars=3) * parse("x0 + x1", nvars=3)
    chart = chart_for_hyperplane((0, 0, 1))  # H = {x2 = 0} ⊂ V(f)
    with pytest.raises(RestrictionZeroError):
        restrict(f, chart)


def test_chart_for_hyperplane_invariants():
    chart = chart_for_hyperplane((1, 2, 3, 4), seed=5)
    for j in range(3):
        assert sum(chart.dual_point[i] * chart.parametrization[i][j] for i in range(4)) == 0


def test_projection_lemma_paper_cubic():
    assert projection_lemma_check(PAPER_CUBIC, _pencil_chart(1), samples=10, seed=0)


def test_projection_lemma_quadric():
    f = parse("x0^2 + x1^2 + x2^2 + x3^2")
    chart = chart_for_hyperplane((0, 0, 0, 1))
    assert projection_lemma_check(f, chart, samples=10, seed=1)


def test_projection_lemma_mutation_control():
    assert (
        projection_lemma_check(PAPER_CUBIC, _pencil_chart(1), samples=10, seed=0, corrupt_partial=0)
        is False
    )


def test_psi_identities_survive_coordinate_change():
    # projective equivalence preserves the whole vanishing-Hessian package
    from hesse_lab.psi import build_psi, check_invariance, check_second_derivative_relation, find_polar_relation

    rng = substream(5, "equiv")
    a = random_invertible(5, rng)
    g = apply_linear_change(PAPER_CUBIC, a)
    assert hessian_vanishes(g, mode="symbolic").vanishes
    assert not cone_test(g).is_cone
    rel = find_polar_relation(g, max_degree=4)
    assert rel is not None and rel.degree == 2
    psi = build_psi(g, rel)
    assert check_second_derivative_relation(g, psi)
    res = check_invariance(g, psi, mode="symbolic")
    assert res.derivative_zero and res.invariant


def test_restrict_preserves_degree(seed=43, cases=10):
    rng = random.Random(seed)
    for case in range(cases):
        f = parse("x0^3 + x1^2*x2 + x2^3", nvars=4)
        chart = chart_for_hyperplane([rng.randint(1, 5) for _ in range(4)], seed=case)
        section = restrict(f, chart)
        assert section.degree() == f.degree()


def test_chart_validation_errors():
    from hesse_lab.errors import DomainError as DE

    with pytest.raises(DE):
        HyperplaneChart(
            ambient_vars=3,
            parametrization=((1, 0), (2, 0), (0, 0)),  # rank 1
            dual_point=(0, 0, 1),
        )
    with pytest.raises(DE):
        HyperplaneChart(
            ambient_vars=3,
            parametrization=((1, 0), (0, 1), (0, 0)),
            dual_point=(1, 0, 0),  # does not annihilate column 0
        )


def test_restrict_dimension_mismatch():
    from hesse_lab.errors import DimensionError

    chart = chart_for_hyperplane((0, 0, 1))
    with pytest.raises(DimensionError):
        restrict(PAPER_CUBIC, chart)
