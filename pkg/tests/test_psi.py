"""Polar relation search, ψ_g construction, and the identity battery."""

import pytest

from hesse_lab.errors import DomainError
from hesse_lab.linalg import ScalarMatrix, projectively_equal, rank
from hesse_lab.poly import Polynomial, parse
from hesse_lab.psi import (
    PsiMap,
    build_psi,
    check_fiber_lines,
    check_inclusions,
    check_invariance,
    check_second_derivative_relation,
    find_polar_relation,
    sample_image,
    taylor_membership,
)

PAPER_CUBIC = parse("x0*x3^2 + 2*x1*x3*x4 + x2*x4^2")


@pytest.fixture(scope="module")
def cubic_psi():
    rel = find_polar_relation(PAPER_CUBIC, max_degree=2)
    return build_psi(PAPER_CUBIC, rel)


def test_polar_relation_paper_cubic():
    rel = find_polar_relation(PAPER_CUBIC, max_degree=2)
    assert rel is not None
    assert rel.degree == 2
    # oracle: (2*x3*x4)^2 - 4*(x3^2)*(x4^2) = 0, so g ~ y1^2 - 4*y0*y2
    expected = parse("y1^2 - 4*y0*y2", var_prefix="y", nvars=5)
    assert rel.g == expected or rel.g == -expected or rel.g == expected.scale(-1)
    assert rel.certificate.is_zero()


def test_polar_relation_none_for_fermat():
    assert find_polar_relation(parse("x0^3 + x1^3 + x2^3"), max_degree=3) is None


def test_polar_relation_linear_for_cone():
    f = parse("x0^3 + x1^3", nvars=4)
    rel = find_polar_relation(f, max_degree=1)
    assert rel is not None
    assert rel.is_linear
    # f_2 ≡ 0 and f_3 ≡ 0; lexicographic pick takes y2
    assert rel.g == parse("y2", var_prefix="y", nvars=4)


def test_build_psi_requires_cone_flag():
    f = parse("x0^3 + x1^3", nvars=4)
    rel = find_polar_relation(f, max_degree=1)
    with pytest.raises(DomainError):
        build_psi(f, rel)
    psi = build_psi(f, rel, allow_cone=True)
    assert psi.cone_flagged


def test_psi_components_paper_cubic(cubic_psi):
    # oracle (hand chain rule): g_0 = -4f_2, g_1 = 2f_1, g_2 = -4f_0 up to
    # overall sign; after content removal h ~ (x4^2, -x3*x4, x3^2, 0, 0)
    h = cubic_psi.h
    assert projectively_equal(
        [hi.terms.get((0, 0, 0, 0, 2), 0) for hi in h]
        + [hi.terms.get((0, 0, 0, 1, 1), 0) for hi in h]
        + [hi.terms.get((0, 0, 0, 2, 0), 0) for hi in h],
        [1, 0, 0, 0, 0] + [0, -1, 0, 0, 0] + [0, 0, 1, 0, 0],
    )
    assert h[3].is_zero() and h[4].is_zero()
    # ρ·h_i = g_i exactly
    for gi, hi in zip(cubic_psi.raw, h):
        assert cubic_psi.rho * hi == gi


def test_psi_evaluation_at_basis_point(cubic_psi):
    val = cubic_psi.evaluate((0, 0, 0, 0, 1))
    assert val is not None
    assert projectively_equal(val, (-1, 0, 0, 0, 0))


def test_psi_projective_well_defined(cubic_psi):
    a = cubic_psi.evaluate((1, 2, 3, 4, 5))
    b = cubic_psi.evaluate((3, 6, 9, 12, 15))
    assert projectively_equal(a, b)


def test_second_derivative_relation(cubic_psi):
    assert check_second_derivative_relation(PAPER_CUBIC, cubic_psi) is True


def test_second_derivative_relation_mutated(cubic_psi):
    h = list(cubic_psi.h)
    h[0], h[1] = h[1], h[0]
    mutated = PsiMap(
        relation=cubic_psi.relation,
        raw=cubic_psi.raw,
        rho=cubic_psi.rho,
        h=tuple(h),
    )
    assert check_second_derivative_relation(PAPER_CUBIC, mutated) is False


def test_second_derivative_relation_for_cone_relation():
    f = parse("x0^3 + x1^3", nvars=4)
    psi = build_psi(f, find_polar_relation(f, max_degree=1), allow_cone=True)
    assert check_second_derivative_relation(f, psi) is True


def test_invariance_of_f_both_modes(cubic_psi):
    for mode in ("symbolic", "sampled"):
        res = check_invariance(PAPER_CUBIC, cubic_psi, mode=mode, seed=0)
        assert res.derivative_zero is True
        assert res.invariant is True
        assert res.agree


def test_invariance_of_partials(cubic_psi):
    # f_i(x) = f_i(x + λψ_g(x)) for every i
    for fi in PAPER_CUBIC.gradient():
        res = check_invariance(fi, cubic_psi, mode="symbolic")
        assert res.derivative_zero and res.invariant


def test_invariance_of_psi_components(cubic_psi):
    # Σ ∂h_k/∂x_i · h_i = 0 and ψ_g(p) = ψ_g(p + λψ_g(p))
    for hk in cubic_psi.h:
        if hk.is_zero():
            continue
        res = check_invariance(hk, cubic_psi, mode="symbolic")
        assert res.derivative_zero and res.invariant


def test_invariance_fails_coherently_for_generic_linear(cubic_psi):
    x0 = parse("x0", nvars=5)
    res = check_invariance(x0, cubic_psi, mode="symbolic")
    assert res.derivative_zero is False
    assert res.invariant is False
    assert res.agree  # both sides fail together, as the equivalence demands


def test_taylor_membership(cubic_psi):
    for hk in cubic_psi.h:
        if hk:
            assert taylor_membership(hk, cubic_psi)
    for fi in PAPER_CUBIC.gradient():
        assert taylor_membership(fi, cubic_psi)


def test_sample_image_shape_and_determinism(cubic_psi):
    img = sample_image(cubic_psi, count=12, seed=1)
    assert len(img) == 12
    # all points have the form (-b^2 : ab : -a^2 : 0 : 0)
    for q in img.points:
        assert q[3] == 0 and q[4] == 0
        assert q[1] * q[1] == q[0] * q[2] * 1  # (ab)^2 = b^2·a^2
    again = sample_image(cubic_psi, count=12, seed=1)
    assert img.points == again.points
    assert img.reverify(cubic_psi)


def test_sample_image_count_zero(cubic_psi):
    assert len(sample_image(cubic_psi, count=0, seed=0)) == 0


def test_sample_polar_image_satisfies_relation(cubic_psi):
    # every sampled tangent hyperplane lies on the hypersurface cut by g
    from hesse_lab.psi import sample_polar_image

    polar = sample_polar_image(PAPER_CUBIC, count=12, seed=5)
    assert len(polar) == 12
    g = cubic_psi.relation.g
    for q in polar.points:
        assert g.evaluate(q) == 0


def test_image_span_rank_bound(cubic_psi):
    img = sample_image(cubic_psi, count=12, seed=2)
    m = ScalarMatrix([list(q) for q in img.points])
    assert rank(m) <= 4  # dim S*_Z <= n-2 forces span rank <= n-1


def test_check_inclusions_pass(cubic_psi):
    img = sample_image(cubic_psi, count=10, seed=3)
    report = check_inclusions(PAPER_CUBIC, cubic_psi, img)
    assert report.ok
    assert not report.cone_caveat


def test_check_inclusions_corrupted_point(cubic_psi):
    img = sample_image(cubic_psi, count=5, seed=3)
    corrupted = type(img)(
        label=img.label,
        points=img.points + ((1, 1, 1, 1, 1),),
        preimages=img.preimages + ((1, 1, 1, 1, 1),),
        seed=img.seed,
        requested=img.requested,
    )
    report = check_inclusions(PAPER_CUBIC, cubic_psi, corrupted)
    assert not report.ok
    assert (1, 1, 1, 1, 1) in report.base_locus_violations
    assert (1, 1, 1, 1, 1) in report.singular_violations


def test_fiber_lines_at_known_point(cubic_psi):
    img = sample_image(cubic_psi, count=10, seed=4)
    q = cubic_psi.evaluate((0, 0, 0, 0, 1))
    assert check_fiber_lines(PAPER_CUBIC, cubic_psi, q, samples=3, seed=0, image=img)


def test_fiber_lines_without_gcd_division(cubic_psi):
    # dropping the ρ division only rescales components; the projective
    # fiber-cone property still holds wherever ρ != 0
    undivided = PsiMap(
        relation=cubic_psi.relation,
        raw=cubic_psi.raw,
        rho=Polynomial.constant(5, 1),
        h=cubic_psi.raw,
    )
    q = undivided.evaluate((0, 0, 0, 0, 1))
    assert check_fiber_lines(PAPER_CUBIC, undivided, q, samples=3, seed=0)


def test_fiber_lines_lambda_zero_trivial(cubic_psi):
    q = cubic_psi.evaluate((0, 0, 0, 0, 1))
    p = (0, 0, 0, 0, 1)
    moved = [a + 0 * b for a, b in zip(p, q)]
    assert projectively_equal(cubic_psi.evaluate(moved), q)


def test_fiber_lines_no_preimage_budget(cubic_psi):
    from hesse_lab.errors import SampleBudgetError

    with pytest.raises(SampleBudgetError):
        check_fiber_lines(PAPER_CUBIC, cubic_psi, (1, 1, 1, 1, 1), samples=2, seed=0)


def test_find_polar_relation_preconditions():
    with pytest.raises(DomainError):
        find_polar_relation(PAPER_CUBIC, max_degree=0)
    with pytest.raises(DomainError):
        find_polar_relation(parse("x0 + x1"), max_degree=2)
