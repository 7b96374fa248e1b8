"""Construction of vanishing-Hessian forms from determinant data."""

import pytest

from hesse_lab.cones import cone_test
from hesse_lab.errors import DegenerateDataError, RetryBudgetError, ValidationError
from hesse_lab.gn import (
    GNParams,
    GNSkeleton,
    build_Q,
    build_f,
    core_multiplicity,
    instance_from_dict,
    instance_to_dict,
    params_from_dict,
    params_to_dict,
    random_instance,
    validate,
)
from hesse_lab.hessian import hessian_vanishes
from hesse_lab.poly import Polynomial, parse


def spec_params_421(d=3, p1=None, p0=None):
    """The worked (4,2,1) data: h = (y0^2, y0*y1, y1^2), psi = (x4, x3)."""
    h = tuple(parse(s, "y", nvars=2) for s in ("y0^2", "y0*y1", "y1^2"))
    psi = (parse("x4", nvars=5), parse("x3", nvars=5))
    if p1 is None:
        p1 = parse("z0", "z", nvars=3)  # P_1 = z_1
    if p0 is None:
        p0 = Polynomial.zero(3)
    return GNParams(
        n=4, t=2, m=1, d=d,
        h_forms=h, psi_forms=psi, a_consts=((),), p_forms=(p0, p1),
    )


def test_validate_smallest_case():
    validate(spec_params_421())


def test_validate_t_range():
    params = GNParams(
        n=4, t=3, m=1, d=3,
        h_forms=(), psi_forms=(), a_consts=(), p_forms=(),
    )
    with pytest.raises(ValidationError, match="t <= n-2"):
        validate(params)


def test_validate_531_shape_ok():
    skel = GNSkeleton(n=5, t=3, m=1, hdeg=2, psideg=1, d=4)
    inst = random_instance(skel, seed=0)
    assert inst.f.nvars == 6


def test_build_Q_spec_oracle():
    # oracle: expand [[x0,x1,x2],[2*x4,x3,0],[0,x4,2*x3]] by hand:
    # Q1 = 2*(x0*x3^2 - 2*x1*x3*x4 + x2*x4^2), s = 3
    qs, ms, s = build_Q(spec_params_421())
    assert s == 3
    assert qs[0] == parse("2*x0*x3^2 - 4*x1*x3*x4 + 2*x2*x4^2")
    # Laplace data: Q = Σ M_i·x_i with deg(M_i) = 2 in the tail
    for i, mi in enumerate(ms[0]):
        assert mi.degree() == 2
        assert mi.variables_used() <= {3, 4}
    q_rebuilt = sum(
        (mi * Polynomial.variable(5, i) for i, mi in enumerate(ms[0])),
        Polynomial.zero(5),
    )
    assert q_rebuilt == qs[0]


def test_build_Q_rejects_repeated_h():
    h = tuple(parse("y0^2", "y", nvars=2) for _ in range(3))
    params = GNParams(
        n=4, t=2, m=1, d=3,
        h_forms=h,
        psi_forms=(parse("x4", nvars=5), parse("x3", nvars=5)),
        a_consts=((),),
        p_forms=(Polynomial.zero(3), parse("z0", "z", nvars=3)),
    )
    with pytest.raises(DegenerateDataError):
        build_Q(params)


def test_build_Q_linear_h_gives_s_1():
    h = tuple(parse(s, "y", nvars=2) for s in ("y0", "y1", "y0 - y1"))
    params = GNParams(
        n=4, t=2, m=1, d=2,
        h_forms=h,
        psi_forms=(parse("x4", nvars=5), parse("x3", nvars=5)),
        a_consts=((),),
        # d=2, s=1, mu=2: P_0 bidegree (0,2), P_1 bidegree (1,1), P_2 bidegree (2,0)
        p_forms=(
            Polynomial.zero(3),
            parse("z0*z1 + z0*z2", "z", nvars=3),
            parse("z0^2", "z", nvars=3),
        ),
    )
    qs, ms, s = build_Q(params)
    assert s == 1
    for mi in ms[0]:
        assert mi.degree() == 0 or mi.is_zero()


def test_build_f_reproduces_paper_cubic_shape():
    inst = build_f(spec_params_421())
    # projectively equivalent to the worked cubic: x1 -> -x1/2 scaling aside
    assert inst.f == parse("2*x0*x3^2 - 4*x1*x3*x4 + 2*x2*x4^2")
    assert inst.s == 3 and inst.mu == 1
    assert hessian_vanishes(inst.f, mode="symbolic").vanishes
    assert not cone_test(inst.f).is_cone
    assert core_multiplicity(inst) == 2  # d - mu = 3 - 1


def test_build_f_p0_only_is_a_cone():
    p0 = parse("z1^3 + z2^3", "z", nvars=3)  # pure tail form, misses x0..x2
    params = spec_params_421(p1=Polynomial.zero(3), p0=p0)
    inst = build_f(params)
    assert core_multiplicity(inst) == 3  # degenerate: multiplicity d, not d - mu
    assert cone_test(inst.f).is_cone


def test_random_instance_properties():
    skel = GNSkeleton(n=4, t=2, m=1, hdeg=2, psideg=1, d=3)
    inst = random_instance(skel, seed=0)
    assert inst.f.is_homogeneous() and inst.f.degree() == 3
    assert hessian_vanishes(inst.f, mode="symbolic").vanishes
    assert core_multiplicity(inst) == 3 - inst.mu


def test_random_instance_seed_determinism_and_variation():
    skel = GNSkeleton(n=4, t=2, m=1, hdeg=2, psideg=1, d=3)
    a = random_instance(skel, seed=0)
    b = random_instance(skel, seed=0)
    c = random_instance(skel, seed=1)
    assert a.f == b.f
    assert a.f != c.f


def test_skeleton_d_below_s_rejected():
    skel = GNSkeleton(n=4, t=2, m=1, hdeg=2, psideg=1, d=2)  # s = 3
    with pytest.raises(ValidationError, match="d >= s"):
        random_instance(skel, seed=0)


def test_laplace_consistency_random(seed=0):
    skel = GNSkeleton(n=4, t=2, m=1, hdeg=2, psideg=1, d=4)
    inst = random_instance(skel, seed=seed)
    for q, ms in zip(inst.q_polys, inst.m_coeffs):
        rebuilt = Polynomial.zero(5)
        for i, mi in enumerate(ms):
            rebuilt = rebuilt + mi * Polynomial.variable(5, i)
        assert rebuilt == q
        for mi in ms:
            if mi:
                assert mi.degree() == inst.s - 1


def test_core_multiplicity_d6():
    skel = GNSkeleton(n=4, t=2, m=1, hdeg=2, psideg=1, d=6)
    inst = random_instance(skel, seed=0)
    assert inst.mu == 2
    assert core_multiplicity(inst) == 4  # d - mu = 6 - 2


def test_genericity_non_cone_rate():
    # for mu > n-t-2 the construction promises non-cones generically;
    # the generator retries cone draws, so delivered instances are non-cones
    skel = GNSkeleton(n=4, t=2, m=1, hdeg=2, psideg=1, d=3)
    assert skel.expected_mu > skel.n - skel.t - 2
    cones = sum(
        1 for seed in range(10) if cone_test(random_instance(skel, seed).f).is_cone
    )
    assert cones <= 1


def test_vanishing_hessian_symbolic_up_to_n5():
    inst = random_instance(GNSkeleton(n=5, t=3, m=1, hdeg=2, psideg=1, d=4), seed=2)
    assert hessian_vanishes(inst.f, mode="symbolic").vanishes


def test_vanishing_hessian_probabilistic_up_to_n7():
    inst = random_instance(GNSkeleton(n=7, t=3, m=1, hdeg=2, psideg=1, d=4), seed=0)
    v = hessian_vanishes(inst.f, mode="probabilistic", trials=3, seed=0)
    assert v.vanishes
    assert v.error_bound * 2 ** 40 < 1


def test_forced_degenerate_types_are_surfaced():
    # with d = s and two or more Q determinants, the combined constant row is
    # always a vertex direction; the generator must surface the exhaustion
    with pytest.raises(RetryBudgetError):
        random_instance(GNSkeleton(n=5, t=3, m=1, hdeg=2, psideg=1, d=3), seed=0)


def test_serialization_roundtrip():
    inst = build_f(spec_params_421())
    data = instance_to_dict(inst)
    back = instance_from_dict(data)
    assert back.f == inst.f
    params2 = params_from_dict(params_to_dict(inst.params))
    assert params2.h_forms == inst.params.h_forms
    assert params2.psi_forms == inst.params.psi_forms
