"""Report blocks and verification suites behind the command line.

All blocks are plain dicts with deterministic key order; polynomials are
serialized as grammar strings, matrices as row-major arrays of strings, and
rationals as "num/den" strings, so a fixed seed yields byte-identical JSON.
"""

from __future__ import annotations

from fractions import Fraction

from .classify import (
    degenerate_image_guard,
    low_dim_hesse_suite,
    p4_plane_curve_check,
    p4_section_check,
)
from .cones import cone_test
from .fields import DEFAULT_PRIME
from .gn import GNSkeleton, core_multiplicity, random_instance
from .hessian import hessian_vanishes
from .poly import parse
from .psi import (
    PsiMap,
    build_psi,
    check_fiber_lines,
    check_inclusions,
    check_invariance,
    check_second_derivative_relation,
    find_polar_relation,
    sample_image,
    sample_polar_image,
    taylor_membership,
)

SCHEMA = "hesse-lab/1"

PAPER_CUBIC_TEXT = "x0*x3^2 + 2*x1*x3*x4 + x2*x4^2"

GN_SUITE_SKELETONS = (
    GNSkeleton(n=4, t=2, m=1, hdeg=2, psideg=1, d=3),
    GNSkeleton(n=4, t=2, m=1, hdeg=2, psideg=1, d=4),
    GNSkeleton(n=4, t=2, m=1, hdeg=2, psideg=1, d=6),
    GNSkeleton(n=5, t=3, m=1, hdeg=2, psideg=1, d=4),
)


def scalar_str(c):
    return str(c)


def vector_strs(v):
    return [str(c) for c in v]


def matrix_strs(rows):
    return [[str(c) for c in row] for row in rows]


def trials_for_error(degree_bound, target_log2, modulus=DEFAULT_PRIME):
    """Fewest trials with certified error (D/p)^t < 2^-target_log2."""
    if degree_bound == 0:
        return 1
    bound = Fraction(degree_bound, modulus)
    target = Fraction(1, 2 ** target_log2)
    t = 1
    err = bound
    while err >= target:
        t += 1
        err *= bound
    return t


def hessian_block(verdict):
    return {
        "mode": verdict.mode,
        "vanishes": verdict.vanishes,
        "trials": verdict.trials,
        "modulus": verdict.modulus,
        "error_bound": scalar_str(verdict.error_bound),
        "degree_bound": verdict.degree_bound,
    }


def cone_block(vertex):
    return {
        "is_cone": vertex.is_cone,
        "vertex_projective_dim": vertex.projective_dim,
        "vertex_basis": [vector_strs(v) for v in vertex.basis],
    }


def relation_block(rel):
    return {
        "degree": rel.degree,
        "g": rel.g.to_string("y"),
        "certificate_zero": rel.certificate.is_zero(),
        "linear_cone_flag": rel.is_linear,
    }


def psi_block(psi):
    return {
        "rho": psi.rho.to_string("x"),
        "components": [h.to_string("x") for h in psi.h],
        "cone_flagged": psi.cone_flagged,
    }


def invariance_entry(result):
    return {
        "derivative_zero": result.derivative_zero,
        "invariant": result.invariant,
        "agree": result.agree,
        "mode": result.mode,
    }


def image_block(image):
    return {
        "label": image.label,
        "count": len(image),
        "modulus": image.modulus,
        "points": [vector_strs(q) for q in image.points],
        "seed": image.seed,
    }


def curve_block(report):
    return {
        "precondition": report.precondition,
        "span_rank": report.span_rank,
        "span_basis": [vector_strs(b) for b in report.span_basis],
        "curve": report.curve.to_string("z") if report.curve else None,
        "curve_degree": report.curve_degree,
        "irreducibility_unverified": report.irreducibility_unverified,
        "points_used": report.points_used,
        "ok": report.ok,
    }


def sections_block(report):
    return {
        "precondition": report.precondition,
        "sections": [
            {
                "pencil_value": scalar_str(r.pencil_value),
                "hessian_vanishes": r.vanishes,
                "vertex_dim": r.vertex_dim,
                "tangency": r.tangency_status,
                "tangency_point": vector_strs(r.tangency_point) if r.tangency_point else None,
            }
            for r in report.records
        ],
        "violations": list(report.violations),
        "ok": report.ok,
    }


def psi_identity_battery(f, psi, seed=0, sample_count=12, modulus=None, fiber_samples=3):
    """Every identity the relation implies, plus the sampled inclusions."""
    checks = {}
    checks["second_derivative_zero"] = check_second_derivative_relation(f, psi)
    inv_f = check_invariance(f, psi, mode="symbolic")
    checks["invariance_f"] = invariance_entry(inv_f)
    partial_results = [check_invariance(fi, psi, mode="symbolic") for fi in f.gradient()]
    checks["partials_invariant"] = all(
        r.derivative_zero and r.invariant for r in partial_results
    )
    comp_results = [
        check_invariance(hk, psi, mode="symbolic") for hk in psi.h if hk
    ]
    checks["components_invariant"] = all(
        r.derivative_zero and r.invariant for r in comp_results
    )
    checks["equivalence_integrity"] = all(
        r.agree for r in [inv_f, *partial_results, *comp_results]
    )
    checks["image_in_base_locus_symbolic"] = all(
        taylor_membership(hk, psi) for hk in psi.h if hk
    )
    checks["image_in_singular_locus_symbolic"] = all(
        taylor_membership(fi, psi) for fi in f.gradient()
    )
    image = sample_image(psi, sample_count, seed, modulus=modulus)
    inclusions = check_inclusions(f, psi, image)
    checks["sampled_inclusions"] = inclusions.ok
    checks["cone_caveat"] = inclusions.cone_caveat
    if image.modulus is None and len(image):
        checks["fiber_lines"] = check_fiber_lines(
            f, psi, image.points[0], samples=fiber_samples, seed=seed, image=image
        )
    polar_sample = sample_polar_image(f, sample_count, seed)
    checks["relation_vanishes_on_polar_sample"] = all(
        psi.relation.g.evaluate(q) == 0 for q in polar_sample.points
    )
    ok = (
        checks["second_derivative_zero"]
        and checks["invariance_f"]["agree"]
        and inv_f.derivative_zero
        and checks["partials_invariant"]
        and checks["components_invariant"]
        and checks["equivalence_integrity"]
        and checks["image_in_base_locus_symbolic"]
        and checks["image_in_singular_locus_symbolic"]
        and checks["sampled_inclusions"]
        and checks.get("fiber_lines", True)
        and checks["relation_vanishes_on_polar_sample"]
    )
    return checks, image, ok


# ----------------------------------------------------------------------
# verification suites

def run_lowdim_suite(count, seed):
    report = low_dim_hesse_suite(count, seed)
    per_n = {}
    for r in report.records:
        key = f"P{r.n}"
        slot = per_n.setdefault(key, {"cones": 0, "generic": 0, "vanishing": 0})
        slot["cones" if r.kind == "cone" else "generic"] += 1
        if r.vanishes:
            slot["vanishing"] += 1
    return {
        "ok": report.ok,
        "instances": len(report.records),
        "per_space": per_n,
        "violations": list(report.violations),
    }


def run_gn_suite(count, seed):
    entries = []
    violations = []
    for skel in GN_SUITE_SKELETONS:
        non_cones = 0
        for i in range(count):
            inst = random_instance(skel, seed=seed + i)
            if skel.n <= 4:
                verdict = hessian_vanishes(inst.f, mode="symbolic")
            else:
                trials = trials_for_error(
                    (skel.n + 1) * max(skel.d - 2, 0), target_log2=40
                )
                verdict = hessian_vanishes(
                    inst.f, mode="probabilistic", trials=trials, seed=seed + i
                )
            mult = core_multiplicity(inst)
            is_cone = cone_test(inst.f).is_cone
            if not verdict.vanishes:
                violations.append(f"{skel} seed {seed + i}: Hessian does not vanish")
            if mult != skel.d - inst.mu:
                violations.append(
                    f"{skel} seed {seed + i}: core multiplicity {mult} != d-mu"
                )
            if not is_cone:
                non_cones += 1
            entries.append(
                {
                    "type": [skel.n, skel.t, skel.m],
                    "d": skel.d,
                    "s": inst.s,
                    "mu": inst.mu,
                    "seed": seed + i,
                    "vanishes": verdict.vanishes,
                    "hessian_mode": verdict.mode,
                    "error_bound": scalar_str(verdict.error_bound),
                    "core_multiplicity": mult,
                    "is_cone": is_cone,
                }
            )
        if skel.expected_mu > skel.n - skel.t - 2:
            allowed = max(1, count // 10)
            if count - non_cones > allowed:
                violations.append(
                    f"{skel}: {count - non_cones} cone draws exceed the "
                    f"non-general allowance of {allowed}"
                )
    return {"ok": not violations, "entries": entries, "violations": violations}


def _mutated(psi):
    h = list(psi.h)
    h[0], h[1] = h[1], h[0]
    return PsiMap(
        relation=psi.relation, raw=psi.raw, rho=psi.rho, h=tuple(h),
        cone_flagged=psi.cone_flagged,
    )


def run_psi_suite(seed, mutate=False):
    f = parse(PAPER_CUBIC_TEXT)
    rel = find_polar_relation(f, max_degree=4)
    block = {"relation": relation_block(rel)}
    ok = rel is not None and rel.degree == 2
    psi = build_psi(f, rel)
    if mutate:
        psi = _mutated(psi)
    block["psi"] = psi_block(psi)
    checks, image, battery_ok = psi_identity_battery(f, psi, seed=seed)
    block["checks"] = checks
    block["image"] = image_block(image)
    # a generic linear form must fail BOTH sides of the equivalence together
    x0 = parse("x0", nvars=5)
    neg = check_invariance(x0, psi, mode="symbolic")
    block["negative_control"] = invariance_entry(neg)
    ok = ok and battery_ok and neg.agree and not neg.derivative_zero
    block["ok"] = ok
    return block


def run_p4_suite(seed, instances=5, chart_count=5, sample_count=30):
    cases = []
    violations = []
    inputs = [("paper_cubic", parse(PAPER_CUBIC_TEXT))]
    skel = GNSkeleton(n=4, t=2, m=1, hdeg=2, psideg=1, d=3)
    for i in range(instances):
        inputs.append((f"gn_421_3_seed{seed + i}", random_instance(skel, seed=seed + i).f))
    for name, f in inputs:
        rel = find_polar_relation(f, max_degree=4)
        if rel is None:
            violations.append(f"{name}: no polar relation up to degree 4")
            continue
        psi = build_psi(f, rel)
        curve = p4_plane_curve_check(f, psi, sample_count=sample_count, seed=seed)
        sections = p4_section_check(f, psi, curve, chart_count=chart_count, seed=seed)
        image = sample_image(psi, 12, seed)
        guard = degenerate_image_guard(f, image)
        if not curve.ok:
            violations.append(f"{name}: plane-curve stage failed")
        if not sections.ok:
            violations.append(f"{name}: sections stage failed: {sections.violations}")
        if not guard:
            violations.append(f"{name}: degenerate-image guard failed")
        cases.append(
            {
                "input": name,
                "f": f.to_string("x"),
                "plane_curve": curve_block(curve),
                "sections": sections_block(sections),
                "degenerate_image_guard": guard,
            }
        )
    return {"ok": not violations, "cases": cases, "violations": violations}


def run_all_suites(count, seed, mutate=False):
    blocks = {
        "lowdim": run_lowdim_suite(count, seed),
        "gn": run_gn_suite(count, seed),
        "psi": run_psi_suite(seed, mutate=mutate),
        "p4": run_p4_suite(seed, instances=3, chart_count=3),
    }
    blocks["ok"] = all(b["ok"] for b in blocks.values())
    return blocks
