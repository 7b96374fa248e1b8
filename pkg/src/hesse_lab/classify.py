"""Desk-scale verification of the classification statements.

Covers the low-dimension equivalence (vanishing Hessian ⇔ cone for at most
three projective dimensions), the small-polar-image corollary, and the
structure of vanishing-Hessian non-cones in P^4: the sampled ψ_g image spans
a plane, interpolates to a plane curve, and hyperplane sections through that
plane are cones whose vertex line is tangent to the curve.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .cones import chart_for_hyperplane, cone_test, restrict
from .errors import DomainError, RestrictionZeroError
from .fields import substream
from .hessian import hessian_vanishes, polar_image_dim
from .linalg import (
    ScalarMatrix,
    _echelon_rational,
    kernel,
    primitive_vector,
    projectively_equal,
    random_invertible,
    rank,
    solve,
)
from .poly import Polynomial, gcd, is_reduced, monomials_of_degree
from .psi import sample_image

MAX_CURVE_DEGREE = 6


# ----------------------------------------------------------------------
# low-dimension equivalence suite

@dataclass(frozen=True)
class LowDimRecord:
    n: int
    kind: str                 # "cone" | "generic"
    degree: int
    vanishes: bool
    cone_dim: int
    polar_dim: Optional[int]


@dataclass(frozen=True)
class LowDimReport:
    records: tuple
    violations: tuple

    @property
    def ok(self):
        return not self.violations


def _random_form(nvars, degree, rng, want_reduced=False):
    for _ in range(32):
        f = Polynomial(
            nvars,
            {e: rng.randint(-9, 9) for e in monomials_of_degree(nvars, degree)},
        )
        if not f:
            continue
        if want_reduced and not is_reduced(f, seed=rng.randint(0, 10 ** 6)):
            continue
        return f
    raise DomainError("could not draw a usable random form")


def _random_cone(nvars, degree, rng):
    """A form in fewer variables pushed through a random invertible change."""
    if nvars == 2:
        a, b = rng.randint(-9, 9), rng.randint(-9, 9)
        if a == 0 and b == 0:
            a = 1
        return Polynomial.linear_form([a, b]) ** degree
    base_vars = rng.choice(range(2, nvars))
    base = _random_form(base_vars, degree, rng, want_reduced=True)
    change = random_invertible(nvars, rng)
    embedded = base.compose(
        [Polynomial.linear_form(list(change.entries[i])) for i in range(base_vars)]
    )
    return embedded


def low_dim_hesse_suite(count, seed):
    """Seeded cones and generic forms in P^1..P^3: the equivalence
    'vanishing Hessian ⇔ cone' must hold with zero exceptions, and the
    P^3 cones must have polar image of dimension 1 or 2."""
    if count < 1:
        raise DomainError("count must be >= 1")
    records = []
    violations = []
    for n in (1, 2, 3):
        nvars = n + 1
        for kind in ("cone", "generic"):
            for i in range(count):
                rng = substream(seed, "lowdim", n, kind, i)
                degree = rng.choice((2, 3, 4))
                if kind == "cone":
                    f = _random_cone(nvars, degree, rng)
                else:
                    f = _random_form(nvars, degree, rng)
                vanishes = hessian_vanishes(f, mode="symbolic").vanishes
                cone_dim = cone_test(f).projective_dim
                polar_dim = None
                if n == 3 and kind == "cone":
                    polar_dim = polar_image_dim(f, seed=seed)
                    if polar_dim not in (1, 2):
                        violations.append(
                            f"P3 cone (seed {seed}, case {i}) has dim Z = {polar_dim}"
                        )
                if vanishes != (cone_dim >= 0):
                    violations.append(
                        f"biconditional fails in P{n} for {kind} case {i}: "
                        f"vanishes={vanishes}, cone_dim={cone_dim}"
                    )
                if kind == "cone" and cone_dim < 0:
                    violations.append(f"constructed cone not detected (P{n}, case {i})")
                records.append(
                    LowDimRecord(
                        n=n,
                        kind=kind,
                        degree=degree,
                        vanishes=vanishes,
                        cone_dim=cone_dim,
                        polar_dim=polar_dim,
                    )
                )
    return LowDimReport(records=tuple(records), violations=tuple(violations))


def low_polar_dim_check(f, seed=0):
    """For at least five variables with vanishing Hessian: a polar image of
    dimension at most two forces a cone.  True when verified or vacuous."""
    if f.nvars < 5:
        raise DomainError("needs an ambient space of at least five variables")
    if not hessian_vanishes(f, mode="symbolic" if f.nvars <= 6 else "probabilistic",
                            seed=seed).vanishes:
        raise DomainError("precondition: vanishing Hessian")
    if polar_image_dim(f, seed=seed) <= 2:
        return cone_test(f).is_cone
    return True


# ----------------------------------------------------------------------
# P^4 structure: plane span, curve interpolation, hyperplane sections

@dataclass(frozen=True)
class PlaneCurveReport:
    precondition: Optional[str]
    span_rank: Optional[int]
    span_basis: tuple
    curve: Optional[Polynomial]       # in 3 span coordinates
    curve_degree: Optional[int]
    irreducibility_unverified: bool
    points_used: int

    @property
    def ok(self):
        return self.precondition is None and self.span_rank == 3 and self.curve is not None


def _span_coordinates(basis, point):
    """Coordinates of an ambient point in the span basis, primitive, or None."""
    a = ScalarMatrix([[basis[k][i] for k in range(len(basis))] for i in range(len(point))])
    z = solve(a, list(point))
    if z is None:
        return None
    return primitive_vector(z)


def p4_plane_curve_check(f, psi, sample_count=30, seed=0):
    """Sampled ψ_g image must span exactly a plane; interpolate the least-degree
    curve through it in span coordinates.  Rationality and irreducibility are
    not certified, only recorded as unverified."""
    if f.nvars != 5:
        return _curve_precondition_failed("ambient space is not P^4")
    if not hessian_vanishes(f, mode="symbolic").vanishes:
        return _curve_precondition_failed("Hessian does not vanish")
    if cone_test(f).is_cone:
        return _curve_precondition_failed("input is a cone")
    points = sample_image(psi, max(sample_count, 12), seed).points
    matrix = ScalarMatrix([list(q) for q in points])
    span_rank = rank(matrix)
    if span_rank != 3:
        return PlaneCurveReport(
            precondition=None,
            span_rank=span_rank,
            span_basis=(),
            curve=None,
            curve_degree=None,
            irreducibility_unverified=True,
            points_used=len(points),
        )
    rows, _ = _echelon_rational(matrix.entries)
    basis = tuple(primitive_vector(r) for r in rows)
    zs = []
    for q in points:
        z = _span_coordinates(basis, q)
        if z is None:
            return _curve_precondition_failed("sampled point escapes its own span")
        zs.append(z)
    for e in range(2, MAX_CURVE_DEGREE + 1):
        monos = monomials_of_degree(3, e)
        needed = len(monos)
        while len(zs) < needed:
            extra = sample_image(psi, len(zs) + needed, seed).points
            if len(extra) <= len(points):
                break  # the image itself has too few distinct points
            points = extra
            zs = []
            for q in points:
                z = _span_coordinates(basis, q)
                if z is None:
                    return _curve_precondition_failed("sampled point escapes its own span")
                zs.append(z)
        if len(zs) < needed:
            continue
        rows = [[_eval_monomial(z, mono) for mono in monos] for z in zs]
        kern = kernel(ScalarMatrix(rows))
        if len(kern):
            vec = sorted((primitive_vector(v) for v in kern), reverse=True)[0]
            curve = Polynomial(3, {m: c for m, c in zip(monos, vec) if c})
            return PlaneCurveReport(
                precondition=None,
                span_rank=3,
                span_basis=basis,
                curve=curve,
                curve_degree=e,
                irreducibility_unverified=True,
                points_used=len(zs),
            )
    return PlaneCurveReport(
        precondition=None,
        span_rank=3,
        span_basis=basis,
        curve=None,
        curve_degree=None,
        irreducibility_unverified=True,
        points_used=len(zs),
    )


def _curve_precondition_failed(reason):
    return PlaneCurveReport(
        precondition=reason,
        span_rank=None,
        span_basis=(),
        curve=None,
        curve_degree=None,
        irreducibility_unverified=True,
        points_used=0,
    )


def _eval_monomial(point, mono):
    acc = 1
    for v, e in zip(point, mono):
        if e:
            acc *= v ** e
    return acc


def degenerate_image_guard(f, image):
    """A one-point ψ_g image means every polar tangent hyperplane is fixed,
    which forces a cone; returns True when the guard is satisfied."""
    distinct = []
    for q in image.points:
        if not any(projectively_equal(q, p) for p in distinct):
            distinct.append(q)
    if len(distinct) == 1:
        return cone_test(f).is_cone
    return True


@dataclass(frozen=True)
class SectionRecord:
    pencil_value: Fraction
    vanishes: bool
    vertex_dim: int
    tangency_status: str          # tangent | line_in_curve | inconclusive | failed | no_line
    tangency_point: Optional[tuple]


@dataclass(frozen=True)
class SectionReport:
    precondition: Optional[str]
    records: tuple
    violations: tuple

    @property
    def ok(self):
        return self.precondition is None and not self.violations


def _intersect_spans(vectors_a, vectors_b):
    """Basis of span(vectors_a) ∩ span(vectors_b), primitive rows."""
    width = len(vectors_a[0])
    cols = [list(v) for v in vectors_a] + [[-x for x in v] for v in vectors_b]
    a = ScalarMatrix([[cols[j][i] for j in range(len(cols))] for i in range(width)])
    out = []
    for kv in kernel(a):
        alpha = kv[: len(vectors_a)]
        x = [
            sum(alpha[j] * vectors_a[j][i] for j in range(len(vectors_a)))
            for i in range(width)
        ]
        if any(x):
            out.append(x)
    if not out:
        return ()
    rows, _ = _echelon_rational(out)
    return tuple(primitive_vector(r) for r in rows)


def _repeated_root_data(binary_form):
    """(has_repeated_root, witness_point_or_None) for a binary form in (u, v).

    Dehomogenizes at v = 1; a degree drop of two or more is a repeated root
    at infinity, otherwise the gcd with the derivative must be non-constant.
    """
    total = binary_form.degree()
    affine = Polynomial(
        1, {(e[0],): c for e, c in binary_form.terms.items()}
    )
    drop = total - (affine.degree() if affine else 0)
    if not affine:
        return True, None  # identically zero: the line lies in the curve
    if drop >= 2:
        return True, (1, 0)
    deriv = affine.partial(0)
    if not deriv:
        return (affine.degree() == 0 and drop >= 2), None
    g = gcd(affine, deriv)
    if g.degree() == 0:
        return False, None
    if g.degree() == 1:
        # g = u + c  →  root u = -c, v = 1
        c1 = g.terms.get((1,), 0)
        c0 = g.terms.get((0,), 0)
        return True, primitive_vector((Fraction(-c0, c1), 1))
    return True, None


def p4_section_check(f, psi, curve_report, chart_count=5, seed=0):
    """Hyperplane sections through the core plane Π must be vanishing-Hessian
    cones with a vertex line, and that line (inside Π) must meet the
    interpolated curve in a repeated root: the tangency of the theorem."""
    if not curve_report.ok:
        return SectionReport(
            precondition="plane-curve stage did not complete", records=(), violations=()
        )
    basis = curve_report.span_basis
    pencil = [list(v) for v in kernel(ScalarMatrix([list(b) for b in basis]))]
    if len(pencil) != 2:
        return SectionReport(
            precondition="core plane does not come from a rank-3 span", records=(), violations=()
        )
    a1, a2 = (primitive_vector(v) for v in pencil)
    records = []
    violations = []
    used = set()
    attempts = 0
    while len(records) < chart_count and attempts < chart_count * 8:
        rng = substream(seed, "pencil", attempts)
        attempts += 1
        c = Fraction(rng.randint(1, 40), rng.randint(1, 4))
        if c in used:
            continue
        dual = tuple(x + c * y for x, y in zip(a1, a2))
        if not any(dual):
            continue
        chart = chart_for_hyperplane(dual)
        try:
            section = restrict(f, chart)
        except RestrictionZeroError:
            continue
        used.add(c)
        vanishes = hessian_vanishes(section, mode="symbolic").vanishes
        vertex = cone_test(section)
        if not vanishes:
            violations.append(f"section at c={c} has nonvanishing Hessian")
        if vertex.projective_dim < 1:
            violations.append(f"section at c={c} has vertex dimension {vertex.projective_dim}")
            records.append(
                SectionRecord(
                    pencil_value=c,
                    vanishes=vanishes,
                    vertex_dim=vertex.projective_dim,
                    tangency_status="no_line",
                    tangency_point=None,
                )
            )
            continue
        ambient_vertex = [
            [
                sum(chart.parametrization[i][j] * v[j] for j in range(4))
                for i in range(5)
            ]
            for v in vertex.basis
        ]
        line = _intersect_spans(ambient_vertex, [list(b) for b in basis])
        status = "tangent"
        point = None
        if len(line) < 2:
            status = "no_line"
            violations.append(f"section at c={c}: vertex does not meet Π in a line")
        elif curve_report.curve_degree < 2:
            status = "inconclusive"  # a degree-1 curve has no double-root test
        else:
            zeta = [_span_coordinates(basis, w) for w in line[:2]]
            if None in zeta:
                status = "no_line"
                violations.append(f"section at c={c}: vertex line escapes Π")
            else:
                restricted = curve_report.curve.compose(
                    [Polynomial.linear_form([z1, z2]) for z1, z2 in zip(*zeta)]
                )
                if restricted.is_zero():
                    status = "line_in_curve"
                else:
                    repeated, root = _repeated_root_data(restricted)
                    if not repeated:
                        status = "failed"
                        violations.append(f"section at c={c}: tangency double root missing")
                    elif root is not None:
                        u, v = root
                        point = primitive_vector(
                            [u * z1 + v * z2 for z1, z2 in zip(*zeta)]
                        )
        records.append(
            SectionRecord(
                pencil_value=c,
                vanishes=vanishes,
                vertex_dim=vertex.projective_dim,
                tangency_status=status,
                tangency_point=point,
            )
        )
    return SectionReport(precondition=None, records=tuple(records), violations=tuple(violations))
