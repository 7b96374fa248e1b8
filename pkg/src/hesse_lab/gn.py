"""The determinant-based construction of vanishing-Hessian forms.

Data of type (n, t, m): forms h_i(y_0..y_m) of one degree, forms
ψ_j(x_{t+1}..x_n) of one degree, and constant rows a^(ℓ).  Each Q_ℓ is the
determinant of the (t+1)×(t+1) matrix stacking (x_0..x_t), the rows
∂h_i/∂y_j evaluated at y = ψ, and the constants; expanding along the first
row gives Q_ℓ = Σ M_{ℓ,i}·x_i with M_{ℓ,i} of degree s-1 in the tail
variables.  The output form is f = Σ_k P_k(Q_1..Q_{t-m}, x_{t+1}..x_n) for
biforms P_k of bidegree (k, d-k·s), and it always has vanishing Hessian.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .cones import cone_test
from .errors import DegenerateDataError, InternalCheckError, RetryBudgetError, ValidationError
from .fields import substream
from .hessian import PolyMatrix, symbolic_determinant
from .poly import Polynomial, monomials_of_degree

RETRY_BUDGET = 8


@dataclass(frozen=True)
class GNSkeleton:
    """Shape of an instance before coefficients are drawn."""

    n: int
    t: int
    m: int
    hdeg: int
    psideg: int
    d: int

    @property
    def expected_s(self):
        return 1 + (self.m + 1) * (self.hdeg - 1) * self.psideg

    @property
    def expected_mu(self):
        return self.d // self.expected_s


@dataclass(frozen=True)
class GNParams:
    """Full construction data; ψ forms live in ambient variables but are
    supported on the tail x_{t+1}..x_n, and P_k forms use variables
    (z_1..z_{t-m}, then the tail) in their own space."""

    n: int
    t: int
    m: int
    d: int
    h_forms: tuple          # t+1 polynomials in m+1 variables
    psi_forms: tuple        # m+1 ambient polynomials on the tail
    a_consts: tuple         # (t-m) × (t-m-1) × (t+1) rationals
    p_forms: tuple          # μ+1 biforms

    def violations(self):
        out = []
        n, t, m, d = self.n, self.t, self.m, self.d
        if t < m + 1:
            out.append(f"t >= m+1 violated (t={t}, m={m})")
        if not 2 <= t:
            out.append(f"2 <= t violated (t={t})")
        if not t <= n - 2:
            out.append(f"t <= n-2 violated (t={t}, n={n})")
        if not 1 <= m:
            out.append(f"1 <= m violated (m={m})")
        if not m <= n - t - 1:
            out.append(f"m <= n-t-1 violated (m={m}, n={n}, t={t})")
        if out:
            return out

        if len(self.h_forms) != t + 1 or not all(self.h_forms):
            out.append(f"need t+1 = {t + 1} nonzero h-forms")
        else:
            if len({h.degree() for h in self.h_forms}) != 1:
                out.append("h-forms must share one common degree")
            for h in self.h_forms:
                if h.nvars != m + 1 or not h.is_homogeneous():
                    out.append("h-forms must be homogeneous in y_0..y_m")
                    break

        if len(self.psi_forms) != m + 1 or not all(self.psi_forms):
            out.append(f"need m+1 = {m + 1} nonzero psi-forms")
        else:
            if len({p.degree() for p in self.psi_forms}) != 1:
                out.append("psi-forms must share one common degree")
            tail = set(range(t + 1, n + 1))
            for p in self.psi_forms:
                if p.nvars != n + 1 or not p.is_homogeneous():
                    out.append("psi-forms must be homogeneous in the ambient variables")
                    break
                if not p.variables_used() <= tail:
                    out.append("psi-forms must be supported on x_{t+1}..x_n")
                    break

        if len(self.a_consts) != t - m:
            out.append(f"need t-m = {t - m} constant blocks, got {len(self.a_consts)}")
        else:
            for block in self.a_consts:
                if len(block) != t - m - 1 or any(len(row) != t + 1 for row in block):
                    out.append("each constant block must be (t-m-1) x (t+1)")
                    break
        if out:
            return out

        # the worked low-degree instances have d = s, so only d < s
        # (no Q_l enters any biform) is rejected
        s = self.skeleton().expected_s
        if not d >= s:
            out.append(f"d >= s violated (d={d}, s={s})")
            return out
        mu = d // s
        if len(self.p_forms) != mu + 1:
            out.append(f"need mu+1 = {mu + 1} biforms P_k, got {len(self.p_forms)}")
            return out
        zc = t - m
        tailc = n - t
        for k, pk in enumerate(self.p_forms):
            if pk.nvars != zc + tailc:
                out.append(f"P_{k} must use {zc + tailc} variables (z block then tail)")
                continue
            for e in pk.terms:
                if sum(e[:zc]) != k or sum(e[zc:]) != d - k * s:
                    out.append(f"P_{k} is not bihomogeneous of bidegree ({k}, {d - k * s})")
                    break
        return out

    def skeleton(self):
        return GNSkeleton(
            n=self.n,
            t=self.t,
            m=self.m,
            hdeg=self.h_forms[0].degree() if self.h_forms else 0,
            psideg=self.psi_forms[0].degree() if self.psi_forms else 0,
            d=self.d,
        )


def validate(params):
    """Checked params, or a ValidationError naming every broken constraint."""
    violations = params.violations()
    if violations:
        raise ValidationError(violations)
    return params


@dataclass(frozen=True)
class GNInstance:
    params: GNParams
    q_polys: tuple          # Q_1..Q_{t-m}, ambient
    m_coeffs: tuple         # (t-m) × (t+1) cofactor polynomials, ambient
    f: Polynomial
    s: int
    mu: int

    @property
    def core_indices(self):
        """Variables cut out to zero on the core subspace Π."""
        return tuple(range(self.params.t + 1, self.params.n + 1))


def _construction_rows(params):
    """Rows shared by every Q_ℓ: (x_0..x_t), then ∂h_i/∂y_j at y = ψ."""
    n1 = params.n + 1
    t = params.t
    rows = [[Polynomial.variable(n1, i) for i in range(t + 1)]]
    psi_args = list(params.psi_forms)
    for j in range(params.m + 1):
        rows.append([h.partial(j).compose(psi_args) for h in params.h_forms])
    return rows


def build_Q(params):
    """All Q_ℓ with their first-row cofactors M_{ℓ,i}; rejects degenerate data."""
    validate(params)
    n1 = params.n + 1
    t, m = params.t, params.m
    shared = _construction_rows(params)
    qs = []
    cofactors = []
    for block in params.a_consts:
        rows = [list(r) for r in shared]
        for const_row in block:
            rows.append([Polynomial.constant(n1, Fraction(c)) for c in const_row])
        matrix = PolyMatrix(rows)
        ms = []
        for i in range(t + 1):
            sub = [
                [rows[r][c] for c in range(t + 1) if c != i]
                for r in range(1, t + 1)
            ]
            minor = symbolic_determinant(PolyMatrix(sub))
            ms.append(minor if i % 2 == 0 else -minor)
        q = Polynomial.zero(n1)
        for i, mi in enumerate(ms):
            q = q + mi * Polynomial.variable(n1, i)
        if q != symbolic_determinant(matrix):
            raise InternalCheckError("Laplace expansion disagrees with the determinant")
        if not q:
            raise DegenerateDataError("construction determinant vanishes identically")
        qs.append(q)
        cofactors.append(tuple(ms))
    degrees = {q.degree() for q in qs}
    if len(degrees) != 1:
        raise DegenerateDataError("the Q_l do not share one degree")
    s = degrees.pop()
    tail = set(range(t + 1, params.n + 1))
    for ms in cofactors:
        for mi in ms:
            if mi and (mi.degree() != s - 1 or not mi.variables_used() <= tail):
                raise InternalCheckError("cofactor fails the degree-(s-1) tail-support check")
    if not params.d >= s:
        raise ValidationError([f"d >= s violated (d={params.d}, s={s})"])
    return qs, cofactors, s


def build_f(params):
    """Assemble the full instance; f must come out homogeneous of degree d."""
    qs, cofactors, s = build_Q(params)
    n1 = params.n + 1
    mu = params.d // s
    args = list(qs) + [Polynomial.variable(n1, i) for i in range(params.t + 1, params.n + 1)]
    f = Polynomial.zero(n1)
    for pk in params.p_forms:
        if pk:
            f = f + pk.compose(args)
    if not f:
        raise DegenerateDataError("built form is identically zero")
    if not f.is_homogeneous() or f.degree() != params.d:
        raise InternalCheckError("built form is not homogeneous of degree d")
    return GNInstance(
        params=params,
        q_polys=tuple(qs),
        m_coeffs=tuple(cofactors),
        f=f,
        s=s,
        mu=mu,
    )


def _dense_random(nvars, degree, rng):
    return Polynomial(
        nvars, {e: _nonzero(rng) for e in monomials_of_degree(nvars, degree)}
    )


def _nonzero(rng):
    v = 0
    while v == 0:
        v = rng.randint(-9, 9)
    return v


def _random_params(skel, rng):
    n, t, m = skel.n, skel.t, skel.m
    n1 = n + 1
    h_forms = tuple(_dense_random(m + 1, skel.hdeg, rng) for _ in range(t + 1))
    psi_forms = []
    for _ in range(m + 1):
        tail_poly = _dense_random(n - t, skel.psideg, rng)
        shifted = {
            (0,) * (t + 1) + e: c for e, c in tail_poly.terms.items()
        }
        psi_forms.append(Polynomial(n1, shifted))
    a_consts = tuple(
        tuple(tuple(_nonzero(rng) for _ in range(t + 1)) for _ in range(t - m - 1))
        for _ in range(t - m)
    )
    s = skel.expected_s
    mu = skel.d // s
    zc, tailc = t - m, n - t
    p_forms = []
    for k in range(mu + 1):
        terms = {}
        for ez in monomials_of_degree(zc, k):
            for et in monomials_of_degree(tailc, skel.d - k * s):
                terms[ez + et] = _nonzero(rng)
        p_forms.append(Polynomial(zc + tailc, terms))
    return GNParams(
        n=n,
        t=t,
        m=m,
        d=skel.d,
        h_forms=h_forms,
        psi_forms=tuple(psi_forms),
        a_consts=a_consts,
        p_forms=tuple(p_forms),
    )


def random_instance(skel, seed, retries=RETRY_BUDGET):
    """Seeded instance with small nonzero integer coefficients.

    Degenerate draws (zero Q, zero f, or a cone when μ > n-t-2 promises
    non-cones for general data) are retried; exhaustion raises.
    """
    validate(_skeleton_probe(skel))
    cone_draws = 0
    for attempt in range(retries):
        rng = substream(seed, "gn", skel.n, skel.t, skel.m, skel.d, attempt)
        params = _random_params(skel, rng)
        try:
            instance = build_f(params)
        except DegenerateDataError:
            continue
        if skel.expected_mu > skel.n - skel.t - 2 and cone_test(instance.f).is_cone:
            cone_draws += 1  # non-general draw
            continue
        return instance
    raise RetryBudgetError(
        f"no usable draw in {retries} attempts ({cone_draws} cone draws)"
    )


def _skeleton_probe(skel):
    """Minimal params carrying only the shape, for early validation."""
    n1 = skel.n + 1
    m1 = skel.m + 1
    h = tuple(
        Polynomial(m1, {e: 1 for e in monomials_of_degree(m1, skel.hdeg)})
        for _ in range(skel.t + 1)
    )
    psi = []
    for _ in range(m1):
        tail_poly = Polynomial(
            skel.n - skel.t, {e: 1 for e in monomials_of_degree(skel.n - skel.t, skel.psideg)}
        )
        psi.append(
            Polynomial(n1, {(0,) * (skel.t + 1) + e: c for e, c in tail_poly.terms.items()})
        )
    a = tuple(
        tuple(tuple(1 for _ in range(skel.t + 1)) for _ in range(skel.t - skel.m - 1))
        for _ in range(skel.t - skel.m)
    )
    s = skel.expected_s
    if skel.d < s:
        raise ValidationError([f"d >= s violated (d={skel.d}, s={s})"])
    mu = skel.d // s
    zc, tailc = skel.t - skel.m, skel.n - skel.t
    # probe biforms are all-ones placeholders; only counts and bidegrees matter
    p = []
    for k in range(mu + 1):
        terms = {}
        for ez in monomials_of_degree(zc, k):
            for et in monomials_of_degree(tailc, skel.d - k * s):
                terms[ez + et] = 1
        p.append(Polynomial(zc + tailc, terms))
    return GNParams(
        n=skel.n, t=skel.t, m=skel.m, d=skel.d,
        h_forms=h, psi_forms=tuple(psi), a_consts=a, p_forms=tuple(p),
    )


def core_multiplicity(instance):
    """Least total degree of f in the tail variables over all monomials;
    equals d - μ on non-degenerate instances."""
    t = instance.params.t
    return min(sum(e[t + 1:]) for e in instance.f.terms)


# ----------------------------------------------------------------------
# serialization (JSON-friendly dicts; polynomials as grammar strings)

def params_to_dict(params):
    skel = params.skeleton()
    return {
        "n": params.n,
        "t": params.t,
        "m": params.m,
        "d": params.d,
        "hdeg": skel.hdeg,
        "psideg": skel.psideg,
        "h_forms": [h.to_string("y") for h in params.h_forms],
        "psi_forms": [p.to_string("x") for p in params.psi_forms],
        "a_consts": [
            [[str(c) for c in row] for row in block] for block in params.a_consts
        ],
        "p_forms": [p.to_string("z") for p in params.p_forms],
    }


def params_from_dict(data):
    from .poly import parse

    n, t, m = data["n"], data["t"], data["m"]
    zc, tailc = t - m, n - t
    params = GNParams(
        n=n,
        t=t,
        m=m,
        d=data["d"],
        h_forms=tuple(parse(s, "y", nvars=m + 1) for s in data["h_forms"]),
        psi_forms=tuple(parse(s, "x", nvars=n + 1) for s in data["psi_forms"]),
        a_consts=tuple(
            tuple(tuple(Fraction(c) for c in row) for row in block)
            for block in data["a_consts"]
        ),
        p_forms=tuple(parse(s, "z", nvars=zc + tailc) for s in data["p_forms"]),
    )
    return validate(params)


def instance_to_dict(instance):
    return {
        "params": params_to_dict(instance.params),
        "q_polys": [q.to_string("x") for q in instance.q_polys],
        "m_coeffs": [[mi.to_string("x") for mi in row] for row in instance.m_coeffs],
        "f": instance.f.to_string("x"),
        "s": instance.s,
        "mu": instance.mu,
    }


def instance_from_dict(data):
    """Rebuild from params and verify the stored f matches the reconstruction."""
    from .poly import parse

    params = params_from_dict(data["params"])
    instance = build_f(params)
    stored = parse(data["f"], "x", nvars=params.n + 1)
    if stored != instance.f:
        raise InternalCheckError("stored form disagrees with its construction data")
    return instance
