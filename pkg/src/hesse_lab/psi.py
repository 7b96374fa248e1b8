"""Polar relations, the composed map ψ_g, and the identity battery.

Given f with vanishing Hessian, the partials satisfy a polynomial relation
g(f_0,…,f_n) = 0.  The map ψ_g has components h_i = (∂g/∂y_i ∘ ∇f)/ρ with the
common factor ρ divided out; everything the relation implies (translation
invariance, the base-locus and singular-locus inclusions, fiber cones) is
checked either symbolically or on exact sampled points, never by elimination.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import DomainError, InternalCheckError, SampleBudgetError
from .fields import rational_content, substream
from .hessian import hessian_matrix
from .linalg import ScalarMatrix, kernel, primitive_vector, projectively_equal
from .poly import Polynomial, gcd_list, monomials_of_degree

DEFAULT_MAX_RELATION_DEGREE = 4


@dataclass(frozen=True)
class PolarRelation:
    """g with g(f_0,…,f_n) ≡ 0; degree-1 relations flag a cone."""

    g: Polynomial                 # in y_0..y_n
    degree: int
    certificate: Polynomial       # g composed with the partials; must be zero

    def __post_init__(self):
        if not self.g:
            raise DomainError("a polar relation must be a nonzero polynomial")
        if not self.certificate.is_zero():
            raise InternalCheckError("polar relation certificate is nonzero")

    @property
    def is_linear(self):
        return self.degree == 1


@dataclass(frozen=True)
class PsiMap:
    """ψ_g = (h_0 : … : h_n) with provenance (g, ρ)."""

    relation: PolarRelation
    raw: tuple                    # g_i = ∂g/∂y_i ∘ ∇f
    rho: Polynomial               # gcd(g_0,…,g_n), scaled so ρ·h_i = g_i exactly
    h: tuple                      # components with gcd 1 and integer content 1
    cone_flagged: bool = False

    @property
    def nvars(self):
        return self.h[0].nvars

    def evaluate(self, point):
        """ψ_g at an exact point, or None on the base locus."""
        vals = tuple(hi.evaluate(point) for hi in self.h)
        if not any(vals):
            return None
        return vals


@dataclass(frozen=True)
class SampledSet:
    """Exact sampled stand-in for a locus defined only as a closure."""

    label: str
    points: tuple                 # normalized projective points
    preimages: tuple              # parallel provenance (() when not applicable)
    seed: int
    requested: int
    modulus: Optional[int] = None  # None: rational points; else GF(p)

    def __len__(self):
        return len(self.points)

    def reverify(self, psi):
        """Each stored image point must equal ψ of its stored preimage."""
        for pt, pre in zip(self.points, self.preimages):
            if self.modulus is None:
                val = psi.evaluate(pre)
            else:
                val = tuple(h.eval_mod(pre, self.modulus) for h in psi.h)
                if not any(val):
                    val = None
            if val is None or not _proj_eq_in(val, pt, self.modulus):
                return False
        return True


def _proj_eq_in(a, b, modulus):
    if modulus is None:
        return projectively_equal(a, b)
    if not any(a) or not any(b):
        return False
    n = len(a)
    return all(
        (a[i] * b[j] - a[j] * b[i]) % modulus == 0
        for i in range(n)
        for j in range(i + 1, n)
    )


def find_polar_relation(f, max_degree=DEFAULT_MAX_RELATION_DEGREE):
    """Smallest-degree relation among the partials, or None up to the cap.

    For each degree e, all degree-e monomials in y are composed with the
    partials and an exact kernel of the resulting linear system is taken over
    the monomial coefficients.  Among kernel vectors at the minimal degree,
    the primitive-integer vector supported on the earliest monomials wins.
    """
    if max_degree < 1:
        raise DomainError("max_degree must be >= 1")
    if not f or not f.is_homogeneous() or f.degree() < 2:
        raise DomainError("expects a homogeneous polynomial of degree >= 2")
    partials = f.gradient()
    n1 = f.nvars
    pow_cache = [{0: Polynomial.constant(n1, 1)} for _ in range(n1)]

    def partial_pow(i, e):
        cache = pow_cache[i]
        if e not in cache:
            cache[e] = partial_pow(i, e - 1) * partials[i]
        return cache[e]

    for e in range(1, max_degree + 1):
        monos = monomials_of_degree(n1, e)
        comps = []
        for mono in monos:
            prod = Polynomial.constant(n1, 1)
            for i, a in enumerate(mono):
                if a:
                    prod = prod * partial_pow(i, a)
            comps.append(prod)
        matrix, _ = ScalarMatrix.from_polynomials(comps)
        kern = kernel(matrix.transpose())
        if not len(kern):
            continue
        # columns run graded-lex descending, so preferring support on the
        # earliest monomials means taking the lexicographically greatest vector
        candidates = sorted((primitive_vector(v) for v in kern), reverse=True)
        for vec in candidates:
            g = Polynomial(n1, {m: c for m, c in zip(monos, vec) if c})
            raw = [g.partial(i).compose(partials) for i in range(n1)]
            if not any(raw):
                continue  # violates the standing assumption; try the next one
            cert = g.compose(partials)
            return PolarRelation(g=g, degree=e, certificate=cert)
    return None


def build_psi(f, relation, allow_cone=False):
    """Assemble ψ_g from a polar relation: divide out ρ = gcd of the g_i.

    Degree-1 relations mean V(f) is a cone, outside the construction's
    standing hypothesis; pass allow_cone=True to proceed anyway.
    """
    if relation.is_linear and not allow_cone:
        raise DomainError(
            "degree-1 relation: V(f) is a cone; pass allow_cone=True to proceed"
        )
    partials = f.gradient()
    raw = tuple(relation.g.partial(i).compose(partials) for i in range(f.nvars))
    if not any(raw):
        raise DomainError("all derivative compositions vanish; choose another relation")
    rho = gcd_list([g for g in raw if g])
    h = [g.exact_div(rho) if g else Polynomial.zero(f.nvars) for g in raw]
    content = rational_content(
        [c for hi in h for c in hi.terms.values()]
    )
    if content != 1:
        rho = rho.scale(content)
        h = [hi.scale(1 / content) for hi in h]
    for gi, hi in zip(raw, h):
        if rho * hi != gi:
            raise InternalCheckError("ρ·h_i != g_i after normalization")
    if gcd_list([hi for hi in h if hi]).degree() != 0:
        raise InternalCheckError("components h_i still share a factor")
    return PsiMap(
        relation=relation,
        raw=raw,
        rho=rho,
        h=tuple(h),
        cone_flagged=relation.is_linear,
    )


def check_second_derivative_relation(f, psi):
    """H_f · (h_0,…,h_n)ᵀ ≡ 0, the differentiated form of g(∇f) = 0."""
    rows = hessian_matrix(f).mul_poly_vector(list(psi.h))
    return all(r.is_zero() for r in rows)


@dataclass(frozen=True)
class InvarianceCheck:
    """Both sides of the translation-invariance equivalence for one F."""

    derivative_zero: bool         # Σ ∂F/∂x_i · h_i = 0
    invariant: bool               # F(x) = F(x + λ·ψ_g(x))
    mode: str

    @property
    def agree(self):
        return self.derivative_zero == self.invariant

    def __bool__(self):
        return self.agree


def _shifted_arguments(psi):
    """x_i + λ·h_i(x) as polynomials in (x_0..x_n, λ)."""
    n1 = psi.nvars
    lam = Polynomial.variable(n1 + 1, n1)
    args = []
    for i in range(n1):
        args.append(Polynomial.variable(n1 + 1, i) + lam * psi.h[i].extend(n1 + 1))
    return args


def check_invariance(F, psi, mode="symbolic", seed=0, samples=5):
    """Verify both directions of: Σ F_i h_i = 0  ⇔  F(x) = F(x + λψ_g(x)).

    The symbolic route expands F(x + λ·h(x)) - F(x) in n+2 variables; the
    sampled route evaluates at seeded exact points and λ values.  The two
    sides must agree for every F, or the theorem itself is falsified.
    """
    if F.nvars != psi.nvars:
        raise DomainError("F must live in the same variables as ψ_g")
    sigma = Polynomial.zero(F.nvars)
    for i in range(F.nvars):
        sigma = sigma + F.partial(i) * psi.h[i]
    derivative_zero = sigma.is_zero()
    if mode == "symbolic":
        shifted = F.compose(_shifted_arguments(psi))
        invariant = shifted == F.extend(F.nvars + 1)
    elif mode == "sampled":
        invariant = True
        for s in range(samples):
            rng = substream(seed, "invariance", s)
            pt = [rng.randint(-9, 9) for _ in range(F.nvars)]
            lam = rng.randint(1, 9)
            moved = [x + lam * h.evaluate(pt) for x, h in zip(pt, psi.h)]
            if F.evaluate(moved) != F.evaluate(pt):
                invariant = False
                break
    else:
        raise DomainError(f"unknown mode {mode!r}")
    return InvarianceCheck(derivative_zero=derivative_zero, invariant=invariant, mode=mode)


def taylor_membership(F, psi):
    """For F with Σ F_i h_i = 0, Taylor's argument forces F(h_0,…,h_n) = 0."""
    return F.compose(list(psi.h)).is_zero()


def sample_image(psi, count, seed, modulus=None):
    """Distinct exact points of ψ_g(P^n), skipping the base locus.

    Rational by default; pass a prime modulus for GF(p) sampling (faster on
    large inputs, still exact as a field).  Stores the preimage of every
    image point so fiber checks can reuse them.  Errors only if no image
    point is found at all (ψ_g undefined generically).
    """
    points = []
    preimages = []
    seen = set()
    budget = max(40 * count, 40)
    for s in range(budget):
        if len(points) == count:
            break
        rng = substream(seed, "image", s)
        if modulus is None:
            pt = tuple(rng.randint(-20, 20) for _ in range(psi.nvars))
        else:
            pt = tuple(rng.randrange(modulus) for _ in range(psi.nvars))
        if not any(pt):
            continue
        if modulus is None:
            val = psi.evaluate(pt)
            if val is None:
                continue
            norm = primitive_vector(val)
        else:
            val = tuple(h.eval_mod(pt, modulus) for h in psi.h)
            if not any(val):
                continue
            first = next(v for v in val if v)
            inv = pow(first, -1, modulus)
            norm = tuple(v * inv % modulus for v in val)
        if norm in seen:
            continue
        seen.add(norm)
        points.append(norm)
        preimages.append(pt)
    if count > 0 and not points:
        raise SampleBudgetError("ψ_g is undefined at every sampled point")
    return SampledSet(
        label="S*_Z image",
        points=tuple(points),
        preimages=tuple(preimages),
        seed=seed,
        requested=count,
        modulus=modulus,
    )


def sample_polar_image(f, count, seed):
    """Distinct exact points of the polar map's image: the tangent-hyperplane
    locus Z(f) sampled through the gradient, skipping singular points."""
    if not f or f.degree() < 1:
        raise DomainError("polar map needs a nonzero polynomial of degree >= 1")
    partials = f.gradient()
    points = []
    preimages = []
    seen = set()
    budget = max(40 * count, 40)
    for s in range(budget):
        if len(points) == count:
            break
        rng = substream(seed, "polar_image", s)
        pt = tuple(rng.randint(-20, 20) for _ in range(f.nvars))
        if not any(pt):
            continue
        val = tuple(fi.evaluate(pt) for fi in partials)
        if not any(val):
            continue
        norm = primitive_vector(val)
        if norm in seen:
            continue
        seen.add(norm)
        points.append(norm)
        preimages.append(pt)
    if count > 0 and not points:
        raise SampleBudgetError("the polar map vanished at every sampled point")
    return SampledSet(
        label="Z(f) image",
        points=tuple(points),
        preimages=tuple(preimages),
        seed=seed,
        requested=count,
    )


@dataclass(frozen=True)
class InclusionReport:
    ok: bool
    base_locus_violations: tuple
    singular_violations: tuple
    cone_caveat: bool


def check_inclusions(f, psi, image):
    """Every sampled image point must lie in Bs(ψ_g) and in Sing(V(f))."""
    if not len(image):
        raise DomainError("empty image sample")
    bs_bad = []
    sing_bad = []
    partials = f.gradient()
    p = image.modulus
    for q in image.points:
        if p is None:
            in_bs = all(hi.evaluate(q) == 0 for hi in psi.h)
            in_sing = all(fi.evaluate(q) == 0 for fi in partials)
        else:
            in_bs = all(hi.eval_mod(q, p) == 0 for hi in psi.h)
            in_sing = all(fi.eval_mod(q, p) == 0 for fi in partials)
        if not in_bs:
            bs_bad.append(q)
        if not in_sing:
            sing_bad.append(q)
    return InclusionReport(
        ok=not bs_bad and not sing_bad,
        base_locus_violations=tuple(bs_bad),
        singular_violations=tuple(sing_bad),
        cone_caveat=psi.cone_flagged,
    )


def _line_in_common_zeros(polys, w, q):
    """Substituting x = w + λ·q must kill every polynomial identically in λ."""
    args = [
        Polynomial.constant(1, wi) + Polynomial.variable(1, 0).scale(qi)
        for wi, qi in zip(w, q)
    ]
    return all(p.compose(args).is_zero() for p in polys)


def check_fiber_lines(f, psi, q, samples=3, seed=0, image=None):
    """Point-level fiber-cone and line-in-locus checks at an image point q.

    (i) For preimages p of q (from the sample's provenance, else a seeded
    search): ψ_g(p + λq) = q projectively for λ = 1..samples.
    (ii) For other sampled image points w (all of them lie in Bs(ψ_g) and in
    Sing(X)): the whole line ⟨w, q⟩ stays inside both loci, symbolically in λ.
    """
    preimages = []
    if image is not None:
        for pt, pre in zip(image.points, image.preimages):
            if projectively_equal(pt, q):
                preimages.append(pre)
    if not preimages:
        for s in range(200):
            rng = substream(seed, "fiber", s)
            pt = tuple(rng.randint(-20, 20) for _ in range(psi.nvars))
            if not any(pt):
                continue
            val = psi.evaluate(pt)
            if val is not None and projectively_equal(val, q):
                preimages.append(pt)
                break
        if not preimages:
            raise SampleBudgetError("no preimage of q found in budget")
    for p in preimages[:samples]:
        for lam in range(1, samples + 1):
            moved = [a + lam * b for a, b in zip(p, q)]
            val = psi.evaluate(moved)
            if val is None or not projectively_equal(val, q):
                return False
    if image is not None:
        partials = f.gradient()
        checked = 0
        for w in image.points:
            if projectively_equal(w, q):
                continue
            if not _line_in_common_zeros(list(psi.h), w, q):
                return False
            if not _line_in_common_zeros(partials, w, q):
                return False
            checked += 1
            if checked >= samples:
                break
    return True
