"""Exact sparse multivariate polynomial arithmetic.

A polynomial is a map from exponent tuples to nonzero coefficients.  The
coefficient domain is either the rationals (int / Fraction, see fields.py) or
GF(p).  Terms are kept canonical: no zero coefficients, no duplicate
monomials, and all printing/iteration uses graded-lexicographic descending
order, so equal polynomials print identically.

Degree of the zero polynomial is the sentinel ``MINUS_INFINITY``, which
compares below every integer.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import (
    DomainError,
    FieldMismatchError,
    InexactDivisionError,
    ParseError,
    VariableCountError,
)
from .fields import (
    GFElement,
    RATIONAL,
    coeff_div,
    field_of,
    norm_coeff,
    rational_to_mod,
    substream,
)

MINUS_INFINITY = float("-inf")


def grlex_key(exps):
    """Sort key realizing graded-lex: higher total degree first, then lex on
    exponents with x0 heaviest.  Use with reverse=True for descending order."""
    return (sum(exps), exps)


class Polynomial:
    """Immutable sparse polynomial in ``nvars`` variables x0..x_{nvars-1}."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars, terms):
        if nvars < 1:
            raise VariableCountError("a polynomial needs at least one variable")
        self.nvars = nvars
        self.terms = {e: norm_coeff(c) for e, c in terms.items() if c}

    # ------------------------------------------------------------------
    # constructors

    @staticmethod
    def zero(nvars):
        return Polynomial(nvars, {})

    @staticmethod
    def constant(nvars, c):
        return Polynomial(nvars, {(0,) * nvars: c})

    @staticmethod
    def variable(nvars, i):
        if not 0 <= i < nvars:
            raise VariableCountError(f"variable index {i} out of range for {nvars} variables")
        e = [0] * nvars
        e[i] = 1
        return Polynomial(nvars, {tuple(e): 1})

    @staticmethod
    def linear_form(coeffs):
        """Σ coeffs[i]·x_i in len(coeffs) variables."""
        n = len(coeffs)
        terms = {}
        for i, c in enumerate(coeffs):
            if c:
                e = [0] * n
                e[i] = 1
                terms[tuple(e)] = c
        return Polynomial(n, terms)

    # ------------------------------------------------------------------
    # structure

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def degree(self):
        if not self.terms:
            return MINUS_INFINITY
        return max(sum(e) for e in self.terms)

    def is_homogeneous(self):
        if not self.terms:
            return True
        degs = {sum(e) for e in self.terms}
        return len(degs) == 1

    def field(self):
        for c in self.terms.values():
            return field_of(c)
        return RATIONAL

    def num_terms(self):
        return len(self.terms)

    def sorted_terms(self):
        """Terms in canonical graded-lex descending order."""
        return sorted(self.terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    def leading(self):
        """(exponents, coefficient) of the graded-lex leading term."""
        if not self.terms:
            raise DomainError("zero polynomial has no leading term")
        e = max(self.terms, key=grlex_key)
        return e, self.terms[e]

    def variables_used(self):
        used = set()
        for e in self.terms:
            for i, a in enumerate(e):
                if a:
                    used.add(i)
        return used

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, GFElement)):
            other = Polynomial.constant(self.nvars, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    # ------------------------------------------------------------------
    # arithmetic

    def _check_compat(self, other):
        if self.nvars != other.nvars:
            raise VariableCountError(
                f"variable counts differ: {self.nvars} vs {other.nvars}"
            )
        fa, fb = self.field(), other.field()
        if self.terms and other.terms and fa != fb:
            raise FieldMismatchError(f"coefficient fields differ: {fa} vs {fb}")

    def _lift(self, other):
        if isinstance(other, (int, Fraction, GFElement)):
            return Polynomial.constant(self.nvars, other)
        return other

    def __add__(self, other):
        other = self._lift(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check_compat(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return Polynomial(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check_compat(other)
        if not self.terms or not other.terms:
            return Polynomial.zero(self.nvars)
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        out = {}
        for eb, cb in b.items():
            for ea, ca in a.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                s = out.get(e, 0) + ca * cb
                if s:
                    out[e] = s
                else:
                    del out[e]
        return Polynomial(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, e):
        if e < 0:
            raise DomainError("negative exponent")
        result = Polynomial.constant(self.nvars, self._one_coeff())
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base if e > 1 else base
            e >>= 1
        return result

    def _one_coeff(self):
        f = self.field()
        return 1 if f == RATIONAL else GFElement(1, f)

    def scale(self, c):
        if not c:
            return Polynomial.zero(self.nvars)
        return Polynomial(self.nvars, {e: v * c for e, v in self.terms.items()})

    # ------------------------------------------------------------------
    # calculus, evaluation, substitution

    def partial(self, i):
        """Formal partial derivative with respect to x_i."""
        if not 0 <= i < self.nvars:
            raise VariableCountError(f"variable index {i} out of range")
        out = {}
        for e, c in self.terms.items():
            a = e[i]
            if a:
                ee = e[:i] + (a - 1,) + e[i + 1:]
                s = out.get(ee, 0) + c * a
                if s:
                    out[ee] = s
                else:
                    del out[ee]
        return Polynomial(self.nvars, out)

    def gradient(self):
        return [self.partial(i) for i in range(self.nvars)]

    def evaluate(self, point):
        """Exact evaluation at a point in the polynomial's own field."""
        if len(point) != self.nvars:
            raise VariableCountError(
                f"point length {len(point)} != variable count {self.nvars}"
            )
        f = self.field()
        if f != RATIONAL:
            for v in point:
                if not isinstance(v, GFElement) or v.modulus != f:
                    raise FieldMismatchError(
                        "prime-field polynomial requires a point over the same field"
                    )
        else:
            for v in point:
                if isinstance(v, GFElement):
                    raise FieldMismatchError(
                        "rational polynomial evaluated at a prime-field point; reduce first"
                    )
        acc = 0 if f == RATIONAL else GFElement(0, f)
        for e, c in self.terms.items():
            t = c
            for i, a in enumerate(e):
                if a:
                    t = t * point[i] ** a
            acc = acc + t
        return norm_coeff(acc) if f == RATIONAL else acc

    def compose(self, args):
        """Substitute args[i] for x_i; args share one variable count."""
        if len(args) != self.nvars:
            raise VariableCountError(
                f"{len(args)} substitution arguments for {self.nvars} variables"
            )
        m = args[0].nvars
        for a in args:
            if a.nvars != m:
                raise VariableCountError("substitution arguments disagree on variable count")
        pow_cache = [{0: Polynomial.constant(m, 1)} for _ in args]

        def arg_pow(i, e):
            cache = pow_cache[i]
            if e not in cache:
                half = arg_pow(i, e // 2)
                cache[e] = half * half if e % 2 == 0 else half * half * args[i]
            return cache[e]

        acc = Polynomial.zero(m)
        for e, c in self.terms.items():
            t = Polynomial.constant(m, c)
            for i, a in enumerate(e):
                if a:
                    t = t * arg_pow(i, a)
            acc = acc + t
        return acc

    def extend(self, new_nvars):
        """Embed into a larger variable set by padding trailing exponents."""
        if new_nvars < self.nvars:
            raise VariableCountError("cannot shrink the variable set")
        if new_nvars == self.nvars:
            return self
        pad = (0,) * (new_nvars - self.nvars)
        return Polynomial(new_nvars, {e + pad: c for e, c in self.terms.items()})

    def reduce_mod(self, p):
        """Image of a rational polynomial in GF(p)[x]."""
        if self.field() != RATIONAL:
            raise FieldMismatchError("reduce_mod expects a rational polynomial")
        return Polynomial(
            self.nvars,
            {e: GFElement(rational_to_mod(c, p), p) for e, c in self.terms.items()},
        )

    def eval_mod(self, point, p):
        """Fast evaluation of a rational polynomial at an integer point mod p."""
        acc = 0
        for e, c in self.terms.items():
            t = rational_to_mod(c, p)
            for i, a in enumerate(e):
                if a:
                    t = t * pow(point[i], a, p) % p
            acc = (acc + t) % p
        return acc

    # ------------------------------------------------------------------
    # division and normalization

    def divmod_by(self, g):
        """Leading-term division: self = q·g + r with no r-term divisible by lt(g)."""
        if not g:
            raise DomainError("division by the zero polynomial")
        self._check_compat(g)
        ge, gc = g.leading()
        if not any(ge):
            q = Polynomial(
                self.nvars, {e: coeff_div(c, gc) for e, c in self.terms.items()}
            )
            return q, Polynomial.zero(self.nvars)
        q = Polynomial.zero(self.nvars)
        r = self
        while r:
            re, rc = r.leading()
            diff = tuple(a - b for a, b in zip(re, ge))
            if any(d < 0 for d in diff):
                break
            t = Polynomial(self.nvars, {diff: coeff_div(rc, gc)})
            q = q + t
            r = r - t * g
        return q, r

    def exact_div(self, g):
        q, r = self.divmod_by(g)
        if r:
            raise InexactDivisionError("division left a nonzero remainder")
        return q

    def divides(self, other):
        try:
            other.exact_div(self)
            return True
        except InexactDivisionError:
            return False

    def monic(self):
        """Scale so the graded-lex leading coefficient is 1."""
        if not self.terms:
            return self
        _, lc = self.leading()
        if lc == self._one_coeff():
            return self
        return Polynomial(
            self.nvars, {e: coeff_div(c, lc) for e, c in self.terms.items()}
        )

    # ------------------------------------------------------------------
    # printing

    def to_string(self, prefix="x"):
        if not self.terms:
            return "0"
        gf = self.field() != RATIONAL
        pieces = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                f"{prefix}{i}" + (f"^{a}" if a > 1 else "")
                for i, a in enumerate(e)
                if a
            )
            if gf:
                sign = "+"
                mag = str(c)
            else:
                sign = "-" if c < 0 else "+"
                mag = str(abs(c))
            if mono and mag == "1":
                body = mono
            elif mono:
                body = f"{mag}*{mono}"
            else:
                body = mag
            pieces.append((sign, body))
        first_sign, first_body = pieces[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in pieces[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"Polynomial({self.nvars}, {self.to_string()!r})"


# ----------------------------------------------------------------------
# parsing

class _Tokenizer:
    def __init__(self, text, prefix):
        self.text = text
        self.prefix = prefix
        self.pos = 0

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def next_token(self):
        self.skip_ws()
        if self.pos >= len(self.text):
            return ("end", "", self.pos)
        start = self.pos
        ch = self.text[start]
        if ch in "+-*^/()":
            self.pos += 1
            return (ch, ch, start)
        if ch.isdigit():
            j = start
            while j < len(self.text) and self.text[j].isdigit():
                j += 1
            self.pos = j
            return ("int", self.text[start:j], start)
        if ch.isalpha() or ch == "_":
            j = start
            while j < len(self.text) and (self.text[j].isalpha() or self.text[j] == "_"):
                j += 1
            name = self.text[start:j]
            k = j
            while k < len(self.text) and self.text[k].isdigit():
                k += 1
            if name != self.prefix:
                raise ParseError(
                    f"variable prefix {name!r} does not match expected {self.prefix!r}",
                    start,
                )
            if k == j:
                raise ParseError("variable needs a numeric index", start)
            self.pos = k
            return ("var", self.text[j:k], start)
        raise ParseError(f"unexpected character {ch!r}", start)


class _Parser:
    """Recursive descent over: expr := [sign] term ((+|-) term)*;
    term := factor (* factor)*; factor := coeff | var [^ int] | ( expr )."""

    def __init__(self, text, prefix):
        self.toks = _Tokenizer(text, prefix)
        self.cur = self.toks.next_token()

    def advance(self):
        self.cur = self.toks.next_token()

    def expect(self, kind):
        if self.cur[0] != kind:
            raise ParseError(f"expected {kind!r}, found {self.cur[1]!r}", self.cur[2])
        tok = self.cur
        self.advance()
        return tok

    def parse(self):
        terms = self.expr()
        if self.cur[0] != "end":
            raise ParseError(f"unexpected trailing {self.cur[1]!r}", self.cur[2])
        return terms

    def expr(self):
        sign = 1
        if self.cur[0] in "+-":
            sign = -1 if self.cur[0] == "-" else 1
            self.advance()
        acc = [(sign, self.term())]
        while self.cur[0] in "+-":
            sign = -1 if self.cur[0] == "-" else 1
            self.advance()
            acc.append((sign, self.term()))
        return acc

    def term(self):
        factors = [self.factor()]
        while self.cur[0] == "*":
            self.advance()
            factors.append(self.factor())
        return factors

    def factor(self):
        kind, value, pos = self.cur
        if kind == "int":
            self.advance()
            num = int(value)
            if self.cur[0] == "/":
                self.advance()
                den = int(self.expect("int")[1])
                if den == 0:
                    raise ParseError("zero denominator", pos)
                return ("coeff", Fraction(num, den))
            return ("coeff", num)
        if kind == "var":
            self.advance()
            idx = int(value)
            if self.cur[0] == "^":
                self.advance()
                if self.cur[0] == "-":
                    raise ParseError("negative exponent", self.cur[2])
                exp = int(self.expect("int")[1])
                return ("mono", idx, exp)
            return ("mono", idx, 1)
        if kind == "(":
            self.advance()
            inner = self.expr()
            self.expect(")")
            return ("expr", inner)
        raise ParseError(f"expected coefficient, variable, or '(', found {value!r}", pos)


def _eval_parsed(parsed, nvars):
    """Turn the parse tree into a Polynomial with nvars variables."""
    acc = Polynomial.zero(nvars)
    for sign, factors in parsed:
        term = Polynomial.constant(nvars, sign)
        for f in factors:
            if f[0] == "coeff":
                term = term.scale(f[1])
            elif f[0] == "mono":
                term = term * Polynomial.variable(nvars, f[1]) ** f[2]
            else:
                term = term * _eval_parsed(f[1], nvars)
        acc = acc + term
    return acc


def _max_index(parsed):
    best = -1
    for _, factors in parsed:
        for f in factors:
            if f[0] == "mono":
                best = max(best, f[1])
            elif f[0] == "expr":
                best = max(best, _max_index(f[1]))
    return best


def parse(text, var_prefix="x", nvars=None):
    """Parse polynomial text; variables are var_prefix + index.

    The variable count defaults to one more than the largest index used
    (at least 1); pass ``nvars`` to embed in a larger variable set.
    """
    parsed = _Parser(text, var_prefix).parse()
    inferred = _max_index(parsed) + 1
    if nvars is None:
        nvars = max(inferred, 1)
    elif inferred > nvars:
        raise ParseError(f"variable index {inferred - 1} exceeds nvars={nvars}", 0)
    return _eval_parsed(parsed, nvars)


# ----------------------------------------------------------------------
# monomial enumeration

def monomials_of_degree(nvars, d):
    """All exponent tuples of total degree d, graded-lex descending."""
    out = []

    def rec(prefix, remaining, slots):
        if slots == 1:
            out.append(prefix + (remaining,))
            return
        for a in range(remaining, -1, -1):
            rec(prefix + (a,), remaining - a, slots - 1)

    rec((), d, nvars)
    return out


# ----------------------------------------------------------------------
# gcd: primitive PRS on the last-occurring variable, content recursion

def _as_univariate(f, v):
    """View f as univariate in x_v: dict degree -> coefficient Polynomial with x_v stripped."""
    coeffs = {}
    for e, c in f.terms.items():
        d = e[v]
        ee = e[:v] + (0,) + e[v + 1:]
        coef = coeffs.setdefault(d, {})
        coef[ee] = coef.get(ee, 0) + c
    return {
        d: Polynomial(f.nvars, terms)
        for d, terms in coeffs.items()
        if any(terms.values())
    }


def _from_univariate(coeffs, v, nvars):
    terms = {}
    for d, poly in coeffs.items():
        for e, c in poly.terms.items():
            terms[e[:v] + (d,) + e[v + 1:]] = c
    return Polynomial(nvars, terms)


def _uni_degree(coeffs):
    return max(coeffs) if coeffs else MINUS_INFINITY


def _uni_mul_xpow(coeffs, k):
    return {d + k: c for d, c in coeffs.items()}


def _uni_scale(coeffs, poly):
    out = {}
    for d, c in coeffs.items():
        p = c * poly
        if p:
            out[d] = p
    return out


def _uni_sub(a, b):
    out = dict(a)
    for d, c in b.items():
        s = out.get(d)
        s = c.__neg__() if s is None else s - c
        if s:
            out[d] = s
        else:
            out.pop(d, None)
    return out


def _pseudo_rem(a, b, nvars):
    """Pseudo-remainder of univariate-viewed polynomials (coefficients are
    polynomials); exactness up to factors removed by the primitive part."""
    lb = b[_uni_degree(b)]
    r = a
    while r and _uni_degree(r) >= _uni_degree(b):
        dr = _uni_degree(r)
        lr = r[dr]
        r = _uni_sub(_uni_scale(r, lb), _uni_mul_xpow(_uni_scale(b, lr), dr - _uni_degree(b)))
    return r


def gcd(a, b):
    """A gcd of two polynomials, normalized monic (graded-lex leading coeff 1)."""
    if a.nvars != b.nvars:
        raise VariableCountError("gcd arguments disagree on variable count")
    if not a and not b:
        raise DomainError("gcd(0, 0) is undefined")
    if not a:
        return b.monic()
    if not b:
        return a.monic()
    used = a.variables_used() | b.variables_used()
    if not used:
        return Polynomial.constant(a.nvars, a._one_coeff())
    v = max(used)
    ua, ub = _as_univariate(a, v), _as_univariate(b, v)
    ca = _content(ua)
    cb = _content(ub)
    pa = {d: c.exact_div(ca) for d, c in ua.items()}
    pb = {d: c.exact_div(cb) for d, c in ub.items()}
    if _uni_degree(pa) < _uni_degree(pb):
        pa, pb = pb, pa
    while pb:
        r = _pseudo_rem(pa, pb, a.nvars)
        pa, pb = pb, r
        if pb:
            cr = _content(pb)
            pb = {d: c.exact_div(cr) for d, c in pb.items()}
    cont_gcd = gcd(ca, cb)
    result = _from_univariate(pa, v, a.nvars) * cont_gcd
    return result.monic()


def _content(uni_coeffs):
    """gcd of the coefficient polynomials of a univariate view."""
    polys = [uni_coeffs[d] for d in sorted(uni_coeffs)]
    acc = polys[0]
    for p in polys[1:]:
        acc = gcd(acc, p)
        if acc.degree() == 0:
            break
    # gcd() is monic, but the first coefficient may be alone:
    return acc.monic()


def gcd_list(polys):
    """Fold gcd over a list, skipping zeros; error if all zero."""
    acc = None
    for p in polys:
        if not p:
            continue
        acc = p.monic() if acc is None else gcd(acc, p)
        if acc.degree() == 0:
            break
    if acc is None:
        raise DomainError("gcd of an all-zero list")
    return acc


def is_reduced(f, seed=0):
    """Squarefreeness proxy: gcd(f, D_v f) constant for a seeded random
    direction v, with one deterministic retry on a second direction.  A
    repeated square factor divides D_v f for every v, so it is always caught."""
    if not f:
        raise DomainError("is_reduced is undefined for the zero polynomial")
    if not f.is_homogeneous():
        raise DomainError("is_reduced expects a homogeneous polynomial")
    for attempt in range(2):
        rng = substream(seed + attempt, "is_reduced")
        v = [rng.randint(-9, 9) for _ in range(f.nvars)]
        if not any(v):
            v[0] = 1
        dv = Polynomial.zero(f.nvars)
        for i, vi in enumerate(v):
            if vi:
                dv = dv + f.partial(i).scale(vi)
        if not dv:
            # degree-0 input or a degenerate direction: gcd(f, 0) = f
            if f.degree() == 0:
                return True
            continue
        if gcd(f, dv).degree() == 0:
            return True
    return False
