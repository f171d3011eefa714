"""Bivariate and homogeneous trivariate polynomial algebra.

Everything here works with sparse exponent->coefficient maps over floats.
Monomial order is graded lexicographic with x1 > x2 throughout, matching
the ordering used for moment vectors elsewhere in the package.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

__all__ = [
    "BivarPoly",
    "HomogForm3",
    "ProjPoint",
    "SupportLine",
    "PolyParseError",
    "homogenize",
    "gradient",
    "hessian",
    "comparison_quartic",
    "resultant",
    "real_roots",
    "parse_poly",
    "parse_homog",
    "monomials_upto",
]

_ZERO_TOL = 1e-14


def monomials_upto(d):
    """Exponent pairs (a, b) with a + b <= d in graded lex order, x1 > x2."""
    out = []
    for t in range(d + 1):
        for b in range(t + 1):
            out.append((t - b, b))
    return out


def _clean_terms(terms):
    return {e: float(c) for e, c in terms.items() if abs(c) > _ZERO_TOL}


class BivarPoly:
    """Sparse real polynomial in x1, x2.

    Immutable; all arithmetic returns fresh objects.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        object.__setattr__(self, "terms", _clean_terms(terms or {}))

    def __setattr__(self, *a):
        raise AttributeError("BivarPoly is immutable")

    @staticmethod
    def const(c):
        return BivarPoly({(0, 0): c})

    @staticmethod
    def var(i):
        if i == 1:
            return BivarPoly({(1, 0): 1.0})
        if i == 2:
            return BivarPoly({(0, 1): 1.0})
        raise ValueError("variable index must be 1 or 2")

    @property
    def degree(self):
        if not self.terms:
            return -1
        return max(a + b for a, b in self.terms)

    def is_zero(self):
        return not self.terms

    def coeff(self, a, b):
        return self.terms.get((a, b), 0.0)

    def __call__(self, x1, x2):
        return sum(c * x1**a * x2**b for (a, b), c in self.terms.items())

    def eval_many(self, x1, x2):
        """Vectorized evaluation on numpy arrays."""
        x1 = np.asarray(x1, dtype=float)
        x2 = np.asarray(x2, dtype=float)
        out = np.zeros(np.broadcast(x1, x2).shape)
        for (a, b), c in self.terms.items():
            out += c * x1**a * x2**b
        return out

    def __add__(self, other):
        if isinstance(other, (int, float)):
            other = BivarPoly.const(other)
        t = dict(self.terms)
        for e, c in other.terms.items():
            t[e] = t.get(e, 0.0) + c
        return BivarPoly(t)

    __radd__ = __add__

    def __neg__(self):
        return BivarPoly({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, float)):
            other = BivarPoly.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return BivarPoly({e: c * other for e, c in self.terms.items()})
        t = {}
        for (a1, b1), c1 in self.terms.items():
            for (a2, b2), c2 in other.terms.items():
                e = (a1 + a2, b1 + b2)
                t[e] = t.get(e, 0.0) + c1 * c2
        return BivarPoly(t)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power")
        out = BivarPoly.const(1.0)
        for _ in range(n):
            out = out * self
        return out

    def diff(self, i):
        """Partial derivative with respect to x1 (i=1) or x2 (i=2)."""
        t = {}
        for (a, b), c in self.terms.items():
            if i == 1 and a > 0:
                t[(a - 1, b)] = t.get((a - 1, b), 0.0) + a * c
            elif i == 2 and b > 0:
                t[(a, b - 1)] = t.get((a, b - 1), 0.0) + b * c
        return BivarPoly(t)

    def coeff_norm(self):
        return max((abs(c) for c in self.terms.values()), default=0.0)

    def restrict_x2(self, x2_poly_coeffs=None):
        """Coefficients in x2 as univariate polys in x1 (list indexed by x2 power)."""
        degb = max((b for _, b in self.terms), default=0)
        out = [dict() for _ in range(degb + 1)]
        for (a, b), c in self.terms.items():
            out[b][a] = c
        return out

    def univariate_in(self, axis, value):
        """Substitute a numeric value for the *other* variable; return coeff array
        (low-to-high) of the resulting univariate polynomial in `axis`."""
        d = self.degree
        if d < 0:
            return np.zeros(1)
        coeffs = np.zeros(d + 1)
        for (a, b), c in self.terms.items():
            if axis == 1:
                coeffs[a] += c * value**b
            else:
                coeffs[b] += c * value**a
        return coeffs

    def leading_form(self):
        """Terms of top total degree, as a BivarPoly."""
        d = self.degree
        return BivarPoly({e: c for e, c in self.terms.items() if sum(e) == d})

    def graded_part(self, d):
        return BivarPoly({e: c for e, c in self.terms.items() if sum(e) == d})

    def __eq__(self, other):
        return isinstance(other, BivarPoly) and self.terms == other.terms

    def allclose(self, other, tol=1e-9):
        keys = set(self.terms) | set(other.terms)
        scale = max(self.coeff_norm(), other.coeff_norm(), 1.0)
        return all(abs(self.coeff(*k) - other.coeff(*k)) <= tol * scale for k in keys)

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"BivarPoly({format_poly(self)!r})"


class HomogForm3:
    """Homogeneous trivariate form in x0, x1, x2; every exponent triple sums to d."""

    __slots__ = ("terms", "degree")

    def __init__(self, terms, degree=None):
        terms = {e: float(c) for e, c in terms.items() if abs(c) > _ZERO_TOL}
        degs = {sum(e) for e in terms}
        if degree is None:
            if not degs:
                raise ValueError("empty polynomial")
            degree = max(degs)
        if degs - {degree}:
            raise ValueError(f"non-homogeneous term map: degrees {sorted(degs)}")
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "degree", degree)

    def __setattr__(self, *a):
        raise AttributeError("HomogForm3 is immutable")

    def __call__(self, x0, x1, x2):
        return sum(c * x0**a0 * x1**a1 * x2**a2 for (a0, a1, a2), c in self.terms.items())

    def diff(self, i):
        """Partial with respect to x0, x1 or x2 (i in {0,1,2})."""
        t = {}
        for e, c in self.terms.items():
            if e[i] > 0:
                e2 = list(e)
                e2[i] -= 1
                e2 = tuple(e2)
                t[e2] = t.get(e2, 0.0) + e[i] * c
        return HomogForm3(t, self.degree - 1) if t else HomogForm3({}, max(self.degree - 1, 0))

    def dehomogenize(self):
        """Set x0 = 1."""
        t = {}
        for (a0, a1, a2), c in self.terms.items():
            t[(a1, a2)] = t.get((a1, a2), 0.0) + c
        return BivarPoly(t)

    def restrict_infinity(self):
        """Restriction to the line x0 = 0, as a BivarPoly in (x1, x2)."""
        return BivarPoly({(a1, a2): c for (a0, a1, a2), c in self.terms.items() if a0 == 0})

    def __eq__(self, other):
        return isinstance(other, HomogForm3) and self.terms == other.terms

    def __repr__(self):
        return f"HomogForm3({format_poly(self)!r})"

    def __str__(self):
        return format_poly(self)


def homogenize(p):
    """Homogenization x0^(deg p) * p(x1/x0, x2/x0) of a nonzero BivarPoly."""
    if p.is_zero():
        raise ValueError("empty polynomial")
    d = p.degree
    return HomogForm3({(d - a - b, a, b): c for (a, b), c in p.terms.items()}, d)


def gradient(p):
    return (p.diff(1), p.diff(2))


def hessian(p):
    p1, p2 = gradient(p)
    h11 = p1.diff(1)
    h12 = p1.diff(2)
    h22 = p2.diff(2)
    return [[h11, h12], [h12, h22]]


@dataclass(frozen=True)
class ProjPoint:
    """Point of the real projective plane, coordinates (x0, x1, x2)."""

    coords: tuple

    def __post_init__(self):
        c = tuple(float(v) for v in self.coords)
        if len(c) != 3 or all(abs(v) < _ZERO_TOL for v in c):
            raise ValueError("projective point needs a nonzero real triple")
        object.__setattr__(self, "coords", c)

    @staticmethod
    def affine(x1, x2):
        return ProjPoint((1.0, x1, x2))

    def normalized(self):
        """Scale the first nonzero coordinate to 1."""
        for v in self.coords:
            if abs(v) > _ZERO_TOL:
                return ProjPoint(tuple(w / v for w in self.coords))
        raise ValueError("zero point")

    @property
    def at_infinity(self):
        return abs(self.coords[0]) < 1e-12 * max(abs(v) for v in self.coords)

    def to_affine(self):
        if self.at_infinity:
            raise ValueError("point at infinity has no affine coordinates")
        x0, x1, x2 = self.coords
        return (x1 / x0, x2 / x0)

    def close_to(self, other, tol=1e-8):
        a = np.array(self.normalized().coords)
        b = np.array(ProjPoint(tuple(other.coords) if isinstance(other, ProjPoint) else tuple(other)).normalized().coords)
        return bool(np.allclose(a, b, atol=tol))

    def __eq__(self, other):
        if not isinstance(other, ProjPoint):
            return NotImplemented
        return self.close_to(other, tol=1e-12)

    def __hash__(self):
        return 0  # equality is up to scaling; hashing by value is unsound


@dataclass(frozen=True)
class SupportLine:
    """Oriented line f0*x0 + f1*x1 + f2*x2 >= 0; equality up to positive scaling."""

    coeffs: tuple

    def __post_init__(self):
        c = tuple(float(v) for v in self.coeffs)
        if len(c) != 3:
            raise ValueError("line needs 3 coefficients")
        object.__setattr__(self, "coeffs", c)

    @property
    def direction(self):
        return (self.coeffs[1], self.coeffs[2])

    def affine_poly(self):
        f0, f1, f2 = self.coeffs
        return BivarPoly({(0, 0): f0, (1, 0): f1, (0, 1): f2})

    def __call__(self, x1, x2):
        f0, f1, f2 = self.coeffs
        return f0 + f1 * x1 + f2 * x2

    def normalized(self):
        """Scale so the direction part has unit norm (positive scaling only)."""
        n = math.hypot(*self.direction)
        if n < _ZERO_TOL:
            n = max(abs(v) for v in self.coeffs)
        return SupportLine(tuple(v / n for v in self.coeffs))

    def close_to(self, other, tol=1e-6):
        a = np.array(self.normalized().coeffs)
        b = np.array(SupportLine(tuple(other)).normalized().coeffs if not isinstance(other, SupportLine) else other.normalized().coeffs)
        return bool(np.allclose(a, b, atol=tol))


def comparison_quartic(f, p):
    """The quartic f(x) - p(x) for a support line f and curve polynomial p."""
    if p.degree > 4:
        raise ValueError("curve polynomial must have degree <= 4")
    return f.affine_poly() - p


# ---------------------------------------------------------------------------
# resultants and univariate real roots


def _coeffs_in_axis(p, axis):
    """Coefficient list of p seen as univariate in `axis`; entries are numpy
    coeff arrays (low-to-high) in the other variable."""
    if axis == 1:
        da = max((a for a, _ in p.terms), default=0)
        db = max((b for _, b in p.terms), default=0)
        out = [np.zeros(db + 1) for _ in range(da + 1)]
        for (a, b), c in p.terms.items():
            out[a][b] += c
    else:
        da = max((b for _, b in p.terms), default=0)
        db = max((a for a, _ in p.terms), default=0)
        out = [np.zeros(db + 1) for _ in range(da + 1)]
        for (a, b), c in p.terms.items():
            out[b][a] += c
    return out


def _trim_poly_list(coeffs, tol=1e-12):
    scale = max((float(np.max(np.abs(c))) for c in coeffs), default=0.0)
    d = len(coeffs) - 1
    while d > 0 and np.max(np.abs(coeffs[d])) <= tol * scale:
        d -= 1
    return coeffs[: d + 1]


def resultant(a, b, axis):
    """Sylvester resultant of a and b eliminating x1 (axis=1) or x2 (axis=2).

    Returns the coefficient array (low-to-high) of a univariate polynomial in
    the remaining variable. Computed by evaluating the Sylvester determinant
    at Chebyshev nodes and interpolating, which is robust for the degree-<=12
    outputs occurring here.
    """
    if a.is_zero() or b.is_zero():
        raise ValueError("resultant of zero polynomial")
    ca = _trim_poly_list(_coeffs_in_axis(a, axis))
    cb = _trim_poly_list(_coeffs_in_axis(b, axis))
    da, db = len(ca) - 1, len(cb) - 1
    if da == 0 and db == 0:
        raise ValueError("both polynomials constant in the eliminated variable")
    if da == 0:
        return np.polynomial.polynomial.polypow(ca[0], db) if db else ca[0].copy()
    if db == 0:
        return np.polynomial.polynomial.polypow(cb[0], da)

    # degree bound for the resultant in the kept variable
    dega = max(int(np.max(np.nonzero(np.abs(c) > 0)[0], initial=0)) for c in ca)
    degb = max(int(np.max(np.nonzero(np.abs(c) > 0)[0], initial=0)) for c in cb)
    bound = db * dega + da * degb
    nodes = np.cos(np.pi * (2 * np.arange(bound + 1) + 1) / (2 * (bound + 1))) * 2.0

    vals = np.empty(bound + 1)
    n = da + db
    for idx, t in enumerate(nodes):
        arow = np.array([np.polynomial.polynomial.polyval(t, c) for c in ca])
        brow = np.array([np.polynomial.polynomial.polyval(t, c) for c in cb])
        syl = np.zeros((n, n))
        for i in range(db):
            syl[i, i : i + da + 1] = arow[::-1]
        for i in range(da):
            syl[db + i, i : i + db + 1] = brow[::-1]
        vals[idx] = np.linalg.det(syl)

    if bound == 0:
        return np.array([vals[0]])
    cheb = np.polynomial.chebyshev.chebfit(nodes / 2.0, vals, bound)
    coeffs = np.polynomial.chebyshev.cheb2poly(cheb)
    # undo the node scaling t -> t/2
    coeffs = coeffs * (0.5 ** np.arange(len(coeffs)))
    scale = np.max(np.abs(coeffs))
    if scale > 0:
        coeffs = np.where(np.abs(coeffs) > 1e-11 * scale, coeffs, 0.0)
    return coeffs


def _trim_coeffs(q, tol=1e-12):
    q = np.asarray(q, dtype=float)
    scale = np.max(np.abs(q)) if q.size else 0.0
    if scale == 0.0:
        return np.zeros(1)
    d = len(q) - 1
    while d > 0 and abs(q[d]) <= tol * scale:
        d -= 1
    return q[: d + 1]


def real_roots(q, interval=None, tol=1e-9):
    """Real roots of a univariate polynomial (coeff array, low-to-high).

    Roots come from companion-matrix eigenvalues, are polished with Newton
    steps, filtered by residual, merged within tol and sorted.
    """
    q = _trim_coeffs(np.asarray(q, dtype=float))
    if len(q) == 1:
        if q[0] == 0.0:
            raise ValueError("identically zero polynomial")
        return []
    scale = np.max(np.abs(q))
    roots = np.polynomial.polynomial.polyroots(q)
    dq = np.polynomial.polynomial.polyder(q)
    out = []
    for r in roots:
        if abs(r.imag) > 1e-7 * (1 + abs(r.real)):
            continue
        x = r.real
        for _ in range(20):
            fx = np.polynomial.polynomial.polyval(x, q)
            dfx = np.polynomial.polynomial.polyval(x, dq)
            if abs(dfx) < 1e-300:
                break
            step = fx / dfx
            if not np.isfinite(step):
                break
            x -= step
            if abs(step) < 1e-15 * (1 + abs(x)):
                break
        res = abs(np.polynomial.polynomial.polyval(x, q))
        if res > 1e-8 * scale * max(1.0, abs(x)) ** (len(q) - 1):
            continue
        out.append(x)
    out.sort()
    merged = []
    for x in out:
        if merged and abs(x - merged[-1]) <= tol * max(1.0, abs(x)):
            continue
        merged.append(x)
    if interval is not None:
        lo, hi = interval
        merged = [x for x in merged if lo - tol <= x <= hi + tol]
    return merged


# ---------------------------------------------------------------------------
# text format: parse and print


class PolyParseError(ValueError):
    pass


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d+)?(?:[eE][+-]?\d+)?(?:/\d+)?)"
    r"|(?P<var>x[012])"
    r"|(?P<op>[-+*^()]))"
)


def _tokenize(text):
    pos = 0
    tokens = []
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            raise PolyParseError(f"unexpected character at position {pos}: {text[pos:pos+10]!r}")
        if m.lastgroup == "num":
            s = m.group("num")
            if "/" in s:
                tokens.append(("num", float(Fraction(s))))
            else:
                tokens.append(("num", float(s)))
        elif m.lastgroup == "var":
            tokens.append(("var", int(m.group("var")[1])))
        else:
            tokens.append((m.group("op"), None))
        pos = m.end()
    tokens.append(("end", None))
    return tokens


class _Parser:
    """Recursive descent over +, -, *, ^ and parentheses.

    Internally works on trivariate term maps keyed by (a0, a1, a2).
    """

    def __init__(self, tokens):
        self.tokens = tokens
        self.i = 0

    def peek(self):
        return self.tokens[self.i][0]

    def next(self):
        t = self.tokens[self.i]
        self.i += 1
        return t

    def parse(self):
        t = self.expr()
        if self.peek() != "end":
            raise PolyParseError(f"trailing input near token {self.i}")
        return t

    def expr(self):
        sign = 1.0
        while self.peek() in ("+", "-"):
            if self.next()[0] == "-":
                sign = -sign
        t = _tmul_const(self.term(), sign)
        while self.peek() in ("+", "-"):
            sign = 1.0
            while self.peek() in ("+", "-"):
                if self.next()[0] == "-":
                    sign = -sign
            t = _tadd(t, _tmul_const(self.term(), sign))
        return t

    def term(self):
        t = self.factor()
        while self.peek() == "*":
            self.next()
            t = _tmul(t, self.factor())
        return t

    def factor(self):
        t = self.atom()
        while self.peek() == "^":
            self.next()
            kind, val = self.next()
            if kind != "num" or val != int(val) or val < 0:
                raise PolyParseError("exponent must be a nonnegative integer")
            t = _tpow(t, int(val))
        return t

    def atom(self):
        kind, val = self.next()
        if kind == "num":
            return {(0, 0, 0): val}
        if kind == "var":
            e = [0, 0, 0]
            e[val] = 1
            return {tuple(e): 1.0}
        if kind == "(":
            t = self.expr()
            if self.next()[0] != ")":
                raise PolyParseError("missing closing parenthesis")
            return t
        if kind == "-":
            return _tmul_const(self.factor(), -1.0)
        raise PolyParseError(f"unexpected token {kind!r}")


def _tadd(a, b):
    t = dict(a)
    for e, c in b.items():
        t[e] = t.get(e, 0.0) + c
    return t


def _tmul_const(a, c):
    return {e: v * c for e, v in a.items()}


def _tmul(a, b):
    t = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2])
            t[e] = t.get(e, 0.0) + c1 * c2
    return t


def _tpow(a, n):
    out = {(0, 0, 0): 1.0}
    for _ in range(n):
        out = _tmul(out, a)
    return out


def parse_poly(text):
    """Parse polynomial text in x1, x2 into a BivarPoly."""
    t = _Parser(_tokenize(text)).parse()
    if any(e[0] > 0 for e, c in t.items() if abs(c) > _ZERO_TOL):
        raise PolyParseError("x0 is only allowed in homogeneous forms")
    return BivarPoly({(e[1], e[2]): c for e, c in t.items()})


def parse_homog(text):
    """Parse homogeneous polynomial text in x0, x1, x2 into a HomogForm3."""
    t = _Parser(_tokenize(text)).parse()
    t = {e: c for e, c in t.items() if abs(c) > _ZERO_TOL}
    if not t:
        raise PolyParseError("empty polynomial")
    return HomogForm3(t)


def _fmt_num(c):
    if c == int(c) and abs(c) < 1e15:
        return str(int(c))
    return f"{c:.12g}"


def _fmt_monomial(powers, names):
    parts = []
    for p, name in zip(powers, names):
        if p == 1:
            parts.append(name)
        elif p > 1:
            parts.append(f"{name}^{p}")
    return "*".join(parts)


def format_poly(p):
    """Canonical text form, graded lex order with x1 > x2 (and x0 last weight)."""
    if isinstance(p, BivarPoly):
        items = [((a, b), c) for (a, b), c in p.terms.items()]
        keyed = sorted(items, key=lambda t: (t[0][0] + t[0][1], -t[0][0]))
        names = ("x1", "x2")
        mono = lambda e: _fmt_monomial(e, names)
    else:
        items = list(p.terms.items())
        keyed = sorted(items, key=lambda t: (-t[0][0], -t[0][1]))
        names = ("x0", "x1", "x2")
        mono = lambda e: _fmt_monomial(e, names)
    if not keyed:
        return "0"
    out = []
    for e, c in keyed:
        m = mono(e)
        mag = _fmt_num(abs(c))
        if m and abs(c) == 1:
            piece = m
        elif m:
            piece = f"{mag}*{m}"
        else:
            piece = mag
        if not out:
            out.append(piece if c > 0 else f"-{piece}")
        else:
            out.append(f"+ {piece}" if c > 0 else f"- {piece}")
    return " ".join(out)
