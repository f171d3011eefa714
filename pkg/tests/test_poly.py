import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quartichull.poly import (
    BivarPoly,
    PolyParseError,
    ProjPoint,
    SupportLine,
    comparison_quartic,
    format_poly,
    gradient,
    hessian,
    homogenize,
    monomials_upto,
    parse_poly,
    real_roots,
    resultant,
)

coeffs = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


def small_polys(max_degree=4):
    pairs = [(a, b) for a, b in monomials_upto(max_degree)]

    def build(cs):
        return BivarPoly({e: c for e, c in zip(pairs, cs)})

    return st.lists(coeffs, min_size=len(pairs), max_size=len(pairs)).map(build)


def test_basic_arithmetic():
    x1, x2 = BivarPoly.var(1), BivarPoly.var(2)
    p = (x1 + x2) ** 2
    assert p.coeff(2, 0) == 1.0
    assert p.coeff(1, 1) == 2.0
    assert p.coeff(0, 2) == 1.0
    assert (p - p).is_zero()
    assert (x1 ** 0)(3.0, 4.0) == 1.0
    assert p.degree == 2
    assert BivarPoly().degree == -1


def test_monomials_upto_counts():
    assert len(monomials_upto(2)) == 6
    assert len(monomials_upto(4)) == 15
    # graded order: degree never decreases along the list
    degs = [a + b for a, b in monomials_upto(5)]
    assert degs == sorted(degs)


@given(small_polys())
@settings(max_examples=50, deadline=None)
def test_parse_format_round_trip(p):
    # printing keeps 12 significant digits, so round-tripping is 1e-10 exact
    q = parse_poly(format_poly(p))
    assert q.allclose(p, tol=1e-10)


def test_parse_errors():
    for bad in ("x3", "x1 +", "2**x1", "(x1", "x1^", ""):
        with pytest.raises((PolyParseError, ValueError)):
            parse_poly(bad)


def test_parse_powers_and_products():
    p = parse_poly("1 - 8*x1^2 - (x1^2 - x2)^2")
    assert p.coeff(0, 0) == 1.0
    assert p.coeff(2, 0) == -8.0
    assert p.coeff(4, 0) == -1.0
    assert p.coeff(2, 1) == 2.0
    assert p.coeff(0, 2) == -1.0


@given(small_polys(), st.floats(-2, 2), st.floats(-2, 2))
@settings(max_examples=50, deadline=None)
def test_homogenize_round_trip(p, x1, x2):
    if p.is_zero():
        return
    pbar = homogenize(p)
    assert pbar.dehomogenize().allclose(p, tol=1e-12)
    assert abs(pbar(1.0, x1, x2) - p(x1, x2)) <= 1e-9 * max(1.0, p.coeff_norm()) * 32


@given(small_polys(), st.floats(-2, 2), st.floats(-2, 2), st.floats(0.1, 3))
@settings(max_examples=50, deadline=None)
def test_homogeneity_scaling(p, x1, x2, lam):
    if p.is_zero():
        return
    pbar = homogenize(p)
    d = pbar.degree
    lhs = pbar(lam, lam * x1, lam * x2)
    rhs = lam**d * pbar(1.0, x1, x2)
    assert abs(lhs - rhs) <= 1e-7 * max(1.0, abs(rhs))


@given(small_polys(), st.floats(-2, 2), st.floats(-2, 2))
@settings(max_examples=50, deadline=None)
def test_euler_identity(p, x1, x2):
    # x . grad(pbar) = d * pbar for homogeneous forms
    if p.is_zero():
        return
    pbar = homogenize(p)
    d = pbar.degree
    lhs = (pbar.diff(0)(1.0, x1, x2) + x1 * pbar.diff(1)(1.0, x1, x2)
           + x2 * pbar.diff(2)(1.0, x1, x2))
    rhs = d * pbar(1.0, x1, x2)
    assert abs(lhs - rhs) <= 1e-7 * max(1.0, abs(rhs))


@given(small_polys(), st.floats(-1.5, 1.5), st.floats(-1.5, 1.5))
@settings(max_examples=50, deadline=None)
def test_gradient_matches_finite_differences(p, x1, x2):
    g1, g2 = gradient(p)
    h = 1e-6
    fd1 = (p(x1 + h, x2) - p(x1 - h, x2)) / (2 * h)
    fd2 = (p(x1, x2 + h) - p(x1, x2 - h)) / (2 * h)
    scale = max(1.0, p.coeff_norm()) * 100
    assert abs(g1(x1, x2) - fd1) <= 1e-6 * scale
    assert abs(g2(x1, x2) - fd2) <= 1e-6 * scale


def test_hessian_symmetry_and_values():
    p = parse_poly("x1^3*x2 + x2^4")
    H = hessian(p)
    assert H[0][1] == H[1][0]
    assert H[0][0](2.0, 1.0) == 12.0  # 6*x1*x2
    assert H[1][1](0.0, 1.0) == 12.0  # 12*x2^2


def test_resultant_vanishes_at_common_roots():
    # a and b share the point (1, 2)
    a = parse_poly("(x1 - 1)*(x2 - 2) + (x1 - 1)^2")
    b = parse_poly("(x1 - 1) + (x2 - 2)^2")
    r = resultant(a, b, axis=1)  # polynomial in x2
    val = np.polynomial.polynomial.polyval(2.0, r)
    assert abs(val) <= 1e-6 * max(1.0, np.max(np.abs(r)))


def test_resultant_nonzero_for_disjoint_curves():
    a = parse_poly("x1^2 + x2^2 - 1")
    b = parse_poly("x1^2 + x2^2 - 4")
    r = resultant(a, b, axis=1)
    assert not real_roots(r)


def test_real_roots_known():
    # (t - 1)(t + 2)(t^2 + 1)
    q = np.polynomial.polynomial.polyfromroots([1.0, -2.0, 1j, -1j]).real
    roots = real_roots(q)
    assert roots == pytest.approx([-2.0, 1.0], abs=1e-9)
    assert real_roots(q, interval=(0.0, 5.0)) == pytest.approx([1.0], abs=1e-9)


def test_real_roots_double_root():
    # a double root may come back as one merged root or a split pair,
    # but nothing spurious appears and both locations are hit
    q = np.polynomial.polynomial.polyfromroots([0.5, 0.5, -3.0]).real
    roots = real_roots(q)
    assert all(min(abs(r + 3.0), abs(r - 0.5)) <= 1e-6 for r in roots)
    assert any(abs(r + 3.0) <= 1e-6 for r in roots)
    assert any(abs(r - 0.5) <= 1e-6 for r in roots)


def test_proj_point_normalization():
    pt = ProjPoint((2.0, 4.0, -6.0))
    assert pt.normalized().coords == (1.0, 2.0, -3.0)
    assert not pt.at_infinity
    assert pt.to_affine() == (2.0, -3.0)
    inf = ProjPoint((0.0, 1.0, 0.0))
    assert inf.at_infinity
    with pytest.raises(ValueError):
        inf.to_affine()
    with pytest.raises(ValueError):
        ProjPoint((0.0, 0.0, 0.0))


def test_support_line_normalization():
    line = SupportLine((2.0, 0.0, -2.0))
    n = line.normalized()
    assert n.coeffs == pytest.approx((1.0, 0.0, -1.0))
    assert line(0.5, 0.25) == pytest.approx(1.5)
    assert n.close_to(SupportLine((4.0, 0.0, -4.0)).normalized())


def test_comparison_quartic():
    p = parse_poly("1 - x1^4 - x2^4")
    f = SupportLine((2.0, 0.0, -2.0))
    pf = comparison_quartic(f, p)
    # f(x) - p(x) at a sample point
    assert pf(0.5, 0.5) == pytest.approx((2 - 2 * 0.5) - p(0.5, 0.5))
