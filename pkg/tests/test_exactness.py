import math

import numpy as np
import pytest

from quartichull import curves
from quartichull.exactness import (
    check_concave,
    curve_is_bounded,
    curve_points,
    find_singularities,
    gradient_exactness,
    quartic_minimizer,
    sweep_exactness,
    tangent_support,
)
from quartichull.poly import BivarPoly, comparison_quartic, parse_poly
from quartichull.sos import nonneg_quartic

from conftest import sweep_verdict


def test_check_concave():
    assert check_concave(curves.lookup("fermat").implicit)
    assert check_concave(parse_poly("1 - x1^2 - x2^2"))
    assert not check_concave(curves.lookup("bean").implicit)
    assert not check_concave(parse_poly("x1^2 + x2^2 - 1"))


def test_curve_is_bounded():
    for name in ("egg", "bean", "lemniscate", "folium", "fermat", "waterdrop"):
        assert curve_is_bounded(curves.lookup(name).implicit), name
    assert not curve_is_bounded(parse_poly("x2 - x1^2"))


def test_curve_points_lie_on_curve():
    for name in ("egg", "folium"):
        p = curves.lookup(name).implicit
        pts = curve_points(p)
        assert len(pts) > 500
        vals = np.abs(p.eval_many(pts[:, 0], pts[:, 1]))
        assert np.max(vals) <= 1e-6 * max(1.0, p.coeff_norm())


def test_tangent_support_known_values():
    egg = curves.lookup("egg").implicit
    res = tangent_support(egg, (0.0, 1.0))
    assert res.value == pytest.approx(1.0, abs=1e-8)
    assert res.points[0] == pytest.approx((0.0, 1.0), abs=1e-6)
    bean = curves.lookup("bean").implicit
    assert tangent_support(bean, (-1.0, 0.0)).value == pytest.approx(0.0, abs=1e-8)
    assert tangent_support(bean, (1.0, 0.0)).value == pytest.approx(1.0, abs=1e-6)
    fermat = curves.lookup("fermat").implicit
    assert tangent_support(fermat, (1.0, 0.0)).value == pytest.approx(1.0, abs=1e-8)


def test_tangent_support_unbounded():
    res = tangent_support(parse_poly("x2 - x1^2"), (0.0, 1.0))
    assert res.value == math.inf


def test_find_singularities_residuals():
    for record in curves.registry():
        found = find_singularities(record.implicit)
        assert len(found) == len(record.singularities), record.name
        for s in found:
            assert s.residual_p <= 1e-8
            assert s.residual_grad <= 1e-8
        for expected, _ in record.singularities:
            assert any(s.location.close_to(expected, tol=1e-6) for s in found), \
                record.name


def test_verdicts_match_registry():
    for record in curves.registry():
        verdict, _ = sweep_verdict(record.name)
        assert verdict.verdict == record.expected_verdict, record.name


def test_nonsmooth_witness_fails_nonnegativity(bean_verdict):
    # a witness line certifies non-exactness: its comparison quartic must
    # take negative values
    verdict, _ = bean_verdict
    p = curves.lookup("bean").implicit
    assert verdict.witness is not None
    pf = comparison_quartic(verdict.witness, p)
    assert not nonneg_quartic(pf)


def test_singularity_classifications(bean_verdict, lemniscate_verdict):
    verdict, _ = bean_verdict
    assert verdict.singular_points[0].classification == "on_boundary"
    verdict, _ = lemniscate_verdict
    assert verdict.singular_points[0].classification == "interior"


def test_sweep_rows_cover_the_circle(egg_verdict):
    verdict, _ = egg_verdict
    angles = [row[0] for row in verdict.sweep]
    assert len(angles) == 360
    assert angles[0] == 0.0
    assert max(angles) < 2 * math.pi
    # all margins nonnegative up to tolerance for an exact curve
    assert min(row[1] for row in verdict.sweep) >= -1e-6


def test_gradient_check_agrees_with_sweep():
    egg = curves.lookup("egg").implicit
    # inward normal at the top point (0, 1): grad p there
    g = (egg.diff(1)(0.0, 1.0), egg.diff(2)(0.0, 1.0))
    res = gradient_exactness(egg, g)
    assert res.passed
    assert min(res.values) >= -1e-8

    folium = curves.lookup("folium").implicit
    res = gradient_exactness(folium, (0.75, 3 * math.sqrt(2) / 2))
    assert not res.passed
    assert min(res.values) < -0.1


def test_quartic_minimizer():
    q = parse_poly("(x1 - 1)^2 + (x2 + 2)^2 - 3")
    x, val = quartic_minimizer(q)
    assert val == pytest.approx(-3.0, abs=1e-8)
    assert tuple(x) == pytest.approx((1.0, -2.0), abs=1e-6)


def test_concave_fast_path():
    verdict = sweep_exactness(curves.lookup("fermat").implicit, n=16)
    assert verdict.verdict == "Exact"
    assert verdict.evidence.get("concave") is True


def test_concave_unbounded_curve_is_exact():
    # concavity implies exactness even for unbounded hulls
    verdict = sweep_exactness(parse_poly("x2 - x1^2"), n=16)
    assert verdict.verdict == "Exact"


def test_unbounded_nonconcave_curve_is_inconclusive():
    verdict = sweep_exactness(parse_poly("x1*x2 - 1"), n=16)
    assert verdict.verdict == "Inconclusive"
