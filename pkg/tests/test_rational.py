from fractions import Fraction

import numpy as np
import pytest

from quartichull import curves
from quartichull.rational import (
    RationalParam,
    fermat_block_membership,
    format_affine,
    hankel_representation,
    moment_relations,
    point_mass_moments,
    rational_membership,
    validate_param,
)


def test_param_validation_against_implicit():
    bean = curves.lookup("bean")
    folium = curves.lookup("folium")
    assert validate_param(bean.param, bean.implicit)
    assert validate_param(folium.param, folium.implicit)
    # mismatched pairing is rejected
    assert not validate_param(folium.param, bean.implicit)


def test_param_points_lie_on_curve():
    for name in ("bean", "folium"):
        record = curves.lookup(name)
        for t in np.linspace(-5, 5, 41):
            x = record.param.point(t)
            assert abs(record.implicit(*x)) <= 1e-8 * max(1.0, sum(abs(v) for v in x)) ** 4


def test_param_constructor_validation():
    with pytest.raises(ValueError):
        RationalParam((0, 0, 0, 0, 0), (1,), (0, 1))
    with pytest.raises(ValueError):
        RationalParam((1, 0, 0, 0, 0, 1), (1,), (0, 1))


def test_point_mass_moments():
    y = point_mass_moments(2.0)
    assert list(y) == [1.0, 2.0, 4.0, 8.0, 16.0]


def test_moment_relations_shape():
    rel = moment_relations(curves.lookup("bean").param)
    assert len(rel) == 3 and all(len(r) == 5 for r in rel)
    # x0 relation for the bean: y0 + y2 + y4
    assert rel[0] == (1, 0, 1, 0, 1)


def test_folium_matrix_entries():
    rep = hankel_representation(curves.lookup("folium").param)
    assert rep.retained == ("y0", "y1")
    assert rep.scale == 2
    got = [[format_affine(e) for e in row] for row in rep.scaled_entries]
    assert got == [
        ["2*y0", "2*y1", "x1 + y0"],
        ["2*y1", "x1 + y0", "x2 + y1"],
        ["x1 + y0", "x2 + y1", "2*x0 - 2*x1 - 4*y0"],
    ]


def test_bean_matrix_entries():
    rep = hankel_representation(curves.lookup("bean").param)
    assert rep.retained == ("y0", "y1")
    assert rep.scale == 1
    got = [[format_affine(e) for e in row] for row in rep.scaled_entries]
    assert got == [
        ["y0", "y1", "x1 - y0"],
        ["y1", "x1 - y0", "x2 - y1"],
        ["x1 - y0", "x2 - y1", "x0 - x1"],
    ]


def test_degenerate_param_rejected():
    # all three components proportional: rank-1 relations
    degenerate = RationalParam((1, 0, 1, 0, 0), (2, 0, 2, 0, 0), (3, 0, 3, 0, 0))
    with pytest.raises(ValueError):
        hankel_representation(degenerate)


def test_point_mass_soundness():
    # every curve point is inside its own hull representation
    for name in ("bean", "folium"):
        record = curves.lookup(name)
        rep = hankel_representation(record.param)
        worst = 0.0
        for t in np.linspace(-8, 8, 100):
            x = record.param.point(t)
            res = rational_membership(rep, x)
            worst = min(worst, res.margin)
            assert res.inside, (name, t)
        assert worst >= -1e-7


def test_membership_known_points():
    bean = curves.lookup("bean")
    rep = hankel_representation(bean.param)
    assert rational_membership(rep, (2 / 3, 2 / 3)).inside
    res = rational_membership(rep, (-0.2, 0.0))
    assert not res.inside
    assert res.margin < -1e-3

    folium = curves.lookup("folium")
    repf = hankel_representation(folium.param)
    assert rational_membership(repf, (0.0, 0.0)).inside
    assert not rational_membership(repf, (1.0, 1.0)).inside


def test_matrix_at_is_psd_inside():
    bean = curves.lookup("bean")
    rep = hankel_representation(bean.param)
    res = rational_membership(rep, (0.5, 0.1))
    assert res.inside
    M = rep.matrix_at((0.5, 0.1), res.liftings)
    assert np.linalg.eigvalsh(M)[0] >= -1e-6


def test_fermat_blocks():
    assert fermat_block_membership((0.0, 0.0)).inside
    assert fermat_block_membership((1.0, 0.0)).inside
    res = fermat_block_membership((1.0, 1.0))
    assert not res.inside
    assert res.margin == pytest.approx(1 - np.sqrt(2.0), abs=1e-12)
    # the margin is exact: boundary points sit at zero
    s = (1.0 / (0.6**4 + 1.0)) ** 0.25
    onb = fermat_block_membership((s * 0.6, s))
    assert abs(onb.margin) <= 1e-12


def test_format_affine():
    assert format_affine({"x0": Fraction(1), "y0": Fraction(-2)}) == "x0 - 2*y0"
    assert format_affine({}) == "0"
    assert format_affine({"x1": Fraction(1, 2)}) == "1/2*x1"
