import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from compopnum.symbols import (
    CUSP_DIAMETER,
    AffineMap,
    CoefficientMap,
    ComposedMap,
    CuspMap,
    DomainError,
    GridSpec,
    MoebiusMap,
    builtin_contractions,
    cusp_halfdisk_map,
    evaluate,
    evaluate_boundary,
    derivative,
    parse_symbol,
    pseudo_hyperbolic_sup,
)

ALL_SYMBOLS = [
    AffineMap(0.5),
    AffineMap(1.0),
    AffineMap(0.7, theta=math.pi / 3),
    MoebiusMap(0.3),
    MoebiusMap(0.2 - 0.4j),
    CuspMap(),
    ComposedMap(AffineMap(0.9), CuspMap()),
    CoefficientMap((0.0, 0.5, 0.25), univalent=True, sup_norm=0.75),
]


def disk_points(n, seed=0):
    g = np.random.default_rng(seed)
    return np.sqrt(g.random(n)) * 0.999 * np.exp(2j * np.pi * g.random(n))


def test_cusp_fixes_origin():
    assert abs(evaluate(CuspMap(), 0.0)) <= 1e-12


def test_cusp_halfdisk_corner_values():
    assert abs(cusp_halfdisk_map(0.0) - (math.sqrt(2) - 1)) <= 1e-12
    assert abs(cusp_halfdisk_map(1j) - (-1j)) <= 1e-8
    assert abs(cusp_halfdisk_map(-1j) - 1j) <= 1e-8
    assert abs(cusp_halfdisk_map(-1.0) - 1.0) <= 1e-12
    assert abs(cusp_halfdisk_map(1.0)) <= 1e-12


def test_cusp_diameter_constant():
    assert CUSP_DIAMETER == pytest.approx(1.5610998523391801, abs=1e-12)
    assert 1.0 < CUSP_DIAMETER < 2.0


def test_cusp_at_minus_one():
    val = evaluate_boundary(CuspMap(), -1.0)
    assert abs(val - (1.0 - CUSP_DIAMETER)) <= 1e-12
    assert val == pytest.approx(-0.56109985, abs=1e-8)


def test_affine_evaluate():
    assert evaluate(AffineMap(0.5), 0.2) == pytest.approx(0.1)


def test_domain_error_on_boundary():
    with pytest.raises(DomainError):
        evaluate(CuspMap(), 1.0)
    with pytest.raises(DomainError):
        evaluate(AffineMap(0.5), 1.2)


@pytest.mark.parametrize("s", ALL_SYMBOLS, ids=lambda s: s.spec_string())
def test_maps_into_disk(s):
    z = disk_points(10_000)
    assert np.all(np.abs(evaluate(s, z)) < 1.0)


@pytest.mark.parametrize("s", ALL_SYMBOLS, ids=lambda s: s.spec_string())
def test_sup_norm_hint_respected(s):
    if s.sup_norm_hint is None or s.sup_norm_hint >= 1.0:
        pytest.skip("no strict hint")
    z = disk_points(20_000, seed=3)
    assert np.abs(evaluate(s, z)).max() <= s.sup_norm_hint + 1e-10


@pytest.mark.parametrize("s", ALL_SYMBOLS, ids=lambda s: s.spec_string())
def test_origin_flag(s):
    if s.fixes_origin:
        assert abs(evaluate(s, 0.0)) <= 1e-12


def test_composition_agrees_pointwise():
    comp = ComposedMap(MoebiusMap(0.3), AffineMap(0.6))
    z = disk_points(500, seed=1)
    direct = evaluate(MoebiusMap(0.3), evaluate(AffineMap(0.6), z))
    assert np.abs(evaluate(comp, z) - direct).max() <= 1e-12


@pytest.mark.parametrize("s", ALL_SYMBOLS, ids=lambda s: s.spec_string())
def test_derivative_matches_finite_differences(s):
    # central differences, away from the cusp point
    z = 0.7 * disk_points(200, seed=2)
    h = 1e-5
    fd = (np.asarray(evaluate(s, z + h)) - np.asarray(evaluate(s, z - h))) / (2 * h)
    dv = np.asarray(derivative(s, z))
    denom = np.maximum(np.abs(fd), 1e-8)
    assert (np.abs(dv - fd) / denom).max() <= 1e-6


def test_moebius_derivative_at_origin():
    assert derivative(MoebiusMap(0.3), 0.0) == pytest.approx(-(1 - 0.09), abs=1e-12)


def test_affine_derivative_constant():
    z = disk_points(50, seed=4)
    assert np.abs(derivative(AffineMap(0.5), z) - 0.5).max() == 0.0


def test_pseudo_hyperbolic_values():
    assert pseudo_hyperbolic_sup(AffineMap(0.5)) == pytest.approx(0.5, abs=1e-6)
    assert pseudo_hyperbolic_sup(AffineMap(1.0)) == pytest.approx(1.0, abs=1e-12)
    assert pseudo_hyperbolic_sup(MoebiusMap(0.3)) == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("s", ALL_SYMBOLS, ids=lambda s: s.spec_string())
def test_schwarz_pick_bound(s):
    assert pseudo_hyperbolic_sup(s, GridSpec(depth=10)) <= 1.0 + 1e-10


def test_pseudo_hyperbolic_monotone_in_depth():
    vals = [pseudo_hyperbolic_sup(CuspMap(), GridSpec(depth=d)) for d in (4, 8, 12)]
    assert vals[0] <= vals[1] <= vals[2]


@settings(max_examples=200, deadline=None)
@given(
    re=st.floats(-0.99, 0.99),
    im=st.floats(-0.99, 0.99),
)
def test_cusp_image_in_disk_property(re, im):
    z = complex(re, im)
    if abs(z) >= 0.999:
        return
    w = evaluate(CuspMap(), z)
    assert abs(w) < 1.0


def test_parse_round_trip():
    for spec in (
        "cusp",
        "affine:r=0.5,theta=0.0",
        "moebius:u=0.3+0i",
        "compose(affine:r=0.9,theta=0.0,cusp)",
        "coeffs:[0.0,0.5,0.25]",
    ):
        s = parse_symbol(spec)
        assert parse_symbol(s.spec_string()).spec_string() == s.spec_string()


def test_parse_rejects_garbage():
    for bad in ("nope", "affine:q=1", "moebius:u=2.0+0i", "compose(cusp)", "coeffs:[]"):
        with pytest.raises(ValueError):
            parse_symbol(bad)


def test_builtin_contractions_are_contractions():
    cats = builtin_contractions()
    assert len(cats) >= 5
    z = disk_points(5_000, seed=5)
    for s in cats:
        assert s.sup_norm_hint is not None and s.sup_norm_hint < 1.0
        assert np.abs(evaluate(s, z)).max() <= s.sup_norm_hint + 1e-10
        assert s.fixes_origin
