import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from minkarr import geometry as geo
from minkarr.arrangement import (
    DISJOINT,
    KERNEL_OVERLAP,
    Arrangement,
    CertificateError,
    Homothet,
    contains,
    touch_point,
    triple_point_check,
    verify,
    volume_certificate,
)
from minkarr.constructions import hexagon_seven, parallelotope_grid

GRID9 = [list(p) for p in itertools.product([-1, 0, 1], repeat=2)]


def test_verify_examples(disc, square):
    assert verify(Arrangement.translates(disc, [[0, 0], [2, 0]], mu=1.0)).valid
    for mu in (0.0, 0.5, 1.0):
        r = verify(Arrangement.translates(disc, [[0, 0], [2.1, 0]], mu=mu))
        assert not r.valid and r.violations[0].kind == DISJOINT
    r = verify(Arrangement.translates(disc, [[0, 0], [0.9, 0]], mu=0.0))
    assert [v.kind for v in r.violations] == [KERNEL_OVERLAP]
    assert r.violations[0].measured_gauge == pytest.approx(0.9)
    grid = Arrangement.translates(square, GRID9, mu=0.0)
    assert len(grid) == 9 and verify(grid).valid


def test_grid_pairwise_distances_are_one_or_two(square):
    C = np.array(GRID9, float)
    for a, b in itertools.combinations(C, 2):
        assert np.abs(a - b).max() in (1.0, 2.0)
        assert geo.gauge(square, a - b) == np.abs(a - b).max()


def test_report_flags_and_ordering(disc):
    arr = Arrangement(disc, 0.0, [Homothet([0, 0], 1.0), Homothet([5, 0], 1.0),
                                  Homothet([0.1, 0], 1.0)])
    r = verify(arr)
    assert [(v.i, v.j) for v in r.violations] == sorted((v.i, v.j) for v in r.violations)
    assert r.translates_only and r.all_ratios_one
    r2 = verify(Arrangement(disc, 0.0, [Homothet([0, 0], 2.0), Homothet([3, 0], 2.0)]))
    assert r2.translates_only and not r2.all_ratios_one


def test_homothet_threshold_uses_both_ratios(disc):
    # lambda 1 at origin, lambda 3 at distance g: need max(1 + 3 mu, 3 + mu) <= g <= 4
    big = Homothet([3.4, 0], 3.0)
    arr = Arrangement(disc, 0.5, [Homothet([0, 0], 1.0), big])
    r = verify(arr)
    assert r.violations[0].kind == KERNEL_OVERLAP
    assert r.violations[0].threshold == pytest.approx(3.5)
    assert verify(Arrangement(disc, 0.5, [Homothet([0, 0], 1.0), Homothet([3.6, 0], 3.0)])).valid


def test_dimension_mismatch_rejected(disc):
    with pytest.raises(geo.BodyError):
        Arrangement.translates(disc, [[0, 0, 0]])


def test_invalid_values_rejected(disc):
    with pytest.raises(ValueError):
        Homothet([0, 0], 0.0)
    with pytest.raises(ValueError):
        Arrangement.translates(disc, [[0, 0]], mu=1.5)


def _random_arrangement(body, seed, n=5):
    rng = np.random.default_rng(seed)
    C = rng.uniform(-2, 2, size=(n, 2))
    lam = rng.uniform(0.5, 2.0, size=n)
    return Arrangement(body, float(rng.uniform()), [Homothet(c, l) for c, l in zip(C, lam)])


@settings(max_examples=80, deadline=None)
@given(seed=st.integers(0, 10**6), mu2=st.floats(0, 1))
def test_monotone_in_mu(seed, mu2):
    body = geo.regular_polygon(8)
    arr = _random_arrangement(body, seed, n=3)
    hi, lo = max(arr.mu, mu2), min(arr.mu, mu2)
    if verify(arr.with_mu(hi)).valid:
        assert verify(arr.with_mu(lo)).valid


@settings(max_examples=80, deadline=None)
@given(seed=st.integers(0, 10**6), s=st.floats(0.25, 4.0),
       shift=st.tuples(st.floats(-5, 5), st.floats(-5, 5)))
def test_scale_invariance(seed, s, shift):
    body = geo.hexagon()
    arr = _random_arrangement(body, seed, n=4)
    scaled = Arrangement(body, arr.mu, [Homothet(s * h.center + np.array(shift), s * h.ratio)
                                        for h in arr.items])
    a, b = verify(arr, 1e-9), verify(scaled, 1e-9 * s)
    assert [(v.i, v.j, v.kind) for v in a.violations] == [(v.i, v.j, v.kind) for v in b.violations]


def test_touch_point_examples(disc, square):
    p = touch_point(disc, Homothet([0, 0]), Homothet([2, 0]))
    assert np.allclose(p, [1, 0])
    p = touch_point(disc, Homothet([0, 0], 1.0), Homothet([4, 0], 3.0))
    assert np.allclose(p, [1, 0])
    hi, hj = Homothet([0, 0]), Homothet([2, 0])
    p = touch_point(square, hi, hj)
    assert np.allclose(p, [1, 0])
    for h in (hi, hj):
        assert geo.gauge(square, (p - h.center) / h.ratio) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        touch_point(disc, Homothet([0, 0]), Homothet([2.5, 0]))


@settings(max_examples=60, deadline=None)
@given(theta=st.floats(0, 2 * math.pi), li=st.floats(0.1, 3), lj=st.floats(0.1, 3))
def test_touch_point_on_both_boundaries(theta, li, lj):
    body = geo.regular_polygon(6, phase=0.2)
    u = geo.boundary_point_2d(body, theta).point
    hi, hj = Homothet([0.3, -0.2], li), Homothet(np.array([0.3, -0.2]) + (li + lj) * u, lj)
    p = touch_point(body, hi, hj, tol=1e-9)
    for h in (hi, hj):
        assert geo.gauge(body, (p - h.center) / h.ratio) == pytest.approx(1.0, abs=1e-9)


def test_triple_point_examples(disc, square):
    tri = Arrangement.translates(disc, [[0, 0], [2, 0], [1, math.sqrt(3)]], mu=1.0)
    assert triple_point_check(tri) == []
    # touch point to the third center is sqrt(3) > 1
    p = touch_point(disc, tri.items[0], tri.items[1])
    assert np.linalg.norm(p - tri.items[2].center) == pytest.approx(math.sqrt(3))
    four = Arrangement.translates(square, [[1, 1], [-1, 1], [-1, -1], [1, -1]], mu=1.0)
    hits = triple_point_check(four)
    assert len(hits) == 4
    for *_, p in hits:
        assert all(contains(square, h, p) for h in four.items)
    assert triple_point_check(Arrangement.translates(disc, [[0, 0], [2, 0]], mu=1.0)) == []
    with pytest.raises(ValueError):
        triple_point_check(Arrangement.translates(disc, [[0, 0], [1, 0]], mu=1.0))


def test_certificate_grid_is_tight(square):
    lhs, mid, rhs = volume_certificate(parallelotope_grid(2), 2.0)
    for x in (lhs, mid, rhs):
        assert x == pytest.approx(9.0, abs=1e-9)


def test_certificate_single_translate(square, disc):
    lhs, mid, rhs = volume_certificate(Arrangement.translates(square, [[0, 0]]), 2.0)
    assert (lhs, mid, rhs) == pytest.approx((1.0, 1.0, 9.0))
    lhs, mid, rhs = volume_certificate(Arrangement.translates(disc, [[0, 0]]), 2.0)
    assert lhs == pytest.approx(mid) and rhs == pytest.approx(9 * lhs)


def test_certificate_hexagon_seven_on_regular_hexagon(hexagon):
    # w at angle 0 is a vertex, so the inscribed hexagon is K itself and the
    # hull of the half-bodies is exactly 3/2 K: the right inequality is tight
    lhs, mid, rhs = volume_certificate(hexagon_seven(hexagon), 2.0)
    assert lhs < mid - 1e-3
    assert mid == pytest.approx(rhs, abs=1e-9)


@pytest.mark.parametrize("phase", [math.pi / 6, 0.2, 0.45])
def test_certificate_hexagon_seven_strict_right_when_rotated(phase):
    lhs, mid, rhs = volume_certificate(hexagon_seven(geo.regular_polygon(6, phase=phase)), 2.0)
    assert lhs < mid < rhs - 1e-3


def test_certificate_errors(square):
    with pytest.raises(ValueError):
        volume_certificate(Arrangement.translates(square, [[0, 0], [0.5, 0]]), 2.0)
    with pytest.raises(geo.BodyError):
        volume_certificate(parallelotope_grid(3), 2.0)
    with pytest.raises(ValueError):
        volume_certificate(Arrangement(square, 0.0, [Homothet([0, 0], 2.0)]), 2.0)


def test_certificate_never_breaks_on_random_valid_sets():
    rng = np.random.default_rng(3)
    for body in (geo.square(), geo.hexagon(), geo.disc(), geo.regular_polygon(10)):
        for _ in range(30):
            C = [[0.0, 0.0]]
            for c in rng.uniform(-2, 2, size=(200, 2)):
                g = geo.gauge(body, np.array(C) - c)
                if np.all((g >= 1) & (g <= 2)):
                    C.append(list(c))
            arr = Arrangement.translates(body, C)
            assert verify(arr).valid
            try:
                volume_certificate(arr, 2.0)
            except CertificateError as exc:  # would falsify the area inequality
                pytest.fail(str(exc))
