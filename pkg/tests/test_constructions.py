import itertools
import math

import numpy as np
import pytest

from minkarr import geometry as geo
from minkarr.arrangement import verify
from minkarr.bounds import cardinality_cap, upper_bound
from minkarr.constructions import (
    ConstructionError,
    axis_extension,
    four_touching_homothets,
    hexagon_seven,
    largest_inner_homothet,
    parallelotope_grid,
    sphere_code_arrangement,
)
from minkarr.io import dump_arrangement

from conftest import random_polygons


@pytest.mark.parametrize("d", range(1, 7))
def test_grid_counts(d):
    arr = parallelotope_grid(d)
    assert len(arr) == 3 ** d
    assert verify(arr, 1e-9).valid
    assert len(arr) == cardinality_cap(d, 0.0)


def test_grid_small_cases():
    assert sorted(parallelotope_grid(1).centers[:, 0]) == [-1, 0, 1]
    C = parallelotope_grid(2).centers
    D = [np.abs(a - b).max() for a, b in itertools.combinations(C, 2)]
    assert len(D) == 36 and set(D) == {1.0, 2.0}
    with pytest.raises(ValueError):
        parallelotope_grid(7)


def test_hexagon_seven_square(square):
    arr = hexagon_seven(square)
    got = {tuple(np.round(c, 9) + 0.0) for c in arr.centers}
    assert got == {(0, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1), (1, 0)}


def test_hexagon_seven_disc(disc):
    arr = hexagon_seven(disc)
    C = arr.centers
    assert np.allclose(np.linalg.norm(C[1:], axis=1), 1.0)
    dist = {round(float(np.linalg.norm(a - b)), 9) for a, b in itertools.combinations(C, 2)}
    assert dist == {1.0, round(math.sqrt(3), 9), 2.0}


@pytest.mark.parametrize("body", [geo.square(), geo.hexagon(), geo.disc(),
                                  geo.ConvexBody.affine_ball([[1.5, 0.4], [0.1, 0.6]])]
                         + random_polygons(10, seed=2))
def test_hexagon_seven_any_body(body):
    arr = hexagon_seven(body)
    assert len(arr) == 7 and verify(arr, 1e-6).valid


def test_hexagon_seven_needs_plane():
    with pytest.raises(geo.BodyError):
        hexagon_seven(geo.cube(3))


@pytest.mark.parametrize("d", range(2, 7))
@pytest.mark.parametrize("kind", ["cube", "ball"])
def test_axis_extension(d, kind):
    body = geo.cube(d) if kind == "cube" else geo.ConvexBody.ball(d)
    arr = axis_extension(body)
    assert len(arr) == 2 * d + 3
    assert verify(arr, 1e-6).valid


def test_axis_extension_examples():
    arr = axis_extension(geo.cube(3))
    assert {tuple(c) for c in arr.centers[7:]} == {(0, 0, 1), (0, 0, -1)}
    arr = axis_extension(geo.ConvexBody.ball(3))
    G = np.linalg.norm(arr.centers[7:, None, :] - arr.centers[None, 1:7, :], axis=-1)
    assert np.allclose(G, math.sqrt(2))
    planar = axis_extension(geo.hexagon())
    assert np.array_equal(planar.centers, hexagon_seven(geo.hexagon()).centers)


def _planar_ring(body):
    w, v = geo.inscribe_hexagon_by_gauge(lambda x: geo.gauge(body, np.append(x, 0.0)))
    return np.column_stack([geo.hexagon_vertices(w, v), np.zeros(6)])


def test_axis_extension_reoptimizes_direction():
    # sheared ellipsoid: the boundary point along e3 sits too close to the planar ring
    body = geo.ConvexBody.affine_ball([[1.0, 0.0, 0.9], [0.0, 1.0, 0.0], [0.0, 0.0, 0.3]])
    e3 = np.array([0.0, 0.0, 1.0])
    p = e3 / geo.gauge(body, e3)
    assert geo.gauge(body, p - _planar_ring(body)).min() < 1.0
    arr = axis_extension(body)
    assert len(arr) == 9 and verify(arr, 1e-6).valid
    assert not np.allclose(arr.centers[7], p)


def test_four_touching_disc(disc):
    arr = four_touching_homothets(disc)
    assert len(arr) == 4 and arr.mu == 1.0
    assert np.allclose(arr.centers[:3], [[0, 0], [2, 0], [1, math.sqrt(3)]], atol=1e-9)
    assert np.allclose(arr.centers[3], [1, 1 / math.sqrt(3)], atol=1e-7)
    assert arr.ratios[3] == pytest.approx(2 / math.sqrt(3) - 1, abs=1e-6)


def _touching_errors(arr):
    errs = []
    for (i, a), (j, b) in itertools.combinations(enumerate(arr.items), 2):
        errs.append(abs(geo.gauge(arr.body, a.center - b.center) - (a.ratio + b.ratio)))
    return errs


@pytest.mark.parametrize("body", [geo.square(), geo.hexagon(), geo.regular_polygon(8)]
                         + random_polygons(6, seed=5))
def test_four_touching_polygons(body):
    arr = four_touching_homothets(body)
    assert len(arr) == 4
    assert verify(arr, 1e-6).valid
    assert max(_touching_errors(arr)) <= 1e-6


def test_four_touching_square_shares_a_point(square):
    arr = four_touching_homothets(square)
    assert np.allclose(arr.ratios, 1.0)
    # all four translates contain the common contact point
    p = arr.centers[1] / 2  # x2 for the chosen direction
    assert all(geo.gauge(square, p - c) <= 1 + 1e-9 for c in arr.centers)


def test_four_touching_hexagon_inner_ratio(hexagon):
    arr = four_touching_homothets(hexagon)
    assert arr.ratios[3] == pytest.approx(1 / 3, abs=1e-6)


def test_largest_inner_homothet_disc(disc):
    t, lam = largest_inner_homothet(disc, np.array([[0, 0], [2, 0], [1, math.sqrt(3)]]))
    assert lam == pytest.approx(2 / math.sqrt(3) - 1, abs=1e-9)


def test_sphere_code_circle():
    for seed in range(10):
        arr = sphere_code_arrangement(2, 0.0, 10_000, seed)
        # chord >= 1 means arc >= 60 degrees; a greedy jam leaves every gap < 120 degrees
        assert 4 <= len(arr) <= 6
        ang = np.sort(np.arctan2(arr.centers[:, 1], arr.centers[:, 0]))
        gaps = np.diff(np.concatenate([ang, [ang[0] + 2 * math.pi]]))
        assert gaps.min() >= math.pi / 3 - 1e-12
        assert gaps.max() < 2 * math.pi / 3 + 0.01
        assert verify(arr).valid


@pytest.mark.parametrize("d", range(2, 9))
def test_sphere_code_respects_bound_above_threshold(d):
    mu = 0.5
    arr = sphere_code_arrangement(d, mu, 20_000, seed=d)
    assert verify(arr).valid
    assert len(arr) <= upper_bound(d, mu)


def test_sphere_code_deterministic():
    a = sphere_code_arrangement(5, 0.2, 5000, seed=3)
    b = sphere_code_arrangement(5, 0.2, 5000, seed=3)
    assert dump_arrangement(a) == dump_arrangement(b)
    c = sphere_code_arrangement(5, 0.2, 5000, seed=4)
    assert dump_arrangement(a) != dump_arrangement(c)


def test_constructions_deterministic():
    for make in (lambda: hexagon_seven(geo.disc()), lambda: axis_extension(geo.cube(4)),
                 lambda: four_touching_homothets(geo.regular_polygon(8))):
        assert dump_arrangement(make()) == dump_arrangement(make())


def test_no_construction_exceeds_bound():
    arrs = [hexagon_seven(geo.disc()), four_touching_homothets(geo.disc()),
            axis_extension(geo.cube(3)), parallelotope_grid(3)]
    for arr in arrs:
        assert len(arr) <= cardinality_cap(arr.body.dim, arr.mu)


def test_construction_error_is_runtime_error():
    assert issubclass(ConstructionError, RuntimeError)
