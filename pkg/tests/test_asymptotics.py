from fractions import Fraction as F

import numpy as np
import pytest

from schurlat import asymptotics as asy
from schurlat.lattice import LatticeSpec
from schurlat.partitions import boundary_from_positions

from conftest import HEXAGON_BLOCKS


def block_moment(blocks, p):
    return sum(((b ** (p + 1) - a ** (p + 1)) / (p + 1) for a, b in blocks), F(0))


def test_model_bookkeeping(hexagon_model, square_model):
    assert hexagon_model.square_count == 0 and hexagon_model.hexagon_count == 2
    assert square_model.c_values == ((F(1, 2), 1),)
    assert square_model.c_list(1) == [(0.5, 1)] and square_model.c_list(2) == []


@pytest.mark.parametrize("model_name", ["hexagon_model", "square_model"])
@pytest.mark.parametrize("kappa", [0.1, 0.5, 0.9])
def test_zeroth_moment_is_one(request, model_name, kappa):
    model = request.getfixturevalue(model_name)
    assert abs(asy.moment(model, 0, kappa) - 1) < 1e-9


@pytest.mark.parametrize("model_name", ["hexagon_model", "square_model"])
@pytest.mark.parametrize("kappa", [F(1, 5), F(1, 2), F(7, 10)])
@pytest.mark.parametrize("p", [1, 2, 4])
def test_contour_matches_residue_at_infinity(request, model_name, kappa, p):
    model = request.getfixturevalue(model_name)
    exact = float(asy.moment_exact(model, p, kappa))
    assert asy.moment(model, p, float(kappa)) == pytest.approx(exact, rel=1e-10)


def test_node_doubling(square_model):
    for p in range(5):
        a = asy.moment(square_model, p, 0.4, nodes=1024)
        b = asy.moment(square_model, p, 0.4, nodes=2048)
        assert abs(a - b) < 1e-9 * max(1.0, abs(b))


@pytest.mark.parametrize("p", range(5))
def test_small_kappa_recovers_boundary_moments(hexagon_model, p):
    target = block_moment(HEXAGON_BLOCKS, p)
    assert asy.moment_exact(hexagon_model, p, F(0)) == target
    assert asy.moment(hexagon_model, p, 1e-9) == pytest.approx(float(target), rel=1e-6)


def test_uniform_boundary_keeps_uniform_moments(uniform_model):
    for p in range(4):
        assert asy.moment_exact(uniform_model, p, F(1, 3)) == F(1, p + 1)


def test_singular_points_avoid_contour(hexagon_model):
    r = asy.contour_radius(hexagon_model)
    assert 0 < r <= 0.5
    for s in asy.singular_points(hexagon_model):
        assert abs(abs(s - 1) - r) > 1e-3


def test_moment_rejects_bad_arguments(hexagon_model):
    with pytest.raises(ValueError):
        asy.moment(hexagon_model, 1, 1.2)
    with pytest.raises(ValueError):
        asy.moment(hexagon_model, -1, 0.5)


@pytest.mark.parametrize("model_name", ["hexagon_model", "square_model"])
@pytest.mark.parametrize("kappa", [0.3, 0.6])
def test_density_profile_bounds(request, model_name, kappa):
    model = request.getfixturevalue(model_name)
    prof = asy.density_profile(model, kappa, points=3000)
    assert np.all(prof.f >= -1e-9) and np.all(prof.f <= 1 + 1e-9)
    assert prof.pairs.max() <= 1
    # thin frozen stretches limit the trapezoid rule to grid accuracy
    assert np.trapezoid(prof.f, prof.x) == pytest.approx(1.0, abs=0.02)


@pytest.mark.parametrize("model_name", ["hexagon_model", "square_model"])
def test_level_measure_moments_match_contour(request, model_name):
    model = request.getfixturevalue(model_name)
    level = asy.LevelMeasure(model, 0.5)
    assert level.cdf(level.hi) == pytest.approx(1.0, abs=1e-10)
    for p in range(5):
        assert level.moment(p) == pytest.approx(asy.moment(model, p, 0.5), rel=1e-8)


def test_cdf_interpolant_matches_quadrature(hexagon_model):
    level = asy.LevelMeasure(hexagon_model, 0.5)
    for u in (3.0, 10.0, 18.0, 22.0):
        direct = level.integrate(np.ones_like, upper=u)
        assert level.cdf(u) == pytest.approx(direct, abs=1e-9)


def test_height_limit_slopes_and_ends(hexagon_model):
    kappa = 0.4
    level = asy.LevelMeasure(hexagon_model, kappa)
    chis = np.linspace(0.0, 14.0, 141)
    h = np.array([asy.height_limit(hexagon_model, c, kappa, level) for c in chis])
    slopes = np.diff(h) / np.diff(chis)
    assert slopes.min() >= -4 - 1e-6 and slopes.max() <= 1e-6


def test_root_system_crossings_are_sorted(square_model):
    sysm = asy.root_system(square_model, 1, 0.5)
    pts = sysm.crossing_points()
    assert pts == sorted(pts)
    assert len(sysm.roots(3.0)) == sysm.polynomial(3.0).order


def test_finite_size_trend_is_monotone(uniform_model):
    specs = []
    for N in (2, 4, 6):
        h = N // 2
        pos = tuple(range(1, h + 1)) + tuple(range(N + 1, N + h + 1))
        specs.append(LatticeSpec(boundary_from_positions(pos), (1,) * N, (F(1),) * N, (None,) * N))
    model = asy.ModelAsymptotics.from_blocks(((F(0), F(1, 2)), (F(1), F(3, 2))), 1)
    rows, monotone = asy.finite_size_trend(model, specs, 0.5, 1)
    assert [float(r.exact) for r in rows] == pytest.approx([0.5, 0.75, 5 / 6])
    assert monotone
