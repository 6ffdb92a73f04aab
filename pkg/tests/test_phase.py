import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import OPEN_BAND
from pinfilab import analytics as an
from pinfilab.errors import InfeasibleBand, InsufficientDepth, InvalidGridSpec
from pinfilab.params import NormalizedParams
from pinfilab.phase import (
    BAND_CASES,
    CoarseZone,
    GridSpec,
    Zone,
    classify,
    classify_coarse,
    sample_curves,
    stable_segment,
    sweep,
)

G_SS_1_3 = 0.8445918544185327
GRID_SPEC = GridSpec(0.1, 2.0, 200, 0.0, 1.5, 200)


def test_classify_examples():
    assert classify(0.5, 0.3, OPEN_BAND) is Zone.aB
    assert classify(1.15, 0.9, OPEN_BAND) is Zone.aG
    assert classify(1.5, 0.5, OPEN_BAND) is Zone.aE


def test_classify_each_zone():
    assert classify(0.5, 0.9, OPEN_BAND) is Zone.aC
    assert classify(0.8, 0.0, OPEN_BAND) is Zone.aA
    assert classify(0.8, 4.0, OPEN_BAND) is Zone.aA
    assert classify(1.15, 0.5, OPEN_BAND) is Zone.aD
    assert classify(1.5, 1.0, OPEN_BAND) is Zone.aF
    # x = 1 sits in the band; x = C and x = B on the right-hand side of their cuts
    assert classify(1.0, 0.5, OPEN_BAND) is Zone.aD
    assert classify(1.0, 0.701, OPEN_BAND) is Zone.aG
    assert classify(1.3, 0.5, OPEN_BAND) is Zone.aE
    assert classify(0.7, 0.0, OPEN_BAND) is Zone.aA


def test_classify_rejects_bad_point():
    with pytest.raises(ValueError):
        classify(0.0, 0.5, OPEN_BAND)
    with pytest.raises(ValueError):
        classify(1.0, -0.5, OPEN_BAND)


def test_ties_go_to_lp_retaining_zone():
    g = an.ss_equilibrium_reward(1.2, 0.3, 0.001)
    assert classify(1.2, g, OPEN_BAND) is Zone.aG
    g = an.ss_equilibrium_reward(1.6, 0.3, 0.001)
    assert classify(1.6, g, OPEN_BAND) is Zone.aF
    g = an.sb_equilibrium_reward(0.4, 0.3, 0.7, 0.001)
    assert classify(0.4, g, OPEN_BAND) is Zone.aC


@settings(max_examples=200)
@given(st.floats(1.0 + 1e-6, 1.3 - 1e-6))
def test_boundary_consistency(x):
    g = an.ss_equilibrium_reward(x, 0.3, 0.001)
    assert classify(x, g + 1e-9, OPEN_BAND) is Zone.aG
    assert classify(x, g - 1e-9, OPEN_BAND) is Zone.aD


@given(st.floats(1e-3, 10.0), st.floats(0.0, 5.0))
def test_partition_single_label(x, g):
    zone = classify(x, g, OPEN_BAND)
    matches = [
        x < 0.7 and g < an.sb_equilibrium_reward(x, 0.3, 0.7, 0.001),
        x < 0.7 and g >= an.sb_equilibrium_reward(x, 0.3, 0.7, 0.001),
        0.7 <= x < 1.0,
        1.0 <= x < 1.3 and g < an.ss_equilibrium_reward(x, 0.3, 0.001),
        x >= 1.3 and g < an.ss_equilibrium_reward(x, 0.3, 0.001),
        x >= 1.3 and g >= an.ss_equilibrium_reward(x, 0.3, 0.001),
        1.0 <= x < 1.3 and g >= an.ss_equilibrium_reward(x, 0.3, 0.001),
    ]
    assert sum(matches) == 1
    assert [Zone.aB, Zone.aC, Zone.aA, Zone.aD, Zone.aE, Zone.aF, Zone.aG][matches.index(True)] is zone


def test_grid_partition_counts():
    grid = sweep(GRID_SPEC, OPEN_BAND)
    assert grid.codes.shape == (200, 200)
    assert sum(grid.counts().values()) == 200 * 200
    for i in range(0, 200, 17):
        for j in range(0, 200, 13):
            assert grid.label(i, j) is classify(float(grid.xs[i]), float(grid.gs[j]), OPEN_BAND)


def test_open_band_nonempty_ag():
    grid = sweep(GRID_SPEC, OPEN_BAND)
    assert grid.count(Zone.aG) > 0
    (x0, g0), (x1, g1) = grid.segment
    assert (x0, x1) == (1.0, 1.3)
    assert g0 == pytest.approx(0.701, abs=1e-12)
    assert g1 == pytest.approx(G_SS_1_3, abs=1e-12)


def test_closed_band_and_b_empty_ag():
    for key in ("closed", "degenerate"):
        grid = sweep(GRID_SPEC, BAND_CASES[key])
        assert grid.count(Zone.aG) == 0
        assert grid.count(Zone.aD) == 0
        assert grid.segment is None


def test_one_by_one_grid():
    grid = sweep(GridSpec(1.15, 1.15, 1, 0.9, 0.9, 1), OPEN_BAND)
    assert grid.codes.shape == (1, 1)
    assert grid.label(0, 0) is Zone.aG


def test_sweep_is_deterministic():
    a = sweep(GRID_SPEC, OPEN_BAND)
    b = sweep(GRID_SPEC, OPEN_BAND)
    assert np.array_equal(a.codes, b.codes)
    assert np.array_equal(a.g_ss, b.g_ss, equal_nan=True)


@pytest.mark.parametrize("spec", [
    GridSpec(0.0, 2.0, 10, 0.0, 1.0, 10),
    GridSpec(0.1, 11.0, 10, 0.0, 1.0, 10),
    GridSpec(2.0, 1.0, 10, 0.0, 1.0, 10),
    GridSpec(0.1, 2.0, 10, -0.1, 1.0, 10),
    GridSpec(0.1, 2.0, 10, 0.0, 6.0, 10),
    GridSpec(0.1, 2.0, 0, 0.0, 1.0, 10),
    GridSpec(0.1, 2.0, 10, 0.5, 0.5, 3),
])
def test_invalid_grid_specs(spec):
    with pytest.raises(InvalidGridSpec):
        sweep(spec, OPEN_BAND)


def test_sample_curves_domains():
    xs = np.array([0.5, 0.7, 0.9, 1.0, 1.3])
    g_ss, g_sb = sample_curves(xs, OPEN_BAND)
    assert np.isnan(g_ss[:3]).all() and not np.isnan(g_ss[3:]).any()
    assert not np.isnan(g_sb[:2]).any() and np.isnan(g_sb[2:]).all()
    assert g_ss[3] == pytest.approx(0.701)
    assert g_sb[1] == pytest.approx(0.7 - 0.7 * 0.001)


def test_stable_segment_examples():
    (x0, g0), (x1, g1) = stable_segment(OPEN_BAND)
    assert (x0, g0) == (1.0, pytest.approx(0.701, abs=1e-12))
    assert (x1, g1) == (1.3, pytest.approx(G_SS_1_3, abs=1e-12))
    # stressed sellers: pD sits above the buyer curve supremum 1 - A
    assert g0 > an.sb_reward_limit_at_zero(0.3)
    (_, a), (_, b) = stable_segment(NormalizedParams(0.3, 0.7, 1.0 + 1e-9, 0.001))
    assert b - a == pytest.approx(0.0, abs=1e-9)
    with pytest.raises(InfeasibleBand):
        stable_segment(BAND_CASES["closed"])
    with pytest.raises(InsufficientDepth):
        stable_segment(NormalizedParams(0.95, 0.96, 1.3, 0.1))


def test_coarse_two_party_boundary():
    nz = NormalizedParams(0.3, 0.7, 1.3, 0.001)
    assert classify_coarse(1.0 + 1e-9, 0.701 - 1e-6, nz) is CoarseZone.SS
    assert classify_coarse(1.0 + 1e-9, 0.701 + 1e-6, nz) is CoarseZone.LP
    assert classify_coarse(0.5, 0.3, nz) is CoarseZone.SB
    assert classify_coarse(0.85, 0.0, nz) is CoarseZone.LP


def test_coarse_boundary_tracks_curve():
    nz = NormalizedParams(0.3, 0.7, 1.3, 0.001)
    xs = np.linspace(1.01, 3.0, 50)
    gs = np.linspace(0.0, 2.0, 2001)
    h = gs[1] - gs[0]
    edges = []
    for x in xs:
        labels = [classify_coarse(float(x), float(g), nz) for g in gs]
        first_lp = labels.index(CoarseZone.LP)
        assert all(lab is CoarseZone.SS for lab in labels[:first_lp])
        assert all(lab is CoarseZone.LP for lab in labels[first_lp:])
        edge = gs[first_lp]
        assert abs(edge - an.ss_equilibrium_reward(float(x), 0.3, 0.001)) <= h
        edges.append(edge)
    assert np.all(np.diff(edges) >= 0)
