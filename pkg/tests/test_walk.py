import io

import numpy as np
import pytest
from hypothesis import given, strategies as st

from combwalk.rng import RngStream
from combwalk.walk import (
    CombPath,
    Site,
    SimpleWalkPath,
    degree,
    is_legal_path,
    legal_steps,
    neighbors,
    sample_comb_endpoint,
    sample_comb_path,
    sample_simple_walk,
    step_comb,
    transition_counts,
    write_path_csv,
)

coords = st.integers(-1000, 1000)
sites = st.builds(Site, coords, coords)
unit = st.floats(0.0, 1.0, exclude_max=True)


@pytest.mark.parametrize("s,d", [((0, 0), 4), ((3, 2), 2), ((5, 0), 4)])
def test_degree(s, d):
    assert degree(Site(*s)) == d


def test_neighbors_examples():
    assert neighbors(Site(0, 0)) == {(1, 0), (-1, 0), (0, 1), (0, -1)}
    assert neighbors(Site(2, -1)) == {(2, 0), (2, -2)}
    assert neighbors(Site(0, 3)) == {(0, 4), (0, 2)}


@given(sites)
def test_neighbor_count_is_degree(s):
    assert len(neighbors(s)) == degree(s)


@pytest.mark.parametrize("s,u,t", [((0, 0), 0.10, (1, 0)), ((0, 0), 0.60, (0, 1)), ((4, 2), 0.75, (4, 1)),
                                   ((0, 0), 0.30, (-1, 0)), ((0, 0), 0.80, (0, -1)), ((4, 2), 0.2, (4, 3))])
def test_step_comb_examples(s, u, t):
    assert step_comb(Site(*s), u) == t


@pytest.mark.parametrize("u", [-0.1, 1.0, 1.5, float("nan")])
def test_step_comb_rejects_bad_u(u):
    with pytest.raises(ValueError):
        step_comb(Site(0, 0), u)


@given(sites, unit)
def test_step_comb_lands_on_neighbor(s, u):
    t = step_comb(s, u)
    assert t in neighbors(s)
    assert step_comb(s, u) == t


def test_sample_zero_steps():
    p = sample_comb_path(0, RngStream(1))
    assert p.sites == [(0, 0)]
    assert p.n == 0


@given(st.integers(0, 400), st.integers(0, 2 ** 64 - 1))
def test_sampled_paths_are_legal_and_replayable(n, seed):
    p = sample_comb_path(n, RngStream(seed))
    assert p.n == n
    assert is_legal_path(p)
    assert p == sample_comb_path(n, RngStream(seed))


def test_kernel_matches_step_comb():
    rng = RngStream(9)
    u = RngStream(9).uniform(500)
    p = sample_comb_path(500, rng)
    s = Site(0, 0)
    for i, v in enumerate(u):
        s = step_comb(s, float(v))
        assert p.sites[i + 1] == s


def test_endpoint_sampler_uses_same_draws():
    p = sample_comb_path(3000, RngStream(4))
    x, y, on_axis = sample_comb_endpoint(3000, RngStream(4))
    assert (x, y) == p.endpoint
    assert on_axis == np.count_nonzero(p.ys[1:] == 0)


def test_legality_validator_rejects_bad_edges():
    assert not is_legal_path(CombPath([0, 0, 1], [0, 1, 1]))  # horizontal move on a tooth
    assert not legal_steps(np.array([0, 0]), np.array([1, 1])).any()  # no move
    assert not legal_steps(np.array([0, 1]), np.array([2, 2])).any()  # horizontal off axis
    assert legal_steps(np.array([0, 1]), np.array([0, 0])).all()
    assert not is_legal_path(CombPath([1, 2], [0, 0]))
    assert is_legal_path(CombPath([1, 2], [0, 0]), origin=False)


def test_path_arrays_are_read_only():
    p = sample_comb_path(10, RngStream(0))
    with pytest.raises(ValueError):
        p.xs[0] = 5


def test_simple_walk_validation():
    SimpleWalkPath([0, 1, 0, -1])
    with pytest.raises(ValueError):
        SimpleWalkPath([1, 2])
    with pytest.raises(ValueError):
        SimpleWalkPath([0, 2])
    assert sample_simple_walk(0, RngStream(0)).values.tolist() == [0]


def test_simple_walk_clt_mean():
    ends = np.array([sample_simple_walk(10_000, RngStream(2).split(r)).values[-1] for r in range(10_000)])
    assert abs(np.mean(ends / 100.0)) < 0.04


def pooled_transition_counts(n, R, rng):
    """Transition counts pooled over R independent paths; time on the axis only
    grows like sqrt(n), so many short paths are cheaper than one long one."""
    paths = [sample_comb_path(n, rng.split(r)) for r in range(R)]
    big = CombPath(np.concatenate([p.xs for p in paths]), np.concatenate([p.ys for p in paths]))
    axis, tooth = transition_counts(big)
    # drop the artificial jump from each path's end back to the origin
    for p in paths[:-1]:
        a, t = transition_counts(CombPath([p.xs[-1], 0], [p.ys[-1], 0]))
        axis, tooth = axis - a, tooth - t
    return axis, tooth


def test_transition_frequencies():
    axis, tooth = pooled_transition_counts(64, 10_000, RngStream(21))
    assert axis.sum() + tooth.sum() == 64 * 10_000
    na, nt = axis.sum(), tooth.sum()
    assert na >= 100_000 and nt >= 100_000
    assert np.all(np.abs(axis / na - 0.25) < 5 * np.sqrt(3 / (16 * na)))
    assert np.all(np.abs(tooth / nt - 0.5) < 5 * np.sqrt(1 / (4 * nt)))


def test_transition_counts_small():
    # (0,0) -> (1,0) -> (1,1) -> (1,0) -> (1,-1)
    axis, tooth = transition_counts(CombPath([0, 1, 1, 1, 1], [0, 0, 1, 0, -1]))
    assert axis.tolist() == [1, 0, 1, 1]
    assert tooth.tolist() == [0, 1]


def test_write_path_csv():
    buf = io.StringIO()
    write_path_csv(sample_comb_path(0, RngStream(1)), buf)
    assert buf.getvalue() == "step,x,y\n0,0,0\n"
