import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from reflected_ou import (InvalidInputError, ModelParams, RngStream, SamplePath, Scheme, SimGrid,
                          UnsupportedCombinationError, lepingle_step, reflected_euler_step,
                          simulate_path, skorokhod_map)


# ---------------------------------------------------------------- types

@pytest.mark.parametrize("kwargs", [
    dict(theta=0.0, sigma=1.0),
    dict(theta=-1.0, sigma=1.0),
    dict(theta=1.0, sigma=-0.1),
    dict(theta=1.0, sigma=1.0, x0=-0.5),
    dict(theta=1.0, sigma=1.0, x0=2.0, b=1.0),
    dict(theta=1.0, sigma=1.0, b=0.0),
    dict(theta=math.nan, sigma=1.0),
    dict(theta=1.0, sigma=math.inf),
])
def test_model_params_rejects(kwargs):
    with pytest.raises(InvalidInputError):
        ModelParams(**kwargs)


def test_model_params_sigma_zero_allowed():
    p = ModelParams(0.5, 0.0, 1.0)
    assert not p.two_sided and p.upper == math.inf
    assert ModelParams(0.5, 1.0, 1.0, b=1.0).two_sided


@pytest.mark.parametrize("h,n", [(0.0, 10), (-0.1, 10), (0.01, 0), (0.01, 1.5), (math.nan, 3)])
def test_grid_rejects_at_construction(h, n):
    with pytest.raises(InvalidInputError):
        SimGrid(h, n)


def test_grid_horizon():
    assert SimGrid(0.01, 1000).T == pytest.approx(10.0)


@pytest.mark.parametrize("seed,stream", [(-1, 0), (0, 2**64), (1.5, 0)])
def test_rng_stream_range(seed, stream):
    with pytest.raises(InvalidInputError):
        RngStream(seed, stream)


def test_rng_stream_accepts_full_u64():
    g = RngStream(2**64 - 1, 2**64 - 1).generator()
    assert isinstance(g.random(), float)


def test_sample_path_is_read_only():
    path = SamplePath(1.0, [1.0, 0.5], [0.0])
    with pytest.raises(ValueError):
        path.states[0] = 3.0


def test_sample_path_shape_checks():
    with pytest.raises(InvalidInputError):
        SamplePath(1.0, [1.0, 0.5, 0.2], [0.0])
    with pytest.raises(InvalidInputError):
        SamplePath(1.0, [1.0, -0.5], [0.0])
    with pytest.raises(InvalidInputError):
        SamplePath(1.0, [1.0], [])


# ---------------------------------------------------------------- projection step

def test_euler_step_interior():
    x, lo, up = reflected_euler_step(1.0, ModelParams(0.5, 0.2), 0.01, 0.0)
    assert x == 0.995 and lo == 0.0 and up == 0.0


def test_euler_step_reflects():
    x, lo, up = reflected_euler_step(0.01, ModelParams(0.5, 1.0), 0.01, -0.05)
    assert x == 0.0
    assert lo == pytest.approx(0.04005, abs=1e-15)
    assert up == 0.0


def test_euler_step_absorbing_without_noise():
    assert reflected_euler_step(0.0, ModelParams(0.5, 0.0), 0.01, 0.0) == (0.0, 0.0, 0.0)


def test_euler_step_upper_barrier():
    p = ModelParams(0.5, 1.0, 0.9, b=1.0)
    x, lo, up = reflected_euler_step(0.9, p, 0.01, 0.2)
    y = 0.9 - 0.5 * 0.9 * 0.01 + 0.2
    assert x == 1.0 and lo == 0.0
    assert up == pytest.approx(y - 1.0, abs=1e-15)


@pytest.mark.parametrize("args", [(math.nan, 0.01, 0.0), (1.0, 0.01, math.inf), (1.0, 0.0, 0.0),
                                  (-1.0, 0.01, 0.0)])
def test_euler_step_invalid(args):
    x, h, dw = args
    with pytest.raises(InvalidInputError):
        reflected_euler_step(x, ModelParams(0.5, 1.0), h, dw)


@settings(max_examples=300)
@given(x=st.floats(0, 5), dw=st.floats(-1, 1), theta=st.floats(0.01, 5), sigma=st.floats(0, 3),
       b=st.one_of(st.none(), st.floats(5, 10)))
def test_euler_step_identity_and_complementarity(x, dw, theta, sigma, b):
    h = 0.01
    p = ModelParams(theta, sigma, b=b)
    xn, lo, up = reflected_euler_step(x, p, h, dw)
    assert 0.0 <= xn <= p.upper
    assert lo >= 0 and up >= 0
    assert abs(xn - (x - theta * x * h + sigma * dw + lo - up)) < 1e-12
    assert lo * xn == 0.0
    if up > 0:
        assert xn == b


# ---------------------------------------------------------------- bridge step

def test_lepingle_u_one_is_endpoint_min():
    x, lo = lepingle_step(1.0, ModelParams(0.5, 0.2), 0.01, 0.0, 1.0)
    assert x == 0.995 and lo == 0.0


def test_lepingle_bridge_dips_below_zero():
    # scalar oracle: m = (x + y - sqrt((y-x)^2 + 0.04)) / 2 with y = 0.0995
    x, lo = lepingle_step(0.1, ModelParams(0.5, 1.0), 0.01, 0.0, math.exp(-2.0))
    assert lo == pytest.approx(0.0002503124995117123, rel=1e-12)
    assert x == pytest.approx(0.09975031249951172, rel=1e-12)


def test_lepingle_degenerate():
    assert lepingle_step(0.0, ModelParams(0.5, 0.0), 0.01, 0.3, 0.5) == (0.0, 0.0)


@pytest.mark.parametrize("u", [0.0, -0.5, 1.5, math.nan])
def test_lepingle_rejects_u(u):
    with pytest.raises(InvalidInputError):
        lepingle_step(0.5, ModelParams(0.5, 1.0), 0.01, 0.0, u)


def test_lepingle_two_sided_unsupported():
    with pytest.raises(UnsupportedCombinationError):
        lepingle_step(0.5, ModelParams(0.5, 1.0, b=1.0), 0.01, 0.0, 0.5)


@settings(max_examples=300)
@given(x=st.floats(0, 2), dw=st.floats(-0.5, 0.5), u=st.floats(1e-12, 1.0),
       sigma=st.floats(0, 3))
def test_lepingle_step_properties(x, dw, u, sigma):
    theta, h = 0.7, 0.01
    xn, lo = lepingle_step(x, ModelParams(theta, sigma), h, dw, u)
    y = x - theta * x * h + sigma * dw
    assert xn >= 0 and lo >= 0
    assert abs(xn - (y + lo)) < 1e-12
    # the bridge never pushes less than the endpoint projection
    assert lo >= max(0.0, -y)
    # smaller u means a deeper bridge minimum, hence at least as much push
    _, lo_deeper = lepingle_step(x, ModelParams(theta, sigma), h, dw, u / 2)
    assert lo_deeper >= lo


# ---------------------------------------------------------------- paths

def test_simulate_deterministic_recursion():
    path = simulate_path(ModelParams(0.5, 0.0, 1.0), SimGrid(0.01, 100), Scheme.PROJECTION)
    expected = [1.0]
    for _ in range(100):
        expected.append(expected[-1] - 0.5 * expected[-1] * 0.01)
    np.testing.assert_array_equal(path.states, expected)
    np.testing.assert_allclose(path.states, 0.995 ** np.arange(101), rtol=1e-13)
    assert not path.dl_lower.any() and not path.dl_upper.any()


@pytest.mark.parametrize("scheme", list(Scheme))
def test_simulate_is_reproducible(scheme):
    p, g = ModelParams(0.5, 0.2, 0.1), SimGrid(0.01, 2000)
    a = simulate_path(p, g, scheme, RngStream(7, 3))
    b = simulate_path(p, g, scheme, RngStream(7, 3))
    for name in ("states", "dl_lower", "dl_upper", "dw"):
        assert getattr(a, name).tobytes() == getattr(b, name).tobytes()
    c = simulate_path(p, g, scheme, RngStream(7, 4))
    assert not np.array_equal(a.dw, c.dw)


def test_simulate_default_scheme_and_rejection():
    one = ModelParams(0.5, 0.2)
    two = ModelParams(0.5, 0.2, b=0.3)
    g = SimGrid(0.01, 50)
    # bridge consumes extra uniforms, projection does not; same dw either way
    a = simulate_path(one, g)
    assert np.array_equal(a.states, simulate_path(one, g, Scheme.BRIDGE).states)
    assert np.array_equal(simulate_path(two, g).states, simulate_path(two, g, Scheme.PROJECTION).states)
    with pytest.raises(UnsupportedCombinationError):
        simulate_path(two, g, Scheme.BRIDGE)


def test_path_matches_iterated_steps():
    p = ModelParams(0.8, 1.0, 0.05, b=0.6)
    path = simulate_path(p, SimGrid(0.01, 500), Scheme.PROJECTION, RngStream(3, 0))
    x = p.x0
    for k in range(path.n):
        x, lo, up = reflected_euler_step(x, p, path.h, path.dw[k])
        assert x == path.states[k + 1]
        assert lo == path.dl_lower[k] and up == path.dl_upper[k]

    q = ModelParams(0.8, 1.0, 0.05)
    bpath = simulate_path(q, SimGrid(0.01, 500), Scheme.BRIDGE, RngStream(3, 0))
    gen = RngStream(3, 0).generator()
    gen.standard_normal(500)  # documented draw order: all normals, then all uniforms
    u = 1.0 - gen.random(500)
    x = q.x0
    for k in range(bpath.n):
        x, lo = lepingle_step(x, q, bpath.h, bpath.dw[k], u[k])
        assert x == bpath.states[k + 1] and lo == bpath.dl_lower[k]


@pytest.mark.parametrize("params,scheme", [
    (ModelParams(0.5, 0.2, 0.0), Scheme.PROJECTION),
    (ModelParams(0.5, 0.2, 0.0), Scheme.BRIDGE),
    (ModelParams(2.0, 1.5, 0.3, b=0.5), Scheme.PROJECTION),
])
def test_path_invariants(params, scheme):
    path = simulate_path(params, SimGrid(0.01, 20000), scheme, RngStream(11, 2))
    assert np.all(path.states >= 0) and np.all(path.states <= params.upper)
    assert np.max(np.abs(path.step_residuals(params))) < 1e-12
    assert path.dl_lower.any()
    if scheme is Scheme.PROJECTION:
        assert np.max(np.abs(path.dl_lower * path.states[1:])) < 1e-12
        hit = path.dl_upper > 0
        assert np.all(path.states[1:][hit] == params.upper)
    if params.two_sided:
        assert path.dl_upper.any()
    else:
        assert not path.dl_upper.any()


def test_bridge_push_happens_when_bridge_crosses_zero():
    params = ModelParams(0.5, 1.0, 0.0)
    path = simulate_path(params, SimGrid(0.01, 5000), Scheme.BRIDGE, RngStream(5, 0))
    x, y = path.states[:-1], path.states[:-1] - 0.5 * path.states[:-1] * 0.01 + path.dw
    pushed = path.dl_lower > 0
    # a push lands the state at y + dL, strictly above the projection unless the endpoint is the minimum
    assert np.all(path.states[1:][pushed] >= np.maximum(y[pushed], 0.0))
    assert np.all(path.dl_lower[y < 0] > 0)


def test_no_reflection_without_noise():
    for x0 in (1e-6, 0.3, 5.0):
        path = simulate_path(ModelParams(1.0, 0.0, x0), SimGrid(0.5, 200), Scheme.PROJECTION)
        assert not path.dl_lower.any()
        assert np.all(path.states > 0)


def test_ergodic_second_moment_short():
    # cheap version of the long-path acceptance check
    path = simulate_path(ModelParams(1.0, 1.0, 0.5), SimGrid(0.01, 200_000), rng=RngStream(9, 0))
    assert np.mean(path.states[1:] ** 2) == pytest.approx(0.5, rel=0.06)


# ---------------------------------------------------------------- Skorokhod map

def test_skorokhod_identity_on_nonnegative_driver():
    states, dl = skorokhod_map(1.0, [0.1, -0.2])
    np.testing.assert_allclose(states, [1.0, 1.1, 0.9])
    np.testing.assert_array_equal(dl, [0.0, 0.0])


def test_skorokhod_running_minimum():
    states, dl = skorokhod_map(0.5, [-0.8, 0.1])
    np.testing.assert_allclose(states, [0.5, 0.0, 0.1], atol=1e-15)
    np.testing.assert_allclose(dl, [0.3, 0.0], atol=1e-15)


def test_skorokhod_pinned_at_zero():
    states, dl = skorokhod_map(0.0, [-1.0, -1.0])
    np.testing.assert_array_equal(states, [0.0, 0.0, 0.0])
    np.testing.assert_array_equal(dl, [1.0, 1.0])


def test_skorokhod_rejects():
    with pytest.raises(InvalidInputError):
        skorokhod_map(-1.0, [0.1])
    with pytest.raises(InvalidInputError):
        skorokhod_map(0.0, [np.nan])


def _recursive_reflection(x0, inc):
    # independent route: push just enough at every step
    x, states, dl = x0, [x0], []
    for d in inc:
        y = x + d
        push = max(0.0, -y)
        x = y + push
        states.append(x)
        dl.append(push)
    return np.array(states), np.array(dl)


drivers = st.tuples(st.floats(0, 2), st.lists(st.floats(-1, 1), min_size=1, max_size=20))


@settings(max_examples=300)
@given(drivers)
def test_skorokhod_matches_recursive_projection(drv):
    x0, inc = drv
    s1, d1 = skorokhod_map(x0, inc)
    s2, d2 = _recursive_reflection(x0, inc)
    np.testing.assert_allclose(s1, s2, atol=1e-12)
    np.testing.assert_allclose(d1, d2, atol=1e-12)


@settings(max_examples=200)
@given(drivers, st.lists(st.floats(0, 1), min_size=20, max_size=20))
def test_skorokhod_monotone_in_driver(drv, bumps):
    x0, inc = drv
    bigger = np.asarray(inc) + np.asarray(bumps[: len(inc)])
    _, d1 = skorokhod_map(x0, inc)
    _, d2 = skorokhod_map(x0, bigger)
    assert np.all(np.cumsum(d2) <= np.cumsum(d1) + 1e-12)


def test_projection_under_reflects_at_coarse_step():
    # naive projection misses within-step excursions below 0; the bridge scheme does not
    params, grid = ModelParams(0.5, 0.2, 0.2), SimGrid(0.01, 10**5)
    m2 = {s: np.mean([np.mean(simulate_path(params, grid, s, RngStream(seed, 0)).states[1:] ** 2)
                      for seed in range(30)]) for s in Scheme}
    assert m2[Scheme.BRIDGE] == pytest.approx(0.04, rel=0.02)
    assert m2[Scheme.PROJECTION] < 0.04 * 0.975
