import math

import numpy as np
import pytest

from triadic.config import build
from triadic.errors import NonFiniteError, ShapeMismatchError
from triadic.integrator import IntegrationPlan, Trajectory, integrate, pack_state, unpack_state
from triadic.models import SystemState, make_spec
from triadic.presets import get_preset
from triadic.tensor import frobenius_norm, split2


def small_spec(n=4, kind="SymmetricCosine"):
    return make_spec(kind, {"delta1": 0.1, "delta2": 0.1}, np.linspace(-1, 1, n))


def small_state(n=4, seed=3):
    r = np.random.default_rng(seed)
    return SystemState(0.0, r.uniform(0, 6, n), r.uniform(-1, 1, (n, n)), r.uniform(-1, 1, (n, n, n)))


def test_plan_validation():
    for bad in [(1.0, 1.0, 0.1, 2), (0.0, 1.0, 0.0, 2), (0.0, 1.0, 2.0, 2), (0.0, 1.0, 0.1, 1),
                (0.0, float("inf"), 0.1, 2), (0.0, 1.0, 0.1, 2.5)]:
        with pytest.raises(ValueError):
            IntegrationPlan(*bad)


def test_sample_times_are_affine_and_inclusive():
    t = IntegrationPlan(0.0, 50.0, 0.01, 500).sample_times()
    assert t[0] == 0.0 and t[-1] == 50.0 and len(t) == 500
    np.testing.assert_allclose(np.diff(t), 50.0 / 499, rtol=1e-12)


def test_pack_roundtrip():
    s = small_state()
    back = unpack_state(pack_state(s), 4, s.t)
    for a, b in zip((s.x, s.a1, s.a2), (back.x, back.a1, back.a2)):
        assert a.tobytes() == b.tobytes()
    with pytest.raises(ShapeMismatchError):
        unpack_state(np.zeros(10), 4)


def test_single_step_keeps_initial_exactly():
    s = small_state()
    traj = integrate(small_spec(), s, IntegrationPlan(0.0, 0.05, 0.05, 2))
    assert len(traj) == 2
    assert traj[0].a2.tobytes() == s.a2.tobytes() and traj[0].x.tobytes() == s.x.tobytes()


def test_deterministic():
    plan = IntegrationPlan(0.0, 2.0, 0.01, 11)
    a = integrate(small_spec(), small_state(), plan)
    b = integrate(small_spec(), small_state(), plan)
    assert a.states.tobytes() == b.states.tobytes()


def test_partial_final_step_lands_on_samples():
    # dt = 0.03 does not divide the sample spacing 0.1; compare with dt dividing it
    spec, s = small_spec(), small_state()
    coarse = integrate(spec, s, IntegrationPlan(0.0, 1.0, 0.03, 11))
    fine = integrate(spec, s, IntegrationPlan(0.0, 1.0, 0.025, 11))
    np.testing.assert_allclose(coarse.states, fine.states, atol=1e-7)
    np.testing.assert_array_equal(coarse.times, fine.times)


def test_alt_decay_matches_exponential():
    rc = build(get_preset("sym-case"))
    traj = integrate(rc.spec, rc.initial, rc.plan)
    a0 = frobenius_norm(split2(traj.a1(0)).alt)
    for s in range(0, len(traj), 7):
        got = frobenius_norm(split2(traj.a1(s)).alt)
        assert got == pytest.approx(a0 * math.exp(-0.1 * traj.times[s]), rel=1e-6)


def test_trajectory_accessors():
    traj = integrate(small_spec(), small_state(), IntegrationPlan(0.0, 1.0, 0.1, 5))
    assert [st.t for st in traj] == list(traj.times)
    assert np.array_equal(traj.samples[2].a1, traj.a1(2))
    assert np.array_equal(traj[3].x, traj.x(3))
    with pytest.raises(ValueError):
        Trajectory(traj.spec, traj.times[::-1], traj.states)


def test_dimension_mismatch():
    with pytest.raises(ShapeMismatchError):
        integrate(small_spec(5), small_state(4), IntegrationPlan(0.0, 1.0, 0.1, 2))


def test_blowup_reports_time_and_entry():
    spec = make_spec("SymmetricCosine", {"delta1": 1e150, "delta2": 0.1}, np.zeros(3))
    s = SystemState(0.0, np.zeros(3), np.full((3, 3), 1e150), np.zeros((3, 3, 3)))
    with pytest.raises(NonFiniteError) as err:
        integrate(spec, s, IntegrationPlan(0.0, 1.0, 0.01, 3))
    assert err.value.time is not None and 0 < err.value.time <= 1.0
    assert err.value.max_abs > 0 and err.value.where[0] in ("x", "a1", "a2")
