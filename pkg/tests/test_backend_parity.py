"""The compiled kernels and the numpy fallback must agree."""
import numpy as np
import pytest

from triadic import backend
from triadic.models import make_spec

pytestmark = pytest.mark.skipif(backend.compiled_kernels is None, reason="extension not built")

KINDS = {
    "SymmetricCosine": {"delta1": 0.1, "delta2": 0.3},
    "AntisymmetricSine": {"delta1": 0.1, "delta2": 0.3},
    "SmoothedKuramotoClosure": {"alpha": 0.5, "beta": 25.0, "gamma": 0.8, "delta": 0.5, "zeta": 0.05},
    "ConsensusVariance": {"alpha": 0.5, "beta": 25.0, "gamma": 0.8, "delta": 0.5, "zeta": 0.05,
                          "kappa1": 1.0, "kappa2": 1.2, "lambda1": 2.0, "lambda2": 5.0},
}
py, cc = backend.python_kernels, backend.compiled_kernels


def setup(kind, n, flags, seed):
    r = np.random.default_rng(seed)
    spec = make_spec(kind, KINDS[kind], r.normal(size=n),
                     freeze_degenerate=bool(flags & 1), scan_all_slices=bool(flags & 2))
    y = r.uniform(-1, 1, n + n * n + n ** 3)
    return spec, y


@pytest.mark.parametrize("kind", list(KINDS))
@pytest.mark.parametrize("flags", [0, 1, 2, 3])
@pytest.mark.parametrize("n", [3, 5])
def test_rhs_parity(kind, flags, n):
    spec, y = setup(kind, n, flags, seed=n * 10 + flags)
    a = py.rhs_into(spec.kind.code, y, spec.omega, spec.param_array, spec.flags, n, np.empty_like(y))
    b = cc.rhs_into(spec.kind.code, y, spec.omega, spec.param_array, spec.flags, n, np.empty_like(y))
    np.testing.assert_allclose(a, b, rtol=1e-12, atol=1e-13)


@pytest.mark.parametrize("kind", list(KINDS))
def test_rk4_parity(kind):
    spec, y = setup(kind, 4, 0, seed=7)
    ya, yb = y.copy(), y.copy()
    assert py.rk4_steps(spec.kind.code, ya, spec.omega, spec.param_array, 0, 4, 0.01, 200) == 200
    assert cc.rk4_steps(spec.kind.code, yb, spec.omega, spec.param_array, 0, 4, 0.01, 200) == 200
    np.testing.assert_allclose(ya, yb, rtol=1e-10, atol=1e-11)


@pytest.mark.parametrize("flavor", [0, 1, 2])
def test_violation_count_parity(flavor):
    r = np.random.default_rng(flavor)
    for _ in range(30):
        a1 = r.uniform(-1, 1, (5, 5))
        a2 = r.uniform(-1, 1, (5, 5, 5))
        assert py.count_violations(a1, a2, 0.5, flavor) == cc.count_violations(a1, a2, 0.5, flavor)


def test_blowup_reported_by_both():
    n = 3
    spec = make_spec("SymmetricCosine", {"delta1": 1e200, "delta2": 0.1}, np.zeros(n))
    y = np.full(n + n * n + n ** 3, 1e200)
    for impl in (py, cc):
        yy = y.copy()
        with np.errstate(all="ignore"):
            done = impl.rk4_steps(spec.kind.code, yy, spec.omega, spec.param_array, 0, n, 0.01, 5)
        assert done == 0 and np.array_equal(yy, y)


def test_unknown_kind_rejected():
    y = np.zeros(3 + 9 + 27)
    for impl in (py, cc):
        with pytest.raises(ValueError):
            impl.rhs_into(9, y, np.zeros(3), np.zeros(2), 0, 3, np.empty_like(y))


@pytest.mark.parametrize("choice,expected", [("python", "python"), ("compiled", "compiled"), ("auto", "compiled")])
def test_backend_selection(choice, expected):
    import os
    import subprocess
    import sys

    env = dict(os.environ, TRIADIC_BACKEND=choice)
    out = subprocess.run([sys.executable, "-c", "import triadic; print(triadic.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == expected
