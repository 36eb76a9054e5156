import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from poextremes import _kernels_py, kernels

compiled = pytest.importorskip("poextremes._kernels")

FAMILIES = [
    (_kernels_py.INDEPENDENCE, 0.0),
    (_kernels_py.NELSEN_4_2_19, 5.0),
    (_kernels_py.NELSEN_4_2_19, 0.3),
    (_kernels_py.NELSEN_4_2_8, 1.5),
    (_kernels_py.NELSEN_4_2_8, 1.0),
]

probs = arrays(float, st.tuples(st.integers(1, 30), st.integers(2, 4)),
               elements=st.floats(0.0, 1.0, allow_nan=False))


def test_backend_reported():
    assert kernels.BACKEND in ("cython", "python")


@pytest.mark.parametrize("code,param", FAMILIES)
@settings(max_examples=60, deadline=None)
@given(u=probs)
def test_backends_agree_combine_and_partials(code, param, u):
    k = u.shape[1]
    for w in (np.ones(k), np.full(k, 1.0 / k)):
        a = compiled.combine(code, param, u, w)
        b = _kernels_py.combine(code, param, u, w)
        np.testing.assert_allclose(a, b, rtol=1e-12, atol=1e-300)
    a = compiled.partials(code, param, u)
    b = _kernels_py.partials(code, param, u)
    np.testing.assert_allclose(a, b, rtol=1e-11, atol=1e-300)


@pytest.mark.parametrize("code,param", FAMILIES)
def test_backends_agree_conditional_inverse(code, param):
    rng = np.random.default_rng(3)
    u1, w = rng.random(500), rng.random(500)
    np.testing.assert_allclose(compiled.conditional_inverse(code, param, u1, w, 64),
                               _kernels_py.conditional_inverse(code, param, u1, w, 64), atol=1e-14)


@pytest.mark.parametrize("backend", [compiled, _kernels_py])
def test_unknown_code_rejected(backend):
    with pytest.raises(ValueError):
        backend.combine(9, 1.0, np.ones((1, 2)), np.ones(2))
    with pytest.raises(ValueError):
        backend.partials(9, 1.0, np.ones((1, 2)))


@pytest.mark.parametrize("backend", [compiled, _kernels_py])
def test_read_only_inputs_accepted(backend):
    u = np.full((3, 2), 0.5)
    u.setflags(write=False)
    w = np.broadcast_to(np.array(0.5), (2,))
    assert np.all(np.isfinite(backend.combine(1, 5.0, u, w)))


@pytest.mark.parametrize("backend", [compiled, _kernels_py])
def test_zero_arguments_take_limits(backend):
    u = np.array([[0.0, 0.5], [0.5, 0.0]])
    for code, param in FAMILIES:
        c = backend.combine(code, param, u, np.ones(2))
        assert np.all(np.isfinite(c)) and np.all(c < 1e-290)
        p = backend.partials(code, param, u)
        assert np.all(np.isfinite(p))
        # derivative in the non-degenerate coordinate vanishes on the zero face
        assert p[0, 1] == pytest.approx(0.0, abs=1e-290)
        assert p[1, 0] == pytest.approx(0.0, abs=1e-290)


def test_independence_partials_without_division():
    u = np.array([[0.0, 0.3, 0.5]])
    p = _kernels_py.partials(_kernels_py.INDEPENDENCE, 0.0, u)
    np.testing.assert_allclose(p, [[0.15, 0.0, 0.0]])


def test_pure_python_backend_end_to_end():
    import os
    import subprocess
    import sys

    code = ("from poextremes import kernels\n"
            "from poextremes.scenarios import registry\n"
            "from poextremes.order_checks import run_scenario\n"
            "assert kernels.BACKEND == 'python'\n"
            "for sc in registry().values():\n"
            "    assert run_scenario(sc, grid=sc.grid(400)).matches_expectation, sc.id\n")
    env = dict(os.environ, POEXTREMES_PURE_PYTHON="1")
    subprocess.run([sys.executable, "-c", code], env=env, check=True)
