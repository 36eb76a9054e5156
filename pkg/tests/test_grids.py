import math

import numpy as np
import pytest

from poextremes.grids import bisect_increasing, support_grid


@pytest.mark.parametrize("root", [0.5, 3.0, 1e10, 1e20, 1e250])
def test_bisection_reaches_far_roots_on_half_line(root):
    x = bisect_increasing(lambda y: np.log(y), math.log(root), (0.0, math.inf))
    assert x == pytest.approx(root, rel=1e-12)


@pytest.mark.parametrize("root", [-1e18, -2.0])
def test_bisection_reaches_far_roots_below(root):
    x = bisect_increasing(lambda y: -np.log(-y), -math.log(-root), (-math.inf, 0.0))
    assert x == pytest.approx(root, rel=1e-12)


def test_bisection_vectorised_and_bounded():
    tgt = np.array([0.1, 0.5, 0.9])
    np.testing.assert_allclose(bisect_increasing(lambda y: y, tgt, (0.0, 1.0)), tgt, atol=1e-15)


def test_support_grid_inside_support():
    for support in [(0.0, 1.0), (0.0, math.inf), (1.0, math.inf), (-math.inf, 0.0), (2.0, math.inf)]:
        g = support_grid(support, points=50)
        assert np.all((g.x > support[0]) & (g.x < support[1]))
