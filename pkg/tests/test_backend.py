import math

import numpy as np
import pytest

from lapbound import _backend, _pycore

compiled = pytest.importorskip("lapbound._core")

CASES = [(1.0, 0.5), (2.0, 0.75), (3.0, 2.0), (0.5, 1.5), (1.0, 2.5)]


@pytest.mark.parametrize("delta,lam", CASES)
@pytest.mark.parametrize("b", [2.0, 50.0, math.inf])
def test_tail_agreement(delta, lam, b):
    z = np.geomspace(1e-3, 0.99, 40) * (b if math.isfinite(b) else 10.0)
    assert compiled.tail_integral(z, b, delta, lam) == pytest.approx(_pycore.tail_integral(z, b, delta, lam), rel=1e-10)
    assert compiled.tail_derivative(z, b, delta, lam) == pytest.approx(_pycore.tail_derivative(z, b, delta, lam), rel=1e-9)
    for zz in z[::8]:
        assert compiled.tail_scalar(zz, b, delta, lam) == pytest.approx(_pycore.tail_scalar(zz, b, delta, lam), rel=1e-10)
        assert compiled.tail_derivative_scalar(zz, b, delta, lam) == pytest.approx(
            _pycore.tail_derivative_scalar(zz, b, delta, lam), rel=1e-9)


@pytest.mark.parametrize("delta,lam", CASES[:3])
def test_quad_agreement(delta, lam):
    for z in (0.1, 0.5, 0.9):
        assert compiled.tail_quad(z, 1.0, delta, lam) == pytest.approx(_pycore.tail_quad(z, 1.0, delta, lam), rel=1e-8)


@pytest.mark.parametrize("cutoff", [None, "col"])
def test_kernel_matrix_agreement(cutoff):
    x = np.geomspace(1e-2, 10, 17)
    y = np.geomspace(1e-2, 10, 13)
    if cutoff:
        cutoff = np.where(np.arange(13) % 3 == 0, np.inf, 2.0 * y)
    assert compiled.kernel_matrix(x, y, 1.3, cutoff) == pytest.approx(_pycore.kernel_matrix(x, y, 1.3, cutoff), rel=1e-13)


def test_backend_selected():
    assert _backend.NAME in ("compiled", "python")
    assert _backend.pure is _pycore
