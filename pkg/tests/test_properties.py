import math

import numpy as np
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from lapbound import criteria, localnorm, report
from lapbound.fixtures import random_power_weight
from lapbound.kernel import derived_params

PQ = [(2.0, 2.0), (3.0, 2.0), (2.0, 3.0), (1.0, 2.0), (2.0, 1.0), (2.0, 0.5), (1.5, 0.8)]
SETTINGS = settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow])


def _weight(seed):
    return random_power_weight(np.random.default_rng(seed), beta=(0.0, 2.5))


@SETTINGS
@given(seed=st.integers(0, 10_000), pq=st.sampled_from(PQ), ends=st.tuples(st.floats(0.0, 0.6), st.floats(0.1, 1.5)))
def test_local_lower_le_upper(seed, pq, ends):
    a, length = ends
    lo, up = localnorm.K_bounds((a, a + length), derived_params(*pq, 1.0), _weight(seed))
    assert lo >= 0.0
    assert lo <= up * (1 + 1e-9) or math.isinf(up)


@SETTINGS
@given(seed=st.integers(0, 10_000), pq=st.sampled_from(PQ), c=st.floats(0.1, 10.0))
def test_criterion_homogeneous(seed, pq, c):
    params, w = derived_params(*pq, 1.0), _weight(seed)
    r1 = criteria.norm_criterion(params, w)
    r2 = criteria.norm_criterion(params, w.scaled(c))
    assert r1.lower_bound <= r1.upper_bound * (1 + 1e-9)
    for a, b in ((r1.lower_bound, r2.lower_bound), (r1.upper_bound, r2.upper_bound)):
        if math.isfinite(a):
            assert math.isclose(b, c * a, rel_tol=1e-7, abs_tol=1e-300)
        else:
            assert math.isinf(b)


@settings(max_examples=200, deadline=None)
@given(st.floats(allow_nan=True, allow_infinity=True))
def test_float_format_roundtrip(x):
    text = report.fmt_float(x).strip('"')
    back = float(text)
    assert (math.isnan(x) and math.isnan(back)) or back == x
