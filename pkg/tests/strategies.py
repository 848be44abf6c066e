"""Shared hypothesis strategies."""

import numpy as np
from hypothesis import strategies as st

finite = st.floats(-5.0, 5.0, allow_nan=False, allow_infinity=False)


def real_vec(n, lo=-5.0, hi=5.0):
    # rounded so that subnormal magnitudes never reach the numerics
    return st.lists(st.floats(lo, hi, allow_nan=False), min_size=n, max_size=n).map(lambda v: np.round(np.array(v), 8))


def complex_vec(n, bound=5.0):
    return st.tuples(real_vec(n, -bound, bound), real_vec(n, -bound, bound)).map(lambda t: t[0] + 1j * t[1])


seeds = st.integers(0, 2**32 - 1)
