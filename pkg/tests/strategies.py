"""Hypothesis strategies for tensors and states."""
import numpy as np
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

finite = st.floats(-3.0, 3.0, allow_nan=False, allow_infinity=False, width=64)
sizes = st.integers(3, 5)


@st.composite
def rank2(draw, n=None):
    n = draw(sizes) if n is None else n
    return draw(arrays(np.float64, (n, n), elements=finite))


@st.composite
def rank3(draw, n=None):
    n = draw(sizes) if n is None else n
    return draw(arrays(np.float64, (n, n, n), elements=finite))


@st.composite
def tensor_pair(draw):
    n = draw(sizes)
    return draw(rank2(n)), draw(rank3(n))


@st.composite
def permutation_of(draw, n):
    return np.array(draw(st.permutations(list(range(n)))))
