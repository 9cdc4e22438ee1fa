"""Hypothesis strategies for group elements and tuples."""

from hypothesis import strategies as st

from coxsigns.coxeter import build_system, element_of

SMALL_TYPES = ["A1", "A2", "A3", "B2", "B3", "C3", "D4", "G2", "F4", "H3", "I2(5)", "I2(8)", "A1xA2"]


def words(system, max_len=12):
    return st.lists(st.integers(1, system.rank), max_size=max_len)


def elements(system, max_len=12):
    return words(system, max_len).map(lambda w: element_of(system, w))


def tuples_of(system, n, max_len=12):
    return st.lists(elements(system, max_len), min_size=n, max_size=n).map(tuple)


@st.composite
def system_and_tuple(draw, n_min=1, n_max=4, types=SMALL_TYPES):
    W = build_system(draw(st.sampled_from(types)))
    n = draw(st.integers(n_min, n_max))
    return W, n, draw(tuples_of(W, n))
