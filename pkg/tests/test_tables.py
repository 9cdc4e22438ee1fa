import random

import numpy as np
import pytest

from coxsigns.cocycles import eval_epsilon
from coxsigns.coxeter import compose, invert
from coxsigns.tables import additive_pair_mask, delta_epsilon, group_table


@pytest.mark.parametrize("t", ["A3", "B2", "H3", "I2(5)", "A1xA2"])
def test_table_agrees_with_elements(t):
    T = group_table(t)
    els = T.elements
    rng = random.Random(1)
    for _ in range(300):
        a, b = rng.randrange(T.order), rng.randrange(T.order)
        assert els[T.mul[a, b]] == compose(els[a], els[b])
        assert els[T.inv[a]] == invert(els[a])
        assert T.length[a] == els[a].length
    for n in (1, 2, 3):
        E = T.epsilon(n)
        for _ in range(100):
            idx = tuple(rng.randrange(T.order) for _ in range(n))
            v = eval_epsilon(n, [els[i] for i in idx])
            assert (E[idx] % 2 if n % 2 else E[idx]) == int(v)


def test_delta_vanishes_and_detects_errors():
    T = group_table("B2")
    assert not delta_epsilon(T, 3).any()
    assert not delta_epsilon(T, 2).any()
    T.epsilon(3)[1, 1, 2] += 1  # corrupt one value
    assert delta_epsilon(T, 3).any()


def test_additive_pairs():
    T = group_table("A2")
    A = additive_pair_mask(T, 2)
    assert A[0].all() and A[:, 0].all()
    s = 1
    assert not A[s, s]


def test_rejects_too_many_walls():
    with pytest.raises(ValueError):
        group_table("E8")
