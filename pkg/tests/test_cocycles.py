import json
import random
from itertools import product

import pytest
from hypothesis import given

from coxsigns.cocycles import (
    F2,
    ArityError,
    ExtensionElement,
    HalfSpaceChain,
    alternating_walls,
    bockstein_check,
    chain_action,
    coboundary,
    cup_power_mu,
    eval_epsilon,
    eval_epsilon_tilde,
    eval_Z,
    lift_Z_tilde,
    p_minus,
    p_plus,
    theta,
)
from coxsigns.coxeter import build_system, compose, element_of, invert, reduced_word
from coxsigns.scalars import dot, reflect_vector

from .strategies import system_and_tuple


# an evaluator built from reflections acting on a dominant vector


def _rho(W):
    f = W.factors[0]
    n = f.rank
    if f.letter == "A":
        return tuple(range(n, -1, -1))
    if f.letter in "BC":
        return tuple(range(n, 0, -1))
    if f.letter == "D":
        return tuple(range(n - 1, -1, -1))
    raise ValueError(f.letter)


def _act(W, w, v):
    gram = [[int(i == j) for j in range(len(v))] for i in range(len(v))]
    for i in reversed(reduced_word(w)):
        v = reflect_vector(v, W.ambient[i - 1], gram)
    return v


def geometric_epsilon(W, ts):
    gram = [[int(i == j) for j in range(len(W.ambient[0]))] for i in range(len(W.ambient[0]))]
    rho = _rho(W)
    points = [rho]
    p = W.identity
    for x in ts:
        p = compose(p, x)
        points.append(_act(W, p, rho))
    count = 0
    for a in range(W.npos):
        sides = [dot(q, W.ambient[a], gram) > 0 for q in points]
        if all(sides[i] != sides[i + 1] for i in range(len(sides) - 1)):
            count += 1
    return count


@pytest.mark.parametrize("t", ["A2", "A3", "B2", "C3", "D4"])
def test_matches_geometric_evaluator(t):
    W = build_system(t)
    rng = random.Random(7)
    els = W.elements()
    for n in (1, 2, 3, 4):
        for _ in range(60):
            ts = [rng.choice(els) for _ in range(n)]
            want = geometric_epsilon(W, ts)
            got = eval_epsilon(n, ts)
            assert int(got) == (want % 2 if n % 2 else want)


def test_low_degree_closed_forms(A3, B3):
    for W in (A3, B3):
        for x, y in product(W.elements(), repeat=2):
            assert eval_epsilon(1, (x,)) == x.length % 2
            assert 2 * eval_epsilon(2, (x, y)) == x.length + y.length - compose(x, y).length


def test_odd_degree_values_live_in_f2(A3):
    v = eval_epsilon(3, A3.gens[:3])
    assert isinstance(v, F2)
    assert isinstance(eval_epsilon(2, A3.gens[:2]), int) and not isinstance(eval_epsilon(2, A3.gens[:2]), F2)
    assert F2(1) + F2(1) == 0 and -F2(1) == F2(1)


def test_power_of_coxeter_element(A3):
    C = element_of(A3, [1, 2, 3])
    C2 = compose(C, C)
    assert C2.length == 4
    for backend in ("chamber", "inversion"):
        assert eval_epsilon(3, (C2, C, C2), backend=backend) == 1


def test_x_xinv_x(A3):
    for x in A3.elements():
        assert eval_epsilon(3, (x, invert(x), x)) == x.length % 2


@pytest.mark.parametrize("t", ["A1", "A3", "B2", "G2", "H3", "I2(7)", "E6", "A1xA2"])
def test_normalization(t):
    W = build_system(t)
    for s in W.gens:
        for n in range(1, 7):
            assert int(eval_epsilon(n, (s,) * n)) == 1
            assert int(eval_epsilon(n, (s,) * n, backend="inversion")) == 1


@given(system_and_tuple(n_max=5))
def test_backends_agree(stn):
    W, n, ts = stn
    a, b = eval_epsilon(n, ts), eval_epsilon(n, ts, backend="inversion")
    assert int(a) == int(b) and type(a) is type(b)


@given(system_and_tuple(n_min=2))
def test_collapsing(stn):
    W, n, ts = stn
    ts = list(ts)
    w = compose(ts[0], ts[1])
    word = reduced_word(w)
    k = len(word) // 2
    ts[0], ts[1] = element_of(W, word[:k]), element_of(W, word[k:])
    assert not eval_Z(n, ts)
    assert eval_epsilon(n, ts) == 0


@given(system_and_tuple())
def test_reversal_and_symmetry(stn):
    W, n, ts = stn
    rev = [invert(x) for x in reversed(ts)]
    assert int(eval_epsilon(n, ts)) == int(eval_epsilon(n, rev))
    z = eval_Z(n, ts)
    assert z.is_plus_part() if n % 2 == 0 else z.is_minus_part()
    assert cup_power_mu(n, ts) == z


@given(system_and_tuple(n_min=2, n_max=4))
def test_z_is_a_cocycle(stn):
    W, k, full = stn
    n = k - 1
    assert not coboundary(lambda a: eval_Z(n, a), full, chain_action)
    assert coboundary(lambda a: lift_Z_tilde(n, a), full, chain_action) == -eval_Z(n + 1, full)


def test_lift_and_projections(B2):
    s = B2.gens[0]
    for n in range(1, 6):
        lift = lift_Z_tilde(n, (s,) * n)
        sign_ = -1 if (n // 2) % 2 else 1
        assert lift.terms == {(0, 1): sign_}
        z = eval_Z(n, (s,) * n)
        assert (p_minus(lift) if n % 2 else p_plus(lift)) == z


def test_theta_needs_even_degree(B2):
    c = lift_Z_tilde(2, (B2.gens[0],) * 2)
    assert theta(2, c) == 1
    with pytest.raises(ValueError):
        theta(3, c)


def test_epsilon_tilde_separates_orbits(B2):
    s1, s2 = B2.gens
    a, b = eval_epsilon_tilde(3, (s1,) * 3), eval_epsilon_tilde(3, (s2,) * 3)
    assert set(a) != set(b) and len(a) == len(b) == 1
    rng = random.Random(3)
    for _ in range(200):
        ts = [rng.choice(B2.elements()) for _ in range(4)]
        assert sum(eval_epsilon_tilde(4, ts).values()) == eval_epsilon(4, ts)


def test_orbit_refinement_even_sign(B2):
    s = B2.gens[0]
    assert eval_epsilon_tilde(2, (s, s)) == {1: 1}
    assert eval_epsilon_tilde(4, (s,) * 4) == {1: 1}


def test_cup_of_single_wall(B2):
    s = B2.gens[1]
    assert cup_power_mu(1, (s,)) == eval_Z(1, (s,))
    assert cup_power_mu(2, (s, s)) == eval_Z(2, (s, s))
    assert all(cup_power_mu(3, t) == eval_Z(3, t) for t in product(B2.elements(), repeat=3))


def test_bockstein(A2):
    s = A2.gens[0]
    assert bockstein_check(1, (s, s))
    assert all(bockstein_check(3, t) for t in product(A2.elements(), repeat=4))
    with pytest.raises(ValueError):
        bockstein_check(2, (s, s, s))


def test_trivial_coboundary_of_constant():
    W = build_system("A2")
    x = W.gens[0]
    assert coboundary(lambda a: 5, (x,)) == 0


def test_action_on_half_spaces(A2):
    s = A2.gens[0]
    plus = HalfSpaceChain(A2, {(0, 1): 1})
    assert plus.act(s).terms == {(0, -1): 1}
    assert plus.act(A2.identity) == plus
    # the action is a left action
    x, y = A2.gens
    c = eval_Z(2, (x, y)) + plus * 3
    assert c.act(compose(x, y)) == c.act(y).act(x)


def test_chain_arithmetic(A2):
    a = HalfSpaceChain(A2, {(0, 1): 2, (1, -1): 1})
    b = HalfSpaceChain(A2, {(0, 1): -2})
    assert (a + b).terms == {(1, -1): 1}
    assert (a - a).terms == {} and not (a - a)
    assert (a * 3).terms[(0, 1)] == 6 and -a == a * -1
    assert a.product(a).terms == {(0, 1): 4, (1, -1): 1}
    assert a.sigma().terms == {(0, -1): 2, (1, 1): 1}


def test_json_is_sorted_and_stable(B2):
    z = eval_Z(3, (B2.gens[0], B2.gens[1], B2.gens[0]))
    obj = json.loads(z.to_json())
    roots = [w["root"] for w in obj["walls"]]
    assert roots == sorted(roots)
    assert z.to_json() == eval_Z(3, (B2.gens[0], B2.gens[1], B2.gens[0])).to_json()
    assert json.loads(eval_Z(2, (B2.gens[0],) * 2).to_json()) == {"walls": [{"root": [1, -1], "plus": -1, "minus": -1}]}


def test_arity_errors(A2):
    with pytest.raises(ArityError):
        eval_epsilon(3, A2.gens)
    with pytest.raises(ArityError):
        eval_Z(0, ())
    with pytest.raises(ArityError):
        alternating_walls([])
    with pytest.raises(ValueError):
        eval_epsilon(1, A2.gens[:1], backend="nope")


def test_extension(B2, A3):
    s = B2.gens[0]
    one = ExtensionElement({}, B2.identity)
    x = ExtensionElement({2: 1}, B2.gens[1])
    assert one * x == x and x * one == x
    # Z2(s, s) = -([D+] + [D-]) folds to -[H_s]
    assert ExtensionElement({}, s) * ExtensionElement({}, s) == ExtensionElement({0: -1}, B2.identity)
    for W in (B2, A3):
        rng = random.Random(11)
        els = W.elements()
        for _ in range(1000):
            p, q, r = (
                ExtensionElement({rng.randrange(W.npos): rng.randint(-3, 3)}, rng.choice(els)) for _ in range(3)
            )
            assert (p * q) * r == p * (q * r)


def test_extension_rejects_bad_walls(B2):
    with pytest.raises(ValueError):
        ExtensionElement({99: 1}, B2.identity)
