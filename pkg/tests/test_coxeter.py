from itertools import permutations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from coxsigns.coxeter import (
    SystemMismatchError,
    WordError,
    build_system,
    compose,
    diagram_automorphism,
    element_of,
    fixed_space_dimension,
    format_tuple,
    format_word,
    invert,
    inversion_set,
    longest_element,
    parse_tuple,
    parse_word,
    perp_subsystem,
    reduced_word,
)
from coxsigns.rootdata import group_order, positive_root_count

from .strategies import SMALL_TYPES, elements, words

ALL_TYPES = [
    "A1", "A2", "A3", "A4", "A7", "B2", "B3", "B5", "C2", "C3", "C5", "D3", "D4", "D5", "D6",
    "E6", "E7", "E8", "F4", "G2", "H3", "H4", "I2(2)", "I2(5)", "I2(8)", "A1xA2", "A1xA1xA1",
]

# coefficients of the highest root on the simple roots
HIGHEST = {
    "A4": (1, 1, 1, 1),
    "B4": (1, 2, 2, 2),
    "C4": (2, 2, 2, 1),
    "D5": (1, 2, 2, 1, 1),
    "E6": (1, 2, 2, 3, 2, 1),
    "E7": (2, 2, 3, 4, 3, 2, 1),
    "E8": (2, 3, 4, 6, 5, 4, 3, 2),
    "F4": (2, 3, 4, 2),
    "G2": (3, 2),
}


@pytest.mark.parametrize("t", ALL_TYPES)
def test_root_counts_and_longest_element(t):
    W = build_system(t)
    npos = sum(positive_root_count(f) for f in W.factors)
    assert W.npos == npos and W.nroots == 2 * npos
    w0 = longest_element(W)
    assert w0.length == npos
    # w0 sends every positive root to a negative one
    assert all(not W.is_positive(w0.perm[r]) for r in range(npos))


@pytest.mark.parametrize("t", ["A3", "B3", "D4", "F4", "H3", "I2(7)", "A1xA2"])
def test_enumeration_matches_group_order(t):
    W = build_system(t)
    order = 1
    for f in W.factors:
        order *= group_order(f)
    els = W.elements()
    assert len(els) == len(set(els)) == order == W.order
    assert els[0].is_identity()


@pytest.mark.parametrize("t", ["A3", "B3", "D4", "H3", "G2", "I2(5)", "F4"])
def test_coxeter_relations(t):
    W = build_system(t)
    M = W.coxeter_matrix
    for i in range(W.rank):
        for j in range(W.rank):
            w = W.identity
            st_ = compose(W.gens[i], W.gens[j])
            for k in range(1, M[i][j] + 1):
                w = compose(w, st_)
                assert w.is_identity() == (k == M[i][j])


def test_a2_examples(A2):
    assert longest_element(A2).length == 3
    assert reduced_word(element_of(A2, [1, 2, 1])) in ([1, 2, 1], [2, 1, 2])
    # T(s1 s2) = {alpha1, s1(alpha2) = alpha1 + alpha2}
    inv = inversion_set(element_of(A2, [1, 2]))
    assert {tuple(A2.coords[r]) for r in inv} == {(1, 0), (1, 1)}


def _perm_of_word(n, word):
    p = list(range(n))
    for i in word:
        p[i - 1], p[i] = p[i], p[i - 1]
    return tuple(p)


def test_type_a_lengths_are_permutation_inversions():
    W = build_system("A3")
    seen = {}
    for w in W.elements():
        p = _perm_of_word(4, reduced_word(w))
        inv = sum(1 for a in range(4) for b in range(a + 1, 4) if p[a] > p[b])
        assert w.length == inv
        seen[p] = w
    assert set(seen) == set(permutations(range(4)))


@pytest.mark.parametrize("t", SMALL_TYPES)
@given(data=st.data())
def test_reduced_words_roundtrip(t, data):
    W = build_system(t)
    word = data.draw(words(W, 16))
    w = element_of(W, word)
    red = reduced_word(w)
    assert len(red) == w.length == len(inversion_set(w)) <= len(word)
    assert element_of(W, red) == w
    assert (len(word) - w.length) % 2 == 0


@pytest.mark.parametrize("t", ["A3", "B3", "H3", "I2(5)", "A1xA2"])
@given(data=st.data())
def test_group_axioms(t, data):
    W = build_system(t)
    x, y, z = (data.draw(elements(W)) for _ in range(3))
    assert compose(compose(x, y), z) == compose(x, compose(y, z))
    assert compose(x, invert(x)).is_identity()
    assert invert(x).length == x.length
    # length is subadditive and the descent condition flips exactly one root
    assert compose(x, y).length <= x.length + y.length
    for s in W.gens:
        assert abs(compose(x, s).length - x.length) == 1


def test_highest_root_coefficients():
    for t, coeffs in HIGHEST.items():
        W = build_system(t)
        assert tuple(W.coords[W.highest_root()]) == coeffs


def test_word_parsing(A3):
    assert parse_word(A3, "s1 s2") == parse_word(A3, "1 2") == element_of(A3, [1, 2])
    assert parse_word(A3, "e").is_identity() and parse_word(A3, "  ").is_identity()
    with pytest.raises(WordError, match="'x'"):
        parse_word(A3, "1 x")
    with pytest.raises(WordError, match="'4'"):
        parse_word(A3, "4")
    ts = parse_tuple(A3, "1 2 3 1 2 3, 1 2 3, e")
    assert len(ts) == 3 and ts[2].is_identity()
    assert format_word(ts[1]) == "s1 s2 s3"
    assert format_tuple(ts) == ", ".join(format_word(w) for w in ts)


def test_membership_is_checked(A3, B2):
    with pytest.raises(ValueError):
        A3.element_from_perm(list(reversed(range(A3.nroots))))
    with pytest.raises(SystemMismatchError):
        compose(A3.gens[0], B2.gens[0])


def test_fixed_space_and_perp_subsystem():
    C3 = build_system("C3")
    tau = C3.element_from_linear_map(lambda x: (-x[2], -x[1], -x[0]))
    assert fixed_space_dimension([tau]) == 1
    roots = {tuple(C3.ambient[r]) for r in perp_subsystem([tau])}
    assert roots == {(1, 0, 1), (0, 2, 0)}


def test_diagram_automorphisms(A3):
    flip = diagram_automorphism(A3, [3, 2, 1])
    assert flip(element_of(A3, [1, 2])) == element_of(A3, [3, 2])
    D4 = build_system("D4")
    tri = diagram_automorphism(D4, {1: 3, 3: 4, 4: 1})
    assert tri(D4.gens[1]) == D4.gens[1]
    with pytest.raises(ValueError):
        diagram_automorphism(A3, [2, 1, 3])


def test_root_json_forms():
    assert build_system("A2").root_json(0) == [1, -1, 0]
    assert build_system("I2(5)").root_json(0) == ["I2(5)", 0]
    assert all(isinstance(x, str) for x in build_system("H3").root_json(0))


def test_refuses_huge_enumeration():
    with pytest.raises(ValueError):
        build_system("E8").elements()
