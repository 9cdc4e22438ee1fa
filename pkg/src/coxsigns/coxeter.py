"""Finite Coxeter systems with elements stored as permutations of the root set.

Root indexing convention used throughout the package: a system with ``N``
positive roots stores them at indices ``0..N-1`` (the simple roots first, in
generator order) and their negatives at ``N..2N-1``, so ``-root[i]`` is
``root[(i + N) % 2N]``.  Walls and reflections are identified with positive
root indices.

Generators are numbered from 1 in every public function that takes or
returns words.
"""

from __future__ import annotations

from collections import deque
from functools import cached_property, lru_cache
from math import gcd
from typing import Iterable, Sequence

from .rootdata import (
    FactorType,
    UnknownTypeError,
    ambient_simple_roots,
    group_order,
    parse_descriptor,
    positive_root_count,
)
from .scalars import as_scalar, dot, sign

__all__ = [
    "CoxeterSystem",
    "GroupElement",
    "WordError",
    "SystemMismatchError",
    "build_system",
    "element_of",
    "compose",
    "invert",
    "length",
    "reduced_word",
    "inversion_set",
    "conjugate_reflection",
    "longest_element",
    "fixed_space_dimension",
    "perp_subsystem",
    "diagram_automorphism",
    "parse_word",
    "format_word",
    "parse_tuple",
    "format_tuple",
]


class WordError(ValueError):
    """A word or tuple could not be read against a system."""


class SystemMismatchError(ValueError):
    pass


class GroupElement:
    """An element of a finite Coxeter group, as a permutation of root indices.

    ``perm[j]`` is the index of ``w(root_j)``.
    """

    __slots__ = ("system", "perm", "length", "_mask", "__weakref__")

    def __init__(self, system: "CoxeterSystem", perm: tuple[int, ...]):
        self.system = system
        self.perm = perm
        npos = system.npos
        self.length = sum(1 for j in range(npos) if perm[j] >= npos)
        self._mask = None

    @property
    def mask(self) -> int:
        """Bitmask of walls separating C0 and wC0, i.e. {a > 0 : w^-1 a < 0}."""
        m = self._mask
        if m is None:
            npos = self.system.npos
            m = 0
            for j in range(npos):
                pj = self.perm[j]
                if pj >= npos:
                    m |= 1 << (pj - npos)
            self._mask = m
        return m

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return compose(self, other)

    def inverse(self) -> "GroupElement":
        return invert(self)

    def __eq__(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        return self.system is other.system and self.perm == other.perm

    def __hash__(self):
        return hash(self.perm)

    def is_identity(self) -> bool:
        return self.length == 0

    def __call__(self, root: int) -> int:
        return self.perm[root]

    def __repr__(self):
        return f"<{self.system.descriptor}: {format_word(self)}>"


class CoxeterSystem:
    """A finite Coxeter system together with its enumerated root system.

    Build instances with :func:`build_system`.
    """

    def __init__(self, descriptor: str, factors: Sequence[FactorType]):
        self.descriptor = descriptor
        self.factors = tuple(factors)
        self.rank = sum(f.rank for f in self.factors)
        self._build_roots()
        self.gens = tuple(GroupElement(self, p) for p in self._gen_perms)
        self.identity = GroupElement(self, tuple(range(self.nroots)))
        self._check_roots()
        self._check_orders()

    # construction

    def _build_roots(self):
        per_factor = []
        for f in self.factors:
            if f.is_dihedral:
                per_factor.append(_dihedral_factor(f))
            else:
                per_factor.append(_coordinate_factor(f))

        offsets, off = [], 0
        for f in self.factors:
            offsets.append(off)
            off += f.rank
        npos = sum(len(pf["positive"]) for pf in per_factor)
        self.npos = npos
        self.nroots = 2 * npos

        # global order of positive roots: all simple roots first, then the rest
        order = []
        for k, pf in enumerate(per_factor):
            order.extend((k, local) for local in range(self.factors[k].rank))
        for k, pf in enumerate(per_factor):
            order.extend((k, local) for local in range(self.factors[k].rank, len(pf["positive"])))
        global_of = {}
        for g, (k, local) in enumerate(order):
            global_of[(k, local)] = g
            global_of[(k, local + len(per_factor[k]["positive"]))] = g + npos

        self.factor_of = [0] * self.nroots
        self._local_coords = [None] * self.nroots
        self._ambient = [None] * self.nroots
        for (k, local), g in global_of.items():
            pf = per_factor[k]
            self.factor_of[g] = k
            self._local_coords[g] = pf["coords"][local]
            self._ambient[g] = pf["ambient"][local]

        self._gen_perms = []
        for k, pf in enumerate(per_factor):
            for i in range(self.factors[k].rank):
                perm = list(range(self.nroots))
                for (kk, local), g in global_of.items():
                    if kk == k:
                        perm[g] = global_of[(k, pf["reflect"][i][local])]
                self._gen_perms.append(tuple(perm))

        self.gen_factor = [k for k, f in enumerate(self.factors) for _ in range(f.rank)]
        self.gen_offsets = offsets
        has_coords = all(not f.is_dihedral for f in self.factors)
        self.has_geometry = has_coords
        if has_coords:
            self.gram = _block_diag([pf["gram"] for pf in per_factor])
            self.coords = []
            for g in range(self.nroots):
                k = self.factor_of[g]
                v = [0] * self.rank
                for i, c in enumerate(self._local_coords[g]):
                    v[offsets[k] + i] = c
                self.coords.append(tuple(as_scalar(x) for x in v))
            self._coord_index = {c: i for i, c in enumerate(self.coords)}
            amb = [pf["ambient"] for pf in per_factor]
            self._ambient_dims = [len(a[0]) for a in amb]
            self.ambient = []
            for g in range(self.nroots):
                k = self.factor_of[g]
                v = []
                for kk, dim in enumerate(self._ambient_dims):
                    v.extend(self._ambient[g] if kk == k else (0,) * dim)
                self.ambient.append(tuple(as_scalar(x) for x in v))
            self._ambient_index = {a: i for i, a in enumerate(self.ambient)}
        else:
            self.gram = None
            self.coords = None
            self.ambient = None

    def _check_roots(self):
        n = self.npos
        expected = sum(positive_root_count(f) for f in self.factors)
        if n != expected:
            raise UnknownTypeError(f"{self.descriptor}: enumerated {n} positive roots, expected {expected}")
        for i, s in enumerate(self.gens):
            flipped = [j for j in range(n) if s.perm[j] >= n]
            if flipped != [i]:
                raise AssertionError(f"generator {i + 1} does not flip exactly its own simple root")
            for j in range(self.nroots):
                if s.perm[(j + n) % (2 * n)] != (s.perm[j] + n) % (2 * n):
                    raise AssertionError("generator does not commute with negation")

    def _check_orders(self):
        for k, f in enumerate(self.factors):
            if f.rank > 4:
                continue
            gens = [g for g, kk in zip(self.gens, self.gen_factor) if kk == k]
            size = _closure_size(self, gens, limit=group_order(f))
            if size != group_order(f):
                raise AssertionError(f"factor {f} generates {size} elements, expected {group_order(f)}")

    # basic data

    def neg(self, r: int) -> int:
        return (r + self.npos) % self.nroots

    def is_positive(self, r: int) -> bool:
        return r < self.npos

    def positive(self, r: int) -> int:
        """Index of the positive root of the wall containing root ``r``."""
        return r if r < self.npos else r - self.npos

    def gen(self, i: int) -> GroupElement:
        if not 1 <= i <= self.rank:
            raise WordError(f"generator index {i} out of range 1..{self.rank}")
        return self.gens[i - 1]

    @property
    def is_weyl(self) -> bool:
        return all(f.is_weyl for f in self.factors)

    @property
    def order(self) -> int:
        out = 1
        for f in self.factors:
            out *= group_order(f)
        return out

    def __repr__(self):
        return f"CoxeterSystem({self.descriptor!r})"

    # derived structure

    @cached_property
    def coxeter_matrix(self) -> tuple[tuple[int, ...], ...]:
        rows = []
        for a in self.gens:
            row = []
            for b in self.gens:
                row.append(_element_order(compose(a, b)))
            rows.append(tuple(row))
        return tuple(rows)

    @cached_property
    def _root_origin(self):
        # origin[r] = (word w, simple index i) with w(alpha_i) = root r
        origin = {i: ((), i) for i in range(self.rank)}
        queue = deque(range(self.rank))
        while queue:
            r = queue.popleft()
            word, i = origin[r]
            for j, s in enumerate(self.gens):
                t = s.perm[r]
                if t not in origin:
                    origin[t] = ((j + 1,) + word, i)
                    queue.append(t)
        return origin

    def reflection(self, t: int) -> GroupElement:
        """The reflection in the wall of root ``t`` as a group element."""
        return self._reflection(self.positive(t))

    @lru_cache(maxsize=None)
    def _reflection(self, t: int) -> GroupElement:
        word, i = self._root_origin[t]
        w = element_of(self, word)
        return compose(compose(w, self.gens[i]), invert(w))

    def root_height(self, r: int):
        if self.coords is None:
            raise ValueError("heights need a coordinate model")
        total = 0
        for c in self.coords[r]:
            total = total + c
        return as_scalar(total)

    def highest_root(self) -> int:
        """The positive root of maximal height (irreducible crystallographic systems)."""
        if len(self.factors) != 1 or not self.factors[0].is_weyl:
            raise UnknownTypeError("highest root is defined here for irreducible Weyl types only")
        return max(range(self.npos), key=lambda r: (self.root_height(r), r))

    @cached_property
    def wall_orbits(self) -> tuple[int, ...]:
        """Label of the W-orbit of each wall: the smallest generator index in it."""
        parent = list(range(self.npos))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for s in self.gens:
            for t in range(self.npos):
                u = self.positive(s.perm[t])
                ra, rb = find(t), find(u)
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)
        # simple roots occupy indices 0..rank-1, so each root is a simple index
        return tuple(find(t) + 1 for t in range(self.npos))

    def root_json(self, r: int) -> list:
        """Root ``r`` in primitive canonical form for serialization."""
        if self.ambient is None:
            k = self.factor_of[r]
            f = self.factors[k]
            return [f"I2({f.m})", _dihedral_direction(self, r)]
        v = self.ambient[r]
        golden = any(f.letter == "H" for f in self.factors)
        if not golden and all(getattr(x, "denominator", None) == 1 for x in v):
            ints = [int(x) for x in v]
            g = 0
            for x in ints:
                g = gcd(g, abs(x))
            return [x // g for x in ints] if g else ints
        return [str(x) for x in v]

    def elements(self) -> list[GroupElement]:
        """All group elements, breadth-first by length (identity first)."""
        return list(self._elements)

    @cached_property
    def _elements(self) -> tuple[GroupElement, ...]:
        if self.order > 200000:
            raise ValueError(f"{self.descriptor} has {self.order} elements; refusing to enumerate")
        seen = {self.identity.perm: self.identity}
        out = [self.identity]
        queue = deque([self.identity])
        while queue:
            w = queue.popleft()
            for s in self.gens:
                v = compose(w, s)
                if v.perm not in seen:
                    seen[v.perm] = v
                    out.append(v)
                    queue.append(v)
        return tuple(out)

    def element_from_perm(self, perm: Sequence[int]) -> GroupElement:
        """Wrap a root permutation, checking that it lies in W."""
        perm = tuple(perm)
        if sorted(perm) != list(range(self.nroots)):
            raise ValueError("not a permutation of the root set")
        w = GroupElement(self, perm)
        # strip left descents; a W element reduces to the identity
        v = w
        while v.length:
            low = v.mask & ((1 << self.rank) - 1)
            if not low:
                raise ValueError("root permutation is not an element of W")
            i = (low & -low).bit_length() - 1
            v = compose(self.gens[i], v)
        if v.perm != self.identity.perm:
            raise ValueError("root permutation is not an element of W")
        return w

    def element_from_linear_map(self, f) -> GroupElement:
        """The element acting on ambient coordinates by the linear map ``f``."""
        if self.ambient is None:
            raise ValueError("dihedral factors have no ambient coordinates")
        perm = []
        for a in self.ambient:
            img = tuple(as_scalar(x) for x in f(a))
            try:
                perm.append(self._ambient_index[img])
            except KeyError:
                raise ValueError(f"map does not permute the roots (image {img})") from None
        return self.element_from_perm(perm)

    def matrix(self, w: GroupElement):
        """Matrix of ``w`` on the reflection representation, in the simple-root basis."""
        if self.coords is None:
            raise ValueError("matrix needs a coordinate model")
        cols = [self.coords[w.perm[j]] for j in range(self.rank)]
        return [[cols[j][i] for j in range(self.rank)] for i in range(self.rank)]


# factor construction


def _block_diag(blocks):
    n = sum(len(b) for b in blocks)
    out = [[0] * n for _ in range(n)]
    off = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, x in enumerate(row):
                out[off + i][off + j] = as_scalar(x)
        off += len(b)
    return out


def _coordinate_factor(f: FactorType) -> dict:
    simple_amb, amb_gram = ambient_simple_roots(f)
    n = f.rank
    gram = [[dot(a, b, amb_gram) for b in simple_amb] for a in simple_amb]
    units = [tuple(as_scalar(1 if i == j else 0) for j in range(n)) for i in range(n)]

    def reflect(i, v):
        c = as_scalar(2 * dot(units[i], v, gram) / gram[i][i])
        if c == 0:
            return v
        out = list(v)
        out[i] = as_scalar(out[i] - c)
        return tuple(out)

    bound = 2 * positive_root_count(f)
    seen = set(units)
    queue = deque(units)
    while queue:
        v = queue.popleft()
        for i in range(n):
            u = reflect(i, v)
            if u not in seen:
                seen.add(u)
                if len(seen) > bound:
                    raise UnknownTypeError(f"root enumeration for {f} exceeded {bound} roots")
                queue.append(u)
    pos = [v for v in seen if all(sign(c) >= 0 for c in v)]

    def height_key(v):
        h = sum(float(c.a + c.b * 1.618033988749895) if hasattr(c, "b") else float(c) for c in v)
        return (round(h, 9), tuple(str(c) for c in v))

    rest = sorted((v for v in pos if v not in units), key=height_key)
    positive = list(units) + rest
    npos = len(positive)
    allroots = positive + [tuple(as_scalar(-c) for c in v) for v in positive]
    index = {v: k for k, v in enumerate(allroots)}
    reflect_tables = [[index[reflect(i, v)] for v in allroots] for i in range(n)]

    def to_ambient(v):
        dim = len(simple_amb[0])
        out = [0] * dim
        for c, a in zip(v, simple_amb):
            if c != 0:
                for d in range(dim):
                    out[d] = out[d] + c * a[d]
        return tuple(as_scalar(x) for x in out)

    return {
        "positive": positive,
        "coords": allroots,
        "ambient": [to_ambient(v) for v in allroots],
        "reflect": reflect_tables,
        "gram": gram,
        "npos": npos,
    }


def _dihedral_factor(f: FactorType) -> dict:
    # roots are directions k*pi/m, k = 0..2m-1; direction k + m is the negative of k.
    # positive directions 0..m-1, simple roots at 0 and m-1.
    m = f.m
    positive_dirs = [0, m - 1] + list(range(1, m - 1))
    dirs = positive_dirs + [d + m for d in positive_dirs]
    index = {d: k for k, d in enumerate(dirs)}

    def reflect(a, k):
        return (2 * a + m - k) % (2 * m)

    reflect_tables = [[index[reflect(a, d)] for d in dirs] for a in (0, m - 1)]
    return {
        "positive": positive_dirs,
        "coords": [("dir", d, m) for d in dirs],
        "ambient": [None] * len(dirs),
        "reflect": reflect_tables,
        "gram": None,
        "npos": m,
    }


def _dihedral_direction(system, r):
    return system._local_coords[r][1]


def _closure_size(system, gens, limit):
    seen = {system.identity.perm}
    queue = deque([system.identity.perm])
    while queue:
        p = queue.popleft()
        for s in gens:
            q = tuple(map(p.__getitem__, s.perm))
            if q not in seen:
                seen.add(q)
                if len(seen) > limit:
                    return len(seen)
                queue.append(q)
    return len(seen)


def _element_order(w: GroupElement) -> int:
    k, v = 1, w
    while not v.is_identity():
        v = compose(v, w)
        k += 1
    return k


@lru_cache(maxsize=64)
def build_system(descriptor: str) -> CoxeterSystem:
    """Build and validate the Coxeter system named by ``descriptor``.

    >>> W = build_system("B3")
    >>> W.npos, W.nroots
    (9, 18)
    """
    factors = parse_descriptor(descriptor)
    return CoxeterSystem(descriptor, factors)


# element operations


def _same(a: GroupElement, b: GroupElement):
    if a.system is not b.system:
        raise SystemMismatchError(f"elements of {a.system.descriptor} and {b.system.descriptor} do not compose")


def element_of(system: CoxeterSystem, word: Iterable[int]) -> GroupElement:
    """Product ``s_{i1} s_{i2} ... s_{ik}`` of a word of 1-based generator indices."""
    perm = system.identity.perm
    for i in word:
        if not isinstance(i, int) or not 1 <= i <= system.rank:
            raise WordError(f"generator index {i!r} out of range 1..{system.rank}")
        s = system.gens[i - 1].perm
        perm = tuple(map(perm.__getitem__, s))
    return GroupElement(system, perm)


def compose(a: GroupElement, b: GroupElement) -> GroupElement:
    """``a * b`` acting as ``a(b(root))``."""
    _same(a, b)
    return GroupElement(a.system, tuple(map(a.perm.__getitem__, b.perm)))


def invert(a: GroupElement) -> GroupElement:
    inv = [0] * len(a.perm)
    for j, pj in enumerate(a.perm):
        inv[pj] = j
    return GroupElement(a.system, tuple(inv))


def length(w: GroupElement) -> int:
    return w.length


def reduced_word(w: GroupElement) -> list[int]:
    """Reduced word by greedy left descent, smallest generator index first."""
    system = w.system
    low_bits = (1 << system.rank) - 1
    out = []
    v = w
    while v.length:
        low = v.mask & low_bits
        i = (low & -low).bit_length() - 1
        out.append(i + 1)
        v = compose(system.gens[i], v)
    return out


def inversion_set(w: GroupElement) -> frozenset[int]:
    """Positive roots ``a`` with ``w^-1(a)`` negative: the walls between C0 and wC0."""
    m, out, k = w.mask, [], 0
    while m:
        if m & 1:
            out.append(k)
        m >>= 1
        k += 1
    return frozenset(out)


def conjugate_reflection(w: GroupElement, t: int) -> int:
    """The reflection ``w s_t w^-1``, as the positive root index of ``+-w(root_t)``."""
    return w.system.positive(w.perm[t])


def longest_element(system: CoxeterSystem, J: Iterable[int] | None = None) -> GroupElement:
    """Longest element of the standard parabolic subgroup generated by ``J``."""
    J = sorted(set(range(1, system.rank + 1) if J is None else J))
    if not J:
        raise ValueError("J must be nonempty")
    for i in J:
        system.gen(i)
    npos = system.npos
    w = system.identity
    while True:
        for i in J:
            if w.perm[i - 1] < npos:
                w = compose(w, system.gens[i - 1])
                break
        else:
            return w


# geometry of the reflection representation


def _rank_and_nullspace(rows, ncols):
    """Exact row reduction; returns (rank, basis of the null space)."""
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        m[r] = [as_scalar(x / p) if x != 0 else x for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [as_scalar(a - f * b) for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [as_scalar(0)] * ncols
        v[fc] = as_scalar(1)
        for i, pc in enumerate(pivots):
            v[pc] = as_scalar(-m[i][fc])
        basis.append(tuple(v))
    return len(pivots), basis


def _fixed_space(X):
    X = list(X)
    if not X:
        raise ValueError("X must be nonempty")
    system = X[0].system
    for x in X:
        _same(X[0], x)
    rows = []
    for x in X:
        M = system.matrix(x)
        for i in range(system.rank):
            rows.append([as_scalar(M[i][j] - (1 if i == j else 0)) for j in range(system.rank)])
    return system, _rank_and_nullspace(rows, system.rank)[1]


def fixed_space_dimension(X: Iterable[GroupElement]) -> int:
    """Dimension of the common fixed subspace of ``X`` on the reflection representation."""
    return len(_fixed_space(X)[1])


def perp_subsystem(X: Iterable[GroupElement]) -> frozenset[int]:
    """Positive roots orthogonal to the common fixed subspace of ``X``."""
    system, basis = _fixed_space(X)
    out = []
    for r in range(system.npos):
        if all(dot(system.coords[r], v, system.gram) == 0 for v in basis):
            out.append(r)
    return frozenset(out)


# diagram automorphisms


class DiagramAutomorphism:
    """Group automorphism induced by a permutation of the generators."""

    def __init__(self, system: CoxeterSystem, images: dict[int, int]):
        self.system = system
        self.images = images

    def __call__(self, w: GroupElement) -> GroupElement:
        return element_of(self.system, [self.images[i] for i in reduced_word(w)])

    def on_word(self, word: Iterable[int]) -> list[int]:
        return [self.images[i] for i in word]


def diagram_automorphism(system: CoxeterSystem, perm) -> DiagramAutomorphism:
    """Automorphism from a generator permutation (dict or 1-based image sequence)."""
    if isinstance(perm, dict):
        images = {i: perm.get(i, i) for i in range(1, system.rank + 1)}
    else:
        perm = list(perm)
        if len(perm) != system.rank:
            raise ValueError("permutation must list the image of every generator")
        images = {i + 1: p for i, p in enumerate(perm)}
    if sorted(images.values()) != list(range(1, system.rank + 1)):
        raise ValueError("not a permutation of the generators")
    M = system.coxeter_matrix
    for i in range(1, system.rank + 1):
        for j in range(1, system.rank + 1):
            if M[i - 1][j - 1] != M[images[i] - 1][images[j] - 1]:
                raise ValueError(f"not an automorphism: m({i},{j}) is not preserved")
    return DiagramAutomorphism(system, images)


# serialization


def format_word(w: GroupElement) -> str:
    word = reduced_word(w)
    return " ".join(f"s{i}" for i in word) if word else "e"


def parse_word(system: CoxeterSystem, text: str) -> GroupElement:
    """Read ``"s1 s3 s2"`` or ``"1 3 2"``; ``"e"`` or blank is the identity."""
    word = []
    for tok in text.split():
        if tok in ("e", "1_W", "id"):
            continue
        body = tok[1:] if tok[:1] in "sS" else tok
        if not body.isdigit():
            raise WordError(f"bad token {tok!r} in word {text!r}")
        i = int(body)
        if not 1 <= i <= system.rank:
            raise WordError(f"token {tok!r}: generator index out of range 1..{system.rank}")
        word.append(i)
    return element_of(system, word)


def parse_tuple(system: CoxeterSystem, text: str) -> list[GroupElement]:
    return [parse_word(system, part) for part in text.split(",")]


def format_tuple(ws: Iterable[GroupElement]) -> str:
    return ", ".join(format_word(w) for w in ws)
