"""Mod-2 cohomology of small finite groups with normalized cochains.

Decides whether a cocycle is a coboundary by bit-packed Gaussian elimination
over GF(2).  Rows are Python ints: bit ``k`` is the coefficient of unknown
``k``.  Every inconsistency comes with a certificate (the subset of
equations summing to ``0 = 1``) that can be rechecked without elimination.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Hashable, Sequence

__all__ = [
    "SmallGroup",
    "Cochain",
    "NotClosedError",
    "NotACocycleError",
    "UnsupportedShapeError",
    "BasisError",
    "Verdict",
    "solve_gf2",
    "gf2_rank",
    "is_coboundary",
    "check_certificate",
    "cohomology_dimension",
    "standard_class_basis",
    "class_coordinates",
    "restrict_cocycle",
]


class NotClosedError(ValueError):
    pass


class NotACocycleError(ValueError):
    pass


class UnsupportedShapeError(ValueError):
    pass


class BasisError(ValueError):
    pass


# linear algebra


def solve_gf2(rows: Sequence[int], rhs: Sequence[int], nvars: int):
    """Solve ``rows . x = rhs`` over GF(2).

    Returns ``(solution, None)`` with ``solution`` a list of bits, or
    ``(None, certificate)`` where ``certificate`` lists equation indices whose
    sum is ``0 = 1``.
    """
    pivots: dict[int, tuple[int, int, int]] = {}
    for k, (r, b) in enumerate(zip(rows, rhs)):
        combo = 1 << k
        b &= 1
        while r:
            c = (r & -r).bit_length() - 1
            hit = pivots.get(c)
            if hit is None:
                pivots[c] = (r, b, combo)
                break
            r ^= hit[0]
            b ^= hit[1]
            combo ^= hit[2]
        else:
            if b:
                return None, [i for i in range(len(rows)) if combo >> i & 1]
    x = [0] * nvars
    for c in sorted(pivots, reverse=True):
        r, b, _ = pivots[c]
        rest = r & ~(1 << c)
        acc = b
        while rest:
            j = (rest & -rest).bit_length() - 1
            acc ^= x[j]
            rest &= rest - 1
        x[c] = acc
    return x, None


def gf2_rank(rows: Sequence[int]) -> int:
    basis: dict[int, int] = {}
    for r in rows:
        while r:
            c = (r & -r).bit_length() - 1
            if c not in basis:
                basis[c] = r
                break
            r ^= basis[c]
    return len(basis)


# groups and cochains


@dataclass
class SmallGroup:
    """A finite group given by its multiplication table on ``0..order-1``."""

    labels: list
    table: list[list[int]]
    identity: int = 0
    name: str = ""

    def __post_init__(self):
        n = len(self.labels)
        if len(self.table) != n or any(len(row) != n for row in self.table):
            raise ValueError("multiplication table has the wrong shape")
        e = self.identity
        for a in range(n):
            if self.table[e][a] != a or self.table[a][e] != a:
                raise ValueError("identity element is not neutral")
        for a in range(n):
            if e not in self.table[a]:
                raise ValueError(f"element {a} has no inverse")
        for a, b, c in product(range(n), repeat=3):
            if self.table[self.table[a][b]][c] != self.table[a][self.table[b][c]]:
                raise ValueError("multiplication is not associative")
        self._inv = [self.table[a].index(e) for a in range(n)]

    @property
    def order(self) -> int:
        return len(self.labels)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self._inv[a]

    def power(self, a: int, k: int) -> int:
        out = self.identity
        for _ in range(k):
            out = self.table[out][a]
        return out

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != self.identity:
            x = self.table[x][a]
            k += 1
        return k

    def nonidentity(self) -> list[int]:
        return [a for a in range(self.order) if a != self.identity]

    def is_abelian(self) -> bool:
        n = self.order
        return all(self.table[a][b] == self.table[b][a] for a in range(n) for b in range(n))

    def shape(self) -> str:
        """``"1"``, ``"Z/n"`` or ``"Z/2xZ/2"``; anything else is ``"other"``."""
        n = self.order
        if n == 1:
            return "1"
        orders = [self.element_order(a) for a in range(n)]
        if n in orders:
            return f"Z/{n}"
        if n == 4 and self.is_abelian():
            return "Z/2xZ/2"
        return "other"

    def subgroups(self) -> list[frozenset[int]]:
        """All subgroups, by brute force over subsets (small groups only)."""
        if self.order > 16:
            raise ValueError("subgroup enumeration is brute force; group too large")
        out = []
        others = self.nonidentity()
        for bits in range(1 << len(others)):
            sub = {self.identity} | {others[i] for i in range(len(others)) if bits >> i & 1}
            if all(self.table[a][b] in sub for a in sub for b in sub):
                out.append(frozenset(sub))
        out.sort(key=lambda s: (len(s), sorted(s)))
        return out

    def subgroup(self, members) -> "SmallGroup":
        members = sorted(members, key=lambda a: (a != self.identity, a))
        index = {a: i for i, a in enumerate(members)}
        try:
            table = [[index[self.table[a][b]] for b in members] for a in members]
        except KeyError:
            raise NotClosedError("subset is not closed under multiplication") from None
        return SmallGroup([self.labels[a] for a in members], table, 0)

    @classmethod
    def from_elements(cls, elements: Sequence[Hashable], mul: Callable, name: str = ""):
        """Group on ``elements`` (first must be the identity) under ``mul``."""
        elements = list(elements)
        index = {x: i for i, x in enumerate(elements)}
        if len(index) != len(elements):
            raise ValueError("repeated elements")
        table = []
        for x in elements:
            row = []
            for y in elements:
                z = mul(x, y)
                if z not in index:
                    raise NotClosedError("elements are not closed under multiplication")
                row.append(index[z])
            table.append(row)
        ident = next((i for i in range(len(elements)) if all(table[i][j] == j for j in range(len(elements)))), None)
        if ident is None:
            raise NotClosedError("no identity element among the given elements")
        return cls(elements, table, ident, name)

    @classmethod
    def cyclic(cls, n: int) -> "SmallGroup":
        return cls(list(range(n)), [[(a + b) % n for b in range(n)] for a in range(n)], 0, f"Z/{n}")

    @classmethod
    def klein(cls) -> "SmallGroup":
        labels = [(0, 0), (1, 0), (0, 1), (1, 1)]
        idx = {v: i for i, v in enumerate(labels)}
        table = [[idx[(a[0] ^ b[0], a[1] ^ b[1])] for b in labels] for a in labels]
        return cls(labels, table, 0, "Z/2xZ/2")


@dataclass
class Cochain:
    """A normalized F2-valued cochain: ``values`` maps index tuples to bits.

    Tuples missing from ``values`` are 0.
    """

    group: SmallGroup
    degree: int
    values: dict[tuple[int, ...], int] = field(default_factory=dict)

    def __post_init__(self):
        self.values = {t: v & 1 for t, v in self.values.items() if v & 1}
        e = self.group.identity
        for t in self.values:
            if len(t) != self.degree:
                raise ValueError(f"tuple {t} has the wrong arity for degree {self.degree}")
            if e in t:
                raise ValueError(f"cochain is not normalized at {t}")

    def __call__(self, *t: int) -> int:
        return self.values.get(t, 0)

    def __add__(self, other: "Cochain") -> "Cochain":
        if other.degree != self.degree or other.group is not self.group:
            raise ValueError("cochains of different degree or group")
        keys = set(self.values) | set(other.values)
        return Cochain(self.group, self.degree, {t: self(*t) ^ other(*t) for t in keys})

    def __eq__(self, other):
        if not isinstance(other, Cochain):
            return NotImplemented
        return self.degree == other.degree and self.values == other.values

    def is_zero(self) -> bool:
        return not self.values

    def delta(self) -> "Cochain":
        """Coboundary with trivial coefficients."""
        G, n = self.group, self.degree
        out = {}
        for t in product(G.nonidentity(), repeat=n + 1):
            out[t] = _delta_terms_value(G, t, self)
        return Cochain(G, n + 1, out)

    def to_json(self) -> str:
        G, n = self.group, self.degree
        table = {",".join(map(str, t)): self(*t) for t in product(range(G.order), repeat=n)}
        return json.dumps(table, separators=(",", ":"))

    @classmethod
    def from_function(cls, G: SmallGroup, degree: int, f: Callable[..., int]) -> "Cochain":
        return cls(G, degree, {t: int(f(*t)) & 1 for t in product(G.nonidentity(), repeat=degree)})

    @classmethod
    def from_json(cls, G: SmallGroup, degree: int, text: str) -> "Cochain":
        raw = json.loads(text)
        vals = {}
        for k, v in raw.items():
            t = tuple(int(x) for x in k.split(",")) if k else ()
            if G.identity not in t:
                vals[t] = int(v)
        return cls(G, degree, vals)


def _delta_terms(G: SmallGroup, t: tuple[int, ...]) -> list[tuple[int, ...]]:
    """Arguments of lambda appearing in (delta lambda)(t), mod 2, identity terms dropped."""
    k = len(t)
    terms = [t[1:]]
    for j in range(1, k):
        terms.append(t[: j - 1] + (G.mul(t[j - 1], t[j]),) + t[j + 1 :])
    terms.append(t[:-1])
    e = G.identity
    return [u for u in terms if e not in u]


def _delta_terms_value(G, t, c: Cochain) -> int:
    acc = 0
    for u in _delta_terms(G, t):
        acc ^= c(*u)
    return acc


def _normalized_tuples(G: SmallGroup, n: int):
    return list(product(G.nonidentity(), repeat=n))


def _delta_rows(G: SmallGroup, n: int):
    """Rows of delta: C^(n-1) -> C^n on normalized cochains, with the variable index."""
    var_index = {u: i for i, u in enumerate(_normalized_tuples(G, n - 1))}
    eqs = _normalized_tuples(G, n)
    rows = []
    for t in eqs:
        r = 0
        for u in _delta_terms(G, t):
            r ^= 1 << var_index[u]
        rows.append(r)
    return eqs, rows, var_index


@dataclass
class Verdict:
    trivial: bool
    witness: Cochain | None = None
    certificate: list[tuple[int, ...]] | None = None

    def __bool__(self):
        return self.trivial


def is_coboundary(c: Cochain) -> Verdict:
    """Decide whether the cocycle ``c`` equals ``delta(lambda)`` for a normalized ``lambda``."""
    if not c.delta().is_zero():
        raise NotACocycleError("input is not a cocycle")
    G, n = c.group, c.degree
    if n == 0:
        return Verdict(c.is_zero(), Cochain(G, 0) if c.is_zero() else None, None if c.is_zero() else [()])
    eqs, rows, var_index = _delta_rows(G, n)
    rhs = [c(*t) for t in eqs]
    sol, cert = solve_gf2(rows, rhs, len(var_index))
    if sol is None:
        return Verdict(False, certificate=[eqs[i] for i in cert])
    witness = Cochain(G, n - 1, {u: sol[i] for u, i in var_index.items()})
    return Verdict(True, witness=witness)


def check_certificate(c: Cochain, certificate: Sequence[tuple[int, ...]]) -> bool:
    """True when the listed equations of ``c = delta(lambda)`` sum to ``0 = 1``."""
    G = c.group
    coeffs: dict[tuple[int, ...], int] = {}
    total = 0
    for t in certificate:
        for u in _delta_terms(G, t):
            coeffs[u] = coeffs.get(u, 0) ^ 1
        total ^= c(*t)
    return total == 1 and not any(coeffs.values())


def cohomology_dimension(G: SmallGroup, n: int) -> int:
    """dim H^n(G, F2) from the ranks of the normalized coboundary maps."""
    if n < 1:
        raise ValueError("degree must be positive")
    size_n = (G.order - 1) ** n
    # rank of delta: C^n -> C^(n+1)
    _, rows_up, _ = _delta_rows(G, n + 1)
    rank_up = gf2_rank(rows_up)
    if n == 1:
        rank_down = 0
    else:
        _, rows_down, _ = _delta_rows(G, n)
        rank_down = gf2_rank(rows_down)
    return size_n - rank_up - rank_down


# standard representatives


def _cyclic_coordinate(G: SmallGroup, generator: int | None):
    n = G.order
    if generator is None:
        generator = next(a for a in range(n) if G.element_order(a) == n)
    elif G.element_order(generator) != n:
        raise UnsupportedShapeError("given generator does not generate the group")
    coord = {}
    x = G.identity
    for a in range(n):
        coord[x] = a
        x = G.mul(x, generator)
    return coord


def standard_class_basis(G: SmallGroup, generator: int | None = None, klein_coords: dict | None = None):
    """Degree-3 cocycles whose classes form a basis of H^3(G, F2).

    Cyclic groups ``Z/n``: for even n the single class ``x u y`` with
    ``x(a) = a mod 2`` and ``y(a, b)`` the carry of ``a + b``; odd n gives an
    empty basis.  ``Z/2 x Z/2``: the four cup products in the order
    ``(eta^3 (x) 1, eta^2 (x) eta, eta (x) eta^2, 1 (x) eta^3)``, with
    ``klein_coords`` mapping each element index to its bit pair.
    """
    shape = G.shape()
    if shape == "1":
        return []
    if shape.startswith("Z/") and "x" not in shape:
        n = G.order
        if n % 2:
            return []
        coord = _cyclic_coordinate(G, generator)

        def xy(a, b, c):
            return (coord[a] % 2) * ((coord[b] + coord[c]) >= n)

        return [Cochain.from_function(G, 3, xy)]
    if shape == "Z/2xZ/2":
        if klein_coords is None:
            gens = G.nonidentity()[:2]
            klein_coords = {G.identity: (0, 0), gens[0]: (1, 0), gens[1]: (0, 1)}
            klein_coords[G.mul(gens[0], gens[1])] = (1, 1)
        if sorted(klein_coords.values()) != [(0, 0), (0, 1), (1, 0), (1, 1)]:
            raise UnsupportedShapeError("klein_coords must be a bijection onto F2^2")
        for a in range(4):
            for b in range(4):
                pa, pb, pab = klein_coords[a], klein_coords[b], klein_coords[G.mul(a, b)]
                if pab != (pa[0] ^ pb[0], pa[1] ^ pb[1]):
                    raise UnsupportedShapeError("klein_coords is not a homomorphism")
        basis = []
        for a in (3, 2, 1, 0):

            def cup(x, y, z, a=a):
                args = (x, y, z)
                v = 1
                for i, g in enumerate(args):
                    v &= klein_coords[g][0] if i < a else klein_coords[g][1]
                return v

            basis.append(Cochain.from_function(G, 3, cup))
        return basis
    raise UnsupportedShapeError(f"no standard basis for a group of shape {shape}")


def class_coordinates(c: Cochain, basis: Sequence[Cochain]) -> tuple[int, ...]:
    """The unique bits ``v`` with ``c - sum v_i basis_i`` a coboundary."""
    if not c.delta().is_zero():
        raise NotACocycleError("input is not a cocycle")
    G, n = c.group, c.degree
    eqs, rows, var_index = _delta_rows(G, n)
    nv = len(var_index)
    k = len(basis)
    full = []
    for t, r in zip(eqs, rows):
        for i, b in enumerate(basis):
            if b(*t):
                r ^= 1 << (nv + i)
        full.append(r)
    # independence of the basis modulo coboundaries
    if gf2_rank(full) != gf2_rank(rows) + k:
        raise BasisError("basis classes are linearly dependent in cohomology")
    sol, _ = solve_gf2(full, [c(*t) for t in eqs], nv + k)
    if sol is None:
        raise BasisError("basis does not span the class of the cochain")
    return tuple(sol[nv:])


def restrict_cocycle(system, n: int, subgroup_elements, evaluate=None) -> Cochain:
    """Tabulate epsilon_n on a subgroup of W as a normalized F2 cochain.

    ``subgroup_elements`` are group elements; the identity is moved to the
    front.  ``evaluate`` defaults to the chamber evaluator.
    """
    from .cocycles import eval_epsilon
    from .coxeter import compose

    elems = list(dict.fromkeys(subgroup_elements))
    if not elems:
        raise NotClosedError("empty subgroup")
    for x in elems:
        if x.system is not system:
            raise ValueError("element from another system")
    elems.sort(key=lambda x: not x.is_identity())
    if not elems[0].is_identity():
        raise NotClosedError("subgroup must contain the identity")
    G = SmallGroup.from_elements(elems, compose)
    ev = evaluate or (lambda ts: eval_epsilon(n, ts))
    values = {}
    for t in product(G.nonidentity(), repeat=n):
        values[t] = int(ev(tuple(elems[i] for i in t))) & 1
    return Cochain(G, n, values)
