"""Type descriptors and the realization data of finite irreducible Coxeter types.

Classical types are realized with Bourbaki's coordinates: ``A_{n-1}`` in the
sum-zero hyperplane of Z^n, ``B_n``, ``C_n``, ``D_n`` as signed-coordinate
roots in Z^n.  E, F, G are given by their symmetrized Cartan matrices on the
root lattice and H3/H4 by their Gram matrices over Z[phi].  ``I2(m)`` carries
no coordinates at all (see ``coxeter._dihedral_factor``).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from math import factorial

from .scalars import PHI, Golden

__all__ = [
    "FactorType",
    "UnknownTypeError",
    "parse_descriptor",
    "group_order",
    "positive_root_count",
    "ambient_simple_roots",
    "simple_gram",
]


class UnknownTypeError(ValueError):
    pass


@dataclass(frozen=True)
class FactorType:
    letter: str
    rank: int
    m: int | None = None  # only for I2(m)

    def __str__(self):
        if self.letter == "I":
            return f"I2({self.m})"
        return f"{self.letter}{self.rank}"

    @property
    def is_weyl(self) -> bool:
        return self.letter in "ABCDEFG"

    @property
    def is_dihedral(self) -> bool:
        return self.letter == "I"


_FACTOR_RE = re.compile(r"^([A-Ia-i])\s*(\d+)\s*(?:\(\s*(\d+)\s*\))?$")


def _factor(text: str) -> FactorType:
    m = _FACTOR_RE.match(text.strip())
    if not m:
        raise UnknownTypeError(f"cannot parse type {text!r}")
    letter, rank, param = m.group(1).upper(), int(m.group(2)), m.group(3)
    if letter == "I":
        if rank != 2 or param is None:
            raise UnknownTypeError(f"dihedral type must be written I2(m), got {text!r}")
        mm = int(param)
        if mm < 2:
            raise UnknownTypeError(f"I2(m) needs m >= 2, got {mm}")
        return FactorType("I", 2, mm)
    if param is not None:
        raise UnknownTypeError(f"unexpected parameter in {text!r}")
    ok = {
        "A": rank >= 1,
        "B": rank >= 2,
        "C": rank >= 2,
        "D": rank >= 3,
        "E": rank in (6, 7, 8),
        "F": rank == 4,
        "G": rank == 2,
        "H": rank in (3, 4),
    }
    if not ok.get(letter, False):
        raise UnknownTypeError(f"unsupported type {letter}{rank}")
    return FactorType(letter, rank)


def parse_descriptor(text: str) -> tuple[FactorType, ...]:
    """Parse ``"A3"``, ``"I2(5)"``, ``"A1xA2"`` (also ``×`` or ``*``) into factors.

    Raw Coxeter matrices are rejected.
    """
    if not isinstance(text, str) or not text.strip():
        raise UnknownTypeError("empty type descriptor")
    if "[" in text or ";" in text:
        raise UnknownTypeError("raw Coxeter matrices are not supported; use a type name")
    parts = re.split(r"\s*[x×*]\s*", text.strip())
    return tuple(_factor(p) for p in parts)


def group_order(f: FactorType) -> int:
    n = f.rank
    if f.letter == "A":
        return factorial(n + 1)
    if f.letter in "BC":
        return 2**n * factorial(n)
    if f.letter == "D":
        return 2 ** (n - 1) * factorial(n)
    if f.letter == "I":
        return 2 * f.m
    return {
        ("E", 6): 51840,
        ("E", 7): 2903040,
        ("E", 8): 696729600,
        ("F", 4): 1152,
        ("G", 2): 12,
        ("H", 3): 120,
        ("H", 4): 14400,
    }[(f.letter, n)]


def positive_root_count(f: FactorType) -> int:
    n = f.rank
    if f.letter == "A":
        return n * (n + 1) // 2
    if f.letter in "BC":
        return n * n
    if f.letter == "D":
        return n * (n - 1)
    if f.letter == "I":
        return f.m
    return {
        ("E", 6): 36,
        ("E", 7): 63,
        ("E", 8): 120,
        ("F", 4): 24,
        ("G", 2): 6,
        ("H", 3): 15,
        ("H", 4): 60,
    }[(f.letter, n)]


def _unit(n, i, c=1):
    v = [0] * n
    v[i] = c
    return v


def ambient_simple_roots(f: FactorType):
    """Simple roots in ambient coordinates plus the ambient Gram matrix.

    Returns ``None`` for ``I2(m)``.
    """
    n = f.rank
    if f.letter == "A":
        dim = n + 1
        roots = []
        for i in range(n):
            v = _unit(dim, i)
            v[i + 1] = -1
            roots.append(tuple(v))
        return roots, _identity(dim)
    if f.letter in "BCD":
        roots = []
        for i in range(n - 1):
            v = _unit(n, i)
            v[i + 1] = -1
            roots.append(tuple(v))
        if f.letter == "B":
            roots.append(tuple(_unit(n, n - 1)))
        elif f.letter == "C":
            roots.append(tuple(_unit(n, n - 1, 2)))
        else:
            v = _unit(n, n - 1)
            v[n - 2] = 1
            roots.append(tuple(v))
        return roots, _identity(n)
    if f.letter == "I":
        return None
    gram = simple_gram(f)
    return [tuple(_unit(n, i)) for i in range(n)], gram


def _identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


# Bourbaki numbering, 0-based edges
_E_EDGES = [(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 3)]


def simple_gram(f: FactorType):
    """Gram matrix of the simple roots for the non-classical coordinate models."""
    n = f.rank
    if f.letter == "E":
        g = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
        for i, j in _E_EDGES:
            if i < n and j < n:
                g[i][j] = g[j][i] = -1
        return g
    if f.letter == "F":
        # alpha1, alpha2 long; alpha3, alpha4 short
        return [[4, -2, 0, 0], [-2, 4, -2, 0], [0, -2, 2, -1], [0, 0, -1, 2]]
    if f.letter == "G":
        # alpha1 short, alpha2 long
        return [[2, -3], [-3, 6]]
    if f.letter == "H":
        two, one, mphi = Golden(2), Golden(-1), -PHI
        if n == 3:
            # 1 -5- 2 -3- 3
            return [[two, mphi, 0], [mphi, two, one], [0, one, two]]
        return [
            [two, mphi, 0, 0],
            [mphi, two, one, 0],
            [0, one, two, one],
            [0, 0, one, two],
        ]
    raise UnknownTypeError(f"no Gram matrix model for {f}")
