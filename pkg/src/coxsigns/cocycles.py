"""The universal collapsing cocycles Z_n and the higher signs epsilon_n.

Chambers are never built.  The chamber ``wC0`` lies on the negative side of
the wall of a positive root ``a`` exactly when ``w^-1 a`` is negative, so the
walls crossed between ``C0`` and ``wC0`` are the bits of ``GroupElement.mask``
and the side data of a whole chamber sequence is a list of integers.
"""

from __future__ import annotations

import json
from functools import lru_cache
from typing import Callable, Sequence

from .coxeter import (
    CoxeterSystem,
    GroupElement,
    SystemMismatchError,
    compose,
    conjugate_reflection,
    reduced_word,
)

__all__ = [
    "F2",
    "HalfSpaceChain",
    "ArityError",
    "prefix_products",
    "alternating_walls",
    "eval_Z",
    "eval_epsilon",
    "eval_epsilon_tilde",
    "coboundary",
    "cup_power_mu",
    "lift_Z_tilde",
    "p_plus",
    "p_minus",
    "theta",
    "bockstein_check",
    "ExtensionElement",
    "extension_multiply",
]

PLUS, MINUS = 1, -1


class ArityError(ValueError):
    pass


class F2(int):
    """An element of the field with two elements."""

    def __new__(cls, value=0):
        return super().__new__(cls, int(value) & 1)

    def __add__(self, other):
        return F2(int(self) + int(other))

    __radd__ = __add__

    def __sub__(self, other):
        return F2(int(self) - int(other))

    def __rsub__(self, other):
        return F2(int(other) - int(self))

    def __neg__(self):
        return self

    def __mul__(self, other):
        return F2(int(self) * int(other))

    __rmul__ = __mul__

    def __repr__(self):
        return f"F2({int(self)})"


def _check_arity(n, ts):
    if n < 1:
        raise ArityError(f"degree must be positive, got {n}")
    if len(ts) != n:
        raise ArityError(f"expected a {n}-tuple, got {len(ts)} entries")
    for x in ts[1:]:
        if x.system is not ts[0].system:
            raise SystemMismatchError("tuple entries come from different systems")


def prefix_products(ts: Sequence[GroupElement]) -> list[GroupElement]:
    """``[1, x1, x1 x2, ..., x1...xn]``."""
    out = [ts[0].system.identity]
    for x in ts:
        out.append(compose(out[-1], x))
    return out


def _alternating_mask(ts) -> int:
    prefixes = prefix_products(ts)
    alt = -1
    prev = 0
    for p in prefixes[1:]:
        m = p.mask
        alt &= prev ^ m
        prev = m
        if not alt:
            break
    return alt


def _bits(m: int):
    k = 0
    while m:
        if m & 1:
            yield k
        m >>= 1
        k += 1


def alternating_walls(ts: Sequence[GroupElement]) -> frozenset[int]:
    """Walls H for which the chambers C_i = x1...xi C0 alternate sides of H."""
    if not ts:
        raise ArityError("empty tuple")
    return frozenset(_bits(_alternating_mask(ts)))


class HalfSpaceChain:
    """A finite integer combination of reflecting half-spaces.

    Terms are keyed by ``(wall, side)`` with ``side`` +1 for the half-space
    containing C0 and -1 for the other one.
    """

    __slots__ = ("system", "terms")

    def __init__(self, system: CoxeterSystem, terms: dict | None = None):
        self.system = system
        self.terms = {k: v for k, v in (terms or {}).items() if v}
        for wall, side in self.terms:
            if not 0 <= wall < system.npos or side not in (PLUS, MINUS):
                raise ValueError(f"bad half-space key {(wall, side)!r}")

    @classmethod
    def zero(cls, system):
        return cls(system)

    def coefficient(self, wall: int, side: int) -> int:
        return self.terms.get((wall, side), 0)

    def _combine(self, other, sgn):
        if self.system is not other.system:
            raise SystemMismatchError("chains over different systems")
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + sgn * v
        return HalfSpaceChain(self.system, out)

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        return self._combine(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return HalfSpaceChain(self.system, {k: -v for k, v in self.terms.items()})

    def __mul__(self, c):
        if isinstance(c, HalfSpaceChain):
            return self.product(c)
        return HalfSpaceChain(self.system, {k: c * v for k, v in self.terms.items()})

    def __rmul__(self, c):
        return HalfSpaceChain(self.system, {k: c * v for k, v in self.terms.items()})

    def product(self, other: "HalfSpaceChain") -> "HalfSpaceChain":
        """Product making the half-spaces orthogonal idempotents."""
        return HalfSpaceChain(
            self.system,
            {k: v * other.terms[k] for k, v in self.terms.items() if k in other.terms},
        )

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return not self.terms
        if not isinstance(other, HalfSpaceChain):
            return NotImplemented
        return self.system is other.system and self.terms == other.terms

    def __bool__(self):
        return bool(self.terms)

    def act(self, w: GroupElement) -> "HalfSpaceChain":
        """``w . [D^e_H] = [D^(e nu)_(wH)]`` with nu the sign of ``w(root_H)``."""
        if w.system is not self.system:
            raise SystemMismatchError("element and chain from different systems")
        npos = self.system.npos
        out = {}
        for (wall, side), v in self.terms.items():
            img = w.perm[wall]
            if img < npos:
                out[(img, side)] = v
            else:
                out[(img - npos, -side)] = v
        return HalfSpaceChain(self.system, out)

    def sigma(self) -> "HalfSpaceChain":
        """Swap the two half-spaces of every wall."""
        return HalfSpaceChain(self.system, {(w, -s): v for (w, s), v in self.terms.items()})

    def is_plus_part(self) -> bool:
        return self.sigma() == self

    def is_minus_part(self) -> bool:
        return self.sigma() == -self

    def walls(self) -> set[int]:
        return {w for w, _ in self.terms}

    def to_json_obj(self) -> dict:
        rows = []
        for wall in self.walls():
            rows.append(
                {
                    "root": self.system.root_json(wall),
                    "plus": self.coefficient(wall, PLUS),
                    "minus": self.coefficient(wall, MINUS),
                }
            )
        rows.sort(key=lambda r: [str(x) if not isinstance(x, int) else x for x in r["root"]])
        return {"walls": rows}

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True, separators=(",", ":"))

    def __repr__(self):
        body = " + ".join(
            f"{v}[D{'+' if s > 0 else '-'}_{w}]" for (w, s), v in sorted(self.terms.items())
        )
        return f"HalfSpaceChain({body or '0'})"


def _sgn_pow(k: int) -> int:
    return -1 if k % 2 else 1


def eval_Z(n: int, ts: Sequence[GroupElement]) -> HalfSpaceChain:
    """Z_n(x1, ..., xn) as an element of Z[D]."""
    _check_arity(n, ts)
    cp, cm = _sgn_pow(n // 2), _sgn_pow((n + 1) // 2)
    terms = {}
    for wall in _bits(_alternating_mask(ts)):
        terms[(wall, PLUS)] = cp
        terms[(wall, MINUS)] = cm
    return HalfSpaceChain(ts[0].system, terms)


def lift_Z_tilde(n: int, ts: Sequence[GroupElement]) -> HalfSpaceChain:
    """Plus-side lift of Z_n to Z[D]."""
    _check_arity(n, ts)
    c = _sgn_pow(n // 2)
    return HalfSpaceChain(ts[0].system, {(w, PLUS): c for w in _bits(_alternating_mask(ts))})


def p_plus(c: HalfSpaceChain) -> HalfSpaceChain:
    return c + c.sigma()


def p_minus(c: HalfSpaceChain) -> HalfSpaceChain:
    return c - c.sigma()


def theta(n: int, c: HalfSpaceChain) -> int:
    """Send every half-space to (-1)^(n/2), n even."""
    if n % 2:
        raise ValueError("theta is defined for even degree")
    return _sgn_pow(n // 2) * sum(c.terms.values())


def _sign_value(n, count):
    return F2(count) if n % 2 else count


@lru_cache(maxsize=1 << 16)
def _reflection_set(w: GroupElement) -> frozenset[int]:
    # T_w from a reduced word s_{i1}...s_{ik}: the roots s_{i1}...s_{i(j-1)}(alpha_{ij})
    system = w.system
    out = set()
    prefix = system.identity
    for i in reduced_word(w):
        out.add(conjugate_reflection(prefix, i - 1))
        prefix = compose(prefix, system.gens[i - 1])
    return frozenset(out)


def _inversion_count(ts) -> int:
    prefix = ts[0].system.identity
    common = None
    for x in ts:
        moved = {conjugate_reflection(prefix, t) for t in _reflection_set(x)}
        common = moved if common is None else common & moved
        if not common:
            return 0
        prefix = compose(prefix, x)
    return len(common)


def eval_epsilon(n: int, ts: Sequence[GroupElement], backend: str = "chamber"):
    """epsilon_n(x1, ..., xn): an ``int`` for even n and an :class:`F2` for odd n.

    ``backend="chamber"`` counts alternating walls from the chamber side data;
    ``backend="inversion"`` intersects translated reflection sets built from
    reduced words.  The two share no code beyond group multiplication.
    """
    _check_arity(n, ts)
    if backend == "chamber":
        return _sign_value(n, _alternating_mask(ts).bit_count())
    if backend == "inversion":
        return _sign_value(n, _inversion_count(ts))
    raise ValueError(f"unknown backend {backend!r}")


def eval_epsilon_tilde(n: int, ts: Sequence[GroupElement]) -> dict[int, int]:
    """Refinement of epsilon_n by wall orbits.

    Keys are orbit labels (smallest simple generator index in the orbit);
    values are ``int`` for even n, :class:`F2` for odd n.
    """
    _check_arity(n, ts)
    orbit = ts[0].system.wall_orbits
    out: dict[int, int] = {}
    for wall in _bits(_alternating_mask(ts)):
        out[orbit[wall]] = out.get(orbit[wall], 0) + 1
    return {k: _sign_value(n, v) for k, v in out.items() if _sign_value(n, v)}


def coboundary(
    f: Callable[[tuple], object],
    ts: Sequence[GroupElement],
    act: Callable[[GroupElement, object], object] | None = None,
):
    """Inhomogeneous coboundary of the cochain ``f`` evaluated at ``ts``.

    ``f`` takes a tuple of group elements; ``act`` is the module action
    (trivial when omitted).
    """
    ts = tuple(ts)
    k = len(ts)
    if k < 1:
        raise ArityError("coboundary needs at least one argument")
    head = f(ts[1:])
    total = head if act is None else act(ts[0], head)
    for j in range(1, k):
        merged = ts[: j - 1] + (compose(ts[j - 1], ts[j]),) + ts[j + 1 :]
        total = total + _sgn_pow(j) * f(merged)
    total = total + _sgn_pow(k) * f(ts[:-1])
    return total


def chain_action(w: GroupElement, c: HalfSpaceChain) -> HalfSpaceChain:
    return c.act(w)


def Z1(x: GroupElement) -> HalfSpaceChain:
    return eval_Z(1, (x,))


def cup_power_mu(n: int, ts: Sequence[GroupElement]) -> HalfSpaceChain:
    """``Z1(x1) . x1 Z1(x2) . ... . x1...x(n-1) Z1(xn)`` in the idempotent product."""
    _check_arity(n, ts)
    prefix = ts[0].system.identity
    out = None
    for x in ts:
        term = Z1(x).act(prefix)
        out = term if out is None else out.product(term)
        prefix = compose(prefix, x)
    return out


def bockstein_check(n: int, ts: Sequence[GroupElement]) -> bool:
    """Check ``delta(theta_(n+1) o Ztilde_n)(ts) == -2 epsilon_(n+1)(ts)`` for odd n."""
    if n % 2 == 0:
        raise ValueError("the Bockstein identity is stated for odd n")
    _check_arity(n + 1, ts)

    def lifted(args):
        if not args:
            raise ArityError("empty argument")
        return theta(n + 1, lift_Z_tilde(n, args))

    lhs = coboundary(lifted, ts)
    return lhs == -2 * eval_epsilon(n + 1, ts)


class ExtensionElement:
    """An element ``(a, x)`` of the extension of W by Z[walls] defined by Z_2."""

    __slots__ = ("chain", "x")

    def __init__(self, chain: dict[int, int], x: GroupElement):
        npos = x.system.npos
        for wall in chain:
            if not 0 <= wall < npos:
                raise ValueError(f"wall {wall} out of range")
        self.chain = {k: v for k, v in chain.items() if v}
        self.x = x

    def __eq__(self, other):
        if not isinstance(other, ExtensionElement):
            return NotImplemented
        return self.x == other.x and self.chain == other.chain

    def __hash__(self):
        return hash((self.x, tuple(sorted(self.chain.items()))))

    def __mul__(self, other):
        return extension_multiply(self, other)

    def __repr__(self):
        return f"ExtensionElement({self.chain}, {self.x!r})"


def _act_walls(x: GroupElement, chain: dict[int, int]) -> dict[int, int]:
    pos = x.system.positive
    return {pos(x.perm[w]): v for w, v in chain.items()}


def fold_plus_part(c: HalfSpaceChain) -> dict[int, int]:
    """Identify ``[D+_H] + [D-_H]`` with ``[H]`` on a sigma-invariant chain."""
    if not c.is_plus_part():
        raise ValueError("chain is not sigma-invariant")
    return {w: v for (w, s), v in c.terms.items() if s == PLUS}


def extension_multiply(p: ExtensionElement, q: ExtensionElement) -> ExtensionElement:
    """``(a, x)(b, y) = (a + x.b + Z2(x, y), xy)``."""
    if p.x.system is not q.x.system:
        raise SystemMismatchError("extension elements over different systems")
    out = dict(p.chain)
    for w, v in _act_walls(p.x, q.chain).items():
        out[w] = out.get(w, 0) + v
    for w, v in fold_plus_part(eval_Z(2, (p.x, q.x))).items():
        out[w] = out.get(w, 0) + v
    return ExtensionElement(out, compose(p.x, q.x))
