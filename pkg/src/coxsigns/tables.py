"""Dense tables over an enumerated group, for exhaustive sweeps.

Elements are indexed in the breadth-first order of ``CoxeterSystem.elements``
(identity at index 0).  Wall masks fit in ``uint64``, which covers every
finite type whose group is small enough to tabulate.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .coxeter import CoxeterSystem, GroupElement, build_system

__all__ = ["GroupTable", "group_table", "epsilon_counts", "delta_epsilon", "additive_pair_mask"]


@dataclass
class GroupTable:
    system: CoxeterSystem
    elements: list[GroupElement]
    index: dict[tuple, int]
    mul: np.ndarray
    inv: np.ndarray
    length: np.ndarray
    mask: np.ndarray
    _eps_cache: dict = field(default_factory=dict, repr=False)

    @property
    def order(self) -> int:
        return len(self.elements)

    def idx(self, w: GroupElement) -> int:
        return self.index[w.perm]

    def epsilon(self, n: int) -> np.ndarray:
        """Alternating-wall counts on all n-tuples, shape ``(N,) * n`` (cached)."""
        if n not in self._eps_cache:
            self._eps_cache[n] = epsilon_counts(self, n)
        return self._eps_cache[n]


def group_table(system: CoxeterSystem | str) -> GroupTable:
    if isinstance(system, str):
        system = build_system(system)
    if system.npos > 64:
        raise ValueError(f"{system.descriptor}: more than 64 walls, masks do not fit in uint64")
    els = system.elements()
    N = len(els)
    index = {w.perm: i for i, w in enumerate(els)}
    perms = np.array([w.perm for w in els], dtype=np.int32)
    # an element is determined by where it sends the simple roots
    r = system.rank
    lookup = {tuple(p[:r]): i for i, p in enumerate(perms.tolist())}
    mul = np.empty((N, N), dtype=np.int32)
    for a in range(N):
        prod = perms[a][perms[:, :r]]  # row b: a*b on the simple roots
        mul[a] = [lookup[tuple(p)] for p in prod.tolist()]
    inv = np.argmax(mul == 0, axis=1).astype(np.int32)
    length = np.array([w.length for w in els], dtype=np.int32)
    mask = np.array([w.mask for w in els], dtype=np.uint64)
    return GroupTable(system, els, index, mul, inv, length, mask)


def epsilon_counts(T: GroupTable, n: int) -> np.ndarray:
    """Number of alternating walls for every n-tuple of indices."""
    N = T.order
    if N**n > 50_000_000:
        raise ValueError(f"{N}^{n} entries is too many to tabulate")
    prefix = np.arange(N)
    prev = T.mask[prefix]
    alt = prev.copy()
    for _ in range(1, n):
        prefix = T.mul[prefix[..., None], np.arange(N)]
        cur = T.mask[prefix]
        alt = alt[..., None] & (prev[..., None] ^ cur)
        prev = cur
    return np.bitwise_count(alt).astype(np.int64)


def delta_epsilon(T: GroupTable, n: int, cols=None) -> np.ndarray:
    """Values of the coboundary of epsilon_n on (n+1)-tuples.

    ``cols`` is a list of n+1 broadcastable index arrays; by default the
    full open grid, i.e. every (n+1)-tuple.  For odd n the result is reduced
    mod 2.
    """
    E = T.epsilon(n)
    k = n + 1
    if cols is None:
        cols = [np.arange(T.order).reshape((1,) * i + (-1,) + (1,) * (k - 1 - i)) for i in range(k)]
    total = E[tuple(cols[1:])]
    for j in range(1, k):
        merged = cols[: j - 1] + [T.mul[cols[j - 1], cols[j]]] + cols[j + 1 :]
        total = total + (-1) ** j * E[tuple(merged)]
    total = total + (-1) ** k * E[tuple(cols[:-1])]
    if n % 2:
        total = total % 2
    return total


def additive_pair_mask(T: GroupTable, n: int) -> np.ndarray:
    """Boolean array over n-tuples: some adjacent pair multiplies without cancellation."""
    k = n
    cols = [np.arange(T.order).reshape((1,) * i + (-1,) + (1,) * (k - 1 - i)) for i in range(k)]
    out = np.zeros((T.order,) * n, dtype=bool)
    L = T.length
    for i in range(n - 1):
        a, b = cols[i], cols[i + 1]
        out |= L[a] + L[b] == L[T.mul[a, b]]
    return out
