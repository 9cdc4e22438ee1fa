"""Verification sweeps for the sign cocycles.

Every check takes a system, a degree and a :class:`SweepConfig` and returns
a :class:`CheckResult`.  Tuples are enumerated exhaustively when the count
fits under ``exhaustive_limit`` (or when forced), and are otherwise drawn
from a seeded generator.  Checks whose hypothesis singles out special tuples
(collapsing, windows) enumerate the free entries rather than filtering.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import permutations, product
from typing import Callable, Iterator

import numpy as np

from .cocycles import (
    ExtensionElement,
    bockstein_check,
    chain_action,
    coboundary,
    cup_power_mu,
    eval_epsilon,
    eval_Z,
    lift_Z_tilde,
)
from .coxeter import (
    CoxeterSystem,
    GroupElement,
    build_system,
    compose,
    diagram_automorphism,
    element_of,
    format_tuple,
    invert,
    reduced_word,
)
from .tables import additive_pair_mask, delta_epsilon, group_table

ENUMERABLE = 200_000


@dataclass(frozen=True)
class SweepConfig:
    samples: int = 10_000
    seed: int = 0
    exhaustive_limit: int = 10**7  # table-backed sweeps
    scalar_limit: int = 200_000  # sweeps evaluated tuple by tuple
    exhaustive: bool = False  # force full enumeration
    max_failures: int = 5


@dataclass
class CheckResult:
    name: str
    type: str
    n: int | None
    mode: str
    checked: int
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures and (self.checked > 0 or self.skipped)

    @property
    def skipped(self) -> bool:
        return self.mode == "n/a"

    def line(self) -> str:
        deg = "" if self.n is None else f" n={self.n}"
        status = "SKIP" if self.skipped else ("PASS" if self.passed else "FAIL")
        return f"{status} {self.name} {self.type}{deg} [{self.mode}, {self.checked} cases]"

    def to_json_obj(self) -> dict:
        return {
            "check": self.name,
            "type": self.type,
            "n": self.n,
            "mode": self.mode,
            "checked": self.checked,
            "passed": self.passed,
            "failures": self.failures,
        }


class _Recorder:
    def __init__(self, name, system, n, mode, cfg):
        self.result = CheckResult(name, system.descriptor, n, mode, 0)
        self.cfg = cfg

    def check(self, ok: bool, ts=None, note=""):
        self.result.checked += 1
        if not ok and len(self.result.failures) < self.cfg.max_failures:
            text = format_tuple(ts) if ts is not None else ""
            self.result.failures.append(f"{text} {note}".strip())


# tuple sources


def random_element(system: CoxeterSystem, rng: random.Random) -> GroupElement:
    if system.order <= ENUMERABLE:
        els = system.elements()
        return els[rng.randrange(len(els))]
    gens = _gen_arrays.get(id(system))
    if gens is None or gens[0] is not system:
        gens = (system, [np.array(g.perm, dtype=np.int32) for g in system.gens])
        _gen_arrays[id(system)] = gens
    perm = np.arange(2 * system.npos, dtype=np.int32)
    for _ in range(rng.randrange(2 * system.npos + 1)):
        perm = perm[gens[1][rng.randrange(system.rank)]]
    return GroupElement(system, tuple(perm.tolist()))


_gen_arrays: dict = {}


def _exhaustive(system, free: int, cfg: SweepConfig, table: bool = False) -> bool:
    if system.order > ENUMERABLE:
        return False
    limit = cfg.exhaustive_limit if table else cfg.scalar_limit
    return cfg.exhaustive or system.order**free <= limit


def tuples(system: CoxeterSystem, k: int, cfg: SweepConfig) -> tuple[str, Iterator[tuple]]:
    """``(mode, iterator)`` over k-tuples of elements."""
    if _exhaustive(system, k, cfg):
        return "exhaustive", product(system.elements(), repeat=k)
    rng = random.Random(cfg.seed)

    def gen():
        for _ in range(cfg.samples):
            yield tuple(random_element(system, rng) for _ in range(k))

    return "sampled", gen()


def _split_additive(w: GroupElement, rng: random.Random):
    word = reduced_word(w)
    k = rng.randrange(len(word) + 1)
    return element_of(w.system, word[:k]), element_of(w.system, word[k:])


def _eq_mod(n, a, b) -> bool:
    return (int(a) - int(b)) % 2 == 0 if n % 2 else int(a) == int(b)


# checks on cocycles


def check_cocycle_eps(system, n, cfg):
    """delta epsilon_n = 0 (tables when exhaustive)."""
    if _exhaustive(system, n + 1, cfg, table=True) and system.npos <= 64 and system.order**n <= 5 * 10**7:
        T = group_table(system)
        d = delta_epsilon(T, n)
        rec = _Recorder("cocycle-eps", system, n, "exhaustive", cfg)
        rec.result.checked = int(d.size)
        for idx in np.argwhere(d != 0)[: cfg.max_failures]:
            rec.result.failures.append(format_tuple(T.elements[i] for i in idx))
        return rec.result
    mode, it = tuples(system, n + 1, cfg)
    rec = _Recorder("cocycle-eps", system, n, mode, cfg)
    f = lambda a: eval_epsilon(n, a)  # noqa: E731
    for ts in it:
        rec.check(_eq_mod(n, coboundary(f, ts), 0), ts)
    return rec.result


def check_cocycle_z(system, n, cfg):
    """delta Z_n = 0 with the W-action on half-spaces."""
    mode, it = tuples(system, n + 1, cfg)
    rec = _Recorder("cocycle-z", system, n, mode, cfg)
    f = lambda a: eval_Z(n, a)  # noqa: E731
    for ts in it:
        rec.check(not coboundary(f, ts, chain_action), ts)
    return rec.result


def check_collapsing(system, n, cfg):
    """Z_n and epsilon_n vanish when an adjacent pair multiplies without cancellation."""
    if n < 2:
        raise ValueError("collapsing needs n >= 2")
    if _exhaustive(system, n, cfg, table=True) and system.npos <= 64 and system.order**n <= 5 * 10**7:
        T = group_table(system)
        A = additive_pair_mask(T, n)
        bad = A & (T.epsilon(n) != 0)
        rec = _Recorder("collapsing", system, n, "exhaustive", cfg)
        rec.result.checked = int(A.sum())
        for idx in np.argwhere(bad)[: cfg.max_failures]:
            rec.result.failures.append(format_tuple(T.elements[i] for i in idx))
        return rec.result
    rng = random.Random(cfg.seed)
    rec = _Recorder("collapsing", system, n, "sampled", cfg)
    for _ in range(cfg.samples):
        ts = [random_element(system, rng) for _ in range(n)]
        i = rng.randrange(n - 1)
        ts[i], ts[i + 1] = _split_additive(random_element(system, rng), rng)
        ok = (
            not eval_Z(n, ts)
            and int(eval_epsilon(n, ts)) == 0
            and int(eval_epsilon(n, ts, backend="inversion")) == 0
        )
        rec.check(ok, ts)
    return rec.result


def check_normalization(system, n, cfg):
    """epsilon_k(s, ..., s) = 1 for every generator and every k <= n."""
    rec = _Recorder("normalization", system, n, "exhaustive", cfg)
    for k in range(1, n + 1):
        for s in system.gens:
            ts = (s,) * k
            rec.check(int(eval_epsilon(k, ts)) == 1 and int(eval_epsilon(k, ts, backend="inversion")) == 1, ts)
    return rec.result


def check_backends(system, n, cfg):
    """Chamber and inversion evaluators agree."""
    mode, it = tuples(system, n, cfg)
    rec = _Recorder("backends", system, n, mode, cfg)
    for ts in it:
        a, b = eval_epsilon(n, ts), eval_epsilon(n, ts, backend="inversion")
        rec.check(type(a) is type(b) and int(a) == int(b), ts, f"chamber={int(a)} inversion={int(b)}")
    return rec.result


def check_closed_forms(system, n, cfg):
    """epsilon_1 is the length parity and epsilon_2 is half the length defect."""
    mode, it = tuples(system, 2, cfg)
    rec = _Recorder("closed-forms", system, None, mode, cfg)
    for x, y in it:
        e1 = int(eval_epsilon(1, (x,))) == x.length % 2
        e2 = eval_epsilon(2, (x, y)) * 2 == x.length + y.length - compose(x, y).length
        rec.check(e1 and e2, (x, y))
    return rec.result


def check_reversal(system, n, cfg):
    """epsilon_n(x1..xn) = epsilon_n(xn^-1..x1^-1)."""
    mode, it = tuples(system, n, cfg)
    rec = _Recorder("reversal", system, n, mode, cfg)
    for ts in it:
        rev = tuple(invert(x) for x in reversed(ts))
        rec.check(int(eval_epsilon(n, ts)) == int(eval_epsilon(n, rev)), ts)
    return rec.result


def check_symmetry(system, n, cfg):
    """Z_n is sigma-invariant for even n and anti-invariant for odd n."""
    mode, it = tuples(system, n, cfg)
    rec = _Recorder("symmetry", system, n, mode, cfg)
    for ts in it:
        z = eval_Z(n, ts)
        rec.check(z.is_plus_part() if n % 2 == 0 else z.is_minus_part(), ts)
    return rec.result


def check_cup(system, n, cfg):
    """Z_n equals the product of translated Z_1 values."""
    mode, it = tuples(system, n, cfg)
    rec = _Recorder("cup", system, n, mode, cfg)
    for ts in it:
        rec.check(cup_power_mu(n, ts) == eval_Z(n, ts), ts)
    return rec.result


def check_seesaw(system, n, cfg):
    """delta of the plus-side lift of Z_n is -Z_(n+1)."""
    mode, it = tuples(system, n + 1, cfg)
    rec = _Recorder("seesaw", system, n, mode, cfg)
    f = lambda a: lift_Z_tilde(n, a)  # noqa: E731
    for ts in it:
        rec.check(coboundary(f, ts, chain_action) == -eval_Z(n + 1, ts), ts)
    return rec.result


def check_bockstein(system, n, cfg):
    """delta(theta o lift of Z_n) = -2 epsilon_(n+1), n odd."""
    mode, it = tuples(system, n + 1, cfg)
    rec = _Recorder("bockstein", system, n, mode, cfg)
    for ts in it:
        rec.check(bockstein_check(n, ts), ts)
    return rec.result


# formulas for epsilon_3 and for general collapsing cocycles


def _descent_rule(x, s, z) -> int:
    return int(compose(x, s).length < x.length and compose(s, z).length < z.length)


def check_prop51(system, n, cfg) -> list[CheckResult]:
    """The six epsilon_3 formulas; one result per item."""
    e3 = lambda *a: int(eval_epsilon(3, a))  # noqa: E731
    out = []

    rec = _Recorder("prop51.1", system, 3, "", cfg)
    mode, it = tuples(system, 2, cfg)
    rec.result.mode = mode
    for x, z in it:
        for s in system.gens:
            rec.check(e3(x, s, z) == _descent_rule(x, s, z), (x, s, z))
    out.append(rec.result)

    rec = _Recorder("prop51.2", system, 3, "", cfg)
    mode, it = tuples(system, 3, cfg)
    rec.result.mode = mode
    for x, y, z in it:
        word = reduced_word(y)
        total = 0
        for i in range(len(word)):
            left = compose(x, element_of(system, word[:i]))
            right = compose(element_of(system, word[i + 1 :]), z)
            total += _descent_rule(left, system.gens[word[i] - 1], right)
        rec.check(e3(x, y, z) == total % 2, (x, y, z))
    out.append(rec.result)

    rec = _Recorder("prop51.3", system, 3, "", cfg)
    mode, it = tuples(system, 2, cfg)
    rec.result.mode = mode
    for x, y in it:
        z = invert(compose(x, y))
        rec.check(e3(x, y, z) == 0, (x, y, z))
    out.append(rec.result)

    rec = _Recorder("prop51.4", system, 3, "", cfg)
    mode, it = tuples(system, 2, cfg)
    rec.result.mode = mode
    for y, z in it:
        a = (y.length + z.length - compose(y, z).length) // 2 % 2
        b = (z.length + y.length - compose(z, y).length) // 2 % 2
        rec.check(e3(invert(y), y, z) == a and e3(z, y, invert(y)) == b, (y, z))
    out.append(rec.result)

    rec = _Recorder("prop51.5", system, 3, "", cfg)
    mode, it = tuples(system, 1, cfg)
    rec.result.mode = mode
    for (x,) in it:
        rec.check(e3(x, invert(x), x) == x.length % 2, (x,))
    out.append(rec.result)

    rec = _Recorder("prop51.6", system, 3, "", cfg)
    mode, it = tuples(system, 3, cfg)
    rec.result.mode = mode
    for x, y, z in it:
        w = invert(compose(compose(x, y), z))
        v = e3(x, y, z)
        rec.check(v == e3(y, z, w) == e3(z, w, x) == e3(w, x, y), (x, y, z))
    out.append(rec.result)
    return out


def _constrained(system, free: int, cfg, build: Callable[[tuple, random.Random], list]):
    """Enumerate or sample the free entries and expand each into test tuples."""
    rng = random.Random(cfg.seed)
    if _exhaustive(system, free, cfg):
        for xs in product(system.elements(), repeat=free):
            yield from build(xs, rng)
        return
    for _ in range(cfg.samples):
        xs = tuple(random_element(system, rng) for _ in range(free))
        yield from build(xs, rng)


def _prod(system, xs):
    w = system.identity
    for x in xs:
        w = compose(w, x)
    return w


def check_odd_window(system, n, cfg):
    """A window of odd length with product 1 forces Z_n = 0."""
    mode = "exhaustive" if _exhaustive(system, n - 1, cfg) else "sampled"
    rec = _Recorder("odd-window", system, n, mode, cfg)

    def build(xs, rng):
        # every placement (j, l) of an odd window; its last entry closes the product
        out = []
        for l in range(1, n + 1, 2):
            for j in range(n - l + 1):
                head = list(xs[:j]) + list(xs[j : j + l - 1])
                closing = invert(_prod(system, xs[j : j + l - 1]))
                ts = head + [closing] + list(xs[j + l - 1 : n - 1])
                out.append(ts)
        return out

    for ts in _constrained(system, n - 1, cfg, build):
        rec.check(not eval_Z(n, ts), ts)
    return rec.result


def check_even_window(system, n, cfg):
    """A leading or trailing even window with product 1 drops one entry, mod 2."""
    if n < 2:
        raise ValueError("even windows need n >= 2")
    mode = "exhaustive" if _exhaustive(system, n - 1, cfg) else "sampled"
    rec = _Recorder("even-window", system, n, mode, cfg)

    def build(xs, rng):
        out = []
        for l in range(2, n + 1, 2):
            lead = [invert(_prod(system, xs[: l - 1]))] + list(xs)
            out.append(("lead", lead))
            tail = list(xs) + [invert(_prod(system, xs[len(xs) - (l - 1) :]))]
            out.append(("tail", tail))
        return out

    for side, ts in _constrained(system, n - 1, cfg, build):
        rest = ts[1:] if side == "lead" else ts[:-1]
        a, b = int(eval_epsilon(n, ts)), int(eval_epsilon(n - 1, rest))
        rec.check((a - b) % 2 == 0, ts, side)
    return rec.result


def expansion_terms(ts, i: int):
    """Tuples obtained by splitting entry ``i`` (0-based) along its reduced word."""
    system = ts[0].system
    word = reduced_word(ts[i])
    n = len(ts)
    out = []
    for j in range(len(word)):
        pre = element_of(system, word[:j])
        suf = element_of(system, word[j + 1 :])
        new = list(ts)
        new[i] = system.gens[word[j] - 1]
        if i > 0:
            new[i - 1] = compose(ts[i - 1], pre)
        if i < n - 1:
            new[i + 1] = compose(suf, ts[i + 1])
        out.append(new)
    return out


def _expansion_table(system, n, cfg):
    T = group_table(system)
    E = T.epsilon(n)
    N = T.order
    rec = _Recorder("expansion", system, n, "exhaustive", cfg)
    gen_idx = [T.idx(g) for g in system.gens]
    for i in range(n):
        # open grid over every axis but i, which stays a singleton
        grid = [np.arange(N).reshape((1,) * k + (-1,) + (1,) * (n - 1 - k)) if k != i else 0 for k in range(n)]
        for g in range(N):
            word = reduced_word(T.elements[g])
            lhs_cols = list(grid)
            lhs_cols[i] = g
            lhs = E[tuple(lhs_cols)]
            rhs = np.zeros_like(lhs)
            for j, letter in enumerate(word):
                cols = list(grid)
                cols[i] = gen_idx[letter - 1]
                if i > 0:
                    cols[i - 1] = T.mul[grid[i - 1], T.idx(element_of(system, word[:j]))]
                if i < n - 1:
                    cols[i + 1] = T.mul[T.idx(element_of(system, word[j + 1 :])), grid[i + 1]]
                rhs = rhs + E[tuple(cols)]
            diff = (lhs - rhs) % 2 if n % 2 else lhs - rhs
            rec.result.checked += int(lhs.size)
            for idx in np.argwhere(np.broadcast_to(diff, lhs.shape) != 0):
                if len(rec.result.failures) >= cfg.max_failures:
                    break
                full = [int(v) for v in idx]
                full[i] = g
                rec.result.failures.append(f"{format_tuple(T.elements[k] for k in full)} entry {i + 1}")
    return rec.result


def check_expansion(system, n, cfg):
    """Splitting an entry along a reduced word expresses epsilon_n as a sum."""
    if _exhaustive(system, n, cfg, table=True) and system.npos <= 64 and system.order**n <= 5 * 10**7:
        return _expansion_table(system, n, cfg)
    mode, it = tuples(system, n, cfg)
    rec = _Recorder("expansion", system, n, mode, cfg)
    for ts in it:
        lhs = eval_epsilon(n, ts)
        for i in range(n):
            rhs = sum(int(eval_epsilon(n, t)) for t in expansion_terms(ts, i))
            rec.check(_eq_mod(n, lhs, rhs), ts, f"entry {i + 1}")
    return rec.result


# structural compatibility


def diagram_automorphisms(system: CoxeterSystem):
    """All nontrivial permutations of the generators preserving the Coxeter matrix."""
    M = system.coxeter_matrix
    r = system.rank
    out = []
    for p in permutations(range(r)):
        if list(p) == list(range(r)):
            continue
        if all(M[p[i]][p[j]] == M[i][j] for i in range(r) for j in range(r)):
            out.append(diagram_automorphism(system, [k + 1 for k in p]))
    return out


def check_automorphism(system, n, cfg):
    """epsilon_n is invariant under diagram automorphisms."""
    autos = diagram_automorphisms(system)
    mode, it = tuples(system, n, cfg)
    rec = _Recorder("automorphism", system, n, mode if autos else "n/a", cfg)
    for ts in it:
        v = int(eval_epsilon(n, ts))
        for phi in autos:
            rec.check(v == int(eval_epsilon(n, [phi(x) for x in ts])), ts)
    return rec.result


# (small type, generators of the big system it maps onto, 1-based)
PARABOLICS = {
    "A3": [("A2", [1, 2]), ("A2", [2, 3])],
    "A4": [("A3", [1, 2, 3])],
    "B3": [("B2", [2, 3]), ("A2", [1, 2])],
    "B4": [("B3", [2, 3, 4])],
    "C3": [("B2", [2, 3])],
    "D4": [("A3", [1, 2, 3]), ("A3", [1, 2, 4])],
    "F4": [("B3", [1, 2, 3]), ("B3", [4, 3, 2])],
    "H3": [("I2(5)", [1, 2]), ("A2", [2, 3])],
    "H4": [("H3", [1, 2, 3])],
    "E6": [("D5", [1, 3, 4, 2, 5])],
}


def parabolic_embeddings(system: CoxeterSystem):
    out = [("A1", [i]) for i in range(1, system.rank + 1)]
    out += PARABOLICS.get(system.descriptor, [])
    checked = []
    for desc, gens in out:
        small = build_system(desc)
        M, m = system.coxeter_matrix, small.coxeter_matrix
        if all(M[gens[i] - 1][gens[j] - 1] == m[i][j] for i in range(small.rank) for j in range(small.rank)):
            checked.append((small, gens))
        else:
            raise ValueError(f"{desc} does not embed in {system.descriptor} along {gens}")
    return checked


def check_parabolic(system, n, cfg):
    """epsilon_n of W restricted to a standard parabolic is epsilon_n of the parabolic."""
    rec = None
    for small, gens in parabolic_embeddings(system):
        mode, it = tuples(small, n, cfg)
        if rec is None:
            rec = _Recorder("parabolic", system, n, mode, cfg)
        elif mode == "sampled":
            rec.result.mode = "sampled"
        for ts in it:
            big = [element_of(system, [gens[k - 1] for k in reduced_word(x)]) for x in ts]
            rec.check(int(eval_epsilon(n, ts)) == int(eval_epsilon(n, big)), ts, f"in {small.descriptor}")
    return rec.result


def _factor_projection(system: CoxeterSystem):
    factors = [build_system(str(f)) for f in system.factors]

    def project(w):
        words = [[] for _ in factors]
        for k in reduced_word(w):
            fi = system.gen_factor[k - 1]
            words[fi].append(k - system.gen_offsets[fi])
        return [element_of(f, wd) for f, wd in zip(factors, words)]

    return factors, project


def check_product(system, n, cfg):
    """epsilon_n of a product is the sum of the pulled-back factor cocycles."""
    if len(system.factors) < 2:
        rec = _Recorder("product", system, n, "n/a", cfg)
        return rec.result
    factors, project = _factor_projection(system)
    mode, it = tuples(system, n, cfg)
    rec = _Recorder("product", system, n, mode, cfg)
    for ts in it:
        parts = list(zip(*[project(x) for x in ts]))
        total = sum(int(eval_epsilon(n, list(p))) for p in parts)
        rec.check(_eq_mod(n, eval_epsilon(n, ts), total), ts)
    return rec.result


def check_extension(system, n, cfg):
    """Associativity of the extension of W by the wall lattice."""
    mode, it = tuples(system, 3, cfg)
    rec = _Recorder("extension", system, None, mode, cfg)
    rng = random.Random(cfg.seed + 1)

    def chain():
        return {w: rng.randint(-2, 2) for w in rng.sample(range(system.npos), min(3, system.npos))}

    for xs in it:
        p, q, r = (ExtensionElement(chain(), x) for x in xs)
        rec.check((p * q) * r == p * (q * r), xs)
    return rec.result


CHECKS: dict[str, Callable] = {
    "cocycle-eps": check_cocycle_eps,
    "cocycle-z": check_cocycle_z,
    "collapsing": check_collapsing,
    "normalization": check_normalization,
    "backends": check_backends,
    "closed-forms": check_closed_forms,
    "reversal": check_reversal,
    "symmetry": check_symmetry,
    "cup": check_cup,
    "seesaw": check_seesaw,
    "bockstein": check_bockstein,
    "prop51": check_prop51,
    "odd-window": check_odd_window,
    "even-window": check_even_window,
    "expansion": check_expansion,
    "automorphism": check_automorphism,
    "parabolic": check_parabolic,
    "product": check_product,
    "extension": check_extension,
}

# degree-free checks run once regardless of n
DEGREE_FREE = {"closed-forms", "prop51", "extension"}


def _applicable(name, n):
    if name == "bockstein":
        return n % 2 == 1
    if name in ("collapsing", "even-window"):
        return n >= 2
    return True


def _run_one(args) -> list[CheckResult]:
    name, descriptor, n, cfg = args
    res = CHECKS[name](build_system(descriptor), n, cfg)
    return res if isinstance(res, list) else [res]


def run_checks(descriptor: str, names, degrees, cfg: SweepConfig, jobs: int = 1) -> list[CheckResult]:
    """Run the named checks over the given degrees; results come back in a fixed order."""
    tasks = []
    for name in names:
        if name not in CHECKS:
            raise KeyError(f"unknown check {name!r}")
        ds = [degrees[0]] if name in DEGREE_FREE else [d for d in degrees if _applicable(name, d)]
        for d in ds:
            tasks.append((name, descriptor, d, cfg))
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_run_one, tasks))
    else:
        chunks = [_run_one(t) for t in tasks]
    return [r for chunk in chunks for r in chunk]


__all__ = [
    "SweepConfig",
    "CheckResult",
    "CHECKS",
    "run_checks",
    "tuples",
    "random_element",
    "expansion_terms",
    "diagram_automorphisms",
    "parabolic_embeddings",
]
