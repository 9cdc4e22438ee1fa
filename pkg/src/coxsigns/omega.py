"""The alcove stabilizer Omega inside a finite Weyl group and the classes of epsilon_3 on it.

Omega is produced twice: from explicit signed-permutation formulas for the
classical types, and from the minuscule recipe ``w_{0,J} w_0`` with
``J = S - {s}`` for every node ``s`` whose coefficient in the highest root
is 1.  The two must generate the same subgroup of W.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, field
from importlib import resources
from fractions import Fraction
from itertools import combinations

from .coxeter import (
    CoxeterSystem,
    GroupElement,
    build_system,
    compose,
    element_of,
    format_word,
    longest_element,
    perp_subsystem,
)
from .f2 import (
    SmallGroup,
    class_coordinates,
    is_coboundary,
    restrict_cocycle,
    standard_class_basis,
)
from .rootdata import UnknownTypeError
from .scalars import as_scalar, dot

__all__ = [
    "OmegaGroup",
    "OmegaReport",
    "SubgroupVerdict",
    "omega_of",
    "classify_restrictions",
    "perp_decomposition",
    "alcove_signature_ok",
    "cominuscule_nodes",
    "load_expectations",
    "diff_against_expectations",
    "power_expansion",
    "commuting_product_verdict",
]


@dataclass
class OmegaGroup:
    system: CoxeterSystem
    group: SmallGroup  # labels are GroupElements, identity first
    names: dict[int, str]  # element index -> name such as "C^2" or "ω1"
    provenance: dict[str, str]  # generator name -> "explicit formula" | "minuscule"
    minuscule: list[GroupElement] = field(default_factory=list)

    @property
    def order(self) -> int:
        return self.group.order

    def element(self, name: str) -> GroupElement:
        for i, nm in self.names.items():
            if nm == name:
                return self.group.labels[i]
        raise KeyError(name)

    def elements(self) -> list[GroupElement]:
        return list(self.group.labels)


@dataclass
class SubgroupVerdict:
    name: str
    generators: list[str]
    order: int
    index: int
    verdict: str  # "trivial" | "nontrivial"
    coordinates: list[int] | None = None


@dataclass
class OmegaReport:
    type: str
    omega_shape: str
    subgroups: list[SubgroupVerdict]
    wall_orbits: int
    perp_type: str | None = None

    def to_json_obj(self) -> dict:
        out = {
            "type": self.type,
            "omega_shape": self.omega_shape,
            "wall_orbits": self.wall_orbits,
            "perp_type": self.perp_type,
            "subgroups": [],
        }
        for s in self.subgroups:
            row = {k: v for k, v in asdict(s).items() if v is not None}
            out["subgroups"].append(row)
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), ensure_ascii=False, indent=2, sort_keys=True) + "\n"

    def verdict(self, name: str) -> SubgroupVerdict:
        for s in self.subgroups:
            if s.name == name:
                return s
        raise KeyError(name)


CSV_FIELDS = ["type", "omega_shape", "subgroup", "order", "index", "verdict", "coordinates", "generators"]


def reports_to_csv(reports) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for r in reports:
        for s in r.subgroups:
            coords = "" if s.coordinates is None else "".join(map(str, s.coordinates))
            w.writerow([r.type, r.omega_shape, s.name, s.order, s.index, s.verdict, coords, "; ".join(s.generators)])
    return buf.getvalue()


# construction of Omega


def _require_weyl(system: CoxeterSystem):
    if len(system.factors) != 1 or not system.factors[0].is_weyl:
        raise UnknownTypeError(f"{system.descriptor}: Omega is computed for irreducible Weyl types only")
    return system.factors[0]


def cominuscule_nodes(system: CoxeterSystem) -> list[int]:
    """1-based nodes whose simple root has coefficient 1 in the highest root."""
    _require_weyl(system)
    theta = system.coords[system.highest_root()]
    return [i + 1 for i, c in enumerate(theta) if c == 1]


def minuscule_element(system: CoxeterSystem, node: int) -> GroupElement:
    """``w_{0,J} w_0`` for ``J = S - {node}``."""
    J = [i for i in range(1, system.rank + 1) if i != node]
    w0 = longest_element(system)
    if not J:
        return w0
    return compose(longest_element(system, J), w0)


def alcove_signature_ok(system: CoxeterSystem, u: GroupElement) -> bool:
    """True when ``u`` permutes the simple roots together with the negative highest root."""
    special = set(range(system.rank)) | {system.neg(system.highest_root())}
    return {u.perm[r] for r in special} == special


def _signed_perm_map(images):
    """Linear map x -> y with ``y[k] = sign_k * x[src_k]`` from ``[(sign, src), ...]`` (0-based)."""

    def f(x):
        return tuple(as_scalar(sgn * x[src]) for sgn, src in images)

    return f


def _explicit_generators(system: CoxeterSystem) -> dict[str, GroupElement]:
    f = system.factors[0]
    n = f.rank
    L = system.element_from_linear_map
    if f.letter == "A":
        return {"C": element_of(system, range(1, n + 1))}
    if f.letter == "B":
        # conjugate to s_n: the reflection negating the first coordinate
        return {"ω": L(_signed_perm_map([(-1, 0)] + [(1, k) for k in range(1, n)]))}
    if f.letter == "C":
        return {"τ": L(_signed_perm_map([(-1, n - 1 - k) for k in range(n)]))}
    if f.letter == "D":
        # (x_n, -x_{n-1}, ..., -x_2, +-x_1)
        last = 1 if n % 2 == 0 else -1
        om = [(1, n - 1)] + [(-1, n - 1 - k) for k in range(1, n - 1)] + [(last, 0)]
        two = [(-1, 0)] + [(1, k) for k in range(1, n - 1)] + [(-1, n - 1)]
        three = [(-1, n - 1 - k) for k in range(n - 1)] + [(-last, 0)]
        if n % 2:
            return {"ω": L(_signed_perm_map(om)), "ω^2": L(_signed_perm_map(two)), "ω^3": L(_signed_perm_map(three))}
        return {"ω1": L(_signed_perm_map(om)), "ω2": L(_signed_perm_map(two)), "ω3": L(_signed_perm_map(three))}
    return {}


def _closure(system, gens):
    out = [system.identity]
    seen = {system.identity}
    frontier = list(out)
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = compose(x, g)
                if y not in seen:
                    seen.add(y)
                    out.append(y)
                    nxt.append(y)
        frontier = nxt
    return out


_EXPECTED_ORDER = {"A": lambda n: n + 1, "B": lambda n: 2, "C": lambda n: 2, "D": lambda n: 4}


def omega_of(system: CoxeterSystem | str) -> OmegaGroup:
    """Omega as a subgroup of W, with both constructions cross-checked.

    Types whose Omega has odd order (including 1) give the trivial group.
    """
    if isinstance(system, str):
        system = build_system(system)
    f = _require_weyl(system)
    nodes = cominuscule_nodes(system)
    minus = [minuscule_element(system, j) for j in nodes]
    full = _closure(system, minus)
    expected = _EXPECTED_ORDER.get(f.letter, lambda n: {("E", 6): 3, ("E", 7): 2}.get((f.letter, n), 1))(f.rank)
    if len(full) != expected:
        raise AssertionError(f"{f}: minuscule elements generate {len(full)} elements, expected {expected}")
    for u in full:
        if not alcove_signature_ok(system, u):
            raise AssertionError(f"{f}: {format_word(u)} does not stabilize the extended simple roots")

    if len(full) % 2:
        G = SmallGroup.from_elements([system.identity], compose, "1")
        return OmegaGroup(system, G, {0: "1"}, {}, minus)

    explicit = _explicit_generators(system)
    provenance = {}
    if explicit:
        gen_set = set(_closure(system, list(explicit.values())))
        if gen_set != set(full):
            raise AssertionError(f"{f}: explicit formulas and minuscule recipe disagree")
        provenance = {k: "explicit formula" for k in explicit}

    names = {}
    if f.letter == "A" or (f.letter == "D" and f.rank % 2):
        g = explicit["C"] if f.letter == "A" else explicit["ω"]
        base = "C" if f.letter == "A" else "ω"
        ordered = [system.identity]
        while len(ordered) < len(full):
            ordered.append(compose(ordered[-1], g))
        for k in range(1, len(ordered)):
            names[k] = base if k == 1 else f"{base}^{k}"
    elif explicit:
        ordered = [system.identity] + list(explicit.values())
        for k, nm in enumerate(explicit, start=1):
            names[k] = nm
    else:
        ordered = [system.identity] + [u for u in full if not u.is_identity()]
        for k in range(1, len(ordered)):
            names[k] = "τ" if len(ordered) == 2 else f"u{k}"
        provenance = {names[k]: "minuscule" for k in names}
    names[0] = "1"
    G = SmallGroup.from_elements(ordered, compose, f"Omega({f})")
    return OmegaGroup(system, G, names, provenance, minus)


# root subsystem types


def _subsystem_simple_roots(system: CoxeterSystem, positive: frozenset[int]) -> list[int]:
    """Simple roots of the subsystem: a such that s_a permutes the other positive roots."""
    out = []
    pos = set(positive)
    for a in sorted(positive):
        s = system.reflection(a)
        if all(s.perm[b] in pos for b in pos if b != a):
            out.append(a)
    return out


def _bond(system, a, b) -> int:
    ab = dot(system.coords[a], system.coords[b], system.gram)
    aa = dot(system.coords[a], system.coords[a], system.gram)
    bb = dot(system.coords[b], system.coords[b], system.gram)
    c2 = as_scalar(ab * ab / (aa * bb))
    return {Fraction(0): 2, Fraction(1, 4): 3, Fraction(1, 2): 4, Fraction(3, 4): 6}[c2]


def classify_coxeter_graph(nodes, bonds) -> str:
    """Type of a connected Coxeter graph given as ``bonds[(i, j)] = m`` (m >= 3 edges only)."""
    k = len(nodes)
    if k == 1:
        return "A1"
    adj = {v: [] for v in nodes}
    for (i, j), m in bonds.items():
        adj[i].append((j, m))
        adj[j].append((i, m))
    labels = sorted(m for m in bonds.values())
    degrees = sorted(len(v) for v in adj.values())
    if labels == [6] and k == 2:
        return "G2"
    if all(m == 3 for m in labels):
        if degrees[-1] <= 2:
            return f"A{k}"
        branch = next(v for v in nodes if len(adj[v]) == 3)
        arms = []
        for start, _ in adj[branch]:
            size, prev, cur = 1, branch, start
            while True:
                nxt = [u for u, _ in adj[cur] if u != prev]
                if not nxt:
                    break
                prev, cur = cur, nxt[0]
                size += 1
            arms.append(size)
        arms.sort()
        if arms[0] == 1 and arms[1] == 1:
            return f"D{k}"
        if arms[:2] == [1, 2] and arms[2] in (2, 3, 4):
            return f"E{k}"
        raise ValueError(f"not a finite Coxeter graph: arms {arms}")
    if labels.count(4) == 1 and all(m in (3, 4) for m in labels) and degrees[-1] <= 2:
        (i, j) = next(e for e, m in bonds.items() if m == 4)
        if len(adj[i]) == 1 or len(adj[j]) == 1:
            return f"B{k}"
        if k == 4:
            return "F4"
    raise ValueError("not a crystallographic finite Coxeter graph")


def _type_key(t: str):
    return (-int(t[1:]), t[0])


def perp_decomposition(X) -> str:
    """Type of the reflection subgroup W(X) generated by roots orthogonal to the fixed space of X."""
    X = list(X)
    system = X[0].system
    phi = perp_subsystem(X)
    if not phi:
        return "1"
    simples = _subsystem_simple_roots(system, phi)
    bonds = {}
    for a, b in combinations(simples, 2):
        m = _bond(system, a, b)
        if m > 2:
            bonds[(a, b)] = m
    # connected components
    parent = {a: a for a in simples}

    def find(a):
        while parent[a] != a:
            a = parent[a]
        return a

    for a, b in bonds:
        parent[find(a)] = find(b)
    comps = {}
    for a in simples:
        comps.setdefault(find(a), []).append(a)
    types = []
    for comp in comps.values():
        cb = {e: m for e, m in bonds.items() if e[0] in comp}
        types.append(classify_coxeter_graph(comp, cb))
    types.sort(key=_type_key)
    return "x".join(types)


# classification


def _subgroup_name(omega: OmegaGroup, members: frozenset[int]) -> tuple[str, list[int]]:
    G = omega.group
    if len(members) == 1:
        return "1", []
    if len(members) == G.order:
        gens = _minimal_generators(G, members)
        return "Ω", gens
    gens = _minimal_generators(G, members)
    if len(gens) == 1:
        return f"⟨{omega.names[gens[0]]}⟩", gens
    return "⟨" + ", ".join(omega.names[g] for g in gens) + "⟩", gens


def _minimal_generators(G: SmallGroup, members):
    members = sorted(members)
    for size in range(1, len(members) + 1):
        for gens in combinations([m for m in members if m != G.identity], size):
            span = {G.identity}
            frontier = [G.identity]
            while frontier:
                nxt = []
                for x in frontier:
                    for g in gens:
                        y = G.mul(x, g)
                        if y not in span:
                            span.add(y)
                            nxt.append(y)
                frontier = nxt
            if span == set(members):
                return list(gens)
    return []


def _klein_coords(omega: OmegaGroup, sub: SmallGroup):
    # w1 -> (1,0), w2 -> (1,1), w3 -> (0,1), on the subgroup's own indices
    want = {"ω1": (1, 0), "ω2": (1, 1), "ω3": (0, 1), "1": (0, 0)}
    label_to_name = {omega.group.labels[i]: nm for i, nm in omega.names.items()}
    return {k: want[label_to_name[x]] for k, x in enumerate(sub.labels)}


def classify_restrictions(system: CoxeterSystem | str, evaluate=None) -> OmegaReport:
    """Restrict epsilon_3 to Omega and each of its subgroups and decide every class."""
    if isinstance(system, str):
        system = build_system(system)
    omega = omega_of(system)
    G = omega.group
    rows = []
    for members in G.subgroups():
        elems = [G.labels[i] for i in sorted(members, key=lambda a: (a != G.identity, a))]
        name, gens = _subgroup_name(omega, members)
        c = restrict_cocycle(system, 3, elems, evaluate)
        verdict = is_coboundary(c)
        coords = None
        sub = c.group
        shape = sub.shape()
        if shape == "Z/2xZ/2" and all(nm in ("1", "ω1", "ω2", "ω3") for nm in omega.names.values()):
            basis = standard_class_basis(sub, klein_coords=_klein_coords(omega, sub))
            coords = list(class_coordinates(c, basis))
        elif shape.startswith("Z/") and "x" not in shape and sub.order % 2 == 0:
            gen_label = G.labels[gens[0]]
            basis = standard_class_basis(sub, generator=sub.labels.index(gen_label))
            coords = list(class_coordinates(c, basis))
        rows.append(
            SubgroupVerdict(
                name=name,
                generators=[format_word(G.labels[g]) for g in gens],
                order=len(members),
                index=G.order // len(members),
                verdict="trivial" if verdict.trivial else "nontrivial",
                coordinates=coords,
            )
        )
    shape = G.shape()
    perp = perp_decomposition(omega.elements()) if G.order > 1 else None
    orbits = len(set(system.wall_orbits))
    return OmegaReport(system.descriptor, shape, rows, orbits, perp)


# expectations shipped as data


def load_expectations() -> dict:
    text = resources.files("coxsigns").joinpath("data/expectations.json").read_text(encoding="utf-8")
    return json.loads(text)


def diff_against_expectations(report: OmegaReport, expectations: dict | None = None) -> list[str]:
    """Mismatches between a computed report and the shipped expectation entry."""
    expectations = expectations or load_expectations()
    entry = expectations["types"].get(report.type)
    if entry is None:
        return [f"{report.type}: no expectation entry"]
    problems = []
    if entry.get("omega_shape") and entry["omega_shape"] != report.omega_shape:
        problems.append(f"{report.type}: omega shape {report.omega_shape}, expected {entry['omega_shape']}")
    for name, want in entry.get("verdicts", {}).items():
        try:
            got = report.verdict(name)
        except KeyError:
            problems.append(f"{report.type}: subgroup {name} missing from report")
            continue
        if got.verdict != want:
            problems.append(f"{report.type}: {name} is {got.verdict}, expected {want}")
    for name, want in entry.get("coordinates", {}).items():
        got = report.verdict(name).coordinates
        if got != want:
            problems.append(f"{report.type}: {name} coordinates {got}, expected {want}")
    if entry.get("perp_type") and entry["perp_type"] != report.perp_type:
        problems.append(f"{report.type}: W(Omega) is {report.perp_type}, expected {entry['perp_type']}")
    return problems


# the S_n computation behind the type A argument


@dataclass
class PowerExpansion:
    n: int
    direct: int
    terms: list[int]
    paired: bool
    middle: int
    lengths: dict[str, int]


def power_expansion(n: int) -> PowerExpansion:
    """epsilon_3(C^m, C, C^m) in S_n, n = 2m, directly and by expanding the middle entry.

    The expansion writes C = s_1 ... s_(n-1) and evaluates each term
    ``epsilon_3(C^m s_1..s_(j-1), s_j, s_(j+1)..s_(n-1) C^m)`` by the descent
    criterion for a simple middle entry.
    """
    from .cocycles import eval_epsilon

    if n % 2:
        raise ValueError("n must be even")
    m = n // 2
    W = build_system(f"A{n - 1}")
    C = element_of(W, range(1, n))
    Cm = W.identity
    for _ in range(m):
        Cm = compose(Cm, C)
    direct = int(eval_epsilon(3, (Cm, C, Cm)))

    def descent_rule(x, s, z):
        return int(compose(x, s).length < x.length and compose(s, z).length < z.length)

    terms = []
    for j in range(1, n):
        x = compose(Cm, element_of(W, range(1, j)))
        z = compose(element_of(W, range(j + 1, n)), Cm)
        terms.append(descent_rule(x, W.gen(j), z))
    # the flip s_i -> s_(n-i) pairs term j with term n-j
    paired = all(terms[j - 1] == terms[n - j - 1] for j in range(1, n))
    middle = terms[m - 1]
    lengths = {
        "C^m": Cm.length,
        "C^m s1..s(m-1)": compose(Cm, element_of(W, range(1, m))).length,
        "s(m+1)..s(n-1) C^m": compose(element_of(W, range(m + 1, n)), Cm).length,
        "C^m s1..sm": compose(Cm, element_of(W, range(1, m + 1))).length,
        "sm..s(n-1) C^m": compose(element_of(W, range(m, n)), Cm).length,
    }
    return PowerExpansion(n, direct, terms, paired, middle, lengths)


def commuting_product_verdict(system: CoxeterSystem | str, gens) -> str:
    """Verdict for epsilon_3 on the order-2 group generated by a product of commuting generators."""
    if isinstance(system, str):
        system = build_system(system)
    w = element_of(system, gens)
    for a, b in combinations(gens, 2):
        if system.coxeter_matrix[a - 1][b - 1] != 2:
            raise ValueError(f"s{a} and s{b} do not commute")
    if len(set(gens)) != len(gens):
        raise ValueError("generators must be distinct")
    c = restrict_cocycle(system, 3, [system.identity, w])
    return "trivial" if is_coboundary(c).trivial else "nontrivial"
