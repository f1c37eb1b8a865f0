"""Domains on the AT model: Euler measure, index arithmetic, triangle search.

A domain assigns an integer multiplicity to every region. At an interior
crossing the four regions meet at 60/120/60/120 degrees; write
c(v) = (sum over the 60 degree quadrants) - (sum over the 120 degree ones).
A domain without a corner at v has c(v) = 0, and a corner of a triangle with
the prescribed cyclic order has c(v) = +1.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

import numpy as np

from .azdiag.model import PlanarDiagramModel, Vertex

PAIR_TYPES = (("delta", "gamma"), ("delta", "epsilon"), ("epsilon", "gamma"))
PAIR_LABEL = {("delta", "gamma"): "gamma-delta", ("delta", "epsilon"): "delta-epsilon", ("epsilon", "gamma"): "gamma-epsilon"}


class BasepointRegionTouched(ValueError):
    pass


class PatternInvalid(ValueError):
    pass


def corner_weight(angle: int) -> Fraction:
    """Gauss-Bonnet weight of a corner of the given interior angle."""
    return Fraction(180 - angle, 360) - Fraction(1, 4)


@dataclass(frozen=True)
class Domain:
    model: PlanarDiagramModel = field(compare=False, repr=False, hash=False)
    multiplicities: tuple[int, ...]
    corner_pattern: tuple[int, ...] = ()

    @classmethod
    def from_dict(cls, model, mults: dict, pattern=()) -> "Domain":
        vec = [0] * len(model.regions)
        for rid, m in mults.items():
            vec[rid] = m
        return cls(model, tuple(vec), tuple(pattern))

    def __add__(self, other: "Domain") -> "Domain":
        return Domain(self.model, tuple(a + b for a, b in zip(self.multiplicities, other.multiplicities)), ())

    def support(self) -> list[int]:
        return [rid for rid, m in enumerate(self.multiplicities) if m]

    @property
    def is_positive(self) -> bool:
        return all(m >= 0 for m in self.multiplicities)

    def touches_boundary(self) -> bool:
        return any(m and self.model.regions[rid].boundary for rid, m in enumerate(self.multiplicities))

    def boundary_weight(self) -> int:
        return sum(m for rid, m in enumerate(self.multiplicities) if self.model.regions[rid].boundary)

    def to_json(self) -> dict:
        return {
            "multiplicities": {str(rid): m for rid, m in enumerate(self.multiplicities) if m},
            "corner_pattern": [
                {"vertex": vid, "families": PAIR_LABEL[vertex_pair_type(self.model, self.model.vertices[vid])]}
                for vid in self.corner_pattern
            ],
        }


@dataclass(frozen=True)
class IndexData:
    euler_measure: Fraction
    boundary_weight: int
    g: int
    n: int
    m: int
    chi_S: Fraction

    @property
    def index(self) -> Fraction:
        return polygon_index(self.g, self.n, self.chi_S, self.euler_measure, self.m)


def region_euler(region, *, include_boundary: bool = True, model: PlanarDiagramModel | None = None) -> Fraction:
    total = Fraction(0)
    for vid, angle in region.corners:
        if not include_boundary and model is not None and model.vertices[vid].kind == "boundary":
            continue
        total += corner_weight(angle)
    return total


def region_euler_polygon(region) -> Fraction:
    """chi - (convex corners)/4 + (reflex corners)/4."""
    convex = sum(1 for _, a in region.corners if a < 180)
    reflex = sum(1 for _, a in region.corners if a > 180)
    return region.chi - Fraction(convex, 4) + Fraction(reflex, 4)


def euler_measure(d: Domain, *, include_boundary: bool = True) -> Fraction:
    model = d.model
    total = Fraction(0)
    for rid, m in enumerate(d.multiplicities):
        if not m:
            continue
        region = model.regions[rid]
        if region.basepoint:
            raise BasepointRegionTouched(f"region {rid} carries the basepoint")
        total += m * region_euler(region, include_boundary=include_boundary, model=model)
    return total


def polygon_index(g, n, chi_S, e_B, m) -> Fraction:
    return Fraction(3 - n, 2) * g - Fraction(chi_S) + 2 * Fraction(e_B) + m


def index_data(d: Domain, chi_S, m: int, n: int = 2) -> IndexData:
    return IndexData(euler_measure(d), d.boundary_weight(), d.model.pmc.genus, n, m, Fraction(chi_S))


# -- vertex relations -------------------------------------------------------

def vertex_pair_type(model: PlanarDiagramModel, v: Vertex) -> tuple[str, ...]:
    return model.vertex_families(v)


def interior_vertices(model: PlanarDiagramModel) -> list[Vertex]:
    return [v for v in model.vertices if v.kind == "interior"]


def vertex_value(model: PlanarDiagramModel, v: Vertex, mults) -> int:
    total = 0
    for rid, angle in v.quadrants:
        if angle == 60:
            total += mults[rid]
        elif angle == 120:
            total -= mults[rid]
        else:
            raise PatternInvalid(f"vertex {v.id} has a {angle} degree quadrant")
    return total


def satisfies_pattern(d: Domain, pattern) -> bool:
    want = set(pattern)
    model = d.model
    if any(d.multiplicities[r] for r in model.basepoint_regions):
        return False
    for v in interior_vertices(model):
        if vertex_value(model, v, d.multiplicities) != (1 if v.id in want else 0):
            return False
    return True


def _check_pattern(model: PlanarDiagramModel, pattern) -> tuple[int, ...]:
    g = model.pmc.genus
    counts = {t: 0 for t in PAIR_TYPES}
    for vid in pattern:
        if not 0 <= vid < len(model.vertices):
            raise PatternInvalid(f"no vertex {vid}")
        v = model.vertices[vid]
        t = vertex_pair_type(model, v)
        if v.kind != "interior" or t not in counts:
            raise PatternInvalid(f"vertex {vid} is not a crossing of two of the families")
        counts[t] += 1
    if len(set(pattern)) != len(pattern) or any(c != g for c in counts.values()):
        raise PatternInvalid(f"pattern needs {g} corner(s) of each of gamma-delta, delta-epsilon, gamma-epsilon")
    return tuple(sorted(pattern))


def triangle_patterns(model: PlanarDiagramModel) -> list[tuple[int, ...]]:
    g = model.pmc.genus
    by_type = {t: [] for t in PAIR_TYPES}
    for v in interior_vertices(model):
        t = vertex_pair_type(model, v)
        if t in by_type:
            by_type[t].append(v.id)
    if g == 0:
        return []
    choices = [list(itertools.combinations(by_type[t], g)) for t in PAIR_TYPES]
    return [tuple(sorted(sum(pick, ()))) for pick in itertools.product(*choices)]


# -- lattice enumeration ----------------------------------------------------

class _Lattice:
    """Exact row reduction of the vertex relations, shared by all patterns."""

    def __init__(self, model: PlanarDiagramModel):
        self.model = model
        self.vars = [r.id for r in model.regions if not r.basepoint]
        col = {rid: k for k, rid in enumerate(self.vars)}
        self.verts = [v.id for v in interior_vertices(model)]
        rows = []
        for vid in self.verts:
            row = [Fraction(0)] * len(self.vars)
            for rid, angle in model.vertices[vid].quadrants:
                if rid in col:
                    row[col[rid]] += 1 if angle == 60 else -1
            rows.append(row)
        m, nv = len(rows), len(self.vars)
        # augment with the identity to remember the row operations
        aug = [row + [Fraction(int(i == j)) for j in range(m)] for i, row in enumerate(rows)]
        pivots = []
        r = 0
        for c in range(nv):
            pr = next((i for i in range(r, m) if aug[i][c] != 0), None)
            if pr is None:
                continue
            aug[r], aug[pr] = aug[pr], aug[r]
            inv = 1 / aug[r][c]
            aug[r] = [x * inv for x in aug[r]]
            for i in range(m):
                if i != r and aug[i][c] != 0:
                    f = aug[i][c]
                    aug[i] = [a - f * b for a, b in zip(aug[i], aug[r])]
            pivots.append(c)
            r += 1
        self.rank = r
        self.pivots = pivots
        self.free = [c for c in range(nv) if c not in pivots]
        # integer form: L_r * x_pivot = L_r * (T rhs)_r - sum_f (L_r R[r,f]) x_f
        self.scale = []
        self.coef = []
        self.transform = []
        for i in range(m):
            row = aug[i]
            dens = [x.denominator for x in row]
            L = lcm(*dens) if dens else 1
            self.scale.append(L)
            self.coef.append([int(row[f] * L) for f in self.free])
            self.transform.append([int(x * L) for x in row[nv:]])
        self.vindex = {vid: k for k, vid in enumerate(self.verts)}

    def solve(self, pattern, cap: int, chunk: int = 200_000) -> list[tuple[int, ...]]:
        rhs = np.zeros(len(self.verts), dtype=np.int64)
        for vid in pattern:
            rhs[self.vindex[vid]] = 1
        T = np.array(self.transform, dtype=np.int64).reshape(len(self.verts), len(self.verts))
        trhs = T @ rhs
        if any(trhs[i] != 0 for i in range(self.rank, len(self.verts))):
            return []
        scale = np.array(self.scale[: self.rank], dtype=np.int64)
        coef = np.array([self.coef[i] for i in range(self.rank)], dtype=np.int64).reshape(self.rank, len(self.free))
        out = []
        combos = itertools.product(range(cap + 1), repeat=len(self.free))
        while True:
            block = np.array(list(itertools.islice(combos, chunk)), dtype=np.int64).reshape(-1, len(self.free))
            if not len(block):
                break
            num = trhs[: self.rank][None, :] - block @ coef.T
            ok = np.all(num % scale == 0, axis=1)
            vals = num // scale
            ok &= np.all((vals >= 0) & (vals <= cap), axis=1)
            for k in np.nonzero(ok)[0]:
                x = [0] * len(self.vars)
                for j, c in enumerate(self.free):
                    x[c] = int(block[k, j])
                for i, c in enumerate(self.pivots):
                    x[c] = int(vals[k, i])
                full = [0] * len(self.model.regions)
                for c, rid in enumerate(self.vars):
                    full[rid] = x[c]
                out.append(tuple(full))
        return out


_lattice_cache: dict[int, _Lattice] = {}


def _lattice(model: PlanarDiagramModel) -> _Lattice:
    key = id(model)
    hit = _lattice_cache.get(key)
    if hit is None or hit.model is not model:
        hit = _Lattice(model)
        _lattice_cache[key] = hit
    return hit


def kernel_dimension(model: PlanarDiagramModel) -> int:
    return len(_lattice(model).free)


def enumerate_positive_triangle_domains(model: PlanarDiagramModel, pattern, cap: int = 4) -> list[Domain]:
    """All basepoint-avoiding domains with multiplicities in [0, cap] whose
    vertex relations hold with corners exactly at the pattern vertices."""
    pattern = _check_pattern(model, pattern)
    if cap < 0:
        raise ValueError("cap must be nonnegative")
    sols = _lattice(model).solve(pattern, cap)
    return [Domain(model, s, pattern) for s in sorted(sols)]


def brute_force_triangle_domains(model: PlanarDiagramModel, cap: int) -> dict[tuple[int, ...], list[Domain]]:
    """Depth-first search over multiplicity vectors with interval pruning.

    Independent of the row reduction: every vertex value must end in {0, 1},
    and the vertices with value 1 must form a valid corner pattern.
    """
    regions = [r.id for r in model.regions if not r.basepoint]
    verts = interior_vertices(model)
    terms = []
    for v in verts:
        t: dict[int, int] = {}
        for rid, angle in v.quadrants:
            t[rid] = t.get(rid, 0) + (1 if angle == 60 else -1)
        base = {r for r in model.basepoint_regions}
        terms.append({r: c for r, c in t.items() if r not in base and c})
    # visit regions so that vertex relations close early
    order = []
    seen = set()
    for t in terms:
        for r in sorted(t):
            if r not in seen:
                seen.add(r)
                order.append(r)
    order += [r for r in regions if r not in seen]
    pos = {r: k for k, r in enumerate(order)}
    watch = [[] for _ in order]
    for vi, t in enumerate(terms):
        for r in t:
            watch[pos[r]].append(vi)
    g = model.pmc.genus
    valid = set(triangle_patterns(model))
    vals = [0] * len(model.regions)
    found: dict[tuple, list[Domain]] = {}

    def feasible(vi: int, depth: int) -> bool:
        lo = hi = 0
        for r, c in terms[vi].items():
            if pos[r] <= depth:
                lo += c * vals[r]
                hi += c * vals[r]
            elif c > 0:
                hi += c * cap
            else:
                lo += c * cap
        return lo <= 1 and hi >= 0

    def rec(depth: int):
        if depth == len(order):
            ones = tuple(sorted(verts[vi].id for vi, t in enumerate(terms) if sum(c * vals[r] for r, c in t.items()) == 1))
            if len(ones) == 3 * g and ones in valid:
                found.setdefault(ones, []).append(Domain(model, tuple(vals), ones))
            return
        r = order[depth]
        for m in range(cap + 1):
            vals[r] = m
            if all(feasible(vi, depth) for vi in watch[depth]):
                rec(depth + 1)
        vals[r] = 0

    rec(0)
    return {k: sorted(v, key=lambda d: d.multiplicities) for k, v in sorted(found.items())}


# -- the lemma --------------------------------------------------------------

@dataclass
class TriangleLemmaReport:
    status: str
    genus: int
    cap: int
    patterns: int
    domains: int
    boundary_touching: int
    max_boundary_weight: int
    euler_values: list[str]
    witness: dict | None = None
    index_conclusion: str = ""

    @property
    def passed(self) -> bool:
        return self.status == "PASS"

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "genus": self.genus,
            "cap": self.cap,
            "patterns": self.patterns,
            "domains_checked": self.domains,
            "all_euler_g_over_4": all(v == str(Fraction(self.genus, 4)) for v in self.euler_values),
            "boundary_touching": self.boundary_touching,
            "max_boundary_weight": self.max_boundary_weight,
            "euler_values": self.euler_values,
            "witness": self.witness,
            "index_conclusion": self.index_conclusion,
        }


def verify_triangle_lemma(model: PlanarDiagramModel, cap: int = 4, workers: int = 1) -> TriangleLemmaReport:
    """Check e(B) = g/4 on every enumerated triangle domain up to the cap.

    With e(B) = g/4 the index of a triangle class is g - chi(S) + m; as S
    has at most g components, chi(S) <= g, so any domain meeting the
    boundary (m >= 1) has index at least 1 and carries no rigid triangle.
    """
    g = model.pmc.genus
    target = Fraction(g, 4)
    patterns = triangle_patterns(model)
    _lattice(model)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            found = list(pool.map(lambda pat: enumerate_positive_triangle_domains(model, pat, cap), patterns))
    else:
        found = [enumerate_positive_triangle_domains(model, pat, cap) for pat in patterns]
    n_dom = n_bdy = max_bw = 0
    values = set()
    witness = None
    for domains in found:
        for d in domains:
            e = euler_measure(d)
            values.add(e)
            n_dom += 1
            if d.touches_boundary():
                n_bdy += 1
                max_bw = max(max_bw, d.boundary_weight())
                worst = polygon_index(g, 2, g, e, 1)
                if e == target and worst < 1:
                    witness = witness or {"domain": d.to_json(), "euler_measure": str(e), "index_bound": str(worst)}
            if e != target and witness is None:
                witness = {"domain": d.to_json(), "euler_measure": str(e), "expected": str(target)}
    status = "PASS" if witness is None else "FAIL"
    conclusion = (
        f"e(B) = {target} on all {n_dom} domains; boundary-touching domains have index g - chi(S) + m >= 1"
        if status == "PASS"
        else "see witness"
    )
    return TriangleLemmaReport(
        status=status,
        genus=g,
        cap=cap,
        patterns=len(patterns),
        domains=n_dom,
        boundary_touching=n_bdy,
        max_boundary_weight=max_bw,
        euler_values=sorted(str(v) for v in values),
        witness=witness,
        index_conclusion=conclusion,
    )
