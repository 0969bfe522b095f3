"""Fine-graded Cech cohomology of monomial-cyclic modules.

A module here is ``(k[x]/K)(-c)`` with K a monomial ideal, optionally with
some variables inverted; its piece at every multidegree is 0 or 1
dimensional, spanned by the Laurent monomial x^a. Localising at a monomial
only depends on the monomial's support, and every Cech map restricted to a
multidegree is a signed incidence matrix.

Each coordinate of a multidegree falls into one of finitely many classes
(negative, one of the exponents 0..C-1 of the relations, or >= C). The Cech
complex at a multidegree depends only on this class vector (its "type"), so
tables are filled per type, and exact total-degree dimensions (possibly
infinite) are obtained by counting lattice points per type.

Segre products use the same machinery on pairs of factors: the piece of
(M#N)_{m (x) n} at a bidegree (a, b) with |a| = |b| is (M_m)_a (x) (N_n)_b.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Callable, Iterable, Sequence

from .algebra import QQ, Field, Ring
from .groebner import Ideal
from .linalg import complement_basis, in_span, nullspace, rank, row_echelon

__all__ = [
    "Box",
    "CohTable",
    "Detection",
    "MonomialModule",
    "SaturationTable",
    "UnsupportedRouteError",
    "cd_detect",
    "cech_table",
    "cech_table_segre",
    "grade_detect",
    "saturation_table",
    "saturation_of_table",
]


class UnsupportedRouteError(ValueError):
    """Raised for non-monomial data; use the duality route instead."""


INF = math.inf


# -- modules ----------------------------------------------------------------------------


@dataclass(frozen=True)
class MonomialModule:
    """``(k[x]/K)(-shift)`` with the variables in ``inverted`` made invertible."""

    nvars: int
    relations: tuple[tuple[int, ...], ...] = ()
    shift: tuple[int, ...] | None = None
    inverted: frozenset = frozenset()
    names: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.shift is None:
            object.__setattr__(self, "shift", (0,) * self.nvars)
        object.__setattr__(self, "relations", tuple(sorted({tuple(r) for r in self.relations})))
        object.__setattr__(self, "inverted", frozenset(self.inverted))
        if len(self.shift) != self.nvars or any(len(r) != self.nvars for r in self.relations):
            raise ValueError("exponent vectors must have length nvars")
        if any(x < 0 for r in self.relations for x in r):
            raise ValueError("relations must be monomials with nonnegative exponents")

    # constructors
    @classmethod
    def free(cls, nvars: int, shift: Sequence[int] | None = None, names=None) -> "MonomialModule":
        return cls(nvars, (), tuple(shift) if shift else None, frozenset(), names)

    @classmethod
    def from_ring(cls, ring: Ring, ideal: Ideal | None = None, twist: int = 0) -> "MonomialModule":
        """(ring/ideal)(twist); ring relations and ideal must be monomial.

        A nonzero Z-graded twist is placed on the first variable.
        """
        rels = []
        for p in ring.relations:
            if not p.is_monomial():
                raise UnsupportedRouteError(f"relation {p} is not a monomial")
            rels.append(p.lead_monomial())
        if ideal is not None:
            if not ideal.is_monomial():
                raise UnsupportedRouteError("ideal is not monomial; use the duality route")
            rels += ideal.monomial_exponents()
        shift = [0] * ring.ngens
        if twist:
            shift[0] = -twist
        return cls(ring.ngens, tuple(rels), tuple(shift), frozenset(), ring.variables)

    @classmethod
    def from_presentation(cls, ring: Ring, module=None) -> "MonomialModule":
        """Cyclic ``coker`` with monomial relation entries, or the ring itself."""
        if module is None:
            return cls.from_ring(ring)
        if module.rank != 1:
            raise UnsupportedRouteError("only cyclic modules have a monomial Cech route")
        entries = [col[0] for col in module.relations if not col[0].is_zero()]
        if any(not p.is_monomial() for p in entries):
            raise UnsupportedRouteError("relations are not monomials; use the duality route")
        return cls.from_ring(ring, Ideal(ring, entries), module.twists[0])

    def twisted(self, shift: Sequence[int]) -> "MonomialModule":
        new = tuple(a + b for a, b in zip(self.shift, shift))
        return MonomialModule(self.nvars, self.relations, new, self.inverted, self.names)

    def localized(self, variables: Iterable[int]) -> "MonomialModule":
        return MonomialModule(self.nvars, self.relations, self.shift, self.inverted | set(variables), self.names)

    # pieces
    def loc_dim(self, a: Sequence[int], support: frozenset = frozenset()) -> int:
        """dim of (M localised at any monomial with the given support) at a."""
        s = support | self.inverted
        b = [x - c for x, c in zip(a, self.shift)]
        for v in range(self.nvars):
            if v not in s and b[v] < 0:
                return 0
        for k in self.relations:
            if all(k[v] <= b[v] for v in range(self.nvars) if v not in s):
                return 0
        return 1

    def dim(self, a: Sequence[int]) -> int:
        return self.loc_dim(a)

    def caps(self) -> tuple[int, ...]:
        return tuple(max((r[v] for r in self.relations), default=0) for v in range(self.nvars))

    def classes(self, v: int) -> list[tuple[float, float]]:
        """Class intervals of coordinate v (inclusive; +-inf for unbounded)."""
        if v in self.inverted:
            return [(-INF, INF)]
        s = self.shift[v]
        C = self.caps()[v]
        out: list[tuple[float, float]] = [(-INF, s - 1)]
        out += [(s + c, s + c) for c in range(C)]
        out.append((s + C, INF))
        return out

    def classify(self, a: Sequence[int]) -> tuple[int, ...]:
        caps = self.caps()
        out = []
        for v in range(self.nvars):
            if v in self.inverted:
                out.append(0)
                continue
            b = a[v] - self.shift[v]
            out.append(0 if b < 0 else 1 + min(b, caps[v]))
        return tuple(out)

    def is_zero(self) -> bool:
        return any(not any(r) for r in self.relations)

    def __str__(self):
        names = self.names or tuple(f"x{i}" for i in range(self.nvars))
        rels = ", ".join(_mono_str(r, names) for r in self.relations)
        s = f"k[{','.join(names)}]" + (f"/({rels})" if rels else "")
        if self.inverted:
            s += "_{" + ",".join(names[v] for v in sorted(self.inverted)) + "}"
        if any(self.shift):
            s += f" shifted to {self.shift}"
        return s


def _mono_str(e, names) -> str:
    parts = [n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k]
    return "*".join(parts) or "1"


# -- boxes ------------------------------------------------------------------------------


@dataclass(frozen=True)
class Box:
    """Per-variable closed integer intervals."""

    intervals: tuple[tuple[int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "intervals", tuple((int(a), int(b)) for a, b in self.intervals))
        if any(a > b for a, b in self.intervals):
            raise ValueError("empty box interval")

    @classmethod
    def uniform(cls, nvars: int, lo: int, hi: int) -> "Box":
        return cls(((lo, hi),) * nvars)

    @property
    def nvars(self) -> int:
        return len(self.intervals)

    @property
    def total_range(self) -> tuple[int, int]:
        return sum(a for a, _ in self.intervals), sum(b for _, b in self.intervals)

    def points(self, totals: tuple[int, int] | None = None):
        for p in product(*(range(a, b + 1) for a, b in self.intervals)):
            if totals is None or totals[0] <= sum(p) <= totals[1]:
                yield p

    def contains(self, a: Sequence[int]) -> bool:
        return all(lo <= x <= hi for x, (lo, hi) in zip(a, self.intervals))

    def __str__(self):
        return "x".join(f"[{a},{b}]" for a, b in self.intervals)


def count_with_sum(intervals: Sequence[tuple[float, float]], total: int) -> float:
    """Number of integer points in a product of intervals with coordinate sum ``total``."""
    if not intervals:
        return 1 if total == 0 else 0
    lows = [a for a, _ in intervals]
    highs = [b for _, b in intervals]
    if sum(lows) > total or sum(highs) < total:
        return 0
    n = len(intervals)
    if n == 1:
        return 1
    free = [v for v in range(n) if lows[v] == -INF and highs[v] == INF]
    if free:
        # one free coordinate absorbs any total; the rest must be finite intervals
        rest = [intervals[v] for v in range(n) if v != free[0]]
        if any(a == -INF or b == INF for a, b in rest):
            return INF
        out = 1
        for a, b in rest:
            out *= int(b) - int(a) + 1
        return out
    up_inf = [v for v in range(n) if highs[v] == INF]
    low_inf = [v for v in range(n) if lows[v] == -INF]
    if any(u != w for u in up_inf for w in low_inf):
        return INF
    if not low_inf:
        s = sum(lows)
        highs = [min(highs[v], total - (s - lows[v])) for v in range(n)]
    else:
        s = sum(highs)
        lows = [max(lows[v], total - (s - highs[v])) for v in range(n)]
    counts = {0: 1}
    for lo, hi in zip(lows, highs):
        lo, hi = int(lo), int(hi)
        nxt: dict[int, int] = {}
        for t, c in counts.items():
            for x in range(lo, hi + 1):
                nxt[t + x] = nxt.get(t + x, 0) + c
        counts = nxt
    return counts.get(total, 0)


# -- the Cech complex at one multidegree ------------------------------------------------------


class _Complex:
    """Cech complex at a fixed multidegree; each piece is 0 or 1 dimensional."""

    def __init__(self, nonzero: Callable[[tuple[int, ...]], bool], ngens: int, field: Field = QQ):
        self.ngens = ngens
        self.field = field
        self.cells: list[list[tuple[int, ...]]] = []
        for p in range(ngens + 1):
            self.cells.append([s for s in combinations(range(ngens), p) if nonzero(s)])
        self.index = [{s: k for k, s in enumerate(c)} for c in self.cells]

    def matrix(self, p: int) -> list[list[int]]:
        """d^p : C^p -> C^{p+1} as a dense matrix (rows = targets)."""
        if p < 0 or p >= self.ngens:
            return []
        src, tgt = self.cells[p], self.index[p + 1]
        rows = [[0] * len(src) for _ in range(len(self.cells[p + 1]))]
        for col, s in enumerate(src):
            for j in range(self.ngens):
                if j in s:
                    continue
                t = tuple(sorted(s + (j,)))
                r = tgt.get(t)
                if r is None:
                    continue
                sign = -1 if sum(1 for q in s if q < j) % 2 else 1
                rows[r][col] = sign
        return rows

    def rank(self, p: int) -> int:
        if p < 0 or p >= self.ngens:
            return 0
        if not self.cells[p] or not self.cells[p + 1]:
            return 0
        return rank(self.matrix(p), self.field)

    def cohomology(self) -> tuple[int, ...]:
        ranks = [self.rank(p) for p in range(self.ngens + 1)]
        out = []
        for p in range(self.ngens + 1):
            out.append(len(self.cells[p]) - ranks[p] - (ranks[p - 1] if p else 0))
        return tuple(out)

    def kernel_dim(self, p: int) -> int:
        return len(self.cells[p]) - self.rank(p)

    def cocycle_basis(self, p: int) -> list[list]:
        n = len(self.cells[p])
        if p >= self.ngens or not self.cells[p + 1]:
            return [[1 if i == j else 0 for i in range(n)] for j in range(n)]
        return nullspace(self.matrix(p), n, self.field)

    def coboundaries(self, p: int) -> list[list]:
        if p == 0:
            return []
        m = self.matrix(p - 1)
        if not m:
            return []
        return [list(col) for col in zip(*m)]

    def class_representatives(self, p: int) -> list[list]:
        return complement_basis(self.coboundaries(p), self.cocycle_basis(p), self.field)

    def is_coboundary(self, p: int, vector: list) -> bool:
        return in_span(vector, self.coboundaries(p), self.field)


# -- problems: one ring or a Segre pair ---------------------------------------------------------


class _Problem:
    """Modules, Cech generators (as per-factor support sets) and grading data."""

    def __init__(self, modules: Sequence[MonomialModule], generators: Sequence[Sequence[tuple[int, ...]]]):
        self.modules = tuple(modules)
        self.generators = [tuple(tuple(e) for e in g) for g in generators]
        self.supports = [
            tuple(frozenset(i for i, x in enumerate(e) if x) for e in g) for g in self.generators
        ]
        self.splits = []
        off = 0
        for m in self.modules:
            self.splits.append((off, off + m.nvars))
            off += m.nvars
        self.nvars = off
        self._cache: dict[tuple, _Complex] = {}

    @property
    def ngens(self) -> int:
        return len(self.generators)

    def parts(self, point: Sequence[int]) -> list[tuple[int, ...]]:
        return [tuple(point[a:b]) for a, b in self.splits]

    def on_diagonal(self, point: Sequence[int]) -> bool:
        totals = {sum(p) for p in self.parts(point)}
        return len(totals) == 1

    def type_of(self, point: Sequence[int]) -> tuple:
        return tuple(m.classify(p) for m, p in zip(self.modules, self.parts(point)))

    def complex_at(self, point: Sequence[int], field: Field = QQ) -> _Complex:
        if not self.on_diagonal(point):
            return _Complex(lambda s: False, self.ngens, field)
        key = self.type_of(point)
        cx = self._cache.get(key)
        if cx is None:
            parts = self.parts(point)

            def nonzero(sigma):
                for f, (m, p) in enumerate(zip(self.modules, parts)):
                    supp = frozenset().union(*(self.supports[g][f] for g in sigma)) if sigma else frozenset()
                    if not m.loc_dim(p, supp):
                        return False
                return True

            cx = _Complex(nonzero, self.ngens, field)
            self._cache[key] = cx
        return cx

    def all_types(self):
        """Every type with its per-factor class intervals."""
        per_factor = []
        for m in self.modules:
            per_var = [list(enumerate(m.classes(v))) for v in range(m.nvars)]
            per_factor.append(list(product(*per_var)))
        for combo in product(*per_factor):
            type_key = tuple(tuple(idx for idx, _ in f) for f in combo)
            intervals = [[iv for _, iv in f] for f in combo]
            yield type_key, intervals

    def representative(self, intervals: list[list[tuple[float, float]]], total: int | None = None):
        """A point of the given type (on the diagonal), or None."""
        ranges = []
        for ivs in intervals:
            lo = sum(a for a, _ in ivs)
            hi = sum(b for _, b in ivs)
            ranges.append((lo, hi))
        lo = max(r[0] for r in ranges)
        hi = min(r[1] for r in ranges)
        if lo > hi:
            return None
        if total is None:
            total = 0 if lo <= 0 <= hi else (int(lo) if lo != -INF else int(hi))
        elif not (lo <= total <= hi):
            return None
        point: list[int] = []
        for ivs in intervals:
            point += _pick(ivs, total)
        return tuple(point)


def _pick(ivs: list[tuple[float, float]], total: int) -> list[int]:
    vals = []
    for a, b in ivs:
        if a != -INF:
            vals.append(int(a))
        elif b != INF:
            vals.append(int(b))
        else:
            vals.append(0)
    diff = total - sum(vals)
    for v, (a, b) in enumerate(ivs):
        if diff == 0:
            break
        if diff > 0 and b > vals[v]:
            step = diff if b == INF else min(diff, int(b) - vals[v])
            vals[v] += step
            diff -= step
        elif diff < 0 and a < vals[v]:
            step = -diff if a == -INF else min(-diff, vals[v] - int(a))
            vals[v] -= step
            diff += step
    if diff:
        raise ValueError("no point with the requested total")
    return vals


# -- tables -------------------------------------------------------------------------------------


@dataclass
class Detection:
    value: int | None
    certainty: str
    witness: dict | None = None
    note: str = ""

    def as_dict(self) -> dict:
        return {"value": self.value, "certainty": self.certainty, "witness": self.witness, "note": self.note}


class CohTable:
    """dim H^i at every multidegree of a box, plus exact type-level queries.

    For a Segre table the multidegree is the concatenation (a, b) and only
    diagonal points (|a| = |b|) are stored.
    """

    def __init__(self, problem: _Problem, boxes: Sequence[Box], field: Field = QQ, threads: int = 1, meta: dict | None = None):
        self.problem = problem
        self.boxes = tuple(boxes)
        self.field = field
        self.meta = dict(meta or {})
        self.max_index = problem.ngens
        points = list(_diagonal_points(self.boxes))

        def work(pt):
            return pt, problem.complex_at(pt, field).cohomology()

        if threads > 1:
            # prime the type cache serially so workers only read it
            for pt in points:
                problem.complex_at(pt, field)
            with ThreadPoolExecutor(max_workers=threads) as pool:
                results = list(pool.map(work, points))
        else:
            results = [work(pt) for pt in points]
        self.entries: dict[tuple[int, ...], tuple[int, ...]] = dict(results)
        self._type_dims: dict | None = None

    @property
    def is_segre(self) -> bool:
        return len(self.problem.modules) == 2

    def dim(self, i: int, point: Sequence[int]) -> int:
        point = tuple(point)
        dims = self.entries.get(point)
        if dims is None:
            dims = self.problem.complex_at(point, self.field).cohomology()
        return dims[i] if 0 <= i < len(dims) else 0

    def total_degree(self, point: Sequence[int]) -> int:
        return sum(self.problem.parts(point)[0])

    def nonzero(self, i: int) -> list[tuple[int, ...]]:
        return sorted(p for p, d in self.entries.items() if d[i])

    def indices_in_box(self) -> list[int]:
        return sorted({i for d in self.entries.values() for i, v in enumerate(d) if v})

    def aggregate(self, i: int) -> dict[int, tuple[int, bool]]:
        """total degree -> (sum of dims over the box, complete flag).

        The flag is set exactly when the box contains every nonzero piece of
        that total degree (compared against the exact type count).
        """
        sums: dict[int, int] = {}
        for p, d in self.entries.items():
            t = self.total_degree(p)
            sums[t] = sums.get(t, 0) + d[i]
        out = {}
        for t in sorted(sums):
            exact = self.total_dim(i, t)
            out[t] = (sums[t], exact == sums[t])
        return out

    def total_range(self) -> tuple[int, int]:
        los, his = zip(*(b.total_range for b in self.boxes))
        return max(los), min(his)

    # exact type-level data
    def type_dims(self) -> list[tuple[tuple, list, tuple[int, ...]]]:
        if self._type_dims is None:
            rows = []
            for key, intervals in self.problem.all_types():
                rep = self.problem.representative(intervals)
                if rep is None:
                    continue
                dims = self.problem.complex_at(rep, self.field).cohomology()
                rows.append((key, intervals, dims))
            self._type_dims = rows
        return self._type_dims

    def total_dim(self, i: int, total: int) -> float:
        """Exact dim of the total-degree piece (math.inf when infinite)."""
        acc = 0
        for _, intervals, dims in self.type_dims():
            if not dims[i]:
                continue
            c = 1
            for ivs in intervals:
                c *= count_with_sum(ivs, total)
                if c == 0:
                    break
            if c:
                acc += dims[i] * c
        return acc

    def global_indices(self) -> list[int]:
        """Indices with a nonzero piece anywhere (not only in the box)."""
        return sorted({i for _, _, d in self.type_dims() for i, v in enumerate(d) if v})

    def global_witness(self, i: int) -> tuple[int, ...] | None:
        for _, intervals, dims in self.type_dims():
            if dims[i]:
                return self.problem.representative(intervals)
        return None

    def box_witness(self, i: int) -> tuple[int, ...] | None:
        nz = self.nonzero(i)
        return nz[0] if nz else None

    # cochain-level data
    def complex_at(self, point: Sequence[int]) -> _Complex:
        return self.problem.complex_at(tuple(point), self.field)

    def class_representatives(self, i: int, point: Sequence[int]) -> list[dict]:
        """Cocycles spanning H^i at ``point``, as {generator subset: coefficient}."""
        cx = self.complex_at(point)
        reps = cx.class_representatives(i)
        return [{s: c for s, c in zip(cx.cells[i], v) if c != 0} for v in reps]

    def split(self, point: Sequence[int]) -> list[tuple[int, ...]]:
        return self.problem.parts(point)

    def as_dict(self, limit: int | None = None) -> dict:
        rows = []
        for p in sorted(self.entries):
            d = self.entries[p]
            if any(d):
                rows.append({"multidegree": list(p), "dims": list(d)})
        if limit is not None:
            rows = rows[:limit]
        return {
            "boxes": [str(b) for b in self.boxes],
            "max_index": self.max_index,
            "nonzero_entries": rows,
            "meta": self.meta,
        }


def _diagonal_points(boxes: Sequence[Box]):
    if len(boxes) == 1:
        yield from boxes[0].points()
        return
    by_total = []
    for b in boxes:
        groups: dict[int, list] = {}
        for p in b.points():
            groups.setdefault(sum(p), []).append(p)
        by_total.append(groups)
    common = set(by_total[0])
    for g in by_total[1:]:
        common &= set(g)
    for t in sorted(common):
        for combo in product(*(g[t] for g in by_total)):
            yield tuple(x for part in combo for x in part)


def cech_table(
    module: MonomialModule,
    ideal_generators: Sequence[Sequence[int]],
    box: Box,
    field: Field = QQ,
    threads: int = 1,
) -> CohTable:
    """H^i_I(M) at every multidegree of ``box`` for a monomial ideal I."""
    if box.nvars != module.nvars:
        raise ValueError("box dimension does not match the ring")
    gens = [(tuple(g),) for g in ideal_generators]
    for (g,) in gens:
        if len(g) != module.nvars or any(x < 0 for x in g):
            raise UnsupportedRouteError(f"bad monomial generator {g}")
    problem = _Problem([module], gens)
    return CohTable(problem, [box], field, threads, {"module": str(module), "generators": [list(g) for (g,) in gens]})


def cech_table_segre(
    M: MonomialModule,
    N: MonomialModule,
    generators: Sequence[tuple[Sequence[int], Sequence[int]]],
    box_R: Box,
    box_S: Box,
    field: Field = QQ,
    threads: int = 1,
    presentation=None,
) -> CohTable:
    """H^k_{I#J}(M#N) at every diagonal bidegree, from pure-tensor generators."""
    gens = []
    for x, y in generators:
        x, y = tuple(x), tuple(y)
        if sum(x) != sum(y):
            raise ValueError(f"unbalanced generator {x} (x) {y}")
        gens.append((x, y))
    problem = _Problem([M, N], gens)
    meta = {"modules": [str(M), str(N)], "generators": [[list(x), list(y)] for x, y in gens]}
    if presentation is not None:
        meta["presentation"] = str(presentation)
    return CohTable(problem, [box_R, box_S], field, threads, meta)


# -- saturation ---------------------------------------------------------------------------------


@dataclass
class SaturationTable:
    """dim (M^sat)_a on a box, with the comparison map M_a -> (M^sat)_a."""

    table: CohTable
    sat: dict[tuple[int, ...], int] = field(default_factory=dict)
    module_dims: dict[tuple[int, ...], int] = field(default_factory=dict)

    def dim(self, point: Sequence[int]) -> int:
        point = tuple(point)
        if point in self.sat:
            return self.sat[point]
        return _sat_dim(self.table, point)

    def comparison_map(self, point: Sequence[int]) -> tuple[list[list], list[list]]:
        """(matrix of M_a -> ker d^1 in a chosen kernel basis, the kernel basis)."""
        return _comparison_map(self.table, point)

    def four_term_holds(self) -> bool:
        for p, s in self.sat.items():
            h0 = self.table.dim(0, p)
            h1 = self.table.dim(1, p)
            if self.module_dims[p] - s != h0 - h1:
                return False
        return True


def _module_dim(table: CohTable, point) -> int:
    if not table.problem.on_diagonal(point):
        return 0
    d = 1
    for m, p in zip(table.problem.modules, table.problem.parts(point)):
        d *= m.dim(p)
    return d


def _sat_dim(table: CohTable, point) -> int:
    cx = table.complex_at(point)
    if cx.ngens == 0:
        return 0
    return cx.kernel_dim(1)


def _comparison_map(table: CohTable, point) -> tuple[list[list], list[list]]:
    cx = table.complex_at(point)
    F = table.field
    if cx.ngens == 0:
        return [], []
    kb = cx.cocycle_basis(1)
    n0 = len(cx.cells[0])
    d0 = cx.matrix(0)
    # express d0(e) in the kernel basis: solve kb^T * c = d0 column
    cols = []
    for j in range(n0):
        target = [row[j] for row in d0]
        cols.append(_coordinates(target, kb, F))
    # matrix with rows = kernel basis index, cols = source basis
    mat = [[cols[j][r] for j in range(n0)] for r in range(len(kb))]
    return mat, kb


def _coordinates(target: list, basis: list[list], F: Field) -> list:
    """Coordinates of ``target`` in ``basis`` (basis vectors independent, target in span)."""
    if not basis:
        if any(x != 0 for x in target):
            raise ValueError("vector not in span")
        return []
    n = len(basis)
    rows = [[basis[k][i] for k in range(n)] + [target[i]] for i in range(len(target))]

    red, piv = row_echelon(rows, F)
    if n in piv:
        raise ValueError("vector not in span")
    coords = [F.zero] * n
    for r, c in zip(red, piv):
        coords[c] = r[n]
    return coords


def saturation_table(
    module: MonomialModule,
    ideal_generators: Sequence[Sequence[int]],
    box: Box,
    field: Field = QQ,
    table: CohTable | None = None,
) -> SaturationTable:
    table = table or cech_table(module, ideal_generators, box, field)
    return _build_sat(table)


def saturation_of_table(table: CohTable) -> SaturationTable:
    """Saturation dims for every point of an existing table (ring or Segre)."""
    return _build_sat(table)


def _build_sat(table: CohTable) -> SaturationTable:
    st = SaturationTable(table)
    for p in table.entries:
        st.sat[p] = _sat_dim(table, p)
        st.module_dims[p] = _module_dim(table, p)
    if not st.four_term_holds():
        raise AssertionError("four-term rank identity failed")
    return st


# -- detection ----------------------------------------------------------------------------------


def grade_detect(table: CohTable) -> Detection:
    """Least index with a nonzero entry in the box.

    Vanishing below it is certified when the exact type analysis finds no
    nonzero piece of a lower index anywhere.
    """
    box_idx = table.indices_in_box()
    glob = table.global_indices()
    if not box_idx:
        if not glob:
            return Detection(None, "certified-vanishing-below", None, f"all indices 0..{table.max_index} vanish")
        return Detection(None, "window-limited", None, "box shows no nonzero entry")
    value = box_idx[0]
    witness = table.box_witness(value)
    wit = {"index": value, "multidegree": list(witness), "dim": table.dim(value, witness)}
    if glob and glob[0] < value:
        return Detection(value, "window-limited", wit, f"index {glob[0]} is nonzero outside the box")
    return Detection(value, "certified-vanishing-below", wit)


def cd_detect(table: CohTable, proven_upper: int | None = None) -> Detection:
    """Greatest index with a nonzero entry in the box."""
    box_idx = table.indices_in_box()
    if not box_idx:
        return Detection(None, "window-limited", None, "box shows no nonzero entry")
    value = box_idx[-1]
    witness = table.box_witness(value)
    wit = {"index": value, "multidegree": list(witness), "dim": table.dim(value, witness)}
    if proven_upper is not None and proven_upper == value:
        return Detection(value, "certified", wit, "upper bound by theorem, lower bound by witness")
    glob = table.global_indices()
    if glob and glob[-1] == value:
        return Detection(value, "certified", wit, "no higher index is nonzero at any multidegree type")
    return Detection(value, "window-limited", wit)
