"""Buchberger engine for homogeneous submodules of graded free modules.

Ideals are rank-one submodules, so one engine serves Groebner bases, normal
forms, syzygies, elimination kernels, colons and saturations. Module elements
are dicts ``{(position, exponent): coefficient}`` over an ambient polynomial
ring; quotient rings are handled by appending their relations.
"""

from __future__ import annotations

import hashlib
import heapq
import json
import logging
import os
import threading
from fractions import Fraction
from itertools import combinations
from pathlib import Path
from typing import Iterable, Sequence

from .algebra import Polynomial, Ring, RingMismatchError, is_homogeneous
from .hilbert import HilbertSeries, monomial_quotient_series

log = logging.getLogger(__name__)

__all__ = [
    "Ideal",
    "ModulePresentation",
    "SubmoduleBasis",
    "colon_saturate",
    "groebner_basis",
    "groebner_basis_of",
    "ring_map_kernel",
    "set_cache_dir",
    "syzygies",
]

CACHE_FORMAT_VERSION = 1


# -- vector helpers --------------------------------------------------------------


def poly_to_vec(p: Polynomial, pos: int = 0) -> dict:
    return {(pos, e): c for e, c in p.items()}


def vec_to_poly(v: dict, ring: Ring, pos: int = 0) -> Polynomial:
    return Polynomial(ring, {e: c for (q, e), c in v.items() if q == pos}, _normalized=True)


def column_to_vec(column: Sequence[Polynomial]) -> dict:
    v = {}
    for i, p in enumerate(column):
        for e, c in p.items():
            v[(i, e)] = c
    return v


def vec_to_column(v: dict, ring: Ring, rank: int) -> list[Polynomial]:
    parts: list[dict] = [{} for _ in range(rank)]
    for (q, e), c in v.items():
        parts[q][e] = c
    return [Polynomial(ring, t, _normalized=True) for t in parts]


def _vec_degree(v: dict, ring: Ring, gen_degrees: Sequence[int]) -> int | None:
    for (q, e) in v:
        return ring._wdeg(e) + gen_degrees[q]
    return None


def _scale_shift(v: dict, c, shift, F) -> dict:
    return {
        (q, tuple(a + b for a, b in zip(e, shift))): F.mul(x, c) for (q, e), x in v.items()
    }


def _axpy(f: dict, c, shift, g: dict, F) -> None:
    """f -= c * x^shift * g, in place."""
    for (q, e), x in g.items():
        m = (q, tuple(a + b for a, b in zip(e, shift)))
        y = F.mul(c, x)
        if m in f:
            z = F.sub(f[m], y)
            if z == 0:
                del f[m]
            else:
                f[m] = z
        else:
            f[m] = F.neg(y)


def _divides(a: tuple, b: tuple) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _monic(v: dict, lm, F) -> dict:
    c = v[lm]
    if c == 1:
        return v
    inv = F.inv(c)
    return {m: F.mul(x, inv) for m, x in v.items()}


def vec_mul_poly(v: dict, p: Polynomial, F) -> dict:
    out: dict = {}
    for e2, c2 in p.items():
        for (q, e1), c1 in v.items():
            m = (q, tuple(a + b for a, b in zip(e1, e2)))
            y = F.mul(c1, c2)
            if m in out:
                z = F.add(out[m], y)
                if z == 0:
                    del out[m]
                else:
                    out[m] = z
            else:
                out[m] = y
    return out


def vec_add(a: dict, b: dict, F) -> dict:
    out = dict(a)
    for m, y in b.items():
        if m in out:
            z = F.add(out[m], y)
            if z == 0:
                del out[m]
            else:
                out[m] = z
        else:
            out[m] = y
    return out


# -- orders and the engine ----------------------------------------------------------


class ModuleOrder:
    """Degree-compatible term order on free-module monomials ``(pos, exp)``.

    Rank one without elimination reproduces the ring order exactly. With
    ``nelim = k`` positions ``< k`` dominate every other position, so basis
    elements whose leading position is ``>= k`` have no terms in the first
    ``k`` positions.
    """

    def __init__(self, ring: Ring, gen_degrees: Sequence[int] = (0,), nelim: int = 0):
        self.ring = ring
        self.gen_degrees = tuple(gen_degrees)
        self.nelim = nelim
        rk = ring.key
        if len(self.gen_degrees) == 1 and nelim == 0:
            self.key = lambda m: rk(m[1])
        else:
            wdeg = ring._wdeg
            gd = self.gen_degrees
            self.key = lambda m: (1 if m[0] < nelim else 0, wdeg(m[1]) + gd[m[0]], rk(m[1]), -m[0])


class SubmoduleBasis:
    """Reduced Groebner basis of a submodule of a free module over ``ring``.

    ``ring`` must be a polynomial ring (no relations). Construction runs
    Buchberger with the normal selection strategy (smallest lcm first, ties in
    input order), the coprime criterion for ideals and the chain criterion.
    """

    def __init__(self, ring: Ring, generators: Iterable[dict], gen_degrees: Sequence[int] = (0,), nelim: int = 0):
        if ring.is_quotient:
            raise ValueError("SubmoduleBasis works over the ambient polynomial ring")
        self.ring = ring
        self.field = ring.field
        self.order = ModuleOrder(ring, gen_degrees, nelim)
        self.rank = len(tuple(gen_degrees))
        self.basis: list[dict] = []
        self.leads: list[tuple] = []
        self._run([g for g in generators if g])

    def _lead(self, v: dict):
        return max(v, key=self.order.key)

    def _top_reduce(self, f: dict, basis=None, leads=None) -> dict:
        basis = self.basis if basis is None else basis
        leads = self.leads if leads is None else leads
        F = self.field
        f = dict(f)
        key = self.order.key
        while f:
            lm = max(f, key=key)
            for g, lg in zip(basis, leads):
                if lg[0] == lm[0] and _divides(lg[1], lm[1]):
                    shift = tuple(a - b for a, b in zip(lm[1], lg[1]))
                    _axpy(f, F.div(f[lm], g[lg]), shift, g, F)
                    break
            else:
                return f
        return f

    def _run(self, gens: list[dict]) -> None:
        F = self.field
        key = self.order.key
        is_ideal = self.rank == 1
        basis, leads = self.basis, self.leads
        heap: list = []
        pending: set = set()

        def add(h: dict) -> None:
            lm = self._lead(h)
            h = _monic(h, lm, F)
            idx = len(basis)
            basis.append(h)
            leads.append(lm)
            for i in range(idx):
                if leads[i][0] != lm[0]:
                    continue
                lcm = tuple(max(a, b) for a, b in zip(leads[i][1], lm[1]))
                heapq.heappush(heap, (key((lm[0], lcm)), i, idx))
                pending.add((i, idx))

        for g in gens:
            h = self._top_reduce(g)
            if h:
                add(h)

        while heap:
            _, i, j = heapq.heappop(heap)
            pending.discard((i, j))
            li, lj = leads[i], leads[j]
            if is_ideal and not any(a and b for a, b in zip(li[1], lj[1])):
                continue
            lcm = tuple(max(a, b) for a, b in zip(li[1], lj[1]))
            skip = False
            for k, lk in enumerate(leads):
                if k in (i, j) or lk[0] != li[0] or not _divides(lk[1], lcm):
                    continue
                if (min(i, k), max(i, k)) not in pending and (min(j, k), max(j, k)) not in pending:
                    skip = True
                    break
            if skip:
                continue
            s = _scale_shift(basis[i], F.one, tuple(a - b for a, b in zip(lcm, li[1])), F)
            _axpy(s, F.one, tuple(a - b for a, b in zip(lcm, lj[1])), basis[j], F)
            h = self._top_reduce(s)
            if h:
                add(h)

        # minimalise and inter-reduce
        keep = []
        for i, li in enumerate(leads):
            redundant = False
            for j, lj in enumerate(leads):
                if i == j or lj[0] != li[0] or not _divides(lj[1], li[1]):
                    continue
                if lj[1] != li[1] or j < i:
                    redundant = True
                    break
            if not redundant:
                keep.append(i)
        mb = [basis[i] for i in keep]
        ml = [leads[i] for i in keep]
        reduced = []
        for idx, (g, lg) in enumerate(zip(mb, ml)):
            others_b = mb[:idx] + mb[idx + 1 :]
            others_l = ml[:idx] + ml[idx + 1 :]
            tail = dict(g)
            del tail[lg]
            tail = self._full_reduce(tail, others_b, others_l)
            tail[lg] = g[lg]
            reduced.append((lg, _monic(tail, lg, F)))
        reduced.sort(key=lambda t: key(t[0]))
        self.basis = [g for _, g in reduced]
        self.leads = [lg for lg, _ in reduced]

    def _full_reduce(self, f: dict, basis: list[dict], leads: list) -> dict:
        F = self.field
        key = self.order.key
        f = dict(f)
        rem: dict = {}
        while f:
            lm = max(f, key=key)
            for g, lg in zip(basis, leads):
                if lg[0] == lm[0] and _divides(lg[1], lm[1]):
                    shift = tuple(a - b for a, b in zip(lm[1], lg[1]))
                    _axpy(f, F.div(f[lm], g[lg]), shift, g, F)
                    break
            else:
                rem[lm] = f.pop(lm)
        return rem

    def reduce(self, f: dict) -> dict:
        """Normal form of ``f`` modulo the submodule."""
        return self._full_reduce(f, self.basis, self.leads)

    def contains(self, f: dict) -> bool:
        return not self._top_reduce(f)

    def leading_exponents(self) -> list[list[tuple[int, ...]]]:
        per_pos: list[list] = [[] for _ in range(self.rank)]
        for q, e in self.leads:
            per_pos[q].append(e)
        return per_pos

    def s_pairs_reduce_to_zero(self) -> bool:
        """Buchberger's criterion, checked without any pair pruning."""
        F = self.field
        for (i, li), (j, lj) in combinations(enumerate(self.leads), 2):
            if li[0] != lj[0]:
                continue
            lcm = tuple(max(a, b) for a, b in zip(li[1], lj[1]))
            s = _scale_shift(self.basis[i], F.one, tuple(a - b for a, b in zip(lcm, li[1])), F)
            _axpy(s, F.one, tuple(a - b for a, b in zip(lcm, lj[1])), self.basis[j], F)
            if self.reduce(s):
                return False
        return True


# -- on-disk cache --------------------------------------------------------------------

_cache_dir: Path | None = None


def set_cache_dir(path: str | os.PathLike | None) -> None:
    global _cache_dir
    _cache_dir = Path(path) if path else None
    if _cache_dir is not None:
        _cache_dir.mkdir(parents=True, exist_ok=True)


def _coeff_str(c) -> str:
    return str(c)


def _cache_key(ring: Ring, gens: list[Polynomial]) -> str:
    payload = {
        "v": CACHE_FORMAT_VERSION,
        "vars": list(ring.variables),
        "field": repr(ring.field),
        "order": str(ring.order),
        "weights": list(ring.weights) if ring.weights else None,
        "gens": [sorted([list(e), _coeff_str(c)] for e, c in g.items()) for g in gens],
    }
    blob = json.dumps(payload, sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()


def _cache_load(key: str, ring: Ring) -> list[Polynomial] | None:
    if _cache_dir is None:
        return None
    path = _cache_dir / f"{key}.json"
    try:
        data = json.loads(path.read_text())
        if data.get("version") != CACHE_FORMAT_VERSION:
            return None
        F = ring.field
        return [
            Polynomial(ring, {tuple(e): F(Fraction(c)) for e, c in terms})
            for terms in data["basis"]
        ]
    except (OSError, ValueError, KeyError, TypeError):
        return None


def _cache_store(key: str, basis: list[Polynomial]) -> None:
    if _cache_dir is None:
        return
    data = {
        "version": CACHE_FORMAT_VERSION,
        "basis": [[[list(e), _coeff_str(c)] for e, c in p.terms()] for p in basis],
    }
    tmp = _cache_dir / f"{key}.{os.getpid()}.{threading.get_ident()}.tmp"
    try:
        tmp.write_text(json.dumps(data, sort_keys=True))
        tmp.replace(_cache_dir / f"{key}.json")
    except OSError as exc:
        log.debug("groebner cache write failed: %s", exc)


def groebner_basis_of(polys: Iterable[Polynomial]) -> list[Polynomial]:
    """Reduced Groebner basis (sorted by leading monomial) of polynomials in an ambient ring."""
    polys = [p for p in polys if not p.is_zero()]
    if not polys:
        return []
    ring = polys[0].ring
    if ring.is_quotient:
        raise ValueError("groebner_basis_of expects ambient-ring polynomials")
    key = _cache_key(ring, polys)
    cached = _cache_load(key, ring)
    if cached is not None:
        return cached
    sb = SubmoduleBasis(ring, [poly_to_vec(p) for p in polys])
    basis = [vec_to_poly(v, ring) for v in sb.basis]
    _cache_store(key, basis)
    return basis


def reduce_terms(terms: dict, basis: Sequence[Polynomial], ring: Ring) -> dict:
    """Normal form (as a term dict) of ``terms`` modulo a reduced basis in ``ring``."""
    F = ring.field
    key = ring.key
    leads = [max(g._terms, key=key) for g in basis]
    f = dict(terms)
    rem = {}
    while f:
        lm = max(f, key=key)
        for g, lg in zip(basis, leads):
            if _divides(lg, lm):
                c = F.div(f[lm], g._terms[lg])
                shift = tuple(a - b for a, b in zip(lm, lg))
                for e, x in g._terms.items():
                    m = tuple(a + b for a, b in zip(e, shift))
                    y = F.mul(c, x)
                    if m in f:
                        z = F.sub(f[m], y)
                        if z == 0:
                            del f[m]
                        else:
                            f[m] = z
                    else:
                        f[m] = F.neg(y)
                break
        else:
            rem[lm] = f.pop(lm)
    return rem


# -- ideals ------------------------------------------------------------------------------


class Ideal:
    """Homogeneous ideal of a (possibly quotient) standard graded ring.

    The Groebner basis is computed lazily in the ambient polynomial ring with
    the quotient relations appended, and cached on the handle.
    """

    def __init__(self, ring: Ring, generators: Iterable = ()):
        self.ring = ring
        gens = []
        for g in generators:
            g = g if isinstance(g, Polynomial) else ring(g)
            if g.ring != ring:
                raise RingMismatchError(f"generator {g} is not in {ring}")
            ok, _ = is_homogeneous(g)
            if not ok:
                raise ValueError(f"non-homogeneous generator {g}")
            if not g.is_zero():
                gens.append(g)
        self.generators = tuple(gens)
        self._gb: tuple[Polynomial, ...] | None = None
        self._lock = threading.Lock()

    # Groebner data
    def _ambient_generators(self) -> list[Polynomial]:
        amb = self.ring.ambient
        return [amb(g) for g in self.generators] + list(self.ring.relations)

    def groebner_basis(self) -> tuple[Polynomial, ...]:
        """Reduced basis in the ambient ring (includes the quotient relations)."""
        if self._gb is None:
            with self._lock:
                if self._gb is None:
                    self._gb = tuple(groebner_basis_of(self._ambient_generators()))
        return self._gb

    def normal_form(self, f: Polynomial) -> Polynomial:
        amb = self.ring.ambient
        terms = reduce_terms(amb(f)._terms, self.groebner_basis(), amb)
        return Polynomial(self.ring, terms)

    def __contains__(self, f) -> bool:
        f = f if isinstance(f, Polynomial) else self.ring(f)
        return self.normal_form(f).is_zero()

    def is_zero(self) -> bool:
        return all(g.is_zero() for g in self.generators)

    def is_unit(self) -> bool:
        return any(sum(g.lead_monomial()) == 0 for g in self.groebner_basis())

    def issubset(self, other: "Ideal") -> bool:
        return all(g in other for g in self.generators)

    def __eq__(self, other):
        if not isinstance(other, Ideal) or other.ring != self.ring:
            return NotImplemented
        return self.issubset(other) and other.issubset(self)

    __hash__ = None  # mutable cache; equality is mathematical

    def is_monomial(self) -> bool:
        return all(g.is_monomial() for g in self.generators)

    def monomial_exponents(self) -> list[tuple[int, ...]]:
        if not self.is_monomial():
            raise ValueError("ideal is not generated by monomials")
        return [g.lead_monomial() for g in self.generators]

    def leading_exponents(self) -> list[tuple[int, ...]]:
        return [g.lead_monomial() for g in self.groebner_basis()]

    # dimension theory
    def dimension(self) -> int:
        """Krull dimension of ring/ideal, read off the leading monomial ideal."""
        return monomial_dimension(self.leading_exponents(), self.ring.ngens)

    def height(self) -> int:
        """dim(ring) - dim(ring/ideal); correct for the equidimensional rings used here."""
        return Ideal(self.ring, []).dimension() - self.dimension()

    def hilbert_series(self) -> HilbertSeries:
        """Hilbert series of ring/ideal."""
        return monomial_quotient_series(self.leading_exponents(), self.ring.ngens)

    # arithmetic
    def __add__(self, other: "Ideal") -> "Ideal":
        return Ideal(self.ring, self.generators + other.generators)

    def __mul__(self, other: "Ideal") -> "Ideal":
        return Ideal(self.ring, [f * g for f in self.generators for g in other.generators])

    def power(self, k: int) -> "Ideal":
        out = Ideal(self.ring, [self.ring.one()])
        for _ in range(k):
            out = out * self
        return out

    def intersection(self, other: "Ideal") -> "Ideal":
        if other.ring != self.ring:
            raise RingMismatchError("intersection of ideals from different rings")
        amb = self.ring.ambient
        one = amb.one()
        zero = amb.zero()
        cols = [[one, one]]
        cols += [[amb(k), zero] for k in self.generators] + [[b, zero] for b in self.ring.relations]
        cols += [[zero, amb(l)] for l in other.generators] + [[zero, b] for b in self.ring.relations]
        syz = _syzygy_vectors([column_to_vec(c) for c in cols], (0, 0), amb)
        gens = [vec_to_poly(v, amb, 0) for v, _ in syz]
        return Ideal(self.ring, [self.ring(g) for g in gens if not g.is_zero()]).minimalized()

    def colon(self, other: "Ideal | Polynomial") -> "Ideal":
        """(self : other) for an ideal or a single polynomial."""
        if isinstance(other, Polynomial):
            return self._colon_element(other)
        out = Ideal(self.ring, [self.ring.one()])
        for f in other.generators:
            out = out.intersection(self._colon_element(f))
        return out

    def _colon_element(self, f: Polynomial) -> "Ideal":
        amb = self.ring.ambient
        cols = [[amb(f)]] + [[g] for g in self._ambient_generators()]
        syz = _syzygy_vectors([column_to_vec(c) for c in cols], (0,), amb)
        gens = [vec_to_poly(v, amb, 0) for v, _ in syz]
        return Ideal(self.ring, [self.ring(g) for g in gens if not g.is_zero()]).minimalized()

    def saturation(self, other: "Ideal") -> "Ideal":
        return colon_saturate(self, other)[0]

    def minimalized(self) -> "Ideal":
        """Same ideal on a minimal homogeneous generating set."""
        amb = self.ring.ambient
        rel = [poly_to_vec(b) for b in self.ring.relations]
        vecs = [(poly_to_vec(amb(g)), g.degree()) for g in self.generators]
        mins = minimal_generators(vecs, (0,), amb, extra=rel)
        return Ideal(self.ring, [self.ring(vec_to_poly(v, amb)) for v, _ in mins])

    def __repr__(self):
        return f"Ideal(({', '.join(map(str, self.generators))}) in {self.ring!r})"


def monomial_dimension(exponents: Iterable[tuple[int, ...]], nvars: int) -> int:
    """Largest coordinate subspace contained in the zero set of the monomials; -1 for the unit ideal."""
    supports = [frozenset(i for i, x in enumerate(e) if x) for e in exponents]
    if any(not s for s in supports):
        return -1
    for size in range(nvars, -1, -1):
        for S in combinations(range(nvars), size):
            s = set(S)
            if all(not sup <= s for sup in supports):
                return size
    return 0


def groebner_basis(ideal: Ideal) -> tuple[Polynomial, ...]:
    return ideal.groebner_basis()


# -- syzygies and minimal generators -------------------------------------------------------


def _syzygy_vectors(
    columns: list[dict],
    row_degrees: Sequence[int],
    ring: Ring,
    col_degrees: Sequence[int] | None = None,
) -> list[tuple[dict, int]]:
    """Generators of the kernel of the map sending e_j to ``columns[j]``.

    Uses an elimination order on ``F0 + R^k``: the basis elements whose
    leading position lies in the ``R^k`` block are exactly the syzygies.
    """
    m = len(row_degrees)
    k = len(columns)
    if col_degrees is None:
        col_degrees = []
        for c in columns:
            d = _vec_degree(c, ring, row_degrees)
            col_degrees.append(0 if d is None else d)
    gens = []
    for j, c in enumerate(columns):
        v = dict(c)
        v[(m + j, (0,) * ring.ngens)] = ring.field.one
        gens.append(v)
    sb = SubmoduleBasis(ring, gens, tuple(row_degrees) + tuple(col_degrees), nelim=m)
    out = []
    for v, lm in zip(sb.basis, sb.leads):
        if lm[0] >= m:
            s = {(q - m, e): c for (q, e), c in v.items()}
            out.append((s, _vec_degree(s, ring, col_degrees)))
    return out


def minimal_generators(
    vecs: list[tuple[dict, int]],
    gen_degrees: Sequence[int],
    ring: Ring,
    extra: Sequence[dict] = (),
) -> list[tuple[dict, int]]:
    """A minimal homogeneous generating set, taken in degree order.

    ``extra`` are vectors already in the submodule (e.g. quotient relations)
    that never appear in the output.
    """
    items = sorted(((v, d) for v, d in vecs if v), key=lambda t: t[1])
    accepted: list[tuple[dict, int]] = []
    current = SubmoduleBasis(ring, list(extra), gen_degrees)
    for v, d in items:
        if current.reduce(v):
            accepted.append((v, d))
            current = SubmoduleBasis(ring, current.basis + [v], gen_degrees)
    return accepted


def syzygies(columns: Sequence[Sequence[Polynomial]], twists: Sequence[int] | None = None) -> list[list[Polynomial]]:
    """Minimal generators of the kernel of the matrix with the given columns.

    ``twists`` are the twists of the target free module (default all 0).
    Returned syzygies are columns indexed by the input columns.
    """
    if not columns:
        return []
    rank = len(columns[0])
    ring = columns[0][0].ring
    amb = ring.ambient
    twists = tuple(twists) if twists is not None else (0,) * rank
    row_deg = tuple(-t for t in twists)
    cols = [column_to_vec([amb(p) for p in c]) for c in columns]
    rel_cols = [poly_to_vec(b, i) for i in range(rank) for b in ring.relations]
    k = len(cols)
    col_deg = []
    for c in cols:
        d = _vec_degree(c, amb, row_deg)
        col_deg.append(0 if d is None else d)
    rel_deg = [_vec_degree(c, amb, row_deg) for c in rel_cols]
    syz = _syzygy_vectors(cols + rel_cols, row_deg, amb, col_deg + rel_deg)
    proj = []
    for v, d in syz:
        p = {(q, e): c for (q, e), c in v.items() if q < k}
        if p:
            proj.append((p, d))
    if ring.is_quotient:
        extra = [poly_to_vec(b, j) for j in range(k) for b in ring.relations]
    else:
        extra = []
    mins = minimal_generators(proj, col_deg, amb, extra=extra)
    return [[ring(p) for p in vec_to_column(v, amb, k)] for v, _ in mins]


def colon_saturate(K: "Ideal | ModulePresentation", I: Ideal, max_steps: int = 64):
    """(K : I^infinity) by iterated colons; returns (result, number of steps).

    For a ModulePresentation the saturation is taken of its relation
    submodule inside the free module, and a ModulePresentation is returned.
    """
    if isinstance(K, ModulePresentation):
        return _module_saturate(K, I, max_steps)
    current = K.colon(I)
    for step in range(1, max_steps + 1):
        nxt = current.colon(I)
        if nxt.issubset(current):
            return current, step
        current = nxt
    raise RuntimeError("saturation chain did not stabilise")


def ring_map_kernel(source: Ring, images: Sequence[Polynomial]) -> Ideal:
    """Kernel of ``source -> target`` sending the i-th variable to ``images[i]``.

    Computed by elimination in ``target_vars + source_vars`` with the source
    variables weighted by their image degrees, so the kernel is homogeneous.
    """
    if len(images) != source.ngens:
        raise ValueError("need one image per source variable")
    target = images[0].ring
    degs = []
    for img in images:
        if img.ring != target:
            raise RingMismatchError("images must share a ring")
        ok, d = is_homogeneous(img)
        if not ok:
            raise ValueError(f"non-homogeneous image {img}")
        degs.append(1 if img.is_zero() else d)
    if len(set(degs)) > 1:
        raise ValueError("images must all have the same degree")
    nt, ns = target.ngens, source.ngens
    names = tuple(f"_t{i}" for i in range(nt)) + tuple(f"_s{i}" for i in range(ns))
    weights = (1,) * nt + tuple(degs)
    big = Ring(names, target.field, ("elim", nt), weights=weights)

    def lift_target(p: Polynomial) -> Polynomial:
        return Polynomial(big, {e + (0,) * ns: c for e, c in p.items()})

    gens = []
    for i, img in enumerate(images):
        z = big.monomial((0,) * nt + tuple(int(i == j) for j in range(ns)))
        gens.append(z - lift_target(target.ambient(img)))
    gens += [lift_target(b) for b in target.relations]
    basis = groebner_basis_of(gens)
    kernel = []
    for g in basis:
        if all(not any(e[:nt]) for e in g._terms):
            kernel.append(source(Polynomial(source.ambient, {e[nt:]: c for e, c in g.items()})))
    return Ideal(source, kernel).minimalized()


# -- module presentations ------------------------------------------------------------------


class ModulePresentation:
    """coker(F1 -> F0) with F0 = sum R(twists[i]) and relation columns.

    ``relations`` is a list of columns, each a list of ``len(twists)``
    polynomials. Generator i sits in degree ``-twists[i]``.
    """

    def __init__(self, ring: Ring, twists: Sequence[int], relations: Iterable[Sequence] = ()):
        self.ring = ring
        self.twists = tuple(int(t) for t in twists)
        cols = []
        for col in relations:
            col = [p if isinstance(p, Polynomial) else ring(p) for p in col]
            if len(col) != self.rank:
                raise ValueError("relation column has the wrong length")
            if any(p.ring != ring for p in col):
                raise RingMismatchError("relation entry from another ring")
            cols.append(tuple(col))
        self.relations = tuple(cols)
        for j, col in enumerate(self.relations):
            self.column_degree(j)

    @property
    def rank(self) -> int:
        return len(self.twists)

    @property
    def gen_degrees(self) -> tuple[int, ...]:
        return tuple(-t for t in self.twists)

    def column_degree(self, j: int) -> int | None:
        degs = set()
        for i, p in enumerate(self.relations[j]):
            ok, d = is_homogeneous(p)
            if not ok:
                raise ValueError(f"relation column {j} is not homogeneous")
            if not p.is_zero():
                degs.add(d + self.gen_degrees[i])
        if len(degs) > 1:
            raise ValueError(f"relation column {j} is not homogeneous for the twists")
        return degs.pop() if degs else None

    @classmethod
    def free(cls, ring: Ring, twists: Sequence[int] = (0,)) -> "ModulePresentation":
        return cls(ring, twists, [])

    @classmethod
    def cyclic(cls, ideal: Ideal, twist: int = 0) -> "ModulePresentation":
        """(ring/ideal)(twist)."""
        return cls(ideal.ring, (twist,), [[g] for g in ideal.generators])

    def over_ambient(self) -> "ModulePresentation":
        """The same module presented over the ambient polynomial ring."""
        if not self.ring.is_quotient:
            return self
        amb = self.ring.ambient
        zero = amb.zero()
        cols = [[amb(p) for p in c] for c in self.relations]
        for i in range(self.rank):
            for b in self.ring.relations:
                cols.append([b if k == i else zero for k in range(self.rank)])
        return ModulePresentation(amb, self.twists, cols)

    def _vectors(self) -> tuple[Ring, list[dict]]:
        m = self.over_ambient()
        return m.ring, [column_to_vec(c) for c in m.relations]

    def submodule_basis(self) -> SubmoduleBasis:
        amb, cols = self._vectors()
        return SubmoduleBasis(amb, cols, self.gen_degrees)

    def hilbert_series(self) -> HilbertSeries:
        sb = self.submodule_basis()
        n = self.ring.ngens
        total = HilbertSeries({}, 0)
        for pos, exps in enumerate(sb.leading_exponents()):
            total = total + monomial_quotient_series(exps, n).shift(self.gen_degrees[pos])
        return total

    def hilbert_function(self, d: int) -> int:
        return self.hilbert_series()(d)

    def is_zero(self) -> bool:
        return self.hilbert_series().is_zero()

    def minimized(self) -> "ModulePresentation":
        """Prune generators killed by unit entries, then drop redundant relations."""
        amb, cols = self._vectors()
        gdeg, cols = prune_presentation(list(self.gen_degrees), cols, amb)
        mins = minimal_generators([(c, _vec_degree(c, amb, gdeg)) for c in cols], gdeg, amb)
        twists = tuple(-g for g in gdeg)
        return ModulePresentation(amb, twists, [vec_to_column(c, amb, len(gdeg)) for c, _ in mins])

    def __repr__(self):
        return f"ModulePresentation(twists={self.twists}, {len(self.relations)} relations over {self.ring!r})"


def prune_presentation(gen_degrees: list[int], cols: list[dict], ring: Ring) -> tuple[list[int], list[dict]]:
    """Gaussian elimination on constant entries of a homogeneous presentation."""
    F = ring.field
    zero_exp = (0,) * ring.ngens
    cols = [dict(c) for c in cols if c]
    gdeg = list(gen_degrees)
    while True:
        hit = None
        for j, c in enumerate(cols):
            for (q, e), x in c.items():
                if e == zero_exp:
                    hit = (j, q, x)
                    break
            if hit:
                break
        if hit is None:
            return gdeg, cols
        j, i, x = hit
        pivot = cols.pop(j)
        new_cols = []
        for c in cols:
            part = {e: y for (q, e), y in c.items() if q == i}
            if part:
                a = Polynomial(ring, {e: F.div(y, x) for e, y in part.items()}, _normalized=True)
                c = vec_add(c, {m: F.neg(y) for m, y in vec_mul_poly(pivot, a, F).items()}, F)
            c = {((q - 1 if q > i else q), e): y for (q, e), y in c.items() if q != i}
            if c:
                new_cols.append(c)
        cols = new_cols
        del gdeg[i]


def _module_saturate(M: ModulePresentation, I: Ideal, max_steps: int):
    amb, cols = M._vectors()
    rank = M.rank
    gdeg = M.gen_degrees
    F = amb.field
    gens_I = [amb(f) for f in I.generators]

    def colon(sub: list[dict]) -> list[dict]:
        result = None
        for f in gens_I:
            fcols = [vec_mul_poly({(i, (0,) * amb.ngens): F.one}, f, F) for i in range(rank)]
            deg_f = f.degree()
            cdeg = [gdeg[i] + deg_f for i in range(rank)] + [
                _vec_degree(c, amb, gdeg) or 0 for c in sub
            ]
            syz = _syzygy_vectors(fcols + sub, gdeg, amb, cdeg)
            part = [{m: c for m, c in v.items() if m[0] < rank} for v, _ in syz]
            part = [p for p in part if p]
            if result is None:
                result = part
            else:
                result = _intersect_submodules(result, part, gdeg, amb)
        return result or []

    current = colon(cols)
    for step in range(1, max_steps + 1):
        nxt = colon(current)
        sb = SubmoduleBasis(amb, current, gdeg)
        if all(sb.contains(v) for v in nxt):
            mins = minimal_generators([(v, _vec_degree(v, amb, gdeg)) for v in current], gdeg, amb)
            return ModulePresentation(amb, M.twists, [vec_to_column(v, amb, rank) for v, _ in mins]), step
        current = nxt
    raise RuntimeError("saturation chain did not stabilise")


def _intersect_submodules(A: list[dict], B: list[dict], gdeg: Sequence[int], ring: Ring) -> list[dict]:
    rank = len(gdeg)
    F = ring.field
    zero_exp = (0,) * ring.ngens
    cols = []
    for i in range(rank):
        cols.append({(i, zero_exp): F.one, (rank + i, zero_exp): F.one})
    cols += [dict(a) for a in A]
    cols += [{(q + rank, e): c for (q, e), c in b.items()} for b in B]
    row_deg = tuple(gdeg) + tuple(gdeg)
    syz = _syzygy_vectors(cols, row_deg, ring)
    out = []
    for v, _ in syz:
        p = {m: c for m, c in v.items() if m[0] < rank}
        if p:
            out.append(p)
    return out
