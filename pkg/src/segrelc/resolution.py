"""Minimal graded free resolutions, Ext modules and graded local duality.

For a module M over P = k[x_1..x_n],

    dim H^i_m(M)_l = dim Ext^{n-i}_P(M, P(-n))_{-l} = dim Ext^{n-i}_P(M, P)_{-l-n}.

Modules over a quotient T = P/b are handled over P: their local cohomology
with respect to the maximal ideal does not depend on the base.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .algebra import Polynomial, Ring
from .groebner import (
    ModulePresentation,
    _syzygy_vectors,
    _vec_degree,
    column_to_vec,
    minimal_generators,
    prune_presentation,
    vec_to_column,
)
from .hilbert import HilbertSeries

__all__ = [
    "GradedResolution",
    "HilbertFunctionWindow",
    "depth",
    "ext_module",
    "free_resolution",
    "local_cohomology_via_duality",
]


@dataclass
class GradedResolution:
    """0 <- F_0 <- F_1 <- ... <- F_k, each F_i = sum P(twist).

    ``differentials[i]`` maps F_{i+1} to F_i and is stored as a list of
    columns (one per generator of F_{i+1}), each a list of polynomials.
    """

    ring: Ring
    twists: list[tuple[int, ...]]
    differentials: list[list[list[Polynomial]]]
    complete: bool = True

    @property
    def length(self) -> int:
        return len(self.twists) - 1

    def betti_numbers(self) -> list[int]:
        return [len(t) for t in self.twists]

    def graded_betti(self) -> list[dict[int, int]]:
        """Per homological degree: generator degree -> multiplicity."""
        out = []
        for tw in self.twists:
            d: dict[int, int] = {}
            for t in tw:
                d[-t] = d.get(-t, 0) + 1
            out.append(d)
        return out

    def hilbert_series(self) -> HilbertSeries:
        """Alternating sum of the free modules' series."""
        n = self.ring.ngens
        num: dict[int, int] = {}
        for i, tw in enumerate(self.twists):
            for t in tw:
                num[-t] = num.get(-t, 0) + (-1) ** i
        return HilbertSeries(num, n)

    def composes_to_zero(self) -> bool:
        for a, b in zip(self.differentials, self.differentials[1:]):
            for col in b:
                image = [self.ring.zero() for _ in a[0]] if a else []
                for coeff, src in zip(col, a):
                    image = [u + coeff * v for u, v in zip(image, src)]
                if any(not p.is_zero() for p in image):
                    return False
        return True


def free_resolution(M: ModulePresentation, length: int | None = None) -> GradedResolution:
    """Minimal graded free resolution over the ambient polynomial ring.

    The presentation is first pruned by Gaussian elimination on constant
    entries; each later stage takes a minimal generating set of the syzygies.
    """
    Ma = M.over_ambient()
    P = Ma.ring
    n = P.ngens
    maxlen = n if length is None else min(length, n)
    gdeg, cols = prune_presentation(list(Ma.gen_degrees), [column_to_vec(c) for c in Ma.relations], P)
    mins = minimal_generators([(c, _vec_degree(c, P, gdeg)) for c in cols], gdeg, P)
    twists = [tuple(-g for g in gdeg)]
    diffs: list[list[list[Polynomial]]] = []
    cur_cols = [c for c, _ in mins]
    cur_deg = [d for _, d in mins]
    prev_deg = gdeg
    complete = True
    while cur_cols:
        if len(diffs) >= maxlen:
            complete = False
            break
        diffs.append([vec_to_column(c, P, len(prev_deg)) for c in cur_cols])
        twists.append(tuple(-d for d in cur_deg))
        syz = _syzygy_vectors(cur_cols, prev_deg, P, cur_deg)
        syz_min = minimal_generators(syz, cur_deg, P)
        prev_deg = cur_deg
        cur_cols = [v for v, _ in syz_min]
        cur_deg = [d for _, d in syz_min]
    return GradedResolution(P, twists, diffs, complete)


def _transpose(columns: list[list[Polynomial]], nrows: int) -> list[list[Polynomial]]:
    return [[col[i] for col in columns] for i in range(nrows)]


def ext_module(M: ModulePresentation, i: int, resolution: GradedResolution | None = None) -> ModulePresentation:
    """Presentation of Ext^i_P(M, P) as a graded module."""
    res = resolution or free_resolution(M)
    P = res.ring
    if i < 0 or i > res.length:
        return ModulePresentation(P, (), [])
    # F_i^* = sum P(-twist); generator degrees of the dual are the twists
    dual_deg = list(res.twists[i])
    rank = len(dual_deg)
    if rank == 0:
        return ModulePresentation(P, (), [])
    # kernel of d_{i+1}^T : F_i^* -> F_{i+1}^*
    if i < res.length:
        out_deg = list(res.twists[i + 1])
        dT = _transpose(res.differentials[i], rank)  # rank columns, each of length len(F_{i+1})
        dT_vecs = [column_to_vec(c) for c in dT]
        kernel = _syzygy_vectors(dT_vecs, out_deg, P, dual_deg)
        kernel = minimal_generators(kernel, dual_deg, P)
    else:
        zero_exp = (0,) * P.ngens
        kernel = [({(j, zero_exp): P.field.one}, dual_deg[j]) for j in range(rank)]
    if not kernel:
        return ModulePresentation(P, (), [])
    # image of d_i^T : F_{i-1}^* -> F_i^*
    if i > 0:
        prev_rank = len(res.twists[i - 1])
        image = [column_to_vec(c) for c in _transpose(res.differentials[i - 1], prev_rank)]
        image = [v for v in image if v]
    else:
        image = []
    kvecs = [v for v, _ in kernel]
    kdeg = [d for _, d in kernel]
    ideg = [_vec_degree(v, P, dual_deg) for v in image]
    syz = _syzygy_vectors(kvecs + image, dual_deg, P, kdeg + ideg)
    k = len(kvecs)
    rels = []
    for v, _ in syz:
        part = {(q, e): c for (q, e), c in v.items() if q < k}
        if part:
            rels.append(vec_to_column(part, P, k))
    return ModulePresentation(P, tuple(-d for d in kdeg), rels).minimized()


@dataclass
class HilbertFunctionWindow:
    """Exact dimensions of a graded module on degrees lo..hi."""

    lo: int
    hi: int
    dims: dict[int, int]
    complete: dict[int, bool] = field(default_factory=dict)

    def __post_init__(self):
        for d in range(self.lo, self.hi + 1):
            self.dims.setdefault(d, 0)
            self.complete.setdefault(d, True)
        if any(v < 0 for v in self.dims.values()):
            raise ValueError("negative dimension")

    def __getitem__(self, d: int) -> int:
        return self.dims[d]

    def nonzero_degrees(self) -> list[int]:
        return sorted(d for d, v in self.dims.items() if v)


def _ext_series(M: ModulePresentation, res: GradedResolution) -> dict[int, HilbertSeries]:
    return {j: ext_module(M, j, res).hilbert_series() for j in range(res.length + 1)}


def local_cohomology_via_duality(
    M: ModulePresentation,
    i: int,
    window: tuple[int, int],
    resolution: GradedResolution | None = None,
) -> HilbertFunctionWindow:
    """dim H^i_m(M)_l for l in the window, by graded local duality.

    The Ext module's Hilbert series is exact in every degree, so no window
    widening is needed: every entry is final.
    """
    res = resolution or free_resolution(M)
    n = res.ring.ngens
    lo, hi = window
    if i < 0 or i > n:
        return HilbertFunctionWindow(lo, hi, {})
    hs = ext_module(M, n - i, res).hilbert_series()
    dims = {l: hs(-l - n) for l in range(lo, hi + 1)}
    return HilbertFunctionWindow(lo, hi, dims)


def local_cohomology_series(M: ModulePresentation, resolution: GradedResolution | None = None) -> dict[int, HilbertSeries]:
    """Hilbert series of Ext^{n-i}(M, P) for every i, keyed by i."""
    res = resolution or free_resolution(M)
    n = res.ring.ngens
    return {n - j: s for j, s in _ext_series(M, res).items()}


def local_cohomology_dim(series: HilbertSeries, n: int, l: int) -> int:
    return series(-l - n)


def depth(M: ModulePresentation) -> int:
    """Depth of M at the maximal ideal by Auslander-Buchsbaum: n - pd(M)."""
    res = free_resolution(M)
    if res.hilbert_series().is_zero():
        raise ValueError("depth of the zero module is infinite")
    return res.ring.ngens - res.length
