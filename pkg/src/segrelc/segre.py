"""Segre products: the presented ring R#S, pure-tensor ideal generators, and
dimension tables of Segre products of modules."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from math import gcd
from typing import Mapping, Sequence

from .algebra import Polynomial, Ring
from .groebner import Ideal, ring_map_kernel
from .hilbert import HilbertSeries, hadamard_product

__all__ = [
    "SegreIdealGens",
    "SegrePresentation",
    "SegreVerificationError",
    "segre_ideal_generators",
    "segre_module_table",
    "segre_presentation",
]


class SegreVerificationError(RuntimeError):
    """The presented ring's Hilbert series disagrees with the Hadamard product."""


def ring_hilbert_series(R: Ring) -> HilbertSeries:
    return Ideal(R, []).hilbert_series()


@dataclass
class SegrePresentation:
    """T = R#S as k[z_ij]/kernel with z_ij -> x_i*y_j."""

    R: Ring
    S: Ring
    ambient: Ring
    kernel: Ideal
    ring: Ring
    index: list[tuple[int, int]]
    tensor_ring: Ring

    def z(self, i: int, j: int) -> Polynomial:
        k = self.index.index((i, j))
        return self.ring.gens()[k]

    def bidegree(self, k: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
        i, j = self.index[k]
        a = tuple(int(v == i) for v in range(self.R.ngens))
        b = tuple(int(v == j) for v in range(self.S.ngens))
        return a, b

    def tensor_to_z(self, xexp: Sequence[int], yexp: Sequence[int]) -> Polynomial:
        """x^a (x) y^b with |a| = |b| written as a product of z variables."""
        if sum(xexp) != sum(yexp):
            raise ValueError("pure tensor is not degree balanced")
        xs = [v for v, e in enumerate(xexp) for _ in range(e)]
        ys = [v for v, e in enumerate(yexp) for _ in range(e)]
        e = [0] * len(self.index)
        for i, j in zip(xs, ys):
            e[self.index.index((i, j))] += 1
        return self.ring.monomial(tuple(e))

    def pure_tensor(self, f: Polynomial, g: Polynomial) -> Polynomial:
        """f (x) g for homogeneous f in R, g in S of equal degree."""
        out = self.ring.zero()
        F = self.ring.field
        for a, c in f.items():
            for b, d in g.items():
                out = out + self.tensor_to_z(a, b).scale(F.mul(c, d))
        return out

    def evaluate(self, p: Polynomial) -> Polynomial:
        """Image of a z-polynomial under z_ij -> x_i*y_j, in R (x) S."""
        n, m = self.R.ngens, self.S.ngens
        out = {}
        F = self.ring.field
        for e, c in p.items():
            t = [0] * (n + m)
            for k, power in enumerate(e):
                i, j = self.index[k]
                t[i] += power
                t[n + j] += power
            t = tuple(t)
            out[t] = F.add(out.get(t, F.zero), c)
        return Polynomial(self.tensor_ring, out)

    def hilbert_series(self) -> HilbertSeries:
        return self.kernel.hilbert_series()

    def maximal_ideal(self) -> Ideal:
        return Ideal(self.ring, self.ring.gens())

    def __str__(self):
        rels = ", ".join(str(g) for g in self.kernel.generators) or "0"
        return f"{self.ambient.field}[{','.join(self.ambient.variables)}]/({rels})"


def _z_name(i: int, j: int, n: int, m: int) -> str:
    if n <= 10 and m <= 10:
        return f"z{i}{j}"
    return f"z{i}_{j}"


def segre_presentation(R: Ring, S: Ring, check_window: int = 30) -> SegrePresentation:
    """Present R#S by eliminating z_ij - x_i*y_j over R (x) S.

    The Hilbert series of the result is compared with the Hadamard product
    of the factors' series on ``check_window`` degrees.
    """
    if R.field != S.field:
        raise ValueError("factors must share a coefficient field")
    n, m = R.ngens, S.ngens
    xnames = tuple(f"x{i}" for i in range(n))
    ynames = tuple(f"y{j}" for j in range(m))
    rels = [
        {e + (0,) * m: c for e, c in r.items()} for r in R.relations
    ] + [{(0,) * n + e: c for e, c in r.items()} for r in S.relations]
    tensor = Ring(xnames + ynames, R.field, relations=rels)
    index = [(i, j) for i in range(n) for j in range(m)]
    names = tuple(_z_name(i, j, n, m) for i, j in index)
    ambient = Ring(names, R.field)
    images = []
    for i, j in index:
        e = [0] * (n + m)
        e[i] = 1
        e[n + j] = 1
        images.append(tensor.monomial(tuple(e)))
    kernel = ring_map_kernel(ambient, images)
    ring = Ring(names, R.field, relations=kernel.generators)
    pres = SegrePresentation(R, S, ambient, kernel, ring, index, tensor)
    expected = hadamard_product(ring_hilbert_series(R), ring_hilbert_series(S))
    got = pres.hilbert_series()
    if expected.expand(0, check_window) != got.expand(0, check_window):
        raise SegreVerificationError(f"Hilbert series {got!r} differs from Hadamard product {expected!r}")
    for g in kernel.generators:
        if not pres.evaluate(g).is_zero():
            raise SegreVerificationError(f"kernel generator {g} does not vanish")
    return pres


# -- ideal generators ---------------------------------------------------------------------------


@dataclass
class SegreIdealGens:
    """Pure-tensor generators of I#J in z-variables.

    ``full`` is the degree-balanced generating set; ``reduced`` the smaller
    power-balanced set with the same radical. Exponent pairs are kept for the
    monomial Cech route when both ideals are monomial.
    """

    full: list[Polynomial]
    reduced: list[Polynomial]
    full_pairs: list[tuple[tuple[int, ...], tuple[int, ...]]] | None = None
    reduced_pairs: list[tuple[tuple[int, ...], tuple[int, ...]]] | None = None
    provenance: dict = field(default_factory=dict)

    def ideal(self, presentation: SegrePresentation, which: str = "full") -> Ideal:
        return Ideal(presentation.ring, self.full if which == "full" else self.reduced)


def _monomials_of_degree(nvars: int, d: int) -> list[tuple[int, ...]]:
    out = []
    for combo in combinations_with_replacement(range(nvars), d):
        e = [0] * nvars
        for v in combo:
            e[v] += 1
        out.append(tuple(e))
    return out


def _homogeneous_generators(I: Ideal) -> list[Polynomial]:
    gens = [g for g in I.minimalized().generators if not g.is_zero()]
    for g in gens:
        if not g.is_homogeneous():
            raise ValueError(f"generator {g} is not homogeneous")
    return gens


def segre_ideal_generators(I: Ideal, J: Ideal, presentation: SegrePresentation) -> SegreIdealGens:
    R, S = presentation.R, presentation.S
    if I.ring != R or J.ring != S:
        raise ValueError("ideals must live in the presentation's factor rings")
    Ig = _homogeneous_generators(I)
    Jg = _homogeneous_generators(J)
    monomial = all(g.is_monomial() for g in Ig + Jg)
    full, reduced = [], []
    full_pairs, reduced_pairs = [], []
    for f in Ig:
        a = f.degree()
        for g in Jg:
            b = g.degree()
            D = max(a, b)
            for xm in _monomials_of_degree(R.ngens, D - a):
                for ym in _monomials_of_degree(S.ngens, D - b):
                    ff = f * R.monomial(xm)
                    gg = g * S.monomial(ym)
                    if ff.is_zero() or gg.is_zero():
                        continue
                    full.append(presentation.pure_tensor(ff, gg))
                    if monomial:
                        full_pairs.append((ff.lead_monomial(), gg.lead_monomial()))
            k = gcd(a, b) if a and b else 1
            ff = f ** (b // k) if a else f
            gg = g ** (a // k) if b else g
            if ff.is_zero() or gg.is_zero():
                continue
            if ff.degree() != gg.degree():
                continue
            reduced.append(presentation.pure_tensor(ff, gg))
            if monomial:
                reduced_pairs.append((ff.lead_monomial(), gg.lead_monomial()))
    full = _dedupe(full)
    reduced = _dedupe(reduced)
    return SegreIdealGens(
        full,
        reduced,
        sorted(set(full_pairs)) if monomial else None,
        sorted(set(reduced_pairs)) if monomial else None,
        {"full": "balanced products", "reduced": "power-balanced pure tensors"},
    )


def _dedupe(polys: list[Polynomial]) -> list[Polynomial]:
    out = []
    for p in polys:
        if not p.is_zero() and p not in out:
            out.append(p)
    return out


# -- module tables ------------------------------------------------------------------------------


def segre_module_table(
    M: Mapping[tuple[int, ...], int], N: Mapping[tuple[int, ...], int]
) -> dict[tuple[tuple[int, ...], tuple[int, ...]], int]:
    """dim (M#N)_(a,b) = dim M_a * dim N_b on the diagonal |a| = |b|."""
    by_total: dict[int, list] = {}
    for b, d in N.items():
        by_total.setdefault(sum(b), []).append((b, d))
    out = {}
    for a, d in M.items():
        for b, e in by_total.get(sum(a), []):
            out[(tuple(a), tuple(b))] = d * e
    return out
