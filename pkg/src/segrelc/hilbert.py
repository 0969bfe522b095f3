"""Hilbert series in rational form and the Hadamard (Segre) product of series.

A series is ``numerator(t) / (1 - t)^d`` with ``numerator`` an integer Laurent
polynomial. The Hadamard product multiplies coefficients pointwise, which is
the dimension count of a Segre product of graded modules.
"""

from __future__ import annotations

from math import comb
from typing import Iterable, Mapping

__all__ = [
    "HadamardFitError",
    "HilbertSeries",
    "hadamard_product",
    "hf_value",
    "monomial_quotient_series",
]


class HadamardFitError(RuntimeError):
    """The fitted Hadamard numerator failed its re-expansion check."""


class HilbertSeries:
    """Rational Hilbert series ``sum_k c_k t^k / (1 - t)^d``.

    The stored form is canonical: factors ``(1 - t)`` are cancelled while the
    numerator vanishes at ``t = 1``, and the zero series has ``d = 0``.
    """

    __slots__ = ("numerator", "d")

    def __init__(self, numerator: Mapping[int, int], d: int):
        if d < 0:
            raise ValueError("denominator exponent must be nonnegative")
        num = {int(k): int(v) for k, v in numerator.items() if v}
        if not num:
            d = 0
        while d > 0 and sum(num.values()) == 0:
            num = _divide_one_minus_t(num)
            d -= 1
        self.numerator = num
        self.d = d

    @classmethod
    def from_values(cls, values: Mapping[int, int]) -> "HilbertSeries":
        """A finite-length module: coefficients given explicitly."""
        return cls(dict(values), 0)

    def is_zero(self) -> bool:
        return not self.numerator

    @property
    def low_degree(self) -> int | None:
        return min(self.numerator) if self.numerator else None

    @property
    def numerator_top(self) -> int | None:
        return max(self.numerator) if self.numerator else None

    def __call__(self, n: int) -> int:
        return hf_value(self, n)

    def expand(self, lo: int, hi: int) -> list[int]:
        return [hf_value(self, n) for n in range(lo, hi + 1)]

    def shift(self, k: int) -> "HilbertSeries":
        """Series of M(-k): multiply by t^k."""
        return HilbertSeries({e + k: c for e, c in self.numerator.items()}, self.d)

    def __add__(self, other: "HilbertSeries") -> "HilbertSeries":
        d = max(self.d, other.d)
        num: dict[int, int] = {}
        for s in (self, other):
            lifted = s.numerator
            for _ in range(d - s.d):
                lifted = _mul_one_minus_t(lifted)
            for k, v in lifted.items():
                num[k] = num.get(k, 0) + v
        return HilbertSeries(num, d)

    def __neg__(self):
        return HilbertSeries({k: -v for k, v in self.numerator.items()}, self.d)

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        return (
            isinstance(other, HilbertSeries)
            and self.d == other.d
            and self.numerator == other.numerator
        )

    def __hash__(self):
        return hash((frozenset(self.numerator.items()), self.d))

    def __repr__(self):
        return f"HilbertSeries({self.format()})"

    def format(self) -> str:
        if not self.numerator:
            return "0"
        parts = []
        for k in sorted(self.numerator):
            c = self.numerator[k]
            mono = "1" if k == 0 else ("t" if k == 1 else f"t^{k}")
            if mono == "1":
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{c}*{mono}")
        num = " + ".join(parts).replace("+ -", "- ")
        if self.d == 0:
            return num
        return f"({num})/(1-t)^{self.d}"


def _mul_one_minus_t(num: Mapping[int, int]) -> dict[int, int]:
    out: dict[int, int] = {}
    for k, v in num.items():
        out[k] = out.get(k, 0) + v
        out[k + 1] = out.get(k + 1, 0) - v
    return {k: v for k, v in out.items() if v}


def _divide_one_minus_t(num: Mapping[int, int]) -> dict[int, int]:
    # synthetic division by (1 - t); caller guarantees exactness
    lo, hi = min(num), max(num)
    out: dict[int, int] = {}
    acc = 0
    for k in range(lo, hi):
        acc += num.get(k, 0)
        if acc:
            out[k] = acc
    return out


def hf_value(series: HilbertSeries, n: int) -> int:
    """Coefficient of t^n in the expansion of ``series``."""
    d = series.d
    if d == 0:
        return series.numerator.get(n, 0)
    total = 0
    for k, c in series.numerator.items():
        m = n - k
        if m >= 0:
            total += c * comb(m + d - 1, d - 1)
    return total


def _fit(values, lo: int, D: int, top: int) -> dict[int, int]:
    # numerator = (1 - t)^D * sum_n values(n) t^n, truncated at degree ``top``
    num = {}
    for k in range(lo, top + 1):
        s = 0
        for j in range(D + 1):
            n = k - j
            if n < lo:
                break
            s += (-1) ** j * comb(D, j) * values(n)
        if s:
            num[k] = s
    return num


def hadamard_product(a: HilbertSeries, b: HilbertSeries, window: int = 50) -> HilbertSeries:
    """Series whose coefficients are the products of those of ``a`` and ``b``.

    The numerator over ``(1 - t)^(da + db - 1)`` is solved from exact values
    and the result re-expanded and compared on a ``window``-degree range past
    the fitted part; one widened retry is made before giving up.
    """
    if a.is_zero() or b.is_zero():
        return HilbertSeries({}, 0)
    D = a.d + b.d - 1 if a.d and b.d else 0

    def values(n: int) -> int:
        return hf_value(a, n) * hf_value(b, n)

    lo = max(a.low_degree, b.low_degree)
    base_top = max(a.numerator_top, b.numerator_top) + D
    for attempt, top in enumerate((base_top, base_top + window)):
        num = _fit(values, lo, D, top)
        candidate = HilbertSeries(num, D)
        check_hi = top + window
        if all(hf_value(candidate, n) == values(n) for n in range(lo - 2, check_hi + 1)):
            return candidate
    raise HadamardFitError(f"Hadamard fit failed for {a!r} and {b!r}")


def monomial_quotient_series(generators: Iterable[tuple[int, ...]], nvars: int) -> HilbertSeries:
    """Hilbert series of k[x_1..x_n]/(monomials)."""
    gens = _minimalize(list({tuple(g) for g in generators}))
    return HilbertSeries(_numerator(tuple(sorted(gens))), nvars)


def _minimalize(gens: list[tuple[int, ...]]) -> list[tuple[int, ...]]:
    gens = sorted(set(gens), key=sum)
    out: list[tuple[int, ...]] = []
    for g in gens:
        if not any(all(a <= b for a, b in zip(h, g)) for h in out):
            out.append(g)
    return out


_NUM_CACHE: dict[tuple, dict[int, int]] = {}


def _numerator(gens: tuple[tuple[int, ...], ...]) -> dict[int, int]:
    # N(I + (m)) = N(I) - t^deg(m) N(I : m)
    if not gens:
        return {0: 1}
    if gens in _NUM_CACHE:
        return _NUM_CACHE[gens]
    if any(sum(g) == 0 for g in gens):
        return {}
    if all(
        not any(a and b for a, b in zip(g, h)) for i, g in enumerate(gens) for h in gens[i + 1 :]
    ):
        # pairwise coprime: product of (1 - t^deg g)
        num = {0: 1}
        for g in gens:
            dg = sum(g)
            nxt: dict[int, int] = {}
            for k, v in num.items():
                nxt[k] = nxt.get(k, 0) + v
                nxt[k + dg] = nxt.get(k + dg, 0) - v
            num = {k: v for k, v in nxt.items() if v}
        _NUM_CACHE[gens] = num
        return num
    *rest, m = gens
    rest = tuple(rest)
    colon = tuple(sorted(_minimalize([tuple(max(a - b, 0) for a, b in zip(g, m)) for g in rest])))
    n1 = _numerator(rest)
    n2 = _numerator(colon)
    dm = sum(m)
    out = dict(n1)
    for k, v in n2.items():
        out[k + dm] = out.get(k + dm, 0) - v
    out = {k: v for k, v in out.items() if v}
    _NUM_CACHE[gens] = out
    return out
