"""Exact coefficient fields, monomial orders, polynomial rings and polynomials.

Every ring here is standard graded: each variable has degree 1. Quotient
rings carry a list of homogeneous relations over the ambient polynomial ring;
arithmetic in a quotient returns normal forms modulo the Groebner basis of
those relations.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from math import factorial
from typing import Iterable, Mapping

__all__ = [
    "ANY_DEGREE",
    "Field",
    "GF",
    "Polynomial",
    "QQ",
    "Ring",
    "RingMismatchError",
    "generalized_binomial",
    "is_homogeneous",
    "monomial_order",
]


class RingMismatchError(ValueError):
    """Raised when polynomials from different rings are combined."""


class _AnyDegree:
    """Degree of the zero polynomial: homogeneous of every degree."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "ANY_DEGREE"

    def __reduce__(self):
        return (_AnyDegree, ())


ANY_DEGREE = _AnyDegree()


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


class Field:
    """QQ (characteristic 0, Fraction values) or GF(p) (int residues in [0, p))."""

    __slots__ = ("characteristic",)

    def __init__(self, characteristic: int = 0):
        if characteristic:
            if characteristic >= 2**31 or not _is_prime(characteristic):
                raise ValueError(f"GF(p) needs a prime p < 2^31, got {characteristic}")
        self.characteristic = characteristic

    def __call__(self, value) -> Fraction | int:
        p = self.characteristic
        if p == 0:
            return Fraction(value)
        if isinstance(value, Fraction):
            if value.denominator % p == 0:
                raise ZeroDivisionError(f"{value} has no image in GF({p})")
            return value.numerator * pow(value.denominator, -1, p) % p
        return int(value) % p

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def add(self, a, b):
        r = a + b
        return r % self.characteristic if self.characteristic else r

    def sub(self, a, b):
        r = a - b
        return r % self.characteristic if self.characteristic else r

    def mul(self, a, b):
        r = a * b
        return r % self.characteristic if self.characteristic else r

    def neg(self, a):
        return (-a) % self.characteristic if self.characteristic else -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.characteristic:
            return pow(a, -1, self.characteristic)
        return 1 / a

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def __eq__(self, other):
        return isinstance(other, Field) and other.characteristic == self.characteristic

    def __hash__(self):
        return hash(("Field", self.characteristic))

    def __repr__(self):
        return "QQ" if self.characteristic == 0 else f"GF({self.characteristic})"


QQ = Field(0)


def GF(p: int) -> Field:
    return Field(p)


# -- monomial orders ----------------------------------------------------------


def monomial_order(name, weights: tuple[int, ...] | None = None):
    """Sort key for exponent tuples; larger key means larger monomial.

    ``name`` is ``"grevlex"``, ``"grlex"``, ``"lex"`` or ``("elim", k)``; the
    last is a block order eliminating the first ``k`` variables, grevlex (with
    weights) inside each block.
    """
    if name == "lex":
        return lambda e: e
    if name == "grlex":
        if weights is None:
            return lambda e: (sum(e), e)
        return lambda e: (sum(w * x for w, x in zip(weights, e)), e)
    if name == "grevlex":
        if weights is None:
            return lambda e: (sum(e), tuple(-x for x in reversed(e)))
        return lambda e: (
            sum(w * x for w, x in zip(weights, e)),
            tuple(-x for x in reversed(e)),
        )
    if isinstance(name, tuple) and name[0] == "elim":
        k = name[1]
        w = weights

        def key(e):
            a, b = e[:k], e[k:]
            if w is None:
                da, db = sum(a), sum(b)
            else:
                da = sum(x * y for x, y in zip(w[:k], a))
                db = sum(x * y for x, y in zip(w[k:], b))
            return (da, tuple(-x for x in reversed(a)), db, tuple(-x for x in reversed(b)))

        return key
    raise ValueError(f"unknown monomial order {name!r}")


# -- rings ---------------------------------------------------------------------


class Ring:
    """Polynomial ring k[x_1..x_n], optionally modulo homogeneous relations.

    ``weights`` exists for internal elimination rings only; user-facing rings
    are standard graded.
    """

    def __init__(
        self,
        variables: Iterable[str],
        field: Field = QQ,
        order="grevlex",
        relations: Iterable = (),
        weights: tuple[int, ...] | None = None,
    ):
        self.variables = tuple(variables)
        if len(set(self.variables)) != len(self.variables):
            raise ValueError(f"duplicate variable names in {self.variables}")
        self.field = field
        self.order = order
        self.weights = tuple(weights) if weights is not None else None
        if self.weights is not None and all(w == 1 for w in self.weights):
            self.weights = None
        self.key = monomial_order(order, self.weights)
        rels = []
        for r in relations:
            if isinstance(r, Polynomial):
                terms = r._terms
            else:
                terms = dict(r)
            terms = {tuple(e): field(c) for e, c in terms.items() if field(c) != 0}
            if terms:
                rels.append(terms)
        self._relation_terms = tuple(rels)
        self._ambient = None
        self._lock = threading.Lock()
        self._relation_gb = None
        self._hash = hash(
            (
                self.variables,
                field,
                str(order),
                self.weights,
                frozenset(frozenset(t.items()) for t in self._relation_terms),
            )
        )
        for t in self._relation_terms:
            degs = {self._wdeg(e) for e in t}
            if len(degs) != 1:
                raise ValueError("quotient relations must be homogeneous")

    # basic structure
    @property
    def ngens(self) -> int:
        return len(self.variables)

    @property
    def is_quotient(self) -> bool:
        return bool(self._relation_terms)

    @property
    def ambient(self) -> "Ring":
        if not self.is_quotient:
            return self
        if self._ambient is None:
            self._ambient = Ring(self.variables, self.field, self.order, weights=self.weights)
        return self._ambient

    @property
    def relations(self) -> tuple["Polynomial", ...]:
        amb = self.ambient
        return tuple(Polynomial(amb, t, _normalized=True) for t in self._relation_terms)

    def _wdeg(self, e) -> int:
        if self.weights is None:
            return sum(e)
        return sum(w * x for w, x in zip(self.weights, e))

    def quotient(self, relations: Iterable["Polynomial"]) -> "Ring":
        rels = list(self.relations)
        for r in relations:
            if r.ring.ambient != self.ambient:
                raise RingMismatchError("relation lives in a different ring")
            rels.append(r)
        return Ring(self.variables, self.field, self.order, rels, self.weights)

    def relation_basis(self):
        """Reduced Groebner basis (ambient polynomials) of the relations, cached."""
        if self._relation_gb is None:
            with self._lock:
                if self._relation_gb is None:
                    from .groebner import groebner_basis_of

                    self._relation_gb = tuple(groebner_basis_of(self.relations))
        return self._relation_gb

    # element constructors
    def zero(self) -> "Polynomial":
        return Polynomial(self, {}, _normalized=True)

    def one(self) -> "Polynomial":
        return self.monomial((0,) * self.ngens)

    def monomial(self, exponents, coeff=1, laurent=False) -> "Polynomial":
        return Polynomial(self, {tuple(exponents): coeff}, laurent=laurent)

    def gens(self) -> tuple["Polynomial", ...]:
        n = self.ngens
        return tuple(self.monomial(tuple(int(i == j) for j in range(n))) for i in range(n))

    def var(self, name: str) -> "Polynomial":
        return self.gens()[self.variables.index(name)]

    def __call__(self, value) -> "Polynomial":
        if isinstance(value, Polynomial):
            if value.ring.ambient != self.ambient:
                raise RingMismatchError(f"cannot coerce from {value.ring} into {self}")
            return Polynomial(self, value._terms, laurent=value.laurent)
        if isinstance(value, str):
            from .dsl import parse_polynomial

            return parse_polynomial(value, self)
        return Polynomial(self, {(0,) * self.ngens: value})

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Ring) or self._hash != other._hash:
            return False
        return (
            self.variables == other.variables
            and self.field == other.field
            and str(self.order) == str(other.order)
            and self.weights == other.weights
            and set(frozenset(t.items()) for t in self._relation_terms)
            == set(frozenset(t.items()) for t in other._relation_terms)
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        base = f"{self.field!r}[{','.join(self.variables)}]"
        if self.is_quotient:
            base += "/(" + ", ".join(str(r) for r in self.relations) + ")"
        return base


# -- polynomials -----------------------------------------------------------------


class Polynomial:
    """Sparse polynomial: a mapping exponent-tuple -> nonzero coefficient.

    Instances are immutable. With ``laurent=True`` negative exponents are
    allowed and quotient normalisation is skipped.
    """

    __slots__ = ("ring", "_terms", "laurent")

    def __init__(self, ring: Ring, terms: Mapping, laurent: bool = False, _normalized=False):
        self.ring = ring
        self.laurent = laurent
        if _normalized:
            self._terms = terms
            return
        F = ring.field
        n = ring.ngens
        clean = {}
        for e, c in terms.items():
            e = tuple(e)
            if len(e) != n:
                raise ValueError(f"exponent {e} has wrong length for {ring}")
            if not laurent and any(x < 0 for x in e):
                raise ValueError(f"negative exponent {e} in a non-Laurent polynomial")
            c = F(c)
            if c != 0:
                clean[e] = F.add(clean[e], c) if e in clean else c
                if clean[e] == 0:
                    del clean[e]
        if ring.is_quotient and not laurent and clean:
            from .groebner import reduce_terms

            amb = ring.ambient
            clean = reduce_terms(clean, ring.relation_basis(), amb)
        self._terms = clean

    # inspection
    def terms(self) -> list[tuple[tuple[int, ...], object]]:
        """(exponent, coefficient) pairs, largest monomial first."""
        key = self.ring.key
        return sorted(self._terms.items(), key=lambda t: key(t[0]), reverse=True)

    def items(self):
        return self._terms.items()

    def monomials(self) -> list[tuple[int, ...]]:
        return [e for e, _ in self.terms()]

    def coefficient(self, exponents) -> object:
        return self._terms.get(tuple(exponents), self.ring.field.zero)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def lead_monomial(self):
        if not self._terms:
            raise ValueError("zero polynomial has no leading monomial")
        return max(self._terms, key=self.ring.key)

    def lead_coefficient(self):
        return self._terms[self.lead_monomial()]

    def degree(self):
        """Total degree of the leading form; ANY_DEGREE for zero."""
        if not self._terms:
            return ANY_DEGREE
        return max(self.ring._wdeg(e) for e in self._terms)

    def is_homogeneous(self):
        return is_homogeneous(self)

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    # arithmetic
    def _check(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise RingMismatchError(f"{self.ring} vs {other.ring}")
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial(self.ring, {(0,) * self.ring.ngens: other})
        return NotImplemented

    def _make(self, terms, laurent) -> "Polynomial":
        if self.ring.is_quotient and not laurent:
            return Polynomial(self.ring, terms)
        return Polynomial(self.ring, terms, laurent=laurent, _normalized=True)

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        F = self.ring.field
        out = dict(self._terms)
        for e, c in other._terms.items():
            if e in out:
                s = F.add(out[e], c)
                if s == 0:
                    del out[e]
                else:
                    out[e] = s
            else:
                out[e] = c
        return Polynomial(self.ring, out, self.laurent or other.laurent, _normalized=True)

    __radd__ = __add__

    def __neg__(self):
        F = self.ring.field
        return Polynomial(
            self.ring, {e: F.neg(c) for e, c in self._terms.items()}, self.laurent, _normalized=True
        )

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        F = self.ring.field
        out: dict = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                c = F.mul(c1, c2)
                if e in out:
                    s = F.add(out[e], c)
                    if s == 0:
                        del out[e]
                    else:
                        out[e] = s
                else:
                    out[e] = c
        return self._make(out, self.laurent or other.laurent)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only nonnegative integer powers")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, c) -> "Polynomial":
        F = self.ring.field
        c = F(c)
        if c == 0:
            return self.ring.zero()
        return Polynomial(
            self.ring, {e: F.mul(v, c) for e, v in self._terms.items()}, self.laurent, _normalized=True
        )

    def shift(self, exponents) -> "Polynomial":
        """Multiply by the (Laurent) monomial x^exponents."""
        laurent = self.laurent or any(x < 0 for x in exponents)
        out = {tuple(a + b for a, b in zip(e, exponents)): c for e, c in self._terms.items()}
        return self._make(out, laurent)

    def substitute(self, images: list["Polynomial"]) -> "Polynomial":
        """Ring map x_i -> images[i]."""
        if len(images) != self.ring.ngens:
            raise ValueError("need one image per variable")
        target = images[0].ring if images else self.ring
        result = target.zero()
        for e, c in self._terms.items():
            term = target(c)
            for img, k in zip(images, e):
                if k:
                    term = term * img**k
            result = result + term
        return result

    def derivative(self, i: int) -> "Polynomial":
        F = self.ring.field
        out = {}
        for e, c in self._terms.items():
            if e[i] == 0:
                continue
            v = F.mul(c, F(e[i]))
            if v != 0:
                ne = list(e)
                ne[i] -= 1
                out[tuple(ne)] = v
        return Polynomial(self.ring, out, self.laurent, _normalized=True)

    # comparison / display
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial(self.ring, {(0,) * self.ring.ngens: other})
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self._terms == other._terms

    def __hash__(self):
        return hash((self.ring, frozenset(self._terms.items())))

    def __str__(self):
        if not self._terms:
            return "0"
        names = self.ring.variables
        pieces = []
        for e, c in self.terms():
            mono = "*".join(
                n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k != 0
            )
            if isinstance(c, Fraction):
                neg = c < 0
                a = -c if neg else c
            else:
                neg, a = False, c
            if mono == "":
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            pieces.append(("-" if neg else "+", body))
        s = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
        for sign, body in pieces[1:]:
            s += f" {sign} {body}"
        return s

    def __repr__(self):
        return f"Polynomial({self}, ring={self.ring!r})"


def is_homogeneous(f: Polynomial):
    """Return ``(True, degree)`` or ``(False, None)``; zero gives ``(True, ANY_DEGREE)``."""
    if f.is_zero():
        return True, ANY_DEGREE
    degs = {f.ring._wdeg(e) for e in f._terms}
    if len(degs) == 1:
        return True, degs.pop()
    return False, None


# -- binomial coefficients ------------------------------------------------------------


def _falling(a: int, t: int) -> int:
    r = 1
    for k in range(t):
        r *= a - k
    return r


def _lucas(a: int, t: int, p: int) -> int:
    r = 1
    while a or t:
        ai, ti = a % p, t % p
        if ti > ai:
            return 0
        r = r * (_falling(ai, ti) // factorial(ti)) % p
        a //= p
        t //= p
    return r


def generalized_binomial(a: int, t: int, characteristic: int = 0) -> int:
    """a(a-1)...(a-t+1)/t! for any integer a, reduced mod p when characteristic p."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    if characteristic == 0:
        return _falling(a, t) // factorial(t)
    p = characteristic
    if a >= 0:
        return _lucas(a, t, p)
    return (_falling(a, t) // factorial(t)) % p
