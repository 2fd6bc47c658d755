"""Exact one-variable series arithmetic for the blow-up simulator.

Branch strict transforms are tracked through blow-ups as pairs of local
coordinate functions evaluated on the branch parametrization.  Divisions of
the form v/u produce genuine power series with infinitely many terms, so a
truncated representation would force precision management; instead every
coordinate function is stored as an exact quotient of polynomials in t with
a denominator that is a unit at t = 0.  All order computations, coefficient
extractions and zero tests are then exact, and no precision is ever lost.

Polynomials are ``{exponent: coefficient}`` dicts over Fraction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError

Poly = dict


def pclean(p: Poly) -> Poly:
    return {e: c for e, c in p.items() if c}


def padd(a: Poly, b: Poly) -> Poly:
    out = dict(a)
    for e, c in b.items():
        out[e] = out.get(e, Fraction(0)) + c
    return pclean(out)


def pscale(a: Poly, k: Fraction) -> Poly:
    return pclean({e: c * k for e, c in a.items()})


def pmul(a: Poly, b: Poly) -> Poly:
    out: Poly = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = ea + eb
            out[e] = out.get(e, Fraction(0)) + ca * cb
    return pclean(out)


def pmul_trunc(a: Poly, b: Poly, k: int) -> Poly:
    out: Poly = {}
    for ea, ca in a.items():
        if ea >= k:
            continue
        for eb, cb in b.items():
            e = ea + eb
            if e < k:
                out[e] = out.get(e, Fraction(0)) + ca * cb
    return pclean(out)


def ppow_trunc(a: Poly, d: int, k: int) -> Poly:
    """a**d mod t^k by binary exponentiation."""
    out = {0: Fraction(1)}
    base = ptrunc(a, k)
    while d:
        if d & 1:
            out = pmul_trunc(out, base, k)
        base = pmul_trunc(base, base, k)
        d >>= 1
    return out


def pord(a: Poly):
    return min(a) if a else None


def ptrunc(a: Poly, k: int) -> Poly:
    return {e: c for e, c in a.items() if e < k}


def series_inverse(p: Poly, k: int) -> Poly:
    """1/p mod t^k for p with a nonzero constant term."""
    c0 = p.get(0, Fraction(0))
    if not c0:
        raise DomainError("series_inverse needs a unit")
    inv = {0: 1 / c0}
    for j in range(1, k):
        acc = Fraction(0)
        for e, c in p.items():
            if 0 < e <= j:
                acc += c * inv.get(j - e, Fraction(0))
        if acc:
            inv[j] = -acc / c0
    return pclean(inv)


def series_fractional_power(p: Poly, alpha: Fraction, k: int) -> Poly:
    """(1 + w)^alpha mod t^k for p = 1 + w with ord w >= 1 (binomial series)."""
    if p.get(0) != 1:
        raise DomainError("fractional power needs constant term 1")
    w = ptrunc({e: c for e, c in p.items() if e != 0}, k)
    out = {0: Fraction(1)}
    term = {0: Fraction(1)}
    binom = Fraction(1)
    j = 0
    while True:
        j += 1
        binom *= (alpha - (j - 1)) / j
        term = pmul_trunc(term, w, k)
        if not term:
            break
        out = padd(out, pscale(term, binom))
    return pclean(out)


@dataclass(frozen=True)
class RatSeries:
    """Quotient num/den of polynomials in t, den a unit at 0."""

    num: Poly
    den: Poly

    @classmethod
    def make(cls, num: Poly, den: Poly | None = None) -> "RatSeries":
        den = {0: Fraction(1)} if den is None else pclean(den)
        num = pclean(num)
        if den.get(0, Fraction(0)) == 0:
            raise DomainError("RatSeries denominator must be a unit at 0")
        return cls(num, den)

    @classmethod
    def monomial(cls, e: int, c=1) -> "RatSeries":
        return cls.make({e: Fraction(c)})

    @classmethod
    def from_poly(cls, p: Poly) -> "RatSeries":
        return cls.make(p)

    def is_zero(self) -> bool:
        return not self.num

    def ord(self):
        return pord(self.num)

    def coeff(self, k: int) -> Fraction:
        """Coefficient of t^k in the series expansion."""
        inv = series_inverse(self.den, k + 1)
        acc = Fraction(0)
        for e, c in self.num.items():
            if e <= k:
                acc += c * inv.get(k - e, Fraction(0))
        return acc

    def leading(self) -> Fraction:
        o = self.ord()
        if o is None:
            raise DomainError("zero series has no leading coefficient")
        return self.num[o] / self.den[0]

    def sub_const(self, c: Fraction) -> "RatSeries":
        return RatSeries.make(padd(self.num, pscale(self.den, -c)), self.den)

    def div(self, other: "RatSeries") -> "RatSeries":
        """self / other, factoring other's t-order into the numerator side."""
        o = other.ord()
        if o is None:
            raise DomainError("division by the zero series")
        shifted = {e - o: c for e, c in other.num.items()}
        num = pmul(self.num, other.den)
        den = pmul(self.den, shifted)
        so = self.ord()
        if so is not None and so < o:
            raise DomainError("division would produce a pole")
        num = {e - o: c for e, c in num.items()}
        return RatSeries.make(num, den)
