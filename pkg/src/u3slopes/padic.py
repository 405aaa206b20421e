"""Finite-precision arithmetic in the cyclotomic 3-adic rings Z_3[zeta_{3^m}].

Elements are stored in the power basis 1, z, ..., z^(e-1) with e = 2*3^(m-1),
reduced modulo Phi_{3^m}(x) = x^(2h) + x^h + 1 (h = 3^(m-1)) and modulo 3^N.
Each element also carries ``prec``: the absolute 3-adic precision (in powers
of 3) that is still guaranteed. Precision only ever decreases, and only when
dividing by the uniformizer.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, total_ordering
from typing import Iterable, Sequence, Union


class PrecisionError(ArithmeticError):
    """Raised when working precision is exhausted."""


class NotDivisibleError(ArithmeticError):
    """Raised on a division that is not exact in the ring."""


class NotAUnitError(ArithmeticError):
    """Raised when inverting a non-unit."""


def v3_int(n: int) -> int:
    """3-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("v3 of zero is infinite")
    n = abs(n)
    v = 0
    while n % 3 == 0:
        n //= 3
        v += 1
    return v


@total_ordering
class Valuation:
    """A rational 3-adic valuation, or a lower bound for elements that are
    zero at working precision (``exact=False``)."""

    __slots__ = ("value", "exact")

    def __init__(self, value, exact: bool = True):
        self.value = Fraction(value)
        self.exact = exact

    @classmethod
    def at_least(cls, bound) -> "Valuation":
        return cls(bound, exact=False)

    @property
    def numerator(self) -> int:
        return self.value.numerator

    @property
    def denominator(self) -> int:
        return self.value.denominator

    def __add__(self, other):
        if isinstance(other, Valuation):
            return Valuation(self.value + other.value, self.exact and other.exact)
        return Valuation(self.value + Fraction(other), self.exact)

    __radd__ = __add__

    def __eq__(self, other):
        if isinstance(other, Valuation):
            return self.value == other.value and self.exact == other.exact
        if isinstance(other, (int, Fraction)):
            return self.exact and self.value == other
        return NotImplemented

    def __lt__(self, other):
        if isinstance(other, Valuation):
            return self.value < other.value
        return self.value < Fraction(other)

    def __hash__(self):
        return hash((self.value, self.exact))

    def __repr__(self):
        return f"Valuation({self.value})" if self.exact else f"Valuation(>= {self.value})"


@dataclass(frozen=True)
class CycRing:
    """The ring Z_3[zeta_{3^m}] modulo 3^N."""

    m: int
    N: int

    def __post_init__(self):
        if self.m < 1:
            raise ValueError(f"m must be >= 1, got {self.m}")
        if self.N < 2:
            raise ValueError(f"N must be >= 2, got {self.N}")

    @property
    def h(self) -> int:
        return 3 ** (self.m - 1)

    @property
    def degree(self) -> int:
        """Ramification index over Z_3, also the rank of the power basis."""
        return 2 * self.h

    e = degree

    @property
    def modulus(self) -> int:
        return 3**self.N

    def cyclotomic_polynomial(self) -> list[int]:
        """Coefficients of Phi_{3^m}, lowest degree first."""
        coeffs = [0] * (self.degree + 1)
        coeffs[0] = coeffs[self.h] = coeffs[2 * self.h] = 1
        return coeffs

    def element(self, coeffs: Iterable[int], prec: int | None = None) -> "CycElt":
        coeffs = list(coeffs)
        if len(coeffs) > self.degree:
            coeffs = _reduce_poly(coeffs, self.h)
        coeffs += [0] * (self.degree - len(coeffs))
        mod = self.modulus
        return CycElt(self, tuple(c % mod for c in coeffs), self.N if prec is None else min(prec, self.N))

    def __call__(self, x) -> "CycElt":
        if isinstance(x, CycElt):
            if x.ring.m != self.m:
                raise ValueError("cannot coerce between cyclotomic rings of different level")
            return self.element(x.coeffs, min(x.prec, self.N))
        if isinstance(x, Fraction):
            if x.denominator % 3 == 0:
                raise NotAUnitError(f"{x} is not 3-integral")
            return self.element([x.numerator * pow(x.denominator, -1, self.modulus)])
        return self.element([int(x)])

    @property
    def zero(self) -> "CycElt":
        return self.element([0])

    @property
    def one(self) -> "CycElt":
        return self.element([1])

    @property
    def zeta(self) -> "CycElt":
        return self.element([0, 1])

    @property
    def pi(self) -> "CycElt":
        """The uniformizer zeta - 1 (omega - 1 when m = 1)."""
        return self.element([-1, 1])

    @property
    def omega(self) -> "CycElt":
        """A primitive cube root of unity, zeta^(3^(m-1))."""
        return self.zeta_pow(self.h)

    def zeta_pow(self, k: int) -> "CycElt":
        k %= 3**self.m
        return self.element([0] * k + [1])

    def random_element(self, rng, prec: int | None = None) -> "CycElt":
        return self.element([rng.randrange(self.modulus) for _ in range(self.degree)], prec)

    def divide(self, z: "CycElt", d: "CycElt") -> "CycElt":
        """Exact quotient z / d, provided v(z) >= v(d)."""
        vd = valuation(d)
        if not vd.exact:
            raise PrecisionError("divisor is zero at working precision")
        t = int(vd.value * self.degree)
        unit = div_uniformizer_power(d, t)
        return div_uniformizer_power(z, t) * invert_unit(unit)


@lru_cache(maxsize=None)
def make_ring(m: int, N: int) -> CycRing:
    return CycRing(m, N)


def _reduce_poly(coeffs: list[int], h: int) -> list[int]:
    # x^(2h) = -x^h - 1; sweep from the top so every power lands below 2h.
    e = 2 * h
    coeffs = list(coeffs)
    for d in range(len(coeffs) - 1, e - 1, -1):
        c = coeffs[d]
        if c:
            coeffs[d - h] -= c
            coeffs[d - e] -= c
    return coeffs[:e]


Scalar = Union[int, "CycElt"]


class CycElt:
    """An element of a CycRing; immutable."""

    __slots__ = ("ring", "coeffs", "prec")

    def __init__(self, ring: CycRing, coeffs: tuple[int, ...], prec: int):
        self.ring = ring
        self.coeffs = coeffs
        self.prec = prec

    def _coerce(self, other) -> "CycElt | None":
        if isinstance(other, CycElt):
            if other.ring.m != self.ring.m:
                raise ValueError("mixed cyclotomic levels")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        mod = self.ring.modulus
        return CycElt(self.ring, tuple((a + b) % mod for a, b in zip(self.coeffs, o.coeffs)), min(self.prec, o.prec))

    __radd__ = __add__

    def __neg__(self):
        mod = self.ring.modulus
        return CycElt(self.ring, tuple(-a % mod for a in self.coeffs), self.prec)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        mod = self.ring.modulus
        return CycElt(self.ring, tuple((a - b) % mod for a, b in zip(self.coeffs, o.coeffs)), min(self.prec, o.prec))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        mod = self.ring.modulus
        if isinstance(other, int):
            return CycElt(self.ring, tuple(a * other % mod for a in self.coeffs), self.prec)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self.coeffs, o.coeffs
        e = len(a)
        if e == 2:
            # (a0 + a1 w)(b0 + b1 w) with w^2 = -w - 1
            a0, a1 = a
            b0, b1 = b
            t = a1 * b1
            coeffs = ((a0 * b0 - t) % mod, (a0 * b1 + a1 * b0 - t) % mod)
        else:
            prod = [0] * (2 * e - 1)
            for i, ai in enumerate(a):
                if ai:
                    for j, bj in enumerate(b):
                        prod[i + j] += ai * bj
            coeffs = tuple(c % mod for c in _reduce_poly(prod, e // 2))
        return CycElt(self.ring, coeffs, min(self.prec, o.prec))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return invert_unit(self) ** (-n)
        result = self.ring(1)
        result = CycElt(self.ring, result.coeffs, self.prec)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.ring.divide(self, o)

    def __rtruediv__(self, other):
        return self.ring.divide(self.ring(other), self)

    def __eq__(self, other):
        o = self._coerce(other) if not isinstance(other, CycElt) else other
        if o is None:
            return NotImplemented
        if o.ring.m != self.ring.m:
            return False
        mod = 3 ** min(self.prec, o.prec)
        return all((a - b) % mod == 0 for a, b in zip(self.coeffs, o.coeffs))

    __hash__ = None

    def is_zero(self) -> bool:
        mod = 3**self.prec
        return all(c % mod == 0 for c in self.coeffs)

    def with_prec(self, prec: int) -> "CycElt":
        return CycElt(self.ring, self.coeffs, min(prec, self.prec))

    def centered(self) -> list[int]:
        """Coefficients as symmetric residues modulo 3^prec."""
        mod = 3**self.prec
        half = mod // 2
        out = []
        for c in self.coeffs:
            c %= mod
            out.append(c - mod if c > half else c)
        return out

    def valuation(self) -> Valuation:
        return valuation(self)

    def residue(self) -> int:
        return residue(self)

    def inverse(self) -> "CycElt":
        return invert_unit(self)

    def __str__(self):
        name = "w" if self.ring.m == 1 else "z"
        terms = []
        for k, c in enumerate(self.centered()):
            if c == 0:
                continue
            mono = "" if k == 0 else (name if k == 1 else f"{name}^{k}")
            if not mono:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            if not terms:
                terms.append(body if c > 0 else f"-{body}")
            else:
                terms.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(terms) if terms else "0"

    def __repr__(self):
        return f"CycElt({self}; m={self.ring.m}, prec={self.prec})"


def _raw_div_pi(coeffs: Sequence[int], h: int) -> list[int] | None:
    """Divide an integer polynomial representative by (x - 1) in Z[x]/Phi.

    Returns None when the representative is not divisible (z(1) != 0 mod 3).
    """
    e = 2 * h
    z1 = sum(coeffs)
    if z1 % 3:
        return None
    w = [0] * e
    # synthetic division by (x - 1); remainder is z(1)
    acc = 0
    for k in range(e - 1, 0, -1):
        acc += coeffs[k]
        w[k - 1] = acc
    k3 = z1 // 3
    # (Phi(x) - 3)/(x - 1) = (x^h - 1)/(x - 1) * (x^h + 2)
    #                      = sum_{i<h} x^i * (x^h + 2)
    for i in range(h):
        w[i] -= 2 * k3
        w[i + h] -= k3
    return w


def valuation(z: CycElt) -> Valuation:
    """v_3(z) as an exact rational with denominator dividing e, or a lower
    bound if z is zero at its working precision."""
    mod = 3**z.prec
    reps = [c % mod for c in z.coeffs]
    nonzero = [c for c in reps if c]
    if not nonzero:
        return Valuation.at_least(max(z.prec - 1, 0))
    k = min(v3_int(c) for c in nonzero)
    # v < 1 after removing 3^k, so any representative gives the same answer
    rep = [c // 3**k for c in reps]
    e = z.ring.degree
    t = 0
    while True:
        nxt = _raw_div_pi(rep, z.ring.h)
        if nxt is None:
            break
        rep = nxt
        t += 1
        if t >= e:  # pragma: no cover - would contradict v < 1
            raise AssertionError("valuation search overran ramification index")
    return Valuation(Fraction(k * e + t, e))


def div_uniformizer(z: CycElt) -> CycElt:
    """Return w with (zeta - 1) * w = z; costs one unit of precision."""
    if z.prec < 1:
        raise PrecisionError("no precision left to divide by the uniformizer")
    w = _raw_div_pi(z.coeffs, z.ring.h)
    if w is None:
        raise NotDivisibleError(f"{z} is not divisible by the uniformizer")
    return z.ring.element(w, z.prec - 1)


def div_uniformizer_power(z: CycElt, t: int) -> CycElt:
    """z / (zeta - 1)^t, dividing by 3 in bulk where possible.

    Loses t // e + t % e units of precision instead of t.
    """
    if t < 0:
        raise ValueError("negative exponent")
    ring = z.ring
    q, r = divmod(t, ring.degree)
    if q:
        if z.prec <= q:
            raise PrecisionError(f"cannot divide by 3^{q} at precision {z.prec}")
        p3 = 3**q
        mod = 3**z.prec
        reps = [c % mod for c in z.coeffs]
        if any(c % p3 for c in reps):
            raise NotDivisibleError(f"{z} is not divisible by pi^{t}")
        z = ring.element([c // p3 for c in reps], z.prec - q) * _pi_e_over_3_inverse(ring) ** q
    for _ in range(r):
        z = div_uniformizer(z)
    return z


@lru_cache(maxsize=None)
def _pi_e_over_3_inverse(ring: CycRing) -> CycElt:
    # 3 / pi^e, a unit; computed from an exact integer representative
    rep = [3] + [0] * (ring.degree - 1)
    for _ in range(ring.degree):
        rep = _raw_div_pi(rep, ring.h)
    return ring.element(rep)


def residue(z: CycElt) -> int:
    """Image in the residue field F_3 (x -> 1, then mod 3)."""
    if z.prec < 1:
        raise PrecisionError("element has no known residue")
    return sum(z.coeffs) % 3


def invert_unit(z: CycElt) -> CycElt:
    """Multiplicative inverse of a unit by Newton iteration w <- w(2 - zw)."""
    r = residue(z)
    if r == 0:
        raise NotAUnitError(f"{z} is not a unit")
    ring = z.ring
    w = ring.element([r], z.prec)  # r^{-1} = r in F_3
    target = ring.degree * z.prec
    correct = 1  # 1 - z*w has valuation >= correct / e
    while correct < target:
        w = w * (2 - z * w)
        correct *= 2
    return w
