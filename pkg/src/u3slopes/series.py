"""Truncated univariate power series over Z or a cyclotomic 3-adic ring.

A series stores its coefficients 0..trunc-1; everything past ``trunc`` is
unknown. Binary operations return the smallest truncation both operands
support, and never pad with invented coefficients.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .padic import CycElt, CycRing


class _Integers:
    """Stand-in ring object for exact integer coefficients."""

    zero = 0
    one = 1

    def __call__(self, x) -> int:
        if isinstance(x, CycElt):
            raise TypeError("cannot coerce a cyclotomic element to ZZ")
        return int(x)

    def __repr__(self):
        return "ZZ"


ZZ = _Integers()


class VariableMismatchError(ValueError):
    pass


def _common_ring(r1, r2):
    if r1 is r2 or r1 == r2:
        return r1
    if r1 is ZZ:
        return r2
    if r2 is ZZ:
        return r1
    if isinstance(r1, CycRing) and isinstance(r2, CycRing) and r1.m == r2.m:
        return r1 if r1.N <= r2.N else r2
    raise TypeError(f"incompatible coefficient rings {r1!r} and {r2!r}")


def _is_scalar(x) -> bool:
    return isinstance(x, (int, CycElt))


class PowSeries:
    """Truncated power series sum_{i < trunc} coeffs[i] * var^i."""

    __slots__ = ("coeffs", "var", "ring")

    def __init__(self, coeffs: Iterable, var: str = "q", ring=ZZ, trunc: int | None = None):
        coeffs = list(coeffs)
        if trunc is not None:
            coeffs = coeffs[:trunc] + [ring.zero] * (trunc - len(coeffs))
        if not coeffs:
            raise ValueError("a power series needs trunc >= 1")
        if ring is not ZZ:
            coeffs = [c if isinstance(c, CycElt) and c.ring == ring else ring(c) for c in coeffs]
        self.coeffs = tuple(coeffs)
        self.var = var
        self.ring = ring

    @classmethod
    def monomial(cls, n: int, trunc: int, var: str = "q", ring=ZZ, coeff=None) -> "PowSeries":
        coeffs = [ring.zero] * trunc
        if n < trunc:
            coeffs[n] = ring.one if coeff is None else coeff
        return cls(coeffs, var, ring)

    @property
    def trunc(self) -> int:
        return len(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, i):
        return self.coeffs[i]

    def __iter__(self):
        return iter(self.coeffs)

    def _check_var(self, other: "PowSeries"):
        if self.var != other.var:
            raise VariableMismatchError(f"series in {self.var} combined with series in {other.var}")

    def truncate(self, M: int) -> "PowSeries":
        if M > self.trunc:
            raise ValueError(f"cannot extend a series known to {self.trunc} terms to {M}")
        return PowSeries(self.coeffs[:M], self.var, self.ring)

    def change_ring(self, ring) -> "PowSeries":
        return PowSeries([ring(c) for c in self.coeffs], self.var, ring)

    def with_var(self, var: str) -> "PowSeries":
        return PowSeries(self.coeffs, var, self.ring)

    def map(self, fn, ring=None) -> "PowSeries":
        return PowSeries([fn(c) for c in self.coeffs], self.var, self.ring if ring is None else ring)

    def __add__(self, other):
        if _is_scalar(other):
            ring = _common_ring(self.ring, other.ring if isinstance(other, CycElt) else ZZ)
            return PowSeries((self.coeffs[0] + other,) + self.coeffs[1:], self.var, ring)
        if not isinstance(other, PowSeries):
            return NotImplemented
        self._check_var(other)
        ring = _common_ring(self.ring, other.ring)
        return PowSeries([a + b for a, b in zip(self.coeffs, other.coeffs)], self.var, ring)

    __radd__ = __add__

    def __neg__(self):
        return PowSeries([-a for a in self.coeffs], self.var, self.ring)

    def __sub__(self, other):
        if _is_scalar(other):
            return self + (-other)
        if not isinstance(other, PowSeries):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if _is_scalar(other):
            ring = _common_ring(self.ring, other.ring if isinstance(other, CycElt) else ZZ)
            return PowSeries([c * other for c in self.coeffs], self.var, ring)
        if not isinstance(other, PowSeries):
            return NotImplemented
        self._check_var(other)
        ring = _common_ring(self.ring, other.ring)
        return PowSeries(_mul_coeffs(self.coeffs, other.coeffs, min(self.trunc, other.trunc), ring), self.var, ring)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = PowSeries.monomial(0, self.trunc, self.var, self.ring)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __truediv__(self, other):
        if isinstance(other, PowSeries):
            return self * other.inverse()
        if isinstance(other, int):
            if other in (1, -1):
                return self * other
            if self.ring is ZZ:
                if any(c % other for c in self.coeffs):
                    raise ArithmeticError(f"series not divisible by {other}")
                return PowSeries([c // other for c in self.coeffs], self.var, ZZ)
            other = self.ring(other)
        if isinstance(other, CycElt):
            return PowSeries([other.ring.divide(c, other) for c in self.coeffs], self.var, _common_ring(self.ring, other.ring))
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, PowSeries):
            if self.var != other.var:
                return False
            return all(a == b for a, b in zip(self.coeffs, other.coeffs))
        if _is_scalar(other):
            return self.coeffs[0] == other and all(c == 0 for c in self.coeffs[1:])
        return NotImplemented

    __hash__ = None

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def order(self) -> int | None:
        """Index of the first nonzero coefficient, None if all vanish."""
        for i, c in enumerate(self.coeffs):
            if c != 0:
                return i
        return None

    def derivative(self) -> "PowSeries":
        if self.trunc == 1:
            return PowSeries([self.ring.zero], self.var, self.ring)
        return PowSeries([c * i for i, c in enumerate(self.coeffs)][1:], self.var, self.ring)

    def inverse(self) -> "PowSeries":
        return invert_unit_series(self)

    def __call__(self, inner: "PowSeries") -> "PowSeries":
        return compose(self, inner)

    def __repr__(self):
        shown = ", ".join(str(c) for c in self.coeffs[:8])
        more = ", ..." if self.trunc > 8 else ""
        return f"PowSeries[{self.var}, trunc={self.trunc}]({shown}{more})"


def _mul_coeffs(a: Sequence, b: Sequence, M: int, ring) -> list:
    zero = ring.zero
    out = [zero] * M
    # skip exact zeros; structural sparsity (V-images, y-powers) is common
    nz_b = [(j, bj) for j, bj in enumerate(b[:M]) if not (isinstance(bj, int) and bj == 0)]
    for i in range(min(len(a), M)):
        ai = a[i]
        if isinstance(ai, int) and ai == 0:
            continue
        lim = M - i
        for j, bj in nz_b:
            if j >= lim:
                break
            out[i + j] = out[i + j] + ai * bj
    return out


def _unit_inverse(c, ring):
    if ring is ZZ:
        if c not in (1, -1):
            raise ArithmeticError(f"constant term {c} is not a unit in ZZ")
        return c
    return c.inverse()


def invert_unit_series(g: PowSeries) -> PowSeries:
    """1/g by Newton iteration h <- h(2 - g h), doubling the correct length."""
    M = g.trunc
    h = PowSeries([_unit_inverse(g.coeffs[0], g.ring)], g.var, g.ring)
    n = 1
    while n < M:
        n = min(2 * n, M)
        gn = g.truncate(n)
        hn = PowSeries(h.coeffs, g.var, g.ring, trunc=n)
        h = hn * (2 - gn * hn)
    return h


def u_op(g: PowSeries) -> PowSeries:
    """U(sum a_n q^n) = sum a_{3n} q^n."""
    return PowSeries(g.coeffs[::3], g.var, g.ring)


def v_op(g: PowSeries, trunc: int | None = None) -> PowSeries:
    """V(sum a_n q^n) = sum a_n q^{3n}.

    A series known to M terms has a V-image known to 3M terms (the two
    coefficients after the last multiple of 3 are genuinely zero).
    """
    M = 3 * g.trunc
    if trunc is not None:
        if trunc > M:
            raise ValueError(f"V-image only known to {M} terms")
        M = trunc
    out = [g.ring.zero] * M
    for i in range(0, M, 3):
        out[i] = g.coeffs[i // 3]
    return PowSeries(out, g.var, g.ring)


def sigma_op(g: PowSeries, ring: CycRing | None = None) -> PowSeries:
    """q -> omega q: coefficient i is multiplied by omega^(i mod 3)."""
    if ring is None:
        ring = g.ring
    if not isinstance(ring, CycRing):
        raise TypeError("sigma needs a coefficient ring containing omega")
    powers = [ring.one, ring.omega, ring.omega * ring.omega]
    return PowSeries([c * powers[i % 3] for i, c in enumerate(g.coeffs)], g.var, ring)


def compose(outer: PowSeries, inner: PowSeries) -> PowSeries:
    """outer(inner) for inner with zero constant term; result is in inner's variable."""
    if inner.coeffs[0] != 0:
        raise ValueError("inner series must have zero constant term")
    M = min(outer.trunc, inner.trunc)
    ring = _common_ring(outer.ring, inner.ring)
    powers = inner_powers(inner, M)
    out = [ring.zero] * M
    for k in range(M):
        ok = outer.coeffs[k]
        if isinstance(ok, int) and ok == 0:
            continue
        pk = powers[k]
        for j in range(k, M):
            pj = pk[j]
            if not (isinstance(pj, int) and pj == 0):
                out[j] = out[j] + ok * pj
    return PowSeries(out, inner.var, ring)


def inner_powers(inner: PowSeries, M: int) -> list[tuple]:
    """Coefficient tuples of inner^0 .. inner^(M-1), each truncated at M."""
    base = inner.truncate(M)
    powers = [PowSeries.monomial(0, M, inner.var, inner.ring).coeffs]
    cur = PowSeries.monomial(0, M, inner.var, inner.ring)
    for _ in range(1, M):
        cur = cur * base
        powers.append(cur.coeffs)
    return powers


def reversion(s: PowSeries, var: str | None = None) -> PowSeries:
    """Compositional inverse t of s = c1*x + O(x^2), c1 a unit.

    Newton iteration t <- t - (s(t) - x) / s'(t) with doubling precision.
    The result is a series in ``var`` (default: s.var).
    """
    if s.coeffs[0] != 0:
        raise ValueError("series to revert must have zero constant term")
    if s.trunc < 2:
        raise ValueError("need at least the linear coefficient")
    c1_inv = _unit_inverse(s.coeffs[1], s.ring)
    M = s.trunc
    ds = s.derivative()
    t = PowSeries([s.ring.zero, c1_inv], s.var, s.ring)
    n = 2
    while n < M:
        n = min(2 * n, M)
        tn = PowSeries(t.coeffs, s.var, s.ring, trunc=n)
        x = PowSeries.monomial(1, n, s.var, s.ring)
        err = compose(s.truncate(n), tn) - x
        deriv = compose(ds.truncate(n - 1), tn)
        # err has zero constant term, so s'(t) is only needed to n - 1 terms
        step = PowSeries(err.coeffs[1:], s.var, s.ring) * deriv.inverse()
        t = tn - PowSeries((s.ring.zero,) + step.coeffs, s.var, s.ring)
    if var is not None:
        t = t.with_var(var)
    return t
