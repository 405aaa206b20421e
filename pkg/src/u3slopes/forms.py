"""q-expansions of the level 3 and 9 forms, Eisenstein series at finite-order
weights, and the q <-> y coordinate change."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .padic import CycElt, CycRing, NotDivisibleError, PrecisionError, make_ring
from .series import PowSeries, compose, inner_powers, reversion, v_op


class InvalidWeightError(ValueError):
    """The weight does not satisfy 1/3 < |w0| < 1."""


class IntegralityError(ArithmeticError):
    pass


# --- classical expansions over Z -------------------------------------------


@lru_cache(maxsize=None)
def theta_qexp(M: int) -> PowSeries:
    """sum over (a, b) in Z^2 of q^(a^2 + ab + b^2), by lattice enumeration."""
    if M < 1:
        raise ValueError("M must be >= 1")
    bound = math.ceil(2 * math.sqrt(M))
    counts = [0] * M
    for a in range(-bound, bound + 1):
        for b in range(-bound, bound + 1):
            n = a * a + a * b + b * b
            if n < M:
                counts[n] += 1
    return PowSeries(counts, "q")


def _euler_product(M: int, exponent: int, skip_multiples_of_3: bool = False) -> list[int]:
    # prod_{n >= 1} (1 - q^n)^exponent to M terms, exponent may be negative
    c = [1] + [0] * (M - 1)
    for n in range(1, M):
        if skip_multiples_of_3 and n % 3 == 0:
            continue
        for _ in range(abs(exponent)):
            if exponent > 0:
                for i in range(M - 1, n - 1, -1):
                    c[i] -= c[i - n]
            else:
                for i in range(n, M):
                    c[i] += c[i - n]
    return c


@lru_cache(maxsize=None)
def delta_qexp(M: int) -> PowSeries:
    """q prod (1 - q^n)^24."""
    if M < 2:
        raise ValueError("M must be >= 2")
    return PowSeries([0] + _euler_product(M - 1, 24), "q")


@lru_cache(maxsize=None)
def f_qexp(M: int) -> PowSeries:
    """q prod_{3 not | n} (1 - q^n)^(-12), the Hauptmodul of X_0(3)."""
    if M < 2:
        raise ValueError("M must be >= 2")
    return PowSeries([0] + _euler_product(M - 1, -12, skip_multiples_of_3=True), "q")


@lru_cache(maxsize=None)
def y_qexp(M: int) -> PowSeries:
    """(theta / V(theta) - 1) / 6, the Hauptmodul of X_0(9)."""
    if M < 2:
        raise ValueError("M must be >= 2")
    theta = theta_qexp(M)
    ratio = theta * v_op(theta, M).inverse() - 1
    if any(c % 6 for c in ratio.coeffs):
        raise ArithmeticError("theta/V(theta) - 1 is not divisible by 6")
    return PowSeries([c // 6 for c in ratio.coeffs], "q")


# --- Eisenstein series ------------------------------------------------------


@lru_cache(maxsize=None)
def bernoulli(n: int) -> Fraction:
    """B_n with B_1 = -1/2, from sum_{k<=n} C(n+1, k) B_k = 0."""
    B = [Fraction(1)]
    for m in range(1, n + 1):
        B.append(-sum(math.comb(m + 1, k) * B[k] for k in range(m)) / (m + 1))
    return B[n]


def eisenstein_constant(k: int) -> Fraction:
    """2 / ((1 - 3^(k-1)) zeta(1 - k)) with zeta(1 - k) = -B_k / k."""
    zeta = -bernoulli(k) / k
    return 2 / ((1 - 3 ** (k - 1)) * zeta)


def eisenstein_classical(k: int, M: int, ring: CycRing | None = None) -> PowSeries:
    """Level 3 Eisenstein series E_k, coefficients embedded 3-adically."""
    if k < 2 or k % 2:
        raise ValueError("k must be an even integer >= 2")
    ring = make_ring(1, 40) if ring is None else ring
    const = eisenstein_constant(k)
    coeffs = [ring.one]
    for n in range(1, M):
        s = sum(d ** (k - 1) for d in _divisors_prime_to_3(n))
        c = const * s
        if c.denominator % 3 == 0:
            raise IntegralityError(f"E_{k}: coefficient of q^{n} is not 3-integral")
        coeffs.append(ring(c))
    return PowSeries(coeffs, "q", ring)


def _divisors_prime_to_3(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0 and d % 3]


@dataclass(frozen=True)
class CharacterWeight:
    """A finite-order weight kappa of conductor 3^(m+1), m >= 1.

    kappa is even of 3-power order with kappa(2) = zeta_{3^m}^a, so that
    w0 = kappa(4) - 1 = zeta^(2a) - 1. Its Eisenstein series is built from the
    odd Dirichlet character chi = kappa * eps (eps the quadratic character mod
    3), i.e. chi(2) = -zeta^a; for conductor 9 and a = 2 this is kappa_0 with
    chi(2) = omega + 1.
    """

    conductor: int
    generator_exponent: int

    def __post_init__(self):
        c = self.conductor
        m = 0
        while c % 3 == 0:
            c //= 3
            m += 1
        if c != 1 or m < 1:
            raise InvalidWeightError(f"conductor must be a power of 3, got {self.conductor}")
        if m == 1:
            raise InvalidWeightError("conductor 3 gives the trivial character, w0 = 0: weight outside 1/3 < |w0| < 1")
        if self.generator_exponent % 3 == 0:
            raise InvalidWeightError("generator exponent must be prime to 3, else the conductor drops")

    @property
    def m(self) -> int:
        c, m = self.conductor, -1
        while c > 1:
            c //= 3
            m += 1
        return m

    @property
    def e(self) -> int:
        return 2 * 3 ** (self.m - 1)

    def ring(self, N: int) -> CycRing:
        return make_ring(self.m, N)

    def w0(self, ring: CycRing) -> CycElt:
        return ring.zeta_pow(2 * self.generator_exponent) - 1

    @property
    def v(self) -> Fraction:
        """v_3(w0) = 1 / (2 * 3^(m-1))."""
        return Fraction(1, self.e)

    def chi(self, n: int, ring: CycRing) -> CycElt:
        """Odd Dirichlet character attached to the weight."""
        n %= self.conductor
        if n % 3 == 0:
            return ring.zero
        k = _discrete_log_2(n, self.conductor)
        z = ring.zeta_pow(self.generator_exponent * k)
        return -z if k % 2 else z


KAPPA0 = CharacterWeight(9, 2)


@lru_cache(maxsize=None)
def _dlog_table(c: int) -> dict[int, int]:
    table, x = {}, 1
    for k in range(2 * c // 3):
        table[x] = k
        x = 2 * x % c
    return table


def _discrete_log_2(n: int, c: int) -> int:
    return _dlog_table(c)[n % c]


def default_precision(kappa: CharacterWeight) -> int:
    return 48 if kappa.m == 1 else 64


def eisenstein_character(kappa: CharacterWeight, M: int, N: int | None = None) -> PowSeries:
    """E_kappa = 1 - (1/(2c) sum_{n<c} n chi(n))^(-1) sum_n (sum_{3 not| d | n} chi(d)) q^n."""
    ring = kappa.ring(N or default_precision(kappa))
    c = kappa.conductor
    chi = [kappa.chi(n, ring) for n in range(c)]
    S = ring.zero
    for n in range(1, c):
        S = S + chi[n] * n
    try:
        const = ring.divide(ring(-2 * c), S)
    except NotDivisibleError as exc:
        raise IntegralityError(f"Eisenstein constant not integral for conductor {c}") from exc
    coeffs = [ring.one]
    for n in range(1, M):
        s = ring.zero
        for d in _divisors_prime_to_3(n):
            s = s + chi[d % c]
        coeffs.append(const * s)
    return PowSeries(coeffs, "q", ring)


# --- coordinate changes ----------------------------------------------------


@lru_cache(maxsize=None)
def _y_inverse_powers(M: int) -> list[tuple]:
    q_of_y = reversion(y_qexp(M), var="y")
    return inner_powers(q_of_y, M)


@lru_cache(maxsize=None)
def _f_inverse_powers(M: int) -> list[tuple]:
    q_of_f = reversion(f_qexp(M), var="f")
    return inner_powers(q_of_f, M)


def _apply_powers(g: PowSeries, powers: list[tuple], M: int, var: str) -> PowSeries:
    ring = g.ring
    out = [ring.zero] * M
    for k in range(M):
        gk = g.coeffs[k]
        pk = powers[k]
        for j in range(k, M):
            if pk[j]:
                out[j] = out[j] + gk * pk[j]
    return PowSeries(out, var, ring)


def qexp_to_y(g: PowSeries, M: int | None = None) -> PowSeries:
    """The series h with h(y(q)) = g(q), to M terms."""
    M = g.trunc if M is None else M
    if g.trunc < M:
        raise ValueError(f"need {M} q-coefficients, have {g.trunc}")
    return _apply_powers(g, _y_inverse_powers(M), M, "y")


def qexp_to_f(g: PowSeries, M: int | None = None) -> PowSeries:
    """The series h with h(f(q)) = g(q), to M terms."""
    M = g.trunc if M is None else M
    if g.trunc < M:
        raise ValueError(f"need {M} q-coefficients, have {g.trunc}")
    return _apply_powers(g, _f_inverse_powers(M), M, "f")


def y_to_qexp(h: PowSeries) -> PowSeries:
    """h(y(q)) as a q-series."""
    return compose(h, y_qexp(h.trunc)).with_var("q") if h.var != "q" else h


def e_over_ve(kappa: CharacterWeight, M: int, N: int | None = None) -> PowSeries:
    E = eisenstein_character(kappa, M, N)
    return E * v_op(E, M).inverse()


def g_kappa(kappa: CharacterWeight, M: int, N: int | None = None) -> PowSeries:
    """g_kappa(X) with E_kappa / V(E_kappa) = g_kappa(w0 y), to M terms.

    Raises IntegralityError naming the first coefficient that is not
    integral (or cannot be certified so at the working precision).
    """
    ratio = e_over_ve(kappa, M, N)
    ring = ratio.ring
    h = qexp_to_y(ratio, M)
    w0 = kappa.w0(ring)
    coeffs = []
    w0j = ring.one
    for j, hj in enumerate(h.coeffs):
        try:
            coeffs.append(ring.divide(hj, w0j))
        except (NotDivisibleError, PrecisionError) as exc:
            raise IntegralityError(f"g_kappa coefficient c_{j} is not integral at working precision") from exc
        w0j = w0j * w0
    return PowSeries(coeffs, "X", ring)
