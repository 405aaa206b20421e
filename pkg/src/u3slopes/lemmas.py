"""Verification suites for the q-expansion identities and containments that
the slope computation rests on. Each routine returns a Suite of Checks."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Callable

from .forms import (
    KAPPA0,
    CharacterWeight,
    delta_qexp,
    e_over_ve,
    eisenstein_character,
    eisenstein_classical,
    eisenstein_constant,
    f_qexp,
    g_kappa,
    qexp_to_f,
    qexp_to_y,
    theta_qexp,
    y_qexp,
)
from .padic import CycElt, make_ring, v3_int, valuation
from .report import Check, Suite
from .residue import F3Series, g_bar_cubic
from .series import ZZ, PowSeries, compose, sigma_op, u_op, v_op


def _first_difference(a: PowSeries, b: PowSeries) -> int | None:
    for i, (x, y) in enumerate(zip(a.coeffs, b.coeffs)):
        if x != y:
            return i
    return None


def _identity(suite: Suite, name: str, lhs: PowSeries, rhs: PowSeries, anchor: str = "") -> Check:
    n = min(lhs.trunc, rhs.trunc)
    i = _first_difference(lhs, rhs)
    detail = f"exact to {n} terms" if i is None else f"differs at {lhs.var}^{i}: {lhs[i]} vs {rhs[i]}"
    return suite.add(name, i is None, detail, anchor)


def coefficient_valuation(c) -> Fraction | None:
    """Valuation of an integer or CycElt coefficient; None for exact zero.

    A CycElt that vanishes at working precision reports its lower bound."""
    if isinstance(c, CycElt):
        return valuation(c).value
    return None if c == 0 else Fraction(v3_int(c))


def _bound_check(name: str, h: PowSeries, bound: Callable[[int], Fraction], anchor: str = "") -> Check:
    """Constant term vanishes and v(coefficient j) >= bound(j) for j >= 1."""
    if h.coeffs[0] != 0:
        return Check(name, False, f"constant term {h[0]} is not 0", anchor)
    for j in range(1, h.trunc):
        v = coefficient_valuation(h[j])
        if v is not None and v < bound(j):
            return Check(name, False, f"{h.var}^{j} coefficient has valuation {v} < {bound(j)}", anchor)
    return Check(name, True, f"bounds hold for {h.var}^j, j < {h.trunc}", anchor)


# --- q-expansion identities ------------------------------------------------


def fund_lemma_check(M: int = 100) -> Suite:
    """The U-images of powers of y and the relations between f and y, as exact
    truncated identities in q."""
    if M < 100:
        raise ValueError("M must be >= 100")
    suite = Suite("fund-lemma")
    P = 3 * M
    y_long = y_qexp(P)
    y = y_long.truncate(M)
    one = PowSeries.monomial(0, M)
    cubic = y * (one + 3 * y + 9 * y * y)

    powers = [PowSeries.monomial(0, P), y_long]
    for _ in range(2, 18):
        powers.append(powers[-1] * y_long)
    U = [u_op(p) for p in powers]
    _identity(suite, "U(y) = 0", U[1], one * 0, "U of y")
    _identity(suite, "U(y^2) = 0", U[2], one * 0, "U of y^2")
    _identity(suite, "U(y^3)(1+6y)^3 = y(1+3y+9y^2)", U[3] * (one + 6 * y) ** 3, cubic, "U of y^3")
    bad = []
    for m in range(1, 6):
        if _first_difference(U[3 * m], U[3] ** m) is not None:
            bad.append(f"U(y^{3 * m})")
        for r in (1, 2):
            if not U[3 * m + r].is_zero():
                bad.append(f"U(y^{3 * m + r})")
    suite.add("U(y^3m) = U(y^3)^m, U(y^3m+1) = U(y^3m+2) = 0", not bad, "m <= 5" if not bad else f"fails for {bad}", "U of y^n")

    f_long = f_qexp(P)
    f = f_long.truncate(M)
    _identity(suite, "f(1-3y)^3 = y(1+3y+9y^2)", f * (one - 3 * y) ** 3, cubic, "f as a function of y")
    _identity(suite, "U(f) = 90f + 8748f^2 + 177147f^3", u_op(f_long), 90 * f + 8748 * f * f + 177147 * f**3, "U of f")
    _identity(suite, "V(f)(1-27y^3) = y^3", v_op(f, M) * (one - 27 * y**3), y**3, "V of f")

    theta = theta_qexp(P)
    _identity(suite, "U(theta) = theta", u_op(theta), theta.truncate(M), "theta is a U-eigenform")
    _identity(suite, "U(theta^2) = theta^2", u_op(theta * theta), (theta * theta).truncate(M), "theta^2 is a U-eigenform")
    off = [i for i, c in enumerate(y.coeffs) if c and i % 3 != 1]
    suite.add("y = q V(F)", not off, "only exponents 1 mod 3" if not off else f"q^{off[0]} appears", "shape of y")
    D = delta_qexp(M)
    _identity(suite, "f^2 Delta = V(Delta)", f * f * D, v_op(D, M), "f as an eta quotient")
    return suite


def eisenstein_check(M: int = 40) -> Suite:
    suite = Suite("eisenstein")
    for k in (2, 4, 6):
        E = eisenstein_classical(k, 3 * M)
        _identity(suite, f"U(E_{k}) = E_{k}", u_op(E), E.truncate(M), "classical Eisenstein series are U-eigenforms")
    c = eisenstein_constant(2)
    suite.add("E_2 q-coefficient", c == 12, f"2/((1-3) zeta(-1)) = {c}", "Eisenstein normalization")
    for kappa in (KAPPA0, CharacterWeight(27, 1)):
        E = eisenstein_character(kappa, 3 * M)
        _identity(suite, f"U(E_kappa) = E_kappa, conductor {kappa.conductor}", u_op(E), E.truncate(M), "U-eigenform at finite-order weights")
    return suite


def f0_cubic_check(M: int = 60, f0: PowSeries | None = None) -> Suite:
    """The cubic satisfied by E/V(E) at kappa_0: in y, in X = w0 y, and mod pi.

    ``f0`` replaces the computed y-expansion of E/V(E) (for checker sanity)."""
    if M < 10:
        raise ValueError("M must be >= 10")
    suite = Suite("f0-cubic")
    if f0 is None:
        f0 = qexp_to_y(e_over_ve(KAPPA0, M), M)
    ring = f0.ring
    w = ring.omega
    y = PowSeries.monomial(1, M, "y", ring)
    one = PowSeries.monomial(0, M, "y", ring)
    y2, y3 = y * y, y * y * y
    a3 = 9 * y3
    a2 = -27 * y3 - 9 * y2 - 3 * y
    a1 = y3 * (27 - 27 * w) + 27 * y2 + 9 * y + one * (2 + w)
    a0 = y3 * (-27 + 27 * w) - 27 * y2 - 9 * y - one * (2 + w)
    lhs = a3 * f0**3 + a2 * f0 * f0 + a1 * f0 + a0
    i = lhs.order()
    suite.add("cubic in y", i is None, f"identity to {M} terms" if i is None else f"nonzero at y^{i}", "cubic for E/V(E) at kappa_0")

    g = g_kappa(KAPPA0, M, ring.N)
    X = PowSeries.monomial(1, M, "X", ring)
    one = PowSeries.monomial(0, M, "X", ring)
    X2, X3 = X * X, X * X * X
    b3 = X3
    b2 = -3 * X3 + X2 * (1 - w) + X * w
    b1 = X3 * (3 - 3 * w) - X2 * (3 - 3 * w) - 3 * X * w + one * w
    b0 = X3 * (-3 + 3 * w) + X2 * (3 - 3 * w) + 3 * X * w - one * w
    lhs = b3 * g**3 + b2 * g * g + b1 * g + b0
    i = lhs.order()
    suite.add("cubic in X = w0 y", i is None, f"identity to {M} terms" if i is None else f"nonzero at X^{i}", "cubic for g at kappa_0")

    residual = g_bar_cubic(F3Series.from_series(g))
    j = residual.first_nonzero()
    suite.add("reduced cubic", j is None, f"X^3 g^3 + X g^2 + g - 1 = 0 to {M} terms" if j is None else f"nonzero at X^{j}", "cubic over F_3")
    return suite


# --- containments ------------------------------------------------------------


def member_lemma_check(k: int, M: int = 30) -> Suite:
    """Coefficient valuation bounds for the quotients of T = theta^k.

    (i)-(iii) are read in the f-coordinate, (iv)-(vi) in the y-coordinate.
    """
    if k < 1:
        raise ValueError("k must be a positive integer")
    suite = Suite(f"member-lemma k={k}")
    vk = v3_int(k)
    P = 3 * M
    theta = theta_qexp(P)
    T = theta**k
    VT_inv = v_op(T, M).inverse()
    Tm = T.truncate(M)
    UT = u_op(T)
    VUT = v_op(UT, M)
    h = Fraction(1, 2)

    q = theta.truncate(M) * v_op(theta, M).inverse() - 1
    suite.checks.append(_bound_check("(i) theta/V(theta)", qexp_to_f(q), lambda j: Fraction(j), "1 + 3f O[[3f]]"))
    q = Tm * VT_inv - 1
    suite.checks.append(_bound_check("(ii) T/V(T)", qexp_to_f(q), lambda j: 1 + vk + h * (j - 1), "1 + 3kf O[[k, pi f]]"))
    q = UT * Tm.inverse() - 1
    suite.checks.append(_bound_check("(iii) U(T)/T", qexp_to_f(q), lambda j: 2 + vk + 3 * h * (j - 1), "1 + 9kf O[[k, 3 pi f]]"))

    ring = make_ring(1, M + 24)
    Tc = Tm.change_ring(ring)
    Tc_inv = Tc.inverse()
    s1 = sigma_op(Tc)
    s2 = sigma_op(s1)
    for name, s in (("(iv) sigma(T)/T", s1), ("(iv) sigma^2(T)/T", s2)):
        suite.checks.append(_bound_check(name, qexp_to_y(s * Tc_inv - 1), lambda j: 1 + h + vk + (j - 1), "1 + 3 pi ky O[[k, 3y]]"))

    q = VUT * Tm.inverse() - 1
    suite.checks.append(_bound_check("(v) VU(T)/T", qexp_to_y(q), lambda j: h + vk + (j - 1), "1 + pi ky O[[k, 3y]]"))
    q = UT * VUT.inverse() - 1
    suite.checks.append(_bound_check("(vi) U(T)/VU(T)", qexp_to_y(q), lambda j: 1 + vk + (j - 1), "1 + 3ky Z_3[[k, 3y]]"))
    return suite


def _random_in_rf(r, n: int, rng: random.Random, ring) -> PowSeries:
    """sum_j c_j (r f)^j with random integral c_j, as a series in f."""
    coeffs = []
    rj = ring.one
    for _ in range(n):
        c = rng.randrange(-40, 41) if ring is ZZ else ring.random_element(rng)
        coeffs.append(c * rj)
        rj = rj * r
    return PowSeries(coeffs, "f", ring)


def containment_property(trials: int = 20, M: int = 30, seed: int = 0) -> Suite:
    """U maps O[[rf]] into O[[r^3 f]] for r = 3 and r = pi, on random series.

    g is drawn with 3M f-coefficients so that its q-expansion is known to the
    3M terms U needs; U(g) is then read back in f to M terms.
    """
    suite = Suite("containment")
    rng = random.Random(seed)
    ring = make_ring(1, 2 * M)
    f_long = f_qexp(3 * M)
    for label, r, R, vr in (("3", 3, ZZ, Fraction(1)), ("pi", ring.pi, ring, Fraction(1, 2))):
        first = ""
        for trial in range(trials):
            g = _random_in_rf(r, 3 * M, rng, R)
            Ug = u_op(compose(g, f_long).with_var("q"))
            Uf = qexp_to_f(Ug, M)
            # the constant term of U(g) is unconstrained
            c = _bound_check("", Uf - Uf[0], lambda j: 3 * j * vr)
            if not c.passed:
                first = f"trial {trial}: {c.detail}"
                break
        suite.add(f"U(O[[{label} f]]) in O[[{label}^3 f]]", not first, first or f"{trials} random series to f^{M - 1}", "U contracts the f-discs")
    return suite


def series_property_suite(trials: int = 100, M: int = 60, seed: int = 0) -> Suite:
    """U(g V(h)) = h U(g), V(gh) = V(g) V(h) and 3 VU(g) = g + sigma(g) + sigma^2(g)."""
    rng = random.Random(seed)
    ring = make_ring(1, 20)
    suite = Suite("series-properties")
    fails = {"projection": None, "V multiplicative": None, "trace": None}
    for trial in range(trials):
        g = PowSeries([rng.randrange(-99, 100) for _ in range(3 * M)], "q")
        h = PowSeries([rng.randrange(-99, 100) for _ in range(M)], "q")
        if fails["projection"] is None and u_op(g * v_op(h)) != h * u_op(g):
            fails["projection"] = trial
        if fails["V multiplicative"] is None and v_op(g.truncate(M) * h) != v_op(g.truncate(M)) * v_op(h):
            fails["V multiplicative"] = trial
        gc = PowSeries([ring.random_element(rng) for _ in range(M)], "q", ring)
        s1 = sigma_op(gc)
        lhs = 3 * v_op(u_op(gc), M)
        rhs = gc + s1 + sigma_op(s1)
        if fails["trace"] is None and lhs != rhs.truncate(lhs.trunc):
            fails["trace"] = trial
    anchors = {"projection": "U(g V(h)) = h U(g)", "V multiplicative": "V(gh) = V(g)V(h)", "trace": "3VU = 1 + sigma + sigma^2"}
    for name, t in fails.items():
        suite.add(anchors[name], t is None, f"{trials} random trials" if t is None else f"counterexample at trial {t}", name)
    return suite
