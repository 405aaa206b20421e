"""The matrix of U in weight kappa, its characteristic series and slopes."""

from __future__ import annotations

import itertools
import random
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .forms import CharacterWeight, IntegralityError, default_precision, eisenstein_character, g_kappa, qexp_to_y, y_qexp
from .padic import CycElt, CycRing, PrecisionError, Valuation, make_ring, valuation
from .report import Suite
from .residue import t_bar_matrix
from .series import PowSeries, u_op, v_op


class PrecisionExhausted(PrecisionError):
    def __init__(self, message: str, suggested_N: int):
        super().__init__(f"{message}; retry with N >= {suggested_N}")
        self.suggested_N = suggested_N


@dataclass
class UMatrix:
    """Rescaled matrix (n_ij) of U on the basis V(E_kappa) (w0 y)^j."""

    kappa: CharacterWeight
    beta: int
    entries: list[list[CycElt]]

    @property
    def ring(self) -> CycRing:
        return self.entries[0][0].ring

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def zero_pattern_ok(self) -> bool:
        return all(self.entries[i][j].is_zero() for i in range(self.beta) for j in range(self.beta) if j % 3)

    def valuation_floor_ok(self) -> bool:
        """v(n_ij) >= (2/3) j v(w0): the column divisibility by d^j with d^3 = w0^2."""
        v = self.kappa.v
        for i in range(self.beta):
            for j in range(0, self.beta, 3):
                if valuation(self.entries[i][j]).value < Fraction(2, 3) * j * v:
                    return False
        return True

    def unit_part_table(self, size: int) -> list[list[CycElt]]:
        """(n_{3i,3j} / w0^(2j)), the matrix whose reduction decides the equality case."""
        if 3 * (size - 1) >= self.beta:
            raise ValueError(f"need beta > {3 * (size - 1)}")
        ring = self.ring
        w0sq = self.kappa.w0(ring) ** 2
        return [[ring.divide(self.entries[3 * i][3 * j], w0sq**j) for j in range(size)] for i in range(size)]

    def min_prec(self) -> int:
        return min(x.prec for row in self.entries for x in row)


def _ring_for(kappa: CharacterWeight, N: int | None) -> CycRing:
    return kappa.ring(N or default_precision(kappa))


def u_matrix_gf(kappa: CharacterWeight, beta: int, g: PowSeries | None = None, N: int | None = None) -> UMatrix:
    """Expand g(X) (1 + 6X/w0)^3 / ((1 + 6X/w0)^3 - Y^3 (w0^2 X + 3 w0 X^2 + 9 X^3)).

    Column 3t is the X-expansion of g(X) * ((w0^2 X + 3 w0 X^2 + 9 X^3) / (1 + 6X/w0)^3)^t.
    """
    if beta % 3:
        raise ValueError("beta must be a multiple of 3")
    if g is None:
        g = g_kappa(kappa, beta, N)
    if g.trunc < beta:
        raise ValueError(f"g_kappa known to {g.trunc} terms, need {beta}")
    ring = g.ring
    w0 = kappa.w0(ring)
    a = ring.divide(ring(6), w0)
    onepax3 = PowSeries([ring.one, a], "X", ring, trunc=beta) ** 3
    P = PowSeries([0, w0 * w0, 3 * w0, 9], "X", ring, trunc=beta)
    Q = P * onepax3.inverse()
    zero = ring.zero
    entries = [[zero] * beta for _ in range(beta)]
    col = g.truncate(beta)
    for j in range(0, beta, 3):
        for i in range(beta):
            entries[i][j] = col[i]
        col = col * Q
    return UMatrix(kappa, beta, entries)


def u_matrix_qspace(kappa: CharacterWeight, beta: int, N: int | None = None) -> UMatrix:
    """Independent route: U(V(E_kappa) y^j) / V(E_kappa) computed on q-expansions,
    moved to y-coordinates and rescaled by w0^(j - i)."""
    P = 3 * beta
    E = eisenstein_character(kappa, P, N)
    ring = E.ring
    VE = v_op(E, P)
    VE_inv = v_op(E, beta).inverse()
    y = y_qexp(P)
    w0 = kappa.w0(ring)
    entries = [[ring.zero] * beta for _ in range(beta)]
    yj = PowSeries.monomial(0, P)
    for j in range(beta):
        h = qexp_to_y(u_op(VE * yj) * VE_inv, beta)
        for i in range(beta):
            if i <= j:
                entries[i][j] = h[i] * w0 ** (j - i)
            else:
                entries[i][j] = ring.divide(h[i], w0 ** (i - j))
        yj = yj * y
    return UMatrix(kappa, beta, entries)


@dataclass
class CharSeries:
    """Coefficients b_alpha of det(1 - T N), alpha <= alpha_max."""

    coeffs: list[CycElt]

    @property
    def valuations(self) -> list[Valuation]:
        return [valuation(b) for b in self.coeffs]

    @property
    def alpha_max(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, a):
        return self.coeffs[a]


def _tmul(a, b, L):
    out = [None] * L
    for i, x in enumerate(a):
        for j in range(L - i):
            p = x * b[j]
            out[i + j] = p if out[i + j] is None else out[i + j] + p
    return out


def _tinv(p, L):
    # p[0] is a unit; solve p * u = 1 term by term
    inv0 = p[0].inverse()
    u = [inv0]
    for n in range(1, L):
        s = p[n] * u[0]
        for k in range(1, n):
            s = s + p[n - k] * u[k]
        u.append(-(s * inv0))
    return u


def char_series(matrix: UMatrix | Sequence[Sequence[CycElt]], alpha_max: int) -> CharSeries:
    """det(1 - T N) modulo T^(alpha_max + 1) by elimination over the truncated
    T-series ring. Every pivot is 1 + O(T), so only units are inverted."""
    rows = matrix.entries if isinstance(matrix, UMatrix) else [list(r) for r in matrix]
    n = len(rows)
    if isinstance(matrix, UMatrix) and 3 * alpha_max > n:
        raise ValueError(f"alpha_max must be <= beta/3 = {n // 3}")
    ring = rows[0][0].ring
    L = alpha_max + 1
    zero = ring.zero
    if L == 1:
        return CharSeries([ring.one])
    # A[i][j] is a T-series (list of length L) or None for the zero series
    A = []
    for i in range(n):
        row = []
        for j in range(n):
            x = rows[i][j]
            if i == j:
                row.append([ring.one, -x] + [zero] * (L - 2))
            elif x.is_zero():
                row.append(None)
            else:
                row.append([zero, -x] + [zero] * (L - 2))
        A.append(row)
    det = [ring.one] + [zero] * (L - 1)
    for k in range(n):
        pivot = A[k][k]
        if pivot is None or pivot[0].residue() == 0:
            raise AssertionError("pivot is not a unit; the matrix was not of the form 1 - T N")
        det = _tmul(det, pivot, L)
        pinv = _tinv(pivot, L)
        row_k = A[k]
        for i in range(k + 1, n):
            if A[i][k] is None:
                continue
            f = _tmul(A[i][k], pinv, L)
            row_i = A[i]
            for j in range(k + 1, n):
                if row_k[j] is None:
                    continue
                prod = _tmul(f, row_k[j], L)
                if row_i[j] is None:
                    row_i[j] = [-x for x in prod]
                else:
                    row_i[j] = [x - y for x, y in zip(row_i[j], prod)]
            row_i[k] = None
    return CharSeries(det)


def _det_leibniz(M: Sequence[Sequence], one):
    n = len(M)
    total = None
    for perm in itertools.permutations(range(n)):
        inversions = sum(1 for a in range(n) for b in range(a + 1, n) if perm[a] > perm[b])
        term = one
        for r in range(n):
            term = term * M[r][perm[r]]
        if inversions % 2:
            term = -term
        total = term if total is None else total + term
    return one if total is None else total


def char_series_by_minors(matrix: Sequence[Sequence[CycElt]], alpha_max: int) -> CharSeries:
    """Brute force: (-1)^alpha b_alpha is the sum of the alpha x alpha principal minors."""
    n = len(matrix)
    ring = matrix[0][0].ring
    out = [ring.one]
    for alpha in range(1, alpha_max + 1):
        total = ring.zero
        for S in itertools.combinations(range(n), alpha):
            sub = [[matrix[i][j] for j in S] for i in S]
            total = total + _det_leibniz(sub, ring.one)
        out.append(-total if alpha % 2 else total)
    return CharSeries(out)


@dataclass
class NewtonPolygon:
    points: list[tuple[int, Fraction]]
    vertices: list[tuple[int, Fraction]]
    segments: list[tuple[Fraction, int]]

    @property
    def slopes(self) -> list[Fraction]:
        return [s for s, mult in self.segments for _ in range(mult)]


def newton_polygon(values: CharSeries | Sequence) -> NewtonPolygon:
    """Lower convex hull of (alpha, v(b_alpha)).

    Accepts a CharSeries or a sequence of Valuations / rationals (None for an
    unknown point). Points known only as lower bounds are left out.
    """
    if isinstance(values, CharSeries):
        values = values.valuations
    points = []
    skipped = []
    for a, v in enumerate(values):
        if v is None or (isinstance(v, Valuation) and not v.exact):
            skipped.append(a)
            continue
        points.append((a, v.value if isinstance(v, Valuation) else Fraction(v)))
    if skipped:
        warnings.warn(f"points {skipped} are zero at working precision and were left out of the hull")
    if not points or (len(values) > 1 and len(points) < 2) or points[0][0] != 0:
        raise PrecisionError("too few exactly known points to build the Newton polygon")
    hull: list[tuple[int, Fraction]] = []
    for p in points:
        # pop while the last turn is not strictly convex (drops collinear points)
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (y2 - y1) * (p[0] - x1) >= (p[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(p)
    segments = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        segments.append((Fraction(y2 - y1) / (x2 - x1), x2 - x1))
    return NewtonPolygon(points, hull, segments)


@dataclass
class SlopeReport:
    kappa: CharacterWeight
    v: Fraction
    beta: int
    alpha_max: int
    b_valuations: list[Fraction]
    polygon: NewtonPolygon
    stable: bool
    precision_remaining: int
    progression_ok: bool
    valuations_ok: bool

    @property
    def slopes(self) -> list[Fraction]:
        return self.polygon.slopes

    @property
    def common_difference(self) -> Fraction | None:
        """Step of the slope sequence if it is an arithmetic progression starting at 0."""
        s = self.slopes
        if len(s) < 2 or s[0] != 0:
            return None
        step = s[1] - s[0]
        return step if all(b - a == step for a, b in zip(s, s[1:])) else None

    def to_dict(self) -> dict:
        def q(x):
            x = Fraction(x)
            return {"num": x.numerator, "den": x.denominator}

        return {
            "kappa": {"conductor": self.kappa.conductor, "generator_exponent": self.kappa.generator_exponent},
            "v": q(self.v),
            "beta": self.beta,
            "alpha_max": self.alpha_max,
            "b_valuations": [{"alpha": a, **q(x)} for a, x in enumerate(self.b_valuations)],
            "vertices": [{"alpha": a, **q(x)} for a, x in self.polygon.vertices],
            "slopes": [{**q(s), "mult": m} for s, m in self.polygon.segments],
            "stable": self.stable,
            "precision_remaining": self.precision_remaining,
            "progression_ok": self.progression_ok,
            "valuations_ok": self.valuations_ok,
            "common_difference": None if self.common_difference is None else q(self.common_difference),
        }


def _exact_valuations(cs: CharSeries, N: int, beta: int) -> list[Valuation]:
    vals = cs.valuations
    bad = [a for a, v in enumerate(vals) if not v.exact]
    if bad:
        raise PrecisionExhausted(f"b_alpha for alpha in {bad} vanish at working precision", 2 * N)
    return vals


def slopes(kappa: CharacterWeight, alpha_max: int = 8, beta: int | None = None, N: int | None = None) -> SlopeReport:
    """Slopes of U in weight kappa from det(1 - T N_beta), with a beta+3 stability run."""
    if beta is None:
        beta = 3 * alpha_max + 3
    if beta % 3:
        raise ValueError("beta must be a multiple of 3")
    if beta < 3 * alpha_max + 3:
        raise ValueError(f"beta must be >= 3*alpha_max + 3 = {3 * alpha_max + 3}")
    N = N or default_precision(kappa)
    try:
        g = g_kappa(kappa, beta + 3, N)
    except (PrecisionError, IntegralityError) as exc:
        # g_kappa is integral at every valid weight, so a failure here means N ran out
        raise PrecisionExhausted(str(exc), 2 * N) from exc
    cs = char_series(u_matrix_gf(kappa, beta, g), alpha_max)
    cs_next = char_series(u_matrix_gf(kappa, beta + 3, g), alpha_max)
    vals = _exact_valuations(cs, N, beta)
    vals_next = _exact_valuations(cs_next, N, beta)
    v = kappa.v
    expected = [v * a * (a - 1) / 2 for a in range(alpha_max + 1)]
    valuations_ok = [x.value for x in vals] == expected
    stable = [x.value for x in vals] == [x.value for x in vals_next] and all(
        valuation(b2 - b1).value > vb.value for b1, b2, vb in zip(cs.coeffs, cs_next.coeffs, vals)
    )
    polygon = newton_polygon(vals)
    progression_ok = polygon.segments == [(v * k, 1) for k in range(alpha_max)]
    remaining = min(int(b.prec - x.value) for b, x in zip(cs.coeffs, vals))
    return SlopeReport(
        kappa=kappa,
        v=v,
        beta=beta,
        alpha_max=alpha_max,
        b_valuations=[x.value for x in vals],
        polygon=polygon,
        stable=stable,
        precision_remaining=remaining,
        progression_ok=progression_ok,
        valuations_ok=valuations_ok,
    )


def random_strip_matrix(s: int, d: CycElt, rng: random.Random) -> list[list[CycElt]]:
    """3s x 3s matrix with zero columns off 3Z and column j divisible by d^j.

    Each entry is d^j times a random integral element that is a non-unit about
    a third of the time, so both sides of the unit criterion get exercised.
    """
    ring = d.ring
    n = 3 * s
    out = [[ring.zero] * n for _ in range(n)]
    for j in range(0, n, 3):
        dj = d**j
        for i in range(n):
            x = ring.random_element(rng)
            if rng.random() < 1 / 3:
                x = x * ring.pi
            out[i][j] = x * dj
    return out


def strip_lemma_property(s: int = 2, d: CycElt | None = None, trials: int = 100, seed: int = 0) -> Suite:
    """Check, on random matrices, that a_alpha / d^(3 alpha (alpha-1)/2) is
    integral, and for alpha <= s is a unit iff det(T_alpha) is, where
    T_alpha = (n_{3i,3j} / d^(3j))."""
    if s > 3:
        raise ValueError("brute-force minors are only feasible for s <= 3")
    if d is None:
        d = make_ring(1, 30).pi
    if valuation(d).value <= 0:
        raise ValueError("d must lie in the maximal ideal")
    ring = d.ring
    rng = random.Random(seed)
    suite = Suite("strip-lemma")
    failures = 0
    first = ""
    for trial in range(trials):
        N = random_strip_matrix(s, d, rng)
        P = char_series_by_minors(N, 3 * s)
        for alpha in range(1, 3 * s + 1):
            shift = d ** (3 * alpha * (alpha - 1) // 2)
            a = P[alpha]
            if a.is_zero() or valuation(a) >= valuation(shift):
                quotient_unit = None if a.is_zero() else valuation(a) == valuation(shift)
            else:
                failures += 1
                first = first or f"trial {trial}: a_{alpha} has valuation {valuation(a)} below {valuation(shift)}"
                continue
            if alpha <= s:
                T = [[ring.divide(N[3 * i][3 * j], d ** (3 * j)) for j in range(alpha)] for i in range(alpha)]
                det_unit = _det_leibniz(T, ring.one).residue() != 0
                if bool(quotient_unit) != det_unit:
                    failures += 1
                    first = first or f"trial {trial}, alpha {alpha}: quotient unit={quotient_unit}, det(T) unit={det_unit}"
    suite.add(
        "strip divisibility",
        failures == 0,
        f"{trials} random {3*s}x{3*s} matrices, d of valuation {valuation(d).value}" if not failures else first,
        "divisibility and unit criterion for a_alpha",
    )
    return suite


def unit_part_matches_t_bar(U: UMatrix, size: int) -> bool:
    """Reduction of (n_{3i,3j} / w0^(2j)) equals the universal t-bar table."""
    table = U.unit_part_table(size)
    reduced = [[x.residue() for x in row] for row in table]
    return reduced == t_bar_matrix(size)
