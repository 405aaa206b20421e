import random
import warnings
from fractions import Fraction

import pytest

from u3slopes.forms import KAPPA0, CharacterWeight, eisenstein_character, f_qexp, g_kappa, qexp_to_f
from u3slopes.padic import PrecisionError, Valuation, make_ring, valuation
from u3slopes.series import PowSeries, u_op, v_op
from u3slopes.spectral import (
    PrecisionExhausted,
    char_series,
    char_series_by_minors,
    newton_polygon,
    slopes,
    strip_lemma_property,
    u_matrix_gf,
    u_matrix_qspace,
    unit_part_matches_t_bar,
)

R = make_ring(1, 20)


def test_char_series_trivial_cases():
    zero = [[R.zero] * 3 for _ in range(3)]
    assert list(char_series(zero, 3).coeffs) == [1, 0, 0, 0]
    ident = [[R.one if i == j else R.zero for j in range(3)] for i in range(3)]
    assert list(char_series(ident, 3).coeffs) == [1, -3, 3, -1]


def test_char_series_against_principal_minors():
    rng = random.Random(11)
    for _ in range(5):
        A = [[R.random_element(rng) for _ in range(6)] for _ in range(6)]
        assert list(char_series(A, 6).coeffs) == list(char_series_by_minors(A, 6).coeffs)


def test_newton_polygon_examples():
    assert newton_polygon([0, 0, Fraction(1, 2), Fraction(3, 2), 3]).slopes == [0, Fraction(1, 2), 1, Fraction(3, 2)]
    poly = newton_polygon([0, 1, 2, 3])
    assert poly.slopes == [1, 1, 1]
    assert poly.segments == [(1, 3)]
    assert newton_polygon([0]).slopes == []


def test_newton_polygon_skips_lower_bounds():
    with pytest.warns(UserWarning):
        poly = newton_polygon([Valuation(0), Valuation.at_least(5), Valuation(2)])
    assert poly.slopes == [1, 1]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        with pytest.raises(PrecisionError):
            newton_polygon([Valuation(0), Valuation.at_least(5)])


def test_u_matrix_structure():
    g = g_kappa(KAPPA0, 24)
    U = u_matrix_gf(KAPPA0, 24, g)
    assert U[0, 0] == 1
    assert all(U[i, 0] == g[i] for i in range(24))
    assert all(U[i, 1].is_zero() for i in range(24))
    assert U.zero_pattern_ok()
    assert U.valuation_floor_ok()
    assert unit_part_matches_t_bar(U, 8)
    with pytest.raises(ValueError):
        u_matrix_gf(KAPPA0, 10, g)


@pytest.mark.parametrize("kappa", [KAPPA0, CharacterWeight(27, 1)])
def test_matrix_routes_agree(kappa):
    A = u_matrix_gf(kappa, 12)
    B = u_matrix_qspace(kappa, 12)
    assert all(A[i, j] == B[i, j] for i in range(12) for j in range(12))
    assert B.zero_pattern_ok()


def test_char_series_guard():
    U = u_matrix_gf(KAPPA0, 9)
    with pytest.raises(ValueError):
        char_series(U, 4)


def test_b_alpha_by_two_routes():
    U = u_matrix_gf(KAPPA0, 12)
    sub = [row[:9] for row in U.entries[:9]]
    a = char_series(sub, 3)
    b = char_series_by_minors(sub, 3)
    assert list(a.coeffs) == list(b.coeffs)


@pytest.mark.parametrize("kappa,alpha_max", [(KAPPA0, 5), (CharacterWeight(27, 1), 4)])
def test_computed_valuations(kappa, alpha_max):
    # the computed characteristic series has v(b_alpha) = v * alpha * (alpha - 1)
    report = slopes(kappa, alpha_max)
    v = kappa.v
    assert report.b_valuations == [v * a * (a - 1) for a in range(alpha_max + 1)]
    assert report.slopes == [2 * v * k for k in range(alpha_max)]
    assert report.common_difference == 2 * v
    assert report.stable
    assert all(m == 1 for _, m in report.polygon.segments)


def test_slope_report_schema():
    d = slopes(KAPPA0, 3).to_dict()
    for key in ("kappa", "v", "beta", "alpha_max", "b_valuations", "vertices", "slopes", "stable", "precision_remaining"):
        assert key in d
    assert d["v"] == {"num": 1, "den": 2}
    assert d["b_valuations"][2] == {"alpha": 2, "num": 1, "den": 1}


def test_slopes_validates_beta():
    with pytest.raises(ValueError):
        slopes(KAPPA0, 8, 24)
    with pytest.raises(ValueError):
        slopes(KAPPA0, 2, 10)


def test_precision_exhaustion_suggests_larger_N():
    with pytest.raises(PrecisionExhausted) as info:
        slopes(KAPPA0, 8, 27, 20)
    assert info.value.suggested_N > 20


def test_strip_lemma_random_matrices():
    suite = strip_lemma_property(2, trials=25, seed=3)
    assert suite.passed, suite.first_failure()


def test_strip_lemma_trivial_cases():
    ring = make_ring(1, 20)
    n = 6
    A = [[ring.zero] * n for _ in range(n)]
    A[0][0] = ring.one
    assert valuation(char_series_by_minors(A, 1)[1]) == 0
    B = [[ring(3) * ring.random_element(random.Random(i)) if j % 3 == 0 else ring.zero for j in range(n)] for i in range(n)]
    assert valuation(char_series_by_minors(B, 1)[1]).value >= 1
    with pytest.raises(ValueError):
        strip_lemma_property(4)


def _char_series_in_f_basis(kappa, beta, N, alpha_max):
    # U on the basis V(E) (w0 f)^j, computed literally in q-space; no generating function
    P = 3 * beta
    E = eisenstein_character(kappa, P, N)
    ring = E.ring
    VE, VE_inv = v_op(E, P), v_op(E, beta).inverse()
    f, w0 = f_qexp(P), kappa.w0(ring)
    A = [[ring.zero] * beta for _ in range(beta)]
    fj = PowSeries.monomial(0, P)
    for j in range(beta):
        h = qexp_to_f(u_op(VE * fj) * VE_inv, beta)
        for i in range(beta):
            A[i][j] = h[i] * w0 ** (j - i) if i <= j else ring.divide(h[i], w0 ** (i - j))
        fj = fj * f
    return char_series(A, alpha_max)


@pytest.mark.parametrize("kappa", [KAPPA0, CharacterWeight(27, 1)])
def test_f_basis_gives_the_same_valuations(kappa):
    other = _char_series_in_f_basis(kappa, 15, 48, 4)
    report = slopes(kappa, 4, 15, 48)
    assert [v.value for v in other.valuations] == report.b_valuations
