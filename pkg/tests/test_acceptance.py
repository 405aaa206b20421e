"""Acceptance gate: one check per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py`` or ``python tests/test_acceptance.py``.
"""

from __future__ import annotations

import sys
import time
from fractions import Fraction

import pytest

from u3slopes.forms import (
    KAPPA0,
    CharacterWeight,
    delta_qexp,
    e_over_ve,
    eisenstein_character,
    f_qexp,
    g_kappa,
    theta_qexp,
    y_qexp,
)
from u3slopes.lemmas import (
    containment_property,
    f0_cubic_check,
    fund_lemma_check,
    member_lemma_check,
    series_property_suite,
)
from u3slopes.residue import F3Series, det_tbar, g_bar, g_bar_cubic, r_series, st_identity_check
from u3slopes.spectral import slopes, strip_lemma_property, u_matrix_gf, u_matrix_qspace

KAPPA27 = CharacterWeight(27, 1)


def _timed(fn):
    t = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t


def _fmt(xs) -> str:
    return ", ".join(str(Fraction(x)) for x in xs)


def criterion_1():
    suite, dt = _timed(lambda: fund_lemma_check(100))
    bad = suite.first_failure()
    ok = bad is None and dt < 10
    return ok, f"{len(suite.checks)} identities to 100 q-terms in {dt:.1f}s" + (f"; {bad.line()}" if bad else "")


def criterion_2():
    R = eisenstein_character(KAPPA0, 5).ring
    w = R.omega
    got = {
        "theta": list(theta_qexp(8).coeffs) == [1, 6, 0, 6, 6, 0, 0, 12],
        "Delta": list(delta_qexp(5).coeffs) == [0, 1, -24, 252, -1472],
        "f": list(f_qexp(5).coeffs) == [0, 1, 12, 90, 508],
        "y": [y_qexp(14)[i] for i in (1, 4, 7, 10, 13)] == [1, -5, 32, -198, 1214],
        "E_kappa0": list(eisenstein_character(KAPPA0, 5).coeffs) == [1, 1 - w, 3, 1 - w, 4 + 2 * w],
        "f0": list(e_over_ve(KAPPA0, 5).coeffs) == [1, 1 - w, 3, 0, 4 + 5 * w],
    }
    bad = [k for k, v in got.items() if not v]
    return not bad, "theta, Delta, f, y, E_kappa0, f0 match" if not bad else f"mismatch in {bad}"


def criterion_3():
    cubic = f0_cubic_check(60)
    gbar_ok = g_bar_cubic(g_bar(100)).is_zero()
    r = r_series(100)
    r_ok = r - r**3 == F3Series([0, 1], trunc=100)
    ok = cubic.passed and gbar_ok and r_ok
    return ok, f"f0 cubic (y and X forms) to 60: {cubic.passed}; reduced cubic to 100: {gbar_ok}; r - r^3 = X to 100: {r_ok}"


def criterion_4():
    target = g_bar(81)
    res = {k.conductor: F3Series.from_series(g_kappa(k, 81)) == target for k in (KAPPA0, KAPPA27)}
    return all(res.values()), f"reduction equals g-bar to 81 terms: conductor 9 {res[9]}, conductor 27 {res[27]}"


def criterion_5():
    def run():
        A = u_matrix_gf(KAPPA0, 12, N=48)
        B = u_matrix_qspace(KAPPA0, 12, N=48)
        return [(i, j) for i in range(12) for j in range(12) if not A[i, j] == B[i, j]]

    bad, dt = _timed(run)
    return not bad and dt < 60, f"gf vs q-space, i, j < 12, N = 48: {len(bad)} mismatches in {dt:.1f}s"


def _main_theorem(kappa, alpha_max, beta, N, limit):
    report, dt = _timed(lambda: slopes(kappa, alpha_max, beta, N))
    v = kappa.v
    want_vals = [v * a * (a - 1) / 2 for a in range(alpha_max + 1)]
    want_slopes = [v * k for k in range(alpha_max)]
    vals_ok = report.b_valuations == want_vals
    slopes_ok = report.polygon.segments == [(s, 1) for s in want_slopes]
    ok = vals_ok and slopes_ok and report.stable and dt < limit
    detail = (
        f"v(b_alpha) = [{_fmt(report.b_valuations)}] (expected [{_fmt(want_vals)}]); "
        f"slopes = [{_fmt(report.slopes)}] (expected [{_fmt(want_slopes)}]); "
        f"stable {report.stable}; {dt:.1f}s"
    )
    return ok, detail


def criterion_6():
    return _main_theorem(KAPPA0, 8, 27, 48, 300)


def criterion_7():
    return _main_theorem(KAPPA27, 6, 21, 64, 600)


def criterion_8():
    def run():
        dets = [det_tbar(a)[1] for a in range(1, 25)]
        return all(dets), st_identity_check(81).passed

    (dets_ok, st_ok), dt = _timed(run)
    return dets_ok and st_ok and dt < 5, f"det(T_alpha) != 0 for alpha <= 24: {dets_ok}; t_ij = s_(3i,3j), i, j < 27: {st_ok}; {dt:.2f}s"


def criterion_9():
    suites = [series_property_suite(trials=100), containment_property(trials=100), strip_lemma_property(2, trials=100)]
    failures = [c for s in suites for c in s.checks if not c.passed]
    names = sum(len(s.checks) for s in suites)
    return not failures, f"{names} properties x 100 trials, failures: {[c.line() for c in failures] or 0}"


def criterion_10():
    suites = [member_lemma_check(k, 30) for k in (1, 2, 3, 5)]
    bad = [s.name + ": " + s.first_failure().line() for s in suites if not s.passed]
    return not bad, "six parts, k in {1, 2, 3, 5}, 30 y-terms" if not bad else "; ".join(bad)


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8, criterion_9, criterion_10]


def _line(n: int, ok: bool, detail: str) -> str:
    return f"[{'PASS' if ok else 'FAIL'}] criterion {n}: {detail}"


@pytest.mark.parametrize("n", range(1, len(CRITERIA) + 1))
def test_criterion(n, capsys):
    ok, detail = CRITERIA[n - 1]()
    with capsys.disabled():
        print("\n" + _line(n, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    results = []
    for n, fn in enumerate(CRITERIA, 1):
        ok, detail = fn()
        print(_line(n, ok, detail), flush=True)
        results.append(ok)
    sys.exit(0 if all(results) else 1)
