"""Command-line interface: expansions, verification suites, U-matrices and slopes.

Exit codes: 0 when every check passes, 1 when a mathematical check fails,
2 for configuration or precision errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import forms, lemmas, residue, spectral
from .padic import CycElt, PrecisionError, valuation
from .report import Suite
from .series import PowSeries

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2

FORMS = ("theta", "delta", "f", "y", "E_classical", "E_kappa")
SUITES = ("fund-lemma", "member-lemma", "eisenstein", "residue", "strip-lemma", "properties", "all")


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    conductor: int = 9
    generator_exponent: int = 2
    q_prec: int = 120
    y_prec: int = 60
    alpha_max: int = 8
    beta: int = 27
    precision_N: int | None = None
    output_format: str = "text"
    output_path: str | None = None

    def validate(self):
        if self.q_prec < self.y_prec:
            raise ConfigError(f"q-prec ({self.q_prec}) must be >= y-prec ({self.y_prec})")
        if self.command in ("matrix", "slopes"):
            if self.beta % 3:
                raise ConfigError(f"beta must be a multiple of 3, got {self.beta}")
        if self.command == "slopes" and self.beta < 3 * self.alpha_max + 3:
            raise ConfigError(f"beta must be >= 3*alpha_max + 3 = {3 * self.alpha_max + 3}")
        if self.precision_N is not None and self.precision_N < 4:
            raise ConfigError("precision-N must be >= 4")

    def kappa(self) -> forms.CharacterWeight:
        return forms.CharacterWeight(self.conductor, self.generator_exponent)

    def N(self, kappa: forms.CharacterWeight) -> int:
        return self.precision_N or forms.default_precision(kappa)


def _q(x) -> dict:
    x = Fraction(x)
    return {"num": x.numerator, "den": x.denominator}


def _coeff_record(i: int, c) -> dict:
    if isinstance(c, CycElt):
        return {"exponent": i, "coefficient": str(c), "basis_coeffs": c.centered(), "precision": c.prec}
    return {"exponent": i, "coefficient": str(c), "precision": None}


def _dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _emit(text: str, cfg: RunConfig):
    if cfg.output_path:
        with open(cfg.output_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# --- expand ------------------------------------------------------------------


def _expansion(name: str, terms: int, k: int | None, coords: str, cfg: RunConfig) -> PowSeries:
    M = terms if coords == "q" else max(terms, 2)
    if name == "theta":
        g = forms.theta_qexp(M)
    elif name == "delta":
        g = forms.delta_qexp(max(M, 2))
    elif name == "f":
        g = forms.f_qexp(max(M, 2))
    elif name == "y":
        g = forms.y_qexp(max(M, 2))
    elif name == "E_classical":
        if k is None:
            raise ConfigError("E_classical needs --k")
        try:
            g = forms.eisenstein_classical(k, M)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    elif name == "E_kappa":
        kappa = cfg.kappa()
        g = forms.eisenstein_character(kappa, M, cfg.N(kappa))
    else:
        raise ConfigError(f"unknown form {name!r}; choose from {', '.join(FORMS)}")
    if coords == "y":
        g = forms.qexp_to_y(g, M)
    return g.truncate(terms)


def cmd_expand(args, cfg: RunConfig) -> int:
    if args.terms < 1:
        raise ConfigError("--terms must be >= 1")
    if args.coords == "y" and args.terms > cfg.q_prec:
        raise ConfigError(f"{args.terms} y-terms need q-prec >= {args.terms}")
    g = _expansion(args.form, args.terms, args.k, args.coords, cfg)
    records = [_coeff_record(i, c) for i, c in enumerate(g.coeffs)]
    if cfg.output_format == "json":
        out = _dump_json({"form": args.form, "variable": g.var, "terms": args.terms, "coefficients": records})
    elif cfg.output_format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["exponent", "coefficient", "precision"])
        for r in records:
            w.writerow([r["exponent"], r["coefficient"], "exact" if r["precision"] is None else r["precision"]])
        out = buf.getvalue()
    else:
        out = ", ".join(r["coefficient"] for r in records) + "\n"
    _emit(out, cfg)
    return EXIT_OK


# --- verify ------------------------------------------------------------------


def _run_suites(name: str, cfg: RunConfig, ks: list[int]) -> list[Suite]:
    member_M = max(cfg.y_prec // 2, 2)
    table = {
        "fund-lemma": lambda: [lemmas.fund_lemma_check(max(cfg.q_prec, 100))],
        "member-lemma": lambda: [lemmas.member_lemma_check(k, member_M) for k in ks],
        "eisenstein": lambda: [lemmas.eisenstein_check(), lemmas.f0_cubic_check(max(cfg.y_prec, 10))],
        "residue": lambda: [residue.residue_suite()],
        "strip-lemma": lambda: [spectral.strip_lemma_property(2, trials=100)],
        "properties": lambda: [lemmas.series_property_suite(), lemmas.containment_property()],
    }
    keys = SUITES[:-1] if name == "all" else (name,)
    out = []
    for key in keys:
        try:
            out.extend(table[key]())
        except (ArithmeticError, AssertionError, ValueError) as exc:
            # a broken identity can surface as an exception rather than a mismatch
            crashed = Suite(key)
            crashed.add("suite raised", False, f"{type(exc).__name__}: {exc}")
            out.append(crashed)
    return out


def cmd_verify(args, cfg: RunConfig) -> int:
    ks = [args.k] if args.k is not None else [1, 2, 3, 5]
    suites = _run_suites(args.suite, cfg, ks)
    ok = all(s.passed for s in suites)
    if cfg.output_format == "json":
        out = _dump_json({"passed": ok, "suites": [s.to_dict() for s in suites]})
    elif cfg.output_format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["suite", "check", "passed", "detail", "anchor"])
        for s in suites:
            for c in s.checks:
                w.writerow([s.name, c.name, c.passed, c.detail, c.anchor])
        out = buf.getvalue()
    else:
        lines = []
        for s in suites:
            lines.append(f"== {s.name}")
            lines.extend(c.line() + (f"  ({c.anchor})" if c.anchor else "") for c in s.checks)
        if not ok:
            first = next(s.first_failure() for s in suites if not s.passed)
            lines.append(f"first failure: {first.name}: {first.detail}")
        lines.append("PASS" if ok else "FAIL")
        out = "\n".join(lines) + "\n"
    _emit(out, cfg)
    return EXIT_OK if ok else EXIT_FAIL


# --- matrix ------------------------------------------------------------------


def cmd_matrix(args, cfg: RunConfig) -> int:
    kappa = cfg.kappa()
    N = cfg.N(kappa)
    if args.route == "qspace":
        U = spectral.u_matrix_qspace(kappa, cfg.beta, N)
    else:
        U = spectral.u_matrix_gf(kappa, cfg.beta, N=N)
    ok = U.zero_pattern_ok() and U.valuation_floor_ok()
    n = cfg.beta
    if cfg.output_format == "json":
        vals = [[None if U[i, j].is_zero() else _q(valuation(U[i, j]).value) for j in range(n)] for i in range(n)]
        out = _dump_json(
            {
                "kappa": {"conductor": kappa.conductor, "generator_exponent": kappa.generator_exponent},
                "beta": n,
                "route": args.route,
                "entries": [[_coeff_record(j, U[i, j]) for j in range(n)] for i in range(n)],
                "valuations": vals,
                "zero_pattern_ok": U.zero_pattern_ok(),
                "valuation_floor_ok": U.valuation_floor_ok(),
            }
        )
    elif cfg.output_format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["row", "column", "coefficient", "precision"])
        for i in range(n):
            for j in range(n):
                w.writerow([i, j, str(U[i, j]), U[i, j].prec])
        out = buf.getvalue()
    else:
        # valuations only; '-' marks an entry that is zero at working precision
        lines = [f"valuations of n_ij, conductor {kappa.conductor}, beta {n}"]
        for i in range(n):
            lines.append(" ".join("-" if U[i, j].is_zero() else str(valuation(U[i, j]).value) for j in range(n)))
        lines.append(f"zero pattern: {'ok' if U.zero_pattern_ok() else 'violated'}; valuation floor: {'ok' if U.valuation_floor_ok() else 'violated'}")
        out = "\n".join(lines) + "\n"
    _emit(out, cfg)
    return EXIT_OK if ok else EXIT_FAIL


# --- slopes ------------------------------------------------------------------


def cmd_slopes(args, cfg: RunConfig) -> int:
    kappa = cfg.kappa()
    report = spectral.slopes(kappa, cfg.alpha_max, cfg.beta, cfg.N(kappa))
    ok = report.stable and report.valuations_ok and report.progression_ok
    if cfg.output_format == "json":
        out = _dump_json(report.to_dict())
    elif cfg.output_format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["alpha", "valuation", "slope"])
        slopes = report.slopes
        for a, x in enumerate(report.b_valuations):
            w.writerow([a, str(x), str(slopes[a]) if a < len(slopes) else ""])
        out = buf.getvalue()
    else:
        d = report.common_difference
        lines = [
            f"conductor {kappa.conductor}, generator exponent {kappa.generator_exponent}, v = {report.v}",
            f"beta {report.beta}, alpha_max {report.alpha_max}, precision remaining {report.precision_remaining}",
            "v(b_alpha): " + ", ".join(str(x) for x in report.b_valuations),
            "slopes: " + ", ".join(str(s) for s in report.slopes),
            f"stable between beta and beta+3: {report.stable}",
            f"common difference: {d if d is not None else 'not an arithmetic progression'}",
            f"v(b_alpha) = v alpha(alpha-1)/2: {report.valuations_ok}",
            f"slopes 0, v, 2v, ...: {report.progression_ok}",
        ]
        out = "\n".join(lines) + "\n"
    _emit(out, cfg)
    return EXIT_OK if ok else EXIT_FAIL


# --- argument parsing ----------------------------------------------------------


def _common(p: argparse.ArgumentParser):
    p.add_argument("--conductor", type=int, default=9, help="3-power conductor of the weight character (default 9)")
    p.add_argument("--generator-exponent", type=int, default=2, help="a with kappa(2) = zeta^a (default 2)")
    p.add_argument("--q-prec", type=int, default=120, help="q-expansion precision (default 120)")
    p.add_argument("--y-prec", type=int, default=60, help="y-expansion precision (default 60)")
    p.add_argument("--alpha-max", type=int, default=8)
    p.add_argument("--beta", type=int, default=27, help="matrix truncation, a multiple of 3")
    p.add_argument("--precision-N", type=int, default=None, help="3-adic working precision (default 48, or 64 above conductor 9)")
    p.add_argument("--format", dest="output_format", choices=("json", "csv", "text"), default="text")
    p.add_argument("--output", dest="output_path", default=None, help="write to this path instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="u3slopes", description="3-adic U-slopes near the boundary of weight space")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("expand", help="print a q- or y-expansion")
    p.add_argument("form", choices=FORMS)
    p.add_argument("--terms", type=int, default=10)
    p.add_argument("--k", type=int, default=None, help="weight of E_classical")
    p.add_argument("--coords", choices=("q", "y"), default="q")
    _common(p)

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("--suite", choices=SUITES, default="all")
    p.add_argument("--k", type=int, default=None, help="single weight for the member-lemma suite")
    _common(p)

    p = sub.add_parser("matrix", help="the rescaled matrix of U")
    p.add_argument("--route", choices=("gf", "qspace"), default="gf")
    _common(p)

    p = sub.add_parser("slopes", help="slopes of U from the characteristic series")
    _common(p)
    return parser


COMMANDS = {"expand": cmd_expand, "verify": cmd_verify, "matrix": cmd_matrix, "slopes": cmd_slopes}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    fields = RunConfig.__dataclass_fields__
    cfg = RunConfig(**{k: v for k, v in vars(args).items() if k in fields})
    try:
        cfg.validate()
        return COMMANDS[args.command](args, cfg)
    except spectral.PrecisionExhausted as exc:
        print(f"error: precision exhausted: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ConfigError, forms.InvalidWeightError, PrecisionError, forms.IntegralityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
