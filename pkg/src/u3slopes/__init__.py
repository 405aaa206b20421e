"""Exact 3-adic computation of U-operator slopes at finite-order weights near
the boundary of weight space, with the supporting identities as checks."""

from .forms import (
    KAPPA0,
    CharacterWeight,
    IntegralityError,
    InvalidWeightError,
    eisenstein_character,
    eisenstein_classical,
    f_qexp,
    g_kappa,
    qexp_to_y,
    theta_qexp,
    y_qexp,
)
from .padic import CycElt, CycRing, PrecisionError, Valuation, make_ring, residue, valuation
from .report import Check, Suite
from .residue import F3Series, det_tbar, g_bar, r_series
from .series import PowSeries, compose, reversion, sigma_op, u_op, v_op
from .spectral import (
    CharSeries,
    NewtonPolygon,
    PrecisionExhausted,
    SlopeReport,
    UMatrix,
    char_series,
    newton_polygon,
    slopes,
    u_matrix_gf,
    u_matrix_qspace,
)

__version__ = "0.1.0"

__all__ = [
    "char_series",
    "CharacterWeight",
    "CharSeries",
    "Check",
    "compose",
    "CycElt",
    "CycRing",
    "det_tbar",
    "eisenstein_character",
    "eisenstein_classical",
    "F3Series",
    "f_qexp",
    "g_bar",
    "g_kappa",
    "IntegralityError",
    "InvalidWeightError",
    "KAPPA0",
    "make_ring",
    "newton_polygon",
    "NewtonPolygon",
    "PowSeries",
    "PrecisionError",
    "PrecisionExhausted",
    "qexp_to_y",
    "r_series",
    "residue",
    "reversion",
    "sigma_op",
    "SlopeReport",
    "slopes",
    "Suite",
    "theta_qexp",
    "u_matrix_gf",
    "u_matrix_qspace",
    "u_op",
    "UMatrix",
    "v_op",
    "Valuation",
    "valuation",
    "y_qexp",
]
