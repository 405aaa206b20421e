"""Characteristic 3 computations: r(X), the universal reduction g-bar, the
s/t table identity and the determinants of the reduced unit-part matrices."""

from __future__ import annotations

from typing import Iterable, Sequence

from .padic import residue
from .report import Check, Suite
from .series import PowSeries


class F3Series:
    """Truncated power series over F_3, coefficients kept in {0, 1, 2}."""

    __slots__ = ("coeffs", "var")

    def __init__(self, coeffs: Iterable[int], var: str = "X", trunc: int | None = None):
        coeffs = [c % 3 for c in coeffs]
        if trunc is not None:
            coeffs = coeffs[:trunc] + [0] * (trunc - len(coeffs))
        if not coeffs:
            raise ValueError("trunc must be >= 1")
        self.coeffs = tuple(coeffs)
        self.var = var

    @classmethod
    def from_series(cls, g: PowSeries, var: str | None = None) -> "F3Series":
        """Reduction modulo the maximal ideal of a series over Z or a CycRing."""
        if isinstance(g.coeffs[0], int):
            return cls(g.coeffs, var or g.var)
        return cls([residue(c) for c in g.coeffs], var or g.var)

    @property
    def trunc(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, i):
        return self.coeffs[i]

    def __len__(self):
        return len(self.coeffs)

    def __add__(self, other):
        if isinstance(other, int):
            return F3Series((self.coeffs[0] + other,) + self.coeffs[1:], self.var)
        return F3Series([a + b for a, b in zip(self.coeffs, other.coeffs)], self.var)

    __radd__ = __add__

    def __neg__(self):
        return F3Series([-a for a in self.coeffs], self.var)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return F3Series([a * other for a in self.coeffs], self.var)
        M = min(self.trunc, other.trunc)
        out = [0] * M
        b = other.coeffs
        for i, ai in enumerate(self.coeffs[:M]):
            if ai:
                for j in range(M - i):
                    if b[j]:
                        out[i + j] += ai * b[j]
        return F3Series(out, self.var)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = F3Series([1], self.var, trunc=self.trunc)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, F3Series):
            return all(a == b for a, b in zip(self.coeffs, other.coeffs))
        if isinstance(other, int):
            return self.coeffs[0] == other % 3 and not any(self.coeffs[1:])
        return NotImplemented

    __hash__ = None

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def first_nonzero(self) -> int | None:
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return None

    def truncate(self, M: int) -> "F3Series":
        if M > self.trunc:
            raise ValueError("cannot extend a truncated series")
        return F3Series(self.coeffs[:M], self.var)

    def substitute_power(self, k: int, trunc: int | None = None) -> "F3Series":
        """g(X^k); known to k * trunc terms."""
        M = k * self.trunc if trunc is None else trunc
        out = [0] * M
        for i, c in enumerate(self.coeffs):
            if k * i < M:
                out[k * i] = c
        return F3Series(out, self.var)

    def shift_down(self, n: int) -> "F3Series":
        """Exact division by X^n."""
        if any(self.coeffs[:n]):
            raise ArithmeticError(f"series is not divisible by {self.var}^{n}")
        return F3Series(self.coeffs[n:], self.var)

    def shift_up(self, n: int) -> "F3Series":
        return F3Series((0,) * n + self.coeffs[: self.trunc - n], self.var)

    def __repr__(self):
        return f"F3Series[{self.var}, trunc={self.trunc}]{self.coeffs[:12]}"


def r_series(M: int) -> F3Series:
    """r(X) = sum_{m >= 0} X^(3^m)."""
    if M < 2:
        raise ValueError("M must be >= 2")
    out = [0] * M
    p = 1
    while p < M:
        out[p] = 1
        p *= 3
    return F3Series(out)


def g_bar(M: int) -> F3Series:
    """1 - X^-1 r(X^3) - X^-2 (r(X^3) - r(X^3)^2), to M terms.

    The two negative powers cancel because r(X^3) is divisible by X^3.
    """
    if M < 2:
        raise ValueError("M must be >= 2")
    r3 = r_series(M + 2).substitute_power(3, M + 2)
    g = 1 - r3.shift_down(1).truncate(M) - (r3 - r3 * r3).shift_down(2)
    residual = g_bar_cubic(g)
    if not residual.is_zero():
        raise AssertionError(f"g-bar fails its cubic at X^{residual.first_nonzero()}")
    return g


def g_bar_cubic(g: F3Series) -> F3Series:
    """X^3 g^3 + X g^2 + g - 1; vanishes exactly for the universal reduction."""
    return (g**3).shift_up(3) + (g * g).shift_up(1) + g - 1


# --- two-variable tables ---------------------------------------------------
#
# A series in X and Y is a list indexed by the Y-degree of F3Series in X.


def divide_by_one_minus_xy3(cols: Sequence[F3Series], ny: int) -> list[F3Series]:
    """Multiply by 1/(1 - X Y^3) = sum_t X^t Y^(3t), keeping Y-degree < ny."""
    M = cols[0].trunc
    out = [F3Series([0], trunc=M) for _ in range(ny)]
    for j in range(ny):
        for t in range(j // 3 + 1):
            src = j - 3 * t
            if src < len(cols):
                out[j] = out[j] + cols[src].shift_up(t)
    return out


def s_table(M: int) -> list[F3Series]:
    """Y-columns of g-bar(X) / (1 - X Y^3), M terms in each variable."""
    return divide_by_one_minus_xy3([g_bar(M)], M)


def t_columns(M: int) -> list[F3Series]:
    """Y-columns f_j(X) of (1 - r Y + (r^2 - r) Y^2) / (1 - X Y^3)."""
    r = r_series(max(M, 2)).truncate(M)
    return divide_by_one_minus_xy3([F3Series([1], trunc=M), -r, r * r - r], M)


def st_identity_check(M: int) -> Check:
    """t_{i,j} = s_{3i,3j} for all i, j < M // 3."""
    if M < 9:
        raise ValueError("M must be >= 9")
    n = M // 3
    s = s_table(3 * n)
    t = t_columns(n)
    for j in range(n):
        for i in range(n):
            if t[j][i] != s[3 * j][3 * i]:
                return Check("t = s on multiples of 3", False, f"t[{i},{j}] = {t[j][i]} but s[{3*i},{3*j}] = {s[3*j][3*i]}")
    return Check("t = s on multiples of 3", True, f"t_ij = s_(3i,3j) for i, j < {n}")


def t_bar_matrix(alpha: int) -> list[list[int]]:
    """(t_{i,j})_{0 <= i, j < alpha} from T(X, Y) mod (X^alpha, Y^alpha)."""
    cols = t_columns(max(alpha, 1))
    return [[cols[j][i] for j in range(alpha)] for i in range(alpha)]


def det_mod3(A: Sequence[Sequence[int]]) -> int:
    """Determinant over F_3 by Gaussian elimination."""
    A = [[x % 3 for x in row] for row in A]
    n = len(A)
    det = 1
    for k in range(n):
        piv = next((i for i in range(k, n) if A[i][k]), None)
        if piv is None:
            return 0
        if piv != k:
            A[k], A[piv] = A[piv], A[k]
            det = -det
        p = A[k][k]
        det = det * p % 3
        inv = p  # 1 and 2 are self-inverse mod 3
        for i in range(k + 1, n):
            f = A[i][k] * inv % 3
            if f:
                A[i] = [(a - f * b) % 3 for a, b in zip(A[i], A[k])]
    return det % 3


def det_tbar(alpha: int) -> tuple[int, bool]:
    if alpha < 1:
        raise ValueError("alpha must be >= 1")
    d = det_mod3(t_bar_matrix(alpha))
    return d, d != 0


# --- degree pattern of f_n as polynomials in r ------------------------------


def _poly_mul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % 3
    return out


def f_as_poly_in_r(n: int) -> list[int]:
    """f_n written in powers of r using X = r - r^3 (coefficients mod 3)."""
    t, k = divmod(n, 3)
    base = [[1], [0, -1 % 3], [0, 2, 1]][k]  # 1, -r, r^2 - r
    x = [0, 1, 0, 2]  # r - r^3
    out = base
    for _ in range(t):
        out = _poly_mul(out, x)
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def eval_poly_at_r(poly: Sequence[int], M: int) -> F3Series:
    r = r_series(max(M, 2)).truncate(M) if M >= 2 else F3Series([0])
    out = F3Series([0], trunc=M)
    power = F3Series([1], trunc=M)
    for c in poly:
        if c:
            out = out + power * c
        power = power * r
    return out


def degree_pattern_check(n_max: int = 12, M: int = 40) -> Check:
    cols = t_columns(max(M, 3 * (n_max // 3 + 1)))
    for n in range(n_max):
        poly = f_as_poly_in_r(n)
        if len(poly) - 1 != n:
            return Check("f_n degree", False, f"deg f_{n} = {len(poly) - 1}")
        if eval_poly_at_r(poly, M) != cols[n].truncate(M):
            return Check("f_n degree", False, f"f_{n} in powers of r does not match T's Y^{n} column")
    return Check("f_n degree", True, f"deg_r f_n = n for n < {n_max}")


def residue_suite(M: int = 100, alpha_max: int = 24) -> Suite:
    suite = Suite("residue")
    r = r_series(M)
    suite.checks.append(Check("r - r^3 = X", (r - r**3) == F3Series([0, 1], trunc=M), f"to {M} terms", "Frobenius identity for r"))
    g = g_bar(M)
    suite.checks.append(Check("g-bar cubic", g_bar_cubic(g).is_zero(), f"X^3 g^3 + X g^2 + g - 1 = 0 to {M} terms", "g-bar is the unique root of its cubic"))
    suite.checks.append(st_identity_check(81))
    bad = [a for a in range(1, alpha_max + 1) if not det_tbar(a)[1]]
    suite.checks.append(Check("det T-bar", not bad, f"det(T_alpha) != 0 for 1 <= alpha <= {alpha_max}" if not bad else f"zero at alpha={bad}", "reduced unit-part determinants are nonzero"))
    suite.checks.append(degree_pattern_check())
    return suite
