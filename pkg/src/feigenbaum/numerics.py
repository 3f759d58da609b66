"""Numeric substrate: precision contexts, dense linear algebra, exact
rational elimination, and a dense nonsymmetric eigensolver.

All floating-point work runs on mpmath ``mpf``/``mpc`` scalars inside a
:class:`PrecisionCtx`.  Matrices are plain lists of rows; mpmath's
``matrix`` type appears only at the eigensolver boundary.  Exact work
uses ``fractions.Fraction``.

Everything here is a pure function of its inputs given a context, so
values can move freely between threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath import mp

from .errors import ExactlySingular, NoConvergence, SingularMatrix

GUARD_BITS = 32

# LU pivot-to-norm ratio below which a Jacobian is treated as structurally
# degenerate (solution family present) rather than merely ill-conditioned.
DEGENERACY_RATIO = 1e-12


class PrecisionCtx:
    """Working-precision descriptor.

    ``decimal_digits`` is the number of decimal digits all reported
    quantities are carried to; the binary working precision adds
    :data:`GUARD_BITS` guard bits on top of the exact conversion.
    """

    def __init__(self, decimal_digits: int = 64):
        if decimal_digits < 16:
            raise ValueError("decimal_digits must be at least 16")
        self.decimal_digits = int(decimal_digits)
        self.prec_bits = math.ceil(self.decimal_digits * math.log2(10)) + GUARD_BITS

    def activate(self):
        """Context manager switching mpmath to this precision."""
        return mp.workprec(self.prec_bits)

    def mpf(self, x) -> mpmath.mpf:
        with self.activate():
            if isinstance(x, Fraction):
                return mp.mpf(x.numerator) / x.denominator
            return mp.mpf(x)

    def ten_pow(self, e: int) -> mpmath.mpf:
        """10**e at context precision (e may be negative)."""
        with self.activate():
            return mp.mpf(10) ** e

    def to_str(self, x) -> str:
        """Decimal string with ``decimal_digits`` significant digits."""
        with self.activate():
            if isinstance(x, mpmath.mpc):
                if x.imag == 0:
                    x = x.real
                else:
                    return "(%s %s %sj)" % (
                        mp.nstr(x.real, self.decimal_digits, strip_zeros=False),
                        "+" if x.imag >= 0 else "-",
                        mp.nstr(abs(x.imag), self.decimal_digits, strip_zeros=False),
                    )
            return mp.nstr(mp.mpf(x), self.decimal_digits, strip_zeros=False)

    def __repr__(self):
        return "PrecisionCtx(decimal_digits=%d)" % self.decimal_digits

    def __eq__(self, other):
        return (
            isinstance(other, PrecisionCtx)
            and other.decimal_digits == self.decimal_digits
        )

    def __hash__(self):
        return hash(("PrecisionCtx", self.decimal_digits))


def mpf_to_fraction(x) -> Fraction:
    """Exact rational value of an mpf (binary float), as a Fraction."""
    x = mp.mpf(x)
    if x == 0:
        return Fraction(0)
    sign, man, exp, _ = x._mpf_
    man = -man if sign else man
    if exp >= 0:
        return Fraction(man * (1 << exp))
    return Fraction(man, 1 << (-exp))


# ----------------------------------------------------------------------
# Dense linear solves at context precision


def mat_norm_inf(A) -> mpmath.mpf:
    return max(sum(abs(x) for x in row) for row in A) if A else mp.mpf(0)


def vec_norm_inf(v) -> mpmath.mpf:
    return max(abs(x) for x in v) if len(v) else mp.mpf(0)


def identity_rows(n, ctx: PrecisionCtx):
    one, zero = ctx.mpf(1), ctx.mpf(0)
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


@dataclass
class LUFactors:
    """Row-pivoted LU factorization with pivot diagnostics."""

    lu: list
    perm: list
    min_pivot: mpmath.mpf
    norm: mpmath.mpf

    @property
    def pivot_ratio(self) -> mpmath.mpf:
        return self.min_pivot / self.norm if self.norm > 0 else mp.mpf(0)


def lu_factor(A, ctx: PrecisionCtx, pivot_floor=None) -> LUFactors:
    """Partial-pivoted LU of a square matrix (rows of mpf).

    Raises :class:`SingularMatrix` when a pivot falls below
    ``pivot_floor`` (default ``10**(-D+8) * ||A||_inf``), which signals
    either genuine rank loss or a solution family.
    """
    n = len(A)
    with ctx.activate():
        lu = [list(row) for row in A]
        norm = mat_norm_inf(lu)
        if pivot_floor is None:
            pivot_floor = ctx.ten_pow(-ctx.decimal_digits + 8) * norm
        perm = list(range(n))
        min_pivot = mp.inf
        for k in range(n):
            piv, prow = abs(lu[k][k]), k
            for r in range(k + 1, n):
                if abs(lu[r][k]) > piv:
                    piv, prow = abs(lu[r][k]), r
            if piv <= pivot_floor:
                raise SingularMatrix(
                    "pivot %s at column %d below tolerance %s"
                    % (mp.nstr(piv, 5), k, mp.nstr(pivot_floor, 5))
                )
            if prow != k:
                lu[k], lu[prow] = lu[prow], lu[k]
                perm[k], perm[prow] = perm[prow], perm[k]
            if piv < min_pivot:
                min_pivot = piv
            pk = lu[k][k]
            for r in range(k + 1, n):
                f = lu[r][k] / pk
                lu[r][k] = f
                if f:
                    rowr, rowk = lu[r], lu[k]
                    for c in range(k + 1, n):
                        rowr[c] -= f * rowk[c]
        return LUFactors(lu, perm, min_pivot, norm)


def lu_solve_factored(fac: LUFactors, b, ctx: PrecisionCtx):
    n = len(fac.lu)
    with ctx.activate():
        y = [b[fac.perm[i]] for i in range(n)]
        for i in range(n):
            row = fac.lu[i]
            y[i] -= sum(row[j] * y[j] for j in range(i))
        x = y
        for i in range(n - 1, -1, -1):
            row = fac.lu[i]
            x[i] = (x[i] - sum(row[j] * x[j] for j in range(i + 1, n))) / row[i]
        return x


def solve_linear(A, b, ctx: PrecisionCtx):
    """Solve A x = b by pivoted elimination at context precision."""
    if len(A) != len(b) or any(len(row) != len(A) for row in A):
        raise ValueError("solve_linear needs a square system")
    return lu_solve_factored(lu_factor(A, ctx), list(b), ctx)


# ----------------------------------------------------------------------
# Exact rational solve (fraction-free elimination)


def solve_linear_exact(A, B):
    """Solve A X = B exactly over the rationals.

    Rows are scaled to integers, eliminated fraction-free (Bareiss), and
    back-substituted in Fractions, so A X = B holds exactly.  Raises
    :class:`ExactlySingular` when det A = 0.
    """
    n = len(A)
    if any(len(row) != n for row in A):
        raise ValueError("A must be square")
    if len(B) != n:
        raise ValueError("row counts of A and B must agree")
    w = len(B[0])
    M = []
    for i in range(n):
        row = [Fraction(x) for x in A[i]] + [Fraction(x) for x in B[i]]
        scale = math.lcm(*(f.denominator for f in row))
        M.append([int(f * scale) for f in row])

    prev = 1
    for k in range(n):
        prow = next((r for r in range(k, n) if M[r][k] != 0), None)
        if prow is None:
            raise ExactlySingular("zero pivot column %d" % k)
        if prow != k:
            M[k], M[prow] = M[prow], M[k]
            # keep determinant-sign bookkeeping consistent for Bareiss
            for c in range(len(M[k])):
                M[prow][c] = -M[prow][c]
        pk = M[k][k]
        for r in range(k + 1, n):
            mrk = M[r][k]
            rowr, rowk = M[r], M[k]
            for c in range(k + 1, n + w):
                num = rowr[c] * pk - mrk * rowk[c]
                q, rem = divmod(num, prev)
                if rem:
                    raise ArithmeticError("fraction-free division not exact")
                rowr[c] = q
            rowr[k] = 0
        prev = pk

    X = [[Fraction(0)] * w for _ in range(n)]
    for c in range(w):
        for i in range(n - 1, -1, -1):
            s = Fraction(M[i][n + c])
            for j in range(i + 1, n):
                s -= M[i][j] * X[j][c]
            X[i][c] = s / M[i][i]
    return X


# ----------------------------------------------------------------------
# Dense nonsymmetric eigensolver


@dataclass
class EigenPair:
    """One eigenvalue (complex scalar) with its right eigenvector
    (unit sup-norm, largest component rotated to +1) and the residual
    ``||M v - lambda v||_inf``."""

    value: mpmath.mpc
    vector: tuple
    residual: mpmath.mpf


def eig_dense(M, tol, ctx: PrecisionCtx):
    """All eigenpairs of a square matrix, sorted by descending modulus.

    Hessenberg reduction plus shifted QR at context precision (mpmath's
    dense eigensolver), eigenvectors from the Schur factor.  Each pair is
    checked against ``||M v - lambda v||_inf <= tol * ||M||_inf * ||v||_inf``;
    a violation or an exhausted QR budget raises :class:`NoConvergence`.
    """
    n = len(M)
    with ctx.activate():
        tol = mp.mpf(tol)
        if tol <= 0:
            raise ValueError("tol must be positive")
        A = mp.matrix([[mp.mpf(x) for x in row] for row in M])
        norm = mat_norm_inf(M)
        try:
            E, ER = mpmath.eig(A, left=False, right=True)
        except Exception as exc:  # mpmath signals QR stagnation via RuntimeError
            raise NoConvergence("eigensolver failed: %s" % exc) from exc

        pairs = []
        for idx in range(n):
            vec = [ER[i, idx] for i in range(n)]
            big = max(vec, key=abs)
            if abs(big) == 0:
                raise NoConvergence("zero eigenvector", index=idx)
            vec = [v / big for v in vec]
            lam = E[idx]
            res = mp.mpf(0)
            for i in range(n):
                r = abs(sum(A[i, j] * vec[j] for j in range(n)) - lam * vec[i])
                if r > res:
                    res = r
            if norm > 0 and res > tol * norm:
                raise NoConvergence(
                    "eigenpair %d residual %s exceeds tolerance" % (idx, mp.nstr(res, 5)),
                    index=idx,
                )
            pairs.append(EigenPair(lam, tuple(vec), res))

        pairs.sort(key=lambda p: (-abs(p.value), -p.value.real, -p.value.imag))
        return pairs
