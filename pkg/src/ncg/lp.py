"""Exact rational LP maximization for instances with few rows and many columns.

The solver is a two-phase revised simplex in integer arithmetic: the basis
inverse is stored as an integer matrix over the basis determinant and updated
by exact division.  Only the rows (few) shape the basis; the columns (possibly
10^5) are touched once per iteration for pricing.  Candidate columns are
ranked in floating point and every decision is then confirmed exactly, so the
returned optimum is exact.

Ties in the ratio test are broken lexicographically, which prevents cycling;
Bland's rule is available as an alternative.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "LPInstance",
    "SolveResult",
    "MalformedLP",
    "solve_max",
    "check_certificate",
    "dump_rows",
]

SENSES = ("<=", ">=", "=")

# int64 pricing is used only while every product stays below this magnitude
_INT64_SAFE = 2**62


class MalformedLP(ValueError):
    """Raised for instances whose shapes or senses do not line up."""


@dataclass(frozen=True)
class LPInstance:
    """``maximize objective @ x`` subject to ``A x (sense) rhs`` and ``x >= 0``.

    ``A`` is an integer matrix of shape ``(rows, columns)``.  ``rhs`` entries
    may be ints or Fractions.  ``column_names`` is optional metadata carried
    through compression and certificates.
    """

    A: np.ndarray
    senses: tuple[str, ...]
    rhs: tuple[Fraction, ...]
    objective: np.ndarray
    column_names: tuple | None = None
    row_names: tuple | None = None

    @property
    def n_rows(self) -> int:
        return self.A.shape[0]

    @property
    def n_cols(self) -> int:
        return self.A.shape[1]

    def validate(self, require_equality: bool = False) -> None:
        if self.A.ndim != 2:
            raise MalformedLP("constraint matrix must be two-dimensional")
        if not np.issubdtype(self.A.dtype, np.integer):
            raise MalformedLP("constraint matrix must be integer")
        m, n = self.A.shape
        if len(self.senses) != m or len(self.rhs) != m:
            raise MalformedLP(
                f"dimension mismatch: {m} rows, {len(self.senses)} senses, {len(self.rhs)} rhs"
            )
        if self.objective.shape != (n,):
            raise MalformedLP(f"objective has shape {self.objective.shape}, expected ({n},)")
        bad = [s for s in self.senses if s not in SENSES]
        if bad:
            raise MalformedLP(f"unknown constraint sense {bad[0]!r}")
        if self.column_names is not None and len(self.column_names) != n:
            raise MalformedLP("column_names length does not match column count")
        if require_equality and "=" not in self.senses:
            raise MalformedLP("instance has no equality row")


def make_lp(
    A: Sequence[Sequence[int]] | np.ndarray,
    senses: Iterable[str],
    rhs: Iterable,
    objective: Sequence[int] | np.ndarray,
    column_names: Iterable | None = None,
    row_names: Iterable | None = None,
) -> LPInstance:
    """Convenience constructor that normalizes dtypes."""
    A = np.asarray(A, dtype=np.int64)
    if A.ndim == 1:
        A = A.reshape(0, len(objective)) if A.size == 0 else A.reshape(1, -1)
    lp = LPInstance(
        A=A,
        senses=tuple(senses),
        rhs=tuple(Fraction(r) for r in rhs),
        objective=np.asarray(objective, dtype=np.int64),
        column_names=None if column_names is None else tuple(column_names),
        row_names=None if row_names is None else tuple(row_names),
    )
    lp.validate()
    return lp


@dataclass
class SolveResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    optimum: Fraction | float | None = None
    certificate: dict[int, Fraction] = field(default_factory=dict)
    exact: bool = True
    iterations: int = 0

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"


class _RevisedSimplex:
    """State for one exact solve.

    Column layout of the working problem: ``0..n-1`` structural, then one
    logical column per row (slack, surplus or absent), then one artificial
    per row that cannot start with a basic logical.

    The basis inverse is kept fraction-free: ``N = D * B^-1`` with integer
    ``N`` and the integer ``D = +-det(B)``, likewise ``xN = D * x_B``.  A
    pivot on row ``r`` updates ``N`` to ``(a_r N - a N_r) / D`` (exact
    division), which costs a few integer operations per entry instead of
    rational arithmetic with gcds.
    """

    def __init__(self, lp: LPInstance, bland_after: int | None):
        self.lp = lp
        m, n = lp.A.shape
        self.m, self.n = m, n
        self.bland_after = bland_after

        # flip rows so every rhs is nonnegative (rows with rhs 0 and sense >=
        # become <= rows whose slack can start basic), then clear rhs
        # denominators row by row
        sign = np.ones(m, dtype=np.int64)
        scale = np.ones(m, dtype=np.int64)
        senses = list(lp.senses)
        b = []
        for i in range(m):
            r = lp.rhs[i]
            if r < 0 or (r == 0 and senses[i] == ">="):
                sign[i] = -1
                r = -r
                senses[i] = {"<=": ">=", ">=": "<=", "=": "="}[senses[i]]
            scale[i] = r.denominator
            b.append(r.numerator)
        self.A = lp.A * (sign * scale)[:, None]
        self.Af = self.A.astype(float)
        self.senses = senses
        colsum = np.abs(self.A).sum(axis=0) if n else np.zeros(0, dtype=np.int64)
        self.max_colsum = int(colsum.max()) if n else 0

        self.logical_sign = [1 if s == "<=" else (-1 if s == ">=" else 0) for s in senses]
        self.artificial_rows = [i for i in range(m) if senses[i] != "<="]
        self.art_index = {r: n + m + k for k, r in enumerate(self.artificial_rows)}
        self.n_total = n + m + len(self.artificial_rows)

        self.basis: list[int] = [n + i if senses[i] == "<=" else self.art_index[i]
                                 for i in range(m)]
        self.N = np.zeros((m, m), dtype=object)
        for i in range(m):
            self.N[i, i] = 1
        self.D = 1
        self.xN = np.array(b, dtype=object)
        self.iterations = 0
        self.lex_ok = True

    # column access -------------------------------------------------------
    def column(self, j: int) -> dict[int, int]:
        """Sparse integer column of the working matrix."""
        n, m = self.n, self.m
        if j < n:
            col = self.A[:, j]
            return {int(i): int(col[i]) for i in np.flatnonzero(col)}
        if j < n + m:
            r = j - n
            s = self.logical_sign[r]
            return {r: s} if s else {}
        r = self.artificial_rows[j - n - m]
        return {r: 1}

    def ftran(self, col: dict[int, int]) -> np.ndarray:
        """``D * B^-1 a`` for a sparse integer column ``a``."""
        out = np.zeros(self.m, dtype=object)
        for k, v in col.items():
            out = out + self.N[:, k] * v
        return out

    def scaled_duals(self, cost_of) -> np.ndarray:
        """``D * y`` where ``y = c_B B^-1``."""
        y = np.zeros(self.m, dtype=object)
        for i, j in enumerate(self.basis):
            c = cost_of(j)
            if c:
                y = y + self.N[i] * c
        return y

    def pivot(self, r: int, q: int, a: np.ndarray) -> None:
        ar = a[r]
        Nr, xr = self.N[r].copy(), self.xN[r]
        self.N = (self.N * ar - np.outer(a, Nr)) // self.D
        self.N[r] = Nr
        self.xN = (self.xN * ar - a * xr) // self.D
        self.xN[r] = xr
        self.D = ar
        if self.D < 0:
            self.N = -self.N
            self.xN = -self.xN
            self.D = -self.D
        self.basis[r] = q
        self.iterations += 1

    def x_basic(self, i: int) -> Fraction:
        return Fraction(self.xN[i], self.D)

    # pricing ---------------------------------------------------------------
    def exact_reduced_costs(self, yD: np.ndarray, cost_vec: np.ndarray | None) -> np.ndarray:
        """``D * (c_j - y a_j)`` for every structural column, exactly."""
        ymax = max((abs(v) for v in yD), default=0)
        cmax = int(np.abs(cost_vec).max()) if cost_vec is not None and self.n else 0
        if ymax * max(self.max_colsum, 1) + self.D * cmax < _INT64_SAFE:
            red = -(yD.astype(np.int64) @ self.A) if self.m else np.zeros(self.n, dtype=np.int64)
            if cost_vec is not None:
                red = red + self.D * cost_vec
        else:
            red = -(yD @ self.A.astype(object))
            if cost_vec is not None:
                red = red + cost_vec.astype(object) * self.D
        return red

    def reduced_cost(self, j: int, yD: np.ndarray, cost_of) -> int:
        col = self.column(j)
        return cost_of(j) * self.D - sum(yD[k] * v for k, v in col.items())

    def choose_entering(self, yD, cost_of, cost_vec, allowed_logical, use_bland) -> int:
        """Entering column with positive reduced cost, or -1 at optimality.

        Dantzig's rule is applied to floating-point reduced costs; the chosen
        column is then confirmed exactly.  Optimality is only declared after
        an exact pass over every column.
        """
        n = self.n
        in_basis = set(self.basis)
        logical = [j for j in range(n, self.n_total)
                   if j not in in_basis and allowed_logical(j) and self.column(j)]
        if not use_bland and n:
            yf = np.array([float(v) for v in yD]) / float(self.D)
            red = -(yf @ self.Af)
            if cost_vec is not None:
                red = red + cost_vec
            red[list(j for j in in_basis if j < n)] = -np.inf
            order = np.argsort(-red, kind="stable")
            for j in order[:32]:
                if red[j] <= 1e-9:
                    break
                if self.reduced_cost(int(j), yD, cost_of) > 0:
                    best_j, best = int(j), red[j]
                    for k in logical:
                        dk = self.reduced_cost(k, yD, cost_of)
                        if dk > 0 and dk / self.D > best:
                            best_j, best = k, dk / self.D
                    return best_j
        # exact pass
        red = self.exact_reduced_costs(yD, cost_vec) if n else np.zeros(0, dtype=np.int64)
        best_j, best = -1, 0
        for j in np.flatnonzero(red > 0):
            j = int(j)
            if j in in_basis:
                continue
            if use_bland:
                best_j = j
                break
            if red[j] > best:
                best_j, best = j, red[j]
        for k in logical:
            if use_bland and best_j >= 0 and best_j < k:
                break
            dk = self.reduced_cost(k, yD, cost_of)
            if dk > 0 and (use_bland or dk > best):
                best_j, best = k, dk
                if use_bland:
                    break
        return best_j

    def break_ties(self, ties: list[int], a: np.ndarray, use_bland: bool) -> list[int]:
        """Resolve a tied ratio test.

        Lexicographic rule: compare the rows of ``B^-1`` scaled by the pivot
        column.  The rows of ``[x_B | B^-1]`` start lexicographically positive
        (the first basis is the identity) and this choice keeps them so, which
        rules out cycling whatever column enters.  Under Bland's rule the
        basic variable with the smallest index leaves instead.
        """
        if use_bland or not self.lex_ok:
            return [min(ties, key=lambda i: self.basis[i])]
        for k in range(self.m):
            vals = {i: Fraction(self.N[i, k], a[i]) for i in ties}
            lo = min(vals.values())
            ties = [i for i in ties if vals[i] == lo]
            if len(ties) == 1:
                break
        return ties

    def iterate(self, cost_of, cost_vec, allowed_logical) -> str:
        """Run simplex pivots until optimal or unbounded for the given costs."""
        degenerate_run = 0
        while True:
            use_bland = self.bland_after is not None and degenerate_run >= self.bland_after
            yD = self.scaled_duals(cost_of)
            q = self.choose_entering(yD, cost_of, cost_vec, allowed_logical, use_bland)
            if q < 0:
                return "optimal"
            a = self.ftran(self.column(q))
            rows = [i for i in range(self.m) if a[i] > 0]
            if not rows:
                return "unbounded"
            ratios = {i: Fraction(self.xN[i], a[i]) for i in rows}
            lo = min(ratios.values())
            ties = [i for i in rows if ratios[i] == lo]
            if len(ties) > 1:
                ties = self.break_ties(ties, a, use_bland)
            degenerate_run = degenerate_run + 1 if lo == 0 else 0
            self.pivot(ties[0], q, a)

    def drive_out_artificials(self) -> None:
        n, m = self.n, self.m
        for r in range(m):
            if self.basis[r] < n + m:
                continue
            in_basis = set(self.basis)
            rowr = self.N[r]
            vals = rowr @ self.A.astype(object) if n else np.array([], dtype=object)
            q = -1
            for j in np.flatnonzero(vals != 0):
                if int(j) not in in_basis:
                    q = int(j)
                    break
            if q < 0:
                for j in range(n, n + m):
                    if j in in_basis:
                        continue
                    col = self.column(j)
                    if col and sum(rowr[k] * v for k, v in col.items()) != 0:
                        q = j
                        break
            if q >= 0:
                a = self.ftran(self.column(q))
                if a[r] < 0:
                    self.lex_ok = False
                self.pivot(r, q, a)
            # otherwise the row is redundant and its artificial stays at zero
        if not self.lex_ok:
            # rows of [x_B | B^-1] may have lost lexicographic positivity;
            # fall back to Bland's rule from here on
            self.bland_after = 0


def solve_max(
    lp: LPInstance,
    mode: str = "exact",
    pivot_rule: str = "lex",
    bland_after: int = 50,
    require_equality: bool = False,
) -> SolveResult:
    """Maximize ``lp.objective @ x``.

    ``mode="exact"`` returns a certified rational optimum.  ``mode="float"``
    delegates to HiGHS through scipy and is for exploration only; its result
    carries ``exact=False``.

    The entering column is the one with the largest reduced cost.  With
    ``pivot_rule="lex"`` ties in the ratio test are broken lexicographically;
    with ``pivot_rule="bland"`` the solver switches to Bland's rule after
    ``bland_after`` consecutive degenerate pivots.  Both terminate.
    """
    if pivot_rule not in ("lex", "bland"):
        raise ValueError(f"unknown pivot rule {pivot_rule!r}")
    lp.validate(require_equality=require_equality)
    if mode == "float":
        return _solve_float(lp)
    if mode != "exact":
        raise ValueError(f"unknown solver mode {mode!r}")

    S = _RevisedSimplex(lp, bland_after if pivot_rule == "bland" else None)
    S.lex_ok = pivot_rule == "lex"
    n, m = S.n, S.m
    first_art = n + m

    if S.artificial_rows:
        phase1_cost = lambda j: -1 if j >= first_art else 0  # noqa: E731
        S.iterate(phase1_cost, None, lambda j: True)
        infeas = sum(S.xN[i] for i in range(m) if S.basis[i] >= first_art)
        if infeas > 0:
            return SolveResult("infeasible", iterations=S.iterations)
        S.drive_out_artificials()

    obj = lp.objective
    cost_of = lambda j: int(obj[j]) if j < n else 0  # noqa: E731
    status = S.iterate(cost_of, obj, lambda j: j < first_art)
    if status == "unbounded":
        return SolveResult("unbounded", iterations=S.iterations)

    cert: dict[int, Fraction] = {}
    for i, j in enumerate(S.basis):
        if j < n and S.xN[i] != 0:
            cert[j] = S.x_basic(i)
    value = sum((int(obj[j]) * v for j, v in cert.items()), Fraction(0))
    return SolveResult("optimal", value, dict(sorted(cert.items())), True, S.iterations)


def _solve_float(lp: LPInstance) -> SolveResult:
    from scipy.optimize import linprog

    A = lp.A.astype(float)
    ub_rows, ub_rhs, eq_rows, eq_rhs = [], [], [], []
    for i, s in enumerate(lp.senses):
        if s == "<=":
            ub_rows.append(A[i]); ub_rhs.append(float(lp.rhs[i]))
        elif s == ">=":
            ub_rows.append(-A[i]); ub_rhs.append(-float(lp.rhs[i]))
        else:
            eq_rows.append(A[i]); eq_rhs.append(float(lp.rhs[i]))
    res = linprog(
        -lp.objective.astype(float),
        A_ub=np.array(ub_rows) if ub_rows else None,
        b_ub=ub_rhs or None,
        A_eq=np.array(eq_rows) if eq_rows else None,
        b_eq=eq_rhs or None,
        bounds=(0, None),
        method="highs",
    )
    if res.status == 2:
        return SolveResult("infeasible", exact=False)
    if res.status == 3:
        return SolveResult("unbounded", exact=False)
    if res.status != 0:
        raise RuntimeError(f"float solver failed: {res.message}")
    cert = {int(j): float(v) for j, v in enumerate(res.x) if abs(v) > 1e-12}
    return SolveResult("optimal", float(-res.fun), cert, exact=False, iterations=int(res.nit))


def check_certificate(lp: LPInstance, result: SolveResult) -> bool:
    """Re-evaluate every row at the certificate in exact arithmetic."""
    if result.status != "optimal" or not result.exact:
        return False
    n = lp.n_cols
    if any(not (0 <= j < n) for j in result.certificate):
        return False
    x = result.certificate
    if any(v < 0 for v in x.values()):
        return False
    for i in range(lp.n_rows):
        row = lp.A[i]
        lhs = sum((int(row[j]) * v for j, v in x.items()), Fraction(0))
        s, b = lp.senses[i], lp.rhs[i]
        if (s == "<=" and lhs > b) or (s == ">=" and lhs < b) or (s == "=" and lhs != b):
            return False
    value = sum((int(lp.objective[j]) * v for j, v in x.items()), Fraction(0))
    return value == result.optimum


def dump_rows(lp: LPInstance) -> str:
    """Plain-text dump, one row per line: ``sense coeffs... rhs``.

    The first line is ``max objective-coeffs...``.
    """
    lines = ["max " + " ".join(str(int(v)) for v in lp.objective)]
    for i in range(lp.n_rows):
        coeffs = " ".join(str(int(v)) for v in lp.A[i])
        lines.append(f"{lp.senses[i]} {coeffs} {lp.rhs[i]}")
    return "\n".join(lines) + "\n"
