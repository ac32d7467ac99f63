"""Exact linear programming over the rationals.

A two-phase primal simplex on a dense tableau of ``fractions.Fraction``
entries. Bland's pivoting rule is used in both phases, so degenerate programs
terminate without cycling. There is no floating-point code path: coefficients
are validated to be exact (ints, Fractions, or rational strings) and every
result is an exact rational. Optimal solutions are basic feasible solutions,
i.e. vertices of the feasible region.

Programs have the fixed shape

    maximize    objective . x
    subject to  row . x  = rhs   (eq_constraints)
                row . x <= rhs   (ineq_constraints)
                x >= 0

which is exactly what box-polytope problems need; general free variables are
deliberately unsupported.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence

from .rationals import coerce_rational, format_rational

__all__ = [
    "LpStatus",
    "LpValidationError",
    "LinearProgram",
    "LpResult",
    "solve_max",
    "check_feasible",
    "feasible_above",
    "exact_rank",
]

_ZERO = Fraction(0)
_ONE = Fraction(1)


class LpValidationError(ValueError):
    """A malformed program: bad dimensions or inexact coefficient types.

    Distinct from an Infeasible result. Validation failure means the program
    itself is ill-posed, not that its feasible set is empty.
    """


class LpStatus(Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


def as_exact(value) -> Fraction:
    """Coerce to Fraction; floats and junk raise LpValidationError."""
    try:
        return coerce_rational(value)
    except ValueError as exc:
        raise LpValidationError(str(exc)) from exc


@dataclass
class LinearProgram:
    """A rational LP in the fixed maximize / eq / le / nonneg shape.

    Constraints are (row, rhs) pairs; rows must have num_vars entries. All
    coefficients may be ints, Fractions, or rational strings; floats are
    rejected during canonicalization.
    """

    num_vars: int
    objective: Sequence
    eq_constraints: Sequence = ()
    ineq_constraints: Sequence = ()
    nonneg: bool = True

    def canonical(self) -> tuple[list[Fraction], list, list]:
        """Validate and return (objective, eq rows, ineq rows) as Fractions."""
        if not isinstance(self.num_vars, int) or isinstance(self.num_vars, bool) or self.num_vars < 0:
            raise LpValidationError(f"num_vars must be a nonnegative integer, got {self.num_vars!r}")
        if not self.nonneg:
            raise LpValidationError("only nonneg=True programs are supported here")
        objective = [as_exact(v) for v in self.objective]
        if len(objective) != self.num_vars:
            raise LpValidationError(
                f"objective has {len(objective)} entries, expected num_vars={self.num_vars}")
        eq = [self._canonical_row(pair, "eq") for pair in self.eq_constraints]
        ineq = [self._canonical_row(pair, "ineq") for pair in self.ineq_constraints]
        return objective, eq, ineq

    def _canonical_row(self, pair, kind: str) -> tuple[list[Fraction], Fraction]:
        try:
            row, rhs = pair
        except (TypeError, ValueError) as exc:
            raise LpValidationError(f"{kind} constraint must be a (row, rhs) pair, got {pair!r}") from exc
        coeffs = [as_exact(v) for v in row]
        if len(coeffs) != self.num_vars:
            raise LpValidationError(
                f"{kind} row has {len(coeffs)} entries, expected num_vars={self.num_vars}")
        return coeffs, as_exact(rhs)

    def to_json_dict(self) -> dict:
        """Diagnostic JSON form; every rational renders as a "num/den" string."""
        objective, eq, ineq = self.canonical()

        def encode(rows):
            return [
                {"row": [format_rational(c) for c in coeffs], "rhs": format_rational(rhs)}
                for coeffs, rhs in rows
            ]

        return {
            "num_vars": self.num_vars,
            "objective": [format_rational(c) for c in objective],
            "eq_constraints": encode(eq),
            "ineq_constraints": encode(ineq),
            "nonneg": True,
        }


@dataclass(frozen=True)
class LpResult:
    """Solver outcome. value/solution are set only for OPTIMAL status; the
    solution is a basic feasible solution (vertex) of the feasible region."""

    status: LpStatus
    value: Optional[Fraction] = None
    solution: Optional[tuple[Fraction, ...]] = None


class _Simplex:
    """Dense exact tableau. Columns: real variables, slacks, [artificials], rhs."""

    def __init__(self, num_vars: int, eq, ineq):
        self.n = num_vars
        nslack = len(ineq)
        self.width = num_vars + nslack
        self.rows: list[list[Fraction]] = []
        self.basis: list[int] = []
        for coeffs, rhs in eq:
            self.rows.append(coeffs + [_ZERO] * nslack + [rhs])
            self.basis.append(-1)
        for k, (coeffs, rhs) in enumerate(ineq):
            row = coeffs + [_ZERO] * nslack + [rhs]
            row[num_vars + k] = _ONE
            self.rows.append(row)
            self.basis.append(num_vars + k)
        # Flip rows with negative rhs so phase one can start from b >= 0.
        # A flipped slack row loses its basic slack (coefficient becomes -1).
        for i, row in enumerate(self.rows):
            if row[-1] < 0:
                self.rows[i] = [-v for v in row]
                self.basis[i] = -1

    def _pivot(self, r: int, col: int, obj: Optional[list[Fraction]]) -> None:
        row = self.rows[r]
        piv = row[col]
        if piv != 1:
            row = [v / piv for v in row]
            self.rows[r] = row
        for i, other in enumerate(self.rows):
            if i == r:
                continue
            f = other[col]
            if f:
                self.rows[i] = [a - f * b for a, b in zip(other, row)]
        if obj is not None:
            f = obj[col]
            if f:
                obj[:] = [a - f * b for a, b in zip(obj, row)]
        self.basis[r] = col

    def _bland(self, obj: list[Fraction]) -> bool:
        """Pivot until no reduced cost is positive. False means unbounded.

        Bland's rule: entering column is the smallest eligible index; leaving
        row minimizes the ratio, ties broken by smallest basis index. This
        guarantees termination under degeneracy.
        """
        width = self.width
        while True:
            col = -1
            for j in range(width):
                if obj[j] > 0:
                    col = j
                    break
            if col < 0:
                return True
            pick = -1
            best = None
            for i, row in enumerate(self.rows):
                a = row[col]
                if a > 0:
                    key = (row[-1] / a, self.basis[i])
                    if best is None or key < best:
                        best, pick = key, i
            if pick < 0:
                return False
            self._pivot(pick, col, obj)

    def phase_one(self) -> bool:
        """Find a basic feasible solution; False means infeasible.

        Rows without a basic slack get an explicit artificial variable whose
        total is then minimized (no elimination shortcut). Artificials never
        re-enter: the entering scan stops at self.width.
        """
        need = [i for i, b in enumerate(self.basis) if b < 0]
        if not need:
            return True
        for row in self.rows:
            row[-1:-1] = [_ZERO] * len(need)
        for k, i in enumerate(need):
            self.rows[i][self.width + k] = _ONE
            self.basis[i] = self.width + k
        # Phase-one objective: maximize -(sum of artificials). In reduced form
        # over the current basis that is the column-wise sum of the rows that
        # carry artificials (their own columns contribute zero cost).
        obj = [_ZERO] * (self.width + len(need) + 1)
        for i in need:
            row = self.rows[i]
            for j in range(self.width):
                v = row[j]
                if v:
                    obj[j] += v
        self._bland(obj)  # bounded by construction, cannot return False
        residue = _ZERO
        for i, b in enumerate(self.basis):
            if b >= self.width:
                residue += self.rows[i][-1]
        if residue != 0:
            return False
        self._drive_out_artificials()
        for i, row in enumerate(self.rows):
            self.rows[i] = row[: self.width] + [row[-1]]
        return True

    def _drive_out_artificials(self) -> None:
        """Pivot zero-valued artificials out of the basis; redundant rows drop."""
        drop = []
        for i in range(len(self.rows)):
            if self.basis[i] >= self.width:
                row = self.rows[i]
                col = next((j for j in range(self.width) if row[j] != 0), -1)
                if col < 0:
                    drop.append(i)
                else:
                    self._pivot(i, col, None)
        for i in reversed(drop):
            del self.rows[i]
            del self.basis[i]

    def phase_two(self, objective: list[Fraction]) -> bool:
        obj = list(objective) + [_ZERO] * (self.width - self.n) + [_ZERO]
        for i, bcol in enumerate(self.basis):
            f = obj[bcol]
            if f:
                row = self.rows[i]
                obj[:] = [a - f * b for a, b in zip(obj, row)]
        return self._bland(obj)

    def solution(self) -> list[Fraction]:
        x = [_ZERO] * self.n
        for i, bcol in enumerate(self.basis):
            if bcol < self.n:
                x[bcol] = self.rows[i][-1]
        return x


def solve_max(lp: LinearProgram) -> LpResult:
    """Maximize exactly. OPTIMAL results carry an exact value and a vertex
    solution; the value is recomputed as objective . solution, so it satisfies
    the program by substitution."""
    objective, eq, ineq = lp.canonical()
    tab = _Simplex(lp.num_vars, eq, ineq)
    if not tab.phase_one():
        return LpResult(LpStatus.INFEASIBLE)
    if not tab.phase_two(objective):
        return LpResult(LpStatus.UNBOUNDED)
    x = tab.solution()
    value = _ZERO
    for c, v in zip(objective, x):
        if c and v:
            value += c * v
    return LpResult(LpStatus.OPTIMAL, value, tuple(x))


def check_feasible(lp: LinearProgram) -> bool:
    """True iff the constraint set admits any point (phase one only)."""
    _, eq, ineq = lp.canonical()
    return _Simplex(lp.num_vars, eq, ineq).phase_one()


def feasible_above(lp: LinearProgram, bound) -> bool:
    """True iff some feasible point attains objective . x >= bound.

    Duality spot-check helper: after solve_max returns value v, the program
    must be feasible at bound v and infeasible at v + eps for any eps > 0.
    """
    objective, eq, ineq = lp.canonical()
    cut = ([-c for c in objective], -as_exact(bound))
    probe = LinearProgram(lp.num_vars, objective, eq, ineq + [cut])
    return check_feasible(probe)


def exact_rank(rows) -> int:
    """Rank of a rational matrix, by incremental exact elimination.

    Each incoming row is reduced against the echelon basis accumulated so
    far; a nonzero remainder joins the basis. Cost scales with rank, not with
    the row count squared.
    """
    basis: list[list[Fraction]] = []
    lead: list[int] = []
    width = None
    for raw in rows:
        vec = [as_exact(v) for v in raw]
        if width is None:
            width = len(vec)
        elif len(vec) != width:
            raise LpValidationError("ragged matrix: rows differ in length")
        for prow, lj in zip(basis, lead):
            f = vec[lj]
            if f:
                vec = [a - f * b for a, b in zip(vec, prow)]
        j = next((k for k, v in enumerate(vec) if v != 0), -1)
        if j >= 0:
            piv = vec[j]
            if piv != 1:
                vec = [v / piv for v in vec]
            basis.append(vec)
            lead.append(j)
    return len(basis)
