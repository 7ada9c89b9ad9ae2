"""Dense-tableau simplex solver with an independent vertex-enumeration oracle.

Problems are small maximizations: max c.x subject to A x <= b with implicit
x >= 0.  The solver is deterministic: the entering column is the most
negative reduced cost (lowest index on ties) and a run of degenerate pivots
switches it to Bland's anti-cycling rule.  :func:`enumerate_vertices`
rebuilds the polytope's vertex set exhaustively from every n-subset of
constraint planes; it shares no code path with the solver and exists to
cross-check it.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

#: Absolute tolerance for feasibility and optimality comparisons.
FEASIBILITY_TOL = 1e-9

_PIVOT_TOL = 1e-9
_MAX_VERTEX_DIM = 8
_RATE_DIM = 6


class SimplexStallError(RuntimeError):
    """Pivoting could not make progress even after the anti-cycling fallback."""


@dataclass(frozen=True)
class RateConstraint:
    """One inequality  coefficients . rates <= bound  over six rate variables."""

    coefficients: tuple[float, ...]
    bound: float
    label: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "coefficients", tuple(float(c) for c in self.coefficients))
        if len(self.coefficients) != _RATE_DIM:
            raise ValueError(f"expected {_RATE_DIM} coefficients, got {len(self.coefficients)}")
        if not math.isfinite(self.bound):
            raise ValueError(f"bound must be finite, got {self.bound!r}")


def rate_constraint(
    pairs: Iterable[tuple[int, int]], bound: float, label: str = ""
) -> RateConstraint:
    """0/1 constraint summing the rates of the given (source, destination) pairs."""
    from .model import pair_index

    coeffs = [0.0] * _RATE_DIM
    for pair in pairs:
        coeffs[pair_index(*pair)] = 1.0
    return RateConstraint(tuple(coeffs), bound, label)


@dataclass(frozen=True)
class LinearProgram:
    """max objective . x  s.t.  rows, x >= 0; every row is (coefficients, upper bound)."""

    objective: tuple[float, ...]
    rows: tuple[tuple[tuple[float, ...], float], ...]
    n: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "objective", tuple(float(c) for c in self.objective))
        object.__setattr__(
            self,
            "rows",
            tuple((tuple(float(a) for a in coeffs), float(b)) for coeffs, b in self.rows),
        )
        if len(self.objective) != self.n:
            raise ValueError("objective length must equal n")
        for coeffs, _ in self.rows:
            if len(coeffs) != self.n:
                raise ValueError("every row must have exactly n coefficients")


@dataclass(frozen=True)
class LpSolution:
    status: str  # "optimal" | "infeasible" | "unbounded"
    point: tuple[float, ...] | None
    value: float | None


def from_rate_constraints(
    constraints: Iterable[RateConstraint],
    objective: Sequence[float] | None = None,
) -> LinearProgram:
    """Assemble a six-variable program; the default objective is the sum rate."""
    obj = tuple(objective) if objective is not None else (1.0,) * _RATE_DIM
    rows = tuple((c.coefficients, c.bound) for c in constraints)
    return LinearProgram(objective=obj, rows=rows, n=_RATE_DIM)


def _arrays(lp: LinearProgram) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    c = np.asarray(lp.objective, dtype=float)
    if lp.rows:
        A = np.asarray([r[0] for r in lp.rows], dtype=float)
        b = np.asarray([r[1] for r in lp.rows], dtype=float)
    else:
        A = np.zeros((0, lp.n))
        b = np.zeros(0)
    return c, A, b


def solve(lp: LinearProgram) -> LpSolution:
    """Optimal basic feasible solution, or infeasible/unbounded status.

    Deterministic: identical inputs take identical pivot sequences.
    """
    status, x, value = solve_arrays(*_arrays(lp))
    point = tuple(float(v) for v in x) if x is not None else None
    return LpSolution(status=status, point=point, value=value)


def max_sum_rate(constraints: Iterable[RateConstraint]) -> float:
    """Maximum sum rate under the given constraints (raises unless optimal)."""
    sol = solve(from_rate_constraints(constraints))
    if sol.status != "optimal":
        raise ArithmeticError(f"rate program unexpectedly {sol.status}")
    return float(sol.value)


def check_feasible(
    lp: LinearProgram, point: Sequence[float], tol: float = FEASIBILITY_TOL
) -> bool:
    """True iff every row and nonnegativity constraint holds within tol."""
    if len(point) != lp.n:
        raise ValueError(f"point has length {len(point)}, expected {lp.n}")
    x = np.asarray(point, dtype=float)
    if (x < -tol).any():
        return False
    _, A, b = _arrays(lp)
    if A.shape[0] == 0:
        return True
    return bool((A @ x <= b + tol).all())


# --------------------------------------------------------------------------
# solver core
# --------------------------------------------------------------------------

def solve_arrays(
    c: np.ndarray,
    A: np.ndarray,
    b: np.ndarray,
    max_iter: int = 10_000,
    degenerate_limit: int = 40,
) -> tuple[str, np.ndarray | None, float | None]:
    """Low-level entry point used by the bound modules (no dataclass overhead)."""
    c = np.asarray(c, dtype=float)
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    m = len(b)
    n = c.size
    if m == 0:
        if (c > _PIVOT_TOL).any():
            return "unbounded", None, math.inf
        return "optimal", np.zeros(n), 0.0

    if (b >= 0).all():
        T, basis = _phase2_tableau(c, A, b)
    else:
        feasible, T, basis = _phase1(c, A, b, max_iter, degenerate_limit)
        if not feasible:
            return "infeasible", None, None

    status = _pivot_loop(T, basis, max_iter, degenerate_limit)
    if status == "unbounded":
        return "unbounded", None, math.inf
    x = np.zeros(n)
    rhs = T[:-1, -1]
    for i, bv in enumerate(basis):
        if bv < n:
            x[bv] = rhs[i]
    return "optimal", x, float(T[-1, -1])


def _phase2_tableau(c: np.ndarray, A: np.ndarray, b: np.ndarray):
    m, n = A.shape
    T = np.zeros((m + 1, n + m + 1))
    T[:m, :n] = A
    T[:m, n : n + m] = np.eye(m)
    T[:m, -1] = b
    T[m, :n] = -c
    basis = np.arange(n, n + m)
    return T, basis


def _phase1(c: np.ndarray, A: np.ndarray, b: np.ndarray, max_iter: int, degenerate_limit: int):
    """Find a basic feasible start with artificial variables; returns (ok, T, basis)."""
    m, n = A.shape
    flip = b < 0
    D = A.copy()
    d = b.copy()
    D[flip] *= -1.0
    d[flip] *= -1.0
    art_rows = np.nonzero(flip)[0]
    na = len(art_rows)

    width = n + m + na + 1
    T = np.zeros((m + 1, width))
    T[:m, :n] = D
    T[:m, -1] = d
    basis = np.zeros(m, dtype=int)
    for i in range(m):
        T[i, n + i] = -1.0 if flip[i] else 1.0
    for k, i in enumerate(art_rows):
        T[i, n + m + k] = 1.0
        basis[i] = n + m + k
    for i in range(m):
        if not flip[i]:
            basis[i] = n + i

    # Phase-1 objective: maximize -(sum of artificials); eliminate basic columns.
    T[m, n + m : n + m + na] = 1.0
    for i in art_rows:
        T[m] -= T[i]
    status = _pivot_loop(T, basis, max_iter, degenerate_limit)
    if status != "optimal" or T[m, -1] < -FEASIBILITY_TOL:
        return False, None, None

    # Drive any artificial still in the basis out of it (it sits at level 0).
    redundant = []
    for i in range(m):
        if basis[i] >= n + m:
            row = T[i, : n + m]
            cand = np.nonzero(np.abs(row) > _PIVOT_TOL)[0]
            if cand.size == 0:
                redundant.append(i)
            else:
                _apply_pivot(T, basis, i, int(cand[0]))
    keep = [i for i in range(m) if i not in redundant]

    T2 = np.zeros((len(keep) + 1, n + m + 1))
    T2[: len(keep), : n + m] = T[keep, : n + m]
    T2[: len(keep), -1] = T[keep, -1]
    basis2 = basis[keep].copy()
    T2[-1, :n] = -c
    for i, bv in enumerate(basis2):
        coef = T2[-1, bv]
        if coef != 0.0:
            T2[-1] -= coef * T2[i]
    return True, T2, basis2


def _apply_pivot(T: np.ndarray, basis: np.ndarray, i: int, j: int) -> None:
    T[i] = T[i] / T[i, j]
    col = T[:, j].copy()
    col[i] = 0.0
    T -= np.outer(col, T[i])
    T[:, j] = 0.0
    T[i, j] = 1.0
    basis[i] = j


def _pivot_loop(T: np.ndarray, basis: np.ndarray, max_iter: int, degenerate_limit: int) -> str:
    m = T.shape[0] - 1
    bland = False
    stalled = 0
    best = T[-1, -1]
    for _ in range(max_iter):
        obj = T[-1, :-1]
        if bland:
            entering = np.nonzero(obj < -_PIVOT_TOL)[0]
            if entering.size == 0:
                return "optimal"
            j = int(entering[0])
        else:
            j = int(np.argmin(obj))
            if obj[j] >= -_PIVOT_TOL:
                return "optimal"
        col = T[:m, j]
        positive = col > _PIVOT_TOL
        if not positive.any():
            return "unbounded"
        ratios = np.where(positive, T[:m, -1] / np.where(positive, col, 1.0), np.inf)
        rmin = ratios.min()
        ties = np.nonzero(ratios <= rmin + 1e-12 * (1.0 + abs(rmin)))[0]
        if bland and ties.size > 1:
            i = int(ties[np.argmin(basis[ties])])
        else:
            i = int(ties[0])
        _apply_pivot(T, basis, i, j)
        if T[-1, -1] > best + 1e-12 * (1.0 + abs(best)):
            best = T[-1, -1]
            stalled = 0
        elif not bland:
            stalled += 1
            if stalled > degenerate_limit:
                bland = True  # anti-cycling fallback; Bland cannot cycle
    raise SimplexStallError("simplex exceeded its pivot budget")


# --------------------------------------------------------------------------
# vertex-enumeration oracle
# --------------------------------------------------------------------------

_combo_cache: dict[tuple[int, int], np.ndarray] = {}


def _combinations(total: int, n: int) -> np.ndarray:
    key = (total, n)
    cached = _combo_cache.get(key)
    if cached is None:
        cached = np.array(list(itertools.combinations(range(total), n)), dtype=int)
        _combo_cache[key] = cached
    return cached


def enumerate_vertices(
    lp: LinearProgram, tol: float = FEASIBILITY_TOL
) -> tuple[list[tuple[float, ...]], float | None]:
    """All basic feasible points from every n-subset of constraint planes.

    Candidate planes are the m inequality rows (taken with equality) and the
    n coordinate planes x_j = 0.  Every nonsingular n-subset is solved and
    kept if the solution is feasible.  Returns the deduplicated vertex list
    (lexicographically sorted) and the objective maximum over it, or None
    when the polytope has no vertex (empty feasible set).

    Guarded to n <= 8; the subset count explodes combinatorially beyond that.
    """
    n = lp.n
    if n > _MAX_VERTEX_DIM:
        raise ValueError(f"vertex enumeration supports n <= {_MAX_VERTEX_DIM}, got {n}")
    c, A, b = _arrays(lp)
    m = A.shape[0]

    planes = np.vstack([A, np.eye(n)]) if m else np.eye(n)
    rhs = np.concatenate([b, np.zeros(n)]) if m else np.zeros(n)
    combos = _combinations(m + n, n)

    mats = planes[combos]
    rhss = rhs[combos]
    with np.errstate(all="ignore"):
        dets = np.linalg.det(mats)
    nonsingular = np.abs(dets) > 1e-10
    if not nonsingular.any():
        return [], None
    pts = np.linalg.solve(mats[nonsingular], rhss[nonsingular][..., None])[..., 0]

    # Discard ill-conditioned solutions the determinant screen let through.
    residual = np.abs(np.einsum("ijk,ik->ij", mats[nonsingular], pts) - rhss[nonsingular])
    pts = pts[residual.max(axis=1) <= 1e-7]
    if pts.size == 0:
        return [], None

    feasible = (pts >= -tol).all(axis=1)
    if m:
        feasible &= (pts @ A.T <= b + tol).all(axis=1)
    pts = pts[feasible]
    if pts.size == 0:
        return [], None

    best = float(np.max(pts @ c))  # from raw points; dedup rounding is cosmetic
    unique = np.unique(np.round(pts, 12), axis=0)
    return [tuple(float(v) for v in row) for row in unique], best
