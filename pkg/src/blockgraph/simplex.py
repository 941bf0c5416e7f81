"""Dense two-phase primal simplex for small linear programs.

Solves   min c.x  subject to  A x <= b,  x >= 0   (b of any sign).

Rows with negative right-hand sides are sign-flipped and given artificial
variables; phase 1 minimizes the artificial sum, phase 2 the real cost.
Entering variables follow Bland's rule (lowest eligible index) and ratio-test
ties break toward the lowest basic variable index, which prevents cycling.
The problems this package generates have a few hundred variables at most, so
a dense tableau is the right tool.  The hot loop is numba-compiled; without
numba the same code runs (slowly) as plain Python.
"""

from __future__ import annotations

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a declared dependency
    def njit(*args, **kwargs):
        def wrap(f):
            return f
        return wrap

# Solver statuses.
OPTIMAL = 0
INFEASIBLE = 1
UNBOUNDED = 2
PIVOT_LIMIT = 3

_EPS = 1e-9        # pivot / reduced-cost tolerance
_FEAS_TOL = 1e-8   # phase-1 objective threshold for feasibility
_RAY_TOL = 1e-6    # smallest reduced cost accepted as an unbounded-ray proof


@njit(cache=True, nogil=True)
def _bland_loop(T, basis, active, m, ncols, enter_limit, max_pivots, pivots):
    """Run Bland-rule pivots on tableau T until optimal / unbounded / limit.

    Row m of T is the reduced-cost row with T[m, -1] = -objective.
    Returns (status, pivots).  Status UNBOUNDED / PIVOT_LIMIT / OPTIMAL.
    """
    rhs = ncols - 1
    while True:
        enter = -1
        for j in range(enter_limit):
            if T[m, j] < -_EPS:
                pivotable = False
                for i in range(m):
                    if active[i] and T[i, j] > _EPS:
                        pivotable = True
                        break
                if not pivotable:
                    # A column with no positive entry certifies an unbounded
                    # ray only when its reduced cost is decisively negative;
                    # after many pivots a cost this small is roundoff dust on
                    # a direction the objective cannot actually improve along.
                    if T[m, j] < -_RAY_TOL:
                        return UNBOUNDED, pivots
                    T[m, j] = 0.0
                    continue
                enter = j
                break
        if enter == -1:
            return OPTIMAL, pivots
        if pivots >= max_pivots:
            return PIVOT_LIMIT, pivots
        leave = -1
        best = 0.0
        leave_var = 0
        for i in range(m):
            if not active[i]:
                continue
            a = T[i, enter]
            if a > _EPS:
                ratio = T[i, rhs] / a
                if leave == -1 or ratio < best or (ratio == best and basis[i] < leave_var):
                    best = ratio
                    leave = i
                    leave_var = basis[i]
        if leave == -1:
            return UNBOUNDED, pivots
        piv = T[leave, enter]
        for j in range(ncols):
            T[leave, j] /= piv
        for i in range(m + 1):
            if i == leave:
                continue
            f = T[i, enter]
            if f != 0.0:
                for j in range(ncols):
                    T[i, j] -= f * T[leave, j]
                T[i, enter] = 0.0
        T[leave, enter] = 1.0
        basis[leave] = enter
        pivots += 1


@njit(cache=True, nogil=True)
def _solve_kernel(A, b, c, max_pivots):
    m, nv = A.shape
    n_art = 0
    for i in range(m):
        if b[i] < 0.0:
            n_art += 1
    ncols = nv + m + n_art + 1
    rhs = ncols - 1
    T = np.zeros((m + 1, ncols))
    basis = np.empty(m, dtype=np.int64)
    active = np.ones(m, dtype=np.bool_)
    x = np.zeros(nv)

    k = 0
    for i in range(m):
        s = -1.0 if b[i] < 0.0 else 1.0
        for j in range(nv):
            T[i, j] = s * A[i, j]
        T[i, nv + i] = s
        T[i, rhs] = s * b[i]
        if s < 0.0:
            T[i, nv + m + k] = 1.0
            basis[i] = nv + m + k
            k += 1
        else:
            basis[i] = nv + i

    pivots = 0
    if n_art > 0:
        # Phase 1: reduced costs for min(sum of artificials); artificial
        # columns cost 1 and are exactly the basic ones, so subtract their rows.
        for i in range(m):
            if basis[i] >= nv + m:
                for j in range(ncols):
                    T[m, j] -= T[i, j]
        for i in range(m):
            if basis[i] >= nv + m:
                T[m, basis[i]] += 1.0
        status, pivots = _bland_loop(T, basis, active, m, ncols, nv + m, max_pivots, pivots)
        if status != OPTIMAL:
            return status, x, 0.0, pivots
        if -T[m, rhs] > _FEAS_TOL:
            return INFEASIBLE, x, 0.0, pivots
        # Drive any zero-level artificial out of the basis; a row with no
        # eligible pivot column is a redundant constraint and is dropped.
        for i in range(m):
            if basis[i] >= nv + m:
                enter = -1
                for j in range(nv + m):
                    if abs(T[i, j]) > _EPS:
                        enter = j
                        break
                if enter == -1:
                    active[i] = False
                    continue
                piv = T[i, enter]
                for j in range(ncols):
                    T[i, j] /= piv
                for r in range(m + 1):
                    if r == i:
                        continue
                    f = T[r, enter]
                    if f != 0.0:
                        for j in range(ncols):
                            T[r, j] -= f * T[i, j]
                        T[r, enter] = 0.0
                T[i, enter] = 1.0
                basis[i] = enter
                pivots += 1

    # Phase 2: rebuild the reduced-cost row from the real objective.
    for j in range(ncols):
        T[m, j] = 0.0
    for j in range(nv):
        T[m, j] = c[j]
    for i in range(m):
        if active[i] and basis[i] < nv:
            f = c[basis[i]]
            if f != 0.0:
                for j in range(ncols):
                    T[m, j] -= f * T[i, j]
                T[m, basis[i]] = 0.0
    status, pivots = _bland_loop(T, basis, active, m, ncols, nv + m, max_pivots, pivots)
    if status != OPTIMAL:
        return status, x, 0.0, pivots

    for i in range(m):
        if active[i] and basis[i] < nv:
            x[basis[i]] = T[i, rhs]
    return OPTIMAL, x, -T[m, rhs], pivots


def solve(A: np.ndarray, b: np.ndarray, c: np.ndarray,
          max_pivots: int | None = None):
    """Minimize c.x subject to A x <= b, x >= 0.

    Returns (status, x, objective, pivots).  x is meaningful only when
    status == OPTIMAL.  max_pivots defaults to a generous budget derived
    from the tableau size; Bland's rule guarantees termination regardless.
    """
    A = np.ascontiguousarray(A, dtype=np.float64)
    b = np.ascontiguousarray(b, dtype=np.float64)
    c = np.ascontiguousarray(c, dtype=np.float64)
    if A.ndim != 2 or A.shape != (b.shape[0], c.shape[0]):
        raise ValueError("inconsistent LP dimensions")
    if max_pivots is None:
        max_pivots = 50 * (A.shape[0] + c.shape[0] + 1) ** 2
    status, x, obj, pivots = _solve_kernel(A, b, c, int(max_pivots))
    return int(status), x, float(obj), int(pivots)
