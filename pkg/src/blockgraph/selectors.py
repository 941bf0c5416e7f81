"""Per-node neighborhood selection under estimation uncertainty.

Each node a of the centered log-odds panel is regressed on all other nodes.
Three selectors are supported:

  lasso    argmin_theta  n^-1 ||y - X theta||^2 + lambda ||theta||_1
  dantzig  argmin ||theta||_1  s.t.  |n^-1 X'(y - X theta)|_inf <= lambda
  mu       as dantzig but with the bound  mu_coef ||theta||_1 + lambda,
           which compensates for noise in the design matrix itself

The Dantzig/mu constraint family is affine in ||theta||_1, so both reduce to
one linear program in the split theta = u - v (u, v >= 0) with 2(K-1)
variables and 2(K-1) inequality rows.  Feasibility always holds because the
pseudoinverse least-squares point has exactly zero correlation residual.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a declared dependency
    def njit(*args, **kwargs):
        def wrap(f):
            return f
        return wrap

from . import simplex

# Coefficients at or below this magnitude do not count as selected.
SUPPORT_TOL = 1e-10

CD_TOL = 1e-7          # max coefficient change per sweep at convergence
CD_MAX_SWEEPS = 10000
KKT_TOL = 1e-5
FEAS_TOL = 1e-8


@dataclass(frozen=True)
class SelectorProblem:
    """One node's regression: column a of the centered panel on the rest."""

    a: int                    # target node, 0-based
    y: np.ndarray             # n-vector, centered column a
    X_design: np.ndarray      # n x (K-1), remaining centered columns
    index_map: np.ndarray     # design column j corresponds to node index_map[j]
    n: int
    K: int


@dataclass(frozen=True)
class SelectorSolution:
    """Solution embedded as a K-vector with theta[a] = 0."""

    theta: np.ndarray
    a: int
    method: str               # lasso | dantzig | mu
    lam: float
    mu_coef: float
    diagnostics: dict

    def support(self) -> np.ndarray:
        """Selected neighbor indices of node a (0-based, sorted)."""
        return np.flatnonzero(np.abs(self.theta) > SUPPORT_TOL)


@dataclass(frozen=True)
class EdgeSet:
    """Canonical sorted unordered pairs (a, b) with a < b, 0-based."""

    edges: tuple[tuple[int, int], ...]
    rule: str | None = None

    def __post_init__(self):
        for a, b in self.edges:
            if a >= b:
                raise ValueError(f"edge ({a},{b}) not in canonical a < b order")
        if len(set(self.edges)) != len(self.edges):
            raise ValueError("duplicate edges")

    @staticmethod
    def from_pairs(pairs, rule: str | None = None) -> "EdgeSet":
        canon = {(min(a, b), max(a, b)) for a, b in pairs}
        for a, b in canon:
            if a == b:
                raise ValueError(f"self-pair ({a},{a}) is not an edge")
        return EdgeSet(edges=tuple(sorted(canon)), rule=rule)

    def as_set(self) -> set[tuple[int, int]]:
        return set(self.edges)

    def __len__(self) -> int:
        return len(self.edges)

    def __iter__(self):
        return iter(self.edges)


def make_problem(centered: np.ndarray, a: int) -> SelectorProblem:
    """Split the centered panel into (column a, all other columns)."""
    centered = np.asarray(centered, dtype=float)
    n, K = centered.shape
    if not 0 <= a < K:
        raise ValueError(f"target node {a} out of range for K={K}")
    keep = np.array([j for j in range(K) if j != a])
    return SelectorProblem(
        a=a,
        y=centered[:, a].copy(),
        X_design=centered[:, keep].copy(),
        index_map=keep,
        n=n,
        K=K,
    )


def embed(problem: SelectorProblem, theta_compact: np.ndarray) -> np.ndarray:
    """Place the (K-1)-vector of design coefficients into a K-vector."""
    out = np.zeros(problem.K)
    out[problem.index_map] = theta_compact
    return out


def design_gram(problem: SelectorProblem):
    """G = X'X / n and g = X'y / n, the only statistics the solvers need."""
    X, y, n = problem.X_design, problem.y, problem.n
    return X.T @ X / n, X.T @ y / n


@njit(cache=True, nogil=True)
def _cd_kernel(G, g, lam, theta, tol, max_sweeps):
    """Cyclic coordinate descent on -2 g.theta + theta.G.theta + lam |theta|_1.

    Fixed ascending coordinate order; theta updated in place.  Returns the
    sweep count at convergence (max coefficient change <= tol).
    """
    p = G.shape[0]
    r = g - G @ theta  # maintained residual correlation g - G theta
    half = 0.5 * lam
    for sweep in range(max_sweeps):
        worst = 0.0
        for j in range(p):
            gjj = G[j, j]
            old = theta[j]
            if gjj <= 0.0:
                # dead column (zero in the centered panel): never active
                if old != 0.0:
                    theta[j] = 0.0
                    for i in range(p):
                        r[i] += G[i, j] * old
                continue
            z = r[j] + gjj * old
            if z > half:
                new = (z - half) / gjj
            elif z < -half:
                new = (z + half) / gjj
            else:
                new = 0.0
            d = new - old
            if d != 0.0:
                theta[j] = new
                for i in range(p):
                    r[i] -= G[i, j] * d
                if abs(d) > worst:
                    worst = abs(d)
        if worst <= tol:
            return sweep + 1
    return max_sweeps


def _lasso_compact(G, g, lam, theta0=None):
    theta = np.zeros(G.shape[0]) if theta0 is None else theta0.astype(float).copy()
    sweeps = _cd_kernel(G, g, float(lam), theta, CD_TOL, CD_MAX_SWEEPS)
    return theta, int(sweeps)


def solve_lasso(problem: SelectorProblem, lam: float) -> SelectorSolution:
    """L1-penalized least squares via cyclic coordinate descent."""
    if lam < 0:
        raise ValueError("lambda must be nonnegative")
    if not (np.all(np.isfinite(problem.y)) and np.all(np.isfinite(problem.X_design))):
        raise ValueError("non-finite values in the selection problem")
    G, g = design_gram(problem)
    theta_c, sweeps = _lasso_compact(G, g, lam)
    theta = embed(problem, theta_c)
    return SelectorSolution(
        theta=theta,
        a=problem.a,
        method="lasso",
        lam=float(lam),
        mu_coef=0.0,
        diagnostics={
            "sweeps": sweeps,
            "kkt_residual": kkt_residual(problem, theta, lam),
        },
    )


def lasso_path(problem: SelectorProblem, lambdas) -> list[np.ndarray]:
    """Warm-started coordinate descent along a descending lambda path.

    Returns compact (K-1)-coefficient vectors, one per lambda, in input order.
    """
    G, g = design_gram(problem)
    theta = np.zeros(G.shape[0])
    out = []
    for lam in lambdas:
        _cd_kernel(G, g, float(lam), theta, CD_TOL, CD_MAX_SWEEPS)
        out.append(theta.copy())
    return out


def kkt_residual(problem: SelectorProblem, theta: np.ndarray, lam: float) -> float:
    """Worst violation of the lasso stationarity conditions.

    With G_b = -2 n^-1 <y - X theta, x_b>, a solution must have
    G_b = -sign(theta_b) lambda on the active set and |G_b| <= lambda off it.
    """
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (problem.K,) or abs(theta[problem.a]) > 0:
        raise ValueError("theta must be a K-vector with theta[a] = 0")
    tc = theta[problem.index_map]
    resid = problem.y - problem.X_design @ tc
    grad = -2.0 * (problem.X_design.T @ resid) / problem.n
    worst = 0.0
    for b in range(tc.shape[0]):
        if abs(tc[b]) > SUPPORT_TOL:
            worst = max(worst, abs(grad[b] + np.sign(tc[b]) * lam))
        else:
            worst = max(worst, max(0.0, abs(grad[b]) - lam))
    return worst


def solve_dantzig_compact(
    G: np.ndarray, g: np.ndarray, lam: float, mu_coef: float, max_pivots: int
) -> np.ndarray:
    """Gram-level Dantzig-type solve; returns the (K-1)-coefficient vector.

    minimize sum(u+v) over theta = u - v, u,v >= 0, subject to
    |g - G theta|_inf <= mu_coef * sum(u+v) + lam, i.e. 2p inequality rows.
    """
    p = G.shape[0]
    A = np.empty((2 * p, 2 * p))
    A[:p, :p] = G - mu_coef
    A[:p, p:] = -G - mu_coef
    A[p:, :p] = -G - mu_coef
    A[p:, p:] = G - mu_coef
    b = np.concatenate([lam + g, lam - g])
    c = np.ones(2 * p)
    status, x, _, pivots = simplex.solve(A, b, c, max_pivots=max_pivots)
    if status != simplex.OPTIMAL:
        names = {1: "infeasible", 2: "unbounded", 3: "pivot limit"}
        raise RuntimeError(
            f"dantzig-type LP failed ({names.get(status, status)}): "
            f"lam={lam:g} mu_coef={mu_coef:g} pivots={pivots}"
        )
    theta_c = x[:p] - x[p:]
    theta_c[np.abs(theta_c) <= SUPPORT_TOL] = 0.0
    return theta_c


def solve_dantzig_type(
    problem: SelectorProblem, lam: float, mu_coef: float
) -> SelectorSolution:
    """Minimum-L1 solution with correlation residual <= mu_coef*||theta||_1 + lam.

    mu_coef = 0 is the plain Dantzig selector; mu_coef = lam the mu-selector.
    Solved as an LP over theta = u - v with the simplex module.
    """
    if lam < 0 or mu_coef < 0:
        raise ValueError("lambda and mu_coef must be nonnegative")
    if not (np.all(np.isfinite(problem.y)) and np.all(np.isfinite(problem.X_design))):
        raise ValueError("non-finite values in the selection problem")
    G, g = design_gram(problem)
    theta_c = solve_dantzig_compact(G, g, lam, mu_coef, max_pivots=10 * problem.K**2)
    theta = embed(problem, theta_c)
    l1 = float(np.abs(theta_c).sum())
    resid_corr = float(np.abs(g - G @ theta_c).max()) if theta_c.size else 0.0
    slack = mu_coef * l1 + lam - resid_corr
    return SelectorSolution(
        theta=theta,
        a=problem.a,
        method="mu" if mu_coef > 0 else "dantzig",
        lam=float(lam),
        mu_coef=float(mu_coef),
        diagnostics={"l1_norm": l1, "feasibility_slack": slack},
    )


def solve_method(problem: SelectorProblem, method: str, lam: float) -> SelectorSolution:
    """Dispatch on method name; "mu" couples mu_coef = lam."""
    if method == "lasso":
        return solve_lasso(problem, lam)
    if method == "dantzig":
        return solve_dantzig_type(problem, lam, 0.0)
    if method == "mu":
        return replace(solve_dantzig_type(problem, lam, lam), method="mu")
    raise ValueError(f"unknown method {method!r}")


def threshold_absolute(
    solution: SelectorSolution, t: float, lambda_at_solution: float | None = None
) -> SelectorSolution:
    """Zero coefficients with |theta_b| <= t * lambda_at_solution.

    lambda_at_solution defaults to mu_coef * ||theta~||_1 + lambda evaluated
    at the unthresholded solution.
    """
    if t <= 0:
        raise ValueError("threshold multiplier t must be positive")
    if lambda_at_solution is None:
        lambda_at_solution = (
            solution.mu_coef * float(np.abs(solution.theta).sum()) + solution.lam
        )
    cutoff = t * lambda_at_solution
    theta = solution.theta.copy()
    theta[np.abs(theta) <= cutoff] = 0.0
    return replace(
        solution,
        theta=theta,
        diagnostics=dict(solution.diagnostics, threshold=("absolute", cutoff)),
    )


def threshold_relative(solution: SelectorSolution, tau: float) -> SelectorSolution:
    """Keep theta_b only when |theta_b| / max_k |theta_k| exceeds tau strictly."""
    if not 0.0 <= tau <= 1.0:
        raise ValueError("tau must lie in [0, 1]")
    theta = solution.theta.copy()
    top = np.abs(theta).max()
    if top > 0.0:
        theta[np.abs(theta) <= tau * top] = 0.0
    return replace(
        solution,
        theta=theta,
        diagnostics=dict(solution.diagnostics, threshold=("relative", tau)),
    )


def assemble_edge_set(neighborhoods, rule: str) -> EdgeSet:
    """Combine per-node neighbor lists into an edge set.

    AND keeps (a,b) only when each endpoint selected the other; OR keeps it
    when either did.
    """
    if rule not in ("AND", "OR"):
        raise ValueError(f"rule must be AND or OR, got {rule!r}")
    sets = [set(map(int, ne)) for ne in neighborhoods]
    for a, ne in enumerate(sets):
        if a in ne:
            raise ValueError(f"node {a} lists itself as a neighbor")
    K = len(sets)
    pairs = []
    for a in range(K):
        for b in range(a + 1, K):
            fwd = b in sets[a]
            bwd = a in sets[b]
            if (fwd and bwd) if rule == "AND" else (fwd or bwd):
                pairs.append((a, b))
    return EdgeSet(edges=tuple(pairs), rule=rule)


def neighborhoods(solutions) -> list[np.ndarray]:
    """Per-node supports from a full set of K solutions (index = node)."""
    K = len(solutions)
    out: list[np.ndarray] = [np.empty(0, dtype=int)] * K
    for sol in solutions:
        out[sol.a] = sol.support()
    return out
