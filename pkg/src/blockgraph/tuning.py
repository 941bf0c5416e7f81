"""Data-driven penalty selection: cross-validated lambda, BIC-selected tau.

lambda is chosen per node by K-fold cross-validation of squared prediction
error over a log-spaced grid.  tau (the relative threshold applied to the
fitted coefficient vectors) is chosen by a Gaussian BIC whose precision
matrix is refit under the candidate edge set's zero pattern by iterative
proportional scaling.  When the BIC is flat across most of the tau grid --
which happens whenever thresholding stops changing the selected graph --
the third quartile of the tied grid values is returned instead of an
arbitrary endpoint.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .estimation import EtaPanel, center_panel
from .seeding import CH_CV_BASE, stream
from .selectors import (
    EdgeSet,
    SelectorProblem,
    _cd_kernel,
    assemble_edge_set,
    design_gram,
    neighborhoods,
    solve_dantzig_compact,
    threshold_relative,
)

_LOG_2PI = math.log(2.0 * math.pi)


def default_tau_grid(step: float = 0.02) -> tuple[float, ...]:
    """0, step, 2*step, ..., 1 (inclusive, rounded to the decimal values)."""
    count = int(round(1.0 / step))
    return tuple(min(1.0, round(i * step, 12)) for i in range(count + 1))


@dataclass(frozen=True)
class TuningConfig:
    folds: int = 5
    lambda_grid_size: int = 50
    tau_grid: tuple[float, ...] = field(default_factory=default_tau_grid)
    bic_tie_tolerance: float = 1e-8

    def __post_init__(self):
        if self.folds < 2:
            raise ValueError("need at least 2 folds")
        if self.lambda_grid_size < 1 or len(self.tau_grid) < 1:
            raise ValueError("grids must be nonempty")
        if any(not 0.0 <= t <= 1.0 for t in self.tau_grid):
            raise ValueError("tau grid values must lie in [0, 1]")
        if list(self.tau_grid) != sorted(self.tau_grid):
            raise ValueError("tau grid must be sorted ascending")


@dataclass(frozen=True)
class PrecisionFit:
    D_hat: np.ndarray
    support: EdgeSet
    loglik: float
    dim: int
    converged: bool = True
    ridged: bool = False


def lambda_grid(problem: SelectorProblem, method: str, size: int = 50) -> np.ndarray:
    """Descending log-spaced grid from lambda_max down to lambda_max/1000.

    lambda_max is the smallest penalty with an all-zero solution:
    2 |X'y/n|_inf for the lasso, |X'y/n|_inf for the Dantzig family.
    """
    _, g = design_gram(problem)
    lam_max = float(np.abs(g).max()) if g.size else 0.0
    if method == "lasso":
        lam_max *= 2.0
    if lam_max <= 0.0:
        return np.array([0.0])
    if size == 1:
        return np.array([lam_max])
    ratio = 1e-3 ** (1.0 / (size - 1))
    return lam_max * ratio ** np.arange(size)


def cv_select_lambda(
    problem: SelectorProblem, method: str, config: TuningConfig, seed: int
) -> float:
    """Pick lambda from the grid by K-fold cross-validated prediction error.

    Rows are shuffled once (seeded per target node) and split into
    contiguous folds; the summed test loss ||y - X theta||^2 / n_test
    decides, with ties going to the larger (sparser) lambda.
    """
    n = problem.n
    if n < config.folds:
        raise ValueError(f"n={n} is smaller than the fold count {config.folds}")
    grid = lambda_grid(problem, method, config.lambda_grid_size)
    if grid.shape[0] == 1:
        return float(grid[0])
    rng = stream(seed, CH_CV_BASE + problem.a)
    perm = rng.permutation(n)
    losses = np.zeros(grid.shape[0])
    for part in np.array_split(perm, config.folds):
        test = np.zeros(n, dtype=bool)
        test[part] = True
        X_tr, y_tr = problem.X_design[~test], problem.y[~test]
        X_te, y_te = problem.X_design[test], problem.y[test]
        n_tr, n_te = X_tr.shape[0], X_te.shape[0]
        G = X_tr.T @ X_tr / n_tr
        g = X_tr.T @ y_tr / n_tr
        if method == "lasso":
            theta = np.zeros(G.shape[0])
            for i, lam in enumerate(grid):  # descending: warm starts help
                _cd_kernel(G, g, float(lam), theta, 1e-7, 10000)
                r = y_te - X_te @ theta
                losses[i] += (r @ r) / n_te
        else:
            mu_grid = grid if method == "mu" else np.zeros_like(grid)
            for i, lam in enumerate(grid):
                theta = solve_dantzig_compact(
                    G, g, float(lam), float(mu_grid[i]), max_pivots=10 * problem.K**2
                )
                r = y_te - X_te @ theta
                losses[i] += (r @ r) / n_te
    # grid is descending, so the first minimum is the largest tied lambda
    return float(grid[int(np.argmin(losses))])


def _inv2(M: np.ndarray) -> np.ndarray:
    det = M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
    return np.array([[M[1, 1], -M[0, 1]], [-M[1, 0], M[0, 0]]]) / det


def refit_precision(support: EdgeSet, S_emp: np.ndarray, n: int) -> PrecisionFit:
    """Gaussian MLE of the precision matrix under a zero pattern.

    Iterative proportional scaling over the support's 2x2 edge blocks: each
    update forces (D^-1) to match S_emp on one edge block while touching no
    other entry of D, so off-support zeros stay exactly zero and the
    likelihood climbs to the constrained maximum.  At convergence
    (D^-1)_ab = S_emp_ab on support + diagonal.
    """
    S = np.asarray(S_emp, dtype=float)
    K = S.shape[0]
    ridged = False
    try:
        np.linalg.cholesky(S)
    except np.linalg.LinAlgError:
        S = S + (1e-6 * np.trace(S) / K) * np.eye(K)
        ridged = True
    edges = list(support)
    D = np.diag(1.0 / np.diag(S))
    W = np.diag(np.diag(S).copy())  # W tracks D^-1 throughout
    converged = False
    eye2 = np.eye(2)
    for _ in range(200):
        worst = 0.0
        for a, b in edges:
            idx = (a, b)
            W_cc = W[np.ix_(idx, idx)]
            S_cc = S[np.ix_(idx, idx)]
            M = _inv2(S_cc) - _inv2(W_cc)
            step = float(np.abs(M).max())
            if step > worst:
                worst = step
            D[np.ix_(idx, idx)] += M
            # rank-2 downdate of W = D^-1 without inverting M:
            # (D + U M U')^-1 = W - V (I + M W_cc)^-1 M V',  V = W[:, idx]
            V = W[:, idx]
            P = np.linalg.solve(eye2 + M @ W_cc, M)
            W -= V @ P @ V.T
        if edges:
            W = np.linalg.inv(D)  # resync once per sweep against drift
            W = (W + W.T) / 2.0
        if worst <= 1e-6:
            converged = True
            break
    loglik = _gaussian_loglik(D, S, n)
    return PrecisionFit(
        D_hat=D,
        support=support,
        loglik=loglik,
        dim=K + len(edges),
        converged=converged,
        ridged=ridged,
    )


def _gaussian_loglik(D: np.ndarray, S_emp: np.ndarray, n: int) -> float:
    sign, logdet = np.linalg.slogdet(D)
    if sign <= 0:
        raise ValueError("precision matrix is not positive definite")
    K = D.shape[0]
    return 0.5 * n * (logdet - float(np.sum(S_emp * D)) - K * _LOG_2PI)


def gaussian_bic(fit: PrecisionFit, S_emp: np.ndarray, n: int) -> float:
    """BIC(D) = -2 l_n(D) + log(n) (K + |support|)."""
    return -2.0 * _gaussian_loglik(fit.D_hat, np.asarray(S_emp, float), n) + math.log(
        n
    ) * fit.dim


def sample_covariance(panel: EtaPanel, mu: np.ndarray) -> np.ndarray:
    """Covariance of the centered panel with denominator n."""
    C = center_panel(panel, mu)
    return C.T @ C / panel.n


def select_tau(solutions, panel: EtaPanel, mu: np.ndarray, config: TuningConfig, rule: str):
    """BIC scan over the tau grid; returns (tau*, EdgeSet at tau*).

    Each tau thresholds every node's solution relatively, assembles the edge
    set under `rule`, refits the precision matrix on that support, and
    scores it by BIC.  If more than half the grid ties at the minimum
    (within bic_tie_tolerance), the third quartile of the tied taus is
    returned; otherwise the minimizing tau, ties toward larger tau.
    """
    if len(solutions) != panel.K:
        raise ValueError("need one unthresholded solution per node")
    S_emp = sample_covariance(panel, mu)
    n = panel.n
    grid = list(config.tau_grid)
    bics = np.empty(len(grid))
    edge_sets: list[EdgeSet] = []
    cache: dict[tuple, float] = {}
    for i, tau in enumerate(grid):
        nes = neighborhoods([threshold_relative(s, tau) for s in solutions])
        es = assemble_edge_set(nes, rule)
        edge_sets.append(es)
        key = es.edges
        if key not in cache:
            fit = refit_precision(es, S_emp, n)
            cache[key] = gaussian_bic(fit, S_emp, n)
        bics[i] = cache[key]
    b_min = float(bics.min())
    tied = [i for i in range(len(grid)) if bics[i] <= b_min + config.bic_tie_tolerance]
    if len(tied) > len(grid) / 2:
        pick = tied[math.ceil(0.75 * (len(tied) - 1))]
    else:
        pick = tied[-1]  # largest tau among the (tolerance-)minimal ones
    return grid[pick], edge_sets[pick]
