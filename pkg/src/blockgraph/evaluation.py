"""Error metrics, ROC curves, the replicated experiment harness, diagnostics.

The experiment harness reproduces the full pipeline per replicate: simulate
networks from a latent block model, build the truncated log-odds panel,
tune lambda per node by cross-validation, solve the chosen selector, pick
the relative threshold tau by BIC, assemble the edge set, and score it
against the true precision pattern.  Replicates run under derived seeds, so
results are byte-identical no matter how many worker threads are used.
"""

from __future__ import annotations

import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import estimation, models, selectors, tuning
from .models import CovarianceSpec, LatentBlockModel, OffDiagSpec
from .seeding import derive_seed
from .selectors import EdgeSet
from .tuning import TuningConfig


@dataclass(frozen=True)
class ErrorReport:
    """type1: selected non-edges / true non-edges; type2: missed edges /
    true edges; total: misclassified pairs / all pairs."""

    type1: float
    type2: float
    total: float


def error_rates(estimated: EdgeSet, truth: EdgeSet, K: int) -> ErrorReport:
    """Classification errors of an estimated edge set (integer counting)."""
    est, tru = estimated.as_set(), truth.as_set()
    for a, b in est | tru:
        if not (0 <= a < b < K):
            raise ValueError(f"pair ({a},{b}) outside 0..{K - 1}")
    pairs = K * (K - 1) // 2
    nonedges = pairs - len(tru)
    fp = len(est - tru)
    fn = len(tru - est)
    return ErrorReport(
        type1=fp / nonedges if nonedges else 0.0,
        type2=fn / len(tru) if tru else 0.0,
        total=(fp + fn) / pairs,
    )


# ---------------------------------------------------------------------------
# ROC curves


def _support_curve(centered: np.ndarray, method: str, lam_grid, rule: str):
    """Per-lambda (fpr-numerator sets) for one replicate's centered panel.

    Returns a list of EdgeSets, one per lambda in grid order.  Lasso runs a
    warm-started path per node; the LP methods solve each lambda afresh.
    """
    n, K = centered.shape
    per_lambda_nbhd = [[] for _ in lam_grid]
    for a in range(K):
        problem = selectors.make_problem(centered, a)
        if method == "lasso":
            thetas = selectors.lasso_path(problem, lam_grid)
        else:
            G, g = selectors.design_gram(problem)
            thetas = [
                selectors.solve_dantzig_compact(
                    G, g, float(lam), float(lam) if method == "mu" else 0.0,
                    max_pivots=10 * K**2,
                )
                for lam in lam_grid
            ]
        for i, theta_c in enumerate(thetas):
            sup = problem.index_map[np.abs(theta_c) > selectors.SUPPORT_TOL]
            per_lambda_nbhd[i].append(np.sort(sup))
    return [selectors.assemble_edge_set(nbhds, rule) for nbhds in per_lambda_nbhd]


def roc_points(replicates, method: str, lam_grid, rule: str = "OR"):
    """Average (FPR, TPR) per lambda over replicates.

    `replicates` is a sequence of (centered_panel, truth_edge_set) pairs.
    Returns rows (lambda, fpr, tpr) sorted by FPR, starting with the
    lambda -> infinity endpoint (0, 0).
    """
    lam_grid = np.asarray(list(lam_grid), dtype=float)
    if lam_grid.size == 0:
        raise ValueError("lambda grid must be nonempty")
    fpr = np.zeros(lam_grid.size)
    tpr = np.zeros(lam_grid.size)
    count = 0
    for centered, truth in replicates:
        K = centered.shape[1]
        for i, es in enumerate(_support_curve(centered, method, lam_grid, rule)):
            err = error_rates(es, truth, K)
            fpr[i] += err.type1
            tpr[i] += 1.0 - err.type2
        count += 1
    if count == 0:
        raise ValueError("need at least one replicate")
    fpr /= count
    tpr /= count
    order = np.lexsort((-lam_grid, fpr))  # by FPR, larger lambda first on ties
    rows = [(float("inf"), 0.0, 0.0)]
    rows.extend((float(lam_grid[i]), float(fpr[i]), float(tpr[i])) for i in order)
    return rows


def roc_auc(rows) -> float:
    """Trapezoidal area under (fpr, tpr) rows as returned by roc_points."""
    fpr = np.array([r[1] for r in rows])
    tpr = np.array([r[2] for r in rows])
    return float(np.trapezoid(tpr, fpr))


def shared_lambda_grid(centered: np.ndarray, method: str, size: int) -> np.ndarray:
    """ROC grid from one replicate: log-spaced from the largest lambda_max
    across nodes down to 1% of it, with 0 appended so curves reach their
    terminal point."""
    lam_max = 0.0
    for a in range(centered.shape[1]):
        problem = selectors.make_problem(centered, a)
        grid = tuning.lambda_grid(problem, method, size=2)
        lam_max = max(lam_max, float(grid[0]))
    if lam_max <= 0.0:
        return np.array([0.0])
    if size < 2:
        return np.array([lam_max])
    ratio = 1e-2 ** (1.0 / (size - 2)) if size > 2 else 1.0
    grid = lam_max * ratio ** np.arange(size - 1)
    return np.append(grid, 0.0)


# ---------------------------------------------------------------------------
# Replicated experiments


@dataclass(frozen=True)
class ExperimentConfig:
    cov: CovarianceSpec
    n: int
    m_min: int
    replicates: int
    methods: tuple[str, ...] = ("lasso", "dantzig", "mu")
    rules: tuple[str, ...] = ("OR", "AND")
    tuning: TuningConfig = field(default_factory=TuningConfig)
    seed: int = 0
    mean_known: bool = False
    T: float | None = None              # None: 2 log(max(n, 10))
    X: np.ndarray | None = None
    beta: np.ndarray | None = None
    off_diag: OffDiagSpec = field(default_factory=OffDiagSpec)
    se_scaled: bool = False             # True: report SD/sqrt(replicates)
    threads: int = 1
    progress: bool = False

    def __post_init__(self):
        if self.replicates < 1:
            raise ValueError("need at least one replicate")
        if not self.methods or not self.rules:
            raise ValueError("need at least one method and one rule")
        for m in self.methods:
            if m not in ("lasso", "dantzig", "mu"):
                raise ValueError(f"unknown method {m!r}")
        for r in self.rules:
            if r not in ("AND", "OR"):
                raise ValueError(f"unknown rule {r!r}")


@dataclass(frozen=True)
class ResultRow:
    model: str
    K: int
    n: int
    method: str
    rule: str
    total_mean: float
    total_se: float
    type1_mean: float
    type1_se: float
    type2_mean: float
    type2_se: float


def _build_model(config: ExperimentConfig, rep_seed: int) -> LatentBlockModel:
    partition = models.make_partition(config.cov.K, config.m_min)
    rng = None
    if config.cov.kind == "random":
        # only the random structure is redrawn per replicate
        from .seeding import CH_COVARIANCE, stream

        rng = stream(rep_seed, CH_COVARIANCE)
    return models.make_model(
        config.cov,
        partition,
        X=config.X,
        beta=config.beta,
        off_diag=config.off_diag,
        rng=rng,
    )


def _replicate_errors(config: ExperimentConfig, fixed_model, rep: int):
    """One replicate: errors[(method, rule)] = ErrorReport."""
    rep_seed = derive_seed(config.seed, rep)
    model = fixed_model if fixed_model is not None else _build_model(config, rep_seed)
    truth = EdgeSet.from_pairs(model.graph.E)
    H = models.sample_eta_panel(model, config.n, rep_seed)
    nets = models.sample_networks(H, model.partition, model.off_diag, rep_seed)
    T = config.T if config.T is not None else estimation.default_truncation(config.n)
    panel = estimation.assemble_panel(nets, model.partition, T)
    if config.mean_known:
        mu = model.mu
    else:
        mu = estimation.estimate_mean_and_beta(panel, model.X).mu_hat
    centered = estimation.center_panel(panel, mu)
    K = model.K
    out = {}
    for method in config.methods:
        sols = []
        for a in range(K):
            problem = selectors.make_problem(centered, a)
            lam_a = tuning.cv_select_lambda(problem, method, config.tuning, rep_seed)
            sols.append(selectors.solve_method(problem, method, lam_a))
        for rule in config.rules:
            _, edges = tuning.select_tau(sols, panel, mu, config.tuning, rule)
            out[(method, rule)] = error_rates(edges, truth, K)
    return out


def run_experiment(config: ExperimentConfig) -> list[ResultRow]:
    """Replicated pipeline; one result row per method x rule."""
    fixed_model = None if config.cov.kind == "random" else _build_model(config, 0)
    results: list[dict | None] = [None] * config.replicates

    def work(rep: int):
        try:
            results[rep] = _replicate_errors(config, fixed_model, rep)
        except Exception as exc:
            raise RuntimeError(
                f"replicate {rep} (seed {derive_seed(config.seed, rep)}) failed: {exc}"
            ) from exc
        if config.progress:
            print(f"replicate {rep + 1}/{config.replicates} done", file=sys.stderr, flush=True)

    if config.threads > 1:
        with ThreadPoolExecutor(max_workers=config.threads) as pool:
            list(pool.map(work, range(config.replicates)))
    else:
        for rep in range(config.replicates):
            work(rep)

    rows = []
    for method in config.methods:
        for rule in config.rules:
            reports = [res[(method, rule)] for res in results]
            stats = {}
            for name in ("total", "type1", "type2"):
                vals = np.array([getattr(rep, name) for rep in reports])
                mean = float(vals.mean())
                se = float(vals.std(ddof=1)) if vals.size > 1 else 0.0
                if config.se_scaled:
                    se /= np.sqrt(vals.size)
                stats[name] = (mean, se)
            rows.append(
                ResultRow(
                    model=config.cov.label(),
                    K=config.cov.K,
                    n=config.n,
                    method=method,
                    rule=rule,
                    total_mean=stats["total"][0],
                    total_se=stats["total"][1],
                    type1_mean=stats["type1"][0],
                    type1_se=stats["type1"][1],
                    type2_mean=stats["type2"][0],
                    type2_se=stats["type2"][1],
                )
            )
    return rows


# ---------------------------------------------------------------------------
# Diagnostics: the distributional facts behind the estimator


@dataclass(frozen=True)
class DiagnosticsConfig:
    cov: CovarianceSpec
    seed: int = 0
    X: np.ndarray | None = None
    beta: np.ndarray | None = None
    off_diag: OffDiagSpec = field(default_factory=OffDiagSpec)
    cov_sign_m_min: int = 105
    cov_sign_networks: int = 5000
    cov_sign_floor: float = 0.2          # only check pairs with |sigma_kl| >= floor
    moments_m_mins: tuple[int, ...] = (10, 4000)
    moments_draws: int = 2000
    scaling_m_mins: tuple[int, int] = (105, 1770)
    scaling_replicates: int = 200
    scaling_networks: int = 4

    def __post_init__(self):
        if self.cov.K > 10:
            raise ValueError("diagnostics are Monte Carlo heavy; K must be <= 10")


@dataclass(frozen=True)
class DiagnosticsReport:
    # covariance sign agreement: rows (k, l, sigma_kl, cov_hat, agree)
    cov_sign: tuple[tuple[int, int, float, float, bool], ...]
    cov_sign_all_agree: bool
    cov_sign_skipped: int
    # moments per m_min: (m_min, skew per coordinate, excess kurtosis per coordinate)
    moments: tuple[tuple[int, tuple[float, ...], tuple[float, ...]], ...]
    # max-error scaling: medians at the two m_min levels and their ratio
    scaling_medians: tuple[float, float]
    scaling_ratio: float


def _sample_counts(model: LatentBlockModel, n: int, seed: int) -> np.ndarray:
    """n x K within-block edge counts, one network per latent draw."""
    H = models.sample_eta_panel(model, n, seed)
    nets = models.sample_networks(H, model.partition, model.off_diag, seed)
    return np.vstack(
        [estimation.count_within_edges(net, model.partition) for net in nets]
    )


def _skew_exkurt(x: np.ndarray):
    c = x - x.mean()
    m2 = float(np.mean(c**2))
    m3 = float(np.mean(c**3))
    m4 = float(np.mean(c**4))
    return m3 / m2**1.5, m4 / m2**2 - 3.0


def run_diagnostics(config: DiagnosticsConfig) -> DiagnosticsReport:
    """Monte Carlo checks of the estimator's distributional behavior.

    (i) sign(Cov(S_k, S_l)) should match sign(sigma_kl) for block pairs with
    non-negligible latent covariance; (ii) skewness/excess kurtosis of the
    log-odds estimates shrink as blocks grow; (iii) the max estimation error
    scales like 1/sqrt(m_min), so a 16x block growth divides it by ~4.
    """

    def model_for(m_min: int, rep_seed: int) -> LatentBlockModel:
        partition = models.make_partition(config.cov.K, m_min)
        rng = None
        if config.cov.kind == "random":
            from .seeding import CH_COVARIANCE, stream

            rng = stream(rep_seed, CH_COVARIANCE)
        return models.make_model(
            config.cov, partition, X=config.X, beta=config.beta,
            off_diag=config.off_diag, rng=rng,
        )

    # (i) covariance sign agreement
    seed1 = derive_seed(config.seed, 1)
    model = model_for(config.cov_sign_m_min, seed1)
    S = _sample_counts(model, config.cov_sign_networks, seed1)
    cov_hat = np.cov(S.T)
    rows = []
    skipped = 0
    K = config.cov.K
    for k in range(K):
        for l in range(k + 1, K):
            sig = float(model.Sigma[k, l])
            if abs(sig) < config.cov_sign_floor:
                skipped += 1
                continue
            ch = float(cov_hat[k, l])
            rows.append((k, l, sig, ch, bool(np.sign(ch) == np.sign(sig))))
    all_agree = all(r[4] for r in rows)

    # (ii) moment shrinkage of the log-odds estimates
    moments = []
    for i, m_min in enumerate(config.moments_m_mins):
        seed_i = derive_seed(config.seed, 11 + i)
        mod = model_for(m_min, seed_i)
        H = models.sample_eta_panel(mod, config.moments_draws, seed_i)
        nets = models.sample_networks(H, mod.partition, mod.off_diag, seed_i)
        T = estimation.default_truncation(config.moments_draws)
        panel = estimation.assemble_panel(nets, mod.partition, T)
        skews, kurts = [], []
        for k in range(K):
            sk, ku = _skew_exkurt(panel.H_hat[:, k])
            skews.append(sk)
            kurts.append(ku)
        moments.append((m_min, tuple(skews), tuple(kurts)))

    # (iii) 1/sqrt(m_min) scaling of the max estimation error
    meds = []
    for j, m_min in enumerate(config.scaling_m_mins):
        errs = np.empty(config.scaling_replicates)
        for r in range(config.scaling_replicates):
            seed_r = derive_seed(config.seed, 1000 * (j + 1) + r)
            mod = model_for(m_min, seed_r)
            H = models.sample_eta_panel(mod, config.scaling_networks, seed_r)
            nets = models.sample_networks(H, mod.partition, mod.off_diag, seed_r)
            T = estimation.default_truncation(config.scaling_networks)
            panel = estimation.assemble_panel(nets, mod.partition, T)
            errs[r] = float(np.abs(panel.H_hat - H).max())
        meds.append(float(np.median(errs)))
    ratio = meds[0] / meds[1] if meds[1] > 0 else float("inf")

    return DiagnosticsReport(
        cov_sign=tuple(rows),
        cov_sign_all_agree=all_agree,
        cov_sign_skipped=skipped,
        moments=tuple(moments),
        scaling_medians=(meds[0], meds[1]),
        scaling_ratio=ratio,
    )
