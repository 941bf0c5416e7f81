"""End-to-end acceptance checks.

One test per check, so `pytest -v tests/test_acceptance.py` reads as a
checklist. The replicated tuning-pipeline checks (01, 02) dominate the
runtime and take a few minutes on a single core; everything else is fast.
"""

import time

import numpy as np

from blockgraph import estimation, evaluation, models, selectors, tuning
from blockgraph.cli import main
from blockgraph.estimation import EtaPanel
from blockgraph.seeding import derive_seed, stream
from blockgraph.selectors import EdgeSet, SelectorSolution, design_gram, make_problem
from lp_oracle import brute_lp


def _replicates(spec, n, m_min, reps, seed):
    """Centered estimated panels plus the true edge set, one per replicate."""
    partition = models.make_partition(spec.K, m_min)
    out = []
    for r in range(reps):
        rep_seed = derive_seed(seed, r)
        model = models.make_model(spec, partition)
        H = models.sample_eta_panel(model, n, rep_seed)
        nets = models.sample_networks(H, partition, model.off_diag, rep_seed)
        panel = estimation.assemble_panel(
            nets, partition, estimation.default_truncation(n)
        )
        mu = estimation.estimate_mean_and_beta(panel, model.X).mu_hat
        out.append(
            (estimation.center_panel(panel, mu),
             EdgeSet.from_pairs(model.graph.E))
        )
    return out


def test_01_easy_model_error_rates_within_band():
    # adjacent-pair dependence at the error-table strength (rho = 0.7),
    # K=30 blocks, n=100 networks, smallest blocks of 10 nodes; full tuned
    # pipeline, OR rule, 20 replicates
    config = evaluation.ExperimentConfig(
        cov=models.CovarianceSpec(kind="ar1", K=30, rho=0.7),
        n=100,
        m_min=45,
        replicates=20,
        methods=("lasso", "dantzig", "mu"),
        rules=("OR",),
        seed=0,
        threads=1,
    )
    t0 = time.perf_counter()
    rows = evaluation.run_experiment(config)
    elapsed = time.perf_counter() - t0
    assert len(rows) == 3
    for row in rows:
        print(f"{row.method}: total {100 * row.total_mean:.2f}% "
              f"type2 {100 * row.type2_mean:.2f}%  ({elapsed:.0f}s)")
        assert 0.002 <= row.total_mean <= 0.05, row
        assert row.type2_mean <= 0.03, row
    assert elapsed <= 600.0


def test_02_hard_model_error_rates_within_band():
    # lag-4 dependence is much harder: most longer-range edges are missed
    config = evaluation.ExperimentConfig(
        cov=models.CovarianceSpec(kind="ar4", K=30),
        n=100,
        m_min=45,
        replicates=10,
        methods=("lasso", "dantzig", "mu"),
        rules=("OR",),
        seed=0,
        threads=1,
    )
    rows = evaluation.run_experiment(config)
    assert len(rows) == 3
    for row in rows:
        print(f"{row.method}: total {100 * row.total_mean:.2f}% "
              f"type2 {100 * row.type2_mean:.2f}%")
        assert 0.14 <= row.total_mean <= 0.27, row
        assert 0.50 <= row.type2_mean <= 0.90, row


def test_03_roc_area_grows_with_dependence_strength():
    aucs = {}
    for rho in (0.2, 0.5, 0.8):
        spec = models.CovarianceSpec(kind="ar1", K=15, rho=rho)
        reps = _replicates(spec, n=20, m_min=105, reps=20, seed=11)
        for method in ("lasso", "dantzig", "mu"):
            grid = evaluation.shared_lambda_grid(reps[0][0], method, 30)
            curve = evaluation.roc_points(reps, method, grid, "OR")
            aucs[(method, rho)] = evaluation.roc_auc(curve)
    for method in ("lasso", "dantzig", "mu"):
        a2, a5, a8 = (aucs[(method, r)] for r in (0.2, 0.5, 0.8))
        print(f"{method}: AUC {a2:.3f} < {a5:.3f} < {a8:.3f}")
        assert a8 > a5 > a2, (method, a2, a5, a8)


def test_04_roc_endpoints_at_zero_penalty():
    # overdetermined least squares selects everything: curve reaches (1, 1)
    spec15 = models.CovarianceSpec(kind="ar1", K=15, rho=0.5)
    reps15 = _replicates(spec15, n=20, m_min=105, reps=5, seed=4)
    rows = evaluation.roc_points(reps15, "lasso", [0.0], "OR")
    assert rows[0] == (float("inf"), 0.0, 0.0)
    assert rows[-1][1] == 1.0 and rows[-1][2] == 1.0

    # with more blocks than observations, minimum-L1 interpolation keeps
    # many exact zeros, so the curve terminates strictly left of FPR = 1
    spec30 = models.CovarianceSpec(kind="ar1", K=30, rho=0.5)
    reps30 = _replicates(spec30, n=20, m_min=105, reps=5, seed=4)
    for method in ("dantzig", "mu"):
        rows = evaluation.roc_points(reps30, method, [0.0], "OR")
        print(f"{method} terminal FPR {rows[-1][1]:.3f}")
        assert rows[-1][1] < 0.999, rows[-1]


def test_05_count_covariance_signs_match_latent_covariance():
    config = evaluation.DiagnosticsConfig(
        cov=models.CovarianceSpec(kind="ar1", K=5, rho=0.8),
        seed=0,
        cov_sign_m_min=105,
        cov_sign_networks=5000,
        moments_m_mins=(4,),
        moments_draws=50,
        scaling_m_mins=(3, 6),
        scaling_replicates=3,
        scaling_networks=2,
    )
    report = evaluation.run_diagnostics(config)
    # every pair of this model has |sigma_kl| >= 0.2, so none are skipped
    assert report.cov_sign_skipped == 0
    assert len(report.cov_sign) == 10
    for k, l, sigma, cov_hat, agree in report.cov_sign:
        assert abs(sigma) >= 0.2
        assert agree, (k, l, sigma, cov_hat)
    assert report.cov_sign_all_agree


def test_06_estimate_moments_shrink_with_block_size():
    config = evaluation.DiagnosticsConfig(
        cov=models.CovarianceSpec(kind="ar1", K=3, rho=0.5),
        seed=0,
        beta=np.array([1.0]),  # off-center mean makes the small-m skew visible
        cov_sign_m_min=3,
        cov_sign_networks=20,
        moments_m_mins=(10, 4000),
        moments_draws=2000,
        scaling_m_mins=(3, 6),
        scaling_replicates=3,
        scaling_networks=2,
    )
    report = evaluation.run_diagnostics(config)
    by_m = {m: (skews, kurts) for m, skews, kurts in report.moments}
    skew_small, kurt_small = by_m[10]
    skew_big, kurt_big = by_m[4000]
    print(f"m=4000: |skew| max {max(map(abs, skew_big)):.3f}, "
          f"|exkurt| max {max(map(abs, kurt_big)):.3f}")
    for j in range(3):
        assert abs(skew_big[j]) < 0.15
        assert abs(kurt_big[j]) < 0.30
        assert abs(skew_big[j]) < abs(skew_small[j])
        assert abs(kurt_big[j]) < abs(kurt_small[j])


def test_07_max_error_scales_with_inverse_root_block_size():
    config = evaluation.DiagnosticsConfig(
        cov=models.CovarianceSpec(kind="ar1", K=3, rho=0.5),
        seed=0,
        cov_sign_m_min=3,
        cov_sign_networks=20,
        moments_m_mins=(4,),
        moments_draws=50,
        scaling_m_mins=(105, 1770),  # 16.86x more pairs -> error / ~4.1
        scaling_replicates=200,
        scaling_networks=4,
    )
    report = evaluation.run_diagnostics(config)
    print(f"median max-error ratio {report.scaling_ratio:.3f}")
    assert 2.5 <= report.scaling_ratio <= 6.0


def _random_problem(seed, n, K):
    rng = stream(seed)
    panel = rng.standard_normal((n, K))
    panel = panel - panel.mean(axis=0)
    return make_problem(panel, int(rng.integers(K)))


def test_08_optimizer_oracles():
    # (a) stationarity of the coordinate-descent solutions
    worst_kkt = 0.0
    for i in range(100):
        rng = stream(500 + i)
        K = int(rng.integers(4, 21))
        n = int(rng.integers(K + 5, 80))
        problem = _random_problem(600 + i, n, K)
        _, g = design_gram(problem)
        lam = 0.6 * float(np.abs(g).max())  # 0.3 * lambda_max
        sol = selectors.solve_lasso(problem, lam)
        worst_kkt = max(worst_kkt, selectors.kkt_residual(problem, sol.theta, lam))
    print(f"worst KKT residual {worst_kkt:.2e}")
    assert worst_kkt <= 1e-5

    # (b) LP optimum equals brute-force vertex enumeration
    # (c) the least-squares point is feasible, so the LP is never infeasible
    worst_gap = 0.0
    worst_slack = np.inf
    for seed in range(50):
        problem = _random_problem(700 + seed, n=25, K=4)
        G, g = design_gram(problem)
        X, y = problem.X_design, problem.y
        theta_ls = np.linalg.lstsq(X, y, rcond=None)[0]
        resid_ls = float(np.abs(g - G @ theta_ls).max())
        lam = 0.3 * float(np.abs(g).max())
        for mu in (0.0, lam):
            p = G.shape[0]
            A = np.empty((2 * p, 2 * p))
            A[:p, :p] = G - mu
            A[:p, p:] = -G - mu
            A[p:, :p] = -G - mu
            A[p:, p:] = G - mu
            b = np.concatenate([lam + g, lam - g])
            feasible, best, _ = brute_lp(A, b, np.ones(2 * p))
            assert feasible
            sol = selectors.solve_dantzig_type(problem, lam, mu)
            worst_gap = max(worst_gap, abs(np.abs(sol.theta).sum() - best))
            slack = mu * float(np.abs(theta_ls).sum()) + lam - resid_ls
            worst_slack = min(worst_slack, slack)
        # at lambda = mu = 0 the slack degenerates to the exact-fit residual
        worst_slack = min(worst_slack, -resid_ls)
    print(f"worst LP objective gap {worst_gap:.2e}, "
          f"worst least-squares slack {worst_slack:.2e}")
    assert worst_gap <= 1e-6
    assert worst_slack >= -1e-8


def test_09_results_are_independent_of_thread_count(tmp_path):
    base = [
        "experiment", "--model", "ar1", "--k", "6", "--rho", "0.5",
        "--n", "20", "--m-min", "20", "--replicates", "2",
        "--methods", "lasso,dantzig,mu", "--rules", "OR,AND", "--seed", "7",
    ]
    out1, out2 = tmp_path / "t1", tmp_path / "t2"
    assert main(base + ["--threads", "1", "--out", str(out1)]) == 0
    assert main(base + ["--threads", "3", "--out", str(out2)]) == 0
    r1 = (out1 / "results.csv").read_bytes()
    r2 = (out2 / "results.csv").read_bytes()
    assert r1 == r2


def test_10_penalized_refit_and_flat_score_quartile():
    # (a) the constrained-precision refit hits its matching conditions
    worst = 0.0
    for seed in range(50):
        rng = stream(900 + seed)
        K = int(rng.integers(3, 7))
        pairs = [(a, b) for a in range(K) for b in range(a + 1, K)]
        keep = rng.random(len(pairs)) < 0.4
        support = EdgeSet.from_pairs(
            [pair for pair, kept in zip(pairs, keep) if kept]
        )
        A = rng.standard_normal((K, K))
        S = A @ A.T / K + np.eye(K)
        fit = tuning.refit_precision(support, S, n=50)
        assert fit.converged
        W = np.linalg.inv(fit.D_hat)
        support_set = set(support.edges)
        for a in range(K):
            worst = max(worst, abs(W[a, a] - S[a, a]))
            for b in range(a + 1, K):
                if (a, b) in support_set:
                    worst = max(worst, abs(W[a, b] - S[a, b]))
                else:
                    assert fit.D_hat[a, b] == 0.0
    print(f"worst matching error {worst:.2e}")
    assert worst <= 1e-5

    # (b) an all-zero solution set ties every threshold: the third quartile
    # of the tied grid is returned
    config = tuning.TuningConfig()
    panel = EtaPanel(H_hat=stream(3).standard_normal((40, 5)), T=8.0)
    mu = panel.H_hat.mean(axis=0)
    sols = [
        SelectorSolution(theta=np.zeros(5), a=a, method="lasso", lam=0.1,
                         mu_coef=0.0, diagnostics={})
        for a in range(5)
    ]
    tau, edges = tuning.select_tau(sols, panel, mu, config, "OR")
    assert tau == 0.76  # index ceil(0.75 * 50) = 38 of the 51-point grid
    assert len(edges) == 0
