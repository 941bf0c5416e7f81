"""Command-line interface.

Subcommands: simulate | estimate | select | tune | experiment | roc | diagnose.
Every value can come from an INI-style config file (--config) with sections
as documented in the README; command-line flags override config keys, and
each run writes the fully resolved configuration to <out>/resolved.cfg so
any run can be replayed bit-identically with --config resolved.cfg.

Exit codes: 0 on success, 2 on parameter validation errors, 1 otherwise.
"""

from __future__ import annotations

import argparse
import configparser
import logging
import os
import sys

import numpy as np

from . import estimation, evaluation, fileio, models, selectors, tuning

log = logging.getLogger("blockgraph")


# ---------------------------------------------------------------------------
# config resolution: defaults < config file < flags


def _load_config(path: str | None) -> configparser.ConfigParser:
    cfg = configparser.ConfigParser()
    if path:
        if not os.path.exists(path):
            raise ValueError(f"config file {path} does not exist")
        cfg.read(path)
    return cfg


def _merge(cfg: configparser.ConfigParser, section: str, flags: dict, defaults: dict):
    """defaults, overlaid with config-file keys, overlaid with set flags."""
    merged = dict(defaults)
    if cfg.has_section(section):
        for key, val in cfg.items(section):
            merged[key] = val
    for key, val in flags.items():
        if val is not None:
            merged[key] = val
    return merged


def _as_bool(v) -> bool:
    if isinstance(v, bool):
        return v
    return str(v).strip().lower() in ("1", "true", "yes", "on")


def _as_float_or_none(v):
    if v is None or (isinstance(v, str) and not v.strip()):
        return None
    return float(v)


def _as_tuple(v, cast):
    if isinstance(v, (tuple, list)):
        return tuple(cast(x) for x in v)
    return tuple(cast(x) for x in str(v).split(",") if str(x).strip())


def _write_resolved(out_dir: str, sections: dict) -> None:
    cfg = configparser.ConfigParser()
    for name, keys in sections.items():
        cfg[name] = {k: str(v) for k, v in keys.items() if v is not None}
    path = os.path.join(out_dir, "resolved.cfg")
    with open(path, "w") as fh:
        cfg.write(fh)
    for name, keys in sections.items():
        for k, v in keys.items():
            if v is not None:
                log.info("resolved %s.%s = %s", name, k, v)


def _ensure_out(out: str | None) -> str:
    if not out:
        raise ValueError("--out directory is required")
    os.makedirs(out, exist_ok=True)
    return out


# section builders -----------------------------------------------------------

_MODEL_DEFAULTS = {"kind": "ar1", "k": "15", "rho": "0.5", "alpha": "0.1",
                   "matrix_file": None}
_OFFDIAG_DEFAULTS = {"kind": "constant", "p": "0.3"}
_MEAN_DEFAULTS = {"beta": None, "x_file": None}
_TUNING_DEFAULTS = {"folds": "5", "lambda_grid_size": "50", "tau_step": "0.02",
                    "bic_tie_tolerance": "1e-8"}


def _model_section(cfg, args) -> dict:
    flags = {"kind": getattr(args, "model", None), "k": getattr(args, "k", None),
             "rho": getattr(args, "rho", None), "alpha": getattr(args, "alpha", None),
             "matrix_file": getattr(args, "matrix_file", None)}
    return _merge(cfg, "model", flags, _MODEL_DEFAULTS)


def _cov_spec(sec: dict) -> models.CovarianceSpec:
    kind = str(sec["kind"])
    K = int(sec["k"])
    matrix = None
    if kind == "explicit":
        if not sec.get("matrix_file"):
            raise ValueError("explicit model requires matrix_file")
        matrix = fileio.read_matrix(str(sec["matrix_file"]))
    return models.CovarianceSpec(
        kind=kind, K=K, rho=float(sec["rho"]), alpha=float(sec["alpha"]),
        matrix=matrix,
    )


def _offdiag_section(cfg, args) -> dict:
    flags = {"kind": getattr(args, "off_diag_kind", None),
             "p": getattr(args, "off_diag_p", None)}
    return _merge(cfg, "offdiag", flags, _OFFDIAG_DEFAULTS)


def _off_diag(sec: dict) -> models.OffDiagSpec:
    return models.OffDiagSpec(kind=str(sec["kind"]), p=float(sec["p"]))


def _mean_section(cfg, args) -> dict:
    flags = {"beta": getattr(args, "beta", None),
             "x_file": getattr(args, "x_file", None)}
    return _merge(cfg, "mean", flags, _MEAN_DEFAULTS)


def _mean_design(sec: dict, K: int):
    X = fileio.read_matrix(str(sec["x_file"])) if sec.get("x_file") else None
    beta = None
    if sec.get("beta"):
        beta = np.array(_as_tuple(sec["beta"], float))
        if X is None:
            X = np.ones((K, beta.shape[0]))
    return X, beta


def _tuning_section(cfg, args) -> dict:
    flags = {"folds": getattr(args, "folds", None),
             "lambda_grid_size": getattr(args, "grid_size", None),
             "tau_step": getattr(args, "tau_step", None),
             "bic_tie_tolerance": getattr(args, "bic_tie_tolerance", None)}
    return _merge(cfg, "tuning", flags, _TUNING_DEFAULTS)


def _tuning_config(sec: dict) -> tuning.TuningConfig:
    return tuning.TuningConfig(
        folds=int(sec["folds"]),
        lambda_grid_size=int(sec["lambda_grid_size"]),
        tau_grid=tuning.default_tau_grid(float(sec["tau_step"])),
        bic_tie_tolerance=float(sec["bic_tie_tolerance"]),
    )


# ---------------------------------------------------------------------------
# input loading shared by select/tune


def _load_panel(args, t_trunc=None) -> estimation.EtaPanel:
    if getattr(args, "panel", None):
        return fileio.read_panel(args.panel)
    if getattr(args, "networks", None):
        nets, partition, _ = _read_network_dir(args.networks)
        T = _as_float_or_none(t_trunc)
        if T is None:
            T = estimation.default_truncation(len(nets))
        return estimation.assemble_panel(nets, partition, T)
    raise ValueError("need --panel FILE or --networks DIR as input")


def _read_network_dir(path: str):
    blocks_path = os.path.join(path, "blocks.txt")
    if not os.path.exists(blocks_path):
        raise ValueError(f"{path}: missing blocks.txt")
    partition = fileio.read_blocks(blocks_path)
    names = sorted(
        f for f in os.listdir(path) if f.startswith("net_") and f.endswith(".txt")
    )
    if not names:
        raise ValueError(f"{path}: no net_*.txt files")
    nets = []
    K = None
    for name in names:
        net, k = fileio.read_network(os.path.join(path, name))
        nets.append(net)
        K = k if K is None else K
        if k != K or net.N != partition.N:
            raise ValueError(f"{name}: inconsistent N or K across network files")
    return nets, partition, K


# ---------------------------------------------------------------------------
# subcommands


def cmd_simulate(args, cfg) -> int:
    model_sec = _model_section(cfg, args)
    off_sec = _offdiag_section(cfg, args)
    mean_sec = _mean_section(cfg, args)
    run_sec = _merge(cfg, "simulate", {
        "n": args.n, "m_min": args.m_min, "seed": args.seed,
    }, {"n": "20", "m_min": "100", "seed": "0"})
    out = _ensure_out(args.out)

    spec = _cov_spec(model_sec)
    n, m_min, seed = int(run_sec["n"]), int(run_sec["m_min"]), int(run_sec["seed"])
    partition = models.make_partition(spec.K, m_min)
    X, beta = _mean_design(mean_sec, spec.K)
    from .seeding import CH_COVARIANCE, stream

    model = models.make_model(
        spec, partition, X=X, beta=beta, off_diag=_off_diag(off_sec),
        rng=stream(seed, CH_COVARIANCE),
    )
    H = models.sample_eta_panel(model, n, seed)
    nets = models.sample_networks(H, partition, model.off_diag, seed)
    for t, net in enumerate(nets):
        fileio.write_network(os.path.join(out, f"net_{t + 1:04d}.txt"), net, spec.K)
    fileio.write_blocks(os.path.join(out, "blocks.txt"), partition)
    fileio.write_edges(
        os.path.join(out, "truth_edges.csv"),
        selectors.EdgeSet.from_pairs(model.graph.E),
    )
    fileio.write_matrix(os.path.join(out, "covariance.csv"), model.Sigma)
    fileio.write_matrix(os.path.join(out, "precision.csv"), model.graph.D)
    _write_resolved(out, {"model": model_sec, "offdiag": off_sec,
                          "mean": mean_sec, "simulate": run_sec})
    log.info("simulate: wrote %d networks to %s", n, out)
    return 0


def cmd_estimate(args, cfg) -> int:
    out = _ensure_out(args.out)
    nets, partition, _ = _read_network_dir(args.networks)
    run_sec = _merge(cfg, "estimate", {"t_trunc": args.t_trunc},
                     {"t_trunc": None})
    T = _as_float_or_none(run_sec.get("t_trunc"))
    if T is None:
        T = estimation.default_truncation(len(nets))
    panel = estimation.assemble_panel(nets, partition, T)
    mean_sec = _mean_section(cfg, args)
    X, _ = _mean_design(mean_sec, partition.K)
    if X is None:
        X, _ = models.default_design(partition.K)
    est = estimation.estimate_mean_and_beta(panel, X)
    fileio.write_panel(os.path.join(out, "panel.csv"), panel)
    with open(os.path.join(out, "mean.csv"), "w") as fh:
        for k, v in enumerate(est.mu_hat):
            fh.write(f"{k + 1},{float(v)!r}\n")
    with open(os.path.join(out, "beta.csv"), "w") as fh:
        for j, v in enumerate(est.beta_hat):
            fh.write(f"{j + 1},{float(v)!r}\n")
    if est.rank_deficient:
        log.warning("design matrix is rank deficient; beta is a pseudoinverse fit")
    _write_resolved(out, {"estimate": {"t_trunc": T, "networks": args.networks},
                          "mean": mean_sec})
    return 0


def cmd_select(args, cfg) -> int:
    out = _ensure_out(args.out)
    run_sec = _merge(cfg, "select", {
        "method": args.method, "lam": args.lam, "mu_coef": args.mu_coef,
        "rule": args.rule, "t_trunc": args.t_trunc,
    }, {"method": "lasso", "lam": None, "rule": "OR", "mu_coef": None,
        "t_trunc": None})
    method = str(run_sec["method"])
    if method not in ("lasso", "dantzig", "mu"):
        raise ValueError(f"unknown method {method!r}")
    if run_sec.get("lam") is None:
        raise ValueError("select requires --lam")
    lam = float(run_sec["lam"])
    mu_coef = _as_float_or_none(run_sec.get("mu_coef"))
    rule = str(run_sec["rule"])

    panel = _load_panel(args, run_sec.get("t_trunc"))
    mu_hat = estimation.estimate_mean_and_beta(
        panel, models.default_design(panel.K)[0]
    ).mu_hat
    centered = estimation.center_panel(panel, mu_hat)
    sols = []
    for a in range(panel.K):
        problem = selectors.make_problem(centered, a)
        if method == "lasso":
            sol = selectors.solve_lasso(problem, lam)
        elif method == "dantzig":
            sol = selectors.solve_dantzig_type(problem, lam, mu_coef or 0.0)
        else:
            sol = selectors.solve_dantzig_type(
                problem, lam, lam if mu_coef is None else mu_coef
            )
        sols.append(sol)
        fileio.write_coefficients(
            os.path.join(out, f"coef_node_{a + 1:03d}.csv"), sol
        )
    edges = selectors.assemble_edge_set(selectors.neighborhoods(sols), rule)
    fileio.write_edges(os.path.join(out, "edges.csv"), edges)
    _write_resolved(out, {"select": dict(run_sec)})
    log.info("select: %d edges under %s rule", len(edges), rule)
    return 0


def cmd_tune(args, cfg) -> int:
    out = _ensure_out(args.out)
    tuning_sec = _tuning_section(cfg, args)
    run_sec = _merge(cfg, "tune", {
        "method": args.method, "rule": args.rule, "seed": args.seed,
        "t_trunc": args.t_trunc,
    }, {"method": "lasso", "rule": "OR", "seed": "0", "t_trunc": None})
    method, rule = str(run_sec["method"]), str(run_sec["rule"])
    seed = int(run_sec["seed"])
    tcfg = _tuning_config(tuning_sec)

    panel = _load_panel(args, run_sec.get("t_trunc"))
    mu_hat = estimation.estimate_mean_and_beta(
        panel, models.default_design(panel.K)[0]
    ).mu_hat
    centered = estimation.center_panel(panel, mu_hat)
    lambdas, sols = [], []
    for a in range(panel.K):
        problem = selectors.make_problem(centered, a)
        lam_a = tuning.cv_select_lambda(problem, method, tcfg, seed)
        lambdas.append(lam_a)
        sols.append(selectors.solve_method(problem, method, lam_a))
    tau, edges = tuning.select_tau(sols, panel, mu_hat, tcfg, rule)
    S_emp = tuning.sample_covariance(panel, mu_hat)
    bic = tuning.gaussian_bic(
        tuning.refit_precision(edges, S_emp, panel.n), S_emp, panel.n
    )
    fileio.write_tuning_report(
        os.path.join(out, "tuning_report.csv"), lambdas, tau, rule, bic
    )
    fileio.write_edges(os.path.join(out, "edges.csv"), edges)
    _write_resolved(out, {"tune": dict(run_sec), "tuning": tuning_sec})
    log.info("tune: tau=%g rule=%s -> %d edges", tau, rule, len(edges))
    return 0


def _experiment_config(args, cfg) -> tuple[evaluation.ExperimentConfig, dict]:
    model_sec = _model_section(cfg, args)
    off_sec = _offdiag_section(cfg, args)
    mean_sec = _mean_section(cfg, args)
    tuning_sec = _tuning_section(cfg, args)
    run_sec = _merge(cfg, "experiment", {
        "n": args.n, "m_min": args.m_min, "replicates": args.replicates,
        "methods": args.methods, "rules": args.rules, "seed": args.seed,
        "mean_known": args.mean_known, "se_scaled": getattr(args, "se_scaled", None),
        "t_trunc": args.t_trunc, "threads": args.threads,
        "progress": getattr(args, "progress", None),
    }, {"n": "100", "m_min": "45", "replicates": "10",
        "methods": "lasso,dantzig,mu", "rules": "OR,AND", "seed": "0",
        "mean_known": "false", "se_scaled": "false", "t_trunc": None,
        "threads": str(os.cpu_count() or 1), "progress": "false"})
    spec = _cov_spec(model_sec)
    X, beta = _mean_design(mean_sec, spec.K)
    config = evaluation.ExperimentConfig(
        cov=spec,
        n=int(run_sec["n"]),
        m_min=int(run_sec["m_min"]),
        replicates=int(run_sec["replicates"]),
        methods=_as_tuple(run_sec["methods"], str),
        rules=_as_tuple(run_sec["rules"], str),
        tuning=_tuning_config(tuning_sec),
        seed=int(run_sec["seed"]),
        mean_known=_as_bool(run_sec["mean_known"]),
        T=_as_float_or_none(run_sec.get("t_trunc")),
        X=X,
        beta=beta,
        off_diag=_off_diag(off_sec),
        se_scaled=_as_bool(run_sec["se_scaled"]),
        threads=int(run_sec["threads"]),
        progress=_as_bool(run_sec["progress"]),
    )
    sections = {"model": model_sec, "offdiag": off_sec, "mean": mean_sec,
                "tuning": tuning_sec, "experiment": run_sec}
    return config, sections


def cmd_experiment(args, cfg) -> int:
    out = _ensure_out(args.out)
    config, sections = _experiment_config(args, cfg)
    rows = evaluation.run_experiment(config)
    fileio.write_results(os.path.join(out, "results.csv"), rows)
    if args.percent:
        fileio.write_results_percent(os.path.join(out, "results_percent.csv"), rows)
    _write_resolved(out, sections)
    log.info("experiment: %d result rows written", len(rows))
    return 0


def cmd_roc(args, cfg) -> int:
    out = _ensure_out(args.out)
    model_sec = _model_section(cfg, args)
    off_sec = _offdiag_section(cfg, args)
    mean_sec = _mean_section(cfg, args)
    run_sec = _merge(cfg, "roc", {
        "n": args.n, "m_min": args.m_min, "replicates": args.replicates,
        "methods": args.methods, "rule": args.rule, "seed": args.seed,
        "grid_size": args.grid_size, "t_trunc": args.t_trunc,
        "mean_known": args.mean_known,
    }, {"n": "20", "m_min": "105", "replicates": "20",
        "methods": "lasso,dantzig,mu", "rule": "OR", "seed": "0",
        "grid_size": "30", "t_trunc": None, "mean_known": "false"})
    spec = _cov_spec(model_sec)
    X, beta = _mean_design(mean_sec, spec.K)
    off_diag = _off_diag(off_sec)
    n = int(run_sec["n"])
    reps = int(run_sec["replicates"])
    seed = int(run_sec["seed"])
    rule = str(run_sec["rule"])
    methods = _as_tuple(run_sec["methods"], str)
    mean_known = _as_bool(run_sec["mean_known"])

    from .seeding import CH_COVARIANCE, derive_seed, stream

    partition = models.make_partition(spec.K, int(run_sec["m_min"]))
    replicates = []
    for r in range(reps):
        rep_seed = derive_seed(seed, r)
        rng = stream(rep_seed, CH_COVARIANCE) if spec.kind == "random" else None
        model = models.make_model(spec, partition, X=X, beta=beta,
                                  off_diag=off_diag, rng=rng)
        H = models.sample_eta_panel(model, n, rep_seed)
        nets = models.sample_networks(H, partition, model.off_diag, rep_seed)
        T = _as_float_or_none(run_sec.get("t_trunc"))
        if T is None:
            T = estimation.default_truncation(n)
        panel = estimation.assemble_panel(nets, partition, T)
        mu = model.mu if mean_known else estimation.estimate_mean_and_beta(
            panel, model.X
        ).mu_hat
        replicates.append(
            (estimation.center_panel(panel, mu),
             selectors.EdgeSet.from_pairs(model.graph.E))
        )
    curves = {}
    for method in methods:
        grid = evaluation.shared_lambda_grid(
            replicates[0][0], method, int(run_sec["grid_size"])
        )
        curves[method] = evaluation.roc_points(replicates, method, grid, rule)
        log.info("roc: %s AUC %.4f", method, evaluation.roc_auc(curves[method]))
    fileio.write_roc(os.path.join(out, "roc.csv"), curves)
    _write_resolved(out, {"model": model_sec, "offdiag": off_sec,
                          "mean": mean_sec, "roc": run_sec})
    return 0


def cmd_diagnose(args, cfg) -> int:
    out = _ensure_out(args.out)
    model_sec = _model_section(cfg, args)
    off_sec = _offdiag_section(cfg, args)
    mean_sec = _mean_section(cfg, args)
    run_sec = _merge(cfg, "diagnose", {
        "seed": args.seed,
        "cov_sign_m_min": args.cov_sign_m_min,
        "cov_sign_networks": args.cov_sign_networks,
        "moments_m_mins": args.moments_m_mins,
        "moments_draws": args.moments_draws,
        "scaling_m_mins": args.scaling_m_mins,
        "scaling_replicates": args.scaling_replicates,
        "scaling_networks": args.scaling_networks,
    }, {"seed": "0", "cov_sign_m_min": "105", "cov_sign_networks": "5000",
        "moments_m_mins": "10,4000", "moments_draws": "2000",
        "scaling_m_mins": "105,1770", "scaling_replicates": "200",
        "scaling_networks": "4"})
    spec = _cov_spec(model_sec)
    X, beta = _mean_design(mean_sec, spec.K)
    config = evaluation.DiagnosticsConfig(
        cov=spec,
        seed=int(run_sec["seed"]),
        X=X,
        beta=beta,
        off_diag=_off_diag(off_sec),
        cov_sign_m_min=int(run_sec["cov_sign_m_min"]),
        cov_sign_networks=int(run_sec["cov_sign_networks"]),
        moments_m_mins=_as_tuple(run_sec["moments_m_mins"], int),
        moments_draws=int(run_sec["moments_draws"]),
        scaling_m_mins=_as_tuple(run_sec["scaling_m_mins"], int),
        scaling_replicates=int(run_sec["scaling_replicates"]),
        scaling_networks=int(run_sec["scaling_networks"]),
    )
    report = evaluation.run_diagnostics(config)
    fileio.write_diagnostics(os.path.join(out, "diagnostics.csv"), report)
    _write_resolved(out, {"model": model_sec, "offdiag": off_sec,
                          "mean": mean_sec, "diagnose": run_sec})
    log.info("diagnose: sign agreement %s, scaling ratio %.3f",
             report.cov_sign_all_agree, report.scaling_ratio)
    return 0


# ---------------------------------------------------------------------------


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--config", default=None, help="INI config file")
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--percent", action="store_true",
                   help="also write a percent-formatted results table")


def _add_model_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--model", choices=["ar1", "ar4", "random", "explicit"],
                   default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--rho", type=float, default=None)
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--matrix-file", dest="matrix_file", default=None)
    p.add_argument("--off-diag-kind", dest="off_diag_kind", default=None,
                   choices=["constant", "logit_gaussian"])
    p.add_argument("--off-diag-p", dest="off_diag_p", type=float, default=None)
    p.add_argument("--beta", default=None, help="comma-separated coefficients")
    p.add_argument("--x-file", dest="x_file", default=None,
                   help="K x L design matrix CSV for the latent mean")


def _add_tuning_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--folds", type=int, default=None)
    p.add_argument("--grid-size", dest="grid_size", type=int, default=None)
    p.add_argument("--tau-step", dest="tau_step", type=float, default=None)
    p.add_argument("--bic-tie-tolerance", dest="bic_tie_tolerance",
                   type=float, default=None)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="blockgraph",
        description="Block-level dependence graphs from repeated networks",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="sample networks from a latent block model")
    _add_common(p)
    _add_model_flags(p)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--m-min", dest="m_min", type=int, default=None)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("estimate", help="build the log-odds panel from networks")
    _add_common(p)
    p.add_argument("--networks", required=True, help="directory from simulate")
    p.add_argument("--t-trunc", dest="t_trunc", type=float, default=None)
    p.add_argument("--beta", default=None)
    p.add_argument("--x-file", dest="x_file", default=None)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("select", help="neighborhood selection at fixed penalties")
    _add_common(p)
    p.add_argument("--panel", default=None)
    p.add_argument("--networks", default=None)
    p.add_argument("--method", choices=["lasso", "dantzig", "mu"], default=None)
    p.add_argument("--lam", "--lambda", dest="lam", type=float, default=None)
    p.add_argument("--mu-coef", dest="mu_coef", type=float, default=None)
    p.add_argument("--rule", choices=["AND", "OR"], default=None)
    p.add_argument("--t-trunc", dest="t_trunc", type=float, default=None)
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("tune", help="cross-validated lambda and BIC-selected tau")
    _add_common(p)
    _add_tuning_flags(p)
    p.add_argument("--panel", default=None)
    p.add_argument("--networks", default=None)
    p.add_argument("--method", choices=["lasso", "dantzig", "mu"], default=None)
    p.add_argument("--rule", choices=["AND", "OR"], default=None)
    p.add_argument("--t-trunc", dest="t_trunc", type=float, default=None)
    p.set_defaults(func=cmd_tune)

    p = sub.add_parser("experiment", help="replicated error-rate tables")
    _add_common(p)
    _add_model_flags(p)
    _add_tuning_flags(p)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--m-min", dest="m_min", type=int, default=None)
    p.add_argument("--replicates", type=int, default=None)
    p.add_argument("--methods", default=None)
    p.add_argument("--rules", default=None)
    p.add_argument("--mean-known", dest="mean_known", action="store_const",
                   const="true", default=None)
    p.add_argument("--se-scaled", dest="se_scaled", action="store_const",
                   const="true", default=None)
    p.add_argument("--t-trunc", dest="t_trunc", type=float, default=None)
    p.add_argument("--progress", action="store_const", const="true", default=None)
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("roc", help="averaged ROC curves over a lambda grid")
    _add_common(p)
    _add_model_flags(p)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--m-min", dest="m_min", type=int, default=None)
    p.add_argument("--replicates", type=int, default=None)
    p.add_argument("--methods", default=None)
    p.add_argument("--rule", choices=["AND", "OR"], default=None)
    p.add_argument("--grid-size", dest="grid_size", type=int, default=None)
    p.add_argument("--t-trunc", dest="t_trunc", type=float, default=None)
    p.add_argument("--mean-known", dest="mean_known", action="store_const",
                   const="true", default=None)
    p.set_defaults(func=cmd_roc)

    p = sub.add_parser("diagnose", help="Monte Carlo estimator diagnostics")
    _add_common(p)
    _add_model_flags(p)
    p.add_argument("--cov-sign-m-min", dest="cov_sign_m_min", type=int, default=None)
    p.add_argument("--cov-sign-networks", dest="cov_sign_networks", type=int,
                   default=None)
    p.add_argument("--moments-m-mins", dest="moments_m_mins", default=None)
    p.add_argument("--moments-draws", dest="moments_draws", type=int, default=None)
    p.add_argument("--scaling-m-mins", dest="scaling_m_mins", default=None)
    p.add_argument("--scaling-replicates", dest="scaling_replicates", type=int,
                   default=None)
    p.add_argument("--scaling-networks", dest="scaling_networks", type=int,
                   default=None)
    p.set_defaults(func=cmd_diagnose)

    return ap


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        cfg = _load_config(args.config)
        return args.func(args, cfg)
    except (ValueError, OSError) as exc:
        print(f"blockgraph {args.command}: parameter error: {exc}", file=sys.stderr)
        return 2
    except RuntimeError as exc:
        print(f"blockgraph {args.command}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
