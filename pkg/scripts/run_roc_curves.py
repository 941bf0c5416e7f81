#!/usr/bin/env python3
"""Averaged ROC curves across dependence strengths.

For each rho a fresh batch of replicates is simulated and estimated, then
every method's selected-support path is traced over a shared penalty grid
and averaged into one (FPR, TPR) curve per method. Curves land in one CSV
per rho; AUCs are printed as they complete.
"""

import argparse
import os

from blockgraph import estimation, evaluation, fileio, models
from blockgraph.seeding import derive_seed
from blockgraph.selectors import EdgeSet


def replicate_panels(spec, n, m_min, reps, seed):
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


def main() -> None:
    ap = argparse.ArgumentParser(
        description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter
    )
    ap.add_argument("--out", default="roc")
    ap.add_argument("--k", type=int, default=15)
    ap.add_argument("--n", type=int, default=20, help="networks per replicate")
    ap.add_argument("--m-min", dest="m_min", type=int, default=105)
    ap.add_argument("--replicates", type=int, default=20)
    ap.add_argument("--grid-size", dest="grid_size", type=int, default=30)
    ap.add_argument("--rhos", default="0.2,0.5,0.8")
    ap.add_argument("--rule", choices=["AND", "OR"], default="OR")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    os.makedirs(args.out, exist_ok=True)
    for rho in (float(r) for r in args.rhos.split(",")):
        spec = models.CovarianceSpec(kind="ar1", K=args.k, rho=rho)
        reps = replicate_panels(spec, args.n, args.m_min, args.replicates,
                                args.seed)
        curves = {}
        for method in ("lasso", "dantzig", "mu"):
            grid = evaluation.shared_lambda_grid(
                reps[0][0], method, args.grid_size
            )
            curves[method] = evaluation.roc_points(reps, method, grid, args.rule)
            auc = evaluation.roc_auc(curves[method])
            print(f"rho={rho:g} {method}: AUC {auc:.4f}")
        fileio.write_roc(os.path.join(args.out, f"roc_rho{rho:g}.csv"), curves)


if __name__ == "__main__":
    main()
