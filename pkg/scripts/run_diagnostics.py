#!/usr/bin/env python3
"""Monte Carlo sanity checks of the truncated log-odds estimator.

Three checks, all against simulated networks:
  1. the sign of Cov(S_k, S_l) across blocks matches the sign of the
     latent covariance sigma_kl for every pair where it is not tiny;
  2. skewness and excess kurtosis of the estimates shrink as blocks grow;
  3. the median of max|estimate - truth| scales like 1/sqrt(m_min).
"""

import argparse
import os

import numpy as np

from blockgraph import evaluation, fileio, models


def main() -> None:
    ap = argparse.ArgumentParser(
        description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter
    )
    ap.add_argument("--out", default="diagnostics")
    ap.add_argument("--k", type=int, default=5)
    ap.add_argument("--rho", type=float, default=0.8)
    ap.add_argument("--beta", type=float, default=1.0,
                    help="latent mean; off-center makes small-block skew visible")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    os.makedirs(args.out, exist_ok=True)
    config = evaluation.DiagnosticsConfig(
        cov=models.CovarianceSpec(kind="ar1", K=args.k, rho=args.rho),
        seed=args.seed,
        beta=np.array([args.beta]),
    )
    report = evaluation.run_diagnostics(config)
    fileio.write_diagnostics(os.path.join(args.out, "diagnostics.csv"), report)

    print(f"sign agreement: {report.cov_sign_all_agree} "
          f"({len(report.cov_sign)} pairs checked, "
          f"{report.cov_sign_skipped} weak pairs skipped)")
    for m_min, skews, kurts in report.moments:
        print(f"m_min={m_min}: |skew| max {max(map(abs, skews)):.3f}, "
              f"|exkurt| max {max(map(abs, kurts)):.3f}")
    lo, hi = config.scaling_m_mins
    print(f"max-error median ratio (m_min {lo} vs {hi}): "
          f"{report.scaling_ratio:.3f}, expect ~{(hi / lo) ** 0.5:.1f}")


if __name__ == "__main__":
    main()
