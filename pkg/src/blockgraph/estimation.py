"""Truncated log-odds panel from observed networks, plus mean estimation.

For each network t and block k, S_k^(t) counts the realized within-block
edges out of m_k possible ones.  The raw log-odds logit(S/m) is unbounded
when a block is empty or complete, so the proportion is clamped into
[1/(1+e^T), 1/(1+e^-T)] before the logit -- algebraically the same as
clamping the log-odds to [-T, T], but with no log(0) on the way.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .models import BlockPartition, NetworkSample


@dataclass(frozen=True)
class EtaPanel:
    """n x K matrix of truncated log-odds estimates with its ingredients.

    S and m are None for panels imported from a file (the counts are not
    recoverable from the log-odds alone).
    """

    H_hat: np.ndarray
    T: float
    S: np.ndarray | None = None         # n x K within-block edge counts
    m: np.ndarray | None = None         # K-vector of possible edge counts

    @property
    def n(self) -> int:
        return self.H_hat.shape[0]

    @property
    def K(self) -> int:
        return self.H_hat.shape[1]


@dataclass(frozen=True)
class MeanEstimate:
    mu_hat: np.ndarray
    beta_hat: np.ndarray
    rank_deficient: bool


def default_truncation(n: int) -> float:
    """Truncation level T = 2 log(max(n, 10)), growing with the sample size."""
    return 2.0 * np.log(max(n, 10))


def count_within_edges(network: NetworkSample, partition: BlockPartition) -> np.ndarray:
    """S_k = number of realized within-block edges of block k."""
    if network.N != partition.N:
        raise ValueError(
            f"network has {network.N} nodes but partition expects {partition.N}"
        )
    A = network.adjacency
    S = np.empty(partition.K, dtype=np.int64)
    for k, idx in enumerate(partition.blocks()):
        sub = A[np.ix_(idx, idx)]
        S[k] = int(sub.sum()) // 2  # each unordered pair counted once
    return S


def estimate_eta_row(S: np.ndarray, m: np.ndarray, T: float) -> np.ndarray:
    """Truncated log-odds of the edge proportions S/m."""
    S = np.asarray(S, dtype=float)
    m = np.asarray(m, dtype=float)
    if T <= 0:
        raise ValueError("truncation level T must be positive")
    if np.any(m <= 0):
        raise ValueError("degenerate block: m_k = 0 possible edges")
    if np.any(S < 0) or np.any(S > m):
        raise ValueError("edge counts must satisfy 0 <= S_k <= m_k")
    lo = 1.0 / (1.0 + np.exp(T))
    hi = 1.0 / (1.0 + np.exp(-T))
    p = np.clip(S / m, lo, hi)
    return np.log(p / (1.0 - p))


def assemble_panel(
    networks: list[NetworkSample], partition: BlockPartition, T: float
) -> EtaPanel:
    """Stack per-network truncated log-odds rows into an n x K panel."""
    S = np.vstack([count_within_edges(net, partition) for net in networks])
    H_hat = np.vstack([estimate_eta_row(row, partition.m, T) for row in S])
    return EtaPanel(H_hat=H_hat, T=float(T), S=S, m=partition.m.copy())


def estimate_mean_and_beta(panel: EtaPanel, X: np.ndarray) -> MeanEstimate:
    """Column means of the panel and beta_hat = pinv(X) @ mu_hat.

    The pseudoinverse uses an SVD with singular values below 1e-12 of the
    largest treated as zero; rank deficiency is flagged, not an error.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    mu_hat = panel.H_hat.mean(axis=0)
    rcond = 1e-12
    beta_hat = np.linalg.pinv(X, rcond=rcond) @ mu_hat
    s = np.linalg.svd(X, compute_uv=False)
    rank = int(np.sum(s > rcond * s[0])) if s.size and s[0] > 0 else 0
    return MeanEstimate(
        mu_hat=mu_hat,
        beta_hat=beta_hat,
        rank_deficient=rank < min(X.shape),
    )


def center_panel(panel: EtaPanel, mu: np.ndarray) -> np.ndarray:
    """H_hat minus the row vector mu (one mean per block column)."""
    mu = np.asarray(mu, dtype=float)
    if mu.shape != (panel.K,):
        raise ValueError("mu must have one entry per block")
    return panel.H_hat - mu[None, :]
