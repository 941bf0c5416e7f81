"""Latent block model: covariance structures, latent log-odds, networks.

Networks on N nodes are generated in two levels.  Nodes are grouped into K
blocks; each block k has a connection probability p_kk applied to every
within-block pair, and the log-odds eta_k = logit(p_kk) of the K blocks are
jointly Gaussian with mean X @ beta and covariance Sigma.  Between-block
pairs use nuisance probabilities that are independent of everything else.
The estimation target is the edge set of the precision matrix D = Sigma^-1.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .seeding import CH_NETWORKS, CH_PANEL, stream

# Entries of D at or below this magnitude count as structural zeros.
ZERO_TOL = 1e-8


@dataclass(frozen=True)
class CovarianceSpec:
    """Recipe for the K x K covariance of the latent log-odds.

    kind is one of:
      - "ar1":      Sigma_ij = rho^|i-j| (unit diagonal, tridiagonal D)
      - "ar4":      D_ij fixed by lag: 1, 0.4, 0.2, 0.2, 0.1 for |i-j| = 0..4
      - "random":   D = B + delta*I with B_ij = 0.5 w.p. alpha, rescaled so
                    Sigma has unit diagonal and cond(D) = K
      - "explicit": Sigma passed in directly
    """

    kind: str
    K: int
    rho: float = 0.0
    alpha: float = 0.0
    matrix: np.ndarray | None = None

    def __post_init__(self):
        if self.kind not in ("ar1", "ar4", "random", "explicit"):
            raise ValueError(f"unknown covariance kind {self.kind!r}")
        if self.K < 2:
            raise ValueError("need at least K=2 blocks")
        if self.kind == "ar1" and not (-1.0 < self.rho < 1.0):
            raise ValueError(f"ar1 requires rho in (-1, 1), got {self.rho}")
        if self.kind == "random" and not (0.0 <= self.alpha <= 1.0):
            raise ValueError(f"random requires alpha in [0, 1], got {self.alpha}")
        if self.kind == "explicit" and self.matrix is None:
            raise ValueError("explicit kind requires a matrix")

    def label(self) -> str:
        if self.kind == "ar1":
            return f"ar1(rho={self.rho:g})"
        if self.kind == "random":
            return f"random(alpha={self.alpha:g})"
        return self.kind


@dataclass(frozen=True)
class TrueGraph:
    """Precision matrix and its edge set {(a,b): d_ab != 0, a < b}."""

    D: np.ndarray
    E: tuple[tuple[int, int], ...]  # 0-based, each pair sorted

    def edge_set(self) -> set[tuple[int, int]]:
        return set(self.E)


@dataclass(frozen=True)
class BlockPartition:
    """Assignment of N nodes to K blocks plus within-block pair counts."""

    z: np.ndarray          # length N, labels 0..K-1
    sizes: np.ndarray      # length K
    m: np.ndarray          # m_k = |A_k| (|A_k| - 1) / 2
    K: int
    N: int
    m_min: int

    def blocks(self) -> list[np.ndarray]:
        return [np.flatnonzero(self.z == k) for k in range(self.K)]


@dataclass(frozen=True)
class OffDiagSpec:
    """Between-block connection probabilities (nuisance, never estimated).

    "constant": every between-block pair uses probability p.
    "logit_gaussian": each unordered block pair (k,l) gets an independent
    probability logistic(N(0,1)) redrawn for every network.
    """

    kind: str = "constant"
    p: float = 0.3

    def __post_init__(self):
        if self.kind not in ("constant", "logit_gaussian"):
            raise ValueError(f"unknown off-diagonal kind {self.kind!r}")
        if self.kind == "constant" and not (0.0 < self.p < 1.0):
            raise ValueError("constant off-diagonal probability must be in (0,1)")

    def sample_matrix(self, K: int, rng: np.random.Generator) -> np.ndarray:
        """K x K symmetric matrix of between-block probabilities."""
        if self.kind == "constant":
            return np.full((K, K), self.p)
        z = rng.standard_normal((K, K))
        z = np.triu(z, 1)
        z = z + z.T
        return 1.0 / (1.0 + np.exp(-z))


@dataclass(frozen=True)
class LatentBlockModel:
    X: np.ndarray                  # K x L design for the latent mean
    beta: np.ndarray               # length L
    Sigma: np.ndarray              # K x K covariance of the log-odds
    graph: TrueGraph
    partition: BlockPartition
    off_diag: OffDiagSpec = field(default_factory=OffDiagSpec)

    @property
    def mu(self) -> np.ndarray:
        return self.X @ self.beta

    @property
    def K(self) -> int:
        return self.Sigma.shape[0]


@dataclass(frozen=True)
class NetworkSample:
    N: int
    adjacency: np.ndarray  # N x N symmetric 0/1, zero diagonal


def _edges_from_precision(D: np.ndarray, pattern: np.ndarray | None = None):
    """Edge pairs (a,b), a<b, where |d_ab| exceeds the zero tolerance."""
    K = D.shape[0]
    if pattern is None:
        pattern = np.abs(D) > ZERO_TOL
    return tuple(
        (a, b) for a in range(K) for b in range(a + 1, K) if pattern[a, b]
    )


def _rescale_unit_diagonal(D: np.ndarray):
    """Diagonal congruence making Sigma = D^-1 unit-diagonal.

    Returns (Sigma, D_rescaled).  D entries are multiplied by d_a * d_b with
    d = sqrt(diag(D^-1)), so exact zeros stay exact zeros.
    """
    S = np.linalg.inv(D)
    d = np.sqrt(np.diag(S))
    Sigma = S / np.outer(d, d)
    Sigma = (Sigma + Sigma.T) / 2.0
    np.fill_diagonal(Sigma, 1.0)
    D_out = D * np.outer(d, d)
    return Sigma, D_out


def _random_precision(K: int, alpha: float, rng: np.random.Generator):
    """Draw D = B + delta*I, rescaled so Sigma = D^-1 has unit diagonal.

    B has independent upper-triangle entries equal to 0.5 with probability
    alpha, zero diagonal.  delta starts from the closed form
    (lmax - K*lmin)/(K - 1), which sets cond(B + delta*I) = K, and is then
    refined by bisection so the condition number *after* the unit-diagonal
    rescaling is K (the congruence shifts it otherwise).
    """
    for _ in range(100):
        B = np.zeros((K, K))
        iu = np.triu_indices(K, 1)
        B[iu] = np.where(rng.random(len(iu[0])) < alpha, 0.5, 0.0)
        B = B + B.T
        w = np.linalg.eigvalsh(B)
        lmin, lmax = w[0], w[-1]
        delta0 = (lmax - K * lmin) / (K - 1)
        if delta0 <= -lmin:  # would not be positive definite; redraw
            continue

        def cond_after(delta):
            _, Dr = _rescale_unit_diagonal(B + delta * np.eye(K))
            ev = np.linalg.eigvalsh(Dr)
            return ev[-1] / ev[0]

        # cond_after is monotone decreasing in delta (infinity at the PD
        # boundary, 1 as delta -> inf); bracket the root of cond = K.
        lo, hi = delta0, delta0
        if cond_after(delta0) > K:
            step = max(1.0, abs(delta0))
            while cond_after(hi + step) > K:
                step *= 2.0
                if step > 1e12:
                    break
            hi = hi + step
        else:
            floor = -lmin
            while cond_after(lo) < K and lo - floor > 1e-14 * max(1.0, abs(floor)):
                lo = floor + (lo - floor) / 2.0
        if not (cond_after(lo) >= K >= cond_after(hi)):
            continue  # bracketing failed on a degenerate draw; redraw
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if cond_after(mid) > K:
                lo = mid
            else:
                hi = mid
            if hi - lo <= 1e-12 * max(1.0, hi):
                break
        delta = 0.5 * (lo + hi)
        D = B + delta * np.eye(K)
        pattern = np.abs(B) > ZERO_TOL
        Sigma, D_out = _rescale_unit_diagonal(D)
        return Sigma, D_out, pattern
    raise RuntimeError("random precision: no positive definite draw in 100 tries")


def build_covariance(spec: CovarianceSpec, rng: np.random.Generator | None = None):
    """Materialize (Sigma, TrueGraph) for a covariance spec.

    `rng` is only consulted for kind="random".
    """
    K = spec.K
    pattern = None
    if spec.kind == "ar1":
        idx = np.arange(K)
        Sigma = spec.rho ** np.abs(idx[:, None] - idx[None, :])
        # Analytic tridiagonal inverse of the AR(1) correlation matrix.
        r = spec.rho
        c = 1.0 / (1.0 - r * r)
        D = np.zeros((K, K))
        np.fill_diagonal(D, (1.0 + r * r) * c)
        D[0, 0] = D[-1, -1] = c
        off = np.arange(K - 1)
        D[off, off + 1] = D[off + 1, off] = -r * c
        # The edge pattern is exactly the first off-diagonal (empty at rho=0).
        pattern = np.zeros((K, K), dtype=bool)
        if r != 0.0:
            pattern[off, off + 1] = pattern[off + 1, off] = True
    elif spec.kind == "ar4":
        idx = np.arange(K)
        lag = np.abs(idx[:, None] - idx[None, :])
        coef = np.array([1.0, 0.4, 0.2, 0.2, 0.1])
        D = np.where(lag <= 4, coef[np.minimum(lag, 4)], 0.0)
        np.linalg.cholesky(D)  # PD for these fixed coefficients, by construction
        Sigma = np.linalg.inv(D)
        Sigma = (Sigma + Sigma.T) / 2.0
    elif spec.kind == "random":
        if rng is None:
            rng = stream(0)
        Sigma, D, pattern = _random_precision(K, spec.alpha, rng)
    else:  # explicit
        Sigma = np.asarray(spec.matrix, dtype=float)
        if Sigma.shape != (K, K) or not np.allclose(Sigma, Sigma.T, atol=1e-10):
            raise ValueError("explicit covariance must be symmetric K x K")
        D = np.linalg.inv(Sigma)
        D = (D + D.T) / 2.0

    try:
        np.linalg.cholesky(Sigma)
    except np.linalg.LinAlgError:
        raise ValueError(f"covariance for {spec.kind} is not positive definite")
    return Sigma, TrueGraph(D=D, E=_edges_from_precision(D, pattern))


def make_partition(K: int, m_min_target: int, N_override: int | None = None) -> BlockPartition:
    """Equal-size blocks with at least m_min_target possible edges per block.

    The block size s is the smallest integer with s(s-1)/2 >= m_min_target,
    so the achieved m_min is the smallest triangular number at or above the
    target.  N_override forces the total node count instead (must split
    evenly into K blocks of at least 2 nodes).
    """
    if K < 1 or m_min_target < 1:
        raise ValueError("K and m_min_target must be positive")
    if N_override is not None:
        s, rem = divmod(int(N_override), K)
        if rem or s < 2:
            raise ValueError("N_override must be K * s for a block size s >= 2")
    else:
        # ceil of the positive root of s(s-1)/2 = m_min_target
        s = int(np.ceil((1.0 + np.sqrt(1.0 + 8.0 * m_min_target)) / 2.0))
        while (s - 1) * (s - 2) // 2 >= m_min_target:
            s -= 1
    m_k = s * (s - 1) // 2
    z = np.repeat(np.arange(K), s)
    return BlockPartition(
        z=z,
        sizes=np.full(K, s),
        m=np.full(K, m_k),
        K=K,
        N=K * s,
        m_min=m_k,
    )


def default_design(K: int):
    """Default latent mean model: X a column of ones, beta = 0, so mu = 0."""
    return np.ones((K, 1)), np.zeros(1)


def make_model(
    spec: CovarianceSpec,
    partition: BlockPartition,
    X: np.ndarray | None = None,
    beta: np.ndarray | None = None,
    off_diag: OffDiagSpec | None = None,
    rng: np.random.Generator | None = None,
) -> LatentBlockModel:
    Sigma, graph = build_covariance(spec, rng=rng)
    if X is None or beta is None:
        X_d, beta_d = default_design(spec.K)
        X = X_d if X is None else X
        beta = beta_d if beta is None else beta
    X = np.atleast_2d(np.asarray(X, dtype=float))
    beta = np.atleast_1d(np.asarray(beta, dtype=float))
    if X.shape != (spec.K, beta.shape[0]):
        raise ValueError("design matrix X must be K x len(beta)")
    return LatentBlockModel(
        X=X,
        beta=beta,
        Sigma=Sigma,
        graph=graph,
        partition=partition,
        off_diag=off_diag if off_diag is not None else OffDiagSpec(),
    )


def sample_eta_panel(model: LatentBlockModel, n: int, seed: int) -> np.ndarray:
    """n iid rows of eta ~ N(X beta, Sigma), via the Cholesky factor."""
    if n < 1:
        raise ValueError("need n >= 1 samples")
    L = np.linalg.cholesky(model.Sigma)
    rng = stream(seed, CH_PANEL)
    Z = rng.standard_normal((n, model.K))
    return model.mu[None, :] + Z @ L.T


def sample_networks(
    H: np.ndarray,
    partition: BlockPartition,
    off_diag: OffDiagSpec,
    seed: int,
) -> list[NetworkSample]:
    """One network per row of H.

    Row t yields within-block probabilities p_kk = logistic(eta_k^(t));
    every unordered within-block pair is an independent Bernoulli(p_kk),
    every between-block pair Bernoulli(p_kl) from the off-diagonal spec.
    """
    H = np.atleast_2d(H)
    n, K = H.shape
    if K != partition.K:
        raise ValueError("H columns must match the partition's block count")
    N = partition.N
    iu, ju = np.triu_indices(N, 1)
    zi, zj = partition.z[iu], partition.z[ju]
    within = zi == zj
    rng = stream(seed, CH_NETWORKS)
    out = []
    for t in range(n):
        p_within = 1.0 / (1.0 + np.exp(-H[t]))
        p_between = off_diag.sample_matrix(K, rng)
        p_pair = np.where(within, p_within[zi], p_between[zi, zj])
        hit = rng.random(iu.shape[0]) < p_pair
        A = np.zeros((N, N), dtype=np.uint8)
        A[iu, ju] = hit
        A |= A.T
        out.append(NetworkSample(N=N, adjacency=A))
    return out


def partial_correlations(Sigma: np.ndarray) -> np.ndarray:
    """pi_ab = -d_ab / sqrt(d_aa d_bb) from D = Sigma^-1; unit diagonal."""
    Sigma = np.asarray(Sigma, dtype=float)
    np.linalg.cholesky(Sigma)  # raises LinAlgError if not PD
    D = np.linalg.inv(Sigma)
    D = (D + D.T) / 2.0
    d = np.sqrt(np.diag(D))
    pi = -D / np.outer(d, d)
    np.fill_diagonal(pi, 1.0)
    return pi
