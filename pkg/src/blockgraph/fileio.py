"""Text formats for networks, panels, solutions, and result tables.

Node and block labels are 1-based in every file (matching the network
format's "i j" edge lines); in-memory arrays are 0-based throughout the
package, so readers and writers shift by one at the boundary.
"""

from __future__ import annotations

import os

import numpy as np

from .estimation import EtaPanel
from .models import BlockPartition, NetworkSample
from .selectors import EdgeSet, SelectorSolution

_FLT = "%.17g"  # round-trips float64 exactly


def write_network(path: str, sample: NetworkSample, K: int) -> None:
    """First line "N K", then one "i j" line per edge with i < j, 1-based."""
    iu, ju = np.nonzero(np.triu(sample.adjacency, 1))
    with open(path, "w") as fh:
        fh.write(f"{sample.N} {K}\n")
        for i, j in zip(iu, ju):
            fh.write(f"{i + 1} {j + 1}\n")


def read_network(path: str) -> tuple[NetworkSample, int]:
    """Returns (sample, K)."""
    with open(path) as fh:
        lines = fh.read().split()
    if len(lines) < 2:
        raise ValueError(f"{path}: missing 'N K' header")
    N, K = int(lines[0]), int(lines[1])
    body = lines[2:]
    if len(body) % 2:
        raise ValueError(f"{path}: odd number of edge endpoints")
    A = np.zeros((N, N), dtype=np.uint8)
    for t in range(0, len(body), 2):
        i, j = int(body[t]) - 1, int(body[t + 1]) - 1
        if not (0 <= i < j < N):
            raise ValueError(f"{path}: bad edge line {t // 2 + 2}: {body[t]} {body[t + 1]}")
        A[i, j] = A[j, i] = 1
    return NetworkSample(N=N, adjacency=A), K


def write_blocks(path: str, partition: BlockPartition) -> None:
    """One "node block" line per node, both 1-based."""
    with open(path, "w") as fh:
        for node, block in enumerate(partition.z):
            fh.write(f"{node + 1} {block + 1}\n")


def read_blocks(path: str) -> BlockPartition:
    pairs = []
    with open(path) as fh:
        for ln, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                node, block = map(int, line.split())
            except ValueError:
                raise ValueError(f"{path}:{ln}: expected 'node block'")
            pairs.append((node - 1, block - 1))
    if not pairs:
        raise ValueError(f"{path}: empty block file")
    N = max(p[0] for p in pairs) + 1
    K = max(p[1] for p in pairs) + 1
    z = np.full(N, -1, dtype=int)
    for node, block in pairs:
        z[node] = block
    if np.any(z < 0) or set(z) != set(range(K)):
        raise ValueError(f"{path}: block labels must cover 1..K for every node")
    sizes = np.bincount(z, minlength=K)
    m = sizes * (sizes - 1) // 2
    return BlockPartition(
        z=z, sizes=sizes, m=m, K=K, N=N, m_min=int(m.min())
    )


def write_matrix(path: str, M: np.ndarray) -> None:
    np.savetxt(path, np.atleast_2d(M), fmt=_FLT, delimiter=",")


def read_matrix(path: str) -> np.ndarray:
    return np.atleast_2d(np.loadtxt(path, delimiter=","))


def panel_meta_path(path: str) -> str:
    return os.path.splitext(path)[0] + ".meta"


def write_panel(path: str, panel: EtaPanel) -> None:
    """n x K comma-separated values; T goes to a sidecar .meta file."""
    write_matrix(path, panel.H_hat)
    with open(panel_meta_path(path), "w") as fh:
        fh.write(f"T={_FLT % panel.T}\n")


def read_panel(path: str) -> EtaPanel:
    H = read_matrix(path)
    T = None
    meta = panel_meta_path(path)
    if os.path.exists(meta):
        with open(meta) as fh:
            for line in fh:
                if line.startswith("T="):
                    T = float(line[2:])
    if T is None:
        raise ValueError(f"{path}: missing sidecar {meta} with a T=<value> line")
    return EtaPanel(H_hat=H, T=T, S=None, m=None)


def write_coefficients(path: str, solution: SelectorSolution) -> None:
    """Lines "node,coefficient" for every node b != a, 1-based nodes."""
    with open(path, "w") as fh:
        for b in range(solution.theta.shape[0]):
            if b == solution.a:
                continue
            fh.write(f"{b + 1},{_FLT % solution.theta[b]}\n")


def write_edges(path: str, edges: EdgeSet) -> None:
    """Lines "a,b" with a < b, 1-based."""
    with open(path, "w") as fh:
        for a, b in edges:
            fh.write(f"{a + 1},{b + 1}\n")


def read_edges(path: str, rule: str | None = None) -> EdgeSet:
    pairs = []
    with open(path) as fh:
        for ln, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                a, b = map(int, line.split(","))
            except ValueError:
                raise ValueError(f"{path}:{ln}: expected 'a,b'")
            pairs.append((a - 1, b - 1))
    return EdgeSet.from_pairs(pairs, rule=rule)


def write_tuning_report(
    path: str, lambdas, tau: float, rule: str, bic: float
) -> None:
    """Per-node "a,lambda_a" lines plus a tau/rule/bic footer."""
    with open(path, "w") as fh:
        for a, lam in enumerate(lambdas):
            fh.write(f"{a + 1},{float(lam)!r}\n")
        fh.write(f"tau={float(tau)!r},rule={rule},bic={float(bic)!r}\n")


RESULTS_HEADER = (
    "model,K,n,method,rule,total_mean,total_se,"
    "type1_mean,type1_se,type2_mean,type2_se"
)


def write_results(path: str, rows) -> None:
    """Experiment results as fractions, one row per model x method x rule."""
    with open(path, "w") as fh:
        fh.write(RESULTS_HEADER + "\n")
        for r in rows:
            vals = (
                r.total_mean, r.total_se, r.type1_mean, r.type1_se,
                r.type2_mean, r.type2_se,
            )
            nums = ",".join("%.12g" % v for v in vals)
            fh.write(f"{r.model},{r.K},{r.n},{r.method},{r.rule},{nums}\n")


def write_results_percent(path: str, rows) -> None:
    """Readable companion table in percent, "mean(se)" per error kind."""
    with open(path, "w") as fh:
        fh.write("model,K,n,method,rule,total,type1,type2  [percent, mean(se)]\n")
        for r in rows:
            cells = ";".join(
                f"{100 * m:.2f}({100 * s:.2f})"
                for m, s in (
                    (r.total_mean, r.total_se),
                    (r.type1_mean, r.type1_se),
                    (r.type2_mean, r.type2_se),
                )
            )
            fh.write(f"{r.model},{r.K},{r.n},{r.method},{r.rule},{cells}\n")


def write_roc(path: str, curves: dict) -> None:
    """curves: method -> rows of (lambda, fpr, tpr)."""
    with open(path, "w") as fh:
        fh.write("method,lambda,fpr,tpr\n")
        for method, rows in curves.items():
            for lam, fpr, tpr in rows:
                fh.write(f"{method},{'%.12g' % lam},{'%.12g' % fpr},{'%.12g' % tpr}\n")


def write_diagnostics(path: str, report) -> None:
    """Flat section,key,value rows for the diagnostics report."""
    with open(path, "w") as fh:
        fh.write("section,key,value\n")
        for k, l, sig, ch, agree in report.cov_sign:
            fh.write(f"cov_sign,pair_{k + 1}_{l + 1},sigma={sig:.6g};cov_hat={ch:.6g};agree={agree}\n")
        fh.write(f"cov_sign,all_agree,{report.cov_sign_all_agree}\n")
        fh.write(f"cov_sign,skipped_pairs,{report.cov_sign_skipped}\n")
        for m_min, skews, kurts in report.moments:
            fh.write(
                f"moments,m_min_{m_min},skew={';'.join('%.6g' % s for s in skews)}"
                f";exkurt={';'.join('%.6g' % k for k in kurts)}\n"
            )
        fh.write(
            "scaling,medians,%s\n"
            % ";".join("%.6g" % v for v in report.scaling_medians)
        )
        fh.write(f"scaling,ratio,{report.scaling_ratio:.6g}\n")
