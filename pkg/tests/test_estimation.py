import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from blockgraph import estimation, models
from blockgraph.estimation import (
    assemble_panel,
    center_panel,
    count_within_edges,
    default_truncation,
    estimate_eta_row,
    estimate_mean_and_beta,
)
from blockgraph.models import CovarianceSpec, NetworkSample
from blockgraph.seeding import stream


def _net_from_edges(N, edges):
    A = np.zeros((N, N), dtype=np.uint8)
    for i, j in edges:
        A[i, j] = A[j, i] = 1
    return NetworkSample(N=N, adjacency=A)


class TestEdgeCounting:
    def test_hand_example(self):
        # one block of nodes {0,1,2} with edges (0,1) and (1,2)
        p = models.make_partition(1, 1, N_override=3)
        net = _net_from_edges(3, [(0, 1), (1, 2)])
        np.testing.assert_array_equal(count_within_edges(net, p), [2])

    def test_empty_and_complete(self):
        p = models.make_partition(2, 3)  # two blocks of 3 nodes, m_k = 3
        empty = _net_from_edges(p.N, [])
        np.testing.assert_array_equal(count_within_edges(empty, p), [0, 0])
        complete = NetworkSample(
            N=p.N, adjacency=(1 - np.eye(p.N)).astype(np.uint8)
        )
        np.testing.assert_array_equal(count_within_edges(complete, p), p.m)

    def test_between_block_edges_not_counted(self):
        p = models.make_partition(2, 1)  # blocks {0,1} and {2,3}
        net = _net_from_edges(4, [(0, 2), (1, 3), (0, 3)])
        np.testing.assert_array_equal(count_within_edges(net, p), [0, 0])

    def test_size_mismatch(self):
        p = models.make_partition(2, 1)
        with pytest.raises(ValueError):
            count_within_edges(_net_from_edges(6, []), p)


class TestLogOddsRow:
    def test_half_density_is_zero(self):
        np.testing.assert_allclose(
            estimate_eta_row(np.array([50]), np.array([100]), 3.0), [0.0], atol=1e-12
        )

    def test_truncation_boundaries(self):
        eta = estimate_eta_row(np.array([0, 100]), np.array([100, 100]), 3.0)
        np.testing.assert_allclose(eta, [-3.0, 3.0], atol=1e-12)

    def test_worked_value(self):
        eta = estimate_eta_row(np.array([45]), np.array([105]), 8.0)
        assert abs(eta[0] - np.log(3 / 4)) < 1e-12
        assert abs(eta[0] - (-0.2876820724517809)) < 1e-12

    def test_matches_clipped_logit_exhaustively(self):
        # clamping the proportion into [1/(1+e^T), 1/(1+e^-T)] must agree
        # with clamping the log-odds into [-T, T]
        for m in range(1, 21):
            for T in (0.5, 2.0, 8.0):
                S = np.arange(m + 1)
                got = estimate_eta_row(S, np.full(m + 1, m), T)
                with np.errstate(divide="ignore"):
                    raw = np.log(S / m) - np.log(1 - S / m)
                np.testing.assert_allclose(np.clip(raw, -T, T), got, atol=1e-10)

    @settings(max_examples=60, deadline=None)
    @given(
        st.integers(min_value=1, max_value=500),
        st.floats(min_value=0.1, max_value=12.0),
        st.data(),
    )
    def test_monotone_in_count(self, m, T, data):
        s1 = data.draw(st.integers(min_value=0, max_value=m))
        s2 = data.draw(st.integers(min_value=s1, max_value=m))
        e1 = estimate_eta_row(np.array([s1]), np.array([m]), T)[0]
        e2 = estimate_eta_row(np.array([s2]), np.array([m]), T)[0]
        assert e1 <= e2 + 1e-12

    def test_validation(self):
        with pytest.raises(ValueError):
            estimate_eta_row(np.array([1]), np.array([10]), 0.0)
        with pytest.raises(ValueError):
            estimate_eta_row(np.array([-1]), np.array([10]), 1.0)
        with pytest.raises(ValueError):
            estimate_eta_row(np.array([11]), np.array([10]), 1.0)
        with pytest.raises(ValueError):
            estimate_eta_row(np.array([0]), np.array([0]), 1.0)


class TestDefaultTruncation:
    def test_values(self):
        assert abs(default_truncation(100) - 2 * np.log(100)) < 1e-12
        assert abs(default_truncation(5) - 2 * np.log(10)) < 1e-12
        assert abs(default_truncation(10000) - 2 * np.log(10000)) < 1e-12


class TestPanelAssembly:
    def test_single_network(self):
        p = models.make_partition(2, 3)
        net = _net_from_edges(p.N, [(0, 1), (1, 2)])
        panel = assemble_panel([net], p, 4.0)
        assert panel.H_hat.shape == (1, 2)
        assert panel.n == 1 and panel.K == 2 and panel.T == 4.0
        np.testing.assert_array_equal(panel.S, [[2, 0]])
        np.testing.assert_array_equal(panel.m, [3, 3])

    def test_duplicated_network_gives_identical_rows(self):
        p = models.make_partition(2, 3)
        net = _net_from_edges(p.N, [(0, 1), (3, 4)])
        panel = assemble_panel([net] * 5, p, 4.0)
        assert panel.H_hat.shape == (5, 2)
        for t in range(1, 5):
            np.testing.assert_array_equal(panel.H_hat[t], panel.H_hat[0])


class TestMeanEstimation:
    def test_constant_panel_recovers_mean(self):
        mu = np.array([0.5, -1.0, 2.0])
        panel = estimation.EtaPanel(H_hat=np.tile(mu, (7, 1)), T=5.0)
        est = estimate_mean_and_beta(panel, np.ones((3, 1)))
        np.testing.assert_allclose(est.mu_hat, mu, atol=1e-12)

    def test_identity_design(self):
        rng = stream(1)
        panel = estimation.EtaPanel(H_hat=rng.standard_normal((10, 4)), T=5.0)
        est = estimate_mean_and_beta(panel, np.eye(4))
        np.testing.assert_allclose(est.beta_hat, est.mu_hat, atol=1e-12)
        assert not est.rank_deficient

    def test_matches_normal_equations(self):
        rng = stream(2)
        X = rng.standard_normal((5, 2))
        panel = estimation.EtaPanel(H_hat=rng.standard_normal((20, 5)), T=5.0)
        est = estimate_mean_and_beta(panel, X)
        oracle = np.linalg.solve(X.T @ X, X.T @ est.mu_hat)
        np.testing.assert_allclose(est.beta_hat, oracle, atol=1e-10)

    def test_rank_deficiency_flagged_not_fatal(self):
        X = np.ones((4, 2))  # duplicate columns
        panel = estimation.EtaPanel(H_hat=np.ones((6, 4)), T=5.0)
        est = estimate_mean_and_beta(panel, X)
        assert est.rank_deficient
        assert np.all(np.isfinite(est.beta_hat))

    def test_mean_recovery_monte_carlo(self):
        spec = CovarianceSpec(kind="ar1", K=4, rho=0.5)
        model = models.make_model(
            spec, models.make_partition(4, 105), beta=np.array([1.0])
        )
        H = models.sample_eta_panel(model, 400, seed=9)
        nets = models.sample_networks(H, model.partition, model.off_diag, seed=9)
        panel = assemble_panel(nets, model.partition, default_truncation(400))
        est = estimate_mean_and_beta(panel, model.X)
        assert np.abs(est.mu_hat - 1.0).max() < 0.2
        assert abs(est.beta_hat[0] - 1.0) < 0.2


class TestCentering:
    def test_zero_mean_is_identity(self):
        rng = stream(3)
        panel = estimation.EtaPanel(H_hat=rng.standard_normal((8, 3)), T=5.0)
        np.testing.assert_array_equal(
            center_panel(panel, np.zeros(3)), panel.H_hat
        )

    def test_estimated_mean_centers_columns(self):
        rng = stream(4)
        panel = estimation.EtaPanel(H_hat=rng.standard_normal((9, 5)), T=5.0)
        mu_hat = estimate_mean_and_beta(panel, np.ones((5, 1))).mu_hat
        centered = center_panel(panel, mu_hat)
        assert np.abs(centered.sum(axis=0)).max() <= 1e-10

    def test_constant_panel_centers_to_zero(self):
        panel = estimation.EtaPanel(H_hat=np.full((6, 2), 1.7), T=5.0)
        mu_hat = estimate_mean_and_beta(panel, np.ones((2, 1))).mu_hat
        np.testing.assert_allclose(center_panel(panel, mu_hat), 0.0, atol=1e-12)

    def test_shape_validation(self):
        panel = estimation.EtaPanel(H_hat=np.zeros((3, 2)), T=5.0)
        with pytest.raises(ValueError):
            center_panel(panel, np.zeros(3))
