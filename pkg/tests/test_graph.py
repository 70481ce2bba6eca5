import numpy as np
import pytest
import sympy
from numpy.testing import assert_allclose, assert_array_equal

from netzo import (Topology, TopologyError, complete, consensus_step,
                   disagreement, erdos_renyi, laplacian, network_average,
                   ring, spectrum)


def path2():
    return Topology(2, frozenset({(0, 1)}))


class TestTopology:
    def test_ring_structure(self):
        t = ring(5)
        assert t.n == 5
        assert t.edge_count == 5
        assert_array_equal(t.degrees(), [2] * 5)

    def test_ring_too_small(self):
        with pytest.raises(TopologyError):
            ring(2)

    def test_rejects_self_loop(self):
        with pytest.raises(TopologyError, match="self-loop"):
            Topology(3, frozenset({(0, 0), (0, 1), (1, 2)}))

    def test_rejects_out_of_range(self):
        with pytest.raises(TopologyError, match="out of range"):
            Topology(3, frozenset({(0, 3)}))

    def test_rejects_disconnected(self):
        with pytest.raises(TopologyError, match="disconnected"):
            Topology(4, frozenset({(0, 1), (2, 3)}))

    def test_edges_stored_unordered(self):
        assert Topology(3, frozenset({(1, 0), (2, 1), (0, 2)})) == ring(3)


class TestErdosRenyi:
    def test_connected_sample(self):
        t = erdos_renyi(10, 0.4, seed=7)
        assert t.n == 10
        assert t._connected()

    def test_prob_one_is_complete(self):
        assert erdos_renyi(2, 1.0, seed=0).edges == frozenset({(0, 1)})
        assert erdos_renyi(5, 1.0, seed=0) == complete(5)

    def test_seed_determinism(self):
        a = erdos_renyi(10, 0.4, seed=123)
        b = erdos_renyi(10, 0.4, seed=123)
        assert a.edges == b.edges

    def test_low_prob_still_connected(self):
        # Forces the resampling path with high probability.
        t = erdos_renyi(12, 0.12, seed=5)
        assert t._connected()

    def test_bad_parameters(self):
        with pytest.raises(TopologyError):
            erdos_renyi(1, 0.5, seed=0)
        with pytest.raises(TopologyError):
            erdos_renyi(5, 0.0, seed=0)


class TestLaplacian:
    def test_single_edge(self):
        assert_array_equal(laplacian(path2()), [[1.0, -1.0], [-1.0, 1.0]])

    def test_triangle(self):
        L = laplacian(ring(3))
        assert_array_equal(np.diag(L), [2.0, 2.0, 2.0])
        assert_array_equal(L - np.diag(np.diag(L)), -(1 - np.eye(3)))

    def test_row_sums_zero(self):
        L = laplacian(erdos_renyi(10, 0.4, seed=2))
        assert_array_equal(L.sum(axis=1), np.zeros(10))
        assert_array_equal(L, L.T)

    def test_positive_semidefinite(self):
        for t in (ring(6), erdos_renyi(8, 0.5, seed=4), complete(4)):
            eigs = np.linalg.eigvalsh(laplacian(t))
            assert eigs.min() > -1e-12


class TestSpectrum:
    @pytest.mark.parametrize(
        "topology, rho2, rho_L2, alpha_max",
        [
            (ring(3), 3.0, 9.0, 1.0 / 6.0),
            (path2(), 2.0, 4.0, 0.25),
            (complete(5), 5.0, 25.0, 0.1),
        ],
    )
    def test_known_spectra(self, topology, rho2, rho_L2, alpha_max):
        s = spectrum(laplacian(topology))
        assert_allclose(s.rho2, rho2, rtol=1e-12)
        assert_allclose(s.rho_L2, rho_L2, rtol=1e-12)
        assert_allclose(s.alpha_max, alpha_max, rtol=1e-12)

    def test_ring4_closed_form(self):
        # Cycle eigenvalues are 2 - 2 cos(2 pi k / n).
        s = spectrum(laplacian(ring(4)))
        assert_allclose(sorted(s.eigenvalues), [0.0, 2.0, 2.0, 4.0], atol=1e-9)

    @pytest.mark.parametrize("topology", [ring(3), ring(5), path2(), complete(4),
                                          erdos_renyi(6, 0.5, seed=3)])
    def test_matches_symbolic_eigensolve(self, topology):
        # Independent oracle: exact symbolic eigenvalues of the integer Laplacian.
        L = laplacian(topology)
        expected = sorted(
            float(value)
            for value, multiplicity in sympy.Matrix(L.astype(int)).eigenvals().items()
            for _ in range(multiplicity)
        )
        assert_allclose(sorted(spectrum(L).eigenvalues), expected, atol=1e-7)

    def test_disconnected_raises(self):
        L = np.block([[laplacian(ring(3)), np.zeros((3, 2))],
                      [np.zeros((2, 3)), laplacian(path2())]])
        with pytest.raises(TopologyError, match="disconnected"):
            spectrum(L)

    def test_rejects_bad_matrices(self):
        with pytest.raises(ValueError):
            spectrum(np.array([[1.0, -1.0], [0.0, 1.0]]))
        with pytest.raises(ValueError):
            spectrum(np.array([[1.0, 1.0], [1.0, 1.0]]))


class TestConsensusStep:
    def test_fixed_point_at_consensus(self):
        L = laplacian(ring(4))
        x = np.tile([2.0, -1.0, 0.5], (4, 1))
        assert_array_equal(consensus_step(x, L, 0.1), x)

    def test_zero_gain_is_identity(self):
        rng = np.random.default_rng(0)
        x = rng.standard_normal((5, 3))
        assert_array_equal(consensus_step(x, laplacian(ring(5)), 0.0), x)

    def test_two_agent_hand_value(self):
        x = np.array([[1.0], [0.0]])
        out = consensus_step(x, laplacian(path2()), 0.25)
        assert_allclose(out, [[0.75], [0.25]], rtol=0, atol=0)

    def test_preserves_network_average(self):
        rng = np.random.default_rng(1)
        L = laplacian(erdos_renyi(7, 0.5, seed=9))
        x = rng.standard_normal((7, 4))
        out = consensus_step(x, L, 0.08)
        assert_allclose(network_average(out), network_average(x), atol=1e-14)

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            consensus_step(np.zeros((3, 2)), laplacian(ring(4)), 0.1)
        with pytest.raises(ValueError):
            consensus_step(np.zeros(8), laplacian(ring(4)), 0.1)

    def test_contracts_disagreement(self):
        # Geometric decay below alpha_max: negative slope of log disagreement.
        t = ring(5)
        L = laplacian(t)
        alpha = 0.9 * spectrum(L).alpha_max
        rng = np.random.default_rng(3)
        x = rng.standard_normal((5, 2))
        values = []
        for _ in range(30):
            values.append(disagreement(x))
            x = consensus_step(x, L, alpha)
        values = np.array(values)
        assert np.all(np.diff(values) < 0)
        slope = np.polyfit(np.arange(30), np.log(values), 1)[0]
        assert slope < -0.05


class TestAverages:
    def test_identical_blocks(self):
        x = np.tile([1.5, -2.0], (6, 1))
        assert_array_equal(network_average(x), [1.5, -2.0])
        assert disagreement(x) == 0.0

    def test_antisymmetric_pair(self):
        x = np.array([[1.0], [-1.0]])
        assert_array_equal(network_average(x), [0.0])
        assert disagreement(x) == 1.0

    def test_matches_brute_force(self):
        rng = np.random.default_rng(5)
        x = rng.standard_normal((9, 4))
        mean = sum(x[i] for i in range(9)) / 9
        assert_allclose(network_average(x), mean, rtol=1e-15)
        brute = sum(float(np.sum((x[i] - mean) ** 2)) for i in range(9)) / 9
        assert_allclose(disagreement(x), brute, rtol=1e-12)
