import numpy as np
import pytest

from entwit import statezoo
from entwit.criteria import canonical_mes, is_ppt, overlap
from entwit.tensor import Bipartition, DensityMatrix, PureState, SystemShape, bipartitions


def test_w4_amplitudes():
    amps = statezoo.w_state(4).amplitudes
    expected = np.zeros(16)
    expected[[1, 2, 4, 8]] = 0.5
    np.testing.assert_array_equal(amps, expected)


def test_w2():
    np.testing.assert_allclose(statezoo.w_state(2).amplitudes, np.array([0, 1, 1, 0]) / np.sqrt(2))


@pytest.mark.parametrize("m", [2, 3, 5, 7])
def test_w_norm(m):
    assert np.linalg.norm(statezoo.w_state(m).amplitudes) == pytest.approx(1, abs=1e-15)


def test_product_counterexample():
    psi = statezoo.product_counterexample()
    assert psi.shape.dims == (2, 2, 2, 2)
    assert np.count_nonzero(psi.amplitudes) == 2
    assert psi.amplitudes[0] == psi.amplitudes[3] == pytest.approx(1 / np.sqrt(2))


class TestHorodecki:
    def test_endpoints(self):
        mes_minus = np.array([1, 0, 0, -1]) / np.sqrt(2)
        np.testing.assert_allclose(statezoo.horodecki_p_mixture(1).matrix, np.outer(mes_minus, mes_minus), atol=1e-15)
        np.testing.assert_allclose(statezoo.horodecki_p_mixture(0).matrix, np.diag([1, 0, 0, 0]))

    def test_overlap(self):
        psi = PureState([2, 2], np.array([1, 0, 0, -1]) / np.sqrt(2))
        assert overlap(statezoo.horodecki_p_mixture(0.4), psi) == pytest.approx(0.7, abs=1e-15)

    def test_range(self):
        with pytest.raises(ValueError):
            statezoo.horodecki_p_mixture(1.2)


class TestAbMixture:
    def test_counterexample_instance(self):
        rho = statezoo.ab_mixture(0.6, 0.8, 0.495)
        assert rho.matrix[0, 3] == pytest.approx(0.495 * 0.48)
        assert rho.matrix[1, 2] == pytest.approx(0.505 * 0.48)
        assert not is_ppt(rho, Bipartition.of([1], 2))[0]

    def test_mes_endpoint(self):
        a = 1 / np.sqrt(2)
        rho = statezoo.ab_mixture(a, a, 1)
        np.testing.assert_allclose(rho.matrix, canonical_mes(SystemShape([2, 2])).realized.projector().matrix, atol=1e-15)

    def test_half_mixture_is_ppt(self):
        # at p = 1/2 the transpose swaps the two equal ab/2 coherences, leaving the state unchanged
        rng = np.random.default_rng(0)
        for _ in range(100):
            t = rng.uniform(0.01, np.pi / 2 - 0.01)
            ok, lam = is_ppt(statezoo.ab_mixture(np.cos(t), np.sin(t), 0.5), Bipartition.of([1], 2))
            assert ok, lam

    def test_entangled_off_half(self):
        for p in (0.1, 0.49, 0.51, 0.9):
            assert not is_ppt(statezoo.ab_mixture(0.6, 0.8, p), Bipartition.of([1], 2))[0]

    def test_normalization(self):
        with pytest.raises(ValueError):
            statezoo.ab_mixture(0.6, 0.6, 0.5)


class TestNmrState:
    def test_endpoints(self):
        np.testing.assert_allclose(statezoo.nmr_state(0, 2, 3).matrix, np.eye(8) / 8)
        shape = SystemShape([3, 3])
        np.testing.assert_allclose(statezoo.nmr_state(1, 3, 2).matrix,
                                   canonical_mes(shape).realized.projector().matrix, atol=1e-15)

    def test_threshold_overlap(self):
        rho = statezoo.nmr_state(1 / 3, 2, 2)
        assert overlap(rho, canonical_mes(rho.shape)) == pytest.approx(0.5, abs=1e-15)


class TestRandom:
    def test_pure_norm(self):
        for seed in range(100):
            psi = statezoo.random_pure([2, 3, 2], seed)
            assert abs(np.linalg.norm(psi.amplitudes) - 1) < 1e-12

    def test_density_valid(self):
        for seed in range(100):
            rho = statezoo.random_density([3, 3], 1 + seed % 9, seed)
            assert np.linalg.eigvalsh(rho.matrix)[0] >= -1e-12
            assert abs(np.trace(rho.matrix) - 1) < 1e-12

    def test_reproducible(self):
        np.testing.assert_array_equal(statezoo.random_density([2, 2], 3, 9).matrix,
                                      statezoo.random_density([2, 2], 3, 9).matrix)

    @pytest.mark.parametrize("dims,side", [((2, 2), [1]), ((3, 3), [1]), ((2, 2, 2), [1]), ((2, 3, 2), [0, 2])])
    def test_separable_is_ppt(self, dims, side):
        part = Bipartition.of(side, len(dims))
        for seed in range(125):
            rho = statezoo.random_separable(dims, part, 1 + seed % 4, seed)
            assert is_ppt(rho, part)[0]

    def test_separable_ensemble_weights(self):
        ens = statezoo.random_separable_ensemble([2, 3], Bipartition.of([1], 2), 5, 2)
        assert sum(w for w, _, _ in ens.terms) == pytest.approx(1, abs=1e-12)
        assert all(w > 0 for w, _, _ in ens.terms)

    def test_separable_lemma_bound(self):
        for seed in range(30):
            dims = [(2, 2), (3, 3), (2, 2, 2)][seed % 3]
            shape = SystemShape(dims)
            part = bipartitions(shape.m)[seed % len(bipartitions(shape.m))]
            rho = statezoo.random_separable(shape, part, 3, seed)
            for k in range(100):
                assert overlap(rho, statezoo.random_mes(shape, (seed, k))) <= 1 / shape.n_min + 1e-9

    def test_ppt_symmetrized(self):
        for seed in range(50):
            dims = [(2, 2), (3, 3), (2, 2, 2), (2, 4)][seed % 4]
            part = bipartitions(len(dims))[0]
            rho = statezoo.random_ppt(dims, part, 1 + seed % 3, seed)
            assert isinstance(rho, DensityMatrix)
            ok, lam = is_ppt(rho, part)
            assert ok and lam >= -1e-12

    def test_random_mes_is_mes(self):
        shape = SystemShape([3, 3])
        psi = statezoo.random_mes(shape, 4)
        s = np.linalg.svd(psi.amplitudes.reshape(3, 3), compute_uv=False)
        np.testing.assert_allclose(s, np.full(3, 1 / np.sqrt(3)), atol=1e-12)

    @pytest.mark.parametrize("single", [0, 1, 2])
    def test_factorized_triple(self, single):
        psi = statezoo.random_factorized_triple(3, 1, single)
        s = np.linalg.svd(psi.amplitudes.reshape(3, 3, 3).transpose(
            [single] + [p for p in range(3) if p != single]).reshape(3, 9), compute_uv=False)
        assert s[1] < 1e-12
