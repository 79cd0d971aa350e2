import numpy as np
import pytest

from spinbatt import model
from spinbatt.errors import CapacityError


def random_spec(rng, n_max=6):
    coupling = rng.choice(["none", "nn", "lr"])
    return model.BatterySpec(
        n_spins=int(rng.integers(1, n_max + 1)),
        field_b=1.0,
        omega=float(rng.uniform(0.5, 5.0)),
        g_strength=float(rng.uniform(0.0, 2.0)),
        alpha=float(rng.uniform(-1.0, 1.0)),
        coupling=coupling,
        p=float(rng.uniform(0.0, 2.5)) if coupling == "lr" else 0.0,
    )


class TestBatterySpec:
    def test_validation(self):
        with pytest.raises(ValueError):
            model.BatterySpec(0)
        with pytest.raises(ValueError):
            model.BatterySpec(2, field_b=-1.0)
        with pytest.raises(ValueError):
            model.BatterySpec(2, alpha=1.5)
        with pytest.raises(ValueError):
            model.BatterySpec(2, g_strength=-0.1)
        with pytest.raises(ValueError):
            model.BatterySpec(2, coupling="ring")
        with pytest.raises(ValueError):
            model.BatterySpec(2, coupling="lr", p=-1.0)

    def test_dense_capacity_rejected(self):
        # the spec itself is fine (mean-field runs at any N) but dense
        # operators are not
        spec = model.BatterySpec(15, omega=1.0)
        with pytest.raises(CapacityError):
            model.assemble(spec)
        with pytest.raises(CapacityError):
            model.build_v(spec)


class TestCoupling:
    def test_nn_three_spins(self):
        c = model.build_coupling(model.BatterySpec(3, g_strength=1.0, coupling="nn"))
        assert c.matrix[0, 1] == 1.0 and c.matrix[1, 2] == 1.0
        assert c.matrix[0, 2] == 0.0
        assert c.total == 2.0

    def test_lr_p1_three_spins(self):
        c = model.build_coupling(model.BatterySpec(3, g_strength=1.0, coupling="lr", p=1.0))
        assert c.matrix[0, 2] == 0.5
        assert c.total == 2.5

    def test_lr_p0_is_uniform(self):
        c = model.build_coupling(model.BatterySpec(5, g_strength=2.0, coupling="lr", p=0.0))
        off = c.matrix[~np.eye(5, dtype=bool)]
        assert np.all(off == 2.0)
        assert c.total == 20.0  # 2 * C(5, 2)

    def test_none_is_zero(self):
        c = model.build_coupling(model.BatterySpec(4, g_strength=3.0, coupling="none"))
        assert not c.matrix.any() and c.total == 0.0

    def test_symmetry_zero_diagonal(self):
        rng = np.random.default_rng(7)
        for _ in range(10):
            c = model.build_coupling(random_spec(rng)).matrix
            assert np.array_equal(c, c.T)
            assert not np.diagonal(c).any()

    def test_large_p_limits_to_nn(self):
        nn = model.build_coupling(model.BatterySpec(6, g_strength=1.5, coupling="nn"))
        lr = model.build_coupling(model.BatterySpec(6, g_strength=1.5, coupling="lr", p=60.0))
        assert np.allclose(lr.matrix, nn.matrix, atol=1e-15)


class TestZeeman:
    def test_single_spin(self):
        h = model.build_h_b(model.BatterySpec(1, field_b=1.0))
        assert np.array_equal(h, np.diag([1.0, -1.0]))  # down state lowest

    def test_two_spins(self):
        h = model.build_h_b(model.BatterySpec(2, field_b=1.0))
        assert np.array_equal(h, np.diag([2.0, 0.0, 0.0, -2.0]))

    @pytest.mark.parametrize("n", [1, 3, 5])
    def test_all_down_expectation(self, n):
        h = model.build_h_b(model.BatterySpec(n, field_b=1.0))
        assert h[-1, -1] == -n


class TestExchange:
    def test_all_down_expectation_is_minus_g(self):
        rng = np.random.default_rng(11)
        for _ in range(10):
            spec = random_spec(rng)
            c = model.build_coupling(spec)
            h = model.build_h_g(spec, c)
            assert h[-1, -1] == pytest.approx(-c.total, abs=1e-13)

    def test_ising_two_spins(self):
        spec = model.BatterySpec(2, g_strength=1.0, alpha=0.0, coupling="nn")
        assert np.array_equal(model.build_h_g(spec), np.diag([-1.0, 1.0, 1.0, -1.0]))

    @pytest.mark.parametrize("seed", range(4))
    def test_isotropic_commutes_with_drive(self, seed):
        rng = np.random.default_rng(seed)
        base = random_spec(rng)
        spec = model.BatterySpec(max(base.n_spins, 2), 1.0, base.omega,
                                 base.g_strength, 1.0,
                                 base.coupling if base.coupling != "none" else "nn",
                                 base.p)
        hg = model.build_h_g(spec)
        v = model.build_v(spec)
        comm = v @ hg - hg @ v
        scale = np.linalg.norm(v) * np.linalg.norm(hg)
        assert np.abs(comm).max() <= 1e-12 * max(scale, 1.0)


class TestDrive:
    def test_single_spin(self):
        v = model.build_v(model.BatterySpec(1, omega=2.0))
        assert np.array_equal(v, [[0.0, 2.0], [2.0, 0.0]])

    def test_traceless(self):
        rng = np.random.default_rng(3)
        for _ in range(5):
            assert np.trace(model.build_v(random_spec(rng))) == 0.0

    def test_single_flip_structure(self):
        # |dd> couples to |ud> and |du> only, each with amplitude omega
        v = model.build_v(model.BatterySpec(2, omega=1.0))
        assert list(v[3]) == [0.0, 1.0, 1.0, 0.0]


class TestAssemble:
    def test_noninteracting_limit(self):
        spec = model.BatterySpec(3, 1.0, 2.0, 0.0, 0.5, "none")
        _, h = model.assemble(spec)
        assert np.array_equal(h, model.build_v(spec))

    def test_h0_is_sum(self):
        spec = model.BatterySpec(3, 1.0, 2.0, 1.0, 0.5, "nn")
        h0, h = model.assemble(spec)
        assert np.allclose(h0, model.build_h_b(spec) + model.build_h_g(spec))
        assert np.allclose(h, model.build_h_g(spec) + model.build_v(spec))

    def test_hermitian_and_real(self):
        rng = np.random.default_rng(19)
        for _ in range(8):
            h0, h = model.assemble(random_spec(rng))
            for a in (h0, h):
                assert np.isrealobj(a)
                norm = max(np.abs(a).max(), 1.0)
                assert np.abs(a - a.T).max() <= 1e-12 * norm

    def test_isotropic_spectrum_splits_into_sectors(self):
        # [V, H_g] = 0 at alpha=1, so the spectrum of H decomposes into
        # sums of V and H_g eigenvalues on a common eigenbasis.  Oracle:
        # diagonalize V + gamma H_g at a generic gamma to get that basis.
        spec = model.BatterySpec(3, 1.0, 1.7, 0.8, 1.0, "lr", 1.0)
        hg = model.build_h_g(spec)
        v = model.build_v(spec)
        _, q = np.linalg.eigh(v + 0.61803398875 * hg)
        v_diag = np.einsum("ij,ik,kj->j", q, v, q)
        g_diag = np.einsum("ij,ik,kj->j", q, hg, q)
        expected = np.sort(v_diag + g_diag)
        actual = np.linalg.eigvalsh(hg + v)
        assert np.allclose(actual, expected, atol=1e-10)

    def test_strong_coupling_doublet_gap(self):
        # lowest doublet separated from the rest by ~2g
        spec = model.BatterySpec(2, 1.0, 3.0, 20.0, 0.0, "nn")
        _, h = model.assemble(spec)
        w = np.linalg.eigvalsh(h)
        sep = w[2] - w[1]
        assert 20.0 < sep < 60.0


class TestPauliTerms:
    def test_duplicate_site_rejected(self):
        with pytest.raises(ValueError):
            model.PauliTerm(1.0, ((0, "x"), (0, "z")))

    def test_unknown_axis_rejected(self):
        with pytest.raises(ValueError):
            model.PauliTerm(1.0, ((0, "w"),))

    def test_builders_match_tensor_products(self):
        # real flip-flop assembly vs textbook complex tensor products
        spec = model.BatterySpec(3, 1.3, 0.9, 0.7, -0.4, "lr", 1.2)
        c = model.build_coupling(spec)
        terms = [model.PauliTerm(spec.field_b, ((i, "z"),)) for i in range(3)]
        ref_hb = sum(model.pauli_term_matrix(t, 3) for t in terms)
        assert np.abs(model.build_h_b(spec) - ref_hb).max() < 1e-14

        ref_hg = np.zeros((8, 8), dtype=complex)
        for i in range(3):
            for j in range(i + 1, 3):
                gij = c.matrix[i, j]
                for ax, w in (("z", 1.0), ("x", spec.alpha), ("y", spec.alpha)):
                    t = model.PauliTerm(-gij * w, ((i, ax), (j, ax)))
                    ref_hg += model.pauli_term_matrix(t, 3)
        assert np.abs(ref_hg.imag).max() < 1e-14
        assert np.abs(model.build_h_g(spec, c) - ref_hg.real).max() < 1e-14

        ref_v = sum(model.pauli_term_matrix(model.PauliTerm(spec.omega, ((i, "x"),)), 3)
                    for i in range(3))
        assert np.abs(model.build_v(spec) - ref_v).max() < 1e-14


def test_pauli_sum_matches_single_site_terms():
    for ax in "xyz":
        ref = sum(model.pauli_term_matrix(model.PauliTerm(1.0, ((i, ax),)), 2)
                  for i in range(2))
        assert np.abs(model.pauli_sum(ax, 2) - ref).max() < 1e-14
