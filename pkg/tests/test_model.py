import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cdsim.model import (
    Ket,
    SectorTooSmallError,
    SystemParams,
    analytic_spectrum,
    build_basis,
    build_hamiltonian,
    coupling_at_position,
    numeric_eig,
    spectrum,
)

# 40-digit mpmath eigsy of the 4x4 blocks
EIG_W1_G5_GAM05_N3 = [-6.7026264140604292, -5.0366393610371787, 9.0366393610371787, 10.702626414060429]
EIG_W0_G1_GAM1_N2 = [-1.8477590650225735, -0.76536686473017954, 0.76536686473017954, 1.8477590650225735]

params_st = st.builds(
    SystemParams,
    omega=st.floats(0, 10),
    g=st.floats(0, 10),
    gamma=st.floats(0, 5),
    n0=st.integers(0, 30),
)


class TestSystemParams:
    @pytest.mark.parametrize(
        "kwargs",
        [dict(g=-1.0), dict(gamma=-0.1), dict(n0=-1), dict(omega=math.nan), dict(g=math.inf)],
    )
    def test_rejects_invalid(self, kwargs):
        with pytest.raises(ValueError):
            SystemParams(**kwargs)

    @pytest.mark.parametrize("n0", [1.5, "3", True])
    def test_rejects_non_integer_n0(self, n0):
        with pytest.raises(TypeError):
            SystemParams(n0=n0)

    def test_numpy_integer_n0_accepted(self):
        assert SystemParams(n0=np.int64(4)).n0 == 4

    def test_immutable(self):
        p = SystemParams()
        with pytest.raises(AttributeError):
            p.g = 3.0


class TestBasis:
    def test_full_sector(self):
        b = build_basis(SystemParams(n0=3))
        assert b.labels == (Ket("g", "g", 3), Ket("e", "g", 2), Ket("g", "e", 2), Ket("e", "e", 1))
        assert b.dim == 4

    def test_empty_sector(self):
        b = build_basis(SystemParams(n0=0))
        assert b.labels == (Ket("g", "g", 0),)

    def test_single_excitation(self):
        b = build_basis(SystemParams(n0=1))
        assert b.labels == (Ket("g", "g", 1), Ket("e", "g", 0), Ket("g", "e", 0))

    @pytest.mark.parametrize("n0", range(0, 8))
    def test_labels_share_excitation(self, n0):
        b = build_basis(SystemParams(n0=n0))
        assert {k.excitation for k in b.labels} == {n0}
        assert b.dim == {0: 1, 1: 3}.get(n0, 4)


class TestHamiltonian:
    def test_zero_frequency_example(self):
        h = build_hamiltonian(SystemParams(omega=0, g=1, gamma=1, n0=2))
        r2 = math.sqrt(2)
        expected = [[0, r2, 0, 0], [r2, 0, 1, 0], [0, 1, 0, 1], [0, 0, 1, 0]]
        np.testing.assert_array_equal(h, np.array(expected, dtype=complex))

    def test_decoupled_is_identity(self):
        h = build_hamiltonian(SystemParams(omega=1, g=0, gamma=0, n0=2))
        np.testing.assert_array_equal(h, np.eye(4))

    def test_fig2_parameters(self):
        h = build_hamiltonian(SystemParams(omega=1, g=5, gamma=0.5, n0=3))
        np.testing.assert_array_equal(np.diag(h), [2, 2, 2, 2])
        assert h[0, 1] == pytest.approx(8.6602540378, abs=1e-10)
        assert h[1, 2] == 0.5
        assert h[2, 3] == pytest.approx(7.0710678119, abs=1e-10)
        assert h[0, 2] == h[0, 3] == h[1, 3] == 0

    def test_small_sectors(self):
        h1 = build_hamiltonian(SystemParams(omega=2.0, g=0.7, gamma=0.3, n0=1))
        np.testing.assert_array_equal(h1, [[0, 0.7, 0], [0.7, 0, 0.3], [0, 0.3, 0]])
        h0 = build_hamiltonian(SystemParams(omega=2.0, g=0.7, gamma=0.3, n0=0))
        np.testing.assert_array_equal(h0, [[-2.0]])

    def test_read_only(self):
        h = build_hamiltonian(SystemParams())
        with pytest.raises(ValueError):
            h[0, 0] = 1

    @given(params_st)
    def test_exactly_hermitian(self, p):
        h = build_hamiltonian(p)
        assert np.array_equal(h, h.conj().T)

    @given(params_st.filter(lambda p: p.n0 >= 2))
    def test_trace(self, p):
        h = build_hamiltonian(p)
        assert np.trace(h).real == pytest.approx(4 * (p.n0 - 1) * p.omega, abs=1e-12)


class TestAnalyticSpectrum:
    def test_fig2_values(self):
        a = analytic_spectrum(SystemParams(omega=1, g=5, gamma=0.5, n0=3))
        assert a.C == 250.5
        assert a.D == pytest.approx(52.4428260108, abs=1e-9)
        assert a.A == pytest.approx(8.7026264141, abs=1e-9)
        assert a.B == pytest.approx(7.0366393610, abs=1e-9)
        np.testing.assert_allclose(a.eigenvalues, EIG_W1_G5_GAM05_N3, atol=1e-12)

    def test_symmetric_example(self):
        np.testing.assert_allclose(
            analytic_spectrum(SystemParams(omega=0, g=1, gamma=1, n0=2)).eigenvalues, EIG_W0_G1_GAM1_N2, atol=1e-14
        )

    @pytest.mark.parametrize("n0", [2, 3, 10, 30])
    def test_no_dipole_coupling_gives_two_rabi_splittings(self, n0):
        g = 1.7
        a = analytic_spectrum(SystemParams(omega=1, g=g, gamma=0, n0=n0))
        n = n0 - 2
        assert a.D == pytest.approx(2 * g**2, rel=1e-14)
        assert a.A == pytest.approx(g * math.sqrt(n + 2), rel=1e-14)
        assert a.B == pytest.approx(g * math.sqrt(n + 1), rel=1e-14)

    @pytest.mark.parametrize("n0", [0, 1])
    def test_small_sector_rejected(self, n0):
        with pytest.raises(SectorTooSmallError):
            analytic_spectrum(SystemParams(n0=n0))

    @given(params_st.filter(lambda p: p.n0 >= 2))
    def test_trace_sum(self, p):
        a = analytic_spectrum(p)
        assert sum(a.energies) == pytest.approx(4 * (p.n0 - 1) * p.omega, abs=1e-10)

    @given(params_st.filter(lambda p: p.n0 >= 2))
    def test_c_minus_d_identity(self, p):
        # relative to C^2: the difference of two O(C^2) floats cannot resolve more
        a = analytic_spectrum(p)
        n = p.n0 - 2
        assert a.C >= a.D >= 0
        lhs = (a.C - a.D) * (a.C + a.D)
        assert abs(lhs - 16 * (n + 1) * (n + 2) * p.g**4) <= 1e-10 * a.C**2

    @pytest.mark.parametrize("g", [1e-9, 1e-5, 1e-3])
    def test_tiny_coupling_keeps_b_real_and_accurate(self, g):
        p = SystemParams(omega=0.0, g=g, gamma=5.0, n0=12)
        a = analytic_spectrum(p)
        assert a.C >= a.D
        np.testing.assert_allclose(a.eigenvalues, np.linalg.eigvalsh(build_hamiltonian(p)), atol=1e-13)

    @settings(max_examples=300)
    @given(params_st.filter(lambda p: p.n0 >= 2))
    def test_matches_numeric(self, p):
        np.testing.assert_allclose(
            analytic_spectrum(p).eigenvalues, numeric_eig(build_hamiltonian(p)).eigenvalues, rtol=0, atol=1e-10
        )


class TestNumericEig:
    def test_identity(self):
        s = numeric_eig(np.eye(4))
        np.testing.assert_array_equal(s.eigenvalues, [1, 1, 1, 1])
        np.testing.assert_allclose(s.reconstruct(), np.eye(4), atol=1e-14)

    def test_even_spectrum(self):
        w = numeric_eig(build_hamiltonian(SystemParams(omega=0, g=1, gamma=1, n0=2))).eigenvalues
        np.testing.assert_allclose(w, -w[::-1], atol=1e-14)
        np.testing.assert_allclose(w, EIG_W0_G1_GAM1_N2, atol=1e-14)

    def test_fig2_against_reference(self):
        w = numeric_eig(build_hamiltonian(SystemParams(omega=1, g=5, gamma=0.5, n0=3))).eigenvalues
        np.testing.assert_allclose(w, EIG_W1_G5_GAM05_N3, atol=1e-12)

    def test_rejects_non_hermitian(self):
        with pytest.raises(ValueError, match="Hermitian"):
            numeric_eig(np.array([[0, 1], [0, 0]]))

    def test_rejects_non_square(self):
        with pytest.raises(ValueError):
            numeric_eig(np.zeros((2, 3)))

    def test_phase_convention(self, rng):
        m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        s = numeric_eig(m + m.conj().T)
        for col in s.eigenvectors.T:
            j = np.argmax(np.abs(col))
            assert col[j].imag == 0 and col[j].real > 0

    def test_deterministic(self, rng):
        m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        h = m + m.conj().T
        a, b = numeric_eig(h), numeric_eig(h.copy())
        assert np.array_equal(a.eigenvalues, b.eigenvalues)
        assert np.array_equal(a.eigenvectors, b.eigenvectors)

    @pytest.mark.parametrize("dim", [1, 2, 3, 4, 6])
    def test_random_complex_hermitian_against_lapack(self, rng, dim):
        for _ in range(50):
            m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
            h = (m + m.conj().T) * rng.uniform(0.01, 50)
            s = numeric_eig(h)
            scale = np.linalg.norm(h)
            np.testing.assert_allclose(s.eigenvalues, np.linalg.eigvalsh(h), atol=1e-13 * scale)
            np.testing.assert_allclose(s.eigenvectors.conj().T @ s.eigenvectors, np.eye(dim), atol=1e-13)
            np.testing.assert_allclose(s.reconstruct(), h, atol=1e-13 * scale)

    @given(params_st)
    def test_spectrum_invariants(self, p):
        h = build_hamiltonian(p)
        s = numeric_eig(h)
        assert np.all(np.diff(s.eigenvalues) >= 0)
        assert np.max(np.abs(s.eigenvectors.conj().T @ s.eigenvectors - np.eye(s.dim))) <= 1e-10
        assert np.max(np.abs(s.reconstruct() - h)) <= 1e-10

    def test_spectrum_attaches_closed_form(self):
        assert spectrum(SystemParams(n0=3)).aux is not None
        assert spectrum(SystemParams(n0=1)).aux is None


class TestCoupling:
    def test_antinode_on_axis(self):
        k0 = 2.3
        assert coupling_at_position(1.0, k0, 0.5, 0, 0, math.pi / (2 * k0)) == pytest.approx(1.0, abs=1e-15)

    @pytest.mark.parametrize("g0", [0.0, 1.0, 7.5])
    def test_node(self, g0):
        assert coupling_at_position(g0, 1.0, 1.0, 0.3, 0.2, 0.0) == 0

    def test_one_waist_off_axis(self):
        k0, w0 = 1.0, 0.8
        got = coupling_at_position(2.0, k0, w0, w0, 0.0, math.pi / (2 * k0))
        assert got == pytest.approx(0.73575888234288464, abs=1e-15)

    @given(
        st.floats(0, 10), st.floats(0.1, 5), st.floats(0.1, 5),
        st.floats(-5, 5), st.floats(-5, 5), st.floats(-5, 5),
    )
    def test_bounded(self, g0, k0, w0, x, y, z):
        assert abs(coupling_at_position(g0, k0, w0, x, y, z)) <= g0

    def test_invalid(self):
        with pytest.raises(ValueError):
            coupling_at_position(-1, 1, 1, 0, 0, 0)
        with pytest.raises(ValueError):
            coupling_at_position(1, 1, 0, 0, 0, 0)
