import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cdsim.dynamics import TwoAtomDensity, initial_state, propagate, reduce_to_atoms
from cdsim.entanglement import (
    SPIN_FLIP,
    concurrence,
    concurrence_many,
    concurrence_pure,
    concurrence_x_state,
    is_x_state,
)
from cdsim.model import SystemParams, build_hamiltonian

from conftest import random_params

SY = np.array([[0, -1j], [1j, 0]])


def ket_dm(v):
    v = np.asarray(v, dtype=complex)
    v = v / np.linalg.norm(v)
    return np.outer(v, v.conj())


def werner(p):
    phi = np.array([1, 0, 0, 1]) / math.sqrt(2)
    return p * np.outer(phi, phi) + (1 - p) / 4 * np.eye(4)


def literal_concurrence(rho):
    """Eigenvalues of rho (sy x sy) rho* (sy x sy) straight from a general eigensolver."""
    yy = np.kron(SY, SY)
    ev = np.linalg.eigvals(rho @ yy @ rho.conj() @ yy)
    lam = np.sort(np.sqrt(np.abs(ev.real)))[::-1]
    return max(0.0, lam[0] - lam[1] - lam[2] - lam[3])


def random_unitary(rng, n):
    q, r = np.linalg.qr(rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_mixed(rng, rank=4):
    m = rng.normal(size=(4, rank)) + 1j * rng.normal(size=(4, rank))
    rho = m @ m.conj().T
    return rho / np.trace(rho).real


def test_spin_flip_matrix():
    np.testing.assert_array_equal(SPIN_FLIP, np.kron(SY, SY))


class TestConcurrence:
    def test_bell_state(self):
        c = concurrence(ket_dm([0, 1, 1, 0]))
        assert abs(c.value - 1) <= 1e-12
        assert c.lambdas[0] == pytest.approx(1, abs=1e-12)

    def test_product_state(self):
        c = concurrence(np.diag([0, 0, 0, 1]))
        assert c.value == 0
        assert all(x >= 0 for x in c.lambdas)

    @pytest.mark.parametrize("p", [0, 0.25, 1 / 3, 0.5, 1])
    def test_werner(self, p):
        assert concurrence(werner(p)).value == pytest.approx(max(0, (3 * p - 1) / 2), abs=1e-10)

    def test_werner_half_is_quarter(self):
        assert concurrence(werner(0.5)).value == pytest.approx(0.25, abs=1e-14)

    def test_accepts_two_atom_density(self):
        rho = TwoAtomDensity(ket_dm([0, 1, 1j, 0]))
        assert concurrence(rho).value == pytest.approx(1, abs=1e-12)

    def test_lambdas_descending(self, rng):
        lam = concurrence(random_mixed(rng)).lambdas
        assert list(lam) == sorted(lam, reverse=True)

    def test_pure_states_closed_form(self, rng):
        for _ in range(300):
            a = rng.normal(size=4) + 1j * rng.normal(size=4)
            a /= np.linalg.norm(a)
            assert abs(concurrence(ket_dm(a)).value - concurrence_pure(a)) <= 1e-10

    def test_full_rank_against_literal_eigenvalues(self, rng):
        for _ in range(200):
            rho = random_mixed(rng)
            assert concurrence(rho).value == pytest.approx(literal_concurrence(rho), abs=1e-8)

    def test_low_rank_against_literal_eigenvalues(self, rng):
        # the literal route loses ~sqrt(eps) on rank-deficient inputs
        for _ in range(100):
            rho = random_mixed(rng, rank=2)
            assert concurrence(rho).value == pytest.approx(literal_concurrence(rho), abs=1e-6)

    def test_local_unitary_invariance(self, rng):
        for _ in range(100):
            rho = random_mixed(rng, rank=int(rng.integers(1, 5)))
            u = np.kron(random_unitary(rng, 2), random_unitary(rng, 2))
            rotated = u @ rho @ u.conj().T
            rotated = (rotated + rotated.conj().T) / 2
            assert concurrence(rotated).value == pytest.approx(concurrence(rho).value, abs=1e-9)

    @settings(max_examples=100)
    @given(st.lists(st.complex_numbers(max_magnitude=1, allow_nan=False, allow_infinity=False), min_size=4, max_size=4))
    def test_bounded(self, amps):
        v = np.array(amps)
        if np.linalg.norm(v) < 1e-3:
            return
        c = concurrence(ket_dm(v)).value
        assert 0 <= c <= 1

    @pytest.mark.parametrize(
        "rho",
        [
            np.diag([0.5, 0.5, 0.5, 0.5]),
            np.diag([1.1, -0.1, 0, 0]),
            np.array([[0.5, 0.2, 0, 0], [0.1, 0.5, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]]),
        ],
    )
    def test_rejects_invalid(self, rho):
        with pytest.raises(ValueError):
            concurrence(rho)

    def test_batch_matches_single(self, rng):
        rhos = np.array([random_mixed(rng, rank=r) for r in (1, 2, 3, 4, 1, 2)])
        batch = concurrence_many(rhos)
        for rho, c in zip(rhos, batch):
            assert c == concurrence(rho).value


class TestXState:
    def test_example(self):
        rho = np.zeros((4, 4))
        rho[1, 1] = rho[2, 2] = 0.5
        rho[1, 2] = rho[2, 1] = 0.3
        assert concurrence_x_state(rho).value == pytest.approx(0.6, abs=1e-15)
        assert concurrence(rho).value == pytest.approx(0.6, abs=1e-12)

    def test_maximally_mixed(self):
        assert concurrence_x_state(np.eye(4) / 4).value == 0

    @pytest.mark.parametrize("p", [0, 0.25, 1 / 3, 0.5, 0.8, 1])
    def test_werner(self, p):
        assert concurrence_x_state(werner(p)).value == pytest.approx(max(0, (3 * p - 1) / 2), abs=1e-14)

    def test_rejects_non_x(self, rng):
        rho = random_mixed(rng)
        assert not is_x_state(rho)
        with pytest.raises(ValueError):
            concurrence_x_state(rho)

    def test_lambdas_match_general_route(self, rng):
        for _ in range(100):
            rho = random_mixed(rng)
            x = np.where(np.eye(4, dtype=bool) | np.eye(4, dtype=bool)[::-1], rho, 0)
            np.testing.assert_allclose(concurrence_x_state(x).lambdas, concurrence(x).lambdas, atol=1e-10)

    def test_evolved_states(self, rng):
        for _ in range(300):
            p = random_params(rng, (0, 30))
            rho = reduce_to_atoms(propagate(build_hamiltonian(p), initial_state(p), rng.uniform(0, 50)))
            assert is_x_state(rho)
            assert abs(concurrence_x_state(rho).value - concurrence(rho).value) <= 1e-10
