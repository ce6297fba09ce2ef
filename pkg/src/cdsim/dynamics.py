"""Exact unitary evolution inside a sector and reduction to the atom pair."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .model import Spectrum, SubspaceBasis, SystemParams, build_basis, numeric_eig

__all__ = [
    "ATOM_BASIS",
    "StateVector",
    "TwoAtomDensity",
    "Propagator",
    "initial_state",
    "propagate",
    "propagate_expm",
    "reduce_to_atoms",
    "reduce_amplitudes",
]

NORM_TOL = 1e-12
PSD_TOL = 1e-10

# atom1 (x) atom2, excited first
ATOM_BASIS = ("ee", "eg", "ge", "gg")
_ATOM_INDEX = {name: i for i, name in enumerate(ATOM_BASIS)}


@dataclass(frozen=True)
class StateVector:
    basis: SubspaceBasis
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex)
        if amps.shape != (self.basis.dim,):
            raise ValueError(f"expected {self.basis.dim} amplitudes, got shape {amps.shape}")
        norm2 = float(np.vdot(amps, amps).real)
        if abs(norm2 - 1.0) > NORM_TOL:
            raise ValueError(f"state is not normalised: |psi|^2 = {norm2!r}")
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    @property
    def norm(self) -> float:
        return float(np.sqrt(np.vdot(self.amplitudes, self.amplitudes).real))


@dataclass(frozen=True)
class TwoAtomDensity:
    """Reduced state of the two atoms in the basis ``ATOM_BASIS``.

    Construction checks Hermiticity and unit trace to 1e-12 and positivity to
    -1e-10.
    """

    matrix: np.ndarray

    def __post_init__(self):
        rho = np.array(self.matrix, dtype=complex)
        if rho.shape != (4, 4):
            raise ValueError(f"two-atom density must be 4x4, got {rho.shape}")
        check_density(rho[None])
        rho.flags.writeable = False
        object.__setattr__(self, "matrix", rho)

    def __getitem__(self, key):
        """``rho["eg", "ge"]`` style access by atom labels."""
        i, j = key
        return self.matrix[_ATOM_INDEX[i], _ATOM_INDEX[j]]


class DensityMatrixError(ValueError):
    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


def check_density(rhos: np.ndarray) -> np.ndarray:
    """Validate a stack of 4x4 density matrices; return their eigenvalues clipped at 0.

    Eigenvalues in ``[-1e-10, 0)`` are set to zero, anything more negative is an
    error.  Raises :class:`DensityMatrixError` carrying the first bad index.
    """
    herm = np.max(np.abs(rhos - np.conj(np.swapaxes(rhos, -1, -2))), axis=(-1, -2))
    bad = np.flatnonzero(herm > NORM_TOL)
    if bad.size:
        raise DensityMatrixError(f"density matrix not Hermitian (deviation {herm[bad[0]]:.3e})", int(bad[0]))
    tr = np.trace(rhos, axis1=-2, axis2=-1)
    bad = np.flatnonzero(np.abs(tr - 1.0) > NORM_TOL)
    if bad.size:
        raise DensityMatrixError(f"density matrix trace is {tr[bad[0]]!r}, expected 1", int(bad[0]))
    w = np.linalg.eigvalsh(rhos)
    bad = np.flatnonzero(w.min(axis=-1) < -PSD_TOL)
    if bad.size:
        raise DensityMatrixError(
            f"density matrix has eigenvalue {w[bad[0]].min():.3e} below -{PSD_TOL:g}", int(bad[0])
        )
    return np.maximum(w, 0.0)


def initial_state(params: SystemParams) -> StateVector:
    """Both atoms in the ground state, field in the Fock state ``|n0>``."""
    basis = build_basis(params)
    amps = np.zeros(basis.dim, dtype=complex)
    amps[0] = 1.0
    return StateVector(basis, amps)


def _state_array(psi0, dim: int) -> np.ndarray:
    amps = psi0.amplitudes if isinstance(psi0, StateVector) else np.asarray(psi0, dtype=complex)
    if amps.shape != (dim,):
        raise ValueError(f"state has {amps.shape[0] if amps.ndim else 0} amplitudes but H is {dim}x{dim}")
    return amps


def _wrap(psi0, amps: np.ndarray):
    if isinstance(psi0, StateVector):
        return StateVector(psi0.basis, amps)
    return amps


class Propagator:
    """Spectral propagator ``V exp(-i diag(w) t) V^dagger`` for a fixed Hamiltonian.

    Diagonalises once; :meth:`amplitudes` then evaluates many times.  The
    per-time arithmetic is elementwise with a fixed summation order, so a given
    ``t`` yields bit-identical amplitudes whatever other times are requested
    alongside it.
    """

    def __init__(self, h_or_spectrum):
        if isinstance(h_or_spectrum, Spectrum):
            self.spectrum = h_or_spectrum
        else:
            self.spectrum = numeric_eig(h_or_spectrum)

    @property
    def dim(self) -> int:
        return self.spectrum.dim

    def amplitudes(self, psi0, times) -> np.ndarray:
        """Evolved amplitudes, shape ``(len(times), dim)``."""
        amps = _state_array(psi0, self.dim)
        times = np.atleast_1d(np.asarray(times, dtype=float))
        w = self.spectrum.eigenvalues
        v = self.spectrum.eigenvectors
        coeffs = v.conj().T @ amps
        z = np.exp(-1j * np.multiply.outer(times, w)) * coeffs
        out = np.zeros((times.size, self.dim), dtype=complex)
        for k in range(self.dim):
            out += z[:, k, None] * v[None, :, k]
        # exp(0) is the identity; skip the V V^dagger round trip
        out[times == 0] = amps
        return out

    def __call__(self, psi0, t: float):
        return _wrap(psi0, self.amplitudes(psi0, [t])[0])


def propagate(h, psi0, t: float):
    """Evolve ``psi0`` under ``h`` for time ``t`` (negative ``t`` runs backwards).

    Uses the eigendecomposition of ``h``.  Returns a :class:`StateVector` when
    given one, otherwise a plain amplitude array.
    """
    return Propagator(h)(psi0, t)


def propagate_expm(h, psi0, t: float):
    """Same contract as :func:`propagate`, via a scaling-and-squaring matrix exponential."""
    h = np.asarray(h, dtype=complex)
    amps = _state_array(psi0, h.shape[0])
    # trace shift keeps the exponent's norm (and the squaring count) small
    mu = np.trace(h).real / h.shape[0]
    shifted = h - mu * np.eye(h.shape[0])
    u = scipy.linalg.expm(-1j * t * shifted) * np.exp(-1j * mu * t)
    return _wrap(psi0, u @ amps)


def reduce_amplitudes(basis: SubspaceBasis, amps: np.ndarray) -> np.ndarray:
    """Partial trace over the field for a stack of sector states.

    ``amps`` has shape ``(..., dim)``; returns ``(..., 4, 4)`` in ``ATOM_BASIS``
    order.  Only kets with equal photon number interfere.
    """
    amps = np.asarray(amps, dtype=complex)
    rho = np.zeros(amps.shape[:-1] + (4, 4), dtype=complex)
    labels = basis.labels
    for i, ki in enumerate(labels):
        a = _ATOM_INDEX[ki.atom1 + ki.atom2]
        for j, kj in enumerate(labels):
            if ki.photons != kj.photons:
                continue
            b = _ATOM_INDEX[kj.atom1 + kj.atom2]
            rho[..., a, b] += amps[..., i] * np.conj(amps[..., j])
    return rho


def reduce_to_atoms(psi: StateVector) -> TwoAtomDensity:
    """Two-atom density matrix ``sum_n <n| psi><psi |n>``."""
    return TwoAtomDensity(reduce_amplitudes(psi.basis, psi.amplitudes))
