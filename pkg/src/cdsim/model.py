"""Two-level atoms, one cavity mode, dipole-dipole exchange.

Atom 1 sits in the cavity and exchanges excitations with the field at rate
``g``; atom 2 sits outside and only talks to atom 1 through the dipole-dipole
term of strength ``gamma``.  The total excitation number (photons plus excited
atoms) is conserved, so the dynamics starting from ``|g, g, n0>`` never leaves
a subspace of dimension at most four.

Conventions
-----------
* hbar = 1; rates and times are dimensionless.
* sigma_z has eigenvalues +1/2 (excited) and -1/2 (ground).  With this choice
  the free part ``omega * (sz1 + sz2 + a^dag a)`` is the same on every ket of a
  sector, which is what makes the 4x4 block's diagonal uniform.
* Kets are labelled ``(atom1, atom2, photons)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

__all__ = [
    "SystemParams",
    "Ket",
    "SubspaceBasis",
    "Spectrum",
    "AnalyticSpectrum",
    "SectorTooSmallError",
    "build_basis",
    "build_hamiltonian",
    "analytic_spectrum",
    "numeric_eig",
    "spectrum",
    "coupling_at_position",
]

HERMITIAN_TOL = 1e-12


class SectorTooSmallError(ValueError):
    """Raised when a closed form needs the full four-state sector."""


def _is_integer(x) -> bool:
    return isinstance(x, (int, np.integer)) and not isinstance(x, (bool, np.bool_))


@dataclass(frozen=True)
class SystemParams:
    """One physical configuration.

    Parameters
    ----------
    omega : float
        Common transition / mode frequency.  Only shifts the sector energy.
    g : float
        Atom 1 to field coupling, ``g >= 0``.
    gamma : float
        Dipole-dipole coupling between the atoms, ``gamma >= 0``.
    n0 : int
        Photon number of the initial Fock state, ``n0 >= 0``.
    """

    omega: float = 1.0
    g: float = 1.0
    gamma: float = 0.0
    n0: int = 2

    def __post_init__(self):
        for name in ("omega", "g", "gamma"):
            value = getattr(self, name)
            if isinstance(value, (bool, np.bool_)) or not isinstance(value, (int, float, np.integer, np.floating)):
                raise TypeError(f"{name} must be a real number, got {value!r}")
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, float(value))
        if self.g < 0:
            raise ValueError(f"g must be non-negative, got {self.g}")
        if self.gamma < 0:
            raise ValueError(f"gamma must be non-negative, got {self.gamma}")
        if not _is_integer(self.n0):
            raise TypeError(f"n0 must be an integer, got {self.n0!r}")
        if self.n0 < 0:
            raise ValueError(f"n0 must be non-negative, got {self.n0}")
        object.__setattr__(self, "n0", int(self.n0))

    @property
    def sector_n(self) -> int:
        """Photon number of ``|e, e, n>``, i.e. ``n0 - 2`` (negative for small sectors)."""
        return self.n0 - 2

    def replace(self, **changes) -> "SystemParams":
        values = {"omega": self.omega, "g": self.g, "gamma": self.gamma, "n0": self.n0}
        values.update(changes)
        return SystemParams(**values)

    def as_dict(self) -> dict:
        return {"omega": self.omega, "g": self.g, "gamma": self.gamma, "n0": self.n0}


class Ket(NamedTuple):
    atom1: str
    atom2: str
    photons: int

    @property
    def excitation(self) -> int:
        return self.photons + (self.atom1 == "e") + (self.atom2 == "e")

    def __str__(self):
        return f"|{self.atom1},{self.atom2},{self.photons}>"


@dataclass(frozen=True)
class SubspaceBasis:
    excitation: int
    labels: tuple[Ket, ...]

    @property
    def dim(self) -> int:
        return len(self.labels)

    def index(self, ket: Ket) -> int:
        return self.labels.index(ket)


def build_basis(params: SystemParams) -> SubspaceBasis:
    """Ordered kets of the invariant sector reached from ``|g, g, n0>``."""
    e = params.n0
    candidates = [
        Ket("g", "g", e),
        Ket("e", "g", e - 1),
        Ket("g", "e", e - 1),
        Ket("e", "e", e - 2),
    ]
    return SubspaceBasis(e, tuple(k for k in candidates if k.photons >= 0))


def _frozen(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


def build_hamiltonian(params: SystemParams) -> np.ndarray:
    """Hamiltonian restricted to the sector of ``build_basis(params)``.

    Returns a read-only complex ``(dim, dim)`` array.  Off-diagonal entries are
    written once and mirrored, so the result is exactly Hermitian.
    """
    basis = build_basis(params)
    labels = basis.labels
    dim = basis.dim
    h = np.zeros((dim, dim), dtype=complex)
    half = {"e": 0.5, "g": -0.5}
    for i, k in enumerate(labels):
        h[i, i] = params.omega * (half[k.atom1] + half[k.atom2] + k.photons)
    for i, k in enumerate(labels):
        for j in range(i + 1, dim):
            q = labels[j]
            # a sigma1^+ : |g, s, m> -> sqrt(m) |e, s, m-1>
            if k.atom1 == "g" and q.atom1 == "e" and k.atom2 == q.atom2 and q.photons == k.photons - 1:
                h[i, j] = params.g * math.sqrt(k.photons)
            # sigma1^+ sigma2^- : |g, e, m> <-> |e, g, m>
            elif k.photons == q.photons and {k.atom1 + k.atom2, q.atom1 + q.atom2} == {"eg", "ge"}:
                h[i, j] = params.gamma
            h[j, i] = np.conj(h[i, j])
    return _frozen(h)


@dataclass(frozen=True)
class AnalyticSpectrum:
    """Closed-form eigenvalues of the four-state sector.

    ``energies`` holds ``(E1, E2, E3, E4) = (s + A, s - A, s + B, s - B)`` with
    ``s = (n + 1) omega``; ``eigenvalues`` is the same set sorted ascending.
    """

    A: float
    B: float
    C: float
    D: float
    shift: float
    energies: tuple[float, float, float, float]

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.sort(np.array(self.energies))


def analytic_spectrum(params: SystemParams) -> AnalyticSpectrum:
    """Eigenvalues of the four-state sector from the quartic's closed form."""
    if params.n0 < 2:
        raise SectorTooSmallError(
            f"closed-form spectrum needs n0 >= 2 (four-state sector), got n0={params.n0}"
        )
    n = params.n0 - 2
    g2 = params.g**2
    G2 = params.gamma**2
    C = 4 * n * g2 + 6 * g2 + 2 * G2
    D = 2 * math.sqrt(4 * (n + 1) * g2 * G2 + (g2 + G2) ** 2)
    # C >= D exactly; rounding can put D an ulp above C when g << gamma
    D = min(D, C)
    A = math.sqrt(C + D) / 2
    # C - D written as (C^2 - D^2) / (C + D); the direct difference cancels badly for small g.
    C_minus_D = 16 * (n + 1) * (n + 2) * g2 * g2 / (C + D) if C + D > 0 else 0.0
    B = math.sqrt(C_minus_D) / 2
    s = (n + 1) * params.omega
    return AnalyticSpectrum(A, B, C, D, s, (s + A, s - A, s + B, s - B))


@dataclass(frozen=True)
class Spectrum:
    """Eigendecomposition ``H = V diag(eigenvalues) V^dagger``.

    ``aux`` carries the closed-form scalars when they exist (see :func:`spectrum`).
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    aux: AnalyticSpectrum | None = field(default=None, compare=False)

    @property
    def dim(self) -> int:
        return len(self.eigenvalues)

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def _check_hermitian(h: np.ndarray) -> np.ndarray:
    h = np.asarray(h)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {h.shape}")
    if not np.all(np.isfinite(h)):
        raise ValueError("matrix has non-finite entries")
    scale = max(1.0, float(np.max(np.abs(h)))) if h.size else 1.0
    if h.size and np.max(np.abs(h - h.conj().T)) > HERMITIAN_TOL * scale:
        raise ValueError("matrix is not Hermitian")
    return h


def _jacobi_eigh(h: np.ndarray, max_sweeps: int = 60):
    """Cyclic complex Jacobi diagonalisation of a small Hermitian matrix."""
    a = np.array(h, dtype=complex)
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    fro = np.linalg.norm(a)
    if fro == 0.0:
        return np.zeros(n), v
    stop = np.finfo(float).eps * fro * 1e-2
    for _ in range(max_sweeps):
        off = max((abs(a[p, q]) for p in range(n) for q in range(p + 1, n)), default=0.0)
        if off <= stop:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r <= stop:
                    continue
                phase = apq / r
                theta = (a[q, q].real - a[p, p].real) / (2.0 * r)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                # U = diag phase fix on q, then a real plane rotation
                u_pp, u_pq = c, s
                u_qp, u_qq = -s * phase.conjugate(), c * phase.conjugate()
                col_p, col_q = a[:, p].copy(), a[:, q].copy()
                a[:, p] = col_p * u_pp + col_q * u_qp
                a[:, q] = col_p * u_pq + col_q * u_qq
                row_p, row_q = a[p, :].copy(), a[q, :].copy()
                a[p, :] = row_p * np.conj(u_pp) + row_q * np.conj(u_qp)
                a[q, :] = row_p * np.conj(u_pq) + row_q * np.conj(u_qq)
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                col_p, col_q = v[:, p].copy(), v[:, q].copy()
                v[:, p] = col_p * u_pp + col_q * u_qp
                v[:, q] = col_p * u_pq + col_q * u_qq
    else:
        raise RuntimeError("Jacobi iteration did not converge")
    return np.real(np.diag(a)).copy(), v


def numeric_eig(h) -> Spectrum:
    """Full eigendecomposition of a small Hermitian matrix.

    Eigenvalues come back ascending.  Each eigenvector is rotated so its
    largest-magnitude component is real and positive, which makes the output a
    deterministic function of ``h``.

    Raises
    ------
    ValueError
        If ``h`` is not square, not finite, or not Hermitian to 1e-12.
    """
    h = _check_hermitian(h)
    w, v = _jacobi_eigh(h)
    order = np.argsort(w, kind="stable")
    w = w[order]
    v = v[:, order]
    for k in range(v.shape[1]):
        col = v[:, k]
        j = int(np.argmax(np.abs(col)))
        col = col * (abs(col[j]) / col[j])
        col[j] = abs(col[j])
        v[:, k] = col
    return Spectrum(_frozen(w), _frozen(v))


def spectrum(params: SystemParams) -> Spectrum:
    """Numeric spectrum of the sector, with closed-form scalars attached when dim = 4."""
    spec = numeric_eig(build_hamiltonian(params))
    aux = analytic_spectrum(params) if params.n0 >= 2 else None
    return Spectrum(spec.eigenvalues, spec.eigenvectors, aux)


def coupling_at_position(g0, k0, w0, x, y, z):
    """Atom-field coupling at position ``(x, y, z)`` in a standing-wave Gaussian mode.

    ``g0 * sin(k0 z) * exp(-(x^2 + y^2) / w0^2)``.  Broadcasts over array inputs.
    """
    if np.any(np.asarray(g0) < 0):
        raise ValueError("peak coupling g0 must be non-negative")
    if np.any(np.asarray(w0) <= 0):
        raise ValueError("mode width w0 must be positive")
    return g0 * np.sin(k0 * z) * np.exp(-(np.square(x) + np.square(y)) / np.square(w0))
