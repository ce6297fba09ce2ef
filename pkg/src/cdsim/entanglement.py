"""Two-qubit concurrence.

Both routines take a 4x4 density matrix in the atom basis ``|ee>, |eg>, |ge>,
|gg>`` (or a :class:`~cdsim.dynamics.TwoAtomDensity`).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import TwoAtomDensity, check_density

__all__ = [
    "ConcurrenceValue",
    "concurrence",
    "concurrence_x_state",
    "concurrence_many",
    "concurrence_pure",
    "is_x_state",
]

X_TOL = 1e-12

_SY = np.array([[0, -1j], [1j, 0]])
SPIN_FLIP = np.kron(_SY, _SY).real  # sigma_y (x) sigma_y is real: antidiag(-1, 1, 1, -1)

# entries allowed to be nonzero in an X state: diagonal and anti-diagonal
_X_MASK = np.eye(4, dtype=bool) | np.eye(4, dtype=bool)[::-1]


@dataclass(frozen=True)
class ConcurrenceValue:
    value: float
    lambdas: tuple[float, float, float, float]

    def __float__(self):
        return self.value


def _as_array(rho) -> np.ndarray:
    m = rho.matrix if isinstance(rho, TwoAtomDensity) else np.asarray(rho, dtype=complex)
    if m.shape[-2:] != (4, 4):
        raise ValueError(f"expected 4x4 density matrices, got shape {m.shape}")
    return m


def _lambdas(rhos: np.ndarray) -> np.ndarray:
    """Square roots of the eigenvalues of ``rho Y rho* Y``, descending, for a stack.

    With ``rho = W W^dagger`` these are the singular values of ``W^dagger Y W*``,
    which avoids the square root of tiny, noise-dominated eigenvalues.
    """
    w = check_density(rhos)
    _, v = np.linalg.eigh(rhos)
    root = v * np.sqrt(w)[..., None, :]
    m = np.conj(np.swapaxes(root, -1, -2)) @ SPIN_FLIP @ np.conj(root)
    return np.linalg.svd(m, compute_uv=False)


def concurrence_many(rhos) -> np.ndarray:
    """Concurrence of each matrix in a ``(N, 4, 4)`` stack.

    Each matrix is processed independently, so results do not depend on how a
    batch is partitioned.
    """
    return _from_lambdas(_lambdas(_as_array(rhos)))


def _from_lambdas(lam: np.ndarray) -> np.ndarray:
    c = lam[..., 0] - lam[..., 1] - lam[..., 2] - lam[..., 3]
    return np.minimum(np.maximum(c, 0.0), 1.0) + 0.0


def concurrence(rho) -> ConcurrenceValue:
    """Wootters concurrence ``max(0, l1 - l2 - l3 - l4)``.

    The ``l_i`` are the square roots of the eigenvalues of
    ``rho (sy x sy) rho* (sy x sy)`` in decreasing order, with ``rho*`` the
    entrywise conjugate in the atom basis.

    Raises
    ------
    ValueError
        If ``rho`` is not Hermitian, not unit trace, or has an eigenvalue
        below -1e-10.
    """
    m = _as_array(rho)
    lam = _lambdas(m[None])[0]
    value = float(_from_lambdas(lam))
    return ConcurrenceValue(value, tuple(float(x) for x in lam))


def is_x_state(rho, tol: float = X_TOL) -> bool:
    m = _as_array(rho)
    return bool(np.all(np.abs(m[~_X_MASK]) <= tol))


def concurrence_x_state(rho) -> ConcurrenceValue:
    """Closed-form concurrence for X-shaped density matrices.

    Only the diagonal and the ``(ee, gg)`` and ``(eg, ge)`` coherences may be
    nonzero; anything else above 1e-12 raises ``ValueError``.
    """
    m = _as_array(rho)
    if not is_x_state(m):
        raise ValueError("density matrix is not an X state")
    d = np.real(np.diag(m))
    if np.any(d < -1e-10):
        raise ValueError("negative population on the diagonal")
    d = np.maximum(d, 0.0)
    outer = np.sqrt(d[0] * d[3])  # ee, gg
    inner = np.sqrt(d[1] * d[2])  # eg, ge
    c_outer = abs(m[0, 3])
    c_inner = abs(m[1, 2])
    lam = sorted(
        (max(outer + c_outer, 0.0), max(outer - c_outer, 0.0), max(inner + c_inner, 0.0), max(inner - c_inner, 0.0)),
        reverse=True,
    )
    value = 2.0 * max(0.0, c_inner - outer, c_outer - inner)
    return ConcurrenceValue(min(value, 1.0), tuple(float(x) for x in lam))


def concurrence_pure(amplitudes) -> float:
    """``2 |ad - bc|`` for a normalised pure state ``a|ee> + b|eg> + c|ge> + d|gg>``."""
    a, b, c, d = np.asarray(amplitudes, dtype=complex)
    return float(2.0 * abs(a * d - b * c))
