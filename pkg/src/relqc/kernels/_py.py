"""Reference numpy kernels.

Qubit 0 is the most significant bit of the amplitude index. All functions
return new arrays; inputs are never modified.
"""
from __future__ import annotations

import numpy as np

_SQRT1_2 = 1.0 / np.sqrt(2.0)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)
_H = np.array([[1, 1], [1, -1]], dtype=complex) * _SQRT1_2
_ID = np.eye(2, dtype=complex)


def _on_qubit(state: np.ndarray, n: int, q: int, matrix: np.ndarray) -> np.ndarray:
    t = np.moveaxis(state.reshape((2,) * n), q, 0)
    t = np.tensordot(matrix, t, axes=([1], [0]))
    return np.ascontiguousarray(np.moveaxis(t, 0, q)).reshape(-1)


def apply_pauli(state: np.ndarray, n: int, target: int, z: int, x: int) -> np.ndarray:
    """Apply ``Z^z X^x`` to ``target``."""
    m = (_Z if z else _ID) @ (_X if x else _ID)
    return _on_qubit(state, n, target, m)


def bell_project(state: np.ndarray, n: int, q1: int, q2: int, m: int, nb: int) -> np.ndarray:
    """Unnormalised projection of ``(q1, q2)`` onto Bell state ``|m nb>``."""
    bell = np.zeros(4, dtype=complex)
    bell[nb] = _SQRT1_2
    bell[2 + (1 - nb)] = (-1) ** m * _SQRT1_2
    t = np.moveaxis(state.reshape((2,) * n), (q1, q2), (0, 1))
    rest_shape = t.shape[2:]
    rest = bell.conj() @ t.reshape(4, -1)
    out = np.outer(bell, rest).reshape((2, 2) + rest_shape)
    return np.ascontiguousarray(np.moveaxis(out, (0, 1), (q1, q2))).reshape(-1)


def basis_project(state: np.ndarray, n: int, q: int, basis: int, outcome: int) -> np.ndarray:
    """Unnormalised projection of qubit ``q``.

    ``basis`` 0 is Z (outcome 0 -> |0>), 1 is X (outcome 0 -> |+>).
    """
    vec = _ID[outcome] if basis == 0 else _H[outcome]
    proj = np.outer(vec, vec.conj())
    return _on_qubit(state, n, q, proj)
