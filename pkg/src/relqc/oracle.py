"""Dense state-vector ground truth for small qubit registers.

Only the label types are shared with :mod:`relqc.pauli`; the swapping and
teleportation rules are never used here, so every prediction made by the
Pauli frame can be checked against an independent Born-rule calculation.

Qubit 0 is the most significant bit of the amplitude index.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import kernels
from .pauli import BellIndex, PauliOp

MAX_QUBITS = 8
NORM_TOL = 1e-9
FIDELITY_TOL = 1e-9

_S = 1.0 / np.sqrt(2.0)
_KETS = {
    "0": np.array([1, 0], dtype=complex),
    "1": np.array([0, 1], dtype=complex),
    "+": np.array([_S, _S], dtype=complex),
    "-": np.array([_S, -_S], dtype=complex),
}
_BELL_ORDER = (BellIndex(0, 0), BellIndex(0, 1), BellIndex(1, 0), BellIndex(1, 1))


class OracleError(RuntimeError):
    pass


class CapacityError(OracleError):
    pass


class StateVector:
    """Normalised pure state on ``qubit_count`` qubits."""

    __slots__ = ("amplitudes", "qubit_count")

    def __init__(self, amplitudes, *, check: bool = True):
        amps = np.asarray(amplitudes, dtype=complex).reshape(-1)
        n = amps.size.bit_length() - 1
        if amps.size != 1 << n or n < 1:
            raise ValueError(f"length {amps.size} is not a power of two")
        if n > MAX_QUBITS:
            raise CapacityError(f"{n} qubits exceeds oracle capacity of {MAX_QUBITS}")
        if check:
            norm = np.vdot(amps, amps).real
            if abs(norm - 1.0) > NORM_TOL:
                raise ValueError(f"state norm {norm!r} differs from 1")
        self.amplitudes = amps
        self.qubit_count = n

    def __repr__(self) -> str:
        return f"StateVector(qubits={self.qubit_count}, amplitudes={self.amplitudes!r})"

    def norm(self) -> float:
        return float(np.sqrt(np.vdot(self.amplitudes, self.amplitudes).real))

    def _check_qubit(self, q: int) -> None:
        if not 0 <= q < self.qubit_count:
            raise IndexError(f"qubit {q} out of range for {self.qubit_count}-qubit state")


@dataclass(frozen=True)
class MeasurementRecord:
    outcome: BellIndex
    probability: float
    post_state: StateVector


@dataclass(frozen=True)
class QubitMeasurement:
    outcome: int
    probability: float
    post_state: StateVector


def ket(label: str) -> StateVector:
    """One of ``"0"``, ``"1"``, ``"+"``, ``"-"``."""
    return StateVector(_KETS[label])


def tensor(*states: StateVector) -> StateVector:
    amps = states[0].amplitudes
    for s in states[1:]:
        amps = np.kron(amps, s.amplitudes)
    return StateVector(amps)


def prepare_bell(idx: BellIndex) -> StateVector:
    m, n = idx
    amps = np.zeros(4, dtype=complex)
    amps[n] = _S  # |0>|n>
    amps[2 | (1 - n)] = (-1) ** m * _S  # |1>|1+n>
    return StateVector(amps)


def apply_pauli(s: StateVector, target: int, p: PauliOp) -> StateVector:
    s._check_qubit(target)
    if not (p.z or p.x):
        return s
    return StateVector(kernels.apply_pauli(s.amplitudes, s.qubit_count, target, p.z, p.x), check=False)


def bell_probabilities(s: StateVector, q1: int, q2: int) -> dict[BellIndex, float]:
    _check_pair(s, q1, q2)
    out = {}
    for b in _BELL_ORDER:
        proj = kernels.bell_project(s.amplitudes, s.qubit_count, q1, q2, b.m, b.n)
        out[b] = float(np.vdot(proj, proj).real)
    return out


def bell_measure(
    s: StateVector,
    q1: int,
    q2: int,
    rng: Optional[np.random.Generator] = None,
    forced: Optional[BellIndex] = None,
) -> MeasurementRecord:
    """Bell-basis measurement of ``(q1, q2)``.

    With ``forced`` the named branch is projected out and its Born weight
    reported; otherwise one branch is sampled from ``rng``.
    """
    _check_pair(s, q1, q2)
    projections = {
        b: kernels.bell_project(s.amplitudes, s.qubit_count, q1, q2, b.m, b.n) for b in _BELL_ORDER
    }
    probs = {b: float(np.vdot(v, v).real) for b, v in projections.items()}
    if forced is not None:
        outcome = BellIndex(*forced)
    else:
        if rng is None:
            raise ValueError("rng required when the outcome is not forced")
        outcome = _sample(_BELL_ORDER, [probs[b] for b in _BELL_ORDER], rng)
    p = probs[outcome]
    if p <= NORM_TOL:
        raise OracleError(f"Bell outcome {outcome.code} has zero probability")
    post = StateVector(projections[outcome] / np.sqrt(p))
    return MeasurementRecord(outcome, p, post)


def measure_qubit(
    s: StateVector,
    q: int,
    basis: str,
    rng: Optional[np.random.Generator] = None,
    forced: Optional[int] = None,
) -> QubitMeasurement:
    """Projective single-qubit measurement; ``basis`` is ``"Z"`` or ``"X"``.

    Outcome 0 is ``|0>`` or ``|+>``.
    """
    s._check_qubit(q)
    b = {"Z": 0, "X": 1}[basis]
    projections = [kernels.basis_project(s.amplitudes, s.qubit_count, q, b, k) for k in (0, 1)]
    probs = [float(np.vdot(v, v).real) for v in projections]
    if forced is not None:
        outcome = int(forced)
    else:
        if rng is None:
            raise ValueError("rng required when the outcome is not forced")
        outcome = _sample((0, 1), probs, rng)
    p = probs[outcome]
    if p <= NORM_TOL:
        raise OracleError(f"{basis}-basis outcome {outcome} has zero probability")
    return QubitMeasurement(outcome, p, StateVector(projections[outcome] / np.sqrt(p)))


def fidelity(a: StateVector, b: StateVector) -> float:
    """Phase-insensitive overlap ``|<a|b>|``."""
    if a.qubit_count != b.qubit_count:
        raise ValueError(f"dimension mismatch: {a.qubit_count} vs {b.qubit_count} qubits")
    return float(min(1.0, abs(np.vdot(a.amplitudes, b.amplitudes))))


def reduced_density(s: StateVector, qubits: Sequence[int]) -> np.ndarray:
    for q in qubits:
        s._check_qubit(q)
    n = s.qubit_count
    rest = [q for q in range(n) if q not in qubits]
    t = np.transpose(s.amplitudes.reshape((2,) * n), list(qubits) + rest)
    k = 1 << len(qubits)
    t = t.reshape(k, -1)
    return t @ t.conj().T


def qubit_state(s: StateVector, q: int) -> StateVector:
    """Pure state of qubit ``q``; raises if it is entangled with the rest."""
    rho = reduced_density(s, [q])
    purity = float(np.trace(rho @ rho).real)
    if purity < 1.0 - 1e-9:
        raise OracleError(f"qubit {q} is not in a pure product state (purity {purity:.6f})")
    # rank one: any nonzero column is proportional to the state
    col = rho[:, int(np.argmax(np.diag(rho).real))]
    return StateVector(col / np.linalg.norm(col))


def bell_label(s: StateVector, q1: int, q2: int) -> BellIndex:
    """Bell state held by ``(q1, q2)``; raises unless exactly one has weight 1."""
    probs = bell_probabilities(s, q1, q2)
    hits = [b for b, p in probs.items() if abs(p - 1.0) <= FIDELITY_TOL]
    if len(hits) != 1:
        raise OracleError(f"qubits ({q1}, {q2}) are not in a Bell basis state: {probs}")
    return hits[0]


def teleport(
    s: StateVector,
    source: int,
    pair: tuple[int, int],
    rng: Optional[np.random.Generator] = None,
    forced: Optional[BellIndex] = None,
) -> tuple[MeasurementRecord, StateVector]:
    """Bell-measure ``source`` with ``pair[0]``; return the state left on ``pair[1]``."""
    record = bell_measure(s, source, pair[0], rng=rng, forced=forced)
    return record, qubit_state(record.post_state, pair[1])


def _check_pair(s: StateVector, q1: int, q2: int) -> None:
    s._check_qubit(q1)
    s._check_qubit(q2)
    if q1 == q2:
        raise ValueError("Bell measurement needs two distinct qubits")


def _sample(outcomes, probs, rng: np.random.Generator):
    r = rng.random() * sum(probs)
    acc = 0.0
    last = None
    for o, p in zip(outcomes, probs):
        if p <= NORM_TOL:
            continue
        acc += p
        last = o
        if r < acc:
            return o
    if last is None:
        raise OracleError("no branch with positive probability")
    return last
