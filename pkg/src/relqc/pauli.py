"""Pauli operators modulo phase, Bell indices and the swap/teleport rules.

Everything here is exact bit arithmetic. A Pauli ``sigma_z^z sigma_x^x`` is
stored as its exponent pair ``(z, x)``; a Bell state
``(|0>|n> + (-1)^m |1>|1+n>)/sqrt(2)`` is stored as ``(m, n)``. The state-vector
code in :mod:`relqc.oracle` never imports this module, so the two can be
checked against each other.
"""
from __future__ import annotations

import enum
from typing import NamedTuple

__all__ = [
    "BasisMode",
    "BellIndex",
    "PauliOp",
    "I",
    "X",
    "Z",
    "ZX",
    "PAULIS",
    "BELL_INDICES",
    "apply_to_bell",
    "compose",
    "coset_of",
    "coset_members",
    "parse_bell",
    "parse_pauli",
    "swap_state",
    "teleport_correction",
]


class PauliOp(NamedTuple):
    """``sigma_z^z sigma_x^x`` with the global phase dropped."""

    z: int
    x: int

    @property
    def name(self) -> str:
        return _PAULI_NAMES[self]

    @property
    def code(self) -> str:
        """Two-bit input string ``u_s u_s'`` carried by this operator."""
        return f"{self.z}{self.x}"

    def __str__(self) -> str:
        return self.name


class BellIndex(NamedTuple):
    """Bell state label: ``m`` is the phase bit, ``n`` the parity bit."""

    m: int
    n: int

    @property
    def code(self) -> str:
        return f"{self.m}{self.n}"

    def __str__(self) -> str:
        return f"|{self.m}{self.n}>"


class BasisMode(str, enum.Enum):
    HADAMARD = "hadamard"
    COMPUTATIONAL = "computational"


I = PauliOp(0, 0)
X = PauliOp(0, 1)
Z = PauliOp(1, 0)
ZX = PauliOp(1, 1)

PAULIS: tuple[PauliOp, ...] = (I, X, Z, ZX)
BELL_INDICES: tuple[BellIndex, ...] = tuple(BellIndex(m, n) for m in (0, 1) for n in (0, 1))

_PAULI_NAMES = {I: "I", X: "X", Z: "Z", ZX: "ZX"}
_PAULI_ALIASES = {
    "I": I, "ID": I, "00": I,
    "X": X, "SX": X, "01": X,
    "Z": Z, "SZ": Z, "10": Z,
    "ZX": ZX, "SZSX": ZX, "XZ": ZX, "Y": ZX, "11": ZX,
}


def parse_pauli(text: str) -> PauliOp:
    """Accept ``I``/``X``/``Z``/``ZX`` or the two-bit code ``00``..``11``."""
    key = text.strip().replace("σ", "S").upper().replace("_", "")
    try:
        return _PAULI_ALIASES[key]
    except KeyError:
        raise ValueError(f"unknown Pauli operator {text!r}") from None


def parse_bell(text: str) -> BellIndex:
    key = text.strip().strip("|>")
    if len(key) != 2 or any(c not in "01" for c in key):
        raise ValueError(f"Bell index must be two bits, got {text!r}")
    return BellIndex(int(key[0]), int(key[1]))


def compose(a: PauliOp, b: PauliOp) -> PauliOp:
    """Product of two Paulis, phase discarded."""
    return PauliOp(a.z ^ b.z, a.x ^ b.x)


def apply_to_bell(idx: BellIndex, p: PauliOp) -> BellIndex:
    """Bell label after ``p`` acts on either qubit of the pair."""
    return BellIndex(idx.m ^ p.z, idx.n ^ p.x)


def swap_state(left: BellIndex, right: BellIndex, alice_bsm: BellIndex) -> BellIndex:
    """Bell label of the (B, B') pair after a Bell measurement on (A, A').

    ``left`` is the (A, B) pair, ``right`` the (A', B') pair.
    """
    return BellIndex(left.m ^ right.m ^ alice_bsm.m, left.n ^ right.n ^ alice_bsm.n)


def teleport_correction(shared: BellIndex, bob_bsm: BellIndex) -> PauliOp:
    """Pauli left on the far qubit after teleporting through ``shared``."""
    return PauliOp(shared.m ^ bob_bsm.m, shared.n ^ bob_bsm.n)


def coset_of(p: PauliOp, basis: BasisMode) -> int:
    """Which half of the Pauli group an observer of the carrier can see.

    Hadamard carriers only reveal the z exponent, computational carriers only
    the x exponent.
    """
    return p.z if BasisMode(basis) is BasisMode.HADAMARD else p.x


def coset_members(bit: int, basis: BasisMode) -> tuple[PauliOp, PauliOp]:
    return tuple(p for p in PAULIS if coset_of(p, basis) == bit)  # type: ignore[return-value]
