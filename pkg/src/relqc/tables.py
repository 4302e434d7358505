"""Hand-transcribed entanglement-swapping and teleportation tables.

These are typed in row by row as printed, not generated, so they can act as
fixtures against both :mod:`relqc.pauli` and :mod:`relqc.oracle`.
"""
from __future__ import annotations

from .pauli import BellIndex, PauliOp, parse_bell, parse_pauli

# Each row: the initial pair combinations |u_a u_b>|u_a' u_b'> sharing one
# outcome pattern, then "(alpha alpha') |u_b u_b'>" for the four BSM results.
_SWAP_ROWS = [
    (["00 00", "01 01", "10 10", "11 11"], ["00 00", "01 01", "10 10", "11 11"]),
    (["00 01", "01 00", "10 11", "11 10"], ["00 01", "01 00", "10 11", "11 10"]),
    (["00 10", "01 11", "10 00", "11 01"], ["00 10", "01 11", "10 00", "11 01"]),
    (["00 11", "01 10", "10 01", "11 00"], ["00 11", "01 10", "10 01", "11 00"]),
]

# Shared |u_b u_b'> -> B' state for Bob's BSM 00, 01, 10, 11 (sigma_i shown).
_TELEPORT_ROWS = {
    "00": ["I", "X", "Z", "ZX"],
    "01": ["X", "I", "ZX", "Z"],
    "10": ["Z", "ZX", "I", "X"],
    "11": ["ZX", "Z", "X", "I"],
}
_BSM_ORDER = ["00", "01", "10", "11"]

SwapKey = tuple[BellIndex, BellIndex, BellIndex]
TeleportKey = tuple[BellIndex, BellIndex]


def swap_table() -> dict[SwapKey, BellIndex]:
    """All 64 entries keyed by ``(left, right, alice_bsm)``."""
    out: dict[SwapKey, BellIndex] = {}
    for pairs, outcomes in _SWAP_ROWS:
        for pair in pairs:
            left, right = (parse_bell(s) for s in pair.split())
            for outcome in outcomes:
                bsm, swapped = (parse_bell(s) for s in outcome.split())
                out[(left, right, bsm)] = swapped
    return out


def teleport_table() -> dict[TeleportKey, PauliOp]:
    """All 16 entries keyed by ``(shared, bob_bsm)``."""
    out: dict[TeleportKey, PauliOp] = {}
    for shared, row in _TELEPORT_ROWS.items():
        for bsm, name in zip(_BSM_ORDER, row):
            out[(parse_bell(shared), parse_bell(bsm))] = parse_pauli(name)
    return out


def key_label(key: tuple[BellIndex, ...]) -> str:
    return "/".join(k.code for k in key)
