"""Table fixtures checked against the closed forms and the state-vector path."""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import oracle, pauli, tables
from .oracle import FIDELITY_TOL, StateVector
from .pauli import BellIndex, PauliOp

# A state with no Pauli symmetry: p|probe> and q|probe> have fidelity 1 iff
# p == q modulo phase, so it pins down a correction uniquely.
_PROBE = StateVector(np.array([np.cos(0.3), np.exp(0.7j) * np.sin(0.3)]))


def oracle_swap(left: BellIndex, right: BellIndex, bsm: BellIndex) -> BellIndex:
    """Bell state left on (B, B') after the forced (A, A') outcome."""
    chain = oracle.tensor(oracle.prepare_bell(left), oracle.prepare_bell(right))  # A B A' B'
    rec = oracle.bell_measure(chain, 0, 2, forced=bsm)
    return oracle.bell_label(rec.post_state, 1, 3)


def oracle_teleport_state(shared: BellIndex, bsm: BellIndex, phi: StateVector = _PROBE) -> StateVector:
    """State on B' after teleporting ``phi`` through ``shared`` with outcome ``bsm``."""
    s = oracle.tensor(phi, oracle.prepare_bell(shared))  # H B B'
    rec = oracle.bell_measure(s, 0, 1, forced=bsm)
    return oracle.qubit_state(rec.post_state, 2)


def oracle_teleport_correction(shared: BellIndex, bsm: BellIndex) -> Optional[PauliOp]:
    out = oracle_teleport_state(shared, bsm)
    hits = [p for p in pauli.PAULIS
            if abs(oracle.fidelity(out, oracle.apply_pauli(_PROBE, 0, p)) - 1.0) <= FIDELITY_TOL]
    return hits[0] if len(hits) == 1 else None


@dataclass(frozen=True)
class Entry:
    table: str
    key: str
    expected: str
    closed_form: Optional[str]
    oracle: str

    @property
    def ok(self) -> bool:
        return self.oracle == self.expected and self.closed_form in (None, self.expected)

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        cf = "" if self.closed_form is None else f" closed={self.closed_form}"
        return f"{status} {self.table} {self.key}: expected={self.expected}{cf} oracle={self.oracle}"

    def to_dict(self) -> dict:
        return {"table": self.table, "key": self.key, "expected": self.expected,
                "closed_form": self.closed_form, "oracle": self.oracle, "ok": self.ok}


def check_tables(swap: Optional[dict] = None, teleport: Optional[dict] = None,
                 oracle_only: bool = False) -> list[Entry]:
    swap = tables.swap_table() if swap is None else swap
    teleport = tables.teleport_table() if teleport is None else teleport
    out = []
    for (left, right, bsm), want in sorted(swap.items()):
        cf = None if oracle_only else pauli.swap_state(left, right, bsm).code
        out.append(Entry("swap", tables.key_label((left, right, bsm)), want.code, cf,
                         oracle_swap(left, right, bsm).code))
    for (shared, bsm), want in sorted(teleport.items()):
        cf = None if oracle_only else pauli.teleport_correction(shared, bsm).name
        got = oracle_teleport_correction(shared, bsm)
        out.append(Entry("teleport", tables.key_label((shared, bsm)), want.name, cf,
                         got.name if got is not None else "none"))
    return out


def fixtures_to_json(swap: Optional[dict] = None, teleport: Optional[dict] = None) -> dict:
    swap = tables.swap_table() if swap is None else swap
    teleport = tables.teleport_table() if teleport is None else teleport
    return {
        "swap": [{"left": l.code, "right": r.code, "bsm": b.code, "result": v.code}
                 for (l, r, b), v in sorted(swap.items())],
        "teleport": [{"shared": s.code, "bsm": b.code, "correction": v.name}
                     for (s, b), v in sorted(teleport.items())],
    }


def load_fixtures(path: str) -> tuple[dict, dict]:
    with open(path) as fh:
        data = json.load(fh)
    swap = {
        (pauli.parse_bell(e["left"]), pauli.parse_bell(e["right"]), pauli.parse_bell(e["bsm"])):
            pauli.parse_bell(e["result"])
        for e in data["swap"]
    }
    teleport = {
        (pauli.parse_bell(e["shared"]), pauli.parse_bell(e["bsm"])): pauli.parse_pauli(e["correction"])
        for e in data["teleport"]
    }
    return swap, teleport
