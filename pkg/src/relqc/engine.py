"""Protocol runs: agents, message schedule, verification and outputs.

One run evolves a single register

    q0 = H   Bob's carrier |phi>
    q1 = A   Alice's half of the left pair  (A, B)
    q2 = B   Bob's half of the left pair
    q3 = A'  Alice's half of the right pair (A', B')
    q4 = B'  B''s half of the right pair

plus any ancillas a deviation needs. Every honest quantum step is predicted
by the Pauli frame (:mod:`relqc.pauli`) and checked against the oracle.

Quantum payloads are measured by their receivers in the agreed basis. On the
honest path the carrier is always an eigenstate of that basis, so these
measurements do not disturb it; they are how each side turns the quantum
messages into the classical facts its verifier compares.
"""
from __future__ import annotations

import enum
import hashlib
import json
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Optional

import numpy as np

from . import oracle, pauli
from .oracle import FIDELITY_TOL, StateVector
from .pauli import BasisMode, BellIndex, PauliOp
from .spacetime import Geometry, SpacetimeEvent, best_assembly, consistent_arrival, direction

TRANSCRIPT_SCHEMA = "transcript/v1"

Q_H, Q_A, Q_B, Q_AP, Q_BP = range(5)


class FrameMismatch(AssertionError):
    """Pauli-frame prediction disagrees with the state-vector oracle."""


class Party(enum.IntEnum):
    ALICE = 0
    BOB = 1

    @property
    def label(self) -> str:
        return self.name.capitalize()


class Role(enum.IntEnum):
    PRINCIPAL = 0
    APRIME_VERIFIER = 1
    A1 = 2
    A2 = 3
    BPRIME = 4
    B1 = 5
    B2 = 6
    COLOCATED = 7


class Kind(enum.IntEnum):
    """Tie-break order for simultaneous events."""

    LOCAL = 0
    CLASSICAL = 1
    QUANTUM = 2
    VERDICT = 3


@dataclass(frozen=True, order=True)
class AgentId:
    party: Party
    role: Role

    def __str__(self) -> str:
        return f"{self.party.label}.{self.role.name.lower()}"


ALICE = AgentId(Party.ALICE, Role.PRINCIPAL)
BOB = AgentId(Party.BOB, Role.PRINCIPAL)
BPRIME = AgentId(Party.BOB, Role.BPRIME)
COLOCATED = AgentId(Party.BOB, Role.COLOCATED)
BROADCAST = "broadcast"


@dataclass(frozen=True)
class Event:
    t: float
    agent: AgentId
    kind: Kind
    action: str
    data: dict
    visible_to: frozenset = frozenset()

    def sort_key(self):
        return (self.t, self.agent.party, self.agent.role, self.kind)

    def to_dict(self) -> dict:
        return {"t": self.t, "actor": str(self.agent), "action": self.action, "data": self.data}


@dataclass(frozen=True)
class Message:
    kind: Kind
    payload: Any
    emitted: SpacetimeEvent
    sender: AgentId
    receiver: Any  # AgentId or BROADCAST

    def arrival_at(self, x: float) -> tuple[SpacetimeEvent, int]:
        return (
            SpacetimeEvent(x, self.emitted.t + abs(x - self.emitted.x)),
            direction(self.emitted.x, x),
        )


@dataclass(frozen=True)
class Arrival:
    name: str
    event: SpacetimeEvent
    heading: int
    claim: SpacetimeEvent


@dataclass(frozen=True)
class Verdict:
    accepted: bool
    reason: str = ""
    t: Optional[float] = None
    by: Optional[str] = None

    @classmethod
    def accept(cls, t=None, by=None) -> "Verdict":
        return cls(True, "", t, by)

    @classmethod
    def abort(cls, reason: str, t=None, by=None) -> "Verdict":
        return cls(False, reason, t, by)

    def at(self, t: float, by: str) -> "Verdict":
        return replace(self, t=t, by=by)

    def to_dict(self) -> dict:
        if self.accepted:
            return {"status": "accept"}
        return {"status": "abort", "reason": self.reason, "by": self.by, "t": self.t}


@dataclass(frozen=True)
class ProtocolInputs:
    sigma_a: PauliOp = pauli.I
    sigma_b: PauliOp = pauli.I
    left: BellIndex = BellIndex(0, 0)
    right: BellIndex = BellIndex(0, 0)
    basis: BasisMode = BasisMode.HADAMARD
    phi: int = 0  # 0 -> |+> or |0>, 1 -> |-> or |1>

    @classmethod
    def random(cls, rng: np.random.Generator, basis=BasisMode.HADAMARD, **fixed) -> "ProtocolInputs":
        """Uniform Paulis and pairs; anything in ``fixed`` is kept as given."""
        draw = {
            "sigma_a": pauli.PAULIS[int(rng.integers(4))],
            "sigma_b": pauli.PAULIS[int(rng.integers(4))],
            "left": pauli.BELL_INDICES[int(rng.integers(4))],
            "right": pauli.BELL_INDICES[int(rng.integers(4))],
        }
        draw.update({k: v for k, v in fixed.items() if v is not None})
        return cls(basis=BasisMode(basis), **draw)

    @property
    def phi_ket(self) -> str:
        return carrier_ket(self.basis, self.phi)

    def to_dict(self) -> dict:
        return {
            "sigma_a": self.sigma_a.name,
            "sigma_b": self.sigma_b.name,
            "pairs": [self.left.code, self.right.code],
            "basis": self.basis.value,
            "phi": self.phi_ket,
        }


def carrier_ket(basis: BasisMode, label: int) -> str:
    return ("+-" if BasisMode(basis) is BasisMode.HADAMARD else "01")[label]


def measurement_basis(basis: BasisMode) -> str:
    return "X" if BasisMode(basis) is BasisMode.HADAMARD else "Z"


# --------------------------------------------------------------------------
# deviations from the honest script


@dataclass(frozen=True)
class Behavior:
    """Overrides of the honest script; the defaults are honest play.

    Alice-side fields: ``reveal_pauli``, ``reveal_offset``, ``mlc``.
    Bob-side fields: everything prefixed ``bprime_``.
    """

    reveal_pauli: Optional[PauliOp] = None
    reveal_offset: float = 0.0
    mlc: bool = False
    mlc_alpha: Optional[BellIndex] = None
    mlc_phi: str = "+"
    mlc_teleport: Optional[BellIndex] = None
    bprime_delay: float = 0.0
    bprime_extra: Optional[PauliOp] = None
    bprime_substitute: Optional[str] = None
    bprime_entangled: Optional[tuple[complex, complex]] = None
    bprime_post_op: Optional[PauliOp] = None

    @property
    def alice_cheats(self) -> bool:
        return self.reveal_pauli is not None or self.reveal_offset != 0.0 or self.mlc

    @property
    def bob_cheats(self) -> bool:
        return (
            self.bprime_delay != 0.0
            or self.bprime_extra is not None
            or self.bprime_substitute is not None
            or self.bprime_entangled is not None
        )

    @property
    def honest(self) -> bool:
        return not (self.alice_cheats or self.bob_cheats)


HONEST = Behavior()


# --------------------------------------------------------------------------
# verifiers


@dataclass(frozen=True)
class AliceView:
    """What Alice holds when she checks Bob."""

    basis: BasisMode
    phi: int
    left: BellIndex
    right: BellIndex
    sigma_a: PauliOp
    alpha: BellIndex
    beta: BellIndex
    carrier_label: Optional[int]  # sigma_b|phi> as measured at A_i
    psi_label: Optional[int]  # B''s qubit as measured on arrival
    arrivals: tuple[Arrival, ...] = ()


@dataclass(frozen=True)
class BobView:
    """What Bob's side holds when it checks Alice."""

    basis: BasisMode
    phi: int
    left: BellIndex
    right: BellIndex
    sigma_b: PauliOp
    alpha: BellIndex
    beta: BellIndex
    record_label: Optional[int]  # B''s measurement of psi
    reveal_label: Optional[int]  # B_i's measurement of psi'
    arrivals: tuple[Arrival, ...] = ()


def implied_correction(left, right, sigma_a, alpha, beta) -> PauliOp:
    swapped = pauli.swap_state(pauli.apply_to_bell(left, sigma_a), right, alpha)
    return pauli.teleport_correction(swapped, beta)


def _timing(arrivals) -> Optional[str]:
    for a in sorted(arrivals, key=lambda a: a.event.t):
        if not consistent_arrival(a.event, a.heading, a.claim):
            return f"timing:{a.name}"
    return None


def verify_bob(view: AliceView) -> Verdict:
    """Alice's check of Bob and B'."""
    bad = _timing(view.arrivals)
    if bad:
        return Verdict.abort(bad)
    if view.carrier_label is None or view.psi_label is None:
        return Verdict.accept()
    sigma_i = implied_correction(view.left, view.right, view.sigma_a, view.alpha, view.beta)
    expected = view.carrier_label ^ pauli.coset_of(sigma_i, view.basis)
    if view.psi_label != expected:
        return Verdict.abort("correlation")
    return Verdict.accept()


def consistent_cosets(view: BobView) -> set[int]:
    """Alice cosets under which her reveal matches the announced outcomes."""
    out = set()
    for cand in pauli.PAULIS:
        sigma_i = implied_correction(view.left, view.right, cand, view.alpha, view.beta)
        psi = view.phi ^ pauli.coset_of(pauli.compose(sigma_i, view.sigma_b), view.basis)
        psi_prime = psi ^ pauli.coset_of(cand, view.basis)
        if psi == view.record_label and psi_prime == view.reveal_label:
            out.add(pauli.coset_of(cand, view.basis))
    return out


def verify_alice(view: BobView) -> tuple[Verdict, Optional[int]]:
    """Bob's check of Alice; returns the verdict and the accepted coset."""
    bad = _timing(view.arrivals)
    if bad:
        return Verdict.abort(bad), None
    if view.record_label is None or view.reveal_label is None:
        return Verdict.abort("inconclusive"), None
    cosets = consistent_cosets(view)
    if len(cosets) != 1:
        return Verdict.abort("correlation"), None
    return Verdict.accept(), cosets.pop()


# --------------------------------------------------------------------------
# transcript


@dataclass
class Transcript:
    protocol: str
    config: dict
    events: list[Event]
    verdict: Verdict
    outputs: dict

    def to_dict(self) -> dict:
        return {
            "schema": TRANSCRIPT_SCHEMA,
            "protocol": self.protocol,
            "config": self.config,
            "events": [e.to_dict() for e in self.events],
            "verdict": self.verdict.to_dict(),
            "outputs": self.outputs,
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, **kw)

    @property
    def accepted(self) -> bool:
        return self.verdict.accepted

    def view(self, party: Party) -> list[dict]:
        return [e.to_dict() for e in self.events if party in e.visible_to]

    def view_digest(self, party: Party) -> str:
        blob = json.dumps(self.view(party), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()


# --------------------------------------------------------------------------
# the run


class _Run:
    def __init__(self, inputs, geometry, rng, forced_alpha, forced_beta, behavior, send_carrier):
        self.inp: ProtocolInputs = inputs
        self.g: Geometry = geometry
        self.rng = rng
        self.forced_alpha = forced_alpha
        self.forced_beta = forced_beta
        self.b: Behavior = behavior
        self.send_carrier = send_carrier
        self.events: list[Event] = []
        self.frame_checks = 0
        self.mbasis = measurement_basis(inputs.basis)
        self.state = oracle.tensor(
            oracle.ket(inputs.phi_ket), oracle.prepare_bell(inputs.left), oracle.prepare_bell(inputs.right)
        )
        self.out: dict[str, Any] = {}

    # -- helpers -----------------------------------------------------------

    def log(self, t, agent, kind, action, data=None, visible=()):
        self.events.append(Event(float(t), agent, kind, action, data or {}, frozenset(visible)))

    def add_qubit(self, sv: StateVector) -> int:
        self.state = oracle.tensor(self.state, sv)
        return self.state.qubit_count - 1

    def measure(self, q: int) -> int:
        m = oracle.measure_qubit(self.state, q, self.mbasis, self.rng)
        self.state = m.post_state
        return m.outcome

    def frame_state(self, p: PauliOp) -> StateVector:
        return oracle.apply_pauli(oracle.ket(self.inp.phi_ket), 0, p)

    def check_frame(self, actual: StateVector, p: PauliOp, where: str) -> None:
        f = oracle.fidelity(actual, self.frame_state(p))
        self.frame_checks += 1
        if abs(f - 1.0) > FIDELITY_TOL:
            raise FrameMismatch(f"{where}: frame predicts {p.name}|phi>, oracle fidelity {f!r}")

    def send(self, msg: Message, to_x: float, receiver: AgentId, name: str, claim: SpacetimeEvent,
             visible=(), data=None) -> Arrival:
        ev, heading = msg.arrival_at(to_x)
        payload = {"from": str(msg.sender), "heading": heading}
        payload.update(data or {})
        kind = msg.kind
        self.log(ev.t, receiver, kind, f"receive_{name}", payload, visible)
        return Arrival(name, ev, heading, claim)

    # -- script ------------------------------------------------------------

    def run(self):
        g, inp, b = self.g, self.inp, self.b
        t0, d = g.t0, g.d
        both = (Party.ALICE, Party.BOB)
        public = {"pairs": [inp.left.code, inp.right.code], "basis": inp.basis.value, "phi": inp.phi_ket}
        self.log(t0, ALICE, Kind.LOCAL, "setup", public, both)

        # Alice at (x_a, t0): input then Bell measurement on (A, A').
        alpha_emit = SpacetimeEvent(g.x_a, t0)
        if b.mlc:
            alpha = self._alice_mlc_commit(t0)
        else:
            self.state = oracle.apply_pauli(self.state, Q_A, inp.sigma_a)
            self.log(t0, ALICE, Kind.LOCAL, "apply_input", {"sigma": inp.sigma_a.name}, [Party.ALICE])
            rec = oracle.bell_measure(self.state, Q_A, Q_AP, self.rng, self.forced_alpha)
            self.state, alpha = rec.post_state, rec.outcome
            self.log(t0, ALICE, Kind.LOCAL, "bell_measure", {"qubits": "A,A'", "outcome": alpha.code},
                     [Party.ALICE])
        self.alpha = alpha
        self.log(t0, ALICE, Kind.CLASSICAL, "announce_alpha", {"value": alpha.code}, [Party.ALICE])
        alpha_msg = Message(Kind.CLASSICAL, alpha, alpha_emit, ALICE, BROADCAST)

        # Bob at (x_b, t0): input on the carrier, teleport through (H, B).
        bob_emit = SpacetimeEvent(g.x_b, t0)
        self.state = oracle.apply_pauli(self.state, Q_H, inp.sigma_b)
        self.log(t0, BOB, Kind.LOCAL, "apply_input", {"sigma": inp.sigma_b.name}, [Party.BOB])
        rec = oracle.bell_measure(self.state, Q_H, Q_B, self.rng, self.forced_beta)
        self.state, beta = rec.post_state, rec.outcome
        self.beta = beta
        self.log(t0, BOB, Kind.LOCAL, "bell_measure", {"qubits": "H,B", "outcome": beta.code}, [Party.BOB])
        self.log(t0, BOB, Kind.CLASSICAL, "announce_beta", {"value": beta.code}, [Party.BOB])
        beta_msg = Message(Kind.CLASSICAL, beta, bob_emit, BOB, BROADCAST)

        alice_arrivals = [
            self.send(beta_msg, g.x_a, ALICE, "beta", bob_emit, [Party.ALICE], {"value": beta.code})
        ]
        bob_arrivals = [
            self.send(alpha_msg, g.x_b, BOB, "alpha", alpha_emit, [Party.BOB], {"value": alpha.code})
        ]
        self.send(alpha_msg, g.x_bp, BPRIME, "alpha", alpha_emit, [Party.BOB], {"value": alpha.code})
        self.send(beta_msg, g.x_bp, BPRIME, "beta", bob_emit, [Party.BOB], {"value": beta.code})
        if g.colocated_bob_agent:
            self.send(alpha_msg, g.x_a, COLOCATED, "alpha", alpha_emit, [Party.BOB], {"value": alpha.code})
            self.send(beta_msg, g.x_a, COLOCATED, "beta", bob_emit, [Party.BOB], {"value": beta.code})

        sigma_i = None
        if not b.mlc:
            sigma_i = implied_correction(inp.left, inp.right, inp.sigma_a, alpha, beta)
            swapped = pauli.swap_state(pauli.apply_to_bell(inp.left, inp.sigma_a), inp.right, alpha)
            self.out["swapped"] = swapped.code
            self.out["sigma_i"] = sigma_i.name

        # Second carrier sigma_b|phi> to a randomly chosen A_i.
        carrier_label = None
        a_site = None
        if self.send_carrier:
            a_site = ("A1", "A2")[int(self.rng.integers(2))]
            carrier = oracle.apply_pauli(oracle.ket(inp.phi_ket), 0, inp.sigma_b)
            self.check_frame(carrier, inp.sigma_b, "carrier")
            x_site = g.site(a_site)
            # the site choice never enters the sender's view
            self.log(t0, BOB, Kind.QUANTUM, "send_carrier", {}, [Party.BOB])
            msg = Message(Kind.QUANTUM, "carrier", bob_emit, BOB, AgentId(Party.ALICE, Role[a_site]))
            arr = self.send(msg, x_site, msg.receiver, "carrier", bob_emit, [Party.ALICE], {"site": a_site})
            m = oracle.measure_qubit(carrier, 0, self.mbasis, self.rng)
            carrier_label = m.outcome
            self.log(arr.event.t, msg.receiver, Kind.LOCAL, "measure_carrier",
                     {"basis": self.mbasis, "outcome": carrier_label}, [Party.ALICE])
            # A_i's record travels to Alice's site for her verdict.
            alice_arrivals.append(arr)
        self.out["carrier_site"] = a_site

        # B' at (x_bp, t0 + delay): record psi, forward a qubit to Alice.
        if not b.mlc and not b.bob_cheats:
            self.check_frame(oracle.qubit_state(self.state, Q_BP), pauli.compose(sigma_i, inp.sigma_b), "B'")
        record_label = None
        fwd = Q_BP
        tb = t0 + b.bprime_delay
        if b.bprime_substitute is not None:
            fwd = self.add_qubit(oracle.ket(b.bprime_substitute))
            self.log(tb, BPRIME, Kind.LOCAL, "substitute", {"state": b.bprime_substitute}, [Party.BOB])
        elif b.bprime_entangled is not None:
            lam = np.asarray(b.bprime_entangled, dtype=complex)
            lam = lam / np.linalg.norm(lam)
            # lambda_0 |0>|0> + lambda_1 |1>|1>; the first half goes to Alice
            self.state = oracle.tensor(self.state, StateVector([lam[0], 0, 0, lam[1]]))
            fwd = self.state.qubit_count - 2
            self.ent_keep = self.state.qubit_count - 1
            self.log(tb, BPRIME, Kind.LOCAL, "prepare_entangled",
                     {"lambda": [repr(complex(v)) for v in lam]}, [Party.BOB])
        else:
            record_label = self.measure(Q_BP)
            self.log(tb, BPRIME, Kind.LOCAL, "measure_psi", {"basis": self.mbasis, "outcome": record_label},
                     [Party.BOB])
            if b.bprime_extra is not None:
                self.state = oracle.apply_pauli(self.state, Q_BP, b.bprime_extra)
                self.log(tb, BPRIME, Kind.LOCAL, "apply_extra", {"sigma": b.bprime_extra.name}, [Party.BOB])
        self.record_label = record_label
        psi_emit = SpacetimeEvent(g.x_bp, tb)
        self.log(tb, BPRIME, Kind.QUANTUM, "send_psi", {"heading": -1}, [Party.BOB])
        psi_msg = Message(Kind.QUANTUM, "psi", psi_emit, BPRIME, ALICE)
        psi_arr = self.send(psi_msg, g.x_a, ALICE, "psi", SpacetimeEvent(g.x_bp, t0), [Party.ALICE])
        alice_arrivals.append(psi_arr)
        record_emit = SpacetimeEvent(g.x_bp, tb)
        if record_label is not None:
            rmsg = Message(Kind.CLASSICAL, record_label, record_emit, BPRIME, BOB)
            self.send(rmsg, g.x_b, BOB, "psi_record", record_emit, [Party.BOB], {"value": record_label})
            if g.colocated_bob_agent:
                self.send(rmsg, g.x_a, COLOCATED, "psi_record", record_emit, [Party.BOB], {"value": record_label})

        if b.bprime_post_op is not None and b.bprime_entangled is not None:
            # Acts once Bob's announcement reaches B'. Operations on disjoint
            # qubits commute, so applying it ahead of Alice's measurement
            # leaves the joint statistics unchanged while making her marginal
            # depend on it if signalling were possible.
            self.state = oracle.apply_pauli(self.state, self.ent_keep, b.bprime_post_op)
            self.log(t0 + 2 * d, BPRIME, Kind.LOCAL, "post_op", {"sigma": b.bprime_post_op.name}, [Party.BOB])

        # Alice when psi arrives.
        t_reveal = t0 + d
        alice_timing = None if b.alice_cheats else _timing([psi_arr])
        psi_label = None
        reveal_label = None
        b_site = None
        reveal_arr = None
        if b.mlc:
            reveal_q = self._alice_mlc_reveal(t_reveal)
            psi_label = None
        elif alice_timing is not None:
            # psi never arrived in its window: Alice stops before revealing.
            reveal_q = None
        else:
            psi_label = self.measure(fwd)
            self.log(psi_arr.event.t, ALICE, Kind.LOCAL, "measure_psi",
                     {"basis": self.mbasis, "outcome": psi_label}, [Party.ALICE])
            sigma_rev = b.reveal_pauli if b.reveal_pauli is not None else inp.sigma_a
            self.state = oracle.apply_pauli(self.state, fwd, sigma_rev)
            self.log(t_reveal, ALICE, Kind.LOCAL, "apply_reveal", {"sigma": sigma_rev.name}, [Party.ALICE])
            if b.honest:
                self.check_frame(oracle.qubit_state(self.state, fwd),
                                 pauli.compose(inp.sigma_a, pauli.compose(sigma_i, inp.sigma_b)), "psi'")
            reveal_q = fwd
        if reveal_q is not None:
            self.f_bob_state = oracle.qubit_state(self.state, reveal_q) if b.honest else None
            b_site = ("B1", "B2")[int(self.rng.integers(2))]
            x_recv = g.bob_receiver(b_site)
            emit = SpacetimeEvent(g.x_a + b.reveal_offset, t_reveal)
            receiver = COLOCATED if g.colocated_bob_agent else AgentId(Party.BOB, Role[b_site])
            self.log(t_reveal, ALICE, Kind.QUANTUM, "send_reveal", {}, [Party.ALICE])
            msg = Message(Kind.QUANTUM, "psi_prime", emit, ALICE, receiver)
            reveal_arr = self.send(msg, x_recv, receiver, "psi_prime", SpacetimeEvent(g.x_a, t_reveal),
                                   [Party.BOB], {"site": b_site})
            reveal_label = self.measure(reveal_q)
            self.log(reveal_arr.event.t, receiver, Kind.LOCAL, "measure_psi_prime",
                     {"basis": self.mbasis, "outcome": reveal_label}, [Party.BOB])
            bob_arrivals.append(reveal_arr)
        self.out["reveal_site"] = b_site

        # Verdicts.
        a_view = AliceView(inp.basis, inp.phi, inp.left, inp.right, inp.sigma_a, alpha, beta,
                           carrier_label, psi_label, tuple(alice_arrivals))
        b_view = BobView(inp.basis, inp.phi, inp.left, inp.right, inp.sigma_b, alpha, beta,
                         record_label, reveal_label, tuple(bob_arrivals))
        self.a_view, self.b_view = a_view, b_view

        t_alice = max(e.t + abs(g.x_a - e.x) for e in [a.event for a in alice_arrivals] + [alpha_emit])
        if reveal_q is None:
            verdict_a = Verdict.abort(alice_timing or "timing:psi")
            t_alice = psi_arr.event.t
        elif b.alice_cheats:
            verdict_a = None
        else:
            verdict_a = verify_bob(a_view)

        bob_sources = [alpha_emit, bob_emit, record_emit]
        if reveal_arr is not None:
            bob_sources.append(reveal_arr.event)
        t_bob, bob_site = best_assembly(bob_sources, g.bob_assembly_sites())
        if b.bob_cheats:
            verdict_b, coset_b = None, None
        elif reveal_arr is None:
            verdict_b, coset_b = Verdict.abort("no_reveal"), None
        else:
            verdict_b, coset_b = verify_alice(b_view)

        if verdict_a is not None:
            verdict_a = verdict_a.at(t_alice, "Alice")
            self.log(t_alice, ALICE, Kind.VERDICT, "verdict", verdict_a.to_dict(), [Party.ALICE])
        if verdict_b is not None:
            verdict_b = verdict_b.at(t_bob, "Bob")
            data = dict(verdict_b.to_dict(), site=bob_site, coset=coset_b)
            self.log(t_bob, BOB, Kind.VERDICT, "verdict", data, [Party.BOB])

        failures = [v for v in (verdict_a, verdict_b) if v is not None and not v.accepted]
        verdict = min(failures, key=lambda v: (v.t, v.by)) if failures else Verdict.accept()

        self.verdict_a, self.verdict_b = verdict_a, verdict_b
        self.coset_b = coset_b
        self.carrier_label, self.psi_label, self.reveal_label = carrier_label, psi_label, reveal_label
        self.sigma_i = sigma_i
        self.out.update(
            alpha=alpha.code,
            beta=beta.code,
            record=record_label,
            reveal=reveal_label,
            frame_checks=self.frame_checks,
            timeline={
                "inputs": t0,
                "bob_reveal": t0,
                "alice_reveal": t_reveal if reveal_q is not None else None,
                "alice_verdict": t_alice,
                "bob_verdict": t_bob,
                "bob_verdict_site": bob_site,
            },
            verdicts={
                "alice": verdict_a.to_dict() if verdict_a else None,
                "bob": verdict_b.to_dict() if verdict_b else None,
            },
            position_evidence="attested" if g.position_verified else "timing_only",
        )
        self.events.sort(key=Event.sort_key)
        return verdict

    # -- delayed-input attack ----------------------------------------------

    def _alice_mlc_commit(self, t0) -> BellIndex:
        """Skip the (A, A') measurement, teleport a fresh state to B' instead."""
        b = self.b
        xq = self.add_qubit(oracle.ket(b.mlc_phi))
        rec = oracle.bell_measure(self.state, xq, Q_AP, self.rng, b.mlc_teleport)
        self.state = rec.post_state
        self.mlc_gamma = rec.outcome
        fake = b.mlc_alpha if b.mlc_alpha is not None else pauli.BELL_INDICES[int(self.rng.integers(4))]
        self.log(t0, ALICE, Kind.LOCAL, "mlc_teleport", {"outcome": rec.outcome.code, "phi": b.mlc_phi},
                 [Party.ALICE])
        return fake

    def _alice_mlc_reveal(self, t) -> int:
        """Correct the qubit on A so the reveal matches the announced outcome."""
        inp = self.inp
        p = PauliOp(inp.right.m ^ self.alpha.m, inp.right.n ^ self.alpha.n)
        self.state = oracle.apply_pauli(self.state, Q_A, p)
        self.log(t, ALICE, Kind.LOCAL, "mlc_correct", {"sigma": p.name}, [Party.ALICE])
        return Q_A


# --------------------------------------------------------------------------
# public runners


def _config(protocol, inputs, geometry, forced_alpha, forced_beta, behavior) -> dict:
    cfg = {
        "protocol": protocol,
        "inputs": inputs.to_dict(),
        "geometry": geometry.to_dict(),
        "forced_outcomes": {
            "alpha": forced_alpha.code if forced_alpha is not None else None,
            "beta": forced_beta.code if forced_beta is not None else None,
        },
    }
    if not behavior.honest:
        cfg["behavior"] = {
            k: (v.name if isinstance(v, PauliOp) else v.code if isinstance(v, BellIndex) else
                [repr(complex(x)) for x in v] if isinstance(v, tuple) else v)
            for k, v in behavior.__dict__.items()
            if v != getattr(HONEST, k)
        }
    return cfg


def _execute(protocol, inputs, geometry, rng, forced_alpha, forced_beta, behavior, send_carrier=True):
    geometry = geometry or Geometry()
    rng = rng if rng is not None else np.random.default_rng(0)
    behavior = behavior or HONEST
    fa = BellIndex(*forced_alpha) if forced_alpha is not None else None
    fb = BellIndex(*forced_beta) if forced_beta is not None else None
    run = _Run(inputs, geometry, rng, fa, fb, behavior, send_carrier)
    verdict = run.run()
    cfg = _config(protocol, inputs, geometry, fa, fb, behavior)
    return run, verdict, cfg


def _core_outputs(run: _Run) -> dict:
    out = dict(run.out)
    if run.b.mlc:
        out["mlc_forced_coset"] = mlc_forced_coset(run)
    return out


def run_core(inputs: ProtocolInputs, geometry: Optional[Geometry] = None, rng=None, *,
             forced_alpha=None, forced_beta=None, behavior: Optional[Behavior] = None) -> Transcript:
    run, verdict, cfg = _execute("core", inputs, geometry, rng, forced_alpha, forced_beta, behavior)
    return Transcript("core", cfg, run.events, verdict, _core_outputs(run))


def _members(bit, basis) -> list[str]:
    return [p.name for p in pauli.coset_members(bit, basis)]


def _learned_by_alice(run: _Run) -> Optional[int]:
    if run.carrier_label is None:
        return None
    return run.carrier_label ^ run.inp.phi


def run_ot(inputs, geometry=None, rng=None, *, forced_alpha=None, forced_beta=None, behavior=None) -> Transcript:
    """Both directions of the coset transfer, with where each landed."""
    run, verdict, cfg = _execute("ot", inputs, geometry, rng, forced_alpha, forced_beta, behavior)
    out = _core_outputs(run)
    basis = inputs.basis
    a_learns = _learned_by_alice(run)
    out["bob_to_alice"] = {
        "coset": a_learns,
        "members": _members(a_learns, basis) if a_learns is not None else None,
        "site": run.out["carrier_site"],
        "site_known_to_sender": False,
    }
    out["alice_to_bob"] = {
        "coset": run.coset_b,
        "members": _members(run.coset_b, basis) if run.coset_b is not None else None,
        "site": run.out["reveal_site"],
        "site_known_to_sender": False,
    }
    return Transcript("ot", cfg, run.events, verdict, out)


def _labels_to_list(sv: StateVector) -> list[list[float]]:
    return [[float(a.real), float(a.imag)] for a in sv.amplitudes]


def run_tpsc(inputs, geometry=None, rng=None, *, forced_alpha=None, forced_beta=None, behavior=None) -> Transcript:
    """Joint outcome ``sigma_a sigma_i sigma_b |phi>`` as each side obtains it."""
    run, verdict, cfg = _execute("tpsc", inputs, geometry, rng, forced_alpha, forced_beta, behavior)
    out = _core_outputs(run)
    f_alice = f_bob = None
    if run.carrier_label is not None and run.sigma_i is not None:
        # Alice: her own sigma_a and the public-to-her sigma_i on the carrier she measured.
        measured = oracle.ket(carrier_ket(inputs.basis, run.carrier_label))
        f_alice = oracle.apply_pauli(oracle.apply_pauli(measured, 0, run.sigma_i), 0, inputs.sigma_a)
    if getattr(run, "f_bob_state", None) is not None:
        f_bob = run.f_bob_state
    det = None
    if f_alice is not None and f_bob is not None:
        det = abs(oracle.fidelity(f_alice, f_bob) - 1.0) <= FIDELITY_TOL
    out["f_alice"] = _labels_to_list(f_alice) if f_alice is not None else None
    out["f_bob"] = _labels_to_list(f_bob) if f_bob is not None else None
    out["f_label"] = carrier_ket(inputs.basis, run.reveal_label) if run.reveal_label is not None else None
    out["deterministic"] = det
    return Transcript("tpsc", cfg, run.events, verdict, out)


GAMMA = {0: "+", 1: "-"}


def run_coin_toss(inputs, geometry=None, rng=None, *, forced_alpha=None, forced_beta=None,
                  behavior=None) -> Transcript:
    """Coin ``gamma = coset(sigma_a) xor coset(sigma_b)``; ``invalid`` on any abort."""
    run, verdict, cfg = _execute("coin", inputs, geometry, rng, forced_alpha, forced_beta, behavior)
    out = _core_outputs(run)
    basis = inputs.basis
    b = run.b
    alice_gamma = bob_gamma = None
    if not b.alice_cheats and run.verdict_a is not None and run.verdict_a.accepted:
        learned = _learned_by_alice(run)
        if learned is not None:
            alice_gamma = pauli.coset_of(inputs.sigma_a, basis) ^ learned
    if not b.bob_cheats and run.verdict_b is not None and run.verdict_b.accepted:
        bob_gamma = run.coset_b ^ pauli.coset_of(inputs.sigma_b, basis)
    if not verdict.accepted:
        gamma = "invalid"
    elif b.alice_cheats:
        gamma = GAMMA[bob_gamma] if bob_gamma is not None else "invalid"
    elif b.bob_cheats:
        gamma = GAMMA[alice_gamma] if alice_gamma is not None else "invalid"
    elif alice_gamma is None or alice_gamma != bob_gamma:
        gamma = "invalid"
    else:
        gamma = GAMMA[alice_gamma]
    out["gamma"] = gamma
    out["gamma_alice"] = GAMMA.get(alice_gamma) if alice_gamma is not None else None
    out["gamma_bob"] = GAMMA.get(bob_gamma) if bob_gamma is not None else None
    return Transcript("coin", cfg, run.events, verdict, out)


def run_bit_commitment(inputs, geometry=None, rng=None, *, forced_alpha=None, forced_beta=None,
                       behavior=None) -> Transcript:
    """Commit at t0 (alpha announced), reveal at t0 + d, Bob opens when he can."""
    run, verdict, cfg = _execute("bc", inputs, geometry, rng, forced_alpha, forced_beta, behavior,
                                 send_carrier=False)
    out = _core_outputs(run)
    tl = out["timeline"]
    out["committed_bit"] = pauli.coset_of(inputs.sigma_a, inputs.basis)
    out["revealed_bit"] = run.coset_b if verdict.accepted else None
    out["phases"] = {"commit": tl["inputs"], "reveal": tl["alice_reveal"], "open": tl["bob_verdict"]}
    return Transcript("bc", cfg, run.events, verdict, out)


PROTOCOLS: dict[str, Callable[..., Transcript]] = {
    "core": run_core,
    "ot": run_ot,
    "tpsc": run_tpsc,
    "coin": run_coin_toss,
    "bc": run_bit_commitment,
}


def run_protocol(name: str, inputs: ProtocolInputs, geometry=None, rng=None, **kw) -> Transcript:
    try:
        runner = PROTOCOLS[name]
    except KeyError:
        raise ValueError(f"unknown protocol {name!r}; expected one of {sorted(PROTOCOLS)}") from None
    return runner(inputs, geometry, rng, **kw)


def mlc_forced_coset(run: _Run) -> Optional[int]:
    """The Alice coset a delayed-input reveal is pinned to."""
    if run.record_label is None or run.reveal_label is None:
        return None
    return run.reveal_label ^ run.record_label
