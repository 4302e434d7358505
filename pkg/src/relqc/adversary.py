"""Cheating strategies run against the honest verifiers.

Each strategy is a per-trial function plus an aggregator. Trials get their own
generator spawned from one root :class:`numpy.random.SeedSequence`, so a report
depends only on the seed and the trial count, never on how trials are split
across worker processes.

Where the outcome of an attack is a deterministic function of a finite set of
forced measurement outcomes, an ``*_enumeration`` helper computes it
exhaustively; the sampled reports are the statistical counterpart.
"""
from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Callable, Iterable, Optional, Sequence

import numpy as np

from . import engine, pauli
from .engine import Behavior, ProtocolInputs
from .pauli import BasisMode, BellIndex, PauliOp
from .spacetime import EVE_PIECES, TIME_TOL, Geometry, eve_assembly_time

SQRT_HALF = float(np.sqrt(0.5))


@dataclass
class AttackReport:
    strategy: str
    trials: int
    detected: int = 0
    cheat_success: int = 0
    accepted: int = 0
    posterior: Optional[dict] = None
    params: dict = field(default_factory=dict)
    metrics: dict = field(default_factory=dict)
    status: str = "ok"

    @property
    def undetected(self) -> int:
        return self.trials - self.detected

    def rate(self, count: int) -> Optional[float]:
        return count / self.trials if self.trials else None

    def to_dict(self) -> dict:
        return {
            "strategy": self.strategy,
            "status": self.status,
            "trials": self.trials,
            "detected": self.detected,
            "undetected": self.undetected,
            "cheat_success": self.cheat_success,
            "accepted": self.accepted,
            "detection_rate": self.rate(self.detected),
            "success_rate": self.rate(self.cheat_success),
            "posterior": self.posterior,
            "params": self.params,
            "metrics": self.metrics,
        }


# --------------------------------------------------------------------------
# trial plumbing


def root_seed(rng) -> np.random.SeedSequence:
    """Accept a seed, a SeedSequence or a Generator (one draw is consumed)."""
    if isinstance(rng, np.random.SeedSequence):
        return rng
    if isinstance(rng, np.random.Generator):
        return np.random.SeedSequence(int(rng.integers(2**63)))
    return np.random.SeedSequence(0 if rng is None else int(rng))


def _chunk(fn, params, seeds):
    return [fn(np.random.default_rng(s), **params) for s in seeds]


def run_trials(fn: Callable[..., dict], params: dict, rng, trials: int, jobs: int = 1) -> list[dict]:
    """``fn(generator, **params)`` once per trial, results in trial order."""
    seeds = root_seed(rng).spawn(trials) if trials else []
    if jobs <= 1 or trials < 2 * jobs:
        return _chunk(fn, params, seeds)
    size = -(-trials // jobs)
    parts = [seeds[i:i + size] for i in range(0, trials, size)]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        results = pool.map(_chunk, [fn] * len(parts), [params] * len(parts), parts)
        return [r for part in results for r in part]


def _other_coset(p: PauliOp, basis, rng) -> PauliOp:
    return pauli.coset_members(1 - pauli.coset_of(p, basis), basis)[int(rng.integers(2))]


def _same_coset_other(p: PauliOp, basis) -> PauliOp:
    a, b = pauli.coset_members(pauli.coset_of(p, basis), basis)
    return b if p == a else a


# --------------------------------------------------------------------------
# binding: revealing from the other coset


def _alteration_trial(rng, target_coset, same_coset, protocol, basis, geometry) -> dict:
    fixed = {}
    if target_coset is not None and not same_coset:
        # committed to the opposite coset, reveals into the target one
        fixed["sigma_a"] = pauli.coset_members(1 - target_coset, basis)[int(rng.integers(2))]
    inputs = ProtocolInputs.random(rng, basis, **fixed)
    if same_coset:
        reveal = _same_coset_other(inputs.sigma_a, basis)
    elif target_coset is not None:
        reveal = pauli.coset_members(target_coset, basis)[int(rng.integers(2))]
    else:
        reveal = _other_coset(inputs.sigma_a, basis, rng)
    tr = engine.run_protocol(protocol, inputs, geometry, rng, behavior=Behavior(reveal_pauli=reveal))
    bob = tr.outputs["verdicts"]["bob"]
    coset = next((e.data.get("coset") for e in tr.events if e.action == "verdict" and e.agent == engine.BOB),
                 None)
    return {
        "detected": bob["status"] == "abort",
        "accepted": bob["status"] == "accept",
        "coset": coset,
        "committed": pauli.coset_of(inputs.sigma_a, basis),
        "intended": pauli.coset_of(reveal, basis),
    }


def input_alteration(target_coset: Optional[int] = None, trials: int = 1000, rng=None, *,
                     same_coset: bool = False, protocol: str = "bc", basis=BasisMode.HADAMARD,
                     geometry: Optional[Geometry] = None, jobs: int = 1) -> AttackReport:
    """Alice announces honestly, then reveals with a Pauli from the other coset.

    ``same_coset`` swaps to the other member of her own coset instead, which
    is not a deviation an observer can see.
    """
    basis = BasisMode(basis)
    params = dict(target_coset=target_coset, same_coset=same_coset, protocol=protocol, basis=basis,
                  geometry=geometry or Geometry())
    res = run_trials(_alteration_trial, params, rng, trials, jobs)
    unchanged = sum(1 for r in res if r["accepted"] and r["coset"] == r["committed"])
    return AttackReport(
        "input-alteration",
        trials,
        detected=sum(r["detected"] for r in res),
        cheat_success=sum(1 for r in res if r["accepted"] and r["coset"] == r["intended"] != r["committed"]),
        accepted=sum(r["accepted"] for r in res),
        params={"target_coset": target_coset, "same_coset": same_coset, "protocol": protocol,
                "basis": basis.value},
        metrics={"accepted_coset_unchanged": unchanged},
    )


def input_alteration_enumeration(basis=BasisMode.HADAMARD, geometry: Optional[Geometry] = None) -> dict:
    """Every sigma_a, every other-coset reveal, every pair and forced outcome."""
    basis = BasisMode(basis)
    g = geometry or Geometry()
    rng = np.random.default_rng(0)
    cells = detected = 0
    for sa, sb, left, right, a, b in itertools.product(
        pauli.PAULIS, pauli.PAULIS, pauli.BELL_INDICES, pauli.BELL_INDICES, pauli.BELL_INDICES, pauli.BELL_INDICES
    ):
        inputs = ProtocolInputs(sa, sb, left, right, basis)
        for reveal in pauli.coset_members(1 - pauli.coset_of(sa, basis), basis):
            tr = engine.run_bit_commitment(inputs, g, rng, forced_alpha=a, forced_beta=b,
                                           behavior=Behavior(reveal_pauli=reveal))
            cells += 1
            detected += tr.outputs["verdicts"]["bob"]["status"] == "abort"
    return {"cells": cells, "detected": detected}


# --------------------------------------------------------------------------
# B' answering in the wrong basis


def _bob_guess_from_reveal(tr) -> Optional[int]:
    """Bob's best coset guess with no usable record: the reveal label alone."""
    r = tr.outputs["reveal"]
    return None if r is None else int(r)


def _wrong_basis_trial(rng, substitute, geometry) -> dict:
    inputs = ProtocolInputs.random(rng, BasisMode.HADAMARD)
    sub = substitute if substitute is not None else "01"[int(rng.integers(2))]
    tr = engine.run_core(inputs, geometry, rng, behavior=Behavior(bprime_substitute=sub))
    alice = tr.outputs["verdicts"]["alice"]
    guess = _bob_guess_from_reveal(tr)
    truth = pauli.coset_of(inputs.sigma_a, BasisMode.HADAMARD)
    return {
        "detected": alice["status"] == "abort",
        "guessed": guess is not None,
        "correct": guess == truth,
    }


def wrong_basis(trials: int = 10_000, rng=None, *, substitute: Optional[str] = None,
                geometry: Optional[Geometry] = None, jobs: int = 1) -> AttackReport:
    """B' forwards ``|0>`` or ``|1>`` in place of its Hadamard-basis qubit."""
    if substitute not in (None, "0", "1"):
        raise ValueError("substitute must be '0', '1' or None (random)")
    g = geometry or Geometry()
    res = run_trials(_wrong_basis_trial, {"substitute": substitute, "geometry": g}, rng, trials, jobs)
    detected = sum(r["detected"] for r in res)
    correct = sum(r["correct"] for r in res)
    guessed = sum(r["guessed"] for r in res)
    return AttackReport(
        "wrong-basis",
        trials,
        detected=detected,
        cheat_success=correct,
        accepted=trials - detected,
        params={"substitute": substitute},
        metrics={
            "guess_accuracy": correct / guessed if guessed else None,
            "alice_abort_rate": detected / trials if trials else None,
        },
    )


def honest_guess_control(trials: int = 10_000, rng=None, *, geometry: Optional[Geometry] = None,
                         jobs: int = 1) -> dict:
    """Bob's coset accuracy on honest runs at reveal time and once everything has met."""
    g = geometry or Geometry()
    t_reveal = g.t0 + g.d
    t_full = eve_assembly_time(g)
    before = eve_set_inference(best_available(g, t_reveal), trials, rng, geometry=g, at_time=t_reveal, jobs=jobs)
    after = eve_set_inference(best_available(g, t_full), trials, rng, geometry=g, at_time=t_full, jobs=jobs)
    return {
        "before_reveal": {"t": t_reveal, "available": before.params["available"],
                          "accuracy": before.metrics["accuracy"]},
        "after_reveal": {"t": t_full, "available": after.params["available"],
                         "accuracy": after.metrics["accuracy"]},
    }


# --------------------------------------------------------------------------
# Alice delays her input


def _mlc_trial(rng, desired_bit, phi_prime, geometry) -> dict:
    inputs = ProtocolInputs.random(rng, BasisMode.HADAMARD)
    tr = engine.run_core(inputs, geometry, rng, behavior=Behavior(mlc=True, mlc_phi=phi_prime))
    forced = tr.outputs["mlc_forced_coset"]
    bob = tr.outputs["verdicts"]["bob"]
    accepted = bob["status"] == "accept"
    return {
        "forced": forced,
        "accepted": accepted,
        "success": accepted and forced == desired_bit,
        "alpha": tr.outputs["alpha"],
    }


def mlc_delayed_alice(desired_bit: int = 0, trials: int = 10_000, rng=None, *, phi_prime: str = "+",
                      geometry: Optional[Geometry] = None, jobs: int = 1) -> AttackReport:
    """Alice postpones her input and tries to land a chosen coset at reveal."""
    if desired_bit not in (0, 1):
        raise ValueError("desired_bit must be 0 or 1")
    g = geometry or Geometry()
    res = run_trials(_mlc_trial, {"desired_bit": desired_bit, "phi_prime": phi_prime, "geometry": g},
                     rng, trials, jobs)
    accepted = sum(r["accepted"] for r in res)
    success = sum(r["success"] for r in res)
    forced1 = sum(1 for r in res if r["forced"] == 1)
    return AttackReport(
        "mlc-delayed-alice",
        trials,
        detected=trials - accepted,
        cheat_success=success,
        accepted=accepted,
        params={"desired_bit": desired_bit, "phi_prime": phi_prime},
        metrics={
            "forced_coset_one_rate": forced1 / trials if trials else None,
            "accept_rate_among_success": 1.0 if success else None,
        },
    )


def mlc_enumeration(phi_prime: str = "+", geometry: Optional[Geometry] = None) -> dict:
    """Forced coset for every fabricated announcement, with all else fixed.

    Iterates pairs, Bob's input, Bob's outcome and Alice's own teleportation
    outcome; for each of those contexts it records how the four fabricated
    announcements split between the two cosets.
    """
    g = geometry or Geometry()
    rng = np.random.default_rng(0)
    contexts = uniform = 0
    accepted = runs = 0
    totals = [0, 0]
    for left, right, sb, beta, tele in itertools.product(
        pauli.BELL_INDICES, pauli.BELL_INDICES, pauli.PAULIS, pauli.BELL_INDICES, pauli.BELL_INDICES
    ):
        split = [0, 0]
        for fake in pauli.BELL_INDICES:
            beh = Behavior(mlc=True, mlc_alpha=fake, mlc_phi=phi_prime, mlc_teleport=tele)
            tr = engine.run_core(ProtocolInputs(pauli.I, sb, left, right), g, rng, forced_beta=beta, behavior=beh)
            split[tr.outputs["mlc_forced_coset"]] += 1
            runs += 1
            accepted += tr.outputs["verdicts"]["bob"]["status"] == "accept"
        contexts += 1
        uniform += split == [2, 2]
        totals[0] += split[0]
        totals[1] += split[1]
    return {"contexts": contexts, "uniform_contexts": uniform, "runs": runs, "accepted": accepted,
            "forced_coset_totals": totals}


# --------------------------------------------------------------------------
# B' holds an entangled partner of what it forwards


def _entangled_trial(rng, lambdas, post_op, arm, geometry) -> dict:
    inputs = ProtocolInputs.random(rng, BasisMode.HADAMARD)
    if arm == "attack":
        beh = Behavior(bprime_entangled=lambdas, bprime_post_op=post_op)
    elif arm == "noop":
        beh = Behavior(bprime_entangled=lambdas)
    else:
        beh = Behavior(bprime_substitute="0")
    tr = engine.run_core(inputs, geometry, rng, behavior=beh)
    alice = tr.outputs["verdicts"]["alice"]
    psi_label = next(e.data["outcome"] for e in tr.events if e.action == "measure_psi" and e.agent == engine.ALICE)
    return {"detected": alice["status"] == "abort", "psi": psi_label, "reason": alice.get("reason")}


def _entangled_arm(arm, lambdas, post_op, rng, trials, geometry, jobs) -> dict:
    res = run_trials(_entangled_trial, {"lambdas": lambdas, "post_op": post_op, "arm": arm, "geometry": geometry},
                     rng, trials, jobs)
    det = sum(r["detected"] for r in res)
    return {
        "detected": det,
        "accept_rate": (trials - det) / trials if trials else None,
        "psi_one_rate": sum(r["psi"] for r in res) / trials if trials else None,
        "outcomes": [(int(r["detected"]), int(r["psi"])) for r in res],
    }


def entangled_bprime(trials: int = 10_000, rng=None, *, lambdas=(SQRT_HALF, SQRT_HALF),
                     post_op: Optional[PauliOp] = pauli.Z, geometry: Optional[Geometry] = None,
                     jobs: int = 1) -> AttackReport:
    """B' forwards half of ``l0|00> + l1|11>`` and later acts on the other half.

    Runs three arms on the same per-trial seeds: the attack, the same state
    with no later operation, and a plain ``|0>`` substitution. The later
    operation is causally cut off from Alice's check, so all trial outcomes
    of the first two arms coincide.
    """
    g = geometry or Geometry()
    lam = tuple(complex(x) for x in lambdas)
    entropy = root_seed(rng).entropy  # same per-trial seeds in every arm
    arms = {arm: _entangled_arm(arm, lam, post_op, entropy, trials, g, jobs) for arm in ("attack", "noop", "baseline")}
    same_noop = arms["attack"]["outcomes"] == arms["noop"]["outcomes"]
    same_baseline = arms["attack"]["outcomes"] == arms["baseline"]["outcomes"]
    metrics = {arm: {k: v for k, v in a.items() if k != "outcomes"} for arm, a in arms.items()}
    metrics["identical_to_noop"] = same_noop
    metrics["identical_to_baseline"] = same_baseline
    det = arms["attack"]["detected"]
    return AttackReport(
        "entangled-bprime",
        trials,
        detected=det,
        cheat_success=0,
        accepted=trials - det,
        params={"lambdas": [repr(x) for x in lam], "post_op": post_op.name if post_op is not None else None},
        metrics=metrics,
    )


# --------------------------------------------------------------------------
# what Bob's side can infer from pieces of the eavesdropper's set


def _psi_label(phi, basis, left, right, sa, sb, alpha, beta) -> int:
    sigma_i = engine.implied_correction(left, right, sa, alpha, beta)
    return phi ^ pauli.coset_of(pauli.compose(sigma_i, sb), basis)


@lru_cache(maxsize=None)
def coset_posterior(available: frozenset, observed: tuple, left: BellIndex, right: BellIndex, phi: int,
                    basis: BasisMode) -> tuple[float, float]:
    """P(coset of sigma_a | the available pieces), uniform priors.

    ``observed`` is ``(state_b, state_psi, alpha, beta)`` with unavailable
    entries ignored; ``state_b`` and ``state_psi`` are basis labels. In an
    honest run both Bell outcomes are uniform and independent of the inputs.
    """
    obs = dict(zip(EVE_PIECES, observed))
    weight = [0, 0]
    for sa, sb, a, b in itertools.product(pauli.PAULIS, pauli.PAULIS, pauli.BELL_INDICES, pauli.BELL_INDICES):
        hidden = {
            "state_b": phi ^ pauli.coset_of(sb, basis),
            "state_psi": _psi_label(phi, basis, left, right, sa, sb, a, b),
            "alpha": a,
            "beta": b,
        }
        if all(hidden[k] == obs[k] for k in available):
            weight[pauli.coset_of(sa, basis)] += 1
    total = sum(weight)
    return (weight[0] / total, weight[1] / total)


def map_guess(post: Sequence[float]) -> int:
    """Most probable coset; ties go to 0."""
    return 1 if post[1] > post[0] else 0


def parse_available(names: str | Iterable[str]) -> frozenset:
    items = [s.strip() for s in names.split(",")] if isinstance(names, str) else list(names)
    items = [s for s in items if s]
    bad = sorted(set(items) - set(EVE_PIECES))
    if bad:
        raise ValueError(f"unknown piece(s) {bad}; expected a subset of {list(EVE_PIECES)}")
    return frozenset(items)


def best_available(g: Geometry, at_time: float) -> frozenset:
    """Largest set of pieces co-located at any single Bob-side site by ``at_time``."""
    from .spacetime import available_pieces

    sets = available_pieces(g, at_time).values()
    return max(sets, key=lambda s: (len(s), sorted(s)))


def _eve_trial(rng, available, basis, geometry) -> dict:
    inputs = ProtocolInputs.random(rng, basis)
    tr = engine.run_core(inputs, geometry, rng)
    out = tr.outputs
    observed = (
        inputs.phi ^ pauli.coset_of(inputs.sigma_b, basis),
        out["record"],
        pauli.parse_bell(out["alpha"]),
        pauli.parse_bell(out["beta"]),
    )
    post = coset_posterior(available, observed, inputs.left, inputs.right, inputs.phi, basis)
    truth = pauli.coset_of(inputs.sigma_a, basis)
    return {"post": post, "correct": map_guess(post) == truth, "truth": truth}


def eve_set_inference(available="state_b,state_psi,alpha,beta", trials: int = 10_000, rng=None, *,
                      geometry: Optional[Geometry] = None, at_time: Optional[float] = None,
                      basis=BasisMode.HADAMARD, jobs: int = 1) -> AttackReport:
    """MAP guess of Alice's coset from a subset of the eavesdropper's set.

    With ``at_time`` the subset must be co-locatable at one Bob-side site by
    then; otherwise nothing is inferred and the status says so.
    """
    pieces = parse_available(available)
    g = geometry or Geometry()
    basis = BasisMode(basis)
    earliest = eve_assembly_time(g, sorted(pieces)) if pieces else g.t0
    params = {"available": sorted(pieces), "at_time": at_time, "earliest_assembly": earliest}
    if at_time is not None and at_time < earliest - TIME_TOL:
        return AttackReport("eve-set", trials, params=params, status="not_assemblable",
                            metrics={"accuracy": None})
    res = run_trials(_eve_trial, {"available": pieces, "basis": basis, "geometry": g}, rng, trials, jobs)
    correct = sum(r["correct"] for r in res)
    n = len(res)
    post = [sum(r["post"][k] for r in res) / n for k in (0, 1)] if n else [None, None]
    true_mass = sum(r["post"][r["truth"]] for r in res) / n if n else None
    return AttackReport(
        "eve-set",
        trials,
        detected=0,
        cheat_success=correct,
        accepted=trials,
        posterior={"0": post[0], "1": post[1]},
        params=params,
        metrics={
            "accuracy": correct / n if n else None,
            "mean_posterior_on_truth": true_mass,
        },
    )


# --------------------------------------------------------------------------
# Alice answering from the wrong place


def _spoof_trial(rng, offset, protocol, geometry) -> dict:
    inputs = ProtocolInputs.random(rng, BasisMode.HADAMARD)
    beh = Behavior(reveal_offset=offset)
    tr = engine.run_protocol(protocol, inputs, geometry, rng, behavior=beh)
    bob = tr.outputs["verdicts"]["bob"]
    reason = bob.get("reason", "") if bob else ""
    return {"detected": bob["status"] == "abort" and reason.startswith("timing"),
            "aborted": bob["status"] == "abort"}


def position_spoof(offset: float, trials: int = 1000, rng=None, *, protocol: str = "bc",
                   geometry: Optional[Geometry] = None, jobs: int = 1) -> AttackReport:
    """Alice emits her reveal from ``x_a + offset`` at the honest time."""
    g = geometry or Geometry()
    res = run_trials(_spoof_trial, {"offset": float(offset), "protocol": protocol, "geometry": g},
                     rng, trials, jobs)
    det = sum(r["detected"] for r in res)
    aborted = sum(r["aborted"] for r in res)
    return AttackReport(
        "position-spoof",
        trials,
        detected=det,
        cheat_success=trials - aborted,
        accepted=trials - aborted,
        params={"offset": float(offset), "protocol": protocol},
    )


# --------------------------------------------------------------------------
# coin fairness under each deviation


def _coin_behavior(strategy: str, inputs: ProtocolInputs, rng, g: Geometry) -> tuple[ProtocolInputs, Behavior]:
    basis = inputs.basis
    if strategy == "honest":
        return inputs, Behavior()
    if strategy == "alice-fixed-coset":
        return ProtocolInputs(pauli.I, inputs.sigma_b, inputs.left, inputs.right, basis), Behavior()
    if strategy == "bob-fixed-coset":
        return ProtocolInputs(inputs.sigma_a, pauli.I, inputs.left, inputs.right, basis), Behavior()
    if strategy == "alice-alteration":
        return inputs, Behavior(reveal_pauli=_other_coset(inputs.sigma_a, basis, rng))
    if strategy == "alice-mlc":
        return inputs, Behavior(mlc=True)
    if strategy == "alice-spoof":
        return inputs, Behavior(reveal_offset=0.3 * g.d)
    if strategy == "bob-wrong-basis":
        return inputs, Behavior(bprime_substitute="01"[int(rng.integers(2))])
    if strategy == "bob-entangled":
        return inputs, Behavior(bprime_entangled=(SQRT_HALF, SQRT_HALF), bprime_post_op=pauli.Z)
    raise ValueError(f"unknown coin strategy {strategy!r}")


COIN_STRATEGIES = ("honest", "alice-fixed-coset", "bob-fixed-coset", "alice-alteration", "alice-mlc",
                   "alice-spoof", "bob-wrong-basis", "bob-entangled")


def _coin_trial(rng, strategy, geometry) -> dict:
    inputs = ProtocolInputs.random(rng, BasisMode.HADAMARD)
    inputs, beh = _coin_behavior(strategy, inputs, rng, geometry)
    tr = engine.run_coin_toss(inputs, geometry, rng, behavior=beh)
    return {"gamma": tr.outputs["gamma"]}


def coin_fairness(strategy: str = "honest", trials: int = 10_000, rng=None, *,
                  geometry: Optional[Geometry] = None, jobs: int = 1) -> AttackReport:
    """Frequency of each coin value when one side plays ``strategy``."""
    if strategy not in COIN_STRATEGIES:
        raise ValueError(f"unknown coin strategy {strategy!r}; expected one of {list(COIN_STRATEGIES)}")
    g = geometry or Geometry()
    res = run_trials(_coin_trial, {"strategy": strategy, "geometry": g}, rng, trials, jobs)
    counts = {k: sum(1 for r in res if r["gamma"] == k) for k in ("+", "-", "invalid")}
    valid = counts["+"] + counts["-"]
    return AttackReport(
        "coin-fairness",
        trials,
        detected=counts["invalid"],
        cheat_success=0,
        accepted=valid,
        params={"coin_strategy": strategy},
        metrics={
            "counts": counts,
            "p_plus": counts["+"] / valid if valid else None,
            "p_invalid": counts["invalid"] / trials if trials else None,
        },
    )


# --------------------------------------------------------------------------
# registry


@dataclass(frozen=True)
class Strategy:
    name: str
    run: Callable[..., AttackReport]
    protocols: frozenset
    hadamard_only: bool = False
    default_protocol: str = "bc"


STRATEGIES: dict[str, Strategy] = {
    s.name: s
    for s in (
        Strategy("input-alteration", input_alteration, frozenset(engine.PROTOCOLS)),
        Strategy("wrong-basis", wrong_basis, frozenset({"core"}), hadamard_only=True, default_protocol="core"),
        Strategy("mlc-delayed-alice", mlc_delayed_alice, frozenset({"core"}), hadamard_only=True,
                 default_protocol="core"),
        Strategy("entangled-bprime", entangled_bprime, frozenset({"core"}), hadamard_only=True,
                 default_protocol="core"),
        Strategy("eve-set", eve_set_inference, frozenset({"core"}), default_protocol="core"),
        Strategy("position-spoof", position_spoof, frozenset(engine.PROTOCOLS)),
        Strategy("coin-fairness", coin_fairness, frozenset({"coin"}), hadamard_only=True, default_protocol="coin"),
    )
}


def check_compatible(strategy: str, protocol: Optional[str], basis) -> str:
    """Resolve the protocol for ``strategy``; raises ValueError on a bad pair."""
    try:
        s = STRATEGIES[strategy]
    except KeyError:
        raise ValueError(f"unknown strategy {strategy!r}; expected one of {sorted(STRATEGIES)}") from None
    proto = protocol or s.default_protocol
    if proto not in s.protocols:
        raise ValueError(f"strategy {strategy!r} cannot run with protocol {proto!r}; "
                         f"supported: {sorted(s.protocols)}")
    if s.hadamard_only and BasisMode(basis) is not BasisMode.HADAMARD:
        raise ValueError(f"strategy {strategy!r} needs the hadamard basis")
    return proto
