"""Exit criteria, each at its stated scale and tolerance.

Run on their own with ``pytest -m acceptance``; every criterion adds one
PASS/FAIL line to the terminal summary.
"""
import itertools
import json

import numpy as np
import pytest

from relqc import adversary, cli, conformance, engine, pauli
from relqc.engine import Party, ProtocolInputs
from relqc.pauli import BasisMode, I, X, Z, ZX
from relqc.spacetime import EVE_PIECES, Geometry, eve_assembly_time

pytestmark = pytest.mark.acceptance

SEED = 20240611
BAND = (0.45, 0.55)


def test_1_table_conformance(criterion):
    entries = conformance.check_tables()
    ok = sum(e.ok for e in entries)
    swap = sum(e.ok for e in entries if e.table == "swap")
    tele = sum(e.ok for e in entries if e.table == "teleport")
    criterion(1, len(entries) == 80 and ok == 80 and all(e.closed_form is not None for e in entries),
              f"{ok}/80 entries agree on both paths (swap {swap}/64, teleport {tele}/16)")


def test_2_honest_completeness(criterion):
    runs = {"ot": engine.run_ot, "tpsc": engine.run_tpsc, "coin": engine.run_coin_toss,
            "bc": engine.run_bit_commitment}
    summary, ok = [], True
    for name, fn in runs.items():
        rng = np.random.default_rng(SEED)
        accepted = invalid = 0
        for _ in range(1000):
            tr = fn(ProtocolInputs.random(rng), None, rng)
            accepted += tr.accepted
            if name == "coin":
                invalid += tr.outputs["gamma"] == "invalid"
        ok &= accepted == 1000 and invalid == 0
        summary.append(f"{name} {accepted}/1000" + (f" (invalid {invalid})" if name == "coin" else ""))
    criterion(2, ok, "accepted: " + ", ".join(summary))


def _coset_partner(p, basis=BasisMode.HADAMARD):
    return next(q for q in pauli.PAULIS if q != p and pauli.coset_of(q, basis) == pauli.coset_of(p, basis))


def test_3_tpsc_determinism(criterion):
    cells = nondet = alice_leaks = bob_leaks = 0
    bells = pauli.BELL_INDICES
    for sa, sb in itertools.product(pauli.PAULIS, repeat=2):
        for left, right, fa, fb in itertools.product(bells, repeat=4):
            def go(a, b):
                return engine.run_tpsc(ProtocolInputs(a, b, left, right), None, np.random.default_rng(SEED),
                                       forced_alpha=fa, forced_beta=fb)
            tr = go(sa, sb)
            cells += 1
            if not (tr.accepted and tr.outputs["deterministic"]):
                nondet += 1
            # Alice must not tell sb from its coset partner, and Bob likewise for sa.
            if tr.view_digest(Party.ALICE) != go(sa, _coset_partner(sb)).view_digest(Party.ALICE):
                alice_leaks += 1
            if tr.view_digest(Party.BOB) != go(_coset_partner(sa), sb).view_digest(Party.BOB):
                bob_leaks += 1
    criterion(3, cells == 4096 and nondet == alice_leaks == bob_leaks == 0,
              f"{cells} cells, non-deterministic {nondet}, Alice view leaks {alice_leaks}, "
              f"Bob view leaks {bob_leaks}")


def test_4_binding(criterion):
    rep = adversary.input_alteration(trials=1000, rng=SEED)
    B = pauli.parse_bell
    got = []
    for sa in (I, X):
        tr = engine.run_core(ProtocolInputs(sa, I, B("00"), B("00")), None, np.random.default_rng(SEED),
                             forced_alpha=B("00"), forced_beta=B("11"))
        got.append(tr.outputs["sigma_i"])
    ok = rep.detected == 1000 and got == [ZX.name, Z.name]
    criterion(4, ok, f"input alteration detected {rep.detected}/1000; worked example sigma_i = {got}")


def test_5_hiding(criterion):
    full = adversary.eve_set_inference(EVE_PIECES, trials=10_000, rng=SEED)
    partial = {}
    for drop in EVE_PIECES:
        kept = [p for p in EVE_PIECES if p != drop]
        partial[drop] = adversary.eve_set_inference(kept, trials=10_000, rng=SEED).metrics["accuracy"]
    gates = []
    for g, bound in ((Geometry(), 3.0), (Geometry(colocated_bob_agent=True), 2.0)):
        d = g.d
        before = adversary.eve_set_inference(EVE_PIECES, trials=1, rng=SEED, geometry=g, at_time=bound * d - 1e-6)
        at = adversary.eve_set_inference(EVE_PIECES, trials=1, rng=SEED, geometry=g, at_time=bound * d)
        gates.append(before.status == "not_assemblable" and at.status != "not_assemblable")
    ok = full.metrics["accuracy"] == 1.0 and all(a <= 0.52 for a in partial.values()) and all(gates)
    shown = ", ".join(f"-{k} {v:.4f}" for k, v in partial.items())
    criterion(5, ok, f"full set accuracy {full.metrics['accuracy']:.4f}; {shown}; gates 3d/2d {gates}")


def test_6_coin_fairness(criterion):
    lo, hi = BAND
    shown, ok = [], True
    for strat in adversary.COIN_STRATEGIES:
        rep = adversary.coin_fairness(strat, trials=10_000, rng=SEED)
        p = rep.metrics["p_plus"]
        if p is None:
            shown.append(f"{strat} no accepted runs")
            continue
        ok &= lo <= p <= hi
        shown.append(f"{strat} {p:.4f}")
    criterion(6, ok, "P(+): " + ", ".join(shown))


def test_7_mlc(criterion):
    enum = adversary.mlc_enumeration()
    sampled = {b: adversary.mlc_delayed_alice(b, trials=10_000, rng=SEED).cheat_success / 10_000 for b in (0, 1)}
    ok = (enum["uniform_contexts"] == enum["contexts"] and enum["accepted"] == enum["runs"]
          and all(BAND[0] <= r <= BAND[1] for r in sampled.values()))
    criterion(7, ok, f"uniform in {enum['uniform_contexts']}/{enum['contexts']} contexts; "
                     f"sampled success {sampled}")


def test_8_timing(criterion):
    rows, ok = [], True
    for d in (1.0, 2.5, 7.0):
        t3 = eve_assembly_time(Geometry.default(d))
        t2 = eve_assembly_time(Geometry.default(d, colocated_bob_agent=True))
        ok &= t3 == 3 * d and t2 == 2 * d
        rows.append(f"d={d}: {t3}/{t2}")
    spoof = []
    for d in (1.0, 2.5, 7.0):
        g = Geometry.default(d)
        for frac in (-0.5, -0.01, 0.01, 0.3, 1.0):
            rep = adversary.position_spoof(frac * d, trials=200, rng=SEED, geometry=g)
            ok &= rep.detected == rep.trials
            spoof.append(rep.detected / rep.trials)
    criterion(8, ok, f"assembly {', '.join(rows)}; spoof detection min {min(spoof):.2f} over {len(spoof)} offsets")


def test_9_reproducibility(tmp_path, criterion):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"protocol": "bc", "seed": 7, "trials": 200}))
    outs = []
    for k in range(2):
        p = tmp_path / f"r{k}.json"
        assert cli.main(["run", "--config", str(cfg), "--out", str(p)]) == 0
        outs.append(p.read_bytes())
    attack = []
    for k in range(2):
        p = tmp_path / f"a{k}.json"
        assert cli.main(["attack", "--strategy", "eve-set", "--trials", "200", "--seed", "3", "--out", str(p)]) == 0
        attack.append(p.read_bytes())
    ok = outs[0] == outs[1] and attack[0] == attack[1]
    criterion(9, ok, f"run reports identical: {outs[0] == outs[1]} ({len(outs[0])} bytes); "
                     f"attack reports identical: {attack[0] == attack[1]}")
