import numpy as np
import pytest

from relqc import adversary, engine, pauli
from relqc.adversary import AttackReport
from relqc.engine import ProtocolInputs
from relqc.pauli import BasisMode
from relqc.spacetime import Geometry


def test_report_shape():
    r = AttackReport("x", 10, detected=3)
    d = r.to_dict()
    assert d["undetected"] == 7 and d["detection_rate"] == 0.3
    assert AttackReport("x", 0).to_dict()["detection_rate"] is None


def test_run_trials_independent_of_jobs():
    fn = adversary._coin_trial
    params = {"strategy": "honest", "geometry": Geometry()}
    a = adversary.run_trials(fn, params, 11, 40, jobs=1)
    b = adversary.run_trials(fn, params, 11, 40, jobs=2)
    assert a == b


def test_root_seed_forms():
    g = np.random.default_rng(1)
    assert isinstance(adversary.root_seed(g), np.random.SeedSequence)
    assert adversary.root_seed(5).entropy == 5


# --- input alteration ------------------------------------------------------


@pytest.mark.parametrize("protocol", ["bc", "coin", "ot", "tpsc", "core"])
def test_alteration_always_detected(protocol):
    r = adversary.input_alteration(None, 150, 3, protocol=protocol)
    assert r.detected == r.trials == 150
    assert r.cheat_success == 0


@pytest.mark.parametrize("target", [0, 1])
def test_alteration_with_target(target):
    r = adversary.input_alteration(target, 100, 4)
    assert r.detected == 100


def test_alteration_zero_trials():
    r = adversary.input_alteration(None, 0, 1)
    assert (r.trials, r.detected, r.cheat_success) == (0, 0, 0)


def test_same_coset_alteration_is_invisible():
    r = adversary.input_alteration(None, 200, 5, same_coset=True)
    assert r.detected == 0
    assert r.metrics["accepted_coset_unchanged"] == 200


def test_alteration_enumeration_is_total():
    res = adversary.input_alteration_enumeration()
    assert res == {"cells": 4 * 4 * 16 * 16 * 2, "detected": 4 * 4 * 16 * 16 * 2}


def test_alteration_computational_mode():
    r = adversary.input_alteration(None, 100, 6, basis="computational")
    assert r.detected == 100


# --- wrong basis -----------------------------------------------------------


def test_wrong_basis_halves():
    r = adversary.wrong_basis(2000, 7)
    assert 0.45 <= r.metrics["guess_accuracy"] <= 0.55
    assert 0.45 <= r.metrics["alice_abort_rate"] <= 0.55


def test_wrong_basis_single_trial():
    d = adversary.wrong_basis(1, 7).to_dict()
    assert d["trials"] == 1 and d["detected"] in (0, 1)


def test_wrong_basis_bad_substitute():
    with pytest.raises(ValueError):
        adversary.wrong_basis(1, 1, substitute="+")


def test_honest_control_before_and_after():
    c = adversary.honest_guess_control(1000, 8)
    assert c["before_reveal"]["t"] == 2.0
    assert 0.44 <= c["before_reveal"]["accuracy"] <= 0.56
    assert c["after_reveal"]["accuracy"] == 1.0


# --- delayed input ---------------------------------------------------------


def test_mlc_rate_and_acceptance():
    r = adversary.mlc_delayed_alice(1, 2000, 9)
    assert r.accepted == 2000
    assert 0.45 <= r.cheat_success / r.trials <= 0.55


def test_mlc_forced_single_run_success():
    beh = engine.Behavior(mlc=True, mlc_alpha=pauli.parse_bell("01"), mlc_teleport=pauli.parse_bell("10"))
    tr = engine.run_core(ProtocolInputs(), None, np.random.default_rng(0), forced_beta=pauli.parse_bell("11"),
                         behavior=beh)
    forced = tr.outputs["mlc_forced_coset"]
    assert tr.outputs["verdicts"]["bob"]["status"] == "accept"
    bob = next(e for e in tr.events if e.action == "verdict" and e.agent == engine.BOB)
    assert bob.data["coset"] == forced


def test_mlc_bad_bit():
    with pytest.raises(ValueError):
        adversary.mlc_delayed_alice(2, 1, 1)


# --- entangled B' ----------------------------------------------------------


def test_entangled_post_op_changes_nothing():
    r = adversary.entangled_bprime(400, 10)
    assert r.metrics["identical_to_noop"]
    assert r.metrics["identical_to_baseline"]
    assert r.metrics["attack"]["accept_rate"] == r.metrics["baseline"]["accept_rate"]


def test_entangled_product_case_matches_wrong_basis():
    e = adversary.entangled_bprime(300, 12, lambdas=(1, 0))
    w = adversary.wrong_basis(300, 12, substitute="0")
    assert e.detected == w.detected


def test_entangled_identity_post_op():
    r = adversary.entangled_bprime(200, 13, post_op=pauli.I)
    assert r.metrics["identical_to_noop"]


# --- eve set ---------------------------------------------------------------

FULL = "state_b,state_psi,alpha,beta"


def test_eve_full_set():
    r = adversary.eve_set_inference(FULL, 500, 14)
    assert r.metrics["accuracy"] == 1.0


@pytest.mark.parametrize("drop", ["state_b", "state_psi", "alpha", "beta"])
def test_eve_missing_piece_is_uniform(drop):
    avail = [p for p in FULL.split(",") if p != drop]
    r = adversary.eve_set_inference(avail, 500, 15)
    assert r.posterior == {"0": 0.5, "1": 0.5}
    assert r.metrics["mean_posterior_on_truth"] == 0.5


@pytest.mark.parametrize("colocated, bound", [(False, 3.0), (True, 2.0)])
def test_eve_time_gate(colocated, bound):
    g = Geometry.default(1.0, colocated_bob_agent=colocated)
    assert adversary.eve_set_inference(FULL, 5, 1, geometry=g, at_time=bound - 1e-6).status == "not_assemblable"
    assert adversary.eve_set_inference(FULL, 5, 1, geometry=g, at_time=bound).status == "ok"


def test_eve_posterior_table():
    post = adversary.coset_posterior(frozenset({"state_b", "alpha", "beta"}), (0, None, pauli.parse_bell("00"),
                                     pauli.parse_bell("00")), pauli.parse_bell("00"), pauli.parse_bell("00"), 0,
                                     BasisMode.HADAMARD)
    assert post == (0.5, 0.5)
    assert adversary.map_guess((0.5, 0.5)) == 0
    assert adversary.map_guess((0.2, 0.8)) == 1


def test_parse_available_rejects():
    with pytest.raises(ValueError, match="unknown piece"):
        adversary.parse_available("alpha,gamma")


# --- position spoof --------------------------------------------------------


@pytest.mark.parametrize("offset", [0.3, -0.3, 0.01, -0.01, 1.0, 0.6])
def test_spoof_detected(offset):
    r = adversary.position_spoof(offset, 100, 16)
    assert r.detected == 100


def test_spoof_mirror_point_detected_by_direction():
    g = Geometry.default(1.0)
    r = adversary.position_spoof(2 * 0.5, 200, 17, geometry=g)  # offset = 2r
    assert r.detected == 200


def test_spoof_zero_offset_is_honest():
    r = adversary.position_spoof(0.0, 100, 18)
    assert r.detected == 0
    seeds = adversary.root_seed(18).spawn(3)
    for s in seeds:
        rng1, rng2 = np.random.default_rng(s), np.random.default_rng(s)
        a = engine.run_bit_commitment(ProtocolInputs.random(rng1), None, rng1,
                                      behavior=engine.Behavior(reveal_offset=0.0))
        b = engine.run_bit_commitment(ProtocolInputs.random(rng2), None, rng2)
        assert a.to_json() == b.to_json()


def test_spoof_colocated():
    g = Geometry.default(1.0, colocated_bob_agent=True)
    assert adversary.position_spoof(0.05, 50, 19, geometry=g).detected == 50


# --- coin ------------------------------------------------------------------


@pytest.mark.parametrize("strategy", adversary.COIN_STRATEGIES)
def test_coin_strategies_run(strategy):
    r = adversary.coin_fairness(strategy, 200, 20)
    c = r.metrics["counts"]
    assert sum(c.values()) == 200
    if strategy in ("honest", "alice-fixed-coset", "bob-fixed-coset", "alice-mlc"):
        assert c["invalid"] == 0
    if strategy in ("alice-alteration", "alice-spoof"):
        assert c["invalid"] == 200


def test_coin_unknown_strategy():
    with pytest.raises(ValueError):
        adversary.coin_fairness("nope", 1, 1)


# --- registry --------------------------------------------------------------


def test_compatibility():
    assert adversary.check_compatible("input-alteration", None, "hadamard") == "bc"
    assert adversary.check_compatible("coin-fairness", None, "hadamard") == "coin"
    with pytest.raises(ValueError, match="cannot run"):
        adversary.check_compatible("coin-fairness", "bc", "hadamard")
    with pytest.raises(ValueError, match="hadamard"):
        adversary.check_compatible("wrong-basis", None, "computational")
    with pytest.raises(ValueError, match="unknown strategy"):
        adversary.check_compatible("zzz", None, "hadamard")
