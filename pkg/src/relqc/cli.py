"""``relqc`` command line: run protocols, check the tables, run attacks.

Configuration comes from an optional JSON file (``--config``) overlaid by
flags. The fully resolved configuration is written into every report, so a
report alone is enough to reproduce it.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from collections import Counter
from typing import Any, Optional, Sequence


from . import adversary, conformance, engine, oracle, pauli
from .engine import ProtocolInputs
from .pauli import BasisMode
from .spacetime import Geometry

REPORT_SCHEMA = "report/v1"
log = logging.getLogger("relqc")


class ConfigError(ValueError):
    """Invalid configuration; the message names the offending field."""


# --------------------------------------------------------------------------
# config resolution

RUN_DEFAULTS = {
    "protocol": "core",
    "basis": "hadamard",
    "seed": 0,
    "trials": 1,
    "inputs": "random",
    "forced_outcomes": {"alpha": None, "beta": None},
    "geometry": None,
    "jobs": 1,
}

ATTACK_DEFAULTS = {
    "protocol": None,
    "basis": "hadamard",
    "seed": 0,
    "trials": 1000,
    "geometry": None,
    "jobs": 1,
    "adversary": {"strategy": None, "params": {}},
}


def _load_json(path: str, what: str) -> dict:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"{what}: cannot read {path!r}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{what}: {path!r} is not valid JSON ({exc.msg})") from None
    if not isinstance(data, dict):
        raise ConfigError(f"{what}: {path!r} must hold a JSON object")
    return data


def _field(fn, value, name):
    try:
        return fn(value)
    except (ValueError, TypeError, KeyError) as exc:
        raise ConfigError(f"{name}: {exc}") from None


def _geometry(value) -> Geometry:
    if value is None:
        return Geometry()
    if isinstance(value, Geometry):
        return value
    if not isinstance(value, dict):
        raise ConfigError("geometry: expected an object")
    return _field(Geometry.from_dict, value, "geometry")


def _raw_inputs(cfg: dict) -> dict:
    """Normalise ``inputs`` to a dict of fixed fields (possibly empty)."""
    raw = cfg.get("inputs", "random")
    if raw in (None, "random"):
        return {}
    if not isinstance(raw, dict):
        raise ConfigError("inputs: expected 'random' or an object")
    unknown = set(raw) - {"sigma_a", "sigma_b", "pairs", "phi"}
    if unknown:
        raise ConfigError(f"inputs: unknown field(s) {sorted(unknown)}")
    return raw


def _parse_fixed(given: dict, basis: BasisMode) -> dict:
    fixed: dict[str, Any] = {}
    if given.get("sigma_a") is not None:
        fixed["sigma_a"] = _field(pauli.parse_pauli, given["sigma_a"], "inputs.sigma_a")
    if given.get("sigma_b") is not None:
        fixed["sigma_b"] = _field(pauli.parse_pauli, given["sigma_b"], "inputs.sigma_b")
    if given.get("pairs") is not None:
        pairs = given["pairs"]
        if isinstance(pairs, str):
            pairs = pairs.split(",")
        if len(pairs) != 2:
            raise ConfigError("inputs.pairs: expected two Bell indices, e.g. 00,11")
        fixed["left"], fixed["right"] = (_field(pauli.parse_bell, p.strip(), "inputs.pairs") for p in pairs)
    if given.get("phi") is not None:
        kets = ("+", "-") if basis is BasisMode.HADAMARD else ("0", "1")
        if given["phi"] not in kets:
            raise ConfigError(f"inputs.phi: must be one of {list(kets)} in {basis.value} mode")
        fixed["phi"] = kets.index(given["phi"])
    return fixed


def _forced(value, name):
    return None if value is None else _field(pauli.parse_bell, value, name)


def _merge(defaults: dict, file_cfg: dict, overrides: dict) -> dict:
    cfg = json.loads(json.dumps(defaults))
    for src in (file_cfg, overrides):
        for k, v in src.items():
            if isinstance(v, dict) and isinstance(cfg.get(k), dict):
                cfg[k] = {**cfg[k], **v}
            else:
                cfg[k] = v
    return cfg


def _run_overrides(args) -> dict:
    o: dict[str, Any] = {}
    for name in ("protocol", "basis", "seed", "trials", "jobs"):
        v = getattr(args, name)
        if v is not None:
            o[name] = v
    inputs = {k: getattr(args, k) for k in ("sigma_a", "sigma_b", "pairs") if getattr(args, k) is not None}
    if inputs:
        o["inputs"] = inputs
    forced = {k: getattr(args, f"forced_{k}") for k in ("alpha", "beta") if getattr(args, f"forced_{k}") is not None}
    if forced:
        o["forced_outcomes"] = forced
    if args.geometry is not None:
        o["geometry"] = _load_json(args.geometry, "geometry")
    return o


def resolve_run_config(args) -> dict:
    file_cfg = _load_json(args.config, "config") if args.config else {}
    unknown = set(file_cfg) - set(RUN_DEFAULTS)
    if unknown:
        raise ConfigError(f"config: unknown field(s) {sorted(unknown)}")
    cfg = _merge(RUN_DEFAULTS, file_cfg, _run_overrides(args))
    return _validate_common(cfg, run=True)


def _validate_common(cfg: dict, run: bool) -> dict:
    if run and cfg["protocol"] not in engine.PROTOCOLS:
        raise ConfigError(f"protocol: unknown {cfg['protocol']!r}; expected one of {sorted(engine.PROTOCOLS)}")
    basis = _field(BasisMode, cfg["basis"], "basis")
    cfg["basis"] = basis.value
    for name in ("seed", "trials", "jobs"):
        if not isinstance(cfg[name], int) or isinstance(cfg[name], bool) or cfg[name] < 0:
            raise ConfigError(f"{name}: expected a non-negative integer, got {cfg[name]!r}")
    if cfg["seed"] >= 2**64:
        raise ConfigError("seed: must fit in 64 bits")
    if cfg["jobs"] < 1:
        raise ConfigError("jobs: must be at least 1")
    cfg["geometry"] = _geometry(cfg.get("geometry")).to_dict()
    if run:
        given = _raw_inputs(cfg)
        _parse_fixed(given, basis)
        cfg["inputs"] = given or "random"
        fo = cfg.get("forced_outcomes") or {}
        if set(fo) - {"alpha", "beta"}:
            raise ConfigError(f"forced_outcomes: unknown field(s) {sorted(set(fo) - {'alpha', 'beta'})}")
        cfg["forced_outcomes"] = {}
        for k in ("alpha", "beta"):
            b = _forced(fo.get(k), f"forced_outcomes.{k}")
            cfg["forced_outcomes"][k] = b.code if b is not None else None
    return cfg


# --------------------------------------------------------------------------
# run


def _run_trial(rng, protocol, fixed, basis, geometry, forced_alpha, forced_beta, keep) -> dict:
    inputs = ProtocolInputs.random(rng, basis, **fixed)
    tr = engine.run_protocol(protocol, inputs, geometry, rng, forced_alpha=forced_alpha, forced_beta=forced_beta)
    out = tr.outputs
    summary: dict[str, Any] = {
        "accepted": tr.accepted,
        "reason": tr.verdict.reason,
        "sigma_i": out.get("sigma_i"),
    }
    if protocol == "coin":
        summary["gamma"] = out["gamma"]
    elif protocol == "bc":
        summary["committed"] = out["committed_bit"]
        summary["revealed"] = out["revealed_bit"]
        summary["phases"] = out["phases"]
    elif protocol == "ot":
        summary["to_alice"] = out["bob_to_alice"]["coset"]
        summary["to_bob"] = out["alice_to_bob"]["coset"]
        summary["sites"] = (out["bob_to_alice"]["site"], out["alice_to_bob"]["site"])
        summary["ot_correct"] = (
            out["bob_to_alice"]["coset"] == pauli.coset_of(inputs.sigma_b, basis)
            and out["alice_to_bob"]["coset"] == pauli.coset_of(inputs.sigma_a, basis)
        )
    elif protocol == "tpsc":
        summary["deterministic"] = out["deterministic"]
    if keep:
        summary["transcript"] = tr.to_dict()
    return summary


def _counts(values) -> dict:
    return {str(k): v for k, v in sorted(Counter(values).items(), key=lambda kv: str(kv[0]))}


def execute_run(cfg: dict, keep_all: bool = False) -> dict:
    basis = BasisMode(cfg["basis"])
    geometry = Geometry.from_dict(cfg["geometry"])
    fixed = _parse_fixed(_raw_inputs(cfg), basis)
    fo = cfg["forced_outcomes"]
    trials = cfg["trials"]
    params = {
        "protocol": cfg["protocol"],
        "fixed": fixed,
        "basis": basis,
        "geometry": geometry,
        "forced_alpha": _forced(fo["alpha"], "forced_outcomes.alpha"),
        "forced_beta": _forced(fo["beta"], "forced_outcomes.beta"),
        "keep": keep_all or trials == 1,
    }
    res = adversary.run_trials(_run_trial, params, cfg["seed"], trials, cfg["jobs"])
    accepted = sum(r["accepted"] for r in res)
    results: dict[str, Any] = {
        "trials": trials,
        "verdicts": {"accept": accepted, "abort": trials - accepted},
        "abort_reasons": _counts(r["reason"] for r in res if not r["accepted"]),
        "accept_rate": accepted / trials if trials else None,
    }
    proto = cfg["protocol"]
    if proto == "core":
        results["sigma_i"] = _counts(r["sigma_i"] for r in res)
    elif proto == "coin":
        g = _counts(r["gamma"] for r in res)
        results["gamma"] = {k: g.get(k, 0) for k in ("+", "-", "invalid")}
        valid = results["gamma"]["+"] + results["gamma"]["-"]
        results["p_plus"] = results["gamma"]["+"] / valid if valid else None
    elif proto == "bc":
        results["revealed_bit"] = _counts(r["revealed"] for r in res)
        results["binding_matches"] = sum(1 for r in res if r["revealed"] == r["committed"])
        results["phases"] = sorted({json.dumps(r["phases"], sort_keys=True) for r in res})
        results["phases"] = [json.loads(p) for p in results["phases"]]
    elif proto == "ot":
        results["to_alice"] = _counts(r["to_alice"] for r in res)
        results["to_bob"] = _counts(r["to_bob"] for r in res)
        results["transfer_sites"] = _counts("/".join(str(s) for s in r["sites"]) for r in res)
        results["correct_transfers"] = sum(r["ot_correct"] for r in res)
    elif proto == "tpsc":
        results["deterministic"] = sum(1 for r in res if r["deterministic"])
    if params["keep"]:
        if trials == 1:
            results["transcript"] = res[0]["transcript"]
        else:
            results["transcripts"] = [r["transcript"] for r in res]
    return results


# --------------------------------------------------------------------------
# attack


def resolve_attack_config(args) -> dict:
    file_cfg = _load_json(args.config, "config") if args.config else {}
    unknown = set(file_cfg) - set(ATTACK_DEFAULTS)
    if unknown:
        raise ConfigError(f"config: unknown field(s) {sorted(unknown)}")
    over: dict[str, Any] = {}
    for name in ("protocol", "basis", "seed", "trials", "jobs"):
        v = getattr(args, name)
        if v is not None:
            over[name] = v
    if args.geometry is not None:
        over["geometry"] = _load_json(args.geometry, "geometry")
    adv = dict(file_cfg.get("adversary") or {})
    params = dict(adv.get("params") or {})
    if args.strategy is not None:
        adv["strategy"] = args.strategy
    for flag in ("available", "offset", "desired_bit", "target_coset", "coin_strategy", "substitute", "at_time"):
        v = getattr(args, flag)
        if v is not None:
            params[flag] = v
    if args.same_coset:
        params["same_coset"] = True
    adv["params"] = params
    cfg = _merge(ATTACK_DEFAULTS, {k: v for k, v in file_cfg.items() if k != "adversary"}, over)
    cfg["adversary"] = adv
    cfg = _validate_common(cfg, run=False)
    if not adv.get("strategy"):
        raise ConfigError("adversary.strategy: required (use --strategy)")
    try:
        cfg["protocol"] = adversary.check_compatible(adv["strategy"], cfg["protocol"], cfg["basis"])
    except ValueError as exc:
        raise ConfigError(f"adversary.strategy: {exc}") from None
    cfg["adversary"]["params"] = _attack_params(adv["strategy"], params, cfg)
    return cfg


_ATTACK_PARAMS = {
    "input-alteration": {"target_coset": None, "same_coset": False},
    "wrong-basis": {"substitute": None},
    "mlc-delayed-alice": {"desired_bit": 0},
    "entangled-bprime": {},
    "eve-set": {"available": "state_b,state_psi,alpha,beta", "at_time": None},
    "position-spoof": {"offset": None},
    "coin-fairness": {"coin_strategy": "honest"},
}


def _attack_params(strategy: str, params: dict, cfg: dict) -> dict:
    allowed = _ATTACK_PARAMS[strategy]
    extra = set(params) - set(allowed)
    if extra:
        raise ConfigError(f"adversary.params: {sorted(extra)} not used by strategy {strategy!r}")
    out = {**allowed, **params}
    if strategy == "position-spoof":
        if out["offset"] is None:
            raise ConfigError("adversary.params.offset: required for position-spoof (use --offset)")
        out["offset"] = _field(float, out["offset"], "adversary.params.offset")
    if strategy == "eve-set":
        av = out["available"]
        out["available"] = sorted(_field(adversary.parse_available, av, "adversary.params.available"))
    if strategy == "coin-fairness" and out["coin_strategy"] not in adversary.COIN_STRATEGIES:
        raise ConfigError(f"adversary.params.coin_strategy: expected one of {list(adversary.COIN_STRATEGIES)}")
    for bit in ("desired_bit", "target_coset"):
        if out.get(bit) not in (None, 0, 1):
            raise ConfigError(f"adversary.params.{bit}: expected 0 or 1")
    return out


def execute_attack(cfg: dict) -> dict:
    adv = cfg["adversary"]
    p = adv["params"]
    g = Geometry.from_dict(cfg["geometry"])
    common = {"geometry": g, "jobs": cfg["jobs"]}
    seed, trials = cfg["seed"], cfg["trials"]
    name = adv["strategy"]
    if name == "input-alteration":
        rep = adversary.input_alteration(p["target_coset"], trials, seed, same_coset=p["same_coset"],
                                         protocol=cfg["protocol"], basis=cfg["basis"], **common)
    elif name == "wrong-basis":
        rep = adversary.wrong_basis(trials, seed, substitute=p["substitute"], **common)
    elif name == "mlc-delayed-alice":
        rep = adversary.mlc_delayed_alice(p["desired_bit"], trials, seed, **common)
    elif name == "entangled-bprime":
        rep = adversary.entangled_bprime(trials, seed, **common)
    elif name == "eve-set":
        rep = adversary.eve_set_inference(p["available"], trials, seed, at_time=p["at_time"],
                                          basis=cfg["basis"], **common)
    elif name == "position-spoof":
        rep = adversary.position_spoof(p["offset"], trials, seed, protocol=cfg["protocol"], **common)
    else:
        rep = adversary.coin_fairness(p["coin_strategy"], trials, seed, **common)
    return rep.to_dict()


# --------------------------------------------------------------------------
# output


def dump_report(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, allow_nan=False) + "\n"


def _emit(report: dict, out: Optional[str]) -> None:
    text = dump_report(report)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_run(args) -> int:
    cfg = resolve_run_config(args)
    log.info("run %s: %d trial(s), seed %d", cfg["protocol"], cfg["trials"], cfg["seed"])
    results = execute_run(cfg, keep_all=args.transcripts)
    _emit({"schema": REPORT_SCHEMA, "command": "run", "config": cfg, "results": results}, args.out)
    return 0


def cmd_verify_tables(args) -> int:
    swap = teleport = None
    if args.fixtures:
        try:
            swap, teleport = conformance.load_fixtures(args.fixtures)
        except (OSError, KeyError, ValueError) as exc:
            raise ConfigError(f"fixtures: {exc}") from None
    entries = conformance.check_tables(swap, teleport, oracle_only=args.oracle_only)
    for e in entries:
        print(e.line())
    passed = sum(e.ok for e in entries)
    print(f"{passed}/{len(entries)} pass")
    if args.out:
        report = {
            "schema": REPORT_SCHEMA,
            "command": "verify-tables",
            "config": {"oracle_only": args.oracle_only, "fixtures": args.fixtures},
            "results": {"passed": passed, "total": len(entries), "entries": [e.to_dict() for e in entries]},
        }
        with open(args.out, "w") as fh:
            fh.write(dump_report(report))
    return 0 if passed == len(entries) else 1


def cmd_attack(args) -> int:
    cfg = resolve_attack_config(args)
    log.info("attack %s: %d trial(s)", cfg["adversary"]["strategy"], cfg["trials"])
    report = execute_attack(cfg)
    _emit({"schema": REPORT_SCHEMA, "command": "attack", "config": cfg, "results": report}, args.out)
    return 0


# --------------------------------------------------------------------------
# argument parsing


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON config file; flags override its values")
    p.add_argument("--protocol", choices=sorted(engine.PROTOCOLS))
    p.add_argument("--basis", choices=[b.value for b in BasisMode])
    p.add_argument("--seed", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--geometry", metavar="FILE", help="JSON geometry (fields or {'d': ..., 'radius': ...})")
    p.add_argument("--out", metavar="PATH", help="write the report here instead of stdout")
    p.add_argument("--jobs", type=int, help="worker processes; results do not depend on it")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="relqc", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a protocol for some number of seeded trials")
    _common(run)
    run.add_argument("--sigma-a", help="Alice's Pauli (I, X, Z, ZX or a 2-bit code)")
    run.add_argument("--sigma-b", help="Bob's Pauli")
    run.add_argument("--pairs", help="initial Bell pairs as LEFT,RIGHT, e.g. 00,11")
    run.add_argument("--forced-alpha", help="force Alice's Bell outcome")
    run.add_argument("--forced-beta", help="force Bob's Bell outcome")
    run.add_argument("--transcripts", action="store_true", help="include every transcript in the report")
    run.set_defaults(func=cmd_run)

    vt = sub.add_parser("verify-tables", help="check the swap and teleport tables")
    vt.add_argument("--oracle-only", action="store_true", help="check fixtures against the state-vector path only")
    vt.add_argument("--fixtures", metavar="FILE", help="JSON fixtures to check instead of the built-in tables")
    vt.add_argument("--out", metavar="PATH", help="also write a JSON report")
    vt.set_defaults(func=cmd_verify_tables)

    atk = sub.add_parser("attack", help="run a cheating strategy")
    _common(atk)
    atk.add_argument("--strategy", choices=sorted(adversary.STRATEGIES))
    atk.add_argument("--available", help="eve-set: comma-separated subset of " + ",".join(adversary.EVE_PIECES))
    atk.add_argument("--at-time", type=float, help="eve-set: time at which the pieces must be assembled")
    atk.add_argument("--offset", type=float, help="position-spoof: emission offset from x_a (length units)")
    atk.add_argument("--desired-bit", type=int, choices=(0, 1), help="mlc-delayed-alice: coset Alice aims for")
    atk.add_argument("--target-coset", type=int, choices=(0, 1), help="input-alteration: coset revealed")
    atk.add_argument("--same-coset", action="store_true", help="input-alteration: swap within the coset")
    atk.add_argument("--substitute", choices=("0", "1"), help="wrong-basis: fixed substituted state")
    atk.add_argument("--coin-strategy", choices=adversary.COIN_STRATEGIES, help="coin-fairness: deviation")
    atk.set_defaults(func=cmd_attack)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * args.verbose, format="%(levelname)s %(message)s",
                        stream=sys.stderr)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"relqc: error: {exc}", file=sys.stderr)
        return 2
    except oracle.CapacityError as exc:
        print(f"relqc: error: oracle capacity: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
