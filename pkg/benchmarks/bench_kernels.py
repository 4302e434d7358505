"""Compare the compiled and numpy kernel backends.

    python3 benchmarks/bench_kernels.py [--repeat N]

Times each kernel on a full-size register and one end-to-end protocol run per
backend, after checking that both backends return the same arrays.
"""
import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from relqc import kernels
from relqc.oracle import MAX_QUBITS


def _state(n, rng):
    v = rng.normal(size=2 ** n) + 1j * rng.normal(size=2 ** n)
    return v / np.linalg.norm(v)


def kernel_table(repeat: int) -> list[tuple[str, dict]]:
    rng = np.random.default_rng(0)
    n = MAX_QUBITS
    s = _state(n, rng)
    cases = {
        "apply_pauli": lambda k: k.apply_pauli(s, n, 3, 1, 1),
        "bell_project": lambda k: k.bell_project(s, n, 1, 5, 1, 0),
        "basis_project": lambda k: k.basis_project(s, n, 2, 1, 1),
    }
    rows = []
    for name, fn in cases.items():
        ref = fn(kernels.BACKENDS["python"])
        times = {}
        for backend, mod in kernels.BACKENDS.items():
            assert np.allclose(fn(mod), ref), f"{backend} disagrees on {name}"
            times[backend] = min(timeit.repeat(lambda: fn(mod), number=repeat, repeat=5)) / repeat
        rows.append((name, times))
    return rows


_RUN = ("import numpy as np, timeit; from relqc import engine; from relqc.engine import ProtocolInputs; "
        "rng = np.random.default_rng(0); "
        "f = lambda: engine.run_tpsc(ProtocolInputs.random(rng), None, rng); "
        "print(min(timeit.repeat(f, number=200, repeat=3)) / 200)")


def protocol_run(pure: bool) -> float:
    env = dict(os.environ)
    env.pop("RELQC_PURE_PYTHON", None)
    if pure:
        env["RELQC_PURE_PYTHON"] = "1"
    out = subprocess.run([sys.executable, "-c", _RUN], env=env, capture_output=True, text=True, check=True)
    return float(out.stdout)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=2000)
    args = ap.parse_args()
    if "cython" not in kernels.BACKENDS:
        print("compiled backend not built; run `pip install -e . --no-build-isolation` first")
        return 1
    print(f"{'kernel':<16}{'python (us)':>14}{'cython (us)':>14}{'speedup':>10}")
    for name, t in kernel_table(args.repeat):
        py, cy = t["python"] * 1e6, t["cython"] * 1e6
        print(f"{name:<16}{py:>14.2f}{cy:>14.2f}{py / cy:>9.1f}x")
    py, cy = protocol_run(True) * 1e3, protocol_run(False) * 1e3
    print(f"{'tpsc run':<16}{py:>11.3f} ms{cy:>11.3f} ms{py / cy:>9.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
