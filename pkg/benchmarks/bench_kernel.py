"""Timings for the exact-arithmetic backends.

The package selects a compiled kernel at import when available and
falls back to pure Python otherwise (force the fallback by setting
ORBIFOLDCERT_PURE=1).  This script times both on the same inputs:

  * microbenchmarks of the hot vector ops (vmul, vaddmul) per
    cyclotomic order, and
  * one end-to-end certificate run per backend in subprocesses, since
    the backend is fixed at import time.

Run:  python benchmarks/bench_kernel.py [--repeat 20000] [--skip-e2e]
"""

import argparse
import os
import random
import subprocess
import sys
import time
from pathlib import Path

from orbifoldcert import _kernel_py
from orbifoldcert.scalars import _reduction_rows, euler_phi

try:
    from orbifoldcert import _ckernel
except ImportError:
    _ckernel = None


def random_vectors(order, count, seed):
    rng = random.Random(seed)
    phi = euler_phi(order)
    out = []
    for _ in range(count):
        nums = tuple(rng.randint(-99, 99) for _ in range(phi))
        out.append((nums, rng.randint(1, 60)))
    return out


def bench_mul(mod, vectors, red, repeat):
    pairs = [
        (vectors[i], vectors[(i * 7 + 1) % len(vectors)])
        for i in range(len(vectors))
    ]
    t0 = time.perf_counter()
    k = 0
    for _ in range(repeat):
        (a, ad), (b, bd) = pairs[k]
        mod.vmul(a, ad, b, bd, red)
        k = (k + 1) % len(pairs)
    return time.perf_counter() - t0


def bench_addmul(mod, vectors, red, repeat):
    triples = [
        (
            vectors[i],
            vectors[(i * 5 + 2) % len(vectors)],
            vectors[(i * 3 + 1) % len(vectors)],
        )
        for i in range(len(vectors))
    ]
    t0 = time.perf_counter()
    k = 0
    for _ in range(repeat):
        (a, ad), (c, cd), (b, bd) = triples[k]
        mod.vaddmul(a, ad, c, cd, b, bd, red)
        k = (k + 1) % len(triples)
    return time.perf_counter() - t0


def micro(repeat):
    print(f"{'order':>5} {'op':>8} {'python us':>10} {'c us':>8} {'speedup':>8}")
    for order in (1, 3, 4, 12):
        red = _reduction_rows(order)
        vectors = random_vectors(order, 64, seed=order)
        for name, fn in (("vmul", bench_mul), ("vaddmul", bench_addmul)):
            py = fn(_kernel_py, vectors, red, repeat) / repeat * 1e6
            if _ckernel is not None:
                cc = fn(_ckernel, vectors, red, repeat) / repeat * 1e6
                print(
                    f"{order:>5} {name:>8} {py:>10.2f} {cc:>8.2f} "
                    f"{py / cc:>7.1f}x"
                )
            else:
                print(f"{order:>5} {name:>8} {py:>10.2f} {'-':>8} {'-':>8}")


E2E_SNIPPET = """
import time
from fractions import Fraction
from orbifoldcert import backend_name
from orbifoldcert.certify import Scale, orbifold_irreducibility_pipeline
from orbifoldcert.modes import weyl_cyclic_automorphism, weyl_signature
from orbifoldcert.modules import build_module, weyl_whittaker
from orbifoldcert.orbifold import CyclicAction

sig = weyl_signature()
m = build_module(sig, weyl_whittaker(sig, lam=[1], mu=[]))
act = CyclicAction(weyl_cyclic_automorphism(sig, 3))
scale = Scale(max_degree=Fraction(1), index_bound=3, word_length=3)
t0 = time.perf_counter()
report = orbifold_irreducibility_pipeline(m, act, scale=scale, seed=0)
assert report.certified
print(f"{backend_name()}: {time.perf_counter() - t0:.3f}s")
"""


def end_to_end():
    print("\nweyl p=3 pipeline (4 closures), one process per backend:")
    for env_extra in ({}, {"ORBIFOLDCERT_PURE": "1"}):
        env = dict(os.environ, **env_extra)
        proc = subprocess.run(
            [sys.executable, "-c", E2E_SNIPPET],
            capture_output=True,
            text=True,
            env=env,
            cwd=str(Path(__file__).resolve().parent.parent),
        )
        if proc.returncode != 0:
            print(proc.stderr.strip())
        else:
            print("  " + proc.stdout.strip())


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=20_000)
    parser.add_argument("--skip-e2e", action="store_true")
    args = parser.parse_args()
    if _ckernel is None:
        print("compiled backend not built; timing pure python only")
    micro(args.repeat)
    if not args.skip_e2e:
        end_to_end()


if __name__ == "__main__":
    main()
