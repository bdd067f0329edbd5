"""Compare the compiled kernels with the pure-Python fallback.

    python3 benchmarks/bench_core.py [--repeat N]

Prints one CSV row per kernel: name, python seconds, cython seconds, speedup.
"""
import argparse
import sys
import timeit

import numpy as np

from mdskit import _pycore
from mdskit.constructions import mykkeltveit_set
from mdskit.dbg_core import GraphParams, enumerate_pcrs

try:
    from mdskit import _core
except ImportError:
    _core = None


def cases():
    big = GraphParams(2, 16)
    bits16 = mykkeltveit_set(big).bits
    mid = GraphParams(2, 10)
    bits10 = mykkeltveit_set(mid).bits
    classes6 = [p.members for p in enumerate_pcrs(GraphParams(2, 6))]
    return {
        "path_lengths k=16": lambda m: m.path_lengths(bits16, 2, 16, np.zeros(big.size, dtype=np.int32)),
        "find_cycle k=16 (acyclic)": lambda m: m.find_cycle(bits16, 2, 16),
        "reachable k=16": lambda m: m.reachable(bits16, 2, 16, 1, True, np.zeros(big.size, dtype=np.uint8)),
        "valid_f_moves k=10": lambda m: m.valid_f_moves(bits10, 2, 10),
        "enumerate_mds k=6": lambda m: m.enumerate_mds(2, 6, classes6),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if _core is None:
        print("compiled extension not built; only the fallback can run", file=sys.stderr)
    print("kernel,python_s,cython_s,speedup")
    for name, fn in cases().items():
        py = min(timeit.repeat(lambda: fn(_pycore), number=1, repeat=args.repeat))
        if _core is None:
            print(f"{name},{py:.4f},,")
            continue
        cy = min(timeit.repeat(lambda: fn(_core), number=1, repeat=args.repeat))
        print(f"{name},{py:.4f},{cy:.4f},{py / cy:.1f}")


if __name__ == "__main__":
    main()
