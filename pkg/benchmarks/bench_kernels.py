"""Compare the numba kernels with the interpreted fallback.

Each backend runs in its own interpreter because the choice is fixed at
import time by ``BONDEDKNOTS_NO_NUMBA``. Both runs compute canonical codes
of the same diagrams; the script checks that the codes agree and prints the
timings.

Usage::

    python benchmarks/bench_kernels.py --max-s 5 --repeat 3
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import time

WORKER = """
import hashlib, json, sys, time
from bondedknots._accel import backend
from bondedknots.diagram import Diagram, canonical_code
from bondedknots.generate import expand_crossings, generate_shadows

max_s, repeat = int(sys.argv[1]), int(sys.argv[2])
ds = [d for sh in generate_shadows(max_s) for d in expand_crossings(sh)]
canonical_code(ds[0])  # compile outside the timed region
best = float("inf")
for _ in range(repeat):
    # fresh objects, so no cached code is reused
    fresh = [Diagram(d.nodes, d.free_loops) for d in ds]
    t = time.perf_counter()
    codes = [canonical_code(d) for d in fresh]
    best = min(best, time.perf_counter() - t)
digest = hashlib.sha256(b"".join(codes)).hexdigest()
print(json.dumps({"backend": backend(), "diagrams": len(ds), "seconds": best, "digest": digest}))
"""


def run(max_s: int, repeat: int, no_numba: bool) -> dict:
    env = dict(os.environ, BONDEDKNOTS_NO_NUMBA="1" if no_numba else "0")
    out = subprocess.run([sys.executable, "-c", WORKER, str(max_s), str(repeat)], env=env,
                         capture_output=True, text=True, check=True)
    return json.loads(out.stdout.strip().splitlines()[-1])


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-s", type=int, default=5)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    t0 = time.perf_counter()
    fast = run(args.max_s, args.repeat, no_numba=False)
    slow = run(args.max_s, args.repeat, no_numba=True)
    for r in (fast, slow):
        print(f"{r['backend']:>7}: {r['diagrams']} diagrams in {r['seconds']:.3f} s "
              f"({1e6 * r['seconds'] / r['diagrams']:.1f} us each)")
    same = fast["digest"] == slow["digest"]
    print(f"codes identical: {same}")
    if fast["backend"] == "numba":
        print(f"speedup: {slow['seconds'] / fast['seconds']:.2f}x")
    print(f"wall time: {time.perf_counter() - t0:.1f} s")
    return 0 if same else 1


if __name__ == "__main__":
    sys.exit(main())
