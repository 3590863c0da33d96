"""The numba kernels and the interpreted fallback agree."""

from __future__ import annotations

import json
import os
import subprocess
import sys

from bondedknots._accel import backend
from bondedknots.kernels import code_length, min_rooted_code, rooted_code

SCRIPT = """
import json, sys
from bondedknots._accel import backend
from bondedknots.diagram import parse_pd
pds = json.loads(sys.stdin.read())
print(json.dumps({"backend": backend(), "codes": [parse_pd(p).code.hex() for p in pds]}))
"""


def _codes_with(no_numba: str, pds: list[str]) -> dict:
    env = dict(os.environ, BONDEDKNOTS_NO_NUMBA=no_numba)
    out = subprocess.run([sys.executable, "-c", SCRIPT], input=json.dumps(pds), env=env,
                         capture_output=True, text=True, check=True)
    return json.loads(out.stdout)


def test_backends_agree(table):
    pds = [e["pd"] for e in table]
    fast = _codes_with("0", pds)
    slow = _codes_with("1", pds)
    assert slow["backend"] == "python"
    assert fast["codes"] == slow["codes"]


def test_backend_name():
    assert backend() in ("numba", "python")


def test_theta_codes():
    # theta: two trivalent nodes joined by three arcs
    offset, deg, kind = [0, 3], [3, 3], [0, 0]
    partner = [3, 5, 4, 0, 2, 1]
    node_of = [0, 0, 0, 1, 1, 1]
    slot_of = [0, 1, 2, 0, 1, 2]
    best = min_rooted_code(offset, deg, kind, partner, node_of, slot_of)
    assert len(best) == code_length(deg) == 14
    roots = [rooted_code(r, offset, deg, kind, partner, node_of, slot_of) for r in range(6)]
    assert best == min(roots)
