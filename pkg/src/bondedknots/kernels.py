"""Hot combinatorial kernels: rooted BFS encodings of rotation systems.

A connected diagram is passed as flat integer arrays over its endpoints
(node-slot incidences):

``offset[n]``   index of slot 0 of node ``n`` in the endpoint arrays
``deg[n]``      number of slots at node ``n``
``kind[n]``     0 = trivalent vertex, 1 = crossing (slot parity matters),
                2 = flat 4-valent vertex
``partner[e]``  endpoint joined to ``e`` by an arc
``node_of[e]``, ``slot_of[e]``

The code of a root endpoint lists, for every node in BFS discovery order, a
type token followed by ``(neighbour label, neighbour slot relative to its
entry slot)`` for each slot counterclockwise from the entry slot. The
canonical code is the lexicographic minimum over all roots.
"""

from __future__ import annotations

import numpy as np

from bondedknots._accel import USE_NUMBA, njit

__all__ = ["min_rooted_code", "rooted_code", "code_length"]


def code_length(deg) -> int:
    return int(sum(1 + 2 * d for d in deg))


def _rooted_code_impl(root, offset, deg, kind, partner, node_of, slot_of, out, best, use_best, label, entry, order):
    """Write the code for ``root`` into ``out``.

    Returns -1 if the code is smaller than ``best``, 0 if equal, 1 if larger
    (early exit). Without ``use_best`` it always returns -1. ``label``,
    ``entry`` and ``order`` are per-node scratch buffers.
    """
    n = len(deg)
    for i in range(n):
        label[i] = -1
    r_node = node_of[root]
    label[r_node] = 0
    entry[r_node] = slot_of[root]
    order[0] = r_node
    n_lab = 1
    pos = 0
    state = 0 if use_best else -1
    head = 0
    while head < n_lab:
        v = order[head]
        head += 1
        k = kind[v]
        if k == 1:
            tok = 1 + (entry[v] & 1)
        elif k == 2:
            tok = 3
        else:
            tok = 0
        out[pos] = tok
        if state == 0:
            if tok < best[pos]:
                state = -1
            elif tok > best[pos]:
                return 1
        pos += 1
        dv = deg[v]
        base = offset[v]
        ev = entry[v]
        for i in range(dv):
            p = partner[base + (ev + i) % dv]
            m = node_of[p]
            if label[m] < 0:
                label[m] = n_lab
                entry[m] = slot_of[p]
                order[n_lab] = m
                n_lab += 1
            a = label[m]
            b = (slot_of[p] - entry[m]) % deg[m]
            out[pos] = a
            if state == 0:
                if a < best[pos]:
                    state = -1
                elif a > best[pos]:
                    return 1
            pos += 1
            out[pos] = b
            if state == 0:
                if b < best[pos]:
                    state = -1
                elif b > best[pos]:
                    return 1
            pos += 1
    return state


_rooted_code = njit(_rooted_code_impl)


def _min_code_impl(offset, deg, kind, partner, node_of, slot_of, best, cur, label, entry, order):
    n_end = len(partner)
    length = len(best)
    _rooted_code(0, offset, deg, kind, partner, node_of, slot_of, best, best, False, label, entry, order)
    for r in range(1, n_end):
        res = _rooted_code(r, offset, deg, kind, partner, node_of, slot_of, cur, best, True, label, entry, order)
        if res < 0:
            for i in range(length):
                best[i] = cur[i]
    return best


_min_code = njit(_min_code_impl)


def _buf(n: int):
    return np.zeros(n, np.int64) if USE_NUMBA else [0] * n


def _pack(offset, deg, kind, partner, node_of, slot_of):
    if USE_NUMBA:
        return tuple(np.asarray(x, dtype=np.int64) for x in (offset, deg, kind, partner, node_of, slot_of))
    return tuple(list(x) for x in (offset, deg, kind, partner, node_of, slot_of))


def min_rooted_code(offset, deg, kind, partner, node_of, slot_of) -> tuple[int, ...]:
    """Lexicographically smallest rooted code of a connected rotation system."""
    length = code_length(deg)
    n = len(deg)
    args = _pack(offset, deg, kind, partner, node_of, slot_of)
    best = _buf(length)
    _min_code(*args, best, _buf(length), _buf(n), _buf(n), _buf(n))
    return tuple(int(x) for x in best)


def rooted_code(root, offset, deg, kind, partner, node_of, slot_of) -> tuple[int, ...]:
    """Code of one specific root endpoint."""
    length = code_length(deg)
    n = len(deg)
    args = _pack(offset, deg, kind, partner, node_of, slot_of)
    out = _buf(length)
    _rooted_code(root, *args, out, out, False, _buf(n), _buf(n), _buf(n))
    return tuple(int(x) for x in out)
