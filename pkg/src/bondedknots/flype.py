"""Flypes: half-turn of a 2-tangle next to a crossing.

A site is a crossing ``c`` with two consecutive slots ``i, i+1`` running into
a tangle ``T``. The cut circle around ``T`` crosses the arcs at ``i`` and
``i+1``, passes through the faces at the corners ``(i+1, i+2)`` and
``(i-1, i)`` of ``c``, and meets one further face ``H`` between them; it
crosses two more arcs ``e`` (between the upper corner face and ``H``) and
``f`` (between ``H`` and the lower corner face). The flype rotates ``T`` a
half turn about the axis through ``c`` and moves ``c`` to the far side.

Rotating a tangle about an axis in the projection plane reverses every
rotation and swaps over with under, which keeps crossing signs.
"""

from __future__ import annotations

from collections.abc import Iterator

from bondedknots.diagram import Diagram, Endpoint
from bondedknots.moves import MoveSite, StaleSiteError
from bondedknots.surgery import Work

__all__ = ["find_flypes", "apply_flype", "tangle_side"]


def tangle_side(d: Diagram, cut: set[frozenset[Endpoint]], starts: list[int], avoid: int) -> set[int] | None:
    """Nodes reachable from ``starts`` without using arcs in ``cut``; ``None`` if ``avoid`` is reached."""
    seen = set(starts)
    stack = list(starts)
    while stack:
        n = stack.pop()
        if n == avoid:
            return None
        for s, p in enumerate(d.adjacency[n]):
            if frozenset(((n, s), p)) in cut:
                continue
            if p[0] not in seen:
                seen.add(p[0])
                stack.append(p[0])
    return seen


def _site_parts(d: Diagram, c: int, i: int, ex: Endpoint, fz: Endpoint):
    adj = d.adjacency
    fo = d.face_of
    a_low = ((c, i), adj[c][i])
    a_high = ((c, (i + 1) % 4), adj[c][(i + 1) % 4])
    e = (ex, adj[ex[0]][ex[1]])
    f = (fz, adj[fz[0]][fz[1]])
    cut = {frozenset(a) for a in (a_low, a_high, e, f)}
    if len(cut) != 4:
        return None
    t_nw, t_sw = a_high[1], a_low[1]
    if c in (t_nw[0], t_sw[0]):
        return None
    side = tangle_side(d, cut, [t_nw[0], t_sw[0]], c)
    if side is None:
        return None
    ends_e = [x for x in e if x[0] in side]
    ends_f = [x for x in f if x[0] in side]
    if len(ends_e) != 1 or len(ends_f) != 1:
        return None
    # exactly four arcs leave the tangle
    leaving = sum(1 for n in side for p in adj[n] if p[0] not in side)
    if leaving != 4:
        return None
    faces = {fo[(c, i)], fo[(c, (i + 1) % 4)], fo[(c, (i - 1) % 4)], fo[e[1]]}
    if len(faces) != 4:
        return None
    return side, t_nw, t_sw, ends_e[0], ends_f[0]


def find_flypes(d: Diagram) -> Iterator[MoveSite]:
    fo = d.face_of
    adj = d.adjacency
    for c, node in enumerate(d.nodes):
        if node.kind != "X":
            continue
        for i in range(4):
            g = fo[(c, (i + 1) % 4)]
            k = fo[(c, (i - 1) % 4)]
            f0 = fo[(c, i)]
            if len({g, k, f0}) != 3:
                continue
            for ex in d.face_list[g]:
                h = fo[adj[ex[0]][ex[1]]]
                if h in (g, k, f0):
                    continue
                for fz in d.face_list[k]:
                    if fo[adj[fz[0]][fz[1]]] != h:
                        continue
                    if _site_parts(d, c, i, ex, fz) is not None:
                        yield MoveSite("FLYPE", (c, i) + ex + fz)


def _flip_slot(kind: str, k: int) -> int:
    if kind == "X":
        return (-k - 1) % 4
    return (-k) % 3


def apply_flype(d: Diagram, site: MoveSite) -> Diagram:
    try:
        c, i, en, es, fn, fs = site.anchor
        ok = d.nodes[c].kind == "X"
        parts = _site_parts(d, c, i, (en, es), (fn, fs)) if ok else None
    except (IndexError, KeyError, ValueError):
        parts = None
    if parts is None:
        raise StaleSiteError(f"site {site.fingerprint} does not match the diagram")
    side, t_nw, t_sw, t_ne, t_se = parts
    w = Work(d)
    copy = {u: w.new_id() for u in sorted(side)}
    c2 = w.new_id()
    new_kinds = {copy[u]: d.nodes[u].kind for u in side}
    new_kinds[c2] = "X"

    def img(e: Endpoint) -> Endpoint:
        return copy[e[0]], _flip_slot(d.nodes[e[0]].kind, e[1])

    inner: dict[Endpoint, Endpoint] = {}
    boundary = {t_nw, t_sw, t_ne, t_se}
    for u in side:
        for s, p in enumerate(d.adjacency[u]):
            if (u, s) in boundary:
                continue
            inner[img((u, s))] = img(p)
    inner[img(t_sw)] = (c, (i + 2) % 4)
    inner[img(t_nw)] = (c, (i + 3) % 4)
    inner[img(t_se)] = (c2, (i + 2) % 4)
    inner[img(t_ne)] = (c2, (i + 3) % 4)
    inner[(c2, (i + 1) % 4)] = t_ne
    inner[(c2, i)] = t_se
    w.splice(side | {c}, new_kinds, inner)
    return w.to_diagram()
