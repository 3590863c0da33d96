"""Reading and writing the ``planar_code`` binary format.

A file starts with the header ``>>planar_code<<`` (optionally ``>>planar_code
le<<`` or ``>>planar_code be<<``). Each graph is the vertex count followed by,
for every vertex, its neighbours (1-based) in clockwise order and a 0
terminator. Entries are single bytes; a leading 0 switches the graph to
two-byte entries in the header's byte order (little endian by default).

Imported graphs are turned into shadows by parallelizing edges: every edge
may be duplicated next to itself as long as no endpoint exceeds degree 4;
results whose degrees are all 3 or 4 with an even number of 3-valent
vertices are kept.
"""

from __future__ import annotations

from collections.abc import Sequence
from itertools import permutations, product

from bondedknots.diagram import Diagram, EmbeddingError, from_adjacency
from bondedknots.generate import ShadowGraph

__all__ = [
    "PlanarCodeError",
    "read_planar_code",
    "write_planar_code",
    "parallelize",
    "import_planar_code",
    "shadows_to_planar_code",
]

_HEADERS = {b">>planar_code<<": "little", b">>planar_code le<<": "little", b">>planar_code be<<": "big"}


class PlanarCodeError(ValueError):
    def __init__(self, message: str, offset: int) -> None:
        super().__init__(f"{message} at byte {offset}")
        self.offset = offset


def read_planar_code(data: bytes) -> list[list[list[int]]]:
    """Decode graphs as clockwise 0-based neighbour lists."""
    order = None
    pos = 0
    for head, bo in _HEADERS.items():
        if data.startswith(head):
            order, pos = bo, len(head)
            break
    if order is None:
        raise PlanarCodeError("missing >>planar_code<< header", 0)
    graphs = []
    while pos < len(data):
        width = 1
        n = data[pos]
        pos += 1
        if n == 0:
            width = 2
            if pos + 2 > len(data):
                raise PlanarCodeError("truncated vertex count", pos)
            n = int.from_bytes(data[pos : pos + 2], order)
            pos += 2

        def entry() -> int:
            nonlocal pos
            if pos + width > len(data):
                raise PlanarCodeError("truncated graph", pos)
            v = int.from_bytes(data[pos : pos + width], order)
            pos += width
            return v

        rot: list[list[int]] = []
        for _ in range(n):
            nb = []
            while (v := entry()) != 0:
                if v > n:
                    raise PlanarCodeError(f"neighbour {v} exceeds vertex count {n}", pos - width)
                nb.append(v - 1)
            rot.append(nb)
        graphs.append(rot)
    return graphs


def write_planar_code(graphs: Sequence[Sequence[Sequence[int]]]) -> bytes:
    """Encode clockwise 0-based neighbour lists (single-byte entries)."""
    out = bytearray(b">>planar_code<<")
    for rot in graphs:
        if len(rot) > 255:
            raise ValueError("only graphs with at most 255 vertices are supported for writing")
        out.append(len(rot))
        for nb in rot:
            out.extend(v + 1 for v in nb)
            out.append(0)
    return bytes(out)


def _embed(rot: Sequence[Sequence[int]], deg: Sequence[int]) -> Diagram | None:
    """Pair half-edges of a clockwise rotation system into a V/F diagram.

    Parallel edges and loops make the pairing ambiguous; every pairing is
    tried and the first planar one is returned.
    """
    kinds = ["V" if d == 3 else "F" for d in deg]
    # counterclockwise slots: reverse the clockwise lists
    ccw = [list(reversed(nb)) for nb in rot]
    groups: dict[tuple[int, int], tuple[list[int], list[int]]] = {}
    for u, nb in enumerate(ccw):
        for s, v in enumerate(nb):
            a, b = min(u, v), max(u, v)
            g = groups.setdefault((a, b), ([], []))
            g[0 if u == a else 1].append(s)
    options = []
    for (a, b), (sa, sb) in sorted(groups.items()):
        if a == b:
            # loop occurrences pair among themselves
            slots = sa + sb
            opts = []
            for perm in permutations(slots):
                pairs = [(perm[i], perm[i + 1]) for i in range(0, len(perm), 2)]
                opts.append([((a, x), (a, y)) for x, y in pairs])
            options.append(opts)
        else:
            options.append([[((a, x), (b, y)) for x, y in zip(sa, perm)] for perm in permutations(sb)])
    for choice in product(*options):
        adj = {}
        for pairs in choice:
            for x, y in pairs:
                adj[x] = y
                adj[y] = x
        d = from_adjacency(kinds, adj)
        try:
            d.check_planar()
        except EmbeddingError:
            continue
        return d
    return None


def parallelize(rot: Sequence[Sequence[int]]) -> list[list[list[int]]]:
    """All ways of doubling edges of a simple plane graph up to degree 4.

    Each copy is placed next to its original in both rotations, so the result
    stays plane. Returns clockwise rotation systems.
    """
    edges = sorted({(min(u, v), max(u, v)) for u, nb in enumerate(rot) for v in nb})
    deg0 = [len(nb) for nb in rot]
    out = []

    def rec(i: int, extra: list[int], deg: list[int]) -> None:
        if i == len(edges):
            out.append(_apply_extra(rot, edges, extra))
            return
        u, v = edges[i]
        k = 0
        while True:
            extra.append(k)
            rec(i + 1, extra, deg)
            extra.pop()
            k += 1
            deg[u] += 1
            deg[v] += 1
            if deg[u] > 4 or deg[v] > 4:
                deg[u] -= k
                deg[v] -= k
                return

    rec(0, [], list(deg0))
    return out


def _apply_extra(rot: Sequence[Sequence[int]], edges: list[tuple[int, int]], extra: list[int]) -> list[list[int]]:
    mult = dict(zip(edges, extra))
    new = []
    for u, nb in enumerate(rot):
        row = []
        for v in nb:
            row.extend([v] * (1 + mult[(min(u, v), max(u, v))]))
        new.append(row)
    return new


def import_planar_code(data: bytes) -> list[ShadowGraph]:
    """Decode, parallelize and filter graphs into distinct shadows."""
    seen: dict[bytes, ShadowGraph] = {}
    for rot in read_planar_code(data):
        for multi in parallelize(rot):
            deg = [len(nb) for nb in multi]
            if not multi or any(d not in (3, 4) for d in deg) or sum(d == 3 for d in deg) % 2:
                continue
            d = _embed(multi, deg)
            if d is None or not d.is_connected():
                continue
            sh = ShadowGraph(d)
            seen.setdefault(sh.code, sh)
    out = list(seen.values())
    out.sort(key=lambda sh: (sh.v3 + sh.v4, sh.v4, sh.code))
    return out


def shadows_to_planar_code(shadows: Sequence[ShadowGraph]) -> bytes:
    """Encode shadows as clockwise neighbour lists.

    Parallel edges and loops are written as repeated neighbours, so decoding
    recovers the multigraph but has to search for its embedding again.
    """
    graphs = []
    for sh in shadows:
        d = sh.diagram
        rot = []
        for i, node in enumerate(d.nodes):
            rot.append([d.partner((i, s))[0] for s in reversed(range(len(node.arcs)))])
        graphs.append(rot)
    return write_planar_code(graphs)
