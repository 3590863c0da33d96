"""Shadow enumeration, admissibility and crossing expansion.

A shadow is a connected plane multigraph whose vertices have degree 3 or 4.
It is stored as a :class:`~bondedknots.diagram.Diagram` made of ``V`` nodes
(future bond endpoints) and ``F`` nodes (future crossings).

The native generator grows rooted maps one dart at a time. The first
unmatched dart (in node-then-slot order) is either attached to slot 0 of a
new node or joined to another unmatched dart of the same face. Joining darts
of one face is the only planar option, so every connected plane map arises
from each of its root darts exactly once; isomorphic results are merged by
canonical code.
"""

from __future__ import annotations

import json
from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from functools import cached_property
from itertools import product

from bondedknots.diagram import (
    DEGREE,
    Diagram,
    Endpoint,
    Node,
    from_adjacency,
    perfect_matchings,
    underlying_graph,
)

__all__ = [
    "ShadowGraph",
    "Admissibility",
    "generate_shadows",
    "iter_rooted_maps",
    "admissible",
    "expand_crossings",
    "shadow_of",
    "has_forced_reduction",
]


@dataclass(frozen=True)
class ShadowGraph:
    """Plane multigraph with degree-3 and degree-4 vertices."""

    diagram: Diagram

    def __post_init__(self) -> None:
        if any(n.kind == "X" for n in self.diagram.nodes):
            raise ValueError("shadows carry no crossing information; use F nodes")

    @property
    def v3(self) -> int:
        return sum(1 for n in self.diagram.nodes if n.kind == "V")

    @property
    def v4(self) -> int:
        return sum(1 for n in self.diagram.nodes if n.kind == "F")

    @property
    def code(self) -> bytes:
        return self.diagram.code

    @cached_property
    def ident(self) -> str:
        """Short stable identifier derived from the canonical code."""
        import hashlib

        return hashlib.sha1(self.code).hexdigest()[:12]

    def to_json(self) -> str:
        return json.dumps({"id": self.ident, "v3": self.v3, "v4": self.v4, **self.diagram.to_json()}, sort_keys=True)

    @classmethod
    def from_json(cls, line: str) -> ShadowGraph:
        return cls(Diagram.from_json(line))

    def to_text(self) -> str:
        """PD-like text listing every vertex as a ``V`` entry."""
        return ",".join(f"V[{','.join(map(str, n.arcs))}]" for n in self.diagram.nodes)


def shadow_of(d: Diagram) -> ShadowGraph:
    """Forget over/under information."""
    nodes = tuple(Node("F", n.arcs) if n.kind == "X" else n for n in d.nodes)
    return ShadowGraph(Diagram(nodes, d.free_loops, d.name))


# -- native generation -------------------------------------------------------


def _face_legs(kinds: list[str], adj: dict[Endpoint, Endpoint], e: Endpoint) -> list[Endpoint]:
    """Unmatched darts on the face walk through the unmatched dart ``e``."""
    legs = []
    cur = e
    while True:
        p = adj.get(cur)
        if p is None:
            legs.append(cur)
            m, j = cur
        else:
            m, j = p
        cur = (m, (j - 1) % DEGREE[kinds[m]])
        if cur == e:
            return legs


def _closed_face(kinds: list[str], adj: dict[Endpoint, Endpoint], e: Endpoint) -> list[int] | None:
    """Nodes around the face walk leaving through ``e``; ``None`` while it has open darts."""
    nodes = []
    cur = e
    while True:
        p = adj.get(cur)
        if p is None:
            return None
        nodes.append(cur[0])
        m, j = p
        cur = (m, (j - 1) % DEGREE[kinds[m]])
        if cur == e:
            return nodes


def _forced_face(kinds: list[str], nodes: list[int] | None) -> bool:
    """A monogon at an F node or a V-F bigon: every expansion has R1- or R5-."""
    if nodes is None:
        return False
    if len(nodes) == 1:
        return kinds[nodes[0]] == "F"
    return len(nodes) == 2 and {kinds[nodes[0]], kinds[nodes[1]]} == {"V", "F"}


def iter_rooted_maps(
    max_nodes: int, root_kinds: Sequence[str] = ("V", "F"), min_trivalent: int = 0, reduced: bool = False
) -> Iterator[Diagram]:
    """Every rooted connected plane map with at most ``max_nodes`` V/F nodes.

    The root is slot 0 of node 0, whose kind is drawn from ``root_kinds``.
    Maps with fewer than ``min_trivalent`` V nodes are pruned, and with
    ``reduced`` so are maps containing an F monogon or a V-F bigon.
    """
    kinds: list[str] = []
    adj: dict[Endpoint, Endpoint] = {}
    nv = [0]

    def first_open() -> Endpoint | None:
        for n, k in enumerate(kinds):
            for s in range(DEGREE[k]):
                if (n, s) not in adj:
                    return (n, s)
        return None

    def push(kind: str) -> int:
        kinds.append(kind)
        nv[0] += kind == "V"
        return len(kinds) - 1

    def pop() -> None:
        nv[0] -= kinds.pop() == "V"

    def rec() -> Iterator[Diagram]:
        e = first_open()
        if e is None:
            if nv[0] % 2 == 0 and nv[0] >= min_trivalent:
                yield from_adjacency(list(kinds), dict(adj))
            return
        room = max_nodes - len(kinds)
        if room > 0 and room >= min_trivalent - nv[0]:
            for kind in ("V", "F"):
                if kind == "F" and room == min_trivalent - nv[0]:
                    continue
                n = push(kind)
                adj[e] = (n, 0)
                adj[(n, 0)] = e
                yield from rec()
                del adj[e], adj[(n, 0)]
                pop()
        if min_trivalent - nv[0] > room:
            return
        for f in _face_legs(kinds, adj, e):
            if f == e:
                continue
            adj[e] = f
            adj[f] = e
            if not (reduced and (_forced_face(kinds, _closed_face(kinds, adj, e))
                                 or _forced_face(kinds, _closed_face(kinds, adj, f)))):
                yield from rec()
            del adj[e], adj[f]

    for kind in root_kinds:
        if max_nodes < 1:
            break
        push(kind)
        yield from rec()
        pop()


def has_forced_reduction(sh: ShadowGraph) -> bool:
    """True if every crossing assignment of ``sh`` has fewer crossings after an obvious move.

    Detects an F monogon (R1), a V-F bigon (R5) and a nugatory F node (a cut
    vertex of the shadow, removable by turning one side over).
    """
    d = sh.diagram
    kinds = [n.kind for n in d.nodes]
    for f in d.face_list:
        if _forced_face(kinds, [n for n, _ in f]):
            return True
    # a node met twice by one face walk is a cut vertex
    for f in d.face_list:
        hits = [n for n, _ in f if kinds[n] == "F"]
        if len(hits) != len(set(hits)):
            return True
    return False


def generate_shadows(max_s: int, min_trivalent: int = 2, reduced: bool = False) -> list[ShadowGraph]:
    """All connected shadows with ``v3 + v4 <= max_s`` and ``v3`` even.

    Args:
        max_s: bound on the number of vertices (the singularity number of
            every diagram expanded from the shadow).
        min_trivalent: skip shadows with fewer trivalent vertices. With a
            positive value roots are placed on trivalent vertices only, which
            is much faster and still reaches every such shadow. The default
            of 2 leaves out pure knot and link shadows.
        reduced: drop shadows for which :func:`has_forced_reduction` holds;
            their expansions are never minimal diagrams.

    Returns:
        One shadow per sphere-isomorphism class, ordered by vertex count,
        then by number of 4-valent vertices, then by canonical code.
    """
    if max_s < 0:
        raise ValueError("max_s must be nonnegative")
    roots = ("V",) if min_trivalent > 0 else ("V", "F")
    seen: dict[bytes, Diagram] = {}
    for d in iter_rooted_maps(max_s, roots, min_trivalent, reduced):
        code = d.code
        if code not in seen:
            seen[code] = d
    out = [ShadowGraph(d) for d in seen.values()]
    if reduced:
        out = [sh for sh in out if not has_forced_reduction(sh)]
    out.sort(key=lambda sh: (sh.v3 + sh.v4, sh.v4, sh.code))
    return out


# -- admissibility and expansion -----------------------------------------------


@dataclass(frozen=True)
class Admissibility:
    ok: bool
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def admissible(sh: ShadowGraph) -> Admissibility:
    """Decide whether a shadow can carry a bonded knot.

    Reasons for rejection are ``parity`` (odd number of trivalent vertices),
    ``no-bonds`` (no trivalent vertex) and ``unmatchable`` (the traced
    trivalent graph has no perfect matching by non-loop edges).
    """
    if sh.v3 % 2:
        return Admissibility(False, "parity")
    if sh.v3 == 0:
        return Admissibility(False, "no-bonds")
    if not perfect_matchings(underlying_graph(sh.diagram)):
        return Admissibility(False, "unmatchable")
    return Admissibility(True)


def expand_crossings(sh: ShadowGraph) -> list[Diagram]:
    """All ``2^v4`` crossing assignments, in binary counting order.

    The most significant bit belongs to the first ``F`` node; a set bit
    rotates that crossing by one slot (over and under swapped).
    """
    nodes = sh.diagram.nodes
    flat = [i for i, n in enumerate(nodes) if n.kind == "F"]
    out = []
    for bits in product((0, 1), repeat=len(flat)):
        new = list(nodes)
        for i, b in zip(flat, bits):
            arcs = nodes[i].arcs
            new[i] = Node("X", arcs[b:] + arcs[:b])
        out.append(Diagram(tuple(new), sh.diagram.free_loops, sh.diagram.name))
    return out
