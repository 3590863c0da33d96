"""Bonded-knot diagrams: PD codes, faces, canonical codes and derived graphs.

A diagram is a list of nodes on the sphere. Each node lists the arcs meeting
it counterclockwise:

* ``V`` -- a trivalent vertex (bond endpoint), three slots;
* ``X`` -- a crossing, four slots, slots 0 and 2 on the under-strand;
* ``F`` -- a flat 4-valent vertex (shadows and Yamada states only).

Every arc label occurs in exactly two slots. Closed curves meeting no node
are kept as a ``free_loops`` count.
"""

from __future__ import annotations

import json
import re
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple

from bondedknots import kernels

__all__ = [
    "Node",
    "Diagram",
    "Multigraph",
    "DiagramError",
    "PDParseError",
    "MalformedArcError",
    "EmbeddingError",
    "UnencodableError",
    "DomainError",
    "parse_pd",
    "write_pd",
    "faces",
    "canonical_code",
    "mirror",
    "underlying_graph",
    "component_count",
    "perfect_matchings",
    "singularity_number",
    "from_adjacency",
    "from_code",
    "code_crossing_count",
]

DEGREE = {"V": 3, "X": 4, "F": 4}
_KIND_CODE = {"V": 0, "X": 1, "F": 2}

Endpoint = tuple[int, int]


class DiagramError(ValueError):
    """Base class for invalid diagram input."""


class PDParseError(DiagramError):
    def __init__(self, message: str, position: int) -> None:
        super().__init__(f"{message} at position {position}")
        self.position = position


class MalformedArcError(DiagramError):
    pass


class EmbeddingError(DiagramError):
    pass


class UnencodableError(DiagramError):
    pass


class DomainError(ValueError):
    pass


class Node(NamedTuple):
    kind: str
    arcs: tuple[int, ...]


@dataclass(frozen=True)
class Diagram:
    """Immutable sphere diagram. Use :func:`parse_pd` or :func:`from_adjacency`."""

    nodes: tuple[Node, ...]
    free_loops: int = 0
    name: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        if self.free_loops < 0:
            raise DiagramError("free_loops must be nonnegative")
        counts: dict[int, int] = {}
        for node in self.nodes:
            if node.kind not in DEGREE:
                raise DiagramError(f"unknown node kind {node.kind!r}")
            if len(node.arcs) != DEGREE[node.kind]:
                raise DiagramError(f"{node.kind} node needs {DEGREE[node.kind]} slots, got {len(node.arcs)}")
            for a in node.arcs:
                counts[a] = counts.get(a, 0) + 1
        bad = sorted(a for a, c in counts.items() if c != 2)
        if bad:
            raise MalformedArcError(f"arcs {bad} do not appear exactly twice")

    # -- counts -----------------------------------------------------------

    @property
    def crossing_count(self) -> int:
        return sum(1 for n in self.nodes if n.kind == "X")

    @property
    def vertex_count(self) -> int:
        return sum(1 for n in self.nodes if n.kind == "V")

    @property
    def arc_count(self) -> int:
        return sum(len(n.arcs) for n in self.nodes) // 2

    def degree(self, n: int) -> int:
        return len(self.nodes[n].arcs)

    # -- connectivity -----------------------------------------------------

    @cached_property
    def adjacency(self) -> tuple[tuple[Endpoint, ...], ...]:
        """``adjacency[n][s]`` is the endpoint joined to slot ``s`` of node ``n``."""
        where: dict[int, list[Endpoint]] = {}
        for n, node in enumerate(self.nodes):
            for s, a in enumerate(node.arcs):
                where.setdefault(a, []).append((n, s))
        adj = [[(0, 0)] * len(node.arcs) for node in self.nodes]
        for (n1, s1), (n2, s2) in where.values():
            adj[n1][s1] = (n2, s2)
            adj[n2][s2] = (n1, s1)
        return tuple(tuple(row) for row in adj)

    def partner(self, e: Endpoint) -> Endpoint:
        return self.adjacency[e[0]][e[1]]

    def endpoints(self) -> list[Endpoint]:
        return [(n, s) for n, node in enumerate(self.nodes) for s in range(len(node.arcs))]

    @cached_property
    def node_components(self) -> tuple[tuple[int, ...], ...]:
        """Node sets of the connected pieces of the diagram (free loops excluded)."""
        seen = [False] * len(self.nodes)
        comps = []
        for start in range(len(self.nodes)):
            if seen[start]:
                continue
            seen[start] = True
            stack, comp = [start], []
            while stack:
                v = stack.pop()
                comp.append(v)
                for m, _ in self.adjacency[v]:
                    if not seen[m]:
                        seen[m] = True
                        stack.append(m)
            comps.append(tuple(sorted(comp)))
        return tuple(comps)

    def is_connected(self) -> bool:
        return len(self.node_components) + self.free_loops <= 1

    # -- faces ------------------------------------------------------------

    def next_in_face(self, e: Endpoint) -> Endpoint:
        """Dart following ``e`` around the face on its left."""
        m, j = self.adjacency[e[0]][e[1]]
        return (m, (j - 1) % len(self.nodes[m].arcs))

    @cached_property
    def face_list(self) -> tuple[tuple[Endpoint, ...], ...]:
        seen: set[Endpoint] = set()
        out = []
        for e in self.endpoints():
            if e in seen:
                continue
            walk = []
            cur = e
            while cur not in seen:
                seen.add(cur)
                walk.append(cur)
                cur = self.next_in_face(cur)
            out.append(tuple(walk))
        return tuple(out)

    @cached_property
    def face_of(self) -> dict[Endpoint, int]:
        return {e: i for i, f in enumerate(self.face_list) for e in f}

    def check_planar(self) -> None:
        """Raise :class:`EmbeddingError` unless every component is a sphere."""
        comp_of = {}
        for ci, comp in enumerate(self.node_components):
            for v in comp:
                comp_of[v] = ci
        nf = [0] * len(self.node_components)
        for f in self.face_list:
            nf[comp_of[f[0][0]]] += 1
        for ci, comp in enumerate(self.node_components):
            v = len(comp)
            e = sum(len(self.nodes[n].arcs) for n in comp) // 2
            if v - e + nf[ci] != 2:
                raise EmbeddingError(f"component {ci} is not a sphere embedding (V-E+F={v - e + nf[ci]})")

    def is_planar(self) -> bool:
        try:
            self.check_planar()
        except EmbeddingError:
            return False
        return True

    # -- codes ------------------------------------------------------------

    @cached_property
    def component_codes(self) -> tuple[tuple[int, ...], ...]:
        codes = []
        for comp in self.node_components:
            codes.append(_component_code(self, comp))
        return tuple(sorted(codes))

    @cached_property
    def code(self) -> bytes:
        return canonical_code(self)

    @cached_property
    def sort_key(self) -> tuple[int, bytes]:
        return (self.crossing_count, self.code)

    # -- misc -------------------------------------------------------------

    def __str__(self) -> str:
        body = ",".join(f"{n.kind}[{','.join(map(str, n.arcs))}]" for n in self.nodes)
        if self.free_loops:
            body += f" + {self.free_loops} free loop(s)"
        return body

    def to_json(self) -> dict:
        return {"nodes": [[n.kind, list(n.arcs)] for n in self.nodes], "free_loops": self.free_loops}

    @classmethod
    def from_json(cls, data: dict | str) -> Diagram:
        if isinstance(data, str):
            data = json.loads(data)
        nodes = tuple(Node(k, tuple(int(a) for a in arcs)) for k, arcs in data["nodes"])
        return cls(nodes, int(data.get("free_loops", 0)))

    def relabeled(self) -> Diagram:
        """Same diagram with arcs renumbered ``0..n-1`` in order of first appearance."""
        return from_adjacency([n.kind for n in self.nodes], _adj_dict(self), self.free_loops)


def _adj_dict(d: Diagram) -> dict[Endpoint, Endpoint]:
    return {(n, s): d.adjacency[n][s] for n, s in d.endpoints()}


def from_adjacency(
    kinds: Sequence[str] | dict[int, str],
    adj: dict[Endpoint, Endpoint],
    free_loops: int = 0,
    name: str = "",
) -> Diagram:
    """Build a diagram from node kinds and an endpoint pairing.

    ``kinds`` may be a dict keyed by arbitrary sortable node ids; nodes are
    renumbered in sorted id order and arcs labelled in order of first use.
    """
    if isinstance(kinds, dict):
        ids = sorted(kinds)
        kind_list = [kinds[i] for i in ids]
    else:
        ids = list(range(len(kinds)))
        kind_list = list(kinds)
    index = {nid: i for i, nid in enumerate(ids)}
    arcs = [[-1] * DEGREE[k] for k in kind_list]
    nxt = 0
    for nid in ids:
        i = index[nid]
        for s in range(DEGREE[kind_list[i]]):
            if arcs[i][s] >= 0:
                continue
            m, t = adj[(nid, s)]
            arcs[i][s] = nxt
            arcs[index[m]][t] = nxt
            nxt += 1
    nodes = tuple(Node(k, tuple(a)) for k, a in zip(kind_list, arcs))
    return Diagram(nodes, free_loops, name)


def _component_code(d: Diagram, comp: Sequence[int]) -> tuple[int, ...]:
    local = {v: i for i, v in enumerate(comp)}
    offset, deg, kind = [], [], []
    node_of, slot_of = [], []
    pos = 0
    for v in comp:
        dv = len(d.nodes[v].arcs)
        offset.append(pos)
        deg.append(dv)
        kind.append(_KIND_CODE[d.nodes[v].kind])
        for s in range(dv):
            node_of.append(local[v])
            slot_of.append(s)
        pos += dv
    partner = []
    for v in comp:
        for m, t in d.adjacency[v]:
            partner.append(offset[local[m]] + t)
    return kernels.min_rooted_code(offset, deg, kind, partner, node_of, slot_of)


# -- PD text ---------------------------------------------------------------

_ENTRY = re.compile(r"\s*([A-Za-z])\s*\[\s*(-?\d+(?:\s*,\s*-?\d+)*)\s*\]\s*")


def parse_pd(text: str, name: str = "") -> Diagram:
    """Parse ``"V[0,1,2],X[3,4,5,6],..."`` into a validated :class:`Diagram`."""
    s = text.strip()
    if s.upper().startswith("PD"):
        raise PDParseError("unexpected 'PD' prefix; pass only the entry list", 0)
    if s.endswith("."):
        s = s[:-1]
    nodes = []
    pos = 0
    if not s.strip():
        raise PDParseError("empty PD code", 0)
    while True:
        m = _ENTRY.match(s, pos)
        if m is None:
            raise PDParseError("expected V[...] or X[...]", pos)
        kind = m.group(1).upper()
        if kind not in ("V", "X"):
            raise PDParseError(f"unknown node type {m.group(1)!r}", m.start(1))
        arcs = tuple(int(x) for x in m.group(2).split(","))
        if len(arcs) != DEGREE[kind]:
            raise PDParseError(f"{kind} entry needs {DEGREE[kind]} arcs, got {len(arcs)}", m.start(2))
        nodes.append(Node(kind, arcs))
        pos = m.end()
        if pos == len(s):
            break
        if s[pos] != ",":
            raise PDParseError("expected ','", pos)
        pos += 1
    d = Diagram(tuple(nodes), 0, name)
    d.check_planar()
    return d


def write_pd(d: Diagram) -> str:
    """Serialize with arcs relabelled ``0..n-1`` in order of first appearance."""
    if d.free_loops:
        raise UnencodableError("PD text cannot encode free loops")
    r = d.relabeled()
    return ",".join(f"{n.kind}[{','.join(map(str, n.arcs))}]" for n in r.nodes)


# -- operations ------------------------------------------------------------


def faces(d: Diagram) -> list[tuple[Endpoint, ...]]:
    """Face boundary walks as tuples of darts; a lone free loop has two faces."""
    out = list(d.face_list)
    if not d.nodes and d.free_loops == 1:
        return [(), ()]
    return out


def canonical_code(d: Diagram) -> bytes:
    """Byte string equal for diagrams related by an orientation-preserving relabeling."""
    comps = d.component_codes
    if len(comps) > 255 or d.free_loops > 255 or len(d.nodes) > 255:
        raise UnencodableError("canonical codes support at most 255 nodes, components and free loops")
    out = bytearray([len(comps), d.free_loops])
    for c in comps:
        out += len(c).to_bytes(2, "big")
        out += bytes(c)
    return bytes(out)


def from_code(code: bytes, name: str = "") -> Diagram:
    """Rebuild the canonically labelled diagram encoded by :func:`canonical_code`.

    Nodes appear in breadth-first order of each component's minimal root;
    ``from_code(canonical_code(d))`` is isomorphic to ``d`` and its labelling
    depends only on the isomorphism class.
    """
    ncomp, free = code[0], code[1]
    pos = 2
    kinds: list[str] = []
    adj: dict[Endpoint, Endpoint] = {}
    for _ in range(ncomp):
        length = int.from_bytes(code[pos : pos + 2], "big")
        body = code[pos + 2 : pos + 2 + length]
        pos += 2 + length
        base = len(kinds)
        recs = []
        i = 0
        while i < len(body):
            tok = body[i]
            kind, entry = _TOKEN_KIND[tok]
            deg = DEGREE[kind]
            recs.append((kind, entry, body[i + 1 : i + 1 + 2 * deg]))
            kinds.append(kind)
            i += 1 + 2 * deg
        for lab, (kind, entry, nb) in enumerate(recs):
            deg = DEGREE[kind]
            for k in range(deg):
                m, rel = nb[2 * k], nb[2 * k + 1]
                mk, me, _ = recs[m]
                adj[(base + lab, (entry + k) % deg)] = (base + m, (me + rel) % DEGREE[mk])
    return from_adjacency(kinds, adj, free, name)


_TOKEN_KIND = {0: ("V", 0), 1: ("X", 0), 2: ("X", 1), 3: ("F", 0)}


def code_crossing_count(code: bytes) -> int:
    """Number of crossings of the diagram encoded by ``code`` (no decoding)."""
    pos = 2
    count = 0
    for _ in range(code[0]):
        length = int.from_bytes(code[pos : pos + 2], "big")
        i, end = pos + 2, pos + 2 + length
        while i < end:
            tok = code[i]
            if tok in (1, 2):
                count += 1
            i += 1 + 2 * DEGREE[_TOKEN_KIND[tok][0]]
        pos = end
    return count


def mirror(d: Diagram) -> Diagram:
    """Switch every crossing; the embedding is unchanged."""
    nodes = tuple(
        Node("X", n.arcs[1:] + n.arcs[:1]) if n.kind == "X" else n for n in d.nodes
    )
    return Diagram(nodes, d.free_loops, d.name)


@dataclass(frozen=True)
class Multigraph:
    """Abstract multigraph with loops, parallel edges and vertexless circles."""

    vertex_count: int
    edges: tuple[tuple[int, int], ...]
    free_loops: int = 0

    def __post_init__(self) -> None:
        if self.vertex_count < 0 or self.free_loops < 0:
            raise ValueError("counts must be nonnegative")
        for u, v in self.edges:
            if not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
                raise ValueError(f"edge {(u, v)} references a missing vertex")

    def degrees(self) -> list[int]:
        deg = [0] * self.vertex_count
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def loops(self) -> list[int]:
        return [i for i, (u, v) in enumerate(self.edges) if u == v]

    def components(self) -> list[list[int]]:
        parent = list(range(self.vertex_count))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for u, v in self.edges:
            parent[find(u)] = find(v)
        groups: dict[int, list[int]] = {}
        for x in range(self.vertex_count):
            groups.setdefault(find(x), []).append(x)
        return sorted(groups.values())


def trace_strands(d: Diagram, passes: Iterable[int] | None = None) -> tuple[list[tuple[Endpoint, Endpoint]], int]:
    """Follow strands through crossings.

    Returns ``(edges, closed)``: ``edges`` pairs the terminal endpoints (slots of
    non-crossing nodes) joined by a strand, ``closed`` counts strands that
    meet no terminal node. ``passes`` restricts which nodes are traversed
    straight through (default: every 4-valent node, so a shadow traces like
    any of its crossing assignments).
    """
    through = set(passes) if passes is not None else {i for i, n in enumerate(d.nodes) if n.kind != "V"}
    adj = d.adjacency
    seen: set[Endpoint] = set()
    edges = []
    for n, node in enumerate(d.nodes):
        if n in through:
            continue
        for s in range(len(node.arcs)):
            e = (n, s)
            if e in seen:
                continue
            seen.add(e)
            m, t = adj[n][s]
            while m in through:
                seen.add((m, t))
                t2 = (t + 2) % 4
                seen.add((m, t2))
                m, t = adj[m][t2]
            seen.add((m, t))
            edges.append((e, (m, t)))
    closed = 0
    for n in through:
        for s in range(4):
            if (n, s) in seen:
                continue
            closed += 1
            m, t = n, s
            while (m, t) not in seen:
                seen.add((m, t))
                t2 = (t + 2) % 4
                seen.add((m, t2))
                m, t = adj[m][t2]
    return edges, closed


def underlying_graph(d: Diagram) -> Multigraph:
    """Trace through 4-valent nodes; vertices are the ``V`` nodes in order."""
    verts = [i for i, n in enumerate(d.nodes) if n.kind == "V"]
    index = {v: i for i, v in enumerate(verts)}
    edges, closed = trace_strands(d)
    pairs = tuple((index[a[0]], index[b[0]]) for a, b in edges)
    return Multigraph(len(verts), pairs, closed + d.free_loops)


def component_count(d: Diagram) -> int:
    g = underlying_graph(d)
    return len(g.components()) + g.free_loops


def perfect_matchings(g: Multigraph) -> list[tuple[int, ...]]:
    """All perfect matchings by non-loop edges, as sorted tuples of edge indices."""
    deg = g.degrees()
    for v, dv in enumerate(deg):
        if dv != 3:
            raise DomainError(f"vertex {v} has degree {dv}, expected 3")
    incident: list[list[int]] = [[] for _ in range(g.vertex_count)]
    for i, (u, v) in enumerate(g.edges):
        if u != v:
            incident[u].append(i)
            incident[v].append(i)
    out: list[tuple[int, ...]] = []

    def rec(covered: list[bool], chosen: list[int]) -> None:
        try:
            v = covered.index(False)
        except ValueError:
            out.append(tuple(sorted(chosen)))
            return
        for i in incident[v]:
            u, w = g.edges[i]
            o = w if u == v else u
            if not covered[o]:
                covered[v] = covered[o] = True
                chosen.append(i)
                rec(covered, chosen)
                chosen.pop()
                covered[v] = covered[o] = False

    rec([False] * g.vertex_count, [])
    return out


def singularity_number(d: Diagram) -> int:
    return d.crossing_count + d.vertex_count


def bridges_of(g: Multigraph) -> list[int]:
    """Indices of bridge edges (removal disconnects their component)."""
    out = []
    base = len(g.components())
    for i, (u, v) in enumerate(g.edges):
        if u == v:
            continue
        rest = Multigraph(g.vertex_count, g.edges[:i] + g.edges[i + 1 :])
        if len(rest.components()) > base:
            out.append(i)
    return out
