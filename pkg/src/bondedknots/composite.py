"""Connected-sum detection through small diagrammatic cuts.

A cut is a simple closed curve meeting the diagram in ``k`` arc points and
no node. On the sphere these are exactly the simple cycles of the dual graph
(faces joined across arcs), so 1-, 2- and 3-cuts are dual loops, dual
digons and dual triangles.

Each side of a cut is closed into a factor diagram:

* order 1 -- the dangling strand is pulled back to its first vertex, which
  then disappears;
* order 2 -- the two dangling ends are joined;
* order 3 -- the three dangling ends meet a new trivalent vertex.

Factors are simplified and compared with the trivial pieces: the unknot
``O``, the trivial theta-curve and the trivial handcuff. An order 1 or 2
decomposition counts when no factor is ``O``; a trivial handcuff factor
still counts, so a chain of two handcuffs is composite. 2-cuts on bridge
edges of the traced graph need care, since a crossing can make them look
like dual digons. A knot tied in a bridge slides off over one side when
deleting the bridge splits the diagram, so such a 2-cut through one bridge
twice is skipped. A 2-cut through two different
bridges is skipped when the side holding both bridge ends falls apart once
the bridges are removed: it is then two 1-cuts in disguise. An order 3
decomposition counts when neither factor is the trivial theta-curve.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

from bondedknots.diagram import Diagram, Endpoint, Multigraph, parse_pd, trace_strands, underlying_graph
from bondedknots.search import SearchBudget, simplify
from bondedknots.surgery import Work

__all__ = [
    "Cut",
    "CompositeInfo",
    "find_cuts",
    "close_side",
    "factor_kind",
    "detect_composite",
    "detect_order3",
    "order3_factors",
]

Arc = tuple[Endpoint, Endpoint]

FACTOR_BUDGET = SearchBudget(max_up=1, max_states=4000)


@dataclass(frozen=True)
class Cut:
    """A ``k``-cut: the cut arcs (oriented from side ``a`` to side ``b``) and the node sides."""

    arcs: tuple[Arc, ...]
    side_a: frozenset[int]
    side_b: frozenset[int]

    @property
    def order(self) -> int:
        return len(self.arcs)


@dataclass(frozen=True)
class CompositeInfo:
    """Result of :func:`detect_composite`.

    Attributes:
        kind: ``prime``, ``order1``, ``order2`` or ``disjoint``.
        factors: simplified factor diagrams of the first counting cut.
    """

    kind: str
    factors: tuple[Diagram, ...] = ()

    @property
    def is_composite(self) -> bool:
        return self.kind != "prime"


def _arcs(d: Diagram) -> list[Arc]:
    out = []
    for e in d.endpoints():
        p = d.partner(e)
        if e <= p:
            out.append((e, p))
    return out


def _bridge_edges(d: Diagram) -> dict[frozenset[Endpoint], int]:
    """Arcs lying on bridge edges of the traced graph, mapped to the edge index."""
    g = underlying_graph(d)
    base = len(g.components())
    bridges = set()
    for i, (u, v) in enumerate(g.edges):
        if u != v and len(Multigraph(g.vertex_count, g.edges[:i] + g.edges[i + 1:]).components()) > base:
            bridges.add(i)
    out: dict[frozenset[Endpoint], int] = {}
    adj = d.adjacency
    for i, (e, _) in enumerate(trace_strands(d)[0]):
        if i not in bridges:
            continue
        n, s = e
        while True:
            m, t = adj[n][s]
            out[frozenset(((n, s), (m, t)))] = i
            if d.nodes[m].kind == "V":
                break
            n, s = m, (t + 2) % 4
    return out


def _walk(d: Diagram, start: Endpoint, on_strand: dict[int, set[int]]) -> Endpoint:
    """Follow a strand from ``start`` through crossings to its vertex slot."""
    m, t = start
    while d.nodes[m].kind == "X":
        on_strand.setdefault(m, set()).update({t, (t + 2) % 4})
        m, t = d.adjacency[m][(t + 2) % 4]
    return m, t


def _ends_apart(d: Diagram, removed: set[int], strands: list[Endpoint], ends: tuple[Endpoint, Endpoint]) -> bool:
    """Whether the pieces at ``ends`` are split once the ``strands`` are deleted.

    ``strands`` start at arcs (walked through crossings); ``ends`` are the two
    vertex slots whose vertices get smoothed, and every vertex a strand reaches
    is smoothed too. The test reads the diagram as drawn: pieces that only come
    apart after moves count as joined.
    """
    on_strand: dict[int, set[int]] = {}
    smooth = set(ends) | {_walk(d, e, on_strand) for e in strands}
    if len({v for v, _ in smooth}) != len(smooth):
        return False
    removed = set(removed)
    wiring: dict[Endpoint, Endpoint] = {}
    for x, slots in on_strand.items():
        removed.add(x)
        other = [s for s in range(4) if s not in slots]
        if other:
            wiring[(x, other[0])] = (x, other[1])
            wiring[(x, other[1])] = (x, other[0])
    for v, t in smooth:
        removed.add(v)
        rest = [s for s in range(3) if s != t]
        wiring[(v, rest[0])] = (v, rest[1])
        wiring[(v, rest[1])] = (v, rest[0])

    def first_kept(v: int, t: int) -> int | None:
        cur = (v, [s for s in range(3) if s != t][0])
        for _ in range(4 * len(d.nodes) + 4):
            nxt = d.adjacency[cur[0]][cur[1]]
            if nxt[0] not in removed:
                return nxt[0]
            if nxt not in wiring:
                return None
            cur = wiring[nxt]
            if cur[0] == v:
                return None
        return None

    heads = [first_kept(v, t) for v, t in ends]
    if None in heads:
        return True
    seen = {heads[0]}
    stack = [heads[0]]
    while stack:
        n = stack.pop()
        for s, (m, t) in enumerate(d.adjacency[n]):
            hops = 0
            while m in removed and (m, t) in wiring and hops <= 4 * len(d.nodes):
                m, t = d.adjacency[wiring[(m, t)][0]][wiring[(m, t)][1]]
                hops += 1
            if m not in removed and m not in seen:
                seen.add(m)
                stack.append(m)
    return heads[1] not in seen


def _spurious_2cut(d: Diagram, cut: Cut, bridge: dict[frozenset[Endpoint], int]) -> bool:
    """A 2-cut on bridge edges that is no connected sum (see the module notes)."""
    on = [bridge.get(frozenset(a)) for a in cut.arcs]
    if None in on:
        return False
    if on[0] == on[1]:
        u, w = trace_strands(d)[0][on[0]]
        return _ends_apart(d, set(), [d.adjacency[u[0]][u[1]]], (u, w))
    # the side holding both bridge ends meets them in different graph pieces
    g = underlying_graph(d)
    index = {v: i for i, v in enumerate(n for n, node in enumerate(d.nodes) if node.kind == "V")}
    pieces = Multigraph(g.vertex_count, tuple(e for i, e in enumerate(g.edges) if i not in on)).components()
    piece = {v: k for k, comp in enumerate(pieces) for v in comp}
    for keep in ("a", "b"):
        kept = cut.side_a if keep == "a" else cut.side_b
        starts = [e if keep == "a" else p for e, p in cut.arcs]
        on_strand: dict[int, set[int]] = {}
        ends = (_walk(d, starts[0], on_strand), _walk(d, starts[1], on_strand))
        if piece[index[ends[0][0]]] == piece[index[ends[1][0]]]:
            continue
        others = {n for n in range(len(d.nodes)) if n not in kept}
        if _ends_apart(d, others, [starts[0], starts[1]], ends):
            return True
    return False


def _side(d: Diagram, cut: set[frozenset[Endpoint]], start: int) -> set[int]:
    seen = {start}
    stack = [start]
    while stack:
        n = stack.pop()
        for s, p in enumerate(d.adjacency[n]):
            if frozenset(((n, s), p)) in cut or p[0] in seen:
                continue
            seen.add(p[0])
            stack.append(p[0])
    return seen


def _make_cut(d: Diagram, arcs: tuple[Arc, ...]) -> Cut | None:
    keys = {frozenset(a) for a in arcs}
    if len(keys) != len(arcs):
        return None
    side_a = _side(d, keys, arcs[0][0][0])
    comp = set()
    for c in d.node_components:
        if arcs[0][0][0] in c:
            comp = set(c)
    side_b = comp - side_a
    if not side_b:
        return None
    oriented = []
    for e, p in arcs:
        if e[0] in side_a and p[0] in side_b:
            oriented.append((e, p))
        elif p[0] in side_a and e[0] in side_b:
            oriented.append((p, e))
        else:
            return None
    return Cut(tuple(oriented), frozenset(side_a), frozenset(side_b))


def find_cuts(d: Diagram, k: int) -> list[Cut]:
    """All ``k``-cuts (``k`` in 1..3) of ``d``, in a deterministic order."""
    fo = d.face_of
    arcs = _arcs(d)
    sides = {a: (fo[a[0]], fo[a[1]]) for a in arcs}
    combos: list[tuple[Arc, ...]] = []
    if k == 1:
        combos = [(a,) for a in arcs if sides[a][0] == sides[a][1]]
    elif k == 2:
        by_pair: dict[frozenset[int], list[Arc]] = {}
        for a in arcs:
            f, g = sides[a]
            if f != g:
                by_pair.setdefault(frozenset((f, g)), []).append(a)
        for group in by_pair.values():
            combos.extend(combinations(group, 2))
    elif k == 3:
        for trio in combinations([a for a in arcs if sides[a][0] != sides[a][1]], 3):
            pairs = [frozenset(sides[a]) for a in trio]
            faces = set().union(*pairs)
            if len(faces) == 3 and len(set(pairs)) == 3:
                combos.append(trio)
    else:
        raise ValueError("cuts of order 1, 2 or 3 only")
    out = []
    for combo in combos:
        cut = _make_cut(d, combo)
        if cut is not None:
            out.append(cut)
    return out


def _pull_back(d: Diagram, removed: set[int], end: Endpoint, inner: dict[Endpoint, Endpoint]) -> None:
    """Retract the strand entering the kept side at ``end`` up to its first vertex."""
    on_strand: dict[int, set[int]] = {}
    m, t = end
    while d.nodes[m].kind == "X":
        if t in on_strand.get(m, set()):
            raise ValueError("strand closes on itself before reaching a vertex")
        on_strand.setdefault(m, set()).update({t, (t + 2) % 4})
        m, t = d.adjacency[m][(t + 2) % 4]
    for x, slots in on_strand.items():
        removed.add(x)
        other = [s for s in range(4) if s not in slots]
        if other:
            inner[(x, other[0])] = (x, other[1])
    removed.add(m)
    rest = [s for s in range(3) if s != t]
    inner[(m, rest[0])] = (m, rest[1])


def close_side(d: Diagram, cut: Cut, keep: str = "a") -> Diagram:
    """Factor diagram of one side of ``cut`` (``keep`` is ``"a"`` or ``"b"``)."""
    if keep == "a":
        kept, gone = cut.side_a, cut.side_b
        ends = [e for e, _ in cut.arcs]
        holes = [p for _, p in cut.arcs]
    else:
        kept, gone = cut.side_b, cut.side_a
        ends = [p for _, p in cut.arcs]
        holes = [e for e, _ in cut.arcs]
    others = {n for n in range(len(d.nodes)) if n not in kept and n not in gone}
    removed = set(gone) | others
    inner: dict[Endpoint, Endpoint] = {}
    k = cut.order
    if k == 1:
        _pull_back(d, removed, ends[0], inner)
        w = Work(d)
        w.splice(removed, {}, inner)
        return w.to_diagram()
    if k == 2:
        w = Work(d)
        w.splice(removed, {}, {holes[0]: holes[1]})
        return w.to_diagram()
    for order in ((0, 1, 2), (0, 2, 1)):
        w = Work(d)
        z = w.new_id()
        w.splice(removed, {z: "V"}, {holes[i]: (z, order[i]) for i in range(3)})
        f = w.to_diagram()
        if f.is_planar():
            return f
    raise ValueError("no planar closure of the 3-cut")


@lru_cache(maxsize=1)
def _trivial_codes() -> dict[bytes, str]:
    return {
        parse_pd("V[0,1,2],V[0,2,1]").code: "theta0",
        parse_pd("V[0,0,1],V[1,2,2]").code: "H0",
    }


def factor_kind(f: Diagram, budget: SearchBudget = FACTOR_BUDGET) -> str:
    """``O``, ``theta0``, ``H0`` or ``other`` after simplification."""
    if not f.nodes:
        return "O" if f.free_loops == 1 else "other"
    s = simplify(f, budget)
    if not s.nodes:
        return "O" if s.free_loops == 1 else "other"
    return _trivial_codes().get(s.code, "other")


def _counts_12(kinds: tuple[str, str]) -> bool:
    return "O" not in kinds


def detect_composite(d: Diagram, budget: SearchBudget = FACTOR_BUDGET) -> CompositeInfo:
    """Classify ``d`` as ``prime``, an order-1 or order-2 sum, or a disjoint union."""
    comps = d.node_components
    if len(comps) > 1 or (d.free_loops and d.nodes):
        return CompositeInfo("disjoint")
    bridge = _bridge_edges(d)
    for k, label in ((1, "order1"), (2, "order2")):
        for cut in find_cuts(d, k):
            if k == 2 and _spurious_2cut(d, cut, bridge):
                continue
            fa, fb = close_side(d, cut, "a"), close_side(d, cut, "b")
            kinds = (factor_kind(fa, budget), factor_kind(fb, budget))
            if _counts_12(kinds):
                return CompositeInfo(label, (simplify(fa, budget), simplify(fb, budget)))
    return CompositeInfo("prime")


def order3_factors(d: Diagram, budget: SearchBudget = FACTOR_BUDGET) -> tuple[Diagram, Diagram] | None:
    """Simplified factors of the first counting order-3 cut, if any."""
    for cut in find_cuts(d, 3):
        if len(cut.side_a) < 2 or len(cut.side_b) < 2:
            continue
        fa, fb = close_side(d, cut, "a"), close_side(d, cut, "b")
        if factor_kind(fa, budget) != "theta0" and factor_kind(fb, budget) != "theta0":
            return simplify(fa, budget), simplify(fb, budget)
    return None


def detect_order3(d: Diagram, budget: SearchBudget = FACTOR_BUDGET) -> bool:
    """True if ``d`` is an order-3 connected sum of two nontrivial pieces."""
    return order3_factors(d, budget) is not None
