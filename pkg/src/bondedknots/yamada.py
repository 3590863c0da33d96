"""Yamada polynomial of spatial-graph diagrams.

Graph layer: ``h(G) = (-1)^|V| F_G(sigma + 1)`` where ``F`` is the flow
polynomial and ``sigma = A + 1 + A^-1``; vertexless circles contribute
``sigma``. Diagram layer: each crossing is replaced by the A-smoothing
(weight ``A``, joins slots 0-1 and 2-3), the A^-1-smoothing (weight ``A^-1``,
joins 0-3 and 1-2) or a flat 4-valent vertex (weight 1), and the resulting
graph is evaluated with ``h``.

Flow polynomials are carried as integer coefficient tuples in powers of
``sigma`` (that is, in ``k - 1``), converted to ``A`` only at the end.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from itertools import product

from bondedknots.diagram import Diagram, DomainError, Multigraph, trace_strands, underlying_graph
from bondedknots.poly import LaurentPolynomial, canon_poly, poly_mirror, sigma_to_laurent
from bondedknots.surgery import Work

__all__ = [
    "flow_eval",
    "flow_sigma",
    "h_value",
    "h_sigma",
    "yamada_raw",
    "yamada",
    "bond_deleted_invariant",
    "delete_strands",
    "state_count",
    "clear_cache",
    "cache_enabled",
]

SigmaPoly = tuple[int, ...]

_MEMO: dict[tuple, SigmaPoly] = {}
_USE_MEMO = True


def clear_cache() -> None:
    _MEMO.clear()


class cache_enabled:
    """Context manager toggling the flow-polynomial memo (for testing)."""

    def __init__(self, enabled: bool) -> None:
        self.enabled = enabled

    def __enter__(self) -> None:
        global _USE_MEMO
        self._prev = _USE_MEMO
        _USE_MEMO = self.enabled

    def __exit__(self, *exc) -> None:
        global _USE_MEMO
        _USE_MEMO = self._prev


# -- sigma-polynomial helpers ------------------------------------------------


def _trim(p: list[int]) -> SigmaPoly:
    while p and p[-1] == 0:
        p.pop()
    return tuple(p)


def _add(a: SigmaPoly, b: SigmaPoly, sign: int = 1) -> SigmaPoly:
    n = max(len(a), len(b))
    out = [0] * n
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i] += sign * c
    return _trim(out)


def _mul(a: SigmaPoly, b: SigmaPoly) -> SigmaPoly:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _shift(a: SigmaPoly, k: int) -> SigmaPoly:
    return (0,) * k + a if a else ()


# -- flow polynomial -----------------------------------------------------------


def _components(n: int, edges: Sequence[tuple[int, int]]) -> list[list[int]]:
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in edges:
        parent[find(u)] = find(v)
    groups: dict[int, list[int]] = {}
    for x in range(n):
        groups.setdefault(find(x), []).append(x)
    return list(groups.values())


def _has_bridge(n: int, edges: Sequence[tuple[int, int]]) -> bool:
    """Tarjan bridge test on a loopless multigraph (parallel edges respected)."""
    adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for i, (u, v) in enumerate(edges):
        adj[u].append((v, i))
        adj[v].append((u, i))
    disc = [-1] * n
    low = [0] * n
    t = 0
    for root in range(n):
        if disc[root] >= 0:
            continue
        disc[root] = low[root] = t
        t += 1
        stack = [(root, -1, iter(adj[root]))]
        while stack:
            v, pe, it = stack[-1]
            for w, ei in it:
                if ei == pe:
                    continue
                if disc[w] < 0:
                    disc[w] = low[w] = t
                    t += 1
                    stack.append((w, ei, iter(adj[w])))
                    break
                low[v] = min(low[v], disc[w])
            else:
                stack.pop()
                if stack:
                    u = stack[-1][0]
                    low[u] = min(low[u], low[v])
                    if low[v] > disc[u]:
                        return True
    return False


def _normalize(n: int, edges: Sequence[tuple[int, int]]) -> tuple[int, tuple[tuple[int, int], ...]]:
    """Relabel by a degree/multiplicity refinement; exact (not fully canonical) key."""
    deg = [0] * n
    for u, v in edges:
        deg[u] += 1
        deg[v] += 1
    nbr: list[list[int]] = [[] for _ in range(n)]
    for u, v in edges:
        nbr[u].append(deg[v])
        nbr[v].append(deg[u])
    order = sorted(range(n), key=lambda x: (deg[x], sorted(nbr[x])))
    pos = {v: i for i, v in enumerate(order)}
    norm = tuple(sorted((min(pos[u], pos[v]), max(pos[u], pos[v])) for u, v in edges))
    return n, norm


def _flow(n: int, edges: list[tuple[int, int]]) -> SigmaPoly:
    """Flow polynomial of a loopless-or-not multigraph in the sigma basis."""
    loops = sum(1 for u, v in edges if u == v)
    edges = [(u, v) for u, v in edges if u != v]
    if not edges:
        return _shift((1,), loops)
    # series reduction and pruning
    changed = True
    while changed:
        changed = False
        deg = [0] * n
        for u, v in edges:
            deg[u] += 1
            deg[v] += 1
        if any(d == 1 for d in deg):
            return ()
        for x in range(n):
            if deg[x] == 2:
                nb = [v if u == x else u for u, v in edges if x in (u, v)]
                edges = [(u, v) for u, v in edges if x not in (u, v)]
                a, b = nb
                if a == b:
                    loops += 1
                else:
                    edges.append((a, b))
                changed = True
                break
    if not edges:
        return _shift((1,), loops)
    used = sorted({x for e in edges for x in e})
    relabel = {v: i for i, v in enumerate(used)}
    n = len(used)
    edges = [(relabel[u], relabel[v]) for u, v in edges]
    if _has_bridge(n, edges):
        return ()
    comps = _components(n, edges)
    if len(comps) > 1:
        result: SigmaPoly = _shift((1,), loops)
        for comp in comps:
            cset = set(comp)
            local = {v: i for i, v in enumerate(comp)}
            sub = [(local[u], local[v]) for u, v in edges if u in cset]
            result = _mul(result, _flow_memo(len(comp), sub))
        return result
    return _shift(_flow_memo(n, edges), loops)


def _flow_memo(n: int, edges: list[tuple[int, int]]) -> SigmaPoly:
    key = _normalize(n, edges)
    if _USE_MEMO:
        hit = _MEMO.get(key)
        if hit is not None:
            return hit
    val = _flow_core(n, edges)
    if _USE_MEMO:
        _MEMO[key] = val
    return val


def _flow_core(n: int, edges: list[tuple[int, int]]) -> SigmaPoly:
    """Deletion-contraction on the heaviest parallel class of a loopless graph."""
    mult: dict[tuple[int, int], int] = {}
    for u, v in edges:
        k = (min(u, v), max(u, v))
        mult[k] = mult.get(k, 0) + 1
    (u, v), m = max(mult.items(), key=lambda kv: (kv[1], -kv[0][0], -kv[0][1]))
    rest = [e for e in edges if (min(e), max(e)) != (u, v)]
    deleted = _flow(n, rest)
    contracted_edges = [(u if a == v else a, u if b == v else b) for a, b in rest]
    contracted = _flow(n, contracted_edges)
    # F(H_m) = sum_{j=1..m} (-1)^(m-j) sigma^(j-1) F(C) + (-1)^m F(D)
    coef = [0] * m
    for j in range(1, m + 1):
        coef[j - 1] = (-1) ** (m - j)
    total = _mul(tuple(coef), contracted)
    return _add(total, deleted, (-1) ** m)


def flow_sigma(g: Multigraph) -> SigmaPoly:
    """``F_g(sigma + 1)`` as coefficients in powers of sigma (free loops included)."""
    return _shift(_flow(g.vertex_count, list(g.edges)), g.free_loops)


def flow_eval(g: Multigraph) -> LaurentPolynomial:
    return sigma_to_laurent(flow_sigma(g))


def h_sigma(g: Multigraph) -> SigmaPoly:
    f = flow_sigma(g)
    if g.vertex_count % 2:
        return tuple(-c for c in f)
    return f


def h_value(g: Multigraph) -> LaurentPolynomial:
    return sigma_to_laurent(h_sigma(g))


# -- state sum -----------------------------------------------------------------

_SMOOTH = {
    "A": ((1, 0, 3, 2), 1),
    "B": ((3, 2, 1, 0), -1),
}


def state_count(d: Diagram) -> int:
    return 3 ** d.crossing_count


def _state_graph(
    d: Diagram, crossings: Sequence[int], state: Sequence[str], vertex_index: dict[int, int], n_fixed: int
) -> tuple[int, list[tuple[int, int]], int]:
    adj = d.adjacency
    index = dict(vertex_index)
    nv = n_fixed
    mate: dict[int, tuple[int, int, int, int]] = {}
    for c, s in zip(crossings, state):
        if s == "F":
            index[c] = nv
            nv += 1
        else:
            mate[c] = _SMOOTH[s][0]
    seen: set[tuple[int, int]] = set()
    edges = []
    for v, vi in index.items():
        for s in range(len(d.nodes[v].arcs)):
            if (v, s) in seen:
                continue
            seen.add((v, s))
            m, t = adj[v][s]
            while m in mate:
                seen.add((m, t))
                t = mate[m][t]
                seen.add((m, t))
                m, t = adj[m][t]
            seen.add((m, t))
            edges.append((vi, index[m]))
    loops = 0
    for c in mate:
        for s in range(4):
            if (c, s) in seen:
                continue
            loops += 1
            m, t = c, s
            while (m, t) not in seen:
                seen.add((m, t))
                t = mate[m][t]
                seen.add((m, t))
                m, t = adj[m][t]
    return nv, edges, loops


def yamada_raw(d: Diagram) -> LaurentPolynomial:
    """Unnormalized Yamada polynomial (exact; ``3^c`` states)."""
    crossings = [i for i, n in enumerate(d.nodes) if n.kind == "X"]
    fixed = [i for i, n in enumerate(d.nodes) if n.kind != "X"]
    vertex_index = {v: i for i, v in enumerate(fixed)}
    acc: dict[int, SigmaPoly] = {}
    for state in product("ABF", repeat=len(crossings)):
        w = sum(_SMOOTH[s][1] for s in state if s != "F")
        nv, edges, loops = _state_graph(d, crossings, state, vertex_index, len(fixed))
        f = _shift(_flow(nv, edges), loops + d.free_loops)
        if not f:
            continue
        if nv % 2:
            f = tuple(-c for c in f)
        acc[w] = _add(acc.get(w, ()), f)
    total = LaurentPolynomial()
    for w, sp in acc.items():
        total = total + sigma_to_laurent(sp).shift(w)
    return total


def yamada(d: Diagram) -> LaurentPolynomial:
    """Unit-normalized Yamada polynomial."""
    return canon_poly(yamada_raw(d))


def delete_strands(d: Diagram, strands: Iterable[tuple[tuple[int, int], tuple[int, int]]]) -> Diagram:
    """Delete graph edges given as terminal endpoint pairs and suppress 2-valent vertices."""
    w = Work(d)
    adj = d.adjacency
    removed: set[int] = set()
    on_strand: dict[int, set[int]] = {}
    ends: list[tuple[int, int]] = []
    for a, b in strands:
        ends.extend([a, b])
        m, t = adj[a[0]][a[1]]
        while d.nodes[m].kind == "X" and (m, t) != b:
            on_strand.setdefault(m, set()).update({t, (t + 2) % 4})
            t2 = (t + 2) % 4
            m, t = adj[m][t2]
    inner: dict[tuple[int, int], tuple[int, int]] = {}
    for x, slots in on_strand.items():
        removed.add(x)
        other = [s for s in range(4) if s not in slots]
        if other:
            inner[(x, other[0])] = (x, other[1])
    vert_hits: dict[int, list[int]] = {}
    for v, s in ends:
        vert_hits.setdefault(v, []).append(s)
    for v, slots in vert_hits.items():
        if len(slots) > 1:
            raise DomainError(f"vertex {v} meets more than one deleted strand")
        removed.add(v)
        rest = [s for s in range(3) if s != slots[0]]
        inner[(v, rest[0])] = (v, rest[1])
    w.splice(removed, {}, inner)
    return w.to_diagram()


def bond_deleted_invariant(d: Diagram, matching: Sequence[int]) -> LaurentPolynomial:
    """Normalized Yamada polynomial of the link left after deleting the matched edges.

    ``matching`` holds edge indices of :func:`underlying_graph` (as returned by
    :func:`~bondedknots.diagram.perfect_matchings`).
    """
    edges, _ = trace_strands(d)
    g = underlying_graph(d)
    if len(edges) != len(g.edges):
        raise DomainError("strand tracing mismatch")
    for i in matching:
        if not 0 <= i < len(edges):
            raise DomainError(f"matching edge {i} not realizable as a strand")
    link = delete_strands(d, [edges[i] for i in matching])
    return yamada(link)


def mirror_poly(p: LaurentPolynomial) -> LaurentPolynomial:
    return poly_mirror(p)
