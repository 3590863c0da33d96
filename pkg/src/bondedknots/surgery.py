"""Mutable endpoint-pairing workspace for local rewrites of diagrams.

Every move, strand deletion and cut-and-close operation is expressed as a
``splice``: a set of nodes is removed, new nodes are inserted, and the new
interior wiring is given as a symmetric pairing among *placeholders* (slots of
removed nodes that face the outside) and slots of new nodes. Strands that
run from the new interior out through the old boundary and back in again
are followed to their final partners; closed circuits become free loops.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping

from bondedknots.diagram import DEGREE, Diagram, Endpoint, from_adjacency

__all__ = ["Work", "SurgeryError"]

_DEG = dict(DEGREE, T=2)


class SurgeryError(RuntimeError):
    pass


class Work:
    """Editable copy of a diagram keyed by stable integer node ids."""

    def __init__(self, d: Diagram) -> None:
        self.kinds: dict[int, str] = {i: n.kind for i, n in enumerate(d.nodes)}
        self.adj: dict[Endpoint, Endpoint] = {(n, s): d.adjacency[n][s] for n, s in d.endpoints()}
        self.free_loops = d.free_loops
        self._next = len(d.nodes)

    def new_id(self) -> int:
        self._next += 1
        return self._next - 1

    def degree(self, n: int) -> int:
        return _DEG[self.kinds[n]]

    def link(self, a: Endpoint, b: Endpoint) -> None:
        self.adj[a] = b
        self.adj[b] = a

    def subdivide(self, e: Endpoint) -> int:
        """Insert a 2-valent marker on the arc at ``e``; slot 0 faces ``e``."""
        p = self.adj[e]
        t = self.new_id()
        self.kinds[t] = "T"
        if p == e:
            raise SurgeryError("arc joined to itself")
        self.link(e, (t, 0))
        self.link((t, 1), p)
        return t

    def splice(
        self,
        removed: Iterable[int],
        new_kinds: Mapping[int, str],
        inner: Mapping[Endpoint, Endpoint],
    ) -> None:
        removed = set(removed)
        wiring: dict[Endpoint, Endpoint] = {}
        for a, b in inner.items():
            wiring[a] = b
            wiring[b] = a
        new_slots = [(n, s) for n, k in new_kinds.items() for s in range(_DEG[k])]
        for e in new_slots:
            if e not in wiring:
                raise SurgeryError(f"new slot {e} left unwired")
        for e, p in list(self.adj.items()):
            if e[0] in removed and p[0] not in removed and e not in wiring:
                raise SurgeryError(f"boundary slot {e} missing from wiring")

        def is_removed(x: Endpoint) -> bool:
            return x[0] in removed

        visited: set[Endpoint] = set()

        def follow(cur: Endpoint) -> Endpoint:
            # ``cur`` was reached through the inner wiring
            while is_removed(cur):
                visited.add(cur)
                nxt = self.adj[cur]
                if not is_removed(nxt):
                    return nxt
                if nxt not in wiring:
                    raise SurgeryError(f"interior slot {nxt} reached from outside")
                visited.add(nxt)
                cur = wiring[nxt]
            return cur

        result: dict[Endpoint, Endpoint] = {}
        for s in new_slots:
            if s in result:
                continue
            t = follow(wiring[s])
            result[s] = t
            result[t] = s
        for e, p in list(self.adj.items()):
            if is_removed(e) or not is_removed(p) or e in result:
                continue
            visited.add(p)
            t = follow(wiring[p])
            result[e] = t
            result[t] = e
        loops = 0
        for x in wiring:
            if not is_removed(x) or x in visited:
                continue
            loops += 1
            cur = x
            while cur not in visited:
                visited.add(cur)
                y = wiring[cur]
                visited.add(y)
                cur = self.adj[y]
        for n in removed:
            for s in range(self.degree(n)):
                self.adj.pop((n, s), None)
            del self.kinds[n]
        self.kinds.update(new_kinds)
        self.adj.update(result)
        self.free_loops += loops

    def to_diagram(self, name: str = "") -> Diagram:
        if any(k == "T" for k in self.kinds.values()):
            raise SurgeryError("unresolved 2-valent markers")
        return from_adjacency(dict(self.kinds), self.adj, self.free_loops, name)

    def suppress_marker(self, t: int) -> None:
        """Remove a 2-valent marker, joining its two neighbours."""
        self.splice({t}, {}, {(t, 0): (t, 1)})
