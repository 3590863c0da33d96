"""Generalized Reidemeister moves for bonded-knot diagrams.

Moves are located through face patterns of the rotation system and applied
as splices on a :class:`~bondedknots.surgery.Work` copy:

========  ===========================================================
R1-/R1+   remove / add a kink (monogon at a crossing)
R2-/R2+   remove / add a bigon of two crossings, one strand over both
R3        slide a strand across the crossing opposite it in a trigon
R4-/R4+   pull a strand off a vertex (two crossings) / push it over
          the vertex (one crossing on the third edge becomes two)
R5-/R5+   untwist / twist two edges at a vertex
FLYPE     half-turn of a tangle flanked by a crossing (optional)
========  ===========================================================

Slot arithmetic follows the face convention of
:meth:`~bondedknots.diagram.Diagram.next_in_face`: a face walk leaving node
``n`` through slot ``s`` sees the face on its left, and the face occupies
the corner between slots ``s`` and ``s + 1`` at ``n``.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator
from dataclasses import dataclass

from bondedknots.diagram import Diagram, Endpoint
from bondedknots.surgery import Work

__all__ = [
    "MoveSite",
    "StaleSiteError",
    "DECREASING",
    "NEUTRAL",
    "INCREASING",
    "ALL_KINDS",
    "DELTA",
    "find_moves",
    "apply_move",
    "neighbours",
]

DECREASING = ("R1-", "R2-", "R4-", "R5-")
NEUTRAL = ("R3",)
INCREASING = ("R1+", "R2+", "R4+", "R5+")
ALL_KINDS = DECREASING + NEUTRAL + INCREASING + ("FLYPE",)

DELTA = {"R1-": -1, "R2-": -2, "R4-": -1, "R5-": -1, "R3": 0, "FLYPE": 0, "R1+": 1, "R2+": 2, "R4+": 1, "R5+": 1}

INVERSE = {"R1-": "R1+", "R1+": "R1-", "R2-": "R2+", "R2+": "R2-", "R4-": "R4+", "R4+": "R4-",
           "R5-": "R5+", "R5+": "R5-", "R3": "R3", "FLYPE": "FLYPE"}


class StaleSiteError(ValueError):
    """The anchored pattern is not present in the diagram."""


@dataclass(frozen=True, order=True)
class MoveSite:
    """A place where a move applies.

    ``anchor`` holds node/slot integers sufficient to re-locate the pattern;
    ``variant`` selects among the discrete choices of an increasing move
    (over/under side, twist direction, kink side).
    """

    kind: str
    anchor: tuple[int, ...]
    variant: int = 0

    @property
    def fingerprint(self) -> str:
        body = ".".join(map(str, self.anchor))
        return f"{self.kind}:{body}:{self.variant}"


# -- detection -----------------------------------------------------------------


def _is_x(d: Diagram, n: int) -> bool:
    return d.nodes[n].kind == "X"


def _is_v(d: Diagram, n: int) -> bool:
    return d.nodes[n].kind == "V"


def _r1_down(d: Diagram) -> Iterator[MoveSite]:
    for x, node in enumerate(d.nodes):
        if node.kind != "X":
            continue
        for s in range(4):
            if d.adjacency[x][s] == (x, (s + 1) % 4):
                yield MoveSite("R1-", (x, s))


def _bigon(d: Diagram, f: tuple[Endpoint, ...]) -> tuple[int, int, int, int] | None:
    """``(n, s, m, j)`` with arcs ``(n,s)-(m,j)`` and ``(n,s+1)-(m,j-1)``."""
    (n, s), (m, j1) = f
    return n, s, m, (j1 + 1) % d.degree(m)


def _r2_down(d: Diagram) -> Iterator[MoveSite]:
    for f in d.face_list:
        if len(f) != 2:
            continue
        x, s, y, j = _bigon(d, f)
        if x != y and _is_x(d, x) and _is_x(d, y) and s % 2 == j % 2:
            yield MoveSite("R2-", (x, s, y, j))


def _trigon(d: Diagram, f: tuple[Endpoint, ...], start: int) -> tuple[int, ...]:
    """Rotate a length-3 face to ``start`` and return ``(n0, s0, n1, j1, n2, j2)``.

    ``j1``/``j2`` are the slots at which the walk arrives at the next nodes.
    """
    g = f[start:] + f[:start]
    (n0, s0), (n1, t1), (n2, t2) = g
    return n0, s0, n1, (t1 + 1) % d.degree(n1), n2, (t2 + 1) % d.degree(n2)


def _r3_ok(sx: int, jy: int, jz: int) -> bool:
    # some strand of the trigon is over (or under) at both of its crossings
    return sx % 2 == jy % 2 or (jy - 1) % 2 == jz % 2 or (jz - 1) % 2 == (sx + 1) % 2


def _r3(d: Diagram) -> Iterator[MoveSite]:
    for f in d.face_list:
        if len(f) != 3:
            continue
        x, sx, y, jy, z, jz = _trigon(d, f, 0)
        if len({x, y, z}) == 3 and all(_is_x(d, n) for n in (x, y, z)) and _r3_ok(sx, jy, jz):
            yield MoveSite("R3", (x, sx, y, jy, z, jz))


def _r4_down(d: Diagram) -> Iterator[MoveSite]:
    for f in d.face_list:
        if len(f) != 3:
            continue
        kinds = [d.nodes[n].kind for n, _ in f]
        if sorted(kinds) != ["V", "X", "X"]:
            continue
        v, a, x, jx, y, jy = _trigon(d, f, kinds.index("V"))
        if x != y and (jx - 1) % 2 == jy % 2:
            yield MoveSite("R4-", (v, a, x, jx, y, jy))


def _r5_down(d: Diagram) -> Iterator[MoveSite]:
    for f in d.face_list:
        if len(f) != 2:
            continue
        kinds = [d.nodes[n].kind for n, _ in f]
        if sorted(kinds) != ["V", "X"]:
            continue
        g = f if kinds[0] == "V" else f[::-1]
        v, a, x, j = _bigon(d, g)
        yield MoveSite("R5-", (v, a, x, j))


def _arcs(d: Diagram) -> list[Endpoint]:
    """One representative dart per arc (the smaller endpoint)."""
    return [e for e in d.endpoints() if e <= d.partner(e)]


def _r1_up(d: Diagram) -> Iterator[MoveSite]:
    for n, s in _arcs(d):
        for v in range(4):
            yield MoveSite("R1+", (n, s), v)
    if d.free_loops:
        for v in range(2):
            yield MoveSite("R1+", (-1, -1), v)


def _r2_up(d: Diagram) -> Iterator[MoveSite]:
    for f in d.face_list:
        k = len(f)
        for i in range(k):
            for j in range(i + 1, k):
                for v in range(2):
                    yield MoveSite("R2+", f[i] + f[j], v)


def _r4_up(d: Diagram) -> Iterator[MoveSite]:
    for v, node in enumerate(d.nodes):
        if node.kind != "V":
            continue
        for k in range(3):
            z, t = d.adjacency[v][k]
            if _is_x(d, z):
                yield MoveSite("R4+", (v, k))


def _r5_up(d: Diagram) -> Iterator[MoveSite]:
    for v, node in enumerate(d.nodes):
        if node.kind != "V":
            continue
        for a in range(3):
            for t in range(2):
                yield MoveSite("R5+", (v, a), t)


_FINDERS = {
    "R1-": _r1_down,
    "R2-": _r2_down,
    "R3": _r3,
    "R4-": _r4_down,
    "R5-": _r5_down,
    "R1+": _r1_up,
    "R2+": _r2_up,
    "R4+": _r4_up,
    "R5+": _r5_up,
}


def find_moves(d: Diagram, kinds: Iterable[str] | None = None) -> list[MoveSite]:
    """All sites of the requested kinds (default: every kind except FLYPE)."""
    wanted = tuple(kinds) if kinds is not None else DECREASING + NEUTRAL + INCREASING
    out: list[MoveSite] = []
    for k in wanted:
        if k == "FLYPE":
            from bondedknots import flype

            out.extend(flype.find_flypes(d))
        elif k in _FINDERS:
            out.extend(_FINDERS[k](d))
        else:
            raise ValueError(f"unknown move kind {k!r}")
    return out


# -- application -----------------------------------------------------------------


def _check(cond: bool, site: MoveSite) -> None:
    if not cond:
        raise StaleSiteError(f"site {site.fingerprint} does not match the diagram")


def _valid_node(d: Diagram, n: int, kind: str) -> bool:
    return 0 <= n < len(d.nodes) and d.nodes[n].kind == kind


def _apply_r1_down(d: Diagram, site: MoveSite) -> Diagram:
    x, s = site.anchor
    _check(_valid_node(d, x, "X") and d.adjacency[x][s] == (x, (s + 1) % 4), site)
    w = Work(d)
    w.splice({x}, {}, {(x, (s + 2) % 4): (x, (s + 3) % 4)})
    return w.to_diagram()


def _apply_r1_up(d: Diagram, site: MoveSite) -> Diagram:
    n, s = site.anchor
    w = Work(d)
    x = w.new_id()
    w.kinds[x] = "X"
    i, side = site.variant % 2, site.variant // 2
    if n < 0:
        _check(d.free_loops > 0, site)
        w.free_loops -= 1
        w.link((x, i), (x, i + 1))
        w.link((x, i + 2), (x, (i + 3) % 4))
        return w.to_diagram()
    _check(0 <= n < len(d.nodes) and 0 <= s < d.degree(n), site)
    e = (n, s)
    p = d.partner(e)
    w.link(e, (x, i))
    if side == 0:
        w.link((x, i + 1), p)
        w.link((x, i + 2), (x, (i + 3) % 4))
    else:
        w.link((x, (i + 3) % 4), p)
        w.link((x, i + 1), (x, i + 2))
    return w.to_diagram()


def _apply_r2_down(d: Diagram, site: MoveSite) -> Diagram:
    x, s, y, j = site.anchor
    _check(
        x != y
        and _valid_node(d, x, "X")
        and _valid_node(d, y, "X")
        and d.adjacency[x][s] == (y, j)
        and d.adjacency[x][(s + 1) % 4] == (y, (j - 1) % 4)
        and s % 2 == j % 2,
        site,
    )
    w = Work(d)
    w.splice(
        {x, y},
        {},
        {(x, (s + 2) % 4): (y, (j + 2) % 4), (x, (s + 3) % 4): (y, (j + 1) % 4)},
    )
    return w.to_diagram()


def _apply_r2_up(d: Diagram, site: MoveSite) -> Diagram:
    n1, s1, n2, s2 = site.anchor
    for n, s in ((n1, s1), (n2, s2)):
        _check(0 <= n < len(d.nodes) and 0 <= s < d.degree(n), site)
    d1, d2 = (n1, s1), (n2, s2)
    _check(d1 != d2 and d.face_of[d1] == d.face_of[d2], site)
    w = Work(d)
    p1 = d.partner(d1)
    t = None
    if d2 == p1:
        # the same arc seen from both sides: split it so the two ends are distinct
        t = w.subdivide(d1)
        p1, p2 = (t, 0), (t, 1)
    else:
        p2 = d.partner(d2)
    r = 3 if site.variant else 0
    x, y = w.new_id(), w.new_id()
    w.kinds[x] = w.kinds[y] = "X"

    def S(k: int) -> int:
        return (k + r) % 4

    w.link((x, S(0)), (y, S(2)))
    w.link((x, S(1)), (y, S(1)))
    w.link((x, S(2)), p2)
    w.link((x, S(3)), d1)
    w.link((y, S(0)), d2)
    w.link((y, S(3)), p1)
    if t is not None:
        w.suppress_marker(t)
    return w.to_diagram()


def _apply_r3(d: Diagram, site: MoveSite) -> Diagram:
    x, sx, y, jy, z, jz = site.anchor
    _check(
        len({x, y, z}) == 3
        and all(_valid_node(d, n, "X") for n in (x, y, z))
        and d.adjacency[x][sx] == (y, jy)
        and d.adjacency[y][(jy - 1) % 4] == (z, jz)
        and d.adjacency[z][(jz - 1) % 4] == (x, (sx + 1) % 4)
        and _r3_ok(sx, jy, jz),
        site,
    )
    w = Work(d)
    x2, y2, z2 = w.new_id(), w.new_id(), w.new_id()

    def m(k: int) -> int:
        return k % 4

    inner = {
        (x2, m(sx)): (y, m(jy + 2)),
        (x2, m(sx + 1)): (z, m(jz + 1)),
        (y2, m(jy)): (x, m(sx + 2)),
        (y2, m(jy - 1)): (z, m(jz + 2)),
        (z2, m(jz)): (y, m(jy + 1)),
        (z2, m(jz - 1)): (x, m(sx + 3)),
        (x2, m(sx + 2)): (y2, m(jy + 2)),
        (x2, m(sx + 3)): (z2, m(jz + 1)),
        (y2, m(jy + 1)): (z2, m(jz + 2)),
    }
    w.splice({x, y, z}, {x2: "X", y2: "X", z2: "X"}, inner)
    return w.to_diagram()


def _apply_r4_down(d: Diagram, site: MoveSite) -> Diagram:
    v, a, x, jx, y, jy = site.anchor
    _check(
        x != y
        and _valid_node(d, v, "V")
        and _valid_node(d, x, "X")
        and _valid_node(d, y, "X")
        and d.adjacency[v][a] == (x, jx)
        and d.adjacency[x][(jx - 1) % 4] == (y, jy)
        and d.adjacency[y][(jy - 1) % 4] == (v, (a + 1) % 3)
        and (jx - 1) % 2 == jy % 2,
        site,
    )
    over = (jx - 1) % 2 == 1
    w = Work(d)
    v2, z = w.new_id(), w.new_id()
    # z slots counterclockwise: right, up (towards v), left, down
    right, up, left, down = ((1, 2, 3, 0) if over else (0, 1, 2, 3))
    inner = {
        (v2, a): (x, (jx + 2) % 4),
        (v2, (a + 1) % 3): (y, (jy + 1) % 4),
        (v2, (a + 2) % 3): (z, up),
        (z, down): (v, (a + 2) % 3),
        (z, right): (x, (jx + 1) % 4),
        (z, left): (y, (jy + 2) % 4),
    }
    w.splice({v, x, y}, {v2: "V", z: "X"}, inner)
    return w.to_diagram()


def _apply_r4_up(d: Diagram, site: MoveSite) -> Diagram:
    v, k = site.anchor
    _check(_valid_node(d, v, "V") and 0 <= k < 3, site)
    z, t = d.adjacency[v][k]
    _check(_valid_node(d, z, "X"), site)
    over = (t + 1) % 2 == 1
    a = (k + 1) % 3
    w = Work(d)
    v2, x, y = w.new_id(), w.new_id(), w.new_id()
    jx = 0 if over else 1
    jy = 1 if over else 0
    inner = {
        (v2, a): (x, jx),
        (x, (jx - 1) % 4): (y, jy),
        (y, (jy - 1) % 4): (v2, (a + 1) % 3),
        (x, (jx + 1) % 4): (z, (t + 3) % 4),
        (x, (jx + 2) % 4): (v, a),
        (y, (jy + 1) % 4): (v, (a + 1) % 3),
        (y, (jy + 2) % 4): (z, (t + 1) % 4),
        (v2, k): (z, (t + 2) % 4),
    }
    w.splice({v, z}, {v2: "V", x: "X", y: "X"}, inner)
    return w.to_diagram()


def _apply_r5_down(d: Diagram, site: MoveSite) -> Diagram:
    v, a, x, j = site.anchor
    _check(
        _valid_node(d, v, "V")
        and _valid_node(d, x, "X")
        and d.adjacency[v][a] == (x, j)
        and d.adjacency[x][(j - 1) % 4] == (v, (a + 1) % 3),
        site,
    )
    w = Work(d)
    v2 = w.new_id()
    inner = {
        (v2, a): (x, (j + 1) % 4),
        (v2, (a + 1) % 3): (x, (j + 2) % 4),
        (v2, (a + 2) % 3): (v, (a + 2) % 3),
    }
    w.splice({v, x}, {v2: "V"}, inner)
    return w.to_diagram()


def _apply_r5_up(d: Diagram, site: MoveSite) -> Diagram:
    v, a = site.anchor
    _check(_valid_node(d, v, "V") and 0 <= a < 3, site)
    w = Work(d)
    v2, x = w.new_id(), w.new_id()
    j = site.variant % 2
    inner = {
        (v2, a): (x, j),
        (v2, (a + 1) % 3): (x, (j + 3) % 4),
        (x, (j + 1) % 4): (v, a),
        (x, (j + 2) % 4): (v, (a + 1) % 3),
        (v2, (a + 2) % 3): (v, (a + 2) % 3),
    }
    w.splice({v}, {v2: "V", x: "X"}, inner)
    return w.to_diagram()


_APPLY = {
    "R1-": _apply_r1_down,
    "R1+": _apply_r1_up,
    "R2-": _apply_r2_down,
    "R2+": _apply_r2_up,
    "R3": _apply_r3,
    "R4-": _apply_r4_down,
    "R4+": _apply_r4_up,
    "R5-": _apply_r5_down,
    "R5+": _apply_r5_up,
}


def apply_move(d: Diagram, site: MoveSite) -> Diagram:
    """Return the diagram obtained by performing ``site`` on ``d``.

    Raises:
        StaleSiteError: if the anchored pattern is absent from ``d``.
    """
    if site.kind == "FLYPE":
        from bondedknots import flype

        return flype.apply_flype(d, site)
    try:
        fn = _APPLY[site.kind]
    except KeyError:
        raise ValueError(f"unknown move kind {site.kind!r}") from None
    try:
        return fn(d, site)
    except (IndexError, KeyError) as exc:
        raise StaleSiteError(f"site {site.fingerprint} does not match the diagram") from exc


def neighbours(d: Diagram, kinds: Iterable[str]) -> Iterator[tuple[MoveSite, Diagram]]:
    for site in find_moves(d, kinds):
        yield site, apply_move(d, site)
