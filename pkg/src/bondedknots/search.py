"""Budgeted searches in the Reidemeister move graph.

States are stored as canonical codes and rebuilt with
:func:`~bondedknots.diagram.from_code`, so every site fingerprint refers to
the canonical labelling and results never depend on input labels.

``max_up`` bounds the crossing count of explored states by the crossing
count of the starting diagram plus ``max_up``. Within that ceiling the
explored set is the connected component of the start in the move graph (or
a breadth-first prefix of it when ``max_states`` runs out).
"""

from __future__ import annotations

import hashlib
from collections.abc import Callable, Hashable, Sequence
from dataclasses import dataclass, field

from bondedknots.diagram import Diagram, code_crossing_count, from_code
from bondedknots.moves import DECREASING, DELTA, INCREASING, NEUTRAL, apply_move, find_moves

__all__ = [
    "SearchBudget",
    "SimplifyResult",
    "Partition",
    "SoundnessError",
    "greedy_decrease",
    "simplify",
    "simplify_report",
    "reduce_equivalent",
    "code_hash",
]


@dataclass(frozen=True)
class SearchBudget:
    """Limits for a move-space search.

    Attributes:
        max_up: allowed excess of crossings over the starting diagram.
        max_states: cap on distinct states visited per search.
        max_crossings: absolute crossing ceiling (``None`` for no cap).
        flype: also use flypes.
        kinks: allow R1+ among the increasing moves.
    """

    max_up: int = 0
    max_states: int = 20000
    max_crossings: int | None = None
    flype: bool = False
    kinks: bool = True

    def __post_init__(self) -> None:
        if self.max_up < 0 or self.max_states < 1 or (self.max_crossings is not None and self.max_crossings < 0):
            raise ValueError("budget fields must be nonnegative")

    def kinds(self) -> tuple[str, ...]:
        up = INCREASING if self.kinks else tuple(k for k in INCREASING if k != "R1+")
        extra = ("FLYPE",) if self.flype else ()
        return DECREASING + NEUTRAL + extra + (up if self.max_up > 0 else ())

    def ceiling(self, crossings: int) -> int:
        c = crossings + self.max_up
        return c if self.max_crossings is None else min(c, self.max_crossings)


class SoundnessError(AssertionError):
    """Two diagrams with different invariants were found equivalent."""


def code_hash(code: bytes) -> str:
    return hashlib.sha1(code).hexdigest()[:16]


def _canonical(d: Diagram) -> Diagram:
    return from_code(d.code, d.name)


def greedy_decrease(d: Diagram, trace: list[str] | None = None) -> Diagram:
    """Apply the first decreasing move until none is left."""
    d = _canonical(d)
    while True:
        sites = find_moves(d, DECREASING)
        if not sites:
            return d
        site = sites[0]
        d = _canonical(apply_move(d, site))
        if trace is not None:
            trace.append(f"{site.kind}\t{site.fingerprint}\t{code_hash(d.code)}")


@dataclass
class _Explorer:
    """Breadth-first exploration of one move-graph component below a ceiling."""

    ceiling: int
    kinds: tuple[str, ...]
    max_states: int
    parent: dict[bytes, tuple[bytes, str] | None] = field(default_factory=dict)
    frontier: list[bytes] = field(default_factory=list)
    exhausted: bool = False

    def seed(self, code: bytes) -> None:
        if code not in self.parent:
            self.parent[code] = None
            self.frontier.append(code)

    @property
    def done(self) -> bool:
        return not self.frontier or self.exhausted

    def step(self) -> list[bytes]:
        """Expand the current level; return newly found codes in discovery order."""
        new: list[bytes] = []
        # fewest crossings first, so a state cap cuts off the high states
        for code in sorted(self.frontier, key=_state_key):
            d = from_code(code)
            c = d.crossing_count
            kinds = tuple(k for k in self.kinds if c + DELTA[k] <= self.ceiling)
            for site in find_moves(d, kinds):
                nxt = apply_move(d, site).code
                if nxt in self.parent:
                    continue
                if len(self.parent) >= self.max_states:
                    self.exhausted = True
                    self.frontier = []
                    return new
                self.parent[nxt] = (code, site.fingerprint)
                new.append(nxt)
        self.frontier = new
        return new

    def absorb(self, other: _Explorer) -> None:
        for code, p in other.parent.items():
            if code not in self.parent:
                self.parent[code] = p
                if code in other.frontier:
                    self.frontier.append(code)
        self.exhausted = self.exhausted or other.exhausted

    def best(self) -> bytes:
        return min(self.parent, key=_state_key)

    def path(self, code: bytes) -> list[str]:
        lines = []
        while self.parent[code] is not None:
            prev, fp = self.parent[code]
            lines.append(f"{fp.split(':', 1)[0]}\t{fp}\t{code_hash(code)}")
            code = prev
        return lines[::-1]


def _state_key(code: bytes) -> tuple[int, bytes]:
    return (code_crossing_count(code), code)


@dataclass(frozen=True)
class SimplifyResult:
    diagram: Diagram
    exhausted: bool
    states: int
    trace: tuple[str, ...]


def simplify_report(d: Diagram, budget: SearchBudget = SearchBudget()) -> SimplifyResult:
    """Greedy descent, then the minimal state of the budgeted component.

    The trace lists one move per line: kind, site fingerprint (relative to
    the canonical labelling of the state it was applied to) and a hash of the
    resulting canonical code.
    """
    trace: list[str] = []
    start = greedy_decrease(d, trace)
    states = 0
    while True:
        ex = _Explorer(budget.ceiling(start.crossing_count), budget.kinds(), budget.max_states)
        ex.seed(start.code)
        while not ex.done:
            ex.step()
        states += len(ex.parent)
        trace.extend(ex.path(ex.best()))
        # the best state may still admit decreasing moves it never expanded
        best = greedy_decrease(from_code(ex.best()), trace)
        if best.crossing_count >= start.crossing_count:
            break
        # lower start, lower ceiling: search again from there
        start = best
    return SimplifyResult(from_code(best.code, d.name), ex.exhausted, states, tuple(trace))


def simplify(d: Diagram, budget: SearchBudget = SearchBudget()) -> Diagram:
    """Minimal (crossings, canonical code) diagram reachable within ``budget``."""
    return simplify_report(d, budget).diagram


@dataclass(frozen=True)
class Partition:
    """Equivalence classes of input indices and their minimal representatives."""

    classes: tuple[tuple[int, ...], ...]
    representatives: tuple[Diagram, ...]
    exhausted: bool
    states: int

    def class_of(self, i: int) -> int:
        for k, members in enumerate(self.classes):
            if i in members:
                return k
        raise KeyError(i)


class _DSU:
    def __init__(self, n: int) -> None:
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> int:
        a, b = self.find(a), self.find(b)
        if a == b:
            return a
        if b < a:
            a, b = b, a
        self.parent[b] = a
        return a


def reduce_equivalent(
    ds: Sequence[Diagram],
    budget: SearchBudget = SearchBudget(),
    keys: Sequence[Hashable] | None = None,
    progress: Callable[[int, int], None] | None = None,
) -> Partition:
    """Jointly explore the move spaces of ``ds`` and merge intersecting ones.

    All explorations advance one breadth-first level per round; two inputs
    are merged as soon as a canonical code is reached from both. Explorations
    of merged inputs with the same ceiling describe the same component and are
    fused. The search stops when a single class remains or every exploration
    is complete or out of budget.

    Args:
        ds: diagrams to partition.
        budget: per-exploration limits.
        keys: optional invariants; merging inputs with different keys raises
            :class:`SoundnessError`.
        progress: called with ``(round, number_of_classes)`` after each round.
    """
    n = len(ds)
    dsu = _DSU(n)
    kinds = budget.kinds()
    owner: dict[bytes, int] = {}
    # explorer per (class root, ceiling)
    explorers: dict[tuple[int, int], _Explorer] = {}
    starts = [_canonical(d) for d in ds]

    def merge(i: int, j: int) -> None:
        ri, rj = dsu.find(i), dsu.find(j)
        if ri == rj:
            return
        if keys is not None and keys[i] != keys[j]:
            raise SoundnessError(f"inputs {i} and {j} meet in the move space but have different invariants")
        root = dsu.union(ri, rj)
        other = rj if root == ri else ri
        for (r, ceil) in [k for k in explorers if k[0] == other]:
            ex = explorers.pop((r, ceil))
            if (root, ceil) in explorers:
                explorers[(root, ceil)].absorb(ex)
            else:
                explorers[(root, ceil)] = ex

    for i, d in enumerate(starts):
        code = d.code
        if code in owner:
            merge(owner[code], i)
            continue
        owner[code] = i
        key = (i, budget.ceiling(d.crossing_count))
        root_key = (dsu.find(i), key[1])
        ex = explorers.get(root_key)
        if ex is None:
            ex = explorers[root_key] = _Explorer(key[1], kinds, budget.max_states)
        ex.seed(code)

    def n_classes() -> int:
        return len({dsu.find(i) for i in range(n)})

    rnd = 0
    while n_classes() > 1:
        active = sorted(k for k, ex in explorers.items() if not ex.done)
        if not active:
            break
        rnd += 1
        for k in active:
            if k not in explorers:
                continue
            ex = explorers[k]
            for code in ex.step():
                o = owner.get(code)
                if o is None:
                    owner[code] = k[0]
                elif dsu.find(o) != dsu.find(k[0]):
                    merge(o, k[0])
                    if n_classes() == 1:
                        break
            if n_classes() == 1:
                break
        if progress is not None:
            progress(rnd, n_classes())

    def collect() -> list[tuple[int, ...]]:
        groups: dict[int, list[int]] = {}
        for i in range(n):
            groups.setdefault(dsu.find(i), []).append(i)
        return sorted((tuple(g) for g in groups.values()), key=lambda g: g[0])

    best_of: dict[int, Diagram] = {}
    for g in collect():
        codes = [starts[i].code for i in g]
        root = dsu.find(g[0])
        for (r, _), ex in explorers.items():
            if r == root:
                codes.extend(ex.parent)
        best = min(set(codes), key=_state_key)
        # an unexpanded best state can still descend
        best_of[g[0]] = greedy_decrease(from_code(best))
    # classes whose descended minima coincide are the same class
    seen: dict[bytes, int] = {}
    for first, rep in best_of.items():
        if rep.code in seen:
            merge(seen[rep.code], first)
        else:
            seen[rep.code] = first
    classes = collect()
    reps = [min((best_of[i] for i in g if i in best_of), key=lambda d: _state_key(d.code)) for g in classes]
    exhausted = any(ex.exhausted for ex in explorers.values())
    states = sum(len(ex.parent) for ex in explorers.values())
    return Partition(tuple(classes), tuple(reps), exhausted, states)
