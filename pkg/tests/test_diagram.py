"""Diagram model: PD parsing, faces, canonical codes, mirrors, traced graphs."""

from __future__ import annotations

import re

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bondedknots.diagram import (
    Diagram,
    EmbeddingError,
    MalformedArcError,
    Multigraph,
    DomainError,
    PDParseError,
    UnencodableError,
    canonical_code,
    component_count,
    faces,
    mirror,
    parse_pd,
    perfect_matchings,
    singularity_number,
    underlying_graph,
    write_pd,
)

THETA = "V[0,1,2],V[0,2,1]"
HANDCUFF = "V[0,0,1],V[1,2,2]"


# -- independent helpers -----------------------------------------------------------


def _entries(pd: str) -> list[tuple[str, list[int]]]:
    return [(k, [int(x) for x in body.split(",")]) for k, body in re.findall(r"([VX])\[([^\]]*)\]", pd)]


def _trace_pd(pd: str) -> tuple[int, int, int]:
    """(vertices, edges, closed strands) by walking arc labels through crossings."""
    ents = _entries(pd)
    where: dict[int, list[tuple[int, int]]] = {}
    for i, (_, arcs) in enumerate(ents):
        for s, a in enumerate(arcs):
            where.setdefault(a, []).append((i, s))
    used = set()
    edges = 0
    for i, (k, arcs) in enumerate(ents):
        if k != "V":
            continue
        for s in range(3):
            if (i, s) in used:
                continue
            used.add((i, s))
            n, t = i, s
            while True:
                a = ents[n][1][t]
                n, t = next(p for p in where[a] if p != (n, t)) if where[a][0] != where[a][1] else (n, t)
                used.add((n, t))
                if ents[n][0] == "V":
                    break
                t = (t + 2) % 4
                used.add((n, t))
            edges += 1
    closed = 0
    for i, (k, _) in enumerate(ents):
        if k != "X":
            continue
        for s in range(4):
            if (i, s) in used:
                continue
            closed += 1
            n, t = i, s
            while (n, t) not in used:
                used.add((n, t))
                t2 = (t + 2) % 4
                used.add((n, t2))
                a = ents[n][1][t2]
                n, t = next(p for p in where[a] if p != (n, t2))
    return sum(1 for k, _ in ents if k == "V"), edges, closed


def _relabel(d: Diagram, perm: list[int], arc_map: dict[int, int], rots: list[int]) -> Diagram:
    """Reorder nodes, rename arcs and rotate slots (crossings by two slots only)."""
    nodes = []
    for n in perm:
        kind, arcs = d.nodes[n]
        r = rots[n] % 3 if kind == "V" else 2 * (rots[n] % 2)
        arcs = arcs[r:] + arcs[:r]
        nodes.append(f"{kind}[{','.join(str(arc_map[a]) for a in arcs)}]")
    return parse_pd(",".join(nodes))


# -- parse / write ------------------------------------------------------------------


def test_parse_theta_counts():
    d = parse_pd(THETA)
    assert (d.vertex_count, d.crossing_count, d.arc_count) == (2, 0, 3)


def test_parse_b31_counts(table_diagrams):
    d = table_diagrams["B(3,1)_1"]
    assert (d.vertex_count, d.crossing_count) == (2, 3)


def test_parse_malformed_arc():
    with pytest.raises(MalformedArcError):
        parse_pd("V[0,1,2],V[0,1,3]")


def test_parse_syntax_error_has_position():
    with pytest.raises(PDParseError) as err:
        parse_pd("V[0,1,2],Q[0,2,1]")
    assert err.value.position == 9


@pytest.mark.parametrize("pd", ["V[0,1,2],V[0,1,2]", "X[0,1,0,1]"])
def test_parse_rejects_nonplanar_rotation(pd):
    # both rotations only embed on the torus (V - E + F = 0)
    with pytest.raises(EmbeddingError):
        parse_pd(pd)


def test_parse_whitespace_and_sparse_labels():
    d = parse_pd(" V[10, 4 ,7] ,\n V[10,7,4] ")
    assert d.code == parse_pd(THETA).code


def test_write_pd_relabels():
    assert write_pd(parse_pd("V[5,9,7],V[5,7,9]")) == THETA


def test_write_pd_free_loops_unencodable():
    with pytest.raises(UnencodableError):
        write_pd(Diagram((), 1))


def test_round_trip_all_table_entries(table):
    for e in table:
        d = parse_pd(e["pd"])
        assert parse_pd(write_pd(d)).code == d.code, e["name"]


# -- faces ---------------------------------------------------------------------------


@pytest.mark.parametrize("pd,count", [(THETA, 3), (HANDCUFF, 3)])
def test_face_counts(pd, count):
    assert len(faces(parse_pd(pd))) == count


def test_free_loop_has_two_faces():
    assert len(faces(Diagram((), 1))) == 2


def test_faces_cover_every_dart_once(table_diagrams):
    for name, d in table_diagrams.items():
        darts = [e for f in faces(d) for e in f]
        assert sorted(darts) == sorted(d.endpoints()), name
        assert d.vertex_count + d.crossing_count - d.arc_count + len(faces(d)) == 2, name


# -- canonical code --------------------------------------------------------------------


def test_theta_and_handcuff_codes_differ():
    assert canonical_code(parse_pd(THETA)) != canonical_code(parse_pd(HANDCUFF))


def test_b51_2_and_3_codes_differ(table_diagrams):
    assert table_diagrams["B(5,1)_2"].code != table_diagrams["B(5,1)_3"].code


def test_all_table_codes_distinct(table_diagrams):
    codes = [d.code for d in table_diagrams.values()]
    assert len(set(codes)) == len(codes)


@st.composite
def relabelings(draw, diagrams):
    d = draw(st.sampled_from(diagrams))
    perm = draw(st.permutations(range(len(d.nodes))))
    labels = sorted({a for n in d.nodes for a in n.arcs})
    new = draw(st.lists(st.integers(0, 10_000), min_size=len(labels), max_size=len(labels), unique=True))
    rots = draw(st.lists(st.integers(0, 5), min_size=len(d.nodes), max_size=len(d.nodes)))
    return d, _relabel(d, list(perm), dict(zip(labels, new)), rots)


_TABLE = None


def _table_list():
    global _TABLE
    if _TABLE is None:
        from bondedknots.pipeline import reference_table

        _TABLE = [parse_pd(e["pd"]) for e in reference_table()]
    return _TABLE


@settings(max_examples=1200)
@given(relabelings(_table_list()))
def test_code_invariant_under_relabeling(pair):
    d, e = pair
    assert e.code == d.code


def test_code_ignores_reflection_only_through_mirror(table_diagrams):
    d = table_diagrams["B(3,1)_1"]
    assert mirror(d).code != d.code


# -- mirror ------------------------------------------------------------------------------


def test_mirror_involution(table_diagrams):
    for d in table_diagrams.values():
        assert mirror(mirror(d)).code == d.code


def test_mirror_of_theta_is_theta():
    d = parse_pd(THETA)
    assert mirror(d).code == d.code


def test_mirror_keeps_under_convention():
    d = mirror(parse_pd("V[0,1,2],V[0,3,4],X[1,4,5,6],X[3,2,6,5]"))
    assert [n.arcs for n in d.nodes if n.kind == "X"] == [(4, 5, 6, 1), (2, 6, 5, 3)]


def test_component_count_mirror(table_diagrams):
    for d in table_diagrams.values():
        assert component_count(mirror(d)) == component_count(d)


# -- underlying graph, components, matchings ---------------------------------------------


def test_underlying_graph_k4(table_diagrams):
    g = underlying_graph(table_diagrams["B(0,2)_1"])
    assert g.vertex_count == 4 and len(g.edges) == 6 and not g.loops()
    assert sorted(tuple(sorted(e)) for e in g.edges) == [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]


def test_underlying_graph_handcuff(table_diagrams):
    g = underlying_graph(table_diagrams["H(0,1)_1"])
    assert g.vertex_count == 2 and len(g.loops()) == 2 and len(g.edges) == 3


def test_underlying_graph_l41(by_name, table_diagrams):
    # [DERIVED] independent arc-label walk over the listed PD
    assert _trace_pd(by_name["L(4,1)_1"]["pd"]) == (2, 3, 1)
    g = underlying_graph(table_diagrams["L(4,1)_1"])
    assert (g.vertex_count, len(g.edges), g.free_loops) == (2, 3, 1)


def test_underlying_graph_matches_independent_trace(table):
    for e in table:
        g = underlying_graph(parse_pd(e["pd"]))
        assert (g.vertex_count, len(g.edges), g.free_loops) == _trace_pd(e["pd"]), e["name"]
        assert all(x == 3 for x in g.degrees())


@pytest.mark.parametrize("name,count", [("L(4,1)_1", 2), ("H(4,1)_1", 1), ("B(0,1)_1", 1)])
def test_component_count(table_diagrams, name, count):
    assert component_count(table_diagrams[name]) == count


def test_perfect_matchings_theta():
    assert len(perfect_matchings(Multigraph(2, ((0, 1), (0, 1), (0, 1))))) == 3


def test_perfect_matchings_handcuff():
    assert perfect_matchings(Multigraph(2, ((0, 0), (0, 1), (1, 1)))) == [(1,)]


def test_perfect_matchings_tripod_empty():
    g = Multigraph(4, ((0, 1), (0, 2), (0, 3), (1, 1), (2, 2), (3, 3)))
    assert perfect_matchings(g) == []


def test_perfect_matchings_degree_error():
    with pytest.raises(DomainError):
        perfect_matchings(Multigraph(2, ((0, 1),)))


@pytest.mark.parametrize("name,s", [("B(0,1)_1", 2), ("B(3,1)_1", 5), ("H(5,1)_1", 7)])
def test_singularity_number(table_diagrams, name, s):
    assert singularity_number(table_diagrams[name]) == s


def test_slot_count_identity(table_diagrams):
    for d in table_diagrams.values():
        assert 3 * d.vertex_count + 4 * d.crossing_count == 2 * d.arc_count


def test_json_round_trip(table_diagrams):
    for d in table_diagrams.values():
        assert Diagram.from_json(d.to_json()).code == d.code
