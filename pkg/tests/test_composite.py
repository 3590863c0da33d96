"""Connected sums, type classification and chirality."""

from __future__ import annotations

import pytest

from bondedknots.composite import (
    detect_composite,
    detect_order3,
    factor_kind,
    find_cuts,
    order3_factors,
)
from bondedknots.diagram import Diagram, mirror, parse_pd
from bondedknots.pipeline import chirality, classify_type
from bondedknots.poly import canon_poly, poly_mirror
from bondedknots.yamada import yamada

THETA = "V[0,1,2],V[0,2,1]"
HANDCUFF = "V[0,0,1],V[1,2,2]"
TREFOIL = "X[1,5,2,4],X[3,1,4,6],X[5,3,6,2]"
# trefoil (arcs shifted by 10) spliced into theta arc 0
THETA_TREFOIL = "V[0,1,2],V[11,2,1],X[0,15,12,14],X[13,11,14,16],X[15,13,16,12]"
# two handcuffs joined by splicing their first loops
HANDCUFF_CHAIN = "V[0,10,1],V[1,2,2],V[10,0,11],V[11,12,12]"


def _up_to_mirror(p):
    return {p, canon_poly(poly_mirror(p))}


def test_theta_prime():
    assert detect_composite(parse_pd(THETA)).kind == "prime"


def test_handcuff_prime_despite_bridge():
    d = parse_pd(HANDCUFF)
    assert find_cuts(d, 1)
    assert detect_composite(d).kind == "prime"


def test_theta_trefoil_order2():
    info = detect_composite(parse_pd(THETA_TREFOIL))
    assert info.kind == "order2" and info.is_composite
    kinds = sorted(factor_kind(f) for f in info.factors)
    assert kinds == ["other", "theta0"]
    knot = next(f for f in info.factors if factor_kind(f) == "other")
    # [DERIVED] the knotted factor has the state-sum value of the standard trefoil
    assert yamada(knot) in _up_to_mirror(yamada(parse_pd(TREFOIL)))


def test_handcuff_chain_is_composite():
    info = detect_composite(parse_pd(HANDCUFF_CHAIN))
    assert info.kind == "order2"
    assert [factor_kind(f) for f in info.factors] == ["H0", "H0"]


# 2-cuts through bridge edges of the traced graph
BRIDGE_CASES = [
    # tripod, and two drawings where a bar crosses a loop: two order-1 sums in disguise
    ("V[0,0,1],V[1,2,3],V[2,4,4],V[3,5,5]", "prime"),
    ("V[0,0,1],V[1,2,3],V[2,4,5],X[3,5,6,4],V[6,7,7]", "prime"),
    ("V[0,0,1],V[1,2,3],X[2,4,5,6],V[3,6,4],V[5,7,7]", "prime"),
    # clasped lollipops hung from a doubled edge: trivial theta plus a Hopf handcuff
    ("V[0,1,2],V[0,3,1],V[2,4,5],V[3,6,7],X[4,7,8,9],X[6,5,9,8]", "order2"),
    # trefoil tied in a handcuff bar slides off over a loop
    ("V[0,0,1],V[11,2,2],X[1,15,12,14],X[13,11,14,16],X[15,13,16,12]", "prime"),
    # Hopf handcuff with a circle around the bar, which cannot slide off
    ("V[0,1,2],X[0,3,4,5],X[1,6,7,8],X[3,2,9,4],V[5,9,10],X[6,10,8,7]", "order2"),
]


@pytest.mark.parametrize("pd,kind", BRIDGE_CASES)
def test_bridge_cuts(pd, kind):
    assert detect_composite(parse_pd(pd)).kind == kind


def test_tripod_drawings_agree():
    # [DERIVED] the crossing drawings reduce to the tripod, so verdicts must agree
    from bondedknots.search import SearchBudget, simplify

    tripod = parse_pd(BRIDGE_CASES[0][0])
    for pd, _ in BRIDGE_CASES[1:3]:
        assert simplify(parse_pd(pd), SearchBudget(max_up=1)).code == tripod.code


def test_disjoint_union():
    d = parse_pd(THETA)
    assert detect_composite(Diagram(d.nodes, 1)).kind == "disjoint"


def test_factor_kinds():
    assert factor_kind(Diagram((), 1)) == "O"
    assert factor_kind(parse_pd(THETA)) == "theta0"
    assert factor_kind(parse_pd(HANDCUFF)) == "H0"
    assert factor_kind(parse_pd(TREFOIL)) == "other"


def test_table_entries_prime(table, table_diagrams):
    for e in table:
        name = e["name"].split("#")[0]
        assert detect_composite(table_diagrams[name]).kind == "prime", name


def test_order3_flags_match_table(table, table_diagrams):
    # [PAPER] exactly the entries marked #3 are order-3 sums
    for e in table:
        name = e["name"].split("#")[0]
        assert detect_order3(table_diagrams[name]) == e["name"].endswith("#3"), name
    assert sum(e["name"].endswith("#3") for e in table) == 7


def test_h51_order3_factors(table_diagrams):
    fa, fb = order3_factors(table_diagrams["H(5,1)_1"])
    got = sorted(str(yamada(f)) for f in (fa, fb))
    b31 = _up_to_mirror(yamada(table_diagrams["B(3,1)_1"]))
    h21 = _up_to_mirror(yamada(table_diagrams["H(2,1)_1"]))
    assert any(str(p) in got for p in b31)
    assert any(str(p) in got for p in h21)


def test_b31_not_order3(table_diagrams):
    assert not detect_order3(table_diagrams["B(3,1)_1"])


def test_cut_sides_partition_nodes(table_diagrams):
    d = table_diagrams["H(2,2)_1"]
    for k in (1, 2, 3):
        for cut in find_cuts(d, k):
            assert cut.order == k
            assert cut.side_a | cut.side_b == frozenset(range(len(d.nodes)))
            assert not cut.side_a & cut.side_b


# -- classify_type ------------------------------------------------------------------------


@pytest.mark.parametrize("name,cls", [("H(2,1)_1", "H"), ("L(4,1)_1", "L"), ("B(0,2)_1", "B"), ("B(3,1)_1", "B")])
def test_classify_type(table_diagrams, name, cls):
    assert classify_type(table_diagrams[name]) == cls


# -- chirality --------------------------------------------------------------------------------


@pytest.mark.parametrize(
    "name,want",
    [("B(0,1)_1", "achiral"), ("B(3,1)_1", "chiral"), ("B(2,2)_1", "achiral"), ("H(2,1)_1", "achiral")],
)
def test_chirality_examples(table_diagrams, name, want):
    assert chirality(table_diagrams[name])[0] == want


def test_chirality_basis_polynomial(table_diagrams):
    assert chirality(table_diagrams["B(3,1)_1"]) == ("chiral", "polynomial")


def test_mirror_of_chiral_differs(table_diagrams):
    d = table_diagrams["B(3,1)_1"]
    assert yamada(mirror(d)) != yamada(d)
