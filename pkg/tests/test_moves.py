import random

import pytest

from vkh.cube import build_geometric_complex
from vkh.diagram import parse_diagram
from vkh.moves import (MOVE_TYPES, MoveInapplicable, apply_move,
                       insert_kink, insert_poke, insert_virtual_kink,
                       insert_virtual_poke, remove_virtual_poke,
                       removable_virtual_pokes, slide_triangle,
                       triangle_sites)
from vkh.tqft import apply_tqft, graded_euler, homology, parse_ring

Q = parse_ring("Q")


def kh(d, t):
    return homology(apply_tqft(build_geometric_complex(d), t), Q).nonzero()


def profiles(d):
    return {t: kh(d, t) for t in (0, 1)}


def test_kink_insertion_on_unknot(unknot):
    d = unknot
    for sign in (1, -1):
        for over_first in (False, True):
            d2 = insert_kink(d, d.arcs()[0], sign=sign,
                             over_first=over_first)
            d2.validate()
            assert d2.n == 1
            assert profiles(d2) == profiles(d)


def test_poke_insertion(v_trefoil):
    arcs = v_trefoil.arcs()
    d2 = insert_poke(v_trefoil, arcs[0], arcs[1])
    d2.validate()
    assert d2.n == v_trefoil.n + 2
    assert d2.n_plus == v_trefoil.n_plus + 1
    assert profiles(d2) == profiles(v_trefoil)


def test_braid_has_slideable_triangle(braid3):
    sites = triangle_sites(braid3)
    assert len(sites) == 1
    before = profiles(braid3)
    after_d = slide_triangle(braid3, sites[0])
    after_d.validate()
    assert profiles(after_d) == before
    assert graded_euler(apply_tqft(build_geometric_complex(after_d), 0)) \
        == graded_euler(apply_tqft(build_geometric_complex(braid3), 0))


def test_trefoil_triangle_is_not_slideable(trefoil):
    # the central triangle alternates over/under, so the move is
    # forbidden
    assert triangle_sites(trefoil) == []
    with pytest.raises(MoveInapplicable):
        apply_move(trefoil, "rm3", random.Random(0))


def test_virtual_poke_roundtrip(trefoil):
    arcs = trefoil.arcs()
    d2 = insert_virtual_poke(trefoil, arcs[0], arcs[1])
    d2.validate()
    assert d2.n_virtual == 2
    pokes = removable_virtual_pokes(d2)
    assert pokes
    d3 = remove_virtual_poke(d2, pokes[0])
    assert d3.n_virtual == 0
    assert profiles(d3) == profiles(trefoil)


def test_virtual_kink(v_trefoil):
    d2 = insert_virtual_kink(v_trefoil, v_trefoil.arcs()[0])
    d2.validate()
    assert d2.n_virtual == v_trefoil.n_virtual + 1
    assert profiles(d2) == profiles(v_trefoil)


@pytest.mark.parametrize("kind", MOVE_TYPES)
def test_each_move_preserves_homology(kind, v_trefoil, fig42, braid3):
    for d in (v_trefoil, fig42, braid3):
        before = profiles(d)
        hits = 0
        for seed in range(4):
            try:
                d2 = apply_move(d, kind, random.Random(seed))
            except MoveInapplicable:
                continue
            hits += 1
            d2.validate()
            assert profiles(d2) == before, (d.name, kind, seed)
        if kind != "rm3":
            assert hits > 0, (d.name, kind)


def test_rm3_applies_on_braid(braid3):
    d2 = apply_move(braid3, "rm3", random.Random(1))
    assert profiles(d2) == profiles(braid3)


def test_moves_compose(v_trefoil):
    rng = random.Random(5)
    d = v_trefoil
    before = profiles(d)
    applied = 0
    while applied < 5:
        try:
            d = apply_move(d, rng.choice(MOVE_TYPES), rng)
        except MoveInapplicable:
            continue
        applied += 1
    assert profiles(d) == before
