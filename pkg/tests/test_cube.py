import itertools
import random

import pytest

from vkh.cube import (FaceConsistencyError, build_geometric_complex,
                      compare_closures, spanning_tree_isomorphism,
                      verify_faces)
from vkh.diagram import parse_diagram
from vkh.random_diagrams import random_link


def test_cube_shape(v_trefoil):
    gc = build_geometric_complex(v_trefoil)
    assert len(gc.resolutions) == 4
    assert len(gc.saddles) == 4
    assert sorted(gc.states_by_degree()) == [0, 1, 2]


def test_faces_anticommute_on_anchors(v_trefoil, trefoil, fig42, braid3):
    for d in (v_trefoil, trefoil, fig42, braid3):
        gc = build_geometric_complex(d)
        assert all(ok for _k, ok in verify_faces(gc))


def test_faces_anticommute_on_corpus(small_corpus):
    for d in small_corpus:
        gc = build_geometric_complex(d)
        assert all(ok for _k, ok in verify_faces(gc))


def test_corrupted_sign_fails_verification(trefoil):
    gc = build_geometric_complex(trefoil)
    key = next(k for k in sorted(gc.saddles)
               if gc.saddles[k].indicator != 0)
    gc.saddles[key].sign *= -1
    verdicts = verify_faces(gc)
    assert not all(ok for _k, ok in verdicts)
    with pytest.raises(FaceConsistencyError):
        verify_faces(gc, raise_on_fail=True)


def test_marker_choice_gives_isomorphic_complex(v_trefoil, fig42):
    for d in (v_trefoil, fig42):
        c1 = build_geometric_complex(d, "star")
        c2 = build_geometric_complex(d, "alt")
        assert spanning_tree_isomorphism(c1, c2) is not None


def test_xmarker_change_gives_isomorphic_complex(v_trefoil):
    c1 = build_geometric_complex(v_trefoil)
    c2 = build_geometric_complex(
        v_trefoil, xmarkers={0: "right", 1: "bottom"})
    assert spanning_tree_isomorphism(c1, c2) is not None


def test_circle_flip_preserves_homology(fig42):
    from vkh.tqft import apply_tqft, homology, parse_ring
    ring = parse_ring("Q")
    c1 = build_geometric_complex(fig42)
    flips = {s: {0} for s in itertools.product((0, 1), repeat=3)}
    c2 = build_geometric_complex(fig42, flips=flips)
    assert all(ok for _k, ok in verify_faces(c2))
    for t in (0, 1):
        assert homology(apply_tqft(c1, t), ring).nonzero() \
            == homology(apply_tqft(c2, t), ring).nonzero()


def test_closures_of_nonnice_tangle_differ(nonnice):
    cmpres = compare_closures(nonnice)
    assert not cmpres.equivalent
    assert cmpres.witness is not None


def test_closures_of_classical_tangle_agree():
    d = parse_diagram("tangle k=2\nC+ 1 3 2 4\nC+ 4 2 3 5\nB 1\nB 5\n")
    assert compare_closures(d).equivalent


def test_forced_zero_silences_saddle(v_trefoil):
    plain = build_geometric_complex(v_trefoil)
    key = next(k for k in sorted(plain.saddles)
               if plain.saddles[k].indicator != 0)
    forced = build_geometric_complex(v_trefoil, forced_zero={key})
    assert forced.saddles[key].indicator == 0
    assert plain.saddles[key].indicator != 0


def test_seeded_diagrams_have_consistent_cubes():
    for seed in range(6):
        d = random_link(random.Random(900 + seed), max_crossings=5)
        gc = build_geometric_complex(d)
        assert all(ok for _k, ok in verify_faces(gc))
