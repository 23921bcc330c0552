import random

import pytest
from hypothesis import given, settings, strategies as st

from vkh.diagram import (ArcUsageError, DiagramError, ParseError, closure,
                         connected_parts, is_nice, load_diagram,
                         non_alternating_resolutions, orientations,
                         oriented_state, parse_diagram, format_diagram)
from vkh.random_diagrams import random_link


def test_parse_roundtrip(v_trefoil):
    text = format_diagram(v_trefoil)
    again = parse_diagram(text)
    assert again == v_trefoil


def test_parse_rejects_bad_arity():
    with pytest.raises(ParseError):
        parse_diagram("tangle k=0\nC+ 1 2 3\n")


def test_parse_rejects_unknown_directive():
    with pytest.raises(ParseError):
        parse_diagram("tangle k=0\nX 1 2 3 4\n")


def test_validate_rejects_dangling_arc():
    with pytest.raises(ArcUsageError):
        parse_diagram("tangle k=0\nC+ 1 2 3 4\n").validate()


def test_counts(v_trefoil, trefoil):
    assert v_trefoil.n == 2 and v_trefoil.n_virtual == 1
    assert v_trefoil.n_plus == 2 and v_trefoil.n_minus == 0
    assert trefoil.n == 3 and trefoil.n_virtual == 0


def test_component_count(v_trefoil, trefoil, unknot):
    assert v_trefoil.component_count() == 1
    assert trefoil.component_count() == 1
    assert unknot.component_count() == 1


def test_orientation_count_matches_components(small_corpus):
    for d in small_corpus:
        assert len(orientations(d)) == 2 ** d.component_count()


def test_oriented_resolutions_are_distinct(small_corpus):
    # the map orientation -> (state, circle orientations) is injective
    for d in small_corpus:
        seen = {(oriented_state(d, rev),
                 tuple(sorted(rev.items()))) for rev in orientations(d)}
        assert len(seen) == 2 ** d.component_count()


def test_fig42_single_nonalt_state(fig42):
    states = non_alternating_resolutions(fig42)
    assert [s for s, _ in states] == [(0, 1, 1), (0, 1, 1)]


def test_unknot_nonalt(unknot):
    states = non_alternating_resolutions(unknot)
    assert [s for s, _ in states] == [(), ()]
    assert len(orientations(unknot)) == 2


def test_closure_of_tangle_is_closed(nonnice):
    for marker in ("star", "alt"):
        c = closure(nonnice, marker)
        assert c.k == 0
        c.validate()


def test_is_nice_classifications(nonnice, trefoil):
    assert is_nice(nonnice) == "not-nice"
    assert is_nice(trefoil) == "nice"
    internal = parse_diagram(
        "tangle k=2\nC+ 1 2 2 3\nV 4 5 5 4\nB 1\nB 3\n")
    parts = connected_parts(internal)
    assert sorted(p.fully_internal for p in parts) == [False, True]
    assert is_nice(internal) == "nice"


def test_boundary_needs_even_closure():
    d = parse_diagram("tangle k=2\nC+ 1 2 2 3\nB 1\nB 3\n")
    c = closure(d, "star")
    assert c.k == 0


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(min_value=0, max_value=10 ** 9))
def test_random_diagrams_always_validate(seed):
    d = random_link(random.Random(seed))
    d.validate()
    assert d.k == 0
    # every arc occurs exactly once as a head and once as a tail
    heads = [c.u_in for c in d.crossings] + [c.o_in for c in d.crossings] \
        + [v.a for v in d.virtuals] + [v.b for v in d.virtuals]
    tails = [c.u_out for c in d.crossings] + [c.o_out for c in d.crossings] \
        + [v.c for v in d.virtuals] + [v.d for v in d.virtuals]
    assert sorted(heads) == sorted(set(heads))
    assert sorted(heads + list(d.loops)) == sorted(tails + list(d.loops)) \
        == list(d.arcs())


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(min_value=0, max_value=10 ** 9))
def test_random_orientation_state_count(seed):
    d = random_link(random.Random(seed), max_crossings=4)
    assert len(non_alternating_resolutions(d)) \
        == 2 ** d.component_count()
