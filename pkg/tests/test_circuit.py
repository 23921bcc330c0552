import random

import pytest

from vkh.circuit import (ArityError, check_nt_morphism, decompose_diagram,
                         glue_complexes, load_circuit, operate_diagrams,
                         parse_circuit)
from vkh.cube import build_geometric_complex
from vkh.diagram import DiagramError, ParseError, load_diagram
from vkh.random_diagrams import random_link
from vkh.tqft import apply_tqft, homology, parse_ring

Q = parse_ring("Q")


def kh(d, t):
    return homology(apply_tqft(build_geometric_complex(d), t), Q).nonzero()


def test_parse_circuit_rejects_classical_crossings():
    with pytest.raises(ParseError):
        parse_circuit("circuit m=0 outer=0\nC+ 1 2 3 4\n")


def test_parse_circuit_checks_wire_usage():
    with pytest.raises(DiagramError):
        parse_circuit("circuit m=1 outer=1\nhole 0 1\nB 1\nO 1\n")


def test_parse_circuit_checks_outer_count():
    with pytest.raises(ParseError):
        parse_circuit("circuit m=0 outer=2\nB 1\n")


def test_arity_mismatch(data_dir):
    cd = load_circuit(data_dir / "vtrefoil_pair.vcd")
    x = load_diagram(data_dir / "x_plus.vtd")
    with pytest.raises(ArityError):
        operate_diagrams(cd, [x])


def test_identity_circuit(data_dir):
    cd = load_circuit(data_dir / "identity4.vcd")
    x = load_diagram(data_dir / "x_plus.vtd")
    out, rep = operate_diagrams(cd, [x])
    assert out.n == 1 and out.k == 4
    assert out.crossings[0].sign == 1
    assert set(rep.strings.values()) <= {"green"}


def test_v_trefoil_assembly(data_dir, v_trefoil):
    cd = load_circuit(data_dir / "vtrefoil_pair.vcd")
    x = load_diagram(data_dir / "x_plus.vtd")
    out, _rep = operate_diagrams(cd, [x, x])
    for t in (0, 1):
        assert kh(out, t) == kh(v_trefoil, t)
    res = check_nt_morphism(cd, [x, x])
    assert res["verdict"] == "EQUAL"
    assert res["bolts"] == ()


def test_decompose_and_reglue(v_trefoil, fig42):
    for d in (v_trefoil, fig42):
        cd, inputs = decompose_diagram(d)
        out, _rep = operate_diagrams(cd, inputs)
        for t in (0, 1):
            assert kh(out, t) == kh(d, t)
        assert check_nt_morphism(cd, inputs)["verdict"] == "EQUAL"


def test_decompose_random(small_corpus):
    for d in small_corpus[:8]:
        cd, inputs = decompose_diagram(d)
        res = check_nt_morphism(cd, inputs)
        assert res["verdict"] == "EQUAL", d.name
        assert res["bolts"] == ()


def test_nonnice_closures_disagree(data_dir, nonnice):
    gc = build_geometric_complex(nonnice)
    results = {}
    for name in ("caps_star", "caps_alt"):
        cd = load_circuit(data_dir / f"{name}.vcd")
        glued, rep = glue_complexes(cd, [gc])
        direct, _ = operate_diagrams(cd, [nonnice])
        results[name] = {
            "bolts": rep.bolts,
            "glued": {t: homology(apply_tqft(glued, t), Q).nonzero()
                      for t in (0, 1)},
            "direct": {t: kh(direct, t) for t in (0, 1)},
        }
    # one closure matches the complex's own decorations, the other is
    # detected through saddles forced to zero
    assert results["caps_star"]["bolts"] == ()
    assert results["caps_star"]["glued"] == results["caps_star"]["direct"]
    assert results["caps_alt"]["bolts"] != ()
    assert results["caps_alt"]["glued"] != results["caps_alt"]["direct"]


def test_nt_morphism_refuses_nonnice(data_dir, nonnice):
    cd = load_circuit(data_dir / "caps_star.vcd")
    with pytest.raises(DiagramError):
        check_nt_morphism(cd, [nonnice])


def test_orientation_reversal_cap():
    # capping a strand back onto itself forces a red dot but still
    # yields a valid diagram
    from vkh.diagram import parse_diagram
    d = parse_diagram("tangle k=4\nC+ 1 2 3 4\nB 1\nB 2\nB 3\nB 4\n")
    cd = parse_circuit("circuit m=1 outer=0\nhole 0 1 1 2 2\n")
    out, rep = operate_diagrams(cd, [d])
    out.validate()
    assert "red" in rep.strings.values()
