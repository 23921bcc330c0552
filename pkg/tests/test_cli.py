import json

from click.testing import CliRunner

from vkh.cli import main


def run(*args):
    return CliRunner().invoke(main, [str(a) for a in args])


def test_homology_text(data_dir):
    res = run("homology", data_dir / "v_trefoil.vtd", "--ring", "Q",
              "--t", "1")
    assert res.exit_code == 0
    assert "H^0: rank 2" in res.output


def test_homology_json(data_dir):
    res = run("homology", data_dir / "trefoil.vtd", "--ring", "Z",
              "--t", "0", "--json")
    assert res.exit_code == 0
    payload = json.loads(res.output)
    assert payload["degrees"]["3"] == {"rank": 1, "torsion": [2]}


def test_homology_deterministic(data_dir):
    outs = {run("homology", data_dir / "fig42.vtd", "--json").output
            for _ in range(3)}
    assert len(outs) == 1


def test_parse_error_exit_code(tmp_path):
    bad = tmp_path / "bad.vtd"
    bad.write_text("tangle k=0\nC+ 1 2 3\n")
    res = run("homology", bad)
    assert res.exit_code == 2


def test_tangle_without_close_flag(data_dir):
    res = run("homology", data_dir / "nonnice.vtd")
    assert res.exit_code == 3
    res = run("homology", data_dir / "nonnice.vtd", "--close", "star")
    assert res.exit_code == 0


def test_verify(data_dir):
    res = run("verify", data_dir / "fig42.vtd")
    assert res.exit_code == 0
    assert "PASS" in res.output


def test_glue_arity_exit_code(data_dir):
    res = run("glue", data_dir / "vtrefoil_pair.vcd",
              data_dir / "x_plus.vtd")
    assert res.exit_code == 4


def test_glue_equal(data_dir):
    res = run("glue", data_dir / "vtrefoil_pair.vcd",
              data_dir / "x_plus.vtd", data_dir / "x_plus.vtd", "--json")
    assert res.exit_code == 0
    payload = json.loads(res.output)
    assert payload["nt"]["verdict"] == "EQUAL"
    assert payload["homology"]["degrees"]["0"]["rank"] == 2


def test_glue_strict_chain_detects_closure_dependence(data_dir):
    res = run("glue", data_dir / "caps_alt.vcd", data_dir / "nonnice.vtd",
              "--strict-chain")
    assert res.exit_code == 3


def test_invariance(data_dir):
    res = run("invariance", data_dir / "v_trefoil.vtd", "--moves", "4",
              "--seed", "3")
    assert res.exit_code == 0
    assert "seed=3" in res.output
    assert "PASS" in res.output


def test_invariance_deterministic(data_dir):
    a = run("invariance", data_dir / "fig42.vtd", "--moves", "3",
            "--seed", "11").output
    b = run("invariance", data_dir / "fig42.vtd", "--moves", "3",
            "--seed", "11").output
    assert a == b


def test_nonalt(data_dir):
    res = run("nonalt", data_dir / "fig42.vtd", "--json")
    assert res.exit_code == 0
    payload = json.loads(res.output)
    assert payload["states"] == ["011", "011"]
    assert payload["prediction"]["total"] == 2


def test_jones(data_dir):
    res = run("jones", data_dir / "trefoil.vtd")
    assert res.exit_code == 0
    assert "q + q^3 + q^5 - q^9" in res.output
