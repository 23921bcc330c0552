"""Command-line front end.

Exit codes: 0 success, 2 parse error, 3 invariant violation (bad
diagram structure, face inconsistency, d.d != 0), 4 arity mismatch
when gluing.
"""

from __future__ import annotations

import json as jsonlib
import random
import sys

import click

from .circuit import (ArityError, check_nt_morphism, glue_complexes,
                      load_circuit, operate_diagrams)
from .cube import (FaceConsistencyError, build_geometric_complex,
                   verify_faces)
from .diagram import (DiagramError, ParseError, VTangleDiagram, closure,
                      is_nice, load_diagram, non_alternating_resolutions)
from .moves import MOVE_TYPES, MoveInapplicable, apply_move
from .tqft import (apply_tqft, format_laurent, graded_euler, homology,
                   lee_generator_prediction, parse_ring)

EXIT_PARSE = 2
EXIT_INVARIANT = 3
EXIT_ARITY = 4


def _die(exc) -> "int":
    click.echo(f"error: {exc}", err=True)
    if isinstance(exc, ParseError):
        sys.exit(EXIT_PARSE)
    if isinstance(exc, ArityError):
        sys.exit(EXIT_ARITY)
    sys.exit(EXIT_INVARIANT)


def _load(path) -> VTangleDiagram:
    try:
        return load_diagram(path)
    except ParseError as exc:
        _die(exc)


def _closed(d: VTangleDiagram, close) -> VTangleDiagram:
    if d.k == 0:
        return d
    if close is None:
        raise DiagramError(
            "input is a tangle; pick a closure with --close star|alt "
            "(the result depends on it)")
    return closure(d, close)


def _emit(payload: dict, as_json: bool, text_lines) -> None:
    if as_json:
        click.echo(jsonlib.dumps(payload, indent=2, sort_keys=True))
    else:
        for line in text_lines:
            click.echo(line)


@click.group()
def main() -> None:
    """Virtual Khovanov and Lee homology of virtual tangle diagrams."""


ring_opt = click.option("--ring", default="Q", show_default=True,
                        help="Q, Z, Zhalf or Zp:<p>.")
t_opt = click.option("--t", "t", default=1, type=click.IntRange(0, 1),
                     show_default=True, help="deformation parameter")
json_opt = click.option("--json", "as_json", is_flag=True,
                        help="machine-readable output")
close_opt = click.option("--close", "close",
                         type=click.Choice(["star", "alt"]), default=None,
                         help="closure for tangle input")


def _warn_ring(ring, t) -> None:
    if t == 1 and (ring.tag == "Z" or
                   (ring.tag == "Zp" and ring.p == 2)):
        click.echo("warning: at t=1 the theory degenerates only where 2 "
                   "is invertible; expect 2-power torsion artifacts",
                   err=True)


@main.command()
@click.argument("file", type=click.Path(exists=True))
@ring_opt
@t_opt
@close_opt
@json_opt
def homology_cmd(file, ring, t, close, as_json):
    """Homology of a closed diagram (or a closed-up tangle)."""
    d = _load(file)
    try:
        ring = parse_ring(ring)
        d = _closed(d, close)
        _warn_ring(ring, t)
        gc = build_geometric_complex(d)
        summ = homology(apply_tqft(gc, t), ring)
    except DiagramError as exc:
        _die(exc)
    lines = [f"# {d.name or file}  ring={ring}  t={t}"]
    for deg, (r, tor) in sorted(summ.nonzero().items()):
        tortxt = "".join(f" + {ring}/{f}" for f in tor)
        lines.append(f"H^{deg}: rank {r}{tortxt}")
    if not summ.nonzero():
        lines.append("H = 0")
    _emit(summ.to_json(), as_json, lines)


main.add_command(homology_cmd, name="homology")


@main.command("verify")
@click.argument("file", type=click.Path(exists=True))
@json_opt
def verify_cmd(file, as_json):
    """Face anticommutativity and d.d = 0 for both t values."""
    d = _load(file)
    try:
        gc = build_geometric_complex(d)
        faces = verify_faces(gc)
        dd_ok = {}
        if d.k == 0:
            for t in (0, 1):
                cc = apply_tqft(gc, t)
                try:
                    cc.check()
                    dd_ok[t] = True
                except DiagramError:
                    dd_ok[t] = False
    except DiagramError as exc:
        _die(exc)
    all_ok = all(ok for _key, ok in faces) and all(dd_ok.values())
    lines = [f"# {d.name or file}: {len(faces)} faces"]
    for key, ok in faces:
        if not ok:
            lines.append(f"FAIL face {key}")
    for t, ok in dd_ok.items():
        lines.append(f"d.d at t={t}: {'PASS' if ok else 'FAIL'}")
    lines.append("PASS" if all_ok else "FAIL")
    _emit({"faces": len(faces), "ok": all_ok,
           "dd": {str(t): ok for t, ok in dd_ok.items()}},
          as_json, lines)
    if not all_ok:
        sys.exit(EXIT_INVARIANT)


@main.command("glue")
@click.argument("circuit", type=click.Path(exists=True))
@click.argument("files", nargs=-1, required=True,
                type=click.Path(exists=True))
@ring_opt
@t_opt
@click.option("--strict-chain", is_flag=True,
              help="fail when gluing forces extra zero saddles")
@json_opt
def glue_cmd(circuit, files, ring, t, strict_chain, as_json):
    """Glue tangle complexes through a circuit diagram."""
    try:
        cd = load_circuit(circuit)
        inputs = [load_diagram(f) for f in files]
        ring = parse_ring(ring)
        _warn_ring(ring, t)
        gcs = [build_geometric_complex(d) for d in inputs]
        glued, report = glue_complexes(cd, gcs)
        payload = {"strings": {str(k): v
                               for k, v in sorted(report.strings.items())},
                   "bolts": [list(map(list, b[:1])) + [b[1]]
                             for b in report.bolts]}
        lines = [f"# circuit {circuit} + {len(files)} inputs"]
        for k, v in sorted(report.strings.items()):
            lines.append(f"string {k}: {v}")
        if report.bolts:
            lines.append(f"bolts (saddles glued to zero): "
                         f"{len(report.bolts)}")
        if glued.diagram.k == 0:
            summ = homology(apply_tqft(glued, t), ring)
            payload["homology"] = summ.to_json()
            for deg, (r, tor) in sorted(summ.nonzero().items()):
                tortxt = "".join(f" + {ring}/{f}" for f in tor)
                lines.append(f"H^{deg}: rank {r}{tortxt}")
            if all(is_nice(d) == "nice" for d in inputs):
                verdict = check_nt_morphism(cd, inputs)
                payload["nt"] = {"verdict": verdict["verdict"],
                                 "witness": verdict["witness"]}
                lines.append(f"NT-morphism: {verdict['verdict']}")
            else:
                payload["nt"] = {"verdict": "SKIPPED",
                                 "reason": "input not certified nice"}
                lines.append("NT-morphism: skipped (input not certified "
                             "nice)")
    except DiagramError as exc:
        _die(exc)
    _emit(payload, as_json, lines)
    if strict_chain and report.bolts:
        click.echo("error: gluing is closure-dependent "
                   "(0-indicator certificate)", err=True)
        sys.exit(EXIT_INVARIANT)


@main.command("invariance")
@click.argument("file", type=click.Path(exists=True))
@click.option("--moves", default=5, show_default=True,
              help="number of random moves to apply")
@click.option("--seed", default=0, show_default=True)
@json_opt
def invariance_cmd(file, moves, seed, as_json):
    """Apply random generalized Reidemeister moves, compare homology."""
    d = _load(file)
    rng = random.Random(seed)
    applied = []
    cur = d
    try:
        for _ in range(moves):
            kind = rng.choice(MOVE_TYPES)
            try:
                cur = apply_move(cur, kind, rng)
                applied.append(kind)
            except MoveInapplicable:
                applied.append(f"{kind}(skipped)")
        ring = parse_ring("Q")
        same = {}
        for t in (0, 1):
            h0 = homology(apply_tqft(build_geometric_complex(d), t),
                          ring).nonzero()
            h1 = homology(apply_tqft(build_geometric_complex(cur), t),
                          ring).nonzero()
            same[t] = h0 == h1
    except DiagramError as exc:
        _die(exc)
    ok = all(same.values())
    lines = [f"# {d.name or file}  seed={seed}  moves={moves}",
             "applied: " + " ".join(applied)]
    for t, eq in same.items():
        lines.append(f"t={t}: {'equal' if eq else 'DIFFERENT'}")
    lines.append("PASS" if ok else "FAIL")
    _emit({"seed": seed, "applied": applied,
           "equal": {str(t): v for t, v in same.items()}},
          as_json, lines)
    if not ok:
        sys.exit(EXIT_INVARIANT)


@main.command("nonalt")
@click.argument("file", type=click.Path(exists=True))
@json_opt
def nonalt_cmd(file, as_json):
    """Non-alternating resolutions and the Lee generator prediction."""
    d = _load(file)
    try:
        states = non_alternating_resolutions(d)
        pred = lee_generator_prediction(d)
    except DiagramError as exc:
        _die(exc)
    lines = [f"# {d.name or file}"]
    for state, _res in states:
        lines.append("state " + "".join(map(str, state)))
    lines.append(f"predicted Lee generators: {pred['total']}")
    for deg, cnt in sorted(pred["degrees"].items()):
        lines.append(f"  degree {deg}: {cnt}")
    _emit({"states": ["".join(map(str, s)) for s, _ in states],
           "prediction": {"total": pred["total"],
                          "degrees": {str(k): v
                                      for k, v in pred["degrees"].items()}}},
          as_json, lines)


@main.command("jones")
@click.argument("file", type=click.Path(exists=True))
@close_opt
@json_opt
def jones_cmd(file, close, as_json):
    """Graded Euler characteristic at t=0 (unnormalized Jones)."""
    d = _load(file)
    try:
        d = _closed(d, close)
        poly = graded_euler(apply_tqft(build_geometric_complex(d), 0))
    except DiagramError as exc:
        _die(exc)
    _emit({"poly": {str(k): v for k, v in sorted(poly.items())}},
          as_json, [f"# {d.name or file}", format_laurent(poly)])


if __name__ == "__main__":
    main()
