"""Seeded generators of random closed virtual link diagrams.

A diagram is produced from a random Gauss-code skeleton: every
classical crossing contributes an under pass and an over pass, the
passes are dealt cyclically onto a chosen number of strand components,
and consecutive passes are joined by arcs.  Any such code is realizable
as a virtual diagram, so no planarity bookkeeping is needed; virtual
crossings are sprinkled in afterwards by cutting two arcs, and empty
components become free circles.
"""

from __future__ import annotations

import random

from .diagram import VirtualCrossing, Crossing, VTangleDiagram
from .moves import _Editor


def random_link(rng: random.Random, max_crossings: int = 6,
                max_components: int = 3, max_virtuals: int = 3,
                loop_chance: float = 0.15,
                name: str = "") -> VTangleDiagram:
    """A random closed virtual link diagram.

    ``rng`` drives every choice, so equal seeds give equal diagrams.
    """
    n = rng.randint(1, max_crossings)
    c = rng.randint(1, max_components)
    passes = [(r, "u") for r in range(n)] + [(r, "o") for r in range(n)]
    rng.shuffle(passes)
    cuts = sorted(rng.sample(range(2 * n + 1), k=c - 1)) if c > 1 else []
    groups = []
    prev = 0
    for cut in cuts + [2 * n]:
        groups.append(passes[prev:cut])
        prev = cut

    arc = 0
    slots: dict = {}
    loops = []
    for grp in groups:
        if not grp:
            arc += 1
            loops.append(arc)
            continue
        first = arc + 1
        for i, (r, kind) in enumerate(grp):
            a_in = arc + 1 + i
            a_out = first if i == len(grp) - 1 else a_in + 1
            slots[(r, kind)] = (a_in, a_out)
        arc += len(grp)

    crossings = []
    for r in range(n):
        u_in, u_out = slots[(r, "u")]
        o_in, o_out = slots[(r, "o")]
        crossings.append(Crossing(u_in, o_in, u_out, o_out,
                                  rng.choice((1, -1))))
    d = VTangleDiagram(tuple(crossings), (), (), tuple(loops),
                       name or f"random-{n}x")
    d.validate()

    for _ in range(rng.randint(0, max_virtuals)):
        arcs = d.arcs()
        if len(arcs) < 2:
            break
        x, y = rng.sample(arcs, 2)
        ed = _Editor(d)
        x1, x2 = ed.split_arc(x)
        y1, y2 = ed.split_arc(y)
        ed.virtuals.append(VirtualCrossing(x1, y1, x2, y2))
        d = ed.build()
    if rng.random() < loop_chance and d.component_count() < max_components:
        ed = _Editor(d)
        ed.loops.append(ed.fresh())
        d = ed.build()
    return d


def random_corpus(seed: int, count: int, **kw) -> list:
    """``count`` random links from one master seed."""
    rng = random.Random(seed)
    out = []
    for i in range(count):
        out.append(random_link(random.Random(rng.randrange(2 ** 32)),
                               name=f"seed{seed}-{i}", **kw))
    return out


def random_knot(rng: random.Random, max_crossings: int = 6,
                tries: int = 200, **kw) -> VTangleDiagram:
    """A random diagram with a single strand component and no circles."""
    for _ in range(tries):
        d = random_link(rng, max_crossings=max_crossings,
                        max_components=1, loop_chance=0.0, **kw)
        if d.component_count() == 1 and not d.loops:
            return d
    raise RuntimeError("could not draw a knot diagram")
