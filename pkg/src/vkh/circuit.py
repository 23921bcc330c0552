"""Circuit diagrams and the gluing of tangle diagrams and complexes.

A circuit diagram is a disk with ``m`` input holes, wires (arcs that may
cross virtually, never classically), an outer boundary and optional
closed wires.  Placing tangle diagrams into the holes produces a new
tangle diagram; placing their geometric complexes produces the tensored
complex, with decorations corrected by the dot-calculus.

The text format (``.vcd``)::

    circuit m=<int> outer=<int> [name=<word>]
    hole <j> <arc> <arc> ...    # counterclockwise from the hole marker
    V a b c d                   # virtual wire crossing
    B <arc>                     # outer boundary, ccw from the outer marker
    O <arc>                     # closed wire

Wires are undirected until inputs are glued in; the composite orients
every strand by the "lower first" rule — the direction of the smallest
participating input arc wins and later fragments are flipped to match.
Each flip is reported as a red dot.  When complexes are glued, the
indicator-zero pattern of the inputs is inherited (a 0-indicator
cobordism stays 0 under any gluing); positions where that pattern
disagrees with the composite diagram's own closure are reported as
bolts — they are exactly the obstructions that make gluing through
non-nice tangles closure-dependent.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .cube import GeometricComplex, build_geometric_complex
from .diagram import (ArcUsageError, Crossing, DiagramError, ParseError,
                      VirtualCrossing, VTangleDiagram, is_nice)


class ArityError(DiagramError):
    """Hole count or leg count does not match the supplied inputs."""


@dataclass(frozen=True)
class CircuitDiagram:
    """A wiring diagram: holes, virtual wire crossings, outer boundary."""

    m: int
    holes: tuple[tuple[int, ...], ...]
    virtuals: tuple[VirtualCrossing, ...]
    boundary: tuple[int, ...]
    loops: tuple[int, ...]
    name: str = ""

    def arcs(self) -> tuple[int, ...]:
        seen = set(self.loops)
        for h in self.holes:
            seen.update(h)
        for v in self.virtuals:
            seen.update((v.a, v.b, v.c, v.d))
        seen.update(self.boundary)
        return tuple(sorted(seen))

    def validate(self) -> None:
        if len(self.holes) != self.m:
            raise DiagramError(
                f"expected {self.m} holes, got {len(self.holes)}")
        uses: dict[int, int] = {}
        for h in self.holes:
            for a in h:
                uses[a] = uses.get(a, 0) + 1
        for v in self.virtuals:
            for a in (v.a, v.b, v.c, v.d):
                uses[a] = uses.get(a, 0) + 1
        for a in self.boundary:
            uses[a] = uses.get(a, 0) + 1
        for a in self.loops:
            if a in uses:
                raise ArcUsageError(f"closed wire {a} is used elsewhere")
        for a, n in uses.items():
            if n != 2:
                raise ArcUsageError(
                    f"wire {a} has {n} endpoint uses, expected 2")
        if any(a <= 0 for a in self.arcs()):
            raise DiagramError("wire names must be positive integers")


def parse_circuit(text: str, name: str = "") -> CircuitDiagram:
    """Parse the ``.vcd`` circuit format."""
    m = outer = None
    holes: dict[int, tuple[int, ...]] = {}
    virtuals: list[VirtualCrossing] = []
    boundary: list[int] = []
    loops: list[int] = []
    cname = name

    def arcnum(tok, ln):
        try:
            v = int(tok)
        except ValueError:
            raise ParseError(f"expected an arc number, got {tok!r}", ln)
        if v <= 0:
            raise ParseError(f"arc numbers are positive, got {v}", ln)
        return v

    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        head = toks[0]
        if head == "circuit":
            if m is not None:
                raise ParseError("duplicate circuit header", ln)
            for tok in toks[1:]:
                if tok.startswith("m="):
                    m = int(tok[2:])
                elif tok.startswith("outer="):
                    outer = int(tok[6:])
                elif tok.startswith("name="):
                    cname = tok[5:]
                else:
                    raise ParseError(f"bad header token {tok!r}", ln)
            if m is None or outer is None:
                raise ParseError("header needs m= and outer=", ln)
        elif head == "hole":
            if len(toks) < 2:
                raise ParseError("hole needs an index", ln)
            j = int(toks[1])
            if j in holes:
                raise ParseError(f"duplicate hole {j}", ln)
            holes[j] = tuple(arcnum(t, ln) for t in toks[2:])
        elif head == "V":
            if len(toks) != 5:
                raise ParseError("V needs four arcs", ln)
            a, b, c, dd = (arcnum(t, ln) for t in toks[1:])
            virtuals.append(VirtualCrossing(a, b, c, dd))
        elif head == "B":
            if len(toks) != 2:
                raise ParseError("B needs one arc", ln)
            boundary.append(arcnum(toks[1], ln))
        elif head == "O":
            if len(toks) != 2:
                raise ParseError("O needs one arc", ln)
            loops.append(arcnum(toks[1], ln))
        elif head in ("C+", "C-"):
            raise ParseError("circuit diagrams have no classical "
                             "crossings", ln)
        else:
            raise ParseError(f"unknown directive {head!r}", ln)
    if m is None:
        raise ParseError("missing circuit header")
    if sorted(holes) != list(range(m)):
        raise ParseError(f"holes must be numbered 0..{m - 1}")
    if len(boundary) != outer:
        raise ParseError(
            f"expected {outer} outer boundary arcs, found {len(boundary)}")
    cd = CircuitDiagram(m, tuple(holes[j] for j in range(m)),
                        tuple(virtuals), tuple(boundary), tuple(loops),
                        cname)
    cd.validate()
    return cd


def load_circuit(path) -> CircuitDiagram:
    with open(path, encoding="utf-8") as fh:
        return parse_circuit(fh.read())


# ---------------------------------------------------------------------------
# diagram gluing


@dataclass
class DotReport:
    """Orientation bookkeeping of a gluing.

    ``strings`` maps each composite arc that came out of a glued string
    to ``"green"`` (all fragments already agreed) or ``"red"`` (some
    input fragment was flipped).  ``bolts`` lists saddle keys of the
    glued complex whose inherited indicator-zero status disagrees with
    the composite diagram's own closure — the 0-indicator certificate.
    """

    strings: dict = field(default_factory=dict)
    bolts: tuple = ()


class _Gluer:
    """Scratch state for composing diagrams through a circuit."""

    def __init__(self, cd: CircuitDiagram, inputs):
        cd.validate()
        if len(inputs) != cd.m:
            raise ArityError(
                f"circuit has {cd.m} holes, got {len(inputs)} inputs")
        for j, d in enumerate(inputs):
            d.validate()
            if d.k != len(cd.holes[j]):
                raise ArityError(
                    f"hole {j} has {len(cd.holes[j])} legs but input has "
                    f"boundary {d.k}")
        self.cd = cd
        self.inputs = list(inputs)

    # tagged arcs: ("i", idx, arc) for input arcs, ("w", arc) for wires

    def _wire_uses(self):
        uses: dict[int, list] = {}
        cd = self.cd
        for j, h in enumerate(cd.holes):
            for p, a in enumerate(h):
                uses.setdefault(a, []).append(("hole", j, p))
        for wi, v in enumerate(cd.virtuals):
            for slot, a in (("a", v.a), ("b", v.b), ("c", v.c),
                            ("d", v.d)):
                uses.setdefault(a, []).append(("vc", wi, slot))
        for p, a in enumerate(cd.boundary):
            uses.setdefault(a, []).append(("outer", p))
        return uses

    def run(self):
        cd = self.cd
        wire_uses = self._wire_uses()
        # glue links between fragment ends
        glue: dict = {}
        free_end: dict = {}
        for j, d in enumerate(self.inputs):
            ends = d.boundary_ends()
            for p, (arc, bit) in enumerate(ends):
                free_end[(j, p)] = (("i", j, arc), bit)
        for a, uses in wire_uses.items():
            for ui, use in enumerate(uses):
                if use[0] == "hole":
                    _u, j, p = use
                    glue[(("w", a), ui)] = free_end[(j, p)]
                    glue[free_end[(j, p)]] = (("w", a), ui)

        # terminal attachments of fragment ends
        attach: dict = {}
        for j, d in enumerate(self.inputs):
            for r, c in enumerate(d.crossings):
                attach[(("i", j, c.u_in), 1)] = ("C", j, r, "u_in")
                attach[(("i", j, c.o_in), 1)] = ("C", j, r, "o_in")
                attach[(("i", j, c.u_out), 0)] = ("C", j, r, "u_out")
                attach[(("i", j, c.o_out), 0)] = ("C", j, r, "o_out")
            for r, v in enumerate(d.virtuals):
                attach[(("i", j, v.a), 1)] = ("V", j, r, "a")
                attach[(("i", j, v.b), 1)] = ("V", j, r, "b")
                attach[(("i", j, v.c), 0)] = ("V", j, r, "c")
                attach[(("i", j, v.d), 0)] = ("V", j, r, "d")
        for a, uses in wire_uses.items():
            for ui, use in enumerate(uses):
                if use[0] == "vc":
                    _u, wi, slot = use
                    attach[(("w", a), ui)] = ("VC", wi, slot)
                elif use[0] == "outer":
                    attach[(("w", a), ui)] = ("OUT", use[1])

        # trace chains of glued fragments into composite arcs
        all_ends = set(attach) | set(glue)
        for j, d in enumerate(self.inputs):
            for a in d.arcs():
                all_ends.update({(("i", j, a), 0), (("i", j, a), 1)})
        comp_of: dict = {}        # fragment tag -> (comp id, agrees)
        end_comp: dict = {}       # terminal end -> comp id
        colours: dict = {}
        next_id = itertools.count(1)

        def other(end):
            tag, e = end
            return (tag, 1 - e)

        seen: set = set()

        def walk(start):
            """Collect the chain through glue links from a free end."""
            chain = [start]
            cur = start
            while other(cur) in glue:
                cur = glue[other(cur)]
                chain.append(cur)
            return chain

        for end in sorted(all_ends, key=repr):
            tag, _e = end
            if tag in seen or end in glue:
                continue
            chain = walk(end)
            cid = next(next_id)
            glued = any(t[0] == "w" for t, _ in chain) and len(chain) > 1
            frags = []
            for t, e in chain:
                seen.add(t)
                # the chain traverses fragment t from end e to the
                # other end, so an input arc agrees with the chain
                # direction when it is entered at its tail
                frags.append((t, e == 0))
            self._register(cid, chain, frags, comp_of, end_comp)
            if glued:
                colours[cid] = frags
        # wire circles and loops never reached from a terminal end
        for tag in ([("w", a) for a in self.cd.arcs()]
                    + [("i", j, a) for j, d in enumerate(self.inputs)
                       for a in d.arcs()]):
            if tag in seen:
                continue
            end = (tag, 0)
            chain = [end]
            cur = end
            while other(cur) in glue and glue[other(cur)] != chain[0]:
                cur = glue[other(cur)]
                chain.append(cur)
            cid = next(next_id)
            frags = [(t, e == 0) for t, e in chain]
            for t, _e in chain:
                seen.add(t)
            self._register(cid, chain, frags, comp_of, end_comp)
            if len(chain) > 1:
                colours[cid] = frags
        return self._assemble(comp_of, end_comp, attach, colours)

    def _register(self, cid, chain, frags, comp_of, end_comp):
        for t, agrees in frags:
            comp_of[t] = (cid, agrees)
        first = chain[0]
        last = (chain[-1][0], 1 - chain[-1][1])
        # the head of a chain-oriented composite arc sits at its last end
        end_comp[first] = (cid, False)
        end_comp[last] = (cid, True)

    def _vc_end(self, wire_uses, wi, slot):
        v = self.cd.virtuals[wi]
        arc = {"a": v.a, "b": v.b, "c": v.c, "d": v.d}[slot]
        ui = next(i for i, u in enumerate(wire_uses[arc])
                  if u == ("vc", wi, slot))
        return (("w", arc), ui)

    def _assemble(self, comp_of, end_comp, attach, colours):
        # Orient composite strands, not arcs: every passage through a
        # crossing or virtual ties the orientations of the two incident
        # composite arcs together, so solve the parity constraints with
        # a union-find and only then pick directions, lower input
        # fragment first.
        wire_uses = self._wire_uses()
        parent: dict = {}
        par: dict = {}

        def find(x):
            parent.setdefault(x, x)
            par.setdefault(x, 0)
            if parent[x] == x:
                return x, 0
            r, p = find(parent[x])
            parent[x] = r
            par[x] ^= p
            return r, par[x]

        def union(a, b, pi):
            ra, pa = find(a)
            rb, pb = find(b)
            if ra == rb:
                if pa ^ pb != pi:
                    raise DiagramError(
                        "gluing produces a strand with no consistent "
                        "orientation")
                return
            parent[rb] = ra
            par[rb] = pa ^ pb ^ pi

        passages = []
        for j, d in enumerate(self.inputs):
            for c in d.crossings:
                passages.append(((("i", j, c.u_in), 1),
                                 (("i", j, c.u_out), 0)))
                passages.append(((("i", j, c.o_in), 1),
                                 (("i", j, c.o_out), 0)))
            for v in d.virtuals:
                passages.append(((("i", j, v.a), 1), (("i", j, v.c), 0)))
                passages.append(((("i", j, v.b), 1), (("i", j, v.d), 0)))
        for wi in range(len(self.cd.virtuals)):
            passages.append((self._vc_end(wire_uses, wi, "a"),
                             self._vc_end(wire_uses, wi, "c")))
            passages.append((self._vc_end(wire_uses, wi, "b"),
                             self._vc_end(wire_uses, wi, "d")))
        for ein, eout in passages:
            cin, hin = end_comp[ein]
            cout, hout = end_comp[eout]
            union(cin, cout, 1 ^ hin ^ hout)

        all_cids = sorted(set(c for c, _ in comp_of.values()))
        frag_by_cid: dict = {c: [] for c in all_cids}
        for t, (c, ag) in comp_of.items():
            frag_by_cid[c].append((t, ag))
        best: dict = {}
        for cid in all_cids:
            r, p = find(cid)
            for t, ag in frag_by_cid[cid]:
                if t[0] != "i":
                    continue
                if r not in best or t[1:] < best[r][0]:
                    best[r] = (t[1:], ag ^ p ^ 1)
        root_dir = {r: v for r, (_k, v) in best.items()}
        direction = {}
        for cid in all_cids:
            r, p = find(cid)
            direction[cid] = not ((root_dir.get(r, 0) ^ p) & 1)

        report = DotReport()
        for cid, frags in colours.items():
            flipped = any(t[0] == "i" and ag != direction[cid]
                          for t, ag in frags)
            report.strings[cid] = "red" if flipped else "green"

        def flip_at(end):
            cid, h = end_comp[end]
            return cid, direction[cid] ^ h

        crossings = []
        cross_prov = []
        for j, d in enumerate(self.inputs):
            for r, c in enumerate(d.crossings):
                cu_in, uflip = flip_at((("i", j, c.u_in), 1))
                cu_out, _ = flip_at((("i", j, c.u_out), 0))
                co_in, oflip = flip_at((("i", j, c.o_in), 1))
                co_out, _ = flip_at((("i", j, c.o_out), 0))
                if uflip:
                    cu_in, cu_out = cu_out, cu_in
                if oflip:
                    co_in, co_out = co_out, co_in
                sign = c.sign if uflip == oflip else -c.sign
                crossings.append(Crossing(cu_in, co_in, cu_out, co_out,
                                          sign))
                cross_prov.append((j, r))
        virtuals = []
        for j, d in enumerate(self.inputs):
            for v in d.virtuals:
                ca, aflip = flip_at((("i", j, v.a), 1))
                cc, _ = flip_at((("i", j, v.c), 0))
                cb, bflip = flip_at((("i", j, v.b), 1))
                cdd, _ = flip_at((("i", j, v.d), 0))
                if aflip:
                    ca, cc = cc, ca
                if bflip:
                    cb, cdd = cdd, cb
                virtuals.append(VirtualCrossing(ca, cb, cc, cdd))
        for wi in range(len(self.cd.virtuals)):
            ca, aflip = flip_at(self._vc_end(wire_uses, wi, "a"))
            cc, _ = flip_at(self._vc_end(wire_uses, wi, "c"))
            cb, bflip = flip_at(self._vc_end(wire_uses, wi, "b"))
            cdd, _ = flip_at(self._vc_end(wire_uses, wi, "d"))
            if aflip:
                ca, cc = cc, ca
            if bflip:
                cb, cdd = cdd, cb
            virtuals.append(VirtualCrossing(ca, cb, cc, cdd))
        boundary = []
        for p, a in enumerate(self.cd.boundary):
            uses = self._wire_uses()[a]
            ui = next(i for i, u in enumerate(uses) if u == ("outer", p))
            boundary.append(end_comp[(("w", a), ui)][0])
        used = set()
        for c in crossings:
            used.update((c.u_in, c.o_in, c.u_out, c.o_out))
        for v in virtuals:
            used.update((v.a, v.b, v.c, v.d))
        used.update(boundary)
        loops = sorted(set(c for c, _ in comp_of.values()) - used)
        out = VTangleDiagram(tuple(crossings), tuple(virtuals),
                             tuple(boundary), tuple(loops),
                             self.cd.name or "glued")
        out.validate()
        return out, report, tuple(cross_prov)


def operate_diagrams(cd: CircuitDiagram, inputs):
    """Place the input diagrams into the circuit's holes.

    Returns ``(diagram, report)``; hole ``j``'s arcs pair positionally
    with input ``j``'s boundary arcs, both read counterclockwise from
    their markers.
    """
    d, report, _prov = _Gluer(cd, inputs).run()
    return d, report


def glue_complexes(cd: CircuitDiagram, complexes):
    """Glue geometric complexes through the circuit.

    Returns ``(gc, report)``.  The underlying cube is the cube of the
    composite diagram — states are tuples of input states — but the
    indicator-zero pattern is inherited from the inputs: a saddle whose
    input version has indicator 0 is glued to the 0-morphism no matter
    what the composite closure says.  ``report.bolts`` collects the
    saddle keys that are glued to zero even though the composite
    closure would keep them; for nice inputs the list is empty and the
    glued complex coincides with the direct build.
    """
    inputs = [g.diagram for g in complexes]
    d, report, prov = _Gluer(cd, inputs).run()
    offsets = []
    off = 0
    for g in complexes:
        offsets.append(off)
        off += g.diagram.n
    forced = set()
    bolts = []
    plain = build_geometric_complex(d, check_faces=False)
    for state in itertools.product((0, 1), repeat=d.n):
        for big_r in range(d.n):
            if state[big_r] == 1:
                continue
            j, r = prov[big_r]
            sub = state[offsets[j]:offsets[j] + inputs[j].n]
            insad = complexes[j].saddles[(sub, r)]
            inherited_zero = insad.indicator == 0
            own_zero = plain.saddles[(state, big_r)].kind == "theta"
            if inherited_zero:
                forced.add((state, big_r))
                if not own_zero:
                    bolts.append((state, big_r))
    gc = build_geometric_complex(d, forced_zero=forced)
    report.bolts = tuple(sorted(bolts))
    return gc, report


_ONE_CROSSING = {
    1: VTangleDiagram((Crossing(1, 2, 3, 4, 1),), (), (1, 2, 3, 4), (),
                      "x+"),
    -1: VTangleDiagram((Crossing(1, 2, 3, 4, -1),), (), (1, 2, 3, 4), (),
                       "x-"),
}


def decompose_diagram(d: VTangleDiagram):
    """Cut a closed diagram into one-crossing tangles and a circuit.

    Hole ``r`` receives the ``r``-th crossing; the diagram's own arcs
    become the wires, its virtual crossings wire crossings, its free
    circles closed wires.  Gluing the pieces back must reproduce the
    diagram up to arc renaming.
    """
    if d.k != 0:
        raise DiagramError("decomposition needs a closed diagram")
    holes = tuple((c.u_in, c.o_in, c.u_out, c.o_out) for c in d.crossings)
    cd = CircuitDiagram(d.n, holes, d.virtuals, (), d.loops,
                        d.name and d.name + "-split")
    cd.validate()
    inputs = [_ONE_CROSSING[c.sign] for c in d.crossings]
    return cd, inputs


def check_nt_morphism(cd: CircuitDiagram, inputs) -> dict:
    """Compare gluing complexes with building the glued diagram.

    All inputs must be certified nice and the composite closed; the
    verdict is ``EQUAL`` when glued and direct builds have equal
    homology over the rationals for both deformation parameters, else
    ``UNEQUAL`` with the witnessing ``(t, degree)``.
    """
    from .tqft import apply_tqft, homology, parse_ring
    for j, d in enumerate(inputs):
        if is_nice(d) != "nice":
            raise DiagramError(f"input {j} is not certified nice")
    if len(cd.boundary) != 0:
        raise DiagramError("NT-morphism check needs a closed composite")
    direct, _rep = operate_diagrams(cd, inputs)
    gc_direct = build_geometric_complex(direct)
    glued, rep = glue_complexes(cd, [build_geometric_complex(d)
                                     for d in inputs])
    ring = parse_ring("Q")
    witness = None
    for t in (0, 1):
        h1 = homology(apply_tqft(gc_direct, t), ring).nonzero()
        h2 = homology(apply_tqft(glued, t), ring).nonzero()
        if h1 != h2:
            degs = sorted(set(h1) | set(h2))
            bad = next(k for k in degs if h1.get(k) != h2.get(k))
            witness = (t, bad)
            break
    return {"verdict": "EQUAL" if witness is None else "UNEQUAL",
            "witness": witness, "bolts": rep.bolts}
