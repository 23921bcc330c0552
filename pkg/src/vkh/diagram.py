"""Combinatorial model of virtual tangle diagrams.

A diagram lives in a disk with ``k`` boundary points.  Its combinatorial
data consists of directed arcs (edges of the underlying 4-valent graph),
classical crossings with a sign, virtual crossings, an ordered boundary
(counter-clockwise from the disk marker) and free loops.  Arcs are named
by positive integers; each arc is directed from its *tail* to its *head*.

Classical crossings record the four incident arcs by role::

    C+ u_in o_in u_out o_out      positive crossing
    C- u_in o_in u_out o_out      negative crossing

where the understrand runs ``u_in -> u_out`` and the overstrand
``o_in -> o_out``.  Virtual crossings ``V a b c d`` carry the two
transversal strands ``a -> c`` and ``b -> d``; they are transparent for
all tracing purposes.

The local counter-clockwise order of the four ends of a classical
crossing is determined by the sign:

* positive: ``u_in, o_out, u_out, o_in``
* negative: ``u_in, o_in, u_out, o_out``

With this convention the oriented (flow-preserving) smoothing of a
positive crossing is its 0-smoothing and of a negative crossing its
1-smoothing, so the resolution induced by the given orientation sits in
homological degree zero after the ``-n_minus`` shift.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from typing import Iterable, Optional, Sequence


class DiagramError(Exception):
    """Base class for all diagram-level failures."""


class ParseError(DiagramError):
    """Raised on malformed ``.vtd``/``.vcd`` input; carries a line number."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ArcUsageError(DiagramError):
    """An arc is used too often, too rarely, or in conflicting roles."""


class OrientationError(DiagramError):
    """Arc directions are inconsistent along a strand."""


# ---------------------------------------------------------------------------
# crossings and diagrams


@dataclass(frozen=True)
class Crossing:
    """A classical crossing; ``sign`` is ``+1`` or ``-1``."""

    u_in: int
    o_in: int
    u_out: int
    o_out: int
    sign: int

    def ends_ccw(self) -> tuple[tuple[int, int], ...]:
        """The four arc-ends in counter-clockwise order ``e1..e4``.

        Ends are ``(arc, bit)`` pairs where bit 1 is the head of the arc
        (the end entering the crossing) and bit 0 its tail.  The
        0-smoothing joins ``(e1,e2)`` and ``(e3,e4)``, the 1-smoothing
        ``(e2,e3)`` and ``(e4,e1)``.
        """
        s = (self.u_in, 1)
        n = (self.u_out, 0)
        if self.sign > 0:
            e, w = (self.o_out, 0), (self.o_in, 1)
        else:
            e, w = (self.o_in, 1), (self.o_out, 0)
        return (s, e, n, w)

    def smoothing_pairs(self, letter: int) -> tuple[tuple, tuple]:
        e1, e2, e3, e4 = self.ends_ccw()
        if letter == 0:
            return ((e1, e2), (e3, e4))
        return ((e2, e3), (e4, e1))


@dataclass(frozen=True)
class VirtualCrossing:
    """A virtual crossing with strands ``a -> c`` and ``b -> d``."""

    a: int
    b: int
    c: int
    d: int


@dataclass(frozen=True)
class VTangleDiagram:
    crossings: tuple[Crossing, ...]
    virtuals: tuple[VirtualCrossing, ...]
    boundary: tuple[int, ...]
    loops: tuple[int, ...]
    name: str = ""

    # -- elementary counts ---------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.crossings)

    @property
    def k(self) -> int:
        return len(self.boundary)

    @property
    def n_virtual(self) -> int:
        return len(self.virtuals)

    @property
    def n_plus(self) -> int:
        return sum(1 for c in self.crossings if c.sign > 0)

    @property
    def n_minus(self) -> int:
        return sum(1 for c in self.crossings if c.sign < 0)

    def arcs(self) -> tuple[int, ...]:
        seen = set(self.loops)
        for c in self.crossings:
            seen.update((c.u_in, c.o_in, c.u_out, c.o_out))
        for v in self.virtuals:
            seen.update((v.a, v.b, v.c, v.d))
        seen.update(self.boundary)
        return tuple(sorted(seen))

    # -- strand structure ----------------------------------------------------

    def strand_successor(self) -> dict[int, int]:
        """Map each arc to the next arc along its strand, where defined."""
        nxt: dict[int, int] = {}
        for c in self.crossings:
            nxt[c.u_in] = c.u_out
            nxt[c.o_in] = c.o_out
        for v in self.virtuals:
            nxt[v.a] = v.c
            nxt[v.b] = v.d
        for a in self.loops:
            nxt[a] = a
        return nxt

    def component_count(self) -> int:
        """Number of link components (closed strands plus boundary strings)."""
        closed, strings = self.trace_strands()
        return len(closed) + len(strings)

    def trace_strands(self) -> tuple[list[list[int]], list[list[int]]]:
        """Trace the underlying strands of the diagram.

        Returns ``(closed, strings)`` where each strand is the list of
        its arcs in flow order.  Strings start at a boundary tail and
        end at a boundary head.
        """
        nxt = self.strand_successor()
        heads = set(nxt.keys())  # arcs whose head enters a vertex
        tails = set(nxt.values())  # arcs whose tail leaves a vertex
        strings = []
        visited: set[int] = set()
        for a in sorted(self.arcs()):
            if a in visited or a in tails:
                continue
            # a starts at the boundary
            strand = [a]
            visited.add(a)
            cur = a
            while cur in nxt:
                cur = nxt[cur]
                if cur in visited:
                    break
                strand.append(cur)
                visited.add(cur)
            strings.append(strand)
        closed = []
        for a in sorted(self.arcs()):
            if a in visited:
                continue
            strand = [a]
            visited.add(a)
            cur = nxt.get(a)
            while cur is not None and cur != a:
                strand.append(cur)
                visited.add(cur)
                cur = nxt.get(cur)
            closed.append(strand)
        return closed, strings

    # -- validation ----------------------------------------------------------

    def validate(self) -> None:
        sinks: dict[int, int] = {}
        sources: dict[int, int] = {}
        for c in self.crossings:
            for a in (c.u_in, c.o_in):
                sinks[a] = sinks.get(a, 0) + 1
            for a in (c.u_out, c.o_out):
                sources[a] = sources.get(a, 0) + 1
            if c.sign not in (1, -1):
                raise DiagramError(f"crossing sign must be +-1, got {c.sign}")
        for v in self.virtuals:
            for a in (v.a, v.b):
                sinks[a] = sinks.get(a, 0) + 1
            for a in (v.c, v.d):
                sources[a] = sources.get(a, 0) + 1
        bcount: dict[int, int] = {}
        for a in self.boundary:
            bcount[a] = bcount.get(a, 0) + 1
        for a in self.loops:
            if (a in sinks or a in sources or a in bcount
                    or self.loops.count(a) > 1):
                raise ArcUsageError(f"loop arc {a} is used elsewhere")
        for a in self.arcs():
            if a in self.loops:
                continue
            si, so, b = sinks.get(a, 0), sources.get(a, 0), bcount.get(a, 0)
            if si > 1 or so > 1:
                raise OrientationError(
                    f"arc {a} has {si} heads and {so} tails at vertices")
            if si + so + b != 2:
                raise ArcUsageError(
                    f"arc {a} has {si + so + b} endpoint uses, expected 2")
            if b > 2 - si - so:
                raise ArcUsageError(f"arc {a} over-used on the boundary")
        if any(a <= 0 for a in self.arcs()):
            raise DiagramError("arc names must be positive integers")

    def boundary_free_end(self, a: int) -> tuple[int, int]:
        """The arc-end of boundary arc ``a`` that sits on the boundary.

        For an arc with both ends on the boundary this returns the tail
        for its first boundary occurrence; use :meth:`boundary_ends` for
        the full position list.
        """
        return self.boundary_ends()[self.boundary.index(a)]

    def boundary_ends(self) -> tuple[tuple[int, int], ...]:
        """Arc-ends at the boundary positions, in boundary order."""
        used: set[tuple[int, int]] = set()
        for c in self.crossings:
            used.add((c.u_in, 1))
            used.add((c.o_in, 1))
            used.add((c.u_out, 0))
            used.add((c.o_out, 0))
        for v in self.virtuals:
            used.add((v.a, 1))
            used.add((v.b, 1))
            used.add((v.c, 0))
            used.add((v.d, 0))
        out = []
        taken: set[tuple[int, int]] = set()
        for a in self.boundary:
            picked = None
            for bit in (0, 1):
                e = (a, bit)
                if e not in used and e not in taken:
                    picked = e
                    break
            if picked is None:
                raise ArcUsageError(f"boundary arc {a} has no free end")
            taken.add(picked)
            out.append(picked)
        return tuple(out)


# ---------------------------------------------------------------------------
# parsing


def parse_diagram(text: str, name: str = "") -> VTangleDiagram:
    """Parse the ``.vtd`` tangle format.

    Grammar (one directive per line, ``#`` starts a comment)::

        tangle k=<int> [name=<word>]
        C+ <u_in> <o_in> <u_out> <o_out>
        C- <u_in> <o_in> <u_out> <o_out>
        V  <a> <b> <c> <d>
        B  <arc>
        O  <arc>

    The boundary directives are read counter-clockwise from the disk
    marker; their number must equal ``k``.
    """
    crossings: list[Crossing] = []
    virtuals: list[VirtualCrossing] = []
    boundary: list[int] = []
    loops: list[int] = []
    k: Optional[int] = None
    dname = name

    def arcnum(tok: str, ln: int) -> int:
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
        if head == "tangle":
            if k is not None:
                raise ParseError("duplicate tangle header", ln)
            k = None
            for tok in toks[1:]:
                if tok.startswith("k="):
                    try:
                        k = int(tok[2:])
                    except ValueError:
                        raise ParseError(f"bad k value {tok!r}", ln)
                elif tok.startswith("name="):
                    dname = tok[5:]
                else:
                    raise ParseError(f"unknown header field {tok!r}", ln)
            if k is None:
                raise ParseError("tangle header needs k=<int>", ln)
            if k < 0:
                raise ParseError("k must be non-negative", ln)
            continue
        if k is None:
            raise ParseError("first directive must be the tangle header", ln)
        if head in ("C+", "C-"):
            if len(toks) != 5:
                raise ParseError(f"{head} needs 4 arcs", ln)
            a = [arcnum(t, ln) for t in toks[1:]]
            sign = 1 if head == "C+" else -1
            crossings.append(Crossing(a[0], a[1], a[2], a[3], sign))
        elif head == "V":
            if len(toks) != 5:
                raise ParseError("V needs 4 arcs", ln)
            a = [arcnum(t, ln) for t in toks[1:]]
            virtuals.append(VirtualCrossing(a[0], a[1], a[2], a[3]))
        elif head == "B":
            if len(toks) != 2:
                raise ParseError("B needs one arc", ln)
            boundary.append(arcnum(toks[1], ln))
        elif head == "O":
            if len(toks) != 2:
                raise ParseError("O needs one arc", ln)
            loops.append(arcnum(toks[1], ln))
        else:
            raise ParseError(f"unknown directive {head!r}", ln)
    if k is None:
        raise ParseError("missing tangle header")
    if len(boundary) != k:
        raise ArcUsageError(
            f"header announces k={k} but {len(boundary)} boundary arcs given")
    d = VTangleDiagram(tuple(crossings), tuple(virtuals), tuple(boundary),
                       tuple(loops), dname)
    d.validate()
    return d


def load_diagram(path) -> VTangleDiagram:
    with open(path) as fh:
        text = fh.read()
    import os
    return parse_diagram(text, name=os.path.basename(str(path)))


def format_diagram(d: VTangleDiagram) -> str:
    lines = [f"tangle k={d.k}" + (f" name={d.name}" if d.name else "")]
    for c in d.crossings:
        t = "C+" if c.sign > 0 else "C-"
        lines.append(f"{t} {c.u_in} {c.o_in} {c.u_out} {c.o_out}")
    for v in d.virtuals:
        lines.append(f"V {v.a} {v.b} {v.c} {v.d}")
    for a in d.boundary:
        lines.append(f"B {a}")
    for a in d.loops:
        lines.append(f"O {a}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# resolutions

End = tuple[int, int]  # (arc, bit); bit 1 = head, 0 = tail


@dataclass(frozen=True)
class Component:
    """One component of a resolution.

    ``walk`` lists ``(arc, forward)`` steps in traversal order; the
    traversal starts at the component's least arc, taken forward.  For a
    string the walk runs from one boundary end to the other.
    """

    walk: tuple[tuple[int, bool], ...]
    is_circle: bool
    orientation: int = 1  # +1: as the canonical walk, -1: reversed

    @property
    def arcs(self) -> tuple[int, ...]:
        return tuple(sorted({a for a, _ in self.walk}))

    @property
    def least_arc(self) -> int:
        return min(a for a, _ in self.walk)


@dataclass(frozen=True)
class Resolution:
    state: tuple[int, ...]
    components: tuple[Component, ...]

    @property
    def circles(self) -> tuple[Component, ...]:
        return tuple(c for c in self.components if c.is_circle)


def _junction_map(d: VTangleDiagram,
                  state: Sequence[int],
                  caps: Iterable[tuple[End, End]] = ()) -> dict[End, End]:
    """Symmetric pairing of arc-ends at smoothed crossings / virtuals / caps."""
    J: dict[End, End] = {}

    def pair(x: End, y: End):
        if x in J or y in J:
            raise DiagramError(f"arc-end used twice: {x} / {y}")
        J[x] = y
        J[y] = x

    for c, letter in zip(d.crossings, state):
        for x, y in c.smoothing_pairs(letter):
            pair(x, y)
    for v in d.virtuals:
        pair((v.a, 1), (v.c, 0))
        pair((v.b, 1), (v.d, 0))
    for a in d.loops:
        pair((a, 1), (a, 0))
    for x, y in caps:
        pair(x, y)
    return J


def _trace(d: VTangleDiagram, J: dict[End, End]) -> list[Component]:
    """Trace circles and strings of a smoothed diagram.

    The traversal alternates between walking an arc (tail to head when
    forward) and hopping across a junction.  Circles start at their
    least arc taken forward; strings start at their boundary tail end.
    """
    visited: set[End] = set()
    comps: list[Component] = []

    def walk_from(start: End, closed: bool) -> Component:
        walk: list[tuple[int, bool]] = []
        cur = start
        while True:
            arc, bit = cur
            forward = bit == 0
            walk.append((arc, forward))
            visited.add(cur)
            other = (arc, 1 - bit)
            visited.add(other)
            if other not in J:
                return Component(tuple(walk), False)
            cur = J[other]
            if closed and cur == start:
                return Component(tuple(walk), True)

    ends: set[End] = set()
    for a in d.arcs():
        ends.add((a, 0))
        ends.add((a, 1))
    # strings first: their free ends are exactly the unpaired ends
    for e in sorted(ends):
        if e in visited or e in J:
            continue
        comps.append(walk_from(e, closed=False))
    for a in sorted(d.arcs()):
        if (a, 0) in visited:
            continue
        comps.append(walk_from((a, 0), closed=True))
    comps.sort(key=lambda c: c.least_arc)
    return comps


def _canonicalize(comp: Component) -> Component:
    """Rotate/reflect a circle walk so it starts at the least arc, forward."""
    if not comp.is_circle:
        # strings keep their end-to-end walk but use the direction that
        # traverses the least arc forward
        la = comp.least_arc
        fwd = next(f for a, f in comp.walk if a == la)
        if fwd:
            return comp
        rev = tuple((a, not f) for a, f in reversed(comp.walk))
        return Component(rev, False, comp.orientation)
    la = comp.least_arc
    idx = next(i for i, (a, _) in enumerate(comp.walk) if a == la)
    rot = comp.walk[idx:] + comp.walk[:idx]
    if not rot[0][1]:
        rot = tuple((a, not f) for a, f in reversed(rot))
        idx2 = next(i for i, (a, _) in enumerate(rot) if a == la)
        rot = rot[idx2:] + rot[:idx2]
    return Component(tuple(rot), True, comp.orientation)


def resolve(d: VTangleDiagram, state: Sequence[int]) -> Resolution:
    """The resolution of ``d`` at a state word (0/1 per crossing).

    Components come numbered by increasing least arc, circles carrying
    their canonical orientation.
    """
    state = tuple(state)
    if len(state) != d.n or any(s not in (0, 1) for s in state):
        raise DiagramError(f"bad state word {state} for {d.n} crossings")
    J = _junction_map(d, state)
    comps = [_canonicalize(c) for c in _trace(d, J)]
    return Resolution(state, tuple(comps))


def all_states(n: int):
    return itertools.product((0, 1), repeat=n)


# ---------------------------------------------------------------------------
# closures


def closure_caps(d: VTangleDiagram, marker: str) -> tuple[tuple[End, End], ...]:
    """Boundary end pairs for the star (``(b0,b1),(b2,b3)..``) or
    alternate (``(b1,b2),..,(b_{k-1},b0)``) closure."""
    if d.k % 2 != 0:
        raise DiagramError("closure needs an even number of boundary points")
    ends = d.boundary_ends()
    k = d.k
    if k == 0:
        return ()
    if marker == "star":
        pairs = [(ends[i], ends[i + 1]) for i in range(0, k, 2)]
    elif marker in ("alt", "alternate"):
        pairs = [(ends[i], ends[(i + 1) % k]) for i in range(1, k, 2)]
    else:
        raise DiagramError(f"unknown closure marker {marker!r}")
    return tuple(pairs)


def closure(d: VTangleDiagram, marker: str = "star") -> VTangleDiagram:
    """Close a tangle to a diagram without boundary.

    Caps identify neighbouring boundary ends.  Since a cap may join two
    heads or two tails, strands are first re-directed to restore flow
    consistency: every closed strand follows the forward direction of
    its least arc, with crossing roles and signs rewritten accordingly;
    then each capped pair of boundary arcs fuses into one arc.
    """
    caps = closure_caps(d, marker)
    # undirected adjacency of arc-ends through vertices and caps
    adj: dict[End, End] = {}
    for c in d.crossings:
        adj[(c.u_in, 1)] = (c.u_out, 0)
        adj[(c.u_out, 0)] = (c.u_in, 1)
        adj[(c.o_in, 1)] = (c.o_out, 0)
        adj[(c.o_out, 0)] = (c.o_in, 1)
    for v in d.virtuals:
        adj[(v.a, 1)] = (v.c, 0)
        adj[(v.c, 0)] = (v.a, 1)
        adj[(v.b, 1)] = (v.d, 0)
        adj[(v.d, 0)] = (v.b, 1)
    for x, y in caps:
        if x in adj or y in adj:
            raise DiagramError("boundary end already used at a vertex")
        adj[x] = y
        adj[y] = x
    # trace closed strands, flipping arcs traversed against the flow of
    # the strand's least arc
    flipped: set[int] = set()
    seen: set[int] = set()
    for a0 in sorted(d.arcs()):
        if a0 in seen or a0 in d.loops:
            continue
        strand: list[tuple[int, bool]] = []  # (arc, traversed forward?)
        cur: End = (a0, 0)
        while True:
            arc, bit = cur
            strand.append((arc, bit == 0))
            out_end = (arc, 1 - bit)
            nxt = adj.get(out_end)
            if nxt is None:
                raise DiagramError("open strand in closure")
            cur = nxt
            if cur == (a0, 0):
                break
        la = min(a for a, _ in strand)
        la_fwd = next(f for a, f in strand if a == la)
        for a, f in strand:
            seen.add(a)
            if f != la_fwd:
                flipped.add(a)
    # rewrite crossings/virtuals under the flips
    def flip_crossing(c: Crossing) -> Crossing:
        u_flip = c.u_in in flipped  # understrand arcs flip together
        o_flip = c.o_in in flipped
        u_in, u_out = (c.u_out, c.u_in) if u_flip else (c.u_in, c.u_out)
        o_in, o_out = (c.o_out, c.o_in) if o_flip else (c.o_in, c.o_out)
        sign = c.sign * (-1 if u_flip != o_flip else 1)
        return Crossing(u_in, o_in, u_out, o_out, sign)

    def flip_virtual(v: VirtualCrossing) -> VirtualCrossing:
        a, c_ = (v.c, v.a) if v.a in flipped else (v.a, v.c)
        b, d_ = (v.d, v.b) if v.b in flipped else (v.b, v.d)
        return VirtualCrossing(a, b, c_, d_)

    out = VTangleDiagram(
        tuple(flip_crossing(c) for c in d.crossings),
        tuple(flip_virtual(v) for v in d.virtuals),
        (),
        d.loops,
        name=(d.name + f".{marker}" if d.name else ""),
    )
    out = _splice_caps(out, d, caps)
    out.validate()
    return out


def _splice_caps(out: VTangleDiagram, orig: VTangleDiagram,
                 caps) -> VTangleDiagram:
    """Realize closure caps by identifying paired boundary arcs."""
    # union-find over arcs identified by caps
    parent: dict[int, int] = {}

    def find(a):
        parent.setdefault(a, a)
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    loops_extra: list[int] = []
    for (x, y) in caps:
        ax, ay = find(x[0]), find(y[0])
        if ax == ay:
            # the cap closes the arc onto itself: a free loop appears if
            # the arc has no vertex incidences left; handled below
            continue
        tgt, src = sorted((ax, ay))
        parent[src] = tgt

    def m(a: int) -> int:
        return find(a)

    crossings = tuple(
        Crossing(m(c.u_in), m(c.o_in), m(c.u_out), m(c.o_out), c.sign)
        for c in out.crossings)
    virtuals = tuple(
        VirtualCrossing(m(v.a), m(v.b), m(v.c), m(v.d)) for v in out.virtuals)
    used = set()
    for c in crossings:
        used.update((c.u_in, c.o_in, c.u_out, c.o_out))
    for v in virtuals:
        used.update((v.a, v.b, v.c, v.d))
    # arcs fully swallowed by identification that touch no vertex are loops
    reps = {m(a) for a in orig.boundary}
    for r in sorted(reps):
        if r not in used:
            loops_extra.append(r)
    return VTangleDiagram(crossings, virtuals, (),
                          out.loops + tuple(sorted(set(loops_extra))),
                          out.name)


# ---------------------------------------------------------------------------
# connected parts and niceness


@dataclass(frozen=True)
class ConnectedPart:
    arcs: tuple[int, ...]
    crossings: tuple[int, ...]  # indices of classical crossings inside
    fully_internal: bool


def connected_parts(d: VTangleDiagram) -> tuple[ConnectedPart, ...]:
    """Connected parts of the underlying 4-valent graph.

    Classical crossings connect all four incident arcs; virtual
    crossings connect only the arcs of each transversal strand (the two
    strands pass each other without interacting).  A part is *fully
    internal* when none of its arcs reaches the boundary.
    """
    parent: dict[int, int] = {a: a for a in d.arcs()}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    for c in d.crossings:
        union(c.u_in, c.u_out)
        union(c.u_in, c.o_in)
        union(c.u_in, c.o_out)
    for v in d.virtuals:
        union(v.a, v.c)
        union(v.b, v.d)
    groups: dict[int, list[int]] = {}
    for a in d.arcs():
        groups.setdefault(find(a), []).append(a)
    bset = set(d.boundary)
    parts = []
    for root in sorted(groups):
        arcs = tuple(sorted(groups[root]))
        cross = tuple(i for i, c in enumerate(d.crossings)
                      if find(c.u_in) == root)
        parts.append(ConnectedPart(arcs, cross,
                                   not any(a in bset for a in arcs)))
    return tuple(parts)


def is_nice(d: VTangleDiagram) -> str:
    """Sufficient niceness check; returns ``"nice"``, ``"not-nice"`` or
    ``"unknown"``.

    The diagram is reported nice when it has no virtual crossings, or
    when every virtual crossing has all four incident arcs inside fully
    internal connected parts.  ``"not-nice"`` is only reported when the
    two closures of a tangle give inequivalently decorated cubes; that
    check lives in :mod:`vkh.cube` and is consulted lazily here.
    """
    if d.n_virtual == 0:
        return "nice"
    parts = connected_parts(d)
    internal = set()
    for p in parts:
        if p.fully_internal:
            internal.update(p.arcs)
    if all(a in internal for v in d.virtuals
           for a in (v.a, v.b, v.c, v.d)):
        return "nice"
    if d.k > 0:
        from .cube import compare_closures
        if not compare_closures(d).equivalent:
            return "not-nice"
    return "unknown"


# ---------------------------------------------------------------------------
# orientations and non-alternating resolutions


def orientations(d: VTangleDiagram) -> list[dict[int, bool]]:
    """All component orientations of a diagram without boundary.

    Each orientation is returned as a map ``arc -> reversed?`` assigning
    to every arc whether its direction is reversed relative to the
    stored one.  Loops are orientable too but carry no crossing data;
    they are included for completeness.
    """
    if d.k != 0:
        raise DiagramError("orientations are enumerated for closed diagrams")
    closed, _ = d.trace_strands()
    covered = {a for comp in closed for a in comp}
    comps = closed + [[a] for a in d.loops if a not in covered]
    out = []
    for bits in itertools.product((False, True), repeat=len(comps)):
        m: dict[int, bool] = {}
        for comp, b in zip(comps, bits):
            for a in comp:
                m[a] = b
        out.append(m)
    return out


def oriented_sign(c: Crossing, rev: dict[int, bool]) -> int:
    """Sign of a crossing under a re-orientation of the diagram."""
    u_flip = rev[c.u_in]
    o_flip = rev[c.o_in]
    return c.sign * (-1 if u_flip != o_flip else 1)


def oriented_state(d: VTangleDiagram, rev: dict[int, bool]) -> tuple[int, ...]:
    """State of the resolution induced by an orientation.

    The oriented smoothing of a crossing is the 0-smoothing when the
    crossing is positive for that orientation, else the 1-smoothing.
    """
    return tuple(0 if oriented_sign(c, rev) > 0 else 1 for c in d.crossings)


def non_alternating_resolutions(
        d: VTangleDiagram) -> list[tuple[tuple[int, ...], Resolution]]:
    """Oriented resolutions induced by the 2^(#components) orientations.

    Each orientation contributes its induced state together with the
    resolution whose circles carry the induced (coherent) orientation,
    recorded in the component orientation flags.
    """
    out = []
    for rev in orientations(d):
        state = oriented_state(d, rev)
        res = resolve(d, state)
        comps = []
        for comp in res.components:
            # the induced direction of each arc is the stored direction,
            # possibly reversed; compare with the canonical walk on the
            # component's least arc
            la = comp.least_arc
            fwd = next(f for a, f in comp.walk if a == la)
            induced_forward = not rev[la]
            ori = 1 if (fwd == induced_forward) else -1
            comps.append(replace(comp, orientation=ori))
        out.append((state, Resolution(state, tuple(comps))))
    return out
