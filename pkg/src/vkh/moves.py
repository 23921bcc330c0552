"""Generalized Reidemeister moves as rewrites on tangle diagrams.

The classical moves are implemented as honest local rewrites: RM1 and
RM2 insert a kink or a poke on existing arcs, RM3 slides a strand past a
crossing at a detected triangle site.  The virtual moves use the detour
principle: vRM1/vRM2 insert virtual kinks and pokes directly, while vRM3
and the mixed move are realized as composites that remove a purely
virtual detour and re-route it across different arcs.  Every rewrite
returns a fresh validated diagram; inapplicable moves raise
:class:`MoveInapplicable` so a driver can skip them with a note.
"""

from __future__ import annotations

import random
from dataclasses import replace

from .diagram import (Crossing, DiagramError, VirtualCrossing,
                      VTangleDiagram)

MOVE_TYPES = ("rm1", "rm2", "rm3", "vrm1", "vrm2", "vrm3", "mrm")


class MoveInapplicable(DiagramError):
    """The requested move has no valid site in the diagram."""


# ---------------------------------------------------------------------------
# low-level editing


class _Editor:
    """Mutable scratch copy of a diagram for local rewrites."""

    def __init__(self, d: VTangleDiagram):
        self.crossings = list(d.crossings)
        self.virtuals = list(d.virtuals)
        self.boundary = list(d.boundary)
        self.loops = list(d.loops)
        self.name = d.name
        self._next = max(d.arcs(), default=0) + 1

    def fresh(self) -> int:
        a = self._next
        self._next += 1
        return a

    def head_site(self, arc: int):
        """Where the head of ``arc`` is consumed, or None if free."""
        for i, c in enumerate(self.crossings):
            if c.u_in == arc:
                return ("C", i, "u_in")
            if c.o_in == arc:
                return ("C", i, "o_in")
        for i, v in enumerate(self.virtuals):
            if v.a == arc:
                return ("V", i, "a")
            if v.b == arc:
                return ("V", i, "b")
        return None

    def set_head(self, arc: int, new: int) -> None:
        """Redirect the consumer of ``arc``'s head to consume ``new``."""
        site = self.head_site(arc)
        if site is None:
            raise MoveInapplicable(f"arc {arc} has a free head")
        kind, i, slot = site
        if kind == "C":
            self.crossings[i] = replace(self.crossings[i], **{slot: new})
        else:
            self.virtuals[i] = replace(self.virtuals[i], **{slot: new})

    def build(self) -> VTangleDiagram:
        d = VTangleDiagram(tuple(self.crossings), tuple(self.virtuals),
                           tuple(self.boundary), tuple(sorted(self.loops)),
                           self.name)
        d.validate()
        return d

    def split_arc(self, arc: int):
        """Cut ``arc`` in two for a vertex insertion.

        Returns ``(first, second)``: the strand will run through
        ``first`` into the new vertex and out through ``second``.  A free
        loop is cut once, so ``first == second`` closes it up again.
        """
        if arc in self.loops:
            self.loops.remove(arc)
            return arc, arc
        new = self.fresh()
        self.set_head(arc, new)
        return arc, new


def _movable_arcs(d: VTangleDiagram):
    """Arcs moves may act on: everything except boundary arcs."""
    bd = set(d.boundary)
    return [a for a in d.arcs() if a not in bd]


# ---------------------------------------------------------------------------
# classical moves


def insert_kink(d: VTangleDiagram, arc: int, sign: int = 1,
                over_first: bool = False) -> VTangleDiagram:
    """RM1: insert a kink of the given crossing sign on ``arc``.

    ``over_first`` picks the chirality: whether the strand runs through
    the overstrand of the new crossing before the understrand.
    """
    ed = _Editor(d)
    first, second = ed.split_arc(arc)
    x = ed.fresh()
    if over_first:
        ed.crossings.append(Crossing(x, first, second, x, sign))
    else:
        ed.crossings.append(Crossing(first, x, x, second, sign))
    return ed.build()


def insert_poke(d: VTangleDiagram, over_arc: int, under_arc: int,
                lead_sign: int = 1) -> VTangleDiagram:
    """RM2: poke the strand of ``over_arc`` across ``under_arc``.

    Two cancelling crossings are inserted, the first with
    ``lead_sign`` and the second with its negative; ``over_arc`` runs
    over at both.
    """
    if over_arc == under_arc:
        raise MoveInapplicable("poke needs two distinct arcs")
    ed = _Editor(d)
    o0, o1 = ed.split_arc(over_arc)
    om = ed.fresh()
    u0, u1 = ed.split_arc(under_arc)
    um = ed.fresh()
    ed.crossings.append(Crossing(u0, o0, um, om, lead_sign))
    ed.crossings.append(Crossing(um, om, u1, o1, -lead_sign))
    return ed.build()


def _strand_role(c: Crossing, arc_in: int):
    """(in, out, role) of the strand entering ``c`` through ``arc_in``."""
    if c.u_in == arc_in:
        return c.u_in, c.u_out, "u"
    if c.o_in == arc_in:
        return c.o_in, c.o_out, "o"
    return None


def triangle_sites(d: VTangleDiagram) -> list:
    """RM3 sites: triangles of three crossings joined by single arcs.

    A site is a tuple of three ``(crossing_index, in_arc, mid_arc,
    out_arc, role)`` entries, one per strand of the triangle, where the
    strand enters its first triangle crossing through ``in_arc``,
    connects the two crossings by ``mid_arc`` and leaves through
    ``out_arc``.  Sites are kept only when the triangle occupies a
    corner (counter-clockwise adjacent ends) at every crossing and the
    strand opposite one crossing passes uniformly over or under — the
    configurations where the slide is an actual Reidemeister 3 move.
    """
    # arcs directly connecting two classical crossings
    tail_of, head_of = {}, {}
    for i, c in enumerate(d.crossings):
        for a in (c.u_out, c.o_out):
            tail_of[a] = i
        for a in (c.u_in, c.o_in):
            head_of[a] = i
    links = {}
    for a in tail_of:
        if a in head_of and tail_of[a] != head_of[a]:
            links.setdefault((tail_of[a], head_of[a]), []).append(a)

    def corner_ok(ci, a1, a2):
        ends = d.crossings[ci].ends_ccw()
        pos = {}
        for p, (arc, _bit) in enumerate(ends):
            pos[arc] = p
        if a1 not in pos or a2 not in pos:
            return False
        return (pos[a1] - pos[a2]) % 4 in (1, 3)

    sites = []
    idx = range(len(d.crossings))
    for i in idx:
        for j in idx:
            for k in idx:
                if len({i, j, k}) != 3:
                    continue
                # strand A runs i -> j, B runs i -> k, C runs j -> k
                for ta in links.get((i, j), []):
                    for tb in links.get((i, k), []):
                        for tc in links.get((j, k), []):
                            site = _check_triangle(d, (i, j, k),
                                                   (ta, tb, tc), corner_ok)
                            if site is not None:
                                sites.append(site)
    return sites


def _check_triangle(d, crossings, arcs, corner_ok):
    i, j, k = crossings
    ta, tb, tc = arcs
    if len({ta, tb, tc}) != 3:
        return None
    if not (corner_ok(i, ta, tb) and corner_ok(j, ta, tc)
            and corner_ok(k, tb, tc)):
        return None
    # the three corners must bound one face: walking the cycle
    # i -ta-> j -tc-> k -tb-> i, the departing arc must sit at the same
    # rotational offset from the arriving arc at every crossing
    deltas = set()
    for ci, arr, dep in ((j, ta, tc), (k, tc, tb), (i, tb, ta)):
        pos = {arc: p for p, (arc, _bit)
               in enumerate(d.crossings[ci].ends_ccw())}
        deltas.add((pos[dep] - pos[arr]) % 4)
    if len(deltas) != 1:
        return None
    entries = []
    # orient each triangle strand: mid arc runs first -> second crossing
    for first, second, mid in ((i, j, ta), (i, k, tb), (j, k, tc)):
        out_ent = _strand_role_out(d.crossings[first], mid)
        in_ent = _strand_role(d.crossings[second], mid)
        if out_ent is None or in_ent is None:
            return None
        entries.append((first, second, out_ent[0], mid, in_ent[1],
                        out_ent[2], in_ent[2]))
    # the strand avoiding crossing i slides past it; it must pass its
    # two crossings uniformly over or under, else this is a forbidden
    # move rather than a Reidemeister 3
    if entries[2][5] != entries[2][6]:
        return None
    return tuple(e[:6] for e in entries)


def _strand_role_out(c: Crossing, arc_out: int):
    """(in, out, role) of the strand leaving ``c`` through ``arc_out``."""
    if c.u_out == arc_out:
        return c.u_in, c.u_out, "u"
    if c.o_out == arc_out:
        return c.o_in, c.o_out, "o"
    return None


def slide_triangle(d: VTangleDiagram, site) -> VTangleDiagram:
    """RM3: flip the triangle of a site from :func:`triangle_sites`.

    Each triangle strand swaps the order in which it meets its two
    crossings; signs and over/under roles stay with the crossings.
    """
    ed = _Editor(d)
    for first, second, a_in, mid, a_out, role in site:
        cf, cs = ed.crossings[first], ed.crossings[second]
        if role == "u":
            ed.crossings[first] = replace(cf, u_in=mid, u_out=a_out)
        else:
            ed.crossings[first] = replace(cf, o_in=mid, o_out=a_out)
        rs = "u" if cs.u_in == mid else "o"
        if rs == "u":
            ed.crossings[second] = replace(cs, u_in=a_in, u_out=mid)
        else:
            ed.crossings[second] = replace(cs, o_in=a_in, o_out=mid)
    return ed.build()


# ---------------------------------------------------------------------------
# virtual moves


def insert_virtual_kink(d: VTangleDiagram, arc: int) -> VTangleDiagram:
    """vRM1: insert a virtual kink on ``arc``."""
    ed = _Editor(d)
    first, second = ed.split_arc(arc)
    x = ed.fresh()
    ed.virtuals.append(VirtualCrossing(first, x, x, second))
    return ed.build()


def insert_virtual_poke(d: VTangleDiagram, arc: int,
                        other: int) -> VTangleDiagram:
    """vRM2: take the strand of ``arc`` virtually across ``other``."""
    if arc == other:
        raise MoveInapplicable("virtual poke needs two distinct arcs")
    ed = _Editor(d)
    a0, a1 = ed.split_arc(arc)
    am = ed.fresh()
    b0, b1 = ed.split_arc(other)
    bm = ed.fresh()
    ed.virtuals.append(VirtualCrossing(a0, b0, am, bm))
    ed.virtuals.append(VirtualCrossing(bm, am, b1, a1))
    return ed.build()


def _remove_virtual(ed: _Editor, vi: int) -> None:
    """Delete virtual crossing ``vi``, merging its strands back."""
    v = ed.virtuals.pop(vi)
    for tail, head in ((v.a, v.c), (v.b, v.d)):
        if tail == head:
            continue
        site = ed.head_site(head)
        if site is None:
            if head in ed.boundary:
                ed.boundary[ed.boundary.index(head)] = tail
            elif head in ed.loops:
                raise MoveInapplicable("cannot merge into a loop arc")
        else:
            ed.set_head(head, tail)
    # a strand whose two passes through the crossing were consecutive
    # closes into a loop or a kinkless arc
    for tail, head in ((v.a, v.c), (v.b, v.d)):
        arc = tail if tail != head else head
        if (ed.head_site(arc) is None and arc not in ed.boundary
                and arc not in ed.loops):
            ed.loops.append(arc)


def removable_virtual_pokes(d: VTangleDiagram) -> list:
    """Pairs of virtual crossing indices undone by a vRM2 move.

    A pair qualifies when the output arcs of one crossing are exactly
    the input arcs of the other, i.e. the two strands cross and
    immediately cross back.
    """
    out = []
    for i, v1 in enumerate(d.virtuals):
        for j, v2 in enumerate(d.virtuals):
            if i == j:
                continue
            if {v1.c, v1.d} == {v2.a, v2.b} and len({v1.c, v1.d}) == 2:
                if (i, j) not in out and (j, i) not in out:
                    out.append((i, j))
    return out


def remove_virtual_poke(d: VTangleDiagram, pair) -> VTangleDiagram:
    """Undo a vRM2 pair found by :func:`removable_virtual_pokes`."""
    ed = _Editor(d)
    i, j = sorted(pair, reverse=True)
    _remove_virtual(ed, i)
    # the first removal merged the middle arcs; locate the second
    # crossing again by identity
    target = d.virtuals[j]
    for idx, v in enumerate(ed.virtuals):
        if v == target:
            _remove_virtual(ed, idx)
            break
    else:
        raise MoveInapplicable("virtual pair no longer present")
    return ed.build()


def reroute_virtual_poke(d: VTangleDiagram, pair, arc: int,
                         other: int) -> VTangleDiagram:
    """Detour composite (vRM3/mixed move): move a virtual poke.

    Removes the virtual poke ``pair`` and re-inserts a virtual poke of
    ``arc`` across ``other`` in the resulting diagram; both halves are
    virtual Reidemeister moves, so the composite preserves the v-link.
    """
    d2 = remove_virtual_poke(d, pair)
    arcs = set(_movable_arcs(d2))
    if arc not in arcs or other not in arcs or arc == other:
        raise MoveInapplicable("reroute arcs vanished during removal")
    return insert_virtual_poke(d2, arc, other)


# ---------------------------------------------------------------------------
# random application


def apply_move(d: VTangleDiagram, kind: str,
               rng: random.Random) -> VTangleDiagram:
    """Apply one random instance of the move ``kind``.

    Raises :class:`MoveInapplicable` when the diagram offers no site.
    """
    arcs = _movable_arcs(d)
    if kind == "rm1":
        if not arcs:
            raise MoveInapplicable("no arc for a kink")
        return insert_kink(d, rng.choice(arcs), rng.choice((1, -1)),
                           rng.choice((False, True)))
    if kind == "rm2":
        if len(arcs) < 2:
            raise MoveInapplicable("need two arcs for a poke")
        a, b = rng.sample(arcs, 2)
        return insert_poke(d, a, b, rng.choice((1, -1)))
    if kind == "rm3":
        sites = triangle_sites(d)
        if not sites:
            raise MoveInapplicable("no Reidemeister 3 triangle")
        return slide_triangle(d, rng.choice(sites))
    if kind == "vrm1":
        if not arcs:
            raise MoveInapplicable("no arc for a virtual kink")
        return insert_virtual_kink(d, rng.choice(arcs))
    if kind == "vrm2":
        if len(arcs) < 2:
            raise MoveInapplicable("need two arcs for a virtual poke")
        a, b = rng.sample(arcs, 2)
        return insert_virtual_poke(d, a, b)
    if kind in ("vrm3", "mrm"):
        pairs = removable_virtual_pokes(d)
        if not pairs:
            # fall back to creating the detour this composite would move
            if len(arcs) < 2:
                raise MoveInapplicable("no virtual detour to re-route")
            a, b = rng.sample(arcs, 2)
            return insert_virtual_poke(d, a, b)
        pair = rng.choice(pairs)
        d2 = remove_virtual_poke(d, pair)
        arcs2 = _movable_arcs(d2)
        if kind == "mrm":
            # aim the new detour at arcs of a classical crossing
            pool = [a for c in d2.crossings
                    for a in (c.u_in, c.o_in, c.u_out, c.o_out)
                    if a in arcs2]
            if not pool:
                raise MoveInapplicable("no classical crossing to pass")
            b = rng.choice(pool)
            rest = [a for a in arcs2 if a != b]
            if not rest:
                raise MoveInapplicable("no strand to re-route")
            return insert_virtual_poke(d2, rng.choice(rest), b)
        if len(arcs2) < 2:
            return d2
        a, b = rng.sample(arcs2, 2)
        return insert_virtual_poke(d2, a, b)
    raise DiagramError(f"unknown move kind {kind!r}")
