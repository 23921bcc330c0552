"""The TQFT functor, homology, and the Lee degeneration oracles.

A resolution with ``c`` circles becomes the free module ``A^{(x)c}``
over ``A_t = R[X]/(X^2 = t)``; merges apply ``m``, splits ``Delta_t``,
thetas the zero map, and every gluing-number mismatch inserts a
``Phi``.  ``t = 0`` is the graded Khovanov case, ``t = 1`` the
filtered Lee deformation.  All matrices are integral; the coefficient
ring only enters when homology is read off (rank counting over fields,
Smith normal form over integral rings).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

from .cube import GeometricComplex, _local_matrix
from .diagram import DiagramError, VTangleDiagram, orientations, \
    oriented_state
from .snf import SparseMatrix, invariant_factors, rank_q


# ---------------------------------------------------------------------------
# rings


@dataclass(frozen=True)
class Ring:
    tag: str  # Q | Z | Zhalf | Zp
    p: Optional[int] = None

    def __str__(self):
        return f"Zp:{self.p}" if self.tag == "Zp" else self.tag


def parse_ring(text: str) -> Ring:
    if text in ("Q", "Z", "Zhalf"):
        return Ring(text)
    if text.startswith("Zp:"):
        p = int(text[3:])
        if p < 2:
            raise DiagramError(f"bad prime {p}")
        return Ring("Zp", p)
    raise DiagramError(f"unknown ring {text!r}")


# ---------------------------------------------------------------------------
# chain complexes


@dataclass
class ChainComplex:
    degrees: list  # ascending homological degrees
    dims: list
    mats: list  # mats[i]: degree[i] -> degree[i+1], SparseMatrix over Z
    t: int
    basis: list  # per degree: list of (state, bits)
    qdegrees: Optional[list] = None  # per degree: list of ints (t=0 only)

    def check(self) -> None:
        for i in range(len(self.mats) - 1):
            if not self.mats[i + 1].matmul(self.mats[i]).is_zero():
                raise DiagramError(f"d.d != 0 between degrees "
                                   f"{self.degrees[i]}..{self.degrees[i+2]}")


@dataclass
class HomologySummary:
    ring: Ring
    t: int
    groups: dict  # degree -> (free rank, tuple of torsion factors)

    def total_rank(self) -> int:
        return sum(r for r, _ in self.groups.values())

    def nonzero(self) -> dict:
        return {d: g for d, g in self.groups.items()
                if g[0] or g[1]}

    def to_json(self) -> dict:
        return {"ring": str(self.ring), "t": self.t,
                "degrees": {str(d): {"rank": r, "torsion": list(tor)}
                            for d, (r, tor) in sorted(self.groups.items())}}


def apply_tqft(gc: GeometricComplex, t: int) -> ChainComplex:
    """Evaluate the functor on a geometric complex of a closed diagram."""
    d = gc.diagram
    if d.k != 0:
        raise DiagramError("the TQFT applies to diagrams without boundary")
    if t not in (0, 1):
        raise DiagramError("t must be 0 or 1")
    degs = sorted(gc.states_by_degree())
    by_deg = gc.states_by_degree()
    offsets = {}
    dims = []
    basis = []
    qdegrees = [] if t == 0 else None
    shift = d.n_plus - 2 * d.n_minus
    for deg in degs:
        off = 0
        blist = []
        qlist = []
        for state in by_deg[deg]:
            ncirc = len(gc.resolutions[state].circles)
            offsets[state] = off
            off += 1 << ncirc
            for bits in itertools.product((0, 1), repeat=ncirc):
                blist.append((state, bits))
                if t == 0:
                    qdim = sum(-1 if b else 1 for b in bits)
                    qlist.append(qdim + sum(state) + shift)
        dims.append(off)
        basis.append(blist)
        if t == 0:
            qdegrees.append(qlist)
    deg_index = {deg: i for i, deg in enumerate(degs)}
    mats = [SparseMatrix(dims[i + 1], dims[i])
            for i in range(len(degs) - 1)]
    for (state, r), sad in gc.saddles.items():
        if sad.kind == "theta" or sad.indicator == 0:
            continue
        src = gc.resolutions[state]
        tgt = gc.resolutions[sad.target_state]
        i = deg_index[gc.degree(state)]
        M = mats[i]
        local_src = list(range(len(src.circles)))
        local_tgt, rows = _local_matrix(gc, sad, local_src, t)
        if local_tgt != list(range(len(tgt.circles))):
            raise DiagramError("saddle image misses circles")
        so, to = offsets[state], offsets[sad.target_state]
        for bits, targets in rows.items():
            col = so + sum(b << j for j, b in enumerate(bits))
            for obits, coef in targets:
                row = to + sum(b << j for j, b in enumerate(obits))
                M.add(row, col, sad.sign * coef)
    return ChainComplex(degs, dims, mats, t, basis, qdegrees)


def build_complex(d: VTangleDiagram, t: int, **kwargs) -> ChainComplex:
    from .cube import build_geometric_complex
    return apply_tqft(build_geometric_complex(d, **kwargs), t)


def homology(cc: ChainComplex, ring: Ring,
             certify: bool = True) -> HomologySummary:
    """Homology groups of an integral chain complex over a ring.

    Over Q and F_p only ranks are counted; over Z and Z[1/2] the
    invariant factors of the incoming differential give the torsion
    (with powers of two stripped for Z[1/2]).
    """
    factors = [invariant_factors(M, certify=certify) for M in cc.mats]
    groups = {}
    for i, deg in enumerate(cc.degrees):
        fin = factors[i - 1] if i > 0 else []
        fout = factors[i] if i < len(cc.mats) else []

        def rk(fs):
            if ring.tag in ("Q", "Z", "Zhalf"):
                return len(fs)
            return sum(1 for f in fs if f % ring.p != 0)

        free = cc.dims[i] - rk(fout) - rk(fin)
        torsion = ()
        if ring.tag == "Z":
            torsion = tuple(f for f in fin if abs(f) != 1)
        elif ring.tag == "Zhalf":
            tt = []
            for f in fin:
                f = abs(f)
                while f % 2 == 0:
                    f //= 2
                if f != 1:
                    tt.append(f)
            torsion = tuple(tt)
        groups[deg] = (free, torsion)
    return HomologySummary(ring, cc.t, groups)


# ---------------------------------------------------------------------------
# graded Euler characteristic


def graded_euler(cc: ChainComplex) -> dict:
    """The graded Euler characteristic as {exponent: coefficient}.

    Only defined at t = 0, where the quantum grading exists; with the
    standard shifts this is the unnormalized Jones polynomial.
    """
    if cc.t != 0 or cc.qdegrees is None:
        raise DiagramError("graded Euler characteristic needs t = 0")
    out: dict[int, int] = {}
    for deg, qlist in zip(cc.degrees, cc.qdegrees):
        s = -1 if deg % 2 else 1
        for q in qlist:
            out[q] = out.get(q, 0) + s
    return {k: v for k, v in sorted(out.items()) if v}


def format_laurent(poly: dict) -> str:
    """Sparse ascending rendering, e.g. ``q^-1 + q`` or ``2 - q^2``."""
    if not poly:
        return "0"
    parts = []
    for e, c in sorted(poly.items()):
        if e == 0:
            body = str(abs(c))
        else:
            q = "q" if e == 1 else f"q^{e}"
            body = q if abs(c) == 1 else f"{abs(c)}*{q}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(parts)


# ---------------------------------------------------------------------------
# Lee degeneration oracles


@dataclass
class DualGraph:
    """Circles of a resolution with parity constraints between them.

    ``edges`` is a set of ``(u, v, label)`` with ``u < v`` and label in
    ``{'v', 'alt', 'nonalt'}``; ``obstructions`` records crossings whose
    two local strands lie on one circle with alternating orientations —
    an immediate colouring obstruction that a simple graph cannot carry.
    """

    vertices: int
    edges: frozenset
    obstructions: tuple = ()


def _site_strands(gc: GeometricComplex, state, r):
    """The two local strands of crossing ``r`` inside the resolution.

    Returns ``[(circle, agree), (circle, agree)]`` where ``agree`` is +1
    when the circle's canonical traversal passes the smoothed crossing in
    the reference direction of that strand and -1 otherwise.  An overall
    circle orientation ``o`` turns this into an actual strand direction
    ``o[circle] * agree``; the site is alternating when the product of
    the two directed signs is +1.
    """
    res = gc.resolutions[state]
    walk_hops = {}
    for idx, circ in enumerate(res.circles):
        w = circ.walk
        for i, (arc, fwd) in enumerate(w):
            arc2, fwd2 = w[(i + 1) % len(w)]
            src = (arc, 1 if fwd else 0)
            dst = (arc2, 0 if fwd2 else 1)
            walk_hops[(src, dst)] = idx
    out = []
    for p, q in gc.diagram.crossings[r].smoothing_pairs(state[r]):
        if (p, q) in walk_hops:
            out.append((walk_hops[(p, q)], 1))
        elif (q, p) in walk_hops:
            out.append((walk_hops[(q, p)], -1))
        else:
            raise DiagramError("crossing site does not lie on a circle")
    return out


def _site_role(gc: GeometricComplex, state, r):
    """Role of crossing ``r`` in the resolution ``state``.

    One of ``merge-bottom``/``split-bottom`` (the crossing is still at 0,
    so the resolution is the source of that saddle), ``merge-top``/
    ``split-top`` (the crossing sits at 1) or ``theta``.
    """
    if state[r] == 0:
        kind = gc.saddles[(state, r)].kind
        side = "bottom"
    else:
        lo = state[:r] + (0,) + state[r + 1:]
        kind = gc.saddles[(lo, r)].kind
        side = "top"
    return kind if kind == "theta" else f"{kind}-{side}"


def dual_graph(gc: GeometricComplex, state, orient=None) -> DualGraph:
    """Dual graph of an oriented resolution, per the degeneration argument.

    ``orient`` assigns +1/-1 to each circle of the resolution (all +1 by
    default).  Crossing-labeled edges come from the sites where the
    resolution is the top of a merge or the bottom of a split; theta
    sites impose nothing, and merge-bottom/split-top sites are the kill
    sites handled by :func:`lee_kill_sites`.
    """
    res = gc.resolutions[state]
    d = gc.diagram
    if orient is None:
        orient = (1,) * len(res.circles)
    edges = set()
    obstructions = []
    for v in d.virtuals:
        c1 = res.circle_of[(v.a, 1)]
        c2 = res.circle_of[(v.b, 1)]
        if c1 != c2:
            edges.add((min(c1, c2), max(c1, c2), "v"))
    for r in range(d.n):
        role = _site_role(gc, state, r)
        if role not in ("merge-top", "split-bottom"):
            continue
        (ca, sa), (cb, sb) = _site_strands(gc, state, r)
        label = "alt" if orient[ca] * sa * orient[cb] * sb == 1 else "nonalt"
        if ca == cb:
            if label == "alt":
                obstructions.append(r)
            continue
        edges.add((min(ca, cb), max(ca, cb), label))
    return DualGraph(len(res.circles), frozenset(edges),
                     tuple(obstructions))


def admits_colouring(g: DualGraph) -> bool:
    """Two-colourability under the parity constraints of the edges.

    ``v`` and ``nonalt`` edges force equal colours, ``alt`` edges force
    different colours; decided by union-find with parity.
    """
    if g.obstructions:
        return False
    parent = list(range(g.vertices))
    parity = [0] * g.vertices

    def find(x):
        p = 0
        while parent[x] != x:
            p ^= parity[x]
            x = parent[x]
        return x, p

    for u, v, label in g.edges:
        want = 1 if label == "alt" else 0
        ru, pu = find(u)
        rv, pv = find(v)
        if ru == rv:
            if pu ^ pv != want:
                return False
        else:
            parent[ru] = rv
            parity[ru] = pu ^ pv ^ want
    return True


def lee_kill_sites(gc: GeometricComplex, state, orient=None) -> list:
    """Crossings where the oriented resolution is killed.

    A resolution dies at a site that is the bottom of a merge or the top
    of a split while the two strands through it are oriented in the
    alternating pattern; non-alternating merges and splits survive the
    down/up splitting and impose no condition here.
    """
    res = gc.resolutions[state]
    if orient is None:
        orient = (1,) * len(res.circles)
    out = []
    for r in range(gc.n):
        role = _site_role(gc, state, r)
        if role not in ("merge-bottom", "split-top"):
            continue
        (ca, sa), (cb, sb) = _site_strands(gc, state, r)
        if orient[ca] * sa * orient[cb] * sb == 1:
            out.append(r)
    return out


def lee_survivors(gc: GeometricComplex) -> list:
    """States expected to carry the Lee homology generators.

    A state survives when some orientation of its circles leaves no kill
    site and its dual graph admits a colouring.  A global reversal never
    changes either condition, so the first circle's sign is fixed.
    """
    out = []
    for state in sorted(gc.resolutions):
        m = len(gc.resolutions[state].circles)
        for bits in range(1 << max(m - 1, 0)):
            orient = (1,) + tuple(1 - 2 * ((bits >> i) & 1)
                                  for i in range(m - 1))
            if lee_kill_sites(gc, state, orient):
                continue
            if admits_colouring(dual_graph(gc, state, orient)):
                out.append(state)
                break
    return out


def lee_generator_prediction(d: VTangleDiagram) -> dict:
    """Predicted Lee generator count (2 per orientation class) and degrees."""
    if d.k != 0:
        raise DiagramError("prediction is for diagrams without boundary")
    degs: dict[int, int] = {}
    for rev in orientations(d):
        state = oriented_state(d, rev)
        deg = sum(state) - d.n_minus
        degs[deg] = degs.get(deg, 0) + 1
    return {"total": sum(degs.values()), "degrees": dict(sorted(degs.items()))}
