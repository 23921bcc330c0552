"""The decorated cube of resolutions.

For a tangle diagram with ``n`` classical crossings the cube has the
``2^n`` resolutions of a chosen closure as vertices and one saddle per
state pair at Hamming distance one.  Every saddle is decorated with

* its *kind* (merge, split or theta, by the closure circle count),
* the *indicator* (+1 merge, -1 split, 0 theta),
* *gluing numbers*: one sign per closure circle recording whether the
  circle's chosen orientation matches the standard form of the saddle,
* a *sign* making every square face anticommute.

The sign starts from the local two-factor rule (x-marked circle lower
numbered? / odd number of higher-numbered circles?) and is completed by
a global face-consistency pass: the functor image of each face is
compared symbolically and a GF(2) system picks the unique coboundary
correction.  A diagram whose faces cannot be made anticommutative at
all raises :class:`FaceConsistencyError` — that would signal a genuine
modelling bug, not bad input.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .cobordism import merge_values, phi_coef, split_values
from .diagram import (Component, DiagramError, End, Resolution,
                      VTangleDiagram, _canonicalize, _junction_map, _trace,
                      closure_caps)


class FaceConsistencyError(DiagramError):
    """A square face of the cube cannot be made anticommutative."""


# x-marker positions name the four ends in counter-clockwise order
# bottom, right, top, left (= e1..e4 of Crossing.ends_ccw).
MARKER_SLOT = {"bottom": 0, "right": 1, "top": 2, "left": 3}


def default_xmarker(sign: int) -> str:
    return "left" if sign > 0 else "top"


@dataclass
class CircleData:
    arcs: frozenset
    least_arc: int
    walk: tuple  # oriented walk actually used (after any flip)
    flipped: bool = False  # relative to the canonical orientation


@dataclass
class CubeResolution:
    """One vertex of the cube: a resolution of the closure."""

    state: tuple
    circles: list
    hops: dict  # End -> End, the oriented traversal successor
    circle_of: dict  # End -> circle index
    numbering: tuple  # numbering[i] = rank of circle i (0-based)
    tangle: Resolution  # restriction to the tangle (induced orientations)

    def arcs_to_circle(self) -> dict:
        return {c.arcs: i for i, c in enumerate(self.circles)}


@dataclass
class DecoratedSaddle:
    source_state: tuple
    target_state: tuple
    crossing: int
    kind: str  # 'merge' | 'split' | 'theta'
    indicator: int
    sign: int = 1
    rule_sign: int = 1
    src_adj: tuple = ()
    tgt_adj: tuple = ()
    eps_src: dict = field(default_factory=dict)  # circle -> 1 if Phi
    eps_tgt: dict = field(default_factory=dict)
    circle_map: dict = field(default_factory=dict)  # non-adjacent src -> tgt

    def gluing_word(self, src_res: CubeResolution,
                    tgt_res: CubeResolution) -> str:
        """Source-circle signs then target-circle signs, numbering order."""
        if self.indicator == 0:
            return ""
        src = sorted(range(len(src_res.circles)),
                     key=lambda i: src_res.numbering[i])
        tgt = sorted(range(len(tgt_res.circles)),
                     key=lambda i: tgt_res.numbering[i])
        w = ["-" if self.eps_src.get(i) else "+" for i in src]
        w.append("|")
        w += ["-" if self.eps_tgt.get(i) else "+" for i in tgt]
        return "".join(w)


@dataclass
class GeometricComplex:
    diagram: VTangleDiagram
    marker: str
    resolutions: dict
    saddles: dict  # (state, r) -> DecoratedSaddle

    @property
    def n(self) -> int:
        return self.diagram.n

    def degree(self, state) -> int:
        return sum(state) - self.diagram.n_minus

    def states_by_degree(self) -> dict:
        out: dict[int, list] = {}
        for state in sorted(self.resolutions):
            out.setdefault(self.degree(state), []).append(state)
        return out

    def dump(self) -> str:
        lines = []
        for (state, r) in sorted(self.saddles):
            s = self.saddles[(state, r)]
            a = "".join(map(str, state))
            b = "".join(map(str, s.target_state))
            word = s.gluing_word(self.resolutions[state],
                                 self.resolutions[s.target_state])
            kind = {"merge": "m", "split": "D", "theta": "T"}[s.kind]
            sign = "+1" if s.sign > 0 else "-1"
            lines.append(f"{a} -> {b} : {kind} {sign} {s.indicator:+d}"
                         + (f" {word}" if word else ""))
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# resolutions of the closure


def _oriented_walk(comp: Component, flip: bool):
    if not flip:
        return comp.walk
    return tuple((a, not f) for a, f in reversed(comp.walk))


def _resolution_hops(d: VTangleDiagram, walks: Sequence[tuple]):
    """Traversal successor map End -> End over oriented circle walks."""
    hops: dict[End, End] = {}
    circle_of: dict[End, int] = {}
    for idx, walk in enumerate(walks):
        L = len(walk)
        for p in range(L):
            arc, fwd = walk[p]
            exit_end = (arc, 1 if fwd else 0)
            narc, nfwd = walk[(p + 1) % L]
            entry_end = (narc, 0 if nfwd else 1)
            hops[exit_end] = entry_end
            circle_of[(arc, 0)] = idx
            circle_of[(arc, 1)] = idx
    return hops, circle_of


def cube_resolution(d: VTangleDiagram, state, caps,
                    flips: Optional[Sequence[int]] = None,
                    numbering: Optional[Sequence[int]] = None
                    ) -> CubeResolution:
    """Build one decorated cube vertex.

    ``flips`` lists circle indices whose orientation is reversed
    relative to the canonical (least-arc forward) one; ``numbering``
    overrides the canonical least-arc circle numbering.  Both exist to
    exercise the well-definedness of the construction.
    """
    state = tuple(state)
    J = _junction_map(d, state, caps)
    comps = [_canonicalize(c) for c in _trace(d, J)]
    if any(not c.is_circle for c in comps):
        raise DiagramError("closure resolution has an open component")
    flips = set(flips or ())
    circles = []
    walks = []
    for i, c in enumerate(comps):
        w = _oriented_walk(c, i in flips)
        circles.append(CircleData(frozenset(a for a, _ in c.walk),
                                  c.least_arc, w, i in flips))
        walks.append(w)
    hops, circle_of = _resolution_hops(d, walks)
    if numbering is None:
        numbering = tuple(range(len(circles)))  # already least-arc sorted
    else:
        numbering = tuple(numbering)
        if sorted(numbering) != list(range(len(circles))):
            raise DiagramError("numbering must be a permutation")
    tangle = _restrict_to_tangle(d, state, circles, hops)
    return CubeResolution(state, circles, hops, circle_of, numbering, tangle)


def _restrict_to_tangle(d, state, circles, hops) -> Resolution:
    """Tangle-level components with orientations induced by the closure."""
    J = _junction_map(d, state)  # no caps
    comps = [_canonicalize(c) for c in _trace(d, J)]
    fwd_of_arc: dict[int, bool] = {}
    for c in circles:
        for a, f in c.walk:
            fwd_of_arc[a] = f
    out = []
    for c in comps:
        la = c.least_arc
        f_canon = next(f for a, f in c.walk if a == la)
        ori = 1 if fwd_of_arc[la] == f_canon else -1
        out.append(Component(c.walk, c.is_circle, ori))
    return Resolution(tuple(state), tuple(out))


# ---------------------------------------------------------------------------
# saddle decoration


def classify_saddle(src: CubeResolution, tgt: CubeResolution, r: int) -> str:
    delta = len(tgt.circles) - len(src.circles)
    if delta == -1:
        return "merge"
    if delta == 1:
        return "split"
    if delta == 0:
        return "theta"
    raise DiagramError(f"impossible circle-count change {delta} at {r}")


def _strand_matches(res: CubeResolution, pairs) -> list:
    """(circle, matches-standard-form?) for the two local strands.

    The standard form orients each smoothing strand from the first to
    the second end of its counter-clockwise pair; a strand matches when
    the circle traversal runs the same way.
    """
    out = []
    for p, q in pairs:
        if res.hops.get(p) == q:
            out.append((res.circle_of[p], True))
        elif res.hops.get(q) == p:
            out.append((res.circle_of[p], False))
        else:
            raise DiagramError("strand ends not joined in resolution")
    return out


def _eps_from_matches(matches, kind) -> dict:
    """Per-adjacent-circle gluing numbers (1 = mismatch) from strands."""
    eps: dict[int, int] = {}
    for circ, ok in matches:
        bit = 0 if ok else 1
        if circ in eps and eps[circ] != bit:
            raise DiagramError(
                f"inconsistent strand orientations on circle {circ} of a "
                f"{kind} saddle")
        eps[circ] = bit
    return eps


def decorate_saddle(d: VTangleDiagram, r: int, src: CubeResolution,
                    tgt: CubeResolution, xmarker: str) -> DecoratedSaddle:
    kind = classify_saddle(src, tgt, r)
    sad = DecoratedSaddle(src.state, tgt.state, r, kind,
                          {"merge": 1, "split": -1, "theta": 0}[kind])
    if kind == "theta":
        return sad
    cr = d.crossings[r]
    letter = src.state[r]
    src_matches = _strand_matches(src, cr.smoothing_pairs(letter))
    # an orientation of the saddle surface induces opposite boundary
    # orientations on its two ends, so the standard form runs the upper
    # strands backwards relative to the counter-clockwise pairing
    tgt_matches = _strand_matches(
        tgt, tuple((q, p) for p, q in cr.smoothing_pairs(1 - letter)))
    eps_src = _eps_from_matches(src_matches, kind)
    eps_tgt = _eps_from_matches(tgt_matches, kind)
    src_adj = tuple(sorted(eps_src))
    tgt_adj = tuple(sorted(eps_tgt))
    if kind == "merge" and not (len(src_adj) == 2 and len(tgt_adj) == 1):
        raise DiagramError("merge saddle with wrong adjacency")
    if kind == "split" and not (len(src_adj) == 1 and len(tgt_adj) == 2):
        raise DiagramError("split saddle with wrong adjacency")
    # non-adjacent circles persist with identical arc sets; they pick up
    # a gluing mismatch exactly when their chosen orientations differ
    tmap = tgt.arcs_to_circle()
    circle_map = {}
    for i, c in enumerate(src.circles):
        if i in eps_src:
            continue
        j = tmap.get(c.arcs)
        if j is None:
            raise DiagramError("non-adjacent circle lost across a saddle")
        circle_map[i] = j
        mismatch = 1 if c.flipped != tgt.circles[j].flipped else 0
        eps_src[i] = 0
        eps_tgt[j] = mismatch
    for j in range(len(tgt.circles)):
        eps_tgt.setdefault(j, eps_tgt.get(j, 0))
    sad.src_adj, sad.tgt_adj = src_adj, tgt_adj
    sad.eps_src, sad.eps_tgt = eps_src, eps_tgt
    sad.circle_map = circle_map
    sad.rule_sign = saddle_sign(cr, src, tgt, sad, xmarker)
    sad.sign = sad.rule_sign
    return sad


def saddle_sign(cr, src: CubeResolution, tgt: CubeResolution,
                sad: DecoratedSaddle, xmarker: str) -> int:
    """The local two-factor sign of a merge/split saddle.

    Factor one is +1 when the x-marked arc lies on the lower-numbered
    adjacent circle, factor two is +1 when the number of circles
    numbered above the x-marked circle is odd; both counted in the
    resolution carrying the adjacent pair (source for a merge, target
    for a split).
    """
    marked_end = cr.ends_ccw()[MARKER_SLOT[xmarker]]
    res, adj = (src, sad.src_adj) if sad.kind == "merge" else (tgt,
                                                               sad.tgt_adj)
    marked = res.circle_of[marked_end]
    other = next(c for c in adj if c != marked) if len(adj) == 2 else marked
    f1 = 1 if res.numbering[marked] < res.numbering[other] else -1
    higher = sum(1 for c in range(len(res.circles))
                 if res.numbering[c] > res.numbering[marked])
    f2 = 1 if higher % 2 == 1 else -1
    return f1 * f2


# ---------------------------------------------------------------------------
# the build


def build_geometric_complex(d: VTangleDiagram, marker: str = "star",
                            xmarkers: Optional[dict] = None,
                            flips: Optional[dict] = None,
                            numberings: Optional[dict] = None,
                            check_faces: bool = True,
                            forced_zero: Optional[set] = None) -> GeometricComplex:
    """Construct the decorated geometric complex of a diagram.

    ``xmarkers`` maps crossing index to a marker position, ``flips``
    maps a state to circle indices with reversed orientation, and
    ``numberings`` maps a state to a circle-numbering permutation; all
    default to the canonical deterministic choices.  ``forced_zero``
    holds ``(state, crossing)`` saddle keys whose indicator is forced to
    0 before the sign pass — used when decorations are inherited from
    glued subcomplexes rather than read off this diagram's closure.
    """
    d.validate()
    caps = closure_caps(d, marker)
    xm = {r: default_xmarker(c.sign) for r, c in enumerate(d.crossings)}
    for r, pos in (xmarkers or {}).items():
        if pos not in MARKER_SLOT:
            raise DiagramError(f"bad x-marker {pos!r}")
        xm[r] = pos
    resolutions = {}
    for state in itertools.product((0, 1), repeat=d.n):
        resolutions[state] = cube_resolution(
            d, state, caps,
            flips=(flips or {}).get(state),
            numbering=(numberings or {}).get(state))
    saddles = {}
    for state in resolutions:
        for r in range(d.n):
            if state[r] == 1:
                continue
            tgt_state = state[:r] + (1,) + state[r + 1:]
            sad = decorate_saddle(
                d, r, resolutions[state], resolutions[tgt_state], xm[r])
            if forced_zero and (state, r) in forced_zero:
                sad.indicator = 0
            saddles[(state, r)] = sad
    gc = GeometricComplex(d, marker, resolutions, saddles)
    _sign_correction(gc, check=check_faces)
    return gc


# ---------------------------------------------------------------------------
# functor-level face comparison and the sign pass

_T_EVALS = (0, 1, 2)  # composite entries are degree <= 2 polynomials in t


def _local_matrix(gc: GeometricComplex, sad: DecoratedSaddle,
                  local_src: Sequence[int], t: int):
    """Action of an (unsigned) saddle on the named source circles.

    Returns ``(local_tgt, rows)`` where ``local_tgt`` lists target
    circle indices and ``rows`` maps source bit-tuples to lists of
    ``(target bit-tuple, coefficient)``.  Circles outside ``local_src``
    must not interact with the saddle.
    """
    if sad.kind == "theta" or sad.indicator == 0:
        return [], {}
    pos_src = {c: i for i, c in enumerate(local_src)}
    local_tgt: list[int] = []
    for c in local_src:
        if c in sad.circle_map:
            local_tgt.append(sad.circle_map[c])
        elif c not in sad.src_adj:
            raise DiagramError("local circle set misses a moved circle")
    if set(sad.src_adj) <= set(local_src):
        tgt_new = [c for c in sad.tgt_adj]
    else:
        raise DiagramError("local circle set misses an adjacent circle")
    local_tgt = sorted(set(local_tgt) | set(tgt_new))
    pos_tgt = {c: i for i, c in enumerate(local_tgt)}
    rows = {}
    for bits in itertools.product((0, 1), repeat=len(local_src)):
        val = 1
        out_fixed = [0] * len(local_tgt)
        # identity circles, with a Phi when the gluing numbers mismatch
        for c in local_src:
            if c in sad.src_adj:
                continue
            v = bits[pos_src[c]]
            if sad.eps_src.get(c) or sad.eps_tgt.get(sad.circle_map[c]):
                val *= phi_coef(v)
            out_fixed[pos_tgt[sad.circle_map[c]]] = v
        targets = []
        if sad.kind == "merge":
            c1, c2 = sad.src_adj
            v1, v2 = bits[pos_src[c1]], bits[pos_src[c2]]
            if sad.eps_src.get(c1):
                val *= phi_coef(v1)
            if sad.eps_src.get(c2):
                val *= phi_coef(v2)
            k = sad.tgt_adj[0]
            for vo, coef in merge_values(v1, v2, t):
                co = val * coef
                if sad.eps_tgt.get(k):
                    co *= phi_coef(vo)
                out = list(out_fixed)
                out[pos_tgt[k]] = vo
                targets.append((tuple(out), co))
        else:
            c0 = sad.src_adj[0]
            v = bits[pos_src[c0]]
            if sad.eps_src.get(c0):
                val *= phi_coef(v)
            k1, k2 = sad.tgt_adj
            for (v1, v2), coef in split_values(v, t):
                co = val * coef
                if sad.eps_tgt.get(k1):
                    co *= phi_coef(v1)
                if sad.eps_tgt.get(k2):
                    co *= phi_coef(v2)
                out = list(out_fixed)
                out[pos_tgt[k1]] = v1
                out[pos_tgt[k2]] = v2
                targets.append((tuple(out), co))
        rows[bits] = targets
    return local_tgt, rows


def _face_paths(gc: GeometricComplex, state, r: int, s: int):
    """Unsigned functor composites of both paths of one face.

    Returns ``(P_rs, P_sr)`` where each is a dict over the evaluation
    points of ``t`` mapping (src bits, tgt bits) to coefficients, over a
    common local circle set, or ``None`` for a path through a theta.
    """
    e_r = tuple(1 if i == r else 0 for i in range(gc.n))
    e_s = tuple(1 if i == s else 0 for i in range(gc.n))
    a = state
    b = tuple(x + y for x, y in zip(a, e_r))
    c = tuple(x + y for x, y in zip(a, e_s))
    dd = tuple(x + y for x, y in zip(b, e_s))
    E1 = gc.saddles[(a, r)]
    E2 = gc.saddles[(b, s)]
    E3 = gc.saddles[(a, s)]
    E4 = gc.saddles[(c, r)]

    # involved circles at state a: adjacent or Phi-decorated circles of
    # the first edges, plus those of the second edges pulled back to a
    def needed(sad):
        inv = {v: k for k, v in sad.circle_map.items()}
        out = set(sad.src_adj)
        out.update(k for k, v in sad.eps_src.items() if v)
        for j, v in sad.eps_tgt.items():
            if v and j in inv:
                out.add(inv[j])
        return out

    def back(sad, circles):
        out = set()
        inv = {v: k for k, v in sad.circle_map.items()}
        for circ in circles:
            if circ in inv:
                out.add(inv[circ])
            else:
                out.update(sad.src_adj)
        return out

    def is_zero(sad):
        return sad.kind == "theta" or sad.indicator == 0

    involved = set()
    for sad in (E1, E3):
        if not is_zero(sad):
            involved.update(needed(sad))
    for sad, first in ((E2, E1), (E4, E3)):
        if is_zero(sad) or is_zero(first):
            continue
        involved.update(back(first, needed(sad)))

    def path(first, second):
        if is_zero(first) or is_zero(second):
            return None
        local_a = sorted(involved)
        out = {}
        for t in _T_EVALS:
            mid, rows1 = _local_matrix(gc, first, local_a, t)
            end, rows2 = _local_matrix(gc, second, mid, t)
            acc = {}
            for bits, targets in rows1.items():
                for mbits, co1 in targets:
                    for ebits, co2 in rows2[mbits]:
                        key = (bits, ebits)
                        acc[key] = acc.get(key, 0) + co1 * co2
            out[t] = {k: v for k, v in acc.items() if v}
        return out

    return path(E1, E2), path(E3, E4), (E1, E2, E3, E4)


def _compare_paths(P, Q) -> Optional[int]:
    """Find lam with P = lam*Q across all evaluations; None if P=Q=0.

    Raises :class:`FaceConsistencyError` when no scalar works.
    """
    pz = P is None or all(not m for m in P.values())
    qz = Q is None or all(not m for m in Q.values())
    if pz and qz:
        return None
    if pz or qz:
        raise FaceConsistencyError(
            "one face path vanishes, the other does not")
    lam = None
    for t in _T_EVALS:
        pm, qm = P[t], Q[t]
        if set(pm) != set(qm):
            raise FaceConsistencyError("face paths have different support")
        for k in pm:
            p, q = pm[k], qm[k]
            if abs(p) != abs(q):
                raise FaceConsistencyError("face paths not proportional")
            l = 1 if p == q else -1
            if lam is None:
                lam = l
            elif lam != l:
                raise FaceConsistencyError("face scalar inconsistent")
    return lam


def _sign_correction(gc: GeometricComplex, check: bool = True) -> None:
    """Fix saddle signs so that every square face anticommutes.

    Solves for a GF(2) edge correction on top of the local rule signs;
    raises :class:`FaceConsistencyError` when the face constraints are
    unsatisfiable (which would mean the decorations themselves are
    wrong, not just the signs).
    """
    n = gc.n
    if n < 2:
        return
    edge_ids = {e: i for i, e in enumerate(sorted(gc.saddles))}
    rows = []  # (bitmask, rhs)
    for state in gc.resolutions:
        for r in range(n):
            if state[r]:
                continue
            for s in range(r + 1, n):
                if state[s]:
                    continue
                P, Q, edges = _face_paths(gc, state, r, s)
                lam = _compare_paths(P, Q)
                if lam is None:
                    continue
                E1, E2, E3, E4 = edges
                mask = 0
                for sad, rr in ((E1, r), (E2, s), (E3, s), (E4, r)):
                    mask ^= 1 << edge_ids[(sad.source_state, rr)]
                rule = (E1.rule_sign * E2.rule_sign * lam
                        * E3.rule_sign * E4.rule_sign)
                # want final signs with s1*s2*lam = -s3*s4
                rhs = 0 if rule == -1 else 1
                rows.append((mask, rhs))
    sol = _solve_gf2(rows, len(edge_ids))
    if sol is None:
        raise FaceConsistencyError("face sign constraints unsatisfiable")
    for e, i in edge_ids.items():
        sad = gc.saddles[e]
        sad.sign = sad.rule_sign * (-1 if (sol >> i) & 1 else 1)
    if check:
        verify_faces(gc, raise_on_fail=True)


def _solve_gf2(rows, nvars) -> Optional[int]:
    """Gaussian elimination over GF(2); returns a solution bitmask."""
    pivots = {}  # var -> (mask, rhs)
    for mask, rhs in rows:
        while mask:
            v = mask.bit_length() - 1
            if v in pivots:
                pm, pr = pivots[v]
                mask ^= pm
                rhs ^= pr
            else:
                pivots[v] = (mask, rhs)
                break
        else:
            if rhs:
                return None
    sol = 0
    for v in sorted(pivots):
        mask, rhs = pivots[v]
        val = rhs
        m = mask & ~(1 << v)
        while m:
            w = m.bit_length() - 1
            val ^= (sol >> w) & 1
            m ^= 1 << w
        if val:
            sol |= 1 << v
    return sol


def verify_faces(gc: GeometricComplex, raise_on_fail: bool = False):
    """Check anticommutativity of every face at the functor level.

    Returns a list of ``((state, r, s), ok)`` verdicts.
    """
    out = []
    n = gc.n
    for state in sorted(gc.resolutions):
        for r in range(n):
            if state[r]:
                continue
            for s in range(r + 1, n):
                if state[s]:
                    continue
                P, Q, edges = _face_paths(gc, state, r, s)
                E1, E2, E3, E4 = edges
                try:
                    lam = _compare_paths(P, Q)
                    if lam is None:
                        ok = True
                    else:
                        ok = (E1.sign * E2.sign * lam
                              * E3.sign * E4.sign) == -1
                except FaceConsistencyError:
                    ok = False
                out.append(((state, r, s), ok))
                if raise_on_fail and not ok:
                    raise FaceConsistencyError(
                        f"face {state} r={r} s={s} does not anticommute")
    return out


# ---------------------------------------------------------------------------
# closure comparison and chain isomorphism search


@dataclass
class ClosureComparison:
    equivalent: bool
    witness: Optional[tuple]  # (state, r) with differing 0-status
    indicator_pairs: dict  # (state, r) -> (ind_star, ind_alt)


def compare_closures(d: VTangleDiagram) -> ClosureComparison:
    """Compare the decorated cubes of the two closures of a tangle.

    The verdict is based on the saddles' 0-indicator pattern: a saddle
    that is a theta in one closure but not the other obstructs any
    decorated chain isomorphism between the two complexes.
    """
    if d.k == 0:
        raise DiagramError("compare_closures needs a tangle with boundary")
    c_star = build_geometric_complex(d, "star", check_faces=False)
    c_alt = build_geometric_complex(d, "alt", check_faces=False)
    pairs = {}
    witness = None
    for key in sorted(c_star.saddles):
        i1 = c_star.saddles[key].indicator
        i2 = c_alt.saddles[key].indicator
        pairs[key] = (i1, i2)
        if witness is None and (i1 == 0) != (i2 == 0):
            witness = key
    return ClosureComparison(witness is None, witness, pairs)


def spanning_tree_isomorphism(c1: GeometricComplex, c2: GeometricComplex):
    """Search for a chain isomorphism by per-state adjustments.

    Walks a spanning tree of the cube assigning each state a scalar and
    a set of tangle-component orientation flips that carry the saddles
    of ``c1`` to those of ``c2``; verified on all non-tree edges.
    Returns the adjustment map or ``None``.
    """
    if set(c1.saddles) != set(c2.saddles):
        raise DiagramError("complexes have different shapes")
    for key in c1.saddles:
        s1, s2 = c1.saddles[key], c2.saddles[key]
        if s1.kind != s2.kind or (s1.indicator == 0) != (s2.indicator == 0):
            return None
    n = c1.n
    states = sorted(c1.resolutions)
    adjust = {states[0]: (frozenset(), 1)}
    # grow along nonzero-indicator edges first (zero edges constrain
    # nothing, so states only reachable through them stay unadjusted)
    changed = True
    while changed:
        changed = False
        for a in states:
            if a not in adjust:
                continue
            for r in range(n):
                b = a[:r] + (1 - a[r],) + a[r + 1:]
                if b in adjust:
                    continue
                key = ((a if a[r] == 0 else b), r)
                if c1.saddles[key].indicator == 0:
                    continue
                fa, la = adjust[a]
                fb, lb = _propagate(c1, c2, key, a, b, fa, la)
                if fb is None:
                    return None
                adjust[b] = (fb, lb)
                changed = True
    for a in states:
        adjust.setdefault(a, (frozenset(), 1))
    # verify every edge
    for (a, r), s1 in c1.saddles.items():
        b = s1.target_state
        if not _edge_matches(c1, c2, (a, r), adjust[a], adjust[b]):
            return None
    return adjust


def _tangle_flips(gc: GeometricComplex, sad: DecoratedSaddle, state):
    """Gluing mismatches pushed down to tangle components.

    A closure circle with gluing number - contributes a flip on every
    tangle component it contains; returned as (source set, target set)
    of component indices.
    """
    res_a = gc.resolutions[sad.source_state]
    res_b = gc.resolutions[sad.target_state]

    def comp_sets(res, eps):
        flips = set()
        for ci, bit in eps.items():
            if not bit:
                continue
            arcs = res.circles[ci].arcs
            for k, comp in enumerate(res.tangle.components):
                if set(comp.arcs) <= arcs:
                    flips.add(k)
        return frozenset(flips)

    return comp_sets(res_a, sad.eps_src), comp_sets(res_b, sad.eps_tgt)


def _edge_data(gc, key):
    sad = gc.saddles[key]
    fs, ft = _tangle_flips(gc, sad, key[0])
    return sad, fs, ft


def _propagate(c1, c2, key, a, b, fa, la):
    s1, f1s, f1t = _edge_data(c1, key)
    s2, f2s, f2t = _edge_data(c2, key)
    if s1.indicator == 0:
        # zero morphisms carry no constraint; keep the target unadjusted
        return frozenset(), 1
    fwd = key[0] == a
    if fwd:
        if (f1s ^ fa) != f2s:
            return None, None
        fb = f1t ^ f2t
        lb = la * s1.sign * s2.sign
    else:
        if (f1t ^ fa) != f2t:
            return None, None
        fb = f1s ^ f2s
        lb = la * s1.sign * s2.sign
    return fb, lb


def _edge_matches(c1, c2, key, adj_a, adj_b) -> bool:
    s1, f1s, f1t = _edge_data(c1, key)
    s2, f2s, f2t = _edge_data(c2, key)
    if s1.indicator == 0:
        return True
    fa, la = adj_a
    fb, lb = adj_b
    if (f1s ^ fa) != f2s or (f1t ^ fb) != f2t:
        return False
    return la * s1.sign * lb == s2.sign
