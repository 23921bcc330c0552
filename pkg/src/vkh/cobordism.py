"""Decoration normal forms for decorated cobordism pieces.

A cobordism between resolutions is never stored as a surface: all the
functor ever sees is its kind (merge, split, theta), an indicator in
``{0, +1, -1}``, a scalar sign, and the set of boundary positions where
the orientation mismatch ``Phi`` (``1 -> 1, X -> -X``) is applied.  This
module implements the composition rules for those decorations; the
geometric content lives in :mod:`vkh.cube`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

KIND_INDICATOR = {"merge": 1, "split": -1, "theta": 0}


@dataclass(frozen=True)
class Decoration:
    """Normal form of a decorated cobordism piece.

    ``flips`` are the boundary positions carrying a ``Phi``; the
    indicator 0 is absorbing and erases all other decoration data, which
    keeps the normal form canonical.
    """

    flips: frozenset = frozenset()
    indicator: int = 1
    scalar: int = 1

    def __post_init__(self):
        if self.indicator not in (0, 1, -1):
            raise ValueError(f"bad indicator {self.indicator}")
        if self.scalar not in (1, -1):
            raise ValueError(f"bad scalar {self.scalar}")

    def is_zero(self) -> bool:
        return self.indicator == 0


def decoration(flips: Iterable[int] = (), indicator: int = 1,
               scalar: int = 1) -> Decoration:
    """Build a decoration in normal form (0-indicator erases the rest)."""
    if indicator == 0:
        return Decoration(frozenset(), 0, 1)
    return Decoration(frozenset(flips), indicator, scalar)


def compose_decorations(outer: Decoration, inner: Decoration,
                        saddle_kind: str = "merge") -> Decoration:
    """Decoration of ``outer . saddle . inner``.

    Indicators multiply (0 absorbing), scalars multiply, and ``Phi``
    flips at the same position cancel: ``Phi`` is an involution, and
    flips at distinct positions commute, so the flip set composes by
    symmetric difference.
    """
    ind = outer.indicator * inner.indicator * KIND_INDICATOR[saddle_kind]
    if ind == 0:
        return decoration(indicator=0)
    return decoration(outer.flips ^ inner.flips, ind,
                      outer.scalar * inner.scalar)


def transfer_flip(dec: Decoration, p: int, positions: Sequence[int],
                  saddle_indicator: int) -> Decoration:
    """Move one flip across a saddle with nonzero indicator.

    The total flip over *all* boundary positions commutes with a saddle
    up to its indicator, so moving a single flip from one side to the
    other costs the indicator as a scalar and toggles every other
    position.  Across a 0-indicator piece flips move freely (the result
    is the absorbing zero decoration anyway).
    """
    if dec.indicator == 0:
        return dec
    if saddle_indicator == 0:
        return dec
    if p not in dec.flips:
        raise ValueError(f"no flip at position {p}")
    others = frozenset(positions) - {p}
    return decoration(dec.flips ^ {p} ^ others, dec.indicator,
                      dec.scalar * saddle_indicator)


# ---------------------------------------------------------------------------
# algebraic shadows of the generators: A_t = R[X]/(X^2 = t)
#
# Basis bit 0 = 1, bit 1 = X.  The same tables serve t = 0 (graded
# Khovanov) and t = 1 (Lee); ``t`` stays symbolic by passing any integer.


def merge_values(v1: int, v2: int, t: int):
    """m(b1 (x) b2) as [(bit, coefficient)]; m(X (x) X) = t*1."""
    if v1 and v2:
        return [(0, t)] if t else []
    return [(v1 | v2, 1)]


def split_values(v: int, t: int):
    """Delta(b) as [((bit1, bit2), coefficient)]; Delta(X) = X (x) X + t*(1 (x) 1)."""
    if v:
        out = [((1, 1), 1)]
        if t:
            out.append(((0, 0), t))
        return out
    return [((0, 1), 1), ((1, 0), 1)]


def phi_coef(v: int) -> int:
    """Phi: 1 -> 1, X -> -X."""
    return -1 if v else 1


def glue_indicators(parts: Sequence[int], mismatch_count: int) -> int:
    """Indicator of a glued cobordism.

    An odd number of gluing-number mismatches along the glued strings
    makes the result non-orientable (indicator 0); otherwise indicators
    simply multiply.
    """
    if mismatch_count % 2 == 1:
        return 0
    out = 1
    for p in parts:
        if p not in (0, 1, -1):
            raise ValueError(f"bad indicator {p}")
        out *= p
    return out
