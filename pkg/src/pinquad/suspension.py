"""Cochain suspension and the cone/collapse boundary transfer.

The suspension s sends a degree-k cochain c on X to the degree-(k+1)
cochain on Sigma X (or on C+X) whose value on (v0..vk, top) is c(v0..vk)
and which vanishes elsewhere; with the cone vertex ranked last, sd = ds on
the nose.  The boundary transfer t* s then lands relative cocycles on
(M, bd M); as a cochain it equals d of the extension by zero, which is the
form used to evaluate it (it makes sense even when no collapse map exists,
e.g. on prism cylinders).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .cochains import Cochain, extend_by_zero, d
from .complexes import (
    Collapse,
    Cone,
    ManifoldPair,
    OrderedComplex,
    SuspensionComplex,
)
from .errors import ComplexMismatch, EmptyBoundary


@dataclass(frozen=True)
class SuspensionContext:
    """A base complex sitting inside a suspension or upper cone."""

    base: OrderedComplex
    total: OrderedComplex
    upper: int
    lower: Optional[int]


def suspension_context(sx: SuspensionComplex) -> SuspensionContext:
    return SuspensionContext(sx.base, sx.complex, sx.upper, sx.lower)


def cone_context(c: Cone) -> SuspensionContext:
    return SuspensionContext(c.base, c.complex, c.apex, None)


def suspend(ctx: SuspensionContext, c: Cochain) -> Cochain:
    """s(c): supported on the simplices (sigma, upper vertex) only."""
    if c.complex is not ctx.base:
        raise ComplexMismatch("cochain does not live on the suspension base")
    vals = {s + (ctx.upper,): v for s, v in c.values.items()}
    return Cochain(ctx.total, c.degree + 1, c.ring, vals)


def desuspend(ctx: SuspensionContext, c: Cochain) -> Cochain:
    """Inverse of suspend on its image (drop the upper vertex)."""
    if c.complex is not ctx.total:
        raise ComplexMismatch("cochain does not live on the suspension")
    vals = {}
    for s, v in c.values.items():
        if s[-1] != ctx.upper:
            raise ValueError("cochain is not in the image of the suspension")
        vals[s[:-1]] = v
    return Cochain(ctx.base, c.degree - 1, c.ring, vals)


def boundary_transfer(m: ManifoldPair, u: Cochain) -> Cochain:
    """t* s u as a cochain on M: the coboundary of the extension by zero.

    For a cocycle u on bd M the result is a relative cocycle representing
    the connecting-map image of [u].
    """
    if m.closed:
        raise EmptyBoundary("boundary transfer needs a boundary")
    if u.complex is not m.boundary_complex():
        raise ComplexMismatch("cochain does not live on the boundary complex")
    return d(extend_by_zero(m.complex, u))


def collapse_transfer(col: Collapse, u: Cochain) -> Cochain:
    """t*(s u) computed literally through the collapse map."""
    from .cochains import pullback

    return pullback(col.map, suspend(cone_context(col.cone), u))
