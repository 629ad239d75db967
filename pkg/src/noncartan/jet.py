"""Jet-space bookkeeping: total derivatives and prolongation of point
vector fields."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .expr import (
    DEP, JET, Expression, Symbol, dep, differentiate, indep, jet, sym, zero,
)

__all__ = ["JetContext", "VectorField", "ProlongedField",
           "total_derivative", "prolong", "JetOrderError",
           "MAX_PROLONGATION"]

MAX_PROLONGATION = 4


class JetOrderError(ValueError):
    """A jet derivative exceeded the context's order cap."""


@dataclass(frozen=True)
class JetContext:
    """m dependent variables of one independent variable, with jet
    coordinates up to a maximal order."""

    m: int
    order: int
    indep_name: str = "x"
    dep_names: tuple = ()

    def __post_init__(self):
        if self.m < 1 or self.order < 1:
            raise ValueError("need m >= 1 and order >= 1")
        names = self.dep_names
        if not names:
            if self.m == 1:
                names = ("y",)
            elif self.m == 2:
                names = ("y", "w")
            else:
                names = tuple("y%d" % i for i in range(1, self.m + 1))
        if len(names) != self.m:
            raise ValueError("expected %d dependent names" % self.m)
        object.__setattr__(self, "dep_names", tuple(names))

    @property
    def x(self) -> Symbol:
        return indep(self.indep_name)

    def y(self, j: int) -> Symbol:
        return dep(j, self.dep_names[j - 1])

    def jet(self, j: int, k: int) -> Symbol:
        return jet(j, k, self.dep_names[j - 1])

    def point_symbols(self):
        return [self.x] + [self.y(j) for j in range(1, self.m + 1)]


@dataclass(frozen=True)
class VectorField:
    """A point vector field xi d/dx + sum_j phi_j d/dy_j."""

    xi: Expression
    phi: tuple
    context: JetContext

    def __post_init__(self):
        object.__setattr__(self, "phi", tuple(self.phi))
        if len(self.phi) != self.context.m:
            raise ValueError("expected %d phi components" % self.context.m)
        for comp in (self.xi,) + self.phi:
            if comp.max_jet_order() > 0:
                raise ValueError(
                    "point vector field components may depend only on x "
                    "and zeroth-order jet variables")

    def components(self) -> tuple:
        return (self.xi,) + self.phi

    def apply_to(self, e: Expression) -> Expression:
        """The field acting as a derivation on a function of the point
        coordinates."""
        out = self.xi * differentiate(e, self.context.x)
        for j in range(1, self.context.m + 1):
            out = out + self.phi[j - 1] * differentiate(e, self.context.y(j))
        return out

    def __add__(self, other: "VectorField") -> "VectorField":
        if self.context != other.context:
            raise ValueError("context mismatch")
        return VectorField(self.xi + other.xi,
                           tuple(a + b for a, b in zip(self.phi, other.phi)),
                           self.context)

    def scale(self, c) -> "VectorField":
        c = Fraction(c)
        return VectorField(self.xi * c, tuple(p * c for p in self.phi),
                           self.context)

    def __sub__(self, other: "VectorField") -> "VectorField":
        return self + other.scale(-1)


@dataclass(frozen=True)
class ProlongedField:
    """A point vector field together with its prolongation coefficients
    phi_j^(k) for k = 0..p."""

    base: VectorField
    p: int
    coefficients: dict

    def coeff(self, j: int, k: int) -> Expression:
        return self.coefficients[(j, k)]

    def apply_to(self, e: Expression) -> Expression:
        ctx = self.base.context
        out = self.base.xi * differentiate(e, ctx.x)
        for j in range(1, ctx.m + 1):
            for k in range(0, self.p + 1):
                out = out + self.coeff(j, k) * differentiate(e, ctx.jet(j, k))
        return out


def total_derivative(e: Expression, ctx: JetContext) -> Expression:
    """D_x e = de/dx + sum_{j,k} y_j^(k+1) de/dy_j^(k)."""
    top = e.max_jet_order()
    if top > ctx.order:
        raise JetOrderError(
            "total derivative would exceed jet order %d" % (ctx.order + 1))
    out = differentiate(e, ctx.x)
    for j in range(1, ctx.m + 1):
        for k in range(0, max(top, 0) + 1):
            d = differentiate(e, ctx.jet(j, k))
            if not d.is_rational_zero():
                out = out + sym(ctx.jet(j, k + 1)) * d
    return out


def prolong(v: VectorField, p: int, max_order: int = MAX_PROLONGATION) -> ProlongedField:
    """The p-th prolongation, via the recursion
    phi^(k+1) = D_x phi^(k) - y^(k+1) D_x xi."""
    if p < 1:
        raise ValueError("prolongation order must be >= 1")
    if p > max_order:
        raise ValueError("prolongation order %d exceeds the cap %d"
                         % (p, max_order))
    ctx = v.context
    work = ctx if ctx.order >= p else JetContext(
        ctx.m, p, ctx.indep_name, ctx.dep_names)
    coeffs = {}
    dxi = total_derivative(v.xi, work)
    for j in range(1, ctx.m + 1):
        coeffs[(j, 0)] = v.phi[j - 1]
        for k in range(0, p):
            coeffs[(j, k + 1)] = (total_derivative(coeffs[(j, k)], work)
                                  - sym(work.jet(j, k + 1)) * dxi)
    return ProlongedField(v, p, coeffs)
