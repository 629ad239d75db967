"""Symmetry analysis: on-shell invariance residuals, determining
equations, commutators and algebra structure, the non-Cartan predicate,
and coordinate changes of vector fields."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .expr import (
    DEP, Call, Expression, RewriteRule, Symbol, apply_rules, collect,
    differentiate, format_monomial, is_zero, substitute, sym, zero,
)
from .jet import JetContext, ProlongedField, VectorField, prolong

__all__ = [
    "OdeSystem", "PointTransformation", "DeterminingSystem",
    "LieAlgebraReport", "invariance_residual", "determining_equations",
    "commutator", "is_non_cartan", "change_coordinates", "algebra_report",
    "ContextMismatchError", "MissingInverseError",
]


class ContextMismatchError(ValueError):
    pass


class MissingInverseError(ValueError):
    pass


@dataclass(frozen=True)
class OdeSystem:
    """m equations of order n in solved form y_j^(n) = F_j, with
    optional side relations used during zero testing."""

    ctx: JetContext
    rhs: tuple
    rules: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "rhs", tuple(self.rhs))
        object.__setattr__(self, "rules", tuple(self.rules))
        if len(self.rhs) != self.ctx.m:
            raise ValueError("expected %d right-hand sides" % self.ctx.m)
        for f in self.rhs:
            if f.max_jet_order() > self.ctx.order - 1:
                raise ValueError("right-hand side contains jet symbols of "
                                 "order >= %d" % self.ctx.order)

    @property
    def order(self) -> int:
        return self.ctx.order

    def on_shell(self, e: Expression) -> Expression:
        """Substitute the solved form for the top-order jet symbols."""
        n = self.ctx.order
        bindings = {self.ctx.jet(j, n): self.rhs[j - 1]
                    for j in range(1, self.ctx.m + 1)}
        return substitute(e, bindings)


@dataclass(frozen=True)
class PointTransformation:
    """An invertible point transformation given by the new coordinates
    as expressions in the old ones, together with a declared inverse
    (a sequence of substitution maps applied in order)."""

    old_ctx: JetContext
    new_ctx: JetContext
    forward: tuple          # (psi_0, psi_1, .., psi_m) in old coordinates
    inverse: tuple = None   # sequence of {old symbol: expression in new}
    rules: tuple = ()       # simplification rules (e.g. source relations)
    post_rewrites: tuple = ()  # (atom, expression) identities in new coords

    def __post_init__(self):
        object.__setattr__(self, "forward", tuple(self.forward))
        if self.inverse is not None:
            object.__setattr__(self, "inverse", tuple(self.inverse))
        object.__setattr__(self, "rules", tuple(self.rules))
        object.__setattr__(self, "post_rewrites", tuple(self.post_rewrites))
        if len(self.forward) != self.new_ctx.m + 1:
            raise ValueError("expected %d forward components"
                             % (self.new_ctx.m + 1))

    def push_old_to_new(self, e: Expression) -> Expression:
        """Rewrite an expression in old point coordinates through the
        declared inverse."""
        from .expr import replace_atoms
        if self.inverse is None:
            raise MissingInverseError("transformation has no declared inverse")
        e = apply_rules(e, self.rules)
        for mapping in self.inverse:
            e = substitute(e, mapping)
        if self.post_rewrites:
            e = replace_atoms(e, dict(self.post_rewrites))
        return apply_rules(e, self.rules)

    def verify_inverse(self) -> bool:
        """Composing forward then inverse must be the identity on
        coordinates."""
        targets = [self.new_ctx.x] + [self.new_ctx.y(j)
                                      for j in range(1, self.new_ctx.m + 1)]
        for psi, target in zip(self.forward, targets):
            if not is_zero(self.push_old_to_new(psi) - sym(target), self.rules):
                return False
        return True


@dataclass(frozen=True)
class DeterminingSystem:
    """An overdetermined system of expressions in unknown coefficient
    functions, indexed by the jet monomial each equation came from."""

    unknowns: tuple
    equations: tuple
    monomial_index: dict

    def __len__(self):
        return len(self.equations)

    def contains(self, target: Expression, rules=()) -> bool:
        """True when some equation equals the target up to a nonzero
        rational multiple."""
        for eq in self.equations:
            if _proportional(eq, target, rules):
                return True
        return False


def _proportional(a: Expression, b: Expression, rules=()) -> bool:
    if a.is_rational_zero() or b.is_rational_zero():
        return a.is_rational_zero() and b.is_rational_zero()
    ratio = a / b
    if ratio.is_constant():
        return True
    # fall back: a * lead(b) - b * lead(a) == 0
    ca = a.num[0][1]
    cb = b.num[0][1]
    return is_zero(a * cb - b * ca, rules)


def invariance_residual(v: VectorField, system: OdeSystem) -> list:
    """v^(n) applied to each y_j^(n) - F_j, restricted to the solution
    set and simplified with the system's side relations."""
    if v.context.m != system.ctx.m or v.context.dep_names != system.ctx.dep_names:
        raise ContextMismatchError("vector field and system contexts differ")
    n = system.ctx.order
    ctx = system.ctx
    vv = v if v.context == ctx else VectorField(v.xi, v.phi, ctx)
    pf = prolong(vv, n, max_order=max(n, 4))
    residuals = []
    for j in range(1, ctx.m + 1):
        delta = sym(ctx.jet(j, n)) - system.rhs[j - 1]
        res = pf.apply_to(delta)
        res = system.on_shell(res)
        res = apply_rules(res, system.rules)
        residuals.append(res)
    return residuals


def determining_equations(system: OdeSystem, ansatz: VectorField) -> DeterminingSystem:
    """Collect the on-shell invariance residual of a generic ansatz over
    monomials in the positive-order jet symbols; each coefficient is one
    determining equation."""
    residuals = invariance_residual(ansatz, system)
    ctx = system.ctx
    jet_vars = [ctx.jet(j, k)
                for j in range(1, ctx.m + 1)
                for k in range(1, ctx.order)]
    equations = []
    index = {}
    for nu, res in enumerate(residuals, start=1):
        groups = collect(res, jet_vars)
        for mon in sorted(groups, key=lambda m: tuple((a.sort_key(), k) for a, k in m)):
            eq = _scale_equation(groups[mon])
            try:
                pos = equations.index(eq)
            except ValueError:
                pos = len(equations)
                equations.append(eq)
            index[(nu, format_monomial(mon))] = pos
    unknowns = []
    for comp in ansatz.components():
        for a in comp.atoms():
            if isinstance(a, Call):
                base = a.head.base()
                if base not in unknowns:
                    unknowns.append(base)
    return DeterminingSystem(tuple(unknowns), tuple(equations), index)


def _scale_equation(e: Expression) -> Expression:
    if e.is_rational_zero():
        return e
    return e / e.num[0][1]


def commutator(v: VectorField, w: VectorField) -> VectorField:
    """[v, w] acting on the point coordinate functions."""
    if v.context != w.context:
        raise ContextMismatchError("vector field contexts differ")
    xi = v.apply_to(w.xi) - w.apply_to(v.xi)
    phi = tuple(v.apply_to(w.phi[j]) - w.apply_to(v.phi[j])
                for j in range(v.context.m))
    return VectorField(xi, phi, v.context)


def is_non_cartan(v: VectorField) -> bool:
    """True iff the d/dx component depends explicitly on a dependent
    variable."""
    for a in v.xi.atoms():
        if isinstance(a, Symbol) and a.kind == DEP:
            return True
    return False


def change_coordinates(v: VectorField, t: PointTransformation) -> VectorField:
    """Push the vector field forward: apply v to each new coordinate
    function and rewrite the result in the new coordinates."""
    if t.inverse is None:
        raise MissingInverseError("transformation has no declared inverse")
    comps = [t.push_old_to_new(v.apply_to(psi)) for psi in t.forward]
    return VectorField(comps[0], tuple(comps[1:]), t.new_ctx)


@dataclass(frozen=True)
class LieAlgebraReport:
    basis: tuple
    structure_constants: dict    # (i, j) -> tuple of Fractions, i < j
    independent: bool
    abelian: bool
    non_cartan_count: int
    bracket_failures: tuple = ()

    def constant(self, i: int, j: int, k: int) -> Fraction:
        if i == j:
            return Fraction(0)
        if i < j:
            row = self.structure_constants.get((i, j))
            return row[k] if row is not None else None
        row = self.structure_constants.get((j, i))
        return -row[k] if row is not None else None


def _flatten_fields(component_lists):
    """Given per-field component tuples, clear denominators per slot and
    return Fraction coefficient vectors over a shared monomial basis."""
    nslots = len(component_lists[0])
    slot_polys = []
    for s in range(nslots):
        dens = []
        for comps in component_lists:
            d = comps[s].den
            if d not in dens:
                dens.append(d)
        polys = []
        for comps in component_lists:
            e = comps[s]
            scaled = Expression(e.num, ((tuple(), Fraction(1)),))
            for d in dens:
                if d != e.den:
                    scaled = scaled * Expression(d, ((tuple(), Fraction(1)),))
            polys.append(scaled)
        slot_polys.append(polys)
    monomials = []
    seen = set()
    for s in range(nslots):
        for p in slot_polys[s]:
            for mon, _ in p.num:
                if (s, mon) not in seen:
                    seen.add((s, mon))
                    monomials.append((s, mon))
    monomials.sort(key=lambda sm: (sm[0], tuple((a.sort_key(), k) for a, k in sm[1])))
    vectors = []
    for i in range(len(component_lists)):
        coeffs = {}
        for s in range(nslots):
            for mon, c in slot_polys[s][i].num:
                coeffs[(s, mon)] = c
        vectors.append([coeffs.get(sm, Fraction(0)) for sm in monomials])
    return vectors


def algebra_report(fields, rules=()) -> LieAlgebraReport:
    """Linear independence over the rationals, structure constants when
    every bracket lies in the rational span, abelian flag, and the
    non-Cartan count."""
    fields = list(fields)
    ctx = fields[0].context
    for f in fields:
        if f.context != ctx:
            raise ContextMismatchError("vector field contexts differ")
    simplified = [tuple(apply_rules(c, rules) for c in f.components())
                  for f in fields]
    vectors = _flatten_fields(simplified)
    independent = linalg.rank(vectors) == len(fields)
    structure = {}
    failures = []
    abelian = True
    for i in range(len(fields)):
        for j in range(i + 1, len(fields)):
            br = commutator(fields[i], fields[j])
            br_comps = tuple(apply_rules(c, rules) for c in br.components())
            if all(is_zero(c, rules) for c in br_comps):
                structure[(i, j)] = tuple(Fraction(0) for _ in fields)
                continue
            abelian = False
            stacked = _flatten_fields(simplified + [br_comps])
            basis_vecs = stacked[:-1]
            target = stacked[-1]
            cols = list(zip(*basis_vecs))
            try:
                sol = linalg.solve([list(c) for c in cols], list(target))
                structure[(i, j)] = tuple(sol)
            except linalg.InconsistentSystemError:
                structure[(i, j)] = None
                failures.append((i, j))
    ncc = sum(1 for f in fields if is_non_cartan(f))
    return LieAlgebraReport(tuple(fields), structure, independent,
                            abelian, ncc, tuple(failures))
