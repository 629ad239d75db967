"""Decision procedures: the cubic-in-p necessary linearization test,
the isotropy test for canonical-class membership of linear systems, the
trace-removal residual verifier, and the non-Cartan-existence decision
for 2x2 systems."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .expr import (
    Call, Expression, OpaqueArgumentError, Symbol, ZeroStatus, call, collect,
    const, differentiate, func, is_zero, one, param, sym, zero, zero_status,
)
from .jet import JetContext, VectorField
from .symmetry import (
    DeterminingSystem, OdeSystem, determining_equations, invariance_residual,
)
from .catalog import SourceEquation, non_cartan_generators

__all__ = [
    "LinearSystemSpec", "ClassificationVerdict", "NotInNormalFormError",
    "TraceReductionError", "cubic_in_p_test", "isotropy_test",
    "non_cartan_existence_2x2", "determining_system_2x2",
    "trace_free_reduce", "classify_linear_system",
    "brute_force_non_cartan_search",
]


class NotInNormalFormError(ValueError):
    pass


class TraceReductionError(ValueError):
    def __init__(self, residual: Expression):
        super().__init__("trace-removal residual is nonzero: %s" % residual)
        self.residual = residual


@dataclass(frozen=True)
class LinearSystemSpec:
    """y^(n) + A_{n-1} y^(n-1) + ... + A_0 y = b with matrix
    coefficients depending on x only."""

    m: int
    n: int
    matrices: tuple      # (A_{n-1}, ..., A_0), each an m x m tuple of tuples
    forcing: tuple = None
    ctx: JetContext = None

    def __post_init__(self):
        mats = tuple(tuple(tuple(row) for row in mat) for mat in self.matrices)
        object.__setattr__(self, "matrices", mats)
        if len(mats) != self.n:
            raise ValueError("expected %d coefficient matrices" % self.n)
        for mat in mats:
            if len(mat) != self.m or any(len(row) != self.m for row in mat):
                raise ValueError("coefficient matrices must be %d x %d"
                                 % (self.m, self.m))
        if self.ctx is None:
            object.__setattr__(self, "ctx", JetContext(self.m, self.n))
        elif self.ctx.m != self.m or self.ctx.order != self.n:
            raise ValueError("context does not match the system shape")

    @property
    def a0(self):
        return self.matrices[-1]

    @property
    def a1(self):
        if self.n < 2:
            raise ValueError("no first-order coefficient for n = 1")
        return self.matrices[-2]

    def ode_system(self, rules=()) -> OdeSystem:
        ctx = self.ctx
        rhs = []
        for i in range(self.m):
            f = zero()
            for k, mat in enumerate(self.matrices):
                order = self.n - 1 - k
                for j in range(self.m):
                    f = f - mat[i][j] * sym(ctx.jet(j + 1, order))
            if self.forcing is not None:
                f = f + self.forcing[i]
            rhs.append(f)
        return OdeSystem(ctx, tuple(rhs), rules)


@dataclass(frozen=True)
class ClassificationVerdict:
    in_canonical_class: bool
    witnesses: tuple = None
    reason: tuple = ()

    def __post_init__(self):
        if self.witnesses is not None:
            object.__setattr__(self, "witnesses", tuple(self.witnesses))
        object.__setattr__(self, "reason", tuple(self.reason))
        if self.in_canonical_class != (self.witnesses is not None):
            raise ValueError("witnesses present iff in the canonical class")


# ---------------------------------------------------------------------------
# Cubic-in-p test


def _poly_coeffs(e: Expression, p: Symbol) -> dict:
    groups = collect(e, [p])
    out = {}
    for mon, coeff in groups.items():
        deg = mon[0][1] if mon else 0
        out[deg] = coeff
    return out


def cubic_in_p_test(f: Expression, p: Symbol = None) -> bool:
    """True iff f, rational in p = y', is a polynomial of degree at most
    3 in p (the necessary condition for linearizability of y'' = f)."""
    if p is None:
        p = JetContext(1, 2, dep_names=("y",)).jet(1, 1)
    for a in f.atoms():
        if isinstance(a, Call):
            for arg in a.args:
                if arg.contains(p):
                    raise OpaqueArgumentError(
                        "p occurs inside an opaque argument; "
                        "the cubic test does not apply")
    num = Expression(f.num, ((tuple(), Fraction(1)),))
    den = Expression(f.den, ((tuple(), Fraction(1)),))
    ncoef = _poly_coeffs(num, p)
    dcoef = _poly_coeffs(den, p)
    ddeg = max(dcoef) if dcoef else 0
    if ddeg == 0:
        return (max(ncoef) if ncoef else 0) <= 3
    # univariate division of num by den in p over the rational-function
    # coefficient field
    rem = dict(ncoef)
    quot_deg = -1
    lead = dcoef[ddeg]
    while rem:
        rdeg = max(rem)
        if rdeg < ddeg:
            break
        q = rem[rdeg] / lead
        quot_deg = max(quot_deg, rdeg - ddeg)
        for d, c in dcoef.items():
            k = rdeg - ddeg + d
            acc = rem.get(k, zero()) - q * c
            if acc.is_rational_zero():
                rem.pop(k, None)
            else:
                rem[k] = acc
    if any(not is_zero(c) for c in rem.values()):
        return False
    return quot_deg <= 3


# ---------------------------------------------------------------------------
# Isotropy and trace removal


def isotropy_test(spec: LinearSystemSpec, rules=()) -> bool:
    """True iff the normal-form system y'' = M y is isotropic, i.e. M is
    a scalar multiple of the identity."""
    if spec.n != 2:
        raise NotInNormalFormError("isotropy test requires a second-order system")
    for row in spec.a1:
        for entry in row:
            if not entry.is_rational_zero():
                raise NotInNormalFormError(
                    "system is not in normal form (first-order term present)")
    m = spec.m
    trace = zero()
    for i in range(m):
        trace = trace + spec.a0[i][i]
    mean = trace / m
    for i in range(m):
        for j in range(m):
            entry = spec.a0[i][j] - (mean if i == j else zero())
            if zero_status(entry, rules) is ZeroStatus.NONZERO:
                return False
    return True


def trace_free_reduce(spec: LinearSystemSpec, q: Expression, rules=()):
    """Verify that the candidate auxiliary function q satisfies
    -2 (a1 + a4) q^2 + 3 q'^2 - 2 q q'' = 0 and return the trace-free
    coefficients (A, B, C) of the reduced system, expressed in the
    original variable (divide by q^2)."""
    if spec.m != 2 or spec.n != 2:
        raise ValueError("trace removal is implemented for 2 x 2 systems")
    for row in spec.a1:
        for entry in row:
            if not entry.is_rational_zero():
                raise NotInNormalFormError("system is not in normal form")
    x = spec.ctx.x
    # y'' = M y with M = -A_0
    m11, m12 = -spec.a0[0][0], -spec.a0[0][1]
    m21, m22 = -spec.a0[1][0], -spec.a0[1][1]
    trace = m11 + m22
    qp = differentiate(q, x)
    qpp = differentiate(qp, x)
    residual = -2 * trace * q ** 2 + 3 * qp ** 2 - 2 * q * qpp
    if zero_status(residual, rules) is ZeroStatus.NONZERO:
        raise TraceReductionError(residual)
    half = trace / 2
    scale = q ** -2
    return ((m11 - half) * scale, m12 * scale, m21 * scale)


# ---------------------------------------------------------------------------
# The 2x2 decision and its determining system


def _normal_form_2x2(a: Expression, b: Expression, c: Expression,
                     rules=()) -> OdeSystem:
    """The trace-free normal form y'' = A y + B w, w'' = C y - A w."""
    ctx = JetContext(2, 2, dep_names=("y", "w"))
    y = sym(ctx.y(1))
    w = sym(ctx.y(2))
    return OdeSystem(ctx, (a * y + b * w, c * y - a * w), rules)


def non_cartan_existence_2x2(a: Expression, b: Expression, c: Expression,
                             rules=()) -> ClassificationVerdict:
    """A trace-free 2x2 normal form admits a non-Cartan symmetry iff it
    is the trivial system (A = B = C = 0)."""
    statuses = [(name, zero_status(e, rules))
                for name, e in (("A", a), ("B", b), ("C", c))]
    obstructions = [name for name, st in statuses if st is ZeroStatus.NONZERO]
    if obstructions:
        reason = tuple("%s is nonzero" % name for name in obstructions)
        return ClassificationVerdict(False, None, reason)
    reason = []
    for name, st in statuses:
        if st is ZeroStatus.NUMERIC_ZERO:
            reason.append("%s is zero (numeric sampling)" % name)
    src = SourceEquation.trivial()
    ctx = JetContext(2, 2, dep_names=("y", "w"))
    witnesses = non_cartan_generators(2, src, ctx)
    system = _normal_form_2x2(zero(), zero(), zero())
    for wfield in witnesses:
        if not all(is_zero(r) for r in invariance_residual(wfield, system)):
            raise AssertionError("witness failed re-verification")
    return ClassificationVerdict(True, tuple(witnesses), tuple(reason))


def determining_system_2x2(a: Expression, b: Expression, c: Expression,
                           restricted: bool) -> DeterminingSystem:
    """Determining equations for a symmetry of the trace-free 2x2 normal
    form; when restricted, the xi-component is alpha(x) y + beta(x) w +
    gamma(x) with the induced forms of the other components."""
    system = _normal_form_2x2(a, b, c)
    ctx = system.ctx
    x = sym(ctx.x)
    y = sym(ctx.y(1))
    w = sym(ctx.y(2))
    if not restricted:
        args = (x, y, w)
        xi = call(func("xi", 3), *args)
        eta = call(func("eta", 3), *args)
        phi = call(func("phi", 3), *args)
        ansatz = VectorField(xi, (eta, phi), ctx)
        return determining_equations(system, ansatz)
    al = call(func("alpha"), x)
    be = call(func("beta"), x)
    ga = call(func("gamma"), x)
    alp = call(func("alpha", 1, (1,)), x)
    bep = call(func("beta", 1, (1,)), x)
    b1 = call(func("b1"), x)
    b2 = call(func("b2"), x)
    s1 = call(func("s1"), x)
    s2 = call(func("s2"), x)
    k1 = sym(param("k1"))
    k2 = sym(param("k2"))
    xi = al * y + be * w + ga
    eta = bep * y * w + k2 * w + alp * y ** 2 + b1 * y + b2
    phi = alp * y * w + k1 * y + bep * w ** 2 + s1 * w + s2
    ansatz = VectorField(xi, (eta, phi), ctx)
    return determining_equations(system, ansatz)


def classify_linear_system(spec: LinearSystemSpec, rules=()) -> ClassificationVerdict:
    """Canonical-class membership for second-order linear systems in
    normal form, via the isotropy test; witnesses are the non-Cartan
    generators built from the common scalar coefficient."""
    if not isotropy_test(spec, rules):
        reasons = []
        m = spec.m
        trace = zero()
        for i in range(m):
            trace = trace + spec.a0[i][i]
        mean = trace / m
        for i in range(m):
            for j in range(m):
                entry = spec.a0[i][j] - (mean if i == j else zero())
                if zero_status(entry, rules) is ZeroStatus.NONZERO:
                    reasons.append("non-isotropic at entry (%d,%d)"
                                   % (i + 1, j + 1))
        return ClassificationVerdict(False, None, tuple(reasons))
    m = spec.m
    trace = zero()
    for i in range(m):
        trace = trace + spec.a0[i][i]
    q = trace / m          # convention y'' + q y = 0
    src = SourceEquation.for_q(q)
    witnesses = non_cartan_generators(m, src, spec.ctx)
    system = spec.ode_system(src.rules)
    for wfield in witnesses:
        for r in invariance_residual(wfield, system):
            if zero_status(r, src.rules) is ZeroStatus.NONZERO:
                raise AssertionError("witness failed re-verification")
    return ClassificationVerdict(True, tuple(witnesses), ())


# ---------------------------------------------------------------------------
# Brute-force restricted-ansatz search (independent route)


def brute_force_non_cartan_search(a: Expression, b: Expression, c: Expression,
                                  degree_cap: int = 4) -> bool:
    """Search for a non-Cartan symmetry of the trace-free 2x2 normal
    form with xi = alpha(x) y + beta(x) w + gamma(x) and polynomial
    coefficient functions of degree <= degree_cap; the remaining
    components are general quadratics in (y, w) with polynomial
    x-coefficients.  Returns True when some solution of the determining
    equations has alpha != 0 or beta != 0."""
    system = _normal_form_2x2(a, b, c)
    ctx = system.ctx
    x = sym(ctx.x)
    y = sym(ctx.y(1))
    w = sym(ctx.y(2))
    params = []
    noncartan_slots = []

    def poly(tag, deg, flag=False):
        e = zero()
        for d in range(deg + 1):
            pv = param("_%s%d" % (tag, d))
            if flag:
                noncartan_slots.append(len(params))
            params.append(pv)
            e = e + sym(pv) * x ** d
        return e

    xi = poly("al", degree_cap, True) * y + poly("be", degree_cap, True) * w \
        + poly("ga", degree_cap)
    comp_deg = degree_cap + 2
    names = [(i, j) for i in range(3) for j in range(3) if i + j <= 2]
    eta = zero()
    phi = zero()
    for i, j in names:
        eta = eta + poly("e%d%d" % (i, j), comp_deg) * y ** i * w ** j
        phi = phi + poly("f%d%d" % (i, j), comp_deg) * y ** i * w ** j
    ansatz = VectorField(xi, (eta, phi), ctx)
    residuals = invariance_residual(ansatz, system)
    rows = []
    for res in residuals:
        for lin, cst in linalg.linear_equations_in_params(res, params):
            if cst != 0:
                raise AssertionError("homogeneous system expected")
            rows.append([lin.get(p, Fraction(0)) for p in params])
    basis = linalg.nullspace(rows, ncols=len(params))
    for vec in basis:
        if any(vec[i] != 0 for i in noncartan_slots):
            return True
    return False
