"""Minimal exact computer-algebra core.

Expressions are kept in a canonical rational normal form: a pair of
multivariate polynomials (numerator, denominator) with Fraction
coefficients over a vocabulary of atoms.  Atoms are either plain symbols
(independent variable, dependent variables, jet derivatives, parameters)
or applications of opaque function symbols whose arguments are again
expressions.  Exponents are positive integers; negative powers live in
the denominator.  The zero test is decidable on the opaque-free
fragment; a seeded numeric-sampling fallback covers identities involving
opaque functions.
"""

from __future__ import annotations

import enum
import math
import random
import zlib
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence, Union

__all__ = [
    "Symbol", "Call", "Expression", "RewriteRule", "ZeroStatus",
    "indep", "dep", "jet", "param", "func", "call",
    "const", "atom_expr", "sym", "zero", "one",
    "monomial_expression", "format_monomial",
    "normalize", "differentiate", "substitute", "replace_atoms",
    "apply_rules", "collect", "is_zero", "zero_status", "evaluate",
    "parse", "format_expression", "ParseContext", "ParseError",
    "CollectError", "CyclicBindingError", "OpaqueArgumentError",
]

INDEP = "indep"
DEP = "dep"
JET = "jet"
PARAM = "param"
OPAQUE = "opaque"

_KIND_RANK = {INDEP: 0, DEP: 1, JET: 2, PARAM: 3, OPAQUE: 4}


class CollectError(ValueError):
    """Non-polynomial dependence on a collection variable."""


class CyclicBindingError(ValueError):
    """Substitution bindings form a cycle."""


class OpaqueArgumentError(ValueError):
    """A variable occurs inside an opaque-function argument where a
    polynomial operation was requested."""


# ---------------------------------------------------------------------------
# Symbols and atoms


@dataclass(frozen=True)
class Symbol:
    """A named atomic symbol; structural identity on all fields."""

    name: str
    kind: str
    index: int = 0
    order: int = 0
    arity: int = 0
    dorders: tuple = ()

    def __post_init__(self):
        if self.kind == JET and self.order == 0:
            object.__setattr__(self, "kind", DEP)
        if self.kind == JET and self.order < 0:
            raise ValueError("jet derivative order must be >= 0")
        if self.kind == OPAQUE:
            if self.arity < 1:
                raise ValueError("opaque function arity must be >= 1")
            if len(self.dorders) != self.arity or any(d < 0 for d in self.dorders):
                raise ValueError("bad derivative orders %r" % (self.dorders,))

    def sort_key(self):
        return (_KIND_RANK[self.kind], self.index, self.order,
                self.name, self.dorders, ())

    def d(self, slot: int = 0) -> "Symbol":
        """The function symbol with the derivative order of one argument
        slot raised by one."""
        if self.kind != OPAQUE:
            raise ValueError("d() applies to opaque function symbols")
        ds = list(self.dorders)
        ds[slot] += 1
        return Symbol(self.name, OPAQUE, arity=self.arity, dorders=tuple(ds))

    def base(self) -> "Symbol":
        if self.kind != OPAQUE:
            raise ValueError("base() applies to opaque function symbols")
        return Symbol(self.name, OPAQUE, arity=self.arity,
                      dorders=(0,) * self.arity)


def indep(name: str = "x") -> Symbol:
    return Symbol(name, INDEP)


def dep(index: int, name: str = None) -> Symbol:
    return Symbol(name or "y%d" % index, DEP, index=index)


def jet(index: int, order: int, name: str = None) -> Symbol:
    return Symbol(name or "y%d" % index, JET, index=index, order=order)


def param(name: str) -> Symbol:
    return Symbol(name, PARAM)


def func(name: str, arity: int = 1, dorders: tuple = None) -> Symbol:
    return Symbol(name, OPAQUE, arity=arity,
                  dorders=tuple(dorders) if dorders else (0,) * arity)


@dataclass(frozen=True)
class Call:
    """An opaque function symbol applied to expression arguments."""

    head: Symbol
    args: tuple

    def __post_init__(self):
        if self.head.kind != OPAQUE:
            raise ValueError("Call head must be an opaque function symbol")
        if len(self.args) != self.head.arity:
            raise ValueError("arity mismatch for %s: expected %d args, got %d"
                             % (self.head.name, self.head.arity, len(self.args)))

    def sort_key(self):
        return (4, 0, 0, self.head.name, self.head.dorders,
                tuple(a.sort_key() for a in self.args))


Atom = Union[Symbol, Call]

# A monomial is a tuple of (atom, positive-exponent) pairs sorted by the
# atom sort key; terms are a tuple of (monomial, Fraction) pairs sorted
# by monomial key.

_ONE_MON = ()


def _mon_key(mon):
    return tuple((a.sort_key(), e) for a, e in mon)


def _mk_mon(powers: dict) -> tuple:
    items = [(a, e) for a, e in powers.items() if e != 0]
    items.sort(key=lambda ae: ae[0].sort_key())
    return tuple(items)


def _mon_mul(m1, m2):
    powers = dict(m1)
    for a, e in m2:
        powers[a] = powers.get(a, 0) + e
    return _mk_mon(powers)


def _terms_from_dict(d: dict) -> tuple:
    items = [(m, c) for m, c in d.items() if c != 0]
    items.sort(key=lambda mc: _mon_key(mc[0]))
    return tuple(items)


def _tadd(a: dict, b: Iterable) -> dict:
    for m, c in b:
        a[m] = a.get(m, Fraction(0)) + c
        if a[m] == 0:
            del a[m]
    return a


def _tmul(a, b) -> dict:
    out = {}
    for m1, c1 in a:
        for m2, c2 in b:
            m = _mon_mul(m1, m2)
            out[m] = out.get(m, Fraction(0)) + c1 * c2
            if out[m] == 0:
                del out[m]
    return out


_ONE_TERMS = ((_ONE_MON, Fraction(1)),)


# ---------------------------------------------------------------------------
# Expressions


@dataclass(frozen=True)
class Expression:
    """An immutable expression in canonical rational normal form."""

    num: tuple
    den: tuple

    # -- construction -------------------------------------------------

    @staticmethod
    def _make(num, den) -> "Expression":
        if isinstance(num, dict):
            num = _terms_from_dict(num)
        if isinstance(den, dict):
            den = _terms_from_dict(den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            return Expression((), _ONE_TERMS)
        num, den = _cancel_monomial_gcd(num, den)
        # make the denominator's leading coefficient one
        lead = den[0][1]
        if lead != 1:
            num = tuple((m, c / lead) for m, c in num)
            den = tuple((m, c / lead) for m, c in den)
        # constant-multiple collapse: num == k * den
        if len(num) == len(den) and den != _ONE_TERMS:
            ratio = None
            for (mn, cn), (md, cd) in zip(num, den):
                if mn != md:
                    ratio = None
                    break
                r = cn / cd
                if ratio is None:
                    ratio = r
                elif r != ratio:
                    ratio = None
                    break
            if ratio is not None:
                return Expression(((_ONE_MON, ratio),), _ONE_TERMS)
        return Expression(num, den)

    # -- predicates ---------------------------------------------------

    def is_rational_zero(self) -> bool:
        return not self.num

    def is_constant(self) -> bool:
        return self.den == _ONE_TERMS and (
            not self.num or (len(self.num) == 1 and self.num[0][0] == _ONE_MON))

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("not a constant: %s" % format_expression(self))
        return self.num[0][1] if self.num else Fraction(0)

    # -- traversal ----------------------------------------------------

    def atoms(self) -> Iterator[Atom]:
        """All atoms, including those nested in opaque-call arguments."""
        seen = set()
        stack = [self]
        while stack:
            e = stack.pop()
            for terms in (e.num, e.den):
                for mon, _ in terms:
                    for a, _exp in mon:
                        if a in seen:
                            continue
                        seen.add(a)
                        yield a
                        if isinstance(a, Call):
                            stack.extend(a.args)

    def symbols(self) -> Iterator[Symbol]:
        for a in self.atoms():
            if isinstance(a, Call):
                yield a.head
            else:
                yield a

    def contains(self, s: Symbol) -> bool:
        for a in self.atoms():
            if isinstance(a, Call):
                if a.head == s or a.head.base() == s:
                    return True
            elif a == s:
                return True
        return False

    def has_opaque(self) -> bool:
        return any(isinstance(a, Call) for a in self.atoms())

    def max_jet_order(self, index: int = None) -> int:
        best = -1
        for a in self.atoms():
            if isinstance(a, Symbol) and a.kind in (DEP, JET):
                if index is None or a.index == index:
                    best = max(best, a.order)
        return best

    def sort_key(self):
        return (tuple((_mon_key(m), c) for m, c in self.num),
                tuple((_mon_key(m), c) for m, c in self.den))

    # -- arithmetic ---------------------------------------------------

    @staticmethod
    def _coerce(v) -> "Expression":
        if isinstance(v, Expression):
            return v
        if isinstance(v, (int, Fraction)):
            return const(v)
        return NotImplemented

    def __add__(self, other):
        other = Expression._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den == other.den:
            return Expression._make(_tadd(dict(self.num), other.num), self.den)
        num = _tadd(_tmul(self.num, other.den), _terms_from_dict(_tmul(other.num, self.den)))
        return Expression._make(num, _tmul(self.den, other.den))

    __radd__ = __add__

    def __neg__(self):
        return Expression._make(tuple((m, -c) for m, c in self.num), self.den)

    def __sub__(self, other):
        other = Expression._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = Expression._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Expression._make(_tmul(self.num, other.num),
                                _tmul(self.den, other.den))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = Expression._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_rational_zero():
            raise ZeroDivisionError("division by symbolic zero")
        return Expression._make(_tmul(self.num, other.den),
                                _tmul(self.den, other.num))

    def __rtruediv__(self, other):
        return Expression._coerce(other) / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            raise TypeError("exponents must be integers")
        if k < 0:
            if self.is_rational_zero():
                raise ZeroDivisionError("zero to a negative power")
            return Expression._make(self.den, self.num) ** (-k)
        result = one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __str__(self):
        return format_expression(self)

    def __repr__(self):
        return "Expression(%s)" % format_expression(self)


def _cancel_monomial_gcd(num, den):
    """Divide out the largest monomial (and rational content) common to
    every term of both numerator and denominator."""
    common = dict(num[0][0])
    for terms in (num, den):
        for mon, _ in terms:
            if not common:
                break
            powers = dict(mon)
            for a in list(common):
                if a in powers:
                    common[a] = min(common[a], powers[a])
                else:
                    del common[a]
    if common:
        g = _mk_mon(common)
        num = tuple((_mon_sub(m, g), c) for m, c in num)
        den = tuple((_mon_sub(m, g), c) for m, c in den)
        num = _terms_from_dict(dict(num))
        den = _terms_from_dict(dict(den))
    return num, den


def _mon_sub(mon, g):
    powers = dict(mon)
    for a, e in g:
        powers[a] -= e
    return _mk_mon(powers)


_ZERO = Expression((), _ONE_TERMS)
_ONE = Expression(_ONE_TERMS, _ONE_TERMS)


def zero() -> Expression:
    return _ZERO


def one() -> Expression:
    return _ONE


def const(v) -> Expression:
    c = Fraction(v)
    if c == 0:
        return _ZERO
    return Expression(((_ONE_MON, c),), _ONE_TERMS)


def atom_expr(a: Atom) -> Expression:
    return Expression(((((a, 1),), Fraction(1)),), _ONE_TERMS)


def sym(s: Symbol) -> Expression:
    """Expression wrapping a single symbol atom."""
    return atom_expr(s)


def call(head: Symbol, *args) -> Expression:
    args = tuple(Expression._coerce(a) for a in args)
    return atom_expr(Call(head, args))


def normalize(e: Expression) -> Expression:
    """Expressions are canonical by construction; normalize is the
    identity and is exposed for contract symmetry (idempotent)."""
    return e


# ---------------------------------------------------------------------------
# Differentiation


def differentiate(e: Expression, s: Symbol) -> Expression:
    """Partial derivative treating distinct jet symbols as independent
    coordinates; the chain rule through opaque calls raises the
    function's derivative order."""
    if s.kind == OPAQUE:
        raise ValueError("cannot differentiate with respect to a function symbol")
    if not e.contains(s):
        return _ZERO
    n = Expression(e.num, _ONE_TERMS)
    d = Expression(e.den, _ONE_TERMS)
    dn = _diff_poly(e.num, s)
    if e.den == _ONE_TERMS:
        return dn
    dd = _diff_poly(e.den, s)
    return (dn * d - n * dd) / (d * d)


def _diff_poly(terms, s: Symbol) -> Expression:
    total = _ZERO
    for mon, c in terms:
        for i, (a, k) in enumerate(mon):
            da = _diff_atom(a, s)
            if da.is_rational_zero():
                continue
            rest = {b: e for b, e in mon}
            rest[a] -= 1
            piece = Expression(((_mk_mon(rest), c * k),), _ONE_TERMS)
            total = total + piece * da
    return total


def _diff_atom(a: Atom, s: Symbol) -> Expression:
    if isinstance(a, Symbol):
        return _ONE if a == s else _ZERO
    total = _ZERO
    for slot, arg in enumerate(a.args):
        darg = differentiate(arg, s)
        if darg.is_rational_zero():
            continue
        total = total + atom_expr(Call(a.head.d(slot), a.args)) * darg
    return total


# ---------------------------------------------------------------------------
# Substitution


def substitute(e: Expression, bindings: Mapping[Symbol, Expression]) -> Expression:
    """Simultaneous substitution of symbols by expressions, then
    renormalization.  Bindings must be acyclic."""
    if not bindings:
        return e
    bindings = {s: Expression._coerce(v) for s, v in bindings.items()}
    _check_acyclic(bindings)
    return _subst(e, bindings)


def _check_acyclic(bindings):
    graph = {}
    for s, v in bindings.items():
        graph[s] = [t for t in bindings if t != s and v.contains(t)]
        if v.contains(s):
            raise CyclicBindingError("binding for %s refers to itself" % s.name)
    state = {}

    def visit(node):
        state[node] = 1
        for nxt in graph[node]:
            if state.get(nxt) == 1:
                raise CyclicBindingError("cyclic binding through %s" % nxt.name)
            if nxt not in state:
                visit(nxt)
        state[node] = 2

    for node in graph:
        if node not in state:
            visit(node)


def _subst(e: Expression, bindings) -> Expression:
    def poly(terms):
        total = _ZERO
        for mon, c in terms:
            piece = const(c)
            for a, k in mon:
                piece = piece * _subst_atom(a, bindings) ** k
            total = total + piece
        return total

    n = poly(e.num)
    if e.den == _ONE_TERMS:
        return n
    return n / poly(e.den)


def _subst_atom(a: Atom, bindings) -> Expression:
    if isinstance(a, Symbol):
        return bindings.get(a, atom_expr(a))
    args = tuple(_subst(arg, bindings) for arg in a.args)
    return atom_expr(Call(a.head, args))


def replace_atoms(e: Expression, mapping: Mapping[Atom, Expression]) -> Expression:
    """Replace whole atoms (including opaque calls) by expressions."""
    def poly(terms):
        total = _ZERO
        for mon, c in terms:
            piece = const(c)
            for a, k in mon:
                piece = piece * rep(a) ** k
            total = total + piece
        return total

    def rep(a):
        if a in mapping:
            return mapping[a]
        if isinstance(a, Call):
            args = tuple(replace_atoms(arg, mapping) for arg in a.args)
            return atom_expr(Call(a.head, args))
        return atom_expr(a)

    n = poly(e.num)
    if e.den == _ONE_TERMS:
        return n
    return n / poly(e.den)


# ---------------------------------------------------------------------------
# Rewrite rules


@dataclass(frozen=True)
class RewriteRule:
    """Replace every occurrence of a unary opaque head (at its stated or
    any higher derivative order, lifting by differentiation) by an
    expression.  Termination is guaranteed at construction: the
    replacement must not contain the pattern head."""

    head: Symbol
    replacement: Expression
    var: Symbol

    def __post_init__(self):
        if self.head.kind != OPAQUE or self.head.arity != 1:
            raise ValueError("rewrite heads must be unary opaque symbols")
        d = self.head.dorders[0]
        for a in self.replacement.atoms():
            if isinstance(a, Call) and a.head.name == self.head.name \
                    and a.head.arity == 1 and a.head.dorders[0] >= d:
                raise ValueError(
                    "replacement for %s contains the pattern head" % self.head.name)


def apply_rules(e: Expression, rules: Sequence[RewriteRule],
                max_passes: int = 64) -> Expression:
    """Apply rules to a fixed point.  Higher derivative orders of a rule
    head are reduced by differentiating the replacement."""
    if not rules:
        return e
    ordered = sorted(rules, key=lambda r: -r.head.dorders[0])
    for _ in range(max_passes):
        mapping = {}
        for a in e.atoms():
            if not isinstance(a, Call) or a.head.arity != 1:
                continue
            for rule in ordered:
                k = a.head.dorders[0]
                d = rule.head.dorders[0]
                if a.head.name == rule.head.name and k >= d \
                        and a.args == (sym(rule.var),):
                    repl = rule.replacement
                    for _i in range(k - d):
                        repl = differentiate(repl, rule.var)
                    mapping[a] = repl
                    break
        if not mapping:
            return e
        e = replace_atoms(e, mapping)
    raise RuntimeError("rewrite did not reach a fixed point")


# ---------------------------------------------------------------------------
# Coefficient collection


def collect(e: Expression, variables: Sequence[Symbol]) -> dict:
    """Write e as a polynomial in the given symbols; return a map from
    monomial (tuple of (symbol, exponent) pairs) to coefficient."""
    vset = set(variables)
    for a in e.atoms():
        if isinstance(a, Call):
            for arg in a.args:
                for s in vset:
                    if arg.contains(s):
                        raise CollectError(
                            "%s occurs inside an opaque argument" % s.name)
    for mon, _ in e.den:
        for a, _k in mon:
            if isinstance(a, Symbol) and a in vset:
                raise CollectError(
                    "non-polynomial dependence on %s" % a.name)
    den = Expression(e.den, _ONE_TERMS)
    groups = {}
    for mon, c in e.num:
        var_part = {}
        rest = {}
        for a, k in mon:
            if isinstance(a, Symbol) and a in vset:
                var_part[a] = k
            else:
                rest[a] = k
        key = _mk_mon(var_part)
        piece = Expression(((_mk_mon(rest), c),), _ONE_TERMS)
        groups[key] = groups.get(key, _ZERO) + piece
    out = {}
    for key in sorted(groups, key=_mon_key):
        coeff = groups[key] / den
        if not coeff.is_rational_zero():
            out[key] = coeff
    return out


def monomial_expression(mon) -> Expression:
    out = _ONE
    for a, k in mon:
        out = out * atom_expr(a) ** k
    return out


def format_monomial(mon) -> str:
    if not mon:
        return "1"
    return format_expression(monomial_expression(mon))


# ---------------------------------------------------------------------------
# Zero testing


class ZeroStatus(enum.Enum):
    SYMBOLIC_ZERO = "symbolic-zero"
    NUMERIC_ZERO = "numeric-zero"
    NONZERO = "nonzero"


SAMPLES = 20
ABS_TOL = 1e-8


def zero_status(e: Expression, rules: Sequence[RewriteRule] = (),
                seed: int = 0) -> ZeroStatus:
    r = apply_rules(e, rules)
    if r.is_rational_zero():
        return ZeroStatus.SYMBOLIC_ZERO
    if not r.has_opaque():
        return ZeroStatus.NONZERO
    source_mode = any(rule.head.name in ("u", "v") for rule in rules)
    rng = random.Random(seed)
    ok = True
    for _ in range(SAMPLES):
        val = _sample_value(r, rng, source_mode)
        if abs(val) > ABS_TOL:
            ok = False
            break
    return ZeroStatus.NUMERIC_ZERO if ok else ZeroStatus.NONZERO


def is_zero(e: Expression, rules: Sequence[RewriteRule] = (),
            seed: int = 0) -> bool:
    return zero_status(e, rules, seed) is not ZeroStatus.NONZERO


def _sample_value(e: Expression, rng: random.Random, source_mode: bool) -> float:
    symbols = sorted(
        {a for a in e.atoms() if isinstance(a, Symbol)},
        key=lambda s: s.sort_key())
    for _attempt in range(60):
        env = {s: rng.uniform(0.4, 1.6) for s in symbols}
        try:
            nv = _eval_poly(e.num, env, source_mode)
            dv = _eval_poly(e.den, env, source_mode)
        except (ValueError, OverflowError, ZeroDivisionError):
            continue
        if abs(dv) < 1e-6:
            continue
        return nv / dv
    raise RuntimeError("could not find a pole-free sample point")


def evaluate(e: Expression, env: Mapping[Symbol, float],
             source_mode: bool = False) -> float:
    """Numeric evaluation with the standard opaque-function test
    instantiations."""
    dv = _eval_poly(e.den, env, source_mode)
    return _eval_poly(e.num, env, source_mode) / dv


def _eval_poly(terms, env, source_mode) -> float:
    total = 0.0
    for mon, c in terms:
        v = float(c)
        for a, k in mon:
            v *= _eval_atom(a, env, source_mode) ** k
        total += v
    return total


def _eval_atom(a: Atom, env, source_mode) -> float:
    if isinstance(a, Symbol):
        return env[a]
    args = [evaluate(arg, env, source_mode) for arg in a.args]
    name = a.head.name
    ds = a.head.dorders
    if source_mode and name in ("u", "v", "q") and a.head.arity == 1:
        k = ds[0]
        if name == "u":
            return math.cos(args[0] + k * math.pi / 2)
        if name == "v":
            return math.sin(args[0] + k * math.pi / 2)
        return 1.0 if k == 0 else 0.0
    # generic smooth test function: f(t1..tn) = sin(3 s) + s^2 with
    # s = sum(c_i t_i), coefficients derived deterministically from name
    cs = [1.0 + (zlib.crc32(("%s#%d" % (name, i)).encode()) % 5) / 7.0
          for i in range(a.head.arity)]
    s = sum(ci * ti for ci, ti in zip(cs, args))
    k = sum(ds)
    scale = 1.0
    for ci, di in zip(cs, ds):
        scale *= ci ** di
    val = 3.0 ** k * math.sin(3.0 * s + k * math.pi / 2)
    if k == 0:
        val += s * s
    elif k == 1:
        val += 2.0 * s
    elif k == 2:
        val += 2.0
    return scale * val


# ---------------------------------------------------------------------------
# Parsing


class ParseError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__("%s (at position %d)" % (message, pos))
        self.pos = pos


class ParseContext:
    """Resolution of identifiers to symbols.

    Dependent variables are y1..ym; for m == 1 the alias `y` (and `p`
    for y') applies, for m == 2 the aliases `y` and `w`.  Identifiers
    followed by `(` are opaque functions (arity fixed on first use);
    any other identifier is a parameter.
    """

    def __init__(self, m: int = 1, dep_names: Sequence[str] = None,
                 indep_name: str = "x", vector_field: bool = False):
        self.m = m
        if dep_names is None:
            if m == 1:
                dep_names = ("y",)
            elif m == 2:
                dep_names = ("y", "w")
            else:
                dep_names = tuple("y%d" % i for i in range(1, m + 1))
        self.dep_names = tuple(dep_names)
        self.indep_name = indep_name
        self.vector_field = vector_field
        self.func_arities: dict = {}

    def resolve(self, name: str, primes: int, pos: int) -> Symbol:
        if name == self.indep_name:
            if primes:
                raise ParseError("the independent variable takes no primes", pos)
            return Symbol(name, INDEP)
        if name in self.dep_names:
            i = self.dep_names.index(name) + 1
            return jet(i, primes, name=name) if primes else dep(i, name=name)
        if name.startswith("y") and name[1:].isdigit():
            i = int(name[1:])
            if 1 <= i <= self.m:
                cname = self.dep_names[i - 1]
                return jet(i, primes, name=cname) if primes else dep(i, name=cname)
        if name == "p" and self.m == 1:
            return jet(1, primes + 1, name=self.dep_names[0])
        if primes:
            raise ParseError("unknown primed symbol %r" % name, pos)
        return param(name)

    def resolve_func(self, name: str, primes: int, nargs: int, pos: int) -> Symbol:
        known = self.func_arities.get(name)
        if known is not None and known != nargs:
            raise ParseError("arity mismatch for %s: %d vs %d"
                             % (name, known, nargs), pos)
        self.func_arities[name] = nargs
        if primes and nargs != 1:
            raise ParseError("primes only apply to unary functions", pos)
        ds = tuple(primes if i == 0 else 0 for i in range(nargs))
        return Symbol(name, OPAQUE, arity=nargs, dorders=ds)


_TOKEN_OPS = set("+-*/^(),")


def _tokenize(text: str):
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(("int", text[i:j], i))
            i = j
            continue
        if ch.isalpha():
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            primes = 0
            while j < n and text[j] == "'":
                primes += 1
                j += 1
            tokens.append(("ident", text[i:j - primes] if primes else text[i:j], i, primes))
            i = j
            continue
        if ch in _TOKEN_OPS:
            tokens.append(("op", ch, i))
            i += 1
            continue
        raise ParseError("unexpected character %r" % ch, i)
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, tokens, ctx: ParseContext):
        self.tokens = tokens
        self.pos = 0
        self.ctx = ctx

    def peek(self):
        return self.tokens[self.pos]

    def next(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, op):
        tok = self.next()
        if tok[0] != "op" or tok[1] != op:
            raise ParseError("expected %r" % op, tok[2])

    def parse_expr(self) -> Expression:
        e = self.parse_term()
        while True:
            tok = self.peek()
            if tok[0] == "op" and tok[1] in "+-":
                self.next()
                rhs = self.parse_term()
                e = e + rhs if tok[1] == "+" else e - rhs
            else:
                return e

    def parse_term(self) -> Expression:
        e = self.parse_factor()
        while True:
            tok = self.peek()
            if tok[0] == "op" and tok[1] in "*/":
                self.next()
                rhs = self.parse_factor()
                if tok[1] == "*":
                    e = e * rhs
                else:
                    if rhs.is_rational_zero():
                        raise ParseError("division by zero", tok[2])
                    e = e / rhs
            else:
                return e

    def parse_factor(self) -> Expression:
        tok = self.peek()
        if tok[0] == "op" and tok[1] in "+-":
            self.next()
            e = self.parse_factor()
            return e if tok[1] == "+" else -e
        return self.parse_power()

    def parse_power(self) -> Expression:
        base = self.parse_atom()
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "^":
            self.next()
            sign = 1
            tok2 = self.peek()
            if tok2[0] == "op" and tok2[1] == "-":
                self.next()
                sign = -1
                tok2 = self.peek()
            if tok2[0] != "int":
                raise ParseError("expected an integer exponent", tok2[2])
            self.next()
            k = sign * int(tok2[1])
            if k == 0:
                raise ParseError("zero exponents are not allowed", tok2[2])
            if base.is_rational_zero() and k < 0:
                raise ParseError("zero to a negative power", tok2[2])
            return base ** k
        return base

    def parse_atom(self) -> Expression:
        tok = self.next()
        if tok[0] == "int":
            return const(int(tok[1]))
        if tok[0] == "op" and tok[1] == "(":
            e = self.parse_expr()
            self.expect_op(")")
            return e
        if tok[0] == "ident":
            name, start, primes = tok[1], tok[2], tok[3]
            nxt = self.peek()
            if nxt[0] == "op" and nxt[1] == "(":
                self.next()
                args = [self.parse_expr()]
                while True:
                    t = self.peek()
                    if t[0] == "op" and t[1] == ",":
                        self.next()
                        args.append(self.parse_expr())
                    else:
                        break
                self.expect_op(")")
                head = self.ctx.resolve_func(name, primes, len(args), start)
                return atom_expr(Call(head, tuple(args)))
            return atom_expr(self.ctx.resolve(name, primes, start))
        raise ParseError("unexpected token %r" % (tok[1],), tok[2])


def parse(text: str, ctx: ParseContext = None) -> Expression:
    """Parse the expression grammar into a normalized Expression."""
    ctx = ctx or ParseContext()
    parser = _Parser(_tokenize(text), ctx)
    e = parser.parse_expr()
    tok = parser.peek()
    if tok[0] != "end":
        raise ParseError("trailing input %r" % (tok[1],), tok[2])
    return e


# ---------------------------------------------------------------------------
# Printing


def _format_atom(a: Atom) -> str:
    if isinstance(a, Symbol):
        if a.kind == JET:
            return a.name + "'" * a.order
        return a.name
    head = a.head
    if head.arity == 1:
        name = head.name + "'" * head.dorders[0]
    elif any(head.dorders):
        name = head.name + "_d" + "".join(str(d) for d in head.dorders)
    else:
        name = head.name
    return "%s(%s)" % (name, ", ".join(format_expression(arg) for arg in a.args))


def _format_terms(terms) -> str:
    if not terms:
        return "0"
    parts = []
    for i, (mon, c) in enumerate(terms):
        pieces = []
        mag = abs(c)
        if mag != 1 or not mon:
            pieces.append(str(mag))
        for a, k in mon:
            s = _format_atom(a)
            pieces.append("%s^%d" % (s, k) if k != 1 else s)
        body = "*".join(pieces)
        if i == 0:
            parts.append(body if c > 0 else "-" + body)
        else:
            parts.append((" + " if c > 0 else " - ") + body)
    return "".join(parts)


def format_expression(e: Expression) -> str:
    """Deterministic printing; output re-parses to an equal Expression."""
    ns = _format_terms(e.num)
    if e.den == _ONE_TERMS:
        return ns
    if len(e.num) > 1 or (e.num and e.num[0][1] < 0):
        ns = "(" + ns + ")"
    return "%s/(%s)" % (ns, _format_terms(e.den))
