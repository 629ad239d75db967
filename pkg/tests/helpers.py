"""Shared generators for the randomized property suites."""

import random

from noncartan import (
    JetContext, VectorField, const, indep, jet, param, scalar_context, sym,
)

X = indep("x")


def random_expression(rng: random.Random, depth: int = 3, atoms=None):
    if atoms is None:
        atoms = [sym(X), sym(jet(1, 0, "y")), sym(jet(1, 1, "y")),
                 sym(param("a")), sym(param("b"))]
    if depth == 0 or rng.random() < 0.3:
        if rng.random() < 0.35:
            return const(rng.randint(-4, 4))
        return rng.choice(atoms)
    op = rng.random()
    left = random_expression(rng, depth - 1, atoms)
    right = random_expression(rng, depth - 1, atoms)
    if op < 0.4:
        return left + right
    if op < 0.7:
        return left - right
    if op < 0.95:
        return left * right
    if right.is_rational_zero():
        right = right + const(1)
    return left / right


def random_point_field(rng: random.Random, ctx: JetContext = None):
    ctx = ctx or scalar_context()
    coords = [sym(ctx.x)] + [sym(ctx.y(j)) for j in range(1, ctx.m + 1)]

    def component():
        e = const(0)
        for _ in range(rng.randint(1, 3)):
            term = const(rng.randint(-3, 3))
            for _ in range(rng.randint(0, 2)):
                term = term * rng.choice(coords)
            e = e + term
        return e

    return VectorField(component(), tuple(component()
                                          for _ in range(ctx.m)), ctx)
