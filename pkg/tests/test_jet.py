import pytest

from noncartan import (
    JetContext, JetOrderError, VectorField, one, prolong, scalar_context, sym,
    total_derivative, zero,
)


def test_context_names():
    assert JetContext(1, 2).dep_names == ("y",)
    assert JetContext(2, 2).dep_names == ("y", "w")
    assert JetContext(3, 2).dep_names == ("y1", "y2", "y3")
    with pytest.raises(ValueError):
        JetContext(0, 2)


def test_total_derivative():
    ctx = scalar_context(3)
    x = sym(ctx.x)
    y = sym(ctx.y(1))
    p = sym(ctx.jet(1, 1))
    assert total_derivative(x * y, ctx) == y + x * p
    assert total_derivative(p, ctx) == sym(ctx.jet(1, 2))


def test_total_derivative_order_cap():
    from noncartan import jet
    ctx = scalar_context(2)
    beyond = sym(jet(1, 3, "y"))
    with pytest.raises(JetOrderError):
        total_derivative(beyond, ctx)


def test_point_field_validation():
    ctx = scalar_context()
    p = sym(ctx.jet(1, 1))
    with pytest.raises(ValueError):
        VectorField(p, (zero(),), ctx)
    with pytest.raises(ValueError):
        VectorField(zero(), (zero(), zero()), ctx)


def test_prolongation_coefficients():
    # v = xi d/dx + phi d/dy with xi = x^2, phi = x*y on the second jet:
    # phi^(1) = D phi - y' D xi, phi^(2) = D phi^(1) - y'' D xi
    ctx = scalar_context()
    x = sym(ctx.x)
    y = sym(ctx.y(1))
    p = sym(ctx.jet(1, 1))
    p2 = sym(ctx.jet(1, 2))
    v = VectorField(x ** 2, (x * y,), ctx)
    pf = prolong(v, 2)
    assert pf.coeff(1, 0) == x * y
    assert pf.coeff(1, 1) == y - x * p
    assert pf.coeff(1, 2) == -3 * x * p2


def test_prolongation_cap():
    ctx = scalar_context()
    v = VectorField(one(), (zero(),), ctx)
    with pytest.raises(ValueError):
        prolong(v, 5)
    pf = prolong(v, 4)
    assert pf.coeff(1, 4) == zero()


def test_field_arithmetic():
    ctx = scalar_context()
    x = sym(ctx.x)
    y = sym(ctx.y(1))
    a = VectorField(x, (y,), ctx)
    b = VectorField(y, (x,), ctx)
    s = a + b
    assert s.xi == x + y
    d = s - b
    assert d.xi == x and d.phi[0] == y
    assert a.scale(2).phi[0] == 2 * y


def test_apply_to():
    ctx = scalar_context()
    x = sym(ctx.x)
    y = sym(ctx.y(1))
    v = VectorField(x, (y,), ctx)
    assert v.apply_to(x * y) == 2 * x * y
