import io
import json
import contextlib

import pytest

from noncartan import ParseContext, parse, normalize
from noncartan.cli import (
    CliError, format_vector_field, main, parse_system, parse_vector_field,
)


def run(args):
    out = io.StringIO()
    with contextlib.redirect_stdout(out):
        code = main(args)
    return code, out.getvalue()


# ---------------------------------------------------------------------------
# input DSL


def test_parse_system_scalar():
    system = parse_system("y''=0")
    assert system.ctx.m == 1
    assert system.ctx.order == 2
    assert system.rhs[0].is_rational_zero()


def test_parse_system_homogeneous_form():
    system = parse_system("y1''+y1+0*y2=0; y2''+2*y1+y2=0")
    assert system.ctx.m == 2
    assert system.ctx.dep_names == ("y1", "y2")


def test_parse_system_named_variables():
    system = parse_system("y''=q(x)*y; w''=q(x)*w")
    assert system.ctx.dep_names == ("y", "w")


def test_parse_system_errors():
    with pytest.raises(CliError):
        parse_system("y'' = ")
    with pytest.raises(CliError):
        parse_system("x + 1 = 0")
    with pytest.raises(CliError):
        parse_system("y'' = 0; y'' = 1")
    with pytest.raises(CliError):
        parse_system("y''*y'' = 0")


def test_parse_vector_field():
    system = parse_system("y''=0")
    v = parse_vector_field("y*dx", system.ctx)
    assert v.xi == parse("y", ParseContext(1))
    assert v.phi[0].is_rational_zero()
    v2 = parse_vector_field("x*y*dx + y^2*dy", system.ctx)
    assert not v2.phi[0].is_rational_zero()
    with pytest.raises(CliError):
        parse_vector_field("y + x*dx", system.ctx)
    with pytest.raises(CliError):
        parse_vector_field("dx*dy", system.ctx)


def test_vector_field_roundtrip():
    system = parse_system("y''=0")
    for text in ["y*dx", "(x*y)*dx + y^2*dy", "1*dy"]:
        v = parse_vector_field(text, system.ctx)
        again = parse_vector_field(format_vector_field(v), system.ctx)
        assert again.xi == v.xi
        assert again.phi == v.phi


# ---------------------------------------------------------------------------
# commands and exit codes


def test_verify_free_fall():
    code, out = run(["verify", "--system", "y''=0", "--catalog", "free-fall"])
    assert code == 0
    assert "8/8 pass" in out


def test_verify_failure_exit_code():
    code, out = run(["verify", "--system", "y''=y", "--generator", "y*dx"])
    assert code == 1
    assert "FAIL" in out


def test_verify_counterexample_generator():
    code, out = run(["verify", "--system", "eq14", "--generator", "y*dx"])
    assert code == 0


def test_usage_error_exit_code():
    code, _ = run(["verify", "--system", "y'' = "])
    assert code == 2
    code2, _ = run(["frobnicate"])
    assert code2 == 2


def test_determining_first_equations():
    code, out = run(["determining", "--system",
                     "y''=A(x)*y+B(x)*w; w''=C(x)*y-A(x)*w"])
    assert code == 0
    lines = [l for l in out.splitlines() if l.startswith("E")]
    assert "xi_d002" in lines[0]
    assert "xi_d011" in lines[1]
    assert "xi_d020" in lines[2]


def test_determining_custom_ansatz():
    code, out = run(["determining", "--system", "y''=0",
                     "--ansatz", "xi=xi(x),phi=phi(x)"])
    assert code == 0
    assert "2 equations" in out
    assert "xi''(x)" in out
    assert "phi''(x)" in out


def test_determining_restricted_unknowns():
    code, out = run(["determining", "--system",
                     "y''=A(x)*y+B(x)*w; w''=C(x)*y-A(x)*w",
                     "--ansatz", "restricted"])
    assert code == 0
    header = out.splitlines()[0]
    for name in ("alpha", "beta", "gamma"):
        assert name in header
    assert "xi" not in header


def test_classify_linear_not_in_class():
    code, out = run(["classify", "--system",
                     "y1''+y1+0*y2=0; y2''+2*y1+y2=0"])
    assert code == 1
    assert "no" in out


def test_classify_isotropic():
    code, out = run(["classify", "--system", "y''+q(x)*y=0; w''+q(x)*w=0"])
    assert code == 0
    assert "witnesses (4)" in out


def test_classify_counterexample():
    code, out = run(["classify", "--system", "eq14"])
    assert code == 1
    assert "non-Cartan" in out
    assert "degree-4" in out


def test_catalog_non_cartan():
    code, out = run(["catalog", "non-cartan", "--m", "2"])
    assert code == 0
    assert out.count("non-Cartan") == 4


def test_catalog_normal_form_coeffs():
    code, out = run(["catalog", "normal-form-coeffs", "--n", "3"])
    assert code == 0
    assert "A_3^2 = 4*q(x)" in out
    assert "A_3^3 = 2*q'(x)" in out


def test_catalog_unknown_key():
    code, _ = run(["catalog", "nonsense"])
    assert code == 2


def test_commutators_free_fall():
    code, out = run(["commutators", "--set", "free-fall"])
    assert code == 0
    assert "[C1, C2] = 0" in out
    assert "abelian: False" in out


def test_commutators_non_cartan_abelian():
    code, out = run(["commutators", "--set", "non-cartan", "--m", "2"])
    assert code == 0
    assert "abelian: True" in out


# ---------------------------------------------------------------------------
# reports


def test_json_byte_stability():
    args = ["classify", "--system", "eq14", "--format", "json", "--seed", "0"]
    code1, out1 = run(args)
    code2, out2 = run(args)
    assert code1 == code2 == 1
    assert out1 == out2
    doc = json.loads(out1)
    assert doc["command"] == "classify"
    assert doc["engine-info"]["seed"] == 0


def test_report_expressions_reparse():
    code, out = run(["verify", "--system", "y''=0",
                     "--catalog", "free-fall", "--format", "json"])
    assert code == 0
    doc = json.loads(out)
    ctx = ParseContext(1)
    for entry in doc["inputs"]["system"]:
        e = parse(entry, ctx)
        assert normalize(e) == e
