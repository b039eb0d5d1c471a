import math

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import words
from teich import hyp2, rep
from teich.group import FreeAutomorphism, mul, parse, reduce
from teich.hyp2 import MoebiusMap
from teich.rep import Representation, evaluate, pinching_family, punctured_torus_from_traces

R333 = punctured_torus_from_traces(3.0, 3.0)


def test_evaluate_examples():
    assert evaluate(R333, ()).is_close(MoebiusMap.identity())
    diag = Representation.from_generators({"a": MoebiusMap(2, 0, 0, 0.5),
                                           "b": MoebiusMap(1, 1, 0, 1)})
    assert evaluate(diag, parse("aa")).is_close(MoebiusMap(4, 0, 0, 0.25))
    assert rep.trace(R333, parse("abAB")) == pytest.approx(-2.0, abs=1e-12)


def test_unknown_generator_is_rejected():
    with pytest.raises(KeyError):
        evaluate(R333, (3,))


def test_fricke_examples():
    assert rep.fricke_z(3.0, 3.0, "-") == pytest.approx(3.0, abs=1e-12)
    assert rep.fricke_z(3.0, 3.0, "+") == pytest.approx(6.0, abs=1e-12)
    plus = punctured_torus_from_traces(3.0, 3.0, "+")
    assert abs(rep.trace(plus, parse("ab"))) == pytest.approx(6.0, abs=1e-12)
    assert rep.trace(plus, parse("abAB")) == pytest.approx(-2.0, abs=1e-12)
    with pytest.raises(ValueError):
        punctured_torus_from_traces(2.1, 2.1)


def test_fricke_triple_satisfies_identity():
    t = rep.fricke_triple(R333)
    assert t.as_tuple() == pytest.approx((3.0, 3.0, 3.0), abs=1e-12)
    assert abs(t.residual) < 1e-12


@settings(max_examples=100, deadline=None)
@given(st.floats(2.2, 12.0), st.floats(2.2, 12.0), st.sampled_from("+-"),
       st.sampled_from(["unit", "balanced"]))
def test_fricke_construction_is_a_punctured_torus(x, y, branch, gauge):
    try:
        rho = punctured_torus_from_traces(x, y, branch, gauge=gauge)
    except ValueError:
        assert x * x * y * y < 4 * (x * x + y * y)
        return
    assert rep.trace(rho, parse("a")) == pytest.approx(x, rel=1e-12)
    assert rep.trace(rho, parse("b")) == pytest.approx(y, rel=1e-12)
    assert rep.trace(rho, parse("abAB")) == pytest.approx(-2.0, abs=1e-8)
    assert hyp2.classify(evaluate(rho, parse("abAB"))).kind is hyp2.Kind.PARABOLIC


@settings(max_examples=200, deadline=None)
@given(words, words)
def test_evaluate_is_a_homomorphism(u, v):
    lhs = evaluate(R333, mul(u, v))
    rhs = evaluate(R333, reduce(u)) @ evaluate(R333, reduce(v))
    assert lhs.is_close(rhs, tol=1e-8 * (1 + max(abs(e) for e in rhs.entries)))


@settings(max_examples=100, deadline=None)
@given(words)
def test_precomposition_matches_substitution(w):
    phi = FreeAutomorphism.from_strings(["ab", "b"])
    lhs = evaluate(R333.precomposed(phi), reduce(w))
    rhs = evaluate(R333, phi(reduce(w)))
    assert lhs.is_close(rhs, tol=1e-8 * (1 + max(abs(e) for e in rhs.entries)))


def test_pinching_examples():
    rho = pinching_family(0.1, 0)
    assert hyp2.translation_length(evaluate(rho, parse("a"))) == pytest.approx(0.1, abs=1e-9)
    assert float(rep.trace(rho, parse("abAB"))) == pytest.approx(-2.0, abs=1e-8)
    rho = pinching_family(0.01, "1/1")
    assert hyp2.translation_length(evaluate(rho, parse("ab"))) == pytest.approx(0.01, abs=1e-9)


@pytest.mark.parametrize("slope", ["0", "1/1", "2/3", "-1/2"])
@pytest.mark.parametrize("eps", [1e-1, 1e-3, 1e-6])
def test_pinched_curve_has_length_eps(slope, eps):
    rho = pinching_family(eps, slope)
    with rho.context():
        ell = hyp2.translation_length(evaluate(rho, rep.slope_word(slope)))
        per = rep.trace(rho, parse("abAB"))
    assert float(ell) == pytest.approx(eps, rel=1e-9)
    assert float(per) == pytest.approx(-2.0, abs=1e-8)


def test_pinching_uses_extended_precision():
    assert rep.pinch_precision(1e-6) > rep.pinch_precision(1e-1) >= mpmath.mp.dps
    rho = pinching_family(1e-4)
    assert isinstance(rho.generators()["a"].a, mpmath.mpf)


def test_validate_examples():
    report = rep.validate(R333)
    assert report.ok
    assert report.jorgensen["ab"] == pytest.approx(9.0, abs=1e-9)
    bad = Representation.from_generators({"a": MoebiusMap(2, 0, 0, 1), "b": MoebiusMap(1, 1, 0, 1)})
    assert any("determinant" in f for f in rep.validate(bad).flags)
    c, s = math.cosh(1.0), math.sinh(1.0)
    skew = Representation.from_generators({"a": MoebiusMap(2, 0, 0, 0.5),
                                           "b": MoebiusMap(c, s, s, c)})
    assert abs(abs(rep.trace(skew, parse("abAB"))) - 2) > 0.5
    assert any("peripheral" in f for f in rep.validate(skew).flags)


def test_validate_never_raises_on_closed_surface():
    gens = {n: MoebiusMap(math.cosh(1), math.sinh(1), math.sinh(1), math.cosh(1))
            for n in ("a1", "b1", "a2", "b2")}
    rho = Representation.from_generators(gens, peripherals=[], genus=2, punctures=0)
    report = rep.validate(rho)
    assert report.relator is not None
    assert report.to_dict()["ok"] is report.ok
