import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import words
from teich import hyp2, spectrum as sp
from teich.group import (FreeAutomorphism, conj_class, enumerate_classes, inverse, mul, parse,
                         reduce)
from teich.hyp2 import MoebiusMap
from teich.rep import Representation, pinching_family, punctured_torus_from_traces

R333 = punctured_torus_from_traces(3.0, 3.0)
R336 = punctured_torus_from_traces(3.0, 3.0, "+")
L3 = 2 * math.acosh(1.5)
L6 = 2 * math.acosh(3.0)

NIELSEN = [FreeAutomorphism.from_strings(s) for s in
           (["ab", "b"], ["aB", "b"], ["a", "ba"], ["a", "bA"], ["b", "a"], ["A", "b"])]


def test_translation_length_examples():
    diag = Representation.from_generators({"a": MoebiusMap(2, 0, 0, 0.5),
                                           "b": MoebiusMap(1, 1, 0, 1)})
    assert sp.translation_length(diag, "a") == pytest.approx(2 * math.log(2), abs=1e-12)
    assert sp.translation_length(R333, "a") == pytest.approx(L3, abs=1e-12)
    assert L3 == pytest.approx(1.924847, abs=1e-6)
    assert sp.translation_length(R333, "abAB") == 0.0


def test_spectrum_examples():
    s = sp.spectrum(R333, ["a", "b", "ab"])
    assert s.values == pytest.approx((L3, L3, L3), abs=1e-12)
    s = sp.spectrum(R336, ["a", "b", "ab"])
    assert s.values == pytest.approx((L3, L3, L6), abs=1e-12)
    assert L6 == pytest.approx(3.525494, abs=1e-6)
    assert len(sp.spectrum(R333, [])) == 0


def test_projectivize_examples():
    classes = [conj_class(parse(w)) for w in ("a", "b", "ab")]
    p = sp.projectivize(sp.LengthSpectrum(tuple(classes), (2.0, 4.0, 6.0)))
    assert p.values == pytest.approx((1 / 3, 2 / 3, 1.0))
    assert p.scale == 6.0
    p = sp.projectivize(sp.spectrum(R336, classes))
    assert p.values == pytest.approx((0.545980, 0.545980, 1.0), abs=1e-6)


def test_projectivize_rejects_zero_spectrum():
    classes = (conj_class(parse("a")),)
    with pytest.raises(ValueError):
        sp.projectivize(sp.LengthSpectrum(classes, (0.0,)))


@settings(max_examples=50, deadline=None)
@given(st.floats(1e-3, 1e3))
def test_projectivize_is_scale_invariant(c):
    s = sp.spectrum(R336, enumerate_classes(3))
    d = sp.projective_distance(sp.projectivize(s), sp.projectivize(s.scaled(c)))
    assert d < 1e-12


def test_fricke_embedding_examples():
    assert sp.fricke_embedding(R333) == pytest.approx((L3, L3, L3), abs=1e-12)
    assert sp.fricke_embedding(R336) == pytest.approx((L3, L3, L6), abs=1e-12)
    assert sp.fricke_embedding(pinching_family(0.1))[0] == pytest.approx(0.1, abs=1e-9)


def test_cosh_rigidity_check_examples():
    assert sp.cosh_rigidity_check(1, 2, 1, 2, 2)
    assert sp.cosh_rigidity_check(1, 2, 2, 1, 3)
    assert not sp.cosh_rigidity_check(1, 2, 1.5, 1.8, 2)
    res = sp.cosh_rigidity_solve(1.0, 2.0, 2.0, 1.5)
    assert res.difference > 1e-3 and not res.consistent


def test_cosh_rigidity(rng):
    for _ in range(100):
        u, v = rng.uniform(0.1, 3.0, size=2)
        t = rng.uniform(1.2, 3.0)
        w = rng.uniform(0.1, 3.0)
        if min(abs(w - u), abs(w - v)) < 1e-3:
            continue
        assert sp.cosh_rigidity_solve(u, v, t, w).difference > 1e-6
        for w in (u, v):
            assert sp.cosh_rigidity_solve(u, v, t, w).difference < 1e-9


def test_injectivity_examples():
    assert sp.injectivity_probe(R333, R333, 4) == 0.0
    assert sp.injectivity_probe(R333, R336, 4) > 0.1
    r34 = punctured_torus_from_traces(3.0, 4.0)
    r43 = punctured_torus_from_traces(4.0, 3.0)
    assert sp.injectivity_probe(r34, r43, 4) > 0.0


def test_spectrum_is_thread_count_independent():
    classes = enumerate_classes(5)
    assert sp.spectrum(R336, classes, threads=1).values == sp.spectrum(R336, classes, threads=4).values


@pytest.mark.parametrize("phi", NIELSEN, ids=lambda f: ",".join(f.to_strings()))
def test_mapping_class_equivariance(phi):
    classes = enumerate_classes(4)
    lhs = sp.spectrum(R336.precomposed(phi), classes).values
    rhs = sp.spectrum(R336, [conj_class(phi(c.word)) for c in classes]).values
    assert np.allclose(lhs, rhs, rtol=0, atol=1e-9)


@settings(max_examples=200, deadline=None)
@given(words, words)
def test_length_is_conjugation_and_inversion_invariant(w, u):
    w = reduce(w)
    if not w:
        return
    ell = sp.translation_length(R336, w)
    for v in (mul(u, w, inverse(u)), inverse(w)):
        assert sp.translation_length(R336, v) == pytest.approx(ell, rel=1e-9, abs=1e-9)


def test_beardon_formula_predicts_lengths(rng):
    g = hyp2.MoebiusMap(2.0, 0.0, 0.0, 0.5)
    for _ in range(200):
        h = hyp2.random_hyperbolic(rng)
        rel = hyp2.axis_relation(g, h)
        if rel.kind not in ("disjoint", "crossing"):
            continue
        pred = sp.beardon_half_trace(g, h)
        assert pred == pytest.approx(abs((g @ h).trace) / 2, rel=1e-6)


def test_hyperbolic_gap_grows_and_converges():
    gaps = [sp.length_gap(R336, "a", "b", n, n) for n in range(1, 7)]
    steps = np.diff(gaps)
    assert np.all(steps > 0) or np.all(steps < 0)
    assert np.all(np.abs(steps[1:]) < np.abs(steps[:-1]))
    assert abs(steps[-1]) < 1e-3
