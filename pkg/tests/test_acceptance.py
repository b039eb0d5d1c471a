"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Tolerances and runtime budgets are the contractual ones; a criterion fails
if either the numerical condition or its time budget is missed.
"""

import itertools
import math
import time

import numpy as np

from conftest import ACCEPTANCE_LINES
from teich import cli, gromov, hyp2, io as tio
from teich import spectrum as sp
from teich.group import (FreeAutomorphism, conj_class, cyclic_words, enumerate_classes, parse,
                         power)
from teich.rep import evaluate, fricke_triple, pinching_family, punctured_torus_from_traces
from teich.rtree import (DualTreeModel, Inconclusive, britton_length, culler_morgan_gap,
                         shares_axis, tree_axis_distance, tree_ball_oracle)

SEED = 20240611
NIELSEN = [FreeAutomorphism.from_strings(s) for s in
           (["ab", "b"], ["aB", "b"], ["a", "ba"], ["a", "bA"], ["b", "a"], ["A", "b"])]
GAP_PAIRS = [("ab", "bAbbaBaB"), ("abb", "aBBabbbbA"), ("aab", "aBBaabbbA"),
             ("aabb", "bbabbaBB"), ("abAb", "bbbAbaBB")]


class Criterion:
    def __init__(self, number, title, budget):
        self.number, self.title, self.budget = number, title, budget

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        return False

    def finish(self, ok: bool, detail: str = ""):
        elapsed = time.perf_counter() - self.t0
        in_time = elapsed < self.budget
        status = "PASS" if ok and in_time else "FAIL"
        line = f"criterion {self.number}: {status}  {self.title}  ({elapsed:.2f}s / {self.budget:g}s)"
        if detail:
            line += f"  [{detail}]"
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, detail
        assert in_time, f"runtime {elapsed:.2f}s exceeds {self.budget}s"


def random_fricke(rng, n):
    out = []
    while len(out) < n:
        x, y = rng.uniform(2.2, 8.0, size=2)
        branch = "+" if rng.random() < 0.5 else "-"
        if x * x * y * y < 4 * (x * x + y * y):
            continue
        out.append(punctured_torus_from_traces(x, y, branch))
    return out


def test_criterion_01_trace_identity():
    with Criterion(1, "trace identity on 1000 random SL2 pairs", 1.0) as c:
        rng = np.random.default_rng(SEED)
        worst = max(abs(hyp2.trace_product_identity_gap(hyp2.random_sl2(rng), hyp2.random_sl2(rng)))
                    for _ in range(1000))
        c.finish(worst < 1e-9, f"max |gap| {worst:.3g}")


def test_criterion_02_translation_length():
    with Criterion(2, "translation length is the on-axis displacement and the infimum", 5.0) as c:
        rng = np.random.default_rng(SEED)
        on_axis = undercut = 0.0
        for _ in range(200):
            m = hyp2.random_hyperbolic(rng)
            ell = 2 * math.acosh(abs(m.trace) / 2)
            on_axis = max(on_axis, abs(hyp2.displacement_at(m, hyp2.axis_point(m, rng.normal()))
                                       - ell))
            for _ in range(1000):
                undercut = max(undercut, ell - hyp2.displacement_at(m, hyp2.random_point(rng, 3.0)))
        c.finish(on_axis <= 1e-9 and undercut <= 1e-9,
                 f"on-axis error {on_axis:.3g}, worst undercut {undercut:.3g}")


def test_criterion_03_thin_triangles():
    with Criterion(3, "geodesic triangles are log(1+sqrt2)-thin", 10.0) as c:
        rng = np.random.default_rng(SEED)
        bound = math.log(1 + math.sqrt(2)) + 1e-6
        worst = 0.0
        for _ in range(200):
            a, b, d = (hyp2.random_point(rng, 3.0) for _ in range(3))
            for p, q, r in ((a, b, d), (b, d, a), (d, a, b)):
                for u in np.linspace(0.0, 1.0, 100):
                    x = hyp2.segment_point(p, q, u)
                    gap = min(hyp2.distance_to_segment(x, q, r), hyp2.distance_to_segment(x, r, p))
                    worst = max(worst, gap)
        c.finish(worst <= bound, f"worst side distance {worst:.6f}")


def test_criterion_04_cosh_rigidity():
    with Criterion(4, "two-scale cosh equation forces {u, v} = {w, x}", 5.0) as c:
        rng = np.random.default_rng(SEED)
        apart, together, skipped = math.inf, 0.0, 0
        for _ in range(100):
            u, v = rng.uniform(0.1, 4.0, size=2)
            t = rng.uniform(1.1, 4.0)
            for w in rng.uniform(0.05, 5.0, size=100):
                if min(abs(w - u), abs(w - v)) < 1e-3:
                    skipped += 1
                    continue
                apart = min(apart, sp.cosh_rigidity_solve(u, v, t, w).difference)
            for w in (u, v):
                together = max(together, sp.cosh_rigidity_solve(u, v, t, w).difference)
        c.finish(apart > 1e-6 and together <= 1e-9,
                 f"min disagreement {apart:.3g}, max agreement error {together:.3g}, "
                 f"{skipped} draws within 1e-3 of u or v skipped")


def test_criterion_05_fricke_validity():
    with Criterion(5, "constructed punctured-torus reps have parabolic commutator", 1.0) as c:
        rng = np.random.default_rng(SEED)
        reps = []
        for _ in range(50):
            x, y = rng.uniform(2.2, 8.0, size=2)
            for branch in "+-":
                try:
                    reps.append(punctured_torus_from_traces(x, y, branch))
                except ValueError:
                    pass
        reps += [pinching_family(e, s) for e in (1e-1, 1e-3, 1e-6) for s in ("0", "1/1")]
        worst, kinds = 0.0, set()
        comm = parse("abAB")
        for rho in reps:
            with rho.context():
                m = evaluate(rho, comm)
                worst = max(worst, abs(float(m.trace) + 2.0))
                kinds.add(hyp2.classify(m.to_float()).kind)
        c.finish(worst <= 1e-8 and kinds == {hyp2.Kind.PARABOLIC},
                 f"{len(reps)} reps, max |tr[A,B] + 2| {worst:.3g}, kinds {sorted(k.name for k in kinds)}")


def test_criterion_06_tree_oracle():
    with Criterion(6, "Britton length equals the tree-ball oracle up to length 8", 60.0) as c:
        m = DualTreeModel.from_slope(0)
        mismatches = inconclusive = total = 0
        for n in range(1, 9):
            for w in cyclic_words(n):
                total += 1
                radius = 2
                while True:
                    try:
                        val = tree_ball_oracle(m, w, radius)
                        break
                    except Inconclusive:
                        inconclusive += 1
                        radius += 1
                mismatches += val != britton_length(m, w)
        comm = parse("abAB")
        elliptic = all(britton_length(m, power(comm, k)) == 0 and
                       tree_ball_oracle(m, power(comm, k), 4) == 0
                       for k in range(-4, 5) if k)
        c.finish(mismatches == 0 and elliptic,
                 f"{total} words, {mismatches} mismatches, {inconclusive} radius increases, "
                 f"peripheral powers elliptic: {elliptic}")


def test_criterion_07_gap_independence():
    with Criterion(7, "tree length gap independent of exponents", 30.0) as c:
        m = DualTreeModel.from_slope(0)
        constant = 0
        for g, h in GAP_PAIRS:
            assert britton_length(m, g) > 0 and britton_length(m, h) > 0
            assert not shares_axis(g, h) and tree_axis_distance(m, g, h) > 0
            vals = {culler_morgan_gap(m, g, h, n, k)
                    for n, k in itertools.product(range(1, 5), repeat=2)}
            constant += len(vals) == 1 and all(float(v).is_integer() for v in vals)
        c.finish(constant == len(GAP_PAIRS), f"{constant}/{len(GAP_PAIRS)} pairs constant")


def _trajectory(slope):
    text = cli.render(["pinch", "--slope", slope, "--grid", "1e-1:1e-6", "--maxlen", "4"])
    return tio.read_csv(text, is_text=True)


def test_criterion_08_degeneration():
    with Criterion(8, "pinching trajectories converge to the dual tree", 300.0) as c:
        ok, details = True, []
        for slope, pinched in (("0", "a"), ("1/1", "ab")):
            rows = _trajectory(slope)
            d = np.array([float(r["projDistance"]) for r in rows])
            a = np.array([float(r[pinched]) for r in rows])
            decreasing = bool(np.all(np.diff(d) < 0))
            tenfold = d[-1] <= 0.1 * d[0]
            a_to_zero = bool(np.all(np.diff(a) < 0)) and a[-1] < 1e-6
            ok &= decreasing and tenfold and a_to_zero
            details.append(f"slope {slope}: decreasing {decreasing}, final/first "
                           f"{d[-1] / d[0]:.3f}, {pinched} -> {a[-1]:.2g}")
        c.finish(ok, "; ".join(details))


def test_criterion_09_injectivity():
    with Criterion(9, "distinct Fricke points have distinct projective spectra", 60.0) as c:
        rng = np.random.default_rng(SEED)
        classes = enumerate_classes(5)
        worst, pairs = math.inf, 0
        while pairs < 50:
            r1, r2 = random_fricke(rng, 2)
            t1, t2 = np.array(fricke_triple(r1).as_tuple()), np.array(fricke_triple(r2).as_tuple())
            if np.linalg.norm(np.abs(t1) - np.abs(t2)) < 0.1:
                continue
            pairs += 1
            d = sp.projective_distance(sp.spectrum(r1, classes), sp.spectrum(r2, classes))
            worst = min(worst, d)
        c.finish(worst > 1e-4, f"smallest projective distance {worst:.3g}")


def test_criterion_10_equivariance():
    with Criterion(10, "spectra are equivariant under six Nielsen moves", 30.0) as c:
        rng = np.random.default_rng(SEED)
        classes = enumerate_classes(4)
        worst = 0.0
        for rho in random_fricke(rng, 5):
            for phi in NIELSEN:
                lhs = np.array(sp.spectrum(rho.precomposed(phi), classes).values)
                rhs = np.array(sp.spectrum(rho, [conj_class(phi(k.word)) for k in classes]).values)
                worst = max(worst, float(np.max(np.abs(lhs - rhs))))
        c.finish(worst <= 1e-9, f"max deviation {worst:.3g}")


def test_criterion_11_minimax():
    with Criterion(11, "minimax solver is no worse than grid search", 60.0) as c:
        rng = np.random.default_rng(SEED)
        excess = -math.inf
        for rho in random_fricke(rng, 10):
            lam = gromov.minimax_center(rho).lam
            grid = gromov.minimax_grid(rho).lam
            excess = max(excess, lam - grid)
        c.finish(excess <= 1e-4, f"max solver - grid {excess:.3g}")


def test_criterion_12_topologies_agree():
    with Criterion(12, "distortion and spectrum comparisons agree near a Fricke point", 120.0) as c:
        rows = gromov.usual_topology_comparison(3.0, 3.0, deltas=(1e-2, 1e-3, 1e-4))
        ok = gromov.topologies_agree(rows)
        detail = ", ".join(f"delta {r.delta:g}: distortion {r.distortion:.3g}, gap {r.spectrum_gap:.3g}"
                           for r in rows)
        c.finish(ok, detail)
