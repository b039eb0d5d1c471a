"""Invariant suite run by ``teich check``.

Every check returns ``(passed, total, detail)``; a check fails when
``passed < total``.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from teich import gromov, hyp2
from teich.group import (COMMUTATOR, NIELSEN, conj_class, cyclic_reduce, cyclic_words,
                         enumerate_classes, inverse, is_peripheral, mul, power)
from teich.rep import (evaluate, fricke_triple, pinching_family, punctured_torus_from_traces,
                       slope_word)
from teich.rtree import (DualTreeModel, Inconclusive, ball, britton_length, culler_morgan_gap,
                         tree_ball_oracle)
from teich.spectrum import beardon_half_trace, projectivize, spectrum, translation_length

THIN = math.log(1 + math.sqrt(2))

# disjoint-axis pairs on the slope-0 tree (gap 2 at weight 1)
GAP_PAIRS = (("ab", "bAbbaBaB"), ("abb", "aBBabbbbA"), ("aab", "aBBaabbbA"),
             ("aabb", "bbabbaBB"), ("abAb", "bbbAbaBB"))


@dataclass(frozen=True)
class CheckResult:
    module: str
    name: str
    passed: int
    total: int
    detail: str = ""
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return self.passed == self.total


_REGISTRY: list[tuple[str, str, Callable]] = []


def check(module: str, name: str):
    def deco(fn):
        _REGISTRY.append((module, name, fn))
        return fn
    return deco


def words_up_to(n: int):
    return [w for w in ball(n) if w]


def random_fricke(rng, lo=2.2, hi=6.0):
    while True:
        x, y = rng.uniform(lo, hi, 2)
        if x * x * y * y >= 4 * (x * x + y * y):
            return x, y


# -- hyp2 ---------------------------------------------------------------------

@check("hyp2", "trace identity on 1000 random SL2 pairs")
def _trace_identity(rng):
    gaps = [abs(hyp2.trace_product_identity_gap(hyp2.random_sl2(rng), hyp2.random_sl2(rng)))
            for _ in range(1000)]
    return sum(g < 1e-9 for g in gaps), len(gaps), f"max gap {max(gaps):.2e}"


@check("hyp2", "translation length is the infimum of displacement")
def _translation_inf(rng):
    ok = total = 0
    for _ in range(200):
        m = hyp2.random_hyperbolic(rng)
        ell = hyp2.translation_length(m)
        p = hyp2.axis_point(m, rng.uniform(-2, 2))
        total += 1
        ok += abs(hyp2.dist(p, hyp2.apply(m, p)) - ell) < 1e-9
        for _ in range(5):
            q = hyp2.random_point(rng)
            total += 1
            ok += hyp2.dist(q, hyp2.apply(m, q)) >= ell - 1e-9
    return ok, total, ""


@check("hyp2", "thin triangles within log(1+sqrt2)")
def _thin(rng):
    ok = total = 0
    worst = 0.0
    for _ in range(200):
        a, b, c = (hyp2.random_point(rng, 3.0) for _ in range(3))
        for p, q, r in ((a, b, c), (b, c, a), (c, a, b)):
            for u in np.linspace(0, 1, 100):
                x = hyp2.segment_point(p, q, float(u))
                d = min(hyp2.distance_to_segment(x, q, r), hyp2.distance_to_segment(x, r, p))
                worst = max(worst, d)
                total += 1
                ok += d <= THIN + 1e-6
    return ok, total, f"worst {worst:.6f}"


@check("hyp2", "distance is invariant under isometries")
def _dist_invariant(rng):
    ok = 0
    for _ in range(500):
        m = hyp2.random_sl2(rng)
        p, q = hyp2.random_point(rng), hyp2.random_point(rng)
        d0 = hyp2.dist(p, q)
        d1 = hyp2.dist(hyp2.apply(m, p), hyp2.apply(m, q))
        ok += abs(d0 - d1) <= 1e-10 * max(1.0, d0)
    return ok, 500, ""


@check("hyp2", "classification is conjugation invariant")
def _classify_conj(rng):
    ok = 0
    for k in range(300):
        m = hyp2.random_hyperbolic(rng) if k % 2 else hyp2.random_sl2(rng)
        g = hyp2.random_sl2(rng)
        a, b = hyp2.classify(m), hyp2.classify(hyp2.conjugate(g, m))
        same = a.kind is b.kind
        if same and a.translation_length is not None:
            same = abs(a.translation_length - b.translation_length) < 1e-9
        ok += same
    return ok, 300, ""


# -- group --------------------------------------------------------------------

@check("group", "conjugacy canonical form: idempotent, conjugation and inversion invariant")
def _conj_class(rng):
    ok = total = 0
    conj = words_up_to(3)
    for w in words_up_to(6):
        c = conj_class(w)
        total += 1
        good = conj_class(c.word) == c and conj_class(inverse(w)) == c
        good = good and all(conj_class(mul(u, w, inverse(u))) == c for u in conj)
        ok += good
    return ok, total, ""


def brute_class_count(n: int) -> int:
    """Distinct cyclic words of length <= n up to rotation and inversion."""
    seen = set()
    for w in words_up_to(n):
        if w[0] == -w[-1] and len(w) > 1:
            continue
        rots = [w[i:] + w[:i] for i in range(len(w))]
        inv = inverse(w)
        rots += [inv[i:] + inv[:i] for i in range(len(w))]
        seen.add(min(tuple(rots)))
    return len(seen)


@check("group", "class enumeration nested and matches brute force")
def _enum(rng):
    ok = 0
    prev = set()
    for n in range(1, 7):
        cur = enumerate_classes(n, exclude_peripheral=False)
        ok += len(cur) == brute_class_count(n) and prev <= set(cur)
        prev = set(cur)
    return ok, 6, ""


@check("group", "Nielsen automorphisms act on classes")
def _nielsen(rng):
    ok = total = 0
    for name, phi in NIELSEN.items():
        images: dict = {}
        good = True
        for w in words_up_to(5):
            c, img = conj_class(w), conj_class(phi(w))
            if images.setdefault(c, img) != img:
                good = False
        total += 1
        ok += good
    return ok, total, ""


@check("group", "peripheral detection invariant under conjugation and inversion")
def _peripheral(rng):
    ok = total = 0
    for k in (1, 2, -1):
        base = power(COMMUTATOR, k)
        for u in words_up_to(3):
            total += 1
            ok += is_peripheral(mul(u, base, inverse(u))) and is_peripheral(inverse(base))
    for w in ("a", "b", "ab", "aB", "abab"):
        total += 1
        ok += not is_peripheral(w)
    return ok, total, ""


# -- rep ----------------------------------------------------------------------

@check("rep", "Fricke constructions satisfy the puncture condition")
def _fricke(rng):
    ok = 0
    for _ in range(100):
        x, y = random_fricke(rng)
        branch = "+" if rng.random() < 0.5 else "-"
        rho = punctured_torus_from_traces(x, y, branch)
        t = fricke_triple(rho)
        comm = evaluate(rho, COMMUTATOR)
        ok += (abs(t.residual) < 1e-8 and abs(comm.trace + 2) < 1e-8
               and hyp2.classify(comm).kind is hyp2.Kind.PARABOLIC)
    return ok, 100, ""


@check("rep", "evaluation is a homomorphism on the length-6 ball")
def _homomorphism(rng):
    rho = punctured_torus_from_traces(3.0, 3.0)
    words = ball(3)
    mats = {w: evaluate(rho, w) for w in words}
    ok = total = 0
    for u in words:
        for v in words:
            total += 1
            ok += evaluate(rho, mul(u, v)).is_close(mats[u] @ mats[v], 1e-9)
    return ok, total, ""


@check("rep", "precomposition matches substitution")
def _precompose(rng):
    rho = punctured_torus_from_traces(3.3, 4.1)
    ok = total = 0
    for phi in NIELSEN.values():
        rphi = rho.precomposed(phi)
        for w in words_up_to(4):
            total += 1
            ok += evaluate(rho, phi(w)).is_close(evaluate(rphi, w), 1e-9)
    return ok, total, ""


@check("rep", "pinched curve has length exactly eps")
def _pinch(rng):
    ok = total = 0
    for slope in ("0", "1/1", "2/3"):
        for k in range(1, 7):
            eps = 10.0 ** -k
            rho = pinching_family(eps, slope)
            total += 1
            ok += abs(translation_length(rho, slope_word(slope)) - eps) < 1e-9
    return ok, total, ""


# -- spectrum -----------------------------------------------------------------

@check("spectrum", "projectivization is scale invariant")
def _scale(rng):
    rho = punctured_torus_from_traces(3.0, 4.0)
    s = spectrum(rho, enumerate_classes(4))
    p = projectivize(s)
    ok = 0
    for c in (0.5, 2.0, 7.25, 1e-3):
        q = projectivize(s.scaled(c))
        ok += max(abs(a - b) for a, b in zip(q.values, p.values)) <= 1e-15
    return ok, 4, ""


@check("spectrum", "lengths invariant under conjugation and inversion")
def _length_inv(rng):
    rho = punctured_torus_from_traces(3.0, 3.5)
    ok = total = 0
    conj = words_up_to(2)
    for w in words_up_to(5):
        if not cyclic_reduce(w) or is_peripheral(w):
            continue
        ell = hyp2.translation_length(evaluate(rho, w))
        reps = [inverse(w)] + [mul(u, w, inverse(u)) for u in conj]
        total += 1
        ok += all(abs(hyp2.translation_length(evaluate(rho, r)) - ell) < 1e-9 * max(1, ell)
                  for r in reps)
    return ok, total, ""


@check("spectrum", "mapping class equivariance of spectra")
def _equivariance(rng):
    rho = punctured_torus_from_traces(3.3, 4.1)
    classes = enumerate_classes(4)
    ok = 0
    for phi in NIELSEN.values():
        lhs = spectrum(rho.precomposed(phi), classes)
        rhs = spectrum(rho, [conj_class(phi(c.word)) for c in classes])
        ok += max(abs(a - b) for a, b in zip(lhs.values, rhs.values)) < 1e-9
    return ok, len(NIELSEN), ""


@check("spectrum", "axis formulas predict word lengths; hyperbolic gap converges")
def _beardon(rng):
    rho = punctured_torus_from_traces(3.0, 3.0)
    g, h = (1,), (2, 1, -2)  # a and its translate b a b^-1: disjoint axes
    ok = total = 0
    gaps = []
    for n in range(1, 5):
        for m in range(1, 5):
            G = evaluate(rho, power(g, n))
            H = evaluate(rho, power(h, m))
            pred = beardon_half_trace(G, H)
            meas = abs(float(evaluate(rho, mul(power(g, n), power(h, m))).trace)) / 2
            total += 1
            ok += abs(pred - meas) <= 1e-6 * max(1.0, meas)
    for n in range(1, 7):
        gn, hn = power(g, n), power(h, n)
        gaps.append(translation_length(rho, mul(gn, hn)) - translation_length(rho, gn)
                    - translation_length(rho, hn))
    steps = np.abs(np.diff(gaps))
    total += 1
    ok += bool(np.all(np.diff(steps) <= 1e-12))
    return ok, total, f"gaps {np.round(gaps, 6).tolist()}"


# -- rtree --------------------------------------------------------------------

def oracle_length(m, w, radius=3):
    while True:
        try:
            return tree_ball_oracle(m, w, radius)
        except Inconclusive:
            radius += 1


@check("rtree", "Britton length equals the tree-ball oracle (words <= 8)")
def _oracle(rng):
    m = DualTreeModel.from_slope(0)
    ok = total = 0
    for n in range(1, 9):
        for w in cyclic_words(n):
            total += 1
            ok += britton_length(m, w) == oracle_length(m, w, 2)
    return ok, total, ""


@check("rtree", "Britton length invariant under conjugation and inversion")
def _britton_inv(rng):
    m = DualTreeModel.from_slope(0)
    ok = total = 0
    conj = words_up_to(3)
    for w in words_up_to(6):
        ell = britton_length(m, w)
        total += 1
        ok += britton_length(m, inverse(w)) == ell and all(
            britton_length(m, mul(u, w, inverse(u))) == ell for u in conj)
    return ok, total, ""


@check("rtree", "peripheral powers are elliptic")
def _peri_elliptic(rng):
    ok = 0
    for slope in ("0", "1/1", "2/3"):
        m = DualTreeModel.from_slope(slope)
        ok += all(britton_length(m, power(COMMUTATOR, k)) == 0 for k in range(-4, 5) if k)
    return ok, 3, ""


@check("rtree", "length-function axiom against the oracle")
def _axiom(rng):
    m = DualTreeModel.from_slope(0)
    cache: dict = {}

    def ell(w):
        if not cyclic_reduce(w):
            return 0.0
        key = conj_class(w)
        if key not in cache:
            cache[key] = oracle_length(m, key.word, 2)
        return cache[key]

    # Pairs whose characteristic sets are disjoint have l(gh) = l(gh^-1) above
    # l(g) + l(h), so the bound is only required off that branch.
    ok = total = equal_branch = 0
    words = words_up_to(4)
    for g, h in itertools.product(words, repeat=2):
        total += 1
        u, v = ell(mul(g, h)), ell(mul(g, inverse(h)))
        bounded = max(u, v) <= ell(g) + ell(h)
        equal_branch += not bounded and u == v
        ok += bounded or u == v
    return ok, total, f"{equal_branch} pairs on the equality branch"


@check("rtree", "tree length gap independent of exponents")
def _gap(rng):
    m = DualTreeModel.from_slope(0)
    ok = 0
    for g, h in GAP_PAIRS:
        vals = {culler_morgan_gap(m, g, h, n, k) for n in range(1, 5) for k in range(1, 5)}
        ok += len(vals) == 1
    return ok, len(GAP_PAIRS), ""


# -- gromov -------------------------------------------------------------------

@check("gromov", "neighbourhood test monotone in eps")
def _vnbhd(rng):
    rho = punctured_torus_from_traces(3.0, 3.0)
    K = (hyp2.I, hyp2.HPoint(0.3, 1.7), hyp2.HPoint(-0.5, 0.8))
    X = gromov.SpaceConfig(gromov.HyperbolicPlane(rho, 1.0), K, ("a", "b"))
    Y = gromov.SpaceConfig(gromov.HyperbolicPlane(rho, 1.3), K, ("a", "b"))
    rel = [(0, 0), (1, 1), (2, 2), (0, 1)]
    grid = np.linspace(0.01, 2.0, 60)
    flags = [gromov.vnbhd_check(X, Y, rel, e) for e in grid]
    ok = all(b or not a for a, b in zip(flags, flags[1:]))
    return int(ok), 1, ""


@check("gromov", "distortion between rescaled copies is linear in the scale gap")
def _scale_equiv(rng):
    rho = punctured_torus_from_traces(3.0, 3.0)
    X1 = gromov.orbit_config(rho, scale=1.0)
    base = X1.distance_table().max()
    ok = 0
    for s in (1.001, 1.01, 1.5):
        Xs = gromov.orbit_config(rho, scale=s)
        ident = gromov.distortion(X1, Xs)
        found = gromov.min_distortion(X1, gromov.HyperbolicPlane(rho, s), restarts=8).epsilon
        ok += abs(ident - (s - 1) * base) < 1e-6 and found <= ident + 1e-6
    return ok, 3, ""


@check("gromov", "minimax centre beats 1000 random probes")
def _minimax(rng):
    ok = 0
    for _ in range(3):
        x, y = random_fricke(rng)
        rho = punctured_torus_from_traces(x, y)
        res = gromov.minimax_center(rho)
        mats = gromov._gen_matrices(rho, None)
        c = res.center
        probes = [hyp2.HPoint(c.x + c.y * rng.normal(0, 1), c.y * math.exp(rng.normal(0, 1)))
                  for _ in range(1000)]
        ok += all(res.lam <= gromov.displacement(mats, q) + 1e-6 for q in probes)
    return ok, 3, ""


@check("gromov", "Gromov and usual topologies agree near Fricke points")
def _topologies(rng):
    ok = total = 0
    for x, y in ((3.0, 3.0), (3.5, 4.2)):
        rows = gromov.usual_topology_comparison(x, y)
        total += 1
        ok += gromov.topologies_agree(rows)
    return ok, total, ""


@check("gromov", "degeneration distance strictly decreasing")
def _trajectory(rng):
    ok = 0
    for slope in ("0", "1/1"):
        tr = gromov.degeneration_trajectory([10.0 ** -k for k in range(1, 7)], slope,
                                            enumerate_classes(4))
        d = tr.column("proj_distance")
        ok += bool(np.all(np.diff(d) < 0))
    return ok, 2, ""


@check("gromov", "degeneration distance drops tenfold over the grid")
def _trajectory_factor(rng):
    ok = 0
    detail = []
    for slope in ("0", "1/1"):
        tr = gromov.degeneration_trajectory([10.0 ** -k for k in range(1, 7)], slope,
                                            enumerate_classes(4))
        d = tr.column("proj_distance")
        detail.append(f"{slope}: {d[-1] / d[0]:.3f}")
        ok += d[-1] <= 0.1 * d[0]
    return ok, 2, "final/first " + ", ".join(detail)


# -- cli ----------------------------------------------------------------------

@check("cli", "identical config and seed give identical output")
def _determinism(rng):
    from teich.cli import render
    args = ["pinch", "--slope", "0", "--grid", "1e-1:1e-3", "--maxlen", "3", "--distortion"]
    return int(render(args) == render(args)), 1, ""


def run_all(seed: int = 0, modules=None) -> list[CheckResult]:
    out = []
    for module, name, fn in _REGISTRY:
        if modules and module not in modules:
            continue
        rng = np.random.default_rng(seed)
        t0 = time.perf_counter()
        passed, total, detail = fn(rng)
        out.append(CheckResult(module, name, int(passed), int(total), detail,
                               time.perf_counter() - t0))
    return out


def registry() -> list[tuple[str, str]]:
    return [(m, n) for m, n, _ in _REGISTRY]

