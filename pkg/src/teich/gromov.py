"""Finite-window comparisons of spaces with a free-group action.

A :class:`SpaceConfig` is a finite set ``K`` of points in a metric space on
which F(a, b) acts (the hyperbolic plane through a representation, at some
scale, or a dual tree) plus a finite set ``P`` of group elements.  Two
configurations are close when, under a relation pairing their points, all
the distances d(x, g y) for g in P nearly agree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from teich import hyp2
from teich.group import ConjClass, Word, enumerate_classes, format_word, inverse, mul, parse
from teich.hyp2 import HPoint, MoebiusMap
from teich.rep import Representation, evaluate, pinching_family, punctured_torus_from_traces
from teich.rtree import DualTreeModel, ball, length_function, region, vertex_distance
from teich.spectrum import LengthSpectrum, projective_distance, projectivize, spectrum


class NonConvergenceError(RuntimeError):
    """An iterative solver hit its iteration cap."""


# -- backends ---------------------------------------------------------------

@dataclass(frozen=True)
class HyperbolicPlane:
    rep: Representation
    scale: float = 1.0

    def __post_init__(self):
        if not self.scale > 0:
            raise ValueError("scale must be positive")

    def matrix(self, w: Word) -> MoebiusMap:
        m = evaluate(self.rep, w)
        with self.rep.context():
            return m.to_float()

    def act(self, w: Word, p: HPoint) -> HPoint:
        return hyp2.apply(self.matrix(w), p)

    def distance(self, p: HPoint, q: HPoint) -> float:
        return self.scale * hyp2.dist(p, q)

    def orbit_table(self, base: HPoint, orbit, P) -> np.ndarray:
        """d(k_i c, g k_j c) = d(c, k_i^-1 g k_j c), evaluated word by word."""
        out = np.empty((len(P), len(orbit), len(orbit)))
        with self.rep.context():
            for k, g in enumerate(P):
                for i, u in enumerate(orbit):
                    for j, v in enumerate(orbit):
                        m = evaluate(self.rep, mul(inverse(u), g, v))
                        out[k, i, j] = hyp2.displacement_at(m, base)
        return self.scale * out


@dataclass(frozen=True)
class TreePoint:
    """The point at fraction ``offset`` along the edge from the vertex of
    ``word`` toward the adjacent vertex of ``toward`` (a vertex if ``toward`` is None).
    """

    word: Word = ()
    toward: Word | None = None
    offset: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.offset <= 1.0:
            raise ValueError("offset must lie in [0, 1]")

    def moved(self, g: Word) -> "TreePoint":
        t = None if self.toward is None else mul(g, self.toward)
        return TreePoint(mul(g, self.word), t, self.offset)

    def __str__(self) -> str:
        if self.toward is None or self.offset == 0:
            return f"[{format_word(self.word)}]"
        return f"[{format_word(self.word)}->{format_word(self.toward)}@{self.offset:.6g}]"


@dataclass(frozen=True)
class DualTree:
    model: DualTreeModel

    def _ends(self, p: TreePoint):
        u = region(self.model.to_slope_zero(p.word))
        if p.toward is None or p.offset == 0:
            return [(u, 0.0)], (u, u)
        v = region(self.model.to_slope_zero(p.toward))
        if vertex_distance(u, v) != 1:
            raise ValueError(f"tree point {p} does not lie on an edge")
        return [(u, p.offset), (v, 1.0 - p.offset)], (u, v)

    def act(self, w: Word, p: TreePoint) -> TreePoint:
        return p.moved(w)

    def distance(self, p: TreePoint, q: TreePoint) -> float:
        ep, (p0, p1) = self._ends(p)
        eq, (q0, q1) = self._ends(q)
        if p0 != p1 and q0 != q1 and {p0, p1} == {q0, q1}:
            pos_q = q.offset if q0 == p0 else 1.0 - q.offset
            return self.model.weight * abs(p.offset - pos_q)
        best = min(cp + vertex_distance(u, v) + cq for u, cp in ep for v, cq in eq)
        return self.model.weight * best

    def stable_words(self) -> tuple[Word, Word]:
        """Words crossing one edge from the vertex of the identity."""
        phi = self.model.basis_change.inverse()
        return phi((2,)), phi((-2,))


@dataclass(frozen=True)
class SpaceConfig:
    """Points ``K`` and group elements ``P`` in a backend.

    ``orbit`` optionally records that ``K[i] = orbit[i] . K[0]``; comparisons
    with a different backend use it to transfer ``K`` equivariantly.
    """

    backend: object
    K: tuple
    P: tuple[Word, ...]
    orbit: tuple[Word, ...] | None = None

    def __post_init__(self):
        if not self.P:
            raise ValueError("P must be nonempty")
        if not self.K:
            raise ValueError("K must be nonempty")
        object.__setattr__(self, "P", tuple(parse(w) if isinstance(w, str) else tuple(w)
                                            for w in self.P))
        if self.orbit is not None:
            orbit = tuple(parse(w) if isinstance(w, str) else tuple(w) for w in self.orbit)
            if len(orbit) != len(self.K):
                raise ValueError("orbit labels must match K")
            object.__setattr__(self, "orbit", orbit)

    @classmethod
    def from_orbit(cls, backend, base, orbit_words, P) -> "SpaceConfig":
        words = tuple(parse(w) if isinstance(w, str) else tuple(w) for w in orbit_words)
        return cls(backend, tuple(backend.act(w, base) for w in words), P, words)

    def distance_table(self, K=None) -> np.ndarray:
        """d(x, g y) indexed [g, x, y]."""
        if K is None and self.orbit is not None and hasattr(self.backend, "orbit_table"):
            return self.backend.orbit_table(self.K[0], self.orbit, self.P)
        K = self.K if K is None else K
        return _table(self.backend, K, self.P)


def _table(backend, K, P) -> np.ndarray:
    out = np.empty((len(P), len(K), len(K)))
    for k, g in enumerate(P):
        moved = [backend.act(g, y) for y in K]
        for i, x in enumerate(K):
            for j, y in enumerate(moved):
                out[k, i, j] = backend.distance(x, y)
    return out


def vnbhd_check(X: SpaceConfig, Y: SpaceConfig, relation, eps: float) -> bool:
    """Whether |d(x, g y) - d(x', g y')| < eps for all related pairs and g in P.

    ``relation`` is a collection of index pairs (i into X.K, j into Y.K)
    whose projections must cover both point sets.
    """
    relation = [(int(i), int(j)) for i, j in relation]
    if {i for i, _ in relation} != set(range(len(X.K))) or \
            {j for _, j in relation} != set(range(len(Y.K))):
        raise ValueError("relation must project onto both point sets")
    if X.P != Y.P:
        raise ValueError("configurations use different group elements")
    DX, DY = X.distance_table(), Y.distance_table()
    for i, j in relation:
        for k, m in relation:
            if np.any(np.abs(DX[:, i, k] - DY[:, j, m]) >= eps):
                return False
    return True


def distortion(X: SpaceConfig, Y: SpaceConfig) -> float:
    """max |d(x, g y) - d(x', g y')| under the graph relation K[i] <-> K'[i]."""
    if len(X.K) != len(Y.K):
        raise ValueError("graph relation needs equally many points")
    return float(np.max(np.abs(X.distance_table() - Y.distance_table())))


# -- minimax centre -------------------------------------------------------------

@dataclass(frozen=True)
class MinimaxResult:
    center: HPoint
    lam: float
    iterations: int = 0
    converged: bool = True


def _gen_matrices(rep: Representation, generators) -> list[MoebiusMap]:
    if generators is None:
        generators = [(k + 1,) for k in range(rep.rank)]
    out = []
    for g in generators:
        if isinstance(g, MoebiusMap):
            out.append(g.to_float())
        else:
            m = evaluate(rep, parse(g) if isinstance(g, str) else tuple(g))
            with rep.context():
                out.append(m.to_float())
    return out


def displacement(mats, p: HPoint) -> float:
    """f(p) = max_j d(p, g_j p)."""
    return max(hyp2.dist(p, hyp2.apply(m, p)) for m in mats)


def _start_points(mats) -> list[HPoint]:
    pts = [hyp2.I]
    for m in mats:
        if hyp2.classify(m).kind is hyp2.Kind.HYPERBOLIC:
            pts.append(hyp2.axis_point(m, 0.0))
    if len(pts) > 2:
        # midpoint of the first two axis feet
        pts.append(hyp2.segment_point(pts[1], pts[2], 0.5))
    return pts


def minimax_center(rep: Representation, generators=None, tol: float = 1e-8,
                   max_iter: int = 10_000) -> MinimaxResult:
    """Point minimizing the largest generator displacement.

    Geodesic line searches in rotating directions (f is convex along
    geodesics), then a smooth epigraph polish of max_j d(p, g_j p).
    """
    mats = _gen_matrices(rep, generators)
    if not mats:
        raise ValueError("need at least one generator")
    p = min(_start_points(mats), key=lambda q: displacement(mats, q))
    f = displacement(mats, p)
    golden = math.pi * (3 - math.sqrt(5))
    it, stall, reach = 0, 0, max(1.0, f)
    while it < max_iter:
        theta = it * golden
        res = optimize.minimize_scalar(
            lambda s: displacement(mats, hyp2.geodesic_from(p, theta, s)),
            bounds=(-reach, reach), method="bounded", options={"xatol": 1e-12})
        it += 1
        if res.fun < f - tol * 1e-3:
            stall = 0 if f - res.fun > tol else stall + 1
            p, f = hyp2.geodesic_from(p, theta, res.x), float(res.fun)
            reach = max(4 * abs(res.x), 1e-6)
        else:
            stall += 1
            reach = max(reach / 2, 1e-6)
        if stall >= 12:
            break
    else:
        raise NonConvergenceError(f"minimax search did not settle in {max_iter} steps (f={f:.6g})")
    p, f = _polish(mats, p, f)
    return MinimaxResult(p, f, it, True)


def _polish(mats, p: HPoint, f: float) -> tuple[HPoint, float]:
    """Minimize t subject to d(p, g_j p) <= t in coordinates (x / y0, log y)."""
    y0 = p.y

    def pt(z):
        return HPoint(float(p.x + y0 * z[0]), float(p.y * math.exp(z[1])))

    cons = [{"type": "ineq", "fun": (lambda z, m=m: z[2] - hyp2.dist(pt(z), hyp2.apply(m, pt(z))))}
            for m in mats]
    try:
        res = optimize.minimize(lambda z: z[2], np.array([0.0, 0.0, f]), method="SLSQP",
                                constraints=cons, options={"ftol": 1e-14, "maxiter": 500})
        q = pt(res.x)
        fq = displacement(mats, q)
        if fq < f:
            return q, fq
    except (ValueError, OverflowError):
        pass
    return p, f


def minimax_grid(rep: Representation, generators=None, n: int = 200, zooms: int = 3,
                 window: tuple[float, float, float, float] | None = None) -> MinimaxResult:
    """Brute-force f on an n x n grid in (x, log y), zooming on the best cell.

    The default window covers i and the axis feet of the generators with a
    margin of two units of hyperbolic distance.
    """
    mats = _gen_matrices(rep, generators)
    if window is None:
        pts = _start_points(mats)
        xs = [q.x for q in pts]
        ys = [q.y for q in pts]
        ly = [math.log(y) for y in ys]
        span = 4.0 * max(ys)
        window = (min(xs) - span, max(xs) + span, min(ly) - 2.0, max(ly) + 2.0)
    x0, x1, v0, v1 = window
    best = None
    for _ in range(zooms):
        X, V = np.meshgrid(np.linspace(x0, x1, n), np.linspace(v0, v1, n))
        Y = np.exp(V)
        F = np.zeros_like(X)
        for m in mats:
            gx, gy = hyp2.apply_arrays(m, X, Y)
            F = np.maximum(F, hyp2.dist_arrays(X, Y, gx, gy))
        k = np.unravel_index(np.argmin(F), F.shape)
        best = (float(X[k]), float(Y[k]), float(F[k]))
        dx, dv = 3 * (x1 - x0) / (n - 1), 3 * (v1 - v0) / (n - 1)
        x0, x1 = best[0] - dx, best[0] + dx
        v0, v1 = math.log(best[1]) - dv, math.log(best[1]) + dv
    return MinimaxResult(HPoint(best[0], best[1]), best[2], zooms, True)


# -- minimal distortion -----------------------------------------------------

@dataclass(frozen=True)
class DistortionResult:
    epsilon: float
    image: tuple = field(repr=False)
    evaluations: int = 0
    starts: int = 0
    note: str = ""


def _orbit_words(P, orbit) -> list[list[list[Word]]]:
    return [[[mul(inverse(u), g, v) for v in orbit] for u in orbit] for g in P]


def _orbit_table(mats, c: HPoint, scale: float) -> np.ndarray:
    out = np.array([[[hyp2.displacement_at(m, c) for m in row] for row in block]
                    for block in mats])
    return scale * out


def _nelder_mead(obj, starts, xatol=1e-10, fatol=1e-12):
    best, evals = None, 0
    for s in starts:
        res = optimize.minimize(obj, s, method="Nelder-Mead",
                                options={"xatol": xatol, "fatol": fatol, "maxiter": 4000})
        evals += res.nfev
        if best is None or res.fun < best.fun:
            best = res
    return best, evals


def min_distortion(X: SpaceConfig, target, seed: int = 0, restarts: int = 64) -> DistortionResult:
    """Smallest distortion found over gauge-fixed maps from ``X.K`` into ``target``.

    Hyperbolic targets: with orbit labels, ``K`` maps to the orbit of a
    free base point (2 parameters); without them, to the image of ``K``
    under an isometry (3 parameters).  Nelder-Mead runs from the gauge
    start plus random restarts.  Tree targets need orbit labels; the base
    point runs over vertices and edges near the identity vertex.  The result
    is an upper bound on the infimum over all correspondences.
    """
    D = X.distance_table()
    rng = np.random.default_rng(seed)
    if isinstance(target, HyperbolicPlane):
        if X.orbit is not None:
            mats = [[[target.matrix(w) for w in row] for row in block]
                    for block in _orbit_words(X.P, X.orbit)]
            c0 = minimax_center(target.rep).center
            base_scale = c0.y

            def to_point(z):
                return HPoint(c0.x + base_scale * z[0], c0.y * math.exp(z[1]))

            def obj(z):
                try:
                    T = _orbit_table(mats, to_point(z), target.scale)
                except (ValueError, OverflowError):
                    return math.inf
                return float(np.max(np.abs(T - D)))

            starts = [np.zeros(2)]
            if isinstance(X.backend, HyperbolicPlane) and X.backend.rep == target.rep:
                p0 = X.K[0]
                starts.append(np.array([(p0.x - c0.x) / base_scale, math.log(p0.y / c0.y)]))
            while len(starts) < restarts:
                starts.append(rng.normal(0.0, 0.5, 2))
            best, evals = _nelder_mead(obj, starts)
            c = to_point(best.x)
            image = tuple(target.act(w, c) for w in X.orbit)
            return DistortionResult(float(best.fun), image, evals, len(starts), "orbit map")
        ref = X.K[0]

        def iso(z):
            return hyp2.lift_point(HPoint(ref.x + ref.y * z[0], ref.y * math.exp(z[1]))) \
                @ hyp2.rotation(z[2]) @ hyp2.lift_point(ref).inverse()

        def obj3(z):
            try:
                M = iso(z)
                K2 = [hyp2.apply(M, p) for p in X.K]
            except (ValueError, OverflowError):
                return math.inf
            return float(np.max(np.abs(_table(target, K2, X.P) - D)))

        starts = [np.zeros(3)]
        while len(starts) < restarts:
            starts.append(np.concatenate([rng.normal(0.0, 0.5, 2), rng.uniform(-math.pi, math.pi, 1)]))
        best, evals = _nelder_mead(obj3, starts)
        M = iso(best.x)
        return DistortionResult(float(best.fun), tuple(hyp2.apply(M, p) for p in X.K), evals,
                                len(starts), "isometry map")
    if isinstance(target, DualTree):
        if X.orbit is None:
            raise ValueError("tree targets need orbit-labelled configurations")
        return _tree_distortion(X, D, target)
    raise TypeError(f"unknown backend {type(target).__name__}")


def _tree_distortion(X: SpaceConfig, D: np.ndarray, target: DualTree) -> DistortionResult:
    seen, vertices = set(), []
    for g in ball(2):
        r = region(target.model.to_slope_zero(g))
        if r not in seen:
            seen.add(r)
            vertices.append(g)
    best: tuple[float, tuple] | None = None
    evals = 0

    def table_for(base: TreePoint) -> np.ndarray:
        return _table(target, [base.moved(w) for w in X.orbit], X.P)

    for g in vertices:
        v = TreePoint(g)
        val = float(np.max(np.abs(table_for(v) - D)))
        evals += 1
        if best is None or val < best[0]:
            best = (val, v)
        for s in target.stable_words():
            h = mul(g, s)

            def obj(t, g=g, h=h):
                return float(np.max(np.abs(table_for(TreePoint(g, h, float(t))) - D)))

            res = optimize.minimize_scalar(obj, bounds=(0.0, 1.0), method="bounded",
                                           options={"xatol": 1e-10})
            evals += res.nfev
            if res.fun < best[0]:
                best = (float(res.fun), TreePoint(g, h, float(res.x)))
    base = best[1]
    return DistortionResult(best[0], tuple(base.moved(w) for w in X.orbit), evals,
                            len(vertices), f"tree base {base}")


def orbit_config(rep: Representation, P=("a", "b", "ab"), scale: float = 1.0,
                 center: HPoint | None = None) -> SpaceConfig:
    """K = {c, a c, b c} around the minimax centre c, in the hyperbolic plane at ``scale``."""
    if center is None:
        center = minimax_center(rep).center
    return SpaceConfig.from_orbit(HyperbolicPlane(rep, scale), center, ("", "a", "b"), P)


# -- degeneration along a pinching family ----------------------------------

@dataclass(frozen=True)
class TrajectoryRow:
    epsilon: float
    lam: float
    rescaled: tuple[float, ...]
    proj_distance: float
    distortion: float | None = None


@dataclass(frozen=True)
class Trajectory:
    classes: tuple[ConjClass, ...]
    rows: tuple[TrajectoryRow, ...]

    def column(self, name: str) -> np.ndarray:
        if name in ("epsilon", "lam", "proj_distance", "distortion"):
            return np.array([getattr(r, name) for r in self.rows], dtype=float)
        k = [str(c) for c in self.classes].index(name)
        return np.array([r.rescaled[k] for r in self.rows])


def degeneration_trajectory(eps_grid, slope, classes, target: DualTreeModel | None = None,
                            with_distortion: bool = False, P=("a", "b", "ab"),
                            seed: int = 0) -> Trajectory:
    """Rescaled spectra of the pinching family against the dual tree.

    For each eps: lambda from :func:`minimax_center`, lengths divided by
    lambda, and the projective sup-distance to the tree length function.
    With ``with_distortion`` the orbit configuration at scale 1/lambda is also
    compared with the tree by :func:`min_distortion`.
    """
    eps_grid = [float(e) for e in eps_grid]
    if any(b >= a for a, b in zip(eps_grid, eps_grid[1:])):
        raise ValueError("eps grid must be strictly decreasing")
    if target is None:
        target = DualTreeModel.from_slope(slope)
    elif target.slope != DualTreeModel.from_slope(slope).slope:
        raise ValueError("target slope differs from the family slope")
    classes = tuple(classes)
    tree = projectivize(length_function(target, classes))
    rows = []
    for eps in eps_grid:
        try:
            rho = pinching_family(eps, slope)
            mm = minimax_center(rho)
            S: LengthSpectrum = spectrum(rho, classes)
            rescaled = S.scaled(1.0 / mm.lam)
            delta = projective_distance(projectivize(rescaled), tree)
            dist_val = None
            if with_distortion:
                X = orbit_config(rho, P, scale=1.0 / mm.lam, center=mm.center)
                dist_val = min_distortion(X, DualTree(target), seed=seed).epsilon
        except (ValueError, NonConvergenceError) as exc:
            raise type(exc)(f"eps={eps:g}: {exc}") from None
        rows.append(TrajectoryRow(eps, mm.lam, rescaled.values, delta, dist_val))
    return Trajectory(classes, tuple(rows))


# -- comparison with the usual topology -----------------------------------

# Comparison constants: distortion <= C * spectrum gap and spectrum gap <= C' * distortion.
# Fitted once on five Fricke points at maxLen 4 (observed ratios 0.29-0.74 and 1.35-3.5)
# and frozen with at least a factor-2 margin.
COMPARISON_C = 4.0
COMPARISON_C_PRIME = 8.0


@dataclass(frozen=True)
class ConsistencyRow:
    delta: float
    distortion: float
    spectrum_gap: float


def topologies_agree(rows) -> bool:
    """Both comparison directions hold and both columns shrink strictly with delta.

    Spectrum close implies distortion small (distortion <= C * gap), and
    distortion small implies spectrum close (gap <= C' * distortion).
    """
    rows = sorted(rows, key=lambda r: -r.delta)
    dist = [r.distortion for r in rows]
    gaps = [r.spectrum_gap for r in rows]
    bounded = all(r.distortion <= COMPARISON_C * r.spectrum_gap and
                  r.spectrum_gap <= COMPARISON_C_PRIME * r.distortion for r in rows)
    shrinking = all(b < a for a, b in zip(dist, dist[1:])) and \
        all(b < a for a, b in zip(gaps, gaps[1:]))
    return bounded and shrinking


def usual_topology_comparison(x: float, y: float, deltas=(1e-2, 1e-3, 1e-4), max_len: int = 4,
                              branch: str = "-", seed: int = 0) -> list[ConsistencyRow]:
    """Distortion and spectrum change when Fricke coordinates move by delta.

    The second representation has coordinates (x + delta/sqrt2, y + delta/sqrt2).
    """
    rho = punctured_torus_from_traces(x, y, branch)
    X = orbit_config(rho)
    classes = enumerate_classes(max_len)
    S0 = spectrum(rho, classes).as_array()
    rows = []
    for d in deltas:
        h = d / math.sqrt(2.0)
        rho2 = punctured_torus_from_traces(x + h, y + h, branch)
        eps = min_distortion(X, HyperbolicPlane(rho2), seed=seed).epsilon
        gap = float(np.max(np.abs(spectrum(rho2, classes).as_array() - S0)))
        rows.append(ConsistencyRow(d, eps, gap))
    return rows
