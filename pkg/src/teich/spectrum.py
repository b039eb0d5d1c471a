"""Marked length spectra, projectivization and injectivity tools."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from teich import hyp2
from teich.group import ConjClass, conj_class, enumerate_classes, mul, parse, power
from teich.parallel import pmap
from teich.rep import Representation, evaluate

DEFAULT_MAX_LEN = 6


@dataclass(frozen=True)
class LengthSpectrum:
    """Lengths indexed by an ordered list of conjugacy classes."""

    classes: tuple[ConjClass, ...]
    values: tuple[float, ...]

    def __post_init__(self):
        if len(self.classes) != len(self.values):
            raise ValueError("classes and values differ in length")

    @property
    def labels(self) -> list[str]:
        return [str(c) for c in self.classes]

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)

    def as_dict(self) -> dict[str, float]:
        return dict(zip(self.labels, self.values))

    def scaled(self, c: float) -> "LengthSpectrum":
        return LengthSpectrum(self.classes, tuple(c * v for v in self.values))

    def __getitem__(self, key) -> float:
        if isinstance(key, str):
            key = conj_class(key)
        return self.values[self.classes.index(key)]

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class ProjectivePoint:
    """A spectrum divided by its maximum; ``scale`` is that maximum."""

    classes: tuple[ConjClass, ...]
    values: tuple[float, ...]
    scale: float

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)

    @property
    def labels(self) -> list[str]:
        return [str(c) for c in self.classes]


def _as_class(alpha) -> ConjClass:
    if isinstance(alpha, ConjClass):
        return alpha
    return conj_class(parse(alpha) if isinstance(alpha, str) else tuple(alpha))


def translation_length(rho: Representation, alpha) -> float:
    """Length of the closed geodesic in the class ``alpha`` (0 for parabolics)."""
    c = _as_class(alpha)
    m = evaluate(rho, c.word)
    with rho.context():
        try:
            return hyp2.translation_length(m)
        except ValueError as exc:
            raise ValueError(f"class {c}: {exc}") from None


def spectrum(rho: Representation, classes, threads: int | None = None) -> LengthSpectrum:
    classes = tuple(_as_class(c) for c in classes)
    # mpmath keeps its precision in process-global state, so high-precision
    # representations are evaluated on one thread
    n = 1 if rho.dps else threads
    values = pmap(lambda c: translation_length(rho, c), classes, threads=n)
    return LengthSpectrum(classes, tuple(values))


def projectivize(s: LengthSpectrum) -> ProjectivePoint:
    arr = s.as_array()
    top = float(arr.max()) if arr.size else 0.0
    if not top > 0:
        raise ValueError("cannot projectivize an all-zero spectrum")
    return ProjectivePoint(s.classes, tuple(float(v) for v in arr / top), top)


def projective_distance(p, q) -> float:
    """Sup-norm distance between max-normalized spectra over the same classes."""
    if isinstance(p, LengthSpectrum):
        p = projectivize(p)
    if isinstance(q, LengthSpectrum):
        q = projectivize(q)
    if p.classes != q.classes:
        raise ValueError("projective points are indexed by different class lists")
    if not p.classes:
        return 0.0
    return float(np.max(np.abs(p.as_array() - q.as_array())))


def fricke_embedding(rho: Representation) -> tuple[float, float, float]:
    """Lengths of the classes a, b and ab."""
    return tuple(translation_length(rho, w) for w in ("a", "b", "ab"))


# -- rigidity of cosh sums -------------------------------------------------

def cosh_rigidity_check(u: float, v: float, w: float, x: float, t: float,
                        tol: float = 1e-9) -> bool:
    """Whether cosh u + cosh v = cosh w + cosh x holds at scale 1 and at scale t."""
    if min(u, v, w, x) <= 0 or t <= 1:
        raise ValueError("need positive lengths and t > 1")
    for s in (1.0, t):
        lhs = math.cosh(s * u) + math.cosh(s * v)
        rhs = math.cosh(s * w) + math.cosh(s * x)
        if abs(lhs - rhs) > tol * max(1.0, abs(lhs)):
            return False
    return True


def _solve_cosh(u: float, v: float, w: float) -> float:
    """The x >= 0 with cosh x = cosh u + cosh v - cosh w, or nan if none.

    Written with cosh y - 1 = 2 sinh(y/2)^2 so small roots keep full accuracy.
    """
    k = math.sinh(u / 2) ** 2 + math.sinh(v / 2) ** 2 - math.sinh(w / 2) ** 2
    if k < 0:
        return math.nan
    return 2.0 * math.asinh(math.sqrt(k))


@dataclass(frozen=True)
class CoshRigiditySolution:
    x_scale1: float
    x_scale_t: float
    difference: float

    @property
    def consistent(self) -> bool:
        return self.difference <= 1e-9


def cosh_rigidity_solve(u: float, v: float, t: float, w: float) -> CoshRigiditySolution:
    """Solve each cosh equation for x given (u, v, w) and compare the roots.

    Rigidity says the two roots agree only when w is u or v.
    """
    x1 = _solve_cosh(u, v, w)
    x2 = _solve_cosh(t * u, t * v, t * w) / t
    diff = abs(x1 - x2) if not (math.isnan(x1) or math.isnan(x2)) else math.inf
    return CoshRigiditySolution(x1, x2, diff)


def injectivity_probe(rho1: Representation, rho2: Representation,
                      max_len: int = DEFAULT_MAX_LEN) -> float:
    classes = enumerate_classes(max_len, exclude_peripheral=True)
    return projective_distance(spectrum(rho1, classes), spectrum(rho2, classes))


# -- axis geometry and length growth --------------------------------------

def beardon_half_trace(g: hyp2.MoebiusMap, h: hyp2.MoebiusMap) -> float:
    """Predicted |tr(gh)| / 2 from the axes of two hyperbolic elements.

    Disjoint axes at distance d: |cosh d sinh(lg/2) sinh(lh/2) + e cosh(lg/2) cosh(lh/2)|
    with e = +1 when the translations are coherent and -1 otherwise.
    Crossing axes at angle theta between attracting directions:
    |cos theta sinh sinh + cosh cosh|.
    """
    rel = hyp2.axis_relation(g, h)
    ag = hyp2.translation_length(g) / 2
    ah = hyp2.translation_length(h) / 2
    ss = math.sinh(ag) * math.sinh(ah)
    cc = math.cosh(ag) * math.cosh(ah)
    if rel.kind == "disjoint":
        return abs(math.cosh(rel.distance) * ss + (1.0 if rel.coherent else -1.0) * cc)
    if rel.kind == "crossing":
        return abs(math.cos(rel.angle) * ss + cc)
    raise ValueError("asymptotic axes have no finite distance")


def length_gap(rho: Representation, g, h, n: int, m: int) -> float:
    """l(g^n h^m) - l(g^n) - l(h^m) for the hyperbolic structure ``rho``."""
    g = parse(g) if isinstance(g, str) else tuple(g)
    h = parse(h) if isinstance(h, str) else tuple(h)
    gn, hm = power(g, n), power(h, m)
    return (translation_length(rho, mul(gn, hm)) - translation_length(rho, gn)
            - translation_length(rho, hm))

