"""The upper half-plane and its orientation-preserving isometries PSL2(R).

Matrices are stored as SL2 lifts ``(a, b, c, d)``; the PSL2 element is the
pair ``±M``.  Entries may be floats or ``mpmath.mpf`` (high-precision
representations feed mpf entries through here); all reported geometric
quantities are floats.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

import mpmath
import numpy as np

PARABOLIC_TOL = 1e-8
IDENTITY_TOL = 1e-10
DET_TOL = 1e-10

# rounding head-room used when deciding whether a discriminant is zero
_ROUNDING = 64 * 2.0 ** -52


@dataclass(frozen=True)
class HPoint:
    """The point ``x + iy`` of the upper half-plane."""

    x: float
    y: float

    def __post_init__(self):
        if not self.y > 0:
            raise ValueError(f"HPoint requires y > 0, got y={self.y!r}")

    @classmethod
    def from_complex(cls, z: complex) -> "HPoint":
        return cls(z.real, z.imag)

    @property
    def z(self) -> complex:
        return complex(self.x, self.y)

    def to_list(self) -> list[float]:
        return [float(self.x), float(self.y)]


I = HPoint(0.0, 1.0)


@dataclass(frozen=True)
class MoebiusMap:
    """An SL2(R) lift ``(a b; c d)`` of an isometry ``z -> (az + b)/(cz + d)``."""

    a: float
    b: float
    c: float
    d: float

    @classmethod
    def from_entries(cls, a, b, c, d, normalize: bool = True) -> "MoebiusMap":
        det = a * d - b * c
        if not det > 0:
            raise ValueError(f"determinant must be positive, got {float(det)!r}")
        if normalize:
            s = det ** 0.5
            a, b, c, d = a / s, b / s, c / s, d / s
        return cls(a, b, c, d)

    @classmethod
    def from_list(cls, vals) -> "MoebiusMap":
        a, b, c, d = vals
        return cls.from_entries(float(a), float(b), float(c), float(d))

    @classmethod
    def identity(cls) -> "MoebiusMap":
        return cls(1.0, 0.0, 0.0, 1.0)

    @property
    def entries(self) -> tuple:
        return (self.a, self.b, self.c, self.d)

    @property
    def det(self):
        return self.a * self.d - self.b * self.c

    @property
    def trace(self):
        return self.a + self.d

    def inverse(self) -> "MoebiusMap":
        return MoebiusMap(self.d, -self.b, -self.c, self.a)

    def __matmul__(self, other: "MoebiusMap") -> "MoebiusMap":
        a, b, c, d = self.entries
        e, f, g, h = other.entries
        return MoebiusMap(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)

    def __neg__(self) -> "MoebiusMap":
        return MoebiusMap(-self.a, -self.b, -self.c, -self.d)

    def canonical(self) -> "MoebiusMap":
        """Sign representative with trace >= 0 (ties: largest entry positive)."""
        t = self.trace
        if abs(t) > 1e-12:
            return self if t > 0 else -self
        big = max(self.entries, key=abs)
        return self if big > 0 else -self

    def to_float(self) -> "MoebiusMap":
        return MoebiusMap(float(self.a), float(self.b), float(self.c), float(self.d))

    def is_close(self, other: "MoebiusMap", tol: float = 1e-9) -> bool:
        """Equality as PSL2 elements."""
        p = self.canonical().entries
        q = other.canonical().entries
        return all(abs(float(x) - float(y)) <= tol * max(1.0, abs(float(x))) for x, y in zip(p, q))

    def to_list(self) -> list[float]:
        return [float(v) for v in self.entries]

    def as_array(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=float)


def conjugate(g: MoebiusMap, m: MoebiusMap) -> MoebiusMap:
    return g @ m @ g.inverse()


class Kind(enum.Enum):
    IDENTITY = "identity"
    ELLIPTIC = "elliptic"
    PARABOLIC = "parabolic"
    HYPERBOLIC = "hyperbolic"


@dataclass(frozen=True)
class IsometryKind:
    kind: Kind
    translation_length: float | None = None
    repelling: float | None = None
    attracting: float | None = None
    fixed_point: HPoint | None = None

    @property
    def fixed_points(self) -> tuple[float, float] | None:
        if self.kind is not Kind.HYPERBOLIC:
            return None
        return (self.repelling, self.attracting)


def apply(m: MoebiusMap, p: HPoint) -> HPoint:
    a, b, c, d = (float(v) for v in m.entries)
    z = p.z
    num = a * z + b
    den = c * z + d
    w = num / den
    # imaginary part through det / |cz+d|^2 keeps it positive
    y = (a * d - b * c) * p.y / (abs(den) ** 2)
    return HPoint(w.real, y)


def dist(p: HPoint, q: HPoint) -> float:
    """Hyperbolic distance; cosh d = 1 + |p - q|^2 / (2 p.y q.y)."""
    chord = math.hypot(p.x - q.x, p.y - q.y)
    return 2.0 * math.asinh(chord / (2.0 * math.sqrt(p.y * q.y)))


def dist_arrays(x1, y1, x2, y2):
    """Vectorized :func:`dist` over numpy arrays."""
    chord = np.hypot(x1 - x2, y1 - y2)
    return 2.0 * np.arcsinh(chord / (2.0 * np.sqrt(y1 * y2)))


def apply_arrays(m: MoebiusMap, x, y):
    a, b, c, d = (float(v) for v in m.entries)
    z = x + 1j * y
    den = c * z + d
    w = (a * z + b) / den
    return w.real, (a * d - b * c) * y / np.abs(den) ** 2


def discriminant(m: MoebiusMap) -> tuple[float, float]:
    """``tr^2 - 4`` for a det-1 lift, with the magnitude of the terms used.

    Of the two algebraically equal expressions ``tr^2 - 4`` and
    ``(a - d)^2 + 4bc`` the one with less cancellation is returned.
    """
    a, b, c, d = m.entries
    t = a + d
    d1, s1 = t * t - 4, t * t + 4
    d2, s2 = (a - d) ** 2 + 4 * b * c, (a - d) ** 2 + 4 * abs(b * c)
    if s1 <= s2:
        return float(d1), float(s1)
    return float(d2), float(s2)


def _rounding(x) -> float:
    if isinstance(x, mpmath.mpf):
        return 64 * 2.0 ** -mpmath.mp.prec
    return _ROUNDING


def _half_length(disc: float) -> float:
    # sinh(l/2) = sqrt(tr^2 - 4) / 2
    return math.asinh(math.sqrt(disc) / 2.0)


def _ratio(num, den) -> float:
    if den == 0:
        return math.inf
    return float(num / den)


def classify(m: MoebiusMap) -> IsometryKind:
    m = m.canonical()
    a, b, c, d = m.entries
    if max(abs(a - 1), abs(b), abs(c), abs(d - 1)) <= IDENTITY_TOL:
        return IsometryKind(Kind.IDENTITY)
    t = float(abs(a + d))
    if abs(t - 2.0) <= PARABOLIC_TOL:
        return IsometryKind(Kind.PARABOLIC)
    if t < 2.0:
        s = math.sqrt(4.0 - t * t)
        x = float((a - d) / (2 * c))
        y = s / (2 * abs(float(c)))
        return IsometryKind(Kind.ELLIPTIC, fixed_point=HPoint(x, y))
    disc, _ = discriminant(m)
    s = math.sqrt(disc)
    # eigenvectors chosen so the leading difference has no cancellation
    if float(d - a) >= 0:
        attracting = _ratio(b, ((d - a) + s) / 2)
        repelling = _ratio(((a - d) - s) / 2, c)
    else:
        attracting = _ratio(((a - d) + s) / 2, c)
        repelling = _ratio(b, ((d - a) - s) / 2)
    return IsometryKind(Kind.HYPERBOLIC, translation_length=2.0 * _half_length(disc),
                        repelling=repelling, attracting=attracting)


def translation_length(m: MoebiusMap) -> float:
    """inf_x d(x, m x): 0 for parabolics, 2 asinh(sqrt(tr^2-4)/2) for hyperbolics.

    Continuous across the parabolic band, so very short hyperbolics keep
    their length.  Raises ``ValueError`` on elliptic elements.
    """
    disc, scale = discriminant(m)
    if abs(disc) <= _rounding(m.a) * scale:
        return 0.0
    if disc < 0:
        t = abs(float(m.trace))
        if 2.0 - t <= PARABOLIC_TOL:
            return 0.0
        raise ValueError("non-discrete or torsion image: elliptic element")
    return 2.0 * _half_length(disc)


def trace_product_identity_gap(A: MoebiusMap, B: MoebiusMap) -> float:
    """tr(AB) + tr(A^-1 B) - tr(A) tr(B); zero for SL2 lifts."""
    return float((A @ B).trace + (A.inverse() @ B).trace - A.trace * B.trace)


def to_vertical(r: float, a: float) -> MoebiusMap:
    """Isometry sending the boundary point ``r`` to 0 and ``a`` to infinity."""
    if math.isinf(a):
        return MoebiusMap(1.0, -r, 0.0, 1.0)
    if math.isinf(r):
        return MoebiusMap(0.0, -1.0, 1.0, -a)
    s = 1.0 if r > a else -1.0
    return MoebiusMap.from_entries(1.0, -r, s, -s * a)


def axis_point(m: MoebiusMap, t: float) -> HPoint:
    """Point at signed arc length ``t`` along the axis of ``m``.

    ``t = 0`` is the foot of the perpendicular from ``i``; positive ``t``
    moves toward the attracting fixed point.
    """
    k = classify(m)
    if k.kind is not Kind.HYPERBOLIC:
        raise ValueError(f"axis_point needs a hyperbolic element, got {k.kind.value}")
    h = to_vertical(k.repelling, k.attracting)
    w = apply(h, I)
    s0 = math.log(math.hypot(w.x, w.y))
    return apply(h.inverse(), HPoint(0.0, math.exp(s0 + t)))


def displacement_at(m: MoebiusMap, p: HPoint) -> float:
    """d(p, m p) from the entries of m conjugated so that p becomes i.

    For a det-1 lift g, sinh(d(i, g i) / 2)^2 = ((a - d)^2 + (b + c)^2) / 4, which
    stays accurate when m has huge entries (evaluated in the entries' type).
    """
    one = m.a * 0 + 1
    r = (one * p.y) ** 0.5
    x = one * p.x
    # L = (r, x/r; 0, 1/r) sends i to p; form L^-1 m L
    a, b, c, d = m.entries
    a1, b1 = a / r - x * c / r, b / r - x * d / r
    c1, d1 = c * r, d * r
    a2, b2 = a1 * r, a1 * x / r + b1 / r
    c2, d2 = c1 * r, c1 * x / r + d1 / r
    q = float((a2 - d2) ** 2 + (b2 + c2) ** 2)
    return 2.0 * math.asinh(math.sqrt(max(q, 0.0)) / 2.0)


def lift_point(p: HPoint) -> MoebiusMap:
    """Translation-dilation sending ``i`` to ``p``."""
    r = math.sqrt(p.y)
    return MoebiusMap(r, p.x / r, 0.0, 1.0 / r)


def rotation(theta: float) -> MoebiusMap:
    """Elliptic fixing ``i``; rotates tangent directions at ``i`` by ``2 theta``."""
    c, s = math.cos(theta), math.sin(theta)
    return MoebiusMap(c, s, -s, c)


def geodesic_frame(p: HPoint, q: HPoint) -> tuple[MoebiusMap, float]:
    """``(F, d)`` with ``F(i) = p``, ``F(i e^d) = q`` and ``d = dist(p, q)``."""
    g = lift_point(p)
    q1 = apply(g.inverse(), q)
    w = (q1.z - 1j) / (q1.z + 1j)
    theta = -cmath.phase(w) / 2.0 if abs(w) > 0 else 0.0
    return g @ rotation(theta).inverse(), dist(p, q)


def geodesic_from(p: HPoint, angle: float, s: float) -> HPoint:
    """Point at distance ``s`` from ``p`` leaving in Euclidean direction ``angle``."""
    theta = (math.pi / 2 - angle) / 2.0
    F = lift_point(p) @ rotation(theta).inverse()
    return apply(F, HPoint(0.0, math.exp(s)))


def segment_point(p: HPoint, q: HPoint, u: float) -> HPoint:
    """Point at fraction ``u`` in [0, 1] of the geodesic segment [p, q]."""
    F, d = geodesic_frame(p, q)
    return apply(F, HPoint(0.0, math.exp(u * d)))


def distance_to_segment(x: HPoint, p: HPoint, q: HPoint) -> float:
    F, d = geodesic_frame(p, q)
    w = apply(F.inverse(), x)
    s = 0.5 * math.log(w.x * w.x + w.y * w.y)
    if 0.0 <= s <= d:
        return math.asinh(abs(w.x) / w.y)
    return min(dist(x, p), dist(x, q))


@dataclass(frozen=True)
class AxisRelation:
    """Relative position of two hyperbolic axes.

    ``kind`` is ``"disjoint"`` (``distance`` > 0, ``coherent`` when the
    attracting ends are adjacent on the circle), ``"crossing"`` (``angle``
    between the attracting directions) or ``"asymptotic"``.
    """

    kind: str
    distance: float = 0.0
    coherent: bool | None = None
    angle: float | None = None


def axis_relation(g: MoebiusMap, h: MoebiusMap) -> AxisRelation:
    kg, kh = classify(g), classify(h)
    if kg.kind is not Kind.HYPERBOLIC or kh.kind is not Kind.HYPERBOLIC:
        raise ValueError("axis_relation needs two hyperbolic elements")
    T = to_vertical(kg.repelling, kg.attracting)

    def image(x):
        if math.isinf(x):
            a, _, c, _ = T.entries
            return math.inf if c == 0 else a / c
        a, b, c, d = T.entries
        den = c * x + d
        return math.inf if den == 0 else (a * x + b) / den

    p, q = image(kh.repelling), image(kh.attracting)
    if p == 0 or q == 0 or math.isinf(p) or math.isinf(q):
        return AxisRelation("asymptotic")
    if p * q < 0:
        cos_theta = (p + q) / (q - p)
        return AxisRelation("crossing", angle=math.acos(max(-1.0, min(1.0, cos_theta))))
    r = min(abs(p), abs(q)) / max(abs(p), abs(q))
    return AxisRelation("disjoint", distance=2.0 * math.atanh(math.sqrt(r)),
                        coherent=abs(p) < abs(q))


def random_sl2(rng: np.random.Generator, scale: float = 1.0) -> MoebiusMap:
    """A random SL2 lift with entries of order ``scale`` (rejects near-singular draws)."""
    while True:
        a, b, c, d = rng.normal(0.0, scale, 4)
        det = a * d - b * c
        if abs(det) < 0.05 * scale * scale:
            continue
        if det < 0:
            a, b = -a, -b
            det = -det
        s = math.sqrt(det)
        return MoebiusMap(a / s, b / s, c / s, d / s)


def random_point(rng: np.random.Generator, spread: float = 2.0) -> HPoint:
    return HPoint(rng.uniform(-spread, spread), math.exp(rng.uniform(-spread, spread)))


def random_hyperbolic(rng: np.random.Generator) -> MoebiusMap:
    """Conjugate of a diagonal ``diag(e^{l/2}, e^{-l/2})`` by a random isometry."""
    length = rng.uniform(0.05, 6.0)
    lam = math.exp(length / 2)
    g = random_sl2(rng)
    return conjugate(g, MoebiusMap(lam, 0.0, 0.0, 1.0 / lam))
