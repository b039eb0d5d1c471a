"""Holonomy representations of surface groups into PSL2(R).

A :class:`Representation` assigns SL2 lifts to the free generators and
evaluates words by multiplying lifts.  Letters are matched to generators
by position: ``a`` is the first listed generator, ``b`` the second, and so on.

Pinching families are built in extended precision (``mpmath``) because
their word traces sit within ``eps**2`` of 2 while the matrix entries
grow like ``1/eps``; double precision loses the short lengths there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import mpmath

from teich import _kernels, _purekernels
from teich.group import (COMMUTATOR, FreeAutomorphism, Word, format_word, mul, parse,
                         slope_automorphism, slope_pair)
from teich.hyp2 import MoebiusMap

PERIPHERAL_TOL = 1e-6
JORGENSEN_BOUND = 1.0
PINCH_MARGIN = 1.25


@dataclass(frozen=True)
class Representation:
    """Generator lifts plus surface metadata.

    ``precompose`` (optional) is an automorphism applied to every word before
    the lifts are multiplied, so the represented map is ``w -> base(phi(w))``.
    ``dps`` switches evaluation to mpmath with that many digits; generator
    entries are then mpf.
    """

    names: tuple[str, ...]
    lifts: tuple[MoebiusMap, ...]
    peripherals: tuple[Word, ...] = (COMMUTATOR,)
    genus: int = 1
    punctures: int = 1
    precompose: FreeAutomorphism | None = None
    dps: int | None = None
    label: str = field(default="", compare=False)

    def __post_init__(self):
        if len(self.names) != len(self.lifts):
            raise ValueError("names and lifts must have equal length")
        if self.precompose is not None and self.precompose.rank != len(self.lifts):
            raise ValueError("precomposition rank does not match the generator count")

    @classmethod
    def from_generators(cls, generators: dict, peripherals=(COMMUTATOR,), genus=1,
                        punctures=1, label="") -> "Representation":
        names = tuple(generators)
        lifts = tuple(m if isinstance(m, MoebiusMap) else MoebiusMap(*(float(v) for v in m))
                      for m in generators.values())
        peris = tuple(parse(p) if isinstance(p, str) else tuple(p) for p in peripherals)
        return cls(names, lifts, peris, genus, punctures, label=label)

    @property
    def rank(self) -> int:
        return len(self.lifts)

    def generators(self) -> dict[str, MoebiusMap]:
        """Effective generator images (after precomposition)."""
        return {n: evaluate(self, ((k + 1),)) for k, n in enumerate(self.names)}

    def precomposed(self, phi: FreeAutomorphism) -> "Representation":
        """The representation ``w -> self(phi(w))``."""
        inner = phi if self.precompose is None else self.precompose.compose(phi)
        return replace(self, precompose=inner, label=f"{self.label}*{phi.name}")

    def context(self):
        """mpmath working-precision context for this representation."""
        return mpmath.workdps(self.dps) if self.dps else mpmath.workdps(mpmath.mp.dps)


@dataclass(frozen=True)
class FrickeTriple:
    x: float
    y: float
    z: float

    @property
    def residual(self) -> float:
        """x^2 + y^2 + z^2 - xyz, zero on the once-punctured torus."""
        x, y, z = self.x, self.y, self.z
        return x * x + y * y + z * z - x * y * z

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.z)


def evaluate(rho: Representation, w) -> MoebiusMap:
    """Product of generator lifts along ``w`` (string or int tuple)."""
    if isinstance(w, str):
        w = parse(w)
    if rho.precompose is not None:
        w = rho.precompose(w)
    for x in w:
        if not 1 <= abs(x) <= rho.rank:
            raise KeyError(f"letter {format_word((x,))!r} has no generator image")
    if rho.dps:
        with mpmath.workdps(rho.dps):
            prod = _purekernels.word_product(w, [m.entries for m in rho.lifts])
            one = mpmath.mpf(1)
            return MoebiusMap(*(one * v for v in prod))
    prod = _kernels.word_product(w, [tuple(float(v) for v in m.entries) for m in rho.lifts])
    return MoebiusMap(*prod)


def trace(rho: Representation, w) -> float:
    m = evaluate(rho, w)
    with rho.context():
        return float(m.trace)


def fricke_triple(rho: Representation) -> FrickeTriple:
    return FrickeTriple(trace(rho, "a"), trace(rho, "b"), trace(rho, "ab"))


def _fricke_lifts(x, y, branch: str, gauge: str, sqrt):
    """SL2 lifts A = diag(lam, 1/lam), B = (s, t; u, v) with traces x, y, z.

    ``sqrt`` is ``math.sqrt`` or ``mpmath.sqrt``; everything is written to
    avoid cancellation when x is close to 2.
    """
    if branch not in ("+", "-"):
        raise ValueError(f"branch must be '+' or '-', got {branch!r}")
    if not (x > 2 and y > 2):
        raise ValueError("no real Fricke solution: traces must exceed 2")
    gap = (x - 2) * (x + 2)  # x^2 - 4
    disc = y * y * gap - 4 * x * x  # x^2 y^2 - 4x^2 - 4y^2
    if disc < 0:
        raise ValueError("no real Fricke solution: discriminant is negative")
    root_gap = sqrt(gap)  # lam - 1/lam
    lam = (x + root_gap) / 2
    sign = 1 if branch == "+" else -1
    s = y / 2 + sign * sqrt(disc) / (2 * root_gap)
    v = y - s
    tu = 4 / gap  # s v - 1
    if gauge == "unit":
        t, u = tu, 1
    elif gauge == "balanced":
        t = u = 2 / root_gap
    else:
        raise ValueError(f"unknown gauge {gauge!r}")
    return (lam, 0 * lam, 0 * lam, 1 / lam), (s, t, u + 0 * lam, v)


def punctured_torus_from_traces(x: float, y: float, branch: str = "-", gauge: str = "unit",
                                dps: int | None = None) -> Representation:
    """Once-punctured torus representation with tr A = x, tr B = y.

    tr AB = z = (xy +- sqrt(x^2 y^2 - 4x^2 - 4y^2)) / 2 according to ``branch``,
    so that tr [A, B] = -2.  ``gauge="unit"`` fixes the lower-left entry of B
    to 1; ``"balanced"`` makes B's off-diagonal entries equal.
    """
    if dps:
        with mpmath.workdps(dps):
            A, B = _fricke_lifts(mpmath.mpf(x), mpmath.mpf(y), branch, gauge, mpmath.sqrt)
            lifts = (MoebiusMap(*A), MoebiusMap(*B))
    else:
        A, B = _fricke_lifts(float(x), float(y), branch, gauge, math.sqrt)
        lifts = (MoebiusMap(*(float(v) for v in A)), MoebiusMap(*(float(v) for v in B)))
    return Representation(("a", "b"), lifts, (COMMUTATOR,), 1, 1, dps=dps,
                          label=f"fricke({x:g},{y:g},{branch})")


def fricke_z(x: float, y: float, branch: str = "-") -> float:
    disc = x * x * y * y - 4 * x * x - 4 * y * y
    if disc < 0:
        raise ValueError("no real Fricke solution: discriminant is negative")
    return (x * y + (1 if branch == "+" else -1) * math.sqrt(disc)) / 2


def pinch_precision(eps: float) -> int:
    """Working digits that keep lengths near ``eps`` accurate."""
    return 40 + 12 * max(1, math.ceil(math.log10(1.0 / eps)))


def pinching_family(eps: float, slope=0, margin: float = PINCH_MARGIN,
                    gauge: str = "unit") -> Representation:
    """Representation in which the slope ``p/q`` curve has length exactly ``eps``.

    At slope 0 the curve is ``a``: tr A = 2 cosh(eps/2) and
    tr B = margin * 2x / sqrt(x^2 - 4), on the "-" branch.  Other slopes are
    reached by precomposing with the inverse of the slope automorphism.
    """
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    p, q = slope_pair(slope)
    dps = pinch_precision(eps)
    with mpmath.workdps(dps):
        h = mpmath.mpf(eps) / 2
        sh = mpmath.sinh(h)
        lam = mpmath.exp(h)
        x = 2 * mpmath.cosh(h)
        y = mpmath.mpf(margin) * x / sh
        # closed forms of the "-" branch: s = y/2 - sqrt(D)/(2 sqrt(x^2-4))
        root = mpmath.sqrt(mpmath.mpf(margin) ** 2 - 1)
        s = x * (mpmath.mpf(margin) - root) / (2 * sh)
        v = y - s
        if gauge == "unit":
            t, u = 1 / sh ** 2, mpmath.mpf(1)
        else:
            t = u = 1 / sh
        base = Representation(("a", "b"), (MoebiusMap(lam, mpmath.mpf(0), mpmath.mpf(0), 1 / lam),
                                           MoebiusMap(s, t, u, v)),
                              (COMMUTATOR,), 1, 1, dps=dps, label=f"pinch({eps:g})")
    if (p, q) == (0, 1):
        return base
    phi = slope_automorphism(p, q)
    out = base.precomposed(phi.inverse())
    return replace(out, label=f"pinch({eps:g},{p}/{q})")


def slope_word(slope) -> Word:
    """A word representing the simple closed curve of the given slope."""
    p, q = slope_pair(slope)
    return slope_automorphism(p, q)((1,))


@dataclass
class ValidationReport:
    determinant: dict[str, float]
    peripheral: dict[str, float]
    jorgensen: dict[str, float]
    relator: float | None
    flags: list[str]

    @property
    def ok(self) -> bool:
        return not self.flags

    def to_dict(self) -> dict:
        return {"ok": self.ok, "determinant": self.determinant, "peripheral": self.peripheral,
                "jorgensen": self.jorgensen, "relator": self.relator, "flags": self.flags}


def closed_relator(genus: int) -> Word:
    """[a1, b1] ... [ag, bg] with generators numbered a1=1, b1=2, a2=3, ..."""
    out: Word = ()
    for k in range(genus):
        a, b = 2 * k + 1, 2 * k + 2
        out = mul(out, (a, b, -a, -b))
    return out


def validate(rho: Representation) -> ValidationReport:
    """Heuristic sanity report; never raises on a bad representation.

    Jørgensen values below 1 are flagged: a discrete non-elementary group
    must satisfy |tr^2 A - 4| + |tr [A, B] - 2| >= 1.
    """
    flags = []
    det, peri, jorg = {}, {}, {}
    gens = rho.generators()
    with rho.context():
        for n, m in gens.items():
            r = float(abs(m.det - 1))
            det[n] = r
            if r > 1e-10:
                flags.append(f"determinant of {n} off by {r:.3g}")
        for w in rho.peripherals:
            r = float(abs(abs(evaluate(rho, w).trace) - 2))
            peri[format_word(w)] = r
            if r > PERIPHERAL_TOL:
                flags.append(f"peripheral {format_word(w)} not parabolic (|tr| - 2 = {r:.3g})")
        names = list(gens)
        for i, ni in enumerate(names):
            for j, nj in enumerate(names):
                if i == j:
                    continue
                A, B = gens[ni], gens[nj]
                comm = A @ B @ A.inverse() @ B.inverse()
                val = float(abs(A.trace ** 2 - 4) + abs(comm.trace - 2))
                jorg[ni + nj] = val
                if val < JORGENSEN_BOUND:
                    flags.append(f"Jorgensen value {val:.3g} < 1 for ({ni}, {nj})")
        relator = None
        if rho.genus >= 2 and rho.punctures == 0:
            m = evaluate(rho, closed_relator(rho.genus)).canonical()
            relator = float(max(abs(m.a - 1), abs(m.b), abs(m.c), abs(m.d - 1)))
            if relator > 1e-8:
                flags.append(f"surface relator residual {relator:.3g}")
    return ValidationReport(det, peri, jorg, relator, flags)
