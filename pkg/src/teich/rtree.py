"""Translation-length functions of the dual tree of a pinched curve.

Cutting the once-punctured torus along the curve ``a`` gives the HNN
splitting of F(a, b) with vertex group <a, bab^-1>, edge group <a> and
stable letter ``b``.  Its Bass-Serre tree T has translation length
``weight * (stable letters left after cyclic Britton reduction)``.
Other slopes are transported to slope 0 by an automorphism.

:func:`tree_ball_oracle` rebuilds the same tree independently: the
Cayley tree of F(a, b) is cut by the lifts of the curve (every ``b``-edge
crosses exactly one lift), the complementary regions are the vertices of
T, and a region is named by the reduced sequence of lifts crossed to reach
it from the base region.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from teich import _kernels
from teich.group import (ConjClass, FreeAutomorphism, Word, conj_class, format_word, inverse,
                         mul, parse, power, slope_automorphism, slope_pair)
from teich.spectrum import LengthSpectrum

_STABLE = 2


@dataclass(frozen=True)
class DualTreeModel:
    """Dual tree of the slope ``p/q`` curve with all edges of length ``weight``.

    ``basis_change`` carries the slope curve to ``a``.
    """

    slope: tuple[int, int] = (0, 1)
    weight: float = 1.0
    basis_change: FreeAutomorphism = field(default=None, repr=False)  # type: ignore[assignment]

    def __post_init__(self):
        if not self.weight > 0:
            raise ValueError("edge weight must be positive")
        p, q = slope_pair(self.slope)
        object.__setattr__(self, "slope", (p, q))
        if self.basis_change is None:
            object.__setattr__(self, "basis_change", slope_automorphism(p, q).inverse())

    @classmethod
    def from_slope(cls, slope=0, weight: float = 1.0) -> "DualTreeModel":
        return cls(slope_pair(slope), float(weight))

    def to_slope_zero(self, w) -> Word:
        w = parse(w) if isinstance(w, str) else tuple(w)
        return self.basis_change(w)


def _word(w) -> Word:
    if isinstance(w, ConjClass):
        return w.word
    return parse(w) if isinstance(w, str) else _kernels.free_reduce(tuple(w))


def britton_length(m: DualTreeModel, w) -> float:
    """Translation length of ``w`` on the dual tree (0 iff ``w`` is elliptic)."""
    return m.weight * _kernels.britton_count(m.to_slope_zero(_word(w)))


# -- independent tree construction ----------------------------------------

def _coset(z: Word) -> Word:
    """Canonical representative of z<a>: drop trailing powers of a."""
    k = len(z)
    while k and abs(z[k - 1]) == 1:
        k -= 1
    return z[:k]


def region(g: Word) -> tuple[Word, ...]:
    """Tree vertex containing the Cayley vertex ``g`` (reduced word).

    The ``b``-edge from z to zb crosses the lift named by the coset zb<a>;
    walking from 1 to g and cancelling immediate re-crossings leaves the
    geodesic edge path from the base vertex in T.
    """
    stack: list[Word] = []
    z: Word = ()
    for x in g:
        if abs(x) == _STABLE:
            label = _coset(z + (x,)) if x > 0 else _coset(z)
            if stack and stack[-1] == label:
                stack.pop()
            else:
                stack.append(label)
        z = z + (x,)
    return tuple(stack)


def vertex_distance(r1: tuple, r2: tuple) -> int:
    """Edge count between two tree vertices named by :func:`region`."""
    k = 0
    for x, y in zip(r1, r2):
        if x != y:
            break
        k += 1
    return len(r1) + len(r2) - 2 * k


def ball(radius: int, rank: int = 2):
    """Reduced words of length <= radius (the Cayley ball)."""
    letters = [x for g in range(1, rank + 1) for x in (g, -g)]
    out: list[Word] = [()]
    frontier: list[Word] = [()]
    for _ in range(radius):
        nxt = []
        for w in frontier:
            for x in letters:
                if not w or w[-1] != -x:
                    nxt.append(w + (x,))
        out.extend(nxt)
        frontier = nxt
    return out


class Inconclusive(RuntimeError):
    """The ball was too small to certify a minimum."""


def displacement(w: Word, g: Word) -> int:
    """d(v, w v) for the vertex v containing g, via g^-1 w g and equivariance."""
    return len(region(mul(inverse(g), w, g)))


def _displacements(w: Word, radius: int):
    for g in ball(radius):
        yield len(g), displacement(w, g)


def tree_ball_oracle(m: DualTreeModel, w, radius: int = 4) -> float:
    """min over tree vertices met by the Cayley ball of d(v, w v), times the weight.

    Raises :class:`Inconclusive` when the minimum is attained only by
    vertices reached at the boundary of the ball.
    """
    w0 = m.to_slope_zero(_word(w))
    best_inside, best_edge = None, None
    for r, d in _displacements(w0, radius):
        if r < radius:
            best_inside = d if best_inside is None else min(best_inside, d)
        else:
            best_edge = d if best_edge is None else min(best_edge, d)
    if best_inside is None or (best_edge is not None and best_edge < best_inside):
        raise Inconclusive(f"minimum for {format_word(w0)} lies on the radius-{radius} boundary")
    return m.weight * best_inside


def tree_axis_distance(m: DualTreeModel, g, h, radius: int = 5) -> float:
    """Distance between the characteristic sets of g and h, from the ball.

    Minimum displacement sets are collected as tree vertices; the result is
    the least vertex distance between the two sets, times the weight.
    """
    g0, h0 = m.to_slope_zero(_word(g)), m.to_slope_zero(_word(h))
    sets = []
    for w in (g0, h0):
        rows = [(displacement(w, x), region(x)) for x in ball(radius)]
        low = min(d for d, _ in rows)
        sets.append({v for d, v in rows if d == low})
    return m.weight * min(vertex_distance(u, v) for u in sets[0] for v in sets[1])


def culler_morgan_gap(m: DualTreeModel, g, h, n: int, k: int) -> float:
    """l(g^n h^k) - l(g^n) - l(h^k) on the tree."""
    if n == 0 or k == 0:
        raise ValueError("exponents must be nonzero")
    g, h = _word(g), _word(h)
    if britton_length(m, g) <= 0 or britton_length(m, h) <= 0:
        raise ValueError("both elements must act hyperbolically on the tree")
    gn, hk = power(g, n), power(h, k)
    return britton_length(m, mul(gn, hk)) - britton_length(m, gn) - britton_length(m, hk)


def length_function(m: DualTreeModel, classes) -> LengthSpectrum:
    classes = tuple(c if isinstance(c, ConjClass) else conj_class(_word(c)) for c in classes)
    return LengthSpectrum(classes, tuple(britton_length(m, c.word) for c in classes))


def shares_axis(g, h) -> bool:
    """Whether g and h commute, i.e. are powers of a common element in the free group."""
    g, h = _word(g), _word(h)
    return mul(g, h) == mul(h, g)
