"""Free-group words, unoriented conjugacy classes and automorphisms.

A word is a tuple of nonzero ints (``a = 1``, ``b = 2``, ...; negative for
inverses).  On the wire words are strings over ``aAbB...`` with uppercase
meaning inverse.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from teich import _kernels

Word = tuple[int, ...]

A: Word = (1,)
B: Word = (2,)
COMMUTATOR: Word = (1, 2, -1, -2)


def parse(s: str) -> Word:
    out = []
    for ch in s.strip():
        if ch in "1e":  # empty-word spellings
            continue
        if not ch.isalpha():
            raise ValueError(f"bad letter {ch!r} in word {s!r}")
        k = ord(ch.lower()) - ord("a") + 1
        out.append(k if ch.islower() else -k)
    return reduce(out)


def format_word(w: Word) -> str:
    if not w:
        return "1"
    return "".join(chr(ord("a") + abs(x) - 1) if x > 0 else chr(ord("A") + abs(x) - 1) for x in w)


def reduce(letters) -> Word:
    return _kernels.free_reduce(tuple(letters))


def inverse(w: Word) -> Word:
    return tuple(-x for x in reversed(w))


def mul(*words: Word) -> Word:
    return reduce(itertools.chain.from_iterable(words))


def power(w: Word, k: int) -> Word:
    if k < 0:
        return power(inverse(w), -k)
    return reduce(w * k)


def commutator(u: Word, v: Word) -> Word:
    return mul(u, v, inverse(u), inverse(v))


def cyclic_reduce(w: Word) -> Word:
    return _kernels.cyclic_reduce(reduce(w))


@dataclass(frozen=True, order=True)
class ConjClass:
    """Unoriented conjugacy class, stored as its canonical cyclic word.

    Ordering is (length, letter order a < A < b < B < ...).
    """

    sort_key: tuple = field(repr=False, compare=True)
    word: Word = field(compare=False)

    def __str__(self) -> str:
        return format_word(self.word)

    def __len__(self) -> int:
        return len(self.word)


def _make_class(canon: Word) -> ConjClass:
    return ConjClass((len(canon), tuple(_kernels_key(x) for x in canon)), canon)


def _kernels_key(x: int) -> int:
    return 2 * (abs(x) - 1) + (1 if x < 0 else 0)


def conj_class(w) -> ConjClass:
    if isinstance(w, str):
        w = parse(w)
    c = cyclic_reduce(w)
    if not c:
        raise ValueError("the trivial word has no conjugacy class in C")
    return _make_class(_kernels.canonical_cyclic(c))


def is_peripheral(w, peripherals=(COMMUTATOR,)) -> bool:
    """Whether ``w`` is conjugate to a nonzero power of a peripheral word (or its inverse)."""
    if isinstance(w, str):
        w = parse(w)
    c = cyclic_reduce(w)
    if not c:
        return False
    target = conj_class(c)
    for p in peripherals:
        pc = cyclic_reduce(p)
        if not pc:
            continue
        # [p^k] has cyclic length k|p| when p is cyclically reduced
        if len(c) % len(pc):
            continue
        if conj_class(power(pc, len(c) // len(pc))) == target:
            return True
    return False


def cyclic_words(n: int, rank: int = 2):
    """Cyclically reduced words of length exactly n."""
    letters = [x for g in range(1, rank + 1) for x in (g, -g)]
    for first in letters:
        stack = [(first,)]
        while stack:
            w = stack.pop()
            if len(w) == n:
                if n == 1 or w[0] != -w[-1]:
                    yield w
                continue
            for x in letters:
                if x != -w[-1]:
                    stack.append(w + (x,))


def enumerate_classes(max_len: int, exclude_peripheral: bool = True, rank: int = 2,
                      peripherals=(COMMUTATOR,)) -> list[ConjClass]:
    """All classes with canonical length <= ``max_len`` in (length, lex) order."""
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    found = set()
    for n in range(1, max_len + 1):
        for w in cyclic_words(n, rank):
            if _kernels.canonical_cyclic(w) == w:
                found.add(w)
    classes = sorted(_make_class(w) for w in found)
    if exclude_peripheral:
        classes = [c for c in classes if not is_peripheral(c.word, peripherals)]
    return classes


@dataclass(frozen=True)
class FreeAutomorphism:
    """Automorphism of a free group given by generator images.

    ``inverse_images`` holds the images of the inverse automorphism, so
    invertibility can be checked by composition.
    """

    images: tuple[Word, ...]
    inverse_images: tuple[Word, ...] | None = None
    name: str = ""

    @classmethod
    def from_strings(cls, images, inverse_images=None, name="") -> "FreeAutomorphism":
        inv = tuple(parse(s) for s in inverse_images) if inverse_images is not None else None
        return cls(tuple(parse(s) for s in images), inv, name)

    @classmethod
    def identity(cls, rank: int = 2) -> "FreeAutomorphism":
        ims = tuple((g,) for g in range(1, rank + 1))
        return cls(ims, ims, "id")

    @property
    def rank(self) -> int:
        return len(self.images)

    def __call__(self, w: Word) -> Word:
        return apply_automorphism(self, w)

    def inverse(self) -> "FreeAutomorphism":
        if self.inverse_images is None:
            raise ValueError(f"automorphism {self.name or self.images} has no stored inverse")
        return FreeAutomorphism(self.inverse_images, self.images, f"({self.name})^-1")

    def compose(self, other: "FreeAutomorphism") -> "FreeAutomorphism":
        """``self o other`` (apply ``other`` first)."""
        ims = tuple(self(w) for w in other.images)
        inv = None
        if self.inverse_images is not None and other.inverse_images is not None:
            inv = tuple(other.inverse()(w) for w in self.inverse_images)
        return FreeAutomorphism(ims, inv, f"{self.name}*{other.name}")

    def check_inverse(self, max_len: int = 3) -> bool:
        """Composition with the stored inverse fixes every word up to ``max_len``."""
        inv = self.inverse()
        letters = [x for g in range(1, self.rank + 1) for x in (g, -g)]
        for n in range(1, max_len + 1):
            for w in itertools.product(letters, repeat=n):
                w = reduce(w)
                if inv(self(w)) != w or self(inv(w)) != w:
                    return False
        return True

    def abelianization(self) -> tuple[tuple[int, ...], ...]:
        """Integer matrix (rows = generators) whose columns are images in homology."""
        cols = []
        for w in self.images:
            col = [0] * self.rank
            for x in w:
                col[abs(x) - 1] += 1 if x > 0 else -1
            cols.append(col)
        return tuple(tuple(cols[j][i] for j in range(self.rank)) for i in range(self.rank))

    def to_strings(self) -> list[str]:
        return [format_word(w) for w in self.images]


def apply_automorphism(phi: FreeAutomorphism, w: Word) -> Word:
    out = []
    for x in w:
        im = phi.images[abs(x) - 1]
        out.extend(im if x > 0 else inverse(im))
    return reduce(out)


# Nielsen generators of Aut(F(a, b))
NIELSEN = {
    "swap": FreeAutomorphism(((2,), (1,)), ((2,), (1,)), "swap"),
    "inv_a": FreeAutomorphism(((-1,), (2,)), ((-1,), (2,)), "inv_a"),
    "inv_b": FreeAutomorphism(((1,), (-2,)), ((1,), (-2,)), "inv_b"),
    "a->ab": FreeAutomorphism(((1, 2), (2,)), ((1, -2), (2,)), "a->ab"),
    "a->ba": FreeAutomorphism(((2, 1), (2,)), ((-2, 1), (2,)), "a->ba"),
    "b->ba": FreeAutomorphism(((1,), (2, 1)), ((1,), (2, -1)), "b->ba"),
    "b->ab": FreeAutomorphism(((1,), (1, 2)), ((1,), (-1, 2)), "b->ab"),
}


def slope_pair(slope) -> tuple[int, int]:
    """(p, q) with q >= 0 and gcd 1; slope ``p/q`` has homology class q[a] + p[b]."""
    if isinstance(slope, tuple):
        p, q = slope
    elif isinstance(slope, Fraction):
        p, q = slope.numerator, slope.denominator
    elif isinstance(slope, int):
        p, q = slope, 1
    else:
        text = str(slope).strip()
        if "/" in text:
            num, den = text.split("/")
            p, q = int(num), int(den)
        else:
            f = Fraction(text)
            p, q = f.numerator, f.denominator
    if q < 0 or (q == 0 and p < 0):
        p, q = -p, -q
    if gcd(p, q) != 1:
        raise ValueError(f"slope {p}/{q} is not in lowest terms")
    return p, q


def format_slope(p: int, q: int) -> str:
    return f"{p}/{q}"


def slope_automorphism(p: int, q: int) -> FreeAutomorphism:
    """Automorphism carrying the curve ``a`` (slope 0) to the slope ``p/q`` curve.

    Built from Nielsen moves by a Euclidean reduction of (q, p) to (1, 0);
    its abelianization has first column (q, p).
    """
    p, q = slope_pair((p, q))
    right = NIELSEN["b->ab"]  # abelianization [[1, 1], [0, 1]]
    left = NIELSEN["a->ab"]  # abelianization [[1, 0], [1, 1]]
    # each step applies E^-1 to (x, y) and records the automorphism of E
    steps = []
    x, y = q, abs(p)
    while (x, y) != (1, 0):
        if x == 0:
            steps.append(right.inverse())
            x = x + y
        elif x > y:
            steps.append(right)
            x = x - y
        else:
            steps.append(left)
            y = y - x
    phi = FreeAutomorphism.identity()
    for move in steps:
        phi = phi.compose(move)
    if p < 0:
        phi = NIELSEN["inv_b"].compose(phi)
    return FreeAutomorphism(phi.images, phi.inverse_images, f"slope {p}/{q}")
