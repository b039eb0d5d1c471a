"""Pure-Python reference versions of the word kernels.

Words are tuples of nonzero ints: generator ``k`` is ``k`` and its inverse
is ``-k`` (``a = 1``, ``b = 2``).  The compiled module ``_ckernels`` exposes
the same functions with the same semantics.
"""

from __future__ import annotations

# letter numbering used inside the HNN splitting of F(a, b) along <a>:
# the vertex group is free on a (1) and c = b a b^-1 (3); b (2) is stable
A_GEN = 1
STABLE = 2
C_GEN = 3


def free_reduce(letters):
    out = []
    for x in letters:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def cyclic_reduce(word):
    i, j = 0, len(word) - 1
    while i < j and word[i] == -word[j]:
        i += 1
        j -= 1
    return tuple(word[i:j + 1])


def letter_key(x):
    # order a < A < b < B < c < C ...
    return 2 * (abs(x) - 1) + (1 if x < 0 else 0)


def canonical_cyclic(word):
    """Least rotation of ``word`` or of its inverse (word must be cyclically reduced)."""
    n = len(word)
    if n == 0:
        return ()
    inv = tuple(-x for x in reversed(word))
    best_key = None
    best = None
    for cand in (tuple(word), inv):
        keys = [letter_key(x) for x in cand]
        for r in range(n):
            k = keys[r:] + keys[:r]
            if best_key is None or k < best_key:
                best_key = k
                best = cand[r:] + cand[:r]
    return best


def _is_power_of(h, gen):
    return all(abs(x) == gen for x in h)


def britton_count(word):
    """Number of stable letters left after cyclic Britton reduction.

    ``word`` is a freely reduced word over a, b.  The splitting is
    F(a, b) = <a, c | > *_{t a t^-1 = c} with t = b, so pinches are
    ``b a^k B -> c^k`` and ``B c^k b -> a^k``.
    """
    w = cyclic_reduce(free_reduce(word))
    if not any(abs(x) == STABLE for x in w):
        return 0
    # rotate to start at a stable letter
    start = next(i for i, x in enumerate(w) if abs(x) == STABLE)
    w = w[start:] + w[:start]
    # syllables: (sign of stable letter, vertex-group segment that follows)
    syl = []
    for x in w:
        if abs(x) == STABLE:
            syl.append([1 if x > 0 else -1, []])
        else:
            syl[-1][1].append(x)
    segs = [(t, tuple(h)) for t, h in syl]

    changed = True
    while changed and segs:
        changed = False
        k = len(segs)
        for i in range(k):
            j = (i + 1) % k
            t_i, h_i = segs[i]
            t_j, _ = segs[j]
            if t_i == 1 and t_j == -1 and _is_power_of(h_i, A_GEN):
                image = tuple(C_GEN if x > 0 else -C_GEN for x in h_i)
            elif t_i == -1 and t_j == 1 and _is_power_of(h_i, C_GEN):
                image = tuple(A_GEN if x > 0 else -A_GEN for x in h_i)
            else:
                continue
            if k == 2:
                return 0
            p = (i - 1) % k
            merged = free_reduce(segs[p][1] + image + segs[j][1])
            segs[p] = (segs[p][0], merged)
            for idx in sorted((i, j), reverse=True):
                del segs[idx]
            changed = True
            break
    return len(segs)


def word_product(word, gens):
    """Product of SL2 lifts along ``word``; ``gens[k-1]`` is (a, b, c, d) for generator k."""
    p0, p1, p2, p3 = 1.0, 0.0, 0.0, 1.0
    for x in word:
        if x > 0:
            a, b, c, d = gens[x - 1]
        else:
            d, mb, mc, a = gens[-x - 1]
            b, c = -mb, -mc
        p0, p1, p2, p3 = (p0 * a + p1 * c, p0 * b + p1 * d,
                          p2 * a + p3 * c, p2 * b + p3 * d)
    return (p0, p1, p2, p3)
