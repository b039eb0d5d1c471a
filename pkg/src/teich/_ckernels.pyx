# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled word kernels; semantics match ``teich._purekernels``."""

from libc.stdlib cimport malloc, free, abs as cabs

cdef enum:
    A_GEN = 1
    STABLE = 2
    C_GEN = 3


cdef int _reduce_into(int *src, int n, int *dst):
    cdef int top = 0, i, x
    for i in range(n):
        x = src[i]
        if top > 0 and dst[top - 1] == -x:
            top -= 1
        else:
            dst[top] = x
            top += 1
    return top


cdef int *_to_c(seq, int *n_out) except NULL:
    cdef int n = len(seq), i
    cdef int *buf = <int *> malloc((n + 1) * sizeof(int))
    if buf == NULL:
        raise MemoryError()
    for i in range(n):
        buf[i] = seq[i]
    n_out[0] = n
    return buf


cdef tuple _to_py(int *buf, int start, int stop):
    return tuple([buf[i] for i in range(start, stop)])


def free_reduce(letters):
    cdef int n, m
    cdef int *src = _to_c(tuple(letters), &n)
    cdef int *dst = <int *> malloc((n + 1) * sizeof(int))
    try:
        m = _reduce_into(src, n, dst)
        return _to_py(dst, 0, m)
    finally:
        free(src)
        free(dst)


def cyclic_reduce(word):
    cdef int n
    cdef int *w = _to_c(tuple(word), &n)
    cdef int i = 0, j = n - 1
    try:
        while i < j and w[i] == -w[j]:
            i += 1
            j -= 1
        return _to_py(w, i, j + 1)
    finally:
        free(w)


cdef inline int _key(int x):
    return 2 * (cabs(x) - 1) + (1 if x < 0 else 0)


def canonical_cyclic(word):
    cdef int n, r, k, cand, best_cand = 0, best_r = 0, cmp
    cdef int *w = _to_c(tuple(word), &n)
    if n == 0:
        free(w)
        return ()
    cdef int *inv = <int *> malloc(n * sizeof(int))
    cdef int *src
    cdef int *bsrc
    try:
        for k in range(n):
            inv[k] = -w[n - 1 - k]
        bsrc = w
        for cand in range(2):
            src = w if cand == 0 else inv
            for r in range(n):
                cmp = 0
                for k in range(n):
                    cmp = _key(src[(r + k) % n]) - _key(bsrc[(best_r + k) % n])
                    if cmp != 0:
                        break
                if cmp < 0:
                    best_cand = cand
                    best_r = r
                    bsrc = src
        return tuple([bsrc[(best_r + k) % n] for k in range(n)])
    finally:
        free(w)
        free(inv)


def britton_count(word):
    cdef int n, m, i, j, k, p, t, start, nseg, seg_i, total
    cdef int *raw = _to_c(tuple(word), &n)
    cdef int *red = <int *> malloc((n + 1) * sizeof(int))
    cdef int lo, hi
    try:
        m = _reduce_into(raw, n, red)
        lo = 0
        hi = m - 1
        while lo < hi and red[lo] == -red[hi]:
            lo += 1
            hi -= 1
        m = hi - lo + 1 if m > 0 else 0
        start = -1
        for i in range(m):
            if cabs(red[lo + i]) == STABLE:
                start = i
                break
        if start < 0:
            return 0
        # syllable lists kept as python objects; the hot part is the scan
        stable = []
        segs = []
        for k in range(m):
            t = red[lo + (start + k) % m]
            if cabs(t) == STABLE:
                stable.append(1 if t > 0 else -1)
                segs.append([])
            else:
                segs[len(segs) - 1].append(t)
        return _britton_segments(stable, segs)
    finally:
        free(raw)
        free(red)


cdef bint _power_of(list h, int gen):
    cdef int x
    for x in h:
        if cabs(x) != gen:
            return False
    return True


cdef int _britton_segments(list stable, list segs):
    cdef int k, i, j, p, x
    cdef bint changed = True
    cdef list image
    while changed and len(segs) > 0:
        changed = False
        k = len(segs)
        for i in range(k):
            j = (i + 1) % k
            if stable[i] == 1 and stable[j] == -1 and _power_of(segs[i], A_GEN):
                image = [C_GEN if x > 0 else -C_GEN for x in segs[i]]
            elif stable[i] == -1 and stable[j] == 1 and _power_of(segs[i], C_GEN):
                image = [A_GEN if x > 0 else -A_GEN for x in segs[i]]
            else:
                continue
            if k == 2:
                return 0
            p = (i - 1 + k) % k
            segs[p] = list(free_reduce(segs[p] + image + segs[j]))
            if i > j:
                del segs[i]; del stable[i]
                del segs[j]; del stable[j]
            else:
                del segs[j]; del stable[j]
                del segs[i]; del stable[i]
            changed = True
            break
    return len(segs)


def word_product(word, gens):
    cdef double p0 = 1.0, p1 = 0.0, p2 = 0.0, p3 = 1.0
    cdef double a, b, c, d, q0, q1, q2, q3
    cdef int x, g, n = len(gens)
    cdef double *tab = <double *> malloc(4 * (n + 1) * sizeof(double))
    try:
        for g in range(n):
            tab[4 * g] = gens[g][0]
            tab[4 * g + 1] = gens[g][1]
            tab[4 * g + 2] = gens[g][2]
            tab[4 * g + 3] = gens[g][3]
        for x in word:
            if x > 0:
                g = 4 * (x - 1)
                a = tab[g]; b = tab[g + 1]; c = tab[g + 2]; d = tab[g + 3]
            else:
                g = 4 * (-x - 1)
                a = tab[g + 3]; b = -tab[g + 1]; c = -tab[g + 2]; d = tab[g]
            q0 = p0 * a + p1 * c
            q1 = p0 * b + p1 * d
            q2 = p2 * a + p3 * c
            q3 = p2 * b + p3 * d
            p0 = q0; p1 = q1; p2 = q2; p3 = q3
        return (p0, p1, p2, p3)
    finally:
        free(tab)
