"""Compare the compiled word kernels with the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--maxlen 8] [--repeat 5]
"""

import argparse
import timeit

from teich import _purekernels
from teich.group import cyclic_words

try:
    from teich import _ckernels
except ImportError:
    _ckernels = None

GENS = [(2.0, 1.0, 1.0, 1.0), (1.5, -0.5, 0.5, 0.5)]


def workloads(words):
    raw = [w + tuple(-x for x in reversed(w[:2])) for w in words]
    return {
        "free_reduce": lambda k: [k.free_reduce(w) for w in raw],
        "cyclic_reduce": lambda k: [k.cyclic_reduce(w) for w in words],
        "canonical_cyclic": lambda k: [k.canonical_cyclic(w) for w in words],
        "britton_count": lambda k: [k.britton_count(w) for w in words],
        "word_product": lambda k: [k.word_product(w, GENS) for w in words],
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--maxlen", type=int, default=8)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    words = [w for n in range(1, args.maxlen + 1) for w in cyclic_words(n)]
    print(f"{len(words)} cyclically reduced words up to length {args.maxlen}")
    if _ckernels is None:
        print("compiled kernels not built; nothing to compare")
        return
    print(f"{'kernel':18s} {'python ms':>10s} {'cython ms':>10s} {'speedup':>8s}")
    for name, fn in workloads(words).items():
        assert fn(_purekernels) == fn(_ckernels), name
        tp = min(timeit.repeat(lambda: fn(_purekernels), number=1, repeat=args.repeat))
        tc = min(timeit.repeat(lambda: fn(_ckernels), number=1, repeat=args.repeat))
        print(f"{name:18s} {1e3 * tp:10.2f} {1e3 * tc:10.2f} {tp / tc:7.1f}x")


if __name__ == "__main__":
    main()
