"""Compare the compiled and the pure-Python rank kernels.

    python benchmarks/bench_kernels.py [--sizes 20 40 80] [--repeat 5]
"""
from __future__ import annotations

import argparse
import random
import timeit

from adelcoh.exactla import _kernels_py, kernels


def random_matrix(rng: random.Random, n: int, rank: int) -> list[list[int]]:
    # sparse +-1 entries like an adelic differential, with repeated rows
    base = [[rng.choice((-1, 1)) if rng.random() < 3 / n else 0 for _ in range(n)] for _ in range(rank)]
    return [list(base[rng.randrange(rank)]) if i >= rank else base[i] for i in range(n)]


def main(argv=None) -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", type=int, nargs="*", default=[20, 40, 80, 160])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    rng = random.Random(0)
    compiled = kernels._c
    print(f"backend: {kernels.BACKEND}")
    print(f"{'n':>5} {'python ms':>10} {'compiled ms':>12} {'speedup':>8}")
    for n in args.sizes:
        m = random_matrix(rng, n, max(1, n // 2))
        t_py = min(timeit.repeat(lambda: _kernels_py.bareiss_rank(m), number=1, repeat=args.repeat))
        if compiled is None:
            print(f"{n:>5} {t_py * 1e3:>10.2f} {'n/a':>12} {'':>8}")
            continue
        r = compiled.bareiss_rank(m)
        if r < 0:
            print(f"{n:>5} {t_py * 1e3:>10.2f} {'overflow':>12} {'':>8}")
            continue
        assert r == _kernels_py.bareiss_rank(m)
        t_c = min(timeit.repeat(lambda: compiled.bareiss_rank(m), number=1, repeat=args.repeat))
        print(f"{n:>5} {t_py * 1e3:>10.2f} {t_c * 1e3:>12.3f} {t_py / t_c:>8.1f}")


if __name__ == "__main__":
    main()
