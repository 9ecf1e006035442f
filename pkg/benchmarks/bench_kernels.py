"""Compare the compiled bitset kernels with the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--json out.json]
"""
import argparse
import json
import random
import timeit

from posetreal import _kernels_py as pure

try:
    from posetreal import _kernels as compiled
except ImportError:
    compiled = None


def random_rows(rng, n, width):
    return [rng.getrandbits(width) for _ in range(n)]


def random_dag(rng, n, p):
    succ = [0] * n
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                succ[i] |= 1 << j
    return succ


def cases(rng):
    for n, w in [(64, 64), (256, 256), (1000, 600)]:
        rows = random_rows(rng, n, w)
        yield f"gf2_rank {n}x{w}", "gf2_rank", (rows,)
    for n, p in [(64, 0.1), (400, 0.02), (1500, 0.005)]:
        succ = random_dag(rng, n, p)
        yield f"reach_closure n={n} p={p}", "reach_closure", (succ,)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--json", default=None)
    args = ap.parse_args(argv)

    rng = random.Random(args.seed)
    results = []
    for label, name, call_args in cases(rng):
        row = {"case": label}
        impls = [("python", pure)] + ([("cython", compiled)] if compiled else [])
        outputs = []
        for tag, mod in impls:
            fn = getattr(mod, name)
            outputs.append(fn(*call_args))
            row[tag] = min(timeit.repeat(lambda: fn(*call_args), number=1, repeat=args.repeat))
        if len(outputs) == 2 and outputs[0] != outputs[1]:
            raise SystemExit(f"backends disagree on {label}")
        results.append(row)

    print(f"{'case':32} {'python ms':>10} {'cython ms':>10} {'speedup':>8}")
    for r in results:
        py, cy = r["python"] * 1e3, r.get("cython")
        if cy is None:
            print(f"{r['case']:32} {py:10.2f} {'-':>10} {'-':>8}")
        else:
            print(f"{r['case']:32} {py:10.2f} {cy * 1e3:10.2f} {r['python'] / cy:7.1f}x")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(results, fh, indent=2)


if __name__ == "__main__":
    main()
