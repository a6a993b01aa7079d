"""Compare the compiled and pure-Python isometry search kernels.

Usage: python3 benchmarks/bench_isometry.py [--repeat N]

For each root lattice it times two workloads on every available backend:
counting all isometries by exhaustive backtracking, and building the
stabilizer chain of the full isometry group.
"""
import argparse
import statistics
import time

from mcg4._kernels import available_backends
from mcg4.automorphisms import isometry_group, search_problem
from mcg4.forms import e8, make_form


def cartan(edges, n):
    m = [[2 * int(i == j) for j in range(n)] for i in range(n)]
    for i, j in edges:
        m[i][j] = m[j][i] = -1
    return make_form(m)


LATTICES = {
    "A4": cartan([(0, 1), (1, 2), (2, 3)], 4),
    "D4": cartan([(0, 1), (1, 2), (1, 3)], 4),
    "D5": cartan([(0, 1), (1, 2), (2, 3), (2, 4)], 5),
    "E6": cartan([(0, 1), (1, 2), (2, 3), (3, 4), (2, 5)], 6),
    "E8": e8(),
}
# counting every isometry one leaf at a time is only sensible for small groups
COUNT_LIMIT = 200_000


def best_of(fn, repeat):
    times = []
    result = None
    for _ in range(repeat):
        start = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - start)
    return min(times), statistics.median(times), result


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    backends = available_backends()
    print(f"backends: {', '.join(backends)}")
    print(f"{'lattice':8} {'workload':8} {'backend':8} {'result':>12} {'best s':>9} {'median s':>9}")
    for name, form in LATTICES.items():
        order = isometry_group(form).order
        workloads = [("group", lambda b: isometry_group(form, backend=b).order)]
        if order <= COUNT_LIMIT:
            workloads.insert(0, ("count", lambda b: search_problem(form, b).table.count_completions([])))
        for label, work in workloads:
            results = set()
            for backend in backends:
                best, median, result = best_of(lambda: work(backend), args.repeat)
                results.add(result)
                print(f"{name:8} {label:8} {backend:8} {result:>12} {best:9.4f} {median:9.4f}")
            if len(results) != 1:
                raise SystemExit(f"backends disagree on {name} {label}: {sorted(results)}")


if __name__ == "__main__":
    main()
