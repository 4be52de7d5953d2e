"""Times the hot kernels on the numba path against the numpy fallback.

Run as: python3 benchmarks/bench_accel.py
The numba variants are compiled on first call; a warmup call is timed
separately so the table shows steady-state numbers.
"""

import time

import numpy as np

from ingleton import _accel
from ingleton.graphs import build_polynomial_graph, build_projective_plane


def best_of(fn, args, repeats=5):
    fn(*args)
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - t0)
    return min(times)


def workloads():
    rng = np.random.default_rng(0)

    n = 1_000_000
    keys = rng.integers(0, 50_000, n).astype(np.int64)
    masses = rng.integers(1, 1000, n).astype(np.int64)

    graph = build_projective_plane(7)
    ex, ey = graph.edge_arrays()
    x_mask = np.zeros(graph.x_size, np.bool_)
    x_mask[rng.choice(graph.x_size, graph.x_size // 2, replace=False)] = True
    y_mask = np.zeros(graph.y_size, np.bool_)
    y_mask[rng.choice(graph.y_size, graph.y_size // 2, replace=False)] = True

    cyc = build_polynomial_graph(2, 1)
    cx, cy = cyc.edge_arrays()
    e = len(cyc.edges)
    count = 2**e

    def digits(base):
        out = np.zeros((count, e), np.int64)
        idx = np.arange(count, dtype=np.int64)
        for t in range(e):
            out[:, t] = idx % base
            idx //= base
        return out

    da = digits(2)
    db = digits(2)

    t_grid = 2**16
    wa = rng.multinomial(t_grid, [0.5, 0.5], size=e).astype(np.int64)
    wb = rng.multinomial(t_grid, [0.5, 0.5], size=e).astype(np.int64)
    i_xy = 1.0

    return [
        ("group_reduce (1e6 rows)", _accel._group_reduce_loop,
         _accel._group_reduce_np, (keys, masses)),
        ("count_edges (pp q=7)", _accel._count_edges_loop,
         _accel._count_edges_np, (ex, ey, x_mask, y_mask)),
        ("exhaustive_scan (8-cycle, 2^16 pairs)", _accel._exhaustive_scan_loop,
         _accel._exhaustive_scan_np, (da, db, cx, cy, cyc.x_size, cyc.y_size, 1.0)),
        ("kernel_pair_ing (8-cycle rows)", _accel._kernel_pair_ing_loop,
         _accel._kernel_pair_ing_np, (cx, cy, wa, wb, cyc.x_size, cyc.y_size, t_grid, i_xy)),
    ]


def main():
    print(f"active backend: {_accel.backend_name()}")
    rows = []
    for name, loop_fn, np_fn, args in workloads():
        np_time = best_of(np_fn, args)
        if _accel.HAVE_NUMBA:
            from numba import njit

            jit_fn = njit(cache=True)(loop_fn)
            t0 = time.perf_counter()
            jit_fn(*args)
            compile_time = time.perf_counter() - t0
            jit_time = best_of(jit_fn, args)
            rows.append((name, np_time, jit_time, compile_time))
        else:
            rows.append((name, np_time, None, None))

    header = f"{'kernel':42} {'numpy':>12} {'numba':>12} {'speedup':>9} {'compile':>9}"
    print(header)
    print("-" * len(header))
    for name, np_t, jit_t, comp in rows:
        if jit_t is None:
            print(f"{name:42} {np_t*1e3:10.3f}ms {'n/a':>12} {'n/a':>9} {'n/a':>9}")
        else:
            print(
                f"{name:42} {np_t*1e3:10.3f}ms {jit_t*1e3:10.3f}ms "
                f"{np_t/jit_t:8.2f}x {comp:8.2f}s"
            )
    if not _accel.HAVE_NUMBA:
        print("numba unavailable or disabled; set INGLETON_NO_NUMBA=0 to compare")


if __name__ == "__main__":
    main()
