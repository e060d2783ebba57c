"""Times the numba and numpy variants of each hot kernel on the same inputs.

    python3 benchmarks/bench_kernels.py [--repeat 20]

Both variants are importable whatever XQAOA_NO_NUMBA says; the flag only
changes which one the public functions dispatch to.
"""
import argparse
import time

import numpy as np

from xqaoa import analytic, graphs, simulator
from xqaoa._accel import HAVE_NUMBA


def best_of(fn, repeat):
    fn()  # compile / warm caches
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def cases():
    g = graphs.generate_regular(256, 10, 0)
    t = g.topology
    rng = np.random.default_rng(0)
    gp = rng.uniform(0, 2 * np.pi, g.m)
    prod_args = (gp, t.e_ptr, t.e_edges, t.d_ptr, t.d_edges, t.f_ptr, t.f_uedges, t.f_vedges)
    yield ("edge_products n=256 D=10",
           lambda: analytic._edge_products_jit(*prod_args),
           lambda: analytic._edge_products_numpy(*prod_args))

    h = graphs.generate_regular(16, 3, 0)
    psi = np.full(1 << 16, 2.0 ** -8, dtype=np.complex128)
    c, s = complex(np.cos(0.3)), complex(-1j * np.sin(0.3))
    gw = rng.uniform(0, np.pi, h.m)
    yield ("apply_phase n=16",
           lambda: simulator._apply_phase_jit(psi, h.eu, h.ev, gw),
           lambda: simulator._apply_phase_numpy(psi, h.eu, h.ev, gw))
    yield ("apply_1q n=16 q=5",
           lambda: simulator._apply_1q_jit(psi, 5, c, s, s, c),
           lambda: simulator._apply_1q_numpy(psi, 5, c, s, s, c))
    lam = psi.copy()
    yield ("edge_overlaps n=16",
           lambda: simulator._edge_overlaps_jit(lam, psi, h.eu, h.ev),
           lambda: simulator._edge_overlaps_numpy(lam, psi, h.eu, h.ev))

    b = graphs.generate_regular(22, 3, 1)
    yield ("brute force n=22",
           lambda: graphs._gray_search(b, b.n - 1),
           lambda: graphs._block_maxcut_numpy(b.n - 1, b))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=10)
    args = ap.parse_args(argv)
    if not HAVE_NUMBA:
        raise SystemExit("numba is not importable; nothing to compare")
    print(f"{'kernel':28s} {'numba ms':>10s} {'numpy ms':>10s} {'speedup':>8s}")
    for name, jit_fn, np_fn in cases():
        tj = best_of(jit_fn, args.repeat)
        tn = best_of(np_fn, max(1, args.repeat // 4))
        print(f"{name:28s} {tj * 1e3:10.3f} {tn * 1e3:10.3f} {tn / tj:8.1f}")


if __name__ == "__main__":
    main()
