"""Compare the numba kernels with their numpy fallbacks.

Run with ``python benchmarks/bench_kernels.py``.  Each kernel is timed on
the same inputs under both backends (best of several repeats, after a
warm-up call so JIT compilation is excluded), and the outputs are compared.
An end-to-end Whittaker grid evaluation is timed by toggling
GL3ARCH_DISABLE_NUMBA.
"""

import argparse
import os
import time

import numpy as np

from gl3arch import _kernels as K
from gl3arch.mellin_barnes import ContourSpec, WhittakerSpec, clear_kernel_cache, whittaker_gl3_grid


def best_of(fn, repeats):
    fn()
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def kernel_cases(rng, n):
    z = rng.uniform(-20, 20, n) + 1j * rng.uniform(-80, 80, n)
    a = rng.normal(size=400) + 1j * rng.normal(size=400)
    b = rng.normal(size=400) + 1j * rng.normal(size=400)
    h = rng.normal(size=799) + 1j * rng.normal(size=799)
    v = rng.normal(size=(300, 250)) + 1j * rng.normal(size=(300, 250))
    w1, w2 = rng.normal(size=300) + 0j, rng.normal(size=250) + 0j
    return [
        ("loggamma", lambda: K._nb_loggamma(z), lambda: K.loggamma_numpy(z)),
        ("hankel_kernel", lambda: K._nb_hankel(a, h, b), lambda: K.hankel_kernel_numpy(a, h, b)),
        ("weighted_sum", lambda: K._nb_weighted_sum(v, w1, w2), lambda: K.weighted_sum_numpy(v, w1, w2)),
    ]


def end_to_end(repeats):
    spec = WhittakerSpec("GL3", ell=5, j=(3, 0, 2))
    u = np.linspace(-3, 2, 40)
    out = {}
    for name, flag in (("numba", "0"), ("numpy", "1")):
        os.environ["GL3ARCH_DISABLE_NUMBA"] = flag

        def run():
            clear_kernel_cache()
            return whittaker_gl3_grid(spec, u, u, ContourSpec()).values

        out[name] = (best_of(run, repeats), run())
    os.environ.pop("GL3ARCH_DISABLE_NUMBA", None)
    return out


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--n", type=int, default=200_000, help="loggamma batch size")
    p.add_argument("--repeats", type=int, default=5)
    args = p.parse_args()
    if not K._NUMBA_OK:
        raise SystemExit("numba is not importable; nothing to compare")
    rng = np.random.default_rng(0)
    print(f"{'kernel':<16}{'numba [ms]':>12}{'numpy [ms]':>12}{'speedup':>10}{'max rel diff':>15}")
    for name, nb, npf in kernel_cases(rng, args.n):
        t_nb, t_np = best_of(nb, args.repeats), best_of(npf, args.repeats)
        x, y = np.asarray(nb()), np.asarray(npf())
        diff = float(np.max(np.abs(x - y)) / max(np.max(np.abs(y)), 1e-300))
        print(f"{name:<16}{1e3 * t_nb:>12.2f}{1e3 * t_np:>12.2f}{t_np / t_nb:>10.1f}{diff:>15.2e}")
    res = end_to_end(max(1, args.repeats // 2))
    (t_nb, v_nb), (t_np, v_np) = res["numba"], res["numpy"]
    diff = float(np.max(np.abs(v_nb - v_np)) / np.max(np.abs(v_np)))
    print(f"{'W grid 40x40':<16}{1e3 * t_nb:>12.2f}{1e3 * t_np:>12.2f}{t_np / t_nb:>10.1f}{diff:>15.2e}")


if __name__ == "__main__":
    main()
