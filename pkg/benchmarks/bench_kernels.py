#!/usr/bin/env python3
"""Benchmark the gauge kernels: compiled extension vs pure-Python fallback.

Usage:
    python3 benchmarks/bench_kernels.py [--count 2000]

The workloads mirror the hot paths of the property checkers: hull gauges of
random, boundary, and grazing points for the disk+corner ball, the support
function, and the polyhedral facet gauge.
"""

import argparse
import math
import time

import numpy as np

from latticelab._kernels import cykernels, pykernels

R2 = 1.0 / math.sqrt(2.0)


def hull_prepared(mod):
    corners = [(a * R2, b * R2, c * R2)
               for a in (1, -1) for b in (1, -1) for c in (1, -1)]
    disks = np.array([[0, 1, 1, 1], [0, 2, 1, 1], [1, 2, 1, 1]], dtype=float)
    return mod.prepare_hull(disks, np.asarray(corners))


def workloads(count, rng):
    random_pts = rng.standard_normal((count, 3))
    boundary = random_pts / np.linalg.norm(random_pts, axis=1)[:, None]
    r = 0.7
    zp = 0.5 * np.array([r + R2, math.sqrt(1 - r * r) + R2, 0.0])
    zp /= np.linalg.norm(zp)
    grazing = zp[None, :] + rng.uniform(-0.05, 0.05, (count, 1)) * np.array([0, 0, 1.0])
    return {"random": random_pts, "l2-sphere": boundary, "grazing": grazing}


def bench(fn, reps=1):
    t0 = time.perf_counter()
    for _ in range(reps):
        out = fn()
    return (time.perf_counter() - t0) / reps, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--count", type=int, default=2000)
    args = ap.parse_args()
    rng = np.random.default_rng(0)
    loads = workloads(args.count, rng)
    pp = hull_prepared(pykernels)
    mods = [("py", pykernels, pp)]
    if cykernels is not None:
        mods.append(("cy", cykernels, hull_prepared(cykernels)))
    else:
        print("compiled kernels not available; benchmarking the fallback only")

    print(f"hull gauge, {args.count} points per workload")
    print(f"{'workload':<12} " + " ".join(f"{name:>14}" for name, *_ in mods)
          + ("  speedup" if len(mods) == 2 else ""))
    results = {}
    for wname, X in loads.items():
        times = []
        vals = []
        for name, mod, prep in mods:
            dt, out = bench(lambda mod=mod, prep=prep, X=X: mod.hull_gauge_batch(prep, X))
            times.append(dt)
            vals.append(out)
        row = f"{wname:<12} " + " ".join(f"{t / args.count * 1e6:>11.2f} us" for t in times)
        if len(mods) == 2:
            row += f"  {times[0] / times[1]:>6.1f}x"
            results[wname] = float(np.max(np.abs(vals[0] - vals[1]) / np.abs(vals[0])))
        print(row)
    if len(mods) == 2:
        print("max relative disagreement per workload:",
              {k: f"{v:.2e}" for k, v in results.items()})

    F = rng.standard_normal((16, 4))
    F = np.vstack([F, -F])
    X4 = rng.standard_normal((args.count, 4))
    print(f"\nfacet gauge, {args.count} points, 32 facets in R^4")
    for name, mod, _ in mods:
        dt, _ = bench(lambda mod=mod: mod.facet_gauge_batch(F, X4), reps=5)
        print(f"  {name}: {dt / args.count * 1e6:.3f} us/point")

    print(f"\nsupport function, {args.count} directions")
    for name, mod, prep in mods:
        dt, _ = bench(lambda mod=mod, prep=prep:
                      [mod.hull_support(prep, f) for f in loads["random"]])
        print(f"  {name}: {dt / args.count * 1e6:.2f} us/direction")


if __name__ == "__main__":
    main()
