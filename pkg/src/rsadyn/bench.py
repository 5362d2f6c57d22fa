"""Benchmark the raster kernels: numba backend vs pure-numpy fallback.

Run as `rsadyn bench` or `python -m rsadyn.bench`. Builds the default
(4, 1, 1) family member, classifies the same grid with both backends, and
reports wall times plus the class agreement between them (the determinism
contract is per backend; agreement is informational).
"""

import json
import sys
import time

import numpy as np

from . import _kernels, family, probes
from .numeric import as_complex


def run(resolution=(160, 160), budget=512, eps=1e-3, repeats=2):
    params = family.build_params(4, 1, 1)
    cands = np.array(probes.candidate_times(params.lam, budget,
                                            params.precision_bits),
                     dtype=np.int64)
    T, X, Y = probes._chart_states("line", (0.2, 1.3, 0.0, 0.05), resolution)
    flat = (T.ravel(), X.ravel(), Y.ravel())
    delta = as_complex(params.delta)
    c = as_complex(params.c)

    report = {
        "resolution": list(resolution),
        "budget": int(budget),
        "eps": float(eps),
        "cells": int(T.size),
        "have_numba": _kernels.HAVE_NUMBA,
        "active_backend": _kernels.BACKEND,
    }

    def time_backend(fn):
        fn(*flat, delta, c, params.n, cands, eps)     # warm-up / JIT compile
        best = None
        out = None
        for _ in range(repeats):
            t0 = time.perf_counter()
            out = fn(*flat, delta, c, params.n, cands, eps)
            dt = time.perf_counter() - t0
            best = dt if best is None else min(best, dt)
        return best, out

    t_np, (cls_np, _) = time_backend(_kernels.classify_block_numpy)
    report["numpy_seconds"] = t_np

    if _kernels.HAVE_NUMBA:
        t_nb, (cls_nb, _) = time_backend(_kernels.classify_block_numba)
        report["numba_seconds"] = t_nb
        report["speedup"] = t_np / t_nb if t_nb > 0 else None
        report["class_agreement"] = float(np.mean(cls_nb == cls_np))
    else:
        report["numba_seconds"] = None
        report["speedup"] = None
        report["class_agreement"] = None
    return report


def main(argv=None):
    report = run()
    json.dump(report, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
