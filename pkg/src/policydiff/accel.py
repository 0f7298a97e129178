"""Hot numeric kernels for the greedy network-inference scan.

Two interchangeable implementations of the per-iteration candidate sweep:
a numba @njit loop and a pure-numpy fallback. The numpy path accumulates
per-pair deltas in the same element order as the compiled loop, so the two
produce bit-identical gains. Selection:

  POLICYDIFF_NUMBA=0   force the numpy path
  (default)            numba when importable, numpy otherwise

benchmarks/bench_kernels.py compares the two paths on synthetic cascades.
"""

from __future__ import annotations

import os

import numpy as np


def _flag_enabled() -> bool:
    return os.environ.get("POLICYDIFF_NUMBA", "1").strip().lower() not in ("0", "false", "no", "off")


NUMBA_AVAILABLE = False
if _flag_enabled():
    try:
        from numba import njit
        NUMBA_AVAILABLE = True
    except ImportError:
        NUMBA_AVAILABLE = False

USE_NUMBA = NUMBA_AVAILABLE


def scan_gains_numpy(offsets, elem_cascade, elem_target, elem_logw, elem_pair, cur_logw, is_edge):
    """Total clamped improvement per candidate pair; existing edges get -1.

    elem_* arrays are one entry per (pair, applicable cascade), grouped by
    pair in lexicographic pair order. bincount adds in element order, which
    matches the compiled loop's accumulation order exactly.
    """
    n_pairs = offsets.shape[0] - 1
    delta = elem_logw - cur_logw[elem_cascade, elem_target]
    np.maximum(delta, 0.0, out=delta)
    gains = np.bincount(elem_pair, weights=delta, minlength=n_pairs)
    gains[is_edge] = -1.0
    return gains


def _scan_gains_loop(offsets, elem_cascade, elem_target, elem_logw, elem_pair, cur_logw, is_edge):
    n_pairs = offsets.shape[0] - 1
    gains = np.empty(n_pairs)
    for p in range(n_pairs):
        if is_edge[p]:
            gains[p] = -1.0
            continue
        total = 0.0
        for k in range(offsets[p], offsets[p + 1]):
            d = elem_logw[k] - cur_logw[elem_cascade[k], elem_target[k]]
            if d > 0.0:
                total += d
        gains[p] = total
    return gains


if USE_NUMBA:
    scan_gains = njit(cache=True)(_scan_gains_loop)
else:
    scan_gains = scan_gains_numpy
