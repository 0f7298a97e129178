#!/usr/bin/env python3
"""Benchmark the inference hot path: numba kernel vs pure-numpy fallback.

Runs the same greedy inference twice in subprocesses (the kernel is chosen
at import time from POLICYDIFF_NUMBA), times both, and verifies the outputs
are bit-identical. Synthetic cascades stand in for the archival data so the
benchmark runs self-contained.

    python3 benchmarks/bench_kernels.py [--nodes 30] [--cascades 400] [--edges 80]
"""

import argparse
import json
import os
import subprocess
import sys
import tempfile
import time
from pathlib import Path

WORKER = """
import json, sys, time
from policydiff.synthetic import simulate_cascades, random_digraph
from policydiff import accel
import numpy as np

cfg = json.loads(sys.argv[1])
rng = np.random.default_rng(404)
nodes, edges = random_digraph(cfg["nodes"], cfg["edges"], rng)
cs = simulate_cascades(nodes, edges, cfg["cascades"], rate=1.0,
                       background_prob=0.1, seed=1234)

from policydiff.netinf import InferenceParams, infer_network
params = InferenceParams(max_edges=cfg["max_edges"])
infer_network(cs, params)  # warm-up (JIT compile, caches)

t0 = time.perf_counter()
net = infer_network(cs, params)
elapsed = time.perf_counter() - t0

json.dump({"impl": "numba" if accel.USE_NUMBA else "numpy",
           "elapsed": elapsed,
           "n_edges": len(net.edges),
           "network": net.to_json()},
          open(sys.argv[2], "w"))
"""


def run_variant(use_numba: bool, cfg: dict) -> dict:
    env = dict(os.environ, POLICYDIFF_NUMBA="1" if use_numba else "0")
    with tempfile.NamedTemporaryFile(suffix=".json", delete=False) as out:
        out_path = out.name
    subprocess.run([sys.executable, "-c", WORKER, json.dumps(cfg), out_path],
                   env=env, check=True)
    result = json.loads(Path(out_path).read_text())
    os.unlink(out_path)
    return result


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--nodes", type=int, default=30)
    ap.add_argument("--cascades", type=int, default=400)
    ap.add_argument("--edges", type=int, default=80)
    ap.add_argument("--max-edges", type=int, default=120)
    args = ap.parse_args()
    cfg = {"nodes": args.nodes, "cascades": args.cascades,
           "edges": args.edges, "max_edges": args.max_edges}

    print(f"graph: {cfg['nodes']} nodes, {cfg['edges']} true edges, "
          f"{cfg['cascades']} cascades, cap {cfg['max_edges']} inferred edges")
    numpy_res = run_variant(False, cfg)
    numba_res = run_variant(True, cfg)

    print(f"numpy fallback: {numpy_res['elapsed']:.3f}s  ({numpy_res['n_edges']} edges)")
    print(f"numba kernel:   {numba_res['elapsed']:.3f}s  ({numba_res['n_edges']} edges)")
    if numba_res["impl"] != "numba":
        print("note: numba unavailable, both runs used the fallback")
    else:
        print(f"speedup: {numpy_res['elapsed'] / numba_res['elapsed']:.2f}x")
    identical = numpy_res["network"] == numba_res["network"]
    print(f"outputs bit-identical: {identical}")
    return 0 if identical else 1


if __name__ == "__main__":
    sys.exit(main())
