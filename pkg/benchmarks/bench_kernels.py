"""Time the numba kernels against the pure-numpy fallback.

Each backend runs in its own interpreter because the backend is fixed at import
time by HOPSPARSE_DISABLE_NUMBA.

    python3 benchmarks/bench_kernels.py --n 2000 --density 0.005 --repeat 3
"""
import argparse
import json
import os
import subprocess
import sys

_WORKER = r"""
import json, sys, time
import numpy as np
from hopsparse import GeneratorSpec, generate_graph, kernels

n, density, hops, sources, repeat = json.loads(sys.argv[1])
g = generate_graph(GeneratorSpec("gnp", n, density, (1, 16), seed=0))
indptr, indices, w = g.csr
src = np.arange(sources, dtype=np.int64)

def best(fn):
    fn()                                        # warm-up (jit compile)
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)

out = {
    "backend": kernels.backend(),
    "hop_layered_sssp": best(lambda: [kernels.hop_layered_sssp(indptr, indices, w, s, hops) for s in src]),
    "dijkstra_many": best(lambda: kernels.dijkstra_many(indptr, indices, w, src)),
}
print(json.dumps(out))
"""


def run(disable: bool, params) -> dict:
    env = dict(os.environ)
    env.pop("HOPSPARSE_DISABLE_NUMBA", None)
    if disable:
        env["HOPSPARSE_DISABLE_NUMBA"] = "1"
    proc = subprocess.run([sys.executable, "-c", _WORKER, json.dumps(params)],
                          env=env, capture_output=True, text=True, check=True)
    return json.loads(proc.stdout.strip().splitlines()[-1])


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--n", type=int, default=2000)
    ap.add_argument("--density", type=float, default=0.005)
    ap.add_argument("--hops", type=int, default=32)
    ap.add_argument("--sources", type=int, default=64)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    params = [args.n, args.density, args.hops, args.sources, args.repeat]
    fast, slow = run(False, params), run(True, params)
    print(f"n={args.n} density={args.density} hops={args.hops} sources={args.sources}")
    print(f"{'kernel':<18}{fast['backend']:>12}{slow['backend']:>12}{'speedup':>10}")
    for k in ("hop_layered_sssp", "dijkstra_many"):
        print(f"{k:<18}{fast[k]:>11.4f}s{slow[k]:>11.4f}s{slow[k] / fast[k]:>9.1f}x")


if __name__ == "__main__":
    main()
