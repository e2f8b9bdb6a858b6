"""Compare the compiled and numpy kernel backends.

Micro-benchmarks time the individual kernels on production shapes
(50-node layers, 13 slots); the macro benchmark times a full 1096-step
online run on the bundled dataset with each backend.

Usage: python benchmarks/bench_kernels.py
"""

import time
from pathlib import Path

import numpy as np

from auxnet import NetworkConfig, kernels, load_ucr, make_schedule, run_stream, split_stream
from auxnet.kernels import available_backends

REPO_ROOT = Path(__file__).resolve().parent.parent
N = 50
SLOTS = 13


def timeit(fn, repeats=20000):
    fn()  # warm up
    t0 = time.perf_counter()
    for _ in range(repeats):
        fn()
    return (time.perf_counter() - t0) / repeats


def micro(mod):
    rng = np.random.default_rng(0)
    W = rng.normal(size=(N, N))
    We = rng.normal(size=(N, N * SLOTS))
    c = rng.normal(size=N)
    x = rng.normal(size=N)
    xe = rng.normal(size=N * SLOTS)
    theta = rng.normal(size=(2, N))
    preact, hidden = np.empty(N), np.empty(N)
    probs = np.empty(2)
    gtheta = np.empty_like(theta)
    ghidden = np.zeros(N)
    gW, gc, down = np.empty_like(W), np.empty(N), np.empty(N)
    gWe, downe = np.empty_like(We), np.empty(N * SLOTS)
    m, v = np.zeros_like(W), np.zeros_like(W)

    mod.dense_forward(W, c, x, preact, hidden)
    mod.classifier_forward(theta, hidden, probs)
    return {
        "dense_forward 50x50": timeit(lambda: mod.dense_forward(W, c, x, preact, hidden)),
        "dense_forward 50x650": timeit(
            lambda: mod.dense_forward(We, c, xe, preact, hidden), repeats=4000),
        "classifier_forward": timeit(lambda: mod.classifier_forward(theta, hidden, probs)),
        "classifier_backward": timeit(
            lambda: mod.classifier_backward(theta, hidden, probs, 1, 0.1, gtheta, ghidden)),
        "layer_backward 50x50": timeit(
            lambda: mod.layer_backward(W, preact, x, hidden, gW, gc, down)),
        "layer_backward 50x650": timeit(
            lambda: mod.layer_backward(We, preact, xe, hidden, gWe, gc, downe), repeats=4000),
        "adam_step 50x50": timeit(
            lambda: mod.adam_step(W, gW, m, v, 5, 0.01, 0.9, 0.999, 1e-8)),
    }


def macro(backend):
    kernels.set_backend(backend)
    ds = load_ucr(REPO_ROOT / "data" / "italy_power_demand.tsv")
    cfg = NetworkConfig(num_base_features=12, num_classes=2, aux_layers=12, seed=0)
    stream = split_stream(ds, 12, make_schedule(len(ds), 12, 0.9, 0))
    t0 = time.perf_counter()
    metrics = run_stream(cfg, stream)
    elapsed = time.perf_counter() - t0
    return elapsed, metrics.avg_accuracy


def main():
    backends = available_backends()
    print(f"available backends: {', '.join(backends)}")
    if "compiled" not in backends:
        print("compiled backend not built; showing numpy only")

    micro_results = {}
    for name in backends:
        kernels.set_backend(name)
        import importlib
        mod = importlib.import_module(
            "auxnet._kernels_c" if name == "compiled" else "auxnet._kernels_np")
        micro_results[name] = micro(mod)

    ops = list(next(iter(micro_results.values())))
    print(f"\n{'kernel':<24}" + "".join(f"{b:>14}" for b in backends)
          + ("      speedup" if len(backends) == 2 else ""))
    for op in ops:
        row = f"{op:<24}"
        for b in backends:
            row += f"{micro_results[b][op] * 1e6:>12.2f}us"
        if len(backends) == 2:
            ratio = micro_results["numpy"][op] / micro_results["compiled"][op]
            row += f"{ratio:>11.1f}x"
        print(row)

    print("\nfull 1096-step run (B=12, p=0.9, 23 layers, 50 nodes):")
    for name in backends:
        elapsed, acc = macro(name)
        print(f"  {name:<10} {elapsed:6.2f}s   accuracy {acc:.4f}")


if __name__ == "__main__":
    main()
