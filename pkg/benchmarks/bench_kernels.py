"""Compare the numba kernels against the pure-numpy fallback.

Kernel micro-benchmarks run both implementations in one process; the
end-to-end training-step comparison spawns one subprocess per backend so
each package import binds cleanly (the backend is chosen at import time
via DISCOIL_BACKEND).

Usage: python benchmarks/bench_kernels.py [--kernels-only] [--repeats N]
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from discoil.kernels import numba_backend, numpy_backend

BATCH, IN_DIM, OUT_DIM = 128, 784, 256


def timeit(fn, *args, repeats=200, warmup=3):
    for _ in range(warmup):
        fn(*args)
    t0 = time.perf_counter()
    for _ in range(repeats):
        fn(*args)
    return (time.perf_counter() - t0) / repeats


def kernel_cases(rng):
    x = rng.standard_normal((BATCH, IN_DIM))
    w = rng.standard_normal((OUT_DIM, IN_DIM))
    b = rng.standard_normal(OUT_DIM)
    gy = rng.standard_normal((BATCH, OUT_DIM))
    act = rng.standard_normal((BATCH, OUT_DIM))
    recon = rng.standard_normal((BATCH, IN_DIM))
    target = rng.standard_normal((BATCH, IN_DIM))
    p = rng.standard_normal(IN_DIM * OUT_DIM)
    g = rng.standard_normal(IN_DIM * OUT_DIM)
    m = np.zeros_like(p)
    v = np.zeros_like(p)
    sig = 1.0 / (1.0 + np.exp(-act))
    return [
        ("affine_forward", (x, w, b)),
        ("affine_backward", (x, w, gy)),
        ("relu", (act,)),
        ("relu_backward", (act, gy)),
        ("sigmoid", (act,)),
        ("sigmoid_backward", (sig, gy)),
        ("row_squared_error", (recon, target)),
        ("adam_update", (p, g, m, v, 1, 1e-3, 0.9, 0.999, 1e-8, 0.01)),
    ]


TRAIN_STEP_SNIPPET = """
import time, numpy as np
from discoil.vae import ClassVae
from discoil.losses import HyperParams
from discoil.learner import batch_objective
from discoil.numcore import Adam
from discoil.kernels import BACKEND

rng = np.random.default_rng(0)
hp = HyperParams()
vae = ClassVae(0, 784, rng, latent_dim=8, hidden_widths=(256, 64))
opt = Adam(vae.named_params(), lr=hp.learning_rate, weight_decay=hp.weight_decay)
x_pos = rng.uniform(0, 1, (128, 784))
x_neg = rng.uniform(0, 1, (128, 784))
old = rng.uniform(50, 200, (128, 3))
for _ in range(3):  # warmup / jit compile
    vae.zero_grad()
    batch_objective(vae, x_pos, rng.standard_normal((128, 8)), x_neg,
                    rng.standard_normal((128, 8)), old, hp)
    opt.step(vae.named_grads())
t0 = time.perf_counter()
n = 30
for _ in range(n):
    vae.zero_grad()
    batch_objective(vae, x_pos, rng.standard_normal((128, 8)), x_neg,
                    rng.standard_normal((128, 8)), old, hp)
    opt.step(vae.named_grads())
print(f"{BACKEND} {(time.perf_counter() - t0) / n * 1e3:.2f}")
"""


def bench_kernels(repeats):
    rng = np.random.default_rng(0)
    print(f"{'kernel':<20} {'numpy':>10} {'numba':>10} {'speedup':>8}")
    for name, args in kernel_cases(rng):
        t_np = timeit(getattr(numpy_backend, name), *[np.copy(a) if isinstance(a, np.ndarray) else a for a in args], repeats=repeats)
        t_nb = timeit(getattr(numba_backend, name), *[np.copy(a) if isinstance(a, np.ndarray) else a for a in args], repeats=repeats)
        print(f"{name:<20} {t_np * 1e6:>8.1f}us {t_nb * 1e6:>8.1f}us {t_np / t_nb:>7.2f}x")


def bench_training_step():
    print(f"\n{'full training batch (128 pos + 128 neg, 784-d)':<47}")
    for backend in ("numpy", "numba"):
        env = dict(os.environ, DISCOIL_BACKEND=backend)
        out = subprocess.run(
            [sys.executable, "-c", TRAIN_STEP_SNIPPET],
            env=env, capture_output=True, text=True, check=True,
        ).stdout.strip()
        name, ms = out.split()
        print(f"  {name:<10} {float(ms):8.2f} ms/batch")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--kernels-only", action="store_true")
    parser.add_argument("--repeats", type=int, default=200)
    args = parser.parse_args()
    bench_kernels(args.repeats)
    if not args.kernels_only:
        bench_training_step()


if __name__ == "__main__":
    main()
