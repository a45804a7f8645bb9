"""Compare the compiled and numpy kernel backends.

    python benchmarks/bench_kernels.py [--repeat N]

Prints per-call timings of each kernel at several joint dimensions and the
wall time of a batch of theorem trials under each backend.
"""
import argparse
import timeit

import numpy as np

from reddyn import kernels
from reddyn.correlations import theorem_trial
from reddyn.cp import choi, correlated_embedding, induced_map
from reddyn.linalg import I2, SIGMA_Z, tensor
from reddyn.dynamics import cnot_hamiltonian, propagator


def _rand(n, rng):
    return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))


def kernel_cases(d_a, d_b, rng):
    n = d_a * d_b
    a, b = _rand(d_a, rng), _rand(d_b, rng)
    m, u = _rand(n, rng), _rand(n, rng)
    images = rng.standard_normal((d_a, d_a, d_a, d_a)) + 0j
    return {
        "kron": lambda k: k.kron(a, b),
        "ptrace_b": lambda k: k.ptrace_b(m, d_a, d_b),
        "ptrace_a": lambda k: k.ptrace_a(m, d_a, d_b),
        "conj_ptrace_b": lambda k: k.conj_ptrace_b(u, m, d_a, d_b),
        "choi_from_images": lambda k: k.choi_from_images(images),
    }


def time_call(fn, repeat):
    number = max(1, repeat)
    return min(timeit.repeat(fn, number=number, repeat=5)) / number


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=2000)
    parser.add_argument("--trials", type=int, default=500)
    args = parser.parse_args()

    backends = kernels.available_backends()
    print(f"backends: {', '.join(backends)} (default {kernels.BACKEND})")
    rng = np.random.default_rng(0)
    print(f"\n{'kernel':<18}{'dims':>7}" + "".join(f"{b + ' us':>14}" for b in backends) + f"{'speedup':>10}")
    for d_a, d_b in [(2, 2), (2, 3), (3, 3), (4, 4), (8, 8)]:
        for name, fn in kernel_cases(d_a, d_b, rng).items():
            mods = {b: kernels.load_backend(b) for b in backends}
            reps = args.repeat if d_a * d_b <= 16 else args.repeat // 20
            t = {b: time_call(lambda: fn(mods[b]), reps) for b in backends}
            speed = t["python"] / t["cython"] if "cython" in t else float("nan")
            cols = "".join(f"{t[b] * 1e6:>14.2f}" for b in backends)
            print(f"{name:<18}{d_a}x{d_b:<5}{cols}{speed:>10.2f}")

    print(f"\nend to end ({args.trials} theorem trials at 2x2 and 3x3, C-NOT Choi map x200)")
    e = correlated_embedding(0.25 * tensor(SIGMA_Z, SIGMA_Z), I2 / 2)
    u = propagator(cnot_hamiltonian(), np.pi / 2)
    for b in backends:
        with kernels.use_backend(b):
            t_trials = min(timeit.repeat(
                lambda: [theorem_trial(s, d, d) for s in range(args.trials) for d in (2, 3)],
                number=1, repeat=3))
            t_choi = min(timeit.repeat(lambda: choi(induced_map(e, u)), number=200, repeat=3))
        print(f"  {b:<8} theorem trials {t_trials:8.3f} s   Choi maps {t_choi:8.4f} s")


if __name__ == "__main__":
    main()
