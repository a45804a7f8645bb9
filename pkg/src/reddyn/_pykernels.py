"""Numpy fallback for the compiled kernels in ``_ckernels.pyx``."""
import numpy as np


def kron(a, b):
    return np.kron(a, b)


def ptrace_b(m, d_a, d_b):
    return np.einsum("ikjk->ij", m.reshape(d_a, d_b, d_a, d_b))


def ptrace_a(m, d_a, d_b):
    return np.einsum("ikil->kl", m.reshape(d_a, d_b, d_a, d_b))


def conj_ptrace_b(u, x, d_a, d_b):
    """Tr_B[u x u^dagger]."""
    n = d_a * d_b
    # row a of the reshaped u @ x holds the (k, q) entries of block row a
    ux = (u @ x).reshape(d_a, d_b * n)
    return ux @ u.reshape(d_a, d_b * n).conj().T


def choi_from_images(images):
    d_in, _, d_out, _ = images.shape
    return images.transpose(0, 2, 1, 3).reshape(d_in * d_out, d_in * d_out)
