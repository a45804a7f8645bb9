# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops for the dense bipartite kernels.

Every function here has a numpy twin in :mod:`reddyn._pykernels` with the
same signature; :mod:`reddyn.kernels` picks one at import.
"""
import numpy as np
cimport numpy as cnp

cnp.import_array()

ctypedef double complex cplx


def kron(const cplx[:, ::1] a, const cplx[:, ::1] b):
    cdef Py_ssize_t ra = a.shape[0], ca = a.shape[1]
    cdef Py_ssize_t rb = b.shape[0], cb = b.shape[1]
    out_arr = np.empty((ra * rb, ca * cb), dtype=np.complex128)
    cdef cplx[:, ::1] out = out_arr
    cdef Py_ssize_t i, j, k, l
    cdef cplx aij
    for i in range(ra):
        for j in range(ca):
            aij = a[i, j]
            for k in range(rb):
                for l in range(cb):
                    out[i * rb + k, j * cb + l] = aij * b[k, l]
    return out_arr


def ptrace_b(const cplx[:, ::1] m, Py_ssize_t d_a, Py_ssize_t d_b):
    out_arr = np.zeros((d_a, d_a), dtype=np.complex128)
    cdef cplx[:, ::1] out = out_arr
    cdef Py_ssize_t i, j, k
    cdef cplx acc
    for i in range(d_a):
        for j in range(d_a):
            acc = 0
            for k in range(d_b):
                acc = acc + m[i * d_b + k, j * d_b + k]
            out[i, j] = acc
    return out_arr


def ptrace_a(const cplx[:, ::1] m, Py_ssize_t d_a, Py_ssize_t d_b):
    out_arr = np.zeros((d_b, d_b), dtype=np.complex128)
    cdef cplx[:, ::1] out = out_arr
    cdef Py_ssize_t i, k, l
    for i in range(d_a):
        for k in range(d_b):
            for l in range(d_b):
                out[k, l] = out[k, l] + m[i * d_b + k, i * d_b + l]
    return out_arr


def conj_ptrace_b(const cplx[:, ::1] u, const cplx[:, ::1] x,
                  Py_ssize_t d_a, Py_ssize_t d_b):
    """Tr_B[u x u^dagger] without forming the full conjugated matrix.

    ``u @ x`` goes through BLAS; only the d_a x d_a block-diagonal
    contraction against conj(u) runs here.
    """
    cdef Py_ssize_t n = d_a * d_b
    ux_arr = np.dot(np.asarray(u), np.asarray(x))
    cdef const cplx[:, ::1] ux = ux_arr
    out_arr = np.empty((d_a, d_a), dtype=np.complex128)
    cdef cplx[:, ::1] out = out_arr
    cdef Py_ssize_t a, b, k, j, p, q
    cdef double re, im, ur, ui, vr, vi
    for a in range(d_a):
        for b in range(d_a):
            re = 0.0
            im = 0.0
            for k in range(d_b):
                p = a * d_b + k
                q = b * d_b + k
                for j in range(n):
                    ur = ux[p, j].real
                    ui = ux[p, j].imag
                    vr = u[q, j].real
                    vi = u[q, j].imag
                    # ux[p, j] * conj(u[q, j])
                    re += ur * vr + ui * vi
                    im += ui * vr - ur * vi
            out[a, b] = re + 1j * im
    return out_arr


def choi_from_images(const cplx[:, :, :, ::1] images):
    """Assemble sum_ij E_ij (x) images[i, j] as one dense block matrix."""
    cdef Py_ssize_t d_in = images.shape[0], d_out = images.shape[2]
    out_arr = np.empty((d_in * d_out, d_in * d_out), dtype=np.complex128)
    cdef cplx[:, ::1] out = out_arr
    cdef Py_ssize_t i, j, k, l
    for i in range(d_in):
        for j in range(d_in):
            for k in range(d_out):
                for l in range(d_out):
                    out[i * d_out + k, j * d_out + l] = images[i, j, k, l]
    return out_arr
