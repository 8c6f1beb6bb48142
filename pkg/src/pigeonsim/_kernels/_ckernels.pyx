# cython: language_level=3
# cython: boundscheck=False
# cython: wraparound=False
# cython: cdivision=True
"""Compiled amplitude kernels.

Mirrors `pykernels` exactly; see that module for the interface contract,
index conventions and tape format.  Opcode values are duplicated here and
must stay in sync.
"""

import numpy as np

from libc.math cimport sqrt

ctypedef double complex cplx

DEF OP_CX = 5
DEF OP_MEASURE = 6


cdef inline Py_ssize_t _spread(Py_ssize_t x, Py_ssize_t pos) noexcept nogil:
    # Insert a zero bit at position `pos`.
    return ((x >> pos) << (pos + 1)) | (x & ((<Py_ssize_t>1 << pos) - 1))


cdef void _apply_1q_raw(cplx* amps, Py_ssize_t dim, Py_ssize_t target,
                        cplx u00, cplx u01, cplx u10, cplx u11) noexcept nogil:
    cdef Py_ssize_t g, i0, i1
    cdef Py_ssize_t tmask = <Py_ssize_t>1 << target
    cdef cplx a, b
    for g in range(dim >> 1):
        i0 = _spread(g, target)
        i1 = i0 | tmask
        a = amps[i0]
        b = amps[i1]
        amps[i0] = u00 * a + u01 * b
        amps[i1] = u10 * a + u11 * b


cdef void _apply_cx_raw(cplx* amps, Py_ssize_t dim, Py_ssize_t control,
                        Py_ssize_t target) noexcept nogil:
    cdef Py_ssize_t lo = control if control < target else target
    cdef Py_ssize_t hi = control ^ target ^ lo
    cdef Py_ssize_t cmask = <Py_ssize_t>1 << control
    cdef Py_ssize_t tmask = <Py_ssize_t>1 << target
    cdef Py_ssize_t g, i, j
    cdef cplx tmp
    for g in range(dim >> 2):
        i = _spread(_spread(g, lo), hi) | cmask
        j = i | tmask
        tmp = amps[i]
        amps[i] = amps[j]
        amps[j] = tmp


cdef double _band_weight_raw(cplx* amps, Py_ssize_t dim, Py_ssize_t target,
                             int outcome) noexcept nogil:
    cdef Py_ssize_t g, idx
    cdef Py_ssize_t omask = (<Py_ssize_t>1 << target) if outcome else 0
    cdef double total = 0.0
    cdef cplx a
    for g in range(dim >> 1):
        idx = _spread(g, target) | omask
        a = amps[idx]
        total += a.real * a.real + a.imag * a.imag
    return total


cdef void _zero_band_raw(cplx* amps, Py_ssize_t dim, Py_ssize_t target,
                         int outcome) noexcept nogil:
    cdef Py_ssize_t g
    cdef Py_ssize_t omask = (<Py_ssize_t>1 << target) if outcome else 0
    for g in range(dim >> 1):
        amps[_spread(g, target) | omask] = 0


cdef void _scale_raw(cplx* amps, Py_ssize_t dim, double factor) noexcept nogil:
    cdef Py_ssize_t i
    for i in range(dim):
        amps[i] = amps[i] * factor


def apply_1q(cplx[::1] amps, target, mat):
    cdef cplx u00 = mat[0, 0]
    cdef cplx u01 = mat[0, 1]
    cdef cplx u10 = mat[1, 0]
    cdef cplx u11 = mat[1, 1]
    _apply_1q_raw(&amps[0], amps.shape[0], target, u00, u01, u10, u11)


def apply_cx(cplx[::1] amps, control, target):
    _apply_cx_raw(&amps[0], amps.shape[0], control, target)


def prob_of(cplx[::1] amps, target, outcome):
    return _band_weight_raw(&amps[0], amps.shape[0], target, outcome)


def project(cplx[::1] amps, target, outcome):
    cdef int out = outcome
    cdef double kept = _band_weight_raw(&amps[0], amps.shape[0], target, out)
    _zero_band_raw(&amps[0], amps.shape[0], target, 1 - out)
    return kept


def norm_sq(cplx[::1] amps):
    cdef Py_ssize_t i
    cdef double total = 0.0
    cdef cplx a
    for i in range(amps.shape[0]):
        a = amps[i]
        total += a.real * a.real + a.imag * a.imag
    return total


def scale(cplx[::1] amps, factor):
    _scale_raw(&amps[0], amps.shape[0], factor)


def inner(cplx[::1] a, cplx[::1] b):
    cdef Py_ssize_t i
    cdef cplx acc = 0
    for i in range(a.shape[0]):
        acc = acc + a[i].conjugate() * b[i]
    return complex(acc)


def sample_shots(long long[:, ::1] tape, cplx[:, :, ::1] mats, cplx[::1] base,
                 double[:, ::1] uniforms, unsigned char[:, ::1] out_bits):
    cdef Py_ssize_t shots = uniforms.shape[0]
    cdef Py_ssize_t dim = base.shape[0]
    cdef Py_ssize_t n_instr = tape.shape[0]
    cdef cplx[::1] work = np.empty(dim, dtype=np.complex128)
    cdef cplx* w = &work[0]
    cdef Py_ssize_t s, k, mi
    cdef long long op, a, b, cc, cv
    cdef double u, p0, p1, kept
    cdef int outc

    for s in range(shots):
        work[:] = base
        mi = 0
        for k in range(n_instr):
            op = tape[k, 0]
            a = tape[k, 1]
            b = tape[k, 2]
            cc = tape[k, 3]
            cv = tape[k, 4]
            if op == OP_MEASURE:
                p1 = _band_weight_raw(w, dim, a, 1)
                u = uniforms[s, mi]
                if u < p1:
                    outc = 1
                    kept = p1
                else:
                    p0 = _band_weight_raw(w, dim, a, 0)
                    outc = 0
                    kept = p0
                _zero_band_raw(w, dim, a, 1 - outc)
                _scale_raw(w, dim, 1.0 / sqrt(kept))
                out_bits[s, b] = <unsigned char>outc
                mi += 1
            else:
                if cc >= 0 and out_bits[s, cc] != <unsigned char>cv:
                    continue
                if op == OP_CX:
                    _apply_cx_raw(w, dim, a, b)
                else:
                    _apply_1q_raw(w, dim, a,
                                  mats[op, 0, 0], mats[op, 0, 1],
                                  mats[op, 1, 0], mats[op, 1, 1])
