"""Numpy implementations of the amplitude kernels.

This is the fallback backend; `_ckernels.pyx` implements the same interface
in Cython.  Both operate in place on 1-D complex128 arrays with little-endian
indexing (qubit 0 is the least significant bit of the amplitude index).

Shot sampling consumes one uniform double per measurement, in program order,
and writes classical bits into a per-shot row.  The numpy backend executes
shots in vectorised batches over a (shots, dim) array; the compiled backend
loops shot by shot.  Both consume the same uniforms, so given identical
inputs they produce identical bits.
"""

import numpy as np

# Instruction tape opcodes.  A tape row is [op, a, b, cond_clbit, cond_val]:
# 1q gates use a=target, CX uses a=control b=target, MEASURE uses a=qubit
# b=clbit.  cond_clbit is -1 for unconditional instructions.
OP_H = 0
OP_S = 1
OP_SDG = 2
OP_X = 3
OP_Z = 4
OP_CX = 5
OP_MEASURE = 6


def apply_1q(amps, target, mat):
    v = amps.reshape(-1, 2, 1 << target)
    a0 = v[:, 0, :].copy()
    a1 = v[:, 1, :]
    v[:, 0, :] = mat[0, 0] * a0 + mat[0, 1] * a1
    v[:, 1, :] = mat[1, 0] * a0 + mat[1, 1] * a1


def apply_cx(amps, control, target):
    n = int(amps.size).bit_length() - 1
    v = amps.reshape((2,) * n)
    sel0 = [slice(None)] * n
    sel0[n - 1 - control] = 1
    sel1 = list(sel0)
    sel0[n - 1 - target] = 0
    sel1[n - 1 - target] = 1
    sel0, sel1 = tuple(sel0), tuple(sel1)
    tmp = v[sel0].copy()
    v[sel0] = v[sel1]
    v[sel1] = tmp


def _band_weight(band):
    b = np.ascontiguousarray(band)
    return float(np.sum(b.real * b.real + b.imag * b.imag))


def prob_of(amps, target, outcome):
    v = amps.reshape(-1, 2, 1 << target)
    return _band_weight(v[:, outcome, :])


def project(amps, target, outcome):
    v = amps.reshape(-1, 2, 1 << target)
    kept = _band_weight(v[:, outcome, :])
    v[:, 1 - outcome, :] = 0
    return kept


def norm_sq(amps):
    return float(np.vdot(amps, amps).real)


def scale(amps, factor):
    amps *= factor


def inner(a, b):
    return complex(np.vdot(a, b))


def sample_shots(tape, mats, base, uniforms, out_bits):
    shots = uniforms.shape[0]
    dim = base.size
    chunk = max(1, min(shots, (1 << 22) // dim))
    for lo in range(0, shots, chunk):
        hi = min(shots, lo + chunk)
        _run_block(tape, mats, base, uniforms[lo:hi], out_bits[lo:hi])


def _run_block(tape, mats, base, uniforms, bits):
    rows = uniforms.shape[0]
    dim = base.size
    n = int(dim).bit_length() - 1
    amps = np.repeat(base[None, :], rows, axis=0)
    meas_idx = 0
    for op, a, b, cond_clbit, cond_val in tape:
        if op == OP_MEASURE:
            meas_idx = _measure_block(amps, bits, int(a), int(b),
                                      uniforms, meas_idx)
        elif cond_clbit >= 0:
            mask = bits[:, cond_clbit] == cond_val
            if not mask.any():
                continue
            sub = amps[mask]
            _gate_block(sub, n, int(op), int(a), int(b), mats)
            amps[mask] = sub
        else:
            _gate_block(amps, n, int(op), int(a), int(b), mats)


def _gate_block(amps, n, op, a, b, mats):
    rows = amps.shape[0]
    if op == OP_CX:
        v = amps.reshape((rows,) + (2,) * n)
        sel0 = [slice(None)] * (n + 1)
        sel0[1 + n - 1 - a] = 1
        sel1 = list(sel0)
        sel0[1 + n - 1 - b] = 0
        sel1[1 + n - 1 - b] = 1
        sel0, sel1 = tuple(sel0), tuple(sel1)
        tmp = v[sel0].copy()
        v[sel0] = v[sel1]
        v[sel1] = tmp
    else:
        mat = mats[op]
        v = amps.reshape(rows, -1, 2, 1 << a)
        a0 = v[:, :, 0, :].copy()
        a1 = v[:, :, 1, :]
        v[:, :, 0, :] = mat[0, 0] * a0 + mat[0, 1] * a1
        v[:, :, 1, :] = mat[1, 0] * a0 + mat[1, 1] * a1


def _measure_block(amps, bits, qubit, clbit, uniforms, meas_idx):
    rows = amps.shape[0]
    v = amps.reshape(rows, -1, 2, 1 << qubit)
    b0 = v[:, :, 0, :]
    b1 = v[:, :, 1, :]
    p0 = (b0.real * b0.real + b0.imag * b0.imag).sum(axis=(1, 2))
    p1 = (b1.real * b1.real + b1.imag * b1.imag).sum(axis=(1, 2))
    outc = uniforms[:, meas_idx] < p1
    v[outc, :, 0, :] = 0
    v[~outc, :, 1, :] = 0
    kept = np.where(outc, p1, p0)
    amps *= (1.0 / np.sqrt(kept))[:, None]
    bits[:, clbit] = outc
    return meas_idx + 1
