"""Timing comparison of the compiled kernels against the numpy fallback.

Runs three micro-benchmarks (Hadamard, CX, single-qubit probability) over a
range of register sizes, then an end-to-end shot-sampling benchmark on the
largest parity-measurement circuit.  Both backends are imported directly,
bypassing the PIGEONSIM_KERNELS switch, so one invocation covers both.

Usage:
    python3 benchmarks/bench_kernels.py
    python3 benchmarks/bench_kernels.py --qubits 8 12 16 20 --shots 200000
"""

import argparse
import time

import numpy as np

from pigeonsim._kernels import pykernels

try:
    from pigeonsim._kernels import _ckernels
except ImportError:
    _ckernels = None

from pigeonsim.circuit import _compile_tape, _uniforms_for
from pigeonsim.gates import GateKind
from pigeonsim.qphe import SchemeId, build_scheme_circuit

H = np.ascontiguousarray(GateKind.H.matrix)


def random_amps(rng, num_qubits):
    amps = rng.normal(size=1 << num_qubits) + 1j * rng.normal(size=1 << num_qubits)
    amps /= np.linalg.norm(amps)
    return amps.astype(np.complex128)


def best_of(repeats, fn):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_ops(backend, num_qubits, repeats, rng):
    """Seconds per call for (apply_1q, apply_cx, prob_of) on one backend."""
    amps = random_amps(rng, num_qubits)
    # H twice and CX twice are identities, so looping does not drift the state.
    loops = max(1, (1 << 20) >> num_qubits)

    def run_1q():
        for _ in range(loops):
            backend.apply_1q(amps, num_qubits - 1, H)

    def run_cx():
        for _ in range(loops):
            backend.apply_cx(amps, 0, num_qubits - 1)

    def run_prob():
        for _ in range(loops):
            backend.prob_of(amps, num_qubits // 2, 0)

    return tuple(best_of(repeats, fn) / loops for fn in (run_1q, run_cx, run_prob))


def bench_shots(backend, shots, seed, repeats):
    circ = build_scheme_circuit(SchemeId.COMMON_TARGET, "13", feed_forward=True)
    tape, mats, n_meas = _compile_tape(circ)
    base = np.zeros(1 << circ.num_qubits, dtype=np.complex128)
    base[0] = 1.0
    uniforms = _uniforms_for(seed, shots, n_meas)
    bits = np.zeros((shots, circ.num_clbits), dtype=np.uint8)
    elapsed = best_of(
        repeats, lambda: backend.sample_shots(tape, mats, base, uniforms, bits)
    )
    return elapsed, bits


def fmt(seconds):
    if seconds < 1e-6:
        return f"{seconds * 1e9:8.1f} ns"
    if seconds < 1e-3:
        return f"{seconds * 1e6:8.1f} us"
    return f"{seconds * 1e3:8.1f} ms"


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--qubits", type=int, nargs="+", default=[6, 10, 14, 18])
    parser.add_argument("--repeats", type=int, default=5)
    parser.add_argument("--shots", type=int, default=100000)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    backends = [("python", pykernels)]
    if _ckernels is not None:
        backends.append(("compiled", _ckernels))
    else:
        print("note: compiled kernels unavailable, timing the fallback only\n")

    rng = np.random.default_rng(args.seed)
    print(f"{'op':<10} {'qubits':>6}", end="")
    for name, _ in backends:
        print(f" {name:>12}", end="")
    if len(backends) == 2:
        print(f" {'speedup':>8}", end="")
    print()

    for n in args.qubits:
        rows = [bench_ops(impl, n, args.repeats, rng) for _, impl in backends]
        for op_idx, op in enumerate(("apply_1q", "apply_cx", "prob_of")):
            print(f"{op:<10} {n:>6}", end="")
            for row in rows:
                print(f" {fmt(row[op_idx]):>12}", end="")
            if len(rows) == 2:
                print(f" {rows[0][op_idx] / rows[1][op_idx]:>7.1f}x", end="")
            print()

    print(f"\nsample_shots: {args.shots} shots of the feed-forward parity circuit")
    results = {}
    for name, impl in backends:
        elapsed, bits = bench_shots(impl, args.shots, args.seed, args.repeats)
        results[name] = (elapsed, bits)
        rate = args.shots / elapsed
        print(f"  {name:<10} {elapsed * 1e3:9.1f} ms   {rate:12,.0f} shots/s")
    if len(results) == 2:
        py_t, py_bits = results["python"]
        c_t, c_bits = results["compiled"]
        match = "identical" if np.array_equal(py_bits, c_bits) else "DIFFERENT"
        print(f"  speedup {py_t / c_t:.1f}x, sampled bits {match}")


if __name__ == "__main__":
    main()
