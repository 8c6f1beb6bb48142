"""Command line interface.

Subcommands:

* ``run``: simulate a scheme (or a circuit loaded from OpenQASM) exactly or
  with sampled shots, reporting parity tables / counts as text or JSON;
* ``verify``: run the built-in consistency checks against the expected
  parity tables and overlap identities; exit 1 on any mismatch;
* ``export``: write a scheme circuit as OpenQASM 2.0.

Exit codes: 0 success, 1 failed checks or runtime errors, 2 bad arguments.
The default seed comes from PIGEONSIM_SEED when set.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import qphe
from ._kernels import active_backend
from .circuit import exact_result_json, run_exact, run_shots, shots_result_json
from .errors import PigeonSimError
from .gates import GateKind
from .qasm import export_qasm, parse_qasm

_SCHEMES = [s.value for s in qphe.SchemeId]
_PAIR_CHOICES = list(qphe.PAIR_KEYS) + ["all"]


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def _resolve_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    raw = os.environ.get("PIGEONSIM_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise PigeonSimError(f"PIGEONSIM_SEED is not an integer: {raw!r}")


def _emit(args, payload_json: dict, payload_text: str) -> None:
    if args.output == "json":
        text = json.dumps(payload_json, indent=2) + "\n"
    else:
        text = payload_text + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _pairs_for(args) -> list[str]:
    if args.pair == "all":
        return list(qphe.PAIR_KEYS)
    return [args.pair]


def _shots_rows(scheme, counts: dict[str, int]) -> list[dict]:
    by_label: dict[str, list[int]] = {key: [0, 0] for key in qphe.LABEL_KEYS}
    for bits, n in counts.items():
        label = "".join(qphe.branch_label(bits))
        parity = qphe.branch_parity(scheme, bits)
        by_label[label][parity] += n
    rows = []
    for key in qphe.LABEL_KEYS:
        n0, n1 = by_label[key]
        total = n0 + n1
        rows.append(
            {
                "label": key,
                "count": total,
                "w_freq": (n1 / total) if total else None,
            }
        )
    return rows


def cmd_run(args) -> int:
    seed = _resolve_seed(args)

    if args.from_qasm:
        circuit = parse_qasm(Path(args.from_qasm).read_text())
        circuit.name = Path(args.from_qasm).stem
        if args.mode == "exact":
            branches = run_exact(circuit)
            payload = exact_result_json(circuit, branches)
            lines = [f"circuit: {circuit.name}  mode: exact",
                     "clbits        prob"]
            for b in branches:
                lines.append(f"{b.clbits or '-':<10}  {b.probability:.6f}")
            _emit(args, payload, "\n".join(lines))
        else:
            result = run_shots(circuit, args.shots, seed)
            payload = shots_result_json(circuit, result)
            lines = [
                f"circuit: {circuit.name}  mode: shots  "
                f"shots: {result.total_shots}  seed: {result.seed}",
                "clbits       count",
            ]
            for bits in sorted(result.counts):
                lines.append(f"{bits or '-':<10}  {result.counts[bits]}")
            _emit(args, payload, "\n".join(lines))
        return 0

    scheme = qphe.SchemeId(args.scheme)

    if args.mode == "exact" and args.pair == "all":
        table = qphe.parity_table(
            scheme, feed_forward=args.feed_forward, phase_gate=GateKind.S
        )
        _emit(args, table.to_json(), table.format_text())
        return 0

    if args.mode == "exact":
        blocks = []
        text_lines = []
        for pair in _pairs_for(args):
            circ = qphe.build_scheme_circuit(
                scheme, pair, feed_forward=args.feed_forward
            )
            joint = qphe.joint_distribution(scheme, run_exact(circ))
            rows = []
            text_lines.append(f"scheme: {circ.name}")
            text_lines.append("label       W    prob")
            for key in qphe.LABEL_KEYS:
                p0 = joint.get((key, 0), 0.0)
                p1 = joint.get((key, 1), 0.0)
                bit = 1 if p1 > p0 else 0
                rows.append({"label": key, "w": bit, "prob": p0 + p1})
                text_lines.append(f"{key:<10}  {bit}  {p0 + p1:.4f}")
            blocks.append({"pair": pair, "rows": rows})
        payload = {"scheme": scheme.value, "mode": "exact", "pairs": blocks}
        _emit(args, payload, "\n".join(text_lines))
        return 0

    # Sampled run over one or all pairs.
    blocks = []
    text_lines = []
    for pair in _pairs_for(args):
        circ = qphe.build_scheme_circuit(scheme, pair, feed_forward=args.feed_forward)
        result = run_shots(circ, args.shots, seed)
        rows = _shots_rows(scheme, result.counts)
        blocks.append({"pair": pair, "rows": rows})
        text_lines.append(
            f"scheme: {circ.name}  shots: {result.total_shots}  seed: {result.seed}"
        )
        text_lines.append("label       count  W-freq")
        for row in rows:
            freq = "-" if row["w_freq"] is None else f"{row['w_freq']:.4f}"
            text_lines.append(f"{row['label']:<10}  {row['count']:>5}  {freq}")
    payload = {
        "scheme": scheme.value,
        "mode": "shots",
        "shots": args.shots,
        "seed": seed,
        "pairs": blocks,
    }
    _emit(args, payload, "\n".join(text_lines))
    return 0


def _verify_checks(phase_gate: GateKind) -> list[dict]:
    checks: list[dict] = []

    mapping = qphe.postselect_mapping_report(phase_gate)
    checks.append(
        {
            "name": "postselect-mapping",
            "ok": mapping.ok,
            "detail": "; ".join(mapping.notes)
            if mapping.notes
            else "measured 1 = +i on every qubit",
        }
    )

    fin = qphe.check_final_state_amplitudes(phase_gate)
    checks.append(
        {
            "name": "final-state-amplitudes",
            "ok": fin.ok,
            "detail": (
                f"max amplitude error {fin.max_amplitude_error:.2e}, "
                f"max probability error {fin.max_probability_error:.2e}"
            ),
        }
    )

    from .statevector import build_product_state, inner_product

    plus = build_product_state(["plus"])
    c_pi = inner_product(build_product_state(["plus_i"]), plus)
    c_mi = inner_product(build_product_state(["minus_i"]), plus)
    err = max(abs(c_pi - (0.5 - 0.5j)), abs(c_mi - (0.5 + 0.5j)))
    checks.append(
        {
            "name": "plus-decomposition",
            "ok": err <= 1e-12,
            "detail": f"coefficient error {err:.2e}",
        }
    )

    worst = 0.0
    for l, m in qphe.PAIRS:
        proj = qphe.PairProjector(l, m)
        for lbl in (("+i",) * 3, ("-i",) * 3):
            worst = max(worst, abs(qphe.pigeonhole_overlap(proj, lbl)))
    checks.append(
        {
            "name": "uniform-label-overlaps",
            "ok": worst <= 1e-12,
            "detail": f"largest |overlap| {worst:.2e} (must vanish for all pairs)",
        }
    )

    tables: dict[str, qphe.ParityTable] = {}
    for scheme in qphe.SchemeId:
        table = qphe.parity_table(scheme, phase_gate=phase_gate)
        tables[scheme.value] = table
        bad = [
            f"{key}: got {table.rows[key]}, expected {qphe.EXPECTED_PARITY[key]}"
            for key in qphe.LABEL_KEYS
            if table.rows[key] != qphe.EXPECTED_PARITY[key]
        ]
        checks.append(
            {
                "name": f"parity-table-{scheme.value}",
                "ok": not bad,
                "detail": "; ".join(bad)
                if bad
                else f"24/24 bits match, max leakage {table.max_leakage:.2e}",
            }
        )

    report = qphe.scheme_equivalence_report(tables)
    checks.append(
        {
            "name": "scheme-equivalence",
            "ok": report.ok,
            "detail": "; ".join(report.differences) if report.differences else
            "all schemes produce identical tables",
        }
    )
    return checks


def cmd_verify(args) -> int:
    phase_gate = GateKind.SDG if args.corrupt == "sdg-for-s" else GateKind.S
    checks = _verify_checks(phase_gate)
    ok = all(c["ok"] for c in checks)
    if args.json:
        print(json.dumps({"ok": ok, "checks": checks}, indent=2))
    else:
        for c in checks:
            print(f"{'PASS' if c['ok'] else 'FAIL'} {c['name']}: {c['detail']}")
        print("verify: OK" if ok else "verify: FAILED")
    return 0 if ok else 1


def cmd_export(args) -> int:
    circ = qphe.build_scheme_circuit(
        qphe.SchemeId(args.scheme), args.pair, feed_forward=args.feed_forward
    )
    Path(args.out_path).write_text(export_qasm(circ))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pigeonsim",
        description="Quantum pigeonhole parity-measurement simulator "
        f"(kernels: {active_backend()})",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="simulate a scheme or a QASM circuit")
    p_run.add_argument("--scheme", choices=_SCHEMES)
    p_run.add_argument("--pair", choices=_PAIR_CHOICES, default="all")
    p_run.add_argument("--mode", choices=["exact", "shots"], default="exact")
    p_run.add_argument("--shots", type=_positive_int, default=8192)
    p_run.add_argument("--seed", type=int, default=None,
                       help="defaults to PIGEONSIM_SEED or 0")
    p_run.add_argument("--feed-forward", action="store_true",
                       help="common_target variant with conditioned X corrections")
    p_run.add_argument("--from-qasm", metavar="FILE",
                       help="run a circuit parsed from OpenQASM instead of a scheme")
    p_run.add_argument("--output", choices=["json", "table"], default="table")
    p_run.add_argument("--out", metavar="PATH",
                       help="write the report here instead of stdout")
    p_run.set_defaults(func=cmd_run)

    p_verify = sub.add_parser("verify", help="check tables and overlap identities")
    p_verify.add_argument("--json", action="store_true")
    p_verify.add_argument("--corrupt", choices=["sdg-for-s"],
                          help="negative control: build with a deliberate defect")
    p_verify.set_defaults(func=cmd_verify)

    p_export = sub.add_parser("export", help="write a scheme circuit as OpenQASM")
    p_export.add_argument("scheme", choices=_SCHEMES)
    p_export.add_argument("pair", choices=list(qphe.PAIR_KEYS))
    p_export.add_argument("out_path")
    p_export.add_argument("--feed-forward", action="store_true")
    p_export.set_defaults(func=cmd_export)

    return parser


def _check_run_args(parser, args) -> None:
    if args.command != "run":
        return
    if args.from_qasm and args.scheme:
        parser.error("--from-qasm and --scheme are mutually exclusive")
    if not args.from_qasm and not args.scheme:
        parser.error("one of --scheme or --from-qasm is required")
    if args.feed_forward and args.scheme != "common_target":
        parser.error("--feed-forward only applies to --scheme common_target")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _check_run_args(parser, args)
    try:
        return args.func(args)
    except (PigeonSimError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
