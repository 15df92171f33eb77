"""Command-line front end.

Subcommands mirror the library layer: emit-circuit writes circuit text,
run / sweep-theta produce CSV records, predict evaluates the closed-form
models, verify-ft runs the exhaustive single-fault check, and bounds
prints the worst-case distance table.

Options resolve as defaults < config file < flags.  The config file is
flat ``key = value`` lines with ``#`` comments; unknown keys are
rejected before anything runs.  QEC422_OUTPUT_DIR sets where relative
output paths land.  Exit codes: 0 success, 1 runtime failure, 2 usage.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from datetime import datetime, timezone

import numpy as np

from .analytics import (
    predict_coded_ps,
    predict_coded_raw,
    predict_uncoded,
    trace_distance,
    worst_case_bound,
)
from .circuits import Circuit, CircuitError, parse_circuit, serialize_circuit
from .code import (
    EncoderVariant,
    LogicalGate,
    LogicalStateLabel,
    build_encoder,
    coded_gate_circuit,
    codeword_distribution,
    uncoded_gate_circuit,
)
from .experiments import (
    DEFAULT_SHOTS,
    GateSetId,
    summarize_records,
    sweep_L,
    sweep_theta,
    write_records_csv,
)
from .ftcheck import verify_single_faults
from .noise import NoiseParams, totally_mixed
from .simulator import ideal_distribution

OUTPUT_DIR_ENV = "QEC422_OUTPUT_DIR"

# key -> parser; every key a config file may set
_CONFIG_PARSERS = {
    "gate_set": str,
    "lengths": lambda s: [int(x) for x in s.replace(",", " ").split()],
    "thetas": lambda s: [float(x) for x in s.replace(",", " ").split()],
    "seeds_per_length": int,
    "master_seed": int,
    "shots": int,
    "length": int,
    "eps1": float,
    "eps2": float,
    "p_meas": float,
    "p_prep": float,
    "theta": float,
    "xi": float,
    "analytic_xi": lambda s: s.lower() in ("1", "true", "yes"),
    "jobs": int,
    "out": str,
}


def load_config(path: str) -> dict:
    """Parse a flat key = value file, rejecting unknown keys up front."""
    cfg = {}
    with open(path) as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise CircuitError(f"{path}:{line_no}: expected 'key = value', got {line!r}")
            key, _, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if key not in _CONFIG_PARSERS:
                raise CircuitError(
                    f"{path}:{line_no}: unknown config key {key!r}; allowed: "
                    + ", ".join(sorted(_CONFIG_PARSERS))
                )
            try:
                cfg[key] = _CONFIG_PARSERS[key](value)
            except ValueError:
                raise CircuitError(f"{path}:{line_no}: bad value {value!r} for {key}") from None
    return cfg


def _resolve(args: argparse.Namespace, cfg: dict, key: str, default):
    flag = getattr(args, key, None)
    if flag is not None:
        return flag
    if key in cfg:
        return cfg[key]
    return default


def _noise_from(args: argparse.Namespace, cfg: dict) -> NoiseParams:
    return NoiseParams(
        eps1=_resolve(args, cfg, "eps1", 0.0),
        eps2=_resolve(args, cfg, "eps2", 0.0),
        p_meas=_resolve(args, cfg, "p_meas", 0.0),
        p_prep=_resolve(args, cfg, "p_prep", 0.0),
        theta=_resolve(args, cfg, "theta", 0.0),
        xi=_resolve(args, cfg, "xi", 0.0),
    )


def _out_path(name: str) -> str:
    if os.path.isabs(name):
        return name
    return os.path.join(os.environ.get(OUTPUT_DIR_ENV, "."), name)


def _write_text(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        full = _out_path(path)
        with open(full, "w") as fh:
            fh.write(text)
        print(f"wrote {full}")


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_emit_circuit(args: argparse.Namespace) -> int:
    if (args.encoder is None) == (args.gate is None):
        raise CircuitError("emit-circuit needs exactly one of --encoder or --gate")
    if args.encoder is not None:
        label = LogicalStateLabel(args.encoder)
        variant = EncoderVariant(args.variant)
        circuit = build_encoder(label, variant)
    else:
        gate = LogicalGate(args.gate)
        if args.scheme == "coded":
            circuit = Circuit(4, coded_gate_circuit(gate), [0, 1, 2, 3])
        else:
            circuit = Circuit(2, uncoded_gate_circuit(gate), [0, 1])
    _write_text(args.out, serialize_circuit(circuit))
    return 0


def cmd_run(args: argparse.Namespace) -> int:
    cfg = load_config(args.config) if args.config else {}
    gate_set = GateSetId.from_str(_resolve(args, cfg, "gate_set", "reduced"))
    lengths = _resolve(args, cfg, "lengths", [1, 2, 5, 10, 20, 50, 100])
    seeds_per_length = _resolve(args, cfg, "seeds_per_length", 5)
    master_seed = _resolve(args, cfg, "master_seed", 0)
    shots = _resolve(args, cfg, "shots", DEFAULT_SHOTS)
    analytic_xi = bool(_resolve(args, cfg, "analytic_xi", False))
    jobs = _resolve(args, cfg, "jobs", 1)
    params = _noise_from(args, cfg)
    out = _out_path(_resolve(args, cfg, "out", "results.csv"))

    records = sweep_L(gate_set, lengths, params, shots, seeds_per_length,
                      master_seed, analytic_xi, jobs)
    write_records_csv(out, records)
    meta = {
        "generated": datetime.now(timezone.utc).isoformat(),
        "gate_set": gate_set.value,
        "lengths": lengths,
        "seeds_per_length": seeds_per_length,
        "master_seed": master_seed,
        "shots": shots,
        "analytic_xi": analytic_xi,
        "sequence_sampling": "independent_per_L_seed",
        "params": {
            "eps1": params.eps1, "eps2": params.eps2, "p_meas": params.p_meas,
            "p_prep": params.p_prep, "theta": params.theta, "xi": params.xi,
        },
    }
    with open(out + ".meta.json", "w") as fh:
        json.dump(meta, fh, indent=2)
        fh.write("\n")

    print(f"wrote {len(records)} records to {out}")
    print(f"{'L':>6} {'scheme':>10} {'n':>4} {'mean D':>10} {'mean r':>8}")
    for row in summarize_records(records):
        print(f"{row['L']:>6} {row['scheme']:>10} {row['n']:>4} "
              f"{row['mean_D']:>10.4f} {row['mean_r']:>8.4f}")
    return 0


def cmd_predict(args: argparse.Namespace) -> int:
    cfg = load_config(args.config) if args.config else {}
    lengths = _resolve(args, cfg, "lengths", list(range(1, 101)))
    params = _noise_from(args, cfg)
    e1, e2, pm = params.eps1, params.eps2, params.p_meas

    lines = ["scheme,L,D_pred"]
    for L in lengths:
        lines.append(f"uncoded,{L},{predict_uncoded(L, e1, e2, pm)!r}")
    for L in lengths:
        lines.append(f"coded_raw,{L},{predict_coded_raw(L, e1, e2, pm)!r}")
    for L in lengths:
        lines.append(f"coded_ps,{L},{predict_coded_ps(L, e1, e2, pm)!r}")
    _write_text(args.out, "\n".join(lines) + "\n")

    crossover = None
    for L in lengths:
        if predict_coded_ps(L, e1, e2, pm) < predict_uncoded(L, e1, e2, pm):
            crossover = L
            break
    if crossover is None:
        print("no crossover: coded_ps never beats uncoded on these lengths")
    else:
        print(f"crossover: coded_ps beats uncoded from L = {crossover}")
    return 0


def cmd_verify_ft(args: argparse.Namespace) -> int:
    if (args.encoder is None) == (args.circuit is None):
        raise CircuitError("verify-ft needs exactly one of --encoder or --circuit")
    if args.encoder is not None:
        label = LogicalStateLabel(args.encoder)
        variant = EncoderVariant(args.variant)
        circuit = build_encoder(label, variant)
        circuit_id = f"{label.value}-{variant.value}"
        default_detection = ("postselect+ancilla"
                             if variant is EncoderVariant.ANCILLA_CHECKED else "postselect")
    else:
        with open(args.circuit) as fh:
            circuit = parse_circuit(fh.read())
        circuit_id = os.path.basename(args.circuit)
        default_detection = "postselect"
    detection = args.detection or default_detection

    report = verify_single_faults(circuit, detection, circuit_id,
                                  include_preparation=args.include_prep)
    if args.json:
        print(report.to_json())
    else:
        print(report.format_table())
    return 0


def cmd_sweep_theta(args: argparse.Namespace) -> int:
    cfg = load_config(args.config) if args.config else {}
    thetas = _resolve(args, cfg, "thetas",
                      [float(x) for x in np.linspace(0.0, np.pi, 9)])
    gate_set = GateSetId.from_str(_resolve(args, cfg, "gate_set", "single_hhswap"))
    length = _resolve(args, cfg, "length", 1)
    shots = _resolve(args, cfg, "shots", DEFAULT_SHOTS)
    master_seed = _resolve(args, cfg, "master_seed", 0)
    params = _noise_from(args, cfg)
    out = _out_path(_resolve(args, cfg, "out", "theta_sweep.csv"))

    records = sweep_theta(thetas, params, gate_set, length, shots, master_seed)
    write_records_csv(out, records)
    print(f"wrote {len(records)} records to {out}")
    print(f"{'theta':>10} {'r':>8} {'cos^2(theta/2)':>16}")
    for rec in records:
        if rec.scheme == "coded_ps":
            pred = float(np.cos(rec.theta / 2.0) ** 2)
            print(f"{rec.theta:>10.4f} {rec.r:>8.4f} {pred:>16.4f}")
    return 0


def cmd_bounds(args: argparse.Namespace) -> int:
    cases = [
        ("single string", {"00": 1.0}),
        ("two-string superposition", {"00": 0.5, "11": 0.5}),
        ("uniform", totally_mixed(4).probs),
    ]
    print("worst-case trace distance, 4-outcome read-out:")
    print(f"{'ideal output':>26} {'support':>8} {'bound':>7}")
    for name, probs in cases:
        print(f"{name:>26} {len(probs):>8} {worst_case_bound(probs):>7.4f}")

    # coded analog: codeword ideal vs uniform over the 8 retained strings
    ideal = codeword_distribution(LogicalStateLabel.L00)
    even = {s: p for s, p in totally_mixed(16).probs.items() if s.count("1") % 2 == 0}
    mixed_ps = {s: p / sum(even.values()) for s, p in even.items()}
    print("\ncoded, post-selected (16-outcome read-out, even-parity retained):")
    print(f"{'codeword vs mixed-retained':>26} {ideal.support_size:>8} "
          f"{trace_distance(ideal, mixed_ps):>7.4f}")
    return 0


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qec422",
        description="[4,2,2] code experiments: simulate, post-select, predict, verify",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_noise_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--eps1", type=float, help="one-qubit gate fault probability")
        p.add_argument("--eps2", type=float, help="two-qubit gate fault probability")
        p.add_argument("--p-meas", dest="p_meas", type=float, help="read-out flip probability")
        p.add_argument("--p-prep", dest="p_prep", type=float, help="preparation flip probability")
        p.add_argument("--theta", type=float, help="coherent rotation angle")
        p.add_argument("--xi", type=float, help="depolarizing mix toward uniform")

    p = sub.add_parser("emit-circuit", help="print an encoder or gate block as circuit text")
    p.add_argument("--encoder", choices=[l.value for l in LogicalStateLabel])
    p.add_argument("--variant", choices=[v.value for v in EncoderVariant],
                   default=EncoderVariant.NON_FAULT_TOLERANT.value)
    p.add_argument("--gate", choices=[g.value for g in LogicalGate])
    p.add_argument("--scheme", choices=["coded", "uncoded"], default="coded")
    p.add_argument("--out", help="write to file instead of stdout")
    p.set_defaults(func=cmd_emit_circuit)

    p = sub.add_parser("run", help="sweep sequence lengths, write records CSV")
    p.add_argument("--config", help="flat key = value config file")
    p.add_argument("--gate-set", dest="gate_set",
                   choices=[g.value for g in GateSetId])
    p.add_argument("--lengths", type=_int_list, help="comma-separated L values")
    p.add_argument("--seeds-per-length", dest="seeds_per_length", type=int)
    p.add_argument("--master-seed", dest="master_seed", type=int)
    p.add_argument("--shots", type=int)
    p.add_argument("--analytic-xi", dest="analytic_xi", action="store_const", const=True)
    p.add_argument("--jobs", type=int)
    p.add_argument("--out", help="CSV path (relative paths land in $%s)" % OUTPUT_DIR_ENV)
    add_noise_flags(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("predict", help="closed-form D predictions per scheme")
    p.add_argument("--config")
    p.add_argument("--lengths", type=_int_list)
    p.add_argument("--out", help="write CSV instead of stdout")
    add_noise_flags(p)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("verify-ft", help="exhaustive single-fault check")
    p.add_argument("--encoder", choices=[l.value for l in LogicalStateLabel])
    p.add_argument("--variant", choices=[v.value for v in EncoderVariant],
                   default=EncoderVariant.NON_FAULT_TOLERANT.value)
    p.add_argument("--circuit", help="circuit text file to check instead")
    p.add_argument("--detection", choices=["postselect", "postselect+ancilla"])
    p.add_argument("--include-prep", dest="include_prep", action="store_true",
                   help="also enumerate preparation X flips")
    p.add_argument("--json", action="store_true", help="machine-readable report")
    p.set_defaults(func=cmd_verify_ft)

    p = sub.add_parser("sweep-theta", help="coherent-rotation retention sweep")
    p.add_argument("--config")
    p.add_argument("--thetas", type=_float_list, help="comma-separated angles")
    p.add_argument("--gate-set", dest="gate_set", choices=[g.value for g in GateSetId])
    p.add_argument("--length", type=int)
    p.add_argument("--shots", type=int)
    p.add_argument("--master-seed", dest="master_seed", type=int)
    p.add_argument("--out")
    add_noise_flags(p)
    p.set_defaults(func=cmd_sweep_theta)

    p = sub.add_parser("bounds", help="worst-case trace-distance table")
    p.set_defaults(func=cmd_bounds)

    return parser


def _int_list(s: str) -> list[int]:
    return [int(x) for x in s.replace(",", " ").split()]


def _float_list(s: str) -> list[float]:
    return [float(x) for x in s.replace(",", " ").split()]


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CircuitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
