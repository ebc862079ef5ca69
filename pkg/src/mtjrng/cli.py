"""Command-line surface tying the pipeline stages together.

Every command is deterministic given its flags: rerunning with the same
seeds and configs produces byte-identical output files. Exit codes: 0 on
success, 1 on validation/calibration errors (including bad arguments),
2 on I/O or file-format errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .analysis import (
    EnergyModel,
    ThroughputModel,
    bias_and_autocorr,
    energy_per_bit,
    throughput,
    word_histogram,
)
from .bitstream import RawBitstream
from .conditioning import ToeplitzConfig, toeplitz_extract, xor3
from .device import calibrate_array, generate, load_array_config
from .errors import ConfigError, FormatError, MtjRngError, ValidationError
from .latent import LATENT_DIMS, build_latent_matrix, write_latent
from .nist import SuiteConfig, run_suite, write_csv
from .prng import DEFAULT_TAPS, lfsr32_stream, xoroshiro128p_stream

# Built-in array description used when --config is not given: 16 devices with
# spread midpoints, slow drift, weak read correlation, calibrated perturb.
DEFAULT_ARRAY_DOC = {
    "master_seed": 0,
    "cycle": {
        "v_reset": -0.45,
        "pulse_width": 5e-6,
        "v_th": 0.1,
        "cycle_hz": 1e5,
        "n_devices": 16,
    },
    "device_spread": {
        "v50_range": [0.35, 0.45],
        "slope_w": 0.02,
        "drift_sigma": 5e-6,
        "drift_reversion": 1e-5,
        "corr_rho": 0.02,
    },
    "v_perturb": "calibrated",
    "calibration": {"target_p": 0.5, "pulses_per_estimate": 1000},
}


class _Parser(argparse.ArgumentParser):
    """argparse reserves exit code 2 for usage errors; this CLI keeps 2 for
    I/O problems, so argument errors are remapped onto exit code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _load_json(path) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from exc
    if not isinstance(doc, dict):
        raise ConfigError(f"{path}: top level must be a JSON object")
    return doc


def _array_doc(args) -> dict:
    return _load_json(args.config) if args.config else dict(DEFAULT_ARRAY_DOC)


def _write_json(path, obj) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, sort_keys=False)
        fh.write("\n")


# ---------------------------------------------------------------------------
# Subcommand handlers
# ---------------------------------------------------------------------------

def _cmd_simulate(args) -> int:
    array, config = load_array_config(
        _array_doc(args), n_devices=args.devices, master_seed=args.seed
    )
    n_bits = args.bits if args.bits is not None else args.cycles * config.n_devices
    stream = generate(array, config, n_bits)
    stream.write(args.out)
    print(f"wrote {stream.n_bits} bits from {config.n_devices} devices to {args.out}")
    return 0


def _cmd_condition(args) -> int:
    stream = RawBitstream.read(args.infile)
    if args.scheme == "xor3":
        out = xor3(stream, grouping=args.grouping, stride=args.stride)
    else:
        if args.toeplitz_config is None:
            raise ValidationError("--toeplitz-config is required for --scheme toeplitz")
        cfg = ToeplitzConfig.from_json(args.toeplitz_config)
        out = toeplitz_extract(stream, cfg)
    out.write(args.out)
    print(f"{args.scheme}: {stream.n_bits} -> {out.n_bits} bits, wrote {args.out}")
    return 0


def _cmd_prng(args) -> int:
    if args.kind == "lfsr32":
        taps = DEFAULT_TAPS
        if args.taps:
            try:
                taps = tuple(int(t) for t in args.taps.split(","))
            except ValueError as exc:
                raise ValidationError(f"bad --taps value {args.taps!r}") from exc
        stream = lfsr32_stream(args.seed, args.bits, taps=taps)
    else:
        stream = xoroshiro128p_stream(args.seed, args.bits)
    stream.write(args.out)
    print(f"wrote {stream.n_bits} {args.kind} bits to {args.out}")
    return 0


def _cmd_calibrate(args) -> int:
    doc = _array_doc(args)
    doc["v_perturb"] = "v50"
    array, _config = load_array_config(
        doc, n_devices=args.devices, master_seed=args.seed
    )
    array = calibrate_array(
        array, target_p=args.target_p, pulses_per_estimate=args.pulses
    )
    print(f"calibrated {len(array.devices)} devices to p = {args.target_p}")
    for dev, volt in zip(array.devices, array.v_perturb):
        print(f"  device {dev.device_id:3d}: v50 = {dev.v50:.6f} V, "
              f"v_perturb = {volt:.6f} V")
    if args.json:
        _write_json(args.json, {
            "target_p": args.target_p,
            "master_seed": array.master_seed,
            "pulses_per_estimate": args.pulses,
            "v_perturb": [float(v) for v in array.v_perturb],
        })
    return 0


def _cmd_nist(args) -> int:
    cfg = SuiteConfig(sequence_length=args.length, n_sequences=args.sequences)
    reports = []
    for path in args.infiles:
        stream = RawBitstream.read(path)
        report = run_suite(stream, cfg)
        reports.append(report)
        for line in report.summary_lines():
            print(line)
    if args.json:
        _write_json(args.json, [r.to_dict() for r in reports])
    if args.csv:
        write_csv(reports, args.csv)
    return 0


def _parse_labels(spec: str, n_images: int) -> list:
    if spec == "cycle":
        return [(i % 10) + 1 for i in range(n_images)]
    try:
        labels = [int(tok) for tok in spec.split(",")]
    except ValueError as exc:
        raise ValidationError(f"bad --labels value {spec!r}") from exc
    if len(labels) != n_images:
        raise ValidationError(
            f"--labels lists {len(labels)} entries but --images is {n_images}"
        )
    return labels


def _cmd_latent(args) -> int:
    stream = RawBitstream.read(args.infile)
    labels = _parse_labels(args.labels, args.images)
    matrix = build_latent_matrix(stream, args.images, labels)
    write_latent(args.out, matrix)
    print(f"wrote {matrix.rows} x {LATENT_DIMS} latent matrix to {args.out}")
    return 0


def _cmd_analyze(args) -> int:
    stream = RawBitstream.read(args.infile)
    run_all = not (args.histogram or args.autocorr)
    out: dict = {"source": stream.source, "n_bits": stream.n_bits}
    if args.histogram or run_all:
        hist = word_histogram(stream, bins=args.bins)
        print(f"histogram: {hist.n_words} words, {args.bins} bins, "
              f"chi2 = {hist.chi_square:.3f}, p = {hist.p_value:.6g}")
        out["histogram"] = {
            "bins": args.bins,
            "counts": hist.counts.tolist(),
            "chi_square": hist.chi_square,
            "p_value": hist.p_value,
        }
    if args.autocorr or run_all:
        stats = bias_and_autocorr(stream, max_lag=args.max_lag)
        print(f"mean = {stats.mean:.6f}, bias = {stats.bias:+.6f}")
        print("autocorr[1..{}] = {}".format(
            args.max_lag, " ".join(f"{v:+.5f}" for v in stats.autocorr)
        ))
        out["bias"] = {
            "mean": stats.mean,
            "bias": stats.bias,
            "autocorr": stats.autocorr.tolist(),
        }
    if args.json:
        _write_json(args.json, out)
    return 0


def _cmd_model(args) -> int:
    if args.scheme == "raw":
        factor = 1.0
    elif args.scheme == "xor3":
        factor = 3.0
    else:
        factor = args.toeplitz_n / args.toeplitz_m
    model = ThroughputModel(
        n_cells=args.cells, cycle_hz=args.cycle_hz, conditioning_factor=factor
    )
    rate = throughput(model)
    energy = energy_per_bit(EnergyModel(), args.cells, args.cycle_hz, factor)
    print(f"cells                : {args.cells}")
    print(f"cycle rate           : {args.cycle_hz:g} Hz")
    print(f"conditioning         : {args.scheme} (factor {factor:g})")
    print(f"raw throughput       : {rate.raw_bps:.6g} bits/s")
    print(f"conditioned          : {rate.conditioned_bps:.6g} bits/s")
    print(f"energy per bit       : {energy.e_bit:.6g} J")
    print(f"CSPRNG ratio (high)  : {energy.csprng_ratio:.6g}")
    if args.json:
        _write_json(args.json, {
            "n_cells": args.cells,
            "cycle_hz": args.cycle_hz,
            "scheme": args.scheme,
            "conditioning_factor": factor,
            "raw_bps": rate.raw_bps,
            "conditioned_bps": rate.conditioned_bps,
            "e_bit_j": energy.e_bit,
            "csprng_ratio": energy.csprng_ratio,
            "csprng_ratio_range": list(energy.csprng_ratio_range),
        })
    return 0


# ---------------------------------------------------------------------------
# Parser assembly
# ---------------------------------------------------------------------------

def _build_parser() -> _Parser:
    parser = _Parser(
        prog="mtjrng",
        description="Simulated MTJ-array random-number pipeline: generation, "
                    "conditioning, statistical testing, latent emission.",
    )
    parser.add_argument("--version", action="version", version=f"mtjrng {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("simulate", help="run the array model and write an MTJB file")
    p.add_argument("--out", required=True, help="output MTJB path")
    p.add_argument("--config", help="array config JSON (built-in default otherwise)")
    p.add_argument("--devices", type=int, help="override device count")
    p.add_argument("--cycles", type=int, default=62500,
                   help="acquisition cycles (default 62500)")
    p.add_argument("--bits", type=int, help="total bits (overrides --cycles)")
    p.add_argument("--seed", type=int, help="override master seed")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("condition", help="apply XOR-3 or Toeplitz extraction")
    p.add_argument("--in", dest="infile", required=True, help="input MTJB path")
    p.add_argument("--out", required=True, help="output MTJB path")
    p.add_argument("--scheme", required=True, choices=("xor3", "toeplitz"))
    p.add_argument("--grouping", default="temporal",
                   choices=("temporal", "spatial-stride"))
    p.add_argument("--stride", type=int, help="stride for spatial grouping")
    p.add_argument("--toeplitz-config", help="ToeplitzConfig JSON path")
    p.set_defaults(func=_cmd_condition)

    p = sub.add_parser("prng", help="run a deterministic baseline generator")
    p.add_argument("--kind", required=True, choices=("lfsr32", "xoroshiro128p"))
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--bits", type=int, required=True)
    p.add_argument("--out", required=True, help="output MTJB path")
    p.add_argument("--taps", help="comma-separated LFSR taps (default 32,22,2,1)")
    p.set_defaults(func=_cmd_prng)

    p = sub.add_parser("calibrate", help="find per-device 50%% perturb voltages")
    p.add_argument("--config", help="array config JSON (built-in default otherwise)")
    p.add_argument("--target-p", type=float, default=0.5)
    p.add_argument("--pulses", type=int, default=1000,
                   help="pulses per probability estimate")
    p.add_argument("--devices", type=int, help="override device count")
    p.add_argument("--seed", type=int, help="override master seed")
    p.add_argument("--json", help="write calibrated voltages to this JSON path")
    p.set_defaults(func=_cmd_calibrate)

    p = sub.add_parser("nist", help="run the 15-test statistical suite")
    p.add_argument("--in", dest="infiles", action="append", required=True,
                   help="input MTJB path (repeatable; one column per file)")
    p.add_argument("--sequences", type=int, default=55)
    p.add_argument("--length", type=int, default=10**6)
    p.add_argument("--json", help="write full per-sequence report JSON")
    p.add_argument("--csv", help="write side-by-side summary CSV")
    p.set_defaults(func=_cmd_nist)

    p = sub.add_parser("latent", help="pack conditioned bits into latent vectors")
    p.add_argument("--in", dest="infile", required=True, help="input MTJB path")
    p.add_argument("--images", type=int, required=True)
    p.add_argument("--labels", default="cycle",
                   help="'cycle' or comma-separated class labels in 1..10")
    p.add_argument("--out", required=True, help="output LATF path")
    p.set_defaults(func=_cmd_latent)

    p = sub.add_parser("analyze", help="word histogram and bias/autocorrelation")
    p.add_argument("--in", dest="infile", required=True, help="input MTJB path")
    p.add_argument("--histogram", action="store_true")
    p.add_argument("--bins", type=int, default=256)
    p.add_argument("--autocorr", action="store_true")
    p.add_argument("--max-lag", type=int, default=8)
    p.add_argument("--json", help="write results to this JSON path")
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("model", help="throughput and energy scaling estimates")
    p.add_argument("--cells", type=int, required=True)
    p.add_argument("--cycle-hz", type=float, default=1e5)
    p.add_argument("--scheme", default="raw", choices=("raw", "xor3", "toeplitz"))
    p.add_argument("--toeplitz-n", type=int, default=8192)
    p.add_argument("--toeplitz-m", type=int, default=4096)
    p.add_argument("--json", help="write results to this JSON path")
    p.set_defaults(func=_cmd_model)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except FormatError as exc:
        print(f"mtjrng: format error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"mtjrng: i/o error: {exc}", file=sys.stderr)
        return 2
    except MtjRngError as exc:
        print(f"mtjrng: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
