"""Command-line surface for bank generation, validation, transforms,
packet tables and round-trip certification.

Exit codes: 0 success, 1 requested check failed, 2 bad input (malformed
file or invalid parameters), 3 internal limit reached. Every command is
deterministic given its arguments; random paths require an explicit seed.
All numeric output is printed with 17 significant digits so doubles
round-trip through text.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .filterbank import (
    canonical_bank,
    is_canonical,
    load_bank,
    random_biorthogonal,
    save_bank,
    validate,
)
from .gf import FieldTable
from .indexing import FieldParams
from .laurent import character_matrix
from .packets import packet_coeffs, packet_inner_product, packet_samples
from .serde import FileFormatError, dump_json, pairs_from_array
from .transform import (
    Signal,
    decompose,
    full_depth_coefficients,
    load_decomposition,
    load_signal,
    node_split_roundtrip,
    packet_level_range,
    reconstruct,
    save_decomposition,
    save_signal,
    weighted_energy,
)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_BAD_INPUT = 2
EXIT_LIMIT = 3

DEFAULT_TOL = 1e-10


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _parse_modulus(text):
    if text is None:
        return None
    try:
        return [int(part) for part in text.split(",") if part.strip() != ""]
    except ValueError as exc:
        raise ValueError(f"--modulus must be comma-separated integers: {text!r}") from exc


def _table(args) -> FieldTable:
    return FieldTable(FieldParams(args.p, args.c), _parse_modulus(args.modulus))


def cmd_gen(args) -> int:
    if args.type == "random" and args.seed is None:
        raise ValueError("--seed is required for --type random")
    table = _table(args)
    if args.type == "canonical":
        bank = canonical_bank(table)
    else:
        bank = random_biorthogonal(table, args.seed)
    save_bank(bank, args.out)
    report = validate(bank, DEFAULT_TOL)
    print(f"wrote {args.type} filter bank {table!r} to {args.out}")
    print(f"frequency-domain deviation: {_fmt(report.max_freq_deviation)}")
    print(f"time-domain deviation: {_fmt(report.max_time_deviation)}")
    return EXIT_OK


def cmd_validate(args) -> int:
    bank = load_bank(args.filters)
    report = validate(bank, args.tol)
    print(f"frequency-domain deviation: {_fmt(report.max_freq_deviation)}")
    print(f"time-domain deviation: {_fmt(report.max_time_deviation)}")
    print(f"lowpass normalized: {'yes' if report.lowpass_normalized else 'no'}")
    print(f"biorthogonality: {'PASS' if report.passed else 'FAIL'} (tol {_fmt(args.tol)})")
    if args.out:
        dump_json(args.out, {
            "kind": "validation report",
            "passed": report.passed,
            "max_freq_deviation": report.max_freq_deviation,
            "max_time_deviation": report.max_time_deviation,
            "lowpass_normalized": report.lowpass_normalized,
            "tol": args.tol,
            "details": report.details,
        })
    return EXIT_OK if report.passed else EXIT_CHECK_FAILED


def cmd_decompose(args) -> int:
    bank = load_bank(args.filters)
    sig = load_signal(args.signal)
    dec = decompose(bank, sig, args.mra_levels, args.packet_depth,
                    normalized=args.normalized)
    save_decomposition(dec, args.out)
    print(f"weighted energy before: {_fmt(weighted_energy(sig))}")
    print(f"weighted energy after: {_fmt(weighted_energy(dec))}")
    print(f"wrote decomposition ({dec.coefficient_count()} coefficients) to {args.out}")
    return EXIT_OK


def cmd_reconstruct(args) -> int:
    bank = load_bank(args.filters)
    dec = load_decomposition(args.coeffs)
    sig = reconstruct(bank, dec)
    save_signal(sig, args.out)
    print(f"wrote level-{sig.level} signal ({len(sig.coeffs)} coefficients) to {args.out}")
    if args.expect:
        want = load_signal(args.expect)
        if want.level != sig.level:
            raise ValueError(
                f"--expect signal has level {want.level}, reconstruction has {sig.level}"
            )
        dev = float(np.max(np.abs(sig.coeffs - want.coeffs))) if len(sig.coeffs) else 0.0
        print(f"max deviation from expected signal: {_fmt(dev)}")
        if dev > args.tol:
            return EXIT_CHECK_FAILED
    return EXIT_OK


def cmd_packet(args) -> int:
    bank = load_bank(args.filters)
    vec = packet_coeffs(bank, args.n, args.depth)
    doc = {"kind": "packet", "p": bank.table.params.p, "c": bank.table.params.c}
    if bank.table.modulus:
        doc["modulus"] = list(bank.table.modulus)
    doc.update(n=vec.n, depth=vec.depth, side=vec.side,
               coeffs=pairs_from_array(vec.coeffs))
    if args.samples:
        doc["samples"] = pairs_from_array(packet_samples(bank, args.n, args.depth))
    dump_json(args.out, doc)
    what = "coefficients and samples" if args.samples else "coefficients"
    print(f"wrote packet {args.n} depth-{args.depth} {what} to {args.out}")
    return EXIT_OK


def cmd_theta(args) -> int:
    block = packet_level_range(args.q, args.ell)
    print(f"theta(q={args.q}, ell={args.ell}) = {block.start}..{block.stop - 1} "
          f"(size {len(block)})")
    return EXIT_OK


def _certify_battery(bank, trials: int, max_level: int, seed: int, tol: float):
    params = bank.table.params
    q = params.q
    rng = np.random.default_rng(seed)
    results = []

    report = validate(bank, tol)
    results.append(("mask biorthogonality (frequency)", report.max_freq_deviation))
    results.append(("mask biorthogonality (time)", report.max_time_deviation))

    depth = 3
    worst = 0.0
    for n in range(q**2):
        for m in range(q**2):
            for k in range(q):
                got = packet_inner_product(bank, n, m, k, depth)
                want = 1.0 if (n == m and k == 0) else 0.0
                worst = max(worst, abs(got - want))
    results.append(("packet biorthogonality", worst))

    worst = 0.0
    for j in range(1, 4):
        for _ in range(trials):
            data = rng.standard_normal(q**j) + 1j * rng.standard_normal(q**j)
            worst = max(worst, node_split_roundtrip(bank, data))
    results.append(("node split round-trip", worst))

    level = 1
    while q ** (level + 1) <= 256 and level + 1 <= max_level:
        level += 1
    worst = 0.0
    for mra in range(level + 1):
        packet_depths = range(level - mra + 1) if mra else (0,)
        for r in packet_depths:
            for _ in range(trials):
                coeffs = rng.standard_normal(q**level) + 1j * rng.standard_normal(q**level)
                sig = Signal(bank.table, level, coeffs)
                back = reconstruct(bank, decompose(bank, sig, mra, r))
                worst = max(worst, float(np.max(np.abs(back.coeffs - coeffs))))
    results.append(("perfect reconstruction", worst))

    if is_canonical(bank):
        coeffs = rng.standard_normal(q**level) + 1j * rng.standard_normal(q**level)
        sig = Signal(bank.table, level, coeffs)
        got = full_depth_coefficients(bank, sig)
        mat = character_matrix(bank.table, level)
        rev = _digit_reversal_permutation(params, level)
        want = (mat @ coeffs)[rev] / q**level
        results.append(("canonical character transform",
                        float(np.max(np.abs(got - want)))))
    return results


def _digit_reversal_permutation(params, width: int) -> np.ndarray:
    from .indexing import digit_reverse_q

    return np.array(
        [digit_reverse_q(params, n, width) for n in range(params.q**width)]
    )


def cmd_certify(args) -> int:
    bank = load_bank(args.filters)
    results = _certify_battery(bank, args.trials, args.max_level, args.seed, args.tol)
    width = max(len(name) for name, _ in results)
    ok = True
    for name, dev in results:
        passed = dev <= args.tol
        ok = ok and passed
        print(f"{name:<{width}}  {_fmt(dev):<24} {'PASS' if passed else 'FAIL'}")
    print(f"certification: {'PASS' if ok else 'FAIL'} (tol {_fmt(args.tol)})")
    if args.out:
        dump_json(args.out, {
            "kind": "certification report",
            "passed": ok,
            "tol": args.tol,
            "properties": [{"name": n, "worst_deviation": d} for n, d in results],
        })
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lfwavelets",
        description="Biorthogonal wavelet packet filter banks on carry-free "
                    "q-adic index arithmetic.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a filter bank file")
    p.add_argument("--type", choices=("canonical", "random"), required=True)
    p.add_argument("--p", type=int, required=True, help="prime p")
    p.add_argument("--c", type=int, required=True, help="extension degree c")
    p.add_argument("--modulus", help="comma-separated modulus coefficients, low-to-high")
    p.add_argument("--seed", type=int, help="RNG seed (required for random banks)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("validate", help="check biorthogonality of a bank file")
    p.add_argument("filters")
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.add_argument("--out", help="optional JSON report path")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("decompose", help="multi-level analysis of a signal file")
    p.add_argument("--filters", required=True)
    p.add_argument("--signal", required=True)
    p.add_argument("--mra-levels", type=int, required=True)
    p.add_argument("--packet-depth", type=int, default=0)
    p.add_argument("--normalized", action="store_true",
                   help="store blocks in the orthonormalized convention")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("reconstruct", help="synthesis from a decomposition file")
    p.add_argument("--filters", required=True)
    p.add_argument("--coeffs", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--expect", help="signal file to compare against")
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("packet", help="tabulate one packet function")
    p.add_argument("--filters", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--samples", action="store_true",
                   help="also emit the sample table (canonical banks only)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_packet)

    p = sub.add_parser("theta", help="print one packet index block")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--ell", type=int, required=True)
    p.set_defaults(func=cmd_theta)

    p = sub.add_parser("certify", help="run the round-trip property battery")
    p.add_argument("--filters", required=True)
    p.add_argument("--trials", type=int, default=5)
    p.add_argument("--max-level", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.add_argument("--out", help="optional JSON report path")
    p.set_defaults(func=cmd_certify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse reports usage errors with code 2
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (FileFormatError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except RuntimeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_LIMIT


if __name__ == "__main__":
    sys.exit(main())
