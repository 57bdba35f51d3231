"""Command-line front end: solve, verify, profile, scan, noise.

Output is machine-parsable and reproducible: every run echoes its resolved
configuration (defaults included) as ``#`` comment lines, data sections
carry no timestamps, and a fixed seed yields byte-identical output.
Angles are read and written in units of pi to match the published tables;
``--radians`` switches both directions.  The detuning option is always a
plain detuning-area (delta * T) in radians, since it is not a table angle.

Exit codes: 0 success, 1 verification failure, 2 usage error,
3 numerical failure.
"""

import argparse
import csv
import io
import os
import sys
from datetime import datetime, timezone

import numpy as np

from . import __version__, profiles
from .catalog import export_text, find_entry, load_catalog, verify_entry
from .conditions import SequenceSpec, PHASE_VARIANTS, residuals
from .solver import SolveOptions, solve

PI = np.pi

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3


class UsageError(Exception):
    pass


class NumericalError(Exception):
    pass


def _fraction(token: str) -> float:
    if "/" in token:
        num, den = token.split("/", 1)
        return float(num) / float(den)
    return float(token)


def _parse_spec(text: str, radians: bool) -> SequenceSpec:
    """Parse inline 'N=7,A=3/7,target=1/2,n1=2' (angles in pi units)."""
    unit = 1.0 if radians else PI
    fields = {}
    try:
        for item in text.split(","):
            key, value = item.split("=", 1)
            fields[key.strip()] = value.strip()
        return SequenceSpec(
            pulse_count=int(fields.pop("N")),
            nominal_area=_fraction(fields.pop("A")) * unit,
            target_area=_fraction(fields.pop("target")) * unit,
            target_phase=(
                _fraction(fields.pop("phase")) * unit if "phase" in fields else None
            ),
            n1=int(fields.pop("n1", 0)),
            n2=int(fields.pop("n2", 0)),
            n3=int(fields.pop("n3", 0)),
            **{k: fields[k] for k in fields},  # unknown keys -> TypeError
        )
    except UsageError:
        raise
    except Exception as exc:
        raise UsageError(f"malformed spec {text!r}: {exc}") from exc


def _parse_phases(text: str, radians: bool) -> np.ndarray:
    unit = 1.0 if radians else PI
    try:
        return np.array([_fraction(tok) * unit for tok in text.split(",") if tok.strip()])
    except ValueError as exc:
        raise UsageError(f"malformed phases {text!r}: {exc}") from exc


def _resolve_sequence(args):
    """(label, spec, phases) from --name or --spec/--phases."""
    if args.name and args.spec:
        raise UsageError("give either --name or --spec, not both")
    if args.name:
        try:
            entry = find_entry(args.name)
        except KeyError as exc:
            raise UsageError(str(exc.args[0])) from exc
        return entry.name, entry.spec, entry.phases_rad
    if args.spec:
        spec = _parse_spec(args.spec, args.radians)
        phases = (
            _parse_phases(args.phases, args.radians)
            if getattr(args, "phases", None)
            else np.zeros(spec.n)
        )
        if phases.shape != (spec.n,):
            raise UsageError(f"spec needs {spec.n} phases, got {len(phases)}")
        return "inline", spec, phases
    raise UsageError("one of --name or --spec is required")


def _angle_out(values, radians: bool):
    return np.asarray(values) if radians else np.asarray(values) / PI


def _header(args, label, extra=()):
    unit = "rad" if args.radians else "pi"
    lines = [
        f"# compulse {__version__}",
        f"# command = {args.command}",
        f"# sequence = {label}",
        f"# angle-units = {unit}",
    ]
    for key, value in extra:
        lines.append(f"# {key} = {value}")
    if getattr(args, "timestamp", False):
        lines.append(f"# generated = {datetime.now(timezone.utc).isoformat()}")
    return lines


def _emit(args, header_lines, column_names, rows):
    buf = io.StringIO()
    for line in header_lines:
        buf.write(line + "\n")
    if args.format == "csv":
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(column_names)
        for row in rows:
            writer.writerow([f"{v:.12g}" if isinstance(v, float) else v for v in row])
    else:
        buf.write("  ".join(column_names) + "\n")
        for row in rows:
            buf.write("  ".join(f"{v:.12g}" if isinstance(v, float) else str(v) for v in row))
            buf.write("\n")
    _write_out(args.out, buf.getvalue())


def _write_out(path, text):
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {path!r}: {exc}") from exc


def _cmd_solve(args):
    label, spec, _ = _resolve_sequence(args)
    options = SolveOptions(max_starts=args.starts, rng_seed=args.seed)
    solutions = solve(spec, options, phase_variant=args.phase_variant, threads=args.threads)
    if spec.n and not solutions:
        raise NumericalError("no solutions found; raise --starts or loosen the spec")
    header = _header(
        args,
        label,
        [
            ("starts", args.starts),
            ("seed", args.seed),
            ("phase-variant", args.phase_variant),
            ("threads", args.threads),
            ("solutions", len(solutions)),
        ],
    )
    cols = ["residual_norm", "jacobian_rank"] + [f"phi_{k+2}" for k in range(spec.n)]
    rows = [
        [s.residual_norm, s.jacobian_rank] + [float(x) for x in _angle_out(s.phases, args.radians)]
        for s in solutions
    ]
    _emit(args, header, cols, rows)
    return EXIT_OK


def _cmd_verify(args):
    if args.name:
        try:
            entries = [find_entry(args.name)]
        except KeyError as exc:
            raise UsageError(str(exc.args[0])) from exc
    else:
        entries = load_catalog()
    header = _header(args, "catalog" if not args.name else entries[0].name,
                     [("entries", len(entries)), ("phase-variant", "per-entry")])
    reports = [verify_entry(e) for e in entries]
    if args.format == "csv":
        cols = [
            "status", "name", "residual_norm", "refined_norm", "max_drift",
            "jacobian_rank", "phase_variant", "claims_checked", "claims_passed",
        ]
        rows = [
            [
                "PASS" if r.passed else "FAIL",
                r.entry.name,
                r.residual_norm,
                r.refined_norm,
                float(_angle_out(r.max_drift, args.radians)),
                r.jacobian_rank,
                r.phase_variant,
                len(r.claim_results),
                sum(c.passed for c in r.claim_results),
            ]
            for r in reports
        ]
        _emit(args, header, cols, rows)
    else:
        unit = "rad" if args.radians else "pi"
        buf = [*header]
        for r in reports:
            claims = ""
            if r.claim_results:
                done = sum(c.passed for c in r.claim_results)
                claims = f"  claims {done}/{len(r.claim_results)}"
            drift = float(_angle_out(r.max_drift, args.radians))
            buf.append(
                f"{'PASS' if r.passed else 'FAIL'} {r.entry.name:22s}"
                f" residual {r.residual_norm:.3e}  refined {r.refined_norm:.3e}"
                f"  drift {drift:.2e} {unit}{claims}"
            )
        _write_out(args.out, "\n".join(buf) + "\n")
    return EXIT_OK if all(r.passed for r in reports) else EXIT_VERIFY


def _cmd_profile(args):
    label, spec, phases = _resolve_sequence(args)
    offsets = np.linspace(0.0, 3.0, args.grid)
    p = profiles.excitation_probability(spec, phases, profiles.beam_scaling(offsets))
    p0 = float(np.sin(spec.target_area / 2.0) ** 2)
    header = _header(args, label, [("grid", args.grid), ("threshold", args.threshold), ("p0", f"{p0:.12g}")])
    rows = [[float(r), float(pi_), float(p0 - pi_)] for r, pi_ in zip(offsets, p)]
    _emit(args, header, ["offset_over_fwhm", "p", "p0_minus_p"], rows)
    return EXIT_OK


def _cmd_scan(args):
    label, spec, phases = _resolve_sequence(args)
    if spec.target_phase is None:
        raise UsageError("scan requires a spec with a target phase")
    scales = np.linspace(0.8, 1.2, args.grid)
    resonant = profiles.phase_deviation_scan(spec, phases, scales)
    cols = ["area_deviation", "phase_deviation"]
    data = [resonant.ordinate]
    if args.detuning:
        detuned = profiles.phase_deviation_scan(spec, phases, scales, detuning_area=args.detuning)
        cols.append("phase_deviation_detuned")
        data.append(detuned.ordinate)
    header = _header(args, label, [("grid", args.grid), ("detuning", args.detuning)])
    rows = []
    for i, x in enumerate(resonant.abscissa):
        row = [float(x)]
        for col in data:
            row.append(float(_angle_out(col[i], args.radians)))
        rows.append(row)
    _emit(args, header, cols, rows)
    return EXIT_OK


def _cmd_noise(args):
    label, spec, phases = _resolve_sequence(args)
    if spec.target_phase is None:
        raise UsageError("noise requires a spec with a target phase")
    stats = profiles.noise_phase_error(spec, phases, args.amplitude, args.trials, args.seed)
    header = _header(
        args,
        label,
        [("amplitude", args.amplitude), ("trials", args.trials), ("seed", args.seed)],
    )
    rows = [
        ["rms", float(_angle_out(stats.rms, args.radians))],
        ["max", float(_angle_out(stats.max, args.radians))],
        ["mean", float(_angle_out(stats.mean, args.radians))],
    ]
    _emit(args, header, ["statistic", "phase_error"], rows)
    return EXIT_OK


def _cmd_export(args):
    _write_out(args.out, export_text())
    return EXIT_OK


def _add_common(sub, name, **kwargs):
    p = sub.add_parser(name, **kwargs)
    p.add_argument("--name", help="catalog entry name, e.g. 'N5(pi)'")
    p.add_argument("--spec", help="inline spec 'N=7,A=3/7,target=1/2,n1=2[,phase=3/2,n2=0,n3=0]'")
    p.add_argument("--phases", help="free phases for --spec, comma-separated (e.g. '0.471,1.196,1.315')")
    p.add_argument("--out", help="output path (default stdout)")
    p.add_argument("--format", choices=["csv", "text"], default="csv")
    p.add_argument("--radians", action="store_true", help="angles in radians instead of pi units")
    p.add_argument("--timestamp", action="store_true", help="add a generation timestamp header")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="compulse",
        description="Design and analyze composite pulse sequences for qubit addressing.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = _add_common(sub, "solve", help="multistart root search for a condition system")
    p.add_argument("--starts", type=int, default=200, help="random starts (default 200)")
    p.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1,
                   help="worker threads (1 = serial; result is thread-count independent)")
    p.add_argument("--phase-variant", choices=list(PHASE_VARIANTS), default="arg-derivative")

    p = _add_common(sub, "verify", help="re-derive the published tables and their claims")
    p.set_defaults(format="text")

    p = _add_common(sub, "profile", help="excitation probability versus beam offset")
    p.add_argument("--grid", type=int, default=2001, help="scan points (default 2001)")
    p.add_argument("--threshold", type=float, default=1e-4,
                   help="benchmark used in reports (default 1e-4)")

    p = _add_common(sub, "scan", help="phase deviation versus pulse-area deviation")
    p.add_argument("--grid", type=int, default=2001)
    p.add_argument("--detuning", type=float, default=0.0,
                   help="per-pulse detuning-area (radians); adds a detuned column")

    p = _add_common(sub, "noise", help="Monte-Carlo phase error under area noise")
    p.add_argument("--amplitude", type=float, default=0.05, help="relative noise (default 0.05)")
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("export", help="dump the catalog in the canonical text format")
    p.add_argument("--out", help="output path (default stdout)")

    return parser


_COMMANDS = {
    "solve": _cmd_solve,
    "verify": _cmd_verify,
    "profile": _cmd_profile,
    "scan": _cmd_scan,
    "noise": _cmd_noise,
    "export": _cmd_export,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 on --help/--version
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
