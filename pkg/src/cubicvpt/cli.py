"""Command-line front end.

Subcommands
-----------
series    exact energy coefficients eps_1..eps_K
veff      effective-potential polynomials or loop coefficients
vpt       variational resummation, plain or background variant
fit       exponential-convergence fit of a deviation table
plotdata  (N^(3/5), ln deviation) coordinates for external plotting

Exit codes: 0 success, 1 usage error, 2 computation failure, 3 partial
failure (some resummation orders failed, the rest were emitted).

Expensive recursions are cached as JSON under --cache-dir (or the
CUBICVPT_CACHE_DIR environment variable); exact rationals are stored as
decimal-string numerator/denominator pairs, never as floats.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
from fractions import Fraction
from math import log

from . import bender_wu, convergence, effective_potential, vpt
from .exact_algebra import BackgroundPoly, GaussRational
from .verification import B0_REFERENCE

ENV_CACHE_DIR = "CUBICVPT_CACHE_DIR"
FORMATS = ("pretty-table", "json", "csv")


class UsageError(Exception):
    pass


class ComputationError(Exception):
    pass


# ---------------------------------------------------------------------------
# cache
# ---------------------------------------------------------------------------


def _atomic_write_json(path: str, payload: dict) -> None:
    directory = os.path.dirname(path) or "."
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as handle:
            json.dump(payload, handle, separators=(",", ":"), sort_keys=True)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _frac_pair(value: Fraction) -> dict:
    return {"numerator": str(value.numerator), "denominator": str(value.denominator)}


def _frac_from_pair(obj: dict, num_key: str = "numerator", den_key: str = "denominator") -> Fraction:
    return Fraction(int(obj[num_key]), int(obj[den_key]))


def _gauss_entry(value: GaussRational) -> dict:
    return {
        "re_num": str(value.re.numerator),
        "re_den": str(value.re.denominator),
        "im_num": str(value.im.numerator),
        "im_den": str(value.im.denominator),
    }


def _gauss_from_entry(obj: dict) -> GaussRational:
    return GaussRational(
        Fraction(int(obj["re_num"]), int(obj["re_den"])),
        Fraction(int(obj["im_num"]), int(obj["im_den"])),
    )


def serialize_energy_state(order: int) -> dict:
    table, energy = bender_wu.ground_state_series(order)
    wave = []
    for k in range(1, order + 1):
        for m in range(1, k + 3):
            entry = _gauss_entry(table.coefficient(k, m))
            entry.update({"k": k, "m": m})
            wave.append(entry)
    return {
        "kind": "energy_series",
        "order": order,
        "eps": [
            dict(k=k, **_frac_pair(energy.real(k))) for k in range(1, order + 1)
        ],
        "wave": wave,
    }


def restore_energy_state(payload: dict) -> tuple:
    order = payload["order"]
    cells = {}
    for entry in payload["wave"]:
        cells[(entry["k"], entry["m"])] = _gauss_from_entry(entry)
    rows = tuple(
        tuple(cells[(k, m)] for m in range(1, k + 3)) for k in range(1, order + 1)
    )
    eps = tuple(
        GaussRational(_frac_from_pair(entry), Fraction(0)) for entry in payload["eps"]
    )
    table = bender_wu.WaveCorrectionTable(order, rows)
    energy = bender_wu.EnergyCoefficients(order, eps)
    return table, energy


def serialize_veff_state(order: int) -> dict:
    table, series = effective_potential.veff_series(order)
    wave = []
    for k in range(1, order + 1):
        for m in range(1, k + 3):
            poly = table.coefficient(k, m)
            for j in range(0, poly.degree + 1):
                coeff = poly.coefficient(j)
                if coeff.is_zero():
                    continue
                entry = _gauss_entry(coeff)
                entry.update({"k": k, "m": m, "j": j})
                wave.append(entry)
    potential = []
    for k in range(1, order + 1):
        poly = series.term(k)
        for j in range(0, poly.degree + 1):
            coeff = poly.coefficient(j)
            if coeff.is_zero():
                continue
            entry = _gauss_entry(coeff)
            entry.update({"k": k, "j": j})
            potential.append(entry)
    return {"kind": "veff_series", "order": order, "wave": wave, "potential": potential}


def restore_veff_state(payload: dict) -> tuple:
    order = payload["order"]
    wave_cells: dict[tuple[int, int], dict[int, GaussRational]] = {}
    for entry in payload["wave"]:
        wave_cells.setdefault((entry["k"], entry["m"]), {})[entry["j"]] = _gauss_from_entry(entry)
    pot_cells: dict[int, dict[int, GaussRational]] = {}
    for entry in payload["potential"]:
        pot_cells.setdefault(entry["k"], {})[entry["j"]] = _gauss_from_entry(entry)

    def poly(cells: dict[int, GaussRational] | None) -> BackgroundPoly:
        if not cells:
            return BackgroundPoly()
        top = max(cells)
        return BackgroundPoly.of(
            [cells.get(j, GaussRational()) for j in range(top + 1)]
        )

    rows = tuple(
        tuple(poly(wave_cells.get((k, m))) for m in range(1, k + 3))
        for k in range(1, order + 1)
    )
    terms = tuple(poly(pot_cells.get(k)) for k in range(1, order + 1))
    return (
        effective_potential.BackgroundWaveTable(order, rows),
        effective_potential.EffectivePotentialSeries(order, terms),
    )


class SeriesCache:
    """JSON-backed cache of the exact recursion state."""

    def __init__(self, directory: str | None):
        self.directory = directory

    def _path(self, name: str) -> str | None:
        if not self.directory:
            return None
        return os.path.join(self.directory, name)

    def load(self) -> None:
        for name, restore, preload in (
            ("energy_series.json", restore_energy_state, bender_wu.preload),
            ("veff_series.json", restore_veff_state, effective_potential.preload),
        ):
            path = self._path(name)
            if not path or not os.path.exists(path):
                continue
            try:
                with open(path) as handle:
                    payload = json.load(handle)
                preload(*restore(payload))
            except (ValueError, KeyError, OSError):
                continue  # stale or corrupt cache entries are recomputed

    def store_energy(self, order: int) -> None:
        path = self._path("energy_series.json")
        if path:
            _atomic_write_json(path, serialize_energy_state(order))

    def store_veff(self, order: int) -> None:
        path = self._path("veff_series.json")
        if path:
            _atomic_write_json(path, serialize_veff_state(order))


# ---------------------------------------------------------------------------
# output helpers
# ---------------------------------------------------------------------------


def _fmt_fraction(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def _fmt_float(value: float) -> str:
    return format(value, ".17g")


def _emit(text: str) -> None:
    sys.stdout.write(text)


def _csv_lines(header: list[str], rows: list[list[str]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_series(args: argparse.Namespace) -> int:
    if args.order < 1:
        raise UsageError(f"--order must be >= 1, got {args.order}")
    cache = SeriesCache(args.cache_dir)
    cache.load()
    _, energy = bender_wu.ground_state_series(args.order)
    cache.store_energy(max(args.order, bender_wu.computed_order()))
    eps = [(k, energy.real(k)) for k in range(1, args.order + 1)]
    if args.format == "json":
        payload = {
            "order": args.order,
            "eps": [dict(k=k, **_frac_pair(v)) for k, v in eps],
        }
        _emit(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    elif args.format == "csv":
        _emit(_csv_lines(["k", "eps"], [[str(k), _fmt_fraction(v)] for k, v in eps]))
    else:
        for k, v in eps:
            _emit(f"{k}  {_fmt_fraction(v)}\n")
    return 0


def cmd_veff(args: argparse.Namespace) -> int:
    if args.loops is None and args.order is None:
        raise UsageError("veff needs --loops or --order")
    if args.loops is not None and args.loops < 1:
        raise UsageError(f"--loops must be >= 1, got {args.loops}")
    if args.order is not None and args.order < 1:
        raise UsageError(f"--order must be >= 1, got {args.order}")
    cache = SeriesCache(args.cache_dir)
    cache.load()

    if args.loops is not None:
        expansion = effective_potential.loop_coefficients(args.loops)
        if args.loops >= 2:
            cache.store_veff(max(2 * (args.loops - 1), effective_potential.computed_order()))
        rows = [(l, expansion.coefficient(l)) for l in range(1, args.loops + 1)]
        template = "V^(l) = r_l * g^(2(l-1)) * wtilde^(1-5(l-1))"
        if args.format == "json":
            payload = {
                "template": template,
                "coefficients": [
                    dict(l=l, term=expansion.term_template(l), **_frac_pair(v))
                    for l, v in rows
                ],
            }
            _emit(json.dumps(payload, indent=2, sort_keys=True) + "\n")
        elif args.format == "csv":
            _emit(_csv_lines(["l", "r", "term"],
                             [[str(l), _fmt_fraction(v), expansion.term_template(l)]
                              for l, v in rows]))
        else:
            _emit(f"# {template}\n")
            for l, v in rows:
                _emit(f"{l}  {_fmt_fraction(v)}\n")
        return 0

    _, series = effective_potential.veff_series(args.order)
    cache.store_veff(max(args.order, effective_potential.computed_order()))
    entries = []
    for k in range(1, args.order + 1):
        poly = series.term(k)
        for j in range(0, poly.degree + 1):
            coeff = poly.coefficient(j)
            if coeff.is_zero():
                continue
            entries.append((k, j, coeff))
    if args.format == "json":
        payload = [
            {
                "k": k,
                "j": j,
                "re_num": str(c.re.numerator),
                "re_den": str(c.re.denominator),
                "im_num": str(c.im.numerator),
                "im_den": str(c.im.denominator),
            }
            for k, j, c in entries
        ]
        _emit(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    elif args.format == "csv":
        _emit(_csv_lines(
            ["k", "j", "re", "im"],
            [[str(k), str(j), _fmt_fraction(c.re), _fmt_fraction(c.im)] for k, j, c in entries],
        ))
    else:
        _emit("# coefficient of X^j in V_k\n")
        for k, j, c in entries:
            _emit(f"{k}  {j}  {c}\n")
    return 0


def cmd_vpt(args: argparse.Namespace) -> int:
    if args.max_order < 1:
        raise UsageError(f"--max-order must be >= 1, got {args.max_order}")
    cache = SeriesCache(args.cache_dir)
    cache.load()
    results: list[tuple[int, vpt.VptSolution | None, str | None]] = []
    for order in range(1, args.max_order + 1):
        try:
            if args.variant == "naive":
                bracket = args.bracket or (0.45, 16.0)
                solution = vpt.naive_b0(order, bracket=bracket)
            else:
                w_max = (args.bracket[1] ** 2) if args.bracket else 8.0
                solution = vpt.veff_b0(order, w_max=w_max, tol=args.tol)
            results.append((order, solution, None))
        except (vpt.NoPmsPointError, vpt.VeffSolverError) as exc:
            results.append((order, None, str(exc)))
    if args.variant == "naive":
        cache.store_energy(bender_wu.computed_order())
    else:
        if effective_potential.computed_order():
            cache.store_veff(effective_potential.computed_order())

    digits = args.digits
    if args.format == "json":
        payload = []
        for order, solution, error in results:
            if solution is None:
                payload.append({"variant": args.variant, "N": order, "failed": error})
            else:
                entry = solution.to_json_dict()
                entry["deviation"] = convergence.relative_deviation(
                    solution.b0_estimate, B0_REFERENCE
                )
                payload.append(entry)
        _emit(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    elif args.format == "csv":
        rows = []
        for order, solution, error in results:
            if solution is None:
                rows.append([str(order), "", "", "", "", f"failed: {error}"])
            else:
                dev = convergence.relative_deviation(solution.b0_estimate, B0_REFERENCE)
                rows.append([
                    str(order),
                    _fmt_float(solution.b0_estimate),
                    _fmt_float(dev),
                    _fmt_float(solution.omega_var),
                    "" if solution.background is None else _fmt_float(solution.background),
                    solution.criticality,
                ])
        _emit(_csv_lines(["N", "b0", "deviation", "omega_var", "y", "criticality"], rows))
    else:
        _emit(f"# variant={args.variant}, reference b0 = {B0_REFERENCE}\n")
        for order, solution, error in results:
            if solution is None:
                _emit(f"{order}  FAILED  {error}\n")
            else:
                dev = convergence.relative_deviation(solution.b0_estimate, B0_REFERENCE)
                y = "-" if solution.background is None else f"{solution.background:.{digits}f}"
                _emit(
                    f"{order}  {solution.b0_estimate:.{digits}f}  {dev:.3e}  "
                    f"{solution.omega_var:.{digits}f}  {y}  {solution.criticality}\n"
                )
    failed = sum(1 for _, solution, _ in results if solution is None)
    if failed == len(results):
        return 2
    return 3 if failed else 0


def _read_deviation_table(path: str) -> list[tuple[float, float]]:
    try:
        handle = open(path, newline="")
    except OSError as exc:
        raise ComputationError(f"cannot open {path}: {exc}") from exc
    points = []
    with handle:
        reader = csv.reader(handle)
        header = None
        for lineno, row in enumerate(reader, start=1):
            if not row or all(not cell.strip() for cell in row):
                continue
            if header is None:
                header = [cell.strip().lower() for cell in row]
                if "n" not in header:
                    raise UsageError(f"{path}: line {lineno}: missing column 'N'")
                if "deviation" not in header and "b0" not in header:
                    raise UsageError(
                        f"{path}: line {lineno}: need a 'deviation' or 'b0' column"
                    )
                continue
            record = dict(zip(header, row))
            try:
                n = float(record["n"])
                if record.get("deviation", "").strip():
                    dev = float(record["deviation"])
                else:
                    dev = convergence.relative_deviation(float(record["b0"]), B0_REFERENCE)
            except (KeyError, ValueError) as exc:
                raise UsageError(f"{path}: line {lineno}: malformed row {row!r}: {exc}") from exc
            points.append((n, dev))
    if header is None:
        raise UsageError(f"{path}: empty input")
    return points


def cmd_fit(args: argparse.Namespace) -> int:
    points = _read_deviation_table(args.input)
    try:
        fit = convergence.fit_convergence(points)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _emit(json.dumps(fit.to_json_dict(), indent=2, sort_keys=True) + "\n")
    return 0


def cmd_plotdata(args: argparse.Namespace) -> int:
    points = _read_deviation_table(args.input)
    rows = []
    for n, dev in points:
        if dev <= 0:
            raise UsageError(f"deviation must be positive, got {dev} at N={n}")
        rows.append([_fmt_float(n**0.6), _fmt_float(log(dev))])
    _emit(_csv_lines(["regressor", "ln_deviation"], rows))
    return 0


# ---------------------------------------------------------------------------
# parser and entry point
# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # exit code 1 on usage errors
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        sys.exit(1)


def _parse_bracket(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(part) for part in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected 'lo,hi', got {text!r}") from exc
    if not lo < hi:
        raise argparse.ArgumentTypeError(f"need lo < hi, got {text!r}")
    return lo, hi


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cubicvpt", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--format", choices=FORMATS, default="pretty-table")
        p.add_argument(
            "--cache-dir",
            default=os.environ.get(ENV_CACHE_DIR),
            help="directory for the exact-series JSON cache "
            f"(default: ${ENV_CACHE_DIR} if set)",
        )

    p_series = sub.add_parser("series", help="exact energy coefficients")
    p_series.add_argument("--order", "-k", type=int, required=True)
    add_common(p_series)
    p_series.set_defaults(func=cmd_series)

    p_veff = sub.add_parser("veff", help="effective-potential data")
    p_veff.add_argument("--order", "-k", type=int, default=None,
                        help="emit V_k polynomials up to this coupling order")
    p_veff.add_argument("--loops", "-l", type=int, default=None,
                        help="emit loop coefficients r_1..r_L")
    add_common(p_veff)
    p_veff.set_defaults(func=cmd_veff)

    p_vpt = sub.add_parser("vpt", help="variational resummation")
    p_vpt.add_argument("--variant", choices=("naive", "veff"), required=True)
    p_vpt.add_argument("--max-order", type=int, required=True)
    p_vpt.add_argument("--tol", type=float, default=1e-10)
    p_vpt.add_argument("--bracket", type=_parse_bracket, default=None,
                       help="variational-parameter search interval 'lo,hi'")
    p_vpt.add_argument("--digits", type=int, default=9,
                       help="decimal places in pretty-table floats")
    add_common(p_vpt)
    p_vpt.set_defaults(func=cmd_vpt)

    p_fit = sub.add_parser("fit", help="exponential-convergence fit")
    p_fit.add_argument("input", help="CSV with columns N and deviation (or b0)")
    p_fit.set_defaults(func=cmd_fit)

    p_plot = sub.add_parser("plotdata", help="fit-plot coordinates")
    p_plot.add_argument("input", help="CSV with columns N and deviation (or b0)")
    p_plot.set_defaults(func=cmd_plotdata)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"cubicvpt: error: {exc}\n")
        return 1
    except ComputationError as exc:
        sys.stderr.write(f"cubicvpt: failure: {exc}\n")
        return 2
    except (vpt.NoPmsPointError, vpt.VeffSolverError) as exc:
        sys.stderr.write(f"cubicvpt: failure: {exc}\n")
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
