"""Command-line interface.

    sawbound census -d 2 -N 12 -o census.saw
    sawbound mu census.saw
    sawbound bounds --phi zero -n 100 -o bounds.csv
    sawbound phi census.saw -o phi.csv
    sawbound verify census.saw --phi empirical -o report.json
    sawbound plot-data census.saw --bounds-out b.csv --phi-out p.csv

Exit status: 0 on success, 1 when ``verify`` finds a failing inequality,
2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .bounds import (BoundRow, PhiModel, fit_power_law, load_phi, phi_empirical,
                     quant_log_bound, save_phi, InsufficientDataError)
from .census import (Census, CensusFileError, DEFAULT_PREFIX_DEPTH, ResourceLimitError,
                     enumerate_census, load_census, save_census)
from .genfun import mu_bracket
from .verify import VerifyConfig, run_all

BOUND_FIELDS = ("n", "hw_log", "quant_log", "eps_classic", "eps_quant", "mu_high_used")
PHI_FIELDS = ("eps_num", "eps_den", "eps", "phi")


class UsageError(ValueError):
    pass


# --- CSV tables ---------------------------------------------------------------


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _opt_float(s: str) -> Optional[float]:
    return None if s == "" else float(s)


def bounds_csv(rows: Sequence[BoundRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(BOUND_FIELDS)
    for r in rows:
        w.writerow([_fmt(getattr(r, f)) for f in BOUND_FIELDS])
    return buf.getvalue()


def parse_bounds_csv(text: str) -> list[BoundRow]:
    out = []
    for rec in csv.DictReader(io.StringIO(text)):
        out.append(BoundRow(n=int(rec["n"]), hw_log=float(rec["hw_log"]),
                            quant_log=float(rec["quant_log"]),
                            eps_classic=_opt_float(rec["eps_classic"]),
                            eps_quant=float(rec["eps_quant"]),
                            mu_high_used=_opt_float(rec["mu_high_used"])))
    return out


def phi_csv(phi: PhiModel) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(PHI_FIELDS)
    for e, p in phi.breakpoints:
        w.writerow([e.numerator, e.denominator, repr(float(e)), repr(p)])
    return buf.getvalue()


def parse_phi_csv(text: str) -> PhiModel:
    pts = [(Fraction(int(rec["eps_num"]), int(rec["eps_den"])), float(rec["phi"]))
           for rec in csv.DictReader(io.StringIO(text))]
    return PhiModel.tabulated(pts)


def _emit(text: str, path: Optional[str]) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


# --- helpers ------------------------------------------------------------------


def parse_phi_spec(spec: str, census: Optional[Census] = None, n_min: int = 1) -> PhiModel:
    """``zero``, ``empirical``, ``power-law:C:NU`` or ``tabulated:PATH``."""
    kind, _, rest = spec.partition(":")
    if kind == "zero":
        return PhiModel.zero()
    if kind == "empirical":
        if census is None:
            raise UsageError("--phi empirical needs a census file")
        return phi_empirical(census, n_min)
    if kind in ("power-law", "power_law"):
        try:
            C, nu = (float(x) for x in rest.split(":"))
        except ValueError:
            raise UsageError("power-law rate must be given as power-law:C:NU") from None
        return PhiModel.power_law(C, nu)
    if kind == "tabulated":
        if not rest:
            raise UsageError("tabulated rate must be given as tabulated:PATH")
        if rest.endswith(".csv"):
            return parse_phi_csv(Path(rest).read_text(encoding="utf-8"))
        return load_phi(rest)
    raise UsageError(f"unknown rate specification {spec!r}")


def _floats(text: Optional[str]):
    if text is None:
        return None
    try:
        return tuple(Fraction(x.strip()) for x in text.split(",") if x.strip())
    except ValueError:
        raise UsageError(f"cannot parse number list {text!r}") from None


def _bound_ns(target: int, step: int) -> list[int]:
    if target < 0:
        raise UsageError("-n must be >= 0")
    if step < 1:
        raise UsageError("--step must be >= 1")
    ns = list(range(0, target + 1, step))
    if ns[-1] != target:
        ns.append(target)
    return ns


def _bound_rows(phi: PhiModel, ns, mu_high=None) -> list[BoundRow]:
    return [quant_log_bound(phi, n, mu_high) for n in ns]


# --- subcommands ----------------------------------------------------------------


def cmd_census(args) -> int:
    census = enumerate_census(args.dimension, args.max_length, workers=args.workers,
                              prefix_depth=args.prefix_depth)
    save_census(census, args.output)
    print(f"wrote {args.output}: d={census.d} N={census.N} c_N={census.c[-1]} b_N={census.b[-1]}")
    return 0


def cmd_mu(args) -> int:
    census = load_census(args.census)
    br = mu_bracket(census)
    print(f"d={census.d} N={census.N}")
    print(f"mu_low  = {br.mu_low!r}  (n={br.n_low})")
    print(f"mu_high = {br.mu_high!r}  (n={br.n_high})")
    return 0


def cmd_bounds(args) -> int:
    census = load_census(args.census) if args.census else None
    phi = parse_phi_spec(args.phi, census, args.phi_n_min)
    mu_high = mu_bracket(census).mu_high if census is not None and census.N >= 1 else None
    rows = _bound_rows(phi, _bound_ns(args.n, args.step), mu_high)
    _emit(bounds_csv(rows), args.output)
    return 0


def cmd_phi(args) -> int:
    census = load_census(args.census)
    phi = phi_empirical(census, args.n_min)
    _emit(phi_csv(phi), args.output)
    if args.model_out:
        save_phi(phi, args.model_out)
    if args.fit:
        try:
            fit = fit_power_law(phi)
        except InsufficientDataError as exc:
            print(f"power-law fit: {exc}", file=sys.stderr)
        else:
            print(f"power-law fit: C={fit.C:.6g} nu={fit.nu:.6g} residual={fit.residual:.3g} ({fit.note})",
                  file=sys.stderr)
    return 0


def cmd_verify(args) -> int:
    census = load_census(args.census)
    phi = parse_phi_spec(args.phi, census, args.phi_n_min)
    config = VerifyConfig(
        z_grid=_floats(args.z_grid),
        eps_grid=tuple(float(x) for x in _floats(args.eps_grid)) if args.eps_grid else VerifyConfig.eps_grid,
        pad_ulps=args.pad_ulps,
        recount=not args.no_recount,
        oracle_max_n=args.oracle_max_n,
        workers=args.workers,
        phi_n_min=args.phi_n_min,
    )
    report = run_all(census, phi, config)
    print(report.render_table())
    if args.output:
        report.save(args.output)
        print(f"wrote {args.output}")
    return 0 if report.ok else 1


def cmd_plot_data(args) -> int:
    census = load_census(args.census)
    phi = parse_phi_spec(args.phi, census, args.phi_n_min)
    emp = phi_empirical(census, args.phi_n_min)
    mu_high = mu_bracket(census).mu_high if census.N >= 1 else None
    rows = _bound_rows(phi, _bound_ns(args.n, args.step), mu_high)
    _emit(bounds_csv(rows), args.bounds_out)
    _emit(phi_csv(emp), args.phi_out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sawbound",
                                description="Self-avoiding walk census and bound verification.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("census", help="enumerate walks and bridges and write a census file")
    s.add_argument("-d", "--dimension", type=int, default=2)
    s.add_argument("-N", "--max-length", type=int, required=True)
    s.add_argument("-o", "--output", required=True)
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--prefix-depth", type=int, default=DEFAULT_PREFIX_DEPTH)
    s.set_defaults(func=cmd_census)

    s = sub.add_parser("mu", help="print the connective-constant bracket of a census")
    s.add_argument("census")
    s.set_defaults(func=cmd_mu)

    phi_help = "zero | empirical | power-law:C:NU | tabulated:PATH (.json model or .csv table)"

    s = sub.add_parser("bounds", help="CSV of classical and rate-based log-bounds for n = 0..N")
    s.add_argument("--phi", default="zero", help=phi_help)
    s.add_argument("-n", type=int, required=True, help="largest length")
    s.add_argument("--step", type=int, default=1)
    s.add_argument("--census", help="census file (for mu_high and --phi empirical)")
    s.add_argument("--phi-n-min", type=int, default=1)
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_bounds)

    s = sub.add_parser("phi", help="CSV of the empirical rate breakpoints")
    s.add_argument("census")
    s.add_argument("--n-min", type=int, default=1, help="ignore walks shorter than this")
    s.add_argument("-o", "--output")
    s.add_argument("--model-out", help="also write the rate as a JSON model")
    s.add_argument("--fit", action="store_true", help="report a least-squares power-law fit")
    s.set_defaults(func=cmd_phi)

    s = sub.add_parser("verify", help="run every inequality check; exit 1 on any failure")
    s.add_argument("census")
    s.add_argument("--phi", default="empirical", help=phi_help)
    s.add_argument("--phi-n-min", type=int, default=1)
    s.add_argument("-o", "--output", help="report file (JSON)")
    s.add_argument("--z-grid", help="comma-separated z values")
    s.add_argument("--eps-grid", help="comma-separated eps values")
    s.add_argument("--pad-ulps", type=int, default=2)
    s.add_argument("--no-recount", action="store_true", help="skip the re-enumeration check")
    s.add_argument("--oracle-max-n", type=int, default=6)
    s.add_argument("--workers", type=int, default=1)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("plot-data", help="CSV columns for plotting bounds and the empirical rate")
    s.add_argument("census")
    s.add_argument("--phi", default="empirical", help=phi_help)
    s.add_argument("--phi-n-min", type=int, default=1)
    s.add_argument("-n", type=int, default=1000)
    s.add_argument("--step", type=int, default=10)
    s.add_argument("--bounds-out", required=True)
    s.add_argument("--phi-out", required=True)
    s.set_defaults(func=cmd_plot_data)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (UsageError, CensusFileError, ResourceLimitError, ValueError, OSError) as exc:
        print(f"sawbound {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
