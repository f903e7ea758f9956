"""Командная строка: python -m gauss_eof <command> ...

Результаты печатаются в stdout, диагностика в stderr.
Коды выхода: 0 успех, 1 неверный ввод, 2 численная ошибка, 3 ввод-вывод.
"""
import argparse
import csv
import io
import logging
import sys
from dataclasses import asdict

from pydantic import BaseModel

from gauss_eof import config
from gauss_eof.eof import conjecture_check, eof_bounds, eof_exact, eof_oracle
from gauss_eof.ensemble import SweepConfig, conjecture_sweep, run_sweep
from gauss_eof.errors import GaussEofError, OutputError
from gauss_eof.schemas import (
    BoundsRead,
    ConjectureRead,
    ConjectureSweepRead,
    EnsembleRecordRead,
    EofRead,
    OracleRead,
    SweepSummaryRead,
    check_state,
    load_state,
)

logger = logging.getLogger("gauss_eof.cli")


def _flatten(data, prefix: str = "") -> dict:
    flat = {}
    if isinstance(data, dict):
        for key, value in data.items():
            flat.update(_flatten(value, f"{prefix}{key}_"))
    elif isinstance(data, list):
        for i, value in enumerate(data):
            flat.update(_flatten(value, f"{prefix}{i}_"))
    else:
        flat[prefix.rstrip("_")] = "" if data is None else (format(data, ".12g") if isinstance(data, float) else data)
    return flat


def _rows_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(rows[0].keys()), lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow(row)
    return buf.getvalue()


def _emit(model: BaseModel, fmt: str) -> None:
    if fmt == "json":
        sys.stdout.write(model.model_dump_json(indent=2) + "\n")
    else:
        sys.stdout.write(_rows_csv([_flatten(model.model_dump())]))


# --- команды -------------------------------------------------------------------


def cmd_check(args) -> int:
    _emit(check_state(load_state(args.state)), args.format)
    return 0


def cmd_bounds(args) -> int:
    sf = load_state(args.state).to_standard_form()
    _emit(BoundsRead.model_validate(eof_bounds(sf)), args.format)
    return 0


def cmd_exact(args) -> int:
    sf = load_state(args.state).to_standard_form()
    result = eof_exact(sf, grid_points=args.grid_points, tol_r=args.tol_r)
    _emit(EofRead.model_validate(result), args.format)
    return 0


def cmd_oracle(args) -> int:
    sf = load_state(args.state).to_standard_form()
    oracle = eof_oracle(sf, n_r=args.n_r, n_local=args.n_local, range_local=args.range_local)
    exact = eof_exact(sf).exact
    _emit(OracleRead(oracle=oracle, exact=exact, gap=oracle - exact), args.format)
    return 0


def cmd_conjecture(args) -> int:
    if args.state:
        sf = load_state(args.state).to_standard_form()
        _emit(ConjectureRead.model_validate(conjecture_check(sf, grid_points=args.grid_points)), args.format)
        return 0
    summary = conjecture_sweep(args.n, seed=args.seed, s_max=args.s_max, grid_points=args.grid_points)
    read = ConjectureSweepRead(**asdict(summary), tight_fraction=summary.tight / summary.n_states)
    _emit(read, args.format)
    return 0


def cmd_sweep(args) -> int:
    cfg = SweepConfig(
        n_states=args.n,
        s_max=args.s_max,
        seed=args.seed,
        min_purity=args.min_purity,
        output_path=args.out,
        bins=args.bins,
        plot_path=args.plot_data,
        grid_points=args.grid_points,
    )
    records, summary = run_sweep(cfg)
    if args.format == "json":
        read = SweepSummaryRead.model_validate(summary)
        if args.records:
            read.records = [EnsembleRecordRead.model_validate(rec.row()) for rec in records]
        _emit(read, "json")
    elif args.out:
        bins = [_flatten(asdict(b)) for b in summary.bins]
        sys.stdout.write(_rows_csv(bins))
    else:
        # без --out записи идут в stdout
        sys.stdout.write(_rows_csv([rec.row() for rec in records]))
    return 0


# --- разбор аргументов -----------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gauss-eof",
        description="Entanglement of formation of two-mode Gaussian states",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  python -m gauss_eof check states/mixed.json
  python -m gauss_eof bounds states/tmsv.json
  python -m gauss_eof exact states/mixed.json --format csv
  python -m gauss_eof sweep --n 500 --seed 7 --out results/sweep.csv
        """,
    )
    parser.add_argument("--log-level", default=config.LOG_LEVEL,
                        help="Logging level for stderr diagnostics (default: %(default)s)")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_state(name: str, help_text: str, optional: bool = False) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        if optional:
            p.add_argument("state", nargs="?", default=None, help="Path to a state JSON file")
        else:
            p.add_argument("state", help="Path to a state JSON file")
        p.add_argument("--format", choices=["json", "csv"], default="json")
        return p

    p = with_state("check", "Physicality, classicality, separability and spectra")
    p.set_defaults(func=cmd_check)

    p = with_state("bounds", "Analytical lower and upper EoF bounds")
    p.set_defaults(func=cmd_bounds)

    p = with_state("exact", "Exact EoF by one-parameter minimization")
    p.add_argument("--grid-points", type=int, default=None, help="Coarse grid size (default: GAUSS_EOF_GRID_POINTS)")
    p.add_argument("--tol-r", type=float, default=None, help="Bracket tolerance (default: GAUSS_EOF_TOL_R)")
    p.set_defaults(func=cmd_exact)

    p = with_state("oracle", "Brute-force EoF over rotation-free pure states")
    p.add_argument("--n-r", type=int, default=400)
    p.add_argument("--n-local", type=int, default=120)
    p.add_argument("--range-local", type=float, default=2.5)
    p.set_defaults(func=cmd_oracle)

    p = with_state("conjecture", "Upper-bound tightness diagnostic for the beta = -1 family", optional=True)
    p.add_argument("--n", type=int, default=100, help="Random states when no state file is given")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--s-max", type=float, default=5.0)
    p.add_argument("--grid-points", type=int, default=None)
    p.set_defaults(func=cmd_conjecture)

    p = sub.add_parser("sweep", help="Random entangled ensemble: bound quality versus purity")
    p.add_argument("--n", type=int, default=500, help="Number of states (default: 500)")
    p.add_argument("--seed", type=int, default=42, help="Master seed (default: 42)")
    p.add_argument("--s-max", type=float, default=5.0)
    p.add_argument("--min-purity", type=float, default=0.0)
    p.add_argument("--bins", type=int, default=20)
    p.add_argument("--grid-points", type=int, default=None)
    p.add_argument("--out", default=None, help="CSV file for the records")
    p.add_argument("--plot-data", default=None, help="Whitespace columns: mu delta_minus_pct delta_plus_pct")
    p.add_argument("--records", action="store_true", help="Include records in JSON output")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, str(args.log_level).upper(), logging.WARNING),
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except GaussEofError as exc:
        logger.debug("command failed", exc_info=True)
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return OutputError.exit_code
