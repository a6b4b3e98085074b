"""Command line entry point ``symtoep``.

    symtoep run --config experiment.toml
    symtoep suite
    symtoep coeffs --symbol example3 --degree 4,4

Exit codes: 0 success, 1 configuration error, 2 matrix too large for the
dense path, 3 numerical failure (including a failed suite criterion).
"""

from __future__ import annotations

import argparse
import logging
import sys
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import acceptance, catalog
from .distribution import (
    DomainError,
    NotSeparableError,
    SpectrumReport,
    functional_discrepancy,
    match_sorted,
    orthant_grid,
    sample,
    theta_grid,
    xi_grid,
)
from .multiindex import InvalidDimensionError, as_dims
from .spectra import NumericalError, eig_sym, singular_values
from .symbol import (
    NonRealCoefficientsError,
    SeparableSymbol,
    StencilFormatError,
    StencilSymbol,
    format_stencil,
    read_stencil,
    stencil_of,
)
from .toeplitz import DEFAULT_MAX_DENSE, DenseSizeError, symmetrize

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

log = logging.getLogger("symtoep")

EXIT_CONFIG, EXIT_SIZE, EXIT_NUMERIC = 1, 2, 3
CSV_HEADER = "index,eigenvalue,symbol_sample,abs_err"
SUMMARY_HEADER = "mean_abs_err,max_abs_err,wasserstein1,outlier_count,functional_discrepancy"

MODES = ("psi", "phi", "h", "sigma")
GRIDS = {"xi": xi_grid, "theta": theta_grid, "orthant": orthant_grid}
# grids whose points lie in each mode's domain
ALLOWED_GRIDS = {
    "psi": ("xi", "orthant"),
    "sigma": ("xi", "orthant"),
    "phi": ("orthant",),
    "h": ("theta", "xi", "orthant"),
}


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    n: tuple
    symbol: str | None = None
    stencil_file: str | None = None
    factor_files: tuple | None = None
    mode: str = "psi"
    grid: str = "xi"
    output: str = "spectrum.csv"
    summary: str | None = None
    fine_samples: int = 512
    outlier_threshold: float | None = None  # None: 10x the run's mean error
    degree: tuple | None = None  # truncation degree for non-polynomial symbols
    max_dense: int = DEFAULT_MAX_DENSE

    @classmethod
    def from_toml(cls, path) -> "ExperimentConfig":
        try:
            with open(path, "rb") as fh:
                raw = tomllib.load(fh)
        except (OSError, tomllib.TOMLDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        return cls.from_dict(raw, base=Path(path).parent)

    @classmethod
    def from_dict(cls, raw: dict, base: Path | None = None) -> "ExperimentConfig":
        raw = dict(raw)
        known = set(cls.__dataclass_fields__)
        unknown = set(raw) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        if "n" not in raw:
            raise ConfigError("config needs n")
        threshold = raw.get("outlier_threshold", "auto")
        raw["outlier_threshold"] = None if threshold == "auto" else float(threshold)

        def resolve(p):
            return str(base / p) if base is not None and not Path(p).is_absolute() else p

        for key in ("stencil_file", "output", "summary"):
            if raw.get(key) is not None:
                raw[key] = resolve(raw[key])
        if raw.get("factor_files") is not None:
            raw["factor_files"] = tuple(resolve(p) for p in raw["factor_files"])
        try:
            raw["n"] = as_dims(raw["n"])
        except (InvalidDimensionError, TypeError) as exc:
            raise ConfigError(str(exc)) from None
        if raw.get("degree") is not None:
            raw["degree"] = tuple(int(v) for v in raw["degree"])
        cfg = cls(**raw)
        cfg.validate()
        return cfg

    def validate(self):
        sources = [self.symbol is not None, self.stencil_file is not None, self.factor_files is not None]
        if sum(sources) != 1:
            raise ConfigError("give exactly one of symbol, stencil_file, factor_files")
        if self.symbol is not None and self.symbol not in catalog.BUILTINS:
            raise ConfigError(f"unknown symbol {self.symbol!r}")
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}")
        if self.grid not in ALLOWED_GRIDS[self.mode]:
            raise ConfigError(f"mode {self.mode!r} needs grid in {ALLOWED_GRIDS[self.mode]}")
        if self.grid in ("xi", "orthant") and self.n[0] % 2:
            raise ConfigError(f"grid {self.grid!r} needs even n1")
        if self.grid == "xi" and len(self.n) != 2:
            raise ConfigError("grid 'xi' is defined for two levels only")
        if self.mode == "h" and self.stencil_file is not None:
            raise ConfigError("mode 'h' needs a separable symbol")
        if self.fine_samples < 2:
            raise ConfigError("fine_samples must be >= 2")

    def load_symbol(self):
        if self.symbol is not None:
            return catalog.builtin(self.symbol)
        if self.stencil_file is not None:
            sym = StencilSymbol(read_stencil(self.stencil_file))
        else:
            sym = SeparableSymbol(tuple(StencilSymbol(read_stencil(p)) for p in self.factor_files))
        if sym.k != len(self.n):
            raise ConfigError(f"symbol has {sym.k} levels but n = {self.n}")
        return sym

    def symbol_for_run(self):
        sym = self.load_symbol()
        if self.mode == "h" and not isinstance(sym, SeparableSymbol):
            raise ConfigError("mode 'h' needs a separable symbol")
        return sym


def _matrix_stencil(sym, cfg: ExperimentConfig):
    if isinstance(sym, StencilSymbol) or (
        isinstance(sym, SeparableSymbol) and all(isinstance(f, StencilSymbol) for f in sym.factors)
    ):
        return stencil_of(sym) if cfg.degree is None else stencil_of(sym, cfg.degree)
    return stencil_of(sym, cfg.degree if cfg.degree is not None else catalog.full_degree(cfg.n))


def run_experiment(cfg: ExperimentConfig) -> SpectrumReport:
    """Build Y_n T_n[f], take its spectrum, compare with the symbol, write CSVs."""
    sym = cfg.symbol_for_run()
    A = symmetrize(_matrix_stencil(sym, cfg), cfg.n, cfg.max_dense)
    sigma = cfg.mode == "sigma"
    values = singular_values(A).values if sigma else eig_sym(A).values
    which = "psi" if sigma else cfg.mode
    samples = sample(sym, which, GRIDS[cfg.grid](cfg.n))
    if sigma:
        samples = np.abs(samples)
    report = match_sorted(values, samples, cfg.outlier_threshold)
    disc = functional_discrepancy(values, sym, which, fine_samples=cfg.fine_samples, absolute=sigma)
    report = SpectrumReport(**{**report.__dict__, "functional_discrepancy": disc})
    write_report_csv(report, cfg.output)
    write_summary_csv(report, cfg.summary or summary_path(cfg.output))
    return report


def summary_path(output) -> str:
    p = Path(output)
    return str(p.with_name(p.stem + "_summary.csv"))


def write_report_csv(report: SpectrumReport, path) -> None:
    lines = [CSV_HEADER]
    for i, (lam, s, e) in enumerate(zip(report.eigenvalues, report.samples, report.per_index_abs_err), 1):
        lines.append(f"{i},{lam:.17g},{s:.17g},{e:.17g}")
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def write_summary_csv(report: SpectrumReport, path) -> None:
    fd = report.functional_discrepancy
    row = (
        f"{report.mean_abs_err:.17g},{report.max_abs_err:.17g},{report.wasserstein1:.17g},"
        f"{report.outlier_count},{'' if fd is None else format(fd, '.17g')}"
    )
    with open(path, "w", newline="\n") as fh:
        fh.write(SUMMARY_HEADER + "\n" + row + "\n")


def run_suite(max_dense: int = DEFAULT_MAX_DENSE, out=sys.stdout) -> int:
    """Run every acceptance criterion, print a table, return the exit code."""
    start = time.perf_counter()
    code = 0
    rows = []

    def record(label, fn, *args):
        nonlocal code
        try:
            ok, detail = fn(*args)
        except DenseSizeError as exc:
            ok, detail, err = False, str(exc), EXIT_SIZE
        except (NumericalError, np.linalg.LinAlgError) as exc:
            ok, detail, err = False, str(exc), EXIT_NUMERIC
        else:
            err = EXIT_NUMERIC
        if not ok and code == 0:
            code = err
        rows.append((label, ok, detail))
        print(f"{'PASS' if ok else 'FAIL'}  {label:32s} {detail}", file=out, flush=True)

    for label, fn, sized in acceptance.CRITERIA:
        record(label, fn, *((max_dense,) if sized else ()))
    record("10 end-to-end runtime", acceptance.criterion_runtime, time.perf_counter() - start)
    passed = sum(ok for _, ok, _ in rows)
    print(f"{passed}/{len(rows)} criteria passed", file=out)
    return code


def _parse_degree(text: str) -> tuple:
    try:
        return tuple(int(v) for v in text.split(","))
    except ValueError:
        raise ConfigError(f"bad degree {text!r}") from None


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="symtoep", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", help="run one experiment from a TOML config")
    p_run.add_argument("--config", required=True)
    p_suite = sub.add_parser("suite", help="run all acceptance criteria")
    p_suite.add_argument("--max-dense", type=int, default=DEFAULT_MAX_DENSE)
    p_coeffs = sub.add_parser("coeffs", help="print a built-in symbol's stencil")
    p_coeffs.add_argument("--symbol", required=True)
    p_coeffs.add_argument("--degree", default=None, help="comma separated, e.g. 4,4")
    p_coeffs.add_argument("--quadrature", action="store_true", help="use quadrature, not exact formulas")
    p_coeffs.add_argument("--samples", type=int, default=None)
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")

    try:
        if args.command == "run":
            cfg = ExperimentConfig.from_toml(args.config)
            rep = run_experiment(cfg)
            print(
                f"N={len(rep.eigenvalues)} mean_abs_err={rep.mean_abs_err:.6g} max_abs_err={rep.max_abs_err:.6g} "
                f"outliers={rep.outlier_count} functional_discrepancy={rep.functional_discrepancy:.6g}"
            )
            return 0
        if args.command == "suite":
            return run_suite(args.max_dense)
        if args.command == "coeffs":
            if args.symbol not in catalog.BUILTINS:
                raise ConfigError(f"unknown symbol {args.symbol!r}")
            if args.symbol == "example3" and (args.quadrature or args.samples):
                sym = SeparableSymbol(
                    tuple(catalog.theta_squared(samples=args.samples, exact=False) for _ in range(2))
                )
            else:
                sym = catalog.builtin(args.symbol)
            degree = _parse_degree(args.degree) if args.degree else None
            sys.stdout.write(format_stencil(stencil_of(sym, degree)))
            return 0
    except (ConfigError, StencilFormatError, InvalidDimensionError, DomainError, NotSeparableError,
            FileNotFoundError, KeyError) as exc:
        log.error("configuration error: %s", exc)
        return EXIT_CONFIG
    except DenseSizeError as exc:
        log.error("size error: %s", exc)
        return EXIT_SIZE
    except (NumericalError, NonRealCoefficientsError, np.linalg.LinAlgError) as exc:
        log.error("numerical error: %s", exc)
        return EXIT_NUMERIC
    return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
