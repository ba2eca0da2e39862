"""Command-line front end for the polymer endpoint library.

Every command builds an OutputEnvelope and writes it as CSV or JSON to
stdout (or to --out). Logging goes to stderr.
"""

from __future__ import annotations

import argparse
import logging
import re
import sys
from collections.abc import Callable, Sequence
from dataclasses import asdict, dataclass
from typing import Any

import numpy as np

from . import __version__
from .config import LppConfig, NumericsConfig, validated
from .const import (
    DEFAULT_BETA,
    DEFAULT_T_MAX,
    ENDPOINT_T_LIMIT,
    EXIT_NOT_CONVERGED,
    EXIT_OK,
    EXIT_SELFTEST_FAILED,
    EXIT_USAGE,
    FIT_MIN_RECORDS,
    FORMAT_CSV,
    FORMAT_JSON,
    MARGINAL_LEVEL,
    MARGINAL_TOL,
    SCHEMA_VERSION,
    SELFTEST_FULL,
    SELFTEST_QUICK,
    STATIONARITY_SHIFT,
    STATIONARITY_TOL,
)
from .exceptions import (
    CalibrationError,
    ConfigurationError,
    FitError,
    NumericalDomainError,
)
from .fredholm import DetResult
from .helpers.grid import parse_grid_string
from .helpers.output import EnvelopeWriter, OutputEnvelope, rows_from_records
from .lpp import ks_distance, simulate, write_samples_csv
from .polymer_dist import (
    decorrelation_table,
    endpoint_cdf,
    endpoint_density_table,
    endpoint_moments,
    endpoint_tail_record,
    f_gue,
    joint_density_table,
    joint_sup_point_cdf,
    tracy_widom_table,
    two_time_cdf,
)
from .routes import ROUTE_MATRIX, ROUTE_SCALAR, MatrixRoute
from .selftest import SelfTestRunner
from .tails import fit_decay, fit_upper_constant
from .validation import (
    SCHEMA_ENDPOINT,
    SCHEMA_OUTPUT,
    SCHEMA_SELFTEST,
    SCHEMA_TW,
    SCHEMA_TWOTIME,
)

_LOGGER = logging.getLogger(__name__)

NOT_CONVERGED_WARNING = "some values did not converge to the requested tolerance"
NEGATIVE_VALUE_PATTERN = r"^-\.?\d[\d.:eE+-]*$"


@dataclass
class CommandResult:
    """Envelope of a command and the exit code it maps to."""

    envelope: OutputEnvelope
    exit_code: int = EXIT_OK


def _numerics_echo(cfg: NumericsConfig) -> dict[str, Any]:
    """Config echo without the thread count, so output bytes do not depend on it."""
    echo = cfg.as_dict()
    echo.pop("threads", None)
    return echo


def _finish(
    command: str,
    echo: dict[str, Any],
    rows: list[dict[str, Any]],
    converged: bool,
    warnings: list[str] | None = None,
) -> CommandResult:
    notes = list(warnings or [])
    if not converged:
        notes.append(NOT_CONVERGED_WARNING)
        _LOGGER.warning("%s: %s", command, NOT_CONVERGED_WARNING)
    envelope = OutputEnvelope(
        command=command,
        config_echo=echo,
        rows=rows,
        warnings=notes,
        schema_version=SCHEMA_VERSION,
    )
    return CommandResult(envelope, EXIT_OK if converged else EXIT_NOT_CONVERGED)


def _grid(spec: str) -> list[float]:
    try:
        return [float(v) for v in parse_grid_string(spec).values()]
    except ValueError as err:
        raise ConfigurationError(str(err)) from err


def cmd_tw(args: argparse.Namespace, cfg: NumericsConfig) -> CommandResult:
    """Tracy-Widom GUE or GOE distribution on a grid."""
    params = validated(SCHEMA_TW, {"kind": args.kind, "grid": args.grid}, "tw")
    points = _grid(params["grid"])
    results = tracy_widom_table(params["kind"], points, cfg)
    rows = [
        {
            "x": x,
            "F": r.value,
            "converged": r.converged,
            "delta": r.delta,
            "n": r.n_fine,
        }
        for x, r in zip(points, results, strict=True)
    ]
    echo = {**_numerics_echo(cfg), **params}
    converged = all(r.converged for r in results)
    return _finish(f"tw {params['kind']}", echo, rows, converged)


def _endpoint_density(params: dict[str, Any], cfg: NumericsConfig) -> CommandResult:
    nodes = _grid(params["grid"])
    table = endpoint_density_table(nodes, cfg)
    rows = [
        {"t": float(t), "f_end": float(f), "converged": bool(c), "delta": float(d)}
        for t, f, c, d in zip(
            table.t_nodes, table.values, table.converged, table.deltas, strict=True
        )
    ]
    return _finish(
        "endpoint density",
        {**_numerics_echo(cfg), "grid": params["grid"]},
        rows,
        table.publishable,
    )


def _endpoint_tail(params: dict[str, Any], cfg: NumericsConfig) -> CommandResult:
    t_values = params["t"] if params["t"] is not None else _grid(params["grid"])
    records = [endpoint_tail_record(t, cfg) for t in t_values]
    rows = []
    for record in records:
        row = asdict(record)
        row["within_lower"] = record.within_lower
        rows.append(row)
    warnings = []
    positive = [r for r in records if r.t > 0.0]
    if len(positive) >= FIT_MIN_RECORDS:
        try:
            fit = fit_decay(positive)
            constant = fit_upper_constant(positive)
        except FitError as err:
            warnings.append(f"decay fit skipped: {err}")
        else:
            _LOGGER.info("Tail fit: %s, upper constant %.4g", fit, constant)
            for row in rows:
                row["fit_cubic"] = fit.cubic_coeff
                row["fit_upper_constant"] = constant
    echo = {**_numerics_echo(cfg), "t": list(t_values)}
    converged = all(r.converged for r in records)
    return _finish("endpoint tail", echo, rows, converged, warnings)


def _endpoint_moments(params: dict[str, Any], cfg: NumericsConfig) -> CommandResult:
    t_max = params["t_max"] if params["t_max"] is not None else DEFAULT_T_MAX
    report = endpoint_moments(cfg, t_max=t_max)
    return _finish(
        "endpoint moments",
        {**_numerics_echo(cfg), "t_max": t_max},
        [asdict(report)],
        report.converged,
    )


def _endpoint_joint(params: dict[str, Any], cfg: NumericsConfig) -> CommandResult:
    t_nodes = _grid(params["grid"])
    m_nodes = _grid(params["m_grid"])
    table = joint_density_table(t_nodes, m_nodes, cfg, route=params["route"])
    assert table.m_nodes is not None
    rows = [
        {
            "t": float(t),
            "m": float(m),
            "f": float(table.values[i, j]),
            "converged": bool(table.converged[i, j]),
            "delta": float(table.deltas[i, j]),
        }
        for i, t in enumerate(table.t_nodes)
        for j, m in enumerate(table.m_nodes)
    ]
    echo = {
        **_numerics_echo(cfg),
        "grid": params["grid"],
        "m_grid": params["m_grid"],
        "route": params["route"],
    }
    return _finish("endpoint joint", echo, rows, table.publishable)


ENDPOINT_HANDLERS: dict[
    str, Callable[[dict[str, Any], NumericsConfig], CommandResult]
] = {
    "density": _endpoint_density,
    "tail": _endpoint_tail,
    "moments": _endpoint_moments,
    "joint": _endpoint_joint,
}


def cmd_endpoint(args: argparse.Namespace, cfg: NumericsConfig) -> CommandResult:
    """Endpoint density, tail records, moments or the joint density of (T, M)."""
    data: dict[str, Any] = {
        "sub": args.sub,
        "route": args.route,
        "t": args.t,
        "t_max": args.t_max,
    }
    if args.grid is not None:
        data["grid"] = args.grid
    if args.m_grid is not None:
        data["m_grid"] = args.m_grid
    params = validated(SCHEMA_ENDPOINT, data, "endpoint")
    return ENDPOINT_HANDLERS[params["sub"]](params, cfg)


def _twotime_sup(params: dict[str, Any], cfg: NumericsConfig) -> CommandResult:
    t, s, a, b = params["t"], params["s"], params["a"], params["b"]
    routes = (
        [ROUTE_SCALAR, ROUTE_MATRIX] if params["route"] == "both" else [params["route"]]
    )
    row: dict[str, Any] = {"t": t, "s": s, "a": a, "b": b}
    converged = True
    values = {}
    for route in routes:
        result = joint_sup_point_cdf(t, s, a, b, cfg, route=route)
        values[route] = result.value
        row[route] = result.value
        row[f"{route}_delta"] = result.delta
        converged = converged and result.converged
    if len(values) == 2:
        row["discrepancy"] = abs(values[ROUTE_SCALAR] - values[ROUTE_MATRIX])
    warnings = []
    if ROUTE_MATRIX in values:
        if MatrixRoute.supports(t, a):
            row["coupling_bound"] = MatrixRoute().coupling_bound(t, s, a, b, cfg)
        else:
            warnings.append("matrix route needs a >= 3 t^2; scalar value reported")
    row["converged"] = converged
    echo = {**_numerics_echo(cfg), "mode": "sup", "route": params["route"]}
    return _finish("twotime sup", echo, [row], converged, warnings)


def _twotime_extended(params: dict[str, Any], cfg: NumericsConfig) -> CommandResult:
    t0, x0, t1, x1 = params["t0"], params["x0"], params["t1"], params["x1"]
    result = two_time_cdf(t0, x0, t1, x1, cfg)
    shift = STATIONARITY_SHIFT
    shifted = two_time_cdf(t0 + shift, x0, t1 + shift, x1, cfg)
    marginal = two_time_cdf(t0, MARGINAL_LEVEL, t1, x1, cfg)
    gue = f_gue(x1, cfg)
    checks: list[tuple[str, tuple[float, ...], DetResult, float | None, float | None]]
    checks = [
        ("value", (t0, x0, t1, x1), result, None, None),
        (
            "stationarity",
            (t0 + shift, x0, t1 + shift, x1),
            shifted,
            result.value,
            STATIONARITY_TOL,
        ),
        ("marginal", (t0, MARGINAL_LEVEL, t1, x1), marginal, gue.value, MARGINAL_TOL),
    ]
    rows = []
    warnings = []
    for name, (r_t0, r_x0, r_t1, r_x1), det_result, reference, tol in checks:
        discrepancy = None
        if reference is not None:
            discrepancy = abs(det_result.value - reference)
            if tol is not None and discrepancy > tol:
                warnings.append(f"{name} check off by {discrepancy:.3e} > {tol:g}")
        rows.append(
            {
                "check": name,
                "t0": r_t0,
                "x0": r_x0,
                "t1": r_t1,
                "x1": r_x1,
                "F": det_result.value,
                "reference": reference,
                "discrepancy": discrepancy,
                "converged": det_result.converged,
                "delta": det_result.delta,
            }
        )
    converged = all(r.converged for r in (result, shifted, marginal, gue))
    echo = {**_numerics_echo(cfg), "mode": "extended"}
    return _finish("twotime extended", echo, rows, converged, warnings)


def _twotime_decorrelation(
    params: dict[str, Any], cfg: NumericsConfig
) -> CommandResult:
    beta = params["beta"] if params["beta"] is not None else DEFAULT_BETA
    route = ROUTE_SCALAR if params["route"] == "both" else params["route"]
    table = decorrelation_table(params["t"], cfg, beta=beta, route=route)
    warnings = []
    if any(abs(r.ratio_minus_one) < 1e-15 for r in table):
        warnings.append("ratio - 1 is at double precision; lower beta to resolve it")
    echo = {
        **_numerics_echo(cfg),
        "mode": "decorrelation",
        "t": params["t"],
        "beta": beta,
        "route": route,
    }
    return _finish(
        "twotime decorrelation",
        echo,
        rows_from_records(table),
        all(r.converged for r in table),
        warnings,
    )


TWOTIME_HANDLERS: dict[
    str, Callable[[dict[str, Any], NumericsConfig], CommandResult]
] = {
    "sup": _twotime_sup,
    "extended": _twotime_extended,
    "decorrelation": _twotime_decorrelation,
}


def cmd_twotime(args: argparse.Namespace, cfg: NumericsConfig) -> CommandResult:
    """Two-time laws: sup/point, extended-kernel pair, decorrelation table."""
    data = {
        key: getattr(args, key)
        for key in ("mode", "route", "t", "s", "a", "b", "beta", "t0", "x0", "t1", "x1")
        if getattr(args, key) is not None
    }
    params = validated(SCHEMA_TWOTIME, data, "twotime")
    return TWOTIME_HANDLERS[params["mode"]](params, cfg)


def cmd_lpp(args: argparse.Namespace, cfg: NumericsConfig) -> CommandResult:
    """Simulate point-to-line LPP endpoints and compare with the model law."""
    data = {
        key: getattr(args, key)
        for key in ("n_steps", "q", "samples", "seed", "scale", "target_variance")
        if getattr(args, key) is not None
    }
    lpp_cfg = LppConfig.from_dict(data)
    dist = simulate(lpp_cfg, threads=cfg.threads)
    if args.samples_out is not None:
        write_samples_csv(dist, args.samples_out)
    row: dict[str, Any] = {
        "n_steps": lpp_cfg.n_steps,
        "q": lpp_cfg.q,
        "samples": dist.samples,
        "seed": lpp_cfg.seed,
        "scale_used": dist.scale_used,
        "variance": float(np.var(dist.rescaled, ddof=1)) if dist.samples > 1 else 0.0,
    }
    converged = True
    if not args.no_ks:
        model = endpoint_cdf(cfg, ENDPOINT_T_LIMIT)
        row["ks_distance"] = ks_distance(dist, model)
        converged = model.converged
    echo = {**_numerics_echo(cfg), **lpp_cfg.as_dict()}
    return _finish("lpp", echo, [row], converged)


def cmd_selftest(args: argparse.Namespace, cfg: NumericsConfig) -> CommandResult:
    """Run the quick or full invariant suite."""
    params = validated(SCHEMA_SELFTEST, {"level": args.level}, "selftest")
    results = SelfTestRunner(cfg).run(params["level"])
    failed = [r.name for r in results if not r.passed]
    envelope = OutputEnvelope(
        command=f"selftest {params['level']}",
        config_echo={**_numerics_echo(cfg), "level": params["level"]},
        rows=rows_from_records(results),
        warnings=[f"failed: {name}" for name in failed],
        schema_version=SCHEMA_VERSION,
    )
    return CommandResult(envelope, EXIT_SELFTEST_FAILED if failed else EXIT_OK)


class _ArgumentParser(argparse.ArgumentParser):
    """Parser that reads "-2:2:5" and "-1e-3" as values, not options."""

    def __init__(self, *args: Any, **kwargs: Any) -> None:
        super().__init__(*args, **kwargs)
        self._negative_number_matcher = re.compile(NEGATIVE_VALUE_PATTERN)


def _common_parser() -> argparse.ArgumentParser:
    common = _ArgumentParser(add_help=False)
    common.add_argument(
        "--format", choices=[FORMAT_CSV, FORMAT_JSON], default=FORMAT_CSV
    )
    common.add_argument("--out", default=None, help="write the envelope to this file")
    common.add_argument("--threads", type=int, default=None)
    common.add_argument("-v", "--verbose", action="count", default=0)
    common.add_argument("--quad-n", dest="quad_n", type=int, default=None)
    common.add_argument("--tol", type=float, default=None)
    common.add_argument("--trunc-pad", dest="trunc_pad", type=float, default=None)
    common.add_argument(
        "--m-window", dest="m_window", type=float, nargs=2, default=None
    )
    return common


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subcommand per command."""
    common = _common_parser()
    parser = _ArgumentParser(
        prog="polymer-endpoint",
        description="Fredholm determinant numerics for the Airy2 endpoint law.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    commands = parser.add_subparsers(dest="command", required=True)

    tw = commands.add_parser("tw", parents=[common], help="Tracy-Widom CDFs")
    tw.add_argument("kind", choices=["gue", "goe"])
    tw.add_argument("--grid", required=True, help="lo:hi:count")
    tw.set_defaults(handler=cmd_tw)

    endpoint = commands.add_parser(
        "endpoint", parents=[common], help="endpoint law of the polymer"
    )
    endpoint.add_argument("sub", choices=sorted(ENDPOINT_HANDLERS))
    endpoint.add_argument("--grid", default=None, help="t grid, lo:hi:count")
    endpoint.add_argument("--m-grid", dest="m_grid", default=None)
    endpoint.add_argument("--t", type=float, nargs="+", default=None)
    endpoint.add_argument("--t-max", dest="t_max", type=float, default=None)
    endpoint.add_argument(
        "--route", choices=["trace", "det_difference"], default="trace"
    )
    endpoint.set_defaults(handler=cmd_endpoint)

    twotime = commands.add_parser(
        "twotime", parents=[common], help="two-time laws of A2"
    )
    twotime.add_argument("mode", choices=sorted(TWOTIME_HANDLERS))
    twotime.add_argument("--route", choices=["scalar", "matrix", "both"], default=None)
    for name in ("t", "s", "a", "b", "beta", "t0", "x0", "t1", "x1"):
        twotime.add_argument(f"--{name}", type=float, default=None)
    twotime.set_defaults(handler=cmd_twotime)

    lpp = commands.add_parser(
        "lpp", parents=[common], help="geometric last passage percolation"
    )
    lpp.add_argument("--n-steps", dest="n_steps", type=int, default=None)
    lpp.add_argument("--q", type=float, default=None)
    lpp.add_argument("--samples", type=int, default=None)
    lpp.add_argument("--seed", type=int, default=None)
    lpp.add_argument("--scale", default=None, help='"auto" or a positive number')
    lpp.add_argument(
        "--target-variance", dest="target_variance", type=float, default=None
    )
    lpp.add_argument("--samples-out", dest="samples_out", default=None)
    lpp.add_argument("--no-ks", dest="no_ks", action="store_true")
    lpp.set_defaults(handler=cmd_lpp)

    selftest = commands.add_parser(
        "selftest", parents=[common], help="run invariant checks"
    )
    selftest.add_argument(
        "level",
        nargs="?",
        choices=[SELFTEST_QUICK, SELFTEST_FULL],
        default=SELFTEST_QUICK,
    )
    selftest.set_defaults(handler=cmd_selftest)
    return parser


def _configure_logging(verbosity: int) -> None:
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity >= 2:
        level = logging.DEBUG
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


def _numerics_config(args: argparse.Namespace) -> NumericsConfig:
    overrides = {
        key: getattr(args, key)
        for key in ("quad_n", "tol", "trunc_pad", "m_window", "threads")
        if getattr(args, key) is not None
    }
    return NumericsConfig.from_dict(overrides)


def main(argv: Sequence[str] | None = None) -> int:
    """Run the command line; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return int(err.code) if isinstance(err.code, int) else EXIT_USAGE
    _configure_logging(args.verbose)

    try:
        output = validated(
            SCHEMA_OUTPUT, {"format": args.format, "out": args.out}, "output"
        )
        cfg = _numerics_config(args)
        result = args.handler(args, cfg)
    except (ConfigurationError, CalibrationError) as err:
        _LOGGER.error("%s", err)
        return EXIT_USAGE
    except NumericalDomainError as err:
        _LOGGER.error("Numerical failure: %s", err)
        return EXIT_NOT_CONVERGED

    EnvelopeWriter(sys.stdout).write(result.envelope, output["format"], output["out"])
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
