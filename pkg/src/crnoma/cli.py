"""Command-line client for the simulation/analysis service.

All computation lives behind the service layer; each subcommand builds a
request model, obtains a response (in process by default, over HTTP when
``--server`` is given) and writes the CSV plus a JSON manifest sidecar.

Exit codes: 0 success, 2 input error (bad flags, malformed config, bad CSV
inputs), 3 I/O error (unreadable/unwritable paths, unreachable server).
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path
from typing import Sequence

import httpx
from pydantic import ValidationError

from . import __version__
from .channel import ConfigurationError
from .configfile import ConfigFileError, load_config
from .reporting import (
    PlotInputError,
    analytic_csv,
    build_manifest,
    format_table1,
    plot_bundle,
    simulate_csv,
    table1_csv,
    write_manifest,
)
from .selection import SCHEME_IDS
from .service import handlers
from .service.schemas import (
    AnalyticRequest,
    AnalyticResponse,
    SimulateRequest,
    SimulateResponse,
    SystemConfigModel,
    Table1Request,
    Table1Response,
)

__all__ = ["main", "entrypoint", "ServiceClient"]

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_IO = 3

SEED_ENV_VAR = "CRNOMA_SEED"


class InputError(Exception):
    """User input rejected (maps to exit code 2)."""


class TransportError(Exception):
    """Server unreachable or misbehaving (maps to exit code 3)."""


class ServiceClient:
    """Thin client: in-process handler calls, or HTTP when ``server`` is set."""

    def __init__(self, server: str | None = None):
        self.server = server.rstrip("/") if server else None

    def _post(self, route: str, request, response_model):
        if self.server is None:
            handler = getattr(handlers, "run_" + route)
            return handler(request)
        try:
            reply = httpx.post(
                f"{self.server}/{route}",
                json=request.model_dump(mode="json"),
                timeout=None,
            )
        except httpx.HTTPError as exc:
            raise TransportError(f"cannot reach {self.server}: {exc}") from exc
        if reply.status_code >= 400:
            raise InputError(f"server rejected /{route}: {reply.text}")
        return response_model.model_validate(reply.json())

    def simulate(self, request: SimulateRequest) -> SimulateResponse:
        return self._post("simulate", request, SimulateResponse)

    def analytic(self, request: AnalyticRequest) -> AnalyticResponse:
        return self._post("analytic", request, AnalyticResponse)

    def table1(self, request: Table1Request) -> Table1Response:
        return self._post("table1", request, Table1Response)


def parse_power_grid(text: str) -> list[float]:
    """Grid syntax: comma list ``0,5,10`` or inclusive range ``start:stop:step``."""
    try:
        if ":" in text:
            parts = [float(p) for p in text.split(":")]
            if len(parts) != 3:
                raise ValueError("range form is start:stop:step")
            start, stop, step = parts
            if step <= 0 or stop < start:
                raise ValueError("need step > 0 and stop >= start")
            grid = []
            value = start
            while value <= stop + 1e-9:
                grid.append(round(value, 9))
                value += step
            return grid
        return [float(p) for p in text.split(",") if p.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad power grid {text!r}: {exc}") from exc


def parse_schemes(text: str) -> list[str]:
    if text == "all":
        return list(SCHEME_IDS)
    schemes = [s.strip() for s in text.split(",") if s.strip()]
    unknown = set(schemes) - set(SCHEME_IDS)
    if unknown:
        raise argparse.ArgumentTypeError(
            f"unknown schemes {sorted(unknown)}; valid: {', '.join(SCHEME_IDS)} or 'all'"
        )
    return schemes


def _resolve_seed(args: argparse.Namespace) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get(SEED_ENV_VAR)
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise InputError(f"{SEED_ENV_VAR}={env!r} is not an integer") from None
    return 0


def _write_output(path: str | Path, text: str, manifest: dict[str, object]) -> None:
    Path(path).write_text(text)
    write_manifest(path, manifest)


def _config_model(path: str) -> tuple[SystemConfigModel, float]:
    loaded = load_config(path)
    return SystemConfigModel.from_core(loaded.system), loaded.noise_dbm


def cmd_simulate(args: argparse.Namespace) -> int:
    config, noise_dbm = _config_model(args.config)
    request = SimulateRequest(
        config=config,
        noise_dbm=noise_dbm,
        power_grid_dbm=args.power_grid,
        schemes=args.schemes,
        trials=args.trials,
        seed=_resolve_seed(args),
        paired=not args.unpaired,
        workers=args.workers,
    )
    response = ServiceClient(args.server).simulate(request)
    _write_output(args.out, simulate_csv(response.rows), response.manifest)
    print(f"wrote {args.out} ({len(response.rows)} rows)")
    return EXIT_OK


def cmd_analytic(args: argparse.Namespace) -> int:
    config, noise_dbm = _config_model(args.config)
    request = AnalyticRequest(
        config=config, noise_dbm=noise_dbm, power_grid_dbm=args.power_grid
    )
    response = ServiceClient(args.server).analytic(request)
    _write_output(args.out, analytic_csv(response.rows), response.manifest)
    print(f"wrote {args.out} ({len(response.rows)} rows)")
    return EXIT_OK


def cmd_table1(args: argparse.Namespace) -> int:
    config, noise_dbm = _config_model(args.config)
    request = Table1Request(
        config=config,
        noise_dbm=noise_dbm,
        trials=args.trials,
        seed=_resolve_seed(args),
        workers=args.workers,
    )
    response = ServiceClient(args.server).table1(request)
    print(format_table1(response.power_grid_dbm, response.rows), end="")
    _write_output(
        args.out, table1_csv(response.power_grid_dbm, response.rows), response.manifest
    )
    return EXIT_OK


def cmd_plotdata(args: argparse.Namespace) -> int:
    written = plot_bundle(args.inputs, args.out)
    manifest = build_manifest("plotdata", config_echo={},
                              inputs=[str(p) for p in args.inputs],
                              outputs=[str(p) for p in written])
    write_manifest(args.out, manifest)
    for path in written:
        print(f"wrote {path}")
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service.app import app

    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="crnoma",
        description="Joint antenna selection and power allocation toolkit "
        "for a two-user CR-NOMA downlink.",
    )
    parser.add_argument("--version", action="version", version=f"crnoma {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, grid: bool = True) -> None:
        p.add_argument("config", help="key=value configuration file")
        p.add_argument("--out", required=True, help="output CSV path")
        p.add_argument("--server", default=None, metavar="URL",
                       help="run against a remote service instead of in process")
        if grid:
            p.add_argument("--power-grid", type=parse_power_grid,
                           default=parse_power_grid("0:20:5"), metavar="GRID",
                           help="dBm grid: 'a,b,c' or 'start:stop:step' (default 0:20:5)")

    p = sub.add_parser("simulate", help="Monte Carlo outage sweep to CSV")
    add_common(p)
    p.add_argument("--schemes", type=parse_schemes, default=list(SCHEME_IDS),
                   metavar="LIST", help="comma list of schemes or 'all' (default)")
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=None,
                   help=f"master seed (default: ${SEED_ENV_VAR} or 0)")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--unpaired", action="store_true",
                   help="give each scheme its own channel draws")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("analytic", help="closed-form outage curve to CSV")
    add_common(p)
    p.set_defaults(func=cmd_analytic)

    p = sub.add_parser("table1", help="mean power-coefficient table (4 schemes x 5 powers)")
    add_common(p, grid=False)
    p.add_argument("--trials", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=None,
                   help=f"master seed (default: ${SEED_ENV_VAR} or 0)")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("plotdata", help="gnuplot script + data from result CSVs")
    p.add_argument("--from", dest="inputs", nargs="+", required=True, metavar="CSV",
                   help="CSV files produced by simulate/analytic")
    p.add_argument("--out", required=True, help="output path prefix")
    p.set_defaults(func=cmd_plotdata)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigFileError, ConfigurationError, PlotInputError, InputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValidationError as exc:
        summary = "; ".join(
            f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}" for err in exc.errors()
        )
        print(f"error: invalid request: {summary}", file=sys.stderr)
        return EXIT_INPUT
    except TransportError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
