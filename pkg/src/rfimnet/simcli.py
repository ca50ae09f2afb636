"""Worker executable: parse flags, run one hysteresis loop, report, exit.

Reporting is exactly four calls in this order: store_array1 (h axis),
store_array2 (m values), store_results (metric vector), finish. Each
call is retried on transport failure with one-second spacing before the
process gives up with exit code 1. A sweep whose magnetization never
crosses zero still reports its arrays plus zero metrics and calls
finish, but exits with code 3 so the scheduler report flags the run.
Usage errors exit 2.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path
from typing import Any, List, Optional, Sequence

from .hysteresis import (
    NoCrossingError,
    extract_metrics,
    run_sweep,
    write_curve_csv,
)
from .params import SimulationParams, derive_run_seed
from .xmlrpc import Fault, RpcClient, TransportError

DEFAULT_SERVER_URL = "http://10.0.0.1:8000"
RETRIES = 3  # re-attempts after the first failure
RETRY_DELAY = 1.0

EXIT_OK = 0
EXIT_REPORT_FAILED = 1
EXIT_USAGE = 2
EXIT_NO_CROSSING = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rfim-sim",
        description="one hysteresis simulation reporting to a coordinator",
    )
    parser.add_argument("--size", type=int, default=70)
    parser.add_argument("--steps", type=int, default=300)
    parser.add_argument("--hmax", type=float, default=8.0)
    parser.add_argument("--hmin", type=float, default=-5.0)
    parser.add_argument("--dlevel", type=float, default=0.10)
    parser.add_argument("--econst", type=float, default=10.0)
    parser.add_argument("--sd", type=float, default=1.5)
    parser.add_argument("--asd", type=float, default=0.0)
    parser.add_argument("--pp", type=float, default=0.0)
    parser.add_argument("--pid", type=int, default=0)
    parser.add_argument("--server-url", default=DEFAULT_SERVER_URL)
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument(
        "--dump",
        default=None,
        metavar="PATH",
        help="also write the curve locally (file, or directory for curve_<pid>.csv)",
    )
    return parser


def parse_args(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    """Parse flags; unknown flags or non-numeric values exit 2 with usage."""
    return build_parser().parse_args(argv)


def _call_with_retry(client: RpcClient, method: str, *params: Any) -> Any:
    for attempt in range(1 + RETRIES):
        try:
            return client.call(method, *params)
        except TransportError:
            if attempt == RETRIES:
                raise
            time.sleep(RETRY_DELAY)


def report(
    client: RpcClient,
    pid: int,
    h_values: List[float],
    m_values: List[float],
    metrics: List[float],
) -> None:
    """The four wire calls, fixed order, finish always last."""
    _call_with_retry(client, "store_array1", pid, h_values)
    _call_with_retry(client, "store_array2", pid, m_values)
    _call_with_retry(client, "store_results", pid, metrics)
    _call_with_retry(client, "finish", pid)


def main(argv: Optional[Sequence[str]] = None) -> int:
    t0 = time.time()
    try:
        args = parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else EXIT_USAGE

    seed = args.seed
    if seed is None:
        # no seed given: mix the pid with the wall clock
        seed = derive_run_seed(time.time_ns(), args.pid)
    try:
        params = SimulationParams(
            size=args.size,
            steps=args.steps,
            hmax=args.hmax,
            hmin=args.hmin,
            dlevel=args.dlevel,
            econst=args.econst,
            sd=args.sd,
            seed=seed,
        )
    except ValueError as exc:
        print(f"rfim-sim: error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    curve = run_sweep(params)
    exit_code = EXIT_OK
    try:
        metric_vector = [float(v) for v in extract_metrics(curve).as_vector()]
    except NoCrossingError:
        metric_vector = [0.0, 0.0, 0.0, 0.0]
        exit_code = EXIT_NO_CROSSING

    if args.dump is not None:
        target = Path(args.dump)
        if target.is_dir():
            target = target / f"curve_{args.pid}.csv"
        write_curve_csv(curve, target)

    client = RpcClient(args.server_url)
    try:
        report(
            client,
            args.pid,
            [float(x) for x in curve.h],
            [float(x) for x in curve.m],
            metric_vector,
        )
    except (TransportError, Fault) as exc:
        print(f"rfim-sim: reporting failed: {exc}", file=sys.stderr)
        return EXIT_REPORT_FAILED

    elapsed = time.time() - t0
    print(
        f"pid={args.pid} eb={metric_vector[0]:.6f} hc={metric_vector[1]:.6f} "
        f"t={elapsed:.1f}s asd={args.asd:g} pp={args.pp:g}"
    )
    return exit_code


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
