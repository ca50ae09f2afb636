"""Batch coordinator: the XML-RPC server workers report back to.

One active batch at a time. `start` validates its twelve wire
parameters, allocates zeroed per-run result tables, builds one worker
command line per run id and hands the whole list to the slot-pool queue
on a background thread, returning immediately. Workers then call
store_array1/store_array2/store_results/finish; pollers read
fin_as_far/res_sum/loop_mean/progress/export_csv at any time.

Aggregates (means, standard errors, averaged loop) are computed over
runs that sent their finish mark, never over the zeroed tables of
pending runs. stderr = sample std (N-1 denominator)/sqrt(N), 0 for N=1.

Wire fault codes: 1 batch busy, 2 unknown binary, 3 unknown pid,
4 wrong array length, 5 nothing finished yet, -32602 bad parameters.
"""

from __future__ import annotations

import argparse
import logging
import os
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .ensemble import METRIC_NAMES, mean_stderr
from .params import derive_run_seed
from .scheduler import JobResult, JobSpec, QueueReport, SlotPool, run_queue
from .xmlrpc import Fault, RpcServer

log = logging.getLogger(__name__)

N_METRICS = len(METRIC_NAMES)


@dataclass
class ServerConfig:
    """Everything the coordinator process needs to run."""

    bin_dir: str
    bind: str = "127.0.0.1"
    port: int = 8000
    slots: int = field(default_factory=lambda: os.cpu_count() or 1)
    launcher_template: Optional[str] = None
    cors: bool = False
    ui_dir: Optional[str] = None
    master_seed: int = 0
    advertise_url: Optional[str] = None  # workers report here; default = own address

    def __post_init__(self) -> None:
        if not 0 <= self.port < 65536:  # 0 binds an ephemeral port
            raise ValueError(f"port {self.port} out of range")
        if self.slots < 1:
            raise ValueError("need at least one scheduler slot")
        if not Path(self.bin_dir).is_dir():
            raise ValueError(f"bin directory {self.bin_dir!r} does not exist")


@dataclass
class RunRecord:
    """Server-side state of one simulation run."""

    run_id: int
    status: str = "pending"  # pending/running/finished/failed
    h_values: Optional[np.ndarray] = None
    m_values: Optional[np.ndarray] = None
    metrics: Optional[List[float]] = None
    wall_time: float = 0.0
    finished: bool = False  # the finish-call flag; aggregates key off this
    started_at: Optional[float] = None


@dataclass
class BatchState:
    """One batch: the start parameters plus all per-run records."""

    params: Dict[str, Any]
    runs: Dict[int, RunRecord]
    created_at: float
    steps: int
    nofs: int
    finish_sequence: List[int] = field(default_factory=list)


def _as_int(name: str, value: Any) -> int:
    try:
        if isinstance(value, bool):
            return int(value)
        if isinstance(value, int):
            return value
        if isinstance(value, float):
            if not value.is_integer():
                raise ValueError
            return int(value)
        if isinstance(value, str):
            return int(value.strip(), 10)
    except ValueError:
        pass
    raise Fault(-32602, f"parameter {name}: cannot coerce {value!r} to int")


def _as_float(name: str, value: Any) -> float:
    try:
        if isinstance(value, bool):
            return float(value)
        if isinstance(value, (int, float)):
            return float(value)
        if isinstance(value, str):
            return float(value.strip())
    except ValueError:
        pass
    raise Fault(-32602, f"parameter {name}: cannot coerce {value!r} to float")


def _as_double_array(name: str, values: Any) -> np.ndarray:
    if not isinstance(values, (list, tuple)):
        raise Fault(-32602, f"parameter {name}: expected an array")
    try:
        return np.asarray(values, dtype=np.float64)
    except (TypeError, ValueError):
        raise Fault(-32602, f"parameter {name}: non-numeric entries") from None


# job_runner signature, injectable for tests
JobRunner = Callable[..., QueueReport]

WIRE_METHODS = (
    "start",
    "store_array1",
    "store_array2",
    "store_results",
    "finish",
    "fin_as_far",
    "res_sum",
    "loop_mean",
    "progress",
    "export_csv",
)


class Coordinator:
    """Wire-method implementations plus batch lifecycle management."""

    def __init__(self, config: ServerConfig, job_runner: Optional[JobRunner] = None):
        self.config = config
        self._job_runner: JobRunner = job_runner if job_runner is not None else run_queue
        self._lock = threading.RLock()
        self._batch: Optional[BatchState] = None
        self._queue_thread: Optional[threading.Thread] = None
        self.report: Optional[QueueReport] = None  # last drained queue
        self.call_log: List[Tuple[str, int, float]] = []  # (method, pid, timestamp)

    # -- lifecycle ---------------------------------------------------------

    @property
    def busy(self) -> bool:
        thread = self._queue_thread
        return thread is not None and thread.is_alive()

    def wait_idle(self, timeout: Optional[float] = None) -> bool:
        """Block until the current batch's queue drains (test/CLI aid)."""
        thread = self._queue_thread
        if thread is None:
            return True
        thread.join(timeout)
        return not thread.is_alive()

    def attach(self, server: RpcServer) -> None:
        for name in WIRE_METHODS:
            server.register(name, getattr(self, name))
        if self.config.advertise_url is None:
            # the server's bound address, not the configured one: resolves
            # an ephemeral port 0 to the port workers can actually reach
            self.config.advertise_url = server.url

    def _log_call(self, method: str, pid: int) -> None:
        now = time.time()
        with self._lock:
            self.call_log.append((method, pid, now))
        log.info("%s pid=%d t=%.3f", method, pid, now)

    # -- wire methods ------------------------------------------------------

    def start(
        self,
        net_size: Any,
        steps: Any,
        hmax: Any,
        hmin: Any,
        dlevel: Any,
        econst: Any,
        sd: Any,
        sd1: Any,
        pp: Any,
        nofs: Any,
        runall: Any,
        bin_name: Any,
    ) -> int:
        params = {
            "net_size": _as_int("net_size", net_size),
            "steps": _as_int("steps", steps),
            "hmax": _as_float("hmax", hmax),
            "hmin": _as_float("hmin", hmin),
            "dlevel": _as_float("dlevel", dlevel),
            "econst": _as_float("econst", econst),
            "sd": _as_float("sd", sd),
            "sd1": _as_float("sd1", sd1),
            "pp": _as_float("pp", pp),
            "nofs": _as_int("nofs", nofs),
            "runall": _as_int("runall", runall),
            "bin_name": str(bin_name),
        }
        if params["nofs"] < 1:
            raise Fault(-32602, f"nofs must be >= 1, got {params['nofs']}")
        name = params["bin_name"]
        if not name or "/" in name or "\\" in name or os.sep in name:
            raise Fault(2, f"invalid binary name {name!r}")
        bin_path = Path(self.config.bin_dir) / name
        if not bin_path.exists():
            raise Fault(2, f"binary {name!r} not found in {self.config.bin_dir}")

        with self._lock:
            if self.busy:
                raise Fault(1, "a batch is already running")
            batch = BatchState(
                params=params,
                runs={
                    i: RunRecord(
                        run_id=i,
                        h_values=np.zeros(params["steps"]),
                        m_values=np.zeros(params["steps"]),
                    )
                    for i in range(params["nofs"])
                },
                created_at=time.time(),
                steps=params["steps"],
                nofs=params["nofs"],
            )
            jobs = [self._job_spec(bin_path, params, i) for i in range(params["nofs"])]
            self._batch = batch
            self.report = None
            thread = threading.Thread(
                target=self._drive_queue, args=(jobs,), name="batch-queue", daemon=True
            )
            self._queue_thread = thread
            thread.start()
        log.info(
            "batch started: nofs=%d bin=%s runall=%d", params["nofs"], name, params["runall"]
        )
        return 0

    def _job_spec(self, bin_path: Path, params: Dict[str, Any], run_id: int) -> JobSpec:
        advertise = self.config.advertise_url or (
            f"http://{self.config.bind}:{self.config.port}"
        )
        argv = [
            str(bin_path),
            "--size", str(params["net_size"]),
            "--steps", str(params["steps"]),
            "--hmax", repr(params["hmax"]),
            "--hmin", repr(params["hmin"]),
            "--dlevel", repr(params["dlevel"]),
            "--econst", repr(params["econst"]),
            "--sd", repr(params["sd"]),
            "--asd", repr(params["sd1"]),
            "--pp", repr(params["pp"]),
            "--pid", str(run_id),
            "--seed", str(derive_run_seed(self.config.master_seed, run_id)),
            "--server-url", advertise,
        ]
        return JobSpec(argv=argv, run_id=run_id)

    def _drive_queue(self, jobs: List[JobSpec]) -> None:
        def on_start(job: JobSpec, node: Any) -> None:
            with self._lock:
                run = self._batch.runs.get(job.run_id) if self._batch else None
                if run is not None and not run.finished:
                    run.status = "running"
                    run.started_at = time.time()

        def on_done(result: JobResult) -> None:
            with self._lock:
                run = self._batch.runs.get(result.job.run_id) if self._batch else None
                if run is None:
                    return
                run.wall_time = result.wall_time
                if result.status != "succeeded" and not run.finished:
                    run.status = "failed"

        report = self._job_runner(
            jobs,
            SlotPool(count=self.config.slots),
            launcher_template=self.config.launcher_template,
            on_start=on_start,
            on_done=on_done,
        )
        with self._lock:
            self.report = report

    def _run(self, pid: Any) -> RunRecord:
        run_id = _as_int("pid", pid)
        with self._lock:
            if self._batch is None or run_id not in self._batch.runs:
                raise Fault(3, f"unknown pid {run_id}")
            return self._batch.runs[run_id]

    def store_array1(self, pid: Any, array1: Any) -> int:
        run = self._run(pid)
        values = _as_double_array("array1", array1)
        with self._lock:
            if len(values) != self._batch.steps:
                raise Fault(
                    4, f"array1 has {len(values)} entries, expected {self._batch.steps}"
                )
            run.h_values = values
        self._log_call("store_array1", run.run_id)
        return 0

    def store_array2(self, pid: Any, array2: Any) -> int:
        run = self._run(pid)
        values = _as_double_array("array2", array2)
        with self._lock:
            if len(values) != self._batch.steps:
                raise Fault(
                    4, f"array2 has {len(values)} entries, expected {self._batch.steps}"
                )
            run.m_values = values
        self._log_call("store_array2", run.run_id)
        return 0

    def store_results(self, pid: Any, results: Any) -> int:
        run = self._run(pid)
        values = _as_double_array("results", results)
        if len(values) < 2:
            raise Fault(4, f"results has {len(values)} entries, expected >= 2")
        padded = list(values[:N_METRICS]) + [0.0] * max(0, N_METRICS - len(values))
        with self._lock:
            run.metrics = [float(v) for v in padded]
        self._log_call("store_results", run.run_id)
        return 2

    def finish(self, pid: Any) -> int:
        run = self._run(pid)
        with self._lock:
            if not run.finished:
                run.finished = True
                run.status = "finished"
                if run.started_at is not None:
                    run.wall_time = time.time() - run.started_at
                self._batch.finish_sequence.append(run.run_id)
        self._log_call("finish", run.run_id)
        return 0

    def fin_as_far(self) -> int:
        with self._lock:
            if self._batch is None:
                return 0
            return len(self._batch.finish_sequence)

    def _finished_runs(self) -> List[RunRecord]:
        """Snapshot of finished runs, in finish order."""
        with self._lock:
            if self._batch is None:
                return []
            return [self._batch.runs[i] for i in self._batch.finish_sequence]

    def res_sum(self) -> List[List[float]]:
        finished = self._finished_runs()
        if not finished:
            return []
        table = np.array(
            [r.metrics if r.metrics is not None else [0.0] * N_METRICS for r in finished]
        )
        return [list(mean_stderr(table[:, k])) for k in range(N_METRICS)]

    def loop_mean(self) -> List[List[float]]:
        finished = self._finished_runs()
        if not finished:
            raise Fault(5, "no finished runs yet")
        h = finished[0].h_values
        curves = np.array([r.m_values for r in finished])
        out = []
        for k in range(len(h)):
            m_mean, m_stderr = mean_stderr(curves[:, k])
            out.append([float(h[k]), m_mean, m_stderr])
        return out

    def progress(self) -> Dict[str, int]:
        with self._lock:
            if self._batch is None:
                return {"created": 0, "finished": 0, "running": 0}
            created = self._batch.nofs
            finished = len(self._batch.finish_sequence)
            failed = sum(
                1
                for r in self._batch.runs.values()
                if r.status == "failed" and not r.finished
            )
            return {
                "created": created,
                "finished": finished,
                "running": created - finished - failed,
            }

    def export_csv(self) -> str:
        rows = self.loop_mean()  # fault 5 when nothing finished
        stats = self.res_sum()
        lines = ["H,M_mean,M_stderr"]
        lines += [f"{h!r},{m!r},{s!r}" for h, m, s in rows]
        lines.append("")
        lines.append("metric,mean,stderr")
        lines += [
            f"{name},{mean!r},{stderr!r}"
            for name, (mean, stderr) in zip(METRIC_NAMES, stats)
        ]
        return "\n".join(lines) + "\n"


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="rfim-coord", description="hysteresis batch coordinator"
    )
    parser.add_argument("--bind", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8000)
    parser.add_argument("--bin-dir", required=True)
    parser.add_argument("--slots", type=int, default=os.cpu_count() or 1)
    parser.add_argument("--launcher-template", default=None)
    parser.add_argument("--cors", action="store_true")
    parser.add_argument("--ui-dir", default=None)
    parser.add_argument("--master-seed", type=int, default=0)
    parser.add_argument("--advertise-url", default=None)
    args = parser.parse_args(argv)

    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(name)s %(message)s")
    config = ServerConfig(
        bin_dir=args.bin_dir,
        bind=args.bind,
        port=args.port,
        slots=args.slots,
        launcher_template=args.launcher_template,
        cors=args.cors,
        ui_dir=args.ui_dir,
        master_seed=args.master_seed,
        advertise_url=args.advertise_url,
    )
    coordinator = Coordinator(config)
    server = RpcServer(
        bind=config.bind, port=config.port, cors=config.cors, ui_dir=config.ui_dir
    )
    coordinator.attach(server)
    log.info("serving on %s (bin dir %s)", server.url, config.bin_dir)
    try:
        with server:
            while True:
                time.sleep(3600)
    except KeyboardInterrupt:
        return 0


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
