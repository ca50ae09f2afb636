"""FIFO job queue over a fixed pool of execution slots.

One simulator process per job: jobs start in enqueue order whenever a
slot is free, completions are reaped by polling, and every job ends up
exactly once in the final report. A failing spawn or a nonzero exit
marks the job failed and the queue moves on. With a launcher template
(for cluster front-ends such as `mosrun -L -j<node> <cmd>`) the command
is wrapped before spawning: `<node>` is replaced by the slot label and
`<cmd>` expands to the job's argv.
"""

from __future__ import annotations

import shlex
import subprocess
import threading
import time
from collections import deque
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

POLL_INTERVAL = 0.005

_RESERVED = object()  # slot claimed, process handle not yet known


@dataclass
class JobSpec:
    """One queued process: program plus flags, tagged with its run id."""

    argv: List[str]
    run_id: int
    enqueue_time: float = field(default_factory=time.time)

    def __post_init__(self) -> None:
        if not self.argv:
            raise ValueError("argv must be non-empty")
        self.argv = [str(a) for a in self.argv]
        if "--pid" in self.argv:
            flag_value = self.argv[self.argv.index("--pid") + 1 :][:1]
            if flag_value != [str(self.run_id)]:
                raise ValueError(
                    f"--pid value {flag_value} does not match run_id {self.run_id}"
                )


class SlotPool:
    """Fixed set of node labels with race-free occupancy bookkeeping."""

    def __init__(
        self,
        slots: Union[int, Sequence[Any], None] = None,
        count: Optional[int] = None,
        labels: Optional[Sequence[Any]] = None,
    ):
        if isinstance(slots, int):
            count = slots
        elif slots is not None:
            labels = slots
        if labels is None:
            if count is None:
                raise ValueError("need labels or count")
            labels = list(range(1, count + 1))
        self.labels = list(labels)
        if not self.labels:
            raise ValueError("slot pool must have at least one slot")
        self.occupancy: List[Any] = [None] * len(self.labels)
        self._lock = threading.Lock()

    def __len__(self) -> int:
        return len(self.labels)

    def acquire(self) -> Optional[Tuple[int, Any]]:
        """Claim the first free slot; returns (index, label) or None."""
        with self._lock:
            for i, occupant in enumerate(self.occupancy):
                if occupant is None:
                    self.occupancy[i] = _RESERVED
                    return i, self.labels[i]
            return None

    def assign(self, index: int, handle: Any) -> None:
        with self._lock:
            self.occupancy[index] = handle

    def release(self, index: int) -> None:
        with self._lock:
            self.occupancy[index] = None

    @property
    def free_count(self) -> int:
        with self._lock:
            return sum(1 for occupant in self.occupancy if occupant is None)


@dataclass
class JobStarted:
    prog: str
    os_pid: int
    node: Any


@dataclass
class JobFinished:
    os_pid: int
    node: Any


@dataclass
class QueueCompleted:
    elapsed_seconds: float


def format_log(event: Union[JobStarted, JobFinished, QueueCompleted]) -> str:
    """Render one queue event as its canonical log line."""
    if isinstance(event, JobStarted):
        return f"Job {event.prog} pid {event.os_pid} started on node {event.node}."
    if isinstance(event, JobFinished):
        return f"Process {event.os_pid} on node {event.node} finished."
    if isinstance(event, QueueCompleted):
        minutes, seconds = divmod(event.elapsed_seconds, 60)
        # trailing space is part of the canonical line
        return f"Completed in {int(minutes)} min {int(seconds)} sec. "
    raise TypeError(f"unknown event {event!r}")


def wrap_command(
    launcher_template: Optional[str], node: Any, argv: Sequence[str]
) -> List[str]:
    """Apply the launcher template to one job's argv."""
    if launcher_template is None:
        return list(argv)
    tokens = shlex.split(launcher_template)
    out: List[str] = []
    expanded = False
    for token in tokens:
        if token == "<cmd>":
            out.extend(argv)
            expanded = True
        else:
            out.append(token.replace("<node>", str(node)))
    if not expanded:
        out.extend(argv)
    return out


@dataclass
class JobResult:
    job: JobSpec
    node: Any
    status: str  # "succeeded" or "failed"
    exit_code: Optional[int]
    wall_time: float
    os_pid: Optional[int]


@dataclass
class QueueReport:
    """Immutable outcome of one drained queue, in enqueue order."""

    results: List[JobResult]
    elapsed: float

    @property
    def succeeded(self) -> List[JobResult]:
        return [r for r in self.results if r.status == "succeeded"]

    @property
    def failed(self) -> List[JobResult]:
        return [r for r in self.results if r.status == "failed"]


@dataclass
class _Running:
    proc: subprocess.Popen
    job: JobSpec
    order: int
    node: Any
    slot: int
    start_time: float


def run_queue(
    jobs: Sequence[JobSpec],
    pool: SlotPool,
    launcher_template: Optional[str] = None,
    job_timeout: Optional[float] = None,
    on_start: Optional[Callable[[JobSpec, Any], None]] = None,
    on_done: Optional[Callable[[JobResult], None]] = None,
) -> QueueReport:
    """Drain `jobs` through `pool`, FIFO, one process per job."""
    start_time = time.time()
    pending = deque(enumerate(jobs))
    running: Dict[int, _Running] = {}
    results: List[Optional[JobResult]] = [None] * len(jobs)

    def record(order: int, result: JobResult) -> None:
        results[order] = result
        if on_done is not None:
            on_done(result)

    def reap(entry: _Running, exit_code: int) -> None:
        print(format_log(JobFinished(entry.proc.pid, entry.node)))
        pool.release(entry.slot)
        del running[entry.slot]
        record(
            entry.order,
            JobResult(
                job=entry.job,
                node=entry.node,
                status="succeeded" if exit_code == 0 else "failed",
                exit_code=exit_code,
                wall_time=time.time() - entry.start_time,
                os_pid=entry.proc.pid,
            ),
        )

    while pending or running:
        while pending:
            claim = pool.acquire()
            if claim is None:
                break
            slot, node = claim
            order, job = pending.popleft()
            argv = wrap_command(launcher_template, node, job.argv)
            try:
                proc = subprocess.Popen(argv)
            except OSError:
                pool.release(slot)
                record(order, JobResult(job, node, "failed", None, 0.0, None))
                continue
            pool.assign(slot, proc)
            print(format_log(JobStarted(job.argv[0], proc.pid, node)))
            running[slot] = _Running(proc, job, order, node, slot, time.time())
            if on_start is not None:
                on_start(job, node)
        now = time.time()
        for slot in list(running):
            entry = running[slot]
            exit_code = entry.proc.poll()
            if (
                exit_code is None
                and job_timeout is not None
                and now - entry.start_time > job_timeout
            ):
                entry.proc.kill()
                exit_code = entry.proc.wait()
            if exit_code is not None:
                reap(entry, exit_code)
        if running:
            time.sleep(POLL_INTERVAL)

    elapsed = time.time() - start_time
    print(format_log(QueueCompleted(elapsed)))
    return QueueReport(results=list(results), elapsed=elapsed)  # type: ignore[arg-type]
