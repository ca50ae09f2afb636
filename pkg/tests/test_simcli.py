"""Worker CLI: flags, reporting protocol, retries and exit codes."""

import re
import socket

import numpy as np
import pytest

from rfimnet import read_curve_csv
from rfimnet.xmlrpc import RpcServer
from rfimnet import simcli

GOLDEN_DEFAULT_SEED1 = [
    -0.4032982709667856,
    3.41658908481202,
    -2.1115928133727957,
    1.3049962714392245,
]


@pytest.fixture()
def recording_server():
    """Coordinator double that records every call it receives."""
    calls = []
    srv = RpcServer(port=0, record_requests=True)
    srv.register("store_array1", lambda pid, a: calls.append(("store_array1", pid, a)) or 0)
    srv.register("store_array2", lambda pid, a: calls.append(("store_array2", pid, a)) or 0)
    srv.register("store_results", lambda pid, r: calls.append(("store_results", pid, r)) or 2)
    srv.register("finish", lambda pid: calls.append(("finish", pid)) or 0)
    with srv:
        yield srv, calls


class TestParsing:
    def test_defaults(self):
        args = simcli.parse_args([])
        assert (
            args.size, args.steps, args.hmax, args.hmin, args.dlevel,
            args.econst, args.sd, args.asd, args.pp, args.pid,
            args.server_url, args.seed, args.dump,
        ) == (70, 300, 8.0, -5.0, 0.10, 10.0, 1.5, 0.0, 0.0, 0,
              "http://10.0.0.1:8000", None, None)

    def test_partial_override(self):
        args = simcli.parse_args(["--pid", "7", "--sd", "0"])
        assert args.pid == 7 and args.sd == 0.0 and args.size == 70

    def test_unknown_flag_exits_2(self, capsys):
        assert simcli.main(["--bogus"]) == 2
        assert "usage" in capsys.readouterr().err

    def test_non_numeric_value_exits_2(self):
        assert simcli.main(["--size", "huge"]) == 2

    def test_invalid_physics_exits_2(self, capsys):
        assert simcli.main(["--steps", "5"]) == 2
        assert "error" in capsys.readouterr().err

    def test_retry_policy_constants(self):
        assert (simcli.RETRIES, simcli.RETRY_DELAY) == (3, 1.0)


class TestReporting:
    def test_four_calls_in_order(self, recording_server):
        srv, calls = recording_server
        code = simcli.main(
            ["--size", "12", "--steps", "8", "--seed", "5", "--pid", "3",
             "--server-url", srv.url]
        )
        assert code == 0
        assert [c[0] for c in calls] == [
            "store_array1", "store_array2", "store_results", "finish",
        ]
        assert all(c[1] == 3 for c in calls)
        _, _, h = calls[0]
        _, _, m = calls[1]
        _, _, metrics = calls[2]
        assert len(h) == 8 and len(m) == 8 and len(metrics) == 4
        assert all(isinstance(x, float) for x in h + m + metrics)
        assert h[0] == 8.0 and max(abs(v) for v in m) <= 1.0

    def test_wire_bytes_reproducible(self, recording_server):
        srv, calls = recording_server
        argv = ["--size", "12", "--steps", "8", "--seed", "5", "--server-url", srv.url]
        assert simcli.main(argv) == 0
        assert simcli.main(argv) == 0
        assert len(srv.requests) == 8
        assert srv.requests[:4] == srv.requests[4:]

    def test_summary_line(self, recording_server, capsys):
        srv, _ = recording_server
        assert simcli.main(["--seed", "1", "--server-url", srv.url]) == 0
        out = capsys.readouterr().out.strip()
        assert re.fullmatch(
            r"pid=0 eb=-0\.403298 hc=3\.416589 t=\d+\.\d"
            r"s asd=0 pp=0",
            out,
        )

    def test_golden_metrics_on_wire(self, recording_server):
        srv, calls = recording_server
        assert simcli.main(["--seed", "1", "--server-url", srv.url]) == 0
        metrics = calls[2][2]
        assert metrics == pytest.approx(GOLDEN_DEFAULT_SEED1, abs=1e-12)

    def test_asd_and_pp_echoed_in_summary(self, recording_server, capsys):
        srv, _ = recording_server
        simcli.main(
            ["--size", "12", "--steps", "8", "--seed", "5",
             "--asd", "0.25", "--pp", "1.5", "--server-url", srv.url]
        )
        out = capsys.readouterr().out
        assert "asd=0.25 pp=1.5" in out


class TestNoCrossing:
    def test_exit_3_still_reports(self, recording_server):
        srv, calls = recording_server
        code = simcli.main(
            ["--size", "8", "--steps", "4", "--hmax", "8", "--hmin", "7.9",
             "--seed", "1", "--server-url", srv.url]
        )
        assert code == 3
        assert [c[0] for c in calls] == [
            "store_array1", "store_array2", "store_results", "finish",
        ]
        assert calls[2][2] == [0.0, 0.0, 0.0, 0.0]


class TestTransportFailure:
    def test_exit_1_after_retries(self, monkeypatch):
        probe = socket.socket()
        probe.bind(("127.0.0.1", 0))
        port = probe.getsockname()[1]
        probe.close()
        monkeypatch.setattr(simcli, "RETRY_DELAY", 0.02)
        code = simcli.main(
            ["--size", "8", "--steps", "4", "--seed", "1",
             "--server-url", f"http://127.0.0.1:{port}"]
        )
        assert code == 1


class TestDump:
    def test_directory_dump_round_trips(self, recording_server, tmp_path):
        srv, calls = recording_server
        simcli.main(
            ["--size", "12", "--steps", "8", "--seed", "5", "--pid", "4",
             "--dump", str(tmp_path), "--server-url", srv.url]
        )
        curve = read_curve_csv(tmp_path / "curve_4.csv")
        assert list(curve.h) == calls[0][2]
        assert list(curve.m) == calls[1][2]

    def test_file_dump(self, recording_server, tmp_path):
        srv, _ = recording_server
        target = tmp_path / "loop.csv"
        simcli.main(
            ["--size", "12", "--steps", "8", "--seed", "5",
             "--dump", str(target), "--server-url", srv.url]
        )
        assert target.exists()
        assert len(read_curve_csv(target).h) == 8
