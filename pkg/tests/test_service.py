import json
import time

import numpy as np
import pytest
from starlette.testclient import TestClient

from knotforge.interp import Session
from knotforge.service import SessionServer, build_app


@pytest.fixture()
def client(tmp_path):
    server = SessionServer(Session(seed=1, cwd=str(tmp_path)))
    app = build_app(server)
    with TestClient(app) as tc:
        yield tc


def recv_until(ws, want_type, timeout=10.0, predicate=None):
    deadline = time.monotonic() + timeout
    while time.monotonic() < deadline:
        msg = json.loads(ws.receive_text())
        if msg["type"] == want_type and (predicate is None
                                         or predicate(msg)):
            return msg
    raise AssertionError("no %s message within %.1fs" % (want_type,
                                                         timeout))


def send_command(ws, text):
    ws.send_text(json.dumps({"type": "command", "text": text}))


class TestServiceBasics:
    def test_initial_snapshot(self, client):
        with client.websocket_connect("/ws") as ws:
            msg = json.loads(ws.receive_text())
            assert msg["type"] == "snapshot"
            assert msg["seq"] >= 1
            assert msg["components"] == []
            assert msg["relax"] == "stopped"
            assert set(msg["params"]) == {"stusplit", "close", "max-dir",
                                          "dstep"}

    def test_load_produces_snapshot(self, client):
        with client.websocket_connect("/ws") as ws:
            ws.receive_text()
            send_command(ws, "load 3.1")
            snap = recv_until(ws, "snapshot",
                              predicate=lambda m: len(m["components"]) == 1)
            comp = snap["components"][0]
            assert comp["closed"] is True
            assert len(comp["vertices"][0]) == 3

    def test_go_toggles(self, client):
        with client.websocket_connect("/ws") as ws:
            ws.receive_text()
            send_command(ws, "load 3.1")
            recv_until(ws, "snapshot",
                       predicate=lambda m: len(m["components"]) == 1)
            send_command(ws, "go")
            recv_until(ws, "output",
                       predicate=lambda m: "running" in m["text"])
            recv_until(ws, "snapshot",
                       predicate=lambda m: m["relax"] == "running")
            send_command(ws, "go")
            recv_until(ws, "output",
                       predicate=lambda m: "stopped" in m["text"])

    def test_go_with_budget_stops_itself(self, client):
        with client.websocket_connect("/ws") as ws:
            ws.receive_text()
            send_command(ws, "load 2.2.1")
            recv_until(ws, "snapshot",
                       predicate=lambda m: len(m["components"]) == 2)
            send_command(ws, "go 40")
            recv_until(ws, "snapshot",
                       predicate=lambda m: m["relax"] == "running")
            recv_until(ws, "snapshot",
                       predicate=lambda m: m["relax"] == "stopped")

    def test_complaint_routed(self, client):
        with client.websocket_connect("/ws") as ws:
            ws.receive_text()
            send_command(ws, "blorp")
            msg = recv_until(ws, "complaint")
            assert msg["text"].startswith("***")

    def test_seq_strictly_increasing(self, client):
        with client.websocket_connect("/ws") as ws:
            first = json.loads(ws.receive_text())
            send_command(ws, "unknot 10 2")
            send_command(ws, "scale 2")
            seqs = [first["seq"]]
            for _ in range(2):
                snap = recv_until(ws, "snapshot")
                seqs.append(snap["seq"])
            assert all(b > a for a, b in zip(seqs, seqs[1:]))

    def test_seq_gapless_per_connection(self, client):
        # a second client connecting must not punch holes into the
        # first client's sequence
        with client.websocket_connect("/ws") as ws1:
            seqs = [json.loads(ws1.receive_text())["seq"]]
            send_command(ws1, "unknot 10 2")
            seqs.append(recv_until(ws1, "snapshot")["seq"])
            with client.websocket_connect("/ws") as ws2:
                first2 = json.loads(ws2.receive_text())
                assert first2["type"] == "snapshot"
                assert first2["seq"] == 1
                send_command(ws1, "scale 2")
                seqs.append(recv_until(ws1, "snapshot")["seq"])
                send_command(ws1, "scale 2")
                seqs.append(recv_until(ws1, "snapshot")["seq"])
            assert seqs == list(range(seqs[0], seqs[0] + 4))


class TestDrag:
    def test_drag_moves_bead_safely(self, client):
        with client.websocket_connect("/ws") as ws:
            ws.receive_text()
            send_command(ws, "unknot 12 2")
            snap = recv_until(ws, "snapshot",
                              predicate=lambda m: m["components"])
            v0 = np.array(snap["components"][0]["vertices"][0])
            target = (v0 + [0.05, 0.05, 0.05]).tolist()
            ws.send_text(json.dumps({"type": "drag", "component": 0,
                                     "bead": 0, "position": target}))
            snap = recv_until(ws, "snapshot")
            v1 = np.array(snap["components"][0]["vertices"][0])
            assert not np.allclose(v0, v1)
            assert snap["safe"] is True

    def test_drag_during_relaxation_stays_safe(self, client):
        with client.websocket_connect("/ws") as ws:
            ws.receive_text()
            send_command(ws, "load 3.1")
            snap = recv_until(ws, "snapshot",
                              predicate=lambda m: m["components"])
            send_command(ws, "go")
            recv_until(ws, "snapshot",
                       predicate=lambda m: m["relax"] == "running")
            rng = np.random.default_rng(3)
            for _ in range(15):
                nverts = len(snap["components"][0]["vertices"])
                bead = int(rng.integers(0, nverts))
                v = np.array(snap["components"][0]["vertices"][bead])
                target = (v + rng.normal(size=3) * 0.3).tolist()
                ws.send_text(json.dumps({"type": "drag", "component": 0,
                                         "bead": bead,
                                         "position": target}))
                snap = recv_until(ws, "snapshot")
                assert snap["safe"] is True
            send_command(ws, "go")

    def test_drag_clamped_to_max_dir(self, client):
        with client.websocket_connect("/ws") as ws:
            ws.receive_text()
            send_command(ws, "unknot 12 2")
            snap = recv_until(ws, "snapshot",
                              predicate=lambda m: m["components"])
            v0 = np.array(snap["components"][0]["vertices"][0])
            ws.send_text(json.dumps({"type": "drag", "component": 0,
                                     "bead": 0,
                                     "position": [50.0, 50.0, 50.0]}))
            snap = recv_until(ws, "snapshot")
            v1 = np.array(snap["components"][0]["vertices"][0])
            assert np.linalg.norm(v1 - v0) <= 0.1 + 1e-9


class TestSketch:
    def test_commit_creates_component(self, client):
        with client.websocket_connect("/ws") as ws:
            ws.receive_text()
            pts = [[np.cos(t), np.sin(t), 0.1 * (-1) ** k]
                   for k, t in enumerate(np.linspace(0, 2 * np.pi, 7)[:-1])]
            ws.send_text(json.dumps({"type": "sketch_commit",
                                     "points": pts, "closed": True}))
            snap = recv_until(ws, "snapshot",
                              predicate=lambda m: m["components"])
            assert len(snap["components"]) == 1
            assert snap["components"][0]["closed"] is True
            assert snap["safe"] is True

    def test_too_few_points_complains(self, client):
        with client.websocket_connect("/ws") as ws:
            ws.receive_text()
            ws.send_text(json.dumps({"type": "sketch_commit",
                                     "points": [[0, 0, 0], [1, 0, 0]],
                                     "closed": True}))
            msg = recv_until(ws, "complaint")
            assert "sketch" in msg["text"] or "points" in msg["text"]


class TestSharedDispatch:
    def test_socket_and_cli_same_mutation(self, tmp_path):
        # identical commands through the service and a plain session
        from knotforge.interp import run_line
        server = SessionServer(Session(seed=5, cwd=str(tmp_path)))
        app = build_app(server)
        cmds = ["unknot 20 3", "scale 2", "jitter 0.01", "split"]
        with TestClient(app) as tc:
            with tc.websocket_connect("/ws") as ws:
                ws.receive_text()
                for cmd in cmds:
                    send_command(ws, cmd)
                snap = recv_until(
                    ws, "snapshot",
                    predicate=lambda m: m["components"]
                    and len(m["components"][0]["vertices"]) == 40)
        plain = Session(seed=5, cwd=str(tmp_path))
        for cmd in cmds:
            run_line(plain, cmd)
        got = np.array(snap["components"][0]["vertices"])
        want = plain.link.all_vertices()
        assert np.allclose(got, want, atol=1e-12)
