from __future__ import annotations

import json
import threading
import urllib.error
import urllib.request

import pytest

from quiverlab.service import serve

QT = {
    "vertices": ["1", "2", "3"],
    "arrows": [
        {"id": "a12", "source": "1", "target": "2"},
        {"id": "a23", "source": "2", "target": "3"},
        {"id": "a13", "source": "1", "target": "3"},
    ],
}
A3 = {
    "vertices": ["1", "2", "3"],
    "arrows": [
        {"id": "a12", "source": "1", "target": "2"},
        {"id": "a23", "source": "2", "target": "3"},
    ],
}


@pytest.fixture(scope="module")
def server_port():
    server = serve(0)  # OS-assigned free port
    port = server.server_address[1]
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield port
    server.shutdown()


def call(port, method, path, body=None):
    data = json.dumps(body).encode() if body is not None else None
    req = urllib.request.Request(
        f"http://127.0.0.1:{port}{path}",
        data=data,
        method=method,
        headers={"Content-Type": "application/json"},
    )
    try:
        with urllib.request.urlopen(req) as resp:
            return resp.status, json.loads(resp.read())
    except urllib.error.HTTPError as e:
        return e.code, json.loads(e.read())


def test_session_round_trip(server_port):
    st, doc = call(server_port, "POST", "/api/sessions", {"quiver": QT})
    assert st == 200
    sid = doc["id"]

    st, doc = call(server_port, "POST", f"/api/sessions/{sid}/mutate", {"vertex": "1"})
    assert st == 200
    assert doc["cluster"]["1"] == "(x2*x3 + 1)/(x1)"
    assert doc["history"] == ["1"]

    st, doc = call(server_port, "GET", f"/api/sessions/{sid}")
    assert doc["cluster"]["1"] == "(x2*x3 + 1)/(x1)"

    st, doc = call(server_port, "POST", f"/api/sessions/{sid}/undo")
    assert doc["cluster"]["1"] == "x1"
    assert doc["history"] == []


def test_undo_on_fresh_session_is_a_no_op(server_port):
    _, doc = call(server_port, "POST", "/api/sessions", {"quiver": QT})
    sid = doc["id"]
    st, doc = call(server_port, "POST", f"/api/sessions/{sid}/undo")
    assert st == 200 and doc["history"] == []


def test_replay_determinism(server_port):
    states = []
    for _ in range(2):
        _, doc = call(server_port, "POST", "/api/sessions", {"quiver": QT})
        sid = doc["id"]
        for v in ["1", "2", "1", "3"]:
            _, doc = call(server_port, "POST", f"/api/sessions/{sid}/mutate", {"vertex": v})
        doc.pop("id")
        states.append(doc)
    assert states[0] == states[1]


def test_analysis_endpoints(server_port):
    _, doc = call(server_port, "POST", "/api/sessions", {"quiver": QT})
    sid = doc["id"]

    st, doc = call(server_port, "GET", f"/api/sessions/{sid}/op-equivalence?depth=6")
    assert doc["found"] and doc["sequence"] == []

    st, doc = call(server_port, "GET", f"/api/sessions/{sid}/zq?lo=-1&hi=0")
    assert len(doc["quiver"]["vertices"]) == 6

    st, doc = call(server_port, "GET", f"/api/sessions/{sid}/embedding")
    assert st == 200 and doc["verification"]["ok"]

    st, doc = call(server_port, "GET", f"/api/sessions/{sid}/sigma")
    assert st == 200 and doc["verification"]["ok"]

    st, doc = call(
        server_port, "GET", f"/api/sessions/{sid}/inverse-automorphism?involutive=true"
    )
    assert doc["witness"]["images"]["x1"] == "(x1 + x2*x3^2 + x3)/(x1*x2)"


def test_error_envelopes(server_port):
    st, doc = call(server_port, "GET", "/api/sessions/nope")
    assert st == 404 and doc["error"]["code"] == "unknown_session"

    _, doc = call(server_port, "POST", "/api/sessions", {"quiver": QT})
    sid = doc["id"]
    st, doc = call(server_port, "POST", f"/api/sessions/{sid}/mutate", {"vertex": "9"})
    assert st == 422 and doc["error"]["code"] == "unknown_vertex"

    st, doc = call(server_port, "POST", "/api/sessions", {})
    assert st == 422 and doc["error"]["code"] == "missing_quiver"

    bad = {"vertices": ["1", "2"], "arrows": [
        {"id": "a", "source": "1", "target": "2"},
        {"id": "b", "source": "2", "target": "1"},
    ]}
    st, doc = call(server_port, "POST", "/api/sessions", {"quiver": bad})
    assert st == 422 and doc["error"]["code"] == "bad_quiver"


def test_concurrent_mutations_remain_serialized(server_port):
    _, doc = call(server_port, "POST", "/api/sessions", {"quiver": A3})
    sid = doc["id"]
    errors = []

    def worker(v):
        try:
            call(server_port, "POST", f"/api/sessions/{sid}/mutate", {"vertex": v})
        except Exception as e:  # pragma: no cover - diagnostic only
            errors.append(e)

    threads = [threading.Thread(target=worker, args=(v,)) for v in "121212"]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert not errors
    _, doc = call(server_port, "GET", f"/api/sessions/{sid}")
    assert len(doc["history"]) == 6
    # replaying the recorded history must reproduce the state exactly
    _, fresh = call(server_port, "POST", "/api/sessions", {"quiver": A3})
    fid = fresh["id"]
    for v in doc["history"]:
        _, last = call(server_port, "POST", f"/api/sessions/{fid}/mutate", {"vertex": v})
    assert last["cluster"] == doc["cluster"]
    assert last["quiver"] == doc["quiver"]
