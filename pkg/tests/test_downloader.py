import http.server
import json
import threading

import pytest

from tabletalk.downloader import fetch, fetch_tables, load_url_config


@pytest.fixture(scope="module")
def file_server():
    payload = b"Num_Acc,an\n1,2019\n"
    hits = []

    class Handler(http.server.BaseHTTPRequestHandler):
        def do_GET(self):
            hits.append(self.path)
            self.send_response(200)
            self.send_header("content-type", "text/csv")
            self.end_headers()
            self.wfile.write(payload)

        def log_message(self, *args):
            pass

    server = http.server.HTTPServer(("127.0.0.1", 0), Handler)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{server.server_port}", payload, hits
    server.shutdown()


def test_fetch_downloads_and_writes_checksum(file_server, tmp_path):
    base, payload, _ = file_server
    dest = tmp_path / "characteristics.csv"
    path = fetch(f"{base}/any.csv", dest)
    assert path.read_bytes() == payload
    sidecar = dest.with_suffix(".csv.sha256")
    assert sidecar.exists()
    assert len(sidecar.read_text().strip()) == 64


def test_fetch_uses_cache_when_checksum_matches(file_server, tmp_path):
    base, _, hits = file_server
    dest = tmp_path / "data.csv"
    fetch(f"{base}/x.csv", dest)
    before = len(hits)
    fetch(f"{base}/x.csv", dest)
    assert len(hits) == before  # second call served from cache


def test_fetch_redownloads_on_corruption(file_server, tmp_path):
    base, payload, hits = file_server
    dest = tmp_path / "data.csv"
    fetch(f"{base}/x.csv", dest)
    dest.write_bytes(b"tampered")
    before = len(hits)
    fetch(f"{base}/x.csv", dest)
    assert len(hits) == before + 1
    assert dest.read_bytes() == payload


def test_fetch_tables_from_config(file_server, tmp_path):
    base, payload, _ = file_server
    config = tmp_path / "urls.json"
    config.write_text(json.dumps({"tables": {"characteristics": f"{base}/c.csv"}}))
    paths = fetch_tables(config, tmp_path / "cache")
    assert paths["characteristics"].read_bytes() == payload


def test_url_config_validation(tmp_path):
    config = tmp_path / "bad.json"
    config.write_text(json.dumps({"tables": {}}))
    with pytest.raises(ValueError):
        load_url_config(config)
