"""HTTP translation service implementing the toolkit's remote contract:

    POST {"text": [...], "src": "...", "tgt": "..."}
    ->   {"translations": [...]}
"""

from __future__ import annotations

import json
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from .translate import load_model, translate_texts


def make_server(model_id: str, host: str = "127.0.0.1", port: int = 8752,
                batch_size: int = 8, num_beams: int = 1) -> ThreadingHTTPServer:
    tokenizer, model = load_model(model_id)

    class Handler(BaseHTTPRequestHandler):
        def do_POST(self):
            try:
                length = int(self.headers.get("Content-Length", 0))
                payload = json.loads(self.rfile.read(length))
                texts = payload["text"]
                if not isinstance(texts, list):
                    raise ValueError("'text' must be a list")
            except (ValueError, KeyError, json.JSONDecodeError) as exc:
                self._reply(400, {"error": str(exc)})
                return
            translations = translate_texts(
                tokenizer, model, [str(t) for t in texts],
                payload.get("src"), payload.get("tgt"),
                batch_size=batch_size, num_beams=num_beams,
            )
            self._reply(200, {"translations": translations})

        def _reply(self, status, payload):
            body = json.dumps(payload, ensure_ascii=False).encode("utf-8")
            self.send_response(status)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)

        def log_message(self, *args):
            pass

    return ThreadingHTTPServer((host, port), Handler)
