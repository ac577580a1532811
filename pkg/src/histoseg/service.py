"""Stateful HTTP session API for the interactive tuning loop.

Each session caches the uploaded image, its YIQ planes and histogram.
Segment and extract steps are deterministic functions of the stored
image and the request parameters, so the workbench can replay or
compare settings.  Per-session operations run under a lock; sessions
expire after an idle TTL.
"""

from __future__ import annotations

import base64
import io
import os
import threading
import time
import uuid
from dataclasses import dataclass, field

from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse, PlainTextResponse
from PIL import Image

from .analysis import canny_edges, mssim
from .errors import DecodeError, DomainError
from .extraction import Fill, SegmentSelection, binarize, extract_object
from .histogram_stats import build_histogram
from .image_core import GrayImage, decode_image, encode_png, luminance_gray, rgb_to_yiq
from .thresholding import Methodology, apply_segmentation, compute_thresholds

PREVIEW_MAX_EDGE = 1024


@dataclass
class ServiceConfig:
    max_upload_bytes: int = 32 * 1024 * 1024
    session_ttl_seconds: float = 3600.0

    @classmethod
    def from_env(cls) -> "ServiceConfig":
        return cls(
            max_upload_bytes=int(os.environ.get("HISTOSEG_MAX_BYTES", 32 * 1024 * 1024)),
            session_ttl_seconds=float(os.environ.get("HISTOSEG_TTL", 3600)),
        )


@dataclass
class Session:
    image: object
    yiq: object
    gray: GrayImage
    histogram: object
    lock: threading.Lock = field(default_factory=threading.Lock)
    last_used: float = field(default_factory=time.monotonic)
    latest_segmented: object = None
    latest_thresholds: object = None
    artifacts: dict = field(default_factory=dict)
    history: list = field(default_factory=list)


def _preview_png(gray_or_rgb) -> str:
    """Base64 PNG downscaled to a max edge for transport."""
    data = encode_png(gray_or_rgb)
    img = Image.open(io.BytesIO(data))
    if max(img.size) > PREVIEW_MAX_EDGE:
        scale = PREVIEW_MAX_EDGE / max(img.size)
        size = (max(1, int(img.size[0] * scale)), max(1, int(img.size[1] * scale)))
        img = img.resize(size, Image.NEAREST)
        buf = io.BytesIO()
        img.save(buf, format="PNG")
        data = buf.getvalue()
    return base64.b64encode(data).decode("ascii")


def create_app(config: ServiceConfig | None = None) -> FastAPI:
    config = config or ServiceConfig.from_env()
    app = FastAPI(title="histoseg session service")
    sessions: dict[str, Session] = {}
    registry_lock = threading.Lock()

    def _error(status: int, message: str) -> JSONResponse:
        return JSONResponse(status_code=status, content={"error": message})

    def _get_session(session_id: str) -> Session | None:
        now = time.monotonic()
        with registry_lock:
            expired = [
                sid
                for sid, s in sessions.items()
                if now - s.last_used > config.session_ttl_seconds
            ]
            for sid in expired:
                del sessions[sid]
            session = sessions.get(session_id)
            if session is not None:
                session.last_used = now
            return session

    @app.post("/sessions", status_code=201)
    async def create_session(request: Request):
        body = await request.body()
        if len(body) > config.max_upload_bytes:
            return _error(413, "upload exceeds size limit")
        if not body:
            return _error(415, "empty body is not a decodable image")
        try:
            image = decode_image(body)
        except DecodeError as exc:
            return _error(415, str(exc))
        yiq = rgb_to_yiq(image)
        gray = luminance_gray(yiq)
        session = Session(
            image=image, yiq=yiq, gray=gray, histogram=build_histogram(gray)
        )
        session_id = uuid.uuid4().hex
        with registry_lock:
            sessions[session_id] = session
        return {"id": session_id}

    @app.post("/sessions/{session_id}/segment")
    async def segment_step(session_id: str, request: Request):
        session = _get_session(session_id)
        if session is None:
            return _error(404, "unknown session")
        payload = await request.json()
        try:
            method = Methodology(str(payload.get("method", "m1")))
            n = int(payload.get("n", 1))
            kappa1 = float(payload.get("kappa1", 1.0))
            kappa2 = float(payload.get("kappa2", 1.0))
        except (ValueError, TypeError) as exc:
            return _error(422, f"bad parameters: {exc}")
        with session.lock:
            try:
                ts = compute_thresholds(session.histogram, method, n, kappa1, kappa2)
            except DomainError as exc:
                return _error(422, str(exc))
            seg = apply_segmentation(session.gray, ts)
            quality = mssim(session.gray, seg.mapped).mssim
            session.latest_thresholds = ts
            session.latest_segmented = seg
            session.artifacts["segmented.png"] = encode_png(seg.mapped)
            session.history.append(
                {
                    "time": time.time(),
                    "method": method.value,
                    "n": n,
                    "kappa1": kappa1,
                    "kappa2": kappa2,
                    "mssim": quality,
                }
            )
            return {
                "thresholds": ts.to_dict(),
                "mssim": quality,
                "preview_png": _preview_png(seg.mapped),
            }

    @app.post("/sessions/{session_id}/extract")
    async def extract_step(session_id: str, request: Request):
        session = _get_session(session_id)
        if session is None:
            return _error(404, "unknown session")
        payload = await request.json()
        with session.lock:
            if session.latest_segmented is None:
                return _error(409, "no segmentation in this session yet")
            try:
                fill = Fill(str(payload.get("fill", "black")))
                segments = payload.get("segments")
                if not isinstance(segments, list):
                    raise DomainError("segments must be a list of indices")
                sel = SegmentSelection(
                    selected=frozenset(int(i) for i in segments), fill=fill
                )
                mask = binarize(session.latest_segmented, sel)
            except (DomainError, ValueError) as exc:
                return _error(422, str(exc))
            result = extract_object(session.yiq, mask, fill)
            edges = canny_edges(result.extracted_y)
            session.artifacts["mask.png"] = encode_png(mask.to_gray())
            session.artifacts["extracted.png"] = encode_png(result.extracted_rgb)
            session.artifacts["edges.png"] = encode_png(edges.to_gray())
            return {
                "extracted_png": base64.b64encode(session.artifacts["extracted.png"]).decode(),
                "mask_png": base64.b64encode(session.artifacts["mask.png"]).decode(),
                "edges_png": base64.b64encode(session.artifacts["edges.png"]).decode(),
            }

    @app.get("/sessions/{session_id}/histograms")
    async def get_histograms(session_id: str, format: str = "json"):
        session = _get_session(session_id)
        if session is None:
            return _error(404, "unknown session")
        with session.lock:
            original = session.histogram
            segmented = (
                build_histogram(session.latest_segmented.mapped)
                if session.latest_segmented is not None
                else None
            )
        if format == "csv":
            text = "original\n" + original.to_csv()
            if segmented is not None:
                text += "segmented\n" + segmented.to_csv()
            return PlainTextResponse(text, media_type="text/csv")
        body = {"original": [int(c) for c in original.counts]}
        if segmented is not None:
            body["segmented"] = [int(c) for c in segmented.counts]
        return body

    @app.get("/sessions/{session_id}/artifacts/{name}")
    async def get_artifact(session_id: str, name: str):
        session = _get_session(session_id)
        if session is None:
            return _error(404, "unknown session")
        with session.lock:
            data = session.artifacts.get(name)
        if data is None:
            return _error(404, f"no artifact named {name!r}")
        return Response(content=data, media_type="image/png")

    return app
