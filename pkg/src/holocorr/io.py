"""File formats: point-cloud CSV, PGM rasters, deterministic JSON."""

from __future__ import annotations

import io as _io
import json
import math
from pathlib import Path

import numpy as np

from .cloud import PointCloud


def _fmt(v: float) -> str:
    return repr(float(v))


def dumps_json(obj) -> str:
    """Sorted-key, indented JSON with a trailing newline: byte-stable for equal inputs."""
    return json.dumps(_plain(obj), sort_keys=True, indent=2, allow_nan=False) + "\n"


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        if math.isnan(v):
            return None
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, complex):
        return [_plain(obj.real), _plain(obj.imag)]
    return obj


def write_text(path, text: str):
    Path(path).write_text(text, encoding="utf-8", newline="\n")


def write_json(obj, path):
    write_text(path, dumps_json(obj))


def cloud_csv(cloud: PointCloud) -> str:
    """``re,im`` rows for the finite points; a comment line records the point at infinity."""
    buf = _io.StringIO()
    buf.write(f"# points={len(cloud)} infinite={cloud.n_infinite()} grid_res={_fmt(cloud.grid_res)}\n")
    buf.write("re,im\n")
    for z in cloud.finite:
        buf.write(f"{_fmt(z.real)},{_fmt(z.imag)}\n")
    return buf.getvalue()


def write_cloud_csv(cloud: PointCloud, path):
    write_text(path, cloud_csv(cloud))


def read_cloud_csv(path) -> PointCloud:
    grid_res = 0.0
    n_inf = 0
    rows = []
    for line in Path(path).read_text().splitlines():
        if line.startswith("#"):
            for tok in line[1:].split():
                k, _, v = tok.partition("=")
                if k == "grid_res":
                    grid_res = float(v)
                elif k == "infinite":
                    n_inf = int(v)
            continue
        if not line or line.startswith("re"):
            continue
        a, b = line.split(",")
        rows.append(complex(float(a), float(b)))
    pts = np.array(rows + [complex(math.inf, 0)] * n_inf, dtype=complex)
    return PointCloud(pts, grid_res)


def table_csv(header, rows) -> str:
    lines = [",".join(header)]
    for r in rows:
        lines.append(",".join(_fmt(v) if isinstance(v, float) else str(v) for v in r))
    return "\n".join(lines) + "\n"


def pgm_bytes(img: np.ndarray) -> bytes:
    """Binary PGM (P5, maxval 255), row-major with the origin at the top-left."""
    img = np.ascontiguousarray(img, dtype=np.uint8)
    if img.ndim != 2:
        raise ValueError("PGM images are 2-D")
    h, w = img.shape
    return f"P5\n{w} {h}\n255\n".encode("ascii") + img.tobytes()


def write_pgm(img: np.ndarray, path):
    Path(path).write_bytes(pgm_bytes(img))


def read_pgm(path) -> np.ndarray:
    data = Path(path).read_bytes()
    parts = data.split(maxsplit=4)
    if parts[0] != b"P5":
        raise ValueError("not a binary PGM")
    w, h, maxval = int(parts[1]), int(parts[2]), int(parts[3])
    if maxval != 255:
        raise ValueError("only maxval 255 is supported")
    body = parts[4]
    return np.frombuffer(body[: w * h], np.uint8).reshape(h, w).copy()


def write_png(img: np.ndarray, path):
    """PNG output through Pillow, which is an optional dependency."""
    try:
        from PIL import Image
    except ImportError as e:  # pragma: no cover
        raise RuntimeError("PNG output needs Pillow; install holocorr[png]") from e
    Image.fromarray(np.asarray(img, np.uint8), mode="L").save(path, optimize=False)
