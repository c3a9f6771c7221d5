"""Command-line front end.

Every command builds a correspondence from a family name and parameters (or inline JSON),
runs one pipeline and writes deterministic artifacts. Invalid configuration
exits with status 2 and a JSON object on stderr naming each bad field;
numerical failures exit with status 1.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import numpy as np

from . import io as hio
from .correspondence import Correspondence
from .dimension import ReportConfig, hd_delta_report
from .errors import BranchError, HolocorrError
from .families import bullett_penrose, from_rational_inverse, llmm
from .measure import conformality_residuals, patterson_sullivan
from .orbits import limit_set, render
from .poincare import critical_exponent
from .cloud import PointCloud

FAMILIES = ("rational-inverse", "bullett-penrose", "llmm")
COMMANDS = ("limitset", "delta", "measure", "conformality", "report", "fixedpoints")
DEFAULT_DEPTH = {"limitset": 30, "delta": 18, "measure": 12, "conformality": 16,
                 "report": 20, "fixedpoints": 0}


class ConfigError(Exception):
    def __init__(self, problems: dict):
        super().__init__("invalid configuration")
        self.problems = problems


@dataclass
class RunConfig:
    command: str = "report"
    family: str | None = None
    correspondence: str | None = None
    p: list | None = None
    q: list | None = None
    a: complex | None = None
    x: complex = 2 + 0j
    depth: int | None = None
    burn_in: int | None = None
    grid_res: float = 1e-3
    s_lo: float = 0.25
    s_hi: float = 2.5
    tol: float = 1e-3
    s: float | None = None
    delta: float | None = None
    radius: float = 0.3
    n_disks: int = 10
    window: list | None = None
    resolution: list | None = None
    png: bool = False
    pgm: bool = False
    out: str | None = None
    threads: int | None = None
    seed: int = 0

    def to_json(self) -> dict:
        d = asdict(self)
        d.pop("out")
        return hio._plain(d)


# ------------------------------------------------------------------ parsing
def parse_complex(text) -> complex:
    """``re``, ``re+imi``, ``imi`` or ``inf``; numbers pass through."""
    if isinstance(text, (int, float, complex)):
        return complex(text)
    if isinstance(text, (list, tuple)) and len(text) == 2:
        return complex(float(text[0]), float(text[1]))
    t = str(text).strip().replace(" ", "")
    if t.lower() in ("inf", "infinity", "oo"):
        return complex(math.inf, 0)
    return complex(t.replace("i", "j"))


def parse_coeffs(text) -> list:
    if isinstance(text, (list, tuple)):
        return [parse_complex(v) for v in text]
    return [parse_complex(v) for v in str(text).split(",") if v.strip()]


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="holocorr", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", help="JSON file whose keys override the flags")
        sp.add_argument("--family", choices=FAMILIES)
        sp.add_argument("--correspondence", help="inline JSON or @file with a serialized correspondence")
        sp.add_argument("--p", help="ascending coefficients, e.g. 0.25,0,1 or 1+2i,0,1")
        sp.add_argument("--q", help="ascending denominator coefficients (default 1)")
        sp.add_argument("--a", help="Bullett-Penrose parameter")
        sp.add_argument("--x", help="basepoint (re, re+imi or inf)")
        sp.add_argument("--depth", type=int)
        sp.add_argument("--burn-in", dest="burn_in", type=int)
        sp.add_argument("--grid-res", dest="grid_res", type=float)
        sp.add_argument("--s-lo", dest="s_lo", type=float)
        sp.add_argument("--s-hi", dest="s_hi", type=float)
        sp.add_argument("--tol", type=float)
        sp.add_argument("--s", type=float, help="measure exponent")
        sp.add_argument("--delta", type=float, help="conformality exponent")
        sp.add_argument("--radius", type=float, help="chordal radius of test disks")
        sp.add_argument("--n-disks", dest="n_disks", type=int)
        sp.add_argument("--window", help="xmin,xmax,ymin,ymax for rasters")
        sp.add_argument("--resolution", help="nx,ny for rasters")
        sp.add_argument("--pgm", action="store_true", default=None, help="also write a PGM raster")
        sp.add_argument("--png", action="store_true", default=None, help="also write a PNG raster")
        sp.add_argument("--out", help="output directory")
        sp.add_argument("--threads", type=int, help="worker threads (default $HOLOCORR_THREADS or 1)")
        sp.add_argument("--seed", type=int)
    return ap


def make_config(ns: argparse.Namespace) -> RunConfig:
    raw = {k: v for k, v in vars(ns).items() if v is not None and k != "config"}
    if ns.config:
        try:
            extra = json.loads(Path(ns.config).read_text())
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError({"config": f"unreadable: {e}"})
        if not isinstance(extra, dict):
            raise ConfigError({"config": "must be a JSON object"})
        raw.update({k.replace("-", "_"): v for k, v in extra.items()})
    names = {f.name for f in fields(RunConfig)}
    problems = {k: "unknown field" for k in raw if k not in names}
    cfg = RunConfig()
    conv = {
        "p": parse_coeffs, "q": parse_coeffs, "a": parse_complex, "x": parse_complex,
        "window": lambda t: [float(v) for v in (t if isinstance(t, list) else str(t).split(","))],
        "resolution": lambda t: [int(v) for v in (t if isinstance(t, list) else str(t).split(","))],
    }
    for k, v in raw.items():
        if k not in names:
            continue
        try:
            setattr(cfg, k, conv[k](v) if k in conv else v)
        except (ValueError, TypeError) as e:
            problems[k] = f"cannot parse {v!r}: {e}"
    if cfg.threads is None:
        env = os.environ.get("HOLOCORR_THREADS")
        try:
            cfg.threads = int(env) if env else 1
        except ValueError:
            problems["threads"] = f"HOLOCORR_THREADS={env!r} is not an integer"
    if cfg.depth is None:
        cfg.depth = DEFAULT_DEPTH[cfg.command]
    problems.update(validate(cfg))
    if problems:
        raise ConfigError(problems)
    return cfg


def validate(cfg: RunConfig) -> dict:
    bad = {}

    def need(cond, field, msg):
        if not cond and field not in bad:
            bad[field] = msg

    if cfg.correspondence is None:
        need(cfg.family is not None, "family", "give --family or --correspondence")
        if cfg.family in ("rational-inverse", "llmm"):
            need(bool(cfg.p), "p", "coefficients required for this family")
        if cfg.family == "bullett-penrose":
            need(cfg.a is not None, "a", "parameter required for bullett-penrose")
    need(isinstance(cfg.depth, int) and 0 <= cfg.depth <= 10000, "depth", "must be an integer in [0, 10000]")
    if cfg.command in ("limitset", "report"):
        need(isinstance(cfg.depth, int) and cfg.depth >= 1, "depth", "must be >= 1 for limit sets")
        if cfg.burn_in is not None:
            need(isinstance(cfg.burn_in, int) and 0 <= cfg.burn_in < (cfg.depth or 0), "burn_in",
                 "must satisfy 0 <= burn_in < depth")
    if cfg.command in ("delta", "report"):
        need(isinstance(cfg.depth, int) and cfg.depth >= 4, "depth", "must be >= 4 to fit a growth rate")
    need(_num(cfg.grid_res) and 0 < cfg.grid_res < 2, "grid_res", "must lie in (0, 2)")
    need(_num(cfg.s_lo) and cfg.s_lo > 0, "s_lo", "must be positive")
    need(_num(cfg.s_hi) and _num(cfg.s_lo) and cfg.s_hi > cfg.s_lo, "s_hi", "must exceed s_lo")
    need(_num(cfg.tol) and cfg.tol > 0, "tol", "must be positive")
    if cfg.command == "measure":
        need(cfg.s is not None, "s", "required for measure")
    if cfg.command == "conformality":
        need(cfg.delta is not None, "delta", "required for conformality")
    if cfg.s is not None:
        need(_num(cfg.s) and cfg.s > 0, "s", "must be positive")
    if cfg.delta is not None:
        need(_num(cfg.delta) and cfg.delta > 0, "delta", "must be positive")
    need(_num(cfg.radius) and 0 < cfg.radius < 2, "radius", "must lie in (0, 2)")
    need(isinstance(cfg.n_disks, int) and cfg.n_disks >= 1, "n_disks", "must be >= 1")
    need(isinstance(cfg.threads, int) and 1 <= cfg.threads <= 256, "threads", "must be in [1, 256]")
    need(isinstance(cfg.seed, int) and cfg.seed >= 0, "seed", "must be a nonnegative integer")
    if cfg.window is not None:
        w = cfg.window
        need(len(w) == 4 and w[1] > w[0] and w[3] > w[2], "window", "need xmin<xmax, ymin<ymax")
    if cfg.resolution is not None:
        r = cfg.resolution
        need(len(r) == 2 and min(r) >= 1, "resolution", "need two positive integers")
    return bad


def _num(v) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool) and math.isfinite(v)


def build_correspondence(cfg: RunConfig) -> Correspondence:
    if cfg.correspondence is not None:
        text = cfg.correspondence
        if isinstance(text, dict):
            return Correspondence.from_json(text)
        if text.startswith("@"):
            text = Path(text[1:]).read_text()
        return Correspondence.from_json(json.loads(text))
    q = cfg.q or [1.0]
    if cfg.family == "rational-inverse":
        return from_rational_inverse(cfg.p, q)
    if cfg.family == "bullett-penrose":
        return bullett_penrose(cfg.a)
    return llmm(cfg.p, q)


# ------------------------------------------------------------------ commands
class Outputs:
    """Collects named artifacts; writes them under ``out`` if given."""

    def __init__(self, out):
        self.out = Path(out) if out else None
        self.written = []
        if self.out:
            self.out.mkdir(parents=True, exist_ok=True)

    def text(self, name, content: str):
        if self.out:
            hio.write_text(self.out / name, content)
            self.written.append(name)

    def data(self, name, content: bytes):
        if self.out:
            (self.out / name).write_bytes(content)
            self.written.append(name)


def _raster(cfg: RunConfig, cloud: PointCloud, outs: Outputs, stem: str):
    window = cfg.window or _auto_window(cloud)
    res = cfg.resolution or [512, 512]
    img = render(cloud, window, res)
    if cfg.pgm or stem == "report":
        outs.data(f"{stem}.pgm", hio.pgm_bytes(img))
    if cfg.png and outs.out:
        hio.write_png(img, outs.out / f"{stem}.png")
        outs.written.append(f"{stem}.png")
    return window


def _auto_window(cloud: PointCloud):
    z = cloud.finite
    if len(z) == 0:
        return [-2.0, 2.0, -2.0, 2.0]
    z = z[np.abs(z) < 1e3]
    cx, cy = (z.real.min() + z.real.max()) / 2, (z.imag.min() + z.imag.max()) / 2
    h = max(z.real.max() - z.real.min(), z.imag.max() - z.imag.min()) * 0.55 + 1e-3
    return [float(cx - h), float(cx + h), float(cy - h), float(cy + h)]


def cmd_limitset(cfg, c, outs):
    cloud = limit_set(c, cfg.x, cfg.depth, cfg.burn_in, cfg.grid_res, threads=cfg.threads)
    outs.text("limitset.csv", hio.cloud_csv(cloud))
    window = _raster(cfg, cloud, outs, "limitset")
    return {"points": len(cloud), "infinite": cloud.n_infinite(), "window": window,
            "depth": cfg.depth, "grid_res": cfg.grid_res}


def cmd_delta(cfg, c, outs):
    est = critical_exponent(c, cfg.x, cfg.s_lo, cfg.s_hi, cfg.tol, cfg.depth, threads=cfg.threads)
    outs.text("delta.json", hio.dumps_json(est.to_json()))
    outs.text("delta_samples.csv", hio.table_csv(["s", "rho"], est.samples))
    res = est.to_json()
    res["samples"] = [list(p) for p in est.samples]
    return res


def cmd_measure(cfg, c, outs):
    m = patterson_sullivan(c, cfg.x, cfg.s, cfg.depth, threads=cfg.threads)
    outs.text("measure.json", hio.dumps_json(m.to_json()))
    return {"s": cfg.s, "depth": cfg.depth, "atoms": len(m),
            "level_masses": m.level_masses().tolist()}


def cmd_conformality(cfg, c, outs):
    s = cfg.s if cfg.s is not None else cfg.delta
    m = patterson_sullivan(c, cfg.x, s, cfg.depth, threads=cfg.threads)
    rng = np.random.default_rng(cfg.seed)
    deep = np.nonzero(m.levels == m.depth)[0]
    reports = []
    tries = 0
    while len(reports) < cfg.n_disks and tries < 50 * cfg.n_disks:
        tries += 1
        ctr = complex(m.points[deep[rng.integers(len(deep))]])
        if not np.isfinite(ctr):
            continue
        try:
            r = conformality_residuals(m, c, ctr, cfg.radius, [cfg.delta])[0]
        except BranchError:
            continue
        reports.append(r.to_json())
    result = {"seed": cfg.seed, "s": s, "depth": cfg.depth, "reports": reports}
    outs.text("conformality.json", hio.dumps_json(result))
    return result


def cmd_report(cfg, c, outs):
    rc = ReportConfig(depth=cfg.depth, burn_in=cfg.burn_in, grid_res=cfg.grid_res,
                      s_lo=cfg.s_lo, s_hi=cfg.s_hi, tol=cfg.tol, threads=cfg.threads)
    rep = hd_delta_report(c, cfg.x, rc)
    cloud = limit_set(c, cfg.x, cfg.depth, cfg.burn_in, cfg.grid_res, threads=cfg.threads)
    outs.text("report_cloud.csv", hio.cloud_csv(cloud))
    outs.text("report_boxes.csv", hio.table_csv(["scale", "count"],
                                                zip(rep["box"]["scales"], rep["box"]["counts"])))
    _raster(cfg, cloud, outs, "report")
    outs.text("report.json", hio.dumps_json(rep))
    return rep


def cmd_fixedpoints(cfg, c, outs):
    res = {"correspondence": c.to_json(), "fixed_points": [f.to_json() for f in c.fixed_points()]}
    outs.text("fixedpoints.json", hio.dumps_json(res))
    return res


COMMAND_FUNCS = {
    "limitset": cmd_limitset, "delta": cmd_delta, "measure": cmd_measure,
    "conformality": cmd_conformality, "report": cmd_report, "fixedpoints": cmd_fixedpoints,
}


def _fail(code: int, payload: dict) -> int:
    sys.stderr.write(hio.dumps_json(payload))
    return code


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        cfg = make_config(ns)
    except ConfigError as e:
        return _fail(2, {"error": "invalid configuration", "fields": e.problems})
    try:
        c = build_correspondence(cfg)
        outs = Outputs(cfg.out)
        result = COMMAND_FUNCS[cfg.command](cfg, c, outs)
    except (HolocorrError, ValueError, OSError) as e:
        return _fail(1, {"error": type(e).__name__, "message": str(e)})
    summary = {"command": cfg.command, "config": cfg.to_json(), "result": result,
               "files": outs.written}
    sys.stdout.write(hio.dumps_json(summary))
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
