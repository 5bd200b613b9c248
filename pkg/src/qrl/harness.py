"""Batch front end: vertex reports, edge sweeps, bound tables, CSV/SVG output.

Every figure-of-merit evaluation is reduced to MeritReport rows with a fixed
CSV schema so that runs are comparable byte for byte (modulo wall time).
Sweep points are independent and may be fanned out to worker processes; rows
are sorted by the edge parameter before writing so the output order never
depends on scheduling.
"""

from __future__ import annotations

import configparser
import logging
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .capacity import (
    DEFAULT_CONFIG,
    OptimizerConfig,
    ProbeOptimum,
    best_probe_h2,
    correction_bits,
    delta_star,
    h2_conditional,
    one_shot_lower_bound,
)
from .channel import ProbeState, choi_bf, stinespring_isometry
from .fisher import (
    DEFAULT_ETA_SCHEDULE,
    QuadSpec,
    avg_qfi_at_probe,
    maximize_over_probe,
)
from .unitary import VERTICES, UnitaryParams, edge_point

log = logging.getLogger("qrl")

CSV_HEADER = (
    "edge,t,alpha_x,alpha_y,alpha_z,alpha_norm,metric,value,status,"
    "probe_phi1,probe_phi2,sigma_p1,sigma_p2,sigma_p3,wall_time_ms"
)
BOUND_HEADER = "epsilon,n,delta_star,correction,raw_bound,clamped_bound"

METRICS = ("h2", "qfi", "bound")
STATUSES = ("ok", "clamped", "divergent", "non-converged")


def _fmt(x) -> str:
    if x is None or x == "":
        return ""
    if isinstance(x, float) and math.isinf(x):
        return ""
    return f"{x:.12g}"


@dataclass(frozen=True)
class MeritReport:
    """One figure-of-merit evaluation at one tetrahedron point."""

    edge: str
    t: float
    alpha: tuple
    alpha_norm: float
    metric: str
    value: float
    status: str
    probe: tuple
    sigma: tuple
    wall_time_ms: float

    def __post_init__(self):
        if self.metric not in METRICS:
            raise ValueError(f"unknown metric {self.metric!r}")
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")
        norm = float(np.linalg.norm(self.alpha))
        if abs(norm - self.alpha_norm) > 1e-12:
            raise ValueError("alpha_norm does not match alpha")

    def csv_fields(self) -> list:
        probe = self.probe if self.probe is not None else ("", "")
        sigma = self.sigma if self.sigma is not None else ("", "", "")
        return [
            self.edge,
            _fmt(self.t),
            _fmt(self.alpha[0]),
            _fmt(self.alpha[1]),
            _fmt(self.alpha[2]),
            _fmt(self.alpha_norm),
            self.metric,
            _fmt(self.value),
            self.status,
            _fmt(probe[0]),
            _fmt(probe[1]),
            _fmt(sigma[0]),
            _fmt(sigma[1]),
            _fmt(sigma[2]),
            _fmt(self.wall_time_ms),
        ]


@dataclass(frozen=True)
class SweepConfig:
    """Settings for one edge sweep."""

    edge: str
    metric: str = "h2"
    samples: int = 41
    epsilon: float = 0.05
    n: int = 1000
    eta_schedule: tuple = DEFAULT_ETA_SCHEDULE
    seed: int = 0
    workers: int = None
    out: str = None
    svg: str = None
    h2_config: OptimizerConfig = DEFAULT_CONFIG
    quad: QuadSpec = QuadSpec()

    def __post_init__(self):
        if self.samples < 2:
            raise ValueError(f"samples must be >= 2, got {self.samples!r}")
        if self.metric not in METRICS:
            raise ValueError(f"metric must be one of {METRICS}, got {self.metric!r}")
        edge_point(self.edge, 0.0)  # validates the edge name


def _h2_report(edge: str, t: float, params: UnitaryParams, config: OptimizerConfig, started: float) -> MeritReport:
    opt = best_probe_h2(params, config)
    status = "ok" if opt.h2 > 0.0 else "clamped"
    if not opt.converged:
        status = "non-converged"
    return MeritReport(
        edge=edge,
        t=t,
        alpha=tuple(params.as_array()),
        alpha_norm=params.norm,
        metric="h2",
        value=max(0.0, opt.h2),
        status=status,
        probe=(opt.probe.phi1, opt.probe.phi2),
        sigma=opt.sigma.bloch,
        wall_time_ms=(time.perf_counter() - started) * 1e3,
    )


def _bound_report(edge: str, t: float, params: UnitaryParams, epsilon: float, n: int, config: OptimizerConfig, started: float) -> MeritReport:
    opt = best_probe_h2(params, config)
    res = one_shot_lower_bound(opt.h2, epsilon, n, sigma_opt=opt.sigma, probe_opt=opt.probe)
    status = "ok" if res.raw_bound > 0.0 else "clamped"
    if not opt.converged:
        status = "non-converged"
    return MeritReport(
        edge=edge,
        t=t,
        alpha=tuple(params.as_array()),
        alpha_norm=params.norm,
        metric="bound",
        value=res.clamped_bound,
        status=status,
        probe=(opt.probe.phi1, opt.probe.phi2),
        sigma=opt.sigma.bloch,
        wall_time_ms=(time.perf_counter() - started) * 1e3,
    )


def _qfi_report(edge: str, t: float, params: UnitaryParams, quad: QuadSpec, eta_schedule: tuple, started: float) -> MeritReport:
    res = maximize_over_probe(params, quad, eta_schedule)
    divergent = res.classification == "divergent"
    status = "divergent" if divergent else "ok"
    if not res.converged:
        status = "non-converged"
    return MeritReport(
        edge=edge,
        t=t,
        alpha=tuple(params.as_array()),
        alpha_norm=params.norm,
        metric="qfi",
        value=None if divergent else res.value,
        status=status,
        probe=(res.probe_opt.phi1, res.probe_opt.phi2),
        sigma=None,
        wall_time_ms=(time.perf_counter() - started) * 1e3,
    )


def _eval_point(cfg: SweepConfig, t: float) -> MeritReport:
    params, norm = edge_point(cfg.edge, t)
    started = time.perf_counter()
    try:
        if cfg.metric == "h2":
            return _h2_report(cfg.edge, t, params, cfg.h2_config, started)
        if cfg.metric == "bound":
            return _bound_report(cfg.edge, t, params, cfg.epsilon, cfg.n, cfg.h2_config, started)
        return _qfi_report(cfg.edge, t, params, cfg.quad, cfg.eta_schedule, started)
    except Exception:
        log.exception("point evaluation failed: edge=%s t=%s metric=%s", cfg.edge, t, cfg.metric)
        return MeritReport(
            edge=cfg.edge,
            t=t,
            alpha=tuple(params.as_array()),
            alpha_norm=norm,
            metric=cfg.metric,
            value=None,
            status="non-converged",
            probe=None,
            sigma=None,
            wall_time_ms=(time.perf_counter() - started) * 1e3,
        )


def run_edge_sweep(cfg: SweepConfig) -> list:
    """Evaluate the configured metric along the edge; write CSV/SVG if asked.

    Points are independent; failures are recorded per point and the sweep
    continues.  Results are sorted by t, so output is deterministic for any
    worker count.
    """
    ts = np.linspace(0.0, 1.0, cfg.samples)
    workers = cfg.workers or os.cpu_count() or 1
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(_eval_point, [cfg] * len(ts), ts))
    else:
        reports = [_eval_point(cfg, t) for t in ts]
    reports.sort(key=lambda r: r.t)
    if cfg.out:
        write_reports_csv(reports, cfg.out)
    if cfg.svg:
        write_sweep_svg(reports, cfg.svg)
    return reports


def run_vertex_report(
    vertex: str,
    epsilon: float,
    n: int,
    eta_schedule: tuple = DEFAULT_ETA_SCHEDULE,
    h2_config: OptimizerConfig = DEFAULT_CONFIG,
    quad: QuadSpec = QuadSpec(),
) -> list:
    """H2, capacity bound and averaged-QFI rows for a named vertex."""
    if vertex not in VERTICES:
        raise ValueError(f"vertex must be one of {sorted(VERTICES)}, got {vertex!r}")
    params = VERTICES[vertex]
    started = time.perf_counter()
    rows = [_h2_report(vertex, 0.0, params, h2_config, started)]
    started = time.perf_counter()
    rows.append(_bound_report(vertex, 0.0, params, epsilon, n, h2_config, started))
    started = time.perf_counter()
    rows.append(_qfi_report(vertex, 0.0, params, quad, eta_schedule, started))
    return rows


@dataclass(frozen=True)
class BoundTable:
    h2: float
    probe: ProbeState
    rows: tuple  # (epsilon, n, delta_star, correction, raw, clamped)


def run_bound_table(
    p: UnitaryParams,
    probe: ProbeState,
    epsilons,
    ns,
    config: OptimizerConfig = DEFAULT_CONFIG,
) -> BoundTable:
    """Bound grid over (epsilon, n); probe=None optimizes the probe first."""
    if probe is None:
        opt = best_probe_h2(p, config)
        h2, probe_used = opt.h2, opt.probe
    else:
        opt = h2_conditional(choi_bf(stinespring_isometry(p, probe)), config)
        h2, probe_used = opt.value, probe
    rows = []
    for eps in epsilons:
        ds = delta_star(eps)
        corr = correction_bits(eps)
        for n in ns:
            raw = h2 - corr / n
            rows.append((eps, int(n), ds, corr, raw, max(0.0, raw)))
    return BoundTable(h2=h2, probe=probe_used, rows=tuple(rows))


# --- file output -------------------------------------------------------------

def write_reports_csv(reports, path: str) -> None:
    lines = [CSV_HEADER]
    lines += [",".join(r.csv_fields()) for r in reports]
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def write_bound_csv(table: BoundTable, path: str) -> None:
    lines = [BOUND_HEADER]
    for eps, n, ds, corr, raw, clamped in table.rows:
        lines.append(",".join([_fmt(eps), str(n), _fmt(ds), _fmt(corr), _fmt(raw), _fmt(clamped)]))
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


_SVG_W, _SVG_H = 800, 600
_MARGIN = 70


def write_sweep_svg(reports, path: str) -> None:
    """Minimal static plot: one polyline per metric against alpha_norm."""
    series = {}
    for r in reports:
        if r.value is not None:
            series.setdefault(r.metric, []).append((r.alpha_norm, r.value))
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {_SVG_W} {_SVG_H}">',
        f'<rect width="{_SVG_W}" height="{_SVG_H}" fill="white"/>',
        f'<line x1="{_MARGIN}" y1="{_SVG_H - _MARGIN}" x2="{_SVG_W - _MARGIN}" y2="{_SVG_H - _MARGIN}" stroke="black"/>',
        f'<line x1="{_MARGIN}" y1="{_MARGIN}" x2="{_MARGIN}" y2="{_SVG_H - _MARGIN}" stroke="black"/>',
    ]
    pts_all = [p for pts in series.values() for p in pts]
    if pts_all:
        xs = [p[0] for p in pts_all]
        ys = [p[1] for p in pts_all]
        x0, x1 = min(xs), max(xs)
        y0, y1 = min(ys), max(ys)
        xspan = (x1 - x0) or 1.0
        yspan = (y1 - y0) or 1.0

        def sx(x):
            return _MARGIN + (x - x0) / xspan * (_SVG_W - 2 * _MARGIN)

        def sy(y):
            return _SVG_H - _MARGIN - (y - y0) / yspan * (_SVG_H - 2 * _MARGIN)

        colors = {"h2": "#1f77b4", "qfi": "#d62728", "bound": "#2ca02c"}
        for metric, pts in sorted(series.items()):
            coords = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in sorted(pts))
            parts.append(
                f'<polyline fill="none" stroke="{colors.get(metric, "black")}" points="{coords}"/>'
            )
        parts.append(
            f'<text x="{_MARGIN}" y="{_SVG_H - _MARGIN + 30}" font-size="14">{_fmt(x0)}</text>'
        )
        parts.append(
            f'<text x="{_SVG_W - _MARGIN - 40}" y="{_SVG_H - _MARGIN + 30}" font-size="14">{_fmt(x1)}</text>'
        )
        parts.append(f'<text x="{_MARGIN - 60}" y="{_SVG_H - _MARGIN}" font-size="14">{_fmt(y0)}</text>')
        parts.append(f'<text x="{_MARGIN - 60}" y="{_MARGIN + 10}" font-size="14">{_fmt(y1)}</text>')
    edges = sorted({r.edge for r in reports})
    metrics = sorted({r.metric for r in reports})
    parts.append(
        f'<text x="{_SVG_W / 2 - 60}" y="{_MARGIN - 30}" font-size="16">'
        f'{"+".join(edges)}: {"+".join(metrics)} vs |alpha|</text>'
    )
    parts.append(f'<text x="{_SVG_W / 2 - 30}" y="{_SVG_H - 20}" font-size="14">|alpha|</text>')
    parts.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(parts) + "\n")


def load_config(path: str) -> dict:
    """Plain key = value sections; values stay strings for the CLI to coerce."""
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise ValueError(f"config file {path!r} not found or unreadable")
    return {section: dict(parser.items(section)) for section in parser.sections()}


def point_report(
    p: UnitaryParams,
    probe: ProbeState = None,
    quad: QuadSpec = QuadSpec(),
    eta_schedule: tuple = DEFAULT_ETA_SCHEDULE,
) -> MeritReport:
    """Single averaged-QFI row at an arbitrary tetrahedron point."""
    started = time.perf_counter()
    if probe is None:
        res = maximize_over_probe(p, quad, eta_schedule)
    else:
        res = avg_qfi_at_probe(p, probe, quad, eta_schedule)
    divergent = res.classification == "divergent"
    status = "divergent" if divergent else "ok"
    if not res.converged:
        status = "non-converged"
    return MeritReport(
        edge="point",
        t=0.0,
        alpha=tuple(p.as_array()),
        alpha_norm=p.norm,
        metric="qfi",
        value=None if divergent else res.value,
        status=status,
        probe=(res.probe_opt.phi1, res.probe_opt.phi2),
        sigma=None,
        wall_time_ms=(time.perf_counter() - started) * 1e3,
    )
