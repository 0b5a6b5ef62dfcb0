"""Timing harness: workload sweeps, log-log scaling fits, CSV and SVG output."""
from __future__ import annotations

import csv
import gc
import math
import statistics
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable
from xml.sax.saxutils import escape

from . import generators
from .bulk import bulk_resolve
from .engine import resolve_all_keys
from .errors import InsufficientData
from .oracle import DEFAULT_ATOM_LIMIT, oracle_resolve

SUITES = ("ra", "oracle", "bulk")
FAMILIES = ("cycles", "scalefree", "nested", "bulk")
CSV_HEADER = [
    "suite", "family", "n_users", "n_mappings", "n_objects", "conflict_fraction",
    "trials", "elapsed_mean_s", "elapsed_min_s", "elapsed_max_s",
]
MIN_FIT_SIZE = 1000


@dataclass(frozen=True)
class GenSpec:
    family: str
    params: dict = field(default_factory=dict)
    seed: int = 0

    __hash__ = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        for name, value in self.params.items():
            if name.endswith("fraction"):
                lo_ok = value >= 0 if self.family == "bulk" else value > 0
                if not (lo_ok and value <= 1):
                    raise ValueError(f"{name} out of range: {value}")
            elif value <= 0:
                raise ValueError(f"{name} must be positive")

    @property
    def label(self) -> str:
        args = ",".join(f"{k}={v}" for k, v in sorted(self.params.items()))
        return f"{self.family}:{args}:seed={self.seed}"

    def build(self):
        """The network for this spec, or ``(topology, beliefs)`` for the bulk family."""
        p = dict(self.params)
        if self.family == "cycles":
            return generators.gen_cycle_clusters(p["n_clusters"], self.seed)
        if self.family == "nested":
            return generators.gen_nested_cycles(p["n_users"], self.seed)
        if self.family == "scalefree":
            fraction = p.pop("sample_fraction", 1.0)
            net = generators.gen_scale_free(p.pop("n_nodes"), p.pop("edges_per_node", 2), self.seed, **p)
            return generators.sample_edges(net, fraction, self.seed)
        return (
            generators.bulk_topology(),
            generators.gen_bulk_workload(p["n_objects"], p.get("conflict_fraction", 0.0), self.seed),
        )


@dataclass(frozen=True)
class BenchRecord:
    suite: str
    family: str
    n_users: int
    n_mappings: int
    n_objects: int
    conflict_fraction: float
    trials: int
    elapsed: float
    elapsed_min: float
    elapsed_max: float
    times: tuple = field(default=(), compare=False)

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.elapsed <= 0:
            raise ValueError("elapsed must be positive")

    @property
    def size(self) -> int:
        """Problem size used for scaling fits: objects for bulk, users + mappings otherwise."""
        return self.n_objects if self.suite == "bulk" else self.n_users + self.n_mappings

    @property
    def per_element(self) -> float:
        return self.elapsed / self.size


@dataclass(frozen=True)
class ScalingFit:
    exponent: float
    r_squared: float
    n_points: int


def _prepare(suite: str, spec: GenSpec, atom_limit):
    """Build the workload (untimed); returns the call to time and the record's size fields."""
    workload = spec.build()
    if suite == "bulk":
        if spec.family != "bulk":
            raise ValueError("the bulk suite needs the bulk family")
        topology, table = workload
        sizes = (len(topology.users), len(topology.mappings),
                 spec.params["n_objects"], spec.params.get("conflict_fraction", 0.0))
        return (lambda: bulk_resolve(topology, table)), sizes
    if spec.family == "bulk":
        raise ValueError("the bulk family only runs in the bulk suite")
    net = workload
    sizes = (len(net.users), len(net.mappings), 0, 0.0)
    if suite == "ra":
        return (lambda: resolve_all_keys(net)), sizes
    keys = net.keys()
    return (lambda: [oracle_resolve(net, k, atom_limit) for k in keys]), sizes


def time_calls(calls: list[Callable[[], object]], trials: int) -> list[list[float]]:
    """Per-call trial times: one discarded warm-up each, collector paused while timing.

    Calls take turns within every trial round, so with several calls a slow
    phase of the machine is shared by all of them instead of hitting one.
    """
    for fn in calls:
        fn()
    gc.collect()
    was_enabled = gc.isenabled()
    gc.disable()
    try:
        out: list[list[float]] = [[] for _ in calls]
        for _ in range(trials):
            for fn, times in zip(calls, out):
                start = time.perf_counter()
                fn()
                times.append(time.perf_counter() - start)
    finally:
        if was_enabled:
            gc.enable()
    # perf_counter can tick coarser than a tiny call.
    return [[max(t, 1e-9) for t in times] for times in out]


def run_benchmark(suite: str, gen_specs, trials: int = 20, atom_limit: int | None = DEFAULT_ATOM_LIMIT,
                  interleave: bool = False) -> list[BenchRecord]:
    """Time each spec; generation is excluded and one warm-up call is discarded.

    With ``interleave`` the specs take turns trial by trial instead of running
    one after another (see :func:`time_calls`).  Use it when records are
    compared with each other as ratios.
    """
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}")
    specs = list(gen_specs)
    if not specs:
        raise ValueError("no workloads given")
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if interleave:
        prepared = [_prepare(suite, spec, atom_limit) for spec in specs]
        all_times = time_calls([call for call, _ in prepared], trials)
        all_sizes = [sizes for _, sizes in prepared]
    else:
        all_times, all_sizes = [], []
        for spec in specs:
            call, sizes = _prepare(suite, spec, atom_limit)
            all_times += time_calls([call], trials)
            all_sizes.append(sizes)
    records = []
    for spec, (n_users, n_mappings, n_objects, conflict), times in zip(specs, all_sizes, all_times):
        records.append(BenchRecord(
            suite, spec.label, n_users, n_mappings, n_objects, conflict,
            trials, statistics.fmean(times), min(times), max(times), tuple(times),
        ))
    return records


def fit_scaling_exponent(records, min_size: int = MIN_FIT_SIZE) -> ScalingFit:
    """Least-squares slope of log(elapsed) against log(size)."""
    pts = [(r.size, r.elapsed) for r in records if r.size >= min_size]
    if len(pts) < 4:
        raise InsufficientData(f"need at least 4 sizes >= {min_size}, got {len(pts)}")
    sizes = [s for s, _ in pts]
    if any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise InsufficientData("sizes must be strictly increasing")
    xs = [math.log(s) for s, _ in pts]
    ys = [math.log(e) for _, e in pts]
    slope, intercept = statistics.linear_regression(xs, ys)
    mean_y = statistics.fmean(ys)
    ss_tot = sum((y - mean_y) ** 2 for y in ys)
    ss_res = sum((y - (slope * x + intercept)) ** 2 for x, y in zip(xs, ys))
    r2 = 1.0 if ss_tot == 0 else max(0.0, 1 - ss_res / ss_tot)
    return ScalingFit(slope, r2, len(pts))


# -- CSV -----------------------------------------------------------------------

def emit_csv(records, path, raw_path=None) -> None:
    """Write one row per record; per-trial times go to ``raw_path`` if given."""
    records = list(records)
    if not records:
        raise ValueError("no records to write")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in records:
            w.writerow([
                r.suite, r.family, r.n_users, r.n_mappings, r.n_objects, repr(r.conflict_fraction),
                r.trials, repr(r.elapsed), repr(r.elapsed_min), repr(r.elapsed_max),
            ])
    if raw_path is not None:
        with open(raw_path, "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["suite", "family", "trial", "elapsed_s"])
            for r in records:
                for i, t in enumerate(r.times):
                    w.writerow([r.suite, r.family, i, repr(t)])


def load_csv(path) -> list[BenchRecord]:
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != CSV_HEADER:
            raise ValueError(f"unexpected bench CSV header {header}")
        out = []
        for row in reader:
            suite, family, nu, nm, no, cf, trials, mean, lo, hi = row
            out.append(BenchRecord(suite, family, int(nu), int(nm), int(no), float(cf),
                                   int(trials), float(mean), float(lo), float(hi)))
    return out


# -- SVG -----------------------------------------------------------------------

_COLOURS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]


def _series(records) -> dict[str, list[BenchRecord]]:
    kinds: dict[str, set] = {}
    for r in records:
        kinds.setdefault(r.suite, set()).add(r.family.split(":")[0])
    out: dict[str, list[BenchRecord]] = {}
    for r in records:
        name = r.suite if len(kinds[r.suite]) == 1 else f"{r.suite} / {r.family.split(':')[0]}"
        out.setdefault(name, []).append(r)
    for rs in out.values():
        rs.sort(key=lambda r: r.size)
    return out


def render_svg(records, title: str = "elapsed time vs problem size", width: int = 640, height: int = 420) -> str:
    records = list(records)
    if not records:
        raise ValueError("no records to plot")
    left, right, top, bottom = 70, 20, 40, 50
    xs = [math.log10(r.size) for r in records]
    ys = [math.log10(r.elapsed) for r in records]
    x0, x1 = math.floor(min(xs)), math.ceil(max(xs))
    y0, y1 = math.floor(min(ys)), math.ceil(max(ys))
    x1 = max(x1, x0 + 1)
    y1 = max(y1, y0 + 1)

    def px(lx):
        return left + (lx - x0) / (x1 - x0) * (width - left - right)

    def py(ly):
        return height - bottom - (ly - y0) / (y1 - y0) * (height - top - bottom)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">',
        f'<title>{escape(title)}</title>',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.1f}" y="20" text-anchor="middle" font-size="13">{escape(title)}</text>',
    ]
    for d in range(x0, x1 + 1):
        x = px(d)
        parts.append(f'<line x1="{x:.1f}" y1="{top}" x2="{x:.1f}" y2="{height - bottom}" stroke="#ddd"/>')
        parts.append(f'<text x="{x:.1f}" y="{height - bottom + 15}" text-anchor="middle">1e{d}</text>')
    for d in range(y0, y1 + 1):
        y = py(d)
        parts.append(f'<line x1="{left}" y1="{y:.1f}" x2="{width - right}" y2="{y:.1f}" stroke="#ddd"/>')
        parts.append(f'<text x="{left - 6}" y="{y + 4:.1f}" text-anchor="end">1e{d}</text>')
    parts.append(f'<text x="{width / 2:.1f}" y="{height - 12}" text-anchor="middle">size</text>')
    parts.append(f'<text x="16" y="{height / 2:.1f}" text-anchor="middle" '
                 f'transform="rotate(-90 16 {height / 2:.1f})">seconds</text>')
    for i, (name, rs) in enumerate(_series(records).items()):
        colour = _COLOURS[i % len(_COLOURS)]
        pts = " ".join(f"{px(math.log10(r.size)):.1f},{py(math.log10(r.elapsed)):.1f}" for r in rs)
        parts.append(f'<polyline fill="none" stroke="{colour}" stroke-width="2" points="{pts}">'
                     f'<title>{escape(name)}</title></polyline>')
        for r in rs:
            parts.append(f'<circle cx="{px(math.log10(r.size)):.1f}" cy="{py(math.log10(r.elapsed)):.1f}" '
                         f'r="3" fill="{colour}"/>')
        ly = top + 14 * i + 8
        parts.append(f'<line x1="{left + 10}" y1="{ly}" x2="{left + 30}" y2="{ly}" stroke="{colour}" stroke-width="2"/>')
        parts.append(f'<text x="{left + 35}" y="{ly + 4}">{escape(name)}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def emit_svg(records, path, title: str = "elapsed time vs problem size") -> None:
    Path(path).write_text(render_svg(records, title), encoding="utf-8")
