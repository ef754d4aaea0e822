"""CSV, summary, and SVG emission for trajectory records.

CSV numbers are written with 9 significant digits by default (enough to
round-trip float64 voltages and gates at the recorded scales); the
environment variable ``HHRDNET_CSV_DIGITS`` overrides the digit count.
Writes are plain LF-terminated text, so repeated runs of the same
scenario on the same backend produce byte-identical files.
"""

from __future__ import annotations

import os

import numpy as np

from . import analysis
from .errors import ConfigError, DomainError
from .network import COMPONENTS, TrajectoryRecord

DEFAULT_CSV_DIGITS = 9
CSV_DIGITS_ENV = "HHRDNET_CSV_DIGITS"


def _sig_digits() -> int:
    raw = os.environ.get(CSV_DIGITS_ENV)
    if raw is None:
        return DEFAULT_CSV_DIGITS
    try:
        digits = int(raw)
    except ValueError:
        digits = -1
    if not 1 <= digits <= 17:
        raise ConfigError(f"{CSV_DIGITS_ENV} must be an integer in [1, 17], "
                          f"got {raw!r}")
    return digits


def _pos_label(x: float) -> str:
    return f"{x:.12g}"


def timeseries_columns(record: TrajectoryRecord) -> list:
    """Column names: t, then V,n,m,h per probe per neuron."""
    names = ["t"]
    for i in range(record.neuron_count):
        for node in record.probe_nodes:
            x = _pos_label(float(record.grid_x[node]))
            for comp in COMPONENTS:
                names.append(f"n{i + 1}_{comp}@x{x}")
    return names


def write_timeseries_csv(record: TrajectoryRecord, path) -> None:
    """Write the probe series; one row per recorded time."""
    digits = _sig_digits()
    names = timeseries_columns(record)
    n_rec = record.times.size
    cols = [record.times]
    for i in range(record.neuron_count):
        for p in range(len(record.probe_nodes)):
            for c in range(len(COMPONENTS)):
                cols.append(record.series[:, i, p, c])
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(",".join(names) + "\n")
        for r in range(n_rec):
            fh.write(",".join(f"{col[r]:.{digits}g}" for col in cols) + "\n")


def read_timeseries_csv(path):
    """Read a timeseries CSV back as ``(column_names, data)``."""
    with open(path, "r", encoding="utf-8") as fh:
        names = fh.readline().strip().split(",")
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    if data.shape[1] != len(names):
        raise DomainError(f"{path}: header names {len(names)} columns but rows "
                          f"have {data.shape[1]}")
    return names, data


def snapshot_filename(time: float) -> str:
    return f"snapshot_t{time:g}.csv"


def write_snapshot_csv(record: TrajectoryRecord, time: float, path) -> None:
    """Write the full spatial state captured nearest to ``time``."""
    digits = _sig_digits()
    if record.snapshot_times.size == 0:
        raise DomainError("record holds no snapshots")
    gap = np.abs(record.snapshot_times - float(time))
    s = int(np.argmin(gap))
    if gap[s] > max(0.5 * record.dt, 1e-9):
        have = ", ".join(f"{t:g}" for t in record.snapshot_times)
        raise DomainError(f"no snapshot near t={time:g}; available: {have}")
    names = ["x"]
    for i in range(record.neuron_count):
        names += [f"{comp}{i + 1}" for comp in COMPONENTS]
    snap = record.snapshots[s]
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(",".join(names) + "\n")
        for k in range(record.grid_x.size):
            row = [f"{record.grid_x[k]:.{digits}g}"]
            for i in range(record.neuron_count):
                row += [f"{snap[i, c, k]:.{digits}g}"
                        for c in range(len(COMPONENTS))]
            fh.write(",".join(row) + "\n")


def read_snapshot_csv(path):
    """Read a snapshot CSV back as ``(column_names, data)``."""
    return read_timeseries_csv(path)


def _stats_line(stats) -> str:
    cv = f"{stats.isi_cv:.4g}" if np.isfinite(stats.isi_cv) else "nan"
    return (f"x {stats.x:g}, spikes {stats.spike_count}, "
            f"bursts {stats.burst_count}, isi_cv {cv}, "
            f"amplitude_mV {stats.amplitude:.4g}")


def write_summary(path, record: TrajectoryRecord, duration=None,
                  config_echo=None, preset_name=None, backend_name=None) -> None:
    """Human-readable key = value run summary."""
    lines = []
    if preset_name:
        lines.append(f"preset = {preset_name}")
    lines.append(f"scheme = {record.scheme}")
    if backend_name:
        lines.append(f"backend = {backend_name}")
    lines.append(f"neurons = {record.neuron_count}")
    lines.append(f"nodes = {record.grid_x.size}")
    lines.append(f"dt = {record.dt:g}")
    lines.append(f"t_end = {record.times[-1]:g}")
    lines.append(f"probes = {' '.join(str(p) for p in record.probe_nodes)}")
    if duration is not None:
        lines.append(f"duration_s = {duration:.3f}")
    for label in record.labels:
        lines.append(f"label_n{label.neuron + 1} = {label.label}")
        lines.append(f"n{label.neuron + 1}_near = {_stats_line(label.near)}")
        lines.append(f"n{label.neuron + 1}_far = {_stats_line(label.far)}")
    if record.labels:
        nx = record.grid_x.size
        window = (record.times[0], record.times[-1])
        cp = analysis.ClassifierParams()
        if window[1] >= cp.window[1]:
            window = cp.window
        for p, node in enumerate(record.probe_nodes):
            if node in (0, nx - 1):
                continue
            for i in range(record.neuron_count):
                small, large = analysis.mixed_mode_counts(
                    record.times, record.series[:, i, p, 0], window,
                    cp.mixed_mode_bands)
                lines.append(
                    f"peaks_n{i + 1}_x{_pos_label(float(record.grid_x[node]))} "
                    f"= small {small}, large {large}")
    for name, verdict in record.verdicts.items():
        state = "pass" if verdict.passed else "FAIL"
        lines.append(f"verdict_{name} = {state} ({verdict.detail})")
    if config_echo:
        for key in config_echo:
            lines.append(f"config.{key} = {config_echo[key]}")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def _svg_polyline(xs, ys, x0, y0, w, h, xmin, xmax, ymin, ymax, color):
    span_x = xmax - xmin or 1.0
    span_y = ymax - ymin or 1.0
    pts = " ".join(
        f"{x0 + (x - xmin) / span_x * w:.2f},{y0 + h - (y - ymin) / span_y * h:.2f}"
        for x, y in zip(xs, ys))
    return (f'<polyline fill="none" stroke="{color}" stroke-width="1" '
            f'points="{pts}"/>')


_SVG_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _svg_plot(path, curves, title, xlabel, ylabel):
    # curves: list of (name, xs, ys)
    width, height = 860, 420
    x0, y0, w, h = 70, 30, width - 100, height - 80
    xmin = min(float(np.min(c[1])) for c in curves)
    xmax = max(float(np.max(c[1])) for c in curves)
    ymin = min(float(np.min(c[2])) for c in curves)
    ymax = max(float(np.max(c[2])) for c in curves)
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
             f'height="{height}" viewBox="0 0 {width} {height}">',
             '<rect width="100%" height="100%" fill="white"/>',
             f'<text x="{width / 2:.0f}" y="18" text-anchor="middle" '
             f'font-size="14">{title}</text>']
    for idx, (name, xs, ys) in enumerate(curves):
        color = _SVG_COLORS[idx % len(_SVG_COLORS)]
        step = max(1, len(xs) // 4000)
        parts.append(_svg_polyline(xs[::step], ys[::step], x0, y0, w, h,
                                   xmin, xmax, ymin, ymax, color))
        parts.append(f'<text x="{x0 + 8}" y="{y0 + 14 + 14 * idx}" '
                     f'font-size="11" fill="{color}">{name}</text>')
    parts.append(f'<rect x="{x0}" y="{y0}" width="{w}" height="{h}" '
                 f'fill="none" stroke="black" stroke-width="1"/>')
    parts.append(f'<text x="{x0 + w / 2:.0f}" y="{height - 8}" '
                 f'text-anchor="middle" font-size="12">{xlabel} '
                 f'[{xmin:.4g}, {xmax:.4g}]</text>')
    parts.append(f'<text x="16" y="{y0 + h / 2:.0f}" font-size="12" '
                 f'transform="rotate(-90 16 {y0 + h / 2:.0f})" '
                 f'text-anchor="middle">{ylabel} [{ymin:.4g}, {ymax:.4g}]</text>')
    parts.append("</svg>")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("\n".join(parts) + "\n")


def write_timeseries_svg(record: TrajectoryRecord, path) -> None:
    """Voltage traces at every probe, one polyline per neuron and probe."""
    if not record.probe_nodes:
        raise DomainError("record has no probes to plot")
    curves = []
    for i in range(record.neuron_count):
        for p, node in enumerate(record.probe_nodes):
            x = _pos_label(float(record.grid_x[node]))
            curves.append((f"n{i + 1} x={x}", record.times,
                           record.series[:, i, p, 0]))
    _svg_plot(path, curves, "membrane potential at probes", "t (ms)", "V (mV)")


def write_snapshot_svg(record: TrajectoryRecord, time: float, path) -> None:
    """Voltage profile over space at one snapshot time."""
    gap = np.abs(record.snapshot_times - float(time))
    if gap.size == 0 or gap.min() > max(0.5 * record.dt, 1e-9):
        raise DomainError(f"no snapshot near t={time:g}")
    s = int(np.argmin(gap))
    curves = [(f"n{i + 1}", record.grid_x, record.snapshots[s, i, 0])
              for i in range(record.neuron_count)]
    _svg_plot(path, curves, f"voltage profile at t={time:g} ms", "x", "V (mV)")


def write_run_outputs(record: TrajectoryRecord, out_dir, duration=None,
                      config_echo=None, preset_name=None,
                      backend_name=None, svg=False) -> dict:
    """Write the standard output set into ``out_dir``; returns the paths."""
    os.makedirs(out_dir, exist_ok=True)
    paths = {}
    ts = os.path.join(out_dir, "timeseries.csv")
    write_timeseries_csv(record, ts)
    paths["timeseries"] = ts
    for t in record.snapshot_times:
        sp = os.path.join(out_dir, snapshot_filename(float(t)))
        write_snapshot_csv(record, float(t), sp)
        paths[f"snapshot_t{t:g}"] = sp
    summary = os.path.join(out_dir, "summary.txt")
    write_summary(summary, record, duration=duration, config_echo=config_echo,
                  preset_name=preset_name, backend_name=backend_name)
    paths["summary"] = summary
    if svg:
        tsvg = os.path.join(out_dir, "timeseries.svg")
        write_timeseries_svg(record, tsvg)
        paths["timeseries_svg"] = tsvg
        for t in record.snapshot_times:
            svg_path = os.path.join(out_dir, f"snapshot_t{t:g}.svg")
            write_snapshot_svg(record, float(t), svg_path)
            paths[f"snapshot_svg_t{t:g}"] = svg_path
    return paths
