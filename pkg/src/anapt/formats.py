"""File formats: series CSV, diagram CSV, report JSON and diagram SVG.

Series CSV
    One column (``value``) or two (``time,value``); a header row is
    optional. Time stamps must be uniform to within ``1e-6`` of the mean
    step.
Diagram CSV
    Header ``birth,death,lifetime,birth_index,death_index``, one row per
    finite pair, then one row for the essential class with ``death=inf``
    and ``death_index=-1``. An optional trailing ``label`` column carries
    ``signal``/``noise``. Floats are written with 17 significant digits so
    they read back exactly.
"""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path
from typing import Iterable

import numpy as np

from .errors import ParseError
from .estimator import CutoffReport
from .persistence import PersistenceDiagram
from .series import TimeSeries

TIME_JITTER = 1e-6
DIAGRAM_HEADER = ("birth", "death", "lifetime", "birth_index", "death_index")


def _fmt(x: float) -> str:
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return "%.17g" % x


def _read_rows(path) -> list[list[str]]:
    text = Path(path).read_text()
    return [row for row in csv.reader(io.StringIO(text)) if row and any(cell.strip() for cell in row)]


def _is_number(cell: str) -> bool:
    try:
        float(cell)
    except ValueError:
        return False
    return True


def read_series(path, sample_rate: float | None = None) -> TimeSeries:
    """Read a series CSV.

    With a time column the rate and origin come from the time stamps and
    ``sample_rate``, if given, must agree with them; otherwise ``sample_rate``
    (default 1 Hz) is used.
    """
    rows = _read_rows(path)
    if rows and not all(_is_number(c) for c in rows[0]):
        rows = rows[1:]
    if len(rows) < 2:
        raise ParseError(f"{path}: need at least 2 samples, found {len(rows)}")
    width = len(rows[0])
    if width not in (1, 2):
        raise ParseError(f"{path}: expected 1 or 2 columns, found {width}")
    if any(len(row) != width for row in rows):
        raise ParseError(f"{path}: rows have differing column counts")
    try:
        data = np.array([[float(c) for c in row] for row in rows], dtype=np.float64)
    except ValueError as exc:
        raise ParseError(f"{path}: non-numeric cell ({exc})") from exc
    if not np.all(np.isfinite(data)):
        raise ParseError(f"{path}: NaN or infinite entries")
    if width == 1:
        return TimeSeries(data[:, 0], sample_rate if sample_rate is not None else 1.0)

    t, x = data[:, 0], data[:, 1]
    dt = np.diff(t)
    step = (t[-1] - t[0]) / (t.size - 1)
    if not step > 0:
        raise ParseError(f"{path}: time stamps must increase")
    if np.max(np.abs(dt - step)) > TIME_JITTER * step:
        raise ParseError(f"{path}: time stamps are not uniformly spaced (tolerance {TIME_JITTER:g} relative)")
    rate = 1.0 / step
    if sample_rate is not None and abs(sample_rate - rate) > TIME_JITTER * rate:
        raise ParseError(f"{path}: time column implies {rate:g} Hz but {sample_rate:g} Hz was given")
    return TimeSeries(x, rate, float(t[0]))


def write_series(series: TimeSeries, path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write("time,value\n")
        for t, v in zip(series.times, series.values):
            fh.write(f"{_fmt(t)},{_fmt(v)}\n")


def write_diagram(dgm: PersistenceDiagram, dest, labels: Iterable[bool] | None = None) -> None:
    """Write the diagram CSV to a path or text stream; ``labels`` (True for signal) adds a ``label`` column."""
    header = list(DIAGRAM_HEADER)
    lab = None if labels is None else ["signal" if v else "noise" for v in labels]
    if lab is not None:
        if len(lab) != len(dgm):
            raise ValueError("one label per finite pair is required")
        header.append("label")
    if hasattr(dest, "write"):
        _write_diagram_rows(dgm, dest, header, lab)
    else:
        with open(dest, "w", newline="") as fh:
            _write_diagram_rows(dgm, fh, header, lab)


def _write_diagram_rows(dgm: PersistenceDiagram, fh, header: list[str], lab: list[str] | None) -> None:
    fh.write(",".join(header) + "\n")
    for i in range(len(dgm)):
        b, d = float(dgm.births[i]), float(dgm.deaths[i])
        cells = [_fmt(b), _fmt(d), _fmt(d - b), str(int(dgm.birth_indices[i])), str(int(dgm.death_indices[i]))]
        if lab is not None:
            cells.append(lab[i])
        fh.write(",".join(cells) + "\n")
    cells = [_fmt(dgm.essential_birth), "inf", "inf", "-1", "-1"]
    if lab is not None:
        cells.append("essential")
    fh.write(",".join(cells) + "\n")


def read_diagram(path, n_samples: int = 0) -> PersistenceDiagram:
    """Read a diagram CSV written by :func:`write_diagram` (labels are ignored)."""
    rows = _read_rows(path)
    if not rows or [c.strip() for c in rows[0][:5]] != list(DIAGRAM_HEADER):
        raise ParseError(f"{path}: missing header {','.join(DIAGRAM_HEADER)}")
    births, deaths, bidx, didx = [], [], [], []
    essential = -math.inf
    seen_essential = False
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) < 5:
            raise ParseError(f"{path}:{lineno}: expected at least 5 columns")
        try:
            b, d = float(row[0]), float(row[1])
            bi, di = int(row[3]), int(row[4])
        except ValueError as exc:
            raise ParseError(f"{path}:{lineno}: {exc}") from exc
        if math.isinf(d) and d > 0:
            if seen_essential:
                raise ParseError(f"{path}:{lineno}: more than one essential row")
            essential, seen_essential = b, True
            continue
        if not (math.isfinite(b) and math.isfinite(d)) or d < b:
            raise ParseError(f"{path}:{lineno}: invalid pair ({row[0]}, {row[1]})")
        births.append(b)
        deaths.append(d)
        bidx.append(bi)
        didx.append(di)
    return PersistenceDiagram(
        np.array(births, dtype=np.float64),
        np.array(deaths, dtype=np.float64),
        np.array(bidx, dtype=np.int64),
        np.array(didx, dtype=np.int64),
        essential,
        n_samples,
    )


def report_json(report: CutoffReport) -> str:
    return json.dumps(report.to_dict(), indent=2)


def write_report(report: CutoffReport, path) -> None:
    Path(path).write_text(report_json(report) + "\n")


def _nice_ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    span = hi - lo
    raw = span / count
    mag = 10.0 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 5, 10) if m * mag >= raw), default=10 * mag)
    first = math.ceil(lo / step) * step
    return [first + k * step for k in range(int((hi - first) / step + 1e-9) + 1)]


def render_svg(dgm: PersistenceDiagram, cutoff: float | None = None, size: int = 480, title: str | None = None) -> str:
    """Scatter plot of the finite pairs with the diagonal and, if given, the noise band.

    The band covers ``birth <= death <= birth + cutoff``; pairs inside it
    are drawn as noise, the rest as signal.
    """
    pts = dgm.points
    margin = 56
    inner = size - 2 * margin
    if len(pts):
        lo = float(pts.min())
        hi = float(pts.max())
    else:
        lo, hi = 0.0, 1.0
    if cutoff is not None and len(pts):
        hi = max(hi, lo + cutoff)
    if hi <= lo:
        hi = lo + 1.0
    pad = 0.05 * (hi - lo)
    lo, hi = lo - pad, hi + pad

    def sx(v: float) -> float:
        return margin + (v - lo) / (hi - lo) * inner

    def sy(v: float) -> float:
        return size - margin - (v - lo) / (hi - lo) * inner

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
        f'<rect x="0" y="0" width="{size}" height="{size}" fill="white"/>',
        f'<clipPath id="plot"><rect x="{margin}" y="{margin}" width="{inner}" height="{inner}"/></clipPath>',
    ]
    if cutoff is not None:
        band = [(lo, lo), (hi, hi), (hi, hi + cutoff), (lo, lo + cutoff)]
        poly = " ".join(f"{sx(b):.2f},{sy(d):.2f}" for b, d in band)
        out.append(f'<polygon class="noise-band" points="{poly}" fill="#f4b6b6" fill-opacity="0.6" clip-path="url(#plot)"/>')
    out.append(
        f'<line class="diagonal" x1="{sx(lo):.2f}" y1="{sy(lo):.2f}" x2="{sx(hi):.2f}" y2="{sy(hi):.2f}" '
        'stroke="black" stroke-width="1"/>'
    )
    out.append(f'<rect x="{margin}" y="{margin}" width="{inner}" height="{inner}" fill="none" stroke="#444"/>')
    for t in _nice_ticks(lo, hi):
        out.append(f'<line x1="{sx(t):.2f}" y1="{size - margin}" x2="{sx(t):.2f}" y2="{size - margin + 5}" stroke="#444"/>')
        out.append(f'<text x="{sx(t):.2f}" y="{size - margin + 18}" font-size="11" text-anchor="middle">{t:g}</text>')
        out.append(f'<line x1="{margin - 5}" y1="{sy(t):.2f}" x2="{margin}" y2="{sy(t):.2f}" stroke="#444"/>')
        out.append(f'<text x="{margin - 8}" y="{sy(t) + 4:.2f}" font-size="11" text-anchor="end">{t:g}</text>')
    out.append(f'<text x="{size / 2}" y="{size - 12}" font-size="13" text-anchor="middle">birth</text>')
    out.append(
        f'<text x="14" y="{size / 2}" font-size="13" text-anchor="middle" transform="rotate(-90 14 {size / 2})">death</text>'
    )
    if title:
        out.append(f'<text x="{size / 2}" y="{margin / 2}" font-size="14" text-anchor="middle">{_escape(title)}</text>')
    life = dgm.lifetimes
    for (b, d), ell in zip(pts, life):
        noise = cutoff is not None and ell <= cutoff
        cls, color = ("noise", "#c0392b") if noise else ("signal", "#1f4e99")
        out.append(f'<circle class="{cls}" cx="{sx(b):.2f}" cy="{sy(d):.2f}" r="2.5" fill="{color}"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
