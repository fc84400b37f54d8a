"""Static SVG plots and CSV dumps of samples."""

import csv
from dataclasses import dataclass, field, fields
from pathlib import Path
from xml.sax.saxutils import escape, quoteattr

import numpy as np

from .convsupp import SurfaceSample
from .numrange import CurveSample

LAYER_KINDS = ("points", "polyline", "polygon")


@dataclass
class Layer:
    kind: str
    data: np.ndarray  # (m, 2)
    stroke: str = "black"
    stroke_width: float = 1.0
    radius: float = 1.5

    def __post_init__(self):
        if self.kind not in LAYER_KINDS:
            raise ValueError(f"unknown layer kind {self.kind!r}")
        self.data = np.asarray(self.data, dtype=float).reshape(-1, 2)
        if len(self.data) == 0:
            raise ValueError("layer data is empty")


@dataclass
class PlotSpec:
    layers: list = field(default_factory=list)
    width: int = 600
    height: int = 600
    viewport: tuple = None  # (xmin, xmax, ymin, ymax); None means data bounds + 10%
    title: str = ""


def default_viewport(layers, pad=0.1):
    pts = np.vstack([layer.data for layer in layers])
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    span = hi - lo
    # degenerate extents (a single point, a horizontal segment) get unit size
    span = np.where(span > 0, span, 1.0)
    lo, hi = lo - pad * span, hi + pad * span
    return (float(lo[0]), float(hi[0]), float(lo[1]), float(hi[1]))


def _fmt(v):
    return f"{v:.3f}"


def render_svg(spec):
    """Render a :class:`PlotSpec` to an SVG 1.1 document string.

    Output is a pure function of the plot description, so equal inputs give identical
    bytes.
    """
    if not spec.layers:
        raise ValueError("plot has no layers")
    vp = spec.viewport if spec.viewport is not None else default_viewport(spec.layers)
    xmin, xmax, ymin, ymax = vp
    if not (xmax > xmin and ymax > ymin):
        raise ValueError(f"viewport must have positive area, got {vp}")
    if spec.width <= 0 or spec.height <= 0:
        raise ValueError("plot size must be positive")
    sx = spec.width / (xmax - xmin)
    sy = spec.height / (ymax - ymin)

    def to_px(data):
        return np.column_stack([(data[:, 0] - xmin) * sx, (ymax - data[:, 1]) * sy])

    out = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{spec.width}" height="{spec.height}" '
        f'viewBox="0 0 {spec.width} {spec.height}">',
    ]
    if spec.title:
        out.append(f"<title>{escape(spec.title)}</title>")
    out.append(f'<rect x="0" y="0" width="{spec.width}" height="{spec.height}" fill="white"/>')
    for layer in spec.layers:
        px = to_px(layer.data)
        stroke = quoteattr(layer.stroke)
        width = _fmt(layer.stroke_width)
        if layer.kind == "points":
            out.append(f"<g fill={stroke} stroke=\"none\">")
            r = _fmt(layer.radius)
            for x, y in px:
                out.append(f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="{r}"/>')
            out.append("</g>")
        else:
            cmds = [f"M {_fmt(px[0, 0])} {_fmt(px[0, 1])}"]
            cmds += [f"L {_fmt(x)} {_fmt(y)}" for x, y in px[1:]]
            if layer.kind == "polygon":
                cmds.append("Z")
            out.append(f'<path d="{" ".join(cmds)}" fill="none" stroke={stroke} '
                       f'stroke-width="{width}"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_svg(spec, destination):
    path = Path(destination)
    try:
        path.write_text(render_svg(spec), encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot write SVG to {path}: {exc}") from exc


def _real(v):
    return format(float(v), ".17g")


def _header_and_rows(samples):
    if not samples:
        return None, []
    first = samples[0]
    if isinstance(first, CurveSample):
        header = ["theta", "branch", "lambda", "lambda_prime", "x1", "x2"]
        rows = [[_real(s.theta), str(s.branch), _real(s.lam), _real(s.lam_prime),
                 _real(s.point[0]), _real(s.point[1])] for s in samples]
        return header, rows
    if isinstance(first, SurfaceSample):
        k = len(first.direction)
        header = ([f"u{i + 1}" for i in range(k)] + ["branch", "lambda"]
                  + [f"x{i + 1}" for i in range(k)])
        rows = [[_real(c) for c in s.direction] + [str(s.branch), _real(s.lam)]
                + [_real(c) for c in s.point] for s in samples]
        return header, rows
    raise TypeError(f"cannot write samples of type {type(first).__name__}")


def write_csv(samples, destination, kind=CurveSample):
    """Write curve or surface samples, one row each, reals at 17 significant digits.

    ``kind`` decides the header when ``samples`` is empty.
    """
    samples = list(samples)
    header, rows = _header_and_rows(samples)
    if header is None:
        if kind is CurveSample:
            header = ["theta", "branch", "lambda", "lambda_prime", "x1", "x2"]
        else:
            header = [f.name for f in fields(kind)]
    write_rows(header, rows, destination)


def write_rows(header, rows, destination):
    path = Path(destination)
    try:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            writer.writerows(rows)
    except OSError as exc:
        raise OSError(f"cannot write CSV to {path}: {exc}") from exc


def read_csv(source):
    """Read a file written by :func:`write_csv` back as ``(header, float array)``."""
    with open(source, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        data = [[float(v) for v in row] for row in reader]
    return header, np.array(data, dtype=float).reshape(-1, len(header))
