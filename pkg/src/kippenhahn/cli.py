"""Command-line entry point.

    kippenhahn boundary   INPUT [--grid N] [--out DIR]
    kippenhahn kippenhahn INPUT [--grid N] [--tol T] [--out DIR]
    kippenhahn surface    INPUT [--directions M] [--seed S] [--out DIR]
    kippenhahn duality    INPUT [--trials T] [--seed S] [--out DIR]

INPUT is a JSON matrix file or ``fixture:NAME`` for one of the bundled
fixtures.  Each command writes ``report.json`` plus CSV/SVG artifacts to the
output directory and exits 0 iff every pass flag in the report is true.
"""

import argparse
import hashlib
import json
import sys
import time
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from . import convsupp, numrange
from .hull2d import convex_hull
from .pencil import Pencil, roman_pencil, roman_quartic
from .render import Layer, PlotSpec, write_csv, write_rows, write_svg

FILE_HERMITIAN_TOL = 1e-9
BOUNDARY_TOL = 1e-9
EXIT_FAIL = 1
EXIT_USAGE = 2


class InputError(Exception):
    """Unreadable or malformed matrix file."""


@dataclass
class RunReport:
    command: str
    input: str
    input_digest: str
    parameters: dict
    metrics: dict = field(default_factory=dict)
    passes: dict = field(default_factory=dict)
    wall_time_s: float = 0.0

    @property
    def passed(self):
        return all(self.passes.values())

    def to_dict(self):
        return {
            "command": self.command,
            "input": self.input,
            "input_digest": self.input_digest,
            "parameters": self.parameters,
            "metrics": self.metrics,
            "passes": self.passes,
            "passed": self.passed,
            "wall_time_s": self.wall_time_s,
        }

    def dumps(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def fixture_names():
    root = resources.files("kippenhahn") / "fixtures"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def _read_source(source):
    if source.startswith("fixture:"):
        name = source.split(":", 1)[1]
        res = resources.files("kippenhahn") / "fixtures" / f"{name}.json"
        if not res.is_file():
            raise InputError(f"{source}: no such fixture (available: {', '.join(fixture_names())})")
        return res.read_bytes()
    path = Path(source)
    try:
        return path.read_bytes()
    except OSError as exc:
        raise InputError(f"{path}: cannot read matrix file ({exc.strerror or exc})") from exc


def parse_matrix_file(text, source="<input>"):
    """Parse a matrix file into a :class:`Pencil`.

    Expected layout::

        {"d": 2, "k": 2,
         "matrices": [{"real": [[...], ...], "imag": [[...], ...]}, ...]}

    ``imag`` may be omitted for real matrices.
    """
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    if not isinstance(obj, dict):
        raise InputError(f"{source}: top level must be an object")
    for key in ("d", "k", "matrices"):
        if key not in obj:
            raise InputError(f"{source}: missing field {key!r}")
    d, k, entries = obj["d"], obj["k"], obj["matrices"]
    if not (isinstance(d, int) and d >= 1 and isinstance(k, int) and k >= 1):
        raise InputError(f"{source}: d and k must be positive integers")
    if not isinstance(entries, list) or len(entries) != k:
        raise InputError(f"{source}: expected {k} matrices")
    mats = []
    for i, entry in enumerate(entries):
        try:
            re = np.asarray(entry["real"], dtype=float)
            im = np.asarray(entry.get("imag", np.zeros((d, d))), dtype=float)
        except (KeyError, TypeError, ValueError, AttributeError) as exc:
            raise InputError(f"{source}: matrix {i}: bad entries ({exc})") from exc
        if re.shape != (d, d) or im.shape != (d, d):
            raise InputError(f"{source}: matrix {i}: expected shape ({d}, {d}), "
                             f"got {re.shape} and {im.shape}")
        mats.append(re + 1j * im)
    try:
        return Pencil(mats, tol=FILE_HERMITIAN_TOL)
    except ValueError as exc:
        raise InputError(f"{source}: {exc}") from exc


def load_matrix_file(source):
    raw = _read_source(source)
    return parse_matrix_file(raw.decode("utf-8"), source), hashlib.sha256(raw).hexdigest()


def _hull_layer(points, stroke="black"):
    hull = convex_hull(points)
    kind = "polygon" if len(hull) >= 3 else ("polyline" if len(hull) == 2 else "points")
    return hull, Layer(kind, hull.vertices, stroke=stroke, stroke_width=1.5)


def cmd_boundary(pencil, args, report):
    if pencil.k != 2:
        raise InputError(f"boundary needs k = 2 matrices, input has k = {pencil.k}")
    pts, lines = numrange.boundary_samples(pencil, args.grid)
    hull, hull_layer = _hull_layer(pts)
    scale = 1.0 + hull.diameter
    violation = numrange.max_halfplane_violation(pts, lines)
    radii = np.hypot(pts[:, 0], pts[:, 1])
    report.metrics.update(
        hull_diameter=hull.diameter,
        hull_vertices=len(hull),
        touch_points=len(pts),
        touch_radius_min=float(radii.min()),
        touch_radius_max=float(radii.max()),
        inner_outer_violation=violation,
    )
    report.passes["inner_within_outer"] = bool(violation <= BOUNDARY_TOL * scale)

    rows = [[format(line.theta, ".17g"), format(line.h, ".17g"),
             format(p[0], ".17g"), format(p[1], ".17g")]
            for line in lines for p in line.touch_points]
    write_rows(["theta", "h", "x1", "x2"], rows, args.out / "boundary.csv")
    write_rows(["x1", "x2"], [[format(v, ".17g") for v in p] for p in hull.vertices],
               args.out / "hull.csv")
    write_svg(PlotSpec([hull_layer, Layer("points", pts, stroke="blue", radius=1.0)],
                       title="numerical range boundary"), args.out / "boundary.svg")


def cmd_kippenhahn(pencil, args, report):
    if pencil.k != 2:
        raise InputError(f"kippenhahn needs k = 2 matrices, input has k = {pencil.k}")
    samples = numrange.kippenhahn_samples(pencil, args.grid)
    theorem = numrange.verify_theorem(pencil, args.grid, args.tol)
    inside = numrange.verify_curve_in_W(pencil, args.grid, args.curve_tol)
    residual = float(numrange.curve_residuals(pencil, samples).max())
    bound = numrange.residual_bound(pencil)
    report.metrics.update(
        samples=len(samples),
        hausdorff=theorem.hausdorff,
        scale=theorem.scale,
        max_violation=inside.max_violation,
        max_residual=residual,
        residual_bound=bound,
    )
    report.passes.update(theorem=theorem.passed, curve_in_range=inside.passed,
                         residual=bool(residual <= bound))

    write_csv(samples, args.out / "curve.csv")
    curve = np.array([s.point for s in samples])
    touch, _ = numrange.boundary_samples(pencil, args.grid)
    _, hull_layer = _hull_layer(touch)
    write_svg(PlotSpec([hull_layer, Layer("points", curve, stroke="red", radius=0.8)],
                       title="boundary generating curve"), args.out / "kippenhahn.svg")


def is_roman(pencil):
    ref = roman_pencil()
    return pencil.F.shape == ref.F.shape and np.allclose(pencil.F, ref.F, rtol=0, atol=1e-15)


def cmd_surface(pencil, args, report):
    if args.directions < 1:
        raise InputError("--directions must be at least 1")
    rng = np.random.default_rng(args.seed)
    dirs = convsupp.direction_grid(pencil.k, args.directions, rng)
    samples = convsupp.surface_samples(pencil, dirs)
    pts = np.array([s.point for s in samples])
    lam = np.array([s.lam for s in samples])
    u = np.array([s.direction for s in samples])
    tangency = float(np.max(np.abs(np.sum(pts * u, axis=1) - lam) / (1.0 + np.abs(lam))))
    residual = float(convsupp.surface_residuals(pencil, samples).max())
    bound = numrange.residual_bound(pencil)
    report.metrics.update(samples=len(samples), max_tangency_error=tangency,
                          max_residual=residual, residual_bound=bound)
    report.passes.update(tangency=bool(tangency <= 1e-9), residual=bool(residual <= bound))
    if is_roman(pencil):
        roman = float(np.max(np.abs(roman_quartic(pts))))
        report.metrics["roman_residual"] = roman
        report.passes["roman"] = bool(roman <= 1e-9)

    write_csv(samples, args.out / "surface.csv")
    k = pencil.k
    if k == 1:
        planes = [(pts[:, [0]].repeat(2, axis=1) * [1.0, 0.0], "x1")]
    else:
        pairs = [(0, 1)] if k == 2 else [(0, 1), (0, 2), (1, 2)]
        planes = [(pts[:, [a, b]], f"x{a + 1}x{b + 1}") for a, b in pairs]
    for data, name in planes:
        write_svg(PlotSpec([Layer("points", data, stroke="black", radius=0.6)],
                           title=f"surface samples, {name} projection"),
                  args.out / f"surface_{name}.svg")


def cmd_duality(pencil, args, report):
    if args.trials < 1:
        raise InputError("--trials must be at least 1")
    dual = convsupp.duality_check(pencil, args.trials, args.seed)
    rng = np.random.default_rng(args.seed + 1)
    us = rng.normal(size=(args.trials, pencil.k))
    agree, worst = 0, 0.0
    for u in us:
        s = convsupp.spectrahedron_member(pencil, u)
        w = convsupp.dual_member(pencil, u)
        diff = abs(s.margin - w.margin)
        worst = max(worst, diff)
        agree += int(s.inside == w.inside and diff <= 1e-12)
    report.metrics.update(trials=dual.trials, agreements=dual.agreements, max_gap=dual.max_gap,
                          member_agreements=agree, max_margin_difference=worst)
    report.passes.update(duality=dual.passed and dual.max_gap <= convsupp.DUALITY_TOL,
                         membership_agreement=agree == args.trials)


COMMANDS = {
    "boundary": cmd_boundary,
    "kippenhahn": cmd_kippenhahn,
    "surface": cmd_surface,
    "duality": cmd_duality,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="kippenhahn",
        description="Numerical ranges, boundary generating curves and convex supports.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("input", help="JSON matrix file, or fixture:NAME")
        p.add_argument("--out", type=Path, default=Path("out"), help="output directory")
        return p

    p = add("boundary", "support lines and inner/outer approximation (k = 2)")
    p.add_argument("--grid", type=int, default=numrange.DEFAULT_GRID,
                   help="number of angles on [0, 2 pi)")

    p = add("kippenhahn", "boundary generating curve and theorem checks (k = 2)")
    p.add_argument("--grid", type=int, default=numrange.DEFAULT_GRID,
                   help="number of angles on [0, 2 pi)")
    p.add_argument("--tol", type=float, default=numrange.THEOREM_TOL,
                   help="Hausdorff tolerance relative to 1 + hull diameter")
    p.add_argument("--curve-tol", type=float, default=numrange.CURVE_TOL,
                   help="half-plane violation tolerance relative to 1 + hull diameter")

    p = add("surface", "boundary generating hypersurface samples (any k)")
    p.add_argument("--directions", type=int, default=convsupp.DEFAULT_DIRECTIONS,
                   help="number of unit directions")
    p.add_argument("--seed", type=int, default=0, help="seed for random directions")

    p = add("duality", "spectrahedron versus convex dual of the convex support")
    p.add_argument("--trials", type=int, default=10000, help="number of random (u, x) pairs")
    p.add_argument("--seed", type=int, default=0, help="random seed")
    return parser


def run(argv=None):
    """Run a command; returns ``(exit_status, report or None)``."""
    parser = build_parser()
    args = parser.parse_args(argv)
    params = {key: (str(val) if isinstance(val, Path) else val)
              for key, val in sorted(vars(args).items()) if key not in ("command", "input")}
    if getattr(args, "grid", 16) < 16:
        print("kippenhahn: error: --grid must be at least 16", file=sys.stderr)
        return EXIT_USAGE, None
    start = time.perf_counter()
    try:
        pencil, digest = load_matrix_file(args.input)
        report = RunReport(args.command, args.input, digest, params)
        args.out.mkdir(parents=True, exist_ok=True)
        COMMANDS[args.command](pencil, args, report)
    except (InputError, OSError) as exc:
        print(f"kippenhahn: error: {exc}", file=sys.stderr)
        return EXIT_USAGE, None
    report.wall_time_s = round(time.perf_counter() - start, 3)
    text = report.dumps()
    (args.out / "report.json").write_text(text + "\n")
    print(text)
    return (0 if report.passed else EXIT_FAIL), report


def main(argv=None):
    status, _ = run(argv)
    return status


if __name__ == "__main__":
    sys.exit(main())
