"""Seeded scene generators with certified labels, JSON round-trip, SVG plots.

Every generated label is backed by a certificate or an exact oracle at
generation time; labels are never guessed.  Generators are deterministic
functions of their spec.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace

import numpy as np

from .convex import polytopes_intersect
from .engines import (
    hyperplane_transversal_2d_exact,
    point_family_transversal_exact,
    verify_transversal,
)
from .errors import (
    GenerationTimeout,
    InvariantViolation,
    ParseError,
    UnsupportedDimension,
)
from .fields import REAL, ScalarField, field_from_tag
from .geometry import AffineFlat, Frame, Polytope, flat_point, orthonormalize
from .consistency import PointAssignment

PLANTED_STAB_TOL = 1e-8


@dataclass(frozen=True)
class Scene:
    field: ScalarField
    d: int
    k: int
    sets: tuple
    assignment: PointAssignment | None = None
    planted: AffineFlat | None = None
    label: tuple | None = None  # ("yes"|"no"|"unknown", provenance)

    def __post_init__(self):
        for p in self.sets:
            if p.field != self.field or p.ambient_dim != self.d:
                raise InvariantViolation("set dimension or field mismatch")
        if self.planted is not None:
            if self.planted.ambient_dim != self.d or self.planted.k != self.k:
                raise InvariantViolation("planted flat has the wrong shape")
            ok, _ = verify_transversal(self.planted, list(self.sets), PLANTED_STAB_TOL)
            if not ok:
                raise InvariantViolation("planted flat does not stab every set")
        if self.assignment is not None:
            if self.assignment.k != self.k or len(self.assignment.phi) != len(self.sets):
                raise InvariantViolation("assignment inconsistent with the scene")


@dataclass(frozen=True)
class GenSpec:
    seed: int
    d: int
    k: int
    n: int
    vertices: int = 5
    spread: float = 2.0
    field: ScalarField = REAL

    def __post_init__(self):
        if self.n < 1 or not 0 <= self.k < self.d:
            raise ValueError("need n >= 1 and 0 <= k < d")


def _random_flat(rng, field, d, k, spread) -> AffineFlat:
    rd = field.real_dim
    if k:
        dirs = orthonormalize(rng.standard_normal((k, d * rd)), field)
    else:
        dirs = Frame(field, d, np.zeros((0, d * rd)))
    base = spread * rng.standard_normal(d * rd)
    return AffineFlat(field, d, base, dirs)


def _cloud_around(rng, anchor: np.ndarray, n_vertices: int, radius: float) -> np.ndarray:
    """Vertices whose mean is exactly the anchor, so the anchor is in the hull."""
    if n_vertices == 1:
        return anchor[None, :]
    r = radius * rng.standard_normal((n_vertices, anchor.size))
    r -= r.mean(axis=0)
    return anchor[None, :] + r


def gen_planted(spec: GenSpec) -> Scene:
    """Yes-instance factory: every set contains a point of a sampled k-flat."""
    rng = np.random.default_rng(spec.seed)
    field = spec.field
    rd = field.real_dim
    flat = _random_flat(rng, field, spec.d, spec.k, spec.spread)
    sets = []
    for _ in range(spec.n):
        coords = spec.spread * rng.standard_normal(spec.k * rd)
        anchor = flat_point(flat, coords) if spec.k else flat.basepoint
        verts = _cloud_around(rng, anchor, spec.vertices, spec.spread / 2)
        sets.append(Polytope(field, spec.d, verts))
    return Scene(field, spec.d, spec.k, tuple(sets), planted=flat, label=("yes", "planted"))


def gen_singletons(spec: GenSpec) -> Scene:
    """Gaussian singletons labeled by the exact affine-rank oracle."""
    rng = np.random.default_rng(spec.seed)
    field = spec.field
    rd = field.real_dim
    pts = spec.spread * rng.standard_normal((spec.n, spec.d * rd))
    has = point_family_transversal_exact(pts, spec.k, field)
    sets = tuple(Polytope(field, spec.d, p[None, :]) for p in pts)
    return Scene(field, spec.d, spec.k, sets, label=("yes" if has else "no", "rank-oracle"))


def gen_collinear_singletons(spec: GenSpec) -> Scene:
    """Singletons planted on a random k-flat (always a yes-instance)."""
    rng = np.random.default_rng(spec.seed)
    field = spec.field
    rd = field.real_dim
    flat = _random_flat(rng, field, spec.d, spec.k, spec.spread)
    pts = np.stack(
        [
            flat_point(flat, spec.spread * rng.standard_normal(spec.k * rd))
            if spec.k
            else flat.basepoint
            for _ in range(spec.n)
        ]
    )
    sets = tuple(Polytope(field, spec.d, p[None, :]) for p in pts)
    return Scene(field, spec.d, spec.k, sets, planted=flat, label=("yes", "planted"))


# Fixed no-transversal configuration: small octagons at the corners of a
# large triangle; no single line can meet all three.
CORNER_CENTERS = ((0.0, 0.0), (20.0, 0.0), (10.0, 17.0))


def _octagon(cx: float, cy: float, r: float = 1.0) -> np.ndarray:
    ang = np.pi / 8 + np.arange(8) * np.pi / 4
    return np.stack([cx + r * np.cos(ang), cy + r * np.sin(ang)], axis=1)


def gen_disjoint_2d(spec: GenSpec, mode: str = "random") -> Scene:
    """Pairwise-disjoint planar polygons labeled by the exact sweep oracle.

    mode: "random" (free placement), "line" (planted on a common line), or
    "corners" (the documented fixed no-transversal configuration).
    """
    if spec.d != 2 or spec.field != REAL:
        raise ValueError("disjoint-2d generator needs d=2 over R")
    if mode == "corners":
        sets = tuple(Polytope(REAL, 2, _octagon(cx, cy)) for cx, cy in CORNER_CENTERS)
        label = ("no", "exact-sweep")
        assert hyperplane_transversal_2d_exact(list(sets)) is None
        return Scene(REAL, 2, 1, sets, label=label)
    rng = np.random.default_rng(spec.seed)
    radius = spec.spread / 4
    planted_line = None
    if mode == "line":
        direction = rng.standard_normal(2)
        direction /= np.linalg.norm(direction)
        base = spec.spread * rng.standard_normal(2)
        planted_line = AffineFlat(REAL, 2, base, Frame(REAL, 2, direction[None, :]))
    sets: list[Polytope] = []
    rejections = 0
    for i in range(spec.n):
        while True:
            if mode == "line":
                t = (i + rng.uniform(-0.3, 0.3)) * 3 * spec.spread
                center = flat_point(planted_line, np.array([t]))
            else:
                center = 3 * spec.spread * rng.standard_normal(2)
            verts = _cloud_around(rng, center, max(spec.vertices, 3), radius)
            cand = Polytope(REAL, 2, verts)
            if all(not polytopes_intersect([cand, s]).feasible for s in sets):
                sets.append(cand)
                break
            rejections += 1
            if rejections > 10**4:
                raise GenerationTimeout("could not place disjoint polygons")
    oracle = hyperplane_transversal_2d_exact(sets)
    label = ("yes" if oracle is not None else "no", "exact-sweep")
    return Scene(REAL, 2, 1, tuple(sets), planted=planted_line, label=label)


# ---------------------------------------------------------------------------
# JSON serialization


def scene_to_dict(s: Scene) -> dict:
    doc: dict = {
        "field": s.field.tag,
        "d": s.d,
        "k": s.k,
        "sets": [[list(map(float, v)) for v in p.vertices] for p in s.sets],
    }
    if s.assignment is not None:
        doc["assignment"] = {
            "points": [list(map(float, p)) for p in s.assignment.points],
            "phi": list(s.assignment.phi),
        }
    if s.planted is not None:
        doc["planted"] = {
            "base": list(map(float, s.planted.basepoint)),
            "dirs": [list(map(float, v)) for v in s.planted.directions.vectors],
        }
    if s.label is not None:
        doc["label"] = {"value": s.label[0], "provenance": s.label[1]}
    return doc


def emit_scene(s: Scene) -> str:
    return json.dumps(scene_to_dict(s), indent=1)


def flat_from_dict(doc: dict, field: ScalarField, d: int) -> AffineFlat:
    base = np.asarray(doc["base"], dtype=np.float64)
    dirs = np.asarray(doc["dirs"], dtype=np.float64)
    if dirs.size == 0:
        frame = Frame(field, d, np.zeros((0, d * field.real_dim)))
    else:
        frame = Frame(field, d, np.atleast_2d(dirs))
    return AffineFlat(field, d, base, frame)


def parse_scene(text: str) -> Scene:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    try:
        field = field_from_tag(doc["field"])
        d = int(doc["d"])
        k = int(doc["k"])
        raw_sets = doc["sets"]
        sets = tuple(
            Polytope(field, d, np.asarray(vs, dtype=np.float64).reshape(len(vs), -1))
            for vs in raw_sets
        )
    except ParseError:
        raise
    except Exception as exc:
        raise ParseError(f"malformed scene: {exc}") from exc
    assignment = None
    if "assignment" in doc:
        try:
            assignment = PointAssignment(
                field,
                k,
                np.asarray(doc["assignment"]["points"], dtype=np.float64).reshape(
                    len(doc["assignment"]["points"]), -1
                ),
                tuple(doc["assignment"]["phi"]),
            )
        except Exception as exc:
            raise ParseError(f"malformed assignment: {exc}") from exc
    planted = None
    if "planted" in doc:
        try:
            planted = flat_from_dict(doc["planted"], field, d)
        except Exception as exc:
            raise ParseError(f"malformed planted flat: {exc}") from exc
    label = None
    if "label" in doc:
        try:
            label = (doc["label"]["value"], doc["label"]["provenance"])
        except Exception as exc:
            raise ParseError(f"malformed label: {exc}") from exc
        if label[0] not in ("yes", "no", "unknown"):
            raise ParseError(f"unknown label value {label[0]!r}")
    return Scene(field, d, k, sets, assignment=assignment, planted=planted, label=label)


# ---------------------------------------------------------------------------
# SVG emission


def _fmt(x: float) -> str:
    return f"{x:.6f}"


def emit_svg(scene: Scene, flat: AffineFlat | None = None, projection=None) -> str:
    """Deterministic 800x800 SVG of a planar scene (or a projected one).

    ``projection`` is a (2, d*real_dim) matrix applied to every coordinate;
    required when the scene is not a real planar scene.
    """
    if projection is None:
        if scene.d != 2 or scene.field != REAL:
            raise UnsupportedDimension("need d=2 over R, or an explicit projection")
        proj = np.eye(2)
    else:
        proj = np.asarray(projection, dtype=np.float64)
        if proj.shape != (2, scene.d * scene.field.real_dim):
            raise UnsupportedDimension("projection must map scene coordinates to the plane")

    polys = [p.vertices @ proj.T for p in scene.sets]
    pts_all = [q for p in polys for q in p]
    wit = []
    if pts_all:
        lo = np.min(np.stack(pts_all), axis=0) - 1.0
        hi = np.max(np.stack(pts_all), axis=0) + 1.0
    else:
        lo, hi = np.array([-1.0, -1.0]), np.array([1.0, 1.0])
    span = np.maximum(hi - lo, 1e-9)
    scale = 760.0 / float(np.max(span))

    def to_px(q):
        p2 = (np.asarray(q, dtype=np.float64) - lo) * scale
        return p2[0] + 20.0, 780.0 - p2[1]

    parts = ['<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 800 800">']
    ox, oy = to_px([0.0, 0.0])
    parts.append(
        f'<g class="axes"><line x1="0" y1="{_fmt(oy)}" x2="800" y2="{_fmt(oy)}" '
        f'stroke="#ccc"/><line x1="{_fmt(ox)}" y1="0" x2="{_fmt(ox)}" y2="800" '
        'stroke="#ccc"/></g>'
    )
    for p in polys:
        hullpts = _hull_order(p)
        coords = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in (to_px(q) for q in hullpts))
        parts.append(f'<polygon class="set" points="{coords}" fill="none" stroke="#333"/>')
    if flat is not None:
        fp = flat.basepoint @ proj.T if projection is not None else flat.basepoint
        fd = (
            flat.directions.vectors @ proj.T
            if projection is not None
            else flat.directions.vectors
        )
        if fd.shape[0] >= 1 and np.linalg.norm(fd[0]) > 1e-12:
            direction = fd[0] / np.linalg.norm(fd[0])
            reach = float(np.max(span)) * 2.0
            a = to_px(fp - reach * direction)
            b = to_px(fp + reach * direction)
            parts.append(
                f'<line class="flat" x1="{_fmt(a[0])}" y1="{_fmt(a[1])}" '
                f'x2="{_fmt(b[0])}" y2="{_fmt(b[1])}" stroke="#c00" stroke-dasharray="6,3"/>'
            )
        else:  # point flat
            x, y = to_px(fp)
            parts.append(
                f'<circle class="flat" cx="{_fmt(x)}" cy="{_fmt(y)}" r="4" fill="#c00"/>'
            )
        for p in scene.sets:
            from .convex import nearest_point_on_flat

            q, _, dist = nearest_point_on_flat(flat, p)
            if dist <= 1e-6:
                wit.append(q @ proj.T if projection is not None else q)
    for q in wit:
        x, y = to_px(q)
        parts.append(
            f'<circle class="witness" cx="{_fmt(x)}" cy="{_fmt(y)}" r="3" fill="#06c"/>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _hull_order(points: np.ndarray) -> np.ndarray:
    """Order 2-D points counterclockwise around their centroid for drawing."""
    c = points.mean(axis=0)
    ang = np.arctan2(points[:, 1] - c[1], points[:, 0] - c[0])
    return points[np.argsort(ang, kind="stable")]
