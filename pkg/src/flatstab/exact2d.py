"""Exact rational planar primitives: hulls, support intervals, line clipping.

Backs the d=2 hyperplane-transversal sweep oracle and the Hadwiger ordering
checkers.  All float input coordinates are converted to Fractions exactly, so
every decision here is exact for the given vertex data.
"""

from __future__ import annotations

from fractions import Fraction

Pt = tuple[Fraction, Fraction]


def fr_point(xy) -> Pt:
    return (Fraction(float(xy[0])), Fraction(float(xy[1])))


def _cross(o: Pt, a: Pt, b: Pt) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points: list[Pt]) -> list[Pt]:
    """Andrew monotone chain, CCW, no interior collinear points.

    Degenerate inputs give a hull of one or two points.
    """
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    lower: list[Pt] = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[Pt] = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 2:  # all points coincide after dedup of chain
        return pts[:1] if len(pts) == 1 else [pts[0], pts[-1]]
    return hull


def support_interval(points: list[Pt], u: Pt) -> tuple[Fraction, Fraction]:
    """(min, max) of <v, u> over the vertex list."""
    dots = [p[0] * u[0] + p[1] * u[1] for p in points]
    return min(dots), max(dots)


def candidate_directions(vertex_sets: list[list[Pt]]) -> list[Pt]:
    """Normalized vertex-pair difference directions plus the axes.

    Critical directions of any sweep over these polytopes are among them.
    """
    all_pts = [p for vs in vertex_sets for p in vs]
    dirs: set[Pt] = {(Fraction(1), Fraction(0)), (Fraction(0), Fraction(1))}
    for i, a in enumerate(all_pts):
        for b in all_pts[i + 1 :]:
            dx, dy = a[0] - b[0], a[1] - b[1]
            if dx == 0 and dy == 0:
                continue
            scale = max(abs(dx), abs(dy))
            dirs.add((dx / scale, dy / scale))
            dirs.add((-dx / scale, -dy / scale))
    return sorted(dirs)


def line_transversal(vertex_sets: list[list[Pt]]):
    """Exact line-transversal decision for polytope vertex lists in R^2.

    Returns (u, c) with the stabbing line {x : <x, u> = c}, or None.  Sweeps
    the critical normal directions: perpendiculars of vertex-pair differences.
    """
    if not vertex_sets:
        return None
    for w in candidate_directions(vertex_sets):
        u = (-w[1], w[0])
        lo = None
        hi = None
        ok = True
        for vs in vertex_sets:
            m, M = support_interval(vs, u)
            lo = m if lo is None or m > lo else lo
            hi = M if hi is None or M < hi else hi
            if lo > hi:
                ok = False
                break
        if ok:
            return u, (lo + hi) / 2
    return None


def line_hull_interval(points: list[Pt], p: Pt, w: Pt):
    """Parameter interval {t : p + t w in conv(points)}, or None if empty."""
    hull = convex_hull(points)
    if len(hull) == 1:
        return _line_point_interval(hull[0], p, w)
    if len(hull) == 2:
        return _line_segment_interval(hull[0], hull[1], p, w)
    lo, hi = None, None
    for i in range(len(hull)):
        a, b = hull[i], hull[(i + 1) % len(hull)]
        ex, ey = b[0] - a[0], b[1] - a[1]
        # inside: cross(e, x - a) >= 0 for CCW hulls
        alpha = ex * (p[1] - a[1]) - ey * (p[0] - a[0])
        beta = ex * w[1] - ey * w[0]
        if beta == 0:
            if alpha < 0:
                return None
            continue
        t = -alpha / beta
        if beta > 0:
            lo = t if lo is None or t > lo else lo
        else:
            hi = t if hi is None or t < hi else hi
    if lo is None or hi is None or lo <= hi:
        return lo, hi
    return None


def _line_point_interval(a: Pt, p: Pt, w: Pt):
    dx, dy = a[0] - p[0], a[1] - p[1]
    if dx * w[1] - dy * w[0] != 0:
        return None
    ww = w[0] * w[0] + w[1] * w[1]
    if ww == 0:
        return None
    t = (dx * w[0] + dy * w[1]) / ww
    return t, t


def _line_segment_interval(a: Pt, b: Pt, p: Pt, w: Pt):
    sx, sy = b[0] - a[0], b[1] - a[1]
    det = w[0] * (-sy) - w[1] * (-sx)  # solve p + t w = a + u s
    if det != 0:
        rx, ry = a[0] - p[0], a[1] - p[1]
        t = (rx * (-sy) - ry * (-sx)) / det
        u = (w[0] * ry - w[1] * rx) / det
        if 0 <= u <= 1:
            return t, t
        return None
    # parallel: collinear or disjoint
    ia = _line_point_interval(a, p, w)
    ib = _line_point_interval(b, p, w)
    if ia is None or ib is None:
        return None
    lo, hi = min(ia[0], ib[0]), max(ia[0], ib[0])
    return lo, hi


def ordered_triple_line(A: list[Pt], B: list[Pt], C: list[Pt]) -> bool:
    """Does a directed line meet A, then B, then C in that order?

    Exact critical-direction sweep: a witnessing line can be pinned to pass
    through two vertices, so vertex-pair differences (both signs) exhaust the
    candidate directions.
    """
    hulls = [convex_hull(s) for s in (A, B, C)]
    for w in candidate_directions(hulls):
        u = (-w[1], w[0])
        lo, hi = None, None
        ok = True
        for vs in hulls:
            m, M = support_interval(vs, u)
            lo = m if lo is None or m > lo else lo
            hi = M if hi is None or M < hi else hi
            if lo > hi:
                ok = False
                break
        if not ok:
            continue
        c = (lo + hi) / 2
        uu = u[0] * u[0] + u[1] * u[1]
        p = (c * u[0] / uu, c * u[1] / uu)
        iv = [line_hull_interval(vs, p, w) for vs in hulls]
        if any(v is None for v in iv):
            continue
        ia, ib, ic = iv
        if max(ib[0], ia[0]) <= min(ib[1], ic[1]):
            return True
    return False
