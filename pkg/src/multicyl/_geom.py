"""Exact rational plane geometry for flat-surface work.

Points and vectors are pairs of Fractions.  Every predicate is decided
with cross and dot products only, so there is no floating point and no
transcendental function anywhere downstream.  Angular comparisons use
counterclockwise rank: rank 0 is the reference direction itself, 1 the
open half plane to its left, 2 the opposite direction, 3 the right half
plane.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional, Sequence, Tuple

Pt = Tuple[Fraction, Fraction]


def frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def pt(x, y) -> Pt:
    return (frac(x), frac(y))


def vadd(u: Pt, v: Pt) -> Pt:
    return (u[0] + v[0], u[1] + v[1])


def vsub(u: Pt, v: Pt) -> Pt:
    return (u[0] - v[0], u[1] - v[1])


def vneg(u: Pt) -> Pt:
    return (-u[0], -u[1])


def vscale(u: Pt, k: Fraction) -> Pt:
    return (u[0] * k, u[1] * k)


def cross(u: Pt, v: Pt) -> Fraction:
    return u[0] * v[1] - u[1] * v[0]


def dot(u: Pt, v: Pt) -> Fraction:
    return u[0] * v[0] + u[1] * v[1]


def is_zero(u: Pt) -> bool:
    return u[0] == 0 and u[1] == 0


def same_dir(u: Pt, v: Pt) -> bool:
    return cross(u, v) == 0 and dot(u, v) > 0


def opposite_dir(u: Pt, v: Pt) -> bool:
    return cross(u, v) == 0 and dot(u, v) < 0


def ccw_rank(u: Pt, x: Pt) -> int:
    """Quadrant-style rank of the angle from u counterclockwise to x."""
    c = cross(u, x)
    if c > 0:
        return 1
    if c < 0:
        return 3
    return 0 if dot(u, x) > 0 else 2


def ccw_strictly_less(u: Pt, a: Pt, b: Pt) -> bool:
    """Is the ccw angle from u to a strictly below the one from u to b."""
    ra, rb = ccw_rank(u, a), ccw_rank(u, b)
    if ra != rb:
        return ra < rb
    if ra in (1, 3):
        return cross(a, b) > 0
    return False


def in_ccw_span(u: Pt, w: Pt, r: Pt) -> bool:
    """Does r lie in the half-open ccw wedge [u, w), assumed nonempty."""
    if ccw_rank(u, r) == 0:
        return True
    return ccw_strictly_less(u, r, w)


def signed_area2(vertices: Sequence[Pt]) -> Fraction:
    total = Fraction(0)
    n = len(vertices)
    for i in range(n):
        total += cross(vertices[i], vertices[(i + 1) % n])
    return total


def on_segment(p: Pt, a: Pt, b: Pt, *, closed: bool = True) -> bool:
    """Is p on the segment from a to b (open excludes both endpoints)."""
    ab = vsub(b, a)
    ap = vsub(p, a)
    if cross(ab, ap) != 0:
        return False
    t = dot(ap, ab)
    span = dot(ab, ab)
    if closed:
        return 0 <= t <= span
    return 0 < t < span


def open_segments_intersect(p1: Pt, p2: Pt, q1: Pt, q2: Pt) -> bool:
    """Do the open segments share any point (crossings and overlaps)."""
    d1 = vsub(p2, p1)
    d2 = vsub(q2, q1)
    denom = cross(d1, d2)
    if denom != 0:
        t = cross(vsub(q1, p1), d2)
        u = cross(vsub(q1, p1), d1)
        if denom < 0:
            t, u, lim = -t, -u, -denom
        else:
            lim = denom
        return 0 < t < lim and 0 < u < lim
    if cross(vsub(q1, p1), d1) != 0:
        return False
    # collinear: compare parameter intervals along d1
    span = dot(d1, d1)
    a = dot(vsub(q1, p1), d1)
    b = dot(vsub(q2, p1), d1)
    lo, hi = min(a, b), max(a, b)
    return lo < span and hi > 0 and not (lo == hi and (lo == 0 or lo == span))


def closed_segments_intersect(p1: Pt, p2: Pt, q1: Pt, q2: Pt) -> bool:
    d1 = vsub(p2, p1)
    d2 = vsub(q2, q1)
    denom = cross(d1, d2)
    if denom != 0:
        t = cross(vsub(q1, p1), d2)
        u = cross(vsub(q1, p1), d1)
        if denom < 0:
            t, u, lim = -t, -u, -denom
        else:
            lim = denom
        return 0 <= t <= lim and 0 <= u <= lim
    if cross(vsub(q1, p1), d1) != 0:
        return False
    span = dot(d1, d1)
    a = dot(vsub(q1, p1), d1)
    b = dot(vsub(q2, p1), d1)
    lo, hi = min(a, b), max(a, b)
    return lo <= span and hi >= 0


def ray_hits_segment(
    p: Pt, d: Pt, a: Pt, b: Pt
) -> Optional[tuple[str, Fraction, Fraction]]:
    """First contact data of the ray p + t*d (t > 0) with segment [a, b].

    Returns ("point", t, u) for a transversal hit at parameter u in
    [0, 1] along the segment, ("collinear", ta, tb) when the ray runs
    inside the segment's line (ta, tb the ray parameters of a and b), or
    None.  Callers pick the smallest admissible t among edges.
    """
    s = vsub(b, a)
    denom = cross(d, s)
    w = vsub(a, p)
    if denom == 0:
        if cross(w, d) != 0:
            return None
        dd = dot(d, d)
        return ("collinear", dot(w, d) / dd, dot(vsub(b, p), d) / dd)
    t = cross(w, s) / denom
    u = cross(w, d) / denom
    if t > 0 and 0 <= u <= 1:
        return ("point", t, u)
    return None


def polygon_simple_violation(vertices: Sequence[Pt]) -> Optional[str]:
    """A reason the closed polygonal chain is not a simple ccw polygon."""
    n = len(vertices)
    if n < 3:
        return f"only {n} vertices"
    if len(set(vertices)) != n:
        return "repeated vertex"
    for i in range(n):
        if vertices[i] == vertices[(i + 1) % n]:
            return "zero-length edge"
    if signed_area2(vertices) <= 0:
        return "vertices are not counterclockwise"
    for i in range(n):
        u = vsub(vertices[(i + 1) % n], vertices[i])
        w = vsub(vertices[(i - 1) % n], vertices[i])
        if same_dir(u, w):
            return f"degenerate corner at vertex {i}"
    for i in range(n):
        a1, a2 = vertices[i], vertices[(i + 1) % n]
        for j in range(i + 1, n):
            if j == i or (j + 1) % n == i or (i + 1) % n == j:
                continue
            b1, b2 = vertices[j], vertices[(j + 1) % n]
            if closed_segments_intersect(a1, a2, b1, b2):
                return f"edges {i} and {j} intersect"
    return None


def point_in_polygon_strict(vertices: Sequence[Pt], p: Pt) -> bool:
    """Is p strictly inside the simple polygon (boundary excluded)."""
    n = len(vertices)
    for i in range(n):
        if on_segment(p, vertices[i], vertices[(i + 1) % n]):
            return False
    inside = False
    for i in range(n):
        a, b = vertices[i], vertices[(i + 1) % n]
        # half-open rule: an endpoint on the scanline counts for the
        # edge that continues strictly above it
        if (a[1] <= p[1]) != (b[1] <= p[1]):
            x = a[0] + (p[1] - a[1]) * (b[0] - a[0]) / (b[1] - a[1])
            if x > p[0]:
                inside = not inside
    return inside
