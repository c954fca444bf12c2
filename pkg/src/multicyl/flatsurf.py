"""Translation surfaces from glued rational polygons, with exact tracing.

A surface is a list of simple counterclockwise polygons with rational
vertices plus a perfect matching of directed edges; matched edges carry
equal and opposite vectors and are identified by translation.  All
geometry below is exact: straight lines are traced polygon by polygon
with Fraction arithmetic, cone angles are counted by sweeping corner
wedges past a reference direction, and no routine ever touches a float.

The three capabilities layered on the tracer:

* ``decompose_direction`` shears a rational direction to horizontal and
  traces every separatrix out of every cone point.  If they all close
  up into saddle connections, the complement is a union of open
  cylinders, which are recovered by shooting vertically off each
  connection and certified by retracing their core geodesics.
* Saddle paths (cyclic chains of saddle connections) are verified by
  tracing, and ``local_geodesic_check`` decides the angle-at-least-pi
  condition on both sides at every junction by walking corner wedges,
  again without ever computing a transcendental angle.
* ``graft`` opens the surface along a saddle path and widens it with
  parallelogram strips so that the path's free homotopy class becomes
  a cylinder core; ``find_graft_t`` searches for a strip width whose
  cylinder closes and returns a self-verifying certificate.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from ._geom import (
    Pt,
    cross,
    dot,
    frac,
    in_ccw_span,
    is_zero,
    on_segment,
    open_segments_intersect,
    opposite_dir,
    polygon_simple_violation,
    ray_hits_segment,
    same_dir,
    signed_area2,
    vadd,
    vneg,
    vscale,
    vsub,
)
from .curves import ConfigError, ValidationReport, Violation

Edge = Tuple[int, int]
Corner = Tuple[int, int]

DEFAULT_TRACE_BUDGET = 2**20


class FlatError(RuntimeError):
    """Internal tracing or rebuilding failure; never a bad-input signal."""


def _coerce_point(p) -> Pt:
    x, y = p
    return (frac(x), frac(y))


@dataclass(frozen=True)
class FlatSurface:
    """Polygons with rational vertices glued edge-to-edge by translation."""

    polygons: Tuple[Tuple[Pt, ...], ...]
    gluings: Mapping[Edge, Edge]

    def __init__(self, polygons, gluings):
        polys = tuple(tuple(_coerce_point(v) for v in poly) for poly in polygons)
        glue = {}
        for a, b in dict(gluings).items():
            ka = (int(a[0]), int(a[1]))
            kb = (int(b[0]), int(b[1]))
            glue[ka] = kb
            glue.setdefault(kb, ka)
        object.__setattr__(self, "polygons", polys)
        object.__setattr__(self, "gluings", glue)

    def edge_vector(self, edge: Edge) -> Pt:
        poly = self.polygons[edge[0]]
        return vsub(poly[(edge[1] + 1) % len(poly)], poly[edge[1]])

    def edge_endpoints(self, edge: Edge) -> tuple[Pt, Pt]:
        poly = self.polygons[edge[0]]
        return poly[edge[1]], poly[(edge[1] + 1) % len(poly)]

    def cross_translation(self, edge: Edge) -> Pt:
        """Translation applied to a point when it crosses this edge."""
        q, j = self.gluings[edge]
        target = self.polygons[q][(j + 1) % len(self.polygons[q])]
        return vsub(target, self.polygons[edge[0]][edge[1]])

    def area(self) -> Fraction:
        return sum((signed_area2(p) for p in self.polygons), Fraction(0)) / 2

    def to_doc(self) -> dict:
        pairs = sorted({tuple(sorted((a, b))) for a, b in self.gluings.items()})
        return {
            "polygons": [
                [[str(x), str(y)] for x, y in poly] for poly in self.polygons
            ],
            "gluings": [[a[0], a[1], b[0], b[1]] for a, b in pairs],
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "FlatSurface":
        polys = [
            [(Fraction(x), Fraction(y)) for x, y in poly] for poly in doc["polygons"]
        ]
        glue = {(p, e): (q, f) for p, e, q, f in doc["gluings"]}
        return cls(polys, glue)

    def dumps(self) -> str:
        return json.dumps(self.to_doc(), sort_keys=True, indent=2) + "\n"

    @classmethod
    def loads(cls, text: str) -> "FlatSurface":
        return cls.from_doc(json.loads(text))


# ---------------------------------------------------------------------------
# vertex classes and validation

def _corner_next(s: FlatSurface, corner: Corner) -> Corner:
    """The next corner counterclockwise around the same surface point."""
    p, i = corner
    n = len(s.polygons[p])
    return s.gluings[(p, (i - 1) % n)]


def _corner_wedge(s: FlatSurface, corner: Corner) -> tuple[Pt, Pt]:
    """Boundary rays (out-edge, reversed in-edge) of the corner's wedge."""
    p, i = corner
    n = len(s.polygons[p])
    return s.edge_vector((p, i)), vneg(s.edge_vector((p, (i - 1) % n)))


@dataclass(frozen=True)
class VertexClass:
    corners: Tuple[Corner, ...]
    turns: int  # total angle divided by a full turn

    @property
    def point_label(self) -> Corner:
        return self.corners[0]


def vertex_classes(s: FlatSurface) -> tuple[VertexClass, ...]:
    """Orbits of polygon corners under the gluing, with exact angles."""
    seen: set[Corner] = set()
    classes: List[VertexClass] = []
    reference = (Fraction(1), Fraction(0))
    for p in range(len(s.polygons)):
        for i in range(len(s.polygons[p])):
            if (p, i) in seen:
                continue
            orbit: List[Corner] = []
            c = (p, i)
            while c not in seen:
                seen.add(c)
                orbit.append(c)
                c = _corner_next(s, c)
            if c != (p, i):
                raise FlatError("corner orbit failed to close")
            turns = 0
            for corner in orbit:
                d1, d2 = _corner_wedge(s, corner)
                if in_ccw_span(d1, d2, reference):
                    turns += 1
            classes.append(VertexClass(tuple(sorted(orbit)), turns))
    classes.sort(key=lambda k: k.corners[0])
    return tuple(classes)


def cone_points(s: FlatSurface) -> tuple[VertexClass, ...]:
    return tuple(k for k in vertex_classes(s) if k.turns != 1)


def cone_orders(s: FlatSurface) -> tuple[int, ...]:
    """Cone angle excesses in full turns, largest first."""
    return tuple(sorted((k.turns - 1 for k in cone_points(s)), reverse=True))


def genus(s: FlatSurface) -> int:
    n_edges, rem = divmod(sum(len(p) for p in s.polygons), 2)
    if rem:
        raise ConfigError("odd number of directed edges")
    chi = len(vertex_classes(s)) - n_edges + len(s.polygons)
    if chi % 2:
        raise ConfigError("odd Euler characteristic")
    return (2 - chi) // 2


def validate_surface(s: FlatSurface) -> ValidationReport:
    """Check the glued-polygon invariants and report violations by name."""
    bad: List[Violation] = []
    if not s.polygons:
        return ValidationReport((Violation("empty", "no polygons"),))
    for p, poly in enumerate(s.polygons):
        reason = polygon_simple_violation(poly)
        if reason is not None:
            bad.append(Violation("bad-polygon", f"polygon {p}: {reason}"))
    if bad:
        return ValidationReport(tuple(bad))

    edges = {(p, i) for p in range(len(s.polygons)) for i in range(len(s.polygons[p]))}
    for e in edges:
        partner = s.gluings.get(e)
        if partner is None:
            bad.append(Violation("unglued-edge", f"edge {e} has no partner"))
            continue
        if partner not in edges:
            bad.append(Violation("bad-gluing", f"edge {e} glued to missing {partner}"))
            continue
        if partner == e:
            bad.append(Violation("bad-gluing", f"edge {e} glued to itself"))
            continue
        if s.gluings.get(partner) != e:
            bad.append(Violation("bad-gluing", f"gluing not involutive at {e}"))
            continue
        if vadd(s.edge_vector(e), s.edge_vector(partner)) != (0, 0):
            bad.append(
                Violation(
                    "bad-gluing",
                    f"edges {e} and {partner} are not equal and opposite",
                )
            )
    for e in s.gluings:
        if e not in edges:
            bad.append(Violation("bad-gluing", f"gluing names missing edge {e}"))
    if bad:
        return ValidationReport(tuple(bad))

    reached = {0}
    frontier = [0]
    while frontier:
        p = frontier.pop()
        for i in range(len(s.polygons[p])):
            q = s.gluings[(p, i)][0]
            if q not in reached:
                reached.add(q)
                frontier.append(q)
    if len(reached) != len(s.polygons):
        bad.append(
            Violation(
                "disconnected",
                f"only {len(reached)} of {len(s.polygons)} polygons reachable",
            )
        )
    if bad:
        return ValidationReport(tuple(bad))

    classes = vertex_classes(s)
    for k in classes:
        if k.turns < 1:
            bad.append(
                Violation("bad-angle", f"vertex class {k.corners[0]} has zero angle")
            )
    n_edges = sum(len(p) for p in s.polygons) // 2
    chi = len(classes) - n_edges + len(s.polygons)
    excess = sum(k.turns - 1 for k in classes)
    if excess != -chi:
        bad.append(
            Violation(
                "bad-angle",
                f"angle excess {excess} does not match Euler count {-chi}",
            )
        )
    return ValidationReport(tuple(bad))


def require_valid_surface(s: FlatSurface) -> None:
    report = validate_surface(s)
    if not report.ok:
        raise ConfigError("invalid surface: " + "; ".join(report.names()))


def holonomy(s: FlatSurface, edges: Sequence[Edge]) -> Pt:
    """Total translation along a sequence of directed edges."""
    total = (Fraction(0), Fraction(0))
    for e in edges:
        total = vadd(total, s.edge_vector(e))
    return total


# ---------------------------------------------------------------------------
# exact straight-line tracing

@dataclass
class _Piece:
    """One chart-level segment of a traced line."""

    poly: int
    a: Pt
    b: Pt
    lam0: Fraction  # line parameter at a, in units of the direction vector
    mirror: Optional[tuple[int, Pt, Pt]] = None  # same points across a followed edge


class _Tracer:
    """Walks a straight line across the surface one event at a time."""

    def __init__(self, s: FlatSurface, d: Pt, budget: int):
        if is_zero(d):
            raise ConfigError("direction must be nonzero")
        self.s = s
        self.d = d
        self.dd = dot(d, d)
        self.budget = budget
        self.lam = Fraction(0)
        classes = vertex_classes(s)
        self.class_of: Dict[Corner, int] = {}
        for idx, k in enumerate(classes):
            for c in k.corners:
                self.class_of[c] = idx
        self.classes = classes
        # state: ("free", poly, pt) | ("vertex", poly, vidx) | ("follow", poly, eidx)
        self.state: Optional[tuple] = None

    def start_free(self, poly: int, pt: Pt) -> None:
        self.state = ("free", poly, pt)

    def start_vertex(self, poly: int, vidx: int) -> None:
        self.state = ("vertex", poly, vidx)

    def start_corner(self, corner: Corner) -> None:
        """Leave a specific corner, along its out-edge or into its wedge."""
        d1, d2 = _corner_wedge(self.s, corner)
        if same_dir(d1, self.d):
            self.state = ("follow", corner[0], corner[1])
        elif in_ccw_span(d1, d2, self.d):
            self.state = ("free", corner[0], self.s.polygons[corner[0]][corner[1]])
        else:
            raise ConfigError(
                f"direction does not leave through the wedge of corner {corner}"
            )

    def _emit(self, poly: int, a: Pt, b: Pt, follow_edge: Optional[int]) -> _Piece:
        piece = _Piece(poly, a, b, self.lam)
        if follow_edge is not None:
            q, j = self.s.gluings[(poly, follow_edge)]
            tau = self.s.cross_translation((poly, follow_edge))
            piece.mirror = (q, vadd(a, tau), vadd(b, tau))
        else:
            # a chord may still run inside an edge it did not formally follow
            verts = self.s.polygons[poly]
            n = len(verts)
            for k in range(n):
                va, vb = verts[k], verts[(k + 1) % n]
                ev = vsub(vb, va)
                if (
                    cross(ev, vsub(a, va)) == 0
                    and cross(ev, vsub(b, va)) == 0
                    and on_segment(a, va, vb)
                    and on_segment(b, va, vb)
                ):
                    tau = self.s.cross_translation((poly, k))
                    piece.mirror = (
                        self.s.gluings[(poly, k)][0],
                        vadd(a, tau),
                        vadd(b, tau),
                    )
                    break
        self.lam += dot(vsub(b, a), self.d) / self.dd
        return piece

    def _step_free(self, poly: int, pt: Pt):
        """First boundary contact of the forward ray from pt."""
        verts = self.s.polygons[poly]
        n = len(verts)
        best = None  # (t, kind, data); vertex events win ties
        for k in range(n):
            a, b = verts[k], verts[(k + 1) % n]
            hit = ray_hits_segment(pt, self.d, a, b)
            if hit is None:
                continue
            if hit[0] == "point":
                _, t, u = hit
                if u == 0:
                    cand = (t, 0, ("vertex", k))
                elif u == 1:
                    cand = (t, 0, ("vertex", (k + 1) % n))
                else:
                    cand = (t, 1, ("edge", k, vadd(pt, vscale(self.d, t))))
            else:
                _, ta, tb = hit
                lo, hi = min(ta, tb), max(ta, tb)
                if hi <= 0:
                    continue
                if lo <= 0:
                    # standing on the edge line inside it: run to the far end
                    t = hi
                else:
                    t = lo
                vidx = k if (ta == t) else (k + 1) % n
                cand = (t, 0, ("vertex", vidx))
            if best is None or (cand[0], cand[1]) < (best[0], best[1]):
                best = cand
        return best

    def step(self):
        """Advance one event.

        Returns ("piece", _Piece) after each swept chart segment,
        ("cone", class_index, arrival_corner) on hitting a cone point,
        or ("vertex-class", class_index) right before passing through a
        regular vertex (the caller may stop there; calling step() again
        continues through it).
        """
        kind = self.state[0]
        if kind == "vertex":
            _, poly, vidx = self.state
            cls = self.class_of[(poly, vidx)]
            if self.classes[cls].turns != 1:
                return ("cone", cls, (poly, vidx))
            for corner in self.classes[cls].corners:
                d1, _ = _corner_wedge(self.s, corner)
                if same_dir(d1, self.d):
                    self.state = ("follow", corner[0], corner[1])
                    return ("vertex-class", cls)
            for corner in self.classes[cls].corners:
                d1, d2 = _corner_wedge(self.s, corner)
                if in_ccw_span(d1, d2, self.d):
                    q = corner[0]
                    self.state = ("free", q, self.s.polygons[q][corner[1]])
                    return ("vertex-class", cls)
            raise FlatError("regular vertex has no wedge containing the direction")
        if kind == "follow":
            _, poly, eidx = self.state
            verts = self.s.polygons[poly]
            n = len(verts)
            piece = self._emit(poly, verts[eidx], verts[(eidx + 1) % n], eidx)
            self.state = ("vertex", poly, (eidx + 1) % n)
            return ("piece", piece)
        _, poly, pt = self.state
        hit = self._step_free(poly, pt)
        if hit is None:
            # pointing out of the polygon from its boundary: hop across
            verts = self.s.polygons[poly]
            n = len(verts)
            for k in range(n):
                a, b = verts[k], verts[(k + 1) % n]
                if on_segment(pt, a, b, closed=False):
                    q = self.s.gluings[(poly, k)][0]
                    self.state = (
                        "free",
                        q,
                        vadd(pt, self.s.cross_translation((poly, k))),
                    )
                    return self.step()
            raise FlatError(f"ray from {pt} escaped polygon {poly}")
        t, _, data = hit
        end = vadd(pt, vscale(self.d, t))
        if data[0] == "vertex":
            piece = self._emit(poly, pt, self.s.polygons[poly][data[1]], None)
            self.state = ("vertex", poly, data[1])
            return ("piece", piece)
        _, eidx, exit_pt = data
        piece = self._emit(poly, pt, exit_pt, None)
        q = self.s.gluings[(poly, eidx)][0]
        self.state = ("free", q, vadd(exit_pt, self.s.cross_translation((poly, eidx))))
        return ("piece", piece)


def _trace_to_cone(
    s: FlatSurface, corner: Corner, d: Pt, budget: int
) -> tuple[str, object]:
    """Trace from a cone corner until the next cone point or budget.

    Returns ("cone", (pieces, lam, arrival_corner)) or ("budget", pieces).
    """
    tracer = _Tracer(s, d, budget)
    tracer.start_corner(corner)
    pieces: List[_Piece] = []
    for _ in range(budget):
        ev = tracer.step()
        if ev[0] == "piece":
            pieces.append(ev[1])
        elif ev[0] == "cone":
            return ("cone", (pieces, tracer.lam, ev[2]))
    return ("budget", pieces)


# ---------------------------------------------------------------------------
# direction decomposition

@dataclass(frozen=True)
class CylinderCert:
    """A regular closed geodesic, self-verifying by retracing."""

    poly: int
    point: Pt
    direction: Pt
    holonomy: Pt

    def to_doc(self) -> dict:
        return {
            "polygon": self.poly,
            "point": [str(self.point[0]), str(self.point[1])],
            "direction": [str(self.direction[0]), str(self.direction[1])],
            "holonomy": [str(self.holonomy[0]), str(self.holonomy[1])],
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "CylinderCert":
        def pt_of(v):
            return (Fraction(v[0]), Fraction(v[1]))

        return cls(
            int(doc["polygon"]),
            pt_of(doc["point"]),
            pt_of(doc["direction"]),
            pt_of(doc["holonomy"]),
        )


@dataclass(frozen=True)
class FlatCylinder:
    """One cylinder of a periodic direction.

    The holonomy is the core's translation vector in surface
    coordinates; the height is measured in the sheared frame where the
    direction is horizontal (for the horizontal direction itself this
    is the ordinary vertical height).
    """

    holonomy: Pt
    height: Fraction
    cert: CylinderCert


@dataclass(frozen=True)
class FlatConnection:
    """A saddle connection in the decomposed direction."""

    corner: Corner
    holonomy: Pt


@dataclass(frozen=True)
class Periodic:
    cylinders: Tuple[FlatCylinder, ...]
    connections: Tuple[FlatConnection, ...]


@dataclass(frozen=True)
class NotPeriodic:
    """A separatrix that did not close within the crossing budget."""

    corner: Corner
    direction: Pt
    budget: int


def _canonical_direction(direction) -> Pt:
    d = _coerce_point(direction)
    if is_zero(d):
        raise ConfigError("direction must be nonzero")
    if d[0] < 0 or (d[0] == 0 and d[1] < 0):
        d = vneg(d)
    return d


def _shear_maps(d: Pt):
    """Exact unimodular map taking d to the positive x-axis, and back."""
    if d[0] == 0:
        fwd = lambda p: (p[1], -p[0])
        back = lambda p: (-p[1], p[0])
    else:
        c = d[1] / d[0]
        fwd = lambda p: (p[0], p[1] - c * p[0])
        back = lambda p: (p[0], p[1] + c * p[0])
    return fwd, back


def _transform(s: FlatSurface, fn) -> FlatSurface:
    return FlatSurface(
        tuple(tuple(fn(v) for v in poly) for poly in s.polygons), dict(s.gluings)
    )


def _closure_trace(
    s: FlatSurface, poly: int, pt: Pt, d: Pt, budget: int
) -> tuple[str, object]:
    """Trace until the line returns to its start point (t > 0).

    Returns ("closed", (lam, pieces)), ("cone", corner) or ("budget",).
    """
    tracer = _Tracer(s, d, budget)
    verts = s.polygons[poly]
    if pt in verts:
        tracer.start_vertex(poly, verts.index(pt))
    else:
        tracer.start_free(poly, pt)
    dd = dot(d, d)
    pieces: List[_Piece] = []
    for _ in range(budget):
        ev = tracer.step()
        if ev[0] == "cone":
            return ("cone", ev[2])
        if ev[0] != "piece":
            continue
        piece: _Piece = ev[1]
        pieces.append(piece)
        charts = [(piece.poly, piece.a, piece.b)]
        if piece.mirror is not None:
            charts.append(piece.mirror)
        for chart, a, b in charts:
            if chart != poly or not on_segment(pt, a, b):
                continue
            lam_here = piece.lam0 + dot(vsub(pt, a), d) / dd
            if lam_here > 0:
                return ("closed", (lam_here, pieces))
    return ("budget",)


def _vertex_closure_trace(
    s: FlatSurface, corner: Corner, d: Pt, budget: int
) -> tuple[str, object]:
    """Closure trace for a core that passes through a regular vertex."""
    tracer = _Tracer(s, d, budget)
    tracer.start_vertex(corner[0], corner[1])
    target = tracer.class_of[corner]
    first = True
    for _ in range(budget):
        ev = tracer.step()
        if ev[0] == "cone":
            return ("cone", ev[2])
        if ev[0] == "vertex-class" and ev[1] == target:
            if not first:
                return ("closed", (tracer.lam, None))
        first = False
    return ("budget",)


def decompose_direction(
    s: FlatSurface, direction, *, budget: int = DEFAULT_TRACE_BUDGET
):
    """Cylinder decomposition of a rational direction, or a witness.

    Shears the direction to horizontal, traces every separatrix out of
    every cone point, and either returns the full set of cylinders and
    boundary saddle connections (``Periodic``) or the first separatrix
    that exceeded the crossing budget (``NotPeriodic``).
    """
    require_valid_surface(s)
    d = _canonical_direction(direction)
    fwd, back = _shear_maps(d)
    ss = _transform(s, fwd)
    horiz = (Fraction(1), Fraction(0))
    area = ss.area()

    classes = vertex_classes(ss)
    cone_classes = [k for k in classes if k.turns != 1]

    if not cone_classes:
        corner = classes[0].corners[0]
        got = _vertex_closure_trace(ss, corner, horiz, budget)
        if got[0] != "closed":
            return NotPeriodic(corner, d, budget)
        lam = got[1][0]
        circ = lam  # direction (1, 0): the holonomy is (lam, 0)
        cert = CylinderCert(
            corner[0], s.polygons[corner[0]][corner[1]], d, back((circ, Fraction(0)))
        )
        return Periodic(
            (FlatCylinder(back((circ, Fraction(0))), area / circ, cert),), ()
        )

    connections: List[tuple[Corner, Fraction, List[_Piece]]] = []
    for k in cone_classes:
        for corner in k.corners:
            d1, d2 = _corner_wedge(ss, corner)
            if not in_ccw_span(d1, d2, horiz):
                continue
            got = _trace_to_cone(ss, corner, horiz, budget)
            if got[0] != "cone":
                return NotPeriodic(corner, d, budget)
            pieces, lam, _arrival = got[1]
            connections.append((corner, lam, pieces))

    by_chart: Dict[int, List[tuple[Fraction, Fraction, Fraction]]] = {}

    def register(chart: int, a: Pt, b: Pt) -> None:
        x1, x2 = (a[0], b[0]) if a[0] <= b[0] else (b[0], a[0])
        by_chart.setdefault(chart, []).append((a[1], x1, x2))

    for _, _, pieces in connections:
        for piece in pieces:
            register(piece.poly, piece.a, piece.b)
            if piece.mirror is not None:
                register(*piece.mirror)

    def ceiling_hits(piece: _Piece) -> List[Fraction]:
        hits = []
        for chart, a, b in [(piece.poly, piece.a, piece.b)] + (
            [piece.mirror] if piece.mirror else []
        ):
            x0 = a[0]
            for y, x1, x2 in by_chart.get(chart, ()):
                if x1 <= x0 <= x2 and a[1] <= y <= b[1]:
                    lam = piece.lam0 + (y - a[1])
                    if lam > 0:
                        hits.append(lam)
        return hits

    up = (Fraction(0), Fraction(1))
    cylinders: Dict[tuple, FlatCylinder] = {}
    for _, _, pieces in connections:
        first = pieces[0]
        mid = vscale(vadd(first.a, first.b), Fraction(1, 2))
        tracer = _Tracer(ss, up, budget)
        tracer.start_free(first.poly, mid)
        vert_pieces: List[_Piece] = []
        height: Optional[Fraction] = None
        for _ in range(budget):
            ev = tracer.step()
            if ev[0] == "cone":
                height = tracer.lam
                break
            if ev[0] != "piece":
                continue
            vert_pieces.append(ev[1])
            hits = ceiling_hits(ev[1])
            if hits:
                height = min(hits)
                break
        if height is None:
            raise FlatError("vertical shot found no ceiling within budget")
        half = height / 2
        core_chart, core_pt = None, None
        for piece in vert_pieces:
            top = piece.lam0 + (piece.b[1] - piece.a[1])
            if piece.lam0 <= half <= top:
                core_chart = piece.poly
                core_pt = (piece.a[0], piece.a[1] + (half - piece.lam0))
                break
        if core_chart is None:
            raise FlatError("cylinder midpoint fell outside the vertical trace")
        got = _closure_trace(ss, core_chart, core_pt, horiz, budget)
        if got[0] != "closed":
            raise FlatError("cylinder core failed to close")
        lam, core_pieces = got[1]
        events = []
        for piece in core_pieces[1:]:
            events.append((piece.poly, piece.a))
        if not events:
            raise FlatError("cylinder core crossed no edges")
        sig = min(events)
        if sig not in cylinders:
            cert = CylinderCert(core_chart, back(core_pt), d, back((lam, Fraction(0))))
            cylinders[sig] = FlatCylinder(back((lam, Fraction(0))), height, cert)

    total = sum(
        (cyl.height * fwd(cyl.holonomy)[0] for cyl in cylinders.values()),
        Fraction(0),
    )
    if total != area:
        raise FlatError(
            f"cylinder areas sum to {total}, expected the surface area {area}"
        )
    cyls = tuple(
        sorted(cylinders.values(), key=lambda c: (c.holonomy, c.height, c.cert.poly))
    )
    conns = tuple(
        sorted(
            (
                FlatConnection(corner, back((lam, Fraction(0))))
                for corner, lam, _ in connections
            ),
            key=lambda fc: (fc.corner, fc.holonomy),
        )
    )
    return Periodic(cyls, conns)


def verify_cylinder_cert(
    s: FlatSurface, cert: CylinderCert, *, budget: int = DEFAULT_TRACE_BUDGET
) -> bool:
    """Retrace the witness geodesic and confirm it closes as stated."""
    try:
        verts = s.polygons[cert.poly]
    except IndexError:
        return False
    d = cert.direction
    if is_zero(d):
        return False
    if cert.point in verts:
        got = _vertex_closure_trace(s, (cert.poly, verts.index(cert.point)), d, budget)
    else:
        got = _closure_trace(s, cert.poly, cert.point, d, budget)
    if got[0] != "closed":
        return False
    lam = got[1][0]
    return vscale(d, lam) == cert.holonomy


# ---------------------------------------------------------------------------
# saddle paths

@dataclass(frozen=True)
class SaddleSegment:
    """One saddle connection, pinned to the corner wedge it leaves from."""

    corner: Corner
    direction: Pt
    holonomy: Pt

    def to_doc(self) -> dict:
        return {
            "corner": list(self.corner),
            "direction": [str(self.direction[0]), str(self.direction[1])],
            "holonomy": [str(self.holonomy[0]), str(self.holonomy[1])],
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "SaddleSegment":
        return cls(
            (int(doc["corner"][0]), int(doc["corner"][1])),
            (Fraction(doc["direction"][0]), Fraction(doc["direction"][1])),
            (Fraction(doc["holonomy"][0]), Fraction(doc["holonomy"][1])),
        )


@dataclass(frozen=True)
class SaddlePath:
    """A cyclic chain of saddle connections joining cone points."""

    segments: Tuple[SaddleSegment, ...]

    def holonomy(self) -> Pt:
        total = (Fraction(0), Fraction(0))
        for seg in self.segments:
            total = vadd(total, seg.holonomy)
        return total

    def to_doc(self) -> dict:
        return {"segments": [seg.to_doc() for seg in self.segments]}

    @classmethod
    def from_doc(cls, doc: dict) -> "SaddlePath":
        return cls(tuple(SaddleSegment.from_doc(d) for d in doc["segments"]))


@dataclass(frozen=True)
class _TracedSegment:
    pieces: Tuple[_Piece, ...]
    arrival: Corner  # the corner whose polygon the trace ended in


def trace_path(
    s: FlatSurface, path: SaddlePath, *, budget: int = DEFAULT_TRACE_BUDGET
) -> tuple[_TracedSegment, ...]:
    """Trace every segment, checking closure and the stated holonomies."""
    if not path.segments:
        raise ConfigError("empty saddle path")
    tracer_probe = _Tracer(s, (Fraction(1), Fraction(0)), 1)  # class tables
    class_of = tracer_probe.class_of
    classes = tracer_probe.classes
    traced: List[_TracedSegment] = []
    for idx, seg in enumerate(path.segments):
        if seg.corner not in class_of:
            raise ConfigError(f"segment {idx}: unknown corner {seg.corner}")
        if classes[class_of[seg.corner]].turns == 1:
            raise ConfigError(f"segment {idx}: corner {seg.corner} is not a cone point")
        if is_zero(seg.direction):
            raise ConfigError(f"segment {idx}: zero direction")
        if not same_dir(seg.direction, seg.holonomy):
            raise ConfigError(
                f"segment {idx}: holonomy is not positively parallel to direction"
            )
        got = _trace_to_cone(s, seg.corner, seg.direction, budget)
        if got[0] != "cone":
            raise ConfigError(f"segment {idx}: no cone point within budget")
        pieces, lam, arrival = got[1]
        if vscale(seg.direction, lam) != seg.holonomy:
            raise ConfigError(
                f"segment {idx}: traced holonomy {vscale(seg.direction, lam)} "
                f"differs from stated {seg.holonomy}"
            )
        nxt = path.segments[(idx + 1) % len(path.segments)]
        if class_of[arrival] != class_of[nxt.corner]:
            raise ConfigError(
                f"segment {idx} ends at a different cone point than segment "
                f"{(idx + 1) % len(path.segments)} starts from"
            )
        traced.append(_TracedSegment(tuple(pieces), arrival))
    return tuple(traced)


def _segment_events(s: FlatSurface, pieces: Sequence[_Piece]) -> List[tuple]:
    """Canonical surface points where a traced segment meets edges.

    One event per junction between consecutive pieces: a regular vertex
    passage is keyed by its vertex class, an edge crossing by the lesser
    of its two chart representations.  Segment endpoints (cone points)
    produce no event, so touching at endpoints is not an intersection.
    """
    probe = _Tracer(s, (Fraction(1), Fraction(0)), 1)
    events: List[tuple] = []
    for k in range(len(pieces) - 1):
        end_poly, end_pt = pieces[k].poly, pieces[k].b
        verts = s.polygons[end_poly]
        if end_pt in verts:
            events.append(("v", probe.class_of[(end_poly, verts.index(end_pt))]))
        else:
            nxt = pieces[k + 1]
            events.append(("e", min((end_poly, end_pt), (nxt.poly, nxt.a))))
    return events


def path_is_embedded(
    s: FlatSurface, path: SaddlePath, *, budget: int = DEFAULT_TRACE_BUDGET
) -> bool:
    """Do the segments' interiors stay pairwise (and self) disjoint.

    Chart chords are compared pairwise with exact open-segment tests,
    and the points where a segment crosses an edge or passes a regular
    vertex are compared as canonical surface events, so a crossing that
    happens exactly on an edge is still caught.
    """
    traced = trace_path(s, path, budget=budget)
    chords: List[tuple[int, Pt, Pt, int, int]] = []  # chart, a, b, seg, piece
    events: List[List[tuple]] = []
    for sidx, ts in enumerate(traced):
        events.append(_segment_events(s, ts.pieces))
        for pidx, piece in enumerate(ts.pieces):
            chords.append((piece.poly, piece.a, piece.b, sidx, pidx))
            if piece.mirror is not None:
                m = piece.mirror
                chords.append((m[0], m[1], m[2], sidx, pidx))
    for sidx, evs in enumerate(events):
        if len(set(evs)) != len(evs):
            return False  # a segment revisits one of its own points
    flat_events = [ev for evs in events for ev in evs]
    if len(set(flat_events)) != len(flat_events):
        return False  # two segments share an interior point
    for i in range(len(chords)):
        for j in range(i + 1, len(chords)):
            ci, ai, bi, si, pi = chords[i]
            cj, aj, bj, sj, pj = chords[j]
            if ci != cj or (si, pi) == (sj, pj):
                continue
            if open_segments_intersect(ai, bi, aj, bj):
                return False
            # a chart endpoint of one chord strictly inside the other
            for p in (ai, bi):
                if p not in (aj, bj) and on_segment(p, aj, bj, closed=False):
                    return False
            for p in (aj, bj):
                if p not in (ai, bi) and on_segment(p, ai, bi, closed=False):
                    return False
    return True


def _pin_back_ray(s: FlatSurface, arrival: Corner, back: Pt) -> Corner:
    """Corner of the arrival vertex whose half-open wedge holds the ray.

    A segment that ends at a cone point came in through the closed
    wedge of the corner the tracer reported; if the backward ray sits
    exactly on the wedge's far boundary it belongs to the next corner
    counterclockwise under the half-open convention.
    """
    d1, d2 = _corner_wedge(s, arrival)
    if in_ccw_span(d1, d2, back):
        return arrival
    if same_dir(back, d2):
        return _corner_next(s, arrival)
    raise FlatError(f"backward ray not in the closed wedge of corner {arrival}")


def _arc_contains(a: Pt, b: Pt, x: Pt) -> bool:
    """Is x inside the half-open ccw arc (a, b], of width in (0, 2 pi)."""
    if same_dir(x, b):
        return True
    return not same_dir(x, a) and in_ccw_span(a, b, x)


def _sector_at_least_pi(s: FlatSurface, cu: Corner, u: Pt, cw: Corner, w: Pt) -> bool:
    """Is the ccw sector from ray u (at corner cu) to ray w at least pi.

    The sector develops as a monotone ccw sweep through consecutive
    corner wedges; its total angle reaches pi exactly when the sweep
    passes the ray opposite to u, so no angle is ever computed.
    """
    opp = vneg(u)
    d1u, d2u = _corner_wedge(s, cu)
    if cu == cw:
        if same_dir(u, w):
            return False  # zero-width sector
        if in_ccw_span(u, d2u, w):
            return _arc_contains(u, w, opp)
    if _arc_contains(u, d2u, opp):
        return True
    c = _corner_next(s, cu)
    limit = sum(len(p) for p in s.polygons) + 2
    for _ in range(limit):
        d1, d2 = _corner_wedge(s, c)
        if c == cw:
            if same_dir(w, d1):
                return False  # sweep ended exactly at w
            return _arc_contains(d1, w, opp)
        if _arc_contains(d1, d2, opp):
            return True
        c = _corner_next(s, c)
    raise FlatError("wedge walk failed to reach the departure corner")


def local_geodesic_check(
    s: FlatSurface, path: SaddlePath, *, budget: int = DEFAULT_TRACE_BUDGET
) -> bool:
    """Angle at least pi on both sides at every junction of the path."""
    traced = trace_path(s, path, budget=budget)
    n = len(path.segments)
    for i in range(n):
        nxt = path.segments[(i + 1) % n]
        u = vneg(path.segments[i].direction)
        w = nxt.direction
        cu = _pin_back_ray(s, traced[i].arrival, u)
        cw = nxt.corner
        if not _sector_at_least_pi(s, cu, u, cw, w):
            return False
        if not _sector_at_least_pi(s, cw, w, cu, u):
            return False
    return True


# ---------------------------------------------------------------------------
# grafting strips along a saddle path

class _Complex:
    """Mutable glued-polygon complex with stable edge keys.

    Splitting a polygon redistributes its edge keys to the parts, and
    splitting an edge replaces one key pair by two, always on both
    sides of the gluing at once, so the complex can be cut open along a
    traced path and reassembled without index bookkeeping.
    """

    def __init__(self, s: FlatSurface):
        self.verts: Dict[int, List[Pt]] = {
            p: list(poly) for p, poly in enumerate(s.polygons)
        }
        self.keys: Dict[int, List[int]] = {}
        self.glue: Dict[int, int] = {}
        key_of: Dict[Edge, int] = {}
        nk = 0
        for p, poly in enumerate(s.polygons):
            row = []
            for i in range(len(poly)):
                key_of[(p, i)] = nk
                row.append(nk)
                nk += 1
            self.keys[p] = row
        for e, f in s.gluings.items():
            self.glue[key_of[e]] = key_of[f]
        self.next_key = nk
        self.next_pid = len(s.polygons)
        self.lineage: Dict[int, List[int]] = {p: [p] for p in range(len(s.polygons))}

    def new_key(self) -> int:
        k = self.next_key
        self.next_key += 1
        return k

    def new_pid(self) -> int:
        p = self.next_pid
        self.next_pid += 1
        return p

    def locate_key(self, key: int) -> tuple[int, int]:
        for pid, row in self.keys.items():
            if key in row:
                return pid, row.index(key)
        raise FlatError(f"missing edge key {key}")

    def split_edge_at(self, key: int, p: Pt) -> None:
        """Insert point p into the keyed edge and its gluing partner."""
        partner = self.glue[key]
        pid, i = self.locate_key(key)
        vs = self.verts[pid]
        a, b = vs[i], vs[(i + 1) % len(vs)]
        if not on_segment(p, a, b, closed=False):
            raise FlatError(f"split point {p} not inside edge {key}")
        qid, j = self.locate_key(partner)
        tau = vsub(self.verts[qid][(j + 1) % len(self.verts[qid])], a)
        k1, k2, k3, k4 = (self.new_key() for _ in range(4))
        self.verts[pid].insert(i + 1, p)
        self.keys[pid][i : i + 1] = [k1, k2]
        qid, j = self.locate_key(partner)  # may have shifted
        self.verts[qid].insert(j + 1, vadd(p, tau))
        self.keys[qid][j : j + 1] = [k3, k4]
        del self.glue[key]
        del self.glue[partner]
        self.glue[k1] = k4
        self.glue[k4] = k1
        self.glue[k2] = k3
        self.glue[k3] = k2

    def ensure_vertex(self, cands: Sequence[int], p: Pt) -> None:
        for pid in cands:
            if p in self.verts[pid]:
                return
        for pid in cands:
            vs = self.verts[pid]
            for i in range(len(vs)):
                if on_segment(p, vs[i], vs[(i + 1) % len(vs)], closed=False):
                    self.split_edge_at(self.keys[pid][i], p)
                    return
        raise FlatError(f"point {p} is not on the boundary of any candidate")

    def locate_containing(self, cands: Sequence[int], p: Pt) -> int:
        from ._geom import point_in_polygon_strict

        for pid in cands:
            if point_in_polygon_strict(self.verts[pid], p):
                return pid
        raise FlatError(f"no candidate polygon strictly contains {p}")

    def split_poly(self, pid: int, a: Pt, b: Pt) -> tuple[int, int, int, int]:
        """Cut pid along the interior chord a -> b.

        Returns (left_pid, left_key, right_pid, right_key); the left
        part carries the chord directed a -> b (interior to the left of
        travel).  The chord keys are created unglued.
        """
        vs, ks = self.verts[pid], self.keys[pid]
        n = len(vs)
        if a not in vs or b not in vs:
            raise FlatError("chord endpoints must be vertices before splitting")
        ia, ib = vs.index(a), vs.index(b)
        kab, kba = self.new_key(), self.new_key()
        idx = ia
        right_idx = [ia]
        while idx != ib:
            idx = (idx + 1) % n
            right_idx.append(idx)
        left_idx = [ib]
        idx = ib
        while idx != ia:
            idx = (idx + 1) % n
            left_idx.append(idx)
        if len(right_idx) < 3 or len(left_idx) < 3:
            raise FlatError("chord coincides with an edge")
        pl, pr = self.new_pid(), self.new_pid()
        self.verts[pr] = [vs[t] for t in right_idx]
        self.keys[pr] = [ks[t] for t in right_idx[:-1]] + [kba]
        self.verts[pl] = [vs[t] for t in left_idx]
        self.keys[pl] = [ks[t] for t in left_idx[:-1]] + [kab]
        del self.verts[pid]
        del self.keys[pid]
        for lst in self.lineage.values():
            if pid in lst:
                lst.remove(pid)
                lst.extend([pl, pr])
                break
        else:
            raise FlatError(f"polygon {pid} missing from lineage")
        return pl, kab, pr, kba

    def to_surface(self) -> tuple[FlatSurface, Dict[int, int]]:
        pids = sorted(self.verts)
        index = {pid: i for i, pid in enumerate(pids)}
        pos: Dict[int, Edge] = {}
        for pid in pids:
            for i, k in enumerate(self.keys[pid]):
                pos[k] = (index[pid], i)
        gl = {}
        for k, k2 in self.glue.items():
            if k not in pos or k2 not in pos:
                raise FlatError("gluing references a deleted edge key")
            gl[pos[k]] = pos[k2]
        for k in pos:
            if k not in self.glue:
                raise FlatError(f"edge key {k} left unglued")
        return FlatSurface([tuple(self.verts[p]) for p in pids], gl), index


def _glue_keys(cx: _Complex, k1: int, k2: int) -> None:
    cx.glue[k1] = k2
    cx.glue[k2] = k1


def _cut_chord(cx: _Complex, piece: _Piece) -> tuple[int, int]:
    cands = cx.lineage[piece.poly]
    cx.ensure_vertex(cands, piece.a)
    cx.ensure_vertex(cands, piece.b)
    mid = vscale(vadd(piece.a, piece.b), Fraction(1, 2))
    pid = cx.locate_containing(cands, mid)
    pl, kab, pr, kba = cx.split_poly(pid, piece.a, piece.b)
    return kab, kba


def _cut_along_edge(cx: _Complex, piece: _Piece, c: Pt) -> tuple[int, int]:
    """Open an existing edge along the run [a, b] of the piece."""
    charts = [(piece.poly, piece.a, piece.b)]
    if piece.mirror is not None:
        charts.append(piece.mirror)
    for chart, a, b in charts:
        for pid in cx.lineage[chart]:
            vs = cx.verts[pid]
            n = len(vs)
            for i in range(n):
                va, vb = vs[i], vs[(i + 1) % n]
                if not same_dir(vsub(vb, va), c):
                    continue
                if on_segment(a, va, vb) and on_segment(b, va, vb):
                    cx.ensure_vertex([pid], a)
                    cx.ensure_vertex([pid], b)
                    loc = _find_directed_edge(cx, cx.lineage[chart], a, b)
                    if loc is None:
                        raise FlatError("edge run lost after splitting")
                    pid2, idx = loc
                    lk = cx.keys[pid2][idx]
                    rk = cx.glue[lk]
                    del cx.glue[lk]
                    del cx.glue[rk]
                    return lk, rk
    raise FlatError("edge run not found in any chart")


def _find_directed_edge(cx: _Complex, cands, a: Pt, b: Pt):
    for pid in cands:
        vs = cx.verts[pid]
        n = len(vs)
        for i in range(n):
            if vs[i] == a and vs[(i + 1) % n] == b:
                return pid, i
    return None


@dataclass(frozen=True)
class _Strip:
    left_pid: int
    right_pid: int
    left_start: int
    left_end: int
    right_start: int
    right_end: int


def _add_strips(
    cx: _Complex,
    hol: Pt,
    cvecs: Sequence[Pt],
    left_keys: Sequence[int],
    right_keys: Sequence[int],
    sigma: int,
    t: Fraction,
) -> _Strip:
    """Insert the two parallelogram halves widening one cut segment."""
    m = len(cvecs)
    zero = (Fraction(0), Fraction(0))
    t1 = (-sigma * t, Fraction(0))
    t1p = (sigma * t, Fraction(0))

    lverts = [zero, hol, vadd(hol, t1)]
    acc = vadd(hol, t1)
    for c in cvecs[:-1]:
        acc = vsub(acc, c)
        lverts.append(acc)
    lverts.append(t1)
    lkeys = [cx.new_key() for _ in range(m + 3)]
    lpid = cx.new_pid()
    cx.verts[lpid] = lverts
    cx.keys[lpid] = lkeys

    rverts = [zero, vneg(hol), vadd(vneg(hol), t1p)]
    acc = vadd(vneg(hol), t1p)
    for c in cvecs[:-1]:
        acc = vadd(acc, c)
        rverts.append(acc)
    rverts.append(t1p)
    rkeys = [cx.new_key() for _ in range(m + 3)]
    rpid = cx.new_pid()
    cx.verts[rpid] = rverts
    cx.keys[rpid] = rkeys

    _glue_keys(cx, lkeys[0], rkeys[0])  # seam to seam
    for k in range(m):
        _glue_keys(cx, lkeys[2 + k], left_keys[k])
        _glue_keys(cx, rkeys[2 + k], right_keys[k])
    return _Strip(
        left_pid=lpid,
        right_pid=rpid,
        left_start=lkeys[m + 2],
        left_end=lkeys[1],
        right_start=rkeys[1],
        right_end=rkeys[m + 2],
    )


@dataclass(frozen=True)
class Graft:
    """A widened surface plus the data needed to keep working on it."""

    surface: FlatSurface
    witness_poly: int
    witness_point: Pt
    strip_polys: Tuple[Tuple[int, int], ...]
    lineage: Mapping[int, Tuple[int, ...]]
    t: Fraction


def graft(
    s: FlatSurface,
    path: SaddlePath,
    t,
    *,
    side_choices: Optional[Sequence[str]] = None,
    budget: int = DEFAULT_TRACE_BUDGET,
) -> Graft:
    """Cut along a closed geodesic saddle path and widen it by strips.

    Each segment is opened and two parallelogram halves of horizontal
    width t are inserted; at every junction the halves are cross-glued,
    which is the unique translation-consistent pattern when all
    segments cross the horizontal in the same vertical sense.  Paths
    that change vertical sense, or contain a horizontal segment, are
    not supported and are rejected; side choices therefore carry no
    information here and are only length-checked.

    The area grows by exactly 2 t times the sum of the segments'
    vertical extents, and the rebuilt surface is revalidated before it
    is returned.
    """
    require_valid_surface(s)
    t = frac(t)
    if t <= 0:
        raise ConfigError("strip width must be positive")
    if not path.segments:
        raise ConfigError("empty saddle path")
    signs = {(seg.holonomy[1] > 0) - (seg.holonomy[1] < 0) for seg in path.segments}
    if 0 in signs:
        raise ConfigError("horizontal segments cannot be widened by this graft")
    if len(signs) != 1:
        raise ConfigError("segments must all cross the horizontal the same way")
    sigma = signs.pop()
    if side_choices is not None and len(side_choices) != len(path.segments):
        raise ConfigError("one side choice per segment expected")
    if not local_geodesic_check(s, path, budget=budget):
        raise ConfigError("path is not locally geodesic")
    if not path_is_embedded(s, path, budget=budget):
        raise ConfigError("path is not embedded")

    traced = trace_path(s, path, budget=budget)
    cx = _Complex(s)
    strips: List[_Strip] = []
    for ts, seg in zip(traced, path.segments):
        left_keys: List[int] = []
        right_keys: List[int] = []
        cvecs: List[Pt] = []
        for piece in ts.pieces:
            c = vsub(piece.b, piece.a)
            cvecs.append(c)
            if piece.mirror is not None:
                lk, rk = _cut_along_edge(cx, piece, c)
            else:
                lk, rk = _cut_chord(cx, piece)
            left_keys.append(lk)
            right_keys.append(rk)
        strips.append(
            _add_strips(cx, seg.holonomy, cvecs, left_keys, right_keys, sigma, t)
        )
    n = len(strips)
    for j in range(n):
        _glue_keys(cx, strips[j].left_end, strips[(j + 1) % n].left_start)
        _glue_keys(cx, strips[j].right_end, strips[(j + 1) % n].right_start)

    new_surface, index = cx.to_surface()
    report = validate_surface(new_surface)
    if not report.ok:
        raise FlatError(
            "graft produced an invalid surface: " + "; ".join(report.names())
        )
    widening = 2 * t * sum(
        (abs(seg.holonomy[1]) for seg in path.segments), Fraction(0)
    )
    if new_surface.area() != s.area() + widening:
        raise FlatError("graft changed the area by the wrong amount")
    first = strips[0]
    # midpoint of the first seam, the cross-section shared by the pair of
    # inserted parallelograms; the widening witness line starts here
    witness_point = vscale(path.segments[0].holonomy, Fraction(1, 2))
    lineage = {
        orig: tuple(sorted(index[p] for p in lst))
        for orig, lst in cx.lineage.items()
    }
    return Graft(
        surface=new_surface,
        witness_poly=index[first.left_pid],
        witness_point=witness_point,
        strip_polys=tuple(
            (index[st.left_pid], index[st.right_pid]) for st in strips
        ),
        lineage=lineage,
        t=t,
    )


@dataclass(frozen=True)
class GraftFound:
    t: Fraction
    graft: Graft
    cert: CylinderCert


@dataclass(frozen=True)
class GraftInconclusive:
    t_bound: int
    detail: str


def find_graft_t(
    s: FlatSurface,
    path: SaddlePath,
    *,
    t_bound: int = 64,
    budget: int = DEFAULT_TRACE_BUDGET,
):
    """Search doubling strip widths for one whose waist line closes up.

    For each width t the path is grafted and the straight line from the
    center of the first inserted strip in direction hol(path) + (m t, 0)
    is traced (m the number of segments).  If it returns to its start
    without meeting a cone point, it is the core of a cylinder in the
    widened surface and a retraceable certificate is returned.
    """
    require_valid_surface(s)
    m = len(path.segments)
    if m == 0:
        raise ConfigError("empty saddle path")
    t = 1
    detail = ""
    while t <= t_bound:
        g = graft(s, path, t, budget=budget)
        w = vadd(path.holonomy(), (Fraction(m * t), Fraction(0)))
        got = _closure_trace(g.surface, g.witness_poly, g.witness_point, w, budget)
        if got[0] == "closed":
            lam = got[1][0]
            cert = CylinderCert(g.witness_poly, g.witness_point, w, vscale(w, lam))
            if not verify_cylinder_cert(g.surface, cert, budget=budget):
                raise FlatError("fresh cylinder certificate failed to verify")
            return GraftFound(g.t, g, cert)
        if got[0] == "cone":
            detail = f"width {t}: waist line ran into a cone point"
        else:
            detail = f"width {t}: waist line exceeded the crossing budget"
        t *= 2
    return GraftInconclusive(t_bound, detail)


# ---------------------------------------------------------------------------
# several grafts in sequence

@dataclass(frozen=True)
class MultigraftStep:
    t: Fraction
    cert: CylinderCert


@dataclass(frozen=True)
class MultigraftResult:
    surface: FlatSurface
    steps: Tuple[MultigraftStep, ...]
    ok: bool
    detail: str = ""


def _relocate_cert(g: Graft, cert: CylinderCert) -> CylinderCert:
    cands = g.lineage.get(cert.poly)
    if not cands:
        raise FlatError(f"no descendants for polygon {cert.poly}")
    from ._geom import point_in_polygon_strict

    for q in cands:
        if point_in_polygon_strict(g.surface.polygons[q], cert.point):
            return CylinderCert(q, cert.point, cert.direction, cert.holonomy)
    for q in cands:
        poly = g.surface.polygons[q]
        npoly = len(poly)
        if cert.point in poly or any(
            on_segment(cert.point, poly[k], poly[(k + 1) % npoly])
            for k in range(npoly)
        ):
            return CylinderCert(q, cert.point, cert.direction, cert.holonomy)
    raise FlatError("certificate point lost while relocating")


def _relocate_path(old: FlatSurface, g: Graft, path: SaddlePath) -> SaddlePath:
    segs = []
    for seg in path.segments:
        pt_old = old.polygons[seg.corner[0]][seg.corner[1]]
        found = None
        for q in g.lineage[seg.corner[0]]:
            poly = g.surface.polygons[q]
            for i, v in enumerate(poly):
                if v != pt_old:
                    continue
                d1, d2 = _corner_wedge(g.surface, (q, i))
                if in_ccw_span(d1, d2, seg.direction):
                    found = (q, i)
                    break
            if found:
                break
        if found is None:
            raise FlatError("cone corner lost while relocating a path")
        segs.append(SaddleSegment(found, seg.direction, seg.holonomy))
    return SaddlePath(tuple(segs))


def _check_paths_disjoint(s: FlatSurface, paths, budget: int) -> None:
    per_path = []
    for idx, path in enumerate(paths):
        if not local_geodesic_check(s, path, budget=budget):
            raise ConfigError(f"path {idx} is not locally geodesic")
        if not path_is_embedded(s, path, budget=budget):
            raise ConfigError(f"path {idx} is not embedded")
        traced = trace_path(s, path, budget=budget)
        chords = []
        events = set()
        for ts in traced:
            events.update(_segment_events(s, ts.pieces))
            for piece in ts.pieces:
                chords.append((piece.poly, piece.a, piece.b))
                if piece.mirror is not None:
                    chords.append(piece.mirror)
        per_path.append((chords, events))
    for i in range(len(per_path)):
        for j in range(i + 1, len(per_path)):
            ci, ei = per_path[i]
            cj, ej = per_path[j]
            if ei & ej:
                raise ConfigError(f"paths {i} and {j} share an interior point")
            for chart_a, a1, a2 in ci:
                for chart_b, b1, b2 in cj:
                    if chart_a != chart_b:
                        continue
                    if open_segments_intersect(a1, a2, b1, b2):
                        raise ConfigError(f"paths {i} and {j} cross")
                    for p in (a1, a2):
                        if p not in (b1, b2) and on_segment(p, b1, b2, closed=False):
                            raise ConfigError(f"paths {i} and {j} touch")
                    for p in (b1, b2):
                        if p not in (a1, a2) and on_segment(p, a1, a2, closed=False):
                            raise ConfigError(f"paths {i} and {j} touch")


def multigraft(
    s: FlatSurface,
    paths,
    *,
    t_bound: int = 64,
    budget: int = DEFAULT_TRACE_BUDGET,
) -> MultigraftResult:
    """Graft several pairwise disjoint saddle paths one after another.

    After each graft the remaining paths are carried into the widened
    surface (the cut never touches them, so only their polygon labels
    move).  Every cylinder certified so far must persist with the same
    holonomy: a later graft may break the particular witness line (the
    line can run through material the new strip displaces), so each old
    certificate is first retraced and, failing that, re-found among the
    cylinders of its direction on the new surface.  Only when no
    cylinder with the original holonomy survives does the sequence
    abort, since disjointness makes that unreachable.
    """
    require_valid_surface(s)
    paths = list(paths)
    if not paths:
        return MultigraftResult(s, (), True)
    _check_paths_disjoint(s, paths, budget)
    current = s
    steps: List[MultigraftStep] = []
    certs: List[CylinderCert] = []
    for i in range(len(paths)):
        got = find_graft_t(current, paths[i], t_bound=t_bound, budget=budget)
        if isinstance(got, GraftInconclusive):
            return MultigraftResult(
                current,
                tuple(steps),
                False,
                f"path {i}: no closing width up to {got.t_bound} ({got.detail})",
            )
        g = got.graft
        for j in range(len(certs)):
            moved = _relocate_cert(g, certs[j])
            if not verify_cylinder_cert(g.surface, moved, budget=budget):
                moved = _refind_cylinder(g.surface, certs[j], budget)
                if moved is None:
                    raise FlatError(
                        f"cylinder certified for path {j} vanished after "
                        f"grafting path {i}: no cylinder of holonomy "
                        f"{certs[j].holonomy} remains in that direction"
                    )
            certs[j] = moved
            steps[j] = MultigraftStep(steps[j].t, certs[j])
        for j in range(i + 1, len(paths)):
            paths[j] = _relocate_path(current, g, paths[j])
        current = g.surface
        certs.append(got.cert)
        steps.append(MultigraftStep(got.t, got.cert))
    return MultigraftResult(current, tuple(steps), True)


def _refind_cylinder(s: FlatSurface, cert: CylinderCert, budget: int):
    """A cylinder on s parallel to cert, from a fresh decomposition.

    A later graft can absorb the certified cylinder into a wider one of
    the same slope, so an exact holonomy match is preferred but any
    parallel cylinder keeps the slope claim alive.
    """
    dec = decompose_direction(s, cert.direction, budget=budget)
    if not isinstance(dec, Periodic):
        return None
    parallel = None
    for cyl in dec.cylinders:
        if cyl.holonomy in (cert.holonomy, vneg(cert.holonomy)):
            return cyl.cert
        if parallel is None and cross(cert.direction, cyl.holonomy) == 0:
            parallel = cyl.cert
    return parallel
