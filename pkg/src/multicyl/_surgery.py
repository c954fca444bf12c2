"""Insertion engine: route one new closed curve through a configuration.

Everything here works in the positive frame: each crossing of the input
is stored as (first-family curve, second-family curve, +1) relative to
reference orientations, and the inserted curve crosses everything
positively too.  A route lists the old segments the new curve hops over,
in traversal order, together with the isotopy class of the arc it runs
between consecutive hops inside one complementary region:

* ``merge``        - the arc joins two different boundary cycles of the
                     region; the cycles fuse and the genus is unchanged;
* ``hug-forward``  - both endpoints on one cycle; the arc runs parallel
                     to the boundary path from entry to exit in cycle
                     order and splits that path off as a disk;
* ``hug-backward`` - same, parallel to the path walked against cycle
                     order;
* ``wrap``         - both endpoints on one cycle, the arc runs around a
                     handle: genus drops by one and the cycle splits in
                     two without shedding a disk;
* ``auto``         - classified as merge or hug-forward from the anchors.

Boundary words are counterclockwise, so the sides of the new curve land
in the spliced words absolutely: the disk cut off by a forward hug shows
the new curve's right side, the disk of a backward hug its left, and a
merge leaves the left side on the entry half of the fused word.

The complement of the enlarged system is rebuilt from the face trace.
Grouping the traced circles into regions and the genus bookkeeping
follow the arc calculus above, and every consequence is cross-checked:
each disk split off by a hug is identified by a side of the new curve,
circle counts and Euler characteristics must agree region by region, and
the final configuration must pass full validation.
"""

from __future__ import annotations

from dataclasses import dataclass

from .curves import (
    LEFT,
    RIGHT,
    Crossing,
    Curve,
    CurveConfiguration,
    Region,
    SegmentSide,
    _other_side,
    trace_boundary_circles,
    validate,
)

ARC_MERGE = "merge"
ARC_HUG_FORWARD = "hug-forward"
ARC_HUG_BACKWARD = "hug-backward"
ARC_WRAP = "wrap"
ARC_AUTO = "auto"

_ARC_KINDS = (ARC_MERGE, ARC_HUG_FORWARD, ARC_HUG_BACKWARD, ARC_WRAP, ARC_AUTO)


class SurgeryError(RuntimeError):
    """Internal surgery failure: the engine refused to declare a result it
    could not certify.  Indicates a routing bug or a violated claim, never
    bad user input."""


@dataclass(frozen=True)
class Hop:
    """One transverse crossing of the new curve over an old segment."""

    curve: int
    segment: int


@dataclass(frozen=True)
class Route:
    """Cyclic insertion route.  ``arcs[i]`` is the arc run after
    ``hops[i]``, inside the region the new curve lands in there.

    ``enter_side`` is the side of the hopped curves the new curve lands
    on: ``L`` when it crosses them right to left (it then plays the
    vertical role at every new crossing), ``R`` for the mirror case.
    """

    hops: tuple[Hop, ...]
    arcs: tuple[str, ...]
    enter_side: str


# ---------------------------------------------------------------------------
# abstract boundary bookkeeping
# ---------------------------------------------------------------------------

# Tokens of the per-region boundary words while arcs are applied:
#   ("old", letter)      an intact boundary letter of the input region
#   ("frag", letter, k)  a piece of a letter consumed as an arc anchor
#   ("new", i, side)     one side of the new curve along arc i
# Anchors retire to fragments when their arc is applied, which also
# enforces that no later arc re-anchors on a segment already hopped.


class _Book:
    __slots__ = ("genus", "cycles", "disks", "arcs")

    def __init__(self, region: Region):
        self.genus = region.genus
        self.cycles: list[list[tuple]] = [
            [("old", s) for s in cycle] for cycle in region.cycles
        ]
        self.disks: list[tuple] = []  # witness token per disk split off
        self.arcs = 0

    def _find(self, letter: SegmentSide) -> tuple[int, int]:
        token = ("old", letter)
        for i, cyc in enumerate(self.cycles):
            for j, tok in enumerate(cyc):
                if tok == token:
                    return i, j
        raise SurgeryError(
            f"route self-conflict: anchor {letter} is no longer on the "
            f"main boundary of its region"
        )

    def apply(self, arc_idx: int, kind: str, entry: SegmentSide,
              exit_: SegmentSide) -> None:
        ci, pi = self._find(entry)
        cj, pj = self._find(exit_)
        same = ci == cj
        if kind == ARC_AUTO:
            kind = ARC_HUG_FORWARD if same else ARC_MERGE
        if (kind == ARC_MERGE) == same:
            raise SurgeryError(
                f"arc {arc_idx} declared {kind} but anchors lie on "
                f"{'one cycle' if same else 'different cycles'}"
            )

        def tok(side: str) -> tuple:
            return ("new", arc_idx, side)

        def frag(letter: SegmentSide, k: int) -> tuple:
            return ("frag", letter, k)

        if kind == ARC_MERGE:
            x, y = self.cycles[ci], self.cycles[cj]
            merged = (
                [frag(entry, 0)]
                + x[pi + 1:] + x[:pi]
                + [frag(entry, 1), tok(LEFT), frag(exit_, 1)]
                + y[pj + 1:] + y[:pj]
                + [frag(exit_, 0), tok(RIGHT)]
            )
            self.cycles[ci] = merged
            del self.cycles[cj]
        elif kind == ARC_HUG_FORWARD:
            x = self.cycles[ci]
            x2 = x[pi:] + x[:pi]
            q = (pj - pi) % len(x)
            self.cycles[ci] = [frag(entry, 0), tok(LEFT), frag(exit_, 0)] + x2[q + 1:]
            self.disks.append(tok(RIGHT))
        elif kind == ARC_HUG_BACKWARD:
            x = self.cycles[ci]
            x2 = x[pj:] + x[:pj]
            q = (pi - pj) % len(x)
            self.cycles[ci] = [frag(exit_, 0), tok(RIGHT), frag(entry, 0)] + x2[q + 1:]
            self.disks.append(tok(LEFT))
        elif kind == ARC_WRAP:
            if self.genus < 1:
                raise SurgeryError(f"arc {arc_idx}: wrap through a genus-0 region")
            x = self.cycles[ci]
            x2 = x[pi:] + x[:pi]
            q = (pj - pi) % len(x)
            cyc_a = [frag(entry, 0)] + x2[1:q] + [frag(exit_, 0), tok(RIGHT)]
            cyc_b = [frag(exit_, 1)] + x2[q + 1:] + [frag(entry, 1), tok(LEFT)]
            self.cycles[ci] = cyc_a
            self.cycles.append(cyc_b)
            self.genus -= 1
        else:
            raise SurgeryError(f"unknown arc kind {kind!r}")
        self.arcs += 1


# ---------------------------------------------------------------------------
# the insertion
# ---------------------------------------------------------------------------


def _check_route(config: CurveConfiguration, route: Route, new_family: str) -> None:
    if not route.hops:
        raise SurgeryError("empty route")
    if len(route.arcs) != len(route.hops):
        raise SurgeryError("route needs one arc per hop")
    if route.enter_side not in (LEFT, RIGHT):
        raise SurgeryError(f"bad enter side {route.enter_side!r}")
    for kind in route.arcs:
        if kind not in _ARC_KINDS:
            raise SurgeryError(f"unknown arc kind {kind!r}")
    seen: set[tuple[int, int]] = set()
    for hop in route.hops:
        c = config.curve(hop.curve)
        if c.family == new_family:
            raise SurgeryError(
                f"route hops over curve {c.id} of the new curve's own family"
            )
        if not 0 <= hop.segment < c.segment_count:
            raise SurgeryError(f"hop segment {hop.segment} out of range on curve {c.id}")
        key = (hop.curve, hop.segment)
        if key in seen:
            raise SurgeryError(f"segment {key} hopped twice")
        seen.add(key)


def insert_curve(
    config: CurveConfiguration,
    route: Route,
    *,
    new_curve_id: int,
    new_family: str,
    crossing_ids: tuple[int, ...],
) -> tuple[CurveConfiguration, dict]:
    """Insert one closed curve along ``route`` and rebuild the complement.

    Returns the enlarged configuration and a serializable record that
    makes the step replayable.  The input configuration must be in the
    positive frame (the routine asserts it for the crossings it touches).
    """
    _check_route(config, route, new_family)
    if new_curve_id in config.curve_by_id:
        raise SurgeryError(f"curve id {new_curve_id} already in use")
    if len(crossing_ids) != len(route.hops) or len(set(crossing_ids)) != len(crossing_ids):
        raise SurgeryError("need one fresh crossing id per hop")
    for xid in crossing_ids:
        if xid in config.crossing_by_id:
            raise SurgeryError(f"crossing id {xid} already in use")

    n = len(route.hops)
    enter = route.enter_side
    exit_side = _other_side(enter)

    # Anchors and host regions, all in old coordinates.
    entries = [SegmentSide(h.curve, h.segment, enter) for h in route.hops]
    exits = [SegmentSide(h.curve, h.segment, exit_side) for h in route.hops]
    books: dict[int, _Book] = {}
    arc_host: list[int] = []
    for i in range(n):
        rid = config.region_of_side(entries[i])
        rid_out = config.region_of_side(exits[(i + 1) % n])
        if rid != rid_out:
            raise SurgeryError(
                f"arc {i} would leave region {rid} for region {rid_out} "
                f"without a hop"
            )
        arc_host.append(rid)
        if rid not in books:
            books[rid] = _Book(config.region_by_id[rid])

    for i in range(n):
        books[arc_host[i]].apply(i, route.arcs[i], entries[i], exits[(i + 1) % n])

    # New crossings: the new curve always crosses positively; landing on
    # the left side means it plays the b role, on the right the a role.
    new_crossings = []
    for hop, xid in zip(route.hops, crossing_ids):
        if enter == LEFT:
            new_crossings.append(Crossing(xid, hop.curve, new_curve_id, 1))
        else:
            new_crossings.append(Crossing(xid, new_curve_id, hop.curve, 1))

    # Rewritten itineraries plus the segment renumbering they induce.
    hops_on: dict[int, dict[int, int]] = {}
    for hop, xid in zip(route.hops, crossing_ids):
        hops_on.setdefault(hop.curve, {})[hop.segment] = xid

    inv_seg: dict[int, dict[int, int]] = {}
    new_curves = []
    for c in config.curves:
        mine = hops_on.get(c.id)
        if not mine:
            new_curves.append(c)
            continue
        if not c.itinerary:
            # a curve with no crossings gains its first one; the single
            # closed segment keeps index 0 and is not split
            new_curves.append(Curve(c.id, c.family, (mine[0],)))
            inv_seg[c.id] = {0: 0}
            continue
        itin: list[int] = []
        inverse: dict[int, int] = {}
        for p, old_xid in enumerate(c.itinerary):
            inverse[len(itin)] = p
            itin.append(old_xid)
            if p in mine:
                inverse[len(itin)] = p
                itin.append(mine[p])
        new_curves.append(Curve(c.id, c.family, tuple(itin)))
        inv_seg[c.id] = inverse
    new_curves.append(Curve(new_curve_id, new_family, tuple(crossing_ids)))

    probe = CurveConfiguration(
        config.genus,
        tuple(new_curves),
        config.crossings + tuple(new_crossings),
        (),
    )
    circles = trace_boundary_circles(probe)

    # Map each traced circle back to the old region it is a piece of.
    def to_old(letter: SegmentSide) -> SegmentSide | None:
        if letter.curve == new_curve_id:
            return None
        mapping = inv_seg.get(letter.curve)
        seg = mapping[letter.segment] if mapping else letter.segment
        return SegmentSide(letter.curve, seg, letter.side)

    circle_region: list[int] = []
    letter_to_circle: dict[SegmentSide, int] = {}
    for idx, circle in enumerate(circles):
        hosts = set()
        for letter in circle:
            letter_to_circle[letter] = idx
            old = to_old(letter)
            if old is not None:
                hosts.add(config.region_of_side(old))
        if len(hosts) != 1:
            raise SurgeryError(
                f"traced circle {idx} maps to regions {sorted(hosts)}; "
                f"expected exactly one"
            )
        circle_region.append(hosts.pop())

    by_region: dict[int, list[int]] = {}
    for idx, rid in enumerate(circle_region):
        by_region.setdefault(rid, []).append(idx)

    regions: list[Region] = []
    next_id = max((r.id for r in config.regions), default=-1) + 1
    for r in sorted(config.regions, key=lambda r: r.id):
        mapped = by_region.get(r.id, [])
        book = books.get(r.id)
        if book is None:
            if len(mapped) != len(r.cycles):
                raise SurgeryError(
                    f"untouched region {r.id} traced {len(mapped)} circles, "
                    f"expected {len(r.cycles)}"
                )
            regions.append(
                Region(r.id, r.genus, tuple(sorted(circles[i] for i in mapped)))
            )
            continue
        disk_circles: list[int] = []
        for token in book.disks:
            _, arc_idx, side = token
            witness = SegmentSide(new_curve_id, arc_idx, side)
            at = letter_to_circle.get(witness)
            if at is None:
                raise SurgeryError(f"disk witness {witness} not on any traced circle")
            if circle_region[at] != r.id:
                raise SurgeryError(
                    f"disk witness {witness} traced into region "
                    f"{circle_region[at]}, expected {r.id}"
                )
            disk_circles.append(at)
        if len(set(disk_circles)) != len(disk_circles):
            raise SurgeryError(f"two disks of region {r.id} share a boundary circle")
        main = [i for i in mapped if i not in set(disk_circles)]
        if len(main) != len(book.cycles):
            raise SurgeryError(
                f"region {r.id}: traced {len(main)} main circles, "
                f"bookkeeping expected {len(book.cycles)}"
            )
        chi_pieces = (2 - 2 * book.genus - len(main)) + len(disk_circles)
        if chi_pieces != r.euler_characteristic + book.arcs:
            raise SurgeryError(
                f"region {r.id}: Euler characteristic of the pieces is "
                f"{chi_pieces}, expected {r.euler_characteristic + book.arcs}"
            )
        regions.append(
            Region(r.id, book.genus, tuple(sorted(circles[i] for i in main)))
        )
        for at in disk_circles:
            regions.append(Region(next_id, 0, (circles[at],)))
            next_id += 1

    result = CurveConfiguration(
        config.genus,
        probe.curves,
        probe.crossings,
        tuple(regions),
    )
    report = validate(result)
    if not report.ok:
        raise SurgeryError(
            f"insertion produced an invalid configuration: {report.names()}"
        )

    record = {
        "curve": new_curve_id,
        "family": new_family,
        "enter_side": enter,
        "hops": [[h.curve, h.segment] for h in route.hops],
        "arcs": list(route.arcs),
        "crossings": [[x.id, x.curve_a, x.curve_b, x.sign] for x in new_crossings],
        "passages": [
            {
                "region": arc_host[i],
                "entry": entries[i].to_doc(),
                "exit": exits[(i + 1) % n].to_doc(),
            }
            for i in range(n)
        ],
    }
    return result, record
