"""Combinatorial model of multicurve systems on closed oriented surfaces.

A configuration records a union of oriented simple closed curves as a
4-valent ribbon graph together with the complementary subsurfaces.  Curves
are partitioned into named families; curves within one family are pairwise
disjoint.  Every crossing is transverse and involves curves of two
different families.

Segment ``j`` of a curve runs from ``itinerary[j]`` to
``itinerary[(j + 1) % k]``.  A curve with an empty itinerary (disjoint
from everything) has a single closed segment with index 0.  Sides are
labelled ``L``/``R`` relative to the curve's reference orientation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence

LEFT = "L"
RIGHT = "R"

_SIDES = (LEFT, RIGHT)


class ConfigError(ValueError):
    """Structurally broken configuration data (bad ids, local gluing clash)."""


def _other_side(side: str) -> str:
    return RIGHT if side == LEFT else LEFT


@dataclass(frozen=True, order=True)
class SegmentSide:
    """One side of one segment of a curve: a boundary letter of a region."""

    curve: int
    segment: int
    side: str

    def opposite(self) -> "SegmentSide":
        return SegmentSide(self.curve, self.segment, _other_side(self.side))

    def to_doc(self) -> dict:
        return {"curve": self.curve, "segment": self.segment, "side": self.side}

    @staticmethod
    def from_doc(doc: Mapping) -> "SegmentSide":
        return SegmentSide(int(doc["curve"]), int(doc["segment"]), str(doc["side"]))


@dataclass(frozen=True)
class Curve:
    id: int
    family: str
    itinerary: tuple[int, ...]

    @property
    def is_singleton_shaped(self) -> bool:
        # no crossings at all; one closed segment per side
        return not self.itinerary

    @property
    def segment_count(self) -> int:
        return max(1, len(self.itinerary))


@dataclass(frozen=True)
class Crossing:
    """Transverse intersection point.  sign +1 means curve_b crosses
    curve_a from right to left (relative to reference orientations);
    (a, b, s) describes the same local picture as (b, a, -s)."""

    id: int
    curve_a: int
    curve_b: int
    sign: int

    def other(self, curve_id: int) -> int:
        if curve_id == self.curve_a:
            return self.curve_b
        if curve_id == self.curve_b:
            return self.curve_a
        raise ConfigError(f"crossing {self.id} does not involve curve {curve_id}")

    def involves(self, curve_id: int) -> bool:
        return curve_id in (self.curve_a, self.curve_b)


@dataclass(frozen=True)
class Region:
    """Complementary subsurface: genus plus boundary cycles of segment-sides."""

    id: int
    genus: int
    cycles: tuple[tuple[SegmentSide, ...], ...]

    @property
    def euler_characteristic(self) -> int:
        return 2 - 2 * self.genus - len(self.cycles)

    @property
    def is_disk(self) -> bool:
        return self.genus == 0 and len(self.cycles) == 1


@dataclass(frozen=True)
class CurveConfiguration:
    genus: int
    curves: tuple[Curve, ...]
    crossings: tuple[Crossing, ...]
    regions: tuple[Region, ...]

    # -- lookups -------------------------------------------------------

    @cached_property
    def curve_by_id(self) -> dict[int, Curve]:
        return {c.id: c for c in self.curves}

    @cached_property
    def crossing_by_id(self) -> dict[int, Crossing]:
        return {x.id: x for x in self.crossings}

    @cached_property
    def region_by_id(self) -> dict[int, Region]:
        return {r.id: r for r in self.regions}

    @cached_property
    def families(self) -> dict[str, tuple[Curve, ...]]:
        fams: dict[str, list[Curve]] = {}
        for c in self.curves:
            fams.setdefault(c.family, []).append(c)
        return {k: tuple(v) for k, v in fams.items()}

    def curves_of(self, family: str) -> tuple[Curve, ...]:
        # empty families are meaningful (a foliation with nothing
        # transverse), so an unknown label is just an empty tuple
        return self.families.get(family, ())

    def curve(self, curve_id: int) -> Curve:
        try:
            return self.curve_by_id[curve_id]
        except KeyError:
            raise ConfigError(f"unknown curve id {curve_id}") from None

    def crossing(self, crossing_id: int) -> Crossing:
        try:
            return self.crossing_by_id[crossing_id]
        except KeyError:
            raise ConfigError(f"unknown crossing id {crossing_id}") from None

    @cached_property
    def _position(self) -> dict[tuple[int, int], int]:
        # (curve id, crossing id) -> index in the curve's itinerary.
        # Well defined only when each crossing appears once per itinerary;
        # validate() checks that before anything relies on this map.
        pos: dict[tuple[int, int], int] = {}
        for c in self.curves:
            for j, xid in enumerate(c.itinerary):
                pos.setdefault((c.id, xid), j)
        return pos

    def position(self, curve_id: int, crossing_id: int) -> int:
        try:
            return self._position[(curve_id, crossing_id)]
        except KeyError:
            raise ConfigError(
                f"crossing {crossing_id} not on the itinerary of curve {curve_id}"
            ) from None

    @cached_property
    def side_to_region(self) -> dict[SegmentSide, int]:
        mapping: dict[SegmentSide, int] = {}
        for r in self.regions:
            for cycle in r.cycles:
                for letter in cycle:
                    mapping.setdefault(letter, r.id)
        return mapping

    def region_of_side(self, letter: SegmentSide) -> int:
        try:
            return self.side_to_region[letter]
        except KeyError:
            raise ConfigError(f"segment-side {letter} not covered by any region") from None

    def all_segment_sides(self) -> Iterator[SegmentSide]:
        for c in self.curves:
            for j in range(c.segment_count):
                for s in _SIDES:
                    yield SegmentSide(c.id, j, s)

    def family_of(self, curve_id: int) -> str:
        return self.curve(curve_id).family

    # -- convenience ---------------------------------------------------

    def crossings_between(self, c1: int, c2: int) -> tuple[Crossing, ...]:
        return tuple(
            x for x in self.crossings if x.involves(c1) and x.involves(c2)
        )

    def crossings_of_curve(self, curve_id: int) -> tuple[Crossing, ...]:
        return tuple(x for x in self.crossings if x.involves(curve_id))


# ---------------------------------------------------------------------------
# face tracing
# ---------------------------------------------------------------------------

# Walking a boundary circle of a regular neighborhood of the curve union,
# with the surface kept on the walker's left.  On a letter (c, j, L) the
# walk runs forward along c and reaches the crossing at the head of
# segment j; on (c, j, R) it runs backward and reaches the tail crossing.
# At the crossing the next letter depends only on the arriving curve's
# role (a/b) and side, per crossing sign.  Departures on side L use the
# out-segment of the new curve at the crossing, on side R the in-segment.

_NEXT = {
    1: {
        ("b", RIGHT): ("a", LEFT),
        ("a", LEFT): ("b", LEFT),
        ("b", LEFT): ("a", RIGHT),
        ("a", RIGHT): ("b", RIGHT),
    },
    -1: {
        ("b", LEFT): ("a", LEFT),
        ("a", LEFT): ("b", RIGHT),
        ("b", RIGHT): ("a", RIGHT),
        ("a", RIGHT): ("b", LEFT),
    },
}


def _trace_step(config: CurveConfiguration, letter: SegmentSide) -> SegmentSide:
    curve = config.curve(letter.curve)
    k = len(curve.itinerary)
    if k == 0:
        raise ConfigError(f"cannot walk along singleton curve {curve.id}")
    if letter.side == LEFT:
        xid = curve.itinerary[(letter.segment + 1) % k]
    else:
        xid = curve.itinerary[letter.segment]
    x = config.crossing(xid)
    role = "a" if x.curve_a == curve.id else "b"
    if role == "b" and x.curve_b != curve.id:
        raise ConfigError(f"crossing {x.id} inconsistent with curve {curve.id}")
    if x.sign not in _NEXT:
        raise ConfigError(f"crossing {x.id} has sign {x.sign}")
    new_role, new_side = _NEXT[x.sign][(role, letter.side)]
    new_curve_id = x.curve_a if new_role == "a" else x.curve_b
    new_curve = config.curve(new_curve_id)
    out = config.position(new_curve_id, x.id)
    if new_side == LEFT:
        seg = out
    else:
        seg = (out - 1) % len(new_curve.itinerary)
    return SegmentSide(new_curve_id, seg, new_side)


def _canonical_cycle(cycle: Sequence[SegmentSide]) -> tuple[SegmentSide, ...]:
    # rotate so the smallest letter comes first; cycles never repeat a letter
    best = min(range(len(cycle)), key=lambda i: cycle[i])
    return tuple(cycle[best:]) + tuple(cycle[:best])


def trace_boundary_circles(config: CurveConfiguration) -> list[tuple[SegmentSide, ...]]:
    """Boundary circles of a regular neighborhood of the curve union.

    Deterministic: circles are found from the lexicographically smallest
    unvisited letter and reported in canonical rotation.  Raises
    ConfigError on locally inconsistent crossing data.
    """
    circles: list[tuple[SegmentSide, ...]] = []
    seen: set[SegmentSide] = set()
    for start in sorted(config.all_segment_sides()):
        if start in seen:
            continue
        if config.curve(start.curve).is_singleton_shaped:
            # each side of a singleton is a closed boundary circle by itself
            seen.add(start)
            circles.append((start,))
            continue
        cycle = [start]
        seen.add(start)
        current = _trace_step(config, start)
        guard = 0
        limit = 4 * len(config.crossings) + 4
        while current != start:
            if current in seen:
                raise ConfigError(
                    f"face trace from {start} re-entered {current} without closing"
                )
            seen.add(current)
            cycle.append(current)
            current = _trace_step(config, current)
            guard += 1
            if guard > limit:
                raise ConfigError("face trace failed to close")
        circles.append(_canonical_cycle(cycle))
    return circles


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    name: str
    detail: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def names(self) -> list[str]:
        return [v.name for v in self.violations]

    def to_doc(self) -> dict:
        return {
            "ok": self.ok,
            "violations": [{"name": v.name, "detail": v.detail} for v in self.violations],
        }

    def __str__(self) -> str:
        if self.ok:
            return "OK"
        return "; ".join(f"{v.name}: {v.detail}" for v in self.violations)


def _structural_violations(config: CurveConfiguration) -> list[Violation]:
    out: list[Violation] = []
    seen_ids: set[int] = set()
    for c in config.curves:
        if c.id in seen_ids:
            out.append(Violation("duplicate-curve-id", f"curve id {c.id}"))
        seen_ids.add(c.id)
    seen_ids = set()
    for x in config.crossings:
        if x.id in seen_ids:
            out.append(Violation("duplicate-crossing-id", f"crossing id {x.id}"))
        seen_ids.add(x.id)
    seen_ids = set()
    for r in config.regions:
        if r.id in seen_ids:
            out.append(Violation("duplicate-region-id", f"region id {r.id}"))
        seen_ids.add(r.id)

    if config.genus < 0:
        out.append(Violation("bad-genus", f"surface genus {config.genus}"))
    for r in config.regions:
        if r.genus < 0:
            out.append(Violation("bad-genus", f"region {r.id} genus {r.genus}"))

    curve_ids = {c.id for c in config.curves}
    for x in config.crossings:
        if x.sign not in (1, -1):
            out.append(Violation("bad-sign", f"crossing {x.id} sign {x.sign}"))
        if x.curve_a not in curve_ids or x.curve_b not in curve_ids:
            out.append(
                Violation(
                    "crossing-endpoint-mismatch",
                    f"crossing {x.id} references missing curve",
                )
            )
            continue
        fam_a = config.curve_by_id[x.curve_a].family
        fam_b = config.curve_by_id[x.curve_b].family
        if fam_a == fam_b:
            out.append(
                Violation(
                    "crossing-family-clash",
                    f"crossing {x.id} joins two {fam_a!r} curves",
                )
            )

    # itineraries: each crossing exactly once on each of its two curves
    crossing_ids = {x.id for x in config.crossings}
    for c in config.curves:
        counts: dict[int, int] = {}
        for xid in c.itinerary:
            counts[xid] = counts.get(xid, 0) + 1
            if xid not in crossing_ids:
                out.append(
                    Violation(
                        "itinerary-unknown-crossing",
                        f"curve {c.id} lists crossing {xid}",
                    )
                )
            else:
                x = config.crossing_by_id[xid]
                if not x.involves(c.id):
                    out.append(
                        Violation(
                            "itinerary-foreign-crossing",
                            f"curve {c.id} lists crossing {xid} of ({x.curve_a}, {x.curve_b})",
                        )
                    )
        expected = [x.id for x in config.crossings if x.involves(c.id)]
        for xid in expected:
            if counts.get(xid, 0) != 1:
                out.append(
                    Violation(
                        "itinerary-multiplicity",
                        f"crossing {xid} appears {counts.get(xid, 0)} times on curve {c.id}",
                    )
                )
    return out


def _region_violations(config: CurveConfiguration) -> list[Violation]:
    out: list[Violation] = []
    expected = set(config.all_segment_sides())
    seen: dict[SegmentSide, int] = {}
    for r in config.regions:
        for cycle in r.cycles:
            if not cycle:
                out.append(Violation("empty-cycle", f"region {r.id}"))
                continue
            for letter in cycle:
                if letter not in expected:
                    out.append(
                        Violation(
                            "segment-side-range",
                            f"region {r.id} letter {letter} outside model",
                        )
                    )
                    continue
                if letter in seen:
                    out.append(
                        Violation(
                            "segment-side-cover",
                            f"{letter} appears in regions {seen[letter]} and {r.id}",
                        )
                    )
                seen[letter] = r.id
    missing = expected.difference(seen)
    for letter in sorted(missing):
        out.append(Violation("segment-side-cover", f"{letter} missing from all regions"))
    return out


def _shape_violations(config: CurveConfiguration) -> list[Violation]:
    out: list[Violation] = []
    for r in config.regions:
        if r.is_disk:
            word = r.cycles[0]
            if len(word) == 1:
                out.append(Violation("monogon", f"region {r.id}"))
            elif len(word) == 2 and word[0].curve != word[1].curve:
                out.append(Violation("bigon", f"region {r.id}"))
        if r.genus == 0 and len(r.cycles) == 2:
            a, b = r.cycles
            if len(a) == 1 and len(b) == 1 and a[0].curve != b[0].curve:
                out.append(
                    Violation(
                        "annulus-duplicate",
                        f"region {r.id} bounds parallel copies of curves "
                        f"{a[0].curve} and {b[0].curve}",
                    )
                )
    return out


def _connectivity_violations(config: CurveConfiguration) -> list[Violation]:
    if len(config.regions) <= 1:
        return []
    parent = {r.id: r.id for r in config.regions}

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i: int, j: int) -> None:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj

    for c in config.curves:
        for j in range(c.segment_count):
            left = config.side_to_region.get(SegmentSide(c.id, j, LEFT))
            right = config.side_to_region.get(SegmentSide(c.id, j, RIGHT))
            if left is not None and right is not None:
                union(left, right)
    roots = {find(r.id) for r in config.regions}
    if len(roots) > 1:
        return [Violation("disconnected", f"{len(roots)} surface components")]
    return []


def validate(config: CurveConfiguration) -> ValidationReport:
    """Check every model invariant; report violations by name."""
    violations = _structural_violations(config)
    if violations:
        return ValidationReport(tuple(violations))

    violations.extend(_region_violations(config))
    if violations:
        return ValidationReport(tuple(violations))

    try:
        traced = trace_boundary_circles(config)
    except ConfigError as exc:
        violations.append(Violation("trace-error", str(exc)))
        return ValidationReport(tuple(violations))

    declared = sorted(
        _canonical_cycle(cycle) for r in config.regions for cycle in r.cycles
    )
    if declared != sorted(traced):
        extra = [c for c in declared if c not in traced]
        missing = [c for c in traced if c not in declared]
        detail = []
        if extra:
            detail.append(f"declared but not traced: {extra[0]}")
        if missing:
            detail.append(f"traced but not declared: {missing[0]}")
        violations.append(Violation("face-trace-mismatch", "; ".join(detail) or "multiset"))

    chi_regions = sum(r.euler_characteristic for r in config.regions)
    if 2 - 2 * config.genus != -len(config.crossings) + chi_regions:
        violations.append(
            Violation(
                "euler-mismatch",
                f"2-2g = {2 - 2 * config.genus} but "
                f"-X + sum chi(W) = {-len(config.crossings) + chi_regions}",
            )
        )

    violations.extend(_shape_violations(config))
    violations.extend(_connectivity_violations(config))
    return ValidationReport(tuple(violations))


# ---------------------------------------------------------------------------
# intersection numbers
# ---------------------------------------------------------------------------

OrientationAssignment = Mapping[int, int]


def identity_orientation(config: CurveConfiguration) -> dict[int, int]:
    return {c.id: 1 for c in config.curves}


def _check_orientation(config: CurveConfiguration, orientation: OrientationAssignment) -> None:
    for c in config.curves:
        eps = orientation.get(c.id)
        if eps not in (1, -1):
            raise ConfigError(f"orientation assignment missing curve {c.id}")


def geometric_intersection(config: CurveConfiguration, family1: str, family2: str) -> int:
    ids1 = {c.id for c in config.curves_of(family1)}
    ids2 = {c.id for c in config.curves_of(family2)}
    return sum(
        1
        for x in config.crossings
        if (x.curve_a in ids1 and x.curve_b in ids2)
        or (x.curve_a in ids2 and x.curve_b in ids1)
    )


def curve_geometric_intersection(config: CurveConfiguration, c1: int, c2: int) -> int:
    config.curve(c1), config.curve(c2)
    return len(config.crossings_between(c1, c2))


def algebraic_intersection(
    config: CurveConfiguration,
    orientation: OrientationAssignment,
    family1: str,
    family2: str,
) -> int:
    """Sum of crossing signs between the families, read with family1 in the
    reference role: a crossing stored as (b, a, s) with a in family1 counts
    as -s there."""
    _check_orientation(config, orientation)
    ids1 = {c.id for c in config.curves_of(family1)}
    ids2 = {c.id for c in config.curves_of(family2)}
    total = 0
    for x in config.crossings:
        if x.curve_a in ids1 and x.curve_b in ids2:
            total += x.sign * orientation[x.curve_a] * orientation[x.curve_b]
        elif x.curve_a in ids2 and x.curve_b in ids1:
            total -= x.sign * orientation[x.curve_a] * orientation[x.curve_b]
    return total


def curve_algebraic_intersection(
    config: CurveConfiguration,
    orientation: OrientationAssignment,
    c1: int,
    c2: int,
) -> int:
    _check_orientation(config, orientation)
    total = 0
    for x in config.crossings_between(c1, c2):
        s = x.sign * orientation[x.curve_a] * orientation[x.curve_b]
        total += s if x.curve_a == c1 else -s
    return total


# ---------------------------------------------------------------------------
# complements and separation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ComplementComponent:
    """Connected component of the surface cut along a sub-multicurve."""

    regions: tuple[int, ...]
    boundary_sides: tuple[tuple[int, str], ...]  # (gamma curve id, side)

    def has_side(self, curve_id: int, side: str) -> bool:
        return (curve_id, side) in self.boundary_sides


def complement_components(
    config: CurveConfiguration, gamma: Iterable[int]
) -> list[ComplementComponent]:
    """Components of the surface cut along the pairwise disjoint curves gamma.

    Regions are merged across every segment of every curve not in gamma.
    Each side of each gamma curve meets exactly one component.
    """
    gamma_set = set(gamma)
    for cid in gamma_set:
        config.curve(cid)
    for x in config.crossings:
        if x.curve_a in gamma_set and x.curve_b in gamma_set:
            raise ConfigError(
                f"gamma is not a multicurve: crossing {x.id} joins "
                f"{x.curve_a} and {x.curve_b}"
            )

    parent = {r.id: r.id for r in config.regions}

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for c in config.curves:
        if c.id in gamma_set:
            continue
        for j in range(c.segment_count):
            a = find(config.region_of_side(SegmentSide(c.id, j, LEFT)))
            b = find(config.region_of_side(SegmentSide(c.id, j, RIGHT)))
            if a != b:
                parent[a] = b

    groups: dict[int, list[int]] = {}
    for r in config.regions:
        groups.setdefault(find(r.id), []).append(r.id)

    boundary: dict[int, set[tuple[int, str]]] = {root: set() for root in groups}
    for cid in gamma_set:
        c = config.curve(cid)
        for side in _SIDES:
            roots = {
                find(config.region_of_side(SegmentSide(cid, j, side)))
                for j in range(c.segment_count)
            }
            if len(roots) != 1:
                raise ConfigError(
                    f"side {side} of curve {cid} meets several components"
                )
            boundary[roots.pop()].add((cid, side))

    components = []
    for root in sorted(groups, key=lambda r: min(groups[r])):
        components.append(
            ComplementComponent(
                regions=tuple(sorted(groups[root])),
                boundary_sides=tuple(sorted(boundary[root])),
            )
        )
    return components


def separates(
    config: CurveConfiguration, curve_id: int, other: str | Iterable[int]
) -> bool:
    """Whether the curve separates the surface cut along the given family
    (or explicit curve set).  A curve crossing that set never separates."""
    if isinstance(other, str):
        other_ids = {c.id for c in config.curves_of(other)}
    else:
        other_ids = set(other)
    if curve_id in other_ids:
        raise ConfigError(f"curve {curve_id} is a member of the cut family")
    for x in config.crossings_of_curve(curve_id):
        if x.other(curve_id) in other_ids:
            return False
    components = complement_components(config, other_ids | {curve_id})
    left = right = None
    for i, comp in enumerate(components):
        if comp.has_side(curve_id, LEFT):
            left = i
        if comp.has_side(curve_id, RIGHT):
            right = i
    if left is None or right is None:
        raise ConfigError(f"sides of curve {curve_id} missing from complement")
    return left != right


# ---------------------------------------------------------------------------
# orientation flips
# ---------------------------------------------------------------------------


def flip_curves(config: CurveConfiguration, flips: Iterable[int]) -> CurveConfiguration:
    """Reverse the reference orientation of the given curves.

    The reversed itinerary keeps its first entry first, so old segment j
    becomes segment (k - 1 - j) mod k and sides swap on exactly the
    flipped curves.  Crossings with one flipped endpoint change sign.
    """
    flip_set = set(flips)
    for cid in flip_set:
        config.curve(cid)

    def new_letter(letter: SegmentSide) -> SegmentSide:
        if letter.curve not in flip_set:
            return letter
        k = len(config.curve(letter.curve).itinerary)
        seg = (k - 1 - letter.segment) % k if k else 0
        return SegmentSide(letter.curve, seg, _other_side(letter.side))

    curves = tuple(
        Curve(
            c.id,
            c.family,
            (c.itinerary[:1] + c.itinerary[:0:-1]) if c.id in flip_set else c.itinerary,
        )
        for c in config.curves
    )
    crossings = tuple(
        Crossing(
            x.id,
            x.curve_a,
            x.curve_b,
            -x.sign if (x.curve_a in flip_set) != (x.curve_b in flip_set) else x.sign,
        )
        for x in config.crossings
    )
    regions = tuple(
        Region(
            r.id,
            r.genus,
            tuple(tuple(new_letter(s) for s in cycle) for cycle in r.cycles),
        )
        for r in config.regions
    )
    return CurveConfiguration(config.genus, curves, crossings, regions)


def apply_orientation(
    config: CurveConfiguration, orientation: OrientationAssignment
) -> CurveConfiguration:
    """Materialize an orientation assignment as reference orientations."""
    _check_orientation(config, orientation)
    return flip_curves(config, [cid for cid, eps in orientation.items() if eps == -1])


def from_itineraries_all_disks(
    curves: Iterable[Curve], crossings: Iterable[Crossing]
) -> CurveConfiguration:
    """Assemble a configuration whose complementary regions are all disks.

    Faces are read off the ribbon structure; the ambient genus follows from
    the Euler count.  Raises ConfigError if the trace does not close into
    an orientable surface of non-negative integer genus.
    """
    curves = tuple(curves)
    crossings = tuple(crossings)
    probe = CurveConfiguration(0, curves, crossings, ())
    circles = trace_boundary_circles(probe)
    chi = -len(crossings) + len(circles)
    if chi % 2 != 0 or chi > 2:
        raise ConfigError(f"trace gives Euler characteristic {chi}")
    genus = (2 - chi) // 2
    regions = tuple(
        Region(i, 0, (cycle,)) for i, cycle in enumerate(sorted(circles))
    )
    return CurveConfiguration(genus, curves, crossings, regions)


# ---------------------------------------------------------------------------
# document round trip
# ---------------------------------------------------------------------------


def config_to_doc(config: CurveConfiguration) -> dict:
    return {
        "genus": config.genus,
        "curves": [
            {"id": c.id, "family": c.family, "itinerary": list(c.itinerary)}
            for c in config.curves
        ],
        "crossings": [
            {"id": x.id, "a": x.curve_a, "b": x.curve_b, "sign": x.sign}
            for x in config.crossings
        ],
        "regions": [
            {
                "id": r.id,
                "genus": r.genus,
                "cycles": [[s.to_doc() for s in cycle] for cycle in r.cycles],
            }
            for r in config.regions
        ],
    }


def config_from_doc(doc: Mapping) -> CurveConfiguration:
    try:
        curves = tuple(
            Curve(int(c["id"]), str(c["family"]), tuple(int(x) for x in c["itinerary"]))
            for c in doc["curves"]
        )
        crossings = tuple(
            Crossing(int(x["id"]), int(x["a"]), int(x["b"]), int(x["sign"]))
            for x in doc["crossings"]
        )
        regions = tuple(
            Region(
                int(r["id"]),
                int(r["genus"]),
                tuple(
                    tuple(SegmentSide.from_doc(s) for s in cycle)
                    for cycle in r["cycles"]
                ),
            )
            for r in doc["regions"]
        )
        return CurveConfiguration(int(doc["genus"]), curves, crossings, regions)
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"malformed configuration document: {exc}") from exc


def dumps_config(config: CurveConfiguration) -> str:
    return json.dumps(config_to_doc(config), indent=2, sort_keys=True) + "\n"


def loads_config(text: str) -> CurveConfiguration:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc}") from exc
    return config_from_doc(doc)
