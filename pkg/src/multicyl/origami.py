"""Square-tiled surfaces built from a coherent filling pair of families.

Thickening the first family into horizontal cylinders of height one and
the second into vertical cylinders tiles the surface with unit squares,
one per crossing.  The square complex is recorded as two permutations of
the crossing ids: ``h`` moves one square right (the next crossing along
the first-family curve, following its orientation), ``v`` moves one
square up (along the second-family curve).  When the pair admits no
coherent orientation the flat structure only exists with unoriented
vertical data, which is flagged rather than modeled.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Mapping, Optional

from .coherence import Infeasible, coherently_orientable, pair_coherent
from .curves import ConfigError, CurveConfiguration, validate

HORIZONTAL = "horizontal"
VERTICAL = "vertical"


@dataclass(frozen=True)
class HalfTranslationFlag:
    """The construction would need a quadratic differential.

    ``infeasible`` carries the odd set of crossings when no orientation
    of the given configuration is coherent at all (as opposed to an
    unlucky choice of orientation).
    """

    infeasible: Optional[Infeasible] = None


@dataclass(frozen=True)
class Origami:
    """Unit squares indexed by crossing id with right and up neighbors.

    ``h_curve`` and ``v_curve`` name the horizontal and vertical curve
    through each square, tying every cylinder back to an input curve.
    """

    squares: tuple[int, ...]
    h: Mapping[int, int]
    v: Mapping[int, int]
    h_curve: Mapping[int, int] = field(default_factory=dict)
    v_curve: Mapping[int, int] = field(default_factory=dict)

    def h_cycles(self) -> tuple[tuple[int, ...], ...]:
        return _cycles(self.squares, self.h)

    def v_cycles(self) -> tuple[tuple[int, ...], ...]:
        return _cycles(self.squares, self.v)

    def is_transitive(self) -> bool:
        if not self.squares:
            return True
        seen = {self.squares[0]}
        queue = [self.squares[0]]
        while queue:
            s = queue.pop()
            for t in (self.h[s], self.v[s]):
                if t not in seen:
                    seen.add(t)
                    queue.append(t)
        return len(seen) == len(self.squares)


def _cycles(squares: tuple[int, ...], perm: Mapping[int, int]) -> tuple[tuple[int, ...], ...]:
    cycles = []
    seen = set()
    for start in squares:
        if start in seen:
            continue
        cyc = [start]
        seen.add(start)
        s = perm[start]
        while s != start:
            cyc.append(s)
            seen.add(s)
            s = perm[s]
        cycles.append(tuple(cyc))
    return tuple(cycles)


def check_origami(origami: Origami) -> None:
    """Reject malformed square complexes with a reasoned error."""
    squares = origami.squares
    if len(set(squares)) != len(squares) or tuple(sorted(squares)) != squares:
        raise ConfigError("squares must be strictly increasing ids")
    if not squares:
        raise ConfigError("an origami needs at least one square")
    sq = set(squares)
    for name, perm in (("h", origami.h), ("v", origami.v)):
        if set(perm) != sq or set(perm.values()) != sq:
            raise ConfigError(f"{name} is not a permutation of the squares")
    for name, prov, perm in (
        ("h_curve", origami.h_curve, origami.h),
        ("v_curve", origami.v_curve, origami.v),
    ):
        if not prov:
            continue
        if set(prov) != sq:
            raise ConfigError(f"{name} must label every square or none")
        for cyc in _cycles(squares, perm):
            if len({prov[s] for s in cyc}) != 1:
                raise ConfigError(f"{name} is not constant along a cycle")
    if not origami.is_transitive():
        raise ConfigError("squares do not form one connected surface")


def thurston_veech(
    config: CurveConfiguration, orientation: Mapping[int, int]
) -> Origami | HalfTranslationFlag:
    """Square-tiled surface of a filling pair, or the half-translation flag.

    Requires a valid filling configuration with exactly two families.
    The squares are the crossings; neighbors follow the given reference
    orientations, with the uniform crossing sign absorbed by running the
    second family backwards when negative.
    """
    report = validate(config)
    if not report.ok:
        raise ConfigError(f"invalid configuration: {report}")
    fams = sorted(config.families)
    if len(fams) != 2:
        raise ConfigError(f"expected exactly two families, found {fams}")
    family_a, family_b = fams
    if not all(r.is_disk for r in config.regions):
        raise ConfigError("configuration is not filling")
    for c in config.curves:
        if orientation.get(c.id) not in (1, -1):
            raise ConfigError(f"orientation assignment missing curve {c.id}")
    if not pair_coherent(config, orientation, family_a, family_b):
        solved = coherently_orientable(config, [family_a, family_b])
        return HalfTranslationFlag(
            infeasible=solved if isinstance(solved, Infeasible) else None
        )

    b_ids = {c.id for c in config.curves_of(family_b)}
    # the pair sign is uniform by coherence, so one crossing fixes it
    sigma = 1
    if config.crossings:
        x = config.crossings[0]
        sigma = x.sign * orientation[x.curve_a] * orientation[x.curve_b]
        if x.curve_a in b_ids:
            sigma = -sigma
    reversed_ids = {
        c.id
        for c in config.curves
        if (orientation[c.id] == -1) != (c.id in b_ids and sigma == -1)
    }

    def successor(curve_id: int, crossing_id: int) -> int:
        itin = config.curve(curve_id).itinerary
        pos = config.position(curve_id, crossing_id)
        step = -1 if curve_id in reversed_ids else 1
        return itin[(pos + step) % len(itin)]

    squares = tuple(sorted(x.id for x in config.crossings))
    h, v, h_curve, v_curve = {}, {}, {}, {}
    for x in config.crossings:
        a_curve, b_curve = x.curve_a, x.curve_b
        if a_curve in b_ids:
            a_curve, b_curve = b_curve, a_curve
        h[x.id] = successor(a_curve, x.id)
        v[x.id] = successor(b_curve, x.id)
        h_curve[x.id] = a_curve
        v_curve[x.id] = b_curve
    origami = Origami(squares, h, v, h_curve, v_curve)
    check_origami(origami)
    return origami


# ---------------------------------------------------------------------------
# stratum data by corner tracing
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StratumSignature:
    """Multiset of cone point orders, largest first; empty on the torus."""

    orders: tuple[int, ...]

    def total(self) -> int:
        return sum(self.orders)


_SW, _SE, _NE, _NW = 0, 1, 2, 3


def _vertex_orbits(origami: Origami) -> list[list[tuple[int, int]]]:
    # counterclockwise around a vertex, each step crosses one edge and
    # turns a quarter: SW of s -> SE of the left neighbor -> NE of the
    # square below that -> NW of its right neighbor -> SW above it
    h_inv = {t: s for s, t in origami.h.items()}
    v_inv = {t: s for s, t in origami.v.items()}

    def step(corner: tuple[int, int]) -> tuple[int, int]:
        s, c = corner
        if c == _SW:
            return (h_inv[s], _SE)
        if c == _SE:
            return (v_inv[s], _NE)
        if c == _NE:
            return (origami.h[s], _NW)
        return (origami.v[s], _SW)

    orbits = []
    seen = set()
    for s in origami.squares:
        for c in (_SW, _SE, _NE, _NW):
            if (s, c) in seen:
                continue
            orbit = [(s, c)]
            seen.add((s, c))
            cur = step((s, c))
            while cur != (s, c):
                orbit.append(cur)
                seen.add(cur)
                cur = step(cur)
            orbits.append(orbit)
    return orbits


def stratum(origami: Origami) -> tuple[StratumSignature, int]:
    """Cone point orders and genus of the square complex.

    A vertex whose corner orbit has length 4l carries total angle 2*pi*l,
    hence order l - 1; regular vertices are dropped.  Genus comes from
    the Euler count with one face and two edge classes per square.
    """
    check_origami(origami)
    orders = []
    vertex_count = 0
    for orbit in _vertex_orbits(origami):
        if len(orbit) % 4:
            raise ConfigError("corner orbit length not a multiple of four")
        vertex_count += 1
        l = len(orbit) // 4
        if l > 1:
            orders.append(l - 1)
    n = len(origami.squares)
    chi = vertex_count - 2 * n + n
    if chi % 2:
        raise ConfigError("odd Euler characteristic from corner tracing")
    genus = (2 - chi) // 2
    signature = StratumSignature(tuple(sorted(orders, reverse=True)))
    if signature.total() != 2 * genus - 2:
        raise ConfigError("cone angles disagree with the Euler count")
    return signature, genus


# ---------------------------------------------------------------------------
# cylinders
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Cylinder:
    core: int
    circumference: int
    height: int = 1


def cylinder_decomposition(origami: Origami, direction: str) -> list[Cylinder]:
    """Horizontal or vertical cylinders, one per core curve, height one."""
    check_origami(origami)
    if direction == HORIZONTAL:
        cycles, prov = origami.h_cycles(), origami.h_curve
    elif direction == VERTICAL:
        cycles, prov = origami.v_cycles(), origami.v_curve
    else:
        raise ConfigError(f"unknown direction {direction!r}")
    if not prov:
        raise ConfigError("origami lacks curve provenance")
    out = [Cylinder(prov[cyc[0]], len(cyc)) for cyc in cycles]
    out.sort(key=lambda c: c.core)
    return out


def to_flat_surface(origami: Origami):
    """The same surface as explicit unit squares with glued edges."""
    from fractions import Fraction

    from .flatsurf import FlatSurface

    check_origami(origami)
    index = {s: i for i, s in enumerate(origami.squares)}
    zero, one = Fraction(0), Fraction(1)
    square = ((zero, zero), (one, zero), (one, one), (zero, one))
    polygons = tuple(square for _ in origami.squares)
    gluings = {}
    for s in origami.squares:
        i = index[s]
        gluings[(i, 1)] = (index[origami.h[s]], 3)
        gluings[(index[origami.h[s]], 3)] = (i, 1)
        gluings[(i, 2)] = (index[origami.v[s]], 0)
        gluings[(index[origami.v[s]], 0)] = (i, 2)
    return FlatSurface(polygons, gluings)


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def origami_to_doc(origami: Origami) -> dict:
    doc = {
        "squares": list(origami.squares),
        "h": [origami.h[s] for s in origami.squares],
        "v": [origami.v[s] for s in origami.squares],
    }
    if origami.h_curve:
        doc["h_curve"] = [origami.h_curve[s] for s in origami.squares]
        doc["v_curve"] = [origami.v_curve[s] for s in origami.squares]
    return doc


def origami_from_doc(doc: Mapping) -> Origami:
    try:
        squares = tuple(int(s) for s in doc["squares"])
        h = {s: int(t) for s, t in zip(squares, doc["h"], strict=True)}
        v = {s: int(t) for s, t in zip(squares, doc["v"], strict=True)}
        h_curve = {}
        v_curve = {}
        if "h_curve" in doc:
            h_curve = {s: int(c) for s, c in zip(squares, doc["h_curve"], strict=True)}
            v_curve = {s: int(c) for s, c in zip(squares, doc["v_curve"], strict=True)}
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"malformed origami document: {exc}") from exc
    origami = Origami(squares, h, v, h_curve, v_curve)
    check_origami(origami)
    return origami


def dumps_origami(origami: Origami) -> str:
    return json.dumps(origami_to_doc(origami), indent=2, sort_keys=True) + "\n"


def loads_origami(text: str) -> Origami:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc}") from exc
    return origami_from_doc(doc)
