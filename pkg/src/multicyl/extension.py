"""Completing a coherent pair of multicurve families to a filling pair.

Two public surgeries and their composition:

* ``remove_singletons`` adds transverse curves until every curve of each
  family crosses the other family, or reports the side-balance witness
  that forbids it.  Each new curve follows a directed path through the
  components of the cut surface, crossing everything positively.
* ``extend_to_filling`` adds curves of the second family until every
  complementary region is a disk, one boundary-reduction or
  genus-reduction per step.
* ``extend_pair`` runs both after checking coherence, so a failure is
  reported as an :class:`Obstruction` before any surgery happens.

All surgery happens in the positive frame (reference orientations
flipped so every crossing reads +1 with the first family first); the
result is translated back, so the input configuration embeds verbatim
in the output and the returned orientation extends the given one.  The
returned :class:`SurgeryStep` list is a complete audit trail:
``replay_steps`` reproduces the output bit for bit.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Mapping, Optional

from ._surgery import (
    ARC_AUTO,
    ARC_HUG_BACKWARD,
    ARC_MERGE,
    ARC_WRAP,
    Hop,
    Route,
    SurgeryError,
    insert_curve,
)
from .coherence import (
    Infeasible,
    StarWitness,
    check_star,
    coherently_orientable,
    pair_coherent,
)
from .curves import (
    LEFT,
    RIGHT,
    ComplementComponent,
    ConfigError,
    Crossing,
    CurveConfiguration,
    OrientationAssignment,
    SegmentSide,
    _canonical_cycle,
    _other_side,
    complement_components,
    flip_curves,
    identity_orientation,
    validate,
)

KIND_DIRECTED_PATH = "add-curve-via-directed-path"
KIND_BOUNDARY_SUM = "boundary-connected-sum"
KIND_CONNECTED_SUM = "connected-sum"


def singleton_set(
    config: CurveConfiguration, family_a: str, family_b: str
) -> set[int]:
    """Ids of the first family's curves with no crossing against the second."""
    b_ids = {c.id for c in config.curves_of(family_b)}
    met = set()
    for x in config.crossings:
        if x.curve_a in b_ids:
            met.add(x.curve_b)
        if x.curve_b in b_ids:
            met.add(x.curve_a)
    return {c.id for c in config.curves_of(family_a) if c.id not in met}


def _pair_families(config: CurveConfiguration) -> tuple[str, str]:
    fams = sorted(config.families)
    if not fams:
        raise ConfigError("configuration has no curves")
    if len(fams) == 1:
        return fams[0], ""
    if len(fams) > 2:
        raise ConfigError(f"expected at most two families, found {fams}")
    return fams[0], fams[1]


# ---------------------------------------------------------------------------
# component digraph over the singletons of one family
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DigraphEdge:
    singleton: int
    tail: int
    head: int


@dataclass(frozen=True)
class ComponentDigraph:
    """Components of the surface cut along one family plus the other
    family's singletons, with one directed edge per singleton: tail on
    its left, head on its right (reversed where the orientation is -1).
    """

    components: tuple[ComplementComponent, ...]
    edges: tuple[DigraphEdge, ...]


def component_digraph(
    config: CurveConfiguration,
    singleton_family: str,
    wall_family: str,
    orientation: Optional[OrientationAssignment] = None,
) -> ComponentDigraph:
    sings = sorted(singleton_set(config, singleton_family, wall_family))
    walls = {c.id for c in config.curves_of(wall_family)}
    comps = complement_components(config, walls | set(sings))
    edges = []
    for cid in sings:
        eps = 1 if orientation is None else orientation.get(cid, 1)
        tail_side = LEFT if eps == 1 else RIGHT
        tail = head = -1
        for i, comp in enumerate(comps):
            if comp.has_side(cid, tail_side):
                tail = i
            if comp.has_side(cid, _other_side(tail_side)):
                head = i
        if tail < 0 or head < 0:
            raise ConfigError(f"sides of singleton {cid} missing from the cut surface")
        edges.append(DigraphEdge(cid, tail, head))
    return ComponentDigraph(tuple(comps), tuple(edges))


@dataclass(frozen=True)
class BridgeObstruction:
    """A singleton whose removal disconnects the cut surface, so no
    orientation choice makes it consistently crossable."""

    singleton: int


def robbins_orient(
    config: CurveConfiguration, family_a: str, family_b: str
) -> dict[int, int] | BridgeObstruction:
    """Orient the ``family_a`` singletons so each lies on a directed cycle.

    One-way assignment of the component multigraph: depth-first tree
    edges point away from the root and the remaining edges point back
    toward the root, which strongly orients every bridgeless part.  A
    bridge edge admits no such choice and is reported (lowest singleton
    first).  Deterministic: neighbors are scanned by (component index,
    singleton id) and roots by increasing component index.
    """
    dg = component_digraph(config, family_a, family_b)
    m = len(dg.components)
    adj: list[list[tuple[int, int]]] = [[] for _ in range(m)]
    for idx, e in enumerate(dg.edges):
        adj[e.tail].append((e.head, idx))
        if e.head != e.tail:
            adj[e.head].append((e.tail, idx))
    for lst in adj:
        lst.sort(key=lambda t: (t[0], dg.edges[t[1]].singleton))

    orientation: dict[int, int] = {}
    disc = [-1] * m
    low = [0] * m
    used = [False] * len(dg.edges)
    parent_edge = [-1] * m
    pointer = [0] * m
    bridges: list[int] = []
    timer = 0
    for root in range(m):
        if disc[root] != -1:
            continue
        disc[root] = low[root] = timer
        timer += 1
        stack = [root]
        while stack:
            u = stack[-1]
            if pointer[u] < len(adj[u]):
                v, eidx = adj[u][pointer[u]]
                pointer[u] += 1
                if used[eidx]:
                    continue
                used[eidx] = True
                e = dg.edges[eidx]
                # traversal direction u -> v; +1 means tail -> head
                orientation[e.singleton] = 1 if u == e.tail else -1
                if u == v:
                    continue
                if disc[v] == -1:
                    disc[v] = low[v] = timer
                    timer += 1
                    parent_edge[v] = eidx
                    stack.append(v)
                else:
                    low[u] = min(low[u], disc[v])
            else:
                stack.pop()
                if stack:
                    p = stack[-1]
                    low[p] = min(low[p], low[u])
                    if low[u] > disc[p]:
                        bridges.append(dg.edges[parent_edge[u]].singleton)
    if bridges:
        return BridgeObstruction(min(bridges))
    return orientation


# ---------------------------------------------------------------------------
# obstructions and audited steps
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Obstruction:
    """Why the extension cannot proceed, reported before any surgery.

    ``stage`` is "coherence" (no coherent orientation, ``infeasible``
    carries the odd crossing set when one exists) or "star" (``witness``
    names a sub-multicurve with unbalanced sides).
    """

    stage: str
    witness: Optional[StarWitness] = None
    infeasible: Optional[Infeasible] = None

    def to_doc(self) -> dict:
        doc: dict = {"stage": self.stage}
        if self.witness is not None:
            doc["witness"] = self.witness.to_doc()
        if self.infeasible is not None:
            doc["infeasible"] = {"crossings": list(self.infeasible.crossings)}
        return doc


@dataclass(frozen=True)
class SurgeryStep:
    """One audited curve insertion, in positive-frame coordinates.

    ``hops`` lists the old segments crossed, ``crossings`` the fresh
    crossings as (id, first curve, second curve, sign), and ``passages``
    the region traversals as (region id, entry letter, exit letter).
    """

    kind: str
    curve: int
    family: str
    enter_side: str
    hops: tuple[tuple[int, int], ...]
    arcs: tuple[str, ...]
    crossings: tuple[tuple[int, int, int, int], ...]
    passages: tuple[tuple[int, tuple[int, int, str], tuple[int, int, str]], ...]

    def to_doc(self) -> dict:
        return {
            "kind": self.kind,
            "curve": self.curve,
            "family": self.family,
            "enter_side": self.enter_side,
            "hops": [list(h) for h in self.hops],
            "arcs": list(self.arcs),
            "crossings": [list(x) for x in self.crossings],
            "passages": [
                {"region": r, "entry": list(entry), "exit": list(exit_)}
                for r, entry, exit_ in self.passages
            ],
        }

    @staticmethod
    def from_doc(doc: Mapping) -> "SurgeryStep":
        return SurgeryStep(
            str(doc["kind"]),
            int(doc["curve"]),
            str(doc["family"]),
            str(doc["enter_side"]),
            tuple((int(c), int(s)) for c, s in doc["hops"]),
            tuple(str(a) for a in doc["arcs"]),
            tuple(tuple(int(v) for v in x) for x in doc["crossings"]),
            tuple(
                (
                    int(p["region"]),
                    (int(p["entry"][0]), int(p["entry"][1]), str(p["entry"][2])),
                    (int(p["exit"][0]), int(p["exit"][1]), str(p["exit"][2])),
                )
                for p in doc["passages"]
            ),
        )


def _derive_kind(arcs: tuple[str, ...]) -> str:
    if ARC_WRAP in arcs:
        return KIND_CONNECTED_SUM
    if all(a == ARC_AUTO for a in arcs):
        return KIND_DIRECTED_PATH
    return KIND_BOUNDARY_SUM


def _letter_triple(doc: Mapping) -> tuple[int, int, str]:
    return (int(doc["curve"]), int(doc["segment"]), str(doc["side"]))


def _step_from_record(kind: str, record: Mapping) -> SurgeryStep:
    return SurgeryStep(
        kind,
        record["curve"],
        record["family"],
        record["enter_side"],
        tuple((c, s) for c, s in record["hops"]),
        tuple(record["arcs"]),
        tuple(tuple(x) for x in record["crossings"]),
        tuple(
            (p["region"], _letter_triple(p["entry"]), _letter_triple(p["exit"]))
            for p in record["passages"]
        ),
    )


# ---------------------------------------------------------------------------
# the positive frame
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _Frame:
    family_a: str
    family_b: str
    sigma: int
    flips: frozenset
    swapped: frozenset


def _normalize(
    config: CurveConfiguration,
    orientation: Mapping[int, int],
    family_a: str,
    family_b: str,
) -> tuple[CurveConfiguration, _Frame]:
    a_ids = {c.id for c in config.curves_of(family_a)}
    b_ids = {c.id for c in config.curves_of(family_b)}
    for c in config.curves:
        if orientation.get(c.id) not in (1, -1):
            raise ConfigError(f"orientation assignment missing curve {c.id}")
    sigma = 0
    for x in config.crossings:
        s = x.sign * orientation[x.curve_a] * orientation[x.curve_b]
        if x.curve_a in b_ids:
            s = -s
        if sigma == 0:
            sigma = s
        elif s != sigma:
            raise ConfigError("pair is not coherent under the given orientation")
    if sigma == 0:
        sigma = 1
    flips = frozenset(
        c.id
        for c in config.curves
        if (orientation[c.id] == -1) != (c.id in b_ids and sigma == -1)
    )
    flipped = flip_curves(config, flips)
    swapped = frozenset(x.id for x in flipped.crossings if x.curve_a in b_ids)
    crossings = tuple(
        Crossing(x.id, x.curve_b, x.curve_a, -x.sign) if x.id in swapped else x
        for x in flipped.crossings
    )
    norm = CurveConfiguration(flipped.genus, flipped.curves, crossings, flipped.regions)
    for x in norm.crossings:
        if x.sign != 1 or x.curve_a not in a_ids or x.curve_b not in b_ids:
            raise SurgeryError("normalization did not reach the positive frame")
    return norm, _Frame(family_a, family_b, sigma, flips, swapped)


def _denormalize(
    work: CurveConfiguration, frame: _Frame, orientation: Mapping[int, int]
) -> tuple[CurveConfiguration, dict[int, int]]:
    crossings = tuple(
        Crossing(x.id, x.curve_b, x.curve_a, -x.sign) if x.id in frame.swapped else x
        for x in work.crossings
    )
    mid = CurveConfiguration(work.genus, work.curves, crossings, work.regions)
    out = flip_curves(mid, frame.flips)
    out_orientation = dict(orientation)
    for c in out.curves:
        if c.id not in out_orientation:
            out_orientation[c.id] = frame.sigma if c.family == frame.family_b else 1
    return out, out_orientation


def _assert_embeds(old: CurveConfiguration, new: CurveConfiguration) -> None:
    if new.genus != old.genus:
        raise SurgeryError("ambient genus changed")
    for x in old.crossings:
        if new.crossing_by_id.get(x.id) != x:
            raise SurgeryError(f"crossing {x.id} not preserved verbatim")
    for c in old.curves:
        nc = new.curve_by_id.get(c.id)
        if nc is None or nc.family != c.family:
            raise SurgeryError(f"curve {c.id} not preserved")
        keep = set(c.itinerary)
        filtered = tuple(x for x in nc.itinerary if x in keep)
        k = len(c.itinerary)
        rotations = {c.itinerary[i:] + c.itinerary[:i] for i in range(k)} or {()}
        if filtered not in rotations:
            raise SurgeryError(f"cyclic order on curve {c.id} not preserved")


# ---------------------------------------------------------------------------
# routing: directed paths through the cut surface
# ---------------------------------------------------------------------------


def _digraph_path(
    dg: ComponentDigraph, start: int, target: int, skip_singleton: int
) -> Optional[list[DigraphEdge]]:
    """Shortest directed edge path, lowest singleton ids first."""
    if start == target:
        return []
    out: list[list[DigraphEdge]] = [[] for _ in dg.components]
    for e in dg.edges:
        if e.singleton != skip_singleton:
            out[e.tail].append(e)
    for lst in out:
        lst.sort(key=lambda e: e.singleton)
    prev: dict[int, DigraphEdge] = {}
    seen = {start}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for e in out[u]:
            if e.head in seen:
                continue
            seen.add(e.head)
            prev[e.head] = e
            if e.head == target:
                path = []
                v = target
                while v != start:
                    path.append(prev[v])
                    v = prev[v].tail
                path.reverse()
                return path
            queue.append(e.head)
    return None


def _region_path(
    config: CurveConfiguration,
    cut_ids: set,
    start: int,
    target: int,
    enter_side: str,
) -> Optional[list[Hop]]:
    """Hops from the region ``start`` to ``target`` crossing only non-cut
    segments, each passed from the take-off side to ``enter_side``."""
    if start == target:
        return []
    src_side = _other_side(enter_side)
    moves: dict[int, list[tuple[tuple[int, int], int]]] = {}
    for c in config.curves:
        if c.id in cut_ids:
            continue
        for s in range(c.segment_count):
            src = config.region_of_side(SegmentSide(c.id, s, src_side))
            dst = config.region_of_side(SegmentSide(c.id, s, enter_side))
            moves.setdefault(src, []).append(((c.id, s), dst))
    for lst in moves.values():
        lst.sort()
    prev: dict[int, tuple[int, tuple[int, int]]] = {}
    seen = {start}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for (cid, seg), dst in moves.get(u, ()):
            if dst in seen:
                continue
            seen.add(dst)
            prev[dst] = (u, (cid, seg))
            if dst == target:
                hops = []
                v = target
                while v != start:
                    v, move = prev[v]
                    hops.append(Hop(*move))
                hops.reverse()
                return hops
            queue.append(dst)
    return None


def _singleton_step(
    work: CurveConfiguration,
    sing_family: str,
    new_family: str,
    enter_side: str,
    new_curve_id: int,
    first_crossing_id: int,
) -> tuple[CurveConfiguration, SurgeryStep]:
    """Remove the lowest singleton of ``sing_family`` by one new curve."""
    sings = sorted(singleton_set(work, sing_family, new_family))
    c0 = sings[0]
    cut_ids = {c.id for c in work.curves_of(new_family)} | set(sings)
    dg = component_digraph(work, sing_family, new_family)
    e0 = next(e for e in dg.edges if e.singleton == c0)
    path = _digraph_path(dg, e0.head, e0.tail, c0)
    if path is None:
        raise SurgeryError(
            f"no directed return path around singleton {c0}: component "
            f"{e0.tail} is not reachable from component {e0.head}"
        )
    if enter_side == LEFT:
        # the new curve crosses each singleton right to left, i.e. head
        # to tail, so it runs the directed path backwards
        order = [c0] + [e.singleton for e in reversed(path)]
    else:
        order = [c0] + [e.singleton for e in path]
    hops: list[Hop] = []
    for i, cid in enumerate(order):
        hops.append(Hop(cid, 0))
        landed = work.region_of_side(SegmentSide(cid, 0, enter_side))
        nxt = order[(i + 1) % len(order)]
        target = work.region_of_side(SegmentSide(nxt, 0, _other_side(enter_side)))
        leg = _region_path(work, cut_ids, landed, target, enter_side)
        if leg is None:
            raise SurgeryError(
                f"no one-way route from region {landed} to region {target} "
                f"between singletons {cid} and {nxt}"
            )
        hops.extend(leg)
    route = Route(tuple(hops), (ARC_AUTO,) * len(hops), enter_side)
    xids = tuple(range(first_crossing_id, first_crossing_id + len(hops)))
    work, record = insert_curve(
        work,
        route,
        new_curve_id=new_curve_id,
        new_family=new_family,
        crossing_ids=xids,
    )
    return work, _step_from_record(KIND_DIRECTED_PATH, record)


# ---------------------------------------------------------------------------
# public surgeries
# ---------------------------------------------------------------------------


def _require_valid(config: CurveConfiguration) -> None:
    report = validate(config)
    if not report.ok:
        raise ConfigError(f"invalid configuration: {report}")


def remove_singletons(
    config: CurveConfiguration, orientation: OrientationAssignment
) -> tuple[CurveConfiguration, dict[int, int], tuple[SurgeryStep, ...]] | Obstruction:
    """Add curves until both families are free of singletons.

    Requires a coherent pair.  Returns the enlarged configuration, the
    extended orientation, and the audit steps, or an :class:`Obstruction`
    carrying the side-balance witness that makes removal impossible.
    """
    _require_valid(config)
    if not config.curves:
        return config, dict(orientation), ()
    family_a, family_b = _pair_families(config)
    orientation = dict(orientation)
    if not pair_coherent(config, orientation, family_a, family_b):
        raise ConfigError("input pair is not coherent under the given orientation")
    if len(config.curves) <= 16:
        # subset enumeration; larger configs rely on the surgery itself
        # aborting when a route is missing
        witness = check_star(config, orientation, family_a, family_b)
        if witness is not None:
            return Obstruction("star", witness=witness)
    if not singleton_set(config, family_a, family_b) and not singleton_set(
        config, family_b, family_a
    ):
        return config, dict(orientation), ()
    if not family_b:
        raise ConfigError(
            "all curves share one family, so there is no family name for "
            "the transverse curves a removal would add"
        )

    work, frame = _normalize(config, orientation, family_a, family_b)
    ident = identity_orientation(work)
    next_curve = max(c.id for c in work.curves) + 1
    next_crossing = max((x.id for x in work.crossings), default=-1) + 1
    steps: list[SurgeryStep] = []
    for sing_family, new_family, enter in (
        (family_a, family_b, LEFT),
        (family_b, family_a, RIGHT),
    ):
        while singleton_set(work, sing_family, new_family):
            work, step = _singleton_step(
                work, sing_family, new_family, enter, next_curve, next_crossing
            )
            ident[step.curve] = 1
            next_curve += 1
            next_crossing += len(step.crossings)
            steps.append(step)
            if not pair_coherent(work, ident, family_a, family_b):
                raise SurgeryError("coherence broken by a singleton step")

    out, out_orientation = _denormalize(work, frame, orientation)
    _assert_embeds(config, out)
    for fam, other in ((family_a, family_b), (family_b, family_a)):
        if singleton_set(out, fam, other):
            raise SurgeryError(f"family {fam!r} still has singletons")
    if not pair_coherent(out, out_orientation, family_a, family_b):
        raise SurgeryError("coherence lost leaving the positive frame")
    if len(out.curves) <= 12:
        if check_star(out, out_orientation, family_a, family_b) is not None:
            raise SurgeryError("side balance lost during singleton removal")
    return out, out_orientation, tuple(steps)


def _deficit(config: CurveConfiguration) -> int:
    return sum(
        2 * r.genus + len(r.cycles) - 1 for r in config.regions if not r.is_disk
    )


def _filling_route(
    work: CurveConfiguration, region, family_b: str
) -> Route:
    """Route one second-family curve that simplifies ``region`` by one.

    Two boundary cycles: lap the second-family curve met on each (a
    partial lap when it is the same curve) and join them.  One cycle
    with genus: a full lap closed around a handle.
    """
    cycles = sorted(_canonical_cycle(c) for c in region.cycles)

    def lowest_b_right(cycle) -> SegmentSide:
        picks = [
            letter
            for letter in cycle
            if letter.side == RIGHT and work.family_of(letter.curve) == family_b
        ]
        if not picks:
            raise SurgeryError(
                f"region {region.id}: boundary cycle shows no right side of "
                f"family {family_b!r}"
            )
        return min(picks)

    def lap(b_curve: int, start_seg: int, count: int) -> list[Hop]:
        itin = work.curve(b_curve).itinerary
        k = len(itin)
        hops = []
        for i in range(1, count + 1):
            xid = itin[(start_seg + i) % k]
            partner = work.crossing(xid).other(b_curve)
            hops.append(Hop(partner, work.position(partner, xid)))
        return hops

    if len(cycles) >= 2:
        b1 = lowest_b_right(cycles[0])
        b2 = lowest_b_right(cycles[1])
        if b1.curve != b2.curve:
            k1 = len(work.curve(b1.curve).itinerary)
            k2 = len(work.curve(b2.curve).itinerary)
            hops = lap(b1.curve, b1.segment, k1) + lap(b2.curve, b2.segment, k2)
            arcs = (
                [ARC_HUG_BACKWARD] * (k1 - 1)
                + [ARC_MERGE]
                + [ARC_HUG_BACKWARD] * (k2 - 1)
                + [ARC_HUG_BACKWARD]
            )
        else:
            k = len(work.curve(b1.curve).itinerary)
            count = (b1.segment - b2.segment) % k
            hops = lap(b1.curve, b2.segment, count)
            arcs = [ARC_HUG_BACKWARD] * (count - 1) + [ARC_MERGE]
    else:
        if region.genus < 1:
            raise SurgeryError(f"region {region.id} is neither a disk nor reducible")
        b1 = lowest_b_right(cycles[0])
        k = len(work.curve(b1.curve).itinerary)
        hops = lap(b1.curve, b1.segment, k)
        arcs = [ARC_HUG_BACKWARD] * (k - 1) + [ARC_WRAP]
    return Route(tuple(hops), tuple(arcs), LEFT)


def extend_to_filling(
    config: CurveConfiguration, orientation: OrientationAssignment
) -> tuple[CurveConfiguration, dict[int, int], tuple[SurgeryStep, ...]]:
    """Add second-family curves until every complementary region is a disk.

    Requires a coherent pair with no singletons.  Every step cuts the
    total boundary-and-genus deficit of the non-disk regions by exactly
    one, so the step count is bounded by regions plus twice the genus.
    """
    _require_valid(config)
    if not config.curves:
        raise ConfigError("nothing to extend")
    family_a, family_b = _pair_families(config)
    orientation = dict(orientation)
    if not pair_coherent(config, orientation, family_a, family_b):
        raise ConfigError("input pair is not coherent under the given orientation")
    for fam, other in ((family_a, family_b), (family_b, family_a)):
        if singleton_set(config, fam, other):
            raise ConfigError(f"family {fam!r} has singletons; remove them first")
    if all(r.is_disk for r in config.regions):
        return config, dict(orientation), ()

    work, frame = _normalize(config, orientation, family_a, family_b)
    ident = identity_orientation(work)
    next_curve = max(c.id for c in work.curves) + 1
    next_crossing = max(x.id for x in work.crossings) + 1
    steps: list[SurgeryStep] = []
    deficit = _deficit(work)
    while deficit:
        wid = min(r.id for r in work.regions if not r.is_disk)
        route = _filling_route(work, work.region_by_id[wid], family_b)
        kind = KIND_CONNECTED_SUM if ARC_WRAP in route.arcs else KIND_BOUNDARY_SUM
        xids = tuple(range(next_crossing, next_crossing + len(route.hops)))
        work, record = insert_curve(
            work,
            route,
            new_curve_id=next_curve,
            new_family=family_b,
            crossing_ids=xids,
        )
        ident[next_curve] = 1
        next_curve += 1
        next_crossing += len(xids)
        steps.append(_step_from_record(kind, record))
        if not pair_coherent(work, ident, family_a, family_b):
            raise SurgeryError("coherence broken by a filling step")
        now = _deficit(work)
        if now != deficit - 1:
            raise SurgeryError(f"deficit moved {deficit} -> {now}, expected -1")
        deficit = now

    out, out_orientation = _denormalize(work, frame, orientation)
    _assert_embeds(config, out)
    if not all(r.is_disk for r in out.regions):
        raise SurgeryError("non-disk region left after filling")
    if not pair_coherent(out, out_orientation, family_a, family_b):
        raise SurgeryError("coherence lost leaving the positive frame")
    return out, out_orientation, tuple(steps)


def extend_pair(
    config: CurveConfiguration,
    orientation: Optional[OrientationAssignment] = None,
) -> tuple[CurveConfiguration, dict[int, int], tuple[SurgeryStep, ...]] | Obstruction:
    """Certified extension of a pair to a filling pair, or why not.

    With no orientation given, one is solved for; a coherence failure is
    reported as an :class:`Obstruction` before any surgery, as is a
    side-balance witness found during singleton removal.
    """
    _require_valid(config)
    family_a, family_b = _pair_families(config)
    fams = [f for f in (family_a, family_b) if f]
    if orientation is None:
        if len(fams) < 2:
            orientation = identity_orientation(config)
        else:
            solved = coherently_orientable(config, fams)
            if isinstance(solved, Infeasible):
                return Obstruction("coherence", infeasible=solved)
            orientation = dict(solved)
    else:
        orientation = dict(orientation)
        if not pair_coherent(config, orientation, family_a, family_b):
            solved = coherently_orientable(config, fams) if len(fams) == 2 else None
            return Obstruction(
                "coherence",
                infeasible=solved if isinstance(solved, Infeasible) else None,
            )
    first = remove_singletons(config, orientation)
    if isinstance(first, Obstruction):
        return first
    mid, mid_orientation, steps_a = first
    out, out_orientation, steps_b = extend_to_filling(mid, mid_orientation)
    return out, out_orientation, steps_a + steps_b


def replay_steps(
    config: CurveConfiguration,
    orientation: OrientationAssignment,
    steps: tuple[SurgeryStep, ...],
) -> tuple[CurveConfiguration, dict[int, int]]:
    """Re-run recorded steps; reproduces the recorded output bit for bit.

    Every insertion is re-validated, and the freshly recorded step must
    agree with the stored one, so a tampered or stale audit trail fails
    loudly instead of replaying something else.
    """
    _require_valid(config)
    family_a, family_b = _pair_families(config)
    orientation = dict(orientation)
    if not pair_coherent(config, orientation, family_a, family_b):
        raise ConfigError("input pair is not coherent under the given orientation")
    work, frame = _normalize(config, orientation, family_a, family_b)
    for step in steps:
        route = Route(
            tuple(Hop(c, s) for c, s in step.hops),
            tuple(step.arcs),
            step.enter_side,
        )
        work, record = insert_curve(
            work,
            route,
            new_curve_id=step.curve,
            new_family=step.family,
            crossing_ids=tuple(x[0] for x in step.crossings),
        )
        if (
            step.kind != _derive_kind(step.arcs)
            or _step_from_record(step.kind, record) != step
        ):
            raise SurgeryError(f"replay diverged on the step adding curve {step.curve}")
    return _denormalize(work, frame, orientation)
