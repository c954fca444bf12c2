"""Orientation coherence of crossing curve families.

Two oriented families are coherent when every crossing between them carries
the same sign, so geometric and algebraic intersection numbers agree up to
sign.  This module decides whether orientations making several families
mutually coherent exist (a mod-2 linear problem), checks the side-balance
condition that governs realizability with singletons present, and bundles
both into the unoriented parallel-realizability criterion.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .curves import (
    LEFT,
    RIGHT,
    ComplementComponent,
    ConfigError,
    CurveConfiguration,
    OrientationAssignment,
    complement_components,
    separates,
)

__all__ = [
    "Infeasible",
    "StarWitness",
    "Separation",
    "ParallelVerdict",
    "pair_coherent",
    "pairwise_coherent",
    "coherently_orientable",
    "infeasible_certificate_holds",
    "check_star",
    "star_witness_holds",
    "check_parallel_realizable",
]


@dataclass(frozen=True)
class Infeasible:
    """Certificate that no orientation assignment is coherent.

    ``crossings`` is a set of crossing ids forming an odd mod-2 dependency:
    every curve and every family pair meets it an even number of times
    while the number of negative signs in it is odd.  Any orientation
    choice therefore leaves at least one crossing off-sign.
    """

    crossings: Tuple[int, ...]

    def to_doc(self) -> dict:
        return {"feasible": False, "odd_cycle": list(self.crossings)}


@dataclass(frozen=True)
class StarWitness:
    """A sub-multicurve and complement component with unbalanced sides.

    ``empty`` names the bucket (one of A_L/A_R/B_L/B_R) that has no curves
    even though its partner bucket does.
    """

    gamma: Tuple[int, ...]
    component: ComplementComponent
    empty: str

    def to_doc(self) -> dict:
        return {
            "gamma": list(self.gamma),
            "component_regions": list(self.component.regions),
            "empty": self.empty,
        }


@dataclass(frozen=True)
class Separation:
    curve: int
    cut_family: str

    def to_doc(self) -> dict:
        return {"kind": "separation", "curve": self.curve, "cut_family": self.cut_family}


@dataclass(frozen=True)
class ParallelVerdict:
    realizable: bool
    obstruction: object = None  # Infeasible | Separation | None

    def to_doc(self) -> dict:
        if self.realizable:
            return {"realizable": True}
        if isinstance(self.obstruction, Infeasible):
            ob = {
                "kind": "not-coherently-orientable",
                "odd_cycle": list(self.obstruction.crossings),
            }
        else:
            ob = self.obstruction.to_doc()
        return {"realizable": False, "obstruction": ob}


# ---------------------------------------------------------------------------
# coherence of fixed orientations
# ---------------------------------------------------------------------------


def _oriented_sign(config, orientation, crossing) -> int:
    return crossing.sign * orientation[crossing.curve_a] * orientation[crossing.curve_b]


def pair_coherent(
    config: CurveConfiguration,
    orientation: OrientationAssignment,
    family_a: str,
    family_b: str,
) -> bool:
    """Whether all crossings between the two families share one sign under
    the given orientation."""
    ids_a = {c.id for c in config.curves_of(family_a)}
    ids_b = {c.id for c in config.curves_of(family_b)}
    seen = set()
    for x in config.crossings:
        if (x.curve_a in ids_a and x.curve_b in ids_b) or (
            x.curve_a in ids_b and x.curve_b in ids_a
        ):
            seen.add(_oriented_sign(config, orientation, x))
    return len(seen) <= 1


def pairwise_coherent(
    config: CurveConfiguration, family_a: str, family_b: str
) -> bool:
    """Whether each curve pair across the families crosses with one sign.

    Orientation-independent: reorienting either curve negates all of the
    pair's crossings at once.
    """
    ids_a = {c.id for c in config.curves_of(family_a)}
    ids_b = {c.id for c in config.curves_of(family_b)}
    per_pair: Dict[Tuple[int, int], set] = {}
    for x in config.crossings:
        if x.curve_a in ids_a and x.curve_b in ids_b:
            key = (x.curve_a, x.curve_b)
        elif x.curve_a in ids_b and x.curve_b in ids_a:
            key = (x.curve_b, x.curve_a)
        else:
            continue
        per_pair.setdefault(key, set()).add(x.sign)
    return all(len(s) <= 1 for s in per_pair.values())


# ---------------------------------------------------------------------------
# coherent orientability (mod-2 elimination with provenance)
# ---------------------------------------------------------------------------


def coherently_orientable(
    config: CurveConfiguration, families: Sequence[str]
) -> OrientationAssignment | Infeasible:
    """Search for orientations making all listed families mutually coherent.

    Per crossing x between listed families i, j the constraint is
    sign(x) * eps(a) * eps(b) = sigma_ij with the pair sign sigma_ij free.
    Written additively mod 2 this is a linear system; we eliminate with
    full row provenance so an inconsistency yields the subset of crossings
    whose signs multiply to -1 along an even traversal.
    """
    fams = list(dict.fromkeys(families))
    if len(fams) < 2:
        raise ConfigError("need at least two families")
    member: Dict[int, str] = {}
    for f in fams:
        for c in config.curves_of(f):
            member[c.id] = f

    curve_vars = {cid: i for i, cid in enumerate(sorted(member))}
    pair_vars: Dict[Tuple[str, str], int] = {}
    rows: List[Tuple[int, int, int]] = []  # (mask, rhs, provenance mask)
    xs = sorted(
        (
            x
            for x in config.crossings
            if x.curve_a in member and x.curve_b in member
        ),
        key=lambda x: x.id,
    )
    for k, x in enumerate(xs):
        pair = tuple(sorted((member[x.curve_a], member[x.curve_b])))
        if pair not in pair_vars:
            pair_vars[pair] = len(curve_vars) + len(pair_vars)
        mask = (
            (1 << curve_vars[x.curve_a])
            ^ (1 << curve_vars[x.curve_b])
            ^ (1 << pair_vars[pair])
        )
        rows.append((mask, 1 if x.sign < 0 else 0, 1 << k))

    pivots: Dict[int, Tuple[int, int, int]] = {}  # var -> reduced row
    for mask, rhs, prov in rows:
        while mask:
            v = mask.bit_length() - 1
            if v not in pivots:
                pivots[v] = (mask, rhs, prov)
                break
            pm, pr, pp = pivots[v]
            mask ^= pm
            rhs ^= pr
            prov ^= pp
        else:
            if rhs:
                cert = tuple(
                    xs[k].id for k in range(len(xs)) if prov >> k & 1
                )
                return Infeasible(cert)

    # every non-pivot bit of a pivot row lies strictly below its pivot,
    # so ascending order resolves dependencies; free variables stay 0
    values = [0] * (len(curve_vars) + len(pair_vars))
    for v in sorted(pivots):
        mask, rhs, _ = pivots[v]
        acc = rhs
        rest = mask & ~(1 << v)
        while rest:
            w = (rest & -rest).bit_length() - 1
            acc ^= values[w]
            rest &= rest - 1
        values[v] = acc

    orientation = {c.id: 1 for c in config.curves}
    for cid, idx in curve_vars.items():
        orientation[cid] = -1 if values[idx] else 1
    return orientation


def infeasible_certificate_holds(
    config: CurveConfiguration, families: Sequence[str], cert: Infeasible
) -> bool:
    """Re-check an odd-cycle certificate against the configuration."""
    fams = set(families)
    curve_count: Dict[int, int] = {}
    pair_count: Dict[Tuple[str, str], int] = {}
    negatives = 0
    for xid in cert.crossings:
        x = config.crossing(xid)
        fa = config.family_of(x.curve_a)
        fb = config.family_of(x.curve_b)
        if fa not in fams or fb not in fams:
            return False
        curve_count[x.curve_a] = curve_count.get(x.curve_a, 0) + 1
        curve_count[x.curve_b] = curve_count.get(x.curve_b, 0) + 1
        pair = tuple(sorted((fa, fb)))
        pair_count[pair] = pair_count.get(pair, 0) + 1
        if x.sign < 0:
            negatives += 1
    if len(set(cert.crossings)) != len(cert.crossings) or not cert.crossings:
        return False
    return (
        all(n % 2 == 0 for n in curve_count.values())
        and all(n % 2 == 0 for n in pair_count.values())
        and negatives % 2 == 1
    )


# ---------------------------------------------------------------------------
# side balance over all sub-multicurves
# ---------------------------------------------------------------------------


def _effective_side(side: str, eps: int) -> str:
    if eps > 0:
        return side
    return RIGHT if side == LEFT else LEFT


def _buckets(
    config: CurveConfiguration,
    orientation: OrientationAssignment,
    component: ComplementComponent,
    gamma: Iterable[int],
    fam_of: Mapping[int, str],
    family_a: str,
) -> Dict[str, set]:
    out: Dict[str, set] = {"A_L": set(), "A_R": set(), "B_L": set(), "B_R": set()}
    gset = set(gamma)
    for curve_id, side in component.boundary_sides:
        if curve_id not in gset:
            continue
        eff = _effective_side(side, orientation[curve_id])
        tag = "A" if fam_of[curve_id] == family_a else "B"
        out[f"{tag}_{eff}"].add(curve_id)
    return out


_PARTNER = {"A_L": "A_R", "A_R": "A_L", "B_L": "B_R", "B_R": "B_L"}


def check_star(
    config: CurveConfiguration,
    orientation: OrientationAssignment,
    family_a: str,
    family_b: str,
    max_curves: int = 16,
) -> Optional[StarWitness]:
    """Side balance across every disjoint sub-multicurve of the two families.

    For each nonempty pairwise-disjoint subset gamma and each component of
    the cut surface, the gamma-curves of either family must appear on the
    left of the component exactly when some appear on the right.  Returns
    None when balanced, otherwise the first witness in (size, lex) order.
    """
    fam_of = {c.id: family_a for c in config.curves_of(family_a)}
    fam_of.update({c.id: family_b for c in config.curves_of(family_b)})
    ids = sorted(fam_of)
    if len(ids) > max_curves:
        raise ConfigError(
            f"{len(ids)} curves exceeds subset enumeration bound {max_curves}"
        )
    crossing_adj: Dict[int, set] = {i: set() for i in ids}
    for x in config.crossings:
        if x.curve_a in fam_of and x.curve_b in fam_of:
            crossing_adj[x.curve_a].add(x.curve_b)
            crossing_adj[x.curve_b].add(x.curve_a)

    for size in range(1, len(ids) + 1):
        for gamma in itertools.combinations(ids, size):
            ok = True
            chosen = set(gamma)
            for c in gamma:
                if crossing_adj[c] & chosen:
                    ok = False
                    break
            if not ok:
                continue
            for comp in complement_components(config, gamma):
                buckets = _buckets(
                    config, orientation, comp, gamma, fam_of, family_a
                )
                for name in ("A_L", "A_R", "B_L", "B_R"):
                    if not buckets[name] and buckets[_PARTNER[name]]:
                        return StarWitness(gamma, comp, name)
    return None


def star_witness_holds(
    config: CurveConfiguration,
    orientation: OrientationAssignment,
    witness: StarWitness,
    family_a: str,
    family_b: str,
) -> bool:
    """Re-evaluate a witness from scratch."""
    fam_of = {c.id: family_a for c in config.curves_of(family_a)}
    fam_of.update({c.id: family_b for c in config.curves_of(family_b)})
    if not set(witness.gamma) <= set(fam_of):
        return False
    for comp in complement_components(config, witness.gamma):
        if set(comp.regions) == set(witness.component.regions):
            buckets = _buckets(
                config, orientation, comp, witness.gamma, fam_of, family_a
            )
            return not buckets[witness.empty] and bool(
                buckets[_PARTNER[witness.empty]]
            )
    return False


# ---------------------------------------------------------------------------
# the unoriented criterion
# ---------------------------------------------------------------------------


def check_parallel_realizable(
    config: CurveConfiguration, family_a: str, family_b: str
) -> ParallelVerdict:
    """Both families realizable as parallel cylinder cores at once.

    Holds iff the pair is coherently orientable and no curve of either
    family separates the surface cut along the other family.
    """
    co = coherently_orientable(config, [family_a, family_b])
    if isinstance(co, Infeasible):
        return ParallelVerdict(False, co)
    for fam, other in ((family_a, family_b), (family_b, family_a)):
        for c in sorted(cc.id for cc in config.curves_of(fam)):
            if separates(config, c, other):
                return ParallelVerdict(False, Separation(c, other))
    return ParallelVerdict(True)
