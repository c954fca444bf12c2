"""Small catalogue of hand-checked configurations used by tests and demos.

Every region decomposition in here was traced by hand before being frozen,
so the fixtures double as regression anchors for the face-walk tables.
"""

from __future__ import annotations

from typing import Dict, List, Tuple

from .curves import (
    LEFT,
    RIGHT,
    Crossing,
    Curve,
    CurveConfiguration,
    Region,
    SegmentSide,
    from_itineraries_all_disks,
)

A = "A"
B = "B"


def _ss(curve: int, segment: int, side: str) -> SegmentSide:
    return SegmentSide(curve, segment, side)


def torus_one_crossing() -> CurveConfiguration:
    """One curve per family on the torus, a single positive crossing."""
    return CurveConfiguration(
        genus=1,
        curves=(Curve(1, A, (10,)), Curve(2, B, (10,))),
        crossings=(Crossing(10, 1, 2, +1),),
        regions=(
            Region(
                0,
                0,
                ((_ss(1, 0, LEFT), _ss(2, 0, LEFT), _ss(1, 0, RIGHT), _ss(2, 0, RIGHT)),),
            ),
        ),
    )


def torus_one_crossing_negative() -> CurveConfiguration:
    """Same curves with the crossing sign flipped."""
    return CurveConfiguration(
        genus=1,
        curves=(Curve(1, A, (10,)), Curve(2, B, (10,))),
        crossings=(Crossing(10, 1, 2, -1),),
        regions=(
            Region(
                0,
                0,
                ((_ss(1, 0, LEFT), _ss(2, 0, RIGHT), _ss(1, 0, RIGHT), _ss(2, 0, LEFT)),),
            ),
        ),
    )


def torus_two_crossings() -> CurveConfiguration:
    """Homotopic pair crossing twice on the torus; both faces are squares."""
    return CurveConfiguration(
        genus=1,
        curves=(Curve(1, A, (10, 11)), Curve(2, B, (10, 11))),
        crossings=(Crossing(10, 1, 2, +1), Crossing(11, 1, 2, +1)),
        regions=(
            Region(
                0,
                0,
                ((_ss(1, 0, LEFT), _ss(2, 1, LEFT), _ss(1, 1, RIGHT), _ss(2, 0, RIGHT)),),
            ),
            Region(
                1,
                0,
                ((_ss(1, 1, LEFT), _ss(2, 0, LEFT), _ss(1, 0, RIGHT), _ss(2, 1, RIGHT)),),
            ),
        ),
    )


def genus2_opposite_signs() -> CurveConfiguration:
    """Two curves crossing twice with opposite signs on a genus-2 surface.

    The four traced circles pair up into two annular regions, so the
    complement carries no disks at all.
    """
    c1 = (_ss(1, 0, LEFT), _ss(2, 0, RIGHT))
    c2 = (_ss(1, 0, RIGHT), _ss(2, 1, RIGHT))
    c3 = (_ss(1, 1, LEFT), _ss(2, 0, LEFT))
    c4 = (_ss(1, 1, RIGHT), _ss(2, 1, LEFT))
    return CurveConfiguration(
        genus=2,
        curves=(Curve(1, A, (10, 11)), Curve(2, B, (10, 11))),
        crossings=(Crossing(10, 1, 2, +1), Crossing(11, 1, 2, -1)),
        regions=(Region(0, 0, (c1, c2)), Region(1, 0, (c3, c4))),
    )


def genus2_separating_singleton() -> CurveConfiguration:
    """A crossing-free curve splitting a genus-2 surface into two handles."""
    return CurveConfiguration(
        genus=2,
        curves=(Curve(1, A, ()),),
        crossings=(),
        regions=(
            Region(0, 1, ((_ss(1, 0, LEFT),),)),
            Region(1, 1, ((_ss(1, 0, RIGHT),),)),
        ),
    )


def genus2_nonseparating_singleton() -> CurveConfiguration:
    """A crossing-free curve whose complement in genus 2 stays connected."""
    return CurveConfiguration(
        genus=2,
        curves=(Curve(1, A, ()),),
        crossings=(),
        regions=(Region(0, 1, ((_ss(1, 0, LEFT),), (_ss(1, 0, RIGHT),))),),
    )


def genus2_separated_pocket() -> CurveConfiguration:
    """Curve 1 separates once curve 2 is removed from the surface.

    Curve 2 is a second crossing-free curve living entirely on the left
    side of curve 1, so cutting along it leaves curve 1 separating.
    """
    return CurveConfiguration(
        genus=2,
        curves=(Curve(1, A, ()), Curve(2, B, ())),
        crossings=(),
        regions=(
            Region(
                0, 0, ((_ss(1, 0, LEFT),), (_ss(2, 0, LEFT),), (_ss(2, 0, RIGHT),))
            ),
            Region(1, 1, ((_ss(1, 0, RIGHT),),)),
        ),
    )


def genus2_two_singletons() -> CurveConfiguration:
    """Two disjoint non-separating curves, one per family, on genus 2."""
    return CurveConfiguration(
        genus=2,
        curves=(Curve(1, A, ()), Curve(2, B, ())),
        crossings=(),
        regions=(
            Region(
                0,
                0,
                (
                    (_ss(1, 0, LEFT),),
                    (_ss(1, 0, RIGHT),),
                    (_ss(2, 0, LEFT),),
                    (_ss(2, 0, RIGHT),),
                ),
            ),
        ),
    )


def genus2_one_crossing() -> CurveConfiguration:
    """Single positive crossing on genus 2; the complement is one handle."""
    return CurveConfiguration(
        genus=2,
        curves=(Curve(1, A, (10,)), Curve(2, B, (10,))),
        crossings=(Crossing(10, 1, 2, +1),),
        regions=(
            Region(
                0,
                1,
                ((_ss(1, 0, LEFT), _ss(2, 0, LEFT), _ss(1, 0, RIGHT), _ss(2, 0, RIGHT)),),
            ),
        ),
    )


def l_shaped_pair() -> CurveConfiguration:
    """Filling pair on genus 2 whose square-tiled surface is the 3-square L.

    One disk region of length 12; the three crossings become the three
    unit squares, horizontally 10-11 side by side with 30 alone, stacked
    so 30 sits on top of 10.
    """
    return CurveConfiguration(
        genus=2,
        curves=(
            Curve(1, A, (10, 11)),
            Curve(2, A, (30,)),
            Curve(3, B, (10, 30)),
            Curve(4, B, (11,)),
        ),
        crossings=(
            Crossing(10, 1, 3, +1),
            Crossing(11, 1, 4, +1),
            Crossing(30, 2, 3, +1),
        ),
        regions=(
            Region(
                0,
                0,
                ((
                    _ss(1, 0, LEFT), _ss(4, 0, LEFT), _ss(1, 0, RIGHT),
                    _ss(3, 1, RIGHT), _ss(2, 0, LEFT), _ss(3, 1, LEFT),
                    _ss(1, 1, RIGHT), _ss(4, 0, RIGHT), _ss(1, 1, LEFT),
                    _ss(3, 0, LEFT), _ss(2, 0, RIGHT), _ss(3, 0, RIGHT),
                ),),
            ),
        ),
    )


def genus2_noncoherent_pair() -> CurveConfiguration:
    """Two curves per family on genus 2 with one negative crossing.

    Every proper sub-multicurve passes the component-by-component side
    balance, yet no orientation choice makes all four crossings agree,
    so this separates the pairwise test from the global one.
    """
    cyc1 = (
        _ss(1, 0, LEFT),
        _ss(4, 0, LEFT),
        _ss(2, 1, LEFT),
        _ss(3, 1, LEFT),
        _ss(1, 1, RIGHT),
        _ss(4, 1, RIGHT),
        _ss(2, 0, RIGHT),
        _ss(3, 0, RIGHT),
    )
    cyc2 = (
        _ss(1, 0, RIGHT),
        _ss(3, 1, RIGHT),
        _ss(2, 0, LEFT),
        _ss(4, 0, RIGHT),
        _ss(1, 1, LEFT),
        _ss(3, 0, LEFT),
        _ss(2, 1, RIGHT),
        _ss(4, 1, LEFT),
    )
    return CurveConfiguration(
        genus=2,
        curves=(
            Curve(1, A, (11, 12)),
            Curve(2, A, (21, 22)),
            Curve(3, B, (11, 21)),
            Curve(4, B, (12, 22)),
        ),
        crossings=(
            Crossing(11, 1, 3, +1),
            Crossing(12, 1, 4, +1),
            Crossing(21, 2, 3, +1),
            Crossing(22, 2, 4, -1),
        ),
        regions=(Region(0, 0, (cyc1,)), Region(1, 0, (cyc2,))),
    )


def genus3_filling_pair() -> CurveConfiguration:
    """Filling pair on genus 3: two triple-crossing curves against three.

    All six crossings are positive; the two complementary faces are
    12-gons.  Horizontal/vertical cylinder counts are 2 and 3.
    """
    d1 = (
        _ss(1, 0, LEFT),
        _ss(3, 1, LEFT),
        _ss(1, 2, RIGHT),
        _ss(4, 1, RIGHT),
        _ss(2, 2, LEFT),
        _ss(5, 0, LEFT),
        _ss(2, 0, RIGHT),
        _ss(5, 1, RIGHT),
        _ss(2, 1, LEFT),
        _ss(4, 1, LEFT),
        _ss(1, 1, RIGHT),
        _ss(3, 0, RIGHT),
    )
    d2 = (
        _ss(1, 0, RIGHT),
        _ss(3, 1, RIGHT),
        _ss(1, 1, LEFT),
        _ss(4, 0, LEFT),
        _ss(2, 1, RIGHT),
        _ss(5, 0, RIGHT),
        _ss(2, 0, LEFT),
        _ss(5, 1, LEFT),
        _ss(2, 2, RIGHT),
        _ss(4, 0, RIGHT),
        _ss(1, 2, LEFT),
        _ss(3, 0, LEFT),
    )
    return CurveConfiguration(
        genus=3,
        curves=(
            Curve(1, A, (31, 32, 41)),
            Curve(2, A, (51, 52, 42)),
            Curve(3, B, (31, 32)),
            Curve(4, B, (41, 42)),
            Curve(5, B, (51, 52)),
        ),
        crossings=(
            Crossing(31, 1, 3, +1),
            Crossing(32, 1, 3, +1),
            Crossing(41, 1, 4, +1),
            Crossing(42, 2, 4, +1),
            Crossing(51, 2, 5, +1),
            Crossing(52, 2, 5, +1),
        ),
        regions=(Region(0, 0, (d1,)), Region(1, 0, (d2,))),
    )


def four_by_three_sign_matrix() -> List[List[int]]:
    """Crossing-sign pattern of four curves against three, one sign each."""
    return [
        [+1, +1, +1],
        [+1, -1, -1],
        [-1, +1, -1],
        [+1, +1, -1],
    ]


def four_by_three_sign_config() -> CurveConfiguration:
    """A configuration realizing the 4x3 sign pattern, one crossing per pair.

    Itineraries run in plain index order; with a single crossing per pair
    no bigons can occur, so the all-disk assembly is automatically valid.
    """
    matrix = four_by_three_sign_matrix()
    a_ids = [1, 2, 3, 4]
    b_ids = [5, 6, 7]
    crossings = []
    for i, ai in enumerate(a_ids):
        for j, bj in enumerate(b_ids):
            crossings.append(Crossing(10 * (i + 1) + (j + 1), ai, bj, matrix[i][j]))
    curves = [
        Curve(ai, A, tuple(10 * (i + 1) + (j + 1) for j in range(3)))
        for i, ai in enumerate(a_ids)
    ]
    curves += [
        Curve(bj, B, tuple(10 * (i + 1) + (j + 1) for i in range(4)))
        for j, bj in enumerate(b_ids)
    ]
    return from_itineraries_all_disks(curves, crossings)


def separation_suite() -> List[Tuple[CurveConfiguration, int, str]]:
    """Ten configurations each containing a curve separating the complement
    of the other family.

    Returns (config, separating curve id, its family) triples.
    """
    out: List[Tuple[CurveConfiguration, int, str]] = []

    def build(
        sep_family: str,
        genus_left: int,
        genus_right: int,
        pocket_left: int,
        pocket_right: int,
    ) -> Tuple[CurveConfiguration, int, str]:
        # pocket_* count crossing-free curves of the *other* family
        # parked on each side of the separator.
        other = B if sep_family == A else A
        curves = [Curve(1, sep_family, ())]
        next_id = 2
        left_cycles: List[Tuple[SegmentSide, ...]] = [(_ss(1, 0, LEFT),)]
        right_cycles: List[Tuple[SegmentSide, ...]] = [(_ss(1, 0, RIGHT),)]
        for _ in range(pocket_left):
            curves.append(Curve(next_id, other, ()))
            left_cycles.append((_ss(next_id, 0, LEFT),))
            left_cycles.append((_ss(next_id, 0, RIGHT),))
            next_id += 1
        for _ in range(pocket_right):
            curves.append(Curve(next_id, other, ()))
            right_cycles.append((_ss(next_id, 0, LEFT),))
            right_cycles.append((_ss(next_id, 0, RIGHT),))
            next_id += 1
        genus = genus_left + genus_right + pocket_left + pocket_right
        cfg = CurveConfiguration(
            genus=genus,
            curves=tuple(curves),
            crossings=(),
            regions=(
                Region(0, genus_left, tuple(left_cycles)),
                Region(1, genus_right, tuple(right_cycles)),
            ),
        )
        return cfg, 1, sep_family

    out.append(build(A, 1, 1, 0, 0))
    out.append(build(A, 0, 1, 1, 0))
    out.append(build(A, 1, 0, 0, 1))
    out.append(build(A, 1, 1, 1, 0))
    out.append(build(A, 2, 1, 0, 0))
    out.append(build(A, 0, 0, 1, 1))
    out.append(build(B, 1, 1, 0, 0))
    out.append(build(B, 0, 1, 1, 0))
    out.append(build(B, 1, 2, 0, 1))
    out.append(build(B, 0, 2, 1, 0))
    return out


def all_validating_fixtures() -> Dict[str, CurveConfiguration]:
    """Name -> configuration map covering every valid fixture above."""
    out = {
        "torus_one_crossing": torus_one_crossing(),
        "torus_one_crossing_negative": torus_one_crossing_negative(),
        "torus_two_crossings": torus_two_crossings(),
        "genus2_opposite_signs": genus2_opposite_signs(),
        "genus2_separating_singleton": genus2_separating_singleton(),
        "genus2_nonseparating_singleton": genus2_nonseparating_singleton(),
        "genus2_separated_pocket": genus2_separated_pocket(),
        "genus2_two_singletons": genus2_two_singletons(),
        "genus2_one_crossing": genus2_one_crossing(),
        "l_shaped_pair": l_shaped_pair(),
        "genus2_noncoherent_pair": genus2_noncoherent_pair(),
        "genus3_filling_pair": genus3_filling_pair(),
        "four_by_three_sign_config": four_by_three_sign_config(),
    }
    for k, (cfg, _, _) in enumerate(separation_suite()):
        out[f"separation_{k}"] = cfg
    return out
