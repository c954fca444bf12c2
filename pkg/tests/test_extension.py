"""Surgery extensions: singleton removal, filling, audited replay."""

import random

import pytest

import multicyl as m
from multicyl import fixtures as fx
from multicyl.coherence import check_star, infeasible_certificate_holds, pair_coherent, star_witness_holds
from multicyl.curves import ConfigError, Curve, CurveConfiguration, Region, validate
from multicyl.extension import (
    KIND_BOUNDARY_SUM,
    KIND_CONNECTED_SUM,
    KIND_DIRECTED_PATH,
    BridgeObstruction,
    Obstruction,
    SurgeryStep,
    _assert_embeds,
    _pair_families,
    component_digraph,
    extend_pair,
    extend_to_filling,
    remove_singletons,
    replay_steps,
    robbins_orient,
    singleton_set,
)
from multicyl._surgery import SurgeryError

from genconfig import random_config


def ident(cfg):
    return m.identity_orientation(cfg)


def certify(cfg, out, orientation, steps):
    fa, fb = _pair_families(out)
    assert validate(out).ok
    assert pair_coherent(out, orientation, fa, fb)
    assert not singleton_set(out, fa, fb)
    assert not singleton_set(out, fb, fa)
    _assert_embeds(cfg, out)
    assert {c.id for c in out.curves} == set(orientation)
    assert set(orientation.values()) <= {1, -1}
    base = {c.id: orientation[c.id] for c in cfg.curves}
    replayed, replayed_orientation = replay_steps(cfg, base, steps)
    assert replayed == out
    assert replayed_orientation == orientation


# -- singleton sets -------------------------------------------------------------


def test_singleton_set_examples():
    assert singleton_set(fx.torus_one_crossing(), "A", "B") == set()
    assert singleton_set(fx.genus2_separating_singleton(), "A", "B") == {1}
    two = fx.genus2_two_singletons()
    assert singleton_set(two, "A", "B") == {1}
    assert singleton_set(two, "B", "A") == {2}
    fill = fx.genus3_filling_pair()
    assert singleton_set(fill, "A", "B") == set()
    assert singleton_set(fill, "B", "A") == set()


# -- component digraph and one-way orientation ---------------------------------


def _two_singleton_genus3(sides):
    # two disjoint closed curves jointly splitting a genus-3 surface into
    # two genus-1 pockets; ``sides`` fixes which side of each faces pocket 0
    s1, s2 = sides
    other = {"L": "R", "R": "L"}
    return CurveConfiguration(
        genus=3,
        curves=(Curve(1, "A", ()), Curve(2, "A", ())),
        crossings=(),
        regions=(
            Region(0, 1, ((m.SegmentSide(1, 0, s1),), (m.SegmentSide(2, 0, s2),))),
            Region(
                1,
                1,
                (
                    (m.SegmentSide(1, 0, other[s1]),),
                    (m.SegmentSide(2, 0, other[s2]),),
                ),
            ),
        ),
    )


def test_component_digraph_loop():
    cfg = fx.genus2_two_singletons()
    dg = component_digraph(cfg, "A", "B")
    assert len(dg.components) == 1
    assert [(e.singleton, e.tail, e.head) for e in dg.edges] == [(1, 0, 0)]


def test_robbins_loop_keeps_orientation():
    cfg = fx.genus2_nonseparating_singleton()
    assert robbins_orient(cfg, "A", "B") == {1: 1}


def test_robbins_parallel_edges_oppose():
    cfg = _two_singleton_genus3(("L", "L"))
    assert validate(cfg).ok
    assert robbins_orient(cfg, "A", "B") == {1: 1, 2: -1}


def test_robbins_antiparallel_edges_agree():
    cfg = _two_singleton_genus3(("L", "R"))
    assert validate(cfg).ok
    assert robbins_orient(cfg, "A", "B") == {1: 1, 2: 1}


def test_robbins_bridge_reported():
    cfg = fx.genus2_separating_singleton()
    got = robbins_orient(cfg, "A", "B")
    assert got == BridgeObstruction(singleton=1)


def _strongly_oriented(cfg, orientation):
    # every edge must sit on a directed cycle of its digraph
    dg = component_digraph(cfg, "A", "B", orientation)
    out = {}
    for e in dg.edges:
        out.setdefault(e.tail, []).append(e.head)
    for e in dg.edges:
        seen, queue = {e.head}, [e.head]
        while queue:
            u = queue.pop()
            for v in out.get(u, ()):
                if v not in seen:
                    seen.add(v)
                    queue.append(v)
        if e.tail not in seen:
            return False
    return True


def test_robbins_random_against_reachability_oracle():
    rng = random.Random(40314)
    checked = 0
    for _ in range(200):
        cfg = random_config(rng, max_curves=6)
        sings = sorted(singleton_set(cfg, "A", "B"))
        if not sings:
            continue
        got = robbins_orient(cfg, "A", "B")
        choices = [
            dict(zip(sings, bits))
            for bits in __import__("itertools").product((1, -1), repeat=len(sings))
        ]
        feasible = [o for o in choices if _strongly_oriented(cfg, o)]
        if isinstance(got, BridgeObstruction):
            assert not feasible
            assert got.singleton in sings
        else:
            assert _strongly_oriented(cfg, got)
            assert feasible
        checked += 1
    assert checked >= 40


# -- remove_singletons ----------------------------------------------------------


def test_remove_singletons_identity_when_none():
    for cfg in (fx.torus_one_crossing(), fx.genus3_filling_pair()):
        out, orientation, steps = remove_singletons(cfg, ident(cfg))
        assert out == cfg
        assert steps == ()
        assert orientation == ident(cfg)


def test_remove_singletons_two_sided_oracle():
    cfg = fx.genus2_two_singletons()
    out, orientation, steps = remove_singletons(cfg, ident(cfg))
    assert [s.kind for s in steps] == [KIND_DIRECTED_PATH] * 2
    assert [(s.curve, s.family, s.enter_side) for s in steps] == [
        (3, "B", "L"),
        (4, "A", "R"),
    ]
    assert steps[0].crossings == ((0, 1, 3, 1),)
    assert steps[1].crossings == ((1, 4, 2, 1),)
    assert out.curve(1).itinerary == (0,)
    assert out.curve(2).itinerary == (1,)
    assert out.curve(3).itinerary == (0,)
    assert out.curve(4).itinerary == (1,)
    assert [(r.genus, sorted(len(c) for c in r.cycles)) for r in out.regions] == [
        (0, [4, 4])
    ]
    assert orientation == {1: 1, 2: 1, 3: 1, 4: 1}
    certify(cfg, out, orientation, steps)


def test_remove_singletons_all_new_crossings_positive():
    cfg = fx.genus2_two_singletons()
    out, _, steps = remove_singletons(cfg, ident(cfg))
    for s in steps:
        assert all(x[3] == 1 for x in s.crossings)
    assert all(x.sign == 1 for x in out.crossings)


def test_remove_singletons_star_obstruction():
    cfg = fx.genus2_separating_singleton()
    got = remove_singletons(cfg, ident(cfg))
    assert isinstance(got, Obstruction)
    assert got.stage == "star"
    assert got.witness.gamma == (1,)
    assert star_witness_holds(cfg, ident(cfg), got.witness, "A", "B")
    assert got.to_doc()["stage"] == "star"


def test_remove_singletons_single_family_has_no_target():
    cfg = fx.genus2_nonseparating_singleton()
    with pytest.raises(ConfigError):
        remove_singletons(cfg, ident(cfg))


def test_remove_singletons_rejects_incoherent_orientation():
    cfg = fx.genus2_opposite_signs()
    with pytest.raises(ConfigError):
        remove_singletons(cfg, ident(cfg))


# -- extend_to_filling ----------------------------------------------------------


def test_extend_to_filling_identity_on_filling():
    for cfg in (
        fx.torus_one_crossing(),
        fx.torus_two_crossings(),
        fx.genus3_filling_pair(),
    ):
        out, orientation, steps = extend_to_filling(cfg, ident(cfg))
        assert out == cfg
        assert steps == ()
        assert orientation == ident(cfg)


def test_extend_to_filling_wraps_handle_then_splits():
    cfg = fx.genus2_one_crossing()
    out, orientation, steps = extend_to_filling(cfg, ident(cfg))
    assert [s.kind for s in steps] == [KIND_CONNECTED_SUM, KIND_BOUNDARY_SUM]
    assert steps[0].arcs == ("wrap",)
    assert steps[1].arcs == ("merge", "hug-backward")
    assert all(r.is_disk for r in out.regions)
    assert all(len(s.crossings) >= 1 for s in steps)
    certify(cfg, out, orientation, steps)


def test_extend_to_filling_step_bound():
    cfg = fx.genus2_one_crossing()
    _, _, steps = extend_to_filling(cfg, ident(cfg))
    assert len(steps) <= len(cfg.regions) + 2 * cfg.genus


def test_extend_to_filling_rejects_singletons():
    cfg = fx.genus2_two_singletons()
    with pytest.raises(ConfigError):
        extend_to_filling(cfg, ident(cfg))


def test_extend_to_filling_rejects_incoherent():
    cfg = fx.genus2_opposite_signs()
    with pytest.raises(ConfigError):
        extend_to_filling(cfg, ident(cfg))


# -- extend_pair ----------------------------------------------------------------


def test_extend_pair_identity_on_torus():
    cfg = fx.torus_one_crossing()
    out, orientation, steps = extend_pair(cfg)
    assert out == cfg
    assert steps == ()
    assert orientation == {1: 1, 2: 1}


def test_extend_pair_reports_coherence_before_surgery():
    cfg = fx.genus2_noncoherent_pair()
    got = extend_pair(cfg)
    assert isinstance(got, Obstruction)
    assert got.stage == "coherence"
    assert got.infeasible is not None
    assert infeasible_certificate_holds(cfg, ["A", "B"], got.infeasible)


def test_extend_pair_given_orientation_checked_first():
    cfg = fx.genus2_opposite_signs()
    got = extend_pair(cfg, ident(cfg))
    assert isinstance(got, Obstruction)
    assert got.stage == "coherence"


def test_extend_pair_star_obstructions_on_separation_suite():
    for cfg, curve, family in fx.separation_suite():
        got = extend_pair(cfg)
        assert isinstance(got, Obstruction), (curve, family)
        assert got.stage == "star"
        fa, fb = _pair_families(cfg)
        assert star_witness_holds(cfg, ident(cfg), got.witness, fa, fb)


def test_extend_pair_full_pipeline_oracle():
    cfg = fx.genus2_two_singletons()
    out, orientation, steps = extend_pair(cfg)
    assert [s.kind for s in steps] == [
        KIND_DIRECTED_PATH,
        KIND_DIRECTED_PATH,
        KIND_BOUNDARY_SUM,
    ]
    assert [s.curve for s in steps] == [3, 4, 5]
    assert steps[2].hops == ((1, 0), (4, 0))
    assert steps[2].arcs == ("merge", "hug-backward")
    assert {(x.id, x.curve_a, x.curve_b, x.sign) for x in out.crossings} == {
        (0, 1, 3, 1),
        (1, 4, 2, 1),
        (2, 1, 5, 1),
        (3, 4, 5, 1),
    }
    assert out.curve(1).itinerary == (0, 2)
    assert out.curve(4).itinerary == (1, 3)
    assert out.curve(5).itinerary == (2, 3)
    assert all(r.is_disk for r in out.regions)
    assert len(out.regions) == 2
    assert out.genus == 2
    certify(cfg, out, orientation, steps)


def test_extend_pair_random_certified():
    rng = random.Random(90125)
    filled = 0
    for _ in range(120):
        cfg = random_config(rng, max_curves=6)
        got = extend_pair(cfg)
        if isinstance(got, Obstruction):
            assert got.stage in ("coherence", "star")
            continue
        out, orientation, steps = got
        fa, fb = _pair_families(out)
        assert all(r.is_disk for r in out.regions)
        if len(out.curves) <= 10:
            assert check_star(out, orientation, fa, fb) is None
        certify(cfg, out, orientation, steps)
        filled += 1
    assert filled >= 25


# -- step records and replay ----------------------------------------------------


def test_step_doc_round_trip():
    cfg = fx.genus2_two_singletons()
    _, _, steps = extend_pair(cfg)
    for s in steps:
        assert SurgeryStep.from_doc(s.to_doc()) == s


def test_replay_rejects_tampered_steps():
    cfg = fx.genus2_two_singletons()
    out, orientation, steps = remove_singletons(cfg, ident(cfg))
    bad = list(steps)
    bad[0] = SurgeryStep(
        KIND_BOUNDARY_SUM,
        steps[0].curve,
        steps[0].family,
        steps[0].enter_side,
        steps[0].hops,
        steps[0].arcs,
        steps[0].crossings,
        steps[0].passages,
    )
    with pytest.raises(SurgeryError):
        replay_steps(cfg, ident(cfg), tuple(bad))


def test_replay_rejects_rerouted_hop():
    cfg = fx.genus2_one_crossing()
    _, _, steps = extend_to_filling(cfg, ident(cfg))
    s = steps[0]
    bad = SurgeryStep(
        s.kind, s.curve, s.family, s.enter_side, ((1, 1),), s.arcs, s.crossings,
        s.passages,
    )
    with pytest.raises(SurgeryError):
        replay_steps(cfg, ident(cfg), (bad,) + steps[1:])
