"""Coherence decisions against fixtures, brute force, and metamorphic laws."""

import random

import pytest

import multicyl as m
from multicyl import fixtures as fx
from multicyl.coherence import (
    Infeasible,
    Separation,
    StarWitness,
    check_parallel_realizable,
    check_star,
    coherently_orientable,
    infeasible_certificate_holds,
    pair_coherent,
    pairwise_coherent,
    star_witness_holds,
)

from genconfig import random_config, random_orientation
from oracles import brute_force_orientable


def ident(cfg):
    return m.identity_orientation(cfg)


# -- fixed-orientation coherence ----------------------------------------------


def test_pair_coherent_examples():
    t1 = fx.torus_one_crossing()
    assert pair_coherent(t1, ident(t1), "A", "B")
    t2 = fx.torus_two_crossings()
    assert pair_coherent(t2, ident(t2), "A", "B")
    inc = fx.genus2_opposite_signs()
    for e1 in (1, -1):
        for e2 in (1, -1):
            assert not pair_coherent(inc, {1: e1, 2: e2}, "A", "B")


def test_pairwise_coherent_examples():
    assert pairwise_coherent(fx.torus_one_crossing(), "A", "B")
    assert pairwise_coherent(fx.four_by_three_sign_config(), "A", "B")
    assert not pairwise_coherent(fx.genus2_opposite_signs(), "A", "B")
    # the global obstruction is invisible pairwise
    assert pairwise_coherent(fx.genus2_noncoherent_pair(), "A", "B")


# -- orientability solver -------------------------------------------------------


def test_orientable_torus_identity():
    t1 = fx.torus_one_crossing()
    assert coherently_orientable(t1, ["A", "B"]) == {1: 1, 2: 1}


def test_orientable_single_negative_crossing():
    # one crossing is always coherent; the pair sign absorbs the -1
    t1n = fx.torus_one_crossing_negative()
    got = coherently_orientable(t1n, ["A", "B"])
    assert got == {1: 1, 2: 1}


def test_noncoherent_pair_infeasible_with_valid_certificate():
    f7 = fx.genus2_noncoherent_pair()
    got = coherently_orientable(f7, ["A", "B"])
    assert isinstance(got, Infeasible)
    assert infeasible_certificate_holds(f7, ["A", "B"], got)
    assert sorted(got.crossings) == [11, 12, 21, 22]


def test_infeasible_certificate_rejects_tampering():
    f7 = fx.genus2_noncoherent_pair()
    assert not infeasible_certificate_holds(f7, ["A", "B"], Infeasible((11, 12)))
    assert not infeasible_certificate_holds(f7, ["A", "B"], Infeasible(()))
    assert not infeasible_certificate_holds(
        f7, ["A", "B"], Infeasible((11, 12, 21))
    )


def test_solver_requires_two_families():
    with pytest.raises(m.ConfigError):
        coherently_orientable(fx.torus_one_crossing(), ["A"])


def test_solver_feasible_assignment_is_coherent():
    cfg = fx.genus3_filling_pair()
    got = coherently_orientable(cfg, ["A", "B"])
    assert not isinstance(got, Infeasible)
    assert pair_coherent(cfg, got, "A", "B")


def test_orientable_agrees_with_brute_force():
    rng = random.Random(271828)
    solver_hits = oracle_hits = 0
    for _ in range(150):
        cfg = random_config(rng, max_curves=8)
        got = coherently_orientable(cfg, ["A", "B"])
        want = brute_force_orientable(cfg, ["A", "B"])
        if isinstance(got, Infeasible):
            assert want is None, f"solver infeasible, oracle found {want}"
            assert infeasible_certificate_holds(cfg, ["A", "B"], got)
        else:
            solver_hits += 1
            assert want is not None
            assert pair_coherent(cfg, got, "A", "B")
        if want is not None:
            oracle_hits += 1
    assert solver_hits == oracle_hits
    assert 0 < solver_hits < 150  # both outcomes exercised


# -- condition on sub-multicurve sides ------------------------------------------


def test_star_ok_cases():
    t2 = fx.torus_two_crossings()
    assert check_star(t2, ident(t2), "A", "B") is None
    nonsep = fx.genus2_nonseparating_singleton()
    assert check_star(nonsep, ident(nonsep), "A", "B") is None
    fill = fx.genus3_filling_pair()
    assert check_star(fill, ident(fill), "A", "B") is None


def test_star_separating_curve_witness():
    sep = fx.genus2_separating_singleton()
    w = check_star(sep, ident(sep), "A", "B")
    assert isinstance(w, StarWitness)
    assert w.gamma == (1,)
    assert w.empty in {"A_L", "A_R"}
    assert star_witness_holds(sep, ident(sep), w, "A", "B")


def test_star_witness_rejects_tampering():
    sep = fx.genus2_separating_singleton()
    ori = ident(sep)
    w = check_star(sep, ori, "A", "B")
    bad = StarWitness(w.gamma, w.component, "B_L")
    assert not star_witness_holds(sep, ori, bad, "A", "B")
    nonsep = fx.genus2_nonseparating_singleton()
    assert not star_witness_holds(nonsep, ident(nonsep), w, "A", "B")


def test_star_mixed_family_subsets_checked():
    # two disjoint singletons: each alone is fine, the pair is fine,
    # but dropping one into a pocket breaks balance for a mixed subset
    pocket = fx.genus2_separated_pocket()
    w = check_star(pocket, ident(pocket), "A", "B")
    assert isinstance(w, StarWitness)
    assert star_witness_holds(pocket, ident(pocket), w, "A", "B")


def test_star_flip_covariance():
    rng = random.Random(31415)
    swap = {"A_L": "A_R", "A_R": "A_L", "B_L": "B_R", "B_R": "B_L"}
    checked_witness = False
    for _ in range(40):
        cfg = random_config(rng, max_curves=6)
        ori = random_orientation(rng, cfg)
        flipped = {c: -e for c, e in ori.items()}
        w1 = check_star(cfg, ori, "A", "B")
        w2 = check_star(cfg, flipped, "A", "B")
        if w1 is None:
            assert w2 is None
        else:
            checked_witness = True
            assert w2 is not None
            assert w1.gamma == w2.gamma
            assert w1.component.regions == w2.component.regions
            assert w2.empty == swap[w1.empty]
    assert checked_witness


def test_star_ok_with_empty_beta_means_nonseparating():
    rng = random.Random(1618)
    for _ in range(40):
        cfg = random_config(rng, max_curves=6)
        ori = random_orientation(rng, cfg)
        if check_star(cfg, ori, "A", "") is None:
            for c in cfg.curves_of("A"):
                assert not m.separates(cfg, c.id, [])


def test_star_guard_on_curve_count():
    cfg = fx.genus3_filling_pair()
    with pytest.raises(m.ConfigError):
        check_star(cfg, ident(cfg), "A", "B", max_curves=3)


# -- unoriented parallel criterion -----------------------------------------------


def test_parallel_realizable_examples():
    assert check_parallel_realizable(fx.torus_one_crossing(), "A", "B").realizable
    assert check_parallel_realizable(fx.genus3_filling_pair(), "A", "B").realizable

    v = check_parallel_realizable(fx.genus2_noncoherent_pair(), "A", "B")
    assert not v.realizable
    assert isinstance(v.obstruction, Infeasible)

    v = check_parallel_realizable(fx.genus2_separated_pocket(), "A", "B")
    assert not v.realizable
    assert v.obstruction == Separation(1, "B")


@pytest.mark.parametrize(
    "k,item",
    list(enumerate(fx.separation_suite())),
    ids=[f"sep{k}" for k in range(len(fx.separation_suite()))],
)
def test_separation_suite_obstructed(k, item):
    cfg, curve, family = item
    other = "B" if family == "A" else "A"
    v = check_parallel_realizable(cfg, "A", "B")
    assert not v.realizable
    assert v.obstruction == Separation(curve, other)


def test_parallel_verdict_docs():
    assert check_parallel_realizable(fx.torus_one_crossing(), "A", "B").to_doc() == {
        "realizable": True
    }
    doc = check_parallel_realizable(fx.genus2_separated_pocket(), "A", "B").to_doc()
    assert doc["obstruction"]["kind"] == "separation"
    doc = check_parallel_realizable(fx.genus2_noncoherent_pair(), "A", "B").to_doc()
    assert doc["obstruction"]["kind"] == "not-coherently-orientable"


def test_generator_emits_varied_configs():
    rng = random.Random(7)
    seen_singleton = seen_multi_region = False
    for _ in range(60):
        cfg = random_config(rng, max_curves=7)
        assert m.validate(cfg).ok
        if any(not c.itinerary for c in cfg.curves):
            seen_singleton = True
        if len(cfg.regions) > 1:
            seen_multi_region = True
    assert seen_singleton and seen_multi_region
