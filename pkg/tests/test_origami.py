"""Square-tiled construction, stratum data, cylinder provenance."""

import random

import pytest

import multicyl as m
from multicyl import fixtures as fx
from multicyl.curves import ConfigError
from multicyl.extension import Obstruction, extend_pair
from multicyl.origami import (
    HORIZONTAL,
    VERTICAL,
    Cylinder,
    HalfTranslationFlag,
    Origami,
    StratumSignature,
    check_origami,
    cylinder_decomposition,
    dumps_origami,
    loads_origami,
    origami_from_doc,
    origami_to_doc,
    stratum,
    thurston_veech,
)

from genconfig import random_config


def ident(cfg):
    return m.identity_orientation(cfg)


def as_cyclic(word):
    k = len(word)
    return min(tuple(word[i:] + word[:i]) for i in range(k))


# -- construction ---------------------------------------------------------------


def test_unit_torus():
    t1 = fx.torus_one_crossing()
    o = thurston_veech(t1, ident(t1))
    assert o.squares == (10,)
    assert o.h == {10: 10}
    assert o.v == {10: 10}


def test_two_square_torus():
    t2 = fx.torus_two_crossings()
    o = thurston_veech(t2, ident(t2))
    assert o.squares == (10, 11)
    assert o.h == {10: 11, 11: 10}
    assert o.v == {10: 11, 11: 10}


def test_h_cycles_equal_itineraries():
    cfg = fx.genus3_filling_pair()
    o = thurston_veech(cfg, ident(cfg))
    h_words = {as_cyclic(list(c)) for c in o.h_cycles()}
    a_words = {as_cyclic(list(c.itinerary)) for c in cfg.curves_of("A")}
    assert h_words == a_words
    v_words = {as_cyclic(list(c)) for c in o.v_cycles()}
    b_words = {as_cyclic(list(c.itinerary)) for c in cfg.curves_of("B")}
    assert v_words == b_words


def test_all_reversed_orientation_reverses_cycles():
    cfg = fx.genus3_filling_pair()
    o = thurston_veech(cfg, {c.id: -1 for c in cfg.curves})
    h_words = {as_cyclic(list(c)) for c in o.h_cycles()}
    rev_words = {as_cyclic(list(reversed(c.itinerary))) for c in cfg.curves_of("A")}
    assert h_words == rev_words


def test_flipping_second_family_cancels_negative_pair_sign():
    t2 = fx.torus_two_crossings()
    assert thurston_veech(t2, {1: 1, 2: -1}) == thurston_veech(t2, ident(t2))


def test_noncoherent_pair_flagged_with_certificate():
    f7 = fx.genus2_noncoherent_pair()
    got = thurston_veech(f7, ident(f7))
    assert isinstance(got, HalfTranslationFlag)
    assert got.infeasible is not None
    assert sorted(got.infeasible.crossings) == [11, 12, 21, 22]


def test_bad_orientation_on_orientable_config_flagged_without_certificate():
    cfg = fx.genus3_filling_pair()
    bad = dict(ident(cfg))
    bad[1] = -1
    got = thurston_veech(cfg, bad)
    assert isinstance(got, HalfTranslationFlag)
    assert got.infeasible is None


def test_non_filling_rejected():
    cfg = fx.genus2_one_crossing()
    with pytest.raises(ConfigError):
        thurston_veech(cfg, ident(cfg))


def test_missing_orientation_entry_rejected():
    t1 = fx.torus_one_crossing()
    with pytest.raises(ConfigError):
        thurston_veech(t1, {1: 1})


# -- stratum --------------------------------------------------------------------


def test_stratum_tori():
    for fixture in (fx.torus_one_crossing, fx.torus_two_crossings):
        cfg = fixture()
        sig, genus = stratum(thurston_veech(cfg, ident(cfg)))
        assert sig == StratumSignature(())
        assert genus == 1


def test_stratum_matches_configuration_genus():
    cfg = fx.genus3_filling_pair()
    sig, genus = stratum(thurston_veech(cfg, ident(cfg)))
    assert genus == cfg.genus == 3
    assert sig.orders == (2, 2)
    assert sig.total() == 2 * genus - 2


def test_stratum_of_extended_two_singleton_surface():
    out, orientation, _ = extend_pair(fx.genus2_two_singletons())
    o = thurston_veech(out, orientation)
    assert o.squares == (0, 1, 2, 3)
    assert sorted(len(c) for c in o.h_cycles()) == [2, 2]
    assert sorted(len(c) for c in o.v_cycles()) == [1, 1, 2]
    sig, genus = stratum(o)
    assert genus == 2
    assert sig.orders == (1, 1)


# -- cylinders ------------------------------------------------------------------


def test_cylinder_decomposition_figure_counts():
    cfg = fx.genus3_filling_pair()
    o = thurston_veech(cfg, ident(cfg))
    hs = cylinder_decomposition(o, HORIZONTAL)
    vs = cylinder_decomposition(o, VERTICAL)
    assert [c.core for c in hs] == [1, 2]
    assert [c.circumference for c in hs] == [3, 3]
    assert [c.core for c in vs] == [3, 4, 5]
    assert [c.circumference for c in vs] == [2, 2, 2]
    assert all(c.height == 1 for c in hs + vs)


def test_every_curve_is_a_cylinder_core():
    t1 = fx.torus_one_crossing()
    o = thurston_veech(t1, ident(t1))
    assert cylinder_decomposition(o, HORIZONTAL) == [Cylinder(1, 1)]
    assert cylinder_decomposition(o, VERTICAL) == [Cylinder(2, 1)]
    with pytest.raises(ConfigError):
        cylinder_decomposition(o, "diagonal")


def test_circumference_equals_crossing_count():
    cfg = fx.genus3_filling_pair()
    o = thurston_veech(cfg, ident(cfg))
    for cyl in cylinder_decomposition(o, HORIZONTAL) + cylinder_decomposition(
        o, VERTICAL
    ):
        assert cyl.circumference == len(cfg.curve(cyl.core).itinerary)


# -- structural checks and serialization ----------------------------------------


def test_check_origami_rejects_disconnected():
    o = Origami((1, 2), {1: 1, 2: 2}, {1: 1, 2: 2})
    with pytest.raises(ConfigError):
        check_origami(o)


def test_check_origami_rejects_non_permutation():
    o = Origami((1, 2), {1: 1, 2: 1}, {1: 2, 2: 1})
    with pytest.raises(ConfigError):
        check_origami(o)


def test_doc_round_trip():
    cfg = fx.genus3_filling_pair()
    o = thurston_veech(cfg, ident(cfg))
    assert origami_from_doc(origami_to_doc(o)) == o
    assert loads_origami(dumps_origami(o)) == o


def test_doc_without_provenance_loads_but_cannot_decompose():
    o = loads_origami('{"squares": [5], "h": [5], "v": [5]}')
    assert stratum(o) == (StratumSignature(()), 1)
    with pytest.raises(ConfigError):
        cylinder_decomposition(o, HORIZONTAL)


# -- random sweep ---------------------------------------------------------------


def test_random_extensions_build_consistent_origamis():
    rng = random.Random(60902)
    built = 0
    for _ in range(80):
        cfg = random_config(rng, max_curves=6)
        got = extend_pair(cfg)
        if isinstance(got, Obstruction):
            continue
        out, orientation, _ = got
        o = thurston_veech(out, orientation)
        assert isinstance(o, Origami)
        assert o.is_transitive()
        assert len(o.squares) == len(out.crossings)
        sig, genus = stratum(o)
        assert genus == out.genus
        assert sig.total() == 2 * genus - 2
        for direction, fam in ((HORIZONTAL, "A"), (VERTICAL, "B")):
            cyls = cylinder_decomposition(o, direction)
            assert sorted(c.core for c in cyls) == sorted(
                c.id for c in out.curves_of(fam)
            )
            for cyl in cyls:
                assert cyl.circumference == len(out.curve(cyl.core).itinerary)
        built += 1
    assert built >= 15
