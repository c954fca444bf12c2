"""Angle feasibility of sign tables, checked against brute enumeration."""

import dataclasses
import itertools
import random
from fractions import Fraction

import pytest

from multicyl import fixtures as fx
from multicyl.angles import (
    AngleOrder,
    Feasible,
    Infeasible,
    NotPairwiseCoherent,
    SignMatrix,
    angle_feasible,
    angle_order_holds,
    necessary_filter,
)
from multicyl.curves import ConfigError

from oracles import brute_force_angle_feasible


def fig8():
    return SignMatrix(fx.four_by_three_sign_matrix())


def feasible(matrix):
    return isinstance(angle_feasible(matrix), Feasible)


def random_entries(rng, m, n):
    return [[rng.choice((-1, 0, 1)) for _ in range(n)] for _ in range(m)]


def neg_transpose(mat):
    m, n = mat.shape
    return SignMatrix([[-mat.entries[i][j] for i in range(m)] for j in range(n)])


def flip_row(mat, i):
    rows = [list(r) for r in mat.entries]
    rows[i] = [-e for e in rows[i]]
    return SignMatrix(rows)


def flip_col(mat, j):
    rows = [list(r) for r in mat.entries]
    for row in rows:
        row[j] = -row[j]
    return SignMatrix(rows)


# -- sign matrix basics -------------------------------------------------------


def test_matrix_validation():
    with pytest.raises(ConfigError):
        SignMatrix([[1, 0], [1]])
    with pytest.raises(ConfigError):
        SignMatrix([[2]])
    with pytest.raises(ConfigError):
        SignMatrix([[1, 0]], row_ids=(1, 2))
    with pytest.raises(ConfigError):
        SignMatrix([[1, 0]], col_ids=(5,))


def test_matrix_tokens_roundtrip():
    mat = fig8()
    text = mat.to_tokens()
    assert text.splitlines()[0] == "+ + +"
    assert SignMatrix.from_tokens(text.splitlines()) == mat
    with pytest.raises(ConfigError):
        SignMatrix.from_tokens(["+ x"])
    with pytest.raises(ConfigError):
        SignMatrix.from_tokens(["", "  "])


def test_matrix_doc_roundtrip():
    mat = necessary_filter(fx.four_by_three_sign_config())
    assert SignMatrix.from_doc(mat.to_doc()) == mat


def test_matrix_labels():
    assert fig8().labels() == ("a1", "a2", "a3", "a4", "b1", "b2", "b3")
    mat = SignMatrix([[1]], row_ids=(7,), col_ids=(9,))
    assert mat.labels() == ("a7", "b9")


# -- feasibility decisions ----------------------------------------------------


def test_crossing_sign_pattern_infeasible():
    got = angle_feasible(fig8())
    assert isinstance(got, Infeasible)
    assert got.explored > 0
    assert 0 < len(got.trace) < 7
    assert not brute_force_angle_feasible(fig8().entries)


def test_all_plus_any_shape_feasible():
    for m, n in [(1, 1), (3, 4), (2, 5)]:
        got = angle_feasible(SignMatrix([[1] * n] * m))
        assert isinstance(got, Feasible)
        # one block per family: all rows share an angle, all columns too
        assert len(got.order.blocks) == 2


def test_equal_rows_always_feasible():
    rng = random.Random(3)
    for _ in range(20):
        row = [rng.choice((-1, 0, 1)) for _ in range(4)]
        mat = SignMatrix([row] * 3)
        got = angle_feasible(mat)
        assert isinstance(got, Feasible)
        assert angle_order_holds(mat, got.order)


def test_all_zero_matrix_merges_everything():
    got = angle_feasible(SignMatrix([[0, 0], [0, 0]]))
    assert isinstance(got, Feasible)
    assert got.order.blocks == (("a1", "a2", "b1", "b2"),)
    assert set(got.order.angles.values()) == {Fraction(0)}


def test_size_bound():
    with pytest.raises(ConfigError):
        angle_feasible(SignMatrix([[0] * 7] * 2))
    with pytest.raises(ConfigError):
        angle_feasible(SignMatrix([[0] * 2] * 7))


def test_bound_is_configurable():
    mat = SignMatrix([[0] * 7] * 2)
    got = angle_feasible(mat, bound=7)
    assert isinstance(got, Feasible)


def test_deterministic_witness():
    a = angle_feasible(SignMatrix([[1, -1], [0, 1]]))
    b = angle_feasible(SignMatrix([[1, -1], [0, 1]]))
    assert a == b


def test_exhaustive_3x2_matches_oracle():
    for combo in itertools.product((-1, 0, 1), repeat=6):
        entries = [combo[0:2], combo[2:4], combo[4:6]]
        mat = SignMatrix(entries)
        got = angle_feasible(mat)
        if isinstance(got, Feasible):
            assert brute_force_angle_feasible(entries), entries
            assert angle_order_holds(mat, got.order), entries
        else:
            assert not brute_force_angle_feasible(entries), entries


def test_random_4x3_matches_oracle():
    rng = random.Random(11)
    for _ in range(60):
        entries = random_entries(rng, 4, 3)
        assert feasible(SignMatrix(entries)) == brute_force_angle_feasible(
            entries
        ), entries


def test_padded_infeasible_core_stays_fast():
    rows = [list(r) + [0, 0, 0] for r in fx.four_by_three_sign_matrix()]
    rows += [[0] * 6, [0] * 6]
    got = angle_feasible(SignMatrix(rows))
    assert isinstance(got, Infeasible)


# -- the direct checker -------------------------------------------------------


def test_order_checker_accepts_witnesses():
    rng = random.Random(5)
    for _ in range(40):
        mat = SignMatrix(random_entries(rng, 3, 3))
        got = angle_feasible(mat)
        if isinstance(got, Feasible):
            assert angle_order_holds(mat, got.order)


def test_order_checker_rejects_tampering():
    mat = SignMatrix([[1, -1], [0, 1]])
    got = angle_feasible(mat)
    order = got.order
    # move one curve to a uniformly wrong angle
    broken = dict(order.angles)
    broken["b1"] = (broken["b1"] + Fraction(1, 2)) % 1
    assert not angle_order_holds(
        mat, AngleOrder(order.blocks, broken, order.merged)
    )
    # drop a curve
    assert not angle_order_holds(
        mat, AngleOrder(order.blocks[1:], order.angles, order.merged)
    )
    # inconsistent angles inside a block
    smat = SignMatrix([[0, 0], [0, 0]])
    whole = angle_feasible(smat).order
    skew = dict(whole.angles)
    skew["b2"] = Fraction(1, 4)
    assert not angle_order_holds(
        smat, AngleOrder(whole.blocks, skew, whole.merged)
    )


def test_order_checker_enforces_merge_rule():
    # a1 and a2 differ against b1, so they may not share an angle
    mat = SignMatrix([[1], [-1]])
    order = AngleOrder(
        (("a1", "a2"), ("b1",)),
        {"a1": Fraction(0), "a2": Fraction(0), "b1": Fraction(1, 4)},
        {"a1": "a1", "a2": "a1", "b1": "b1"},
    )
    assert not angle_order_holds(mat, order)


# -- metamorphic invariances --------------------------------------------------


def test_rotation_keeps_witness_valid():
    rng = random.Random(17)
    for _ in range(25):
        mat = SignMatrix(random_entries(rng, 3, 2))
        got = angle_feasible(mat)
        if not isinstance(got, Feasible):
            continue
        delta = Fraction(rng.randrange(1, 20), 20)
        spun = {c: (q + delta) % 1 for c, q in got.order.angles.items()}
        rotated = AngleOrder(got.order.blocks, spun, got.order.merged)
        assert angle_order_holds(mat, rotated)


def test_family_swap_transpose_negation():
    rng = random.Random(23)
    for _ in range(40):
        mat = SignMatrix(random_entries(rng, 3, 3))
        assert feasible(mat) == feasible(neg_transpose(mat))
    assert not feasible(neg_transpose(fig8()))


def test_single_curve_negation():
    rng = random.Random(29)
    for _ in range(40):
        mat = SignMatrix(random_entries(rng, 3, 3))
        i = rng.randrange(3)
        assert feasible(mat) == feasible(flip_row(mat, i))
        assert feasible(mat) == feasible(flip_col(mat, i))
    assert not feasible(flip_row(fig8(), 2))
    assert not feasible(flip_col(fig8(), 1))


# -- necessary filter ---------------------------------------------------------


def test_filter_torus():
    mat = necessary_filter(fx.torus_one_crossing())
    assert mat.entries == ((1,),)
    assert mat.row_ids == (1,)
    assert mat.col_ids == (2,)


def test_filter_incoherent_pair():
    got = necessary_filter(fx.genus2_opposite_signs())
    assert isinstance(got, NotPairwiseCoherent)
    assert (got.curve_a, got.curve_b) == (1, 2)
    assert sorted(got.crossings) == [10, 11]


def test_filter_recovers_sign_table():
    mat = necessary_filter(fx.four_by_three_sign_config())
    assert [list(r) for r in mat.entries] == fx.four_by_three_sign_matrix()
    assert mat.row_ids == (1, 2, 3, 4)
    assert mat.col_ids == (5, 6, 7)
    assert isinstance(angle_feasible(mat), Infeasible)


def test_filter_zero_for_disjoint_pairs():
    mat = necessary_filter(fx.genus2_two_singletons())
    assert mat.entries == ((0,),)
    assert isinstance(angle_feasible(mat), Feasible)


def test_filter_requires_two_families():
    cfg = fx.torus_one_crossing()
    lone = dataclasses.replace(
        cfg, curves=tuple(dataclasses.replace(c, family="A") for c in cfg.curves)
    )
    with pytest.raises(ConfigError):
        necessary_filter(lone)


def test_filter_requires_valid_input():
    cfg = dataclasses.replace(fx.torus_one_crossing(), genus=5)
    with pytest.raises(ConfigError):
        necessary_filter(cfg)
