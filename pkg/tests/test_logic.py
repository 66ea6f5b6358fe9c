import itertools

import numpy as np
import pytest

from softinv.logic import HALF, LogicValue, join_arrays, leq_arrays

F, H, T = LogicValue.FALSE, LogicValue.HALF, LogicValue.TRUE
ALL = (F, H, T)


def test_and_table():
    expected = {
        (F, F): F, (F, H): F, (F, T): F,
        (H, F): F, (H, H): H, (H, T): H,
        (T, F): F, (T, H): H, (T, T): T,
    }
    for (a, b), r in expected.items():
        assert (a & b) is r


def test_or_table():
    expected = {
        (F, F): F, (F, H): H, (F, T): T,
        (H, F): H, (H, H): H, (H, T): T,
        (T, F): T, (T, H): T, (T, T): T,
    }
    for (a, b), r in expected.items():
        assert (a | b) is r


def test_not_table():
    assert ~F is T and ~H is H and ~T is F


def test_half_and_not_half_is_half():
    assert (H & ~H) is H


def test_implies_and_iff():
    assert F.implies(H) is T
    assert H.implies(F) is H
    assert T.iff(T) is T
    assert H.iff(H) is H


@pytest.mark.parametrize("text,value", [("0", F), ("1", T), ("1/2", H), ("½", H), (" true ", T)])
def test_of_text(text, value):
    assert LogicValue.of(text) is value


def test_of_numbers_are_truth_values():
    assert LogicValue.of(1) is T
    assert LogicValue.of(0) is F
    assert LogicValue.of(0.5) is H
    assert LogicValue.of(True) is T


@pytest.mark.parametrize("bad", ["maybe", 2, -1, 0.25])
def test_of_rejects(bad):
    with pytest.raises(ValueError):
        LogicValue.of(bad)


def test_str():
    assert [str(v) for v in ALL] == ["0", "1/2", "1"]


def test_information_order_is_partial_order():
    for a in ALL:
        assert a.leq(a)
    for a, b in itertools.product(ALL, ALL):
        if a.leq(b) and b.leq(a):
            assert a is b
    for a, b, c in itertools.product(ALL, ALL, ALL):
        if a.leq(b) and b.leq(c):
            assert a.leq(c)


def test_half_is_top():
    assert all(v.leq(H) for v in ALL)
    assert not T.leq(F) and not F.leq(T)


def test_join_laws():
    for a, b in itertools.product(ALL, ALL):
        assert a.join(a) is a
        assert a.join(b) is b.join(a)
        assert a.leq(a.join(b)) and b.leq(a.join(b))


def test_array_helpers_agree_with_scalars():
    a = np.array([v.value for v, _ in itertools.product(ALL, ALL)], dtype=np.int8)
    b = np.array([w.value for _, w in itertools.product(ALL, ALL)], dtype=np.int8)
    j = join_arrays(a, b)
    le = leq_arrays(a, b)
    for i, (v, w) in enumerate(itertools.product(ALL, ALL)):
        assert LogicValue(int(j[i])) is v.join(w)
        assert bool(le[i]) == v.leq(w)
    assert j.dtype == np.int8 and (join_arrays(a, a) == a).all()
    assert HALF == H.value
