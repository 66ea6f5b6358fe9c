import io

import pytest

from conftest import space
from softinv.abstraction import canonical_key
from softinv.explorer import ResourceError, check_property, explore, load_states, save_states
from softinv.logic import LogicValue
from softinv.modelspec import builtin_model

FAST = ["inc_si", "inc_collapsed_no_si", "inc_si_over", "stack_si", "stack_no_si"]


def keys(sp):
    A = sp.model.abstraction_set
    return [canonical_key(s, A) for s in sp.structures()]


@pytest.mark.parametrize("name", FAST[:4])
def test_exploration_is_deterministic(name):
    again = explore(builtin_model(name))
    sp = space(name)
    assert keys(again) == keys(sp)
    assert again.stats.ca_states == sp.stats.ca_states
    assert again.stats.stored_states == sp.stats.stored_states
    assert [v.key for v in again.violations] == [v.key for v in sp.violations]


@pytest.mark.parametrize("name", FAST)
def test_fixpoint_is_stable(name):
    sp = space(name)
    again = explore(sp.model, initial=sp.structures())
    assert keys(again) == keys(sp)


@pytest.mark.parametrize("name", FAST)
def test_one_state_per_signature(name):
    sp = space(name)
    assert len(set(sp.states)) == sp.stats.ca_states == len(sp.structures())
    assert sp.stats.stored_states >= sp.stats.ca_states


def test_violation_trace_reaches_an_initial_state():
    sp = space("inc_collapsed_no_si")
    assert not sp.verified
    v = sp.violations[0]
    assert v.value is not LogicValue.TRUE
    trace = sp.trace(v)
    assert trace[0][0] == "init"
    assert "cas_ok" in [a for a, _ in trace]
    assert check_property(sp.model, sp.find(v.key)) is not LogicValue.TRUE


def test_verified_runs_have_no_violations():
    for name in ("inc_si", "inc_si_over", "stack_si"):
        sp = space(name)
        assert sp.verified and not sp.violations
        assert all(check_property(sp.model, s) is LogicValue.TRUE for s in sp.structures())


def test_persist_round_trip():
    sp = space("stack_si")
    buf = io.BytesIO()
    save_states(sp, buf)
    buf.seek(0)
    loaded = load_states(sp.model, buf)
    A = sp.model.abstraction_set
    assert [canonical_key(s, A) for s in loaded] == keys(sp)


def test_load_rejects_foreign_data():
    with pytest.raises(ValueError):
        load_states(builtin_model("inc_si"), io.BytesIO(b"not a store"))


def test_find_unknown_key():
    with pytest.raises(KeyError):
        space("inc_si").find("000000000000")


def test_state_cap_raises():
    with pytest.raises(ResourceError):
        explore(builtin_model("stack_si"), state_cap=2)
