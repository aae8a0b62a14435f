import pytest
from hypothesis import given
from hypothesis import strategies as st

from futgame.market import (
    DimensionError,
    Exogenous,
    HorizonExhausted,
    LinearImpact,
    MarketState,
    basis,
    step_prices,
)

IMPACT_50 = LinearImpact(alpha=(50,), drift=(0,), floor=(1,))


def test_linear_impact_moves_price_by_net_volume():
    state = MarketState(step=1, prices=(10000,))
    out = step_prices(state, ((2,), (-1,)), IMPACT_50, horizon=3)
    assert out == MarketState(step=2, prices=(10050,))
    assert state.prices == (10000,)


def test_linear_impact_clamps_at_floor():
    out = step_prices(MarketState(1, (30,)), ((-1,),), IMPACT_50, horizon=2)
    assert out.prices == (1,)


def test_exogenous_reads_next_row():
    op = Exogenous(path=((100, 50), (102, 47), (99, 48)))
    out = step_prices(MarketState(1, (100, 50)), ((1, -1), (0, 0)), op, horizon=3)
    assert out.prices == (102, 47)
    assert out.step == 2


def test_horizon_exhausted():
    op = Exogenous(path=((100,), (101,)))
    with pytest.raises(HorizonExhausted):
        step_prices(MarketState(2, (101,)), ((0,),), op, horizon=2)


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        step_prices(MarketState(1, (100,)), ((1, 0),), IMPACT_50, horizon=3)


def test_cash_prices_carried():
    op = Exogenous(path=((100,), (101,)))
    out = step_prices(MarketState(1, (100,), (98,)), ((0,),), op, 2, cash_path=((98,), (103,)))
    assert out.cash_prices == (103,)


@pytest.mark.parametrize("cash,fut,expected", [(102, 100, 2), (100, 100, 0), (95, 100, -5)])
def test_basis(cash, fut, expected):
    assert basis(cash, fut) == expected


def test_price_floor_enforced_on_state():
    with pytest.raises(ValueError):
        MarketState(1, (0,))


positions = st.integers(-3, 3)


@given(
    price=st.integers(1, 500),
    alpha=st.integers(0, 20),
    drift=st.integers(-30, 30),
    floor=st.integers(1, 50),
    controls=st.lists(positions, min_size=1, max_size=4),
    bump=st.integers(1, 3),
)
def test_impact_monotone_pure_and_floored(price, alpha, drift, floor, controls, bump):
    op = LinearImpact(alpha=(alpha,), drift=(drift,), floor=(floor,))
    state = MarketState(1, (price,))
    joint = tuple((c,) for c in controls)
    first = step_prices(state, joint, op, 5)
    assert first == step_prices(state, joint, op, 5)
    assert first.prices[0] >= max(1, floor)
    more = joint[:-1] + ((controls[-1] + bump,),)
    assert step_prices(state, more, op, 5).prices[0] >= first.prices[0]


@given(a=st.lists(positions, min_size=2, max_size=2), b=st.lists(positions, min_size=2, max_size=2))
def test_exogenous_ignores_controls(a, b):
    op = Exogenous(path=((10, 20), (11, 19), (12, 18)))
    state = MarketState(2, (11, 19))
    assert step_prices(state, (tuple(a),), op, 3) == step_prices(state, (tuple(b),), op, 3)
