import pytest
from hypothesis import given, settings, strategies as st

from unitindex import ringmod
from unitindex.ringmod import Context, mul, norm

from oracles import exact_power

PRIMES = [3, 5, 7, 13, 101, 65537, 4294967291]


@st.composite
def ring_case(draw):
    p = draw(st.sampled_from(PRIMES))
    ctx = Context(p, draw(st.integers(0, p - 1)))
    elem = st.tuples(st.integers(0, p - 1), st.integers(0, p - 1))
    return ctx, draw(elem), draw(elem)


def test_mul_examples():
    ctx = Context(5, 2)
    assert mul((1, 1), (1, 1), ctx) == (3, 2)
    assert mul((3, 2), (1, 1), ctx) == (2, 0)
    assert mul((4, 3), (1, 0), ctx) == (4, 3)


def test_mul_rejects_unreduced():
    with pytest.raises(ValueError):
        mul((5, 0), (1, 1), Context(5, 2))
    with pytest.raises(ValueError):
        mul((1, -1), (1, 1), Context(5, 2))


@pytest.mark.parametrize("e, p", [(4, 3), (6, 5), (13, 7), (100, 101)])
def test_pow_against_exact_integers(e, p):
    x, y = exact_power(1, 1, 2, e)
    assert ringmod.pow((1, 1), e, Context(p, 2 % p)) == (x % p, y % p)


def test_pow_examples():
    assert ringmod.pow((1, 1), 4, Context(3, 2)) == (2, 0)
    assert ringmod.pow((1, 1), 6, Context(5, 2)) == (4, 0)
    assert ringmod.pow((3, 4), 1, Context(5, 2)) == (3, 4)
    assert ringmod.pow((3, 4), 0, Context(5, 2)) == (1, 0)
    with pytest.raises(ValueError):
        ringmod.pow((1, 1), -1, Context(5, 2))


@given(ring_case(), st.integers(0, 10**4), st.integers(0, 10**4))
def test_exponent_law(case, i, j):
    ctx, b, _ = case
    assert ringmod.pow(b, i + j, ctx) == mul(ringmod.pow(b, i, ctx), ringmod.pow(b, j, ctx), ctx)


@given(ring_case())
def test_norm_is_multiplicative(case):
    ctx, a, b = case
    assert norm(mul(a, b, ctx), ctx) == norm(a, ctx) * norm(b, ctx) % ctx.p


@settings(max_examples=50)
@given(ring_case())
def test_pow_matches_repeated_mul(case):
    ctx, b, _ = case
    acc = (1, 0)
    for e in range(65):
        assert ringmod.pow(b, e, ctx) == acc
        acc = mul(acc, b, ctx)
