from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from sullivan.algebra import AlgebraContext, Generator, Polynomial, word_length
from sullivan.errors import DegreeCapError, UnknownGeneratorError


@pytest.fixture
def ctx():
    return AlgebraContext([Generator(0, "a2", 2), Generator(1, "b3", 3), Generator(2, "c3", 3)], cap=8)


def test_koszul_sign_on_parse(ctx):
    assert ctx.format(ctx.parse("c3*b3")) == "-b3*c3"
    assert ctx.format(ctx.parse("b3*a2")) == "a2*b3"
    assert ctx.parse("b3*b3") == 0


def test_format_parse_round_trip(ctx):
    p = ctx.parse("3/2*a2 - a2^2 + b3*c3")
    assert ctx.format(p) == "3/2*a2 - a2^2 + b3*c3"
    assert ctx.parse(ctx.format(p)) == p


def test_odd_generators_square_to_zero(ctx):
    b3 = ctx.gen("b3")
    assert ctx.multiply(b3, b3).is_zero
    assert ctx.normalize([1, 1]) is None


def test_multiply_respects_the_cap(ctx):
    a2 = ctx.gen("a2")
    assert ctx.format(ctx.power(a2, 4)) == "a2^4"
    with pytest.raises(DegreeCapError):
        ctx.power(a2, 5)
    value, overflow = ctx.multiply_truncated(ctx.power(a2, 4), a2 + Polynomial.one())
    assert overflow
    assert ctx.format(value) == "a2^4"


def test_basis_examples(ctx):
    assert [ctx.format_monomial(m) for m in ctx.basis_of(5)] == ["a2*b3", "a2*c3"]
    assert [ctx.format_monomial(m) for m in ctx.basis_of(6)] == ["a2^3", "b3*c3"]
    assert [ctx.format_monomial(m) for m in ctx.basis_of(6, word_length=2)] == ["b3*c3"]
    assert ctx.basis_of(0) == [()]
    assert ctx.basis_of(1) == []
    with pytest.raises(DegreeCapError):
        ctx.basis_of(9)
    assert len(ctx.basis_of(9, limit=9)) == 2      # a2^3*b3, a2^3*c3


def test_basis_matches_brute_force(ctx):
    for k in range(0, 9):
        brute = set()
        for exps in product(range(5), range(2), range(2)):
            mono = tuple((g, e) for g, e in enumerate(exps) if e)
            if ctx.degree(mono) == k:
                brute.add(mono)
        assert set(ctx.basis_of(k)) == brute
        assert ctx.basis_of(k) == sorted(brute)


def test_unknown_generator(ctx):
    with pytest.raises(UnknownGeneratorError):
        ctx.generator("z")
    with pytest.raises(UnknownGeneratorError):
        ctx.parse("a2*z")


def test_context_validation():
    with pytest.raises(ValueError):
        AlgebraContext([Generator(1, "a", 2)], cap=4)
    with pytest.raises(ValueError):
        AlgebraContext([Generator(0, "a", 2), Generator(1, "a", 3)], cap=4)
    with pytest.raises(ValueError):
        Generator(0, "x", 2, circle=True)


def test_splits(ctx):
    p = ctx.parse("a2^2 + b3*c3 + 2*a2")
    assert sorted(ctx.word_split(p)) == [1, 2]
    assert sorted(ctx.degree_split(p)) == [2, 4, 6]
    assert ctx.uses(p, "c3") and not ctx.uses(ctx.gen("a2"), "c3")


# -------------------------------------------------- #
# graded commutativity and associativity
# -------------------------------------------------- #
CTX = AlgebraContext([Generator(0, "e1", 1), Generator(1, "a2", 2), Generator(2, "b3", 3),
                      Generator(3, "c3", 3), Generator(4, "f4", 4)], cap=12)
SMALL = [m for k in range(0, 5) for m in CTX.basis_of(k)]
monomials = st.sampled_from(SMALL)
coefs = st.fractions(min_value=-5, max_value=5, max_denominator=3)


@settings(derandomize=True, max_examples=1000, deadline=None)
@given(monomials, monomials, coefs, coefs)
def test_graded_commutativity(u, v, cu, cv):
    p, q = Polynomial.monomial(u, cu), Polynomial.monomial(v, cv)
    sign = -1 if (CTX.degree(u) * CTX.degree(v)) % 2 else 1
    assert CTX.multiply(p, q) == CTX.multiply(q, p).scale(sign)


@settings(derandomize=True, max_examples=1000, deadline=None)
@given(monomials, monomials, monomials)
def test_associativity(u, v, w):
    p, q, r = (Polynomial.monomial(m) for m in (u, v, w))
    assert CTX.multiply(CTX.multiply(p, q), r) == CTX.multiply(p, CTX.multiply(q, r))


@settings(derandomize=True, max_examples=1000, deadline=None)
@given(st.lists(st.sampled_from(range(5)), max_size=4))
def test_normalize_agrees_with_pairwise_products(factors):
    expected = Polynomial.one()
    for g in factors:
        expected = CTX.multiply(expected, CTX.gen(g), limit=16)
    norm = CTX.normalize(factors)
    if norm is None:
        assert expected.is_zero
    else:
        sign, mono = norm
        assert expected == Polynomial.monomial(mono, sign)
        assert word_length(mono) == len(factors)


@pytest.mark.parametrize("k", range(9))
def test_normalize_is_idempotent(k):
    for mono in CTX.basis_of(k):
        assert CTX.normalize(list(mono)) == (1, mono)
