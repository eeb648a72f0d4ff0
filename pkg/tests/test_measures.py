from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

import oracles
from deltaidx import delta_bound_term, fact_sum_check, substring_complexity
from deltaidx.errors import InvalidArgumentError
from deltaidx.measures import kappa, lam


@pytest.mark.parametrize("text, d, delta", [
    (b"aaaa", [1, 1, 1, 1], 1),
    (b"abracadabra", [5, 7, 7, 7, 7, 6, 5, 4, 3, 2, 1], 5),
    (b"abab", [2, 2, 2, 1], 2),
    (b"abaababa", [2, 3, 4, 5, 4, 3, 2, 1], 2),
])
def test_profiles(text, d, delta):
    p = substring_complexity(text)
    assert p.d[1:].tolist() == d
    assert p.delta == delta
    assert p.n == len(text)


@given(st.binary(min_size=1, max_size=64).map(lambda b: bytes(x % 3 for x in b)))
def test_profile_matches_brute_force(text):
    p = substring_complexity(text)
    assert p.d[1:].tolist() == oracles.distinct_counts(text)
    assert p.delta == oracles.delta(text)
    assert Fraction(int(p.d[p.argmax_k]), p.argmax_k) == p.delta


@given(st.binary(min_size=1, max_size=200).map(lambda b: bytes(x % 4 for x in b)))
def test_fact_inequality(text):
    lhs, rhs = fact_sum_check(substring_complexity(text))
    assert float(lhs) <= rhs


def test_fact_values():
    lhs, rhs = fact_sum_check(substring_complexity(b"abracadabra"))
    assert lhs == Fraction(43, 4)
    assert rhs == pytest.approx(27.8115, abs=1e-4)
    lhs, _ = fact_sum_check(substring_complexity(b"a" * 256))
    assert float(lhs) == pytest.approx(1.996094, abs=1e-6)


def test_bound_term():
    assert delta_bound_term(1 << 20, 2, 1 << 10) == pytest.approx(5814.3456, rel=1e-6)
    # the max(1, .) floor
    assert delta_bound_term(16, 2, 8) == 8
    with pytest.raises(InvalidArgumentError):
        delta_bound_term(10, 2, 0)


@pytest.mark.parametrize("n, k, l", [(1, 10, 0), (2, 16, 4), (11, 28, 16), (1024, 58, 48),
                                     (65536, 88, 76), (75025, 88, 78)])
def test_kappa_lambda(n, k, l):
    assert kappa(n) == k
    assert lam(n, 1) == l


def test_lambda_exact_boundary():
    # (4/3)^4 = 256/81 and 16/9 < 256/81 but 16/9 >= (4/3)^2 = 16/9
    assert lam(16, 9) == 4
    assert lam(16, Fraction(9, 1)) == 4
    assert lam(3, 5) == 0


def test_empty_text_rejected():
    with pytest.raises(InvalidArgumentError):
        substring_complexity(b"")
