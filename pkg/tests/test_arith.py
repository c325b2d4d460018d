import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from normeuclid.arith import (
    MODULUS_CAP,
    FieldClass,
    conductor_stream,
    factorize,
    is_prime,
    make_classifier,
    mul_mod,
    pow_mod,
    primes_in_segment,
)
from normeuclid.errors import InvalidField, SegmentTooLarge, ZeroClass

from oracles import DlogCharacter, sieve, trial_division_prime


def test_mul_mod_examples():
    m = 10**13 + 37
    assert mul_mod(0, 12345, m) == 0
    assert mul_mod(1, 12345, m) == 12345
    a, b = 10**9 + 7, 10**9 + 9
    assert mul_mod(a, b, m) == int(str(a * b)) % m


@given(st.integers(0, MODULUS_CAP - 1), st.integers(0, MODULUS_CAP - 1), st.integers(2, MODULUS_CAP - 1))
def test_mul_mod_big_int(a, b, m):
    a, b = a % m, b % m
    assert mul_mod(a, b, m) == a * b % m


def test_pow_mod_examples():
    assert pow_mod(7, 0, 31) == 1
    assert pow_mod(5, 6, 31) == 1
    assert pow_mod(2, 6, 31) == 2


def test_pow_mod_near_cap():
    rng = random.Random(20240601)
    for _ in range(10**4):
        m = rng.randrange(MODULUS_CAP - 2**40, MODULUS_CAP)
        b, e = rng.randrange(m), rng.randrange(2**64)
        assert pow_mod(b, e, m) == pow(b, e, m)


def test_is_prime_examples():
    assert not is_prime(0)
    assert not is_prime(1)
    assert is_prime(2)
    assert is_prime(59999999974303)
    n = 10**13 + 37
    assert is_prime(n) == trial_division_prime(n)


def test_is_prime_small_range():
    ps = set(sieve(200000))
    assert [n for n in range(200001) if is_prime(n)] == sorted(ps)


@pytest.mark.parametrize("n", [3215031751, 2152302898747, 3474749660383, 341550071728321, 3825123056546413051])
def test_is_prime_strong_pseudoprimes(n):
    # each is a strong pseudoprime to the bases of the tier below it
    assert not is_prime(n)


@settings(max_examples=300)
@given(st.integers(2, 10**12))
def test_is_prime_random(n):
    assert is_prime(n) == trial_division_prime(n)


def test_primes_in_segment_examples():
    assert primes_in_segment(2, 10) == [2, 3, 5, 7]
    assert primes_in_segment(90, 100) == [97]
    assert len(primes_in_segment(10**6, 2 * 10**6)) == 70435


def test_primes_in_segment_against_sieve():
    ref = sieve(3 * 10**6)
    for lo, hi in [(2, 2), (2, 3), (14, 16), (999983, 1000003), (1234567, 2999999)]:
        assert primes_in_segment(lo, hi) == [p for p in ref if lo <= p <= hi]


def test_primes_in_segment_high_window():
    lo = 10**13
    got = primes_in_segment(lo, lo + 2000)
    assert got == [n for n in range(lo, lo + 2001) if trial_division_prime(n)]


def test_segment_cap():
    with pytest.raises(SegmentTooLarge):
        primes_in_segment(2, 10**9 + 3)


def test_conductor_stream_examples():
    assert conductor_stream(5, 2, 50) == [11, 31, 41]
    assert conductor_stream(3, 2, 20) == [7, 13, 19]
    assert conductor_stream(97, 2, 194) == []


def test_make_classifier():
    assert make_classifier(FieldClass(5, 31)).exponent == 6
    assert make_classifier(FieldClass(3, 151)).exponent == 50
    with pytest.raises(InvalidField):
        FieldClass(5, 13)


@pytest.mark.parametrize(
    "ell,f",
    [(5, 13), (5, 5), (4, 13), (2, 13), (101, 203), (3, 9), (3, 25), (3, 1 << 62 + 1), (5, 21)],
)
def test_invalid_fields(ell, f):
    with pytest.raises(InvalidField):
        FieldClass(ell, f)


def test_classify_examples():
    cls = make_classifier(FieldClass(5, 31))
    assert cls.classify(31).is_zero
    assert repr(cls.classify(31)) == "Zero"
    assert cls.classify(5).residue == 1 and cls.classify(5).is_split
    c2 = cls.classify(2)
    assert c2.residue == 2 and c2.is_inert
    assert cls.is_split(1)
    with pytest.raises(ZeroClass):
        cls.is_split(62)


def test_inverse_pair_examples():
    cls = make_classifier(FieldClass(3, 151))
    assert cls.residue(13) == 118 and cls.residue(5) == 32
    assert cls.inverse_pair(13, 5)
    assert not cls.inverse_pair(7, 5)


@settings(max_examples=200)
@given(st.sampled_from(conductor_stream(7, 2, 10**6)), st.integers(1, 10**12), st.integers(1, 10**12))
def test_multiplicative(f, m, n):
    cls = make_classifier(FieldClass(7, f))
    if m % f and n % f:
        assert cls.residue(m * n) == cls.residue(m) * cls.residue(n) % f
        assert pow(cls.residue(m), 7, f) == 1


@pytest.mark.parametrize("ell", [3, 5, 7, 11, 13])
def test_kernel_size(ell):
    for f in conductor_stream(ell, 2, 10**4):
        if f == ell * ell:
            continue
        cls = make_classifier(FieldClass(ell, f))
        assert sum(cls.is_split(n) for n in range(1, f)) == (f - 1) // ell


@pytest.mark.parametrize("ell", [3, 5, 7])
def test_matches_discrete_log_character(ell):
    for f in conductor_stream(ell, 2, 2000):
        cls = make_classifier(FieldClass(ell, f))
        ref = DlogCharacter(ell, f)
        for n in range(1, f):
            assert cls.is_split(n) == ref.split(n)
        for r in range(1, 60):
            for q2 in (2, 3, 5, 7):
                if r % f and q2 % f:
                    assert cls.inverse_pair(r, q2) == ref.inverse_pair(r, q2)


def test_factorize():
    assert factorize(1) == ({}, 1)
    assert factorize(2**10 * 3**3 * 10007) == ({2: 10, 3: 3, 10007: 1}, 1)
    p, q = 1000003, 1000033
    assert factorize(p * q, limit=10**7) == ({p: 1, q: 1}, 1)
    # below the limit both factors are out of reach, so the composite stays
    assert factorize(p * q, limit=1000) == ({}, p * q)
