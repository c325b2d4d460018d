"""Modular arithmetic, primality, prime enumeration and the order-ell character.

All moduli are capped at 2**62.  Python integers never overflow, so the
"widening" multiply is simply the exact product followed by a reduction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import isqrt
from typing import Iterator, Optional

import numpy as np

from .errors import InvalidField, SegmentTooLarge, ZeroClass

MODULUS_CAP = 1 << 62
SEGMENT_CAP = 10**9
# sieve block used internally so that a 1e9-wide segment never allocates 1e9 bytes at once
_BLOCK = 1 << 24

# (bound, bases): Miller-Rabin with these bases is exact for n < bound
_MR_BASES = (
    (2047, (2,)),
    (1373653, (2, 3)),
    (25326001, (2, 3, 5)),
    (3215031751, (2, 3, 5, 7)),
    (2152302898747, (2, 3, 5, 7, 11)),
    (3474749660383, (2, 3, 5, 7, 11, 13)),
    (341550071728321, (2, 3, 5, 7, 11, 13, 17)),
    (3825123056546413051, (2, 3, 5, 7, 11, 13, 17, 19, 23)),
    (1 << 64, (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)),
)
_TRIAL = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


def mul_mod(a: int, b: int, m: int) -> int:
    return (a * b) % m


def pow_mod(base: int, exp: int, m: int) -> int:
    """Left-to-right square-and-multiply built on :func:`mul_mod`."""
    if exp < 0:
        raise ValueError("negative exponent")
    result = 1 % m
    base %= m
    for bit in bin(exp)[2:]:
        result = mul_mod(result, result, m)
        if bit == "1":
            result = mul_mod(result, base, m)
    return result


def is_prime(n: int) -> bool:
    """Deterministic primality for 0 <= n < 2**64."""
    if n < 2:
        return False
    for p in _TRIAL:
        if n % p == 0:
            return n == p
    if n < 53 * 53:
        return True
    d, s = n - 1, 0
    while not d & 1:
        d >>= 1
        s += 1
    for bound, bases in _MR_BASES:
        if n < bound:
            break
    else:
        raise ValueError(f"{n} outside the deterministic range")
    for a in bases:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@lru_cache(maxsize=8)
def _sieve_array(limit: int) -> np.ndarray:
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    flags[4::2] = False
    for p in range(3, isqrt(limit) + 1, 2):
        if flags[p]:
            flags[p * p :: 2 * p] = False
    return np.flatnonzero(flags).astype(np.int64)


def small_primes(limit: int) -> np.ndarray:
    """All primes <= limit as an int64 array (cached per limit)."""
    # round up so nearby limits share one cache entry
    rounded = max(1024, 1 << (max(limit, 1) - 1).bit_length())
    arr = _sieve_array(rounded)
    return arr[: np.searchsorted(arr, limit, side="right")]


@lru_cache(maxsize=4)
def small_prime_list(limit: int) -> tuple[int, ...]:
    return tuple(small_primes(limit).tolist())


def _sieve_block(lo: int, hi: int, base: np.ndarray) -> np.ndarray:
    n = hi - lo + 1
    mask = np.ones(n, dtype=bool)
    if lo < 2:
        mask[: 2 - lo] = False
    if base.size:
        first = lo + (-lo) % base
        first = np.maximum(first, base * base)
        dense = base[base <= n]
        for p, s in zip(dense.tolist(), first[: dense.size].tolist()):
            mask[s - lo :: p] = False
        sparse_first = first[dense.size :]
        hits = sparse_first[sparse_first <= hi]
        mask[hits - lo] = False
    return np.flatnonzero(mask) + lo


def iter_primes_in_segment(lo: int, hi: int) -> Iterator[int]:
    """Stream the primes of [lo, hi] in ascending order, sieving block by block."""
    if not 0 <= lo or hi >= MODULUS_CAP:
        raise ValueError("segment outside [0, 2**62)")
    if hi - lo > SEGMENT_CAP:
        raise SegmentTooLarge(f"segment length {hi - lo} exceeds {SEGMENT_CAP}")
    if hi < lo:
        return
    base = small_primes(isqrt(hi))
    start = lo
    while start <= hi:
        stop = min(hi, start + _BLOCK - 1)
        yield from _sieve_block(start, stop, base).tolist()
        start = stop + 1


def primes_in_segment(lo: int, hi: int) -> list[int]:
    return list(iter_primes_in_segment(lo, hi))


def iter_conductors(ell: int, lo: int, hi: int) -> Iterator[int]:
    if not (ell >= 3 and ell % 2 and is_prime(ell)):
        raise InvalidField(f"degree {ell} is not an odd prime")
    for p in iter_primes_in_segment(lo, hi):
        if p % ell == 1:
            yield p


def conductor_stream(ell: int, lo: int, hi: int) -> list[int]:
    """Primes f in [lo, hi] with f = 1 (mod ell)."""
    return list(iter_conductors(ell, lo, hi))


@dataclass(frozen=True)
class FieldClass:
    """Cyclic field of odd prime degree ``ell`` and prime conductor ``f``."""

    ell: int
    f: int

    def __post_init__(self):
        ell, f = self.ell, self.f
        if not (3 <= ell <= 97 and is_prime(ell)):
            raise InvalidField(f"degree {ell} is not an odd prime in [3, 97]")
        if f == ell * ell:
            raise InvalidField(f"f = ell^2 = {f} is outside the supported domain")
        if not (2 <= f < MODULUS_CAP and is_prime(f)):
            raise InvalidField(f"conductor {f} is not a prime below 2^62")
        if f == ell or f % ell != 1:
            raise InvalidField(f"conductor {f} is not 1 mod {ell}")

    @property
    def discriminant(self) -> int:
        return self.f ** (self.ell - 1)


@dataclass(frozen=True)
class CharValue:
    """Character value: ``residue`` is None for Zero, else n^((f-1)/ell) mod f."""

    residue: Optional[int]

    @property
    def is_zero(self) -> bool:
        return self.residue is None

    @property
    def is_split(self) -> bool:
        return self.residue == 1

    @property
    def is_inert(self) -> bool:
        return self.residue is not None and self.residue != 1

    def __repr__(self):
        return "Zero" if self.residue is None else f"Root({self.residue})"


ZERO = CharValue(None)


@dataclass(frozen=True)
class PowerResidueClassifier:
    """The order-ell character mod f, represented by the canonical residue n^e mod f.

    Any two primitive order-ell characters have the same kernel, so every
    split/inert and inverse-pair question is answered without discrete logs.
    """

    field: FieldClass
    exponent: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "exponent", (self.field.f - 1) // self.field.ell)

    @property
    def f(self) -> int:
        return self.field.f

    @property
    def ell(self) -> int:
        return self.field.ell

    def residue(self, n: int) -> int:
        """n^e mod f; 0 exactly when f | n."""
        return pow(n % self.field.f, self.exponent, self.field.f)

    def classify(self, n: int) -> CharValue:
        s = self.residue(n)
        return ZERO if s == 0 else CharValue(s)

    def is_split(self, n: int) -> bool:
        s = self.residue(n)
        if s == 0:
            raise ZeroClass(f"{n} is divisible by {self.f}")
        return s == 1

    def inverse_pair(self, r: int, q2: int) -> bool:
        """True iff chi(r) = chi(q2)^-1, i.e. r*q2 is an ell-th power residue."""
        f = self.field.f
        if r % f == 0 or q2 % f == 0:
            raise ZeroClass(f"{r}*{q2} is divisible by {f}")
        return pow(r * q2 % f, self.exponent, f) == 1


def make_classifier(field_or_ell, f: Optional[int] = None) -> PowerResidueClassifier:
    """Build a classifier from a :class:`FieldClass` or from ``(ell, f)``."""
    fc = field_or_ell if isinstance(field_or_ell, FieldClass) else FieldClass(field_or_ell, f)
    return PowerResidueClassifier(fc)


def factorize(n: int, limit: int = 10**7) -> tuple[dict[int, int], int]:
    """Trial division by primes <= limit, then an exact primality test on the rest.

    Returns ``(factors, rest)`` where ``rest`` is 1 when ``factors`` is the
    complete factorization of |n|, and otherwise the composite cofactor that
    could not be split.
    """
    n = abs(n)
    if n == 0:
        raise ValueError("cannot factor 0")
    factors: dict[int, int] = {}
    for p in small_prime_list(1000):
        if p * p > n or p > limit:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            factors[p] = e
    else:
        if n > 1 and not is_prime(n) and limit > 1000:
            n = _trial_divide_large(n, limit, factors)
    if n > 1:
        if is_prime(n):
            factors[n] = factors.get(n, 0) + 1
            n = 1
    return dict(sorted(factors.items())), n


def _trial_divide_large(n: int, limit: int, factors: dict[int, int]) -> int:
    bound = min(limit, isqrt(n))
    primes = small_primes(bound)
    primes = primes[np.searchsorted(primes, 1000, side="right") :]
    chunk = 1 << 14
    i = 0
    while i < primes.size:
        bound = min(limit, isqrt(n))
        block = primes[i : i + chunk]
        block = block[block <= bound]
        if block.size == 0:
            break
        hits = block[np.int64(n) % block == 0] if n < (1 << 63) else block[[n % p == 0 for p in block.tolist()]]
        for p in hits.tolist():
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            factors[p] = e
        if hits.size and (n == 1 or is_prime(n)):
            break
        i += chunk
    return n
