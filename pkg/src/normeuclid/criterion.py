"""Search for (q1, q2, r) witnesses of non-norm-Euclideanity.

A witness certifies that the cyclic field of degree ell and conductor f is
not norm-Euclidean when

* q1 < q2 are the two smallest inert primes,
* r is coprime to q1*q2 with chi(r) = chi(q2)^-1,
* r*q2*k != f (mod q1^2) for k = 1..q1-1,
* (q1 - 1)(q2*r - 1) <= f.

Only prime r are searched.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Union

from .arith import (
    FieldClass,
    PowerResidueClassifier,
    is_prime,
    iter_conductors,
    iter_primes_in_segment,
    make_classifier,
    small_prime_list,
)
from .errors import InternalInconsistency, NotFound

DEFAULT_R_CAP = 10**6
INERT_SCAN_CAP = 10**6  # number of primes examined before giving up on q1, q2

SIZE_BOUND = "size"
SEARCH_CAP = "cap"


@dataclass(frozen=True)
class Witness:
    ell: int
    f: int
    q1: int
    q2: int
    r: int


@dataclass(frozen=True)
class SurvivorRecord:
    """A conductor for which no witness was found (a norm-Euclidean candidate)."""

    ell: int
    f: int
    reason: str  # SIZE_BOUND or SEARCH_CAP
    q1: Optional[int] = None
    q2: Optional[int] = None


Outcome = Union[Witness, SurvivorRecord]


@dataclass
class SweepSummary:
    ell: int
    lo: int
    hi: int
    witness_count: int = 0
    survivors: list = field(default_factory=list)
    max_r: int = 0
    elapsed: float = 0.0

    @property
    def conductor_count(self) -> int:
        return self.witness_count + len(self.survivors)


def _iter_primes():
    yield from small_prime_list(1 << 20)
    lo = (1 << 20) + 1
    while True:
        yield from iter_primes_in_segment(lo, lo + (1 << 22))
        lo += (1 << 22) + 1


def find_inert_pair(cls: PowerResidueClassifier) -> tuple[int, int]:
    """The two smallest primes p != f with chi(p) not in {0, 1}."""
    f, e = cls.f, cls.exponent
    found = []
    for count, p in enumerate(_iter_primes()):
        if count >= INERT_SCAN_CAP:
            break
        if p == f:
            continue
        if pow(p, e, f) != 1:
            found.append(p)
            if len(found) == 2:
                return found[0], found[1]
    raise NotFound(f"fewer than two inert primes among the first {INERT_SCAN_CAP} primes (f={f})")


def congruence_ok(f: int, q1: int, q2: int, r: int) -> bool:
    """r*q2*k != f (mod q1^2) for every k in 1..q1-1."""
    m = q1 * q1
    target = f % m
    step = r * q2 % m
    return all(step * k % m != target for k in range(1, q1))


def find_witness(field: FieldClass, r_cap: int = DEFAULT_R_CAP) -> Outcome:
    cls = make_classifier(field)
    f, e = field.f, cls.exponent
    q1, q2 = find_inert_pair(cls)
    for r in small_prime_list(max(r_cap, 2)):
        if r == q1 or r == q2:
            continue
        if (q1 - 1) * (q2 * r - 1) > f:
            return SurvivorRecord(field.ell, f, SIZE_BOUND, q1, q2)
        if r == f:
            continue
        if pow(r * q2 % f, e, f) != 1:
            continue
        if congruence_ok(f, q1, q2, r):
            return Witness(field.ell, f, q1, q2, r)
    return SurvivorRecord(field.ell, f, SEARCH_CAP, q1, q2)


def check_witness(w: Witness) -> bool:
    """Re-verify every witness condition from scratch."""
    try:
        cls = make_classifier(FieldClass(w.ell, w.f))
    except ValueError:
        return False
    f = w.f
    if (w.q1, w.q2) != find_inert_pair(cls):
        return False
    if not is_prime(w.r) or w.r % w.q1 == 0 or w.r % w.q2 == 0 or w.r % f == 0:
        return False
    s_r = cls.residue(w.r)
    s_q2 = cls.residue(w.q2)
    if s_r * s_q2 % f != 1:
        return False
    if not congruence_ok(f, w.q1, w.q2, w.r):
        return False
    return (w.q1 - 1) * (w.q2 * w.r - 1) <= f


def sweep_range(ell: int, lo: int, hi: int, r_cap: int = DEFAULT_R_CAP) -> list[Outcome]:
    """Criterion outcomes for every conductor in [lo, hi], in order of f.

    Each witness is re-checked before it is returned.
    """
    out: list[Outcome] = []
    for f in iter_conductors(ell, max(lo, 2), hi):
        if f == ell * ell:
            continue
        res = find_witness(FieldClass(ell, f), r_cap)
        if isinstance(res, Witness) and not check_witness(res):
            raise InternalInconsistency(f"witness {res} failed re-verification")
        out.append(res)
    return out


def _split(lo: int, hi: int, parts: int) -> list[tuple[int, int]]:
    width = max(1, (hi - lo + parts) // parts)
    ranges = []
    a = lo
    while a <= hi:
        b = min(hi, a + width - 1)
        ranges.append((a, b))
        a = b + 1
    return ranges


def sweep(
    ell: int,
    lo: int,
    hi: int,
    r_cap: int = DEFAULT_R_CAP,
    sink: Optional[Callable[[Outcome], None]] = None,
    workers: int = 1,
) -> SweepSummary:
    """Run :func:`find_witness` over every conductor in [lo, hi].

    Sub-ranges may be processed in parallel; results reach ``sink`` in
    increasing order of f regardless of ``workers``.
    """
    t0 = time.perf_counter()
    summary = SweepSummary(ell, lo, hi)
    ranges = _split(lo, hi, max(1, workers) * 4)
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            chunks: Iterable[list[Outcome]] = pool.map(
                sweep_range, [ell] * len(ranges), [a for a, _ in ranges], [b for _, b in ranges], [r_cap] * len(ranges)
            )
            _collect(summary, chunks, sink)
    else:
        _collect(summary, (sweep_range(ell, a, b, r_cap) for a, b in ranges), sink)
    summary.elapsed = time.perf_counter() - t0
    return summary


def _collect(summary: SweepSummary, chunks, sink) -> None:
    for chunk in chunks:
        for res in chunk:
            if isinstance(res, Witness):
                summary.witness_count += 1
                summary.max_r = max(summary.max_r, res.r)
            else:
                summary.survivors.append(res)
            if sink is not None:
                sink(res)
