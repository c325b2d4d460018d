"""Norm-set membership and Heilbronn decomposition certificates.

Under class number one, a nonzero integer n is a norm from the ring of
integers iff ell divides v_p(n) for every inert prime p.  A decomposition
f = a + b with a, b > 0, chi(a) = 1 and neither a nor b a norm shows that the
field is not norm-Euclidean.  Certificates carry complete factorizations of
a and b so they can be checked without any factoring.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from math import prod
from typing import Optional

from .arith import FieldClass, PowerResidueClassifier, factorize, is_prime, make_classifier
from .criterion import Witness, check_witness, find_inert_pair
from .errors import DegenerateWitness, HypothesisViolation, InternalInconsistency

DEFAULT_FACTOR_LIMIT = 10**7

IN_N = "in"
NOT_IN_N = "not-in"
UNKNOWN = "unknown"

FROM_WITNESS = "witness"
BRUTE = "brute"

# Recorded with every certificate: membership in the norm set is decided by
# inert-prime valuations, which is exact when the class number is one.
ASSUMPTION = "class-number-one"


@dataclass(frozen=True)
class NormMembership:
    verdict: str
    obstruction: Optional[tuple[int, int]] = None  # (inert prime, valuation) for NOT_IN_N


def _membership_from_factors(cls: PowerResidueClassifier, factors) -> NormMembership:
    for p, v in factors:
        if p != cls.f and v % cls.ell and cls.residue(p) != 1:
            return NormMembership(NOT_IN_N, (p, v))
    return NormMembership(IN_N)


def norm_set_member(
    cls: PowerResidueClassifier, n: int, factor_limit: int = DEFAULT_FACTOR_LIMIT
) -> NormMembership:
    if n == 0:
        raise ValueError("n must be nonzero")
    factors, rest = factorize(n, factor_limit)
    if rest != 1:
        return NormMembership(UNKNOWN)
    return _membership_from_factors(cls, factors.items())


@dataclass(frozen=True)
class HeilbronnCertificate:
    ell: int
    f: int
    a: int
    b: int
    factor_a: tuple[tuple[int, int], ...]
    factor_b: tuple[tuple[int, int], ...]
    provenance: str  # "witness", "brute" or "cubic:<case>"

    def to_line(self) -> str:
        return (
            f"CERT ell={self.ell} f={self.f} a={self.a} b={self.b} "
            f"fa={_fmt_factors(self.factor_a)} fb={_fmt_factors(self.factor_b)} prov={self.provenance}"
        )

    @classmethod
    def from_line(cls, line: str) -> "HeilbronnCertificate":
        fields = dict(tok.split("=", 1) for tok in line.split()[1:])
        if not line.startswith("CERT ") or set(fields) != {"ell", "f", "a", "b", "fa", "fb", "prov"}:
            raise ValueError(f"malformed certificate line: {line!r}")
        return cls(
            int(fields["ell"]),
            int(fields["f"]),
            int(fields["a"]),
            int(fields["b"]),
            _parse_factors(fields["fa"]),
            _parse_factors(fields["fb"]),
            fields["prov"],
        )


def _fmt_factors(fs) -> str:
    return ",".join(f"{p}^{e}" for p, e in fs) if fs else "1"


_FACTOR_RE = re.compile(r"^(\d+)\^(\d+)$")


def _parse_factors(text: str) -> tuple[tuple[int, int], ...]:
    if text == "1":
        return ()
    out = []
    for item in text.split(","):
        m = _FACTOR_RE.match(item)
        if not m:
            raise ValueError(f"bad factor {item!r}")
        out.append((int(m.group(1)), int(m.group(2))))
    return tuple(out)


def verify_certificate(cert: HeilbronnCertificate) -> bool:
    """Check a certificate using only its stated factorizations and fresh character values."""
    try:
        cls = make_classifier(FieldClass(cert.ell, cert.f))
    except ValueError:
        return False
    if cert.a <= 0 or cert.b <= 0 or cert.a + cert.b != cert.f:
        return False
    for n, fs in ((cert.a, cert.factor_a), (cert.b, cert.factor_b)):
        primes = [p for p, _ in fs]
        if primes != sorted(set(primes)):
            return False
        if any(e < 1 or not is_prime(p) for p, e in fs):
            return False
        if prod(p**e for p, e in fs) != n:
            return False
    if cls.residue(cert.a) != 1:
        return False
    return all(
        _membership_from_factors(cls, fs).verdict == NOT_IN_N for fs in (cert.factor_a, cert.factor_b)
    )


def _build(ell: int, f: int, a: int, b: int, provenance: str, factor_limit: int) -> HeilbronnCertificate:
    fa, rest_a = factorize(a, factor_limit)
    fb, rest_b = factorize(b, factor_limit)
    if rest_a != 1 or rest_b != 1:
        raise InternalInconsistency(f"could not fully factor a={a} or b={b} below {factor_limit}")
    return HeilbronnCertificate(ell, f, a, b, tuple(fa.items()), tuple(fb.items()), provenance)


def witness_decomposition(w: Witness, factor_limit: int = DEFAULT_FACTOR_LIMIT) -> HeilbronnCertificate:
    """Turn a criterion witness into f = u*q2*r + q1*v and verify it."""
    if not check_witness(w):
        raise DegenerateWitness(f"{w} does not satisfy the witness conditions")
    f, q1, q2, r = w.f, w.q1, w.q2, w.r
    u = f * pow(q2 * r, -1, q1) % q1
    a = u * q2 * r
    v, rem = divmod(f - a, q1)
    if rem or v <= 0 or u == 0:
        raise DegenerateWitness(f"{w} gives u={u}, v={v}")
    try:
        cert = _build(w.ell, f, a, q1 * v, FROM_WITNESS, factor_limit)
    except InternalInconsistency as exc:
        raise DegenerateWitness(str(exc)) from exc
    if not verify_certificate(cert):
        raise DegenerateWitness(f"decomposition {a} + {q1 * v} of {w} failed verification")
    return cert


def minimal_r(cls: PowerResidueClassifier, q1: int, q2: int, limit: int = 10**8) -> int:
    """Smallest positive integer r, prime or not, with (r, q1 q2) = 1 and chi(r) = chi(q2)^-1."""
    f, e = cls.f, cls.exponent
    for r in range(2, limit):
        if r % q1 and r % q2 and r % f and pow(r * q2 % f, e, f) == 1:
            return r
    raise HypothesisViolation(f"no r below {limit}")


def cubic_inputs(f: int) -> tuple[int, int, int]:
    """(q1, q2, r) for the cyclic cubic field of conductor f, with r the true minimum."""
    cls = make_classifier(FieldClass(3, f))
    q1, q2 = find_inert_pair(cls)
    return q1, q2, minimal_r(cls, q1, q2)


def cubic_hypothesis_holds(f: int, q1: int, q2: int, r: int) -> bool:
    return q1 != 2 and f >= q1 * q2 * max(3 * r, 10 * q1)


# Decomposition prescribed by each leaf of the cubic case analysis, as
# (a, b) in terms of f = u q2 r + q1 v.  Every entry satisfies a + b = f
# identically except "2d-ii-sq", which relies on r = (u+q1)^2 and
# q2 = u/2 + q1, both forced on that branch.
CUBIC_FORMULAS = {
    "0": lambda u, v, q1, q2, r: (u * q2 * r, q1 * v),
    # f = (u+q1) q2 r + q1 (v - q2 r)
    "1": lambda u, v, q1, q2, r: ((u + q1) * q2 * r, q1 * (v - q2 * r)),
    "2a": lambda u, v, q1, q2, r: ((u + q1) * q2 * r, q1 * (v - q2 * r)),
    "2b": lambda u, v, q1, q2, r: ((u + q1) * q2 * r, q1 * (v - q2 * r)),
    # f = (u+2q1) q2 r + q1 (v - 2 q2 r)
    "2c-i": lambda u, v, q1, q2, r: ((u + 2 * q1) * q2 * r, q1 * (v - 2 * q2 * r)),
    "2c-ii": lambda u, v, q1, q2, r: ((u + 2 * q1) * (q2 - q1) * r, q1 * (v + r * (u + 2 * (q1 - q2)))),
    "2c-ii-exc": lambda u, v, q1, q2, r: ((u + 4 * q1) * q2 * r, q1 * (v - 4 * q2 * r)),
    "2c-iii": lambda u, v, q1, q2, r: ((r - q1) * q2 * (u + 2 * q1), q1 * (v + q2 * (u + 2 * q1 - 2 * r))),
    "2c-iii-eq": lambda u, v, q1, q2, r: ((r - q1) * q2 * (u + q1), q1 * (v + q2 * (u + q1 - r))),
    "2d-i": lambda u, v, q1, q2, r: ((u + 2 * q1) * q2 * r, q1 * (v - 2 * q2 * r)),
    # f = (u+q1)(q2-q1) r + q1 (v + r(u+q1-q2))
    "2d-ii": lambda u, v, q1, q2, r: ((u + q1) * (q2 - q1) * r, q1 * (v + r * (u + q1 - q2))),
    "2d-ii-sq": lambda u, v, q1, q2, r: (2 * u * q2 * q2 * (u + q1), q1 * (v - u * q2 * (u + q1))),
    "2d-iii": lambda u, v, q1, q2, r: ((u + q1) * (q2 - q1) * r, q1 * (v + r * (u + q1 - q2))),
}


def _cubic_label(cls: PowerResidueClassifier, f: int, q1: int, q2: int, r: int, u: int, v: int) -> str:
    """Leaf of the cubic case analysis reached by (u, v)."""
    if v % q1:
        return "0"
    if u % 2:
        return "1"
    s = u + q1
    if not is_prime(s):
        return "2a"
    chi_s = cls.residue(s)
    if chi_s == 1:
        return "2b"
    half = u // 2 + q1
    chi_half = cls.residue(half) if is_prime(half) else 1
    if chi_s == cls.residue(r):
        if chi_half == 1:
            return "2c-i"
        if chi_half == cls.residue(q2):
            return "2c-ii" if u != 2 * (q2 - q1) else "2c-ii-exc"
        return "2c-iii" if r != half else "2c-iii-eq"
    if chi_s == cls.residue(q2):
        if chi_half == 1:
            return "2d-i"
        if chi_half == cls.residue(q2):
            return "2d-ii" if r < s * s else "2d-ii-sq"
        return "2d-iii"
    raise InternalInconsistency(f"u + q1 = {s} has a character value outside {{1, chi(q2), chi(r)}}")


def _cubic_case(cls: PowerResidueClassifier, f: int, q1: int, q2: int, r: int) -> tuple[str, int, int]:
    """Walk the case analysis for cubic fields; return (label, a, b) with f = a + b."""
    u = f * pow(q2 * r, -1, q1) % q1
    v = (f - u * q2 * r) // q1
    label = _cubic_label(cls, f, q1, q2, r, u, v)
    return (label, *CUBIC_FORMULAS[label](u, v, q1, q2, r))


def cubic_decompose(
    f: int, q1: int, q2: int, r: int, factor_limit: int = DEFAULT_FACTOR_LIMIT
) -> HeilbronnCertificate:
    """Decomposition prescribed by the cubic case analysis when q1 != 2 and f >= q1 q2 max(3r, 10 q1).

    ``(q1, q2, r)`` must equal :func:`cubic_inputs` for ``f``; r is the minimum
    over all positive integers, not only primes.
    """
    if q1 == 2:
        raise HypothesisViolation("the cubic case analysis requires q1 != 2")
    try:
        cls = make_classifier(FieldClass(3, f))
    except ValueError as exc:
        raise HypothesisViolation(str(exc)) from exc
    if (q1, q2) != find_inert_pair(cls):
        raise HypothesisViolation(f"({q1}, {q2}) is not the inert pair of f={f}")
    if r != minimal_r(cls, q1, q2):
        raise HypothesisViolation(f"r={r} is not minimal for f={f}")
    if not cubic_hypothesis_holds(f, q1, q2, r):
        raise HypothesisViolation(f"f={f} < q1 q2 max(3r, 10 q1)")
    label, a, b = _cubic_case(cls, f, q1, q2, r)
    if a <= 0 or b <= 0 or a + b != f:
        raise InternalInconsistency(f"case {label}: f={f} gives a={a}, b={b}")
    cert = _build(3, f, a, b, f"cubic:{label}", factor_limit)
    if not verify_certificate(cert):
        raise InternalInconsistency(f"case {label}: certificate for f={f} failed verification")
    return cert


def brute_decompose(
    field: FieldClass, a_max: int, factor_limit: int = DEFAULT_FACTOR_LIMIT
) -> Optional[HeilbronnCertificate]:
    """First a in 1..a_max giving a Heilbronn decomposition, or None.

    Unknown memberships are skipped, never counted as non-norms.
    """
    cls = make_classifier(field)
    f = field.f
    for a in range(1, min(a_max, f - 1) + 1):
        if cls.residue(a) != 1:
            continue
        ma = norm_set_member(cls, a, factor_limit)
        if ma.verdict != NOT_IN_N:
            continue
        mb = norm_set_member(cls, f - a, factor_limit)
        if mb.verdict != NOT_IN_N:
            continue
        cert = _build(field.ell, f, a, f - a, BRUTE, factor_limit)
        if not verify_certificate(cert):
            raise InternalInconsistency(f"brute decomposition {a} + {f - a} failed verification")
        return cert
    return None

