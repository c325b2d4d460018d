"""Exact arithmetic in a number field given by a monic integer polynomial.

Norms are resultants computed over the integers after clearing denominators;
nothing in this module touches floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt, lcm
from typing import Optional, Sequence

from sympy import Poly, QQ, ZZ, symbols

from .arith import FieldClass, PowerResidueClassifier, make_classifier
from .errors import BetaNormMismatch, Exhaustion, InvalidField, ZeroElement
from .heilbronn import DEFAULT_FACTOR_LIMIT, IN_N, UNKNOWN, norm_set_member

_x = symbols("x")


def parse_coefficients(text: str) -> list[Fraction]:
    """'1,-1,-12,21,1,-5' or '-106/5,...' (descending degree) -> Fractions."""
    text = text.strip()
    for prefix in ("poly:", "elem:"):
        if text.startswith(prefix):
            text = text[len(prefix):]
    return [Fraction(tok.strip()) for tok in text.split(",") if tok.strip()]


@dataclass(frozen=True)
class FieldElement:
    """c0 + c1 x + ... + c_{n-1} x^{n-1}, ascending coefficients."""

    coefficients: tuple[Fraction, ...]

    @classmethod
    def from_descending(cls, coeffs: Sequence) -> "FieldElement":
        return cls(tuple(Fraction(c) for c in reversed(list(coeffs))))

    @classmethod
    def parse(cls, text: str) -> "FieldElement":
        return cls.from_descending(parse_coefficients(text))

    def is_zero(self) -> bool:
        return not any(self.coefficients)

    def _poly(self) -> Poly:
        return Poly(list(reversed(self.coefficients)) or [0], _x, domain=QQ)


@dataclass(frozen=True)
class NumberFieldSpec:
    """Cyclic field of prime degree ell, generated by a root of ``poly``.

    ``poly`` holds integer coefficients in descending order and must be monic
    and irreducible of degree ell.  When the conductor ``f`` is given, the
    discriminant must be f^(ell-1) times a square (the index squared); this is
    a sanity check, not a proof that the conductor is f.
    """

    poly: tuple[int, ...]
    f: Optional[int] = None

    def __post_init__(self):
        poly = tuple(int(c) for c in self.poly)
        object.__setattr__(self, "poly", poly)
        if len(poly) < 2 or poly[0] != 1:
            raise InvalidField("defining polynomial must be monic of positive degree")
        P = Poly(poly, _x, domain=ZZ)
        if not P.is_irreducible:
            raise InvalidField(f"{P.as_expr()} is reducible over Q")
        if self.f is None:
            return
        FieldClass(self.ell, self.f)
        disc = int(P.discriminant())
        quotient, rem = divmod(disc, self.f ** (self.ell - 1))
        if rem or quotient <= 0 or isqrt(quotient) ** 2 != quotient:
            raise InvalidField(f"discriminant {disc} is not f^(ell-1) times a square")

    @classmethod
    def parse(cls, text: str, f: Optional[int] = None) -> "NumberFieldSpec":
        coeffs = parse_coefficients(text)
        if any(c.denominator != 1 for c in coeffs):
            raise InvalidField("defining polynomial needs integer coefficients")
        return cls(tuple(int(c) for c in coeffs), f)

    @property
    def ell(self) -> int:
        return len(self.poly) - 1

    @property
    def classifier(self) -> PowerResidueClassifier:
        if self.f is None:
            raise InvalidField("no conductor attached to this field")
        return make_classifier(self.ell, self.f)

    def _modulus(self) -> Poly:
        return Poly(self.poly, _x, domain=QQ)

    def element(self, coeffs: Sequence) -> FieldElement:
        """Element from descending coefficients, reduced modulo the defining polynomial."""
        return self.reduce(FieldElement.from_descending(coeffs))

    def reduce(self, a: FieldElement) -> FieldElement:
        rem = a._poly().rem(self._modulus())
        asc = [Fraction(int(c.numerator), int(c.denominator)) for c in reversed(rem.all_coeffs())]
        asc += [Fraction(0)] * (self.ell - len(asc))
        return FieldElement(tuple(asc[: self.ell]))

    def mul(self, a: FieldElement, b: FieldElement) -> FieldElement:
        return self.reduce(_from_poly(a._poly() * b._poly()))

    def sub(self, a: FieldElement, b: FieldElement) -> FieldElement:
        return self.reduce(_from_poly(a._poly() - b._poly()))

    def norm(self, a: FieldElement) -> Fraction:
        return norm(self, a)


def _from_poly(p: Poly) -> FieldElement:
    return FieldElement(tuple(Fraction(int(c.numerator), int(c.denominator)) for c in reversed(p.all_coeffs())))



def norm(spec: NumberFieldSpec, elem: FieldElement) -> Fraction:
    """N(elem) = Res(poly, d*elem) / d^ell with d the common denominator."""
    if elem.is_zero():
        return Fraction(0)
    d = lcm(*(c.denominator for c in elem.coefficients))
    scaled = [int(c * d) for c in reversed(elem.coefficients)]
    while scaled and scaled[0] == 0:
        scaled.pop(0)
    G = Poly(scaled, _x, domain=ZZ)
    P = Poly(spec.poly, _x, domain=ZZ)
    res = int(P.resultant(G)) if G.degree() > 0 else scaled[0] ** spec.ell
    return Fraction(res, d**spec.ell)


@dataclass(frozen=True)
class MinimumBound:
    """Lower bound |witness_t| / f for the Euclidean minimum at alpha/beta."""

    bound: Fraction
    witness_t: int
    exhaustion_radius: int
    equality: Optional[bool] = None


def _candidates(residue: int, f: int):
    # residue in (0, f): walk t = residue + k f and residue - f - k f by |t|
    up, down = residue, residue - f
    while True:
        if abs(up) < abs(down):
            yield up
            up += f
        else:
            yield down
            down -= f


def lemma_lower_bound(
    spec: NumberFieldSpec,
    norm_alpha: int,
    factor_limit: int = DEFAULT_FACTOR_LIMIT,
    radius: Optional[int] = None,
) -> MinimumBound:
    """min{|t| : t a norm, t = norm_alpha (mod f)} / f, with its minimizing t."""
    f = spec.f
    cls = spec.classifier
    radius = 10**6 * f if radius is None else radius
    t0 = norm_alpha % f
    if t0 == 0:
        return MinimumBound(Fraction(0), 0, 0)
    for t in _candidates(t0, f):
        if abs(t) >= radius:
            break
        limit = factor_limit
        member = norm_set_member(cls, t, limit)
        while member.verdict == UNKNOWN:
            limit *= 10
            member = norm_set_member(cls, t, limit)
        if member.verdict == IN_N:
            return MinimumBound(Fraction(abs(t), f), t, abs(t))
    raise Exhaustion(f"no norm congruent to {norm_alpha} mod {f} below {radius}")


def minimum_lower_bound(spec: NumberFieldSpec, alpha: FieldElement, beta: FieldElement, **kw) -> MinimumBound:
    """Lower bound for m_K(alpha/beta) when N(beta) = f.

    ``equality`` is set when |N(alpha/beta)| already attains the bound.
    """
    if alpha.is_zero() or beta.is_zero():
        raise ZeroElement("alpha and beta must be nonzero")
    nb = norm(spec, beta)
    if nb != spec.f:
        raise BetaNormMismatch(f"N(beta) = {nb}, expected {spec.f}")
    na = norm(spec, alpha)
    if na.denominator != 1:
        raise ValueError(f"N(alpha) = {na} is not an integer; alpha is not integral")
    mb = lemma_lower_bound(spec, int(na), **kw)
    equal = abs(na) / spec.f == mb.bound
    return MinimumBound(mb.bound, mb.witness_t, mb.exhaustion_radius, equal)
