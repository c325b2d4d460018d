"""Explicit analytic bounds and conductor-bound certification.

Every quantity is evaluated in mpmath interval arithmetic.  Right-hand sides
are reported by their upper endpoint and conductors by their lower endpoint,
so a reported ``rhs < f`` is a proof rather than an approximation.
"""

from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass, field
from decimal import Decimal
from typing import Union

from mpmath import iv, mp, mpf

from .errors import DomainViolation

Real = Union[int, float, str, mpf]

DEFAULT_DPS = 30

# Burgess-type constants (k -> D(k)) for f >= 10^20, as printed.
D1_TABLE = {
    2: "36.9582", 3: "25.3026", 4: "21.3893", 5: "19.4132", 6: "18.2048",
    7: "17.3797", 8: "16.7819", 9: "16.3162", 10: "15.9414",
}  # q1 arbitrary; stored for reference, not used by the solvers
D2_TABLE = {
    2: "5.6360", 3: "3.8981", 4: "3.3703", 5: "3.1104", 6: "2.9523",
    7: "2.8439", 8: "2.7650", 9: "2.7030", 10: "2.6525",
}  # q1 > 100

GRH_TABLE = {
    3: 4 * 10**10, 5: 6 * 10**10, 7: 4 * 10**10, 11: 2 * 10**11, 13: 3 * 10**11,
    17: 6 * 10**11, 19: 8 * 10**11, 23: 2 * 10**11, 29: 3 * 10**12, 31: 3 * 10**12,
    37: 5 * 10**12, 41: 6 * 10**12, 43: 7 * 10**12, 47: 9 * 10**12, 53: 2 * 10**13,
    59: 2 * 10**13, 61: 2 * 10**13, 67: 3 * 10**13, 71: 3 * 10**13, 73: 3 * 10**13,
    79: 4 * 10**13, 83: 4 * 10**13, 89: 5 * 10**13, 97: 6 * 10**13,
}
UNCOND_TABLE = {
    3: 50, 5: 55, 7: 59, 11: 64, 13: 66, 17: 68, 19: 69, 23: 71, 29: 73, 31: 74,
    37: 75, 41: 76, 43: 77, 47: 77, 53: 78, 59: 79, 61: 80, 67: 80, 71: 81, 73: 81,
    79: 82, 83: 82, 89: 83, 97: 84,
}  # ell -> exponent j, bound 10^j
CONSTANT_TABLE = {
    6: "6.9236", 8: "4.1883", 10: "3.5764", 12: "3.3290", 14: "3.2019", 16: "3.1246",
    18: "3.0716", 20: "3.0320", 22: "3.0008", 24: "2.9754", 26: "2.9542", 28: "2.9363",
    30: "2.9208", 32: "2.9074", 34: "2.8956", 36: "2.8852", 38: "2.8759", 40: "2.8676",
    42: "2.8601", 44: "2.8533", 46: "2.8471", 48: "2.8415", 50: "2.8363", 52: "2.8315",
}  # p0 = 10^j -> C

GRH = "GRH"
UNCONDITIONAL = "Unconditional"


@contextmanager
def _precision(dps: int):
    saved = iv.prec
    iv.dps = dps
    try:
        yield
    finally:
        iv.prec = saved


def _iv(x: Real):
    if isinstance(x, float):
        x = repr(x)
    return iv.mpf(x)


def _up(x) -> mpf:
    """Exact upper endpoint of an interval as an mpf."""
    return mp.make_mpf(x._mpi_[1])


def _down(x) -> mpf:
    return mp.make_mpf(x._mpi_[0])


@dataclass(frozen=True)
class Checkpoint:
    label: str
    f: int
    rhs: mpf  # upper endpoint
    certified: bool


@dataclass
class BoundResult:
    ell: int
    regime: str
    threshold: int
    checkpoints: list = field(default_factory=list)

    @property
    def certified(self) -> bool:
        return bool(self.checkpoints) and all(c.certified for c in self.checkpoints)


def sci1(n: int) -> str:
    """One-significant-digit scientific notation: 60000000000 -> '6e10'."""
    s = str(n)
    if s.strip("0")[1:] or not s.startswith(s.strip("0")):
        raise ValueError(f"{n} is not d*10^j")
    return f"{s[0]}e{len(s) - 1}"


class BoundsEvaluator:
    """Certified evaluation of the bound functions at a fixed working precision."""

    def __init__(self, dps: int = DEFAULT_DPS):
        if dps < 30:
            raise ValueError("at least 30 significant digits are required")
        self.dps = dps
        with _precision(dps):
            self._A = iv.mpf(2) / 5 * iv.exp(iv.mpf(3) / 2)
            self._B = iv.mpf(1) / 5
            self._K = iv.mpf("2.7151")

    @property
    def A(self) -> mpf:
        return mp.make_mpf(self._A.mid._mpi_[0])

    @property
    def B(self) -> mpf:
        return mp.make_mpf(self._B.mid._mpi_[0])

    @property
    def K(self) -> mpf:
        return mp.make_mpf(self._K.mid._mpi_[0])

    # -- non-residue bounds ---------------------------------------------

    def _fXu(self, X, u):
        return 1 - iv.pi**2 / 3 * (1 / (2 * X**2) + 1 / (2 * X) + 1 / (1 - 1 / u) * (1 + iv.log(X)) / X)

    def eval_fXu(self, X: Real, u: Real) -> mpf:
        with _precision(self.dps):
            Xi, ui = _iv(X), _iv(u)
            if not (_down(Xi) > 16 and _down(ui) > 1):
                raise DomainViolation("f(X, u) needs X > 16 and u > 1")
            return mp.make_mpf(self._fXu(Xi, ui).mid._mpi_[0])

    def _g(self, p):
        A, B, K = self._A, self._B, self._K
        L = iv.log(p)
        F = iv.exp((2 * B * L + 2) / (A * L - 3))
        G = iv.exp((B * L + 1) / (A * L - 1))
        fhat = self._fXu(K * p ** (iv.mpf(1) / 4) / (2 * A), A * L)
        num = A * (1 + 5 / (2 * L)) * (1 + 5 * iv.sqrt(2) * G / (2 * L - 5))
        den = 15 * fhat * (1 - 1 / (A * L))
        return 2 * iv.pi * F * iv.sqrt(num / den)

    def _check_p(self, p: Real):
        pi = _iv(p)
        if _down(pi) < 10**6:
            raise DomainViolation("p must be at least 10^6")
        return pi

    def eval_g(self, p: Real) -> mpf:
        """Upper bound for g(p), the coefficient of p^(1/4) log p in the non-residue bound."""
        with _precision(self.dps):
            return _up(self._g(self._check_p(p)))

    def constant_C(self, p0: Real) -> Decimal:
        """g(p0) + 1/(p0^(1/4) log p0), rounded up to four decimals."""
        with _precision(self.dps):
            p = self._check_p(p0)
            c = self._g(p) + 1 / (p ** (iv.mpf(1) / 4) * iv.log(p))
            n = int(mp.ceil(_up(c * 10000)))
            return Decimal(n).scaleb(-4)

    def trevino_q1_bound(self, p: Real, quadratic_3_mod_4: bool = False) -> mpf:
        """Least non-residue bound 0.9 p^(1/4) log p (1.1 for quadratic chi, p = 3 mod 4)."""
        with _precision(self.dps):
            pi = _iv(p)
            if _down(pi) <= 3:
                raise DomainViolation("p must exceed 3")
            c = iv.mpf("1.1") if quadratic_3_mod_4 else iv.mpf("0.9")
            return _up(c * pi ** (iv.mpf(1) / 4) * iv.log(pi))

    def q2_bound(self, p: Real) -> mpf:
        """Second non-residue bound 2.8 p^(1/4) (log p)^2, valid for p >= 10^13."""
        with _precision(self.dps):
            pi = _iv(p)
            if _down(pi) < 10**13:
                raise DomainViolation("p must be at least 10^13")
            return _up(iv.mpf("2.8") * pi ** (iv.mpf(1) / 4) * iv.log(pi) ** 2)

    def q1q2_bound(self, p: Real) -> mpf:
        """Product bound 2.64 p^(1/2) (log p)^2 for odd-order chi, valid for p >= 10^30."""
        with _precision(self.dps):
            pi = _iv(p)
            if _down(pi) < 10**30:
                raise DomainViolation("p must be at least 10^30")
            return _up(iv.mpf("2.64") * iv.sqrt(pi) * iv.log(pi) ** 2)

    # -- GRH regime -----------------------------------------------------

    def grh_q1_bound(self, f: Real) -> mpf:
        with _precision(self.dps):
            return _up((iv.mpf("1.17") * iv.log(_iv(f)) - iv.mpf("6.36")) ** 2)

    def grh_q2_r_bound(self, ell: int, f: Real) -> mpf:
        with _precision(self.dps):
            return _up(iv.mpf("2.5") * (ell - 1) * iv.log(_iv(f)) ** 2)

    def grh_rhs(self, ell: int, f: Real) -> mpf:
        """max{(1.17 log f - 6.36)^2, (2.1/ell) f^(1/ell) log f} * (2.5 (ell-1) (log f)^2)^2."""
        with _precision(self.dps):
            fi = _iv(f)
            if not _down(fi) > 10**9:
                raise DomainViolation("the GRH bound needs f > 10^9")
            L = iv.log(fi)
            t1 = (iv.mpf("1.17") * L - iv.mpf("6.36")) ** 2
            t2 = iv.mpf("2.1") / ell * fi ** (iv.mpf(1) / ell) * L
            return _up(iv.mpf(max(_up(t1), _up(t2))) * (iv.mpf("2.5") * (ell - 1) * L**2) ** 2)

    def _grh_cubic_checkpoints(self, F: int) -> list:
        out = []
        for f in (F, 10 * F, 100 * F):
            q1 = self.grh_q1_bound(f)
            q2 = r = self.grh_q2_r_bound(3, f)
            with _precision(self.dps):
                widest = max(_up(3 * iv.mpf(r)), _up(10 * iv.mpf(q1)))
                comp = _up(iv.mpf(q1) * iv.mpf(q2) * iv.mpf(widest))
                special = _up((568 * 2 * iv.log(_iv(f))) ** 2)
            out.append(Checkpoint("q1q2max(3r,10q1)", f, comp, comp < f))
            out.append(Checkpoint("(568(ell-1)log f)^2", f, special, special < f))
        return out

    def _grh_checkpoints(self, ell: int, F: int) -> list:
        return [
            Checkpoint("grh_rhs", f, rhs, rhs < f)
            for f in (F, 10 * F, 100 * F)
            for rhs in [self.grh_rhs(ell, f)]
        ]

    def grh_bound(self, ell: int) -> BoundResult:
        """Conductor bound under GRH.

        For ell > 3 this is the least d*10^j > 10^9 at which grh_rhs < f holds
        at f, 10f and 100f.  For ell = 3 the composite cubic check is certified
        at 4*10^10.
        """
        if ell == 3:
            F = GRH_TABLE[3]
            return BoundResult(3, GRH, F, self._grh_cubic_checkpoints(F))
        for j in range(9, 40):
            for d in range(1, 10):
                F = d * 10**j
                if F <= 10**9:
                    continue
                cps = self._grh_checkpoints(ell, F)
                if all(c.certified for c in cps):
                    return BoundResult(ell, GRH, F, cps)
        raise RuntimeError(f"no GRH threshold found for ell={ell}")

    # -- unconditional regime -------------------------------------------

    @staticmethod
    def default_k(ell: int) -> int:
        return 4 if ell in (3, 5, 7) else 3

    def _check_uncond(self, f: Real, k: int):
        if k not in D2_TABLE:
            raise DomainViolation("k must lie in 2..10")
        fi = _iv(f)
        if _down(fi) < 10**20:
            raise DomainViolation("the unconditional bounds need f >= 10^20")
        return fi

    def r_bound(self, ell: int, f: Real, k: int) -> mpf:
        """(D2(k)(ell-1))^k f^((k+1)/(4k)) (log f)^(1/2)."""
        with _precision(self.dps):
            fi = self._check_uncond(f, k)
            D = iv.mpf(D2_TABLE[k])
            return _up((D * (ell - 1)) ** k * fi ** (iv.mpf(k + 1) / (4 * k)) * iv.sqrt(iv.log(fi)))

    def uncond_rhs(self, ell: int, f: Real, k: int) -> mpf:
        """c D2(k)^k (ell-1)^k f^((3k+1)/(4k)) (log f)^(5/2) with c = 8 for ell = 3, else 2.7."""
        with _precision(self.dps):
            fi = self._check_uncond(f, k)
            c = iv.mpf(8) if ell == 3 else iv.mpf("2.7")
            D = iv.mpf(D2_TABLE[k])
            L = iv.log(fi)
            return _up(c * D**k * iv.mpf(ell - 1) ** k * fi ** (iv.mpf(3 * k + 1) / (4 * k)) * L ** (iv.mpf(5) / 2))

    def _uncond_checkpoints(self, ell: int, F: int, k: int) -> list:
        out = []
        for f in (F, 10 * F, 100 * F):
            rhs = self.uncond_rhs(ell, f, k)
            out.append(Checkpoint("uncond_rhs", f, rhs, rhs < f))
            with _precision(self.dps):
                fi = _iv(f)
                L = iv.log(fi)
                q1q2_up = self.q1q2_bound(f)
                q1q2 = iv.mpf(q1q2_up)
                r = iv.mpf(self.r_bound(ell, f, k))
                if ell == 3:
                    # 3 q1 q2 r, from the product and r bounds, sits under the closed form
                    chain = _up(3 * q1q2 * r)
                    out.append(Checkpoint("3*q1q2*r <= rhs", f, chain, chain <= rhs))
                    side_closed = _up(24 * fi ** (iv.mpf(3) / 4) * L**3)
                    side = _up(10 * iv.mpf(self.trevino_q1_bound(f)) * q1q2)
                    out.append(Checkpoint("10*q1^2*q2 <= 24f^(3/4)(log f)^3", f, side, side <= side_closed))
                    out.append(Checkpoint("24f^(3/4)(log f)^3 < f", f, side_closed, side_closed < f))
                else:
                    cap = _down(iv.mpf("2.7") * iv.sqrt(fi) * L**2)
                    other = _up(fi ** (iv.mpf(1) / 5) * L * iv.mpf(self.q2_bound(f)))
                    out.append(Checkpoint("q1*q2 <= 2.7f^(1/2)(log f)^2", f, q1q2_up, q1q2_up <= cap))
                    out.append(Checkpoint("f^(1/5)log f*q2 <= 2.7f^(1/2)(log f)^2", f, other, other <= cap))
        return out

    def uncond_bound(self, ell: int, k: int = None) -> BoundResult:
        """Least 10^j (j >= 20) at which the unconditional conditions hold at f, 10f and 100f."""
        k = self.default_k(ell) if k is None else k
        for j in range(20, 200):
            F = 10**j
            if self.uncond_rhs(ell, F, k) >= F:
                continue
            cps = self._uncond_checkpoints(ell, F, k)
            if all(c.certified for c in cps):
                return BoundResult(ell, UNCONDITIONAL, F, cps)
        raise RuntimeError(f"no unconditional threshold found for ell={ell}")


_default = BoundsEvaluator()

eval_fXu = _default.eval_fXu
eval_g = _default.eval_g
constant_C = _default.constant_C
grh_rhs = _default.grh_rhs
grh_bound = _default.grh_bound
uncond_rhs = _default.uncond_rhs
uncond_bound = _default.uncond_bound
