"""Independent reference implementations used only by the tests.

Each one is deliberately naive and shares no code with the package.
"""

from fractions import Fraction
from math import isqrt

import sympy


def sieve(limit):
    flags = bytearray([1]) * (limit + 1)
    flags[0:2] = b"\x00\x00"
    for p in range(2, isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = bytearray(len(range(p * p, limit + 1, p)))
    return [i for i, b in enumerate(flags) if b]


def primes_between(lo, hi):
    """Primes in [lo, hi] by trial division against a small-prime sieve."""
    base = sieve(isqrt(hi) + 1)
    out = []
    for n in range(max(lo, 2), hi + 1):
        if all(n % p for p in base if p * p <= n):
            out.append(n)
    return out


def trial_division_prime(n):
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def factor(n):
    n = abs(n)
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


class DlogCharacter:
    """Order-ell character built from an explicit discrete-log table."""

    def __init__(self, ell, f):
        self.ell, self.f = ell, f
        g = sympy.primitive_root(f)
        self.log = {}
        x = 1
        for k in range(f - 1):
            self.log[x] = k
            x = x * g % f
        assert len(self.log) == f - 1

    def index(self, n):
        """chi(n) = zeta^index(n); None for n divisible by f."""
        n %= self.f
        return None if n == 0 else self.log[n] % self.ell

    def split(self, p):
        return self.index(p) == 0

    def inverse_pair(self, r, q2):
        return (self.index(r) + self.index(q2)) % self.ell == 0


def in_norm_set(ell, f, n):
    """n in the norm set, class number one assumed: inert valuations divisible by ell."""
    e = (f - 1) // ell
    return all(v % ell == 0 for p, v in factor(n).items() if p != f and pow(p, e, f) != 1)


def matrix_norm(poly_desc, elem_asc):
    """Norm as det of multiplication-by-elem on the power basis."""
    n = len(poly_desc) - 1
    monic = [Fraction(c) for c in poly_desc]
    def mul_x(vec):
        # vec ascending coefficients of length n; multiply by x and reduce
        top = vec[-1]
        shifted = [Fraction(0)] + vec[:-1]
        return [shifted[i] - top * monic[n - i] for i in range(n)]
    cols = []
    basis = [Fraction(1)] + [Fraction(0)] * (n - 1)
    for _ in range(n):
        col = [Fraction(0)] * n
        for k, c in enumerate(elem_asc):
            v = basis
            for _ in range(k):
                v = mul_x(v)
            col = [a + c * b for a, b in zip(col, v)]
        cols.append(col)
        basis = mul_x(basis)
    M = sympy.Matrix(n, n, lambda i, j: sympy.Rational(cols[j][i].numerator, cols[j][i].denominator))
    d = M.det()
    return Fraction(int(d.p), int(d.q))
