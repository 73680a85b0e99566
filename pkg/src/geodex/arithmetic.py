"""Exact integer arithmetic: Moore bounds, integer polynomials, cyclotomics.

Everything here is exact. Polynomials carry Python ints as coefficients and
spectra are kept symbolic as ``(factor, multiplicity)`` pairs, so traces of
adjacency powers come out as integers rather than rounded floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence

import gmpy2

PRIMALITY_TEST = "Baillie-PSW"


def moore_bound(d: int, k: int) -> int:
    """Return ``1 + d + d**2 + ... + d**k``."""
    if d < 1 or k < 0:
        raise ValueError(f"moore_bound needs d >= 1 and k >= 0, got d={d}, k={k}")
    if d == 1:
        return k + 1
    return (d ** (k + 1) - 1) // (d - 1)


def _geometric_mod(d: int, terms: int, m: int) -> tuple[int, int]:
    # (1 + d + ... + d**(terms-1) mod m, d**terms mod m)
    if terms == 0:
        return 0 % m, 1 % m
    if terms % 2:
        s, p = _geometric_mod(d, terms - 1, m)
        return (1 + d * s) % m, (p * d) % m
    s, p = _geometric_mod(d, terms // 2, m)
    return (s * (1 + p)) % m, (p * p) % m


def moore_bound_mod(d: int, k: int, m: int) -> int:
    """Return ``moore_bound(d, k) % m`` using O(log k) multiplications."""
    if m < 1:
        raise ValueError("modulus must be positive")
    if d < 1 or k < 0:
        raise ValueError(f"moore_bound_mod needs d >= 1 and k >= 0, got d={d}, k={k}")
    return _geometric_mod(d % m, k + 1, m)[0]


def is_probable_prime(n: int) -> bool:
    """Baillie-PSW test. No composite passing it is known."""
    if n < 2:
        return False
    return bool(gmpy2.is_bpsw_prp(n))


def divisors(n: int) -> list[int]:
    if n < 1:
        raise ValueError("divisors of a non-positive integer")
    small, large = [], []
    i = 1
    while i * i <= n:
        if n % i == 0:
            small.append(i)
            if i * i != n:
                large.append(n // i)
        i += 1
    return small + large[::-1]


def smallest_prime_factor(n: int) -> int:
    if n < 2:
        raise ValueError("no prime factor")
    if n % 2 == 0:
        return 2
    p = 3
    while p * p <= n:
        if n % p == 0:
            return p
        p += 2
    return n


def totient(n: int) -> int:
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def lcm(*values: int) -> int:
    out = 1
    for v in values:
        out = out * v // gcd(out, v)
    return out


@dataclass(frozen=True)
class IntPoly:
    """Dense integer polynomial, constant term first.

    The coefficient tuple never has a trailing zero; the zero polynomial is
    the empty tuple.
    """

    coeffs: tuple[int, ...]

    def __init__(self, coeffs: Iterable[int] = ()):
        c = [int(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def x(cls) -> IntPoly:
        return cls((0, 1))

    @classmethod
    def constant(cls, c: int) -> IntPoly:
        return cls((c,))

    @classmethod
    def monomial(cls, power: int, coeff: int = 1) -> IntPoly:
        return cls([0] * power + [coeff])

    @classmethod
    def parse(cls, text: str) -> IntPoly:
        """Parse the ``"c0 c1 ... cd"`` serialization."""
        return cls(int(tok) for tok in text.split())

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __add__(self, other: IntPoly | int) -> IntPoly:
        other = _as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return IntPoly(self[i] + other[i] for i in range(n))

    __radd__ = __add__

    def __neg__(self) -> IntPoly:
        return IntPoly(-c for c in self.coeffs)

    def __sub__(self, other: IntPoly | int) -> IntPoly:
        return self + (-_as_poly(other))

    def __rsub__(self, other: int) -> IntPoly:
        return _as_poly(other) - self

    def __mul__(self, other: IntPoly | int) -> IntPoly:
        other = _as_poly(other)
        if self.is_zero() or other.is_zero():
            return IntPoly()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPoly(out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> IntPoly:
        if e < 0:
            raise ValueError("negative polynomial power")
        result, base = IntPoly((1,)), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def divmod(self, other: IntPoly) -> tuple[IntPoly, IntPoly]:
        """Division by a polynomial whose leading coefficient is +-1."""
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        if other.leading not in (1, -1):
            raise ValueError("divisor must have leading coefficient +-1")
        rem = list(self.coeffs)
        dq = other.degree
        quot = [0] * max(len(rem) - dq, 0)
        for i in range(len(rem) - 1, dq - 1, -1):
            c = rem[i] * other.leading
            if c:
                quot[i - dq] = c
                for j, b in enumerate(other.coeffs):
                    rem[i - dq + j] -= c * b
        return IntPoly(quot), IntPoly(rem[:dq])

    __divmod__ = divmod

    def exact_div(self, other: IntPoly) -> IntPoly:
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ArithmeticError(f"{other} does not divide {self}")
        return q

    def __call__(self, x):
        acc = 0 if not isinstance(x, IntPoly) else IntPoly()
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def compose(self, inner: IntPoly) -> IntPoly:
        """Return ``self(inner(x))``."""
        return self(inner)

    def serialize(self) -> str:
        return " ".join(str(c) for c in self.coeffs) if self.coeffs else "0"

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            mag = abs(c)
            body = "" if (mag == 1 and i) else str(mag)
            if i == 1:
                body += "x"
            elif i > 1:
                body += f"x^{i}"
            sign = "-" if c < 0 else "+"
            terms.append((sign, body))
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out


def _as_poly(p: IntPoly | int) -> IntPoly:
    return p if isinstance(p, IntPoly) else IntPoly.constant(p)


X = IntPoly.x()


def geometric_poly(k: int) -> IntPoly:
    """``1 + x + ... + x**k``."""
    return IntPoly([1] * (k + 1))


@lru_cache(maxsize=None)
def cyclotomic(n: int) -> IntPoly:
    """The n-th cyclotomic polynomial, by dividing x**n - 1 by the proper ones."""
    if n < 1:
        raise ValueError("cyclotomic index must be positive")
    poly = IntPoly.monomial(n) - 1
    for d in divisors(n)[:-1]:
        poly = poly.exact_div(cyclotomic(d))
    return poly


def f_poly(n: int, k: int) -> IntPoly:
    """``cyclotomic(n)`` composed with ``1 + x + ... + x**k``."""
    if n < 1 or k < 1:
        raise ValueError("f_poly needs n >= 1 and k >= 1")
    return cyclotomic(n).compose(geometric_poly(k))


def power_sums(p: IntPoly, r_max: int) -> list[int]:
    """Sums of r-th powers of the roots of ``p`` for r = 1..r_max.

    Newton's identities on the monic normalisation. A leading coefficient of
    -1 is absorbed; anything else cannot be normalised over the integers.
    """
    if p.degree < 1:
        raise ValueError("power sums need a polynomial of degree >= 1")
    if p.leading == -1:
        p = -p
    if p.leading != 1:
        raise ValueError(f"polynomial is not monic: leading coefficient {p.leading}")
    n = p.degree
    # e_i with sign folded in: c[i] is the coefficient of x**(n-i)
    c = [p[n - i] for i in range(n + 1)]
    sums: list[int] = []
    for r in range(1, r_max + 1):
        acc = -r * c[r] if r <= n else 0
        for i in range(1, min(r, n + 1)):
            acc -= c[i] * sums[r - i - 1]
        sums.append(acc)
    return sums


@dataclass(frozen=True)
class FactoredSpectrum:
    """A characteristic polynomial kept as ``[(factor, multiplicity), ...]``."""

    factors: tuple[tuple[IntPoly, int], ...]

    def __init__(self, factors: Iterable[tuple[IntPoly, int]]):
        merged: dict[tuple[int, ...], int] = {}
        order: list[IntPoly] = []
        for poly, mult in factors:
            if mult < 0:
                raise ValueError("negative multiplicity")
            if mult == 0:
                continue
            if poly.coeffs not in merged:
                merged[poly.coeffs] = 0
                order.append(poly)
            merged[poly.coeffs] += mult
        object.__setattr__(
            self, "factors", tuple((p, merged[p.coeffs]) for p in order)
        )

    @property
    def dimension(self) -> int:
        return sum(p.degree * m for p, m in self.factors)

    def expand(self) -> IntPoly:
        out = IntPoly((1,))
        for p, m in self.factors:
            out = out * p**m
        return out

    def multiplicity(self, factor: IntPoly) -> int:
        for p, m in self.factors:
            if p == factor:
                return m
        return 0

    def __str__(self) -> str:
        parts = []
        for p, m in self.factors:
            text = str(p) if len(p.coeffs) == 2 and p.coeffs == (0, 1) else f"({p})"
            parts.append(text + (f"^{m}" if m != 1 else ""))
        return " * ".join(parts) if parts else "1"


def spectrum_trace(s: FactoredSpectrum, r: int) -> int:
    """Sum of r-th powers of all eigenvalues, counted with multiplicity."""
    if r < 1:
        raise ValueError("trace power must be >= 1")
    return sum(m * power_sums(p, r)[r - 1] for p, m in s.factors)


def charpoly_by_expansion(matrix: Sequence[Sequence[int]]) -> IntPoly:
    """``det(x*I - M)`` by Laplace expansion along rows, memoised on used columns.

    Exponential in n; meant as an independent check for n up to about 12.
    """
    n = len(matrix)
    entries = [
        [IntPoly((-matrix[i][j], 1 if i == j else 0)) for j in range(n)]
        for i in range(n)
    ]
    memo: dict[int, IntPoly] = {}

    def minor(row: int, used: int) -> IntPoly:
        if row == n:
            return IntPoly((1,))
        if used in memo:
            return memo[used]
        total = IntPoly()
        sign_skip = 0
        for col in range(n):
            if used >> col & 1:
                sign_skip += 1
                continue
            entry = entries[row][col]
            if entry.is_zero():
                continue
            # sign of the entry among remaining columns
            sign = -1 if (col - sign_skip) % 2 else 1
            total = total + entry * minor(row + 1, used | 1 << col) * sign
        memo[used] = total
        return total

    return minor(0, 0)
