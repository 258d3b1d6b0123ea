"""Arithmetic modulo a prime p and in GF(p^2).

Residues are plain Python ints in ``range(p)``; the modulus travels
alongside as an explicit argument.  Elements of GF(p^2) are
:class:`QuadExtElem` instances ``a + b*sqrt(d)`` with ``d`` a fixed
quadratic nonresidue.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from math import isqrt

from .errors import InvalidModulus, NoRepresentation

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_probable_prime(n: int) -> bool:
    """Miller-Rabin with the first thirteen primes as fixed bases.

    Deterministic below 3.3e24; probabilistic beyond.
    """
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _check_odd_modulus(p):
    if p < 3 or p % 2 == 0:
        raise InvalidModulus(f"modulus must be an odd prime, got {p}")


def inv_mod(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise ZeroDivisionError(f"0 has no inverse modulo {p}")
    return pow(a, -1, p)


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) in {-1, 0, 1} by Euler's criterion."""
    _check_odd_modulus(p)
    r = pow(a % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def _tonelli_shanks(a, p):
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = quadratic_nonresidue(p)
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


def sqrt_mod(a: int, p: int) -> int | None:
    """Square root of ``a`` modulo ``p``, or None for a nonresidue.

    Of the two roots the one with even least residue is returned.
    """
    a %= p
    if a == 0:
        return 0
    if legendre(a, p) != 1:
        return None
    if p % 4 == 3:
        r = pow(a, (p + 1) // 4, p)
    else:
        r = _tonelli_shanks(a, p)
    return r if r % 2 == 0 else p - r


@lru_cache(maxsize=256)
def quadratic_nonresidue(p: int) -> int:
    """Smallest quadratic nonresidue modulo p."""
    _check_odd_modulus(p)
    d = 2
    while legendre(d, p) != -1:
        d += 1
    return d


def cube_root_of_unity(p: int, seed: int = 0) -> int:
    """A primitive cube root of unity mod p, as a^((p-1)/3) for seeded a."""
    _check_odd_modulus(p)
    if p % 3 != 1:
        raise InvalidModulus(f"no primitive cube root of unity modulo {p}")
    rng = random.Random(seed)
    e = (p - 1) // 3
    while True:
        z = pow(rng.randrange(2, p), e, p)
        if z != 1:
            return z


def quartic_residue_symbol(a: int, q: int) -> int:
    """(a/q)_4 for a prime q = 1 mod 4, returned as -1, 0, 1, or the raw
    residue a^((q-1)/4) mod q when that is a primitive 4th root of unity."""
    if q % 4 != 1:
        raise InvalidModulus(f"quartic symbol needs q = 1 mod 4, got {q}")
    r = pow(a % q, (q - 1) // 4, q)
    return -1 if r == q - 1 else r


def cornacchia(D: int, p: int) -> tuple[int, int] | None:
    """Solve 4p = U^2 + D*V^2 with U, V >= 0, or return None.

    ``-D`` must be a discriminant (0 or 1 mod 4).
    """
    _check_odd_modulus(p)
    if D <= 0 or (-D) % 4 not in (0, 1):
        raise ValueError(f"-{D} is not a discriminant")
    if D % p == 0:
        raise ValueError(f"p = {p} divides D = {D}")
    x0 = sqrt_mod(-D, p)
    if x0 is None:
        return None
    if x0 % 2 != D % 2:
        x0 = p - x0
    a, b = 2 * p, x0
    bound = isqrt(4 * p)
    while b > bound:
        a, b = b, a % b
    rem = 4 * p - b * b
    if rem % D:
        return None
    c = rem // D
    v = isqrt(c)
    if v * v != c:
        return None
    return b, v


@dataclass(frozen=True)
class CMInstance:
    """(D, p, U, V) with 4p = U^2 + D V^2; U and V stored nonnegative."""

    D: int
    p: int
    U: int
    V: int

    def __post_init__(self):
        if self.U < 0 or self.V < 0:
            raise ValueError("U and V are stored as nonnegative representatives")
        if 4 * self.p != self.U ** 2 + self.D * self.V ** 2:
            raise ValueError(f"4*{self.p} != {self.U}^2 + {self.D}*{self.V}^2")

    @classmethod
    def from_prime(cls, D: int, p: int) -> "CMInstance":
        uv = cornacchia(D, p)
        if uv is None:
            raise NoRepresentation(f"4*{p} is not of the form U^2 + {D} V^2")
        return cls(D, p, *uv)

    @property
    def trace_candidates(self) -> tuple[int, int]:
        return self.U, -self.U


@dataclass(frozen=True)
class QuadExtElem:
    """a + b*sqrt(d) in GF(p^2), where d is a quadratic nonresidue mod p."""

    a: int
    b: int
    d: int
    p: int

    @classmethod
    def base(cls, a: int, p: int, d: int | None = None) -> "QuadExtElem":
        if d is None:
            d = quadratic_nonresidue(p)
        return cls(a % p, 0, d, p)

    def _lift(self, other):
        if isinstance(other, QuadExtElem):
            if (other.p, other.d) != (self.p, self.d):
                raise ValueError("elements of different fields")
            return other
        return QuadExtElem(other % self.p, 0, self.d, self.p)

    def __add__(self, other):
        o = self._lift(other)
        return QuadExtElem((self.a + o.a) % self.p, (self.b + o.b) % self.p, self.d, self.p)

    __radd__ = __add__

    def __neg__(self):
        return QuadExtElem(-self.a % self.p, -self.b % self.p, self.d, self.p)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        p = self.p
        return QuadExtElem(
            (self.a * o.a + self.d * self.b * o.b) % p,
            (self.a * o.b + self.b * o.a) % p,
            self.d,
            p,
        )

    __rmul__ = __mul__

    def conjugate(self):
        return QuadExtElem(self.a, -self.b % self.p, self.d, self.p)

    def norm(self) -> int:
        return (self.a * self.a - self.d * self.b * self.b) % self.p

    def inverse(self):
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("zero has no inverse in GF(p^2)")
        ni = pow(n, -1, self.p)
        return QuadExtElem(self.a * ni % self.p, -self.b * ni % self.p, self.d, self.p)

    def __truediv__(self, other):
        return self * self._lift(other).inverse()

    def __rtruediv__(self, other):
        return self._lift(other) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = QuadExtElem(1, 0, self.d, self.p)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def in_base_field(self) -> bool:
        return self.b == 0

    def __eq__(self, other):
        if isinstance(other, int):
            return self.b == 0 and self.a == other % self.p
        if isinstance(other, QuadExtElem):
            return (self.a, self.b, self.d, self.p) == (other.a, other.b, other.d, other.p)
        return NotImplemented

    def __hash__(self):
        return hash((self.a, self.b, self.d, self.p))

    def __repr__(self):
        return f"QuadExtElem({self.a} + {self.b}*sqrt({self.d}) mod {self.p})"


def quadext_sqrt(a: int, p: int, d: int | None = None) -> QuadExtElem:
    """A square root of the base-field element ``a`` in GF(p^2).

    The result lies in GF(p) (b-part zero) exactly when (a/p) >= 0.
    """
    if d is None:
        d = quadratic_nonresidue(p)
    r = sqrt_mod(a, p)
    if r is not None:
        return QuadExtElem(r, 0, d, p)
    # a = d * (a/d) with a/d a residue
    b = sqrt_mod(a * inv_mod(d, p), p)
    return QuadExtElem(0, b, d, p)


def quadext_cube_roots(t: QuadExtElem) -> list[QuadExtElem]:
    """All cube roots of a nonzero t in GF(p^2); empty if t is not a cube.

    Adleman-Manders-Miller style: take t^k with 3k = 1 mod m, where
    p^2 - 1 = 3^e * m, then correct inside the 3-Sylow subgroup.
    """
    if t.is_zero():
        return [t]
    p, d = t.p, t.d
    order = p * p - 1
    e, m = 0, order
    while m % 3 == 0:
        m //= 3
        e += 1
    one = QuadExtElem(1, 0, d, p)
    if t ** (order // 3) != one:
        return []
    # generator of the 3-Sylow subgroup
    rng = random.Random(p)
    while True:
        c = QuadExtElem(rng.randrange(p), rng.randrange(1, p), d, p)
        if c ** (order // 3) != one:
            break
    g = c ** m
    omega = g ** (3 ** (e - 1))
    k = pow(3, -1, m) if m > 1 else 0
    r = t ** k
    err = r ** 3 / t  # lies in <g>, and is a cube there
    # discrete log of err in base g, digit by digit in base 3
    a_exp = 0
    g_inv = g.inverse()
    for i in range(e):
        probe = (err * g_inv ** a_exp) ** (3 ** (e - 1 - i))
        if probe == one:
            digit = 0
        elif probe == omega:
            digit = 1
        else:
            digit = 2
        a_exp += digit * 3 ** i
    if a_exp % 3:
        raise ArithmeticError("cube test passed but 3-Sylow part is not a cube")
    root = r * g_inv ** (a_exp // 3)
    roots = [root, root * omega, root * omega * omega]
    return roots
