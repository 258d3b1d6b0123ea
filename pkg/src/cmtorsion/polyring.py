"""Dense univariate polynomials over GF(p).

A polynomial a_0 + a_1 X + ... + a_n X^n is stored as the tuple
(a_0, ..., a_n) of ints in range(p) with a_n != 0; the zero polynomial
is the empty tuple.  Instances are immutable.
"""

from __future__ import annotations

import random
import sys
from array import array
from collections import Counter
from functools import lru_cache

from .errors import NotSquarefree

_KRONECKER_THRESHOLD = 24


def _trim(c):
    n = len(c)
    while n and c[n - 1] == 0:
        n -= 1
    return c[:n]


def _kronecker_mul(a, b, p):
    # pack both operands into big integers, multiply once, unpack
    n = min(len(a), len(b))
    bound = n * (p - 1) ** 2
    size = len(a) + len(b) - 1
    if bound < 1 << 64 and sys.byteorder == "little":
        # 8-byte slots: packing and unpacking stay in C
        A = int.from_bytes(array("Q", a).tobytes(), "little")
        B = int.from_bytes(array("Q", b).tobytes(), "little")
        out = array("Q")
        out.frombytes((A * B).to_bytes(8 * size, "little"))
        return [c % p for c in out]
    width = (bound.bit_length() + 8) // 8
    A = int.from_bytes(b"".join(x.to_bytes(width, "little") for x in a), "little")
    B = int.from_bytes(b"".join(x.to_bytes(width, "little") for x in b), "little")
    raw = (A * B).to_bytes(width * size, "little")
    return [int.from_bytes(raw[width * i: width * (i + 1)], "little") % p for i in range(size)]


def _schoolbook_mul(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return [c % p for c in out]


def _mul_list(a, b, p):
    if not a or not b:
        return []
    if min(len(a), len(b)) >= _KRONECKER_THRESHOLD:
        return _kronecker_mul(a, b, p)
    return _schoolbook_mul(a, b, p)


@lru_cache(maxsize=128)
def _reversed_inverse(divisor, p, m):
    """Power series g with rev(divisor) * g = 1 mod X^m, by Newton iteration."""
    f = divisor[::-1]
    g = [pow(f[0], -1, p)]
    k = 1
    while k < m:
        k = min(2 * k, m)
        fg = _mul_list(f[:k], g, p)[:k]
        e = [(-c) % p for c in fg]
        e[0] = (e[0] + 2) % p
        g = _mul_list(g, e, p)[:k]
    return tuple(g)


class FpPoly:
    __slots__ = ("coeffs", "p")

    def __init__(self, coeffs, p: int):
        self.p = p
        self.coeffs = _trim(tuple(int(c) % p for c in coeffs))

    @classmethod
    def _raw(cls, coeffs, p):
        obj = cls.__new__(cls)
        obj.p = p
        obj.coeffs = _trim(tuple(coeffs))
        return obj

    @classmethod
    def x(cls, p: int) -> "FpPoly":
        return cls._raw((0, 1), p)

    @classmethod
    def constant(cls, c: int, p: int) -> "FpPoly":
        return cls((c,), p)

    @classmethod
    def from_roots(cls, roots, p: int) -> "FpPoly":
        f = cls.constant(1, p)
        for r in roots:
            f = f * cls((-r, 1), p)
        return f

    # -- basic properties -------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def lc(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_one(self) -> bool:
        return self.coeffs == (1,)

    def monic(self) -> "FpPoly":
        if not self.coeffs or self.coeffs[-1] == 1:
            return self
        inv = pow(self.coeffs[-1], -1, self.p)
        return FpPoly._raw(tuple(c * inv % self.p for c in self.coeffs), self.p)

    def derivative(self) -> "FpPoly":
        p = self.p
        return FpPoly._raw(tuple(i * c % p for i, c in enumerate(self.coeffs) if i), p)

    def __call__(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * x + c) % self.p
        return acc

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, FpPoly):
            return self.p == other.p and self.coeffs == other.coeffs
        if isinstance(other, int):
            return self.coeffs == _trim((other % self.p,))
        return NotImplemented

    def __hash__(self):
        return hash((self.coeffs, self.p))

    def __repr__(self):
        return f"FpPoly({list(self.coeffs)}, p={self.p})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                mono = "X" if i == 1 else f"X^{i}"
                terms.append(mono if c == 1 else f"{c}*{mono}")
        return " + ".join(terms)

    # -- ring operations --------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, FpPoly):
            if other.p != self.p:
                raise ValueError(f"modulus mismatch: {self.p} vs {other.p}")
            return other
        if isinstance(other, int):
            return FpPoly((other,), self.p)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        a, b = self.coeffs, o.coeffs
        if len(a) < len(b):
            a, b = b, a
        p = self.p
        out = list(a)
        for i, c in enumerate(b):
            out[i] = (out[i] + c) % p
        return FpPoly._raw(out, p)

    __radd__ = __add__

    def __neg__(self):
        p = self.p
        return FpPoly._raw(tuple(-c % p for c in self.coeffs), p)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        a, b = self.coeffs, o.coeffs
        if not a or not b:
            return FpPoly._raw((), self.p)
        if min(len(a), len(b)) >= _KRONECKER_THRESHOLD:
            out = _kronecker_mul(a, b, self.p)
        else:
            out = _schoolbook_mul(a, b, self.p)
        return FpPoly._raw(out, self.p)

    __rmul__ = __mul__

    def scale(self, c: int) -> "FpPoly":
        p = self.p
        return FpPoly._raw(tuple(x * c % p for x in self.coeffs), p)

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power of a polynomial")
        result = FpPoly.constant(1, self.p)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __divmod__(self, other):
        o = self._coerce(other)
        if o.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        p = self.p
        n = o.degree
        rem = list(self.coeffs)
        if len(rem) <= n:
            return FpPoly._raw((), p), self
        if n >= _KRONECKER_THRESHOLD and len(rem) - n >= _KRONECKER_THRESHOLD:
            return self._fast_divmod(o)
        inv = pow(o.lc, -1, p)
        divisor = o.coeffs
        q = [0] * (len(rem) - n)
        for k in range(len(rem) - 1, n - 1, -1):
            c = rem[k] % p
            if c == 0:
                continue
            c = c * inv % p
            q[k - n] = c
            base = k - n
            for i in range(n):
                rem[base + i] -= c * divisor[i]
            rem[k] = 0
        return FpPoly._raw(q, p), FpPoly._raw([c % p for c in rem[:n]], p)

    def _fast_divmod(self, o):
        # quotient from the reversed operands, then one multiplication for the remainder
        p = self.p
        m = len(self.coeffs) - o.degree
        g = _reversed_inverse(o.coeffs, p, m)
        qr = _mul_list(self.coeffs[::-1][:m], g, p)[:m]
        q = qr[::-1]
        qb = _mul_list(q, o.coeffs, p)
        n = o.degree
        r = [(a - b) % p for a, b in zip(self.coeffs[:n], qb[:n])]
        return FpPoly._raw(q, p), FpPoly._raw(r, p)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def powmod(self, e: int, modulus: "FpPoly") -> "FpPoly":
        """self**e reduced modulo ``modulus`` by square-and-multiply."""
        result = FpPoly.constant(1, self.p) % modulus
        base = self % modulus
        while e:
            if e & 1:
                result = (result * base) % modulus
            e >>= 1
            if e:
                base = (base * base) % modulus
        return result

    def compose_mod(self, inner: "FpPoly", modulus: "FpPoly") -> "FpPoly":
        """self(inner) mod modulus, by Horner's rule."""
        acc = FpPoly._raw((), self.p)
        for c in reversed(self.coeffs):
            acc = (acc * inner + c) % modulus
        return acc


def poly_gcd(f: FpPoly, g: FpPoly) -> FpPoly:
    """Monic gcd of f and g; gcd(f, 0) = monic(f)."""
    if f.p != g.p:
        raise ValueError(f"modulus mismatch: {f.p} vs {g.p}")
    while not g.is_zero():
        f, g = g, f % g
    return f.monic()


def poly_xgcd(f: FpPoly, g: FpPoly):
    """(d, s, t) with s*f + t*g = d = gcd(f, g), d monic."""
    p = f.p
    r0, r1 = f, g
    s0, s1 = FpPoly.constant(1, p), FpPoly._raw((), p)
    t0, t1 = FpPoly._raw((), p), FpPoly.constant(1, p)
    while not r1.is_zero():
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero():
        return r0, s0, t0
    inv = pow(r0.lc, -1, p)
    return r0.scale(inv), s0.scale(inv), t0.scale(inv)


def powmod_xp(g: FpPoly) -> FpPoly:
    """X^p mod g."""
    if g.degree < 1:
        raise ValueError("modulus polynomial must have degree >= 1")
    return FpPoly.x(g.p).powmod(g.p, g)


def resultant(f: FpPoly, g: FpPoly) -> int:
    """Res(f, g) by the Euclidean remainder sequence."""
    if f.is_zero() or g.is_zero():
        raise ValueError("resultant of a zero polynomial")
    if f.p != g.p:
        raise ValueError(f"modulus mismatch: {f.p} vs {g.p}")
    p = f.p
    acc = 1
    while True:
        m, n = f.degree, g.degree
        if n == 0:
            return acc * pow(g.lc, m, p) % p
        r = f % g
        if r.is_zero():
            return 0
        if (m * n) % 2:
            acc = -acc
        acc = acc * pow(g.lc, m - r.degree, p) % p
        f, g = g, r


def discriminant(f: FpPoly) -> int:
    """(-1)^(n(n-1)/2) Res(f, f') / lc(f), assuming p does not divide deg f."""
    n = f.degree
    if n < 1:
        raise ValueError("discriminant of a constant")
    if n % f.p == 0:
        raise ValueError("p divides the degree; f' has the wrong formal degree")
    r = resultant(f, f.derivative())
    if (n * (n - 1) // 2) % 2:
        r = -r
    return r * pow(f.lc, -1, f.p) % f.p


def is_squarefree(f: FpPoly) -> bool:
    if f.degree < 1:
        return True
    return poly_gcd(f, f.derivative()).degree == 0


def distinct_degree_factorization(f: FpPoly, max_degree: int | None = None):
    """[(g_d, d)] where g_d is the product of the degree-d monic irreducible
    factors of the squarefree polynomial f.  Stops after ``max_degree``."""
    p = f.p
    rest = f.monic()
    x = FpPoly.x(p)
    h = x % rest if rest.degree >= 1 else x
    out = []
    d = 0
    while rest.degree >= 2 * (d + 1):
        d += 1
        if max_degree is not None and d > max_degree:
            return out
        h = h.powmod(p, rest)
        g = poly_gcd(h - x, rest)
        if g.degree > 0:
            out.append((g, d))
            rest = rest // g
            h = h % rest if rest.degree >= 1 else h
    if rest.degree > 0 and (max_degree is None or rest.degree <= max_degree):
        out.append((rest, rest.degree))
    return out


def equal_degree_factorization(f: FpPoly, d: int, seed: int = 0) -> list[FpPoly]:
    """Split a product of distinct degree-d monic irreducibles (Cantor-Zassenhaus)."""
    p = f.p
    if p == 2:
        raise ValueError("characteristic 2 is not supported")
    f = f.monic()
    if f.degree == d:
        return [f]
    rng = random.Random(seed)
    exponent = (p ** d - 1) // 2
    stack, done = [f], []
    while stack:
        h = stack.pop()
        if h.degree == d:
            done.append(h)
            continue
        while True:
            a = FpPoly([rng.randrange(p) for _ in range(h.degree)], p)
            if a.degree < 1:
                continue
            g = poly_gcd(a, h)
            if 0 < g.degree < h.degree:
                break
            g = poly_gcd(a.powmod(exponent, h) - 1, h)
            if 0 < g.degree < h.degree:
                break
        stack.append(g)
        stack.append(h // g)
    return sorted(done, key=lambda q: q.coeffs)


def one_factor_of_degree(f: FpPoly, d: int, seed: int = 0) -> FpPoly:
    """A single monic irreducible factor of a product of degree-d irreducibles.

    Cheaper than a full split: after each random split only the smaller
    piece is kept.
    """
    p = f.p
    h = f.monic()
    if h.degree % d:
        raise ValueError(f"degree {h.degree} is not a multiple of {d}")
    rng = random.Random(seed)
    exponent = (p ** d - 1) // 2
    while h.degree > d:
        a = FpPoly([rng.randrange(p) for _ in range(h.degree)], p)
        if a.degree < 1:
            continue
        g = poly_gcd(a, h)
        if not 0 < g.degree < h.degree:
            g = poly_gcd(a.powmod(exponent, h) - 1, h)
        if 0 < g.degree < h.degree:
            other = h // g
            h = g if g.degree <= other.degree else other.monic()
    return h


def factor_squarefree(f: FpPoly, seed: int = 0) -> list[FpPoly]:
    """Monic irreducible factors of a squarefree f, sorted by (degree, coeffs)."""
    if not is_squarefree(f):
        raise NotSquarefree("polynomial has a repeated factor")
    out = []
    for g, d in distinct_degree_factorization(f):
        out.extend(equal_degree_factorization(g, d, seed))
    return sorted(out, key=lambda q: (q.degree, q.coeffs))


def roots_mod_p(f: FpPoly, seed: int = 0) -> list[int]:
    """All distinct roots of f in GF(p), ascending."""
    if f.is_zero():
        raise ValueError("the zero polynomial has every element as a root")
    if f.degree < 1:
        return []
    p = f.p
    linear = poly_gcd(powmod_xp(f) - FpPoly.x(p), f)
    if linear.degree < 1:
        return []
    factors = equal_degree_factorization(linear, 1, seed)
    return sorted((-q[0]) % p for q in factors)


def splitting_type(f: FpPoly, seed: int = 0) -> list[int]:
    """Degrees of the irreducible factors of a squarefree f, ascending."""
    if f.degree < 1:
        return []
    if not is_squarefree(f):
        raise NotSquarefree("splitting type requires a squarefree polynomial")
    degrees = []
    for g, d in distinct_degree_factorization(f):
        degrees.extend([d] * (g.degree // d))
    return sorted(degrees)


def splitting_counter(f: FpPoly, seed: int = 0) -> Counter:
    return Counter(splitting_type(f, seed))
