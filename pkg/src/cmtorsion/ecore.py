"""Short Weierstrass curves Y^2 = X^3 + a4 X + a6 over GF(p).

Points are affine ``(x, y)`` tuples of residues; the identity is ``None``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import InvalidModulus, UnsupportedInvariant
from .modarith import inv_mod, legendre, sqrt_mod
from .polyring import FpPoly, resultant

INFINITY = None

NAIVE_COUNT_LIMIT = 10 ** 6


@dataclass(frozen=True)
class Curve:
    p: int
    a4: int
    a6: int
    j: int | None = None
    c: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "a4", self.a4 % self.p)
        object.__setattr__(self, "a6", self.a6 % self.p)
        if (4 * self.a4 ** 3 + 27 * self.a6 ** 2) % self.p == 0:
            raise ValueError(f"singular curve Y^2 = X^3 + {self.a4}X + {self.a6} mod {self.p}")

    def rhs(self, x: int) -> int:
        return (x * x * x + self.a4 * x + self.a6) % self.p

    def rhs_poly(self) -> FpPoly:
        return FpPoly((self.a6, self.a4, 0, 1), self.p)

    def contains(self, P) -> bool:
        if P is INFINITY:
            return True
        x, y = P
        return (y * y - self.rhs(x)) % self.p == 0

    def j_invariant(self) -> int:
        p = self.p
        num = 1728 * 4 * pow(self.a4, 3, p)
        den = 4 * pow(self.a4, 3, p) + 27 * self.a6 * self.a6
        return num * inv_mod(den, p) % p

    def __str__(self):
        return f"Y^2 = X^3 + {self.a4}*X + {self.a6} over GF({self.p})"


def curve_from_j(j: int, c: int, p: int) -> Curve:
    """E(j, c): Y^2 = X^3 + a4(j) c^2 X + a6(j) c^3 with
    a4(j) = 3j/(1728 - j) and a6(j) = 2j/(1728 - j)."""
    j %= p
    c %= p
    if j == 0 or j == 1728 % p:
        raise UnsupportedInvariant(f"j = {j} (0 or 1728 mod {p}) is not supported")
    if c == 0:
        raise ValueError("twisting parameter c must be nonzero")
    k = inv_mod(1728 - j, p)
    a4 = 3 * j * k * c * c % p
    a6 = 2 * j * k * pow(c, 3, p) % p
    return Curve(p, a4, a6, j=j, c=c)


def twist(E: Curve, c: int) -> Curve:
    """E(j, c) rebuilt from the provenance of E."""
    if E.j is None:
        raise UnsupportedInvariant("curve was not built from a j-invariant")
    return curve_from_j(E.j, c, E.p)


def neg(P, E: Curve):
    if P is INFINITY:
        return P
    return (P[0], -P[1] % E.p)


def add(P, Q, E: Curve):
    if not (E.contains(P) and E.contains(Q)):
        raise ValueError("point is not on the curve")
    return _add(P, Q, E)


def _add(P, Q, E):
    if P is INFINITY:
        return Q
    if Q is INFINITY:
        return P
    p = E.p
    x1, y1 = P
    x2, y2 = Q
    if x1 == x2:
        if (y1 + y2) % p == 0:
            return INFINITY
        lam = (3 * x1 * x1 + E.a4) * inv_mod(2 * y1, p) % p
    else:
        lam = (y2 - y1) * inv_mod(x2 - x1, p) % p
    x3 = (lam * lam - x1 - x2) % p
    return (x3, (lam * (x1 - x3) - y1) % p)


def scalar_mul(k: int, P, E: Curve):
    """[k]P by double-and-add; negative k multiplies -P."""
    if not E.contains(P):
        raise ValueError("point is not on the curve")
    if k < 0:
        k, P = -k, neg(P, E)
    R = INFINITY
    while k:
        if k & 1:
            R = _add(R, P, E)
        P = _add(P, P, E)
        k >>= 1
    return R


def random_point(E: Curve, rng: random.Random):
    """A uniformly chosen affine x with a rational ordinate (random sign)."""
    p = E.p
    while True:
        x = rng.randrange(p)
        y = sqrt_mod(E.rhs(x), p)
        if y is None:
            continue
        if rng.random() < 0.5:
            y = -y % p
        return (x, y)


def order_check(E: Curve, m: int, trials: int = 8, seed: int = 0) -> bool:
    """True iff [m]P is the identity for ``trials`` seeded random points."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = random.Random(seed)
    for _ in range(trials):
        if scalar_mul(m, random_point(E, rng), E) is not INFINITY:
            return False
    return True


def naive_count(E: Curve) -> int:
    """#E(GF(p)) = p + 1 + sum_x (x^3 + a4 x + a6 / p), by full enumeration."""
    p = E.p
    if p > NAIVE_COUNT_LIMIT:
        raise ValueError(f"naive_count is limited to p <= {NAIVE_COUNT_LIMIT}")
    is_square = bytearray(p)
    for y in range(1, (p + 1) // 2):
        is_square[y * y % p] = 1
    total = p + 1
    a4, a6 = E.a4, E.a6
    for x in range(p):
        r = (x * x * x + a4 * x + a6) % p
        if r:
            total += 1 if is_square[r] else -1
    return total


# -- division polynomials ---------------------------------------------------


def _division_table(a4, a6, p, n):
    """f_0..f_n (abscissa-only normalization, f_2 = 1)."""
    X = FpPoly.x(p)
    R = X * X * X + X.scale(a4) + a6
    R2x16 = (R * R).scale(16)
    f = {
        0: FpPoly((), p),
        1: FpPoly((1,), p),
        2: FpPoly((1,), p),
        3: FpPoly((-a4 * a4, 12 * a6, 6 * a4, 0, 3), p),
        4: FpPoly((-2 * a4 ** 3 - 16 * a6 * a6, -8 * a4 * a6, -10 * a4 * a4,
                   40 * a6, 10 * a4, 0, 2), p),
    }

    def get(k):
        if k in f:
            return f[k]
        m = k // 2
        if k % 2 == 0:
            val = get(m) * (get(m + 2) * get(m - 1) ** 2 - get(m - 2) * get(m + 1) ** 2)
        elif m % 2:
            val = get(m + 2) * get(m) ** 3 - get(m + 1) ** 3 * get(m - 1) * R2x16
        else:
            val = R2x16 * get(m + 2) * get(m) ** 3 - get(m + 1) ** 3 * get(m - 1)
        f[k] = val
        return val

    get(n)
    return f


def division_poly(n: int, E: Curve) -> FpPoly:
    """f_n for E; its roots are the abscissae of the nonzero n-torsion points."""
    if n < 0:
        raise ValueError("division polynomial index must be >= 0")
    return _division_table(E.a4, E.a6, E.p, n)[n]


def division_poly_closed_form_disc(m: int, E: Curve) -> int:
    """The closed-form value of Disc(f_m) modulo p."""
    p = E.p
    minus_delta = 16 * (4 * pow(E.a4, 3, p) + 27 * E.a6 * E.a6) % p
    if m % 2 == 0:
        val = 16 * pow(m, (m * m - 12) // 2, p) * pow(minus_delta, (m * m - 4) * (m * m - 6) // 24, p)
    else:
        val = pow(m, (m * m - 3) // 2, p) * pow(minus_delta, (m * m - 1) * (m * m - 3) // 24, p)
        if (m - 1) // 2 % 2:
            val = -val
    return val % p


def division_poly_discriminant(m: int, E: Curve) -> int:
    """Disc(f_m) = (-1)^(n(n-1)/2) Res(f_m, f_m') / lc(f_m), via resultants."""
    f = division_poly(m, E)
    n = f.degree
    r = resultant(f, f.derivative())
    if (n * (n - 1) // 2) % 2:
        r = -r
    return r * inv_mod(f.lc, E.p) % E.p


def division_poly_disc_check(m: int, E: Curve) -> bool:
    """Compare the resultant-computed Disc(f_m) with its closed form."""
    if m < 3:
        raise ValueError("the discriminant formula covers m >= 3")
    if E.p <= m:
        raise InvalidModulus("p must exceed m so that deg f_m' is the formal degree")
    return division_poly_discriminant(m, E) == division_poly_closed_form_disc(m, E)


def discriminant_Ej(j: int, p: int) -> int:
    """Delta(E(j)) = 2^12 3^6 j^2 / (j - 1728)^3 mod p."""
    j %= p
    if j == 0 or j == 1728 % p:
        raise UnsupportedInvariant(f"j = {j} is excluded")
    return 2 ** 12 * 3 ** 6 * j * j * inv_mod(pow(j - 1728, 3, p), p) % p


def curve_discriminant(E: Curve) -> int:
    """-16 (4 a4^3 + 27 a6^2) mod p."""
    return -16 * (4 * pow(E.a4, 3, E.p) + 27 * E.a6 * E.a6) % E.p


def legendre_of_rhs(E: Curve, x: int) -> int:
    return legendre(E.rhs(x), E.p)
