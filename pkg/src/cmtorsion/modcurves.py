"""Modular equations for the eta-quotient invariants, explicit kernel
factors of division polynomials, and closed-form solvers built on them.

Every specialization re-checks its defining identity (modular relation,
divisibility) and raises instead of returning an unverified value.
"""

from __future__ import annotations

from dataclasses import dataclass

from .ecore import Curve, curve_from_j, division_poly
from .errors import DegenerateSpecialization, Inapplicable, InternalInconsistency, UnsupportedInvariant
from .modarith import (
    QuadExtElem,
    cube_root_of_unity,
    inv_mod,
    quadext_cube_roots,
    quadext_sqrt,
    quadratic_nonresidue,
    sqrt_mod,
)
from .polyring import FpPoly, roots_mod_p

# -- integer polynomials in one variable (coefficients low degree first) ----


def _imul(*polys):
    out = [1]
    for q in polys:
        res = [0] * (len(out) + len(q) - 1)
        for i, a in enumerate(out):
            for k, b in enumerate(q):
                res[i + k] += a * b
        out = res
    return tuple(out)


def _ipow(q, e):
    return _imul(*([q] * e)) if e else (1,)


def _iscale(q, c):
    return tuple(c * a for a in q)


def _ieval(q, v, p):
    acc = 0
    for a in reversed(q):
        acc = (acc * v + a) % p
    return acc


# -- modular equations Phi(X, J) = N(X) - J X ---------------------------------


@dataclass(frozen=True)
class ModularEquation:
    """Phi[gamma_{1,l}](X, J) = N(X) - J*X with N an integer polynomial."""

    ell: int
    numerator: tuple[int, ...]
    display: str

    def specialize(self, j: int, p: int) -> FpPoly:
        coeffs = list(self.numerator)
        coeffs[1] -= j
        return FpPoly(coeffs, p)

    def j_from_root(self, v: int, p: int) -> int:
        """The unique J with Phi(v, J) = 0, namely N(v)/v."""
        v %= p
        if v == 0:
            raise DegenerateSpecialization("the invariant value 0 is a pole of j")
        return _ieval(self.numerator, v, p) * inv_mod(v, p) % p

    @property
    def degree(self) -> int:
        return len(self.numerator) - 1


MODULAR_EQUATIONS = {
    2: ModularEquation(2, _ipow((16, 1), 3), "(X+16)^3 - J*X"),
    3: ModularEquation(3, _imul((27, 1), _ipow((3, 1), 3)), "(X+27)*(X+3)^3 - J*X"),
    5: ModularEquation(5, _ipow((5, 10, 1), 3), "(X^2+10*X+5)^3 - J*X"),
    7: ModularEquation(7, _imul((49, 13, 1), _ipow((1, 5, 1), 3)),
                       "(X^2+13*X+49)*(X^2+5*X+1)^3 - J*X"),
}


def phi_ell_specialize(ell: int, j: int, p: int) -> FpPoly:
    """Phi[gamma_{1,l}](X, j) mod p, a polynomial of degree l + 1 in X."""
    try:
        eq = MODULAR_EQUATIONS[ell]
    except KeyError:
        raise UnsupportedInvariant(f"no modular equation stored for l = {ell}") from None
    return eq.specialize(j, p)


def j_from_invariant(ell: int, v: int, p: int) -> int:
    return MODULAR_EQUATIONS[ell].j_from_root(v, p)


# -- kernel factors g_l of f_l for E(j), as polynomials in the root v --------

_A7 = (-7, 70, 63, 14, 1)
_P7 = (49, 13, 1)
_Q7 = (1, 5, 1)
_A5 = (125, 22, 1)
_B5 = (-1, 4, 1)
_C5 = (5, 10, 1)


@dataclass(frozen=True)
class KernelFactorTemplate:
    """Coefficients (low degree first) of g_l(X), each an integer polynomial in v."""

    ell: int
    coefficients: tuple[tuple[int, ...], ...]

    def specialize(self, v: int, p: int) -> FpPoly:
        vals = [_ieval(c, v, p) for c in self.coefficients]
        if vals[-1] == 0:
            raise DegenerateSpecialization(f"leading coefficient of g_{self.ell} vanishes at v = {v}")
        return FpPoly(vals, p).monic()


KERNEL_FACTORS = {
    3: KernelFactorTemplate(3, ((81, 30, 1), (-27, 18, 1))),
    5: KernelFactorTemplate(5, (
        _imul((89, 22, 1), _ipow(_C5, 2)),
        _iscale(_imul(_B5, _C5, _A5), 2),
        _imul(_ipow(_B5, 2), _A5),
    )),
    7: KernelFactorTemplate(7, (
        _imul(_P7, _ipow(_Q7, 3), (881, 778, 219, 26, 1)),
        _iscale(_imul((33, 13, 1), _P7, _ipow(_Q7, 2), _A7), 3),
        _iscale(_imul(_P7, _Q7, _ipow(_A7, 2)), 3),
        _ipow(_A7, 3),
    )),
}


def _rescale_for_twist(g: FpPoly, c: int | None) -> FpPoly:
    # roots of g for E(j, c) are c times those for E(j)
    if c is None or c == 1:
        return g
    p = g.p
    n = g.degree
    return FpPoly([a * pow(c, n - i, p) for i, a in enumerate(g.coeffs)], p).monic()


def kernel_factor(ell: int, v: int, j: int, E: Curve, verify: bool = True) -> FpPoly:
    """Monic factor of degree (l-1)/2 of f_l for E = E(j, c), from a root v
    of Phi[gamma_{1,l}](X, j)."""
    if ell not in KERNEL_FACTORS:
        raise UnsupportedInvariant(f"no kernel factor template for l = {ell}")
    p = E.p
    if phi_ell_specialize(ell, j, p)(v) != 0:
        raise DegenerateSpecialization(f"v = {v} is not a root of Phi_{ell}(X, {j}) mod {p}")
    g = _rescale_for_twist(KERNEL_FACTORS[ell].specialize(v, p), E.c)
    if verify and not (division_poly(ell, E) % g).is_zero():
        raise InternalInconsistency(f"g_{ell} does not divide f_{ell} for {E}")
    return g


def x3_from_v3(v: int, p: int) -> int:
    """Abscissa -(v+27)(v+3)/(v^2+18v-27) of a 3-torsion point of E(j)."""
    den = (v * v + 18 * v - 27) % p
    if den == 0:
        raise DegenerateSpecialization(f"v^2 + 18v - 27 vanishes at v = {v}")
    return -(v + 27) * (v + 3) * inv_mod(den, p) % p


def g5_normalized(v: int, p: int) -> FpPoly:
    """X^2 + 2(C/B) X + (1 - 36/A)(C/B)^2 with A, B, C the quadratics in v."""
    A = _ieval(_A5, v, p)
    B = _ieval(_B5, v, p)
    C = _ieval(_C5, v, p)
    if A == 0 or B == 0:
        raise DegenerateSpecialization(f"A or B vanishes at v = {v}")
    cb = C * inv_mod(B, p) % p
    return FpPoly(((1 - 36 * inv_mod(A, p)) * cb * cb, 2 * cb, 1), p)


# -- solving Phi_3(X, gamma2^3) = 0 via the quartic resolvent ----------------


def skolem_resolvent(j: int, p: int) -> FpPoly:
    """R(Y) = Y^3 - 1728 Y^2 - 576 (j - 1728) Y - 64 (j - 1728)^2."""
    t = (j - 1728) % p
    return FpPoly((-64 * t * t, -576 * t, -1728, 1), p)


def solve_phi3_skolem(gamma2: int, p: int, seed: int = 0, zeta: int | None = None) -> int:
    """A root of Phi_3(X, gamma2^3) mod p from two square roots and zeta_3.

    The resolvent roots are y_i = 4(z^{2i} g^2 + 12 z^i g + 144) and the
    root is X_1 = (z_1 + z_2 + z_3 - 36)/4 with z_1 z_2 z_3 = 8(j - 1728).
    All four sign choices of (z_1, z_2) give roots; the odd square roots
    are tried first so the answer does not depend on zeta_3.
    """
    g = gamma2 % p
    j = pow(g, 3, p)
    if j == 0 or j == 1728 % p:
        raise DegenerateSpecialization("gamma2^3 must avoid 0 and 1728")
    if zeta is None:
        zeta = cube_root_of_unity(p, seed)
    elif (zeta * zeta + zeta + 1) % p:
        raise ValueError(f"{zeta} is not a primitive cube root of unity mod {p}")
    ys = [4 * (pow(zeta, 2 * i, p) * g * g + 12 * pow(zeta, i, p) * g + 144) % p for i in (1, 2)]
    zs = [sqrt_mod(y, p) for y in ys]
    if None in zs:
        raise Inapplicable("a resolvent root is not a square mod p")
    phi = phi_ell_specialize(3, j, p)
    inv4 = inv_mod(4, p)
    for s1, s2 in ((-1, -1), (-1, 1), (1, -1), (1, 1)):
        z1, z2 = s1 * zs[0] % p, s2 * zs[1] % p
        if z1 * z2 % p == 0:
            break
        z3 = 8 * (j - 1728) * inv_mod(z1 * z2, p) % p
        x = (z1 + z2 + z3 - 36) * inv4 % p
        if phi(x) == 0:
            return x
    raise Inapplicable("no sign choice of the square roots yields a root of Phi_3")


# -- l = 11: the relation between gamma_{1,11}^4 and gamma2 ------------------

# {(power of X, power of gamma2): coefficient}
ELEVEN_RELATION = {
    (12, 0): 1, (9, 0): -1980, (8, 1): 880, (7, 2): 44, (6, 0): 980078,
    (5, 1): -871200, (4, 2): 150040, (3, 0): 47066580, (3, 3): -7865,
    (2, 4): 154, (2, 1): 560560, (1, 2): 1244, (1, 5): -1, (0, 0): 121,
}


def eleven_relation_at(w: int, p: int) -> FpPoly:
    """The relation with X = w substituted, as a polynomial in gamma2."""
    coeffs = [0] * 6
    for (xe, ge), c in ELEVEN_RELATION.items():
        coeffs[ge] += c * pow(w, xe, p)
    return FpPoly(coeffs, p)


def gamma2_from_w11(w: int, p: int, seed: int = 0) -> list[int]:
    """Values of gamma2 mod p related to w = gamma_{1,11}^4 mod p."""
    f = eleven_relation_at(w, p)
    if f.is_zero():
        raise DegenerateSpecialization(f"relation vanishes identically at w = {w}")
    return roots_mod_p(f, seed)


# -- l = 2: the 4-torsion factors of f_4 --------------------------------------


def j_from_u(u: int, p: int) -> int:
    return MODULAR_EQUATIONS[2].j_from_root(u, p)


def _check_u(u, p):
    u %= p
    if u in (0, 8 % p, -64 % p):
        raise DegenerateSpecialization(f"u = {u} is excluded (0, 8 or -64 mod {p})")
    return u


def four_torsion_P2(u: int, p: int) -> FpPoly:
    """P2(X) = X^2 + 2(u+16)/(u-8) X + (u-80)(u+16)^2/((u-8)^2 (u+64))."""
    u = _check_u(u, p)
    a = (u + 16) * inv_mod(u - 8, p)
    c = (u - 80) * (u + 16) ** 2 * inv_mod((u - 8) ** 2 * (u + 64), p)
    return FpPoly((c, 2 * a, 1), p)


def four_torsion_P4(u: int, p: int) -> FpPoly:
    """The quartic cofactor of P2 in f_4 / 2."""
    u = _check_u(u, p)
    w = u + 16
    i8 = inv_mod(u - 8, p)
    i64 = inv_mod(u + 64, p)
    c3 = -2 * w * i8
    c2 = -12 * w ** 2 * i64 * i8
    c1 = -2 * (7 * u + 16) * w ** 3 * i64 * pow(i8, 3, p)
    c0 = -(5 * u * u + 640 * u - 256) * w ** 4 * i64 * i64 * pow(i8, 4, p)
    return FpPoly((c0, c1, c2, c3, 1), p)


def P2_discriminant(u: int, p: int) -> int:
    """12^2 (u+16)^2 / ((u-8)^2 (u+64)), i.e. (b/2)^2 - c for P2 = X^2 + bX + c."""
    u = _check_u(u, p)
    return 144 * (u + 16) ** 2 * inv_mod((u - 8) ** 2 * (u + 64), p) % p


def u_from_v(v: int, p: int) -> int:
    """u with (u + 64)/u = v^2, i.e. u = 64/(v^2 - 1)."""
    return 64 * inv_mod(v * v - 1, p) % p


def four_torsion_P4_split(v: int, p: int) -> tuple[FpPoly, FpPoly]:
    """(G_a, G_b) with G_a G_b = P4(u) for u = 64/(v^2 - 1)."""
    v %= p
    if v in (0, 3 % p, -3 % p) or (v * v - 1) % p == 0:
        raise DegenerateSpecialization(f"v = {v} is excluded")
    s = v * v + 3
    den = inv_mod((v + 3) ** 2 * (v - 3) ** 2 * v * v, p)
    Ga = FpPoly(((v * v + 12 * v - 9) * s * s * den, 2 * s * inv_mod(v * (v + 3), p), 1), p)
    Gb = FpPoly(((v * v - 12 * v - 9) * s * s * den, 2 * s * inv_mod(v * (v - 3), p), 1), p)
    return Ga, Gb


# -- l = 2: solving Phi_2(X, J) = X^3 + 48X^2 + 768X - JX + 4096 --------------


def solve_phi2_resolvent(J: int, p: int) -> list[int]:
    """Roots in GF(p) of Phi_2(X, J), ascending, via Y = X + 16.

    Y^3 - J Y + 16 J = Y^3 - 3ab Y + ab(a + b) with a, b the roots of
    W^2 - 48 W + J/3; for each cube root z of a/b, Y = (b z - a)/(z - 1).
    """
    if p <= 3:
        raise ValueError("p must exceed 3")
    J %= p
    if J == 0 or J == 1728 % p:
        raise DegenerateSpecialization("J = 0 and J = 1728 are degenerate")
    d = quadratic_nonresidue(p)
    disc = -4 * inv_mod(3, p) * (J - 1728) % p
    root = quadext_sqrt(disc, p, d)
    half = inv_mod(2, p)
    alpha = (root + 48) * half
    beta = (48 - root) * half
    out = set()
    for z in quadext_cube_roots(alpha / beta):
        if z == 1:
            raise InternalInconsistency("z = 1 forces alpha = beta, excluded by J != 1728")
        y = (beta * z - alpha) / (z - 1)
        if y.in_base_field():
            out.add((y.a - 16) % p)
    phi = FpPoly((4096, 768 - J, 48, 1), p)
    if any(phi(x) for x in out):
        raise InternalInconsistency("resolvent produced a non-root")
    return sorted(out)


# -- the D = 20 curve over Q(sqrt 5) ------------------------------------------


def _qsqrt5(rational, irrational, s, p):
    # (n1/d1) + (n2/d2) sqrt5 reduced mod p with sqrt5 = s
    (n1, d1), (n2, d2) = rational, irrational
    return (n1 * inv_mod(d1, p) + n2 * inv_mod(d2, p) * s) % p


def d20_curve(p: int, sqrt5: int) -> Curve:
    """The curve over Q(sqrt 5) with CM by Z[sqrt -5], reduced mod p."""
    if (sqrt5 * sqrt5 - 5) % p:
        raise ValueError(f"{sqrt5} is not a square root of 5 mod {p}")
    a4 = _qsqrt5((-162375, 87362), (-89505, 174724), sqrt5, p)
    a6 = _qsqrt5((-54125, 43681), (-29835, 87362), sqrt5, p)
    return Curve(p, a4, a6)


def d20_f5_factor(p: int, sqrt5: int) -> FpPoly:
    """The quadratic factor of f_5 of :func:`d20_curve`."""
    c1 = _qsqrt5((695, 418), (225, 418), sqrt5, p)
    c0 = _qsqrt5((129925, 174724), (45369, 87362), sqrt5, p)
    return FpPoly((c0, c1, 1), p)


def d20_factor_discriminant(p: int, sqrt5: int) -> int:
    """3^2/(11^2 19^2) ((7+s)/2)^4 ((9+s)/2)^2 s / eps0^5, eps0 = (1+s)/2."""
    h = inv_mod(2, p)
    s = sqrt5
    eps0 = (1 + s) * h % p
    val = 9 * inv_mod(121 * 361, p) * pow((7 + s) * h, 4, p) * pow((9 + s) * h, 2, p) * s
    return val * inv_mod(pow(eps0, 5, p), p) % p
