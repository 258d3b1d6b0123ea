"""Build a curve with prescribed CM and resolve the sign of its trace.

For 4p = U^2 + D V^2 the curve E(j) built from a root of a class
polynomial has p + 1 - U or p + 1 + U points.  The routines below decide
which, from the action of Frobenius on a small torsion subgroup: with an
eigenvalue lambda mod l one has U = lambda + p/lambda (mod l).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Iterator

from . import modcurves as mc
from .classdata import ClassPolyTable, builtin_table, invariant_roots
from .ecore import (
    Curve,
    curve_from_j,
    discriminant_Ej,
    division_poly,
    order_check,
)
from .errors import (
    DegenerateSpecialization,
    Inapplicable,
    InternalInconsistency,
    NoApplicableMethod,
)
from .modarith import CMInstance, inv_mod, legendre, quartic_residue_symbol, sqrt_mod
from .polyring import (
    FpPoly,
    distinct_degree_factorization,
    one_factor_of_degree,
    poly_xgcd,
    resultant,
    roots_mod_p,
)

log = logging.getLogger(__name__)

METHODS = ("T3", "T3_SKOLEM", "T5_SPLIT", "T5_IRRED", "T5_D20", "T7_RES", "T11_RES", "T2_MOD8", "BASELINE")

# Rational j-invariants of the maximal orders of class number one (D > 4).
CLASS_NUMBER_ONE_J = {
    7: -3375,
    8: 8000,
    11: -32768,
    19: -884736,
    43: -884736000,
    67: -147197952000,
    163: -262537412640768000,
}


@dataclass(frozen=True)
class SignDecision:
    ell: int
    method: str
    U_signed: int
    eigenvalue: int | None = None
    character: int | None = None

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method tag {self.method!r}")


@dataclass(frozen=True)
class CurveCertificate:
    instance: CMInstance
    curve: Curve
    m: int
    decision: SignDecision
    j: int
    invariant: str | None = None
    invariant_root: int | None = None
    sqrtD: int | None = None

    @property
    def U_signed(self) -> int:
        return self.decision.U_signed

    @property
    def method(self) -> str:
        return self.decision.method


# -- sign from eigenvalue data --------------------------------------------------


def _check_ell_residue(U, ell):
    if U % ell == 0:
        raise Inapplicable(f"U = 0 mod {ell}: the sign cannot be read off mod {ell}")


def sign_from_eigenvalue(lam: int, U: int, p: int, ell: int) -> int:
    """The signed trace +-U with U = lam + p/lam (mod ell)."""
    _check_ell_residue(U, ell)
    lam %= ell
    if lam == 0:
        raise InternalInconsistency("eigenvalue 0 mod l")
    t = (lam + p * pow(lam, -1, ell)) % ell
    for Us in (U, -U):
        if Us % ell == t:
            return Us
    raise InternalInconsistency(f"eigenvalue {lam} mod {ell} is incompatible with U = +-{U}")


def sign_from_character(chi: int, U: int, p: int, ell: int) -> int:
    """The signed trace whose eigenvalues mod ell have quadratic character chi."""
    _check_ell_residue(U, ell)
    matches = []
    for Us in (U, -U):
        lams = [x for x in range(1, ell) if (x * x - Us * x + p) % ell == 0]
        if lams and all(legendre(x, ell) == chi for x in lams):
            matches.append(Us)
    if len(matches) == 1:
        return matches[0]
    if not matches:
        raise InternalInconsistency(f"no eigenvalue mod {ell} with character {chi} for U = +-{U}")
    raise Inapplicable(f"the eigenvalue character mod {ell} does not separate +-U")


# -- torsion arithmetic in GF(p)[X, Y]/(h(X), Y^2 - rhs(X)) ----------------------
#
# An affine point is (a, b) standing for (a(X), Y*b(X)); None is the identity.


def _inv_mod_poly(f, h):
    d, s, _ = poly_xgcd(f % h, h)
    if d.degree != 0:
        raise InternalInconsistency("non-invertible element; modulus is not irreducible")
    return s % h


def _torsion_add(P, Q, E, R, h):
    if P is None:
        return Q
    if Q is None:
        return P
    (a1, b1), (a2, b2) = P, Q
    if a1 == a2:
        if (b1 + b2).is_zero():
            return None
        lam = ((a1 * a1).scale(3) + E.a4) * _inv_mod_poly((b1 * R).scale(2), h) % h
    else:
        lam = (b2 - b1) * _inv_mod_poly(a2 - a1, h) % h
    x3 = (R * lam * lam - a1 - a2) % h
    y3 = (lam * (a1 - x3) - b1) % h
    return (x3, y3)


def frobenius_eigenvalue(E: Curve, h: FpPoly, ell: int) -> int | None:
    """k in [1, ell) with pi(P) = [k]P for the generic point P over h, or None.

    h must be an irreducible factor of the ell-division polynomial of E.
    """
    p = E.p
    R = E.rhs_poly() % h
    X = FpPoly.x(p) % h
    one = FpPoly.constant(1, p)
    P = (X, one)
    frob = (X.powmod(p, h), R.powmod((p - 1) // 2, h))
    Q = P
    for k in range(1, ell):
        if Q == frob:
            return k
        Q = _torsion_add(Q, P, E, R, h)
    return None


# -- l = 3 ---------------------------------------------------------------------


def sign_via_3torsion(E: Curve, x3: int, U: int, p: int) -> SignDecision:
    """lambda = (s/p) for s = x3^3 + a4 x3 + a6, then U = lambda + p/lambda mod 3."""
    _check_ell_residue(U, 3)
    s = E.rhs(x3)
    if s == 0:
        raise InternalInconsistency(f"x3 = {x3} is a 2-torsion abscissa")
    lam = legendre(s, p)
    return SignDecision(3, "T3", sign_from_eigenvalue(lam, U, p, 3), eigenvalue=lam % 3)


# -- l = 5 ---------------------------------------------------------------------


def sign_via_5torsion_split(E: Curve, g5: FpPoly, U: int, p: int) -> SignDecision:
    """g5 has rational roots; the ordinate over a root is rational iff lambda = 1."""
    _check_ell_residue(U, 5)
    roots = roots_mod_p(g5)
    if not roots:
        raise Inapplicable("g5 has no rational root")
    decisions = []
    for x5 in roots:
        s = E.rhs(x5)
        if s == 0:
            raise InternalInconsistency(f"x5 = {x5} is a 2-torsion abscissa")
        lam = legendre(s, p)
        decisions.append((lam, sign_from_eigenvalue(lam, U, p, 5)))
    if len({d[1] for d in decisions}) != 1:
        raise InternalInconsistency("the two roots of g5 disagree on the sign")
    lam, Us = decisions[0]
    return SignDecision(5, "T5_SPLIT", Us, eigenvalue=lam % 5)


def sign_via_5torsion_irred(E: Curve, g5: FpPoly, U: int, p: int) -> SignDecision:
    """g5 irreducible: Frobenius acts as [+-2]; compare ordinates of pi(P) and [2]P."""
    _check_ell_residue(U, 5)
    if g5.degree != 2 or roots_mod_p(g5):
        raise Inapplicable("g5 is not an irreducible quadratic")
    R = E.rhs_poly() % g5
    X = FpPoly.x(p) % g5
    xp = X.powmod(p, g5)
    yp = R.powmod((p - 1) // 2, g5)
    double = _torsion_add((X, FpPoly.constant(1, p)), (X, FpPoly.constant(1, p)), E, R, g5)
    if double is None or double[0] != xp:
        raise InternalInconsistency("X^p is not the abscissa of [2](X, Y)")
    if double[1] == yp:
        lam = 2
    elif (double[1] + yp).is_zero():
        lam = 3
    else:
        raise InternalInconsistency("Y^p matches neither [2](X, Y) nor [-2](X, Y)")
    return SignDecision(5, "T5_IRRED", sign_from_eigenvalue(lam, U, p, 5), eigenvalue=lam)


def lehmer_sides(p: int) -> tuple[int, int]:
    """((eps0 sqrt5 / p), (p/5)_4) for p = 1 mod 20, with sqrt5 the even root."""
    s = sqrt_mod(5, p)
    eps0 = (1 + s) * inv_mod(2, p) % p
    q = quartic_residue_symbol(p, 5)
    return legendre(eps0 * s, p), q


def sign_via_d20(p: int, sqrt5: int | None = None) -> tuple[SignDecision, Curve]:
    """Resolve the sign for D = 20, p = 1 mod 20 on the curve defined over Q(sqrt 5).

    Write 4p = U^2 + 20 V^2 with U = 2a; then a = +-1 mod 5 and the
    ordinate over a root of the quadratic factor of f5 is rational
    exactly when 5 divides #E.
    """
    if p % 20 != 1:
        raise Inapplicable(f"the D = 20 route needs p = 1 mod 20, got p = {p}")
    inst = CMInstance.from_prime(20, p)
    if sqrt5 is None:
        sqrt5 = sqrt_mod(5, p)
    E = mc.d20_curve(p, sqrt5)
    roots = roots_mod_p(mc.d20_f5_factor(p, sqrt5))
    if not roots:
        raise InternalInconsistency(f"the quadratic factor of f5 has no root mod {p}")
    lam = legendre(E.rhs(roots[0]), p)
    if lam == 0:
        raise InternalInconsistency("cusp value s = 0")
    Us = sign_from_eigenvalue(lam, inst.U, p, 5)
    return SignDecision(5, "T5_D20", Us, eigenvalue=lam % 5), E


# -- l = 7 and l = 11 via Dewaghe's character -------------------------------------


def dewaghe_character(E: Curve, g: FpPoly) -> int:
    """(r/p) with r = Res(g, X^3 + a4 X + a6); equals (lambda/l) for a kernel factor g."""
    r = resultant(g.monic(), E.rhs_poly())
    if r == 0:
        raise InternalInconsistency("kernel factor shares a root with the 2-torsion")
    return legendre(r, E.p)


def sign_via_7torsion(E: Curve, g7: FpPoly, U: int, p: int) -> SignDecision:
    _check_ell_residue(U, 7)
    chi = dewaghe_character(E, g7)
    return SignDecision(7, "T7_RES", sign_from_character(chi, U, p, 7), character=chi)


def eleven_kernel_factor(E: Curve, seed: int = 0) -> FpPoly | None:
    """The degree-5 kernel factor of f11 when it is determined by the factorization."""
    f11 = division_poly(11, E)
    low = [(g, d) for g, d in distinct_degree_factorization(f11, max_degree=5)]
    total = sum(g.degree for g, _ in low)
    if total != 5:
        return None
    out = FpPoly.constant(1, E.p)
    for g, _ in low:
        out = out * g
    return out.monic()


def sign_via_11torsion(E: Curve, U: int, p: int, seed: int = 0) -> SignDecision:
    """Factor f11; use Dewaghe on a degree-5 kernel factor, else search lambda
    directly on a small irreducible factor."""
    _check_ell_residue(U, 11)
    g = eleven_kernel_factor(E, seed)
    if g is not None:
        chi = dewaghe_character(E, g)
        return SignDecision(11, "T11_RES", sign_from_character(chi, U, p, 11), character=chi)
    # Frobenius is a scalar on E[11] here; any small factor lies in an eigenspace
    f11 = division_poly(11, E)
    for part, d in distinct_degree_factorization(f11, max_degree=5):
        h = one_factor_of_degree(part, d, seed)
        lam = frobenius_eigenvalue(E, h, 11)
        if lam is not None:
            return SignDecision(11, "T11_RES", sign_from_eigenvalue(lam, U, p, 11), eigenvalue=lam)
    raise Inapplicable("no eigenspace of the 11-torsion found")


# -- l = 2 -----------------------------------------------------------------------


def chi_roots_mod8(p_mod8: int, U_mod8: int) -> frozenset[int]:
    """Residues lambda mod 8 with lambda^2 - U lambda + p = 0 for every lift (table form).

    Odd U residues are accepted and give the empty set.
    """
    if p_mod8 not in (1, 3, 5, 7):
        raise ValueError(f"p mod 8 must be odd, got {p_mod8}")
    if not 0 <= U_mod8 < 8:
        raise ValueError(f"U mod 8 must lie in [0, 8), got {U_mod8}")
    if U_mod8 % 2:
        return frozenset()
    if p_mod8 in (1, 5):
        if U_mod8 not in (2, 6):
            return frozenset()
        eps = 1 if U_mod8 == 2 else -1
        base = eps if p_mod8 == 1 else -eps
        return frozenset({base % 8, (base + 4) % 8})
    wanted = 4 if p_mod8 == 3 else 0
    return frozenset({1, 3, 5, 7}) if U_mod8 == wanted else frozenset()


def mod8_applicable(D: int, V: int) -> bool:
    """Whether the characteristic polynomial of Frobenius has roots mod 8."""
    if D % 4 == 0:
        return V % 2 == 0
    return V % 4 == 0 or (V % 4 == 2 and D % 8 == 7)


def sign_via_4torsion(E: Curve, x4: int, U: int, p: int) -> SignDecision:
    """lambda_4 = (s/p) at a rational 4-torsion abscissa, lifted to the unique
    mod-8 root set: eps = lambda_4 for p = 1 mod 8, -lambda_4 for p = 5 mod 8."""
    if p % 8 not in (1, 5) or U % 4 != 2:
        raise Inapplicable("the mod-8 lift needs p = 1 mod 4 and U = 2 mod 4")
    s = E.rhs(x4)
    if s == 0:
        raise InternalInconsistency(f"x4 = {x4} is a 2-torsion abscissa")
    lam4 = legendre(s, p)
    eps = lam4 if p % 8 == 1 else -lam4
    for Us in (U, -U):
        if (Us - 2 * eps) % 8 == 0:
            roots = chi_roots_mod8(p % 8, Us % 8)
            if not any((r - lam4) % 4 == 0 for r in roots):
                raise InternalInconsistency("lambda_4 does not lift into the mod-8 root set")
            return SignDecision(2, "T2_MOD8", Us, eigenvalue=lam4 % 4)
    raise InternalInconsistency("no sign of U is 2*eps mod 8")


def four_torsion_abscissae(u: int, p: int) -> list[int]:
    """Rational roots of P2(u), then of P4(u)."""
    return roots_mod_p(mc.four_torsion_P2(u, p)) + roots_mod_p(mc.four_torsion_P4(u, p))


def phi2_roots(j: int, p: int, D: int) -> list[int]:
    """Roots u of (X + 16)^3 - j X; by radicals when D is odd."""
    if D % 2:
        return mc.solve_phi2_resolvent(j, p)
    return roots_mod_p(mc.phi_ell_specialize(2, j, p))


# -- bad-curve elimination ---------------------------------------------------------


def eliminate_bad_j(j: int, p: int, D: int, V: int) -> bool:
    """False when Delta(E(j)) must be a square mod p but is not."""
    delta = discriminant_Ej(j, p)
    if D % 2 == 1 or (D % 4 == 0 and V % 2 == 0):
        return legendre(delta, p) == 1
    return True


# -- method selection --------------------------------------------------------------


def _has(table, D, inv):
    return (D, inv) in table


def _j_sources(D, table):
    return bool(table.for_discriminant(D)) or D in CLASS_NUMBER_ONE_J


def select_method(D: int, V: int, table: ClassPolyTable | None = None) -> list[str]:
    """Methods worth trying for (D, V), most favourable first; BASELINE is always last."""
    table = builtin_table() if table is None else table
    DV2 = D * V * V
    out = []
    if DV2 % 3 == 0:
        if _has(table, D, "g3e12"):
            out.append("T3")
        if D % 3 and _has(table, D, "gamma2"):
            out.append("T3_SKOLEM")
    if DV2 % 7 == 0 and _has(table, D, "g7e4"):
        out.append("T7_RES")
    if DV2 % 5 == 0:
        if _has(table, D, "g5e6"):
            out += ["T5_SPLIT", "T5_IRRED"]
        if D == 20:
            out.append("T5_D20")
    if mod8_applicable(D, V) and _j_sources(D, table):
        out.append("T2_MOD8")
    if DV2 % 11 == 0 and D % 3 and _has(table, D, "g11e4"):
        out.append("T11_RES")
    out.append("BASELINE")
    return out


# -- candidates ----------------------------------------------------------------------


@dataclass(frozen=True)
class _Candidate:
    j: int
    invariant: str | None
    root: int | None
    sqrtD: int | None
    aux: int | None = None  # v_l, gamma2, ... as the method needs


def _entry_candidates(D, inv, p, table, seed) -> Iterator[_Candidate]:
    """(j, root) pairs from the roots of H_D[inv], smallest root first."""
    if (D, inv) not in table:
        return
    for branch, x0 in invariant_roots(table[(D, inv)], p, seed):
        try:
            if inv == "g3e12":
                yield _Candidate(mc.j_from_invariant(3, x0, p), inv, x0, branch, x0)
            elif inv == "g5e6":
                yield _Candidate(mc.j_from_invariant(5, x0, p), inv, x0, branch, x0)
            elif inv == "g7e4":
                yield _Candidate(mc.j_from_invariant(7, x0, p), inv, x0, branch, x0)
            elif inv == "gamma2":
                yield _Candidate(pow(x0, 3, p), inv, x0, branch, x0)
            elif inv == "weber_sq":
                yield _Candidate(mc.j_from_u(x0, p), inv, x0, branch, x0)
            elif inv == "g11e4":
                for g2 in mc.gamma2_from_w11(x0, p, seed):
                    yield _Candidate(pow(g2, 3, p), inv, x0, branch, g2)
        except DegenerateSpecialization:
            continue


def _any_j_candidates(D, p, table, seed) -> Iterator[_Candidate]:
    """Every j obtainable from the table entries for D, then class number one data."""
    for inv in ("gamma2", "weber_sq", "g3e12", "g5e6", "g7e4", "g11e4"):
        yield from _entry_candidates(D, inv, p, table, seed)
    if D in CLASS_NUMBER_ONE_J:
        yield _Candidate(CLASS_NUMBER_ONE_J[D] % p, None, None, None)


def _pinned(cands, j, ell=None, p=None):
    """Restrict to j; if nothing matches, derive v_l from Phi_l(X, j)."""
    seen = False
    for c in cands:
        if c.j == j:
            seen = True
            yield c
    if not seen and ell is not None:
        for v in roots_mod_p(mc.phi_ell_specialize(ell, j, p)):
            yield _Candidate(j, None, None, None, v)


# -- the driver ------------------------------------------------------------------------


@dataclass
class _Context:
    inst: CMInstance
    table: ClassPolyTable
    seed: int
    trials: int
    j_pin: int | None
    rejected: list = field(default_factory=list)


def _run_T3(ctx, c):
    E = curve_from_j(c.j, 1, ctx.inst.p)
    x3 = mc.x3_from_v3(c.aux, ctx.inst.p)
    return E, sign_via_3torsion(E, x3, ctx.inst.U, ctx.inst.p)


def _run_T3_skolem(ctx, c):
    p = ctx.inst.p
    E = curve_from_j(c.j, 1, p)
    method = "T3_SKOLEM"
    try:
        v = mc.solve_phi3_skolem(c.aux, p, ctx.seed)
    except Inapplicable:
        roots = roots_mod_p(mc.phi_ell_specialize(3, c.j, p))
        if not roots:
            raise
        v, method = roots[0], "T3"
    d = sign_via_3torsion(E, mc.x3_from_v3(v, p), ctx.inst.U, p)
    return E, SignDecision(3, method, d.U_signed, eigenvalue=d.eigenvalue)


def _run_T5(split):
    def run(ctx, c):
        p = ctx.inst.p
        E = curve_from_j(c.j, 1, p)
        g5 = mc.kernel_factor(5, c.aux, c.j, E)
        fn = sign_via_5torsion_split if split else sign_via_5torsion_irred
        return E, fn(E, g5, ctx.inst.U, p)
    return run


def _run_T7(ctx, c):
    p = ctx.inst.p
    E = curve_from_j(c.j, 1, p)
    g7 = mc.kernel_factor(7, c.aux, c.j, E)
    return E, sign_via_7torsion(E, g7, ctx.inst.U, p)


def _run_T11(ctx, c):
    E = curve_from_j(c.j, 1, ctx.inst.p)
    return E, sign_via_11torsion(E, ctx.inst.U, ctx.inst.p, ctx.seed)


def _run_T2(ctx, c):
    p, D = ctx.inst.p, ctx.inst.D
    E = curve_from_j(c.j, 1, p)
    us = [c.aux] if c.invariant == "weber_sq" else phi2_roots(c.j, p, D)
    for u in us:
        try:
            xs = four_torsion_abscissae(u, p)
        except DegenerateSpecialization:
            continue
        if xs:
            return E, sign_via_4torsion(E, xs[0], ctx.inst.U, p)
    raise Inapplicable("no rational 4-torsion abscissa")


def _run_baseline(ctx, c):
    p, U = ctx.inst.p, ctx.inst.U
    E = curve_from_j(c.j, 1, p)
    for Us in (U, -U):
        if order_check(E, p + 1 - Us, trials=8, seed=ctx.seed):
            return E, SignDecision(1, "BASELINE", Us)
    raise Inapplicable("neither p + 1 - U nor p + 1 + U annihilates random points")


def _candidates_for(method, ctx) -> Iterator[_Candidate]:
    D, p, seed, table = ctx.inst.D, ctx.inst.p, ctx.seed, ctx.table
    if method == "T3":
        src, ell = _entry_candidates(D, "g3e12", p, table, seed), 3
    elif method == "T3_SKOLEM":
        src, ell = _entry_candidates(D, "gamma2", p, table, seed), None
    elif method in ("T5_SPLIT", "T5_IRRED"):
        src, ell = _entry_candidates(D, "g5e6", p, table, seed), 5
    elif method == "T7_RES":
        src, ell = _entry_candidates(D, "g7e4", p, table, seed), 7
    elif method == "T11_RES":
        src, ell = _entry_candidates(D, "g11e4", p, table, seed), None
    else:
        src, ell = _any_j_candidates(D, p, table, seed), None
    if ctx.j_pin is None:
        yield from src
        return
    if method == "T3_SKOLEM":
        g = [c for c in src if c.j == ctx.j_pin]
        yield from g
        return
    yield from _pinned(src, ctx.j_pin, ell, p)


_RUNNERS: dict[str, Callable] = {
    "T3": _run_T3,
    "T3_SKOLEM": _run_T3_skolem,
    "T5_SPLIT": _run_T5(True),
    "T5_IRRED": _run_T5(False),
    "T7_RES": _run_T7,
    "T11_RES": _run_T11,
    "T2_MOD8": _run_T2,
    "BASELINE": _run_baseline,
}


def _verify(E, inst, Us, trials, seed):
    return order_check(E, inst.p + 1 - Us, trials=trials, seed=seed)


def _certify(ctx, c, E, decision):
    """Check the decision by order_check; None when the candidate curve is not CM by D."""
    inst = ctx.inst
    if abs(decision.U_signed) != inst.U:
        raise InternalInconsistency(f"signed trace {decision.U_signed} is not +-{inst.U}")
    if _verify(E, inst, decision.U_signed, ctx.trials, ctx.seed):
        return CurveCertificate(inst, E, inst.p + 1 - decision.U_signed, decision, c.j,
                                c.invariant, c.root, c.sqrtD)
    if _verify(E, inst, -decision.U_signed, ctx.trials, ctx.seed):
        raise InternalInconsistency(
            f"{decision.method} chose U = {decision.U_signed} but the opposite sign verifies on {E}")
    ctx.rejected.append((decision.method, c.j, "order check failed for both signs"))
    return None


def _is_bad_candidate(ctx, c):
    """True if E(j) has neither p + 1 - U nor p + 1 + U points (a wrong conjugate)."""
    E = curve_from_j(c.j, 1, ctx.inst.p)
    return not any(_verify(E, ctx.inst, Us, ctx.trials, ctx.seed) for Us in (ctx.inst.U, -ctx.inst.U))


def _try_method(method, ctx) -> Iterator[CurveCertificate]:
    inst = ctx.inst
    if method == "T5_D20":
        if ctx.inst.D != 20 or inst.p % 20 != 1:
            return
        s = sqrt_mod(5, inst.p)
        for branch in (s, inst.p - s):
            decision, E = sign_via_d20(inst.p, branch)
            j = E.j_invariant()
            if ctx.j_pin is not None and j != ctx.j_pin:
                continue
            cert = _certify(ctx, _Candidate(j, None, None, None), E, decision)
            if cert is not None:
                yield cert
        return
    runner = _RUNNERS[method]
    seen = set()
    for c in _candidates_for(method, ctx):
        if c.j in (0, 1728 % inst.p) or c.j in seen:
            continue
        if not eliminate_bad_j(c.j, inst.p, inst.D, inst.V):
            ctx.rejected.append((method, c.j, "discriminant is not a square"))
            continue
        try:
            E, decision = runner(ctx, c)
        except Inapplicable as exc:
            ctx.rejected.append((method, c.j, str(exc)))
            continue
        except (InternalInconsistency, DegenerateSpecialization) as exc:
            if _is_bad_candidate(ctx, c):
                ctx.rejected.append((method, c.j, "not a curve with the prescribed CM"))
                continue
            raise InternalInconsistency(f"{method} at j = {c.j}: {exc}") from exc
        cert = _certify(ctx, c, E, decision)
        if cert is not None:
            seen.add(c.j)
            yield cert


def build_curve_with_cm(D: int, p: int, table: ClassPolyTable | None = None, seed: int = 0,
                        j: int | None = None, trials: int = 2) -> CurveCertificate:
    """A curve over GF(p) with CM by the order of discriminant -D, and its order.

    ``j`` pins the curve to a given root of the class polynomial; by default
    the smallest invariant root is used.
    """
    if trials < 2:
        raise ValueError("certificates need at least two verification trials")
    inst = CMInstance.from_prime(D, p)
    table = builtin_table() if table is None else table
    ctx = _Context(inst, table, seed, trials, None if j is None else j % p)
    for method in select_method(D, inst.V, table):
        for cert in _try_method(method, ctx):
            log.debug("certified %s via %s", cert.curve, method)
            return cert
    detail = "; ".join(f"{m} j={jj}: {why}" for m, jj, why in ctx.rejected[-6:])
    if not _j_sources(D, table):
        raise NoApplicableMethod(
            f"no class polynomial for D = {D}: supply one with a table file (see 'tables')")
    raise NoApplicableMethod(f"no method resolved the sign for D = {D}, p = {p}" + (f" ({detail})" if detail else ""))


def build_all_candidates(D: int, p: int, table: ClassPolyTable | None = None, seed: int = 0,
                         method: str | None = None, trials: int = 2) -> list[CurveCertificate]:
    """One certificate per distinct j reachable by ``method`` (default: the first that works)."""
    inst = CMInstance.from_prime(D, p)
    table = builtin_table() if table is None else table
    methods = [method] if method else select_method(D, inst.V, table)
    for m in methods:
        ctx = _Context(inst, table, seed, trials, None)
        certs = list(_try_method(m, ctx))
        if certs:
            return certs
    raise NoApplicableMethod(f"no method resolved the sign for D = {D}, p = {p}")
