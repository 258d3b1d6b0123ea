import random

import pytest
from hypothesis import given, settings, strategies as st

from cmtorsion.ecore import curve_from_j, division_poly, naive_count
from cmtorsion.errors import CMError, DegenerateSpecialization, UnsupportedInvariant
from cmtorsion.modarith import legendre, sqrt_mod
from cmtorsion.modcurves import (
    MODULAR_EQUATIONS,
    P2_discriminant,
    d20_curve,
    d20_f5_factor,
    d20_factor_discriminant,
    eleven_relation_at,
    four_torsion_P2,
    four_torsion_P4,
    four_torsion_P4_split,
    g5_normalized,
    gamma2_from_w11,
    j_from_invariant,
    j_from_u,
    kernel_factor,
    phi_ell_specialize,
    solve_phi2_resolvent,
    solve_phi3_skolem,
    u_from_v,
    x3_from_v3,
)
from cmtorsion.polyring import FpPoly, discriminant, resultant, roots_mod_p, splitting_type

from conftest import primes_between

P = 101


def test_phi2_expansion():
    J = 37
    assert phi_ell_specialize(2, J, P) == FpPoly([4096, 768 - J, 48, 1], P)


def test_phi3_at_zero():
    x = FpPoly.x(P)
    assert phi_ell_specialize(3, 0, P) == (x + 27) * (x + 3) ** 3


def test_modular_equation_degrees_and_shapes():
    x = FpPoly.x(P)
    J = 55
    expected = {
        2: (x + 16) ** 3,
        3: (x + 27) * (x + 3) ** 3,
        5: (x * x + x.scale(10) + 5) ** 3,
        7: (x * x + x.scale(13) + 49) * (x * x + x.scale(5) + 1) ** 3,
    }
    for ell, N in expected.items():
        assert MODULAR_EQUATIONS[ell].degree == ell + 1
        assert phi_ell_specialize(ell, J, P) == N - x.scale(J)
    with pytest.raises(UnsupportedInvariant):
        phi_ell_specialize(11, 1, P)


def test_phi5_root_recovers_j():
    j = j_from_invariant(5, 163, 281)
    assert j == pow(163 ** 2 + 10 * 163 + 5, 3, 281) * pow(163, -1, 281) % 281
    assert phi_ell_specialize(5, j, 281)(163) == 0


@pytest.mark.parametrize("ell,v,p,coeffs", [
    (5, 163, 281, [198, 245, 1]),
    (7, 62, 107, [73, 44, 104, 1]),
    (5, 76, 109, [13, 13, 1]),
])
def test_kernel_factor_examples(ell, v, p, coeffs):
    j = j_from_invariant(ell, v, p)
    g = kernel_factor(ell, v, j, curve_from_j(j, 1, p))
    assert g == FpPoly(coeffs, p)


def test_kernel_factor_rejects_non_root():
    j = j_from_invariant(5, 163, 281)
    with pytest.raises(DegenerateSpecialization):
        kernel_factor(5, 164, j, curve_from_j(j, 1, 281))


def _specializations(ell, p, n, rng):
    out = []
    while len(out) < n:
        v = rng.randrange(1, p)
        try:
            j = j_from_invariant(ell, v, p)
            E = curve_from_j(j, rng.randrange(1, p), p)
            out.append((v, j, E))
        except CMError:
            continue
    return out


@pytest.mark.parametrize("ell", [3, 5, 7])
def test_kernel_factor_divides_division_poly(ell):
    rng = random.Random(ell)
    for p in (101, 211, 409):
        for v, j, E in _specializations(ell, p, 8, rng):
            try:
                g = kernel_factor(ell, v, j, E, verify=False)
            except DegenerateSpecialization:
                continue
            assert g.degree == (ell - 1) // 2
            assert (division_poly(ell, E) % g).is_zero()


@pytest.mark.parametrize("v,p,x3", [(3, 109, 104), (109, 139, 135), (-3, 101, 0)])
def test_x3_examples(v, p, x3):
    assert x3_from_v3(v, p) == x3


def test_x3_is_three_torsion_abscissa():
    rng = random.Random(1)
    for p in (101, 307):
        done = 0
        while done < 100:
            v = rng.randrange(1, p)
            try:
                j = j_from_invariant(3, v, p)
                E = curve_from_j(j, 1, p)
                x = x3_from_v3(v, p)
            except CMError:
                continue
            assert division_poly(3, E)(x) == 0
            done += 1


def test_x3_degenerate():
    # v^2 + 18v - 27 = 0 mod 101 needs 108 to be a square: pick p where it is
    p = next(q for q in primes_between(50, 500) if legendre(108, q) == 1)
    r = sqrt_mod(108, p)
    with pytest.raises(DegenerateSpecialization):
        x3_from_v3((-9 + r) % p, p)


@pytest.mark.parametrize("v,p,coeffs", [(163, 281, [198, 245, 1]), (216, 571, [412, 213, 1])])
def test_g5_normalized_examples(v, p, coeffs):
    assert g5_normalized(v, p) == FpPoly(coeffs, p)


@settings(max_examples=80)
@given(st.sampled_from(primes_between(20, 1000)), st.integers(1, 10 ** 6))
def test_ell5_identities(p, v):
    v %= p
    if v == 0:
        return
    A = (v * v + 22 * v + 125) % p
    B = (v * v + 4 * v - 1) % p
    C = (v * v + 10 * v + 5) % p
    j = pow(C, 3, p) * pow(v, -1, p) % p
    assert A * B * B % p == v * (j - 1728) % p
    if A == 0 or B == 0 or j in (0, 1728 % p):
        return
    E = curve_from_j(j, 1, p)
    assert g5_normalized(v, p) == kernel_factor(5, v, j, E, verify=False)


@settings(max_examples=80)
@given(st.sampled_from(primes_between(20, 1000)), st.integers(1, 10 ** 6))
def test_ell2_identity(p, u):
    u %= p
    if u == 0:
        return
    assert (j_from_u(u, p) - 1728) % p == (u + 64) * (u - 8) ** 2 * pow(u, -1, p) % p


def test_skolem_example():
    v = solve_phi3_skolem(110, 139, zeta=96)
    assert v == 109
    assert v in roots_mod_p(phi_ell_specialize(3, pow(110, 3, 139), 139))


def test_skolem_rejects_bad_zeta():
    with pytest.raises(ValueError):
        solve_phi3_skolem(110, 139, zeta=5)


def test_skolem_roots_are_roots():
    rng = random.Random(9)
    solved = 0
    for p in [q for q in primes_between(50, 800) if q % 3 == 1]:
        for _ in range(6):
            g = rng.randrange(1, p)
            try:
                x = solve_phi3_skolem(g, p, seed=rng.randrange(10))
            except CMError:
                continue
            assert x in roots_mod_p(phi_ell_specialize(3, pow(g, 3, p), p))
            solved += 1
    assert solved > 20


def test_gamma2_from_w11_example():
    gs = gamma2_from_w11(21, 103)
    assert 63 in gs
    assert pow(63, 3, 103) == 66
    for g in gs:
        assert eleven_relation_at(21, 103)(g) == 0
    E = curve_from_j(66, 1, 103)
    assert 5 in splitting_type(division_poly(11, E))


@pytest.mark.parametrize("u,p,x4", [(7, 29, 7), (16, 41, 19), (102, 409, 159)])
def test_P2_examples(u, p, x4):
    assert four_torsion_P2(u, p)(x4) == 0


@pytest.mark.parametrize("u", [0, 8, -64])
def test_P2_excluded(u):
    with pytest.raises(DegenerateSpecialization):
        four_torsion_P2(u, 101)


def test_P2_P4_factor_f4():
    rng = random.Random(2)
    for p in (101, 409, 1009):
        for _ in range(20):
            u = rng.randrange(1, p)
            try:
                E = curve_from_j(j_from_u(u, p), 1, p)
                P2, P4 = four_torsion_P2(u, p), four_torsion_P4(u, p)
            except CMError:
                continue
            assert P2 * P4 == division_poly(4, E).monic()
            assert 4 * P2_discriminant(u, p) % p == discriminant(P2)


def test_P4_split():
    rng = random.Random(3)
    checked = 0
    while checked < 30:
        v = rng.randrange(1, P)
        try:
            Ga, Gb = four_torsion_P4_split(v, P)
            Ga2, Gb2 = four_torsion_P4_split(-v, P)
            u = u_from_v(v, P)
            P4 = four_torsion_P4(u, P)
        except CMError:
            continue
        assert (u + 64) * pow(u, -1, P) % P == v * v % P
        assert Ga * Gb == P4
        assert (Ga2, Gb2) == (Gb, Ga)
        checked += 1


def test_phi2_resolvent_matches_root_finder():
    rng = random.Random(4)
    done = 0
    while done < 50:
        J = rng.randrange(P)
        if J in (0, 1728 % P):
            continue
        assert solve_phi2_resolvent(J, P) == roots_mod_p(phi_ell_specialize(2, J, P))
        done += 1


@pytest.mark.parametrize("p", [409, 1009, 2003])
def test_phi2_resolvent_many_primes(p):
    rng = random.Random(p)
    for _ in range(20):
        J = rng.randrange(1, p)
        if J == 1728 % p:
            continue
        assert solve_phi2_resolvent(J, p) == roots_mod_p(phi_ell_specialize(2, J, p))


def test_phi2_resolvent_three_roots_for_cm_instance():
    # D = 40, p = 41: 4*41 = 2^2 + 40*2^2, so 2 | V and Phi_2 splits completely
    assert len(solve_phi2_resolvent(39, 41)) == 3


def test_phi2_resolvent_degenerate():
    with pytest.raises(DegenerateSpecialization):
        solve_phi2_resolvent(1728, 1009)


def test_d20_data():
    for p in (41, 61, 101, 181):
        s = sqrt_mod(5, p)
        for branch in (s, p - s):
            E = d20_curve(p, branch)
            g = d20_f5_factor(p, branch)
            assert (division_poly(5, E) % g).is_zero()
            assert discriminant(g) == d20_factor_discriminant(p, branch)
            U = p + 1 - naive_count(E)
            assert (U * U - 4 * p) % 20 == 0 and legendre(-(U * U - 4 * p) // 20, p) in (0, 1)


def test_d20_bad_sqrt():
    with pytest.raises(ValueError):
        d20_curve(41, 3)


def test_seven_resultant_character():
    # Res(g7, X^3 + a4 X + a6) agrees with -3 j v A(v) modulo squares
    rng = random.Random(7)
    checked = 0
    for p in primes_between(100, 700):
        for _ in range(3):
            v = rng.randrange(1, p)
            try:
                j = j_from_invariant(7, v, p)
                E = curve_from_j(j, 1, p)
                g = kernel_factor(7, v, j, E, verify=False)
            except CMError:
                continue
            A = (v ** 4 + 14 * v ** 3 + 63 * v * v + 70 * v - 7) % p
            r = resultant(g, E.rhs_poly())
            if r == 0 or A == 0:
                continue
            assert legendre(r, p) == legendre(-3 * j * v * A, p)
            checked += 1
    assert checked > 50
