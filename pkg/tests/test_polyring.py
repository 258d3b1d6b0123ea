import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from cmtorsion.errors import NotSquarefree
from cmtorsion.polyring import (
    FpPoly,
    _kronecker_mul,
    _schoolbook_mul,
    discriminant,
    distinct_degree_factorization,
    factor_squarefree,
    is_squarefree,
    one_factor_of_degree,
    poly_gcd,
    poly_xgcd,
    powmod_xp,
    resultant,
    roots_mod_p,
    splitting_type,
)

P = 101


def polys(p=P, max_deg=12):
    return st.lists(st.integers(0, p - 1), max_size=max_deg + 1).map(lambda c: FpPoly(c, p))


def nonzero_polys(p=P, max_deg=12):
    return polys(p, max_deg).filter(lambda f: not f.is_zero())


def X(p=P):
    return FpPoly.x(p)


def test_gcd_examples():
    x = X()
    assert poly_gcd(x * x - 1, x - 1) == x - 1
    f = FpPoly([4, 0, 6], P)
    assert poly_gcd(f, FpPoly([], P)) == f.monic()


def test_gcd_modulus_mismatch():
    with pytest.raises(ValueError):
        poly_gcd(FpPoly([1, 1], 7), FpPoly([1, 1], 11))


def test_gcd_with_xp_isolates_linear_factors():
    rng = random.Random(3)
    for p in (7, 31, 101, 997):
        for _ in range(10):
            g = FpPoly([rng.randrange(p) for _ in range(6)] + [1], p)
            lin = poly_gcd(powmod_xp(g) - FpPoly.x(p), g)
            roots = [a for a in range(p) if g(a) == 0]
            assert lin == FpPoly.from_roots(roots, p)


def test_powmod_xp_examples():
    g = FpPoly([13, 13, 1], 109)
    assert powmod_xp(g) == FpPoly([96, 108], 109)
    assert powmod_xp(FpPoly.x(101)).is_zero()
    with pytest.raises(ValueError):
        powmod_xp(FpPoly([3], 101))


def test_powmod_xp_matches_repeated_multiplication():
    rng = random.Random(5)
    for _ in range(5):
        g = FpPoly([rng.randrange(P) for _ in range(3)] + [1], P)
        acc = FpPoly([1], P)
        for _ in range(P):
            acc = (acc * X()) % g
        assert powmod_xp(g) == acc


def test_roots_examples():
    assert 110 in roots_mod_p(FpPoly([20880, -780, 1], 139))
    assert 3 in roots_mod_p(FpPoly([729, 81, 1], 109))
    assert roots_mod_p(FpPoly([1, 0, 1], 7)) == []
    with pytest.raises(ValueError):
        roots_mod_p(FpPoly([], 7))


@settings(max_examples=50)
@given(nonzero_polys(31, 8), st.integers(0, 5))
def test_roots_match_brute_force_and_ignore_seed(f, seed):
    assert roots_mod_p(f, seed) == [a for a in range(31) if f(a) == 0]


def test_resultant_example_eleven_torsion():
    g11 = FpPoly([15, 99, 55, 22, 81, 1], 103)
    assert resultant(g11, FpPoly([83, 73, 0, 1], 103)) == 98


@given(st.integers(0, P - 1), nonzero_polys())
def test_resultant_linear(a, g):
    assert resultant(FpPoly([-a, 1], P), g) == g(a)


def _det_mod(m, p):
    m = [row[:] for row in m]
    n = len(m)
    det = 1
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] % p), None)
        if piv is None:
            return 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det = det * m[c][c] % p
        inv = pow(m[c][c], -1, p)
        for r in range(c + 1, n):
            k = m[r][c] * inv % p
            for cc in range(c, n):
                m[r][cc] = (m[r][cc] - k * m[c][cc]) % p
    return det % p


def sylvester(f, g):
    m, n = f.degree, g.degree
    fc, gc = list(reversed(f.coeffs)), list(reversed(g.coeffs))
    rows = []
    for i in range(n):
        rows.append([0] * i + fc + [0] * (n - 1 - i))
    for i in range(m):
        rows.append([0] * i + gc + [0] * (m - 1 - i))
    return rows


@settings(max_examples=60)
@given(st.data())
def test_resultant_matches_sylvester_determinant(data):
    f = data.draw(nonzero_polys(P, 6).filter(lambda q: q.degree >= 1))
    g = data.draw(nonzero_polys(P, 6).filter(lambda q: q.degree >= 1))
    assert resultant(f, g) == _det_mod(sylvester(f, g), P)


def test_resultant_of_zero_raises():
    with pytest.raises(ValueError):
        resultant(FpPoly([], 7), FpPoly([1, 1], 7))


def test_discriminant_of_quadratic():
    f = FpPoly([3, 5, 2], P)
    assert discriminant(f) == (25 - 24) % P


def test_splitting_type_examples():
    assert splitting_type(FpPoly([1, 0, 1], 7)) == [2]
    with pytest.raises(NotSquarefree):
        splitting_type(FpPoly([1, 2, 1], 7))


def _brute_force_factor_degrees(f):
    """Degrees of irreducible factors by trial division with all monic polys."""
    p = f.p
    rest = f.monic()
    degrees = []
    d = 1
    while rest.degree > 0:
        if 2 * d > rest.degree:
            degrees.append(rest.degree)
            break
        found = False
        for tail in itertools.product(range(p), repeat=d):
            q = FpPoly(list(tail) + [1], p)
            quo, rem = divmod(rest, q)
            if rem.is_zero():
                degrees.append(d)
                rest = quo.monic()
                found = True
                break
        if not found:
            d += 1
    return sorted(degrees)


def test_splitting_type_matches_brute_force():
    rng = random.Random(11)
    checked = 0
    while checked < 15:
        f = FpPoly([rng.randrange(31) for _ in range(6)] + [1], 31)
        if not is_squarefree(f):
            continue
        assert splitting_type(f) == _brute_force_factor_degrees(f)
        checked += 1


@settings(max_examples=40)
@given(nonzero_polys(31, 10), st.integers(0, 3))
def test_factorization_reconstructs(f, seed):
    if f.degree < 1 or not is_squarefree(f):
        return
    factors = factor_squarefree(f, seed)
    prod = FpPoly([1], 31)
    for q in factors:
        prod = prod * q
        assert splitting_type(q) == [q.degree]
    assert prod == f.monic()
    assert sorted(q.degree for q in factors) == splitting_type(f)


def test_one_factor_of_degree():
    rng = random.Random(2)
    for _ in range(10):
        f = FpPoly([rng.randrange(P) for _ in range(12)] + [1], P)
        if not is_squarefree(f):
            continue
        for part, d in distinct_degree_factorization(f):
            h = one_factor_of_degree(part, d, seed=rng.randrange(100))
            assert h.degree == d and (part % h).is_zero()


@given(polys(), polys(), polys())
def test_ring_axioms(f, g, h):
    assert (f + g) + h == f + (g + h)
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert f * g == g * f
    assert f - f == FpPoly([], P)


@given(polys(P, 80), nonzero_polys(P, 60))
def test_division_identity(f, g):
    q, r = divmod(f, g)
    assert q * g + r == f
    assert r.degree < g.degree


@settings(max_examples=30)
@given(st.sampled_from([3, 101, 2 ** 31 - 1, 2 ** 61 - 1, 2 ** 127 - 1]), st.data())
def test_kronecker_matches_schoolbook(p, data):
    a = data.draw(st.lists(st.integers(0, p - 1), min_size=1, max_size=70))
    b = data.draw(st.lists(st.integers(0, p - 1), min_size=1, max_size=70))
    assert _kronecker_mul(a, b, p) == _schoolbook_mul(a, b, p)


@given(nonzero_polys(P, 8), nonzero_polys(P, 8))
def test_xgcd_bezout(f, g):
    d, s, t = poly_xgcd(f, g)
    assert s * f + t * g == d
    assert d == poly_gcd(f, g)


def test_polynomial_string_and_eval():
    f = FpPoly([1, 0, 2], 7)
    assert f(3) == (1 + 2 * 9) % 7
    assert f.degree == 2 and FpPoly([], 7).degree == -1
    assert "X^2" in str(f)
