"""Ring-layer tests: canonical arithmetic, parity, fractions."""

import random

import pytest

from grassgeo.ring import (
    EVEN,
    ODD,
    Generator,
    GeneratorCatalog,
    GRat,
    G_I,
    NotInvertible,
    CatalogMismatch,
    SuperExpr,
    SuperFraction,
    expr_parity,
    frac_equal,
    frac_invert,
    render_expr,
)


@pytest.fixture(scope="module")
def cat():
    return GeneratorCatalog(
        [
            Generator("th_p", ODD),
            Generator("th_m", ODD),
            Generator("s", EVEN, invertible=True),
            Generator("X", EVEN, invertible=True),
            Generator("P2", EVEN),
        ]
    )


def test_grat_arithmetic():
    a = GRat(1, 2)
    b = GRat(3, -1)
    assert a + b == GRat(4, 1)
    assert a * b == GRat(5, 5)
    assert (a * b) / b == a
    assert -a == GRat(-1, -2)
    assert G_I * G_I == GRat(-1)


def test_odd_generators_anticommute(cat):
    tp = cat.gen("th_p")
    tm = cat.gen("th_m")
    assert tp * tm == -(tm * tp)
    assert (tp * tp).is_zero()
    assert (tm * tm).is_zero()


def test_trig_product_is_half_double_angle(cat):
    # cos*sin in X equals half of sin(2 phi) written in X
    X = cat.gen("X")
    Xi = cat.gen("X", -1)
    half = GRat(1, 0) / 2
    cos = (X + Xi) * half
    sin = (X - Xi) * (GRat(0, -1) / 2)
    sin2 = (cat.gen("X", 2) - cat.gen("X", -2)) * (GRat(0, -1) / 2)
    assert cos * sin == sin2 * half


def test_parity_classification(cat):
    assert expr_parity(cat.gen("th_p") * cat.gen("th_m")) == "even"
    assert expr_parity(cat.gen("s", -1) * cat.gen("th_p")) == "odd"
    assert expr_parity(cat.one() + cat.gen("th_p")) == "heterogeneous"
    assert expr_parity(cat.zero()) == "even"


def test_catalog_mismatch_raises(cat):
    other = GeneratorCatalog([Generator("s", EVEN, invertible=True)])
    with pytest.raises(CatalogMismatch):
        cat.gen("s") * other.gen("s")


def test_negative_power_needs_invertible(cat):
    with pytest.raises(NotInvertible):
        cat.gen("P2", -1)
    with pytest.raises(NotInvertible):
        cat.gen("th_p", -1)
    assert cat.gen("th_p", 2).is_zero()


def _random_expr(cat, rng, max_terms=4):
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        mono = []
        for g in cat.gens:
            if g.parity == ODD:
                mono.append(rng.choice([0, 0, 1]))
            elif g.invertible:
                mono.append(rng.randint(-2, 2))
            else:
                mono.append(rng.randint(0, 2))
        coeff = GRat(rng.randint(-3, 3), rng.randint(-3, 3))
        if coeff:
            terms[tuple(mono)] = coeff
    e = cat.zero()
    for m, c in terms.items():
        e = e + SuperExpr(cat, {m: c})
    return e


def test_associativity_sampled(cat):
    rng = random.Random(12345)
    for _ in range(200):
        a = _random_expr(cat, rng)
        b = _random_expr(cat, rng)
        c = _random_expr(cat, rng)
        assert (a * b) * c == a * (b * c)


def test_supercommutativity_sign(cat):
    rng = random.Random(999)
    for _ in range(100):
        a = _random_expr(cat, rng)
        b = _random_expr(cat, rng)
        pa, pb = a.parity(), b.parity()
        if pa is None or pb is None:
            continue
        sign = -1 if (pa and pb) else 1
        assert a * b == (b * a) * sign


def test_canonical_order_independence(cat):
    # the same multiset of factors in any association order gives one map
    rng = random.Random(7)
    factors = [cat.gen("th_p"), cat.gen("X", -1), cat.gen("th_m"), cat.gen("s", 2)]
    ref = factors[0] * factors[1] * factors[2] * factors[3]
    left = ((factors[0] * factors[1]) * factors[2]) * factors[3]
    right = factors[0] * (factors[1] * (factors[2] * factors[3]))
    assert ref == left == right
    # reordering two odd factors flips the sign
    swapped = factors[2] * factors[1] * factors[0] * factors[3]
    assert swapped == -ref


def test_fraction_equality_cross_multiplication(cat):
    X = cat.gen("X")
    p = SuperFraction(cat.gen("X", 2) - cat.one(), X)
    q = SuperFraction(X - cat.gen("X", -1))
    assert frac_equal(p, q)
    r = SuperFraction(cat.gen("th_p"), cat.gen("s"))
    rr = SuperFraction(cat.gen("th_p") * cat.gen("s", -1))
    assert frac_equal(r, rr)
    assert not frac_equal(
        SuperFraction(cat.gen("th_p")), SuperFraction(cat.gen("th_m"))
    )


def test_fraction_equivalence_relation(cat):
    rng = random.Random(202)
    fracs = []
    while len(fracs) < 6:
        den = _random_expr(cat, rng).bosonic_shadow()
        num = _random_expr(cat, rng)
        if den.is_zero() or den.parity() != EVEN:
            continue
        fracs.append(SuperFraction(num, den))
    for f in fracs:
        assert frac_equal(f, f)
    for f in fracs:
        for g in fracs:
            assert frac_equal(f, g) == frac_equal(g, f)


def test_frac_invert(cat):
    s2 = SuperFraction(cat.gen("s", 2))
    inv = frac_invert(s2)
    assert frac_equal(s2 * inv, SuperFraction(cat.one()))
    nil = SuperFraction(cat.one() + cat.gen("th_p") * cat.gen("th_m"))
    nil_inv = frac_invert(nil)
    assert frac_equal(nil * nil_inv, SuperFraction(cat.one()))
    assert nil_inv == SuperFraction(cat.one() - cat.gen("th_p") * cat.gen("th_m"))
    with pytest.raises(NotInvertible):
        frac_invert(SuperFraction(cat.gen("th_p")))
    with pytest.raises(NotInvertible):
        frac_invert(SuperFraction(cat.gen("th_p") * cat.gen("th_m") + cat.zero()))


def test_frac_double_invert_roundtrip(cat):
    num = cat.gen("s", 2) + cat.gen("th_p") * cat.gen("th_m")
    den = cat.gen("X") + cat.gen("X", -1)
    p = SuperFraction(num, den)
    assert frac_equal(frac_invert(frac_invert(p)), p)


def test_soul_denominator_normalises(cat):
    # denominator with a nilpotent part is rewritten soul-free
    den = cat.gen("s", 2) + cat.gen("th_p") * cat.gen("th_m")
    p = SuperFraction(cat.one(), den)
    assert p.den.soul().is_zero()
    assert frac_equal(p * SuperFraction(den), SuperFraction(cat.one()))


def test_render_examples(cat):
    e = cat.gen("X", 2, coeff=GRat(1, 0) / 4) * cat.gen("s", -4)
    assert render_expr(e) == "1/4*s^-4*X^2"
    assert render_expr(cat.zero()) == "0"
    assert render_expr(-cat.i()) == "-i"
    # equal total degree sorts lexicographically on exponent vectors
    assert render_expr(cat.gen("th_p") - cat.gen("th_m")) == "-th_m + th_p"
