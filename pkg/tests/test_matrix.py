"""Supermatrix tests: products, brackets, traces, Berezinian, inversion."""

import pytest

from grassgeo.matrix import (
    SuperMatrix,
    berezinian,
    graded_bracket,
    killing_form,
    mat_inverse,
    mat_mul,
    supertrace,
)
from grassgeo.ring import (
    EVEN,
    ODD,
    GRat,
    NotInvertible,
    ParityError,
    SuperFraction,
    frac_equal,
)


def u_plus(model):
    """The sine-Gordon plus-potential: (1/2s) [[0,0,iX],[0,0,-i/X],[-1/X,X,0]]."""
    cat = model.catalog
    h = GRat(1) / 2
    return SuperMatrix(
        cat, 2, 1,
        [
            [0, 0, cat.gen("X", coeff=GRat(0, 1)) * cat.gen("s", -1) * h],
            [0, 0, cat.gen("X", -1, coeff=GRat(0, -1)) * cat.gen("s", -1) * h],
            [
                cat.gen("X", -1, coeff=GRat(-1)) * cat.gen("s", -1) * h,
                cat.gen("X") * cat.gen("s", -1) * h,
                0,
            ],
        ],
    )


def kappa(cat):
    one = cat.one()
    z = cat.zero()
    return SuperMatrix(cat, 2, 1, [[z, z, one], [z, z, one], [one, one, z]])


def test_parity_inference(model):
    cat = model.catalog
    up = u_plus(model)
    assert up.parity == ODD
    assert SuperMatrix.identity(cat, 2, 1).parity == EVEN
    assert SuperMatrix.zeros(cat, 2, 1).parity == EVEN
    het = SuperMatrix.identity(cat, 2, 1) + kappa(cat)
    assert het.parity is None


def test_identity_is_neutral(model):
    cat = model.catalog
    up = u_plus(model)
    eye = SuperMatrix.identity(cat, 2, 1)
    assert mat_mul(eye, up) == up
    assert mat_mul(up, eye) == up


def test_u_plus_square_matches_direct_multiplication(model):
    cat = model.catalog
    sq = mat_mul(u_plus(model), u_plus(model))
    quarter = GRat(1) / 4
    lam_inv = cat.gen("s", -2)
    want = SuperMatrix(
        cat, 2, 1,
        [
            [lam_inv * quarter * GRat(0, -1), cat.gen("X", 2) * lam_inv * quarter * GRat(0, 1), 0],
            [cat.gen("X", -2) * lam_inv * quarter * GRat(0, 1), lam_inv * quarter * GRat(0, -1), 0],
            [0, 0, lam_inv * quarter * GRat(0, -2)],
        ],
    )
    assert sq == want


def test_odd_kappa_square(model):
    cat = model.catalog
    c = cat.gen("s")  # even scalar factor keeps kappa odd
    k = kappa(cat).scale(c)
    sq = mat_mul(k, k)
    c2 = c * c
    want = SuperMatrix(
        cat, 2, 1,
        [[c2, c2, 0], [c2, c2, 0], [0, 0, c2 * 2]],
    )
    assert sq == want


def test_graded_bracket(model):
    cat = model.catalog
    eye = SuperMatrix.identity(cat, 2, 1)
    up = u_plus(model)
    assert graded_bracket(eye, up).is_zero()
    k = kappa(cat)
    assert graded_bracket(k, k) == mat_mul(k, k).scale(2)
    a, b = cat.gen("s"), cat.gen("X")
    diag = SuperMatrix.diagonal(cat, 2, 1, [1, -1, 0])
    off = SuperMatrix(cat, 2, 1, [[0, a, 0], [b, 0, 0], [0, 0, 0]])
    want = SuperMatrix(cat, 2, 1, [[0, a * 2, 0], [b * -2, 0, 0], [0, 0, 0]])
    assert graded_bracket(diag, off) == want
    het = eye + k
    with pytest.raises(ParityError):
        graded_bracket(het, eye)


def test_supertrace(model):
    cat = model.catalog
    assert frac_equal(
        supertrace(SuperMatrix.identity(cat, 2, 1)), SuperFraction(cat.one())
    )
    a, b, c = cat.gen("s"), cat.gen("X"), cat.gen("s", 2)
    d = SuperMatrix.diagonal(cat, 2, 1, [a, b, c])
    assert frac_equal(supertrace(d), SuperFraction(a + b - c))


def test_killing_form_normalisation(model):
    cat = model.catalog
    n1 = SuperMatrix.diagonal(cat, 2, 1, [1, -1, 0])
    one = SuperFraction(cat.one())
    assert frac_equal(killing_form(n1, n1), one)
    i2 = GRat(0, 2)
    n2 = SuperMatrix.diagonal(cat, 2, 1, [GRat(0, 1), GRat(0, 1), i2])
    assert frac_equal(killing_form(n2, n2), one)
    # the plus-potential is null for this form
    up = u_plus(model)
    assert killing_form(up, up).is_zero()


def test_killing_graded_symmetry_symbolic(model):
    cat = model.catalog
    up = u_plus(model)
    k = kappa(cat).scale(cat.gen("X", -1))
    # odd/odd: str(MN) = -str(NM)
    assert frac_equal(killing_form(up, k), -killing_form(k, up))
    even_a = SuperMatrix.diagonal(cat, 2, 1, [cat.gen("s"), 1, cat.gen("X")])
    assert frac_equal(killing_form(even_a, up), killing_form(up, even_a))


def test_berezinian_diagonal(model):
    cat = model.catalog
    eye = SuperMatrix.identity(cat, 2, 1)
    assert frac_equal(berezinian(eye), SuperFraction(cat.one()))
    a, b, c = cat.gen("s", 2), cat.gen("X"), cat.gen("s", 4)
    d = SuperMatrix.diagonal(cat, 2, 1, [a, b, c])
    assert frac_equal(berezinian(d), SuperFraction(a * b, c))


def test_berezinian_multiplicative_symbolic(model):
    cat = model.catalog
    tp, tm = cat.gen("th_p"), cat.gen("th_m")
    M = SuperMatrix(
        cat, 2, 1,
        [
            [cat.one(), cat.gen("s"), tp],
            [0, cat.gen("s", 2), tm],
            [tm, tp * 2, cat.gen("X")],
        ],
    )
    N = SuperMatrix(
        cat, 2, 1,
        [
            [cat.gen("X"), 0, tp * 3],
            [tp * 0, cat.one(), tm - tp],
            [tp, tm, cat.gen("s", -2)],
        ],
    )
    assert M.parity == EVEN and N.parity == EVEN
    lhs = berezinian(mat_mul(M, N))
    rhs = berezinian(M) * berezinian(N)
    assert frac_equal(lhs, rhs)


def test_mat_inverse_diagonal(model):
    cat = model.catalog
    d = SuperMatrix.diagonal(cat, 2, 1, [cat.gen("s", 2), 1, 1])
    inv = mat_inverse(d)
    assert inv == SuperMatrix.diagonal(cat, 2, 1, [cat.gen("s", -2), 1, 1])


def test_mat_inverse_nilpotent_correction(model):
    cat = model.catalog
    tp = cat.gen("th_p")
    # odd constant block times theta gives an even perturbation of I
    K = SuperMatrix(
        cat, 2, 1,
        [[0, 0, cat.one()], [0, 0, 0], [cat.one(), 0, 0]],
    )
    pert = K.scale(tp)
    M = SuperMatrix.identity(cat, 2, 1) + pert
    assert M.parity == EVEN
    inv = mat_inverse(M)
    assert inv == SuperMatrix.identity(cat, 2, 1) - pert
    assert mat_mul(M, inv) == SuperMatrix.identity(cat, 2, 1)
    assert mat_mul(inv, M) == SuperMatrix.identity(cat, 2, 1)


def test_mat_inverse_full_symbolic(model):
    cat = model.catalog
    tp, tm = cat.gen("th_p"), cat.gen("th_m")
    M = SuperMatrix(
        cat, 2, 1,
        [
            [cat.gen("X") + cat.one(), cat.one(), tp],
            [cat.gen("X", -1), cat.gen("s", 2), tm + tp],
            [tm, tp, cat.gen("s", -2)],
        ],
    )
    inv = mat_inverse(M)
    eye = SuperMatrix.identity(cat, 2, 1)
    assert mat_mul(M, inv) == eye
    assert mat_mul(inv, M) == eye


def test_mat_inverse_failures(model):
    cat = model.catalog
    z = SuperMatrix.zeros(cat, 2, 1)
    with pytest.raises(NotInvertible):
        mat_inverse(z)
    k = kappa(cat)
    with pytest.raises(ParityError):
        mat_inverse(k)
    # even but nilpotent column: no bosonically regular pivot
    tp, tm = cat.gen("th_p"), cat.gen("th_m")
    bad = SuperMatrix(
        cat, 2, 1,
        [[tp * tm, 0, 0], [0, cat.one(), 0], [0, 0, cat.one()]],
    )
    with pytest.raises(NotInvertible):
        mat_inverse(bad)


def test_berezinian_requires_invertible_fermion_block(model):
    cat = model.catalog
    tp, tm = cat.gen("th_p"), cat.gen("th_m")
    hollow = SuperMatrix(
        cat, 2, 1,
        [[cat.one(), 0, 0], [0, cat.one(), 0], [0, 0, tp * tm]],
    )
    with pytest.raises(NotInvertible):
        berezinian(hollow)
