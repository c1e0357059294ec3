"""Exact arithmetic for supercommutative Laurent polynomials.

Values live in a polynomial ring over a fixed ordered catalog of graded
generators.  Odd generators anticommute and square to zero; even generators
commute with everything.  Invertible generators (and only those) may carry
negative exponents.  Coefficients are exact Gaussian rationals, so the
imaginary unit is a coefficient, never a generator.

A quotient layer (SuperFraction) supports division by even elements whose
bosonic shadow (all odd generators set to zero) is nonzero.  Fractions are
normalised so the stored denominator is always its own bosonic shadow; any
nilpotent soul part of a requested denominator is expanded away with the
finite geometric series.
"""

from __future__ import annotations

from bisect import bisect_right
from fractions import Fraction
from typing import Iterable, Mapping

from gmpy2 import mpq

_MPQ = type(mpq())


class CatalogMismatch(ValueError):
    """Two expressions over different generator catalogs were combined."""


class ParityError(ValueError):
    """An operation received an argument of the wrong or undefined parity."""


class NotInvertible(ValueError):
    """Division was requested by an element with no inverse in the ring."""


EVEN = 0
ODD = 1


class GRat:
    """Exact Gaussian rational a + b*i with gmpy2 rational components."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", re if type(re) is _MPQ else mpq(re))
        object.__setattr__(self, "im", im if type(im) is _MPQ else mpq(im))

    @classmethod
    def _raw(cls, re, im):
        self = object.__new__(cls)
        object.__setattr__(self, "re", re)
        object.__setattr__(self, "im", im)
        return self

    def __setattr__(self, name, value):
        raise AttributeError("GRat is immutable")

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if isinstance(other, int):
            return self.re == other and not self.im
        if not isinstance(other, GRat):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __neg__(self):
        return GRat._raw(-self.re, -self.im)

    def __add__(self, other):
        if type(other) is not GRat:
            if isinstance(other, (int, Fraction)):
                other = GRat(other)
            else:
                return NotImplemented
        return GRat._raw(self.re + other.re, self.im + other.im)

    def __sub__(self, other):
        if type(other) is not GRat:
            if isinstance(other, (int, Fraction)):
                other = GRat(other)
            else:
                return NotImplemented
        return GRat._raw(self.re - other.re, self.im - other.im)

    def __mul__(self, other):
        if type(other) is not GRat:
            if isinstance(other, (int, Fraction)):
                other = GRat(other)
            else:
                return NotImplemented
        return GRat._raw(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def __truediv__(self, other):
        if type(other) is not GRat:
            if isinstance(other, (int, Fraction)):
                other = GRat(other)
            else:
                return NotImplemented
        norm = other.re * other.re + other.im * other.im
        if not norm:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return GRat._raw(
            (self.re * other.re + self.im * other.im) / norm,
            (self.im * other.re - self.re * other.im) / norm,
        )

    def conj(self):
        return GRat._raw(self.re, -self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GRat({str(self.re)!r}, {str(self.im)!r})"

    def __str__(self):
        return render_coeff(self)


G_ZERO = GRat(0)
G_ONE = GRat(1)
G_I = GRat(0, 1)
G_MINUS_I = GRat(0, -1)


def _frac_str(q) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def render_coeff(c: GRat) -> str:
    """Canonical text of a Gaussian rational: a, a/b, i, (a/b)i, (a + b i)."""
    if not c.im:
        return _frac_str(c.re)
    if not c.re:
        if c.im == 1:
            return "i"
        if c.im == -1:
            return "-i"
        body = _frac_str(abs(c.im))
        sign = "-" if c.im < 0 else ""
        if abs(c.im).denominator == 1:
            return f"{sign}{body}i"
        return f"{sign}({body})i"
    im = c.im
    op = "-" if im < 0 else "+"
    imtxt = "i" if abs(im) == 1 else f"{_frac_str(abs(im))} i"
    return f"({_frac_str(c.re)} {op} {imtxt})"


class Generator:
    """One catalog entry: a named generator with a parity and flags.

    ``role`` is free text; the jet layer recognises a few values
    (``sqrt_lambda`` and the internal jet roles) when building derivations.
    """

    __slots__ = ("name", "parity", "invertible", "role")

    def __init__(self, name: str, parity: int, invertible: bool = False, role: str = ""):
        if parity not in (EVEN, ODD):
            raise ValueError(f"parity must be 0 or 1, got {parity!r}")
        if parity == ODD and invertible:
            raise ValueError(f"odd generator {name!r} cannot be invertible")
        if not name.isidentifier():
            raise ValueError(f"generator name {name!r} is not an identifier")
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "parity", parity)
        object.__setattr__(self, "invertible", invertible)
        object.__setattr__(self, "role", role)

    def __setattr__(self, name, value):
        raise AttributeError("Generator is immutable")

    def __repr__(self):
        kind = "odd" if self.parity else "even"
        inv = ", invertible" if self.invertible else ""
        return f"Generator({self.name!r}, {kind}{inv})"


class GeneratorCatalog:
    """Immutable ordered list of generators; the index space of monomials."""

    __slots__ = (
        "gens", "names", "index", "odd_positions", "invertible_mask", "_mono_odds",
    )

    def __init__(self, gens: Iterable[Generator]):
        gens = tuple(gens)
        names = tuple(g.name for g in gens)
        if len(set(names)) != len(names):
            raise ValueError("generator names must be unique")
        object.__setattr__(self, "gens", gens)
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "index", {n: i for i, n in enumerate(names)})
        object.__setattr__(
            self, "odd_positions", tuple(i for i, g in enumerate(gens) if g.parity == ODD)
        )
        object.__setattr__(
            self, "invertible_mask", tuple(g.invertible for g in gens)
        )
        object.__setattr__(self, "_mono_odds", {})  # cache mono -> odd positions

    def __setattr__(self, name, value):
        raise AttributeError("GeneratorCatalog is immutable")

    def _odds_of(self, mono: tuple):
        memo = self._mono_odds
        r = memo.get(mono)
        if r is None:
            r = [i for i in self.odd_positions if mono[i]]
            memo[mono] = r
        return r

    def __len__(self):
        return len(self.gens)

    def __contains__(self, name):
        return name in self.index

    def position(self, name: str) -> int:
        try:
            return self.index[name]
        except KeyError:
            raise KeyError(f"unknown generator {name!r}") from None

    def odd_count(self) -> int:
        return len(self.odd_positions)

    # Expression constructors ------------------------------------------------

    def zero(self) -> "SuperExpr":
        return SuperExpr(self, {})

    def const(self, c) -> "SuperExpr":
        c = _as_grat(c)
        if not c:
            return self.zero()
        return SuperExpr(self, {(0,) * len(self.gens): c})

    def one(self) -> "SuperExpr":
        return self.const(1)

    def i(self) -> "SuperExpr":
        return self.const(G_I)

    def gen(self, name: str, power: int = 1, coeff=1) -> "SuperExpr":
        pos = self.position(name)
        g = self.gens[pos]
        if power == 0:
            return self.const(coeff)
        if power < 0 and not g.invertible:
            raise NotInvertible(f"generator {name!r} is not invertible")
        if g.parity == ODD and power != 1:
            if power > 1:
                return self.zero()
            raise NotInvertible(f"odd generator {name!r} is not invertible")
        mono = [0] * len(self.gens)
        mono[pos] = power
        c = _as_grat(coeff)
        if not c:
            return self.zero()
        return SuperExpr(self, {tuple(mono): c})


def _as_grat(c) -> GRat:
    if isinstance(c, GRat):
        return c
    if isinstance(c, (int, Fraction)):
        return GRat(c)
    raise TypeError(f"cannot use {type(c).__name__} as a coefficient")


def mono_parity(catalog: GeneratorCatalog, mono: tuple) -> int:
    p = 0
    for i in catalog.odd_positions:
        p += mono[i]
    return p & 1


def mono_key(mono: tuple):
    """Canonical order: total degree, then lexicographic exponents."""
    return (sum(mono), mono)


def mono_mul(catalog: GeneratorCatalog, m1: tuple, m2: tuple):
    """Merge two monomials; returns (sign, monomial) or None if it vanishes.

    The sign is (-1)^k where k counts transpositions needed to interleave the
    odd factors of m2 into m1 keeping catalog order.
    """
    odds1 = catalog._odds_of(m1)
    odds2 = catalog._odds_of(m2)
    if odds1 and odds2:
        inversions = 0
        n1 = len(odds1)
        for p in odds2:
            if m1[p]:
                return None  # repeated odd generator
            inversions += n1 - bisect_right(odds1, p)
        sign = -1 if inversions & 1 else 1
    else:
        sign = 1
    return sign, tuple(map(int.__add__, m1, m2))


def _acc_term(out: dict, mono: tuple, coeff: GRat):
    acc = out.get(mono)
    if acc is None:
        out[mono] = coeff
    else:
        acc = acc + coeff
        if acc:
            out[mono] = acc
        else:
            del out[mono]


def _acc_mul(out: dict, catalog: GeneratorCatalog, ta: Mapping, tb: Mapping, scale: GRat = None):
    """Accumulate the product of two term maps into ``out``."""
    for m1, c1 in ta.items():
        if scale is not None:
            c1 = c1 * scale
        for m2, c2 in tb.items():
            sm = mono_mul(catalog, m1, m2)
            if sm is None:
                continue
            sign, m = sm
            c = c1 * c2
            if sign < 0:
                c = -c
            _acc_term(out, m, c)


class SuperExpr:
    """Canonical supercommutative Laurent polynomial.

    Stored as a map monomial -> nonzero GRat.  Two expressions are equal iff
    the maps are identical, so canonical-form zero testing is map emptiness.
    Instances are immutable; all operations return new values.
    """

    __slots__ = ("catalog", "terms", "_hash")

    def __init__(self, catalog: GeneratorCatalog, terms: Mapping[tuple, GRat]):
        object.__setattr__(self, "catalog", catalog)
        object.__setattr__(self, "terms", dict(terms))
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("SuperExpr is immutable")

    # -- basics ---------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, SuperExpr):
            return NotImplemented
        return self.catalog is other.catalog and self.terms == other.terms

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((id(self.catalog), frozenset(self.terms.items())))
            object.__setattr__(self, "_hash", h)
        return h

    def parity(self):
        """EVEN, ODD, or None for heterogeneous or zero expressions."""
        if not self.terms:
            return None
        cat = self.catalog
        it = iter(self.terms)
        p = mono_parity(cat, next(it))
        for m in it:
            if mono_parity(cat, m) != p:
                return None
        return p

    def _check(self, other: "SuperExpr"):
        if self.catalog is not other.catalog:
            raise CatalogMismatch("expressions over different catalogs")

    # -- ring operations --------------------------------------------------------

    def __neg__(self):
        return SuperExpr(self.catalog, {m: -c for m, c in self.terms.items()})

    def __add__(self, other):
        if isinstance(other, (int, Fraction, GRat)):
            other = self.catalog.const(other)
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            acc = out.get(m)
            if acc is None:
                out[m] = c
            else:
                acc = acc + c
                if acc:
                    out[m] = acc
                else:
                    del out[m]
        return SuperExpr(self.catalog, out)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, GRat)):
            other = self.catalog.const(other)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GRat)):
            c = _as_grat(other)
            if not c:
                return self.catalog.zero()
            return SuperExpr(self.catalog, {m: v * c for m, v in self.terms.items()})
        self._check(other)
        out: dict = {}
        _acc_mul(out, self.catalog, self.terms, other.terms)
        return SuperExpr(self.catalog, out)

    __rmul__ = __mul__

    @staticmethod
    def sum_of(catalog: GeneratorCatalog, exprs) -> "SuperExpr":
        out: dict = {}
        for e in exprs:
            for m, c in e.terms.items():
                _acc_term(out, m, c)
        return SuperExpr(catalog, out)

    def __radd__(self, other):
        return self + other

    def __rsub__(self, other):
        return (-self) + other

    def bosonic_shadow(self) -> "SuperExpr":
        """The expression with every odd generator set to zero."""
        odd = self.catalog.odd_positions
        out = {m: c for m, c in self.terms.items() if not any(m[i] for i in odd)}
        return SuperExpr(self.catalog, out)

    def soul(self) -> "SuperExpr":
        """The nilpotent part: terms containing at least one odd generator."""
        odd = self.catalog.odd_positions
        out = {m: c for m, c in self.terms.items() if any(m[i] for i in odd)}
        return SuperExpr(self.catalog, out)

    def coefficient(self, mono: tuple) -> GRat:
        return self.terms.get(mono, G_ZERO)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: mono_key(kv[0]))

    def leading_coeff(self) -> GRat:
        if not self.terms:
            return G_ZERO
        m = min(self.terms, key=mono_key)
        return self.terms[m]

    def __repr__(self):
        return f"<SuperExpr {render_expr(self)}>"

    def __str__(self):
        return render_expr(self)


def ring_mul(a: SuperExpr, b: SuperExpr) -> SuperExpr:
    """Canonical product of two expressions over the same catalog."""
    return a * b


def expr_parity(a: SuperExpr) -> str:
    """Classify an expression as 'even', 'odd', or 'heterogeneous'."""
    p = a.parity()
    if p == EVEN or a.is_zero():
        return "even"
    if p == ODD:
        return "odd"
    return "heterogeneous"


# -- rendering ------------------------------------------------------------------


def _coeff_sign_split(c: GRat):
    """Split a coefficient into (sign, magnitude-ish) for term joining.

    Pure real and pure imaginary coefficients expose their sign; mixed ones
    render fully parenthesised and count as positive.
    """
    if not c.im:
        return (-1, GRat(-c.re)) if c.re < 0 else (1, c)
    if not c.re:
        return (-1, GRat(0, -c.im)) if c.im < 0 else (1, c)
    return (1, c)


def _render_mono(catalog: GeneratorCatalog, mono: tuple, coeff: GRat) -> str:
    parts = []
    for i, e in enumerate(mono):
        if e == 0:
            continue
        name = catalog.names[i]
        parts.append(name if e == 1 else f"{name}^{e}")
    if not parts:
        return render_coeff(coeff)
    if coeff == G_ONE:
        return "*".join(parts)
    return "*".join([render_coeff(coeff)] + parts)


def render_expr(e: SuperExpr) -> str:
    """Canonical text form; parses back to the identical expression."""
    if e.is_zero():
        return "0"
    pieces = []
    for mono, coeff in e.sorted_terms():
        sign, mag = _coeff_sign_split(coeff)
        text = _render_mono(e.catalog, mono, mag)
        if not pieces:
            pieces.append(f"-{text}" if sign < 0 else text)
        else:
            pieces.append(f"{'-' if sign < 0 else '+'} {text}")
    return " ".join(pieces)


# -- fractions ----------------------------------------------------------------


def _soul_free_parts(den: SuperExpr):
    """Rewrite 1/den with a soul-free denominator.

    Returns (mul, shadow_den) with 1/den == mul / shadow_den where
    shadow_den has no odd generators.  Uses the terminating geometric series
    on the nilpotent soul: 1/(d0 + n) = sum (-n)^k / d0^(k+1).
    """
    d0 = den.bosonic_shadow()
    if d0.is_zero():
        raise NotInvertible("denominator has zero bosonic shadow")
    n = den.soul()
    if n.is_zero():
        return den.catalog.one(), den
    powers = [den.catalog.one()]
    acc = n
    while not acc.is_zero():
        powers.append(acc)
        acc = acc * n
    k = len(powers)  # n^k == 0
    # mul = sum_{j<k} (-1)^j n^j d0^(k-1-j); denominator d0^k
    d0_pows = [den.catalog.one()]
    for _ in range(k - 1):
        d0_pows.append(d0_pows[-1] * d0)
    mul = den.catalog.zero()
    for j in range(k):
        term = powers[j] * d0_pows[k - 1 - j]
        mul = mul + (term if j % 2 == 0 else -term)
    return mul, d0_pows[-1] * d0


def _mono_all_invertible(catalog: GeneratorCatalog, mono: tuple) -> bool:
    return all(e == 0 or catalog.invertible_mask[i] for i, e in enumerate(mono))


def _is_one_expr(e: SuperExpr) -> bool:
    if len(e.terms) != 1:
        return False
    ((mono, coeff),) = e.terms.items()
    return coeff == G_ONE and not any(mono)


class SuperFraction:
    """Quotient num/den with an even, bosonically regular denominator.

    Construction normalises: soul parts of the denominator are expanded away,
    a single-monomial denominator in invertible generators is folded into the
    numerator, and the denominator's leading coefficient is scaled to one.
    Equality is exact cross-multiplication; no gcd reduction is attempted.
    """

    __slots__ = ("num", "den", "den_one")

    def __init__(self, num: SuperExpr, den: SuperExpr = None):
        if den is None:
            self._finish(num, None)
            return
        if num.catalog is not den.catalog:
            raise CatalogMismatch("fraction parts over different catalogs")
        if den.is_zero():
            raise NotInvertible("zero denominator")
        if _is_one_expr(den):
            self._finish(num, None)
            return
        if den.parity() != EVEN:
            raise ParityError("denominator must have even parity")
        mul, den = _soul_free_parts(den)
        if not _is_one_expr(mul):
            num = num * mul
        if len(den.terms) == 1:
            ((mono, coeff),) = den.terms.items()
            if _mono_all_invertible(num.catalog, mono):
                inv = tuple(-e for e in mono)
                num = SuperExpr(
                    num.catalog,
                    {
                        mono_mul(num.catalog, m, inv)[1]: c / coeff
                        for m, c in num.terms.items()
                    },
                )
                self._finish(num, None)
                return
        lead = den.leading_coeff()
        if lead != G_ONE:
            num = num * (G_ONE / lead)
            den = den * (G_ONE / lead)
        self._finish(num, den)

    def _finish(self, num, den):
        one = den is None
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", num.catalog.one() if one else den)
        object.__setattr__(self, "den_one", one or _is_one_expr(den))

    @classmethod
    def _poly(cls, num: SuperExpr) -> "SuperFraction":
        """Fast constructor for a polynomial value (denominator one)."""
        self = object.__new__(cls)
        self._finish(num, None)
        return self

    def __setattr__(self, name, value):
        raise AttributeError("SuperFraction is immutable")

    @property
    def catalog(self):
        return self.num.catalog

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self):
        return not self.num.is_zero()

    def parity(self):
        return self.num.parity()

    def _coerce(self, other):
        if isinstance(other, SuperFraction):
            return other
        if isinstance(other, SuperExpr):
            return SuperFraction(other)
        if isinstance(other, (int, Fraction, GRat)):
            return SuperFraction(self.catalog.const(other))
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.den_one and other.den_one:
            return SuperFraction._poly(self.num + other.num)
        if self.den == other.den:
            return SuperFraction(self.num + other.num, self.den)
        return SuperFraction(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    __radd__ = __add__

    def __neg__(self):
        f = object.__new__(SuperFraction)
        object.__setattr__(f, "num", -self.num)
        object.__setattr__(f, "den", self.den)
        object.__setattr__(f, "den_one", self.den_one)
        return f

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.den_one and other.den_one:
            return SuperFraction._poly(self.num * other.num)
        return SuperFraction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * frac_invert(other)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return frac_equal(self, other)

    def __hash__(self):
        raise TypeError("SuperFraction is not hashable (equality is semantic)")

    def scale(self, c) -> "SuperFraction":
        if self.den_one:
            return SuperFraction._poly(self.num * c)
        return SuperFraction(self.num * c, self.den)

    def __repr__(self):
        return f"<SuperFraction {render_fraction(self)}>"

    def __str__(self):
        return render_fraction(self)


def render_fraction(p: SuperFraction) -> str:
    if p.den == p.catalog.one():
        return render_expr(p.num)
    return f"({render_expr(p.num)}) / ({render_expr(p.den)})"


def frac_equal(p: SuperFraction, q: SuperFraction) -> bool:
    """True iff num(p)*den(q) - num(q)*den(p) vanishes identically."""
    if p.catalog is not q.catalog:
        raise CatalogMismatch("fractions over different catalogs")
    return (p.num * q.den - q.num * p.den).is_zero()


def frac_invert(p: SuperFraction) -> SuperFraction:
    """Reciprocal; requires an even numerator with nonzero bosonic shadow."""
    par = p.num.parity()
    if par != EVEN:
        kind = "zero" if p.num.is_zero() else ("odd" if par == ODD else "heterogeneous")
        raise NotInvertible(f"cannot invert fraction with {kind} numerator")
    if p.num.bosonic_shadow().is_zero():
        raise NotInvertible("cannot invert fraction whose numerator has zero bosonic shadow")
    return SuperFraction(p.den, p.num)
