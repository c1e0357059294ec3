"""Jet calculus for one bosonic superfield.

The independent variables never appear explicitly: all dependence on the
light-cone coordinates and the odd coordinates passes through the two odd
coordinate generators th_p, th_m and the pure-jet generators Pp_a = D_+^a phi,
Pm_b = D_-^b phi.  Mixed derivatives are rewritten eagerly through the field
equation D_+ D_- phi = rhs and the anticommutation {D_+, D_-} = 0, so every
expression lives in a free polynomial ring and zero testing is canonical-form
emptiness.

The primitive derivations are D_+ and D_-.  The even coordinate derivatives
and the plain odd-coordinate derivatives are derived operators:

    D_{x+-} = i D_+-^2          D_{theta+-} = D_+- + i th_+- D_{x+-}

and d_lambda differentiates the spectral parameter through its square root
generator (role ``sqrt_lambda``).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .ring import (
    EVEN,
    ODD,
    Generator,
    GeneratorCatalog,
    GRat,
    G_I,
    ParityError,
    SuperExpr,
    SuperFraction,
    render_expr,
)


class JetOrderOverflow(RuntimeError):
    """A derivation needed a pure jet beyond the configured maximum order."""


THETA_PLUS = "th_p"
THETA_MINUS = "th_m"
HARD_CAP = 12

BASIC_KINDS = ("D+", "D-", "Dx+", "Dx-", "Dth+", "Dth-", "Dlam")
_KIND_PARITY = {
    "D+": ODD,
    "D-": ODD,
    "Dth+": ODD,
    "Dth-": ODD,
    "Dx+": EVEN,
    "Dx-": EVEN,
    "Dlam": EVEN,
}


def jet_name(order: int, plus: bool) -> str:
    return f"{'Pp' if plus else 'Pm'}{order}"


class JetSpec:
    """Catalog plus rewriting rules for one superfield model.

    ``user_gens`` are the model's own parameters (spectral root, exponentials
    of the field, odd constants).  ``rhs`` builds the field-equation value of
    D_+ D_- phi over the finished catalog.  ``d_rules`` maps a user generator
    name to a pair of builders for its D_+ and D_- images; generators without
    a rule are constants for both derivations.
    """

    def __init__(self, user_gens, rhs, d_rules=None, max_order: int = 4, hard_cap: int = HARD_CAP):
        if not 1 <= max_order <= hard_cap:
            raise ValueError(f"max_order must be in 1..{hard_cap}")
        d_rules = dict(d_rules or {})
        gens = [Generator(THETA_PLUS, ODD, role="theta+"), Generator(THETA_MINUS, ODD, role="theta-")]
        reserved = {THETA_PLUS, THETA_MINUS}
        for g in user_gens:
            if g.name in reserved or g.name.startswith(("Pp", "Pm")):
                raise ValueError(f"generator name {g.name!r} is reserved")
            gens.append(g)
        for a in range(1, max_order + 1):
            gens.append(Generator(jet_name(a, True), a & 1, role=f"jet+{a}"))
        for b in range(1, max_order + 1):
            gens.append(Generator(jet_name(b, False), b & 1, role=f"jet-{b}"))
        self.catalog = GeneratorCatalog(gens)
        self.max_order = max_order
        self.hard_cap = hard_cap
        self.rhs = rhs(self.catalog) if callable(rhs) else rhs
        if self.rhs.catalog is not self.catalog:
            raise ValueError("equation RHS must be built over the model catalog")
        if not self.rhs.is_zero() and self.rhs.parity() != EVEN:
            raise ParityError("equation RHS must be even")
        unknown = set(d_rules) - {g.name for g in user_gens}
        if unknown:
            raise ValueError(f"derivative rules for unknown generators: {sorted(unknown)}")

        cat = self.catalog
        n = len(cat)
        self._dplus_img = [cat.zero()] * n
        self._dminus_img = [cat.zero()] * n
        self._dlam_img = [cat.zero()] * n
        self._dplus_img[cat.position(THETA_PLUS)] = cat.one()
        self._dminus_img[cat.position(THETA_MINUS)] = cat.one()
        for name, (dp, dm) in d_rules.items():
            pos = cat.position(name)
            img_p = dp(cat) if callable(dp) else dp
            img_m = dm(cat) if callable(dm) else dm
            for img, lbl in ((img_p, "D+"), (img_m, "D-")):
                want = (cat.gens[pos].parity + 1) & 1
                if not img.is_zero() and img.parity() != want:
                    raise ParityError(f"{lbl} rule for {name!r} has wrong parity")
            self._dplus_img[pos] = img_p
            self._dminus_img[pos] = img_m
        for a in range(1, max_order):
            self._dplus_img[cat.position(jet_name(a, True))] = cat.gen(jet_name(a + 1, True))
            self._dminus_img[cat.position(jet_name(a, False))] = cat.gen(jet_name(a + 1, False))
        self._dplus_img[cat.position(jet_name(1, False))] = self.rhs
        self._dminus_img[cat.position(jet_name(1, True))] = -self.rhs
        for pos, g in enumerate(cat.gens):
            if g.role == "sqrt_lambda":
                self._dlam_img[pos] = cat.gen(g.name, -1, coeff=GRat(1) / 2)
        self._top_plus = cat.position(jet_name(max_order, True))
        self._top_minus = cat.position(jet_name(max_order, False))
        # mixed-action memos, filled lazily: D+ on Pm_b and D- on Pp_a, b,a >= 2
        self._mixed_plus: dict = {}
        self._mixed_minus: dict = {}

    # -- helpers ----------------------------------------------------------------

    def theta(self, plus: bool) -> SuperExpr:
        return self.catalog.gen(THETA_PLUS if plus else THETA_MINUS)

    def jet(self, order: int, plus: bool) -> SuperExpr:
        return self.catalog.gen(jet_name(order, plus))

    def _overflow(self, plus: bool):
        raise JetOrderOverflow(
            f"derivation exceeds pure-jet order {self.max_order} "
            f"({'Pp' if plus else 'Pm'} chain); raise max_order (hard cap {self.hard_cap})"
        )

    def _img_plus(self, pos: int) -> SuperExpr:
        if pos == self._top_plus:
            self._overflow(True)
        cat = self.catalog
        g = cat.gens[pos]
        if g.role.startswith("jet-"):
            b = int(g.role[4:])
            if b >= 2:
                img = self._mixed_plus.get(b)
                if img is None:
                    prev = self._img_plus(cat.position(jet_name(b - 1, False)))
                    img = -self.d_minus(prev)
                    self._mixed_plus[b] = img
                return img
        return self._dplus_img[pos]

    def _img_minus(self, pos: int) -> SuperExpr:
        if pos == self._top_minus:
            self._overflow(False)
        cat = self.catalog
        g = cat.gens[pos]
        if g.role.startswith("jet+"):
            a = int(g.role[4:])
            if a >= 2:
                img = self._mixed_minus.get(a)
                if img is None:
                    prev = self._img_minus(cat.position(jet_name(a - 1, True)))
                    img = -self.d_plus(prev)
                    self._mixed_minus[a] = img
                return img
        return self._dminus_img[pos]

    # -- derivations on expressions ----------------------------------------------

    def _apply(self, e: SuperExpr, img, odd: bool) -> SuperExpr:
        cat = self.catalog
        if e.catalog is not cat:
            raise ValueError("expression is not over the model catalog")
        parities = [g.parity for g in cat.gens]
        out = cat.zero()
        width = len(cat)
        for mono, coeff in e.terms.items():
            sign = 1
            positions = [p for p in range(width) if mono[p]]
            for j, pos in enumerate(positions):
                k = mono[pos]
                gimg = img(pos)
                if not gimg.is_zero():
                    pre = [0] * width
                    for q in positions[:j]:
                        pre[q] = mono[q]
                    factor = GRat(1)
                    if parities[pos] == EVEN:
                        pre[pos] = k - 1
                        factor = GRat(k)
                    suf = [0] * width
                    for q in positions[j + 1:]:
                        suf[q] = mono[q]
                    c = coeff * factor
                    if odd and sign < 0:
                        c = -c
                    term = SuperExpr(cat, {tuple(pre): c}) * gimg
                    if any(suf):
                        term = term * SuperExpr(cat, {tuple(suf): GRat(1)})
                    out = out + term
                if odd and parities[pos] == ODD:
                    sign = -sign
        return out

    def d_plus(self, e: SuperExpr) -> SuperExpr:
        return self._apply(e, self._img_plus, odd=True)

    def d_minus(self, e: SuperExpr) -> SuperExpr:
        return self._apply(e, self._img_minus, odd=True)

    def dx_plus(self, e: SuperExpr) -> SuperExpr:
        return self.d_plus(self.d_plus(e)) * G_I

    def dx_minus(self, e: SuperExpr) -> SuperExpr:
        return self.d_minus(self.d_minus(e)) * G_I

    def dtheta_plus(self, e: SuperExpr) -> SuperExpr:
        return self.d_plus(e) + self.theta(True) * self.dx_plus(e) * G_I

    def dtheta_minus(self, e: SuperExpr) -> SuperExpr:
        return self.d_minus(e) + self.theta(False) * self.dx_minus(e) * G_I

    def d_lambda(self, e: SuperExpr) -> SuperExpr:
        return self._apply(e, lambda pos: self._dlam_img[pos], odd=False)


@dataclass(frozen=True)
class DerivationOp:
    """A basic derivation or a coefficient combination of basic ones."""

    kind: str
    combo: tuple = ()

    def __post_init__(self):
        if self.kind == "combo":
            if not self.combo:
                raise ValueError("empty combo")
        elif self.kind not in BASIC_KINDS:
            raise ValueError(f"unknown derivation kind {self.kind!r}")

    def parity(self):
        if self.kind != "combo":
            return _KIND_PARITY[self.kind]
        ps = set()
        for coeff, kind in self.combo:
            cp = coeff.parity()
            if cp is None and not coeff.is_zero():
                raise ParityError("combo coefficient must be homogeneous")
            if coeff.is_zero():
                continue
            ps.add((cp + _KIND_PARITY[kind]) & 1)
        if len(ps) > 1:
            raise ParityError("combo terms have mixed parity")
        return ps.pop() if ps else EVEN

    def describe(self) -> str:
        if self.kind != "combo":
            return self.kind
        return " + ".join(f"({render_expr(c)})*{k}" for c, k in self.combo)


_DISPATCH = {
    "D+": JetSpec.d_plus,
    "D-": JetSpec.d_minus,
    "Dx+": JetSpec.dx_plus,
    "Dx-": JetSpec.dx_minus,
    "Dth+": JetSpec.dtheta_plus,
    "Dth-": JetSpec.dtheta_minus,
    "Dlam": JetSpec.d_lambda,
}


def apply_derivation(op: DerivationOp, e: SuperExpr, spec: JetSpec) -> SuperExpr:
    """Apply a derivation operator to an expression, fully jet-reduced."""
    if op.kind != "combo":
        return _DISPATCH[op.kind](spec, e)
    if op.parity() == ODD and e.parity() is None and not e.is_zero():
        raise ParityError("heterogeneous argument to an odd combo derivation")
    out = spec.catalog.zero()
    for coeff, kind in op.combo:
        out = out + coeff * _DISPATCH[kind](spec, e)
    return out


def apply_to_fraction(op: DerivationOp, p: SuperFraction, spec: JetSpec) -> SuperFraction:
    """Quotient rule.  Odd operators need the graded sign per numerator part."""
    n, d = p.num, p.den
    dd = apply_derivation(op, d, spec)
    if op.parity() == EVEN:
        out = SuperFraction(apply_derivation(op, n, spec), d)
        if not dd.is_zero():
            out = out - SuperFraction(n * dd, d * d)
        return out
    out = SuperFraction(n.catalog.zero())
    even_part = SuperExpr(n.catalog, {m: c for m, c in n.terms.items() if _mono_par(n.catalog, m) == EVEN})
    odd_part = SuperExpr(n.catalog, {m: c for m, c in n.terms.items() if _mono_par(n.catalog, m) == ODD})
    for part, par in ((even_part, EVEN), (odd_part, ODD)):
        if part.is_zero():
            continue
        out = out + SuperFraction(apply_derivation(op, part, spec), d)
        if not dd.is_zero():
            sgn = -1 if par == EVEN else 1
            out = out + SuperFraction(part * dd * sgn, d * d)
    return out


def _mono_par(cat, mono):
    p = 0
    for i in cat.odd_positions:
        p += mono[i]
    return p & 1


def reduce_to_jets(word, spec: JetSpec) -> SuperExpr:
    """Value of the derivative word applied to the superfield.

    The word is a list over {"D+", "D-"}; the trailing symbol seeds the jet
    Pp1 or Pm1 and the rest apply right to left.
    """
    if not word:
        raise ValueError("empty derivative word")
    for w in word:
        if w not in ("D+", "D-"):
            raise ValueError(f"word symbols must be 'D+' or 'D-', got {w!r}")
    e = spec.jet(1, plus=(word[-1] == "D+"))
    for w in reversed(word[:-1]):
        e = spec.d_plus(e) if w == "D+" else spec.d_minus(e)
    return e


# -- randomized identity suite ---------------------------------------------------


def random_expr(spec: JetSpec, rng, max_terms: int = 3, jet_margin: int = 2) -> SuperExpr:
    """Seeded random expression, keeping jets low enough to differentiate."""
    cat = spec.catalog
    top = max(spec.max_order - jet_margin, 1)
    out = cat.zero()
    for _ in range(rng.randint(1, max_terms)):
        mono = []
        for g in cat.gens:
            if g.role.startswith(("jet+", "jet-")) and int(g.role[4:]) > top:
                mono.append(0)
            elif g.parity == ODD:
                mono.append(rng.choice([0, 0, 0, 1]))
            elif g.invertible:
                mono.append(rng.randint(-2, 2))
            else:
                mono.append(rng.choice([0, 0, 1, 2]))
        coeff = GRat(rng.randint(-3, 3), rng.randint(-3, 3))
        if coeff:
            out = out + SuperExpr(cat, {tuple(mono): coeff})
    return out


@dataclass
class IdentityCheck:
    name: str
    passed: bool
    counterexample: str = ""


@dataclass
class IdentityReport:
    trials: int
    checks: list = field(default_factory=list)

    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)


def check_operator_identities(spec: JetSpec, trials: int = 200, seed: int = 0) -> IdentityReport:
    """Verify the covariant-derivative algebra on seeded random expressions.

    Checks, as exact canonical forms: the squares D_+-^2 = -i D_{x+-}, the
    anticommutator {D_+, D_-} = 0, reconstruction of D_+- from the theta and
    x derivatives, and that d_lambda commutes with both D_+ and D_-.
    """
    import random as _random

    rng = _random.Random(seed)
    report = IdentityReport(trials=trials)
    names = [
        "D+^2 = -i*Dx+",
        "D-^2 = -i*Dx-",
        "{D+,D-} = 0",
        "Dth+ - i*th_p*Dx+ = D+",
        "Dth- - i*th_m*Dx- = D-",
        "[Dlam, D+] = 0",
        "[Dlam, D-] = 0",
    ]
    fails = {n: "" for n in names}
    for _ in range(trials):
        e = random_expr(spec, rng)
        tp, tm = spec.theta(True), spec.theta(False)
        residuals = {
            names[0]: spec.d_plus(spec.d_plus(e)) + G_I * spec.dx_plus(e),
            names[1]: spec.d_minus(spec.d_minus(e)) + G_I * spec.dx_minus(e),
            names[2]: spec.d_plus(spec.d_minus(e)) + spec.d_minus(spec.d_plus(e)),
            names[3]: spec.dtheta_plus(e) - G_I * tp * spec.dx_plus(e) - spec.d_plus(e),
            names[4]: spec.dtheta_minus(e) - G_I * tm * spec.dx_minus(e) - spec.d_minus(e),
            names[5]: spec.d_lambda(spec.d_plus(e)) - spec.d_plus(spec.d_lambda(e)),
            names[6]: spec.d_lambda(spec.d_minus(e)) - spec.d_minus(spec.d_lambda(e)),
        }
        for n, r in residuals.items():
            if not r.is_zero() and not fails[n]:
                fails[n] = render_expr(e)
    for n in names:
        report.checks.append(IdentityCheck(n, not fails[n], fails[n]))
    return report
