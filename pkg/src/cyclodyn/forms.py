"""Chebyshev forms, linear conjugacy, two-sided equivalence, speciality, FZ bound.

Decisions are exact in-field tests, complete for equivalence over the full
algebraic closure: conjugacy to a power map is a support condition on the
translation-centered form; Chebyshev conjugacy and two-sided equivalence
reduce to ratio conditions in w = u^2, which lives in the coefficient field
even when the scaling u itself does not.  Witness scalars may require square
or (d-1)-th roots; those are searched inside a bounded cyclotomic space and
their absence is reported, never silently repaired.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .cyclotomic import CycloNum, as_cyclo, format_element
from .errors import HypothesisNotMet, ScalingOutsideSearchSpace
from .polynomials import LaurentPoly, Poly, laurent_compose
from .radicals import nth_root_in_cyclotomic

DEFAULT_CONDUCTOR_CAP = 48
CHEB_SCALING_CAP = 24


@lru_cache(maxsize=None)
def chebyshev(d: int) -> Poly:
    """Monic Chebyshev T_d with T_d(x + 1/x) = x^d + x^-d; T_0 = 2, T_1 = X."""
    if d < 0:
        raise ValueError("chebyshev degree must be >= 0")
    if d == 0:
        return Poly([2])
    if d == 1:
        return Poly.x()
    return Poly.x() * chebyshev(d - 1) - chebyshev(d - 2)


@dataclass(frozen=True)
class LinearMap:
    """x -> u*x + v with u != 0; composes and inverts exactly."""

    u: CycloNum
    v: CycloNum

    def __post_init__(self):
        object.__setattr__(self, "u", as_cyclo(self.u))
        object.__setattr__(self, "v", as_cyclo(self.v))
        if self.u.is_zero():
            raise ValueError("linear map needs u != 0")

    @staticmethod
    def identity() -> "LinearMap":
        return LinearMap(1, 0)

    def as_poly(self) -> Poly:
        return Poly([self.v, self.u])

    def inverse(self) -> "LinearMap":
        uinv = self.u.inverse()
        return LinearMap(uinv, -self.v * uinv)

    def apply(self, x) -> CycloNum:
        return self.u * as_cyclo(x) + self.v

    def dress(self, g: Poly) -> Poly:
        """ell o g o ell^-1 (conjugation of the map g by this coordinate change)."""
        inner = g.compose(self.inverse().as_poly())
        return inner * self.u + self.v

    def two_sided(self, g: Poly, right: "LinearMap") -> Poly:
        """self o g o right."""
        return (g.compose(right.as_poly())) * self.u + self.v

    def to_json(self):
        return {"u": format_element(self.u), "v": format_element(self.v)}


def centered_form(f: Poly) -> tuple[Poly, CycloNum]:
    """(f1, v): f1 = t_-v o f o t_v kills the X^(d-1) coefficient; t_v = x + v."""
    d = f.degree
    if d < 2:
        raise ValueError("need degree >= 2")
    v = -f.coeff(d - 1) / (f.leading() * d)
    f1 = f.shift_argument(v) - v
    return f1, v


@dataclass
class NormalForm:
    g: Poly
    ell: LinearMap
    monic: bool  # False when the monicizing scalar lies outside the search space


def conjugate_normal_form(f: Poly, conductor_cap: int = DEFAULT_CONDUCTOR_CAP) -> NormalForm:
    """Monic centered conjugate g = ell^-1 o f o ell with a documented tie-break.

    Among the d-1 scalings that make the centered form monic, u is chosen so
    the first nonzero non-leading coefficient of g (scanning degrees d-2 down
    to 0) equals 1 when possible, otherwise so g has the least coefficient
    tuple in the CycloNum total order.  When no monicizing scalar exists in
    the searched cyclotomic space the centered, non-monic form is returned
    with monic=False.
    """
    f1, v = centered_form(f)
    d = f.degree
    u0 = nth_root_in_cyclotomic(f.leading().inverse(), d - 1, conductor_cap)
    if u0 is None:
        return NormalForm(g=f1, ell=LinearMap(1, v), monic=False)

    candidates = []
    for j in range(d - 1):
        eta = CycloNum.root_of_unity(d - 1, j)
        u = (u0 * eta).canonical()
        g = _scaled_conjugate(f1, u)
        candidates.append((g, u))

    def first_nonzero_is_one(g: Poly) -> bool:
        for k in range(d - 2, -1, -1):
            c = g.coeff(k)
            if not c.is_zero():
                return c == CycloNum.one()
        return False

    preferred = [(g, u) for g, u in candidates if first_nonzero_is_one(g)]
    pool = preferred if preferred else candidates
    g, u = min(
        pool,
        key=lambda gu: tuple(gu[0].coeff(k).sort_key() for k in range(d - 2, -1, -1)),
    )
    return NormalForm(g=g, ell=LinearMap(u, v), monic=True)


def _scaled_conjugate(f1: Poly, u: CycloNum) -> Poly:
    """(scale_u)^-1 o f1 o scale_u, i.e. coefficients f1_k * u^(k-1)."""
    uinv = u.inverse()
    out = []
    power = uinv  # u^(k-1) at k = 0
    for k, c in enumerate(f1.coeffs):
        if k == 0:
            out.append(c * uinv)
            continue
        if k == 1:
            power = CycloNum.one()
        else:
            power = power * u
        out.append(c * power)
    return Poly(out)


def is_conjugate_to_power(
    f: Poly, conductor_cap: int = DEFAULT_CONDUCTOR_CAP
) -> LinearMap | None:
    """ell with f = ell o X^d o ell^-1, exactly, if one exists.

    The decision is the exact support test: the centered form must be a pure
    monomial.  A positive decision whose witness scalar (a (d-1)-th root of
    the leading coefficient's inverse) falls outside the searched space
    raises ScalingOutsideSearchSpace.
    """
    d = f.degree
    if d < 2:
        raise ValueError("need degree >= 2")
    f1, v = centered_form(f)
    if any(not f1.coeff(k).is_zero() for k in range(d)):
        return None
    u = nth_root_in_cyclotomic(f.leading().inverse(), d - 1, conductor_cap)
    if u is None:
        raise ScalingOutsideSearchSpace(
            "conjugacy to the power map holds over the algebraic closure, but the "
            f"scaling requires a degree-{d-1} root outside conductor {conductor_cap}"
        )
    ell = LinearMap(u, v)
    assert ell.dress(Poly.monomial(d)) == f
    return ell


def is_conjugate_to_cheb(
    f: Poly, conductor_cap: int = DEFAULT_CONDUCTOR_CAP
) -> tuple[LinearMap, int] | None:
    """(ell, sign) with f = ell o (sign * T_d) o ell^-1, if one exists.

    Ratio conditions in w = u^2 decide existence over the algebraic closure;
    the witness needs u itself (a square root for odd d; in-field for even d).
    """
    d = f.degree
    if d < 2:
        raise ValueError("need degree >= 2")
    f1, v = centered_form(f)
    t = chebyshev(d)
    for k in range(d):
        same_parity = (k % 2) == (d % 2)
        if same_parity and f1.coeff(k).is_zero():
            return None
        if not same_parity and not f1.coeff(k).is_zero():
            return None
    ad = f1.leading()
    w = (f1.coeff(d - 2) / ad) / t.coeff(d - 2)
    if w.is_zero():
        return None
    if d % 2 == 1:
        eps_val = ad * w ** ((d - 1) // 2)
        if eps_val == as_cyclo(1):
            eps = 1
        elif eps_val == as_cyclo(-1):
            eps = -1
        else:
            return None
        for k in range(d - 2, -1, -2):
            if f1.coeff(k) != t.coeff(k) * w ** ((1 - k) // 2) * eps:
                return None
        u = nth_root_in_cyclotomic(w, 2, conductor_cap)
        if u is None:
            raise ScalingOutsideSearchSpace(
                "Chebyshev conjugacy holds over the algebraic closure, but the "
                f"scaling square root lies outside conductor {conductor_cap}"
            )
    else:
        B = ad * w ** (d // 2)  # B = eps * u, and B^2 must equal u^2 = w
        if B * B != w:
            return None
        for k in range(d - 2, -1, -2):
            if f1.coeff(k) != B * t.coeff(k) * (w ** (k // 2)).inverse():
                return None
        u, eps = B.canonical(), 1
    ell = LinearMap(u, v)
    candidate = ell.dress(t * eps)
    if candidate != f:
        return None
    return ell, eps


def two_sided_equiv_power(f: Poly) -> tuple[LinearMap, LinearMap] | None:
    """(ell1, ell2) with f = ell1 o X^d o ell2, via the critical-point criterion.

    Exists iff f' has a single root of multiplicity d-1; then f = A(x-rho)^d + B
    with rho in the coefficient field, and (Ax + B, x - rho) is a witness.
    """
    d = f.degree
    if d < 2:
        raise ValueError("need degree >= 2")
    df = f.derivative()
    if d == 2:
        rho = -df.coeff(0) / df.coeff(1)
    else:
        g = df.gcd(f.derivative().derivative())
        if g.degree != d - 2:
            return None
        rho = -g.coeff(d - 3) / (d - 2)
    A = f.leading()
    B = f.evaluate(rho)
    if Poly([-rho, 1]) ** d * A + B != f:
        return None
    return LinearMap(A, B), LinearMap(1, -rho)


def two_sided_equiv_cheb(
    f: Poly, conductor_cap: int = CHEB_SCALING_CAP
) -> tuple[LinearMap, LinearMap] | None:
    """(ell1, ell2) with f = ell1 o T_d o ell2, solving a T_d(ux+v) + b = f.

    v/u comes from the subleading coefficient, w = u^2 from the leading ratio,
    then a and b; the two u branches differ by the finite root-of-unity
    scaling freedom enumerated in the bounded cyclotomic space.
    """
    d = f.degree
    if d < 2:
        raise ValueError("need degree >= 2")
    t = chebyshev(d)
    tau = f.coeff(d - 1) / (f.leading() * d)
    F = f.shift_argument(-tau)  # F(x) = f(x - tau) = a T_d(ux) + b
    if d == 2:
        u = as_cyclo(1)
        a = F.leading()
        b = F.coeff(0) + 2 * a
        ell1, ell2 = LinearMap(a, b), LinearMap(u, u * tau)
        if ell1.two_sided(t, ell2) == f:
            return ell1, ell2
        return None
    for k in range(1, d):
        same_parity = (k % 2) == (d % 2)
        if same_parity and F.coeff(k).is_zero():
            return None
        if not same_parity and not F.coeff(k).is_zero():
            return None
    if F.coeff(d - 2).is_zero():
        return None
    w = t.coeff(d - 2) * F.leading() / F.coeff(d - 2)
    if w.is_zero():
        return None
    if d % 2 == 0:
        a = F.leading() * (w ** (d // 2)).inverse()
        for k in range(d - 2, 1, -2):
            if F.coeff(k) != a * t.coeff(k) * w ** (k // 2):
                return None
        b = F.coeff(0) - a * t.coeff(0)
        u = nth_root_in_cyclotomic(w, 2, conductor_cap)
        if u is None:
            raise ScalingOutsideSearchSpace(
                "two-sided Chebyshev equivalence holds, but the scaling square "
                f"root lies outside conductor {conductor_cap}"
            )
    else:
        A1 = F.leading() * (w ** ((d - 1) // 2)).inverse()  # A1 = a*u
        for k in range(d - 2, 0, -2):
            if F.coeff(k) != A1 * t.coeff(k) * w ** ((k - 1) // 2):
                return None
        b = F.coeff(0)
        u = nth_root_in_cyclotomic(w, 2, conductor_cap)
        if u is None:
            raise ScalingOutsideSearchSpace(
                "two-sided Chebyshev equivalence holds, but the scaling square "
                f"root lies outside conductor {conductor_cap}"
            )
        a = A1 * u.inverse()
    ell1, ell2 = LinearMap(a, b), LinearMap(u, u * tau)
    if ell1.two_sided(t, ell2) != f:
        return None
    return ell1, ell2


# -- speciality -----------------------------------------------------------------


@dataclass
class SpecialityFinding:
    condition: str  # "one" | "two"
    indices: tuple[int, ...]
    form: str  # "power" | "cheb"
    sign: int | None = None
    ell: LinearMap | None = None
    ell_pair: tuple[LinearMap, LinearMap] | None = None
    note: str = ""

    def to_json(self):
        out = {
            "condition": self.condition,
            "indices": list(self.indices),
            "form": self.form,
        }
        if self.sign is not None:
            out["sign"] = self.sign
        if self.ell is not None:
            out["ell"] = self.ell.to_json()
        if self.ell_pair is not None:
            out["ell1"] = self.ell_pair[0].to_json()
            out["ell2"] = self.ell_pair[1].to_json()
        if self.note:
            out["note"] = self.note
        return out


@dataclass
class SpecialityReport:
    verdict: str  # "special" | "non_special"
    reasons: list[SpecialityFinding]

    def to_json(self):
        return {"verdict": self.verdict, "reasons": [r.to_json() for r in self.reasons]}


def is_special_set(sys, conductor_cap: int = DEFAULT_CONDUCTOR_CAP) -> SpecialityReport:
    """Classify a generator set per the special/non-special dichotomy.

    Condition 1: some generator is linearly conjugate to X^d or +-T_d.
    Condition 2: some ordered pair (i, j) composes, inner first, to a
    polynomial two-sided equivalent to the power map or T of product degree.
    Witnesses re-verify by exact expansion; when a witness scalar lies outside
    the bounded search space the finding is recorded with a note instead.
    """
    findings: list[SpecialityFinding] = []
    for i, g in enumerate(sys.generators, start=1):
        try:
            ell = is_conjugate_to_power(g, conductor_cap)
        except ScalingOutsideSearchSpace as exc:
            findings.append(
                SpecialityFinding(
                    condition="one", indices=(i,), form="power", note=str(exc)
                )
            )
        else:
            if ell is not None:
                findings.append(
                    SpecialityFinding(condition="one", indices=(i,), form="power", ell=ell)
                )
        try:
            hit = is_conjugate_to_cheb(g, conductor_cap)
        except ScalingOutsideSearchSpace as exc:
            findings.append(
                SpecialityFinding(
                    condition="one", indices=(i,), form="cheb", note=str(exc)
                )
            )
        else:
            if hit is not None:
                ell, sign = hit
                findings.append(
                    SpecialityFinding(
                        condition="one", indices=(i,), form="cheb", sign=sign, ell=ell
                    )
                )
    s = sys.s
    for i in range(1, s + 1):
        for j in range(1, s + 1):
            if i == j:
                continue
            # Word (j, i): f_j applied first, then f_i, per the composition
            # convention; iterating ordered pairs covers both orders.
            h = sys.generator(i).compose(sys.generator(j))
            pair = two_sided_equiv_power(h)
            if pair is not None:
                findings.append(
                    SpecialityFinding(
                        condition="two", indices=(i, j), form="power", ell_pair=pair
                    )
                )
            try:
                pair = two_sided_equiv_cheb(h, conductor_cap)
            except ScalingOutsideSearchSpace as exc:
                findings.append(
                    SpecialityFinding(
                        condition="two", indices=(i, j), form="cheb", note=str(exc)
                    )
                )
            else:
                if pair is not None:
                    findings.append(
                        SpecialityFinding(
                            condition="two", indices=(i, j), form="cheb", ell_pair=pair
                        )
                    )
    verdict = "special" if findings else "non_special"
    return SpecialityReport(verdict=verdict, reasons=findings)


def verify_speciality_witness(sys, finding: SpecialityFinding) -> bool:
    """Re-expand a recorded witness identity exactly."""
    if finding.condition == "one":
        if finding.ell is None:
            return False
        g = sys.generator(finding.indices[0])
        d = g.degree
        target = Poly.monomial(d) if finding.form == "power" else chebyshev(d) * (finding.sign or 1)
        return finding.ell.dress(target) == g
    if finding.ell_pair is None:
        return False
    i, j = finding.indices
    h = sys.generator(i).compose(sys.generator(j))
    D = h.degree
    target = Poly.monomial(D) if finding.form == "power" else chebyshev(D)
    ell1, ell2 = finding.ell_pair
    return ell1.two_sided(target, ell2) == h


# -- Laurent utilities and the Fuchs-Zannier bound --------------------------------


def is_trinomial_symmetric(q: LaurentPoly):
    """Match a X^n + b X^-n + c exactly (zero a, b or c allowed); None otherwise."""
    exps = [e for e in q.exponents() if e != 0]
    c = q.terms.get(0, CycloNum.zero())
    if not exps:
        return (CycloNum.zero(), CycloNum.zero(), c, 1)
    if len(exps) == 1:
        e = exps[0]
        coeff = q.terms[e]
        if e > 0:
            return (coeff, CycloNum.zero(), c, e)
        return (CycloNum.zero(), coeff, c, -e)
    if len(exps) == 2 and exps[0] == -exps[1]:
        neg, pos = min(exps), max(exps)
        return (q.terms[pos], q.terms[neg], c, pos)
    return None


@dataclass
class FzReport:
    ell: int
    deg_g: int
    bound: int
    passed: bool

    def to_json(self):
        return {
            "nonconstant_terms": self.ell,
            "deg_g": self.deg_g,
            "bound": self.bound,
            "passed": self.passed,
        }


def fz_bound_check(g: Poly, q: LaurentPoly) -> FzReport:
    """Check deg g <= 2(2l-1)(l-1) with l the nonconstant terms of g o q.

    The symmetric trinomial shape a X^n + b X^-n + c is the excluded
    hypothesis and raises HypothesisNotMet; constant g is rejected.
    """
    if g.degree < 1:
        raise ValueError("g must be nonconstant")
    if is_trinomial_symmetric(q) is not None:
        raise HypothesisNotMet("q has the excluded symmetric trinomial form")
    h = laurent_compose(g, q)
    ell = h.nonconstant_terms()
    bound = 2 * (2 * ell - 1) * (ell - 1)
    return FzReport(ell=ell, deg_g=g.degree, bound=bound, passed=g.degree <= bound)
