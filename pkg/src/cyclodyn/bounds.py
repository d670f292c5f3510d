"""Explicit constants of the growth lemmas and the Loxton decomposition oracle.

All rational-coefficient systems take exact paths (a single embedding, exact
absolute values); cyclotomic coefficients go through certified intervals with
the requested relative slack.  The minimality of M is decided by exact integer
power comparisons, never by floating logarithms.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .cyclotomic import (
    CycloNum,
    as_cyclo,
    format_element,
    frac_str,
    is_algebraic_integer,
)
from .errors import PrecisionExhausted
from .intervals import _endpoints, _Prec, abs_embedding_iv, house
from .numtheory import coprime_residues, frac_pow_upper


@dataclass(frozen=True)
class LoxtonParams:
    """Parameters of the bound b <= E_size * R_scale * (B*t)^R_exponent.

    The default R(x) = x^3 is a documented stand-in for the x^(2+eps) shape
    whose constant the underlying result leaves unspecified; every report
    carries a flag saying so.  E_size = 1, B = 1 match the base field Q.
    """

    E_size: int = 1
    B: Fraction = Fraction(1)
    R_scale: Fraction = Fraction(1)
    R_exponent: Fraction = Fraction(3)

    def __post_init__(self):
        object.__setattr__(self, "B", Fraction(self.B))
        object.__setattr__(self, "R_scale", Fraction(self.R_scale))
        object.__setattr__(self, "R_exponent", Fraction(self.R_exponent))
        if self.E_size < 1 or self.B <= 0 or self.R_scale <= 0:
            raise ValueError("Loxton parameters must be positive")
        if self.R_exponent <= 2:
            raise ValueError("R_exponent must exceed 2")

    def to_json(self):
        return {
            "E_size": self.E_size,
            "B": frac_str(self.B),
            "R_scale": frac_str(self.R_scale),
            "R_exponent": frac_str(self.R_exponent),
            "note": "R(x) = R_scale * x^R_exponent is a configurable stand-in",
        }


def _abs_embed_exact_or_hi(c: CycloNum, N: int, k: int, bits: int) -> tuple[Fraction, Fraction]:
    """(lo, hi) bounds for |sigma_k(c)| with exact rationals when possible."""
    q = c.as_rational()
    if q is not None:
        return abs(q), abs(q)
    with _Prec(bits):
        return _endpoints(abs_embedding_iv(c, N, k))


def bound_L(sys, A, precision_bits: int = 128) -> Fraction:
    """Certified rational upper bound for the prefix-house constant L.

    L = max over embeddings of {1 + max_i |s(1/a_i,di)| (1 + sum_j |s(a_ij)|), A};
    exact for rational coefficients, within 2^-precision relative slack
    otherwise.
    """
    A = Fraction(A)
    if sys.is_rational():
        best = A
        for g in sys.generators:
            rc = g.rational_coeffs()
            lead = abs(rc[-1])
            total = sum(abs(c) for c in rc[:-1])
            best = max(best, 1 + (1 + total) / lead)
        return best
    N = sys.coefficient_conductor()
    bits = 64
    while True:
        lo_all, hi_all = A, A
        for k in coprime_residues(N):
            for g in sys.generators:
                llo, lhi = _abs_embed_exact_or_hi(g.leading(), N, k, bits)
                if llo <= 0:
                    break
                slo, shi = Fraction(0), Fraction(0)
                for c in g.coeffs[:-1]:
                    if not c.is_zero():
                        clo, chi = _abs_embed_exact_or_hi(c, N, k, bits)
                        slo, shi = slo + clo, shi + chi
                lo_all = max(lo_all, 1 + (1 + slo) / lhi)
                hi_all = max(hi_all, 1 + (1 + shi) / llo)
            else:
                continue
            break
        else:
            if hi_all - lo_all <= hi_all / 2**precision_bits:
                return hi_all
        bits *= 2
        if bits > 1 << 15:
            raise PrecisionExhausted("bound_L refinement exhausted")


def bound_D(sys) -> int:
    """Least D with D/a_i,di and D*a_ij/a_i,di all integral (rational systems)."""
    if not sys.is_rational():
        raise ValueError("bound_D requires rational coefficients")
    D = 1
    for g in sys.generators:
        rc = g.rational_coeffs()
        lead = rc[-1]
        targets = [1 / lead] + [c / lead for c in rc[:-1]]
        for t in targets:
            D = D * t.denominator // math.gcd(D, t.denominator)
    return D


def choose_m(sys, precision_bits: int = 128) -> int:
    """Minimal m >= 1 with |sigma(a_i,d)| > 1/m strict for every embedding.

    Exact for rational leading coefficients.  For cyclotomic ones, equality
    |sigma(a)| = 1/m is excluded exactly (it forces a*conj(a) = 1/m^2 as field
    elements), so interval refinement terminates; the precision budget is a
    defensive cap.
    """
    sys.common_degree()
    leads = [g.leading() for g in sys.generators]
    if sys.is_rational():
        worst = min(abs(l.as_rational()) for l in leads)
        # minimal m with 1/m < worst
        m = int(1 / worst) + 1
        return m
    N = sys.coefficient_conductor()
    m = 1
    while True:
        target = Fraction(1, m * m)
        ok = True
        for lead in leads:
            if lead * lead.conj() == as_cyclo(target):
                ok = False  # equality |sigma| = 1/m at every embedding
                break
            for k in coprime_residues(N):
                decided = None
                bits = 64
                while bits <= precision_bits * 32:
                    lo, hi = _abs_embed_exact_or_hi(lead, N, k, bits)
                    if lo > Fraction(1, m):
                        decided = True
                        break
                    if hi <= Fraction(1, m):
                        decided = False
                        break
                    bits *= 2
                if decided is None:
                    raise PrecisionExhausted("choose_m could not separate |sigma(a_d)| from 1/m")
                if not decided:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return m
        m += 1


def bound_K(sys, A, precision_bits: int = 128) -> Fraction:
    """Certified rational upper bound for the Sigma_A house constant K.

    K = max over embeddings of { 2 s m^2 A + max_i ( |s(a_i,d)| +
    (1 + (|s(a_i,d)| - 1/m)^-1) * sum_{j<d} |s(a_ij)| ) }, all degrees equal.
    """
    d = sys.common_degree()
    if d < 3:
        raise ValueError("bound_K requires common degree d >= 3")
    A = Fraction(A)
    if A < 1:
        raise ValueError("bound_K requires A >= 1")
    m = choose_m(sys, precision_bits)
    s = sys.s
    base = 2 * s * m * m * A
    if sys.is_rational():
        best = None
        for g in sys.generators:
            rc = g.rational_coeffs()
            lead = abs(rc[-1])
            tail = sum(abs(c) for c in rc[:-1])
            term = lead + (1 + 1 / (lead - Fraction(1, m))) * tail
            best = term if best is None else max(best, term)
        return base + best
    N = sys.coefficient_conductor()
    bits = 96
    while True:
        best_hi, best_lo = None, None
        degenerate = False
        for k in coprime_residues(N):
            for g in sys.generators:
                llo, lhi = _abs_embed_exact_or_hi(g.leading(), N, k, bits)
                if llo <= Fraction(1, m):
                    degenerate = True
                    break
                tlo, thi = Fraction(0), Fraction(0)
                for c in g.coeffs[:-1]:
                    if not c.is_zero():
                        clo, chi = _abs_embed_exact_or_hi(c, N, k, bits)
                        tlo, thi = tlo + clo, thi + chi
                hi = lhi + (1 + 1 / (llo - Fraction(1, m))) * thi
                lo = llo + (1 + 1 / (lhi - Fraction(1, m))) * tlo
                best_hi = hi if best_hi is None else max(best_hi, hi)
                best_lo = lo if best_lo is None else max(best_lo, lo)
            if degenerate:
                break
        if not degenerate and best_hi - best_lo <= (base + best_hi) / 2**precision_bits:
            return base + best_hi
        bits *= 2
        if bits > 1 << 15:
            raise PrecisionExhausted("bound_K refinement exhausted")


def loxton_LK(t, params: LoxtonParams = LoxtonParams()) -> Fraction:
    """E_size * R_scale * (B*t)^R_exponent; exact when the exponent is integral."""
    t = Fraction(t)
    if t <= 0:
        raise ValueError("loxton_LK requires t > 0")
    inner = params.B * t
    return params.E_size * params.R_scale * frac_pow_upper(inner, params.R_exponent)


def bound_M(sys, A, params: LoxtonParams = LoxtonParams(), precision_bits: int = 128) -> int:
    """Minimal integer M with M > 2*log2(2*L_K(D*L)) + 3, decided exactly.

    M - 3 > log2((2x)^2) iff 2^(M-3) > 4x^2, an exact rational comparison, so
    the minimality needs no floating logarithm at all.
    """
    L = bound_L(sys, A, precision_bits)
    D = bound_D(sys)
    x = loxton_LK(D * L, params)
    k = 4 * x * x
    # minimal t with 2^t > k
    t = k.numerator.bit_length() - k.denominator.bit_length() - 1
    t = max(t, -(1 << 20))
    while Fraction(2) ** t <= k:
        t += 1
    return max(t + 3, 1)


@dataclass
class BoundsReport:
    """Every explicit constant, with the inputs echoed for re-derivation."""

    L: Fraction
    D: int
    K: Fraction | None
    m: int | None
    M: int
    A: Fraction
    loxton: LoxtonParams
    system_json: list

    def to_json(self):
        out = {
            "L": frac_str(self.L),
            "D": self.D,
            "M": self.M,
            "A": frac_str(self.A),
            "loxton_params": self.loxton.to_json(),
            "system": self.system_json,
            "r_is_standin": True,
        }
        out["K"] = frac_str(self.K) if self.K is not None else None
        out["m"] = self.m
        return out


def compute_bounds(sys, A, params: LoxtonParams = LoxtonParams(), precision_bits: int = 128) -> BoundsReport:
    """Assemble L, D, M and, when all degrees agree and d >= 3, m and K."""
    A = Fraction(A)
    L = bound_L(sys, A, precision_bits)
    D = bound_D(sys)
    M = bound_M(sys, A, params, precision_bits)
    K = m = None
    if len(set(sys.degrees)) == 1 and sys.degrees[0] >= 3:
        m = choose_m(sys, precision_bits)
        K = bound_K(sys, A, precision_bits)
    return BoundsReport(
        L=L, D=D, K=K, m=m, M=M, A=A, loxton=params, system_json=sys.to_json()
    )


# -- Loxton decomposition ---------------------------------------------------------


@dataclass
class LoxtonCertificate:
    """An exact representation target = sum of coefficient * root-of-unity terms."""

    target: CycloNum
    terms: list[tuple[CycloNum, CycloNum]]  # (coefficient in E, root of unity)

    @property
    def b(self) -> int:
        return len(self.terms)

    def verify(self) -> bool:
        acc = CycloNum.zero()
        for c, zeta in self.terms:
            acc = acc + c * zeta
        return acc == self.target

    def to_json(self):
        return {
            "target": format_element(self.target),
            "b": self.b,
            "terms": [
                {"coefficient": format_element(c), "zeta": format_element(z)}
                for c, z in self.terms
            ],
        }


def loxton_decompose(a, max_b: int, order_bound: int) -> LoxtonCertificate | None:
    """Exhaustive minimal-b search for a = sum of roots of unity of order | order_bound.

    Multisets of exponents (t1 <= ... <= tb) on zeta_order_bound are searched
    in size order and, within a size, lexicographically, so the first hit is
    minimal within the documented order.  The sum for 0 is the empty sum.
    All sums run on exact coordinate vectors at conductor order_bound; the
    final exponent of a candidate is resolved by table lookup.
    """
    a = as_cyclo(a)
    if not is_algebraic_integer(a):
        raise ValueError("loxton_decompose needs an algebraic integer")
    if order_bound < 1 or max_b < 1:
        raise ValueError("positive bounds required")
    if order_bound % a.canonical().n != 0:
        raise ValueError("order_bound must be a multiple of the conductor of a")
    if a.is_zero():
        return LoxtonCertificate(target=a, terms=[])

    N = order_bound
    rows = [CycloNum.root_of_unity(N, t).coords for t in range(N)]
    target = a.lift_coords(N)
    by_coords: dict[tuple, list[int]] = {}
    for t, row in enumerate(rows):
        by_coords.setdefault(row, []).append(t)

    def _lookup_ge(coords, floor_t):
        for t in by_coords.get(coords, ()):
            if t >= floor_t:
                return t
        return None

    def _cert(indices):
        one = CycloNum.one()
        return LoxtonCertificate(
            target=a,
            terms=[(one, CycloNum.root_of_unity(N, t).canonical()) for t in indices],
        )

    def _sub(x, y):
        return tuple(p - q for p, q in zip(x, y))

    for size in range(1, max_b + 1):
        if size == 1:
            t = _lookup_ge(target, 0)
            if t is not None:
                return _cert((t,))
            continue
        # Enumerate the first size-1 exponents lexicographically and look the
        # last one up, keeping it >= the previous exponent.
        for prefix in itertools.combinations_with_replacement(range(N), size - 1):
            rem = target
            for t in prefix:
                rem = _sub(rem, rows[t])
            last = _lookup_ge(rem, prefix[-1])
            if last is not None:
                return _cert(prefix + (last,))
    return None


@dataclass
class LoxtonCheck:
    certificate: LoxtonCertificate
    bound: Fraction
    passed: bool

    def to_json(self):
        return {
            "certificate": self.certificate.to_json(),
            "bound_LK": frac_str(self.bound),
            "passed": self.passed,
        }


def verify_loxton_bound(
    a, params: LoxtonParams, max_b: int, order_bound: int
) -> LoxtonCheck:
    """Check b <= L_K(house(a).hi) for the decomposition found by exhaustion."""
    a = as_cyclo(a)
    cert = loxton_decompose(a, max_b, order_bound)
    if cert is None:
        raise ValueError("no decomposition found within the search bounds")
    if a.is_zero():
        bound = Fraction(0)
        return LoxtonCheck(certificate=cert, bound=bound, passed=cert.b <= bound)
    h = house(a, 96)
    bound = loxton_LK(h.hi, params)
    return LoxtonCheck(certificate=cert, bound=bound, passed=Fraction(cert.b) <= bound)
