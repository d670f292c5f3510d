"""Exact e-th roots of cyclotomic numbers inside the cyclotomic closure.

Witness construction for conjugacy detectors needs scalars u with u^e = c.
The decision layers never need them, so everything here is best-effort within
a bounded conductor search space and returns None when the root lies outside
it (callers surface that as ScalingOutsideSearchSpace).

Strategy, in order:
  1. exact rational roots, including rational * root-of-unity adjustments;
  2. square roots of rationals via quadratic Gauss sums (exact, classical);
  3. multiplicative split c = q * zeta with q rational, zeta a root of unity;
  4. a gcd hunt: u is a common root of X^e - c and an irreducible rational
     factor of minpoly_c(X^e); a linear gcd hands u over directly, a higher
     degree gcd is attacked through root-of-unity subset sums and products;
  5. for even e, recursion through square roots.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from .cyclotomic import (
    CycloNum,
    as_cyclo,
    is_root_of_unity,
    root_of_unity_order,
    _solve_linear,
)
from .numtheory import factorize, iroot_floor
from .polynomials import Poly


def minpoly_rational(a: CycloNum) -> list[Fraction]:
    """Monic minimal polynomial of a over Q, coefficients low-to-high."""
    a = as_cyclo(a).canonical()
    n = a.n
    powers = [CycloNum.one().lift_coords(n)]
    current = CycloNum.one()
    while True:
        current = current * a
        target = current.lift_coords(n)
        sol = _solve_linear([list(p) for p in powers], target)
        if sol is not None:
            k = len(powers)
            coeffs = [-s for s in sol] + [Fraction(1)]
            return coeffs
        powers.append(target)


def _rational_nth_root(q: Fraction, e: int) -> Fraction | None:
    """Exact rational r with r^e = q, when one exists."""
    if q == 0:
        return Fraction(0)
    neg = q < 0
    if neg and e % 2 == 0:
        return None
    aq = abs(q)
    rn = iroot_floor(aq.numerator, e)
    rd = iroot_floor(aq.denominator, e)
    if rn**e != aq.numerator or rd**e != aq.denominator:
        return None
    r = Fraction(rn, rd)
    return -r if neg else r


@lru_cache(maxsize=None)
def sqrt_of_squarefree(s: int) -> CycloNum:
    """Exact square root of a squarefree positive integer via Gauss sums.

    sqrt(2) = zeta_8 + zeta_8^-1; for an odd prime p the quadratic Gauss sum
    gives sqrt(p) (p = 1 mod 4) or i*sqrt(p) (p = 3 mod 4).
    """
    out = CycloNum.one()
    for p, _ in factorize(s):
        if p == 2:
            z8 = CycloNum.root_of_unity(8)
            out = out * (z8 + z8**7)
            continue
        g = CycloNum.zero()
        for k in range(1, p):
            legendre = pow(k, (p - 1) // 2, p)
            term = CycloNum.root_of_unity(p, k)
            g = g + term if legendre == 1 else g - term
        if p % 4 == 3:
            g = g * CycloNum.root_of_unity(4) ** 3  # g = i sqrt(p); divide by i
        out = out * g
    return out.canonical()


def sqrt_of_rational(q: Fraction) -> CycloNum | None:
    """Exact square root of any rational inside the cyclotomic closure."""
    if q == 0:
        return CycloNum.zero()
    neg = q < 0
    aq = abs(q)
    num_sq = iroot_floor(aq.numerator, 2)
    den_sq = iroot_floor(aq.denominator, 2)
    num_free = aq.numerator // (num_sq * num_sq) if num_sq else 1
    while num_sq > 0 and num_sq * num_sq * num_free != aq.numerator:
        num_sq -= 1
        num_free = aq.numerator // (num_sq * num_sq)
    den_free = aq.denominator // (den_sq * den_sq) if den_sq else 1
    while den_sq > 0 and den_sq * den_sq * den_free != aq.denominator:
        den_sq -= 1
        den_free = aq.denominator // (den_sq * den_sq)
    # sqrt(aq) = (num_sq/ (den_sq*den_free)) * sqrt(num_free * den_free)
    s = num_free * den_free
    root = as_cyclo(Fraction(num_sq, den_sq * den_free)) * sqrt_of_squarefree(s)
    if neg:
        root = root * CycloNum.root_of_unity(4)
    return root.canonical()


def _torsion_orders(cap: int):
    orders = [1, 2]
    for n in range(3, cap + 1):
        if n % 4 != 2:
            orders.append(n)
    return orders


def _roots_of_unity_up_to(cap: int):
    """All roots of unity of conductor <= cap (each exactly once)."""
    seen = set()
    out = []
    for n in _torsion_orders(cap):
        for k in range(n):
            if math.gcd(k, n) == 1 or n == 1:
                z = CycloNum.root_of_unity(n, k).canonical()
                if z not in seen:
                    seen.add(z)
                    out.append(z)
    return out


def _multiplicative_split(c: CycloNum) -> tuple[Fraction, CycloNum] | None:
    """Write c = q * zeta with q rational and zeta a root of unity, if possible."""
    cc = c * c.conj()
    q2 = cc.as_rational()
    if q2 is None or q2 < 0:
        return None
    r = _rational_nth_root(q2, 2)
    if r is None:
        return None
    for q in (r, -r):
        if q == 0:
            continue
        candidate = c / q
        if is_root_of_unity(candidate):
            return Fraction(q), candidate.canonical()
    return None


def _sympy_factor_rational(coeffs: list[Fraction]) -> list[list[Fraction]]:
    """Irreducible factors over Q of a rational polynomial (low-to-high lists)."""
    import sympy

    x = sympy.symbols("x")
    expr = sympy.Poly(list(reversed([sympy.Rational(c) for c in coeffs])), x, domain="QQ")
    _, factors = expr.factor_list()
    out = []
    for f, mult in factors:
        fc = [Fraction(str(c)) for c in reversed(f.all_coeffs())]
        for _ in range(mult):
            out.append(fc)
    return out


def _gcd_with_power_relation(F: list[Fraction], c: CycloNum, e: int) -> Poly:
    """gcd(F(X) mod (X^e - c), X^e - c) over the field generated by c."""
    # Reduce F modulo X^e = c.
    reduced = [CycloNum.zero()] * e
    cpow = [CycloNum.one()]
    for t, coeff in enumerate(F):
        if coeff == 0:
            continue
        q, r = divmod(t, e)
        while len(cpow) <= q:
            cpow.append(cpow[-1] * c)
        reduced[r] = reduced[r] + cpow[q] * coeff
    h = Poly([-c] + [0] * (e - 1) + [1])
    return h.gcd(Poly(reduced))


def _mu_e(e: int) -> list[CycloNum]:
    return [CycloNum.root_of_unity(e, j).canonical() for j in range(e)]


def nth_root_in_cyclotomic(
    c, e: int, conductor_cap: int = 48, _depth: int = 0
) -> CycloNum | None:
    """Some u in the cyclotomic closure with u^e = c, or None if not found.

    The search is complete only within the documented strategy and cap; a
    None says the scaling lies outside the searched space, not that no root
    exists over the algebraic closure.
    """
    c = as_cyclo(c).canonical()
    if e < 1:
        raise ValueError("root exponent must be positive")
    if e == 1 or c.is_zero():
        return c if e == 1 else CycloNum.zero()
    if _depth > 4:
        return None

    q = c.as_rational()
    if q is not None:
        r = _rational_nth_root(q, e)
        if r is not None:
            return as_cyclo(r)
        # rational * root of unity: u = r * zeta with r^e = |q| and zeta^e = sign
        r = _rational_nth_root(abs(q), e)
        if r is not None:
            sign = 1 if q > 0 else -1
            for zeta in _roots_of_unity_up_to(max(conductor_cap, 2 * e)):
                if (zeta**e) == as_cyclo(sign):
                    cand = (zeta * r).canonical()
                    if cand.n <= conductor_cap and (cand**e) == c:
                        return cand
        if e == 2:
            root = sqrt_of_rational(q)
            if root is not None and root.n <= conductor_cap:
                return root
        if e % 2 == 0:
            half = nth_root_in_cyclotomic(c, 2, conductor_cap, _depth + 1)
            if half is not None:
                for w in (half, -half):
                    u = nth_root_in_cyclotomic(w, e // 2, conductor_cap, _depth + 1)
                    if u is not None and (u**e) == c:
                        return u
        return None

    split = _multiplicative_split(c)
    if split is not None:
        qpart, zeta = split
        r = nth_root_in_cyclotomic(as_cyclo(qpart), e, conductor_cap, _depth + 1)
        if r is not None:
            k = root_of_unity_order(zeta)
            j = next(
                (
                    jj
                    for jj in range(k)
                    if CycloNum.root_of_unity(k, jj) == zeta
                ),
                None,
            )
            if j is not None:
                zroot = CycloNum.root_of_unity(k * e, j).canonical()
                cand = (r * zroot).canonical()
                if cand.n <= conductor_cap and (cand**e) == c:
                    return cand

    # gcd hunt through the rational minimal polynomial of the roots.
    mc = minpoly_rational(c)
    lifted = [Fraction(0)] * ((len(mc) - 1) * e + 1)
    for t, coeff in enumerate(mc):
        lifted[t * e] = coeff
    for F in sorted(_sympy_factor_rational(lifted), key=len):
        if len(F) < 2:
            continue
        g = _gcd_with_power_relation(F, c, e)
        if g.degree == 1:
            u = (-g.coeff(0) / g.coeff(1)).canonical()
            if (u**e) == c:
                return u
        elif 2 <= g.degree < e or (2 <= g.degree == e):
            u = _attack_gcd(g, c, e, conductor_cap, _depth)
            if u is not None:
                return u

    if e % 2 == 0 and e > 2:
        half = nth_root_in_cyclotomic(c, 2, conductor_cap, _depth + 1)
        if half is not None:
            for w in (half, -half):
                u = nth_root_in_cyclotomic(w, e // 2, conductor_cap, _depth + 1)
                if u is not None and (u**e) == c:
                    return u
    return None


def _attack_gcd(g: Poly, c: CycloNum, e: int, cap: int, depth: int) -> CycloNum | None:
    """Extract one root of a degree >= 2 gcd whose roots are eta_i * u, eta_i in mu_e."""
    import itertools

    deg = g.degree
    mu = _mu_e(e)
    # Sum route: -coeff(deg-1)/leading = u * sum(eta_i) over some size-deg subset.
    s1 = -(g.coeff(deg - 1) / g.coeff(deg))
    if not s1.is_zero():
        for subset in itertools.combinations(range(e), deg):
            total = CycloNum.zero()
            for j in subset:
                total = total + mu[j]
            if total.is_zero():
                continue
            cand = (s1 / total).canonical()
            if cand.n <= cap and (cand**e) == c:
                return cand
    # Product route: (-1)^deg * coeff(0)/leading = u^deg * prod(eta_i).
    s0 = g.coeff(0) / g.coeff(deg)
    if deg % 2 == 1:
        s0 = -s0
    if deg < e:
        for subset in itertools.combinations(range(e), deg):
            prod = CycloNum.one()
            for j in subset:
                prod = prod * mu[j]
            w = (s0 / prod).canonical()
            u = nth_root_in_cyclotomic(w, deg, cap, depth + 1)
            if u is not None:
                for eta in mu:
                    cand = (u * eta).canonical()
                    if cand.n <= cap and (cand**e) == c:
                        return cand
    return None
