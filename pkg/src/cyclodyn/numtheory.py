"""Small exact number-theory helpers: primality, totients, cyclotomic polynomials."""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

# Deterministic Miller-Rabin witness set, exact for n < 3.3 * 10**24.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@lru_cache(maxsize=None)
def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization of n >= 1 as sorted (prime, exponent) pairs."""
    if n < 1:
        raise ValueError("factorize expects n >= 1")
    out = []
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if m > 1:
        out.append((m, 1))
    return tuple(out)


@lru_cache(maxsize=None)
def prime_factors(n: int) -> tuple[int, ...]:
    return tuple(p for p, _ in factorize(n))


@lru_cache(maxsize=None)
def totient(n: int) -> int:
    phi = n
    for p, _ in factorize(n):
        phi = phi // p * (p - 1)
    return phi


@lru_cache(maxsize=None)
def divisors(n: int) -> tuple[int, ...]:
    ds = [1]
    for p, e in factorize(n):
        ds = [d * p**k for d in ds for k in range(e + 1)]
    return tuple(sorted(ds))


def coprime_residues(n: int) -> tuple[int, ...]:
    """Residues k in [1, n] with gcd(k, n) = 1, ascending; (1,) for n = 1."""
    import math

    if n == 1:
        return (1,)
    return tuple(k for k in range(1, n + 1) if math.gcd(k, n) == 1)


def _int_poly_divexact(num: list[int], den: list[int]) -> list[int]:
    """Exact division of integer polynomials (low-to-high), den monic-led."""
    num = list(num)
    dd = len(den) - 1
    out = [0] * (len(num) - dd)
    for i in range(len(out) - 1, -1, -1):
        c = num[i + dd]
        assert c % den[dd] == 0
        q = c // den[dd]
        out[i] = q
        if q:
            for j, dj in enumerate(den):
                num[i + j] -= q * dj
    assert all(c == 0 for c in num)
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients of Phi_n, low-to-high, monic of degree totient(n)."""
    if n == 1:
        return (-1, 1)
    num = [0] * (n + 1)
    num[0], num[n] = -1, 1
    for d in divisors(n):
        if d < n:
            num = _int_poly_divexact(num, list(cyclotomic_polynomial(d)))
    return tuple(num)


def iroot_floor(x: int, k: int) -> int:
    """Largest r >= 0 with r**k <= x (x >= 0, k >= 1); integer Newton."""
    if x < 0:
        raise ValueError("iroot_floor expects x >= 0")
    if x == 0:
        return 0
    if k == 1:
        return x
    if k == 2:
        return math.isqrt(x)
    r = 1 << (x.bit_length() // k + 1)
    while True:
        nr = ((k - 1) * r + x // r ** (k - 1)) // k
        if nr >= r:
            break
        r = nr
    while r**k > x:
        r -= 1
    return r


def iroot_ceil(x: int, k: int) -> int:
    r = iroot_floor(x, k)
    return r if r**k == x else r + 1


def frac_root_upper(x: Fraction, k: int) -> Fraction:
    """A rational upper bound on x**(1/k) for x >= 0, exact when x is a k-th power."""
    if x < 0:
        raise ValueError("frac_root_upper expects x >= 0")
    p, q = x.numerator, x.denominator
    # x**(1/k) = (p * q**(k-1))**(1/k) / q
    return Fraction(iroot_ceil(p * q ** (k - 1), k), q)


def frac_pow_upper(x: Fraction, e: Fraction) -> Fraction:
    """A rational upper bound on x**e for x > 0, e > 0; exact for integral e."""
    if e.denominator == 1:
        return x ** int(e)
    return frac_root_upper(x ** e.numerator, e.denominator)


def frac_dyadic_up(x: Fraction, bits: int) -> Fraction:
    """Smallest dyadic rational with denominator 2**bits that is >= x."""
    scaled = x * (1 << bits)
    return Fraction(-((-scaled.numerator) // scaled.denominator), 1 << bits)
