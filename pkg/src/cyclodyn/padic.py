"""p-adic valuations on Q; places are rational primes.

|q|_p = p^(-padic_val(q, p)); the valuation of 0 is +infinity (math.inf).
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import InvalidPlace
from .numtheory import is_prime

INF = math.inf


def padic_val(q, p: int):
    """Exponent of p in q; +inf for q = 0. Raises InvalidPlace for non-prime p."""
    if not is_prime(p):
        raise InvalidPlace(f"{p} is not a prime place of Q")
    q = Fraction(q)
    if q == 0:
        return INF
    v = 0
    num = abs(q.numerator)
    while num % p == 0:
        num //= p
        v += 1
    den = q.denominator
    while den % p == 0:
        den //= p
        v -= 1
    return v


def padic_abs_log(q, p: int):
    """-padic_val(q, p), i.e. log_p |q|_p; -inf for q = 0."""
    v = padic_val(q, p)
    return -v if v is not INF else -INF
