"""Exact arithmetic in Q(zeta_n) on the power basis 1, zeta, ..., zeta^(phi(n)-1).

Elements carry a conductor n and a coordinate vector of rationals of length
phi(n).  Arithmetic between conductors lifts both operands to the lcm
conductor; `canonicalize_conductor` descends to the minimal conductor via
exact subfield membership tests.  The power basis is an integral basis for
cyclotomic fields, so integrality is coordinate-wise.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import lru_cache

from .numtheory import cyclotomic_polynomial, prime_factors, totient

_F0 = Fraction(0)
_F1 = Fraction(1)


@lru_cache(maxsize=None)
def _reduction_rows(n: int) -> tuple[tuple[Fraction, ...], ...]:
    """Row k expresses x^(phi+k) mod Phi_n in the power basis, k = 0..phi-2."""
    phi = totient(n)
    mod = cyclotomic_polynomial(n)
    rows = []
    cur = [Fraction(-c) for c in mod[:phi]]
    rows.append(tuple(cur))
    for _ in range(phi - 2):
        top = cur[-1]
        cur = [_F0] + cur[:-1]
        if top:
            cur = [c + top * b for c, b in zip(cur, rows[0])]
        rows.append(tuple(cur))
    return tuple(rows)


def _reduce_coords(n: int, raw: list[Fraction]) -> tuple[Fraction, ...]:
    """Reduce a coefficient list of any length modulo Phi_n."""
    phi = totient(n)
    if len(raw) <= phi:
        return tuple(raw) + (_F0,) * (phi - len(raw))
    rows = _reduction_rows(n)
    out = list(raw[:phi])
    for k in range(phi, len(raw)):
        c = raw[k]
        if not c:
            continue
        if k - phi < len(rows):
            row = rows[k - phi]
        else:
            row = _power_row(n, k)
        for j, r in enumerate(row):
            if r:
                out[j] += c * r
    return tuple(out)


@lru_cache(maxsize=None)
def _power_row(n: int, k: int) -> tuple[Fraction, ...]:
    """Coordinates of x^k mod Phi_n (any k >= 0)."""
    phi = totient(n)
    if k < phi:
        return tuple(_F1 if j == k else _F0 for j in range(phi))
    if k < 2 * phi - 1:
        return _reduction_rows(n)[k - phi]
    prev = _power_row(n, k - 1)
    shifted = [_F0] + list(prev[:-1])
    top = prev[-1]
    if top:
        base = _reduction_rows(n)[0]
        shifted = [c + top * b for c, b in zip(shifted, base)]
    return tuple(shifted)


@lru_cache(maxsize=None)
def _lift_rows(m: int, N: int) -> tuple[tuple[Fraction, ...], ...]:
    """Row j gives the conductor-N coordinates of zeta_m^j, j = 0..phi(m)-1."""
    assert N % m == 0
    step = N // m
    return tuple(_power_row(N, j * step) for j in range(totient(m)))


def _solve_linear(columns: list[tuple[Fraction, ...]], rhs: tuple[Fraction, ...]):
    """Solve sum_j x_j * columns[j] = rhs exactly over Q; None if inconsistent."""
    rows = len(rhs)
    cols = len(columns)
    aug = [[columns[j][i] for j in range(cols)] + [rhs[i]] for i in range(rows)]
    piv_cols = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if aug[i][c]), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [v * inv for v in aug[r]]
        for i in range(rows):
            if i != r and aug[i][c]:
                f = aug[i][c]
                aug[i] = [v - f * w for v, w in zip(aug[i], aug[r])]
        piv_cols.append(c)
        r += 1
        if r == rows:
            break
    for i in range(r, rows):
        if aug[i][cols]:
            return None
    x = [_F0] * cols
    for i, c in enumerate(piv_cols):
        x[c] = aug[i][cols]
    # Verify (free columns default to zero; the solution must still match).
    for i in range(rows):
        if sum(columns[j][i] * x[j] for j in range(cols)) != rhs[i]:
            return None
    return tuple(x)


class CycloNum:
    """An element of Q(zeta_n), immutable and hashable."""

    __slots__ = ("n", "coords", "_canon", "_hash")

    def __init__(self, conductor: int, coords):
        if conductor < 1:
            raise ValueError("conductor must be a positive integer")
        coords = tuple(Fraction(c) for c in coords)
        if len(coords) != totient(conductor):
            raise ValueError(
                f"expected {totient(conductor)} coordinates at conductor {conductor}, "
                f"got {len(coords)}"
            )
        object.__setattr__(self, "n", conductor)
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "_canon", None)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, *args):
        raise AttributeError("CycloNum is immutable")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def from_rational(q) -> "CycloNum":
        return CycloNum(1, (Fraction(q),))

    @staticmethod
    def zero() -> "CycloNum":
        return _ZERO_C

    @staticmethod
    def one() -> "CycloNum":
        return _ONE_C

    @staticmethod
    def root_of_unity(n: int, k: int = 1) -> "CycloNum":
        """zeta_n^k at conductor n (not canonicalized)."""
        if n < 1:
            raise ValueError("order must be positive")
        return CycloNum(n, _power_row(n, k % n))

    # -- basics ------------------------------------------------------------

    def is_zero(self) -> bool:
        return all(not c for c in self.coords)

    def as_rational(self):
        """The value as a Fraction if it is rational, else None."""
        if self.n == 1:
            return self.coords[0]
        c = self.canonical()
        return c.coords[0] if c.n == 1 else None

    def lift_coords(self, N: int) -> tuple[Fraction, ...]:
        if N == self.n:
            return self.coords
        if N % self.n != 0:
            raise ValueError("can only lift to a multiple of the conductor")
        rows = _lift_rows(self.n, N)
        phi = totient(N)
        out = [_F0] * phi
        for c, row in zip(self.coords, rows):
            if c:
                for j, r in enumerate(row):
                    if r:
                        out[j] += c * r
        return tuple(out)

    def lift(self, N: int) -> "CycloNum":
        return CycloNum(N, self.lift_coords(N))

    # -- arithmetic --------------------------------------------------------

    def _pair(self, other):
        other = as_cyclo(other)
        if self.n == other.n:
            return self.n, self.coords, other.coords
        N = self.n * other.n // math.gcd(self.n, other.n)
        return N, self.lift_coords(N), other.lift_coords(N)

    def __add__(self, other):
        N, a, b = self._pair(other)
        return CycloNum(N, tuple(x + y for x, y in zip(a, b)))

    __radd__ = __add__

    def __sub__(self, other):
        N, a, b = self._pair(other)
        return CycloNum(N, tuple(x - y for x, y in zip(a, b)))

    def __rsub__(self, other):
        return as_cyclo(other) - self

    def __neg__(self):
        return CycloNum(self.n, tuple(-c for c in self.coords))

    def __mul__(self, other):
        other = as_cyclo(other)
        if other.n == 1:
            q = other.coords[0]
            return CycloNum(self.n, tuple(c * q for c in self.coords))
        if self.n == 1:
            q = self.coords[0]
            return CycloNum(other.n, tuple(c * q for c in other.coords))
        N, a, b = self._pair(other)
        conv = [_F0] * (2 * len(a) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        conv[i + j] += x * y
        return CycloNum(N, _reduce_coords(N, conv))

    __rmul__ = __mul__

    def inverse(self) -> "CycloNum":
        if self.is_zero():
            raise ZeroDivisionError("inversion of zero in Q(zeta_n)")
        if self.n == 1:
            return CycloNum(1, (1 / self.coords[0],))
        # Extended Euclid in Q[x] against Phi_n (irreducible, hence coprime).
        mod = [Fraction(c) for c in cyclotomic_polynomial(self.n)]
        a = list(self.coords)
        while a and not a[-1]:
            a.pop()
        r0, r1 = mod, a
        s0, s1 = [_F0], [_F1]
        while len(r1) > 1 or r1[0]:
            q, rem = _poly_divmod(r0, r1)
            r0, r1 = r1, rem
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
            if len(r0) == 1:
                break
        # r0 is a nonzero constant gcd; s0 * self = r0 (mod Phi_n).
        g = r0[0]
        inv_coords = _reduce_coords(self.n, [c / g for c in s0])
        return CycloNum(self.n, inv_coords)

    def __truediv__(self, other):
        return self * as_cyclo(other).inverse()

    def __rtruediv__(self, other):
        return as_cyclo(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = _ONE_C
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    # -- galois ------------------------------------------------------------

    def conj(self) -> "CycloNum":
        """Complex conjugation (zeta -> zeta^-1), an exact field automorphism."""
        return self.galois(self.n - 1) if self.n > 1 else self

    def galois(self, k: int) -> "CycloNum":
        """The automorphism zeta_n -> zeta_n^k, gcd(k, n) = 1."""
        if self.n == 1:
            return self
        if math.gcd(k, self.n) != 1:
            raise ValueError("galois exponent must be coprime to the conductor")
        out = [_F0] * totient(self.n)
        for j, c in enumerate(self.coords):
            if c:
                row = _power_row(self.n, (j * k) % self.n)
                for i, r in enumerate(row):
                    if r:
                        out[i] += c * r
        return CycloNum(self.n, tuple(out))

    # -- canonicalization and identity --------------------------------------

    def canonical(self) -> "CycloNum":
        cached = object.__getattribute__(self, "_canon")
        if cached is not None:
            return cached
        result = _canonicalize(self)
        object.__setattr__(self, "_canon", result)
        object.__setattr__(result, "_canon", result)
        return result

    def __eq__(self, other):
        if not isinstance(other, CycloNum):
            if isinstance(other, (int, Fraction)):
                other = as_cyclo(other)
            else:
                return NotImplemented
        if self.n == other.n:
            return self.coords == other.coords
        N, a, b = self._pair(other)
        return a == b

    def __hash__(self):
        cached = object.__getattribute__(self, "_hash")
        if cached is None:
            c = self.canonical()
            cached = hash((c.n, c.coords))
            object.__setattr__(self, "_hash", cached)
        return cached

    def sort_key(self):
        """A total order key (deterministic tie-breaking in canonical forms)."""
        c = self.canonical()
        return (c.n,) + tuple(x for f in c.coords for x in (f.numerator, f.denominator))

    def __repr__(self):
        return f"CycloNum({self.n}, {format_element(self)!r})"

    def __str__(self):
        return format_element(self)


_ZERO_C = CycloNum(1, (_F0,))
_ONE_C = CycloNum(1, (_F1,))


def as_cyclo(x) -> CycloNum:
    if isinstance(x, CycloNum):
        return x
    if isinstance(x, (int, Fraction)):
        return CycloNum(1, (Fraction(x),))
    raise TypeError(f"cannot interpret {x!r} as a cyclotomic number")


def _poly_divmod(a: list[Fraction], b: list[Fraction]):
    """Quotient and remainder of rational coefficient lists (low-to-high)."""
    a = list(a)
    while len(b) > 1 and not b[-1]:
        b = b[:-1]
    db = len(b) - 1
    if db == 0 and not b[0]:
        raise ZeroDivisionError("polynomial division by zero")
    q = [_F0] * max(len(a) - db, 1)
    while len(a) - 1 >= db and any(a):
        if not a[-1]:
            a.pop()
            continue
        qd = len(a) - 1 - db
        qc = a[-1] / b[-1]
        q[qd] += qc
        for j in range(db + 1):
            a[qd + j] -= qc * b[j]
        a.pop()
    while len(a) > 1 and not a[-1]:
        a.pop()
    return q, (a if a else [_F0])


def _poly_mul(a, b):
    out = [_F0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return out


def _poly_sub(a, b):
    n = max(len(a), len(b))
    a = list(a) + [_F0] * (n - len(a))
    b = list(b) + [_F0] * (n - len(b))
    return [x - y for x, y in zip(a, b)]


def _canonicalize(a: CycloNum) -> CycloNum:
    n, coords = a.n, a.coords
    while n > 1:
        if all(not c for c in coords[1:]):
            n, coords = 1, (coords[0],)
            break
        descended = False
        for p in prime_factors(n):
            m = n // p
            cols = list(_lift_rows(m, n))
            sol = _solve_linear(cols, coords)
            if sol is not None:
                n, coords = m, sol
                descended = True
                break
        if not descended:
            break
    return CycloNum(n, coords) if (n, coords) != (a.n, a.coords) else a


# -- spec-surface operations -------------------------------------------------


def cyclo_add(a: CycloNum, b: CycloNum) -> CycloNum:
    return as_cyclo(a) + as_cyclo(b)


def cyclo_mul(a: CycloNum, b: CycloNum) -> CycloNum:
    return as_cyclo(a) * as_cyclo(b)


def cyclo_neg(a: CycloNum) -> CycloNum:
    return -as_cyclo(a)


def cyclo_inv(a: CycloNum) -> CycloNum:
    return as_cyclo(a).inverse()


def canonicalize_conductor(a: CycloNum) -> CycloNum:
    return as_cyclo(a).canonical()


def is_algebraic_integer(a: CycloNum) -> bool:
    """True iff every power-basis coordinate is an integer."""
    return all(c.denominator == 1 for c in as_cyclo(a).coords)


def denominator_clearing(a: CycloNum) -> int:
    """Smallest positive D such that D*a is an algebraic integer."""
    d = 1
    for c in as_cyclo(a).coords:
        d = d * c.denominator // math.gcd(d, c.denominator)
    return d


def is_root_of_unity(a: CycloNum) -> bool:
    """Exact test; the torsion of Q(zeta_n) is mu_n (n even) or mu_2n (n odd)."""
    a = as_cyclo(a).canonical()
    if a.is_zero() or not is_algebraic_integer(a):
        return False
    order = a.n if a.n % 2 == 0 else 2 * a.n
    return (a**order) == _ONE_C


def root_of_unity_order(a: CycloNum):
    """The multiplicative order of a root of unity, None otherwise."""
    a = as_cyclo(a).canonical()
    if not is_root_of_unity(a):
        return None
    bound = a.n if a.n % 2 == 0 else 2 * a.n
    from .numtheory import divisors

    for d in divisors(bound):
        if (a**d) == _ONE_C:
            return d
    return None


# -- textual element syntax ---------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<z>z)|(?P<op>[-+*/^()])|(?P<bad>\S))"
)


def _tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            break
        if m.group("bad"):
            raise ValueError(f"unexpected character {m.group('bad')!r} in element syntax")
        if m.group("num"):
            out.append(("num", int(m.group("num"))))
        elif m.group("z"):
            out.append(("z", None))
        else:
            out.append((m.group("op"), None))
        pos = m.end()
    return out


class _Parser:
    """Recursive-descent parser for the element syntax `1/2 + 3*z(5)^2`."""

    def __init__(self, tokens):
        self.toks = tokens
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, kind=None):
        tok = self.peek()
        if kind is not None and tok[0] != kind:
            raise ValueError(f"expected {kind!r} in element syntax, got {tok[0]!r}")
        self.i += 1
        return tok

    def parse(self) -> CycloNum:
        v = self.expr()
        if self.peek()[0] is not None:
            raise ValueError("trailing input in element syntax")
        return v

    def expr(self) -> CycloNum:
        sign = 1
        if self.peek()[0] in ("+", "-"):
            sign = -1 if self.take()[0] == "-" else 1
        v = self.term() * sign
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            t = self.term()
            v = v + t if op == "+" else v - t
        return v

    def term(self) -> CycloNum:
        v = self.factor()
        while self.peek()[0] in ("*", "/"):
            op = self.take()[0]
            f = self.factor()
            v = v * f if op == "*" else v / f
        return v

    def factor(self) -> CycloNum:
        kind, val = self.peek()
        if kind == "-":
            self.take()
            return -self.factor()
        if kind == "num":
            self.take()
            v = CycloNum.from_rational(val)
        elif kind == "z":
            self.take()
            self.take("(")
            n = self.take("num")[1]
            self.take(")")
            if n < 1:
                raise ValueError("root-of-unity order must be positive")
            v = CycloNum.root_of_unity(n)
        elif kind == "(":
            self.take()
            v = self.expr()
            self.take(")")
        else:
            raise ValueError("malformed element syntax")
        if self.peek()[0] == "^":
            self.take()
            sign = 1
            if self.peek()[0] == "-":
                self.take()
                sign = -1
            k = self.take("num")[1]
            v = v ** (sign * k)
        return v


def parse_element(text: str) -> CycloNum:
    """Parse the textual element syntax: integers, `p/q`, and `z(n)^k` terms."""
    if not text.strip():
        raise ValueError("empty element")
    return _Parser(_tokenize(text)).parse()


def frac_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_element(a: CycloNum) -> str:
    a = as_cyclo(a)
    if a.is_zero():
        return "0"
    parts = []
    for j, c in enumerate(a.coords):
        if not c:
            continue
        if j == 0:
            parts.append(frac_str(c))
        else:
            base = f"z({a.n})" if j == 1 else f"z({a.n})^{j}"
            if c == 1:
                parts.append(base)
            elif c == -1:
                parts.append(f"-{base}")
            else:
                parts.append(f"{frac_str(c)}*{base}")
    out = parts[0]
    for p in parts[1:]:
        out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
    return out


def element_to_json(a: CycloNum) -> dict:
    a = as_cyclo(a)
    return {"conductor": a.n, "coords": [frac_str(c) for c in a.coords]}


def element_from_json(obj) -> CycloNum:
    if not isinstance(obj, dict) or "conductor" not in obj or "coords" not in obj:
        raise ValueError("element JSON must carry 'conductor' and 'coords'")
    return CycloNum(int(obj["conductor"]), [Fraction(c) for c in obj["coords"]])
