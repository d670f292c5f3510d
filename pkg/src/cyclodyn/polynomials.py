"""Dense univariate polynomials and Laurent polynomials over Q(zeta_n)."""

from __future__ import annotations

from fractions import Fraction

from .cyclotomic import CycloNum, as_cyclo, format_element, parse_element

_C0 = CycloNum.zero()
_C1 = CycloNum.one()


class Poly:
    """Dense polynomial, coefficients low-to-high, trailing zeros trimmed."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        cs = [as_cyclo(c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, *args):
        raise AttributeError("Poly is immutable")

    @staticmethod
    def zero() -> "Poly":
        return Poly(())

    @staticmethod
    def constant(c) -> "Poly":
        return Poly((c,))

    @staticmethod
    def x() -> "Poly":
        return Poly((0, 1))

    @staticmethod
    def monomial(degree: int, c=1) -> "Poly":
        return Poly([0] * degree + [c])

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self) -> CycloNum:
        if self.is_zero():
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def coeff(self, k: int) -> CycloNum:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else _C0

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        other = _as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(tuple(self.coeff(i) + other.coeff(i) for i in range(n)))

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(tuple(self.coeff(i) - other.coeff(i) for i in range(n)))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __neg__(self):
        return Poly(tuple(-c for c in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, CycloNum)):
            c = as_cyclo(other)
            return Poly(tuple(x * c for x in self.coeffs))
        other = _as_poly(other)
        if self.is_zero() or other.is_zero():
            return Poly(())
        out = [_C0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            if x.is_zero():
                continue
            for j, y in enumerate(other.coeffs):
                if not y.is_zero():
                    out[i + j] = out[i + j] + x * y
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative polynomial power")
        result = Poly((_C1,))
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def compose(self, inner: "Poly") -> "Poly":
        """self(inner(X)), exact Horner expansion."""
        acc = Poly(())
        for c in reversed(self.coeffs):
            acc = acc * inner + Poly((c,))
        return acc

    def evaluate(self, a) -> CycloNum:
        a = as_cyclo(a)
        acc = _C0
        for c in reversed(self.coeffs):
            acc = acc * a + c
        return acc

    def derivative(self) -> "Poly":
        return Poly(tuple(c * k for k, c in enumerate(self.coeffs) if k >= 1))

    def monic(self) -> "Poly":
        if self.is_zero():
            raise ValueError("cannot monicize the zero polynomial")
        inv = self.leading().inverse()
        return Poly(tuple(c * inv for c in self.coeffs))

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        db = other.degree
        lead_inv = other.leading().inverse()
        q = [_C0] * max(len(rem) - db, 1)
        while len(rem) - 1 >= db and rem:
            if rem[-1].is_zero():
                rem.pop()
                continue
            qd = len(rem) - 1 - db
            qc = rem[-1] * lead_inv
            q[qd] = q[qd] + qc
            for j in range(db + 1):
                rem[qd + j] = rem[qd + j] - qc * other.coeffs[j]
            rem.pop()
        return Poly(q), Poly(rem)

    def gcd(self, other: "Poly") -> "Poly":
        """Monic gcd via the Euclidean algorithm over the coefficient field."""
        a, b = self, other
        while not b.is_zero():
            _, r = a.divmod(b)
            a, b = b, r
        return a.monic() if not a.is_zero() else a

    def rational_coeffs(self):
        """Coefficients as Fractions if every one is rational, else None."""
        out = []
        for c in self.coeffs:
            q = c.as_rational()
            if q is None:
                return None
            out.append(q)
        return out

    def shift_argument(self, v) -> "Poly":
        """self(X + v)."""
        return self.compose(Poly((v, 1)))

    def scale_argument(self, u) -> "Poly":
        """self(u * X)."""
        u = as_cyclo(u)
        power = _C1
        out = []
        for k, c in enumerate(self.coeffs):
            if k:
                power = power * u
            out.append(c * power)
        return Poly(out)

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for k, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            cs = format_element(c)
            if k == 0:
                parts.append(cs)
                continue
            xs = "X" if k == 1 else f"X^{k}"
            if cs == "1":
                parts.append(xs)
            elif cs == "-1":
                parts.append(f"-{xs}")
            else:
                parts.append(f"({cs})*{xs}")
        return " + ".join(reversed(parts))

    def __repr__(self):
        return f"Poly[{self}]"

    def to_json(self):
        return [format_element(c) for c in self.coeffs]

    @staticmethod
    def from_json(obj) -> "Poly":
        if not isinstance(obj, list):
            raise ValueError("polynomial JSON must be a coefficient list (low to high)")
        return Poly([parse_element(str(c)) for c in obj])


def _as_poly(x) -> Poly:
    if isinstance(x, Poly):
        return x
    if isinstance(x, (int, Fraction, CycloNum)):
        return Poly((x,))
    raise TypeError(f"cannot interpret {x!r} as a polynomial")


class LaurentPoly:
    """Sparse Laurent polynomial: map from integer exponent to nonzero coefficient."""

    __slots__ = ("terms",)

    def __init__(self, terms):
        clean = {}
        for e, c in dict(terms).items():
            c = as_cyclo(c)
            if not c.is_zero():
                clean[int(e)] = c
        object.__setattr__(self, "terms", dict(sorted(clean.items())))

    def __setattr__(self, *args):
        raise AttributeError("LaurentPoly is immutable")

    @staticmethod
    def from_poly(p: Poly) -> "LaurentPoly":
        return LaurentPoly({k: c for k, c in enumerate(p.coeffs)})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.terms == other.terms

    def __add__(self, other):
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, _C0) + c
            if s.is_zero():
                out.pop(e, None)
            else:
                out[e] = s
        return LaurentPoly(out)

    def __sub__(self, other):
        return self + LaurentPoly({e: -c for e, c in other.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, CycloNum)):
            c = as_cyclo(other)
            if c.is_zero():
                return LaurentPoly({})
            return LaurentPoly({e: x * c for e, x in self.terms.items()})
        out: dict[int, CycloNum] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = e1 + e2
                s = out.get(e, _C0) + c1 * c2
                if s.is_zero():
                    out.pop(e, None)
                else:
                    out[e] = s
        return LaurentPoly(out)

    __rmul__ = __mul__

    def nonconstant_terms(self) -> int:
        return sum(1 for e in self.terms if e != 0)

    def exponents(self):
        return tuple(self.terms.keys())

    def __str__(self):
        if not self.terms:
            return "0"
        bits = []
        for e, c in self.terms.items():
            cs = format_element(c)
            if e == 0:
                bits.append(cs)
            else:
                xs = "X" if e == 1 else f"X^{e}"
                bits.append(xs if cs == "1" else f"({cs})*{xs}")
        return " + ".join(bits)

    def __repr__(self):
        return f"LaurentPoly[{self}]"

    def to_json(self):
        return {str(e): format_element(c) for e, c in self.terms.items()}

    @staticmethod
    def from_json(obj) -> "LaurentPoly":
        if not isinstance(obj, dict):
            raise ValueError("Laurent polynomial JSON must map exponents to coefficients")
        return LaurentPoly({int(e): parse_element(str(c)) for e, c in obj.items()})


def laurent_compose(g: Poly, q: LaurentPoly) -> LaurentPoly:
    """Exact expansion of g(q(X))."""
    acc = LaurentPoly({})
    one = LaurentPoly({0: 1})
    for c in reversed(g.coeffs):
        acc = acc * q + one * c
    return acc
