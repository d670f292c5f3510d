"""Certified complex embeddings, house computation and interval comparisons.

Backed by mpmath's interval arithmetic (`mpmath.iv`), with all reported
endpoints converted to exact dyadic rationals.  Every box returned here is
certified to contain the true embedded value; refinement only ever shrinks
boxes (embeddings at precision 2t are intersected with those at precision t).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath import iv
from mpmath.libmp import to_rational

from .cyclotomic import CycloNum, as_cyclo, is_algebraic_integer, is_root_of_unity
from .errors import PrecisionExhausted
from .numtheory import coprime_residues

_REFINE_LADDER = (64, 128, 256, 512, 1024, 2048, 4096)


class _Prec:
    """Temporarily set the working precision of the global iv context."""

    def __init__(self, bits: int):
        self.bits = bits

    def __enter__(self):
        self.saved = iv.prec
        iv.prec = self.bits
        return iv

    def __exit__(self, *exc):
        iv.prec = self.saved


def _ivf(q) -> "iv.mpf":
    """Exact-or-outward interval for a Fraction/int at the current precision."""
    q = Fraction(q)
    if q.denominator == 1:
        return iv.mpf(q.numerator)
    return iv.mpf(q.numerator) / q.denominator


def _endpoints(x) -> tuple[Fraction, Fraction]:
    lo, hi = x._mpi_
    ln, ld = to_rational(lo)
    hn, hd = to_rational(hi)
    return Fraction(int(ln), int(ld)), Fraction(int(hn), int(hd))


class BoxC:
    """A rectangular complex interval built from two real intervals."""

    __slots__ = ("re", "im")

    def __init__(self, re, im):
        self.re = re
        self.im = im

    def __add__(self, other):
        return BoxC(self.re + other.re, self.im + other.im)

    def __sub__(self, other):
        return BoxC(self.re - other.re, self.im - other.im)

    def __mul__(self, other):
        return BoxC(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def scale(self, x):
        return BoxC(self.re * x, self.im * x)

    def abs_iv(self):
        return iv.sqrt(abs(self.re) ** 2 + abs(self.im) ** 2)

    @staticmethod
    def zero():
        return BoxC(iv.mpf(0), iv.mpf(0))

    @staticmethod
    def from_fraction(q):
        return BoxC(_ivf(q), iv.mpf(0))


@dataclass(frozen=True)
class ComplexBox:
    """A certified enclosure [real_lo, real_hi] x [imag_lo, imag_hi]."""

    real_lo: Fraction
    real_hi: Fraction
    imag_lo: Fraction
    imag_hi: Fraction

    def __post_init__(self):
        if self.real_lo > self.real_hi or self.imag_lo > self.imag_hi:
            raise ValueError("empty complex box")

    @property
    def width(self) -> Fraction:
        return max(self.real_hi - self.real_lo, self.imag_hi - self.imag_lo)

    def magnitude_hi(self) -> Fraction:
        return max(abs(self.real_lo), abs(self.real_hi)) + max(
            abs(self.imag_lo), abs(self.imag_hi)
        )

    def contains(self, other: "ComplexBox") -> bool:
        return (
            self.real_lo <= other.real_lo
            and other.real_hi <= self.real_hi
            and self.imag_lo <= other.imag_lo
            and other.imag_hi <= self.imag_hi
        )

    def intersect(self, other: "ComplexBox") -> "ComplexBox":
        return ComplexBox(
            max(self.real_lo, other.real_lo),
            min(self.real_hi, other.real_hi),
            max(self.imag_lo, other.imag_lo),
            min(self.imag_hi, other.imag_hi),
        )

    def midpoint(self) -> complex:
        return complex(
            float(self.real_lo + self.real_hi) / 2.0,
            float(self.imag_lo + self.imag_hi) / 2.0,
        )

    def to_json(self):
        from .cyclotomic import frac_str

        return {
            "real": [frac_str(self.real_lo), frac_str(self.real_hi)],
            "imag": [frac_str(self.imag_lo), frac_str(self.imag_hi)],
        }


@dataclass(frozen=True)
class HouseInterval:
    """Certified enclosure of the house (max conjugate modulus)."""

    lo: Fraction
    hi: Fraction
    precision_bits: int

    def __post_init__(self):
        if self.lo > self.hi or self.lo < 0:
            raise ValueError("invalid house interval")

    def to_json(self):
        from .cyclotomic import frac_str

        return {"lo": frac_str(self.lo), "hi": frac_str(self.hi), "precision_bits": self.precision_bits}


class HouseCmp(enum.Enum):
    YES = "yes"
    NO = "no"
    BOUNDARY = "boundary"


def _box_from_ivs(re, im) -> ComplexBox:
    rl, rh = _endpoints(re)
    il, ih = _endpoints(im)
    return ComplexBox(rl, rh, il, ih)


def root_of_unity_box(n: int, k: int) -> BoxC:
    """Interval enclosure of e^(2 pi i k / n) at the current precision."""
    k %= n
    if k == 0:
        return BoxC(iv.mpf(1), iv.mpf(0))
    if 2 * k == n:
        return BoxC(iv.mpf(-1), iv.mpf(0))
    if 4 * k == n:
        return BoxC(iv.mpf(0), iv.mpf(1))
    if 4 * k == 3 * n:
        return BoxC(iv.mpf(0), iv.mpf(-1))
    theta = iv.pi * 2 * k / n
    return BoxC(iv.cos(theta), iv.sin(theta))


def _embed_raw(a: CycloNum, precision_bits: int) -> list[BoxC]:
    """One BoxC per embedding (k coprime to the conductor, ascending k)."""
    a = as_cyclo(a)
    n = a.n
    boxes = []
    for k in coprime_residues(n):
        zeta = root_of_unity_box(n, k)
        acc = BoxC.zero()
        power = BoxC(iv.mpf(1), iv.mpf(0))
        for j, c in enumerate(a.coords):
            if j > 0:
                power = power * zeta
            if c:
                acc = acc + power.scale(_ivf(c))
        boxes.append(acc)
    return boxes


def _width_ok(box: ComplexBox, precision_bits: int) -> bool:
    tol = Fraction(1, 2**precision_bits) * max(Fraction(1), box.magnitude_hi())
    return box.width <= tol


def embeddings(a: CycloNum, precision_bits: int) -> list[ComplexBox]:
    """Certified boxes around every conjugate of a, one per primitive root.

    Boxes at precision 2t are contained in the boxes at precision t: each call
    intersects its raw enclosures with the enclosures computed at half the
    requested precision.
    """
    if precision_bits < 1:
        raise ValueError("precision_bits must be positive")
    a = as_cyclo(a).canonical()
    guard = 16
    while True:
        with _Prec(precision_bits + guard):
            raw = [_box_from_ivs(b.re, b.im) for b in _embed_raw(a, precision_bits)]
        if all(_width_ok(b, precision_bits) for b in raw):
            break
        guard *= 2
        if guard > 1 << 16:
            raise PrecisionExhausted("embedding boxes did not reach the requested width")
    if precision_bits >= 8:
        coarse = embeddings(a, precision_bits // 2)
        raw = [b.intersect(c) for b, c in zip(raw, coarse)]
    return raw


def house(a: CycloNum, precision_bits: int = 128) -> HouseInterval:
    """Certified interval containing max over conjugates of |sigma(a)|."""
    a = as_cyclo(a).canonical()
    if a.is_zero():
        return HouseInterval(Fraction(0), Fraction(0), precision_bits)
    q = a.as_rational()
    if q is not None:
        return HouseInterval(abs(q), abs(q), precision_bits)
    guard = 16
    while True:
        with _Prec(precision_bits + guard):
            mods = [b.abs_iv() for b in _embed_raw(a, precision_bits)]
            los, his = zip(*(_endpoints(m) for m in mods))
        lo, hi = max(los), max(his)
        lo = max(lo, Fraction(0))
        if hi - lo <= Fraction(1, 2**precision_bits) * max(Fraction(1), hi):
            return HouseInterval(lo, hi, precision_bits)
        guard *= 2
        if guard > 1 << 16:
            raise PrecisionExhausted("house interval did not reach the requested width")


def house_leq(a: CycloNum, A, refine_budget: int = len(_REFINE_LADDER)) -> HouseCmp:
    """Decide house(a) <= A with certification.

    The boundary house(a) = A is resolved exactly: some conjugate of a has
    modulus exactly A iff a * conj(a) = A^2 as field elements (embeddings are
    injective), in which case every conjugate does and the answer is yes.
    Away from the boundary, interval refinement terminates; the budget is a
    defensive cap only.
    """
    a = as_cyclo(a)
    A = Fraction(A)
    if A < 1:
        raise ValueError("house_leq requires A >= 1")
    if a.is_zero():
        return HouseCmp.YES
    q = a.as_rational()
    if q is not None:
        return HouseCmp.YES if abs(q) <= A else HouseCmp.NO
    if a * a.conj() == as_cyclo(A * A):
        return HouseCmp.YES
    if A == 1 and is_algebraic_integer(a):
        # Kronecker: a nonzero algebraic integer has house 1 iff it is a root
        # of unity; otherwise its house exceeds 1 strictly.
        return HouseCmp.YES if is_root_of_unity(a) else HouseCmp.NO
    for bits in _REFINE_LADDER[:refine_budget]:
        h = house(a, bits)
        if h.hi <= A:
            return HouseCmp.YES
        if h.lo > A:
            return HouseCmp.NO
    return HouseCmp.BOUNDARY


# -- certified comparisons along the refinement ladder -------------------------


def refine_decide(make_pair, budget: int = len(_REFINE_LADDER)):
    """Decide lhs > rhs where make_pair(bits) yields certified iv intervals.

    Returns True / False when certified, None when the ladder is exhausted
    (which only happens at exact equality or past the defensive budget).
    """
    for bits in _REFINE_LADDER[:budget]:
        with _Prec(bits):
            lhs, rhs = make_pair(bits)
            llo, lhi = _endpoints(lhs)
            rlo, rhi = _endpoints(rhs)
        if llo > rhi:
            return True
        if lhi <= rlo:
            return False
    return None


def abs_embedding_iv(a: CycloNum, N: int, k: int):
    """|sigma_k(a)| as an iv interval, sigma_k: zeta_N -> e^(2 pi i k/N)."""
    a = as_cyclo(a)
    coords = a.lift_coords(N)
    zeta = root_of_unity_box(N, k)
    acc = BoxC.zero()
    power = BoxC(iv.mpf(1), iv.mpf(0))
    for j, c in enumerate(coords):
        if j > 0:
            power = power * zeta
        if c:
            acc = acc + power.scale(_ivf(c))
    return acc.abs_iv()


# -- certified polynomial root enclosures --------------------------------------


def _poly_eval_box(coeff_boxes: list[BoxC], z: BoxC) -> BoxC:
    acc = BoxC.zero()
    for c in reversed(coeff_boxes):
        acc = acc * z + c
    return acc


def _coeff_boxes(coeffs: list[CycloNum]) -> list[BoxC]:
    """Identity-embedding enclosures of cyclotomic coefficients."""
    out = []
    for c in coeffs:
        c = as_cyclo(c)
        q = c.as_rational()
        if q is not None:
            out.append(BoxC.from_fraction(q))
        else:
            zeta = root_of_unity_box(c.n, 1)
            acc = BoxC.zero()
            power = BoxC(iv.mpf(1), iv.mpf(0))
            for j, cc in enumerate(c.coords):
                if j > 0:
                    power = power * zeta
                if cc:
                    acc = acc + power.scale(_ivf(cc))
            out.append(acc)
    return out


def certified_root_boxes(coeffs: list[CycloNum], precision_bits: int = 160) -> list[ComplexBox]:
    """One certified box per approximate root; each box contains a true root.

    Roots are approximated numerically (companion matrix) and polished by
    Newton iteration; each is then wrapped in the disk |z - z0| <=
    (|p(z0)| / |lead|)^(1/deg), which must contain at least one root of p
    because |p(z0)/lead| is the product of the distances to all roots.
    """
    import numpy as np

    coeffs = [as_cyclo(c) for c in coeffs]
    while len(coeffs) > 1 and coeffs[-1].is_zero():
        coeffs = coeffs[:-1]
    deg = len(coeffs) - 1
    if deg < 1:
        return []
    work = max(precision_bits, 160) + 48
    with _Prec(work):
        mids = []
        for b in _coeff_boxes(coeffs):
            rl, rh = _endpoints(b.re)
            il, ih = _endpoints(b.im)
            mids.append(((rl + rh) / 2, (il + ih) / 2))
    np_coeffs = [complex(float(r), float(i)) for r, i in reversed(mids)]
    roots = np.roots(np_coeffs)
    roots = sorted(roots, key=lambda z: (round(z.real, 9), round(z.imag, 9)))

    mp = mpmath.mp
    saved = mp.prec
    boxes = []
    try:
        mp.prec = work
        pc = [
            mpmath.mpc(
                mpmath.mpf(r.numerator) / r.denominator,
                mpmath.mpf(i.numerator) / i.denominator,
            )
            for r, i in mids
        ]

        def pval(z):
            acc = mpmath.mpc(0)
            for c in reversed(pc):
                acc = acc * z + c
            return acc

        def pder(z):
            acc = mpmath.mpc(0)
            for k in range(len(pc) - 1, 0, -1):
                acc = acc * z + k * pc[k]
            return acc

        for r in roots:
            z = mpmath.mpc(complex(r))
            for _ in range(80):
                d = pder(z)
                if abs(d) == 0:
                    break
                step = pval(z) / d
                z = z - step
                if abs(step) < mpmath.mpf(2) ** (-mp.prec + 8):
                    break
            boxes.append(_certify_disk(coeffs, z, deg, precision_bits))
    finally:
        mp.prec = saved
    return boxes


def _certify_disk(coeffs, z, deg, precision_bits) -> ComplexBox:
    with _Prec(precision_bits + 32):
        zr = _mpf_to_frac(z.real)
        zi = _mpf_to_frac(z.imag)
        zbox = BoxC(_ivf(zr), _ivf(zi))
        val = _poly_eval_box(_coeff_boxes(coeffs), zbox)
        _, mag_hi = _endpoints(val.abs_iv())
        lead = as_cyclo(coeffs[-1])
        lq = lead.as_rational()
        if lq is not None:
            lead_lo = abs(lq)
        else:
            lead_lo, _ = _endpoints(_coeff_boxes([lead])[0].abs_iv())
        if lead_lo <= 0:
            raise ValueError("leading coefficient enclosure touches zero")
    from .numtheory import frac_dyadic_up, frac_root_upper

    radius = frac_root_upper(frac_dyadic_up(mag_hi / lead_lo, 4 * precision_bits), deg)
    radius = frac_dyadic_up(radius, 2 * precision_bits)
    return ComplexBox(zr - radius, zr + radius, zi - radius, zi + radius)


def _mpf_to_frac(x) -> Fraction:
    n, d = to_rational(mpmath.mpf(x)._mpf_)
    return Fraction(int(n), int(d))


def cauchy_root_bound(coeffs: list[CycloNum], precision_bits: int = 96) -> Fraction:
    """Rational upper bound on |root| valid for every embedding of the poly.

    For each embedding sigma of the coefficient field, all roots of sigma(p)
    have modulus at most 1 + max_j |sigma(a_j)| / |sigma(a_d)|; the maximum
    over embeddings therefore bounds every Galois conjugate of every root.
    """
    coeffs = [as_cyclo(c) for c in coeffs]
    while len(coeffs) > 1 and coeffs[-1].is_zero():
        coeffs = coeffs[:-1]
    if len(coeffs) <= 1:
        raise ValueError("root bound of a constant polynomial")
    N = 1
    for c in coeffs:
        N = N * c.n // math.gcd(N, c.n)
    best = Fraction(0)
    with _Prec(precision_bits):
        for k in coprime_residues(N):
            lead_lo, _ = _endpoints(abs_embedding_iv(coeffs[-1], N, k))
            if lead_lo <= 0:
                raise PrecisionExhausted("leading coefficient enclosure touches zero")
            ratio = Fraction(0)
            for c in coeffs[:-1]:
                _, hi = _endpoints(abs_embedding_iv(c, N, k))
                ratio = max(ratio, hi / lead_lo)
            best = max(best, 1 + ratio)
    return best
