"""Composition words, orbit trees, preperiodicity detectors and growth checks.

Words are tuples of 1-based generator indices; the word (i1, ..., ik) denotes
the composition that applies generator i1 first.  The empty word is the
identity map.  All detectors use documented deterministic search orders so
that certificates are reproducible.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .cyclotomic import (
    CycloNum,
    as_cyclo,
    denominator_clearing,
    format_element,
    is_algebraic_integer,
)
from .errors import DegenerateCombination, HypothesisNotMet, TreeBudgetExceeded
from .intervals import (
    ComplexBox,
    HouseCmp,
    abs_embedding_iv,
    cauchy_root_bound,
    certified_root_boxes,
    house,
    house_leq,
    refine_decide,
)
from .numtheory import coprime_residues
from .padic import INF, padic_val
from .polynomials import Poly

Word = tuple[int, ...]

DEFAULT_NODE_BUDGET = 200_000


class PolySystem:
    """A finite set of generators f_1, ..., f_s of degree >= 2."""

    __slots__ = ("generators", "degrees")

    def __init__(self, generators):
        gens = tuple(g if isinstance(g, Poly) else Poly(g) for g in generators)
        if not gens:
            raise ValueError("a polynomial system needs at least one generator")
        for g in gens:
            if g.degree < 2:
                raise ValueError("every generator must have degree >= 2")
        if len(set(gens)) != len(gens):
            raise ValueError("generators must be pairwise distinct")
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "degrees", tuple(g.degree for g in gens))

    def __setattr__(self, *args):
        raise AttributeError("PolySystem is immutable")

    @property
    def s(self) -> int:
        return len(self.generators)

    def generator(self, i: int) -> Poly:
        """1-based access matching word indices."""
        return self.generators[i - 1]

    def common_degree(self) -> int:
        if len(set(self.degrees)) != 1:
            raise ValueError("generators do not share a common degree")
        return self.degrees[0]

    def coefficient_conductor(self) -> int:
        N = 1
        for g in self.generators:
            for c in g.coeffs:
                N = N * c.n // math.gcd(N, c.n)
        return N

    def is_rational(self) -> bool:
        return all(g.rational_coeffs() is not None for g in self.generators)

    def permuted(self, perm) -> "PolySystem":
        return PolySystem([self.generators[p - 1] for p in perm])

    def to_json(self):
        return [g.to_json() for g in self.generators]

    @staticmethod
    def from_json(obj) -> "PolySystem":
        if not isinstance(obj, list) or not obj:
            raise ValueError("system JSON must be a non-empty array of polynomials")
        return PolySystem([Poly.from_json(g) for g in obj])

    def __repr__(self):
        return f"PolySystem({', '.join(str(g) for g in self.generators)})"


def words_of_length(s: int, k: int):
    """All words over {1..s} of length k in lexicographic order."""
    return itertools.product(range(1, s + 1), repeat=k)


def compose_word(sys: PolySystem, w: Word) -> Poly:
    """Exact expanded composition; the empty word gives X."""
    out = Poly.x()
    for i in w:
        out = sys.generator(i).compose(out)
    return out


def evaluate_word(sys: PolySystem, w: Word, a) -> CycloNum:
    """Successive evaluation (never expands the composition)."""
    v = as_cyclo(a)
    for i in w:
        v = sys.generator(i).evaluate(v)
    return v


def word_prefix_values(sys: PolySystem, w: Word, a) -> list[CycloNum]:
    """Values along the path: [a, f_{i1}(a), ..., f_w(a)]."""
    vals = [as_cyclo(a)]
    for i in w:
        vals.append(sys.generator(i).evaluate(vals[-1]))
    return vals


@dataclass
class OrbitTree:
    """Per-level deduplicated value sets with full word provenance."""

    root: CycloNum
    levels: list[dict[CycloNum, list[Word]]]
    node_count: int

    @property
    def depth(self) -> int:
        return len(self.levels) - 1

    def level_values(self, k: int):
        return list(self.levels[k].keys())


def build_tree(
    sys: PolySystem, a, depth: int, max_nodes: int = DEFAULT_NODE_BUDGET
) -> OrbitTree:
    """Levels 0..depth of the orbit tree at a, deduplicated per level.

    Values are compared after conductor canonicalization; every word that
    produces a value is retained.  Raises TreeBudgetExceeded when the total
    number of expanded (word, value) nodes would exceed max_nodes.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    root = as_cyclo(a).canonical()
    levels: list[dict[CycloNum, list[Word]]] = [{root: [()]}]
    nodes = 1
    for k in range(1, depth + 1):
        nxt: dict[CycloNum, list[Word]] = {}
        for value, words in levels[k - 1].items():
            for i in range(1, sys.s + 1):
                image = sys.generator(i).evaluate(value).canonical()
                for w in words:
                    nodes += 1
                    if nodes > max_nodes:
                        raise TreeBudgetExceeded(
                            f"orbit tree exceeded {max_nodes} nodes at level {k}",
                            nodes=nodes,
                        )
                    nxt.setdefault(image, []).append(w + (i,))
        for words in nxt.values():
            words.sort()
        levels.append(nxt)
    return OrbitTree(root=root, levels=levels, node_count=nodes)


@dataclass
class CollisionCertificate:
    """An exactly re-verifiable collision witnessing preperiodicity."""

    kind: str  # "pi" or "pibar"
    witness_value: CycloNum
    base_word: Word | None = None
    loop_word: Word | None = None
    level_pair: tuple[int, int] | None = None
    word_k: Word | None = None
    word_n: Word | None = None

    def verify(self, sys: PolySystem, a) -> bool:
        a = as_cyclo(a)
        if self.kind == "pi":
            base = evaluate_word(sys, self.base_word, a)
            return (
                evaluate_word(sys, self.loop_word, base) == base
                and base == self.witness_value
            )
        if self.kind == "pibar":
            k, n = self.level_pair
            return (
                len(self.word_k) == k
                and len(self.word_n) == n
                and k != n
                and evaluate_word(sys, self.word_k, a) == self.witness_value
                and evaluate_word(sys, self.word_n, a) == self.witness_value
            )
        return False

    def to_json(self):
        out = {"kind": self.kind, "witness_value": format_element(self.witness_value)}
        if self.kind == "pi":
            out["base_word"] = list(self.base_word)
            out["loop_word"] = list(self.loop_word)
        else:
            out["level_pair"] = list(self.level_pair)
            out["word_k"] = list(self.word_k)
            out["word_n"] = list(self.word_n)
        return out


def detect_pi(
    sys: PolySystem, a, base_depth: int, loop_depth: int
) -> CollisionCertificate | None:
    """First (|u|, |v|, u, v)-ordered pair with f_{u.v}(a) = f_u(a) exactly.

    u ranges over words with |u| <= base_depth, v over nonempty words with
    |v| <= loop_depth; the search is ordered by increasing |u|, then
    increasing |v|, then lexicographically on u and on v.
    """
    if base_depth < 0 or loop_depth < 1:
        raise ValueError("need base_depth >= 0 and loop_depth >= 1")
    a = as_cyclo(a)
    for ulen in range(base_depth + 1):
        for vlen in range(1, loop_depth + 1):
            for u in words_of_length(sys.s, ulen):
                base = evaluate_word(sys, u, a)
                for v in words_of_length(sys.s, vlen):
                    if evaluate_word(sys, v, base) == base:
                        return CollisionCertificate(
                            kind="pi",
                            witness_value=base.canonical(),
                            base_word=u,
                            loop_word=v,
                        )
    return None


def detect_pibar(
    sys: PolySystem, a, depth: int, max_nodes: int = DEFAULT_NODE_BUDGET
) -> CollisionCertificate | None:
    """Level collision F_k(a) n F_n(a) != 0 minimizing n, then k (1 <= k < n).

    Level 0 (the point a itself) does not participate.  Within the minimal
    (n, k) pair the witness value is the one whose lexicographically least
    level-k word is smallest; witnessing words are the lexicographically
    least producers at each level.
    """
    if depth < 2:
        raise ValueError("depth must be >= 2")
    tree = build_tree(sys, a, depth, max_nodes=max_nodes)
    for n in range(2, depth + 1):
        for k in range(1, n):
            common = set(tree.levels[k]) & set(tree.levels[n])
            if not common:
                continue
            value = min(common, key=lambda v: tree.levels[k][v][0])
            return CollisionCertificate(
                kind="pibar",
                witness_value=value,
                level_pair=(k, n),
                word_k=tree.levels[k][value][0],
                word_n=tree.levels[n][value][0],
            )
    return None


# -- Sigma_A candidates ---------------------------------------------------------


@dataclass
class SigmaCandidate:
    """A difference polynomial f_word(X) - sum_w gamma_w f_w(X) with root boxes."""

    defining_poly: Poly
    word: Word
    combination: dict[Word, CycloNum]
    roots: list[ComplexBox]

    def is_rational(self) -> bool:
        return self.defining_poly.rational_coeffs() is not None

    def to_json(self):
        return {
            "word": list(self.word),
            "combination": {
                ",".join(map(str, w)): format_element(c)
                for w, c in self.combination.items()
            },
            "defining_poly": self.defining_poly.to_json(),
            "roots": [b.to_json() for b in self.roots],
        }


def sigma_members(
    sys: PolySystem,
    A,
    n: int,
    coeff_pool,
    word: Word,
    max_candidates: int | None = None,
    root_precision: int = 160,
) -> list[SigmaCandidate]:
    """All difference polynomials for coefficient assignments from the pool.

    Shorter words (all lengths < n, the empty word included) are enumerated in
    (length, lex) order; assignments run through itertools.product over the
    pool in its given order, rightmost word varying fastest.  Pool elements
    must be algebraic integers of house at most A^(d^(n-1)).
    """
    d = sys.common_degree()
    if d < 3:
        raise ValueError("sigma_members requires common degree d >= 3")
    if n < 1:
        raise ValueError("n must be >= 1")
    if len(word) != n:
        raise ValueError("word length must equal n")
    A = Fraction(A)
    pool = [as_cyclo(c) for c in coeff_pool]
    house_cap = A ** (d ** (n - 1))
    for c in pool:
        if not c.is_zero():
            if not is_algebraic_integer(c):
                raise ValueError(f"pool element {c} is not an algebraic integer")
            if house_leq(c, house_cap) != HouseCmp.YES:
                raise ValueError(f"pool element {c} exceeds house bound {house_cap}")

    shorter: list[Word] = []
    for k in range(n):
        shorter.extend(words_of_length(sys.s, k))
    target = compose_word(sys, word)
    shorter_polys = [compose_word(sys, w) for w in shorter]

    out: list[SigmaCandidate] = []
    for assignment in itertools.product(pool, repeat=len(shorter)):
        if max_candidates is not None and len(out) >= max_candidates:
            break
        diff = target
        for gamma, p in zip(assignment, shorter_polys):
            if not gamma.is_zero():
                diff = diff - p * gamma
        if diff.is_zero():
            raise DegenerateCombination(
                "difference polynomial vanished identically"
            )
        boxes = certified_root_boxes(list(diff.coeffs), precision_bits=root_precision)
        out.append(
            SigmaCandidate(
                defining_poly=diff,
                word=word,
                combination=dict(zip(shorter, assignment)),
                roots=boxes,
            )
        )
    return out


@dataclass
class SigmaVerification:
    house_bound: Fraction
    root_bound: Fraction
    house_status: str  # "pass" | "fail"
    integrality_status: str  # "pass" | "fail" | "inconclusive"
    integrality_reason: str
    D: int

    def passed(self) -> bool:
        return self.house_status == "pass" and self.integrality_status != "fail"

    def to_json(self):
        from .cyclotomic import frac_str

        return {
            "house_bound_K": frac_str(self.house_bound),
            "certified_root_bound": frac_str(self.root_bound),
            "house_status": self.house_status,
            "D": self.D,
            "integrality_status": self.integrality_status,
            "integrality_reason": self.integrality_reason,
        }


def verify_sigma_bounds(c: SigmaCandidate, sys: PolySystem, A) -> SigmaVerification:
    """Check the bounded-house and D-integrality conclusions on a candidate.

    The house certificate bounds every Galois conjugate of every root through
    per-embedding Cauchy bounds of the defining polynomial; integrality of
    D*root is certified through integer coefficients of D^deg * monic(p)(X/D),
    which requires rational coefficients (otherwise: inconclusive).
    """
    from .bounds import bound_D, bound_K

    K = bound_K(sys, A)
    root_bound = cauchy_root_bound(list(c.defining_poly.coeffs))
    house_status = "pass" if root_bound <= K else "fail"

    D = bound_D(sys) if sys.is_rational() else None
    rats = c.defining_poly.rational_coeffs()
    if rats is None or D is None:
        integrality_status = "inconclusive"
        reason = (
            "defining polynomial has non-rational coefficients; Galois closure "
            "of its roots is not controlled by a single polynomial"
        )
        D_out = D if D is not None else 0
    else:
        monic = [q / rats[-1] for q in rats]
        deg = len(monic) - 1
        ok = all(
            (monic[deg - k] * Fraction(D) ** k).denominator == 1
            for k in range(deg + 1)
        )
        integrality_status = "pass" if ok else "fail"
        reason = "D^k * c_(d-k) integral for all k" if ok else "monicized substitution X -> X/D leaves non-integer coefficients"
        D_out = D
    return SigmaVerification(
        house_bound=K,
        root_bound=root_bound,
        house_status=house_status,
        integrality_status=integrality_status,
        integrality_reason=reason,
        D=D_out,
    )


# -- S_A scanning ---------------------------------------------------------------


@dataclass
class ScanHit:
    alpha: CycloNum
    word: Word
    value: CycloNum

    def to_json(self):
        return {
            "alpha": format_element(self.alpha),
            "word": list(self.word),
            "value": format_element(self.value),
        }


@dataclass
class ScanReport:
    hits: list[ScanHit]
    candidates: int
    skipped_budget: list[CycloNum]

    def hit_pairs(self):
        return {(h.alpha, h.value) for h in self.hits}


def _enumerate_fractions(height: int):
    """Reduced p/q with |p| <= height, 1 <= q <= height, ascending by value."""
    seen = set()
    for q in range(1, height + 1):
        for p in range(-height, height + 1):
            f = Fraction(p, q)
            if abs(f.numerator) <= height and f.denominator <= height:
                seen.add(f)
    return sorted(seen)


def scan_SA(
    sys: PolySystem,
    A,
    conductor_max: int,
    coord_height_max: int,
    depth: int,
    max_nodes: int = DEFAULT_NODE_BUDGET,
) -> ScanReport:
    """Enumerate small cyclotomic starting points whose trees meet H_A.

    Points run over conductors n ascending (n = 1 and n >= 3 with n != 2 mod 4;
    other conductors are redundant), coordinates lexicographic over the
    ascending fraction table; only points whose canonical conductor equals n
    are kept, so each element is visited once.  Every tree value at levels
    1..depth that is an algebraic integer of house <= A becomes a hit with its
    least producing word.  Per-candidate budget overruns are recorded and
    skipped.
    """
    A = Fraction(A)
    if A < 1:
        raise ValueError("scan_SA requires A >= 1")
    from .numtheory import totient

    fracs = _enumerate_fractions(coord_height_max)
    hits: list[ScanHit] = []
    skipped: list[CycloNum] = []
    candidates = 0
    for n in range(1, conductor_max + 1):
        if n > 1 and n % 4 == 2:
            continue
        if n == 2:
            continue
        for coords in itertools.product(fracs, repeat=totient(n)):
            alpha = CycloNum(n, coords)
            if alpha.canonical().n != n:
                continue
            candidates += 1
            alpha = alpha.canonical()
            try:
                tree = build_tree(sys, alpha, depth, max_nodes=max_nodes)
            except TreeBudgetExceeded:
                skipped.append(alpha)
                continue
            for k in range(1, depth + 1):
                for value, words in tree.levels[k].items():
                    if is_algebraic_integer(value) and house_leq(value, A) == HouseCmp.YES:
                        hits.append(ScanHit(alpha=alpha, word=words[0], value=value))
    return ScanReport(hits=hits, candidates=candidates, skipped_budget=skipped)


# -- growth lemma checks ----------------------------------------------------------


def _iv_max(x, y):
    # Certified enclosure of max(x, y) without endpoint comparisons.
    return (x + y + abs(x - y)) / 2


def _arch_threshold_iv(sys: PolySystem, N: int, k: int):
    """Interval for 1 + max_i |s(a_{i,d_i})|^-1 (1 + sum_j |s(a_{i,j})|)."""
    from mpmath import iv

    best = None
    for g in sys.generators:
        lead = abs_embedding_iv(g.leading(), N, k)
        ssum = iv.mpf(0)
        for c in g.coeffs[:-1]:
            if not c.is_zero():
                ssum += abs_embedding_iv(c, N, k)
        term = (1 + ssum) / lead
        best = term if best is None else _iv_max(best, term)
    return 1 + best


def growth_check_arch(sys: PolySystem, a, w: Word, embedding_index: int) -> bool:
    """Strict modulus growth along every prefix of w at one embedding.

    The embedding is indexed into the ascending coprime-residue enumeration of
    the lcm conductor N of the point and every coefficient.  The hypothesis
    |s(a)| > 1 + max_i |s(a_i,d_i)|^-1 (1 + sum_j |s(a_i,j)|) is certified by
    interval refinement; failure to certify raises HypothesisNotMet.
    """
    a = as_cyclo(a)
    N = sys.coefficient_conductor()
    N = N * a.n // math.gcd(N, a.n)
    residues = coprime_residues(N)
    if not 0 <= embedding_index < len(residues):
        raise ValueError(f"embedding index must lie in [0, {len(residues)})")
    k = residues[embedding_index]

    decision = refine_decide(
        lambda bits: (abs_embedding_iv(a, N, k), _arch_threshold_iv(sys, N, k))
    )
    if decision is not True:
        raise HypothesisNotMet(
            "point is not certified above the archimedean growth threshold"
        )

    values = word_prefix_values(sys, w, a)
    for prev, cur in zip(values, values[1:]):
        grew = refine_decide(
            lambda bits: (abs_embedding_iv(cur, N, k), abs_embedding_iv(prev, N, k))
        )
        if grew is not True:
            return False
    return True


def growth_check_padic(sys: PolySystem, a, p: int, w: Word) -> bool:
    """Strict p-adic growth along w, with the exact leading-term valuation law.

    Requires rational coefficients and a rational point.  The hypothesis
    |a|_p > max over i,j of {1, |a_ij|_p |a_id|_p^-1, |a_id|_p^-1} is checked
    exactly; along the word, |f_i(x)|_p = |a_id|_p |x|_p^d must hold term by
    term and the absolute values must strictly increase.
    """
    if not sys.is_rational():
        raise ValueError("growth_check_padic requires rational coefficients")
    aq = as_cyclo(a).as_rational()
    if aq is None:
        raise ValueError("growth_check_padic requires a rational point")

    # Work with valuations: |x|_p > |y|_p iff v(x) < v(y).
    # Hypothesis threshold in valuation form: min over {0, v(aij)-v(aid), -v(aid)}.
    vb_terms = [0]
    for g in sys.generators:
        rc = g.rational_coeffs()
        vlead = padic_val(rc[-1], p)
        for c in rc[:-1]:
            if c != 0:
                vb_terms.append(padic_val(c, p) - vlead)
        vb_terms.append(-vlead)
    vbound = min(vb_terms)
    va = padic_val(aq, p)
    if va is INF or not va < vbound:
        raise HypothesisNotMet(
            "point does not satisfy the non-archimedean growth hypothesis"
        )

    value = aq
    vcur = va
    for i in w:
        g = sys.generator(i)
        rc = g.rational_coeffs()
        nxt = Fraction(0)
        x = Fraction(value)
        for c in reversed(rc):
            nxt = nxt * x + c
        vnext = padic_val(nxt, p)
        expected = padic_val(rc[-1], p) + g.degree * vcur
        if vnext != expected:
            return False
        if not vnext < vcur:
            return False
        value, vcur = nxt, vnext
    return True


@dataclass
class PrefixReport:
    word: Word
    entries: list[dict]
    passed: bool

    def to_json(self):
        return {"word": list(self.word), "entries": self.entries, "passed": self.passed}


def prefix_house_bound(sys: PolySystem, a, w: Word, A) -> PrefixReport:
    """Certify house(f_prefix(a)) <= L for every proper prefix of w.

    Precondition: the endpoint f_w(a) has house <= A (certified).  L is the
    growth constant computed from the system and A.
    """
    from .bounds import bound_L
    from .cyclotomic import frac_str

    a = as_cyclo(a)
    endpoint = evaluate_word(sys, w, a)
    if house_leq(endpoint, A) != HouseCmp.YES:
        raise HypothesisNotMet("endpoint is not certified inside H_A")
    L = bound_L(sys, A)
    entries = []
    ok = True
    values = word_prefix_values(sys, w, a)
    for plen, value in enumerate(values[:-1]):
        h = house(value, 96)
        status = "pass" if h.hi <= L else ("fail" if h.lo > L else "boundary")
        if status != "pass":
            ok = False
        entries.append(
            {
                "prefix": list(w[:plen]),
                "house": [frac_str(h.lo), frac_str(h.hi)],
                "L": frac_str(L),
                "status": status,
            }
        )
    return PrefixReport(word=w, entries=entries, passed=ok)


def prefix_integrality(sys: PolySystem, a, w: Word) -> PrefixReport:
    """Verify D*a and D*f_prefix(a) are algebraic integers for proper prefixes."""
    from .bounds import bound_D

    a = as_cyclo(a)
    endpoint = evaluate_word(sys, w, a)
    if not is_algebraic_integer(endpoint):
        raise HypothesisNotMet("endpoint is not an algebraic integer")
    D = bound_D(sys)
    entries = []
    ok = True
    values = word_prefix_values(sys, w, a)
    for plen, value in enumerate(values[:-1]):
        integral = is_algebraic_integer(value * D)
        if not integral:
            ok = False
        entries.append(
            {
                "prefix": list(w[:plen]),
                "D": D,
                "integral": integral,
            }
        )
    return PrefixReport(word=w, entries=entries, passed=ok)
