"""Partitions, Giambelli determinants, Chern classes of hypersurfaces, the
leading Euler-characteristic expansion of Schur bundles, and the 24-family
approximate decomposition in dimension 4 at jet order 4.

Chern data for a degree-d hypersurface X^n in P^(n+1) lives in the ring
generated by the hyperplane class h with h^(n+1) = 0 and the integration
rule  integral over X of h^n = d, so every degree-n Chern monomial reduces
to an exact polynomial in d.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Dict, List, Optional, Sequence, Tuple

from .degpoly import DegreePolynomial


# ---------------------------------------------------------------------------
# partitions
# ---------------------------------------------------------------------------


def partitions(n: int) -> List[Tuple[int, ...]]:
    """All partitions of n as weakly decreasing tuples (padded with zeros)."""
    out: List[Tuple[int, ...]] = []

    def rec(left: int, top: int, acc: List[int]):
        if left == 0:
            out.append(tuple(acc + [0] * (n - len(acc))))
            return
        for part in range(min(left, top), 0, -1):
            acc.append(part)
            rec(left - part, part, acc)
            acc.pop()

    rec(n, n, [])
    return out


def conjugate(lam: Sequence[int]) -> Tuple[int, ...]:
    """Transpose of the partition diagram, padded to the same length."""
    n = len(lam)
    return tuple(sum(1 for part in lam if part >= i) for i in range(1, n + 1))


# ---------------------------------------------------------------------------
# Chern classes of a hypersurface
# ---------------------------------------------------------------------------


@dataclass
class ChernSystem:
    """c_k(T_X) = q_k(d) h^k on a degree-d hypersurface X^n in P^(n+1)."""

    n: int
    classes: List[DegreePolynomial]  # index k: the d-polynomial q_k

    def q(self, k: int) -> DegreePolynomial:
        if k < 0 or k > self.n:
            return DegreePolynomial()
        return self.classes[k]

    def integrate_monomial(self, ks: Sequence[int], dual: bool = False) -> DegreePolynomial:
        """Integral over X of the product of the c_k, for sum(ks) == n."""
        if sum(ks) != self.n:
            raise ValueError(f"Chern monomial of degree {sum(ks)} != n={self.n}")
        acc = DegreePolynomial.d()  # integral of h^n
        for k in ks:
            acc = acc * self.q(k)
        if dual and self.n % 2:
            acc = -acc
        return acc

    def integrate_combo(self, combo: Dict[Tuple[int, ...], Fraction],
                        dual: bool = False) -> DegreePolynomial:
        acc = DegreePolynomial()
        for ks, c in combo.items():
            acc = acc + c * self.integrate_monomial(ks, dual=dual)
        return acc


def chern_hypersurface(n: int) -> ChernSystem:
    """Chern polynomials from the recurrence q_k = binom(n+2,k) - d q_(k-1)."""
    if n < 1:
        raise ValueError("dimension must be >= 1")
    d = DegreePolynomial.d()
    qs = [DegreePolynomial.constant(1)]
    for k in range(1, n + 1):
        qs.append(DegreePolynomial.constant(comb(n + 2, k)) - d * qs[-1])
    return ChernSystem(n, qs)


# ---------------------------------------------------------------------------
# Giambelli determinants in abstract Chern classes
# ---------------------------------------------------------------------------

ChernCombo = Dict[Tuple[int, ...], Fraction]


def giambelli(lam_conj: Sequence[int], n: int) -> ChernCombo:
    """The determinant det(c_{lam^c_i - i + j}) as {sorted index tuple: coeff}.

    Conventions: c_0 = 1 and c_k = 0 for k < 0 or k > n.  The result is a
    homogeneous degree-n combination of abstract Chern classes.
    """
    from itertools import permutations

    size = len(lam_conj)
    combo: ChernCombo = {}
    for perm in permutations(range(size)):
        inv = sum(1 for a in range(size) for b in range(a + 1, size)
                  if perm[a] > perm[b])
        sign = -1 if inv % 2 else 1
        ks = []
        ok = True
        for i in range(size):
            k = lam_conj[i] - (i + 1) + (perm[i] + 1)
            if k < 0 or k > n:
                ok = False
                break
            if k > 0:
                ks.append(k)
        if not ok:
            continue
        key = tuple(sorted(ks))
        combo[key] = combo.get(key, Fraction(0)) + sign
        if not combo[key]:
            del combo[key]
    return combo


def format_chern_combo(combo: ChernCombo) -> str:
    def mono(ks: Tuple[int, ...]) -> str:
        if not ks:
            return "1"
        parts = []
        for k in sorted(set(ks)):
            e = ks.count(k)
            parts.append(f"c{k}" + (f"^{e}" if e > 1 else ""))
        return " ".join(parts)

    items = sorted(combo.items())
    chunks = []
    for ks, c in items:
        body = mono(ks) if abs(c) == 1 else f"{abs(c)} {mono(ks)}"
        chunks.append(("-" if c < 0 else "+", body))
    out = ("-" if chunks[0][0] == "-" else "") + chunks[0][1]
    for sign, body in chunks[1:]:
        out += f" {sign} {body}"
    return out


# ---------------------------------------------------------------------------
# leading term of the Euler characteristic of a Schur bundle
# ---------------------------------------------------------------------------


@dataclass
class ChiSlot:
    """One partition's contribution: determinant exponents and Chern data."""

    name: str                 # ascending exponent digits, e.g. "0127"
    exponents: Tuple[int, ...]  # descending, as in the expansion theorem
    denominator: int          # product of the factorials of the exponents
    combo: ChernCombo         # Giambelli combination for the conjugate


def chi_slots(n: int) -> List[ChiSlot]:
    out = []
    for lam in partitions(n):
        mu = tuple(lam[i] + n - (i + 1) for i in range(n))  # strictly decreasing
        denom = 1
        for e in mu:
            denom *= factorial(e)
        name = "".join(str(e) for e in sorted(mu))
        out.append(ChiSlot(name, mu, denom, giambelli(conjugate(lam), n)))
    out.sort(key=lambda s: s.name)
    return out


def _det(rows: List[List[Fraction]]) -> Fraction:
    """Exact determinant by fraction-free-ish Gaussian elimination."""
    m = [row[:] for row in rows]
    k = len(m)
    sign = 1
    acc = Fraction(1)
    for col in range(k):
        pivot = next((r for r in range(col, k) if m[r][col]), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            sign = -sign
        pv = m[col][col]
        acc *= pv
        for r in range(col + 1, k):
            if m[r][col]:
                f = m[r][col] / pv
                m[r] = [a - f * b for a, b in zip(m[r], m[col])]
    return sign * acc


def chi_schur_leading(ell: Sequence[int], cs: ChernSystem,
                      dual: bool = True, shifted: bool = True) -> DegreePolynomial:
    """Coefficient polynomial of the leading order of chi(X, Schur(ell) bundle).

    Sums, over the partitions of n, the integrated Giambelli coefficient
    times the power determinant in ell'_i = ell_i + n - i (rows in
    descending exponent order).  `dual` computes the cotangent twist, which
    multiplies by (-1)^n; `shifted=False` uses the plain ell_i, harmless at
    leading order and used by the exact golden-value integrals.
    """
    n = cs.n
    if len(ell) != n:
        raise ValueError(f"expected {n} Schur indices")
    lp = [Fraction(e + (n - i - 1 if shifted else 0)) for i, e in enumerate(ell)]
    acc = DegreePolynomial()
    for slot in chi_slots(n):
        rows = [[x ** e for x in lp] for e in slot.exponents]
        det = _det(rows)
        if det:
            cpart = cs.integrate_combo(slot.combo, dual=dual)
            acc = acc + cpart * (det / slot.denominator)
    return acc


# ---------------------------------------------------------------------------
# the 24 monomial families of the dimension-4 decomposition
# ---------------------------------------------------------------------------

# exponent letters in the fixed generator order; o and p are the free
# powers of f_1' and of the full Wronskian
FAMILY_LETTERS = "abcdefghijklmnop"

GENERATOR_ORDER = ("L3", "L5", "L7", "D6", "D8", "N10", "M8", "E10",
                   "L12", "Q14", "R15", "U17", "V19", "X21", "f1", "W10")

GENERATOR_WEIGHTS = dict(L3=3, L5=5, L7=7, D6=6, D8=8, N10=10, M8=8, E10=10,
                         L12=12, Q14=14, R15=15, U17=17, V19=19, X21=21,
                         f1=1, W10=10)


def generator_schur_counts() -> Dict[str, Tuple[int, int, int, int]]:
    """Per-component index counts of the sixteen bi-invariants (computed)."""
    from .catalog import load_catalog

    data = load_catalog("UE4k4")
    return {e.name: tuple(e.counts) for e in data.entries}


@dataclass
class FamilySpec:
    id: str
    word: str                      # the vanishing letters (1-markers dropped)
    multiplicity: int
    free: List[str]                # free exponent letters among a..n, plus o, p
    weights: Dict[str, int]        # letter -> jet weight
    counts: Dict[str, Tuple[int, int, int, int]]  # letter -> Schur index counts

    def ell_forms(self) -> List[Dict[str, int]]:
        """The four linear forms ell_1..ell_4 over the free exponents."""
        return [{x: self.counts[x][i] for x in self.free if self.counts[x][i]}
                for i in range(4)]


class ConstraintWord:
    """A conjunction of per-letter constraints: letter -> 0 or 1."""

    __slots__ = ("fixed",)

    def __init__(self, fixed: Dict[str, int]):
        self.fixed = dict(fixed)

    def key(self) -> tuple:
        return tuple(sorted(self.fixed.items()))

    def merge(self, other: "ConstraintWord") -> Optional["ConstraintWord"]:
        out = dict(self.fixed)
        for k, v in other.fixed.items():
            if out.get(k, v) != v:
                return None  # {x=0} & {x=1} is empty
            out[k] = v
        return ConstraintWord(out)

    def implies(self, other: "ConstraintWord") -> bool:
        """True when this word's set is contained in the other's."""
        return all(self.fixed.get(k) == v for k, v in other.fixed.items())

    def letters(self) -> str:
        return "".join(sorted(self.fixed))

    def __repr__(self):
        return "".join(f"{k}{'' if v == 0 else chr(0xB9)}"
                       for k, v in sorted(self.fixed.items()))


def _union_product(a: List[ConstraintWord], b: List[ConstraintWord],
                   max_letters: Optional[int] = None) -> List[ConstraintWord]:
    merged: Dict[tuple, ConstraintWord] = {}
    for wa in a:
        for wb in b:
            w = wa.merge(wb)
            if w is None:
                continue
            if max_letters is not None and len(w.fixed) > max_letters:
                continue
            merged[w.key()] = w
    # absorb: a word is redundant when a shorter kept word covers it
    words = sorted(merged.values(), key=lambda w: len(w.fixed))
    keep: List[ConstraintWord] = []
    for w in words:
        if not any(w.implies(v) for v in keep):
            keep.append(w)
    return keep


def quadrant_complement_words(vertices: List[Dict[str, int]],
                              max_letters: int = 9) -> List[ConstraintWord]:
    """Intersection over the quadrants of the complements {e < vertex_e}.

    Each quadrant {x >= v_x, ...} has complement the union over its letters
    of {x = 0}, ..., {x = v_x - 1}; the intersection is expanded as a union
    of constraint words, dropping words longer than `max_letters` (they only
    contribute below the leading order).
    """
    current = [ConstraintWord({})]
    for vert in vertices:
        union = []
        for letter, v in sorted(vert.items()):
            for value in range(v):
                union.append(ConstraintWord({letter: value}))
        current = _union_product(current, union, max_letters=max_letters)
    return sorted(current, key=lambda w: (w.letters(), w.key()))


def syzygy_lead_vertices_lex() -> List[Dict[str, int]]:
    """Leading-term quadrants of the 41 syzygies under the listing Lex order."""
    from .catalog import load_catalog
    from .polyring import Lex, Polynomial, tag

    data = load_catalog("UE4k4")
    letters = {name: FAMILY_LETTERS[k] for k, name in enumerate(GENERATOR_ORDER)}
    active = [name for name in GENERATOR_ORDER if name not in ("f1", "W10")]
    tags = {n: tag(n, GENERATOR_WEIGHTS[n], k) for k, n in enumerate(active)}
    order = Lex()
    verts = []
    for s in data.syzygy_sets["lex41"]:
        sub = {v: Polynomial.variable(tags[v.name[2:]])
               for v in s.relation.variables()}
        rel = s.relation.substitute(sub)
        lead = order.leading_monomial(rel)
        verts.append({letters[v.name[2:]]: e for v, e in lead})
    return verts


def enumerate_families() -> List[FamilySpec]:
    """The 24 families with multiplicities from the quadrant-word computation."""
    counts = generator_schur_counts()
    letter_of = {name: FAMILY_LETTERS[k] for k, name in enumerate(GENERATOR_ORDER)}
    weights = {letter_of[n]: GENERATOR_WEIGHTS[n] for n in GENERATOR_ORDER}
    lcounts = {letter_of[n]: counts[n] for n in GENERATOR_ORDER}
    words = quadrant_complement_words(syzygy_lead_vertices_lex())
    groups: Dict[str, List[ConstraintWord]] = {}
    for w in words:
        groups.setdefault(w.letters(), []).append(w)
    base_words = sorted(groups)
    if len(base_words) > 26:
        raise AssertionError("unexpected family count")
    out = []
    for idx, word in enumerate(base_words):
        fam_id = chr(ord("A") + idx)
        free = [x for x in FAMILY_LETTERS[:14] if x not in word] + ["o", "p"]
        out.append(FamilySpec(fam_id, word, len(groups[word]), free,
                              weights, lcounts))
    return out
