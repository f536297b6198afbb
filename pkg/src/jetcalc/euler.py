"""Exact iterated integration over weighted simplices, the per-family
contributions to the leading Euler characteristic of the jet bundles in
dimensions 3 and 4, the second-cohomology majorant, and integer positivity
thresholds via exact root isolation.

All determinant integrals reduce to a single power of the weight m times an
exact rational; five Chern slots assemble these into polynomials in the
hypersurface degree d.  No floating point enters any decision path; float
approximations of roots are provided for display only.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

from .degpoly import DegreePolynomial
from .polyring import Polynomial, Variable, tag
from .schur import (
    FamilySpec,
    chern_hypersurface,
    chi_slots,
    enumerate_families,
)


# ---------------------------------------------------------------------------
# exact iterated simplex integration
# ---------------------------------------------------------------------------


def _var(name: str, index: int) -> Variable:
    return tag(name, 0, index)


def antiderivative(p: Polynomial, x: Variable) -> Polynomial:
    """Power-rule antiderivative in x (constant of integration zero)."""
    terms = {}
    for m, c in p.terms.items():
        mono = []
        e = 0
        for v, ee in m:
            if v is x:
                e = ee
            else:
                mono.append((v, ee))
        mono.append((x, e + 1))
        mono.sort(key=lambda pr: pr[0].key)
        terms[tuple(mono)] = c / (e + 1)
    return Polynomial(_raw=terms)


def simplex_integral(integrand: Polynomial, nesting: Sequence[Tuple[Variable, int]],
                     m_var: Variable) -> Polynomial:
    """Iterated integral over the weighted simplex {sum w_i x_i <= m, x >= 0}.

    Variables are integrated in list order (first = innermost); the upper
    bound of x_i is (m - sum of the later weighted variables) / w_i and the
    lower bound is 0.  Returns the exact polynomial in m.
    """
    acc = integrand
    remaining = list(nesting)
    while remaining:
        (x, w), remaining = remaining[0], remaining[1:]
        bound = Polynomial.variable(m_var)
        for y, wy in remaining:
            bound = bound - wy * Polynomial.variable(y)
        bound = bound * Fraction(1, w)
        acc = antiderivative(acc, x).substitute({x: bound})
    return acc


def top_coefficient(p: Polynomial, m_var: Variable, expected_degree: int) -> Fraction:
    """Coefficient of m^expected_degree in a univariate polynomial in m."""
    total = Fraction(0)
    for mono, c in p.terms.items():
        if not mono:
            continue
        if len(mono) != 1 or mono[0][0] is not m_var:
            raise ValueError("polynomial is not univariate in m")
        if mono[0][1] == expected_degree:
            total += c
    return total


def simplex_top_coefficient(integrand: Polynomial,
                            nesting: Sequence[Tuple[Variable, int]],
                            m_var: Variable) -> Fraction:
    """Top-m coefficient of the simplex integral of a homogeneous integrand.

    For a monomial m^e x^alpha the integral over {sum w_i x_i <= m} is the
    Dirichlet value m^(e+|alpha|+k) prod(alpha_i!) / ((|alpha|+k)! prod
    w_i^(alpha_i+1)), so every monomial of a homogeneous integrand feeds the
    same top power; summing the closed forms avoids iterated antiderivatives.
    """
    from math import factorial

    weights = {v: w for v, w in nesting}
    k = len(nesting)
    total = Fraction(0)
    for mono, c in integrand.terms.items():
        asum = 0
        numer = 1
        wprod = 1
        for v, e in mono:
            if v is m_var:
                continue
            asum += e
            numer *= factorial(e)
            wprod *= weights[v] ** e
        for v, w in nesting:
            wprod *= w
        total += c * Fraction(numer, factorial(asum + k) * wprod)
    return total


# ---------------------------------------------------------------------------
# family contributions
# ---------------------------------------------------------------------------


def _ell_polynomials(family: FamilySpec, m_var: Variable,
                     letter_vars: Dict[str, Variable], n: int) -> List[Polynomial]:
    """ell_1..ell_n over the free exponents, with o eliminated by the weight."""
    ells = []
    for i in range(n):
        acc = Polynomial.zero()
        for x in family.free:
            if x == "o":
                continue
            if n == 3 and x == "p":
                continue
            cnt = family.counts[x][i]
            if cnt:
                acc = acc + cnt * Polynomial.variable(letter_vars[x])
        ells.append(acc)
    if "o" in family.free:
        # o = m - sum of the weighted free exponents; its only index count
        # is one on the first component
        acc = Polynomial.variable(m_var)
        for x in family.free:
            if x == "o":
                continue
            if n == 3 and x == "p":
                continue
            acc = acc - family.weights[x] * Polynomial.variable(letter_vars[x])
        ells[0] = ells[0] + acc
    return ells


def _power_tables(ells: Sequence[Polynomial], top: int) -> List[Dict[int, Polynomial]]:
    tables = []
    for ell in ells:
        cache = {0: Polynomial.constant(1)}
        for e in range(1, top + 1):
            cache[e] = cache[e - 1] * ell
        tables.append(cache)
    return tables


def _slot_determinant(ells: Sequence[Polynomial], exponents: Sequence[int],
                      tables: Optional[List[Dict[int, Polynomial]]] = None) -> Polynomial:
    """det(ell_j ^ e_i) with the exponent rows in ascending order.

    The ascending convention matches the printed golden integrals; in even
    dimensions it agrees with the descending convention of the expansion
    theorem, and in odd dimensions the assembly multiplies by the reversal
    sign (-1)^(n(n-1)/2).
    """
    from itertools import permutations

    exps = sorted(exponents)
    k = len(ells)
    if tables is None:
        tables = _power_tables(ells, max(exps))
    acc = Polynomial.zero()
    for perm in permutations(range(k)):
        inv = sum(1 for a in range(k) for b in range(a + 1, k) if perm[a] > perm[b])
        term = Polynomial.constant(-1 if inv % 2 else 1)
        for r in range(k):
            term = term * tables[perm[r]][exps[r]]
        acc = acc + term
    return acc


def reversal_sign(n: int) -> int:
    """Sign relating ascending-row determinants to the theorem's descending rows."""
    return -1 if (n * (n - 1) // 2) % 2 else 1


@dataclass
class FamilyContribution:
    family: str
    multiplicity: int
    slots: Dict[str, Fraction]  # slot name -> coefficient of m^top


def family_contribution(family: FamilySpec, n: int = 4,
                        integrand_factory=None) -> FamilyContribution:
    """The m^top coefficients of the slot determinant integrals for a family.

    For n = 4 the five 4x4 determinant slots integrate over the six free
    exponents to m^16 times a rational; for n = 3 (p = 0, fourth index
    dropped) the three 3x3 slots give m^11.  A custom `integrand_factory`
    (ells -> polynomial) computes other summands, e.g. the h^2 majorant.
    """
    m_var = _var("m", 0)
    letters = [x for x in family.free if x != "o" and not (n == 3 and x == "p")]
    letter_vars = {x: _var(x, k + 1) for k, x in enumerate(letters)}
    ells = _ell_polynomials(family, m_var, letter_vars, n)
    nesting = [(letter_vars[x], family.weights[x]) for x in letters]
    slots: Dict[str, Fraction] = {}
    if integrand_factory is None:
        abstract = _abstract_slot_determinants(n)
        needed = sorted({a for coeffs in abstract.values() for a in coeffs})
        moments = _ell_moments(ells, needed, nesting, m_var)
        for name, coeffs in abstract.items():
            slots[name] = sum((c * moments[a] for a, c in coeffs.items()),
                              Fraction(0))
    else:
        integrand = integrand_factory(ells)
        slots["value"] = simplex_top_coefficient(integrand, nesting, m_var)
    return FamilyContribution(family.id, family.multiplicity, slots)


def _abstract_slot_determinants(n: int) -> Dict[str, Dict[Tuple[int, ...], Fraction]]:
    """Each slot determinant expanded over abstract ell-symbols (cached).

    Returns {slot name: {exponent vector of (ell_1..ell_n): coefficient}}.
    """
    got = _ABSTRACT_DETS.get(n)
    if got is not None:
        return got
    symbols = [_var(f"l{i}", 100 + i) for i in range(1, n + 1)]
    polys = [Polynomial.variable(s) for s in symbols]
    out: Dict[str, Dict[Tuple[int, ...], Fraction]] = {}
    for slot in chi_slots(n):
        det = _slot_determinant(polys, slot.exponents)
        coeffs: Dict[Tuple[int, ...], Fraction] = {}
        for mono, c in det.terms.items():
            row = [0] * n
            for v, e in mono:
                row[symbols.index(v)] = e
            coeffs[tuple(row)] = c
        out[slot.name] = coeffs
    _ABSTRACT_DETS[n] = out
    return out


_ABSTRACT_DETS: Dict[int, Dict[str, Dict[Tuple[int, ...], Fraction]]] = {}


def _ell_moments(ells: Sequence[Polynomial], needed: Sequence[Tuple[int, ...]],
                 nesting: Sequence[Tuple[Variable, int]],
                 m_var: Variable) -> Dict[Tuple[int, ...], Fraction]:
    """Top-m simplex integrals of the products prod ell_i^(a_i).

    Products are built over a dense local exponent encoding with prefix
    caching, so the exponent vectors needed by the slots share expansions.
    """
    from math import factorial

    symbols = [m_var] + [v for v, _ in nesting]
    index = {v: k for k, v in enumerate(symbols)}
    k = len(nesting)
    zero_exp = (0,) * len(symbols)

    def densify(p: Polynomial) -> Dict[Tuple[int, ...], int]:
        out = {}
        for mono, c in p.terms.items():
            row = [0] * len(symbols)
            for v, e in mono:
                row[index[v]] = e
            if c.denominator != 1:
                raise ValueError("moment pipeline expects integer linear forms")
            out[tuple(row)] = c.numerator
        return out

    def dmul(a: Dict, b: Dict) -> Dict:
        if len(a) < len(b):
            a, b = b, a
        out: Dict[Tuple[int, ...], int] = {}
        get = out.get
        items = list(a.items())
        for eb, cb in b.items():
            for ea, ca in items:
                key = tuple(x + y for x, y in zip(ea, eb))
                s = get(key)
                if s is None:
                    out[key] = ca * cb
                else:
                    s = s + ca * cb
                    if s:
                        out[key] = s
                    else:
                        del out[key]
        return out

    top = max(max(a) for a in needed) if needed else 0
    powers = []
    for ell in ells:
        dell = densify(ell)
        cache = {0: {zero_exp: 1}, 1: dell}
        for e in range(2, top + 1):
            cache[e] = dmul(cache[e - 1], dell)
        powers.append(cache)
    prefix_cache: Dict[Tuple[int, ...], Dict] = {(): {zero_exp: 1}}

    def product(prefix: Tuple[int, ...]) -> Dict:
        got = prefix_cache.get(prefix)
        if got is None:
            head, last = prefix[:-1], prefix[-1]
            got = dmul(product(head), powers[len(prefix) - 1][last])
            prefix_cache[prefix] = got
        return got

    wvec = [w for _, w in nesting]
    wbase = 1
    for w in wvec:
        wbase *= w
    fact = [factorial(i) for i in range(top * len(ells) + k + 1)]

    def dirichlet(dense: Dict) -> Fraction:
        total = Fraction(0)
        for exps, c in dense.items():
            asum = 0
            numer = 1
            wprod = wbase
            for i in range(1, len(exps)):
                e = exps[i]
                if e:
                    asum += e
                    numer *= fact[e]
                    wprod *= wvec[i - 1] ** e
            total += c * Fraction(numer, fact[asum + k] * wprod)
        return total

    return {a: dirichlet(product(a)) for a in needed}


def family_contributions(families: Sequence[FamilySpec], n: int = 4,
                         jobs: int = 1) -> List[FamilyContribution]:
    """Per-family contributions, optionally as a parallel map.

    Parallelism affects wall time only: results are collected in family
    order regardless of completion order.
    """
    if jobs <= 1 or len(families) <= 1:
        return [family_contribution(f, n) for f in families]
    from concurrent.futures import ProcessPoolExecutor

    with ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = [pool.submit(family_contribution, f, n) for f in families]
        return [f.result() for f in futures]


def coefficient_slots(n: int = 4,
                      families: Optional[List[FamilySpec]] = None,
                      jobs: int = 1) -> Dict[str, Fraction]:
    """Multiplicity-weighted totals of the per-family slot coefficients."""
    families = families if families is not None else enumerate_families()
    totals: Dict[str, Fraction] = {}
    for fam, contrib in zip(families, family_contributions(families, n, jobs)):
        for name, val in contrib.slots.items():
            totals[name] = totals.get(name, Fraction(0)) + fam.multiplicity * val
    return totals


# ---------------------------------------------------------------------------
# leading Euler characteristics in dimensions 4 and 3
# ---------------------------------------------------------------------------


def assemble_chi(coeffs: Dict[str, Fraction], n: int,
                 dual: bool = True) -> DegreePolynomial:
    """Pair slot coefficients with integrated Giambelli combinations."""
    cs = chern_hypersurface(n)
    acc = DegreePolynomial()
    for slot in chi_slots(n):
        c = coeffs.get(slot.name, Fraction(0))
        if c:
            acc = acc + cs.integrate_combo(slot.combo, dual=dual) * (c / slot.denominator)
    return acc * reversal_sign(n)


def chi_e44_leading(families: Optional[List[FamilySpec]] = None) -> DegreePolynomial:
    """Coefficient of m^16 in chi of the dimension-4 order-4 jet bundle."""
    return assemble_chi(coefficient_slots(4, families), 4)


def chi_e43_leading(families: Optional[List[FamilySpec]] = None) -> DegreePolynomial:
    """Coefficient of m^11 in chi of the dimension-3 order-4 jet bundle."""
    return assemble_chi(coefficient_slots(3, families), 3)


H2_FACTOR = Fraction(3, 2)


def h2_majorant_coefficient(families: Optional[List[FamilySpec]] = None) -> Fraction:
    """Sum over the families of the integrated h^2 bound kernel.

    The imported per-bundle bound is d(d+13) * (3/2)(l1+l2+l3)^3 *
    (l1-l2)(l1-l3)(l2-l3) + lower order; the returned rational is the m^11
    coefficient multiplying d(d+13).
    """
    families = families if families is not None else enumerate_families()

    def kernel(ells: Sequence[Polynomial]) -> Polynomial:
        l1, l2, l3 = ells[0], ells[1], ells[2]
        s = l1 + l2 + l3
        return H2_FACTOR * s * s * s * (l1 - l2) * (l1 - l3) * (l2 - l3)

    total = Fraction(0)
    for fam in families:
        contrib = family_contribution(fam, 3, integrand_factory=kernel)
        total += fam.multiplicity * contrib.slots["value"]
    return total


def h2_majorant_e43(families: Optional[List[FamilySpec]] = None) -> DegreePolynomial:
    d = DegreePolynomial.d()
    return h2_majorant_coefficient(families) * d * (d + 13)


def h0_minorant_e43(families: Optional[List[FamilySpec]] = None) -> DegreePolynomial:
    families = families if families is not None else enumerate_families()
    return chi_e43_leading(families) - h2_majorant_e43(families)


def chi_rousseau_e33() -> DegreePolynomial:
    """Leading coefficient of chi for the dimension-3 order-3 jet bundle.

    Sums the Schur slots over the classical decomposition indexed by
    a + 3b + 5c + 6e = m with indices (a+b+2c+e, b+c+e, e).
    """
    m_var = _var("m", 0)
    b, c, e = _var("b", 1), _var("c", 2), _var("e", 3)
    B, C, E = (Polynomial.variable(v) for v in (b, c, e))
    M = Polynomial.variable(m_var)
    # a = m - 3b - 5c - 6e
    l1 = M - 2 * B - 3 * C - 5 * E
    l2 = B + C + E
    l3 = E
    nesting = [(b, 3), (c, 5), (e, 6)]
    cs = chern_hypersurface(3)
    acc = DegreePolynomial()
    for slot in chi_slots(3):
        integrand = _slot_determinant([l1, l2, l3], slot.exponents)
        coeff = simplex_top_coefficient(integrand, nesting, m_var)
        acc = acc + cs.integrate_combo(slot.combo, dual=True) * (coeff / slot.denominator)
    return acc * reversal_sign(3)


# ---------------------------------------------------------------------------
# integer positivity thresholds (exact root isolation)
# ---------------------------------------------------------------------------


class NonPositiveLeading(Exception):
    pass


def _sturm_chain(p: DegreePolynomial) -> List[DegreePolynomial]:
    chain = [p, p.derivative()]
    while chain[-1]:
        rem = _poly_mod(chain[-2], chain[-1])
        if not rem:
            break
        chain.append(-rem)
    return [q for q in chain if q]


def _poly_mod(a: DegreePolynomial, b: DegreePolynomial) -> DegreePolynomial:
    r = a
    while r and r.degree >= b.degree:
        shift = r.degree - b.degree
        factor = r.coeffs[-1] / b.coeffs[-1]
        sub = DegreePolynomial([0] * shift + list(b.coeffs)) * factor
        r = r - sub
    return r


def _sign_changes(chain: List[DegreePolynomial], x: Fraction) -> int:
    signs = []
    for q in chain:
        v = q(x)
        if v:
            signs.append(1 if v > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _poly_gcd(a: DegreePolynomial, b: DegreePolynomial) -> DegreePolynomial:
    while b:
        a, b = b, _poly_mod(a, b)
    return a


def real_root_count(p: DegreePolynomial, lo: Fraction, hi: Fraction) -> int:
    """Number of distinct real roots in (lo, hi] by Sturm's theorem."""
    g = _poly_gcd(p, p.derivative())
    if g.degree > 0:
        p = _poly_quot(p, g)
    chain = _sturm_chain(p)
    return _sign_changes(chain, lo) - _sign_changes(chain, hi)


def _poly_quot(a: DegreePolynomial, b: DegreePolynomial) -> DegreePolynomial:
    out = [Fraction(0)] * (a.degree - b.degree + 1)
    r = a
    while r and r.degree >= b.degree:
        shift = r.degree - b.degree
        factor = r.coeffs[-1] / b.coeffs[-1]
        out[shift] = factor
        r = r - DegreePolynomial([0] * shift + list(b.coeffs)) * factor
    return DegreePolynomial(out)


def cauchy_bound(p: DegreePolynomial) -> int:
    lead = abs(p.coeffs[-1])
    mx = max(abs(c) for c in p.coeffs)
    bound = 1 + mx / lead
    return int(bound) + 1


def positivity_threshold(p: DegreePolynomial) -> int:
    """Least integer D with p(x) > 0 for every integer x >= D.

    Requires a positive leading coefficient.  When p has no real roots (or
    is positive at every integer) the floor of the least real root bound is
    returned, which satisfies the contract vacuously.
    """
    if not p or p.coeffs[-1] <= 0:
        raise NonPositiveLeading("positivity threshold needs a positive leading coefficient")
    if p.degree == 0:
        return 0
    bound = cauchy_bound(p)
    lo, hi = Fraction(-bound - 1), Fraction(bound)
    if real_root_count(p, lo, hi) == 0:
        return -bound
    # bisect for the integer ceiling of the largest real root
    a, b = lo, hi
    while b - a > 1:
        mid = Fraction(int((a + b) // 2))
        if real_root_count(p, mid, hi) >= 1:
            a = mid
        else:
            b = mid
    # scan down for the largest integer with p <= 0; stop once no roots remain
    cand = None
    for x in range(int(b), -bound - 2, -1):
        if p(x) <= 0:
            cand = x
            break
        if real_root_count(p, lo, Fraction(x)) == 0:
            break
    if cand is None:
        return -bound
    D = cand + 1
    assert p(D) > 0 and p(D - 1) <= 0
    return D


def real_roots_approx(p: DegreePolynomial, digits: int = 6) -> List[float]:
    """Float approximations of the distinct real roots (display only)."""
    g = _poly_gcd(p, p.derivative())
    if g.degree > 0:
        p = _poly_quot(p, g)
    bound = cauchy_bound(p)
    roots = []
    chain = _sturm_chain(p)

    def count(a: Fraction, b: Fraction) -> int:
        return _sign_changes(chain, a) - _sign_changes(chain, b)

    def isolate(a: Fraction, b: Fraction):
        k = count(a, b)
        if k == 0:
            return
        if k == 1 and b - a < Fraction(1, 10 ** digits):
            roots.append(float((a + b) / 2))
            return
        mid = (a + b) / 2
        isolate(a, mid)
        isolate(mid, b)

    isolate(Fraction(-bound - 1), Fraction(bound))
    return sorted(roots)


# ---------------------------------------------------------------------------
# golden assembly: numerators over the printed common denominators
# ---------------------------------------------------------------------------


def scaled_numerator(p: DegreePolynomial, denominator: int) -> List[int]:
    """Integer coefficients of denominator * p, exact or raises."""
    out = []
    for c in p.coeffs:
        v = c * denominator
        if v.denominator != 1:
            raise ValueError(f"denominator {denominator} does not clear {c}")
        out.append(int(v))
    return out
