"""Sparse multivariate polynomials over exact rationals.

Variables come in four kinds: jet derivatives f_i^(lam), formal
reparametrization derivatives phi^(lam), formal unipotent matrix entries
u[r][c], and named tag variables standing for invariants.  Coefficients are
`fractions.Fraction` throughout; no floating point enters any computation.

Polynomials are immutable values (plain dicts wrapped in a thin class); all
operations return new objects, so they are safe to share between tasks.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Iterator, Mapping, Optional, Sequence, Tuple, Union

Coeff = Union[int, Fraction]

_JET, _PHI, _UNI, _TAG = 0, 1, 2, 3
_KIND_NAMES = ("jet", "phi", "uni", "tag")


class RingMismatch(Exception):
    """A polynomial uses variables outside the ring it is handed to."""


class NotDivisible(Exception):
    """Raised by divide_exact when no exact quotient exists."""


class Variable:
    """A single indeterminate with structural identity.

    The total order (seniority) is: jets first, ordered by (component,
    order) so that f[1]' is the most senior jet, then phi-derivatives,
    then unipotent entries, then tags in declaration order.
    """

    __slots__ = ("kind", "i", "j", "name", "weight", "key", "_hash")

    _interned: Dict[tuple, "Variable"] = {}

    def __new__(cls, kind: int, i: int, j: int, name: str, weight: int, key: tuple):
        ident = (kind, i, j, name, weight)
        got = cls._interned.get(ident)
        if got is not None:
            return got
        self = object.__new__(cls)
        self.kind = kind
        self.i = i
        self.j = j
        self.name = name
        self.weight = weight
        self.key = key
        self._hash = hash(ident)
        cls._interned[ident] = self
        return self

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other) -> bool:
        return self is other

    def __lt__(self, other: "Variable") -> bool:
        # "less than" = more senior; monomial tuples are kept sorted this way
        return self.key < other.key

    def __repr__(self) -> str:
        return f"Variable({self.name})"

    def __str__(self) -> str:
        return self.name


def jet(i: int, lam: int) -> Variable:
    """The formal derivative f_i^(lam), of weight lam."""
    if i < 1 or lam < 1:
        raise ValueError(f"jet indices out of range: i={i}, lam={lam}")
    name = f"f[{i}]" + "'" * lam
    return Variable(_JET, i, lam, name, lam, (_JET, i, lam))


def phi(lam: int) -> Variable:
    """The formal reparametrization derivative phi^(lam), lam >= 1."""
    if lam < 1:
        raise ValueError(f"phi order out of range: {lam}")
    name = "phi" + "'" * lam
    return Variable(_PHI, 0, lam, name, lam, (_PHI, 0, lam))


def uni(r: int, c: int) -> Variable:
    """Unipotent matrix entry u[r][c], below the diagonal (r > c)."""
    if not r > c >= 1:
        raise ValueError(f"unipotent entry must have row > col >= 1: ({r},{c})")
    name = f"u[{r}][{c}]"
    return Variable(_UNI, r, c, name, 0, (_UNI, r, c))


def tag(name: str, weight: int = 0, index: int = 0) -> Variable:
    """A named tag variable; `index` fixes its place in the tag order."""
    return Variable(_TAG, index, 0, f"t:{name}", weight, (_TAG, index, name))


def is_jet(v: Variable) -> bool:
    return v.kind == _JET


def is_phi(v: Variable) -> bool:
    return v.kind == _PHI


def is_uni(v: Variable) -> bool:
    return v.kind == _UNI


def is_tag(v: Variable) -> bool:
    return v.kind == _TAG


# A monomial is a tuple of (Variable, exponent) pairs, sorted by seniority,
# with all exponents positive.  The empty tuple is the unit monomial.
Monomial = Tuple[Tuple[Variable, int], ...]

ONE_MONOMIAL: Monomial = ()


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    out = []
    ia = ib = 0
    na, nb = len(a), len(b)
    while ia < na and ib < nb:
        va, ea = a[ia]
        vb, eb = b[ib]
        if va is vb:
            out.append((va, ea + eb))
            ia += 1
            ib += 1
        elif va.key < vb.key:
            out.append(a[ia])
            ia += 1
        else:
            out.append(b[ib])
            ib += 1
    out.extend(a[ia:])
    out.extend(b[ib:])
    return tuple(out)


def mono_divides(a: Monomial, b: Monomial) -> bool:
    """True when monomial a divides b."""
    ib = 0
    nb = len(b)
    for va, ea in a:
        while ib < nb and b[ib][0].key < va.key:
            ib += 1
        if ib == nb or b[ib][0] is not va or b[ib][1] < ea:
            return False
        ib += 1
    return True


def mono_div(a: Monomial, b: Monomial) -> Monomial:
    """Quotient a / b; caller guarantees divisibility."""
    quot = dict(a)
    for v, e in b:
        r = quot[v] - e
        if r:
            quot[v] = r
        else:
            del quot[v]
    return tuple(sorted(quot.items(), key=lambda p: p[0].key))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    acc = dict(a)
    for v, e in b:
        if acc.get(v, 0) < e:
            acc[v] = e
    return tuple(sorted(acc.items(), key=lambda p: p[0].key))


def mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


def mono_weight(m: Monomial) -> int:
    return sum(v.weight * e for v, e in m)


class Polynomial:
    """A sparse polynomial: map from monomials to nonzero Fractions."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Mapping[Monomial, Coeff]] = None, *, _raw=None):
        if _raw is not None:
            self.terms = _raw
            return
        self.terms: Dict[Monomial, Fraction] = {}
        if terms:
            for m, c in terms.items():
                c = Fraction(c)
                if c:
                    self.terms[m] = c

    # -- construction helpers ------------------------------------------------

    @staticmethod
    def zero() -> "Polynomial":
        return Polynomial(_raw={})

    @staticmethod
    def constant(c: Coeff) -> "Polynomial":
        c = Fraction(c)
        return Polynomial(_raw={ONE_MONOMIAL: c} if c else {})

    @staticmethod
    def variable(v: Variable) -> "Polynomial":
        return Polynomial(_raw={((v, 1),): Fraction(1)})

    def copy_terms(self) -> Dict[Monomial, Fraction]:
        return dict(self.terms)

    # -- queries -------------------------------------------------------------

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self) -> int:
        return len(self.terms)

    def variables(self) -> set:
        seen = set()
        for m in self.terms:
            for v, _ in m:
                seen.add(v)
        return seen

    def total_degree(self) -> int:
        if not self.terms:
            return 0
        return max(mono_degree(m) for m in self.terms)

    def weighted_degree(self) -> Optional[int]:
        """The common weight of all terms, or None when mixed.

        Weights are carried by the variables themselves (jet f_i^(lam) and
        phi^(lam) weigh lam; tags weigh their declared weight).  Raises on
        the zero polynomial, which has no degree.
        """
        if not self.terms:
            raise ValueError("zero polynomial has no weighted degree")
        it = iter(self.terms)
        w = mono_weight(next(it))
        for m in it:
            if mono_weight(m) != w:
                return None
        return w

    def coefficient(self, m: Monomial) -> Fraction:
        return self.terms.get(m, Fraction(0))

    def constant_term(self) -> Fraction:
        return self.terms.get(ONE_MONOMIAL, Fraction(0))

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other: Union["Polynomial", Coeff]) -> "Polynomial":
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(other)
        if not self.terms:
            return other
        if not other.terms:
            return self
        acc = dict(self.terms)
        for m, c in other.terms.items():
            s = acc.get(m)
            if s is None:
                acc[m] = c
            else:
                s = s + c
                if s:
                    acc[m] = s
                else:
                    del acc[m]
        return Polynomial(_raw=acc)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial(_raw={m: -c for m, c in self.terms.items()})

    def __sub__(self, other: Union["Polynomial", Coeff]) -> "Polynomial":
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(other)
        return self + (-other)

    def __rsub__(self, other: Coeff) -> "Polynomial":
        return Polynomial.constant(other) - self

    def __mul__(self, other: Union["Polynomial", Coeff]) -> "Polynomial":
        if not isinstance(other, Polynomial):
            c = Fraction(other)
            if not c:
                return Polynomial.zero()
            return Polynomial(_raw={m: k * c for m, k in self.terms.items()})
        if not self.terms or not other.terms:
            return Polynomial.zero()
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        acc: Dict[Monomial, Fraction] = {}
        for mb, cb in b.items():
            if not mb:
                for ma, ca in a.items():
                    s = acc.get(ma)
                    p = ca * cb
                    if s is None:
                        acc[ma] = p
                    else:
                        s = s + p
                        if s:
                            acc[ma] = s
                        else:
                            del acc[ma]
                continue
            for ma, ca in a.items():
                m = mono_mul(ma, mb)
                s = acc.get(m)
                p = ca * cb
                if s is None:
                    acc[m] = p
                else:
                    s = s + p
                    if s:
                        acc[m] = s
                    else:
                        del acc[m]
        return Polynomial(_raw=acc)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Polynomial":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = Polynomial.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polynomial):
            if other == 0:
                return not self.terms
            return self.terms == {ONE_MONOMIAL: Fraction(other)}
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    # -- substitution and division -------------------------------------------

    def substitute(self, sigma: Mapping[Variable, "Polynomial"]) -> "Polynomial":
        """Image under variable -> polynomial, identity off the map's support."""
        if not sigma:
            return self
        pow_cache: Dict[Tuple[Variable, int], Polynomial] = {}

        def image_power(v: Variable, e: int) -> Polynomial:
            got = pow_cache.get((v, e))
            if got is None:
                got = sigma[v] ** e
                pow_cache[(v, e)] = got
            return got

        acc = Polynomial.zero()
        for m, c in self.terms.items():
            kept = []
            factors = []
            for v, e in m:
                if v in sigma:
                    factors.append(image_power(v, e))
                else:
                    kept.append((v, e))
            term = Polynomial(_raw={tuple(kept): c})
            for f in factors:
                term = term * f
                if not term:
                    break
            acc = acc + term
        return acc

    def divide_exact(self, q: "Polynomial") -> "Polynomial":
        """Return r with self == q * r, raising NotDivisible otherwise."""
        if not q.terms:
            raise ZeroDivisionError("division by the zero polynomial")
        if not self.terms:
            return Polynomial.zero()
        order = grevlex
        lt_q = max(q.terms, key=order.sort_key)
        lc_q = q.terms[lt_q]
        rem = dict(self.terms)
        quot: Dict[Monomial, Fraction] = {}
        while rem:
            lt_r = max(rem, key=order.sort_key)
            if not mono_divides(lt_q, lt_r):
                raise NotDivisible(f"no exact quotient (stuck at {format_monomial(lt_r)})")
            m = mono_div(lt_r, lt_q)
            c = rem[lt_r] / lc_q
            quot[m] = c
            for mq, cq in q.terms.items():
                key = mono_mul(m, mq)
                s = rem.get(key, Fraction(0)) - c * cq
                if s:
                    rem[key] = s
                else:
                    rem.pop(key, None)
        return Polynomial(_raw=quot)

    def divides(self, other: "Polynomial") -> bool:
        try:
            other.divide_exact(self)
            return True
        except NotDivisible:
            return False

    # -- presentation ----------------------------------------------------------

    def sorted_terms(self, order: "MonomialOrder" = None) -> Iterator[Tuple[Monomial, Fraction]]:
        order = order or grevlex
        for m in sorted(self.terms, key=order.sort_key, reverse=True):
            yield m, self.terms[m]

    def __str__(self) -> str:
        return format_polynomial(self)

    def __repr__(self) -> str:
        s = format_polynomial(self)
        if len(s) > 120:
            s = s[:117] + "..."
        return f"Polynomial({s})"


ZERO = Polynomial.zero()
ONE = Polynomial.constant(1)


# ---------------------------------------------------------------------------
# monomial orders
# ---------------------------------------------------------------------------


class MonomialOrder:
    """A total order on monomials compatible with multiplication.

    Orders are exposed via `sort_key`: bigger key = bigger monomial.
    """

    name = "order"

    def sort_key(self, m: Monomial):
        raise NotImplementedError

    def leading_monomial(self, p: Polynomial) -> Monomial:
        return max(p.terms, key=self.sort_key)

    def __repr__(self) -> str:
        return f"<{self.name}>"


def _exponent_vector(m: Monomial, vars_index: Mapping[Variable, int], n: int) -> list:
    row = [0] * n
    for v, e in m:
        row[vars_index[v]] = e
    return row


class Lex(MonomialOrder):
    """Lexicographic order on the seniority-sorted variable tuple."""

    name = "lex"

    def sort_key(self, m: Monomial):
        # seniority keys ascend, so negate positionally: compare variable by
        # variable; a more senior variable with a positive exponent wins.
        return tuple((_NegKey(v.key), e) for v, e in m)


class _NegKey:
    """Wrapper inverting comparison of a variable key (senior = large)."""

    __slots__ = ("key",)

    def __init__(self, key):
        self.key = key

    def __lt__(self, other):
        return other.key < self.key

    def __gt__(self, other):
        return other.key > self.key

    def __eq__(self, other):
        return self.key == other.key

    def __le__(self, other):
        return not self < other  # pragma: no cover

    def __hash__(self):
        return hash(self.key)


class DegRevLex(MonomialOrder):
    """Total degree first, ties broken reverse-lexicographically."""

    name = "degrevlex"

    def sort_key(self, m: Monomial):
        # revlex tie-break: smaller exponent on the least senior variable
        # wins; encode by scanning variables from least senior, negated.
        return (mono_degree(m), tuple((_NegKey(v.key), -e) for v, e in reversed(m)))


class WeightedDeg(MonomialOrder):
    """Weighted degree first (weights carried by variables), grevlex ties."""

    name = "weighted"

    def sort_key(self, m: Monomial):
        return (mono_weight(m), DegRevLex.sort_key(self, m))


class Block(MonomialOrder):
    """Elimination order: front variables dominate, inner orders break ties."""

    name = "block"

    def __init__(self, front: Iterable[Variable], inner_front: MonomialOrder = None,
                 inner_back: MonomialOrder = None):
        self.front = set(front)
        self.inner_front = inner_front or DegRevLex()
        self.inner_back = inner_back or DegRevLex()
        self.name = f"block({self.inner_front.name}|{self.inner_back.name})"

    def split(self, m: Monomial) -> Tuple[Monomial, Monomial]:
        f = tuple(p for p in m if p[0] in self.front)
        b = tuple(p for p in m if p[0] not in self.front)
        return f, b

    def sort_key(self, m: Monomial):
        f, b = self.split(m)
        return (self.inner_front.sort_key(f), self.inner_back.sort_key(b))


lex = Lex()
grevlex = DegRevLex()
weighted = WeightedDeg()


# ---------------------------------------------------------------------------
# ring context
# ---------------------------------------------------------------------------


class PolyRing:
    """A fixed, ordered variable universe with a monomial order.

    Only the Groebner layer genuinely needs a ring; plain arithmetic treats
    polynomials as living in one big implicit ring.  `check` raises
    RingMismatch for polynomials mentioning foreign variables.
    """

    def __init__(self, variables: Sequence[Variable], order: MonomialOrder = None):
        self.variables = tuple(sorted(set(variables), key=lambda v: v.key))
        self.var_set = set(self.variables)
        self.order = order or grevlex

    def check(self, p: Polynomial) -> Polynomial:
        extra = p.variables() - self.var_set
        if extra:
            names = ", ".join(sorted(str(v) for v in extra))
            raise RingMismatch(f"polynomial uses variables outside the ring: {names}")
        return p

    def __contains__(self, p: Polynomial) -> bool:
        return not (p.variables() - self.var_set)

    def __repr__(self) -> str:
        return f"PolyRing({len(self.variables)} vars, {self.order.name})"


# ---------------------------------------------------------------------------
# canonical text form and JSON serialization
# ---------------------------------------------------------------------------


def format_monomial(m: Monomial) -> str:
    if not m:
        return "1"
    parts = []
    for v, e in m:
        parts.append(v.name if e == 1 else f"{v.name}^{e}")
    return " * ".join(parts)


def format_polynomial(p: Polynomial, order: MonomialOrder = None) -> str:
    if not p.terms:
        return "0"
    chunks = []
    for m, c in p.sorted_terms(order):
        mono = format_monomial(m)
        if mono == "1":
            body = str(abs(c))
        elif abs(c) == 1:
            body = mono
        else:
            body = f"{abs(c)} * {mono}"
        chunks.append(("-" if c < 0 else "+", body))
    sign0, body0 = chunks[0]
    out = ("-" if sign0 == "-" else "") + body0
    for sign, body in chunks[1:]:
        out += f" {sign} {body}"
    return out


def parse_variable(name: str) -> Variable:
    """Inverse of Variable.name for jet/phi/uni variables, t:... for tags."""
    if name.startswith("f["):
        close = name.index("]")
        i = int(name[2:close])
        lam = len(name) - close - 1
        if name[close + 1:] != "'" * lam:
            raise ValueError(f"bad jet variable: {name!r}")
        return jet(i, lam)
    if name.startswith("phi"):
        lam = len(name) - 3
        if name[3:] != "'" * lam or lam < 1:
            raise ValueError(f"bad phi variable: {name!r}")
        return phi(lam)
    if name.startswith("u["):
        inner = name[1:]
        r, c = inner.replace("[", " ").replace("]", " ").split()
        return uni(int(r), int(c))
    if name.startswith("t:"):
        return tag(name[2:])
    raise ValueError(f"unrecognized variable: {name!r}")


def parse_polynomial(text: str, tags: Optional[Mapping[str, Variable]] = None) -> Polynomial:
    """Parse the canonical text form produced by format_polynomial.

    Tag weights and ordering indices are context, not syntax: pass `tags`
    mapping bare tag names to their Variables to round-trip them bit-exactly.
    """
    text = text.strip()
    if text in ("0", ""):
        return Polynomial.zero()
    body = text.replace(" - ", " + -")
    terms: Dict[Monomial, Fraction] = {}
    for chunk in body.split(" + "):
        chunk = chunk.strip()
        neg = chunk.startswith("-")
        if neg:
            chunk = chunk[1:].strip()
        coeff = Fraction(1)
        factors: Dict[Variable, int] = {}
        for fac in chunk.split("*"):
            fac = fac.strip()
            if not fac:
                continue
            if fac[0].isdigit():
                coeff *= Fraction(fac)
                continue
            if "^" in fac:
                vname, _, e = fac.partition("^")
                exp = int(e)
            else:
                vname, exp = fac, 1
            vname = vname.strip()
            if tags and vname.startswith("t:") and vname[2:] in tags:
                v = tags[vname[2:]]
            else:
                v = parse_variable(vname)
            factors[v] = factors.get(v, 0) + exp
        mono = tuple(sorted(factors.items(), key=lambda p: p[0].key))
        c = -coeff if neg else coeff
        prev = terms.get(mono, Fraction(0)) + c
        if prev:
            terms[mono] = prev
        else:
            terms.pop(mono, None)
    return Polynomial(_raw=terms)


def poly_to_json(p: Polynomial) -> list:
    """Bit-exact JSON form: list of ({var: exp}, numerator, denominator)."""
    out = []
    for m, c in p.sorted_terms():
        out.append([{v.name: e for v, e in m}, str(c.numerator), str(c.denominator)])
    return out


def poly_from_json(data: Iterable, tags: Optional[Mapping[str, Variable]] = None) -> Polynomial:
    terms: Dict[Monomial, Fraction] = {}
    for expmap, num, den in data:
        mono = []
        for name, e in expmap.items():
            if tags and name.startswith("t:") and name[2:] in tags:
                v = tags[name[2:]]
            else:
                v = parse_variable(name)
            mono.append((v, int(e)))
        mono.sort(key=lambda pair: pair[0].key)
        terms[tuple(mono)] = Fraction(int(num), int(den))
    return Polynomial(_raw=terms)


def content(p: Polynomial) -> Fraction:
    """The positive rational content (gcd of coefficients), 0 for zero."""
    if not p.terms:
        return Fraction(0)
    from math import gcd

    num = 0
    den = 1
    for c in p.terms.values():
        num = gcd(num, abs(c.numerator))
        den = den * c.denominator // gcd(den, c.denominator)
    return Fraction(num, den)


def primitive_part(p: Polynomial) -> Polynomial:
    """p divided by its content; sign fixed so the grevlex-leading coeff > 0."""
    if not p.terms:
        return p
    c = content(p)
    q = p * (1 / c)
    if q.terms[max(q.terms, key=grevlex.sort_key)] < 0:
        q = -q
    return q


def proportional(p: Polynomial, q: Polynomial) -> bool:
    """True when p = r * q for a nonzero rational r (or both are zero)."""
    if not p.terms or not q.terms:
        return not p.terms and not q.terms
    if len(p.terms) != len(q.terms):
        return False
    m = next(iter(p.terms))
    cq = q.terms.get(m)
    if not cq:
        return False
    r = p.terms[m] / cq
    return all(q.terms.get(mm) is not None and p.terms[mm] == r * q.terms[mm] for mm in p.terms)
