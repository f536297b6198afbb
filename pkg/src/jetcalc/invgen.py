"""The invariant-generation loop: relation ideals of restricted invariants,
remainder extraction behind powers of f_1', membership tests, termination,
and normal-form monomial enumeration over the quadrant complement.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .groebner import (
    Budget,
    DegRevLex,
    MembershipResult,
    MonomialOrder,
    RelationIdeal,
    make_tags,
    relations_ideal,
    subalgebra_membership,
)
from .jets import (
    Invariant,
    JetContext,
    check_reparam_invariance,
    check_unipotent_invariance,
    divide_f1_power,
    initial_bi_invariants,
    initial_invariants,
    maximal_f1_power,
    restrict_f1,
)
from .polyring import (
    Polynomial,
    Variable,
    is_tag,
    mono_weight,
    primitive_part,
    proportional,
)


@dataclass
class Syzygy:
    """A filled relation 0 == S(gens) + f_1'^nu * R(gens).

    S is a tag polynomial vanishing on restriction to {f_1' = 0}; nu is the
    maximal factoring power (None when S(gens) == 0 identically, with R = 0
    by convention); R is a tag expression over the current generators which
    may involve the f_1' tag itself.
    """

    id: str
    relation: Polynomial
    weight: int
    nu: Optional[int]
    remainder: Polynomial
    leading_term: Optional[tuple] = None

    @property
    def identically_zero(self) -> bool:
        return self.nu is None


def homogeneous_split(s: Polynomial) -> List[Polynomial]:
    """Decompose a tag polynomial into weighted-homogeneous components."""
    buckets: Dict[int, dict] = {}
    for m, c in s.terms.items():
        buckets.setdefault(mono_weight(m), {})[m] = c
    return [Polynomial(_raw=buckets[w]) for w in sorted(buckets)]


def extract_remainder(s: Polynomial, generators: Dict[Variable, Polynomial],
                      f1_poly: Polynomial) -> Tuple[Optional[int], Polynomial]:
    """Maximal nu and jet-polynomial remainder R with S(gens) + f_1'^nu R == 0.

    Precondition: S(gens) restricted to f_1' = 0 vanishes.  Returns
    (None, 0) when S(gens) is identically zero.
    """
    value = s.substitute(generators)
    if value.is_zero():
        return None, Polynomial.zero()
    restricted = restrict_f1(value)
    if not restricted.is_zero():
        raise ValueError("relation does not vanish on the restriction f_1'=0")
    nu = maximal_f1_power(value)
    if nu < 1:
        raise ValueError("vanishing on restriction but no f_1' factor; not a relation")
    remainder = -divide_f1_power(value, nu)
    return nu, remainder


@dataclass
class GenerationState:
    ctx: JetContext
    mode: str  # "full" | "bi"
    generators: List[Invariant] = field(default_factory=list)
    syzygies: List[Syzygy] = field(default_factory=list)
    loop_count: int = 0
    terminated: bool = False
    budget_exceeded: bool = False
    transcript: List[str] = field(default_factory=list)
    relation_method: str = ""

    def generator_polys(self) -> List[Polynomial]:
        return [g.poly for g in self.generators]

    def tag_weights(self) -> List[Tuple[str, int]]:
        return [(g.name, g.weight) for g in self.generators]

    def to_json(self) -> dict:
        from .polyring import format_polynomial, poly_to_json

        return {
            "context": {"n": self.ctx.n, "kappa": self.ctx.kappa},
            "mode": self.mode,
            "terminated": self.terminated,
            "budget_exceeded": self.budget_exceeded,
            "loop_count": self.loop_count,
            "relation_method": self.relation_method,
            "generators": [
                {
                    "name": g.name,
                    "weight": g.weight,
                    "provenance": g.provenance,
                    "polynomial": format_polynomial(g.poly),
                }
                for g in self.generators
            ],
            "syzygies": [
                {
                    "id": s.id,
                    "weight": s.weight,
                    "relation": format_polynomial(s.relation),
                    "nu": s.nu,
                    "remainder": format_polynomial(s.remainder),
                }
                for s in self.syzygies
            ],
            "transcript": self.transcript,
        }


_DISCOVERY_LETTERS = "MNKHFEQRUVXY"


def _next_name(weight: int, taken: set) -> str:
    for letter in _DISCOVERY_LETTERS:
        cand = f"{letter}^{weight}"
        if cand not in taken:
            return cand
    k = 1
    while f"R{weight}_{k}" in taken:
        k += 1
    return f"R{weight}_{k}"


def _membership_with_f1(p: Polynomial, gens: Sequence[Invariant],
                        f1_name: str = "f1'") -> MembershipResult:
    """Membership in C[f_1', generators]; f_1' always counts as a generator."""
    named = [(g.name, g.poly) for g in gens]
    return subalgebra_membership(p, named)


def run_generation(ctx: JetContext, mode: str = "full",
                   tag_order: Optional[MonomialOrder] = None,
                   budget: Optional[Budget] = None,
                   engine: str = "auto",
                   max_loops: int = 12,
                   horizon: Optional[int] = None,
                   normalizer=None) -> GenerationState:
    """Loop: relation ideal of restrictions, remainder extraction, membership.

    Starts from the initial invariants (full mode) or the Wronskian-minor
    bi-invariants (bi mode); terminates when a loop adds no generator and
    every remainder lies in the algebra of the current ones.  Tags enter the
    relation ideal sorted by weight (paper-style listing), which keeps the
    reduced bases small; `normalizer` may rename/rescale a discovered
    invariant (e.g. to its catalogued form).
    """
    if mode not in ("full", "bi"):
        raise ValueError(f"unknown mode: {mode}")
    budget = budget or Budget()
    tag_order = tag_order or DegRevLex()
    state = GenerationState(ctx=ctx, mode=mode)
    base = initial_invariants(ctx) if mode == "full" else initial_bi_invariants(ctx)
    state.generators = list(base)
    state.transcript.append(
        f"start: {len(base)} initial {'invariants' if mode == 'full' else 'bi-invariants'}")

    while state.loop_count < max_loops:
        state.loop_count += 1
        gens = state.generators
        # f_1' restricts to zero, so it never enters the relation ideal
        active = [g for g in gens if not g.restriction.is_zero()]
        active.sort(key=lambda g: g.weight)
        named = [(g.name, g.weight, g.restriction) for g in active]
        try:
            rid = relations_ideal(named, tag_order=tag_order, budget=budget,
                                  engine=engine, horizon=horizon)
        except Exception as exc:  # budget problems inside engines
            state.transcript.append(f"loop {state.loop_count}: relation ideal failed: {exc}")
            state.budget_exceeded = True
            return state
        state.relation_method = rid.method
        state.transcript.append(
            f"loop {state.loop_count}: {len(rid.relations)} relations ({rid.method})")
        if not rid.complete and rid.method != "graded-kernel":
            state.budget_exceeded = True

        defining_unrestricted = {t: g.poly for t, g in zip(rid.tags, active)}
        f1_poly = next(g.poly for g in gens if g.name == "f1'")

        new_invariants: List[Invariant] = []
        syzygies: List[Syzygy] = []
        taken = {g.name for g in gens}
        all_expressible = True
        ordered = sorted(rid.relations,
                         key=lambda r: (r.weighted_degree(),
                                        tag_order.sort_key(tag_order.leading_monomial(r))))
        for k, rel in enumerate(ordered, start=1):
            rel = primitive_part(rel)
            w = rel.weighted_degree()
            nu, rem = extract_remainder(rel, defining_unrestricted, f1_poly)
            if nu is None:
                syzygies.append(Syzygy(f"L{state.loop_count}.{k}", rel, w, None,
                                       Polynomial.zero()))
                continue
            pool = gens + new_invariants
            membership = _membership_with_f1(rem, pool)
            if membership.member:
                syzygies.append(Syzygy(f"L{state.loop_count}.{k}", rel, w, nu,
                                       membership.expression))
                continue
            all_expressible = False
            # strip any residual f_1' power so the new generator is primitive
            extra = maximal_f1_power(rem)
            core = divide_f1_power(rem, extra) if extra else rem
            known = next((g for g in pool if proportional(core, g.poly)), None)
            if known is None:
                cw = core.weighted_degree()
                renamed = normalizer(core) if normalizer else None
                if renamed is not None:
                    name, core = renamed
                else:
                    name = _next_name(cw, taken)
                taken.add(name)
                inv = Invariant(name, cw, core, provenance=f"remainder:L{state.loop_count}.{k}")
                new_invariants.append(inv)
                state.transcript.append(
                    f"loop {state.loop_count}: new invariant {name} (weight {cw})")
            syzygies.append(Syzygy(f"L{state.loop_count}.{k}", rel, w, nu, Polynomial.zero()))

        if not new_invariants and all_expressible:
            state.syzygies = syzygies
            state.terminated = rid.complete
            if not rid.complete:
                state.transcript.append(
                    "loop closed but relation ideal not certified complete")
            state.transcript.append(
                f"terminated after {state.loop_count} loops: "
                f"{len(gens)} generators, {len(syzygies)} syzygies")
            # attach remainder expressions and leading terms
            _fill_remainders(state, rid, tag_order)
            return state
        state.generators = gens + new_invariants

    state.transcript.append(f"loop limit {max_loops} reached without termination")
    return state


def _fill_remainders(state: GenerationState, rid: RelationIdeal,
                     tag_order: MonomialOrder):
    """Record leading terms and verify each syzygy's invariance data."""
    for s in state.syzygies:
        if s.relation.is_zero():
            continue
        lead = tag_order.leading_monomial(s.relation)
        s.leading_term = lead
    # re-verify invariance of every generator (cheap safety net)
    for g in state.generators:
        rep = check_reparam_invariance(g.poly)
        if not rep or rep.weight != g.weight:
            raise AssertionError(f"generator {g.name} failed invariance re-check")
        if state.mode == "bi" and not check_unipotent_invariance(g.poly, state.ctx.n):
            raise AssertionError(f"generator {g.name} failed unipotent re-check")


# ---------------------------------------------------------------------------
# normal-form monomials over the quadrant complement
# ---------------------------------------------------------------------------


def quadrant_vertices(syzygies: Sequence[Syzygy],
                      tags: Sequence[Variable]) -> List[Tuple[int, ...]]:
    """Exponent vertices of the excluded quadrants (syzygy leading terms)."""
    index = {t: k for k, t in enumerate(tags)}
    out = []
    for s in syzygies:
        if s.leading_term is None:
            continue
        row = [0] * len(tags)
        for v, e in s.leading_term:
            row[index[v]] = e
        out.append(tuple(row))
    return out


def normal_form_monomials(weights: Sequence[int],
                          vertices: Sequence[Tuple[int, ...]],
                          m: int) -> List[Tuple[int, ...]]:
    """All exponent tuples of weight m avoiding every excluded quadrant."""
    out = []

    def dominated(a: Tuple[int, ...]) -> bool:
        return any(all(x >= v for x, v in zip(a, vert)) for vert in vertices)

    def rec(i: int, left: int, acc: List[int]):
        if i == len(weights):
            if left == 0 and not dominated(tuple(acc)):
                out.append(tuple(acc))
            return
        w = weights[i]
        for e in range(left // w + 1):
            acc.append(e)
            rec(i + 1, left - e * w, acc)
            acc.pop()

    rec(0, m, [])
    return out


def state_normal_form_monomials(state: GenerationState, m: int,
                                tag_order: Optional[MonomialOrder] = None) -> List[dict]:
    """Admissible monomials of weight m for a terminated state.

    Each item maps generator names to exponents; generators absent from the
    relation ideal (f_1', and W^10 in dimension 4) are free and appear with
    their own exponents.
    """
    if not state.terminated:
        raise ValueError("normal forms need a terminated state")
    tag_order = tag_order or DegRevLex()
    gens = state.generators
    tags = make_tags([(g.name, g.weight) for g in gens])
    by_name = {g.name: t for g, t in zip(gens, tags)}
    # leading terms were recorded over the active tags; remap by name
    verts = []
    for s in state.syzygies:
        if s.leading_term is None:
            continue
        row = [0] * len(gens)
        for v, e in s.leading_term:
            name = v.name[2:]
            row[[g.name for g in gens].index(name)] = e
        verts.append(tuple(row))
    weights = [g.weight for g in gens]
    tuples = normal_form_monomials(weights, verts, m)
    names = [g.name for g in gens]
    return [dict((n, e) for n, e in zip(names, t) if e) for t in tuples]


# ---------------------------------------------------------------------------
# brute-force dimension oracle
# ---------------------------------------------------------------------------


def invariant_space_dimension(ctx: JetContext, m: int, bi: bool = False) -> int:
    """Dimension of the weight-m invariant space by exact linear algebra.

    Independent oracle: write down all jet monomials of weight m, apply the
    formal reparametrization action (and the unipotent action when `bi`),
    and compute the kernel dimension of the linear invariance constraints.
    """
    from .jets import faa_di_bruno, poly_jet
    from .polyring import jet as jet_var, uni as uni_var

    variables = [jet_var(i, lam) for i in range(1, ctx.n + 1)
                 for lam in range(1, ctx.kappa + 1)]
    monos = _weighted_monomials(variables, m)
    if not monos:
        return 0
    matrix = faa_di_bruno(ctx.kappa)
    reparam_sigma = {}
    for v in variables:
        img = Polynomial.zero()
        for mu in range(1, v.j + 1):
            entry = matrix[v.j][mu]
            if entry:
                img = img + entry * poly_jet(v.i, mu)
        reparam_sigma[v] = img
    uni_sigma = {}
    for v in variables:
        if v.i > 1:
            img = poly_jet(v.i, v.j)
            for j in range(1, v.i):
                img = img + Polynomial.variable(uni_var(v.i, j)) * poly_jet(j, v.j)
            uni_sigma[v] = img
    constraints: Dict = {}
    rows: List[Dict[int, Fraction]] = []

    def add_constraints(sigma):
        for j, mono in enumerate(monos):
            p = Polynomial(_raw={mono: Fraction(1)})
            img = p.substitute(sigma) - p
            for mm, c in img.terms.items():
                idx = constraints.setdefault(mm, len(constraints))
                while len(rows) <= idx:
                    rows.append({})
                rows[idx][j] = c

    add_constraints(reparam_sigma)
    if bi:
        add_constraints(uni_sigma)
    ncols = len(monos)
    # kernel dimension = ncols - rank
    mat = [[row.get(j, Fraction(0)) for j in range(ncols)] for row in rows]
    from .groebner import _rank

    return ncols - (_rank(mat) if mat else 0)


def _weighted_monomials(variables, m: int):
    out = []
    vs = list(variables)

    def rec(i: int, left: int, acc):
        if left == 0:
            out.append(tuple(acc))
            return
        if i == len(vs):
            return
        v = vs[i]
        rec(i + 1, left, acc)
        top = left // v.weight
        for e in range(1, top + 1):
            acc.append((v, e))
            rec(i + 1, left - e * v.weight, acc)
            acc.pop()

    rec(0, m, [])
    return [tuple(sorted(t, key=lambda pr: pr[0].key)) for t in out]


# ---------------------------------------------------------------------------
# syzygy catalog verification
# ---------------------------------------------------------------------------


@dataclass
class SyzygyCheck:
    syzygy_id: str
    ok: bool
    max_terms: int
    detail: str = ""


def verify_syzygy_catalog(catalog_id: str,
                          which: Optional[str] = None) -> List[SyzygyCheck]:
    """Expand every filled syzygy of a catalog and assert exact zero.

    Failures are report entries, never exceptions; `which` restricts to one
    named syzygy set (e.g. a single loop).
    """
    from .catalog import load_catalog

    data = load_catalog(catalog_id)
    gens = data.generator_map()
    f1_name = "f1" if "f1" in gens else "f1'"
    return verify_syzygies(data.syzygies(which), gens, f1_name)


def verify_syzygies(syzygies: Sequence[Syzygy], generators: Dict[str, Polynomial],
                    f1_name: str = "f1'") -> List[SyzygyCheck]:
    """Expand S(gens) + f_1'^nu R(gens) in jet variables and assert zero."""
    results = []
    f1 = generators[f1_name]
    for s in syzygies:
        sub = {}
        for v in (s.relation.variables() | s.remainder.variables()):
            if is_tag(v):
                sub[v] = generators[v.name[2:]]
        value = s.relation.substitute(sub)
        peak = len(value)
        if s.nu is not None:
            rem = s.remainder.substitute(sub)
            peak = max(peak, len(rem))
            value = value + (f1 ** s.nu) * rem
        ok = value.is_zero()
        results.append(SyzygyCheck(s.id, ok, peak,
                                   "" if ok else f"residual has {len(value)} terms"))
    return results
