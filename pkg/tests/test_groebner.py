"""Groebner engine: bases, normal forms, relation ideals, membership."""

from fractions import Fraction

import pytest

from jetcalc.groebner import (
    Budget,
    buchberger,
    jacobian_rank_certificate,
    normal_form,
    relations_ideal,
    subalgebra_membership,
)
from jetcalc.jets import (
    JetContext,
    bracket,
    initial_invariants,
    poly_jet,
    restrict_f1,
    wronskian,
)
from jetcalc.polyring import (
    Block,
    DegRevLex,
    Lex,
    Polynomial,
    primitive_part,
    proportional,
    tag,
)


def T(name, weight=0, index=0):
    return Polynomial.variable(tag(name, weight, index))


def test_single_generator():
    x = T("x")
    gb = buchberger([x], Lex())
    assert [str(g) for g in gb.generators] == ["t:x"]


def test_twisted_cubic_elimination():
    x, y, z = (Polynomial.variable(tag(n, 0, k)) for k, n in enumerate("xyz"))
    gb = buchberger([x * x - y, x ** 3 - z], Lex())
    target = y ** 3 - z * z
    assert any(proportional(g, target) for g in gb.generators)
    # soundness by parametric substitution x=t, y=t^2, z=t^3
    t = Polynomial.variable(tag("t", 0, 9))
    sub = {tag("x", 0, 0): t, tag("y", 0, 1): t * t, tag("z", 0, 2): t ** 3}
    for g in gb.generators:
        assert g.substitute(sub).is_zero()


def test_normal_form_properties():
    x, y, z = (Polynomial.variable(tag(n, 0, k)) for k, n in enumerate("xyz"))
    gb = buchberger([x * x - y, x ** 3 - z], Lex())
    for g in gb.generators:
        assert normal_form(g, gb).is_zero()
    p = x ** 4 + y * z
    nf = normal_form(p, gb)
    assert normal_form(nf, gb) == nf
    q = x * y - z
    assert normal_form(p + q * gb.generators[0], gb) == normal_form(p, gb)


def test_budget_exceeded_is_flagged():
    x, y, z = (Polynomial.variable(tag(n, 0, k)) for k, n in enumerate("xyz"))
    gens = [x ** 4 - y * z ** 2 + x * y * z, y ** 4 - x * z ** 2 + y,
            z ** 4 - x ** 2 * y + z, x * y ** 3 - z ** 3 + x]
    with_budget = buchberger(gens, Lex(), Budget(10))
    assert not with_budget.complete
    assert with_budget.steps_used <= 10 + max(len(g) for g in gens)


def _loop1_named():
    inits = {i.name: i for i in initial_invariants(JetContext(2, 4))}
    return [("F2", 1, restrict_f1(inits["f2'"].poly)),
            ("L3", 3, restrict_f1(inits["Lam[1,2]^3"].poly)),
            ("L5", 5, restrict_f1(inits["Lam[1,2;1]^5"].poly)),
            ("L7", 7, restrict_f1(inits["Lam[1,2;1,1]^7"].poly))]


@pytest.mark.parametrize("engine", ["elimination", "graded"])
def test_relations_ideal_first_loop(engine):
    rid = relations_ideal(_loop1_named(), engine=engine)
    rels = [primitive_part(r) for r in rid.relations]
    assert len(rels) == 3
    tags = {t.name[2:]: Polynomial.variable(t) for t in rid.tags}
    expected = [
        3 * tags["L3"] ** 2 - tags["F2"] * tags["L5"],
        5 * tags["L3"] * tags["L5"] - tags["F2"] * tags["L7"],
        5 * tags["L5"] ** 2 - 3 * tags["L3"] * tags["L7"],
    ]
    for e in expected:
        assert any(proportional(r, e) for r in rels)
    assert rid.verify_vanishing()
    for r in rels:
        assert r.weighted_degree() is not None


def test_relations_ideal_kappa5_first_loop():
    # the three degrevlex relations of the order-5 first loop
    f1 = poly_jet(1, 1)
    l3 = wronskian([1, 2])
    l5 = bracket(l3, f1, weights=(3, 1))
    l7 = bracket(l5, f1, weights=(5, 1))
    l9 = bracket(l7, f1, weights=(7, 1))
    named = [("L3", 3, restrict_f1(l3)), ("L5", 5, restrict_f1(l5)),
             ("L7", 7, restrict_f1(l7)), ("L9", 9, restrict_f1(l9))]
    rid = relations_ideal(named)
    tags = {t.name[2:]: Polynomial.variable(t) for t in rid.tags}
    expected = [
        -7 * tags["L7"] ** 2 + 5 * tags["L5"] * tags["L9"],
        -7 * tags["L5"] * tags["L7"] + 3 * tags["L3"] * tags["L9"],
        -5 * tags["L5"] ** 2 + 3 * tags["L3"] * tags["L7"],
    ]
    assert len(rid.relations) == 3
    for e in expected:
        assert any(proportional(r, e) for r in rid.relations)


def test_relations_ideal_independent_family():
    # restrictions of {f2', Lam3, Lam5 via f2, Lam7 via f2 f2} are independent
    inits = {i.name: i for i in initial_invariants(JetContext(2, 4))}
    l3 = inits["Lam[1,2]^3"].poly
    l5b = bracket(l3, poly_jet(2, 1), weights=(3, 1))
    l7bb = bracket(l5b, poly_jet(2, 1), weights=(5, 1))
    named = [("F2", 1, restrict_f1(inits["f2'"].poly)),
             ("L3", 3, restrict_f1(l3)),
             ("L5b", 5, restrict_f1(l5b)),
             ("L7bb", 7, restrict_f1(l7bb))]
    rid = relations_ideal(named)
    assert rid.method == "jacobian-independence"
    assert not rid.relations and rid.complete


def test_jacobian_certificate_rejects_dependence():
    x = poly_jet(1, 1)
    assert not jacobian_rank_certificate([x, x * x])


def test_membership_examples():
    inits = {i.name: i for i in initial_invariants(JetContext(2, 4))}
    f1, f2 = inits["f1'"].poly, inits["f2'"].poly
    l3, l5, l7 = (inits[k].poly for k in
                  ("Lam[1,2]^3", "Lam[1,2;1]^5", "Lam[1,2;1,1]^7"))
    l5b = bracket(l3, f2, weights=(3, 1))
    gens = [("f1", f1), ("f2", f2), ("L3", l3), ("L5", l5), ("L7", l7)]
    assert not subalgebra_membership(l5b, gens)
    got = subalgebra_membership(l5, gens)
    assert got and str(got.expression) == "t:L5"
    # soundness: evaluating the tag expression reproduces the input
    mixed = 3 * l3 * l5 - 7 * f1 ** 2 * l3 * l3 + f2 ** 8
    rep = subalgebra_membership(mixed, gens)
    assert rep.member
    tags = {t: p for (n, p), t in zip(
        gens, [tag(n, p.weighted_degree(), k) for k, (n, p) in enumerate(gens)])}
    sub = {t: p for t, p in zip(
        [tag(n, p.weighted_degree(), k) for k, (n, p) in enumerate(gens)],
        [p for _, p in gens])}
    assert rep.expression.substitute(sub) == mixed


def test_membership_bracket_pair_in_e24():
    # [Lam^5_1, Lam^5_2] lies in the order-4 algebra, as Lam^3 * M^8
    from jetcalc.catalog import load_catalog

    data = load_catalog("E2k4")
    G = data.generator_map()
    br = bracket(G["L5a"], G["L5b"], weights=(5, 5))
    rep = subalgebra_membership(br, [(e.name, e.poly) for e in data.entries])
    assert rep.member
    # a rational multiple of Lam^3 M^8 (the source prints the product without
    # its bracket-normalization factor)
    vars_used = sorted(v.name for v in rep.expression.variables())
    assert vars_used == ["t:L3", "t:M8"]
    assert len(rep.expression) == 1


def test_auxiliary_basis_normal_form_value():
    # the printed auxiliary normal form: NF(L3|0^2 * F16|0) = 35/9 l50^2 n120
    from jetcalc.catalog import load_catalog

    data = load_catalog("UE2k5")
    G = data.generator_map()
    L3_0, L5_0, M8_0, N12_0, F16_0 = (restrict_f1(G[k])
                                      for k in ("L3", "L5", "M8", "N12", "F16"))
    aux = [tag("l30", 3, 0), tag("l50", 5, 1), tag("m80", 8, 2), tag("n120", 12, 3)]
    gens = [Polynomial.variable(a) - g for a, g in
            zip(aux, (L3_0, L5_0, M8_0, N12_0))]
    front = set()
    for g in (L3_0, L5_0, M8_0, N12_0):
        front |= g.variables()
    gb = buchberger(gens, Block(front, DegRevLex(), DegRevLex()))
    assert gb.complete
    nf = normal_form(L3_0 * L3_0 * F16_0, gb)
    expect = Fraction(35, 9) * Polynomial.variable(aux[1]) ** 2 \
        * Polynomial.variable(aux[3])
    assert nf == expect
