"""Twisted direct sums, delta embeddings and charge decompositions."""

import random
from fractions import Fraction

import pytest

from orbifoldcert.modes import (
    OperatorExpr,
    Word,
    heisenberg_signature,
    parse_operator_expr,
    permutation_automorphism,
    theta_automorphism,
    weyl_cyclic_automorphism,
    weyl_signature,
    word_charge,
)
from orbifoldcert.modules import (
    BasisMonomial,
    ModuleVector,
    act_expr,
    build_module,
    filtration_basis,
    heisenberg_whittaker,
    parse_module_vector,
    vacuum_whittaker,
    weyl_whittaker,
)
from orbifoldcert.orbifold import (
    CyclicAction,
    DirectSumVector,
    act_on_sum,
    charge_decompose,
    delta_embed,
    delta_extract,
    module_automorphism_image,
    monomial_charge,
    verify_delta_lemma,
)
from orbifoldcert.scalars import Scalar

W = weyl_signature()
H2 = heisenberg_signature(2)


def _weyl_base():
    return build_module(W, weyl_whittaker(W, lam=(1,)))


def test_twisted_handles_cover_all_powers():
    act = CyclicAction(weyl_cyclic_automorphism(W, 3))
    handles = act.twisted_handles(_weyl_base())
    assert len(handles) == 3
    assert [h.twist[1] for h in handles] == [0, 1, 2]
    with pytest.raises(ValueError):
        act.twisted_handles(handles[1])


def test_delta_embed_components():
    base = _weyl_base()
    w = parse_module_vector("a(-1) + 2", W)
    act2 = CyclicAction(weyl_cyclic_automorphism(W, 2))
    plus = delta_embed(act2, base, w, 0)
    minus = delta_embed(act2, base, w, 1)
    assert plus.components == (w, w)
    assert minus.components == (w, -w)
    act3 = CyclicAction(weyl_cyclic_automorphism(W, 3))
    z = Scalar.zeta(3)
    v = delta_embed(act3, base, w, 1)
    assert v.components == (w, w * z, w * z**2)


def test_delta_extract_ratio_check():
    base = _weyl_base()
    act = CyclicAction(weyl_cyclic_automorphism(W, 2))
    w = parse_module_vector("a(-1)", W)
    assert delta_extract(act, delta_embed(act, base, w, 1), 1) == w
    assert delta_extract(act, delta_embed(act, base, w, 0), 1) is None
    zero = delta_embed(act, base, ModuleVector.zero(), 0)
    assert delta_extract(act, zero, 1) == ModuleVector.zero()


def test_direct_sum_decomposes_into_delta_images():
    # any tuple splits as sum_i delta_i(w_i) with w_i recovered by
    # averaging; this is the direct sum decomposition made exact
    base = _weyl_base()
    for p in (2, 3):
        act = CyclicAction(weyl_cyclic_automorphism(W, p))
        rng = random.Random(p)
        basis = filtration_basis(base, 1)
        comps = tuple(
            ModuleVector({rng.choice(basis): Scalar.from_rational(rng.randint(1, 7))})
            for _ in range(p)
        )
        target = DirectSumVector(act.twisted_handles(base), comps)
        total = None
        for i in range(p):
            w_i = ModuleVector.zero()
            for r in range(p):
                w_i = w_i + comps[r] * (Scalar.zeta(p, (-i * r) % p) / p)
            emb = delta_embed(act, base, w_i, i)
            total = emb if total is None else total + emb
        assert total == target


def test_act_on_sum_composes():
    base = _weyl_base()
    act = CyclicAction(weyl_cyclic_automorphism(W, 2))
    v = delta_embed(act, base, parse_module_vector("a(-1) a*(0)", W), 1)
    e1 = parse_operator_expr("a(0) a(1)", W)
    e2 = parse_operator_expr("a*(0) + 2 * a(-1)", W)
    lhs = act_on_sum(e1, act_on_sum(e2, v))
    rhs = act_on_sum(e1 * e2, v)
    assert lhs == rhs


def test_odd_element_shifts_delta_component():
    # frozen instance of the shifting lemma for the sign twist
    sig = heisenberg_signature(1)
    base = build_module(sig, heisenberg_whittaker(sig, [(1,)]))
    act = CyclicAction(theta_automorphism(sig))
    w = ModuleVector.cyclic()
    plus = delta_embed(act, base, w, 0)
    image = act_on_sum(parse_operator_expr("h1(-1)", sig), plus)
    hw = parse_module_vector("h1(-1)", sig)
    assert image.components == (hw, -hw)
    assert delta_extract(act, image, 1) == hw
    assert delta_extract(act, image, 0) is None


@pytest.mark.parametrize("p,i,j", [(2, 0, 1), (2, 1, 1), (3, 0, 1), (3, 1, 2)])
def test_delta_lemma_weyl_whittaker(p, i, j):
    base = _weyl_base()
    act = CyclicAction(weyl_cyclic_automorphism(W, p))
    report = verify_delta_lemma(act, base, i, j, samples=8, seed=5)
    assert report.passed and report.checked == 8


def test_delta_lemma_heisenberg_theta():
    sig = heisenberg_signature(1)
    base = build_module(sig, heisenberg_whittaker(sig, [(1, 2)]))
    act = CyclicAction(theta_automorphism(sig))
    report = verify_delta_lemma(act, base, 0, 1, samples=8, seed=6)
    assert report.passed


# -- charge decomposition ------------------------------------------------------


def test_charge_decompose_weyl_vacuum():
    vac = build_module(W, vacuum_whittaker(W))
    act = CyclicAction(weyl_cyclic_automorphism(W, 2))
    dec = charge_decompose(vac, act, 1)
    assert dec.diagonal and dec.p == 2

    def oracle_charge(mono):
        na = sum(1 for m in mono.modes if m.species.name == "a")
        nastar = len(mono.modes) - na
        return (na - nastar) % 2

    for j, monos in dec.monomial_components.items():
        for mono in monos:
            assert oracle_charge(mono) == j
    got0 = [str(m) for m in dec.monomial_components[0]]
    # a*(0)^2 has charge -2, i.e. charge zero
    assert got0 == ["1", "a(-1) a(-1)", "a(-1) a*(0)", "a*(0) a*(0)"]
    got1 = [str(m) for m in dec.monomial_components[1]]
    assert got1 == ["a(-1)", "a*(0)"]


def test_charge_decompose_theta_counts_length_parity():
    sig = heisenberg_signature(1)
    vac = build_module(sig, vacuum_whittaker(sig))
    act = CyclicAction(theta_automorphism(sig))
    dec = charge_decompose(vac, act, 2)
    for j, monos in dec.monomial_components.items():
        for mono in monos:
            assert len(mono.modes) % 2 == j


def test_charge_decompose_permutation_projects():
    vac = build_module(H2, vacuum_whittaker(H2))
    sigma = permutation_automorphism(H2, [1, 0])
    act = CyclicAction(sigma)
    dec = charge_decompose(vac, act, 1)
    assert not dec.diagonal
    # each monomial is recovered as the sum of its projections
    for mono in filtration_basis(vac, 1):
        v = ModuleVector({mono: Scalar.one()})
        total = ModuleVector.zero()
        for k in range(2):
            for j in range(2):
                total = total + module_automorphism_image(sigma, k, v) * (
                    Scalar.zeta(2, (-j * k) % 2) / 2
                )
        assert total == v
    sym = dec.projected_components[0]
    antisym = dec.projected_components[1]
    assert any(not u.is_zero() for u in sym)
    expected = parse_module_vector("1/2 * h1(-1) - 1/2 * h2(-1)", H2)
    assert any(u == expected or u == -expected for u in antisym)


def test_module_automorphism_power_is_identity():
    vac = build_module(W, vacuum_whittaker(W))
    for g in (weyl_cyclic_automorphism(W, 3), theta_automorphism(W)):
        for mono in filtration_basis(vac, Fraction(3, 2)):
            v = ModuleVector({mono: Scalar.one()})
            img = v
            for _ in range(g.order):
                img = module_automorphism_image(g, 1, img)
            assert img == v
    sigma = permutation_automorphism(H2, [1, 0])
    hvac = build_module(H2, vacuum_whittaker(H2))
    for mono in filtration_basis(hvac, 2):
        v = ModuleVector({mono: Scalar.one()})
        assert module_automorphism_image(sigma, 2, v) == v


def test_charge_shifts_under_diagonal_action():
    g = weyl_cyclic_automorphism(W, 3)
    vac = build_module(W, vacuum_whittaker(W))
    act = CyclicAction(g)
    rng = random.Random(21)
    basis = filtration_basis(vac, Fraction(3, 2))
    modes = W.modes_in_range(2)
    for _ in range(40):
        word = Word(tuple(rng.choice(modes) for _ in range(rng.randint(1, 2))))
        c = word_charge(word, g)
        mono = rng.choice(basis)
        j = monomial_charge(mono, g)
        out = act_expr(
            OperatorExpr.from_word(word), ModuleVector({mono: Scalar.one()}), vac
        )
        for mono2 in out.terms:
            assert monomial_charge(mono2, g) == (j + c) % 3
