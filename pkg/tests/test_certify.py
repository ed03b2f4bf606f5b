import json
import random
from fractions import Fraction

import pytest

from orbifoldcert.certify import (
    CyclicityCertificate,
    Scale,
    SpanBasis,
    cyclicity_certificate,
    distinctness,
    orbifold_irreducibility_pipeline,
    replay_certificate,
    separator,
    virasoro_check,
)
from orbifoldcert.modes import (
    heisenberg_signature,
    permutation_automorphism,
    theta_automorphism,
    weyl_cyclic_automorphism,
    weyl_signature,
)
from orbifoldcert.modules import (
    ModuleVector,
    build_module,
    filtration_basis,
    heisenberg_whittaker,
    vacuum_whittaker,
    weyl_whittaker,
    whittaker_type,
)
from orbifoldcert.orbifold import CyclicAction, delta_embed, monomial_charge
from orbifoldcert.scalars import Scalar


def dense_rank(rows):
    """Plain dense Gaussian elimination, written independently of
    SpanBasis so the two can disagree."""
    rows = [list(r) for r in rows]
    if not rows:
        return 0
    rank = 0
    for c in range(len(rows[0])):
        piv = next(
            (i for i in range(rank, len(rows)) if not rows[i][c].is_zero()),
            None,
        )
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = rows[rank][c].inverse()
        rows[rank] = [x * inv for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and not rows[i][c].is_zero():
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[rank])]
        rank += 1
        if rank == len(rows):
            break
    return rank


def _row(values):
    return {
        ("m", j): v
        for j, v in enumerate(values)
        if not v.is_zero()
    }


def _rand_scalar(rng, order=3):
    from orbifoldcert.scalars import euler_phi

    return Scalar(
        order,
        [Fraction(rng.randint(-2, 2)) for _ in range(euler_phi(order))],
    )


class TestSpanBasis:
    def test_rank_matches_dense_oracle(self):
        rng = random.Random(7)
        for trial in range(8):
            order = rng.choice([1, 2, 3, 4])
            ncols = 8
            rows = [
                [_rand_scalar(rng, order) for _ in range(ncols)]
                for _ in range(10)
            ]
            basis = SpanBasis()
            grew = sum(basis.insert(_row(r)) for r in rows)
            assert basis.rank == dense_rank(rows)
            assert grew == basis.rank

    def test_dependent_pair_has_rank_one(self):
        # the determinant zeta3 * zeta3^2 - 1 vanishes
        z = Scalar.zeta(3)
        basis = SpanBasis()
        assert basis.insert(_row([z, Scalar.one()]))
        assert not basis.insert(_row([Scalar.one(), z * z]))
        assert basis.rank == 1

    def test_independent_pair_has_rank_two(self):
        z = Scalar.zeta(3)
        basis = SpanBasis()
        assert basis.insert(_row([z, Scalar.one()]))
        assert basis.insert(_row([Scalar.one(), z]))
        assert basis.rank == 2

    def test_rows_stay_fully_reduced(self):
        rng = random.Random(3)
        basis = SpanBasis()
        for _ in range(12):
            basis.insert(_row([_rand_scalar(rng) for _ in range(6)]))
        pivots = set(basis.rows)
        for p, row in basis.rows.items():
            assert row[p] == Scalar.one()
            assert min(c for c in row if c[0] == "m") == p
            for other in pivots - {p}:
                assert other not in row

    def test_membership_returns_exact_combination(self):
        z = Scalar.zeta(4)
        raws = [
            [Scalar.one(), z, Scalar.zero()],
            [Scalar.zero(), Scalar.one(), z],
            [z, Scalar.zero(), Scalar.one()],
        ]
        basis = SpanBasis()
        for t, r in enumerate(raws):
            assert basis.insert(_row(r), tag=t)
        query = [
            2 * raws[0][j] + (z - 1) * raws[2][j] for j in range(3)
        ]
        combo = basis.membership(_row(query))
        assert combo is not None
        rebuilt = [Scalar.zero()] * 3
        for t, c in combo.items():
            for j in range(3):
                rebuilt[j] = rebuilt[j] + c * raws[t][j]
        assert rebuilt == query

    def test_membership_outside_span_is_none(self):
        basis = SpanBasis()
        basis.insert(_row([Scalar.one(), Scalar.one()]), tag=0)
        assert basis.membership(_row([Scalar.one(), -Scalar.one()])) is None

    def test_reinserting_combination_does_not_grow(self):
        rng = random.Random(11)
        rows = [[_rand_scalar(rng) for _ in range(5)] for _ in range(4)]
        basis = SpanBasis()
        for r in rows:
            basis.insert(_row(r))
        rank = basis.rank
        mixed = [rows[0][j] + rows[1][j] * 3 for j in range(5)]
        assert not basis.insert(_row(mixed))
        assert basis.rank == rank


@pytest.fixture
def weyl_p2():
    sig = weyl_signature()
    m = build_module(sig, weyl_whittaker(sig, lam=[1], mu=[]))
    act = CyclicAction(weyl_cyclic_automorphism(sig, 2))
    return m, act


@pytest.fixture
def weyl_vacuum_p2():
    sig = weyl_signature()
    m = build_module(sig, vacuum_whittaker(sig))
    act = CyclicAction(weyl_cyclic_automorphism(sig, 2))
    return m, act


SCALE1 = Scale(max_degree=Fraction(1), index_bound=3, budget=20_000)


class TestDistinctness:
    def test_weyl_twists_are_distinct(self, weyl_p2):
        m, act = weyl_p2
        types = [whittaker_type(h) for h in act.twisted_handles(m)]
        cert = distinctness(types)
        assert cert.passed
        assert str(cert.witnesses[(0, 1)]) == "a(0)"

    def test_vacuum_twists_collide(self, weyl_vacuum_p2):
        m, act = weyl_vacuum_p2
        types = [whittaker_type(h) for h in act.twisted_handles(m)]
        cert = distinctness(types)
        assert not cert.passed
        assert cert.collisions == [(0, 1)]

    def test_three_twists_pairwise(self):
        sig = weyl_signature()
        m = build_module(sig, weyl_whittaker(sig, lam=[1], mu=[]))
        act = CyclicAction(weyl_cyclic_automorphism(sig, 3))
        types = [whittaker_type(h) for h in act.twisted_handles(m)]
        cert = distinctness(types)
        assert cert.passed
        assert set(cert.witnesses) == {(0, 1), (0, 2), (1, 2)}


class TestSeparator:
    def test_kills_all_but_target(self, weyl_p2):
        m, act = weyl_p2
        handles = list(act.twisted_handles(m))
        sep = separator(handles, 0)
        assert sep.achieved[1].is_zero()
        assert not sep.achieved[0].is_zero()

    def test_other_target(self, weyl_p2):
        m, act = weyl_p2
        handles = list(act.twisted_handles(m))
        sep = separator(handles, 1)
        assert sep.achieved[0].is_zero()
        assert not sep.achieved[1].is_zero()

    def test_exponents_are_one_on_cyclic_vectors(self, weyl_p2):
        m, act = weyl_p2
        sep = separator(list(act.twisted_handles(m)), 0)
        assert all(k == 1 for _, _, k in sep.factors)

    def test_identical_types_raise(self, weyl_vacuum_p2):
        m, act = weyl_vacuum_p2
        with pytest.raises(ValueError):
            separator(list(act.twisted_handles(m)), 0)


class TestCyclicity:
    def test_weyl_p2_certifies_from_cyclic_vector(self, weyl_p2):
        m, act = weyl_p2
        cert = cyclicity_certificate(
            m, ModuleVector.cyclic(), act=act, charge_restriction=0,
            scale=SCALE1,
        )
        assert cert.verdict == "certified"
        assert not cert.missing
        assert set(cert.target_names) == {
            "1", "a*(0)", "a(-1)", "a*(0) a*(0)", "a(-1) a*(0)",
            "a(-1) a(-1)",
        }

    def test_weyl_p3_certifies(self):
        sig = weyl_signature()
        m = build_module(sig, weyl_whittaker(sig, lam=[1], mu=[]))
        act = CyclicAction(weyl_cyclic_automorphism(sig, 3))
        cert = cyclicity_certificate(
            m, ModuleVector.cyclic(), act=act, charge_restriction=0,
            scale=SCALE1,
        )
        assert cert.verdict == "certified"

    def test_replay_regenerates_targets(self, weyl_p2):
        m, act = weyl_p2
        cert = cyclicity_certificate(
            m, ModuleVector.cyclic(), act=act, charge_restriction=0,
            scale=SCALE1,
        )
        assert replay_certificate(cert, m, ModuleVector.cyclic())

    def test_tampered_certificate_fails_replay(self, weyl_p2):
        m, act = weyl_p2
        cert = cyclicity_certificate(
            m, ModuleVector.cyclic(), act=act, charge_restriction=0,
            scale=SCALE1,
        )
        name = next(n for n, combo in cert.covered.items() if combo)
        tag = next(iter(cert.covered[name]))
        cert.covered[name][tag] = cert.covered[name][tag] + 1
        assert not replay_certificate(cert, m, ModuleVector.cyclic())

    def test_random_start_certifies(self, weyl_p2):
        m, act = weyl_p2
        start = ModuleVector(
            {
                filtration_basis(m, Fraction(1))[3]: Scalar.from_rational(3),
                filtration_basis(m, Fraction(1))[1]: Scalar.one(),
            }
        )
        cert = cyclicity_certificate(
            m, start, act=act, charge_restriction=0, scale=SCALE1,
        )
        assert cert.verdict == "certified"
        assert replay_certificate(cert, m, start)

    def test_vacuum_closure_stalls_below_full_layer(self, weyl_vacuum_p2):
        m, act = weyl_vacuum_p2
        cert = cyclicity_certificate(
            m, ModuleVector.cyclic(), act=act, charge_restriction=0,
            scale=SCALE1,
        )
        assert cert.verdict == "not-certified (stalled)"
        # exactly the odd-charge monomials stay out of reach
        assert set(cert.missing) == {"a(-1)", "a*(0)"}
        assert cert.applications < SCALE1.budget

    def test_tiny_budget_reports_budget(self, weyl_p2):
        m, act = weyl_p2
        cert = cyclicity_certificate(
            m, ModuleVector.cyclic(), act=act, charge_restriction=0,
            scale=Scale(max_degree=Fraction(1), index_bound=3, budget=3),
        )
        assert cert.verdict == "not-certified (budget)"
        assert cert.applications == 3

    def test_larger_budget_only_improves(self, weyl_p2):
        m, act = weyl_p2
        small = cyclicity_certificate(
            m, ModuleVector.cyclic(), act=act, charge_restriction=0,
            scale=Scale(max_degree=Fraction(1), index_bound=3, budget=3),
        )
        big = cyclicity_certificate(
            m, ModuleVector.cyclic(), act=act, charge_restriction=0,
            scale=SCALE1,
        )
        assert set(small.covered) <= set(big.covered)
        assert big.verdict == "certified"

    def test_zero_start_rejected(self, weyl_p2):
        m, act = weyl_p2
        with pytest.raises(ValueError):
            cyclicity_certificate(
                m, ModuleVector.zero(), act=act, charge_restriction=0,
                scale=SCALE1,
            )

    def test_start_outside_universe_rejected(self, weyl_p2):
        m, act = weyl_p2
        deep = ModuleVector(
            {filtration_basis(m, Fraction(11, 2))[-1]: Scalar.one()}
        )
        assert not deep.is_zero()
        with pytest.raises(ValueError):
            cyclicity_certificate(
                m, deep, act=act, charge_restriction=0,
                scale=Scale(max_degree=Fraction(1), universe_degree=Fraction(2)),
            )

    def test_charge_restriction_needs_action(self, weyl_p2):
        m, _ = weyl_p2
        with pytest.raises(ValueError):
            cyclicity_certificate(
                m, ModuleVector.cyclic(), act=None, charge_restriction=0,
                scale=SCALE1,
            )

    def test_component_targets_certify(self, weyl_vacuum_p2):
        # charge-0 operators generate each charge component from its
        # lowest vector even though the full layer stalls
        m, act = weyl_vacuum_p2
        basis = filtration_basis(m, Fraction(1))
        for j in (0, 1):
            monos = [
                mono for mono in basis if monomial_charge(mono, act.g) == j
            ]
            start = ModuleVector({monos[0]: Scalar.one()})
            cert = cyclicity_certificate(
                m, start, act=act, charge_restriction=0, scale=SCALE1,
                targets=monos,
            )
            assert cert.verdict == "certified", f"charge {j}"

    def test_direct_sum_from_diagonal_start(self, weyl_p2):
        m, act = weyl_p2
        handles = list(act.twisted_handles(m))
        start = delta_embed(act, m, ModuleVector.cyclic(), 0)
        cert = cyclicity_certificate(
            handles, start, scale=Scale(max_degree=Fraction(1), budget=20_000),
        )
        assert cert.verdict == "certified"
        assert len(cert.target_names) == 12
        assert replay_certificate(cert, handles, start)

    def test_certificate_json_serializes(self, weyl_p2):
        m, act = weyl_p2
        cert = cyclicity_certificate(
            m, ModuleVector.cyclic(), act=act, charge_restriction=0,
            scale=SCALE1,
        )
        blob = json.dumps(cert.to_json())
        data = json.loads(blob)
        assert data["verdict"] == "certified"
        assert data["raws"][0]["parent"] is None


class TestScale:
    def test_word_length_defaults_to_order(self):
        assert Scale().resolved(3).word_length == 3
        assert Scale(word_length=2).resolved(5).word_length == 2

    def test_universe_defaults_above_targets(self):
        r = Scale(max_degree=Fraction(3, 2)).resolved(2)
        assert r.universe_degree == Fraction(9, 2)


class TestVirasoro:
    def test_weyl_residuals_and_inferred_charge(self, weyl_p2):
        m, _ = weyl_p2
        rep = virasoro_check(
            m, [(2, -2), (1, -1), (2, 1), (0, 2)], n_vectors=4, max_degree=2
        )
        assert rep.residuals_ok
        assert rep.inferred_c == rep.declared_c
        assert rep.declared_c.as_fraction() == Fraction(-1)

    def test_heisenberg_rank_two_charge(self):
        sig = heisenberg_signature(2)
        m = build_module(sig, heisenberg_whittaker(sig, rows=[[1], [2]]))
        rep = virasoro_check(m, [(2, -2), (3, -3)], n_vectors=3, max_degree=2)
        assert rep.residuals_ok
        assert rep.inferred_c.as_fraction() == Fraction(2)

    def test_pairs_without_central_term_infer_nothing(self, weyl_p2):
        m, _ = weyl_p2
        rep = virasoro_check(m, [(1, -1), (2, 0)], n_vectors=2, max_degree=1)
        assert rep.residuals_ok
        assert rep.inferred_c is None


class TestPipeline:
    def test_distinct_types_certify(self, weyl_p2):
        m, act = weyl_p2
        rep = orbifold_irreducibility_pipeline(m, act, scale=SCALE1, seed=0)
        assert rep.verdict == "certified"
        assert rep.distinctness.passed
        assert len(rep.cyclicity) == 4
        assert all(c.certified for c in rep.cyclicity)
        assert rep.decomposition is None

    def test_vacuum_decomposes(self, weyl_vacuum_p2):
        m, act = weyl_vacuum_p2
        rep = orbifold_irreducibility_pipeline(m, act, scale=SCALE1, seed=0)
        assert rep.verdict == "not-certified (types not distinct)"
        dec = rep.decomposition
        assert dec is not None
        assert dec.stalled.verdict == "not-certified (stalled)"
        assert set(dec.stalled.missing) == {"a(-1)", "a*(0)"}
        assert set(dec.component_certs) == {0, 1}
        assert all(c.certified for c in dec.component_certs.values())
        assert dec.cross_passed
        assert dec.cross_checks >= 40

    def test_heisenberg_theta_certifies(self):
        sig = heisenberg_signature(1)
        m = build_module(sig, heisenberg_whittaker(sig, rows=[[1, 2]]))
        act = CyclicAction(theta_automorphism(sig))
        rep = orbifold_irreducibility_pipeline(m, act, scale=SCALE1, seed=0)
        assert rep.verdict == "certified"

    def test_permutation_swap_certifies(self):
        sig = heisenberg_signature(2)
        m = build_module(sig, heisenberg_whittaker(sig, rows=[[1], [2]]))
        act = CyclicAction(permutation_automorphism(sig, [1, 0]))
        rep = orbifold_irreducibility_pipeline(m, act, scale=SCALE1, seed=0)
        assert rep.verdict == "certified"
        assert rep.distinctness.passed

    def test_pipeline_json_serializes(self, weyl_vacuum_p2):
        m, act = weyl_vacuum_p2
        rep = orbifold_irreducibility_pipeline(m, act, scale=SCALE1, seed=0)
        data = json.loads(json.dumps(rep.to_json()))
        assert data["verdict"].startswith("not-certified")
        assert data["decomposition"]["cross_passed"] is True

    def test_deterministic_given_seed(self, weyl_p2):
        m, act = weyl_p2
        a = orbifold_irreducibility_pipeline(m, act, scale=SCALE1, seed=5)
        b = orbifold_irreducibility_pipeline(m, act, scale=SCALE1, seed=5)
        assert json.dumps(a.to_json()) == json.dumps(b.to_json())
