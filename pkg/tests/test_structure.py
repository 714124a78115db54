from math import prod

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nullcover.errors import NotDiscrete, NotFiniteTorsion, NotInfinite, PreconditionViolated
from nullcover.groups import FiniteAbelianGroup
from nullcover.structure import (
    RULES,
    Cyclic,
    FiniteSum,
    Int,
    Padic,
    ProdOmega,
    Quasicyclic,
    Reals,
    SumOmega,
    Torus,
    classify_subgroup,
    descriptor_from_json,
    descriptor_to_json,
    divisible_chain,
    dual,
    enumerate_descriptors,
    is_compact,
    is_discrete,
    is_finite,
    niceness_pipeline,
    order_of,
    primary_decomposition,
    r_power,
    syntactic_size,
)

atoms = st.sampled_from(
    [Int(), Reals(), Torus(), Cyclic(2), Cyclic(3), Cyclic(12), Quasicyclic(2), Padic(5)]
)
finite_descriptors = st.recursive(
    st.sampled_from([Cyclic(2), Cyclic(3), Cyclic(4), Cyclic(9)]),
    lambda children: st.builds(FiniteSum, st.lists(children, min_size=1, max_size=3).map(tuple)),
    max_leaves=4,
)
descriptors = st.recursive(
    atoms,
    lambda children: st.one_of(
        st.builds(FiniteSum, st.lists(children, min_size=1, max_size=3).map(tuple)),
        st.builds(SumOmega, st.lists(finite_descriptors, min_size=1, max_size=2).map(tuple)),
        st.builds(ProdOmega, st.lists(finite_descriptors, min_size=1, max_size=2).map(tuple)),
    ),
    max_leaves=6,
)


class TestGrammar:
    def test_validation(self):
        with pytest.raises(PreconditionViolated):
            Cyclic(1)
        with pytest.raises(PreconditionViolated):
            Quasicyclic(6)
        with pytest.raises(PreconditionViolated):
            SumOmega((Int(),))
        with pytest.raises(PreconditionViolated):
            ProdOmega(())

    def test_r_power(self):
        assert r_power(1) == Reals()
        assert r_power(3) == FiniteSum((Reals(), Reals(), Reals()))

    def test_predicates(self):
        assert is_finite(FiniteSum((Cyclic(2), Cyclic(3))))
        assert not is_finite(SumOmega((Cyclic(2),)))
        assert is_discrete(SumOmega((Cyclic(2),))) and not is_compact(SumOmega((Cyclic(2),)))
        assert is_compact(ProdOmega((Cyclic(2),))) and not is_discrete(ProdOmega((Cyclic(2),)))
        assert order_of(FiniteSum((Cyclic(6), Cyclic(10)))) == 60
        assert order_of(Int()) is None

    @given(descriptors)
    def test_json_round_trip(self, d):
        assert descriptor_from_json(descriptor_to_json(d)) == d


class TestPrimaryDecomposition:
    def test_crt_split(self):
        assert primary_decomposition(Cyclic(12)) == [(2, Cyclic(4)), (3, Cyclic(3))]

    def test_prime_power_passthrough(self):
        assert primary_decomposition(Cyclic(8)) == [(2, Cyclic(8))]

    def test_sum_example(self):
        parts = primary_decomposition(FiniteSum((Cyclic(6), Cyclic(10))))
        assert parts == [
            (2, FiniteSum((Cyclic(2), Cyclic(2)))),
            (3, Cyclic(3)),
            (5, Cyclic(5)),
        ]

    def test_rejects_infinite(self):
        with pytest.raises(NotFiniteTorsion):
            primary_decomposition(FiniteSum((Cyclic(4), Int())))

    @given(finite_descriptors)
    def test_order_preserved(self, d):
        parts = primary_decomposition(d)
        assert prod(order_of(c) for _, c in parts) == order_of(d)
        assert [p for p, _ in parts] == sorted({p for p, _ in parts})


class TestClassify:
    def test_case_one(self):
        verdict = classify_subgroup(FiniteSum((Cyclic(4), Int())))
        assert verdict.case == 1 and verdict.witness == Int()

    def test_case_two(self):
        d = SumOmega((Cyclic(2),))
        verdict = classify_subgroup(d)
        assert verdict.case == 2 and verdict.witness == d

    def test_case_three(self):
        verdict = classify_subgroup(Quasicyclic(3))
        assert verdict.case == 3 and verdict.witness == 3

    def test_case_order(self):
        verdict = classify_subgroup(FiniteSum((Quasicyclic(3), SumOmega((Cyclic(2),)), Int())))
        assert verdict.case == 1

    def test_rejects_finite(self):
        with pytest.raises(NotInfinite):
            classify_subgroup(FiniteSum((Cyclic(4), Cyclic(9))))

    def test_rejects_nondiscrete(self):
        with pytest.raises(NotDiscrete):
            classify_subgroup(Padic(2))

    @given(descriptors)
    def test_case_two_witness_dualizes_to_product(self, d):
        if not is_discrete(d) or order_of(d) is not None:
            return
        verdict = classify_subgroup(d)
        if verdict.case == 2:
            assert isinstance(dual(verdict.witness), ProdOmega)


class TestDivisibleChain:
    def test_z8_depth_two(self):
        G = FiniteAbelianGroup((8,))
        assert divisible_chain(G, 2, 2) == ((4,), (2,), (1,))

    def test_z8_depth_three_missing(self):
        assert divisible_chain(FiniteAbelianGroup((8,)), 2, 3) is None

    def test_z3_depth_zero(self):
        assert divisible_chain(FiniteAbelianGroup((3,)), 2, 0) == ((1,),)

    def test_chains_reverify(self):
        for orders, p, depth in [((8,), 2, 2), ((4, 4), 2, 1), ((27,), 3, 2), ((9, 3), 3, 1)]:
            G = FiniteAbelianGroup(orders)
            chain = divisible_chain(G, p, depth)
            assert chain is not None
            assert chain[0] != G.zero()
            for g, h in zip(chain, chain[1:]):
                assert G.scalar_mul(p, h) == g

    def test_prime_power_cyclic_max_depth(self):
        for p in (2, 3):
            for k in range(1, 5):
                G = FiniteAbelianGroup((p**k,))
                assert divisible_chain(G, p, k - 1) is not None
                assert divisible_chain(G, p, k) is None

    def test_lexicographically_least(self):
        # oracle: enumerate all chains of the requested depth outright
        G = FiniteAbelianGroup((2, 8))
        p, depth = 2, 1
        chains = []
        for g0 in G.elements():
            if g0 == G.zero():
                continue
            for g1 in G.elements():
                if G.scalar_mul(p, g1) == g0:
                    chains.append((g0, g1))
        assert divisible_chain(G, p, depth) == min(chains)


class TestDual:
    def test_atoms(self):
        assert dual(Int()) == Torus()
        assert dual(Torus()) == Int()
        assert dual(Reals()) == Reals()
        assert dual(Cyclic(12)) == Cyclic(12)
        assert dual(Quasicyclic(5)) == Padic(5)
        assert dual(Padic(7)) == Quasicyclic(7)

    def test_constructors_swap(self):
        assert dual(SumOmega((Cyclic(2), Cyclic(3)))) == ProdOmega((Cyclic(2), Cyclic(3)))
        assert dual(FiniteSum((Int(), Padic(3)))) == FiniteSum((Torus(), Quasicyclic(3)))

    @given(descriptors)
    def test_involution(self, d):
        assert dual(dual(d)) == d

    def test_involution_exhaustive_small(self):
        count = 0
        for d in enumerate_descriptors(4):
            assert dual(dual(d)) == d
            count += 1
        assert count == 1241  # size census of the palette, frozen

    def test_enumeration_sizes_and_uniqueness(self):
        seen = set()
        for d in enumerate_descriptors(4):
            assert syntactic_size(d) <= 4
            assert d not in seen
            seen.add(d)


class TestPipeline:
    def test_terminals_one_step(self):
        for d, rule in [
            (Torus(), "terminal-circle"),
            (ProdOmega((Cyclic(2),)), "terminal-finite-product"),
            (Padic(3), "terminal-padic"),
        ]:
            result = niceness_pipeline(d)
            assert result.verdict == "nice"
            assert [s.rule for s in result.steps] == [rule]

    def test_discrete_not_nice(self):
        for d in [Int(), Cyclic(5), SumOmega((Cyclic(2),)), FiniteSum((Int(), Quasicyclic(2)))]:
            result = niceness_pipeline(d)
            assert result.verdict == "not-nice:discrete"
            assert result.steps[-1].rule == "discrete-no-nullset"

    def test_real_factor(self):
        result = niceness_pipeline(r_power(2))
        assert result.verdict == "nice"
        assert result.steps[-1].rule == "real-factor"

    def test_real_factor_with_compact_part(self):
        result = niceness_pipeline(FiniteSum((Padic(2), Reals())))
        assert result.verdict == "nice"
        assert [s.rule for s in result.steps] == ["real-factor"]

    def test_open_subgroup_sheds_discrete_summands(self):
        result = niceness_pipeline(FiniteSum((Int(), Torus())))
        assert result.verdict == "nice"
        assert [s.rule for s in result.steps] == ["open-subgroup", "terminal-circle"]
        assert result.side_conditions == ("open-subgroup-index-bounded",)

    def test_compact_goes_through_duality(self):
        result = niceness_pipeline(FiniteSum((Cyclic(2), Torus())))
        assert result.verdict == "nice"
        assert [s.rule for s in result.steps] == [
            "dualize",
            "subgroup-trichotomy",
            "dualize-witness",
            "terminal-circle",
        ]

    def test_padic_sum_reaches_padic_terminal(self):
        result = niceness_pipeline(FiniteSum((Padic(2), Padic(3))))
        assert result.verdict == "nice"
        assert result.steps[-1].rule == "terminal-padic"

    def test_product_inside_sum_reaches_product_terminal(self):
        result = niceness_pipeline(FiniteSum((ProdOmega((Cyclic(2),)), Cyclic(3))))
        assert result.verdict == "nice"
        assert result.steps[-1].rule == "terminal-finite-product"

    def test_flattening_recorded(self):
        nested = FiniteSum((FiniteSum((Int(), Torus())), Padic(2)))
        result = niceness_pipeline(nested)
        assert result.steps[0].rule == "flatten-sum"
        assert result.verdict == "nice"

    def test_rules_are_registered(self):
        assert {"dualize", "subgroup-trichotomy", "terminal-circle"} <= RULES.keys()

    @settings(max_examples=300)
    @given(descriptors)
    def test_every_nice_trace_ends_in_terminal(self, d):
        result = niceness_pipeline(d)
        assert result.verdict in ("nice", "not-nice:discrete", "not-nice:large-index", "unresolved")
        for step in result.steps:
            assert step.rule in RULES
        if result.verdict == "nice":
            last = result.steps[-1]
            assert last.rule in ("terminal-circle", "terminal-finite-product", "terminal-padic", "real-factor")
            assert result.side_conditions == ("open-subgroup-index-bounded",)
