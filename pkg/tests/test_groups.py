import pytest
from hypothesis import given
from hypothesis import strategies as st

from nullcover.errors import CapExceeded, DimensionMismatch, PreconditionViolated
from nullcover.groups import BlockGroup, FiniteAbelianGroup, PadicContext, is_prime


small_groups = st.builds(
    FiniteAbelianGroup,
    st.lists(st.integers(2, 9), min_size=1, max_size=4).map(tuple),
)


def elements_of(group, data):
    return tuple(data.draw(st.integers(0, m - 1)) for m in group.orders)


class TestFiniteAbelianGroup:
    def test_add_examples(self):
        assert FiniteAbelianGroup((3,)).add((1,), (2,)) == (0,)
        assert FiniteAbelianGroup((2, 4)).add((1, 3), (1, 1)) == (0, 0)
        assert FiniteAbelianGroup((5,)).add((2,), (0,)) == (2,)

    def test_neg_examples(self):
        assert FiniteAbelianGroup((7,)).neg((3,)) == (4,)
        assert FiniteAbelianGroup((2, 2)).neg((1, 1)) == (1, 1)
        assert FiniteAbelianGroup((2, 3, 5)).neg((0, 0, 0)) == (0, 0, 0)

    def test_enumeration_order(self):
        assert list(FiniteAbelianGroup((2, 2)).elements()) == [(0, 0), (0, 1), (1, 0), (1, 1)]
        assert list(FiniteAbelianGroup((3,)).elements()) == [(0,), (1,), (2,)]

    def test_index_is_mixed_radix_value(self):
        G = FiniteAbelianGroup((2, 3))
        # oracle: position in the enumerated stream
        assert list(G.elements()).index((1, 2)) == 5
        assert G.index_of((1, 2)) == 5
        assert G.element_at(5) == (1, 2)

    def test_enumeration_distinct_and_complete(self):
        for orders in [(2,), (4,), (2, 3), (2, 2, 2), (3, 5)]:
            G = FiniteAbelianGroup(orders)
            seen = list(G.elements())
            assert len(seen) == len(set(seen)) == G.order

    def test_enumeration_cap(self):
        G = FiniteAbelianGroup((2,) * 21)
        with pytest.raises(CapExceeded):
            list(G.elements())
        assert sum(1 for _ in G.elements(cap=1 << 21)) == 1 << 21

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            FiniteAbelianGroup((2, 3)).add((1,), (0, 1))

    def test_invalid_orders(self):
        with pytest.raises(PreconditionViolated):
            FiniteAbelianGroup((1, 3))

    @given(small_groups, st.data())
    def test_group_axioms(self, G, data):
        a = elements_of(G, data)
        b = elements_of(G, data)
        c = elements_of(G, data)
        assert G.add(a, b) == G.add(b, a)
        assert G.add(G.add(a, b), c) == G.add(a, G.add(b, c))
        assert G.add(a, G.zero()) == a
        assert G.add(a, G.neg(a)) == G.zero()

    @given(small_groups, st.data())
    def test_index_round_trip(self, G, data):
        a = elements_of(G, data)
        assert G.element_at(G.index_of(a)) == a


class TestPadic:
    def test_add_examples(self):
        assert PadicContext(2, 3).add((1, 1, 0), (1, 0, 0)) == (0, 0, 1)
        assert PadicContext(3, 2).add((0, 0), (2, 1)) == (2, 1)
        assert PadicContext(2, 2).add((1, 1), (1, 1)) == (0, 1)

    def test_composite_p_rejected(self):
        with pytest.raises(PreconditionViolated):
            PadicContext(4, 3)
        with pytest.raises(PreconditionViolated):
            PadicContext(1, 3)

    @pytest.mark.parametrize("p,length", [(2, 1), (2, 4), (2, 6), (3, 3), (5, 2), (7, 2)])
    def test_add_matches_integers_exhaustively(self, p, length):
        ctx = PadicContext(p, length)
        for u in range(ctx.modulus):
            for v in range(ctx.modulus):
                total = ctx.add(ctx.from_int(u), ctx.from_int(v))
                assert ctx.value(total) == (u + v) % ctx.modulus

    @given(st.sampled_from([(2, 16), (3, 10), (5, 8)]), st.data())
    def test_add_matches_integers_randomized(self, params, data):
        ctx = PadicContext(*params)
        u = data.draw(st.integers(0, ctx.modulus - 1))
        v = data.draw(st.integers(0, ctx.modulus - 1))
        assert ctx.value(ctx.add(ctx.from_int(u), ctx.from_int(v))) == (u + v) % ctx.modulus

    @given(st.sampled_from([(2, 8), (3, 5), (5, 4)]), st.data())
    def test_neg_is_inverse(self, params, data):
        ctx = PadicContext(*params)
        x = ctx.from_int(data.draw(st.integers(0, ctx.modulus - 1)))
        assert ctx.add(x, ctx.neg(x)) == ctx.zero()

    def test_value_round_trip(self):
        ctx = PadicContext(3, 4)
        for v in range(ctx.modulus):
            assert ctx.value(ctx.from_int(v)) == v

    def test_length_mismatch(self):
        with pytest.raises(DimensionMismatch):
            PadicContext(2, 3).add((1, 0), (0, 1, 0))


class TestBlockGroup:
    def test_add_examples(self):
        B = BlockGroup(2, 0, 3)
        assert B.value(B.add(B.element_at(3), B.element_at(1))) == 4
        assert B.value(B.add(B.element_at(5), B.element_at(5))) == 2
        x = B.element_at(6)
        assert B.add(x, B.zero()) == x

    def test_neg_examples(self):
        B = BlockGroup(2, 0, 3)
        assert B.value(B.neg(B.element_at(3))) == 5
        assert B.neg(B.zero()) == B.zero()
        assert BlockGroup(3, 0, 1).neg((1,)) == (2,)

    @pytest.mark.parametrize("p,start,stop", [(2, 0, 3), (2, 3, 7), (3, 2, 4), (5, 0, 2)])
    def test_add_matches_integers(self, p, start, stop):
        B = BlockGroup(p, start, stop)
        for u in range(B.order):
            for v in range(B.order):
                assert B.value(B.add(B.element_at(u), B.element_at(v))) == (u + v) % B.order

    def test_carry_unit_has_value_one(self):
        assert BlockGroup(3, 5, 8).value(BlockGroup(3, 5, 8).carry_unit()) == 1

    @pytest.mark.parametrize("p,start,stop", [(2, 2, 5), (3, 1, 3)])
    def test_agrees_with_padic_when_no_low_carry(self, p, start, stop):
        # if both summands vanish below the block, the carried addition
        # never sends anything into it, so the block digits agree
        B = BlockGroup(p, start, stop)
        ctx = PadicContext(p, stop + 1)
        for u in range(B.order):
            for v in range(B.order):
                x = ctx.from_int(u * p**start)
                y = ctx.from_int(v * p**start)
                assert ctx.add(x, y)[start:stop] == B.add(B.element_at(u), B.element_at(v))

    def test_enumeration_is_by_value(self):
        B = BlockGroup(2, 0, 2)
        assert list(B.elements()) == [(0, 0), (1, 0), (0, 1), (1, 1)]


class TestPrimality:
    def test_against_trial_division(self):
        def slow(n):
            return n >= 2 and all(n % d for d in range(2, n))

        for n in range(200):
            assert is_prime(n) == slow(n)

    def test_larger_values(self):
        assert is_prime(2**31 - 1)
        assert not is_prime(2**31)
        assert not is_prime(1_000_003 * 1_000_033)
