"""Shared brute-force oracles for the test suite.

Everything here is deliberately independent of the library's own search
strategies: oracles scan whole groups element by element.
"""

from __future__ import annotations

from nullcover.groups import FiniteAbelianGroup


def abelian_groups_up_to(max_order: int):
    """All direct products of cyclic groups with order in [2, max_order],
    one representative per multiset of factors (nondecreasing)."""

    def factor_lists(min_factor: int, budget: int):
        yield ()
        for m in range(min_factor, budget + 1):
            for rest in factor_lists(m, budget // m):
                yield (m,) + rest

    for orders in factor_lists(2, max_order):
        if orders:
            yield FiniteAbelianGroup(orders)


def translators_by_scan(group, kept, targets):
    """All g with targets inside g + kept, found by scanning the whole
    group in canonical order."""
    kept = set(kept)
    targets = list(targets)
    return [
        g for g in group.elements() if all(group.sub(s, g) in kept for s in targets)
    ]


def least_translator_by_scan(group, kept, targets):
    found = translators_by_scan(group, kept, targets)
    return found[0] if found else None
