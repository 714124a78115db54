"""Covering compact nullsets by translates, at finite truncation depth.

The pipeline is: partition coordinates into blocks whose group order
outgrows 2(n+3) (:func:`plan_blocks_product` / :func:`plan_blocks_padic`),
keep a large subset of each block group (:func:`build_nullset`), and for
any slalom of the right width compute one translate that absorbs it
(:func:`cover_product_slalom` / :func:`cover_padic_slalom`).  Every
certificate is re-checked exhaustively by :func:`verify_cover`, which is
deliberately independent of how the translate was found.

All integers are exact; caps abort rather than degrade to sampling.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from math import prod
from typing import Callable, Iterable, Optional, Sequence, Union

from .errors import (
    CapExceeded,
    EmptyWindow,
    NoTranslator,
    PreconditionViolated,
    SchemaError,
    VerificationFailed,
)
from .groups import DEFAULT_ENUM_CAP, BlockGroup, FiniteAbelianGroup, is_prime

DEFAULT_VERIFY_CAP = 1 << 20

# Width functions admitted by slaloms.  The names are the formulas.
WIDTHS: dict[str, Callable[[int], int]] = {
    "n+2": lambda n: n + 2,
    "(n+2)//2": lambda n: (n + 2) // 2,
}

WidthSpec = Union[str, tuple[int, ...]]


def width_fn(width: WidthSpec) -> Callable[[int], int]:
    if isinstance(width, str):
        try:
            return WIDTHS[width]
        except KeyError:
            raise SchemaError(f"unknown width tag {width!r}; expected one of {sorted(WIDTHS)} or a table") from None
    table = tuple(width)
    if not all(isinstance(w, int) and w >= 1 for w in table):
        raise SchemaError(f"width table must contain positive ints: {table}")

    def f(n: int) -> int:
        if n >= len(table):
            raise PreconditionViolated(f"width table of length {len(table)} has no entry for block {n}")
        return table[n]

    return f


def _grow(n: int) -> int:
    # per-block size threshold: each block group must have order > 2(n+3)
    return 2 * (n + 3)


@dataclass(frozen=True)
class BlockPlan:
    """How the coordinate axis is cut into consecutive blocks.

    ``boundaries`` is the cut sequence 0 = c_0 < c_1 < ... < c_D; block n
    covers coordinates [c_n, c_n+1).  Product mode records the cyclic
    orders of the consumed coordinates; p-adic mode records the prime and
    the cuts are digit positions.
    """

    mode: str
    boundaries: tuple[int, ...]
    orders: Optional[tuple[int, ...]] = None
    p: Optional[int] = None

    def __post_init__(self) -> None:
        if self.mode not in ("product", "padic"):
            raise SchemaError(f"unknown plan mode {self.mode!r}")
        cuts = self.boundaries
        if len(cuts) < 2 or cuts[0] != 0 or any(a >= b for a, b in zip(cuts, cuts[1:])):
            raise PreconditionViolated(f"boundaries must strictly increase from 0: {cuts}")
        if self.mode == "product":
            if self.orders is None or self.p is not None:
                raise SchemaError("product plans carry orders and no prime")
            if len(self.orders) != cuts[-1]:
                raise PreconditionViolated(
                    f"{len(self.orders)} coordinate orders for boundary range {cuts[-1]}"
                )
            if any(m < 2 for m in self.orders):
                raise PreconditionViolated("coordinate orders must be >= 2")
        else:
            if self.p is None or self.orders is not None:
                raise SchemaError("padic plans carry a prime and no orders")
            if not is_prime(self.p):
                raise PreconditionViolated(f"p = {self.p} is not prime")
        for n, size in enumerate(self.block_orders):
            if size <= _grow(n):
                raise PreconditionViolated(f"block {n} has order {size} <= {_grow(n)}")

    @property
    def depth(self) -> int:
        return len(self.boundaries) - 1

    @property
    def block_orders(self) -> tuple[int, ...]:
        if self.mode == "product":
            return tuple(
                prod(self.orders[a:b]) for a, b in zip(self.boundaries, self.boundaries[1:])
            )
        return tuple(self.p ** (b - a) for a, b in zip(self.boundaries, self.boundaries[1:]))

    def block_group(self, n: int):
        """The group structure on block n: a residue-vector group in
        product mode, a truncated-carry digit block in p-adic mode."""
        a, b = self.boundaries[n], self.boundaries[n + 1]
        if self.mode == "product":
            return FiniteAbelianGroup(self.orders[a:b])
        return BlockGroup(self.p, a, b)

    def to_json(self) -> dict:
        obj = {"mode": self.mode, "boundaries": list(self.boundaries), "block_orders": list(self.block_orders)}
        if self.mode == "product":
            obj["orders"] = list(self.orders)
        else:
            obj["p"] = self.p
        return obj

    @classmethod
    def from_json(cls, obj: object) -> "BlockPlan":
        if not isinstance(obj, dict):
            raise SchemaError("plan must be a JSON object")
        try:
            mode = obj["mode"]
            boundaries = tuple(_as_int(c, "boundary") for c in obj["boundaries"])
        except KeyError as missing:
            raise SchemaError(f"plan is missing field {missing}") from None
        except TypeError:
            raise SchemaError("plan boundaries must be an array of integers") from None
        orders = None
        p = None
        if mode == "product":
            if "orders" not in obj:
                raise SchemaError("product plan is missing 'orders'")
            orders = tuple(_as_int(m, "order") for m in obj["orders"])
        elif mode == "padic":
            if "p" not in obj:
                raise SchemaError("padic plan is missing 'p'")
            p = _as_int(obj["p"], "p")
        plan = cls(mode=mode, boundaries=boundaries, orders=orders, p=p)
        if "block_orders" in obj:
            given = tuple(_as_int(size, "block order") for size in obj["block_orders"])
            if given != plan.block_orders:
                raise SchemaError("block_orders do not match the plan")
        return plan


def _as_int(value: object, what: str) -> int:
    # accept decimal strings so very large exact integers survive JSON
    if isinstance(value, bool):
        raise SchemaError(f"{what} must be an integer, got a boolean")
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        try:
            return int(value, 10)
        except ValueError:
            raise SchemaError(f"{what} must be an integer, got {value!r}") from None
    raise SchemaError(f"{what} must be an integer, got {type(value).__name__}")


@dataclass(frozen=True)
class NullsetSpec:
    """A finite-depth description of the compact nullset: the block plan
    plus, for every block, the sorted enumeration indices of the kept set.

    The size of each kept set must land in the window
    ceil((1 - 1/(n+3)) * order) .. floor((1 - 1/(2(n+3))) * order),
    which is what makes translates exist while the measure still decays.
    """

    plan: BlockPlan
    kept: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if len(self.kept) != self.plan.depth:
            raise PreconditionViolated(
                f"{len(self.kept)} kept sets for a plan of depth {self.plan.depth}"
            )
        for n, (indices, size) in enumerate(zip(self.kept, self.plan.block_orders)):
            if list(indices) != sorted(set(indices)):
                raise PreconditionViolated(f"kept set for block {n} must be sorted and duplicate-free")
            if indices and not (0 <= indices[0] and indices[-1] < size):
                raise PreconditionViolated(f"kept set for block {n} has indices outside [0, {size})")
            lo, hi = kept_window(size, n)
            if not lo <= len(indices) <= hi:
                raise PreconditionViolated(
                    f"kept set for block {n} has size {len(indices)}, outside window [{lo}, {hi}]"
                )

    @property
    def depth(self) -> int:
        return len(self.kept)

    def to_json(self) -> dict:
        return {"plan": self.plan.to_json(), "A": [list(ind) for ind in self.kept]}

    @classmethod
    def from_json(cls, obj: object) -> "NullsetSpec":
        if not isinstance(obj, dict) or "plan" not in obj or "A" not in obj:
            raise SchemaError("nullset spec must be an object with 'plan' and 'A'")
        plan = BlockPlan.from_json(obj["plan"])
        if not isinstance(obj["A"], list):
            raise SchemaError("'A' must be an array of arrays of indices")
        kept = tuple(tuple(_as_int(i, "kept index") for i in block) for block in obj["A"])
        return cls(plan=plan, kept=kept)


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def kept_window(size: int, n: int) -> tuple[int, int]:
    """Admissible kept-set sizes for a block of the given order at level n."""
    lo = _ceil_div(size * (n + 2), n + 3)     # ceil((1 - 1/(n+3)) * size)
    hi = size - _ceil_div(size, 2 * (n + 3))  # floor((1 - 1/(2(n+3))) * size)
    return lo, hi


@dataclass(frozen=True)
class Slalom:
    """Per-block finite sets of enumeration indices, with |sets[n]| bounded
    by the width function."""

    width: WidthSpec
    sets: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        f = width_fn(self.width)
        for n, s in enumerate(self.sets):
            if not s:
                raise PreconditionViolated(f"slalom set {n} is empty")
            if list(s) != sorted(set(s)):
                raise PreconditionViolated(f"slalom set {n} must be sorted and duplicate-free")
            if len(s) > f(n):
                raise PreconditionViolated(f"slalom set {n} has {len(s)} values, width allows {f(n)}")

    @property
    def depth(self) -> int:
        return len(self.sets)

    def element_count(self) -> int:
        return prod(len(s) for s in self.sets)

    def check_domains(self, plan: BlockPlan) -> None:
        if self.depth != plan.depth:
            raise PreconditionViolated(f"slalom depth {self.depth} != plan depth {plan.depth}")
        for n, (s, size) in enumerate(zip(self.sets, plan.block_orders)):
            if s[0] < 0 or s[-1] >= size:
                raise PreconditionViolated(f"slalom set {n} leaves the block domain [0, {size})")

    def to_json(self) -> dict:
        width = self.width if isinstance(self.width, str) else list(self.width)
        return {"width": width, "sets": [list(s) for s in self.sets]}

    @classmethod
    def from_json(cls, obj: object) -> "Slalom":
        if not isinstance(obj, dict) or "width" not in obj or "sets" not in obj:
            raise SchemaError("slalom must be an object with 'width' and 'sets'")
        width = obj["width"]
        if isinstance(width, list):
            width = tuple(_as_int(w, "width entry") for w in width)
        elif not isinstance(width, str):
            raise SchemaError("'width' must be a tag string or an array")
        if not isinstance(obj["sets"], list):
            raise SchemaError("'sets' must be an array of arrays")
        sets = tuple(tuple(_as_int(v, "slalom value") for v in s) for s in obj["sets"])
        return cls(width=width, sets=sets)


@dataclass(frozen=True)
class CoverCertificate:
    """One translate plus the exhaustive-verification record."""

    translate: tuple[tuple[int, ...], ...]   # per-block residue/digit vectors
    verified: bool
    checked_count: int

    def to_json(self) -> dict:
        flat = [d for block in self.translate for d in block]
        return {"translate": flat, "verified": self.verified, "checked_count": self.checked_count}

    @classmethod
    def from_json(cls, plan: BlockPlan, obj: object) -> "CoverCertificate":
        if not isinstance(obj, dict) or "translate" not in obj:
            raise SchemaError("certificate must be an object with 'translate'")
        flat = [_as_int(d, "translate digit") for d in obj["translate"]]
        if len(flat) != plan.boundaries[-1]:
            raise SchemaError(
                f"translate has {len(flat)} coordinates, plan covers {plan.boundaries[-1]}"
            )
        blocks = tuple(
            tuple(flat[a:b]) for a, b in zip(plan.boundaries, plan.boundaries[1:])
        )
        return cls(
            translate=blocks,
            verified=bool(obj.get("verified", False)),
            checked_count=_as_int(obj.get("checked_count", 0), "checked_count"),
        )


@dataclass(frozen=True)
class VerifyResult:
    """Outcome of an exhaustive cover check."""

    ok: bool
    witness: Optional[tuple[int, ...]]      # lexicographically least failing element, by block index
    checked_count: int
    carry_cases: Optional[tuple[int, int]] = None  # (no carry into block, carry into block)

    def to_json(self) -> dict:
        obj = {
            "ok": self.ok,
            "witness": None if self.witness is None else list(self.witness),
            "checked_count": self.checked_count,
        }
        if self.carry_cases is not None:
            obj["carry_cases"] = list(self.carry_cases)
        return obj


def find_translator(group, kept: Iterable, targets: Iterable, n: int, cap: int = DEFAULT_ENUM_CAP):
    """Least g in canonical order with targets contained in g + kept.

    Rather than trying every g, compute the set of g that fail: g fails
    iff some target equals g + c with c outside the kept set, i.e. iff
    g lies in targets - (complement of kept).  That set has at most
    |targets| * |complement| < |G| members under the preconditions
    |kept| >= ceil((1 - 1/(n+3)) |G|) and |targets| <= n+2, so the first
    element outside it exists and is returned.
    """
    if n < 0:
        raise PreconditionViolated(f"level must be >= 0, got {n}")
    kept = frozenset(kept)
    targets = sorted(set(targets))
    order = group.order
    min_kept = _ceil_div(order * (n + 2), n + 3)
    if len(kept) < min_kept:
        raise PreconditionViolated(
            f"kept set has {len(kept)} of {order} elements, level {n} requires >= {min_kept}"
        )
    if len(targets) > n + 2:
        raise PreconditionViolated(f"{len(targets)} targets exceed the level-{n} limit {n + 2}")
    missing = [e for e in group.elements(cap) if e not in kept]
    forbidden = {group.sub(s, c) for s in targets for c in missing}
    # counting bound behind the whole construction
    assert len(forbidden) <= len(targets) * len(missing) < order
    for g in group.elements(cap):
        if g not in forbidden:
            return g
    raise NoTranslator(f"forbidden set exhausted a group of order {order}")


def plan_blocks_product(orders: Iterable[int], depth: int) -> BlockPlan:
    """Greedy minimal consecutive blocks over the given coordinate orders.

    Block n is the shortest prefix of the remaining coordinates whose
    cumulative order exceeds 2(n+3).  ``orders`` may be any iterable,
    including an infinite one; exactly the consumed prefix is recorded.
    """
    if depth < 1:
        raise PreconditionViolated(f"depth must be >= 1, got {depth}")
    supply = iter(orders)
    consumed: list[int] = []
    cuts = [0]
    for n in range(depth):
        size = 1
        while size <= _grow(n):
            try:
                m = next(supply)
            except StopIteration:
                raise PreconditionViolated(
                    f"coordinates exhausted while forming block {n} of {depth}"
                ) from None
            if m < 2:
                raise PreconditionViolated(f"coordinate orders must be >= 2, got {m}")
            consumed.append(m)
            size *= m
        cuts.append(len(consumed))
    return BlockPlan(mode="product", boundaries=tuple(cuts), orders=tuple(consumed))


def plan_blocks_padic(p: int, depth: int) -> BlockPlan:
    """Digit cuts 0 = k_0 < k_1 < ... with each step the minimal m such
    that p^m > 2(n+3)."""
    if depth < 1:
        raise PreconditionViolated(f"depth must be >= 1, got {depth}")
    if not is_prime(p):
        raise PreconditionViolated(f"p = {p} is not prime")
    cuts = [0]
    for n in range(depth):
        size = 1
        step = 0
        while size <= _grow(n):
            size *= p
            step += 1
        cuts.append(cuts[-1] + step)
    return BlockPlan(mode="padic", boundaries=tuple(cuts), p=p)


def build_nullset(plan: BlockPlan) -> NullsetSpec:
    """Keep, in every block, the first floor((1 - 1/(2(n+3))) * order)
    elements in canonical order: the largest admissible kept set, which
    makes covering easiest while the measure bound stays exact."""
    kept = []
    for n, size in enumerate(plan.block_orders):
        lo, hi = kept_window(size, n)
        if lo > hi:
            raise EmptyWindow(f"block {n} of order {size} admits no kept-set size at level {n}")
        kept.append(tuple(range(hi)))
    return NullsetSpec(plan=plan, kept=tuple(kept))


def bound_product(n_blocks: int) -> Fraction:
    """Exact value of the decay bound prod_{n<N} (1 - 1/(2(n+3)))."""
    return prod((1 - Fraction(1, _grow(n)) for n in range(n_blocks)), start=Fraction(1))


def measure_upper(spec: NullsetSpec, n_blocks: int) -> Fraction:
    """Exact counting measure of the first ``n_blocks`` levels of the
    nullset, i.e. prod |kept_n| / |block_n|; checked against the decay
    bound before returning."""
    if not 0 <= n_blocks <= spec.depth:
        raise PreconditionViolated(f"{n_blocks} blocks requested, spec realizes {spec.depth}")
    measure = prod(
        (Fraction(len(ind), size) for ind, size in zip(spec.kept[:n_blocks], spec.plan.block_orders)),
        start=Fraction(1),
    )
    if measure > bound_product(n_blocks):
        raise VerificationFailed(f"measure {measure} exceeds the decay bound at N = {n_blocks}")
    return measure


def first_bound_below(threshold: Fraction) -> int:
    """Smallest N with bound_product(N) < threshold, by direct evaluation."""
    if not 0 < threshold < 1:
        raise PreconditionViolated(f"threshold must be in (0, 1), got {threshold}")
    value = Fraction(1)
    n = 0
    while value >= threshold:
        value *= 1 - Fraction(1, _grow(n))
        n += 1
    return n


def cover_product_slalom(
    spec: NullsetSpec,
    slalom: Slalom,
    cap_enum: int = DEFAULT_ENUM_CAP,
    cap_verify: int = DEFAULT_VERIFY_CAP,
) -> CoverCertificate:
    """Cover a width-(n+2) slalom by one translate of the product nullset.

    Blockwise: the translate's n-th component comes from
    :func:`find_translator` on the block group; no carries exist in
    product mode, so the blocks are independent.  The assembled translate
    is then re-checked exhaustively over every slalom element.
    """
    if spec.plan.mode != "product":
        raise PreconditionViolated("cover_product_slalom needs a product-mode spec")
    slalom.check_domains(spec.plan)
    f = width_fn("n+2")
    translate = []
    for n, values in enumerate(slalom.sets):
        if len(values) > f(n):
            raise PreconditionViolated(f"slalom set {n} is wider than n+2")
        group = spec.plan.block_group(n)
        kept_elems = [group.element_at(i) for i in spec.kept[n]]
        targets = [group.element_at(v) for v in values]
        translate.append(find_translator(group, kept_elems, targets, n, cap_enum))
    certificate = CoverCertificate(
        translate=tuple(translate), verified=False, checked_count=0
    )
    result = verify_cover(spec, certificate.translate, slalom, cap_verify)
    if not result.ok:
        raise VerificationFailed(
            f"product cover failed exhaustive re-check at element {result.witness}"
        )
    return CoverCertificate(
        translate=certificate.translate, verified=True, checked_count=result.checked_count
    )


def cover_padic_slalom(
    ctx,
    spec: NullsetSpec,
    slalom: Slalom,
    cap_enum: int = DEFAULT_ENUM_CAP,
    cap_verify: int = DEFAULT_VERIFY_CAP,
) -> CoverCertificate:
    """Cover a width-((n+2)//2) slalom by one additive offset in the
    truncated p-adic integers.

    Carries couple the blocks, so each slalom set is first closed under
    an incoming carry: targets_n = S_n united with S_n + carry_unit.
    That at most doubles the set, staying within the n+2 budget of
    :func:`find_translator`; the offset's n-th block is the block-group
    inverse of the found translator.  Verification then runs the full
    carry-propagating addition mod p^(top cut) on every slalom element.
    """
    plan = spec.plan
    if plan.mode != "padic":
        raise PreconditionViolated("cover_padic_slalom needs a padic-mode spec")
    if ctx.p != plan.p or ctx.length != plan.boundaries[-1]:
        raise PreconditionViolated(
            f"context ({ctx.p}, {ctx.length}) does not match plan ({plan.p}, {plan.boundaries[-1]})"
        )
    slalom.check_domains(plan)
    f = width_fn("(n+2)//2")
    offset_blocks = []
    for n, values in enumerate(slalom.sets):
        if len(values) > f(n):
            raise PreconditionViolated(f"slalom set {n} is wider than (n+2)//2")
        block = plan.block_group(n)
        kept_elems = [block.element_at(i) for i in spec.kept[n]]
        targets = {block.element_at(v) for v in values}
        targets |= {block.add(t, block.carry_unit()) for t in targets}
        if len(targets) > n + 2:
            raise PreconditionViolated(
                f"carry-closed set for block {n} has {len(targets)} elements, over the n+2 budget"
            )
        g = find_translator(block, kept_elems, targets, n, cap_enum)
        offset_blocks.append(block.neg(g))
    certificate = CoverCertificate(
        translate=tuple(offset_blocks), verified=False, checked_count=0
    )
    result = verify_cover(spec, certificate.translate, slalom, cap_verify)
    if not result.ok:
        raise VerificationFailed(
            f"padic cover failed exhaustive re-check at element {result.witness}"
        )
    return CoverCertificate(
        translate=certificate.translate, verified=True, checked_count=result.checked_count
    )


def verify_cover(
    spec: NullsetSpec,
    translate: tuple[tuple[int, ...], ...],
    slalom: Slalom,
    cap: int = DEFAULT_VERIFY_CAP,
) -> VerifyResult:
    """Exhaustively check that every slalom element lands in the
    translated nullset; on failure report the lexicographically least
    escaping element (as per-block enumeration indices).

    Product mode checks blockwise membership in the translated kept sets.
    p-adic mode adds the offset with full carry propagation mod p^(top
    cut) and additionally confirms, per element and block, the carry
    dichotomy: the resulting block equals either target + offset or
    target + offset + carry_unit in the block group.
    """
    plan = spec.plan
    slalom.check_domains(plan)
    total = slalom.element_count()
    if total > cap:
        raise CapExceeded(f"{total} slalom elements exceed the verification cap {cap}")
    if len(translate) != plan.depth:
        raise PreconditionViolated(f"translate has {len(translate)} blocks, plan has {plan.depth}")

    if plan.mode == "product":
        ok_flags = []
        for n, values in enumerate(slalom.sets):
            group = spec.plan.block_group(n)
            shifted = {group.add(translate[n], group.element_at(i)) for i in spec.kept[n]}
            ok_flags.append([group.element_at(v) in shifted for v in values])
        passed = sum(map(all, itertools.product(*ok_flags)))
        if passed == total:
            return VerifyResult(ok=True, witness=None, checked_count=total)
        for combo in itertools.product(*(zip(s, flags) for s, flags in zip(slalom.sets, ok_flags))):
            if not all(flag for _, flag in combo):
                witness = tuple(v for v, _ in combo)
                return VerifyResult(ok=False, witness=witness, checked_count=total)
        raise VerificationFailed("membership count disagrees with the element scan")

    p = plan.p
    cuts = plan.boundaries
    modulus = p ** cuts[-1]
    block_sizes = plan.block_orders
    kept_sets = [frozenset(ind) for ind in spec.kept]
    offset_vals = [plan.block_group(n).value(block) for n, block in enumerate(translate)]
    offset_total = sum(v * p ** cuts[n] for n, v in enumerate(offset_vals))
    no_carry = carried = 0
    checked = 0
    for combo in itertools.product(*slalom.sets):
        checked += 1
        element_total = sum(v * p ** cuts[n] for n, v in enumerate(combo))
        shifted = (element_total + offset_total) % modulus
        inside = True
        for n in range(plan.depth):
            block_val = (shifted // p ** cuts[n]) % block_sizes[n]
            plain = (combo[n] + offset_vals[n]) % block_sizes[n]
            if block_val == plain:
                no_carry += 1
            elif block_val == (plain + 1) % block_sizes[n]:
                carried += 1
            else:
                # carries into a block are 0 or 1; anything else is broken arithmetic
                raise VerificationFailed(
                    f"carry dichotomy violated at element {combo}, block {n}"
                )
            if block_val not in kept_sets[n]:
                inside = False
        if not inside:
            return VerifyResult(
                ok=False, witness=combo, checked_count=checked, carry_cases=(no_carry, carried)
            )
    return VerifyResult(ok=True, witness=None, checked_count=checked, carry_cases=(no_carry, carried))


def random_slalom(
    plan: BlockPlan,
    width: WidthSpec,
    seed: int,
    sizes: Optional[Sequence[int]] = None,
) -> Slalom:
    """Deterministically sample a slalom over the plan's blocks.

    Each set is drawn without replacement from its block domain via an
    explicit partial Fisher-Yates on the seeded generator, so identical
    seeds give identical slaloms on any platform.  Default set sizes are
    min(width(n), block order).
    """
    f = width_fn(width)
    rng = random.Random(seed)
    sets = []
    for n, size in enumerate(plan.block_orders):
        k = min(f(n), size) if sizes is None else sizes[n]
        if not 1 <= k <= min(f(n), size):
            raise PreconditionViolated(f"requested size {k} invalid for block {n}")
        sets.append(tuple(sorted(_sample_without_replacement(rng, size, k))))
    return Slalom(width=width, sets=tuple(sets))


def _sample_without_replacement(rng: random.Random, population: int, k: int) -> list[int]:
    # partial Fisher-Yates over a virtual range(population)
    swapped: dict[int, int] = {}
    chosen = []
    for i in range(k):
        j = rng.randrange(i, population)
        vi = swapped.get(i, i)
        vj = swapped.get(j, j)
        swapped[i], swapped[j] = vj, vi
        chosen.append(vj)
    return chosen


def cube_cover_check(
    family: Sequence[Slalom],
    plan: BlockPlan,
    cap: int = DEFAULT_VERIFY_CAP,
) -> tuple[bool, Optional[tuple[int, ...]]]:
    """Does the union of the slaloms exhaust the truncated cube?

    Scans the whole cube in canonical order, so the returned witness is
    the least uncovered point.
    """
    cube = prod(plan.block_orders)
    if cube > cap:
        raise CapExceeded(f"cube of {cube} points exceeds the cap {cap}")
    member_sets = []
    for slalom in family:
        slalom.check_domains(plan)
        member_sets.append([frozenset(s) for s in slalom.sets])
    for point in itertools.product(*(range(size) for size in plan.block_orders)):
        covered = any(
            all(v in sets[n] for n, v in enumerate(point)) for sets in member_sets
        )
        if not covered:
            return False, point
    return True, None
