"""Symbolic layer: descriptors for locally compact abelian groups, the
character-group rewrite, the subgroup trichotomy, divisible-chain search,
and the reduction pipeline that decides coverability by nullset
translates.

The descriptor grammar is a deliberately decidable fragment: the
infinitary constructors repeat a finite list of finite groups cyclically,
because a terminating classifier needs a finite description.  Groups
outside the grammar are reported as unclassifiable, never guessed at.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional

from .errors import (
    NotDiscrete,
    NotFiniteTorsion,
    NotInfinite,
    PreconditionViolated,
    SchemaError,
)
from .groups import DEFAULT_ENUM_CAP, FiniteAbelianGroup, GroupElement, is_prime


# ---------------------------------------------------------------------------
# descriptor grammar


class Descriptor:
    """Base class; every constructor below is an immutable node."""

    __slots__ = ()


@dataclass(frozen=True)
class Int(Descriptor):
    """The integers, discrete."""


@dataclass(frozen=True)
class Reals(Descriptor):
    """The real line."""


@dataclass(frozen=True)
class Torus(Descriptor):
    """The circle group."""


@dataclass(frozen=True)
class Cyclic(Descriptor):
    order: int

    def __post_init__(self) -> None:
        if self.order < 2:
            raise PreconditionViolated(f"cyclic order must be >= 2, got {self.order}")


@dataclass(frozen=True)
class Quasicyclic(Descriptor):
    """Union of the cyclic p-power groups inside the rationals mod 1; discrete."""

    p: int

    def __post_init__(self) -> None:
        if not is_prime(self.p):
            raise PreconditionViolated(f"p = {self.p} is not prime")


@dataclass(frozen=True)
class Padic(Descriptor):
    """The compact group of p-adic integers."""

    p: int

    def __post_init__(self) -> None:
        if not is_prime(self.p):
            raise PreconditionViolated(f"p = {self.p} is not prime")


@dataclass(frozen=True)
class FiniteSum(Descriptor):
    """Finite direct sum of the parts."""

    parts: tuple[Descriptor, ...]

    def __post_init__(self) -> None:
        if not self.parts:
            raise PreconditionViolated("FiniteSum needs at least one part")


@dataclass(frozen=True)
class SumOmega(Descriptor):
    """Countable direct sum repeating the given finite groups cyclically;
    discrete."""

    parts: tuple[Descriptor, ...]

    def __post_init__(self) -> None:
        _check_omega_parts(self.parts, "SumOmega")


@dataclass(frozen=True)
class ProdOmega(Descriptor):
    """Countable direct product repeating the given finite groups
    cyclically; compact."""

    parts: tuple[Descriptor, ...]

    def __post_init__(self) -> None:
        _check_omega_parts(self.parts, "ProdOmega")


def _check_omega_parts(parts: tuple[Descriptor, ...], kind: str) -> None:
    if not parts:
        raise PreconditionViolated(f"{kind} needs at least one part")
    for part in parts:
        if not is_finite(part):
            raise PreconditionViolated(f"{kind} parts must denote finite groups, got {part!r}")


def r_power(n: int) -> Descriptor:
    """n-dimensional real space as a descriptor, n >= 1."""
    if n < 1:
        raise PreconditionViolated(f"r_power needs n >= 1, got {n}")
    return Reals() if n == 1 else FiniteSum((Reals(),) * n)


def is_finite(d: Descriptor) -> bool:
    match d:
        case Cyclic():
            return True
        case FiniteSum(parts):
            return all(is_finite(p) for p in parts)
        case _:
            return False


def order_of(d: Descriptor) -> Optional[int]:
    """Group order for finite descriptors, None for infinite ones."""
    match d:
        case Cyclic(order):
            return order
        case FiniteSum(parts):
            total = 1
            for p in parts:
                o = order_of(p)
                if o is None:
                    return None
                total *= o
            return total
        case _:
            return None


def is_discrete(d: Descriptor) -> bool:
    match d:
        case Int() | Cyclic() | Quasicyclic() | SumOmega():
            return True
        case FiniteSum(parts):
            return all(is_discrete(p) for p in parts)
        case _:
            return False


def is_compact(d: Descriptor) -> bool:
    match d:
        case Torus() | Cyclic() | Padic() | ProdOmega():
            return True
        case FiniteSum(parts):
            return all(is_compact(p) for p in parts)
        case _:
            return False


def syntactic_size(d: Descriptor) -> int:
    match d:
        case FiniteSum(parts) | SumOmega(parts) | ProdOmega(parts):
            return 1 + sum(syntactic_size(p) for p in parts)
        case _:
            return 1


def descriptor_to_json(d: Descriptor) -> dict:
    match d:
        case Int():
            return {"type": "Int"}
        case Reals():
            return {"type": "Reals"}
        case Torus():
            return {"type": "Torus"}
        case Cyclic(order):
            return {"type": "Cyclic", "m": order}
        case Quasicyclic(p):
            return {"type": "Quasicyclic", "p": p}
        case Padic(p):
            return {"type": "Padic", "p": p}
        case FiniteSum(parts):
            return {"type": "FiniteSum", "parts": [descriptor_to_json(p) for p in parts]}
        case SumOmega(parts):
            return {"type": "SumOmega", "parts": [descriptor_to_json(p) for p in parts]}
        case ProdOmega(parts):
            return {"type": "ProdOmega", "parts": [descriptor_to_json(p) for p in parts]}
    raise SchemaError(f"not a descriptor: {d!r}")


def descriptor_from_json(obj: object) -> Descriptor:
    if not isinstance(obj, dict) or "type" not in obj:
        raise SchemaError("descriptor must be an object with a 'type' field")
    kind = obj["type"]
    try:
        if kind == "Int":
            return Int()
        if kind == "Reals":
            return Reals()
        if kind == "Torus":
            return Torus()
        if kind == "Cyclic":
            return Cyclic(int(obj["m"]))
        if kind == "Quasicyclic":
            return Quasicyclic(int(obj["p"]))
        if kind == "Padic":
            return Padic(int(obj["p"]))
        if kind in ("FiniteSum", "SumOmega", "ProdOmega"):
            parts = tuple(descriptor_from_json(p) for p in obj["parts"])
            return {"FiniteSum": FiniteSum, "SumOmega": SumOmega, "ProdOmega": ProdOmega}[kind](parts)
    except KeyError as missing:
        raise SchemaError(f"descriptor {kind} is missing field {missing}") from None
    except (TypeError, ValueError):
        raise SchemaError(f"descriptor {kind} has a malformed field") from None
    raise SchemaError(f"unknown descriptor type {kind!r}")


# ---------------------------------------------------------------------------
# primary decomposition and the trichotomy


def _factor(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def primary_decomposition(d: Descriptor) -> list[tuple[int, Descriptor]]:
    """Split a finite descriptor into its prime-power components, one
    entry per prime in increasing order.

    Each cyclic factor of order m contributes, via the Chinese remainder
    splitting, one cyclic factor of order p^k per prime power p^k in m.
    """
    if not is_finite(d):
        raise NotFiniteTorsion(f"{d!r} does not denote a finite group")
    per_prime: dict[int, list[int]] = {}
    for m in _cyclic_orders(d):
        for p, k in sorted(_factor(m).items()):
            per_prime.setdefault(p, []).append(p**k)
    result = []
    for p in sorted(per_prime):
        factors = tuple(Cyclic(q) for q in per_prime[p])
        result.append((p, factors[0] if len(factors) == 1 else FiniteSum(factors)))
    return result


def _cyclic_orders(d: Descriptor) -> list[int]:
    match d:
        case Cyclic(order):
            return [order]
        case FiniteSum(parts):
            out: list[int] = []
            for p in parts:
                out.extend(_cyclic_orders(p))
            return out
    raise NotFiniteTorsion(f"{d!r} does not denote a finite group")


@dataclass(frozen=True)
class TrichotomyVerdict:
    """Which unavoidable subgroup an infinite discrete group contains.

    case 1: an infinite-order element (witness Int); case 2: an infinite
    direct sum of nontrivial finite groups (witness the SumOmega node);
    case 3: a quasicyclic group (witness the prime).  case None means the
    descriptor's shape gives no verdict.
    """

    case: Optional[int]
    witness: object

    def to_json(self) -> dict:
        if self.case == 3:
            witness = {"p": self.witness}
        elif self.case is None:
            witness = None
        else:
            witness = descriptor_to_json(self.witness)
        return {"case": self.case, "witness": witness}


def classify_subgroup(d: Descriptor) -> TrichotomyVerdict:
    """Locate one of the three unavoidable subgroups in an infinite
    discrete descriptor, trying the cases in order: an Int summand, then
    a SumOmega summand, then a Quasicyclic one.

    Within this grammar "infinitely many primes with nontrivial part"
    and "an infinite elementary p-summand" are expressible only through
    SumOmega, so case 2 reduces to SumOmega presence.
    """
    if not is_discrete(d):
        raise NotDiscrete(f"{d!r} does not denote a discrete group")
    if order_of(d) is not None:
        raise NotInfinite(f"{d!r} denotes a finite group")
    found_int = _scan(d, Int)
    if found_int is not None:
        return TrichotomyVerdict(case=1, witness=found_int)
    found_sum = _scan(d, SumOmega)
    if found_sum is not None:
        return TrichotomyVerdict(case=2, witness=found_sum)
    found_quasi = _scan(d, Quasicyclic)
    if found_quasi is not None:
        return TrichotomyVerdict(case=3, witness=found_quasi.p)
    return TrichotomyVerdict(case=None, witness=None)


def _scan(d: Descriptor, kind: type) -> Optional[Descriptor]:
    # first matching node in preorder; FiniteSum is the only transparent
    # constructor (omega parts are finite, so nothing relevant hides there)
    if isinstance(d, kind):
        return d
    if isinstance(d, FiniteSum):
        for part in d.parts:
            found = _scan(part, kind)
            if found is not None:
                return found
    return None


def divisible_chain(
    G: FiniteAbelianGroup, p: int, depth: int, cap: int = DEFAULT_ENUM_CAP
) -> Optional[tuple[GroupElement, ...]]:
    """Lexicographically least chain (g_0, ..., g_depth) with g_0 nonzero
    and p * g_(i+1) = g_i, or None when no chain that deep exists.

    Searches the predecessor structure of multiplication by p, canonical
    order first, memoizing dead (element, remaining-length) pairs.
    """
    if depth < 0:
        raise PreconditionViolated(f"depth must be >= 0, got {depth}")
    if not is_prime(p):
        raise PreconditionViolated(f"p = {p} is not prime")
    elements = list(G.elements(cap))
    preimages: dict[GroupElement, list[GroupElement]] = {}
    for g in elements:
        preimages.setdefault(G.scalar_mul(p, g), []).append(g)
    dead: set[tuple[GroupElement, int]] = set()

    def reachable(g: GroupElement, remaining: int) -> bool:
        if remaining == 0:
            return True
        if (g, remaining) in dead:
            return False
        for h in preimages.get(g, ()):
            if reachable(h, remaining - 1):
                return True
        dead.add((g, remaining))
        return False

    zero = G.zero()
    for start in elements:
        if start == zero or not reachable(start, depth):
            continue
        chain = [start]
        for remaining in range(depth - 1, -1, -1):
            chain.append(next(h for h in preimages.get(chain[-1], ()) if reachable(h, remaining)))
        return tuple(chain)
    return None


# ---------------------------------------------------------------------------
# duality and the reduction pipeline


def dual(d: Descriptor) -> Descriptor:
    """Character-group rewrite: integers and circle swap, reals and finite
    cyclic groups are self-dual, quasicyclic and p-adic swap, and the
    sum/product constructors swap componentwise.  An involution on the
    whole grammar by construction."""
    match d:
        case Int():
            return Torus()
        case Torus():
            return Int()
        case Reals():
            return Reals()
        case Cyclic(order):
            return Cyclic(order)
        case Quasicyclic(p):
            return Padic(p)
        case Padic(p):
            return Quasicyclic(p)
        case FiniteSum(parts):
            return FiniteSum(tuple(dual(p) for p in parts))
        case SumOmega(parts):
            return ProdOmega(tuple(dual(p) for p in parts))
        case ProdOmega(parts):
            return SumOmega(tuple(dual(p) for p in parts))
    raise SchemaError(f"not a descriptor: {d!r}")


RULES: dict[str, str] = {
    "flatten-sum": "rewrite nested finite sums into one flat sum of the same group",
    "discrete-no-nullset": "a discrete group's only nullset is empty, so no translate cover exists",
    "open-subgroup": "pass to the open subgroup spanned by the non-discrete summands; "
    "its index is recorded as a side condition, never evaluated",
    "real-factor": "a real-line factor beside a compact part is coverable: "
    "combine the compact part, a real-line nullset, and a unit cube",
    "dualize": "the group is compact, so its character group is discrete and "
    "factors of the group correspond to subgroups of the dual",
    "subgroup-trichotomy": "an infinite discrete abelian group contains the integers, "
    "an infinite sum of nontrivial finite groups, or a quasicyclic group",
    "dualize-witness": "the located subgroup of the dual corresponds to a factor of "
    "the original group; a coverable factor makes the whole group coverable",
    "terminal-circle": "the circle group is coverable",
    "terminal-finite-product": "a countable product of nontrivial finite groups is coverable",
    "terminal-padic": "the p-adic integers are coverable",
    "no-applicable-rule": "no registered rule matches; reported, never guessed",
}

SIDE_CONDITION_INDEX = "open-subgroup-index-bounded"

VERDICT_NICE = "nice"
VERDICT_DISCRETE = "not-nice:discrete"
VERDICT_LARGE_INDEX = "not-nice:large-index"
VERDICT_UNRESOLVED = "unresolved"


@dataclass(frozen=True)
class TraceStep:
    rule: str
    before: Descriptor
    after: Optional[Descriptor]

    def __post_init__(self) -> None:
        if self.rule not in RULES:
            raise PreconditionViolated(f"unregistered rule {self.rule!r}")

    def to_json(self) -> dict:
        return {
            "rule": self.rule,
            "before": descriptor_to_json(self.before),
            "after": None if self.after is None else descriptor_to_json(self.after),
        }


@dataclass(frozen=True)
class PipelineResult:
    verdict: str
    steps: tuple[TraceStep, ...]
    side_conditions: tuple[str, ...]

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "trace": [s.to_json() for s in self.steps],
            "side_conditions": list(self.side_conditions),
        }


def _flatten(d: Descriptor) -> Descriptor:
    if not isinstance(d, FiniteSum):
        return d
    parts: list[Descriptor] = []
    for part in d.parts:
        flat = _flatten(part)
        if isinstance(flat, FiniteSum):
            parts.extend(flat.parts)
        else:
            parts.append(flat)
    return parts[0] if len(parts) == 1 else FiniteSum(tuple(parts))


def _terminal_rule(d: Descriptor) -> Optional[str]:
    match d:
        case Torus():
            return "terminal-circle"
        case ProdOmega():
            return "terminal-finite-product"
        case Padic():
            return "terminal-padic"
    return None


def niceness_pipeline(d: Descriptor) -> PipelineResult:
    """Decide coverability-by-nullset-translates for a descriptor, one
    registered rule at a time.

    Order of attack: discrete groups fail outright; discrete summands are
    shed into an open subgroup; a real-line factor settles the rest of
    the sum; what remains is compact, so either it is one of the three
    terminal shapes or it is dualized, the trichotomy picks a subgroup of
    the dual, and that subgroup's dual is the coverable factor.  Every
    "nice" verdict is conditional on the recorded index side condition.
    """
    steps: list[TraceStep] = []
    current = d

    flat = _flatten(current)
    if flat != current:
        steps.append(TraceStep("flatten-sum", current, flat))
        current = flat

    if is_discrete(current):
        steps.append(TraceStep("discrete-no-nullset", current, None))
        return PipelineResult(VERDICT_DISCRETE, tuple(steps), ())

    if isinstance(current, FiniteSum):
        shed = tuple(p for p in current.parts if is_discrete(p) and order_of(p) is None)
        if shed:
            kept = tuple(p for p in current.parts if not (is_discrete(p) and order_of(p) is None))
            subgroup = kept[0] if len(kept) == 1 else FiniteSum(kept)
            steps.append(TraceStep("open-subgroup", current, subgroup))
            current = subgroup

    has_real = current == Reals() or (
        isinstance(current, FiniteSum) and any(p == Reals() for p in current.parts)
    )
    if has_real:
        steps.append(TraceStep("real-factor", current, None))
        return PipelineResult(VERDICT_NICE, tuple(steps), (SIDE_CONDITION_INDEX,))

    if not is_compact(current):
        steps.append(TraceStep("no-applicable-rule", current, None))
        return PipelineResult(VERDICT_UNRESOLVED, tuple(steps), ())

    terminal = _terminal_rule(current)
    if terminal is not None:
        steps.append(TraceStep(terminal, current, current))
        return PipelineResult(VERDICT_NICE, tuple(steps), (SIDE_CONDITION_INDEX,))

    dualized = dual(current)
    steps.append(TraceStep("dualize", current, dualized))
    verdict = classify_subgroup(dualized)
    if verdict.case is None:
        steps.append(TraceStep("no-applicable-rule", dualized, None))
        return PipelineResult(VERDICT_UNRESOLVED, tuple(steps), ())
    witness = Quasicyclic(verdict.witness) if verdict.case == 3 else verdict.witness
    steps.append(TraceStep("subgroup-trichotomy", dualized, witness))
    factor = dual(witness)
    steps.append(TraceStep("dualize-witness", witness, factor))
    terminal = _terminal_rule(factor)
    if terminal is None:
        steps.append(TraceStep("no-applicable-rule", factor, None))
        return PipelineResult(VERDICT_UNRESOLVED, tuple(steps), ())
    steps.append(TraceStep(terminal, factor, factor))
    return PipelineResult(VERDICT_NICE, tuple(steps), (SIDE_CONDITION_INDEX,))


# ---------------------------------------------------------------------------
# exhaustive descriptor enumeration (used by the involution checks)


def enumerate_descriptors(
    max_size: int, primes: tuple[int, ...] = (2, 3), orders: tuple[int, ...] = (2, 3)
) -> Iterator[Descriptor]:
    """All descriptors of syntactic size <= max_size over a finite palette
    of atoms, compounds included; sizes count nodes."""
    for size in range(1, max_size + 1):
        yield from _descriptors_of_size(size, primes, orders)


def _atoms(primes: tuple[int, ...], orders: tuple[int, ...]) -> list[Descriptor]:
    out: list[Descriptor] = [Int(), Reals(), Torus()]
    out += [Cyclic(m) for m in orders]
    out += [Quasicyclic(p) for p in primes]
    out += [Padic(p) for p in primes]
    return out


def _descriptors_of_size(size, primes, orders) -> Iterator[Descriptor]:
    if size == 1:
        yield from _atoms(primes, orders)
        return
    for seq in _part_sequences(size - 1, primes, orders, finite_only=False):
        yield FiniteSum(seq)
    for seq in _part_sequences(size - 1, primes, orders, finite_only=True):
        yield SumOmega(seq)
        yield ProdOmega(seq)


def _part_sequences(total, primes, orders, finite_only) -> Iterator[tuple[Descriptor, ...]]:
    if total == 0:
        return
    for first_size in range(1, total + 1):
        for first in _descriptors_of_size(first_size, primes, orders):
            if finite_only and not is_finite(first):
                continue
            if first_size == total:
                yield (first,)
            else:
                for rest in _part_sequences(total - first_size, primes, orders, finite_only):
                    yield (first,) + rest
