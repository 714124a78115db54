"""The classical factorial-base compact nullset on [0, 1): reals whose
factorial-base digits d_n (n >= 2) all satisfy d_n <= n-2.

Everything is exact rational arithmetic.  A real in [0, 1) has one
factorial-base expansion unless it terminates, in which case it has
exactly two: the terminating one and the alternate whose last nonzero
digit is decremented and every later digit is maximal (n-1).  Membership
at finite depth inspects both and reports a tri-state verdict rather than
guessing about digits beyond the truncation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import PreconditionViolated, SchemaError

# how the explicit digits continue beyond the truncation depth
TAIL_ZERO = "zero"        # all further digits are 0 (expansion terminated)
TAIL_MAX = "max"          # all further digits are n-1 (alternate form)
TAIL_UNKNOWN = "unknown"  # expansion still had a remainder at the truncation


@dataclass(frozen=True)
class FactorialDigits:
    """Digits d_2 .. d_N of a factorial-base expansion, plus what is known
    about the digits beyond N."""

    digits: tuple[int, ...]
    tail: str = TAIL_UNKNOWN

    def __post_init__(self) -> None:
        for n, d in enumerate(self.digits, start=2):
            if not 0 <= d <= n - 1:
                raise PreconditionViolated(f"digit d_{n} = {d} outside [0, {n - 1}]")
        if self.tail not in (TAIL_ZERO, TAIL_MAX, TAIL_UNKNOWN):
            raise PreconditionViolated(f"unknown tail kind {self.tail!r}")

    @property
    def depth(self) -> int:
        return len(self.digits) + 1

    def value(self) -> Fraction:
        """Exact value of the explicit digits (the tail contributes 0)."""
        total = Fraction(0)
        factorial = 1
        for n, d in enumerate(self.digits, start=2):
            factorial *= n
            total += Fraction(d, factorial)
        return total

    def admissible_prefix(self) -> bool:
        """True when every explicit digit satisfies d_n <= n-2."""
        return all(d <= n - 2 for n, d in enumerate(self.digits, start=2))


def factorial_expand(q: Fraction, depth: int) -> tuple[FactorialDigits, FactorialDigits | None]:
    """Greedy factorial-base expansion of q in [0, 1) down to d_depth.

    Returns the greedy expansion and, when it terminates exactly within
    the depth, also the alternate expansion (last nonzero digit
    decremented, all later digits maximal).  Zero has no alternate.
    """
    if not 0 <= q < 1:
        raise PreconditionViolated(f"value {q} outside [0, 1)")
    if depth < 2:
        raise PreconditionViolated(f"depth must be >= 2, got {depth}")
    digits = []
    remainder = Fraction(q)
    for n in range(2, depth + 1):
        scaled = remainder * n
        d = int(scaled)
        digits.append(d)
        remainder = scaled - d
    greedy = FactorialDigits(
        digits=tuple(digits), tail=TAIL_ZERO if remainder == 0 else TAIL_UNKNOWN
    )
    if remainder != 0 or q == 0:
        return greedy, None
    last = max(n for n, d in enumerate(greedy.digits, start=2) if d != 0)
    alternate = tuple(
        d - 1 if n == last else (n - 1 if n > last else d)
        for n, d in enumerate(greedy.digits, start=2)
    )
    return greedy, FactorialDigits(digits=alternate, tail=TAIL_MAX)


def ek_membership(q: Fraction, depth: int) -> str:
    """Tri-state membership of q in the nullset, judged from digits up to
    the given depth: "in", "out", or "undetermined".

    "in" needs a witness expansion that terminated with every digit
    <= n-2; "out" needs every expansion to violate the digit bound
    definitely (a bad explicit digit, or the alternate's all-maximal
    tail); anything else is "undetermined".  Verdicts only refine as the
    depth grows, they never flip.
    """
    greedy, alternate = factorial_expand(q, depth)
    expansions = [greedy] + ([alternate] if alternate is not None else [])
    for e in expansions:
        if e.tail == TAIL_ZERO and e.admissible_prefix():
            return "in"
    def definitely_violates(e: FactorialDigits) -> bool:
        return not e.admissible_prefix() or e.tail == TAIL_MAX
    if all(definitely_violates(e) for e in expansions):
        return "out"
    return "undetermined"


def ek_outer_measure(depth: int) -> Fraction:
    """Total length of the depth-N cylinder cover: the product of the
    admissible-digit fractions (n-1)/n for n = 2..N, which telescopes
    to 1/N."""
    if depth < 2:
        raise PreconditionViolated(f"depth must be >= 2, got {depth}")
    total = Fraction(1)
    for n in range(2, depth + 1):
        total *= Fraction(n - 1, n)
    return total


def ek_sup(depth: int) -> Fraction:
    """Largest value with all digits maximal admissible, sum of (n-2)/n!
    for n = 2..N; increases to 3 - e."""
    if depth < 2:
        raise PreconditionViolated(f"depth must be >= 2, got {depth}")
    total = Fraction(0)
    factorial = 1
    for n in range(2, depth + 1):
        factorial *= n
        total += Fraction(n - 2, factorial)
    return total


def rational_to_json(q: Fraction) -> dict:
    return {"num": str(q.numerator), "den": str(q.denominator)}


def rational_from_json(obj: object) -> Fraction:
    if not isinstance(obj, dict) or "num" not in obj or "den" not in obj:
        raise SchemaError("rational must be an object with 'num' and 'den'")
    try:
        num = int(obj["num"])
        den = int(obj["den"])
    except (TypeError, ValueError):
        raise SchemaError(f"rational fields must be integers or decimal strings: {obj}") from None
    if den <= 0:
        raise SchemaError(f"rational denominator must be positive, got {den}")
    return Fraction(num, den)
