"""Exact arithmetic for finite abelian groups, truncated p-adic integers,
and the truncated-carry digit-block groups.

Elements are plain tuples of small nonnegative ints: residue vectors for
finite groups, digit vectors (least significant digit first) for p-adic
numbers and blocks.  Every operation is a pure function of immutable
values, so everything here can be shared freely between threads.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import prod

from .errors import CapExceeded, DimensionMismatch, PreconditionViolated

# Residue vector of a finite abelian group element.
GroupElement = tuple[int, ...]
# p-adic / block digit vector, least significant digit first.
DigitVector = tuple[int, ...]

DEFAULT_ENUM_CAP = 1 << 20

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic primality test (Miller-Rabin with fixed witnesses).

    The witness set is exact for every n < 3.3 * 10^24, far beyond any
    modulus this library enumerates.
    """
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _SMALL_PRIMES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """Direct product of cyclic groups Z_{m_0} x ... x Z_{m_k-1}.

    ``orders`` may be an invariant-factor list or any plain direct-product
    presentation; coordinates are kept as given.  The canonical element
    order is lexicographic on residue vectors with the last coordinate
    fastest, so the position of an element equals its mixed-radix value:

        FiniteAbelianGroup((2, 3)).index_of((1, 2)) == 5
    """

    orders: tuple[int, ...]

    def __post_init__(self) -> None:
        if any(not isinstance(m, int) or m < 2 for m in self.orders):
            raise PreconditionViolated(f"cyclic orders must be ints >= 2: {self.orders}")

    @property
    def order(self) -> int:
        return prod(self.orders)

    def check(self, a: GroupElement) -> None:
        if len(a) != len(self.orders):
            raise DimensionMismatch(f"element of length {len(a)} in group of rank {len(self.orders)}")
        if any(not 0 <= r < m for r, m in zip(a, self.orders)):
            raise PreconditionViolated(f"residues {a} out of range for orders {self.orders}")

    def zero(self) -> GroupElement:
        return (0,) * len(self.orders)

    def add(self, a: GroupElement, b: GroupElement) -> GroupElement:
        self.check(a)
        self.check(b)
        return tuple((x + y) % m for x, y, m in zip(a, b, self.orders))

    def neg(self, a: GroupElement) -> GroupElement:
        self.check(a)
        return tuple((-x) % m for x, m in zip(a, self.orders))

    def sub(self, a: GroupElement, b: GroupElement) -> GroupElement:
        return self.add(a, self.neg(b))

    def scalar_mul(self, k: int, a: GroupElement) -> GroupElement:
        self.check(a)
        return tuple(k * x % m for x, m in zip(a, self.orders))

    def element_at(self, index: int) -> GroupElement:
        if not 0 <= index < self.order:
            raise PreconditionViolated(f"index {index} out of range for group of order {self.order}")
        residues = []
        for m in reversed(self.orders):
            index, r = divmod(index, m)
            residues.append(r)
        return tuple(reversed(residues))

    def index_of(self, a: GroupElement) -> int:
        self.check(a)
        index = 0
        for r, m in zip(a, self.orders):
            index = index * m + r
        return index

    def elements(self, cap: int = DEFAULT_ENUM_CAP):
        """Yield all elements in canonical order.

        Raises :class:`CapExceeded` up front when the group order exceeds
        ``cap``; never silently truncates.
        """
        if self.order > cap:
            raise CapExceeded(f"group order {self.order} exceeds enumeration cap {cap}")
        yield from itertools.product(*(range(m) for m in self.orders))


@dataclass(frozen=True)
class PadicContext:
    """Truncated p-adic integers: ``length`` base-p digits, least
    significant first, with carried addition computed digit by digit.

    The value map sum(digits[k] * p^k) identifies the context with the
    integers mod p^length; the carry out of the top digit is discarded.
    """

    p: int
    length: int

    def __post_init__(self) -> None:
        if not is_prime(self.p):
            raise PreconditionViolated(f"p = {self.p} is not prime")
        if self.length < 1:
            raise PreconditionViolated(f"truncation length must be >= 1, got {self.length}")

    @property
    def modulus(self) -> int:
        return self.p**self.length

    def check(self, x: DigitVector) -> None:
        if len(x) != self.length:
            raise DimensionMismatch(f"digit vector of length {len(x)}, context expects {self.length}")
        if any(not 0 <= d < self.p for d in x):
            raise PreconditionViolated(f"digits {x} out of range for p = {self.p}")

    def zero(self) -> DigitVector:
        return (0,) * self.length

    def add(self, x: DigitVector, y: DigitVector) -> DigitVector:
        """Digitwise addition with carry propagation; the carry past the
        last digit is dropped."""
        self.check(x)
        self.check(y)
        out = []
        carry = 0
        for a, b in zip(x, y):
            carry, digit = divmod(a + b + carry, self.p)
            out.append(digit)
        return tuple(out)

    def neg(self, x: DigitVector) -> DigitVector:
        # (p-1)-complement plus one, the digitwise form of p^L - value.
        self.check(x)
        complement = tuple(self.p - 1 - d for d in x)
        one = (1,) + (0,) * (self.length - 1)
        return self.add(complement, one)

    def value(self, x: DigitVector) -> int:
        self.check(x)
        return sum(d * self.p**k for k, d in enumerate(x))

    def from_int(self, value: int) -> DigitVector:
        value %= self.modulus
        digits = []
        for _ in range(self.length):
            value, d = divmod(value, self.p)
            digits.append(d)
        return tuple(digits)


@dataclass(frozen=True)
class BlockGroup:
    """Digits on the interval [start, stop) of a p-adic integer, added
    with carries inside the block and the final carried digit forgotten.

    Isomorphic to the integers mod p^len under the value map that puts
    the least significant digit at position ``start``; the canonical
    enumeration order is by that value.
    """

    p: int
    start: int
    stop: int

    def __post_init__(self) -> None:
        if not is_prime(self.p):
            raise PreconditionViolated(f"p = {self.p} is not prime")
        if not 0 <= self.start < self.stop:
            raise PreconditionViolated(f"bad digit interval [{self.start}, {self.stop})")

    @property
    def len(self) -> int:
        return self.stop - self.start

    @property
    def order(self) -> int:
        return self.p**self.len

    def check(self, x: DigitVector) -> None:
        if len(x) != self.len:
            raise DimensionMismatch(f"digit vector of length {len(x)}, block expects {self.len}")
        if any(not 0 <= d < self.p for d in x):
            raise PreconditionViolated(f"digits {x} out of range for p = {self.p}")

    def zero(self) -> DigitVector:
        return (0,) * self.len

    def carry_unit(self) -> DigitVector:
        """The element with a single 1 in the block's lowest digit; adding
        it models a carry arriving from below the block."""
        return (1,) + (0,) * (self.len - 1)

    def add(self, x: DigitVector, y: DigitVector) -> DigitVector:
        self.check(x)
        self.check(y)
        out = []
        carry = 0
        for a, b in zip(x, y):
            carry, digit = divmod(a + b + carry, self.p)
            out.append(digit)
        # the carry out of the top digit is forgotten
        return tuple(out)

    def neg(self, x: DigitVector) -> DigitVector:
        self.check(x)
        complement = tuple(self.p - 1 - d for d in x)
        return self.add(complement, self.carry_unit())

    def sub(self, x: DigitVector, y: DigitVector) -> DigitVector:
        return self.add(x, self.neg(y))

    def value(self, x: DigitVector) -> int:
        self.check(x)
        return sum(d * self.p**k for k, d in enumerate(x))

    def element_at(self, index: int) -> DigitVector:
        if not 0 <= index < self.order:
            raise PreconditionViolated(f"value {index} out of range for block of order {self.order}")
        digits = []
        for _ in range(self.len):
            index, d = divmod(index, self.p)
            digits.append(d)
        return tuple(digits)

    def index_of(self, x: DigitVector) -> int:
        return self.value(x)

    def elements(self, cap: int = DEFAULT_ENUM_CAP):
        if self.order > cap:
            raise CapExceeded(f"block order {self.order} exceeds enumeration cap {cap}")
        for v in range(self.order):
            yield self.element_at(v)
