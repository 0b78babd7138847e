"""Dot product via modular addition (DoMA).

The AND of l binary vectors equals (s - (s mod l)) / l where s is their
integer sum, hence the dot product of two binary vectors is
sum_i ((a_i + b_i) - ((a_i + b_i) mod 2)) / 2. This module holds these
plaintext identities together with brute-force oracles used to check them.
Arithmetic here is over the integers; field reduction belongs to the protocol.
"""
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence, Tuple, overload

from bimpctools.lib import InvalidInput


@dataclass(frozen=True)
class BitVector:
    bits: Tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, 'bits', tuple(self.bits))
        for bit in self.bits:
            if bit not in (0, 1):
                raise InvalidInput(f'{bit!r} is not a bit')

    @classmethod
    def from_text(cls, text: str) -> 'BitVector':
        """Parses a string over {0, 1}, ignoring all whitespace."""
        compact = ''.join(text.split())
        if not compact:
            raise InvalidInput('empty bit vector')
        bad = sorted(set(compact) - {'0', '1'})
        if bad:
            raise InvalidInput('unexpected characters in bit vector: '
                               + ', '.join(repr(c) for c in bad))
        return cls(tuple(int(c) for c in compact))

    @classmethod
    def zeros(cls, length: int) -> 'BitVector':
        return cls((0,) * length)

    @classmethod
    def ones(cls, length: int) -> 'BitVector':
        return cls((1,) * length)

    def __len__(self) -> int:
        return len(self.bits)

    def __iter__(self) -> Iterator[int]:
        return iter(self.bits)

    @overload
    def __getitem__(self, index: int) -> int: ...
    @overload
    def __getitem__(self, index: slice) -> 'BitVector': ...
    def __getitem__(self, index):  # type: ignore
        if isinstance(index, slice):
            return BitVector(self.bits[index])
        return self.bits[index]

    def __xor__(self, other: 'BitVector') -> 'BitVector':
        check_same_length([self, other])
        return BitVector(tuple(x ^ y for x, y in zip(self.bits, other.bits)))

    def complement(self) -> 'BitVector':
        return BitVector(tuple(1 - bit for bit in self.bits))

    def weight(self) -> int:
        return sum(self.bits)

    def __str__(self) -> str:
        return ''.join(str(bit) for bit in self.bits)


def check_same_length(vectors: Sequence[BitVector]) -> int:
    lengths = {len(vector) for vector in vectors}
    if len(lengths) > 1:
        raise InvalidInput('bit vectors have different lengths: '
                           + ', '.join(str(len(v)) for v in vectors))
    return lengths.pop() if lengths else 0


@dataclass(frozen=True)
class DomaDecomposition:
    """Element-wise sum s, residue m = s mod l and conjunction d of l bit
    vectors."""
    s: Tuple[int, ...]
    m: Tuple[int, ...]
    d: BitVector


def and_via_modadd(inputs: Sequence[BitVector]) -> DomaDecomposition:
    """AND of l ≥ 2 equal-length bit vectors through regular and modular
    addition."""
    l = len(inputs)
    if l < 2:
        raise InvalidInput(f'need at least two vectors, got {l}')
    n = check_same_length(inputs)
    if n < 1:
        raise InvalidInput('bit vectors must not be empty')
    s = tuple(sum(column) for column in zip(*(vector.bits for vector in inputs)))
    m = tuple(total % l for total in s)
    d = []
    for total, residue in zip(s, m):
        quotient, remainder = divmod(total - residue, l)
        assert remainder == 0
        d.append(quotient)
    return DomaDecomposition(s, m, BitVector(tuple(d)))


def dot_via_modadd(a: BitVector, b: BitVector) -> int:
    """Binary dot product as the weight of the DoMA conjunction of a and b."""
    n = check_same_length([a, b])
    if n < 1:
        raise InvalidInput('bit vectors must not be empty')
    return and_via_modadd([a, b]).d.weight()


def brute_force_dot(a: BitVector, b: BitVector) -> int:
    check_same_length([a, b])
    return sum(x * y for x, y in zip(a.bits, b.bits))


def bitwise_and(inputs: Iterable[BitVector]) -> BitVector:
    """Reference conjunction by direct evaluation."""
    vectors = list(inputs)
    check_same_length(vectors)
    return BitVector(tuple(int(all(column))
                           for column in zip(*(v.bits for v in vectors))))
