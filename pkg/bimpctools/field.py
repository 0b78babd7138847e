"""Arithmetic in the prime field F_q.

Every masked quantity of the protocol (additive shares, pads, OT labels and
key sums) is a residue modulo the session prime q. Values are plain Python
integers wrapped in frozen dataclasses, so they are safe to share between
threads and processes.
"""
from dataclasses import dataclass
import functools
import math
from typing import (Iterable, Iterator, List, Protocol, Sequence, Tuple, Union,
                    overload)

from bimpctools.lib import InvalidInput, ConfigurationError, SetupError, MAX_MODULUS


class BlockSource(Protocol):
    """Anything yielding unbiased random bit blocks."""
    def next_block(self, bits: int) -> int:
        ...


@functools.lru_cache(maxsize=None)
def is_prime(number: int) -> bool:
    if number < 2:
        return False
    if number % 2 == 0:
        return number == 2
    for divisor in range(3, math.isqrt(number) + 1, 2):
        if number % divisor == 0:
            return False
    return True


def smallest_prime_above(bound: int) -> int:
    """Returns the smallest prime strictly greater than bound."""
    if bound < 2:
        raise InvalidInput(f'bound must be at least 2, got {bound}')
    candidate = bound + 1
    while not is_prime(candidate):
        candidate += 1
    return candidate


@functools.lru_cache(maxsize=None)
def check_modulus(modulus: int) -> int:
    """Validates a session prime: odd prime below MAX_MODULUS."""
    if not is_prime(modulus):
        raise SetupError(f'{modulus} is not prime')
    if modulus == 2:
        raise SetupError('the modulus must be odd so that 2 is invertible')
    if modulus >= MAX_MODULUS:
        raise SetupError(f'{modulus} is too large, the modulus must be '
                         f'below 2^31')
    return modulus


def element_width(modulus: int) -> int:
    """Bytes used to serialize one element of F_modulus."""
    return (modulus.bit_length() + 7) // 8


@dataclass(frozen=True)
class FieldElement:
    value: int
    modulus: int

    def __post_init__(self) -> None:
        check_modulus(self.modulus)
        if not 0 <= self.value < self.modulus:
            raise InvalidInput(f'{self.value} is not a residue modulo '
                               f'{self.modulus}')

    @classmethod
    def embed(cls, value: int, modulus: int) -> 'FieldElement':
        """Reduces an arbitrary integer into the field."""
        return cls(value % modulus, modulus)

    @classmethod
    def zero(cls, modulus: int) -> 'FieldElement':
        return cls(0, modulus)

    def _coerce(self, other: Union['FieldElement', int]) -> 'FieldElement':
        if isinstance(other, int):
            return FieldElement.embed(other, self.modulus)
        return other

    def __add__(self, other: Union['FieldElement', int]) -> 'FieldElement':
        return mod_add(self, self._coerce(other))

    def __radd__(self, other: int) -> 'FieldElement':
        return mod_add(self._coerce(other), self)

    def __sub__(self, other: Union['FieldElement', int]) -> 'FieldElement':
        return mod_sub(self, self._coerce(other))

    def __rsub__(self, other: int) -> 'FieldElement':
        return mod_sub(self._coerce(other), self)

    def __mul__(self, other: Union['FieldElement', int]) -> 'FieldElement':
        return mod_mul(self, self._coerce(other))

    def __rmul__(self, other: int) -> 'FieldElement':
        return mod_mul(self._coerce(other), self)

    def __neg__(self) -> 'FieldElement':
        return FieldElement((-self.value) % self.modulus, self.modulus)

    def inverse(self) -> 'FieldElement':
        return mod_inv(self)

    def __int__(self) -> int:
        return self.value

    def __str__(self) -> str:
        return str(self.value)

    def to_bytes(self) -> bytes:
        return encode_elements([self.value], self.modulus)

    @classmethod
    def from_bytes(cls, data: bytes, modulus: int) -> 'FieldElement':
        values = decode_elements(data, modulus)
        if len(values) != 1:
            raise InvalidInput(f'expected one field element, got {len(values)}')
        return cls(values[0], modulus)


def _common_modulus(x: FieldElement, y: FieldElement) -> int:
    if x.modulus != y.modulus:
        raise ConfigurationError(f'modulus mismatch: {x.modulus} and {y.modulus}')
    return x.modulus


def mod_add(x: FieldElement, y: FieldElement) -> FieldElement:
    q = _common_modulus(x, y)
    return FieldElement((x.value + y.value) % q, q)


def mod_sub(x: FieldElement, y: FieldElement) -> FieldElement:
    q = _common_modulus(x, y)
    return FieldElement((x.value - y.value) % q, q)


def mod_mul(x: FieldElement, y: FieldElement) -> FieldElement:
    q = _common_modulus(x, y)
    return FieldElement((x.value * y.value) % q, q)


def mod_inv(x: FieldElement) -> FieldElement:
    if x.value == 0:
        raise ZeroDivisionError(f'0 has no inverse modulo {x.modulus}')
    return FieldElement(pow(x.value, -1, x.modulus), x.modulus)


def encode_elements(values: Iterable[int], modulus: int) -> bytes:
    """Fixed-width little-endian encoding, width element_width(modulus)."""
    width = element_width(modulus)
    return b''.join(value.to_bytes(width, 'little') for value in values)


def decode_elements(data: bytes, modulus: int) -> Tuple[int, ...]:
    width = element_width(modulus)
    if len(data) % width:
        raise InvalidInput(f'{len(data)} bytes is not a whole number of '
                           f'{width}-byte field elements')
    values = tuple(int.from_bytes(data[start:start + width], 'little')
                   for start in range(0, len(data), width))
    for value in values:
        if value >= modulus:
            raise InvalidInput(f'{value} is not a residue modulo {modulus}')
    return values


@dataclass(frozen=True)
class FieldVector:
    """An immutable vector over F_q. Elements are stored as residues."""
    values: Tuple[int, ...]
    modulus: int

    def __post_init__(self) -> None:
        check_modulus(self.modulus)
        object.__setattr__(self, 'values', tuple(self.values))
        for value in self.values:
            if not 0 <= value < self.modulus:
                raise InvalidInput(f'{value} is not a residue modulo '
                                   f'{self.modulus}')

    @classmethod
    def embed(cls, values: Iterable[int], modulus: int) -> 'FieldVector':
        return cls(tuple(value % modulus for value in values), modulus)

    @classmethod
    def zeros(cls, length: int, modulus: int) -> 'FieldVector':
        return cls((0,) * length, modulus)

    @classmethod
    def from_elements(cls, elements: Iterable[FieldElement],
                      modulus: int) -> 'FieldVector':
        values = []
        for element in elements:
            if element.modulus != modulus:
                raise ConfigurationError(f'modulus mismatch: {element.modulus} '
                                         f'and {modulus}')
            values.append(element.value)
        return cls(tuple(values), modulus)

    @property
    def elements(self) -> Tuple[FieldElement, ...]:
        return tuple(FieldElement(value, self.modulus) for value in self.values)

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self) -> Iterator[FieldElement]:
        return iter(self.elements)

    @overload
    def __getitem__(self, index: int) -> FieldElement: ...
    @overload
    def __getitem__(self, index: slice) -> 'FieldVector': ...
    def __getitem__(self, index):  # type: ignore
        if isinstance(index, slice):
            return FieldVector(self.values[index], self.modulus)
        return FieldElement(self.values[index], self.modulus)

    def _check_compatible(self, other: 'FieldVector') -> None:
        if other.modulus != self.modulus:
            raise ConfigurationError(f'modulus mismatch: {self.modulus} and '
                                     f'{other.modulus}')
        if len(other) != len(self):
            raise InvalidInput(f'length mismatch: {len(self)} and {len(other)}')

    def __add__(self, other: 'FieldVector') -> 'FieldVector':
        self._check_compatible(other)
        q = self.modulus
        return FieldVector(tuple((x + y) % q
                                 for x, y in zip(self.values, other.values)), q)

    def __sub__(self, other: 'FieldVector') -> 'FieldVector':
        self._check_compatible(other)
        q = self.modulus
        return FieldVector(tuple((x - y) % q
                                 for x, y in zip(self.values, other.values)), q)

    def concat(self, other: 'FieldVector') -> 'FieldVector':
        if other.modulus != self.modulus:
            raise ConfigurationError(f'modulus mismatch: {self.modulus} and '
                                     f'{other.modulus}')
        return FieldVector(self.values + other.values, self.modulus)

    def total(self) -> FieldElement:
        """Sum of all elements in F_q."""
        return FieldElement(sum(self.values) % self.modulus, self.modulus)

    def to_bytes(self) -> bytes:
        return encode_elements(self.values, self.modulus)

    @classmethod
    def from_bytes(cls, data: bytes, modulus: int) -> 'FieldVector':
        return cls(decode_elements(data, modulus), modulus)


def sample_uniform(source: BlockSource, modulus: int) -> FieldElement:
    """Draws a uniform element of F_modulus by rejection sampling on
    ceil(log2 modulus)-bit blocks."""
    width = (modulus - 1).bit_length()
    while True:
        block = source.next_block(width)
        if block < modulus:
            return FieldElement(block, modulus)


# Linear algebra over F_q, used to compare view distributions exactly.

Row = Tuple[int, ...]


def row_reduce(rows: Sequence[Sequence[int]], modulus: int) -> List[Row]:
    """Returns the nonzero rows of the reduced row echelon form of rows,
    a basis of their span."""
    matrix = [[value % modulus for value in row] for row in rows]
    if not matrix:
        return []
    width = len(matrix[0])
    rank = 0
    for column in range(width):
        pivot = next((r for r in range(rank, len(matrix)) if matrix[r][column]),
                     None)
        if pivot is None:
            continue
        matrix[rank], matrix[pivot] = matrix[pivot], matrix[rank]
        scale = pow(matrix[rank][column], -1, modulus)
        matrix[rank] = [value * scale % modulus for value in matrix[rank]]
        for r in range(len(matrix)):
            factor = matrix[r][column]
            if r != rank and factor:
                matrix[r] = [(value - factor * pivot_value) % modulus
                             for value, pivot_value in zip(matrix[r], matrix[rank])]
        rank += 1
        if rank == len(matrix):
            break
    return [tuple(row) for row in matrix[:rank]]


def reduce_against(vector: Sequence[int], basis: Sequence[Row],
                   modulus: int) -> Row:
    """Canonical representative of vector modulo the span of an RREF basis."""
    reduced = [value % modulus for value in vector]
    for row in basis:
        pivot = next(i for i, value in enumerate(row) if value)
        factor = reduced[pivot]
        if factor:
            reduced = [(value - factor * basis_value) % modulus
                       for value, basis_value in zip(reduced, row)]
    return tuple(reduced)


def span_intersection(first: Sequence[Row], second: Sequence[Row],
                      modulus: int) -> List[Row]:
    """Basis of the intersection of two spans (Zassenhaus)."""
    if not first or not second:
        return []
    width = len(first[0])
    block = ([tuple(u) + tuple(u) for u in first]
             + [tuple(w) + (0,) * width for w in second])
    echelon = row_reduce(block, modulus)
    return row_reduce([row[width:] for row in echelon if not any(row[:width])],
                      modulus)


def quotient_basis(span: Sequence[Row], subspace: Sequence[Row],
                   modulus: int) -> List[Row]:
    """Vectors completing a basis of subspace to one of span, given
    subspace ⊆ span."""
    reduced = [reduce_against(row, subspace, modulus) for row in span]
    return row_reduce([row for row in reduced if any(row)], modulus)
