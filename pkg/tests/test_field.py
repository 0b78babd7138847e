from collections import Counter
import math
import random

import pytest

from bimpctools.lib import ConfigurationError, InvalidInput, SetupError
from bimpctools.field import (FieldElement, FieldVector, check_modulus,
    decode_elements, element_width, encode_elements, is_prime, mod_add,
    mod_inv, mod_mul, mod_sub, quotient_basis, reduce_against, row_reduce,
    sample_uniform, smallest_prime_above, span_intersection)
from bimpctools.randomness import CounterModeStream, StreamLabel


class Blocks:
    def __init__(self, *blocks):
        self.blocks = list(blocks)
        self.widths = []

    def next_block(self, bits):
        self.widths.append(bits)
        return self.blocks.pop(0)


def F(value, q=7):
    return FieldElement(value, q)

def test_mod_add():
    assert mod_add(F(4), F(3)) == F(0)
    assert mod_add(F(3), F(4)) == F(0)
    assert mod_add(F(0, 13), F(9, 13)) == F(9, 13)

def test_operators():
    assert F(5) + 4 == F(2)
    assert 4 - F(5) == F(6)
    assert F(3) * F(5) == F(1)
    assert -F(3) == F(4)
    assert mod_sub(F(1), F(3)) == F(5)
    assert mod_mul(F(6), F(6)) == F(1)

def test_modulus_mismatch():
    with pytest.raises(ConfigurationError):
        mod_add(F(1, 7), F(1, 11))
    with pytest.raises(ConfigurationError):
        FieldVector((1, 2), 7) + FieldVector((1, 2), 11)

@pytest.mark.parametrize('value, q, inverse', [(2, 7, 4), (1, 7, 1), (1, 13, 1),
                                               (2, 13, 7)])
def test_mod_inv(value, q, inverse):
    assert mod_inv(F(value, q)) == F(inverse, q)
    assert F(value, q) * F(value, q).inverse() == F(1, q)

def test_mod_inv_zero():
    with pytest.raises(ZeroDivisionError):
        mod_inv(F(0))

@pytest.mark.parametrize('bound, prime', [(4, 5), (12, 13), (2, 3), (3, 5),
                                          (40, 41)])
def test_smallest_prime_above(bound, prime):
    assert smallest_prime_above(bound) == prime

def test_smallest_prime_above_small_bound():
    with pytest.raises(InvalidInput):
        smallest_prime_above(1)

def test_is_prime():
    assert [p for p in range(30) if is_prime(p)] == [2, 3, 5, 7, 11, 13, 17,
                                                      19, 23, 29]

@pytest.mark.parametrize('modulus', [4, 2, 1, 2**31 + 11])
def test_bad_modulus(modulus):
    with pytest.raises(SetupError):
        check_modulus(modulus)

def test_not_prime_message():
    with pytest.raises(SetupError, match='not prime'):
        check_modulus(9)

def test_residue_range():
    with pytest.raises(InvalidInput):
        FieldElement(7, 7)
    assert FieldElement.embed(-1, 7) == F(6)

def test_sample_uniform_rejects():
    source = Blocks(7, 2)
    assert sample_uniform(source, 5) == F(2, 5)
    assert source.widths == [3, 3]

def test_sample_uniform_zero():
    assert sample_uniform(Blocks(0), 5) == F(0, 5)

def test_sample_uniform_width():
    source = Blocks(3)
    sample_uniform(source, 13)
    assert source.widths == [4]

@pytest.mark.parametrize('q', [3, 5, 7, 11, 13])
def test_sample_uniform_visits_every_residue(q):
    width = (q - 1).bit_length()
    blocks = list(range(2 ** width))
    random.Random(q).shuffle(blocks)
    # two passes over every block: each pass accepts every residue once
    source = Blocks(*blocks, *reversed(blocks))
    first = [sample_uniform(source, q).value for _ in range(q)]
    second = [sample_uniform(source, q).value for _ in range(q)]
    assert sorted(first) == sorted(second) == list(range(q))
    assert not source.blocks or all(block >= q for block in source.blocks)

def test_sample_uniform_frequencies():
    q, draws = 13, 10**5
    stream = CounterModeStream(b'frequencies', StreamLabel('s', 'additive_mask', 0))
    seen = Counter(sample_uniform(stream, q).value for _ in range(draws))
    sigma = math.sqrt(draws * (1 / q) * (1 - 1 / q))
    assert set(seen) == set(range(q))
    assert all(abs(count - draws / q) < 5 * sigma for count in seen.values())

def test_encoding():
    assert element_width(7) == 1
    assert element_width(257) == 2
    assert element_width(2**31 - 1) == 4
    assert encode_elements([1, 256], 257) == b'\x01\x00\x00\x01'
    assert decode_elements(b'\x01\x00\x00\x01', 257) == (1, 256)
    assert F(5).to_bytes() == b'\x05'

def test_decoding_errors():
    with pytest.raises(InvalidInput):
        decode_elements(b'\x01\x00\x00', 257)
    with pytest.raises(InvalidInput):
        decode_elements(b'\x07', 7)

def test_vector():
    x = FieldVector((4, 5), 7)
    y = FieldVector((3, 6), 7)
    assert (x + y).values == (0, 4)
    assert (x - y).values == (1, 6)
    assert x.concat(FieldVector((1,), 7)).values == (4, 5, 1)
    assert x.total() == F(2)
    assert x[1] == F(5)
    assert x[:1] == FieldVector((4,), 7)
    assert list(x) == [F(4), F(5)]
    assert FieldVector.from_bytes(x.to_bytes(), 7) == x
    assert FieldVector.zeros(0, 7).total() == F(0)

def test_vector_length_mismatch():
    with pytest.raises(InvalidInput):
        FieldVector((1, 2), 7) + FieldVector((1,), 7)

def test_row_reduce():
    basis = row_reduce([(1, 2, 3), (2, 4, 6), (0, 1, 1)], 7)
    assert basis == [(1, 0, 1), (0, 1, 1)]
    assert row_reduce([(0, 0)], 5) == []
    assert row_reduce([], 5) == []

def test_reduce_against():
    basis = row_reduce([(1, 0, 1), (0, 1, 1)], 7)
    assert reduce_against((3, 4, 0), basis, 7) == (0, 0, 0)
    assert reduce_against((0, 0, 1), basis, 7) == (0, 0, 1)
    # same coset, same representative
    assert (reduce_against((1, 1, 3), basis, 7)
            == reduce_against((2, 0, 3), basis, 7))

def test_span_intersection():
    xy = row_reduce([(1, 0, 0), (0, 1, 0)], 5)
    yz = row_reduce([(0, 1, 0), (0, 0, 1)], 5)
    assert span_intersection(xy, yz, 5) == [(0, 1, 0)]
    assert span_intersection(xy, [], 5) == []
    assert span_intersection(xy, xy, 5) == xy

def test_quotient_basis():
    xy = row_reduce([(1, 0, 0), (0, 1, 0)], 5)
    y = [(0, 1, 0)]
    assert quotient_basis(xy, y, 5) == [(1, 0, 0)]
    assert quotient_basis(xy, xy, 5) == []
