"""Randomness provisioning for protocol sessions.

Every random value a party uses comes from a labelled stream derived from a
named seed. A seed is either private to one client ('w1', 'w2') or shared by
a pair of parties ('w1_w2', 'w1_master', 'w2_master'); parties sharing a seed
derive identical streams for identical labels. Each seed is provisioned for a
fixed set of purposes and refuses any other.

Three source kinds exist:

* SeededSource: SHA-256 in counter mode keyed by (seed, label); identical on
  every platform and run.
* EnumeratedSource: replays an explicit assignment of every raw value, used by
  the privacy audit to range over all randomness.
* CountingSource: returns zeros and records every draw, used to check the
  enumeration layout against what the parties actually consume.
"""
from dataclasses import dataclass, fields
import hashlib
import struct
from typing import (Any, Dict, FrozenSet, Iterable, List, Mapping, Sequence,
                    Tuple, Union)

from bimpctools.lib import ConfigurationError, EnumerationError, InvalidInput
from bimpctools.field import FieldVector, sample_uniform
from bimpctools.doma import BitVector

PRG_NAME = 'sha256-ctr-v1'
_PRG_DOMAIN = b'bimpc/prg/v1'
_SEED_DOMAIN = b'bimpc/seed/v1'

SEED_PURPOSES: Dict[str, Tuple[str, ...]] = {
    'w1': ('additive_mask', 'share_pad'),
    'w2': ('additive_mask', 'share_pad', 'xor_mask', 'label_mask'),
    'w1_w2': ('length_pad', 'key_blind'),
    'w1_master': ('ot_choice_mask',),
    'w2_master': ('ot_pad',),
}
PAIRWISE_SEEDS = ('w1_w2', 'w1_master', 'w2_master')
BIT_PURPOSES = frozenset({'xor_mask', 'ot_choice_mask'})

SlotKey = Tuple[str, int]


def _length_prefixed(data: bytes) -> bytes:
    return struct.pack('<H', len(data)) + data


@dataclass(frozen=True)
class StreamLabel:
    session: str
    purpose: str
    index: int

    def __post_init__(self) -> None:
        if self.index < 0:
            raise InvalidInput(f'stream index must be nonnegative, got {self.index}')

    def encode(self) -> bytes:
        return (_length_prefixed(self.session.encode())
                + _length_prefixed(self.purpose.encode())
                + struct.pack('<Q', self.index))

    @property
    def key(self) -> SlotKey:
        return (self.purpose, self.index)


class RandomStream:
    def next_block(self, bits: int) -> int:
        raise NotImplementedError

    def next_bit(self) -> int:
        return self.next_block(1)


class CounterModeStream(RandomStream):
    """Bits of SHA-256(key || counter) for counter = 0, 1, ..., consumed from
    the least significant end."""
    def __init__(self, seed: bytes, label: StreamLabel) -> None:
        self._key = hashlib.sha256(_PRG_DOMAIN + _length_prefixed(seed)
                                   + label.encode()).digest()
        self._counter = 0
        self._buffer = 0
        self._available = 0

    def _refill(self) -> None:
        block = hashlib.sha256(self._key + struct.pack('<Q', self._counter)).digest()
        self._buffer |= int.from_bytes(block, 'little') << self._available
        self._available += 256
        self._counter += 1

    def next_block(self, bits: int) -> int:
        while self._available < bits:
            self._refill()
        value = self._buffer & ((1 << bits) - 1)
        self._buffer >>= bits
        self._available -= bits
        return value


class ReplayStream(RandomStream):
    """Replays a fixed list of raw values, one per draw."""
    def __init__(self, values: Sequence[int], label: StreamLabel) -> None:
        self._values = tuple(values)
        self._position = 0
        self._label = label

    def _next(self) -> int:
        if self._position >= len(self._values):
            raise EnumerationError(f'stream {self._label.purpose}[{self._label.index}] '
                                   f'exhausted after {len(self._values)} values')
        value = self._values[self._position]
        self._position += 1
        return value

    def next_block(self, bits: int) -> int:
        value = self._next()
        if not 0 <= value < 1 << bits:
            raise EnumerationError(f'assigned value {value} does not fit in '
                                   f'{bits} bits')
        return value

    def next_bit(self) -> int:
        value = self._next()
        if value not in (0, 1):
            raise EnumerationError(f'assigned value {value} is not a bit')
        return value


class CountingStream(RandomStream):
    def __init__(self, record: List[str]) -> None:
        self._record = record

    def next_block(self, bits: int) -> int:
        self._record.append('field')
        return 0

    def next_bit(self) -> int:
        self._record.append('bit')
        return 0


class RandomnessSource:
    mode = ''

    def __init__(self, name: str, purposes: Iterable[str]) -> None:
        self.name = name
        self.purposes: FrozenSet[str] = frozenset(purposes)

    def derive_stream(self, label: StreamLabel) -> RandomStream:
        if label.purpose not in self.purposes:
            raise ConfigurationError(f'seed {self.name!r} is not provisioned for '
                                     f'purpose {label.purpose!r}')
        return self._stream(label)

    def _stream(self, label: StreamLabel) -> RandomStream:
        raise NotImplementedError

    def view_record(self) -> Tuple[Any, ...]:
        """What a party holding this source knows about it."""
        raise NotImplementedError


class SeededSource(RandomnessSource):
    mode = 'seeded'

    def __init__(self, name: str, seed: bytes,
                 purposes: Iterable[str]) -> None:
        super().__init__(name, purposes)
        self.seed = seed

    def _stream(self, label: StreamLabel) -> RandomStream:
        return CounterModeStream(self.seed, label)

    def view_record(self) -> Tuple[Any, ...]:
        return (self.name, 'seed', self.seed.hex())


class EnumeratedSource(RandomnessSource):
    mode = 'enumerated'

    def __init__(self, name: str, values: Mapping[SlotKey, Sequence[int]],
                 purposes: Iterable[str]) -> None:
        super().__init__(name, purposes)
        self.values = {key: tuple(entry) for key, entry in values.items()}

    def _stream(self, label: StreamLabel) -> RandomStream:
        if label.key not in self.values:
            raise EnumerationError(f'no values assigned to {label.purpose}'
                                   f'[{label.index}] of seed {self.name!r}')
        return ReplayStream(self.values[label.key], label)

    def view_record(self) -> Tuple[Any, ...]:
        return (self.name, 'values', tuple(sorted(self.values.items())))


class CountingSource(RandomnessSource):
    mode = 'counting'

    def __init__(self, name: str, purposes: Iterable[str]) -> None:
        super().__init__(name, purposes)
        self.draws: Dict[SlotKey, List[List[str]]] = {}

    def _stream(self, label: StreamLabel) -> RandomStream:
        record: List[str] = []
        self.draws.setdefault(label.key, []).append(record)
        return CountingStream(record)

    def view_record(self) -> Tuple[Any, ...]:
        return (self.name, 'counting')

    def consumption(self) -> Dict[SlotKey, Tuple[str, ...]]:
        """Longest draw sequence per label. Parties sharing a seed replay the
        same label, so one of them suffices."""
        return {key: tuple(max(records, key=len))
                for key, records in self.draws.items()}


def derive_stream(source: RandomnessSource, label: StreamLabel) -> RandomStream:
    return source.derive_stream(label)


def draw_elements(source: RandomnessSource, session: str, purpose: str,
                  count: int, modulus: int) -> FieldVector:
    """count field elements, one stream per element index."""
    return FieldVector(tuple(
        sample_uniform(source.derive_stream(StreamLabel(session, purpose, i)),
                       modulus).value
        for i in range(count)), modulus)


def draw_bits(source: RandomnessSource, session: str, purpose: str,
              count: int) -> BitVector:
    return BitVector(tuple(
        source.derive_stream(StreamLabel(session, purpose, i)).next_bit()
        for i in range(count)))


def _seed_bytes(seed: Union[int, str, bytes]) -> bytes:
    if isinstance(seed, bytes):
        return seed
    return str(seed).encode()


@dataclass(frozen=True)
class SeedMaterial:
    """Private and pairwise seeds of one session."""
    w1: bytes
    w2: bytes
    w1_w2: bytes
    w1_master: bytes
    w2_master: bytes

    @classmethod
    def from_seed(cls, seed: Union[int, str, bytes]) -> 'SeedMaterial':
        """Derives every named seed from one harness seed."""
        root = _seed_bytes(seed)
        return cls(**{
            name: hashlib.sha256(_SEED_DOMAIN + _length_prefixed(name.encode())
                                 + root).digest()
            for name in SEED_PURPOSES})

    def get(self, name: str) -> bytes:
        if name not in SEED_PURPOSES:
            raise InvalidInput(f'unknown seed {name!r}')
        return getattr(self, name)

    def sources(self) -> Dict[str, RandomnessSource]:
        return {field.name: SeededSource(field.name, getattr(self, field.name),
                                         SEED_PURPOSES[field.name])
                for field in fields(self)}


def enumerated_sources(assignment: Mapping[str, Mapping[SlotKey, Sequence[int]]]
                       ) -> Dict[str, RandomnessSource]:
    """Sources replaying assignment[seed name][(purpose, index)]."""
    return {name: EnumeratedSource(name, assignment.get(name, {}), purposes)
            for name, purposes in SEED_PURPOSES.items()}


def counting_sources() -> Dict[str, CountingSource]:
    return {name: CountingSource(name, purposes)
            for name, purposes in SEED_PURPOSES.items()}
