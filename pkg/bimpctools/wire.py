"""Protocol messages and their wire format.

A message is a 13-byte little-endian header followed by the payload:

    tag (1) | from (1) | to (1) | OT index (4) | payload length (4)

The OT index is 0xFFFFFFFF for messages outside an OT instance. Field
elements are fixed-width little-endian residues, bits are single bytes.
"""
from dataclasses import dataclass
import enum
import struct
from typing import Optional, Sequence, Tuple

from bimpctools.lib import InvalidInput, ProtocolError
from bimpctools.field import decode_elements, encode_elements


class PartyId(enum.IntEnum):
    W1 = 1
    W2 = 2
    MASTER = 3

    @property
    def label(self) -> str:
        return 'Master' if self is PartyId.MASTER else self.name

    @classmethod
    def parse(cls, name: str) -> 'PartyId':
        for party in cls:
            if name.lower() in (party.name.lower(), party.label.lower()):
                return party
        raise InvalidInput(f'unknown party {name!r}')


class StepTag(enum.IntEnum):
    ADDITIVE_SHARE = 1
    XOR_MASKED_INPUT = 2
    OT_MASKED_CHOICE = 3
    OT_MASKED_LABELS = 4
    OT_DELIVERY = 5
    PAD_VECTOR = 6
    KEY_SUM = 7

    @property
    def label(self) -> str:
        return ''.join(word.capitalize() for word in self.name.split('_'))

    @property
    def carries_bits(self) -> bool:
        return self in (StepTag.XOR_MASKED_INPUT, StepTag.OT_MASKED_CHOICE)

    @property
    def in_ot_instance(self) -> bool:
        return self in (StepTag.OT_MASKED_CHOICE, StepTag.OT_MASKED_LABELS,
                        StepTag.OT_DELIVERY)


NO_OT_INDEX = 0xFFFFFFFF
HEADER = struct.Struct('<BBBII')


def encode_bits(bits: Sequence[int]) -> bytes:
    return bytes(bits)


def decode_bits(data: bytes) -> Tuple[int, ...]:
    for byte in data:
        if byte > 1:
            raise InvalidInput(f'byte {byte:#04x} is not a bit')
    return tuple(data)


@dataclass(frozen=True)
class ProtocolMessage:
    sender: PartyId
    recipient: PartyId
    tag: StepTag
    payload: bytes
    ot_index: Optional[int] = None

    def __post_init__(self) -> None:
        if self.sender == self.recipient:
            raise ProtocolError(f'{self.sender.label} cannot message itself')
        if self.tag.in_ot_instance != (self.ot_index is not None):
            raise ProtocolError(f'{self.tag.label} messages '
                                + ('need' if self.tag.in_ot_instance else 'take no')
                                + ' OT index')
        if self.ot_index is not None and not 0 <= self.ot_index < NO_OT_INDEX:
            raise ProtocolError(f'OT index {self.ot_index} out of range')

    def encode(self) -> bytes:
        index = NO_OT_INDEX if self.ot_index is None else self.ot_index
        return HEADER.pack(self.tag, self.sender, self.recipient, index,
                           len(self.payload)) + self.payload

    @classmethod
    def decode(cls, data: bytes) -> 'ProtocolMessage':
        if len(data) < HEADER.size:
            raise ProtocolError(f'truncated header: {len(data)} bytes')
        tag, sender, recipient, index, length = HEADER.unpack_from(data)
        if len(data) != HEADER.size + length:
            raise ProtocolError(f'payload length {length} does not match '
                                f'{len(data) - HEADER.size} received bytes')
        try:
            return cls(PartyId(sender), PartyId(recipient), StepTag(tag),
                       data[HEADER.size:],
                       None if index == NO_OT_INDEX else index)
        except ValueError as err:
            raise ProtocolError(f'malformed header: {err}')

    @property
    def size(self) -> int:
        return HEADER.size + len(self.payload)

    def field_values(self, modulus: int) -> Tuple[int, ...]:
        if self.tag.carries_bits:
            raise ProtocolError(f'{self.tag.label} carries bits, not field elements')
        try:
            return decode_elements(self.payload, modulus)
        except InvalidInput as err:
            raise ProtocolError(f'bad {self.tag.label} payload: {err}')

    def bit_values(self) -> Tuple[int, ...]:
        if not self.tag.carries_bits:
            raise ProtocolError(f'{self.tag.label} carries field elements, not bits')
        try:
            return decode_bits(self.payload)
        except InvalidInput as err:
            raise ProtocolError(f'bad {self.tag.label} payload: {err}')

    def describe(self) -> str:
        where = '' if self.ot_index is None else f'[{self.ot_index}]'
        return (f'{self.tag.label}{where} {self.sender.label} -> '
                f'{self.recipient.label} ({len(self.payload)} bytes)')


def field_message(sender: PartyId, recipient: PartyId, tag: StepTag,
                  values: Sequence[int], modulus: int,
                  ot_index: Optional[int] = None) -> ProtocolMessage:
    return ProtocolMessage(sender, recipient, tag,
                           encode_elements(values, modulus), ot_index)


def bit_message(sender: PartyId, recipient: PartyId, tag: StepTag,
                bits: Sequence[int],
                ot_index: Optional[int] = None) -> ProtocolMessage:
    return ProtocolMessage(sender, recipient, tag, encode_bits(bits), ot_index)
