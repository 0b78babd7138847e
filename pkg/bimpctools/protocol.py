"""The two-client BiMPC protocol.

Clients W1 and W2 hold bit vectors a and b of length n; the master learns
y = a·b and nothing else. The flow is:

* each client adds its additive mask to its input in F_q, appends its share
  pad (n' random elements) and sends the additive share to the master, who
  adds the two shares;
* W2 sends b XOR its xor mask to W1, which derives the selector bits
  a XOR b XOR xor_mask;
* one triOT per element, with W1 as selector, W2 as sender of the labels
  (xor_mask + label_mask, 1 - xor_mask + label_mask) and the master as
  receiver, which obtains (a XOR b) + label_mask;
* the master gets the length pad, either through dummy OT slots (oblivious
  transport) or as a plain vector (direct transport);
* each client sends the sum of its masks (the key sum);
* the master computes y = 2^{-1} (Σ (shares - unmasked) - key sums) mod q.

The last step works because a + b - (a XOR b) = 2 (a AND b) element-wise.
The key sums are blinded by a scalar shared by the clients, without which
the master could recover the weight of a.
"""
from dataclasses import dataclass, field
import enum
from typing import (Any, Dict, List, Mapping, Optional, Tuple, Union,
                    TYPE_CHECKING)

from bimpctools.lib import (log, InvalidInput, SetupError, ProtocolError,
                            IntegrityError)
from bimpctools.field import (FieldElement, FieldVector, check_modulus,
                              element_width, mod_inv, sample_uniform,
                              smallest_prime_above)
from bimpctools.doma import BitVector, check_same_length
from bimpctools import triot
from bimpctools.triot import SelectorInput, SenderInput, ReceiverSharedState
from bimpctools.randomness import (RandomnessSource, SeedMaterial, StreamLabel,
                                   PRG_NAME, draw_bits, draw_elements)
from bimpctools.wire import (PartyId, StepTag, ProtocolMessage, bit_message,
                             field_message)

if TYPE_CHECKING:
    from bimpctools.harness import Transcript


class PadTransport(enum.Enum):
    OBLIVIOUS = 'oblivious'
    DIRECT = 'direct'


PARTY_SEEDS: Dict[PartyId, Tuple[str, ...]] = {
    PartyId.W1: ('w1', 'w1_w2', 'w1_master'),
    PartyId.W2: ('w2', 'w1_w2', 'w2_master'),
    PartyId.MASTER: ('w1_master', 'w2_master'),
}
PRIVATE_SEEDS = ('w1', 'w2')


@dataclass(frozen=True)
class SessionConfig:
    n: int
    pad: int
    prime: int
    seeds: SeedMaterial
    session_id: str = 'bimpc'
    pad_transport: PadTransport = PadTransport.OBLIVIOUS
    blind_key_sums: bool = True

    def __post_init__(self) -> None:
        if self.n < 1:
            raise SetupError(f'input length must be at least 1, got {self.n}')
        if self.pad < 0:
            raise SetupError(f'pad length must be nonnegative, got {self.pad}')
        check_modulus(self.prime)
        if self.prime <= 2 * self.n:
            raise SetupError(f'q = {self.prime} must exceed 2n = {2 * self.n}')

    @classmethod
    def create(cls, n: int, pad: Optional[int] = None,
               prime: Optional[int] = None,
               seed: Union[int, str, bytes] = 0, **options: Any) -> 'SessionConfig':
        """Fills in the defaults n' = n and q = smallest prime above 2n."""
        if n < 1:
            raise SetupError(f'input length must be at least 1, got {n}')
        return cls(n=n, pad=n if pad is None else pad,
                   prime=smallest_prime_above(2 * n) if prime is None else prime,
                   seeds=SeedMaterial.from_seed(seed), **options)

    @property
    def length(self) -> int:
        """n + n', the only length the master sees."""
        return self.n + self.pad

    @property
    def ot_slots(self) -> int:
        if self.pad_transport is PadTransport.OBLIVIOUS:
            return self.length
        return self.n

    @property
    def width(self) -> int:
        return element_width(self.prime)

    def describe(self, redact: bool = False) -> Dict[str, Any]:
        header: Dict[str, Any] = {
            'prime': self.prime,
            'length': self.length,
            'pad_transport': self.pad_transport.value,
            'blind_key_sums': self.blind_key_sums,
            'prg': PRG_NAME,
            'session_id': self.session_id,
        }
        if not redact:
            header['n'] = self.n
            header['pad'] = self.pad
        return header


class Party:
    """A serial state machine consuming one message at a time."""
    party_id: PartyId

    def start(self) -> List[ProtocolMessage]:
        return []

    def receive(self, message: ProtocolMessage) -> List[ProtocolMessage]:
        raise NotImplementedError

    @property
    def done(self) -> bool:
        raise NotImplementedError

    @property
    def awaiting(self) -> str:
        raise NotImplementedError

    def preshared(self) -> Tuple[Tuple[Any, ...], ...]:
        """View records of the pairwise seeds this party holds."""
        sources: Mapping[str, RandomnessSource] = getattr(self, 'sources', {})
        return tuple(sources[name].view_record()
                     for name in PARTY_SEEDS[self.party_id]
                     if name in sources and name not in PRIVATE_SEEDS)

    def _check_sender(self, message: ProtocolMessage,
                      *allowed: PartyId) -> None:
        if message.recipient != self.party_id:
            raise ProtocolError(f'{message.describe()} delivered to '
                                f'{self.party_id.label}')
        if message.sender not in allowed:
            raise ProtocolError(f'{self.party_id.label} does not expect '
                                f'messages from {message.sender.label}')

    def _out_of_order(self, message: ProtocolMessage, expected: str) -> ProtocolError:
        return ProtocolError(f'{self.party_id.label} received '
                             f'{message.describe()} while awaiting {expected}')


def _key_blind(source: RandomnessSource, config: SessionConfig) -> FieldElement:
    if not config.blind_key_sums:
        return FieldElement.zero(config.prime)
    return draw_elements(source, config.session_id, 'key_blind', 1,
                         config.prime)[0]


def _draw_ot_pads(source: RandomnessSource, session: str, slot: int,
                  modulus: int) -> Tuple[FieldElement, FieldElement]:
    stream = source.derive_stream(StreamLabel(session, 'ot_pad', slot))
    pad_0 = sample_uniform(stream, modulus)
    return (pad_0, sample_uniform(stream, modulus))


def _check_length(name: str, actual: int, expected: int) -> None:
    if actual != expected:
        raise InvalidInput(f'{name} has length {actual}, expected {expected}')


@dataclass
class W1State(Party):
    config: SessionConfig
    a: BitVector
    additive_mask: FieldVector
    share_pad: FieldVector
    length_pad: FieldVector  # shared with W2
    key_blind: FieldElement  # shared with W2
    ot_choice_masks: BitVector  # one per OT slot, shared with the master
    sources: Mapping[str, RandomnessSource] = field(default_factory=dict, repr=False)
    selector_bits: Optional[BitVector] = None
    labels_received: int = 0
    finished: bool = False

    party_id = PartyId.W1

    @property
    def prime(self) -> int:
        return self.config.prime

    def __post_init__(self) -> None:
        c = self.config
        _check_length('a', len(self.a), c.n)
        _check_length('additive mask', len(self.additive_mask), c.n)
        _check_length('share pad', len(self.share_pad), c.pad)
        _check_length('length pad', len(self.length_pad), c.pad)
        _check_length('OT choice masks', len(self.ot_choice_masks), c.ot_slots)

    @classmethod
    def from_randomness(cls, a: BitVector, config: SessionConfig,
                        sources: Mapping[str, RandomnessSource]) -> 'W1State':
        session, q = config.session_id, config.prime
        return cls(
            config=config, a=a,
            additive_mask=draw_elements(sources['w1'], session, 'additive_mask',
                                        config.n, q),
            share_pad=draw_elements(sources['w1'], session, 'share_pad',
                                    config.pad, q),
            length_pad=draw_elements(sources['w1_w2'], session, 'length_pad',
                                     config.pad, q),
            key_blind=_key_blind(sources['w1_w2'], config),
            ot_choice_masks=draw_bits(sources['w1_master'], session,
                                      'ot_choice_mask', config.ot_slots),
            sources={name: sources[name] for name in PARTY_SEEDS[PartyId.W1]})

    def slot_choice(self, slot: int) -> int:
        """Selector bit of an OT slot; pad slots use the dummy bit 0."""
        assert self.selector_bits is not None
        return self.selector_bits[slot] if slot < self.config.n else 0

    def start(self) -> List[ProtocolMessage]:
        return [w1_make_additive_share(self)]

    def receive(self, message: ProtocolMessage) -> List[ProtocolMessage]:
        self._check_sender(message, PartyId.W2)
        if message.tag is StepTag.XOR_MASKED_INPUT:
            if self.selector_bits is not None:
                raise self._out_of_order(message, self.awaiting)
            self.selector_bits = w1_compute_selector_bits(
                self, BitVector(message.bit_values()))
            return [bit_message(PartyId.W1, PartyId.W2, StepTag.OT_MASKED_CHOICE,
                                [triot.selector_mask_choice(SelectorInput(
                                    self.slot_choice(slot),
                                    self.ot_choice_masks[slot]))],
                                slot)
                    for slot in range(self.config.ot_slots)]
        if message.tag is StepTag.OT_MASKED_LABELS:
            if (self.selector_bits is None or self.finished
                    or message.ot_index != self.labels_received):
                raise self._out_of_order(message, self.awaiting)
            gammas = message.field_values(self.config.prime)
            if len(gammas) != 2:
                raise ProtocolError(f'{message.describe()} must carry two labels')
            q = self.config.prime
            delivery = triot.selector_forward(FieldElement(gammas[0], q),
                                              FieldElement(gammas[1], q),
                                              self.slot_choice(message.ot_index))
            out = [field_message(PartyId.W1, PartyId.MASTER, StepTag.OT_DELIVERY,
                                 [delivery.value], q, message.ot_index)]
            self.labels_received += 1
            if self.labels_received == self.config.ot_slots:
                if self.config.pad_transport is PadTransport.DIRECT:
                    out.append(w1_send_pad(self))
                out.append(w1_key_sum_message(self))
                self.finished = True
            return out
        raise self._out_of_order(message, self.awaiting)

    @property
    def done(self) -> bool:
        return self.finished

    @property
    def awaiting(self) -> str:
        if self.finished:
            return 'nothing'
        if self.selector_bits is None:
            return 'XorMaskedInput from W2'
        return f'OtMaskedLabels[{self.labels_received}] from W2'


@dataclass
class W2State(Party):
    config: SessionConfig
    b: BitVector
    additive_mask: FieldVector
    share_pad: FieldVector
    xor_mask: BitVector
    label_mask: FieldVector
    length_pad: FieldVector  # shared with W1
    key_blind: FieldElement  # shared with W1
    ot_pads: Tuple[Tuple[FieldElement, FieldElement], ...]  # shared with the master
    sources: Mapping[str, RandomnessSource] = field(default_factory=dict, repr=False)
    choices_received: int = 0
    finished: bool = False

    party_id = PartyId.W2

    @property
    def prime(self) -> int:
        return self.config.prime

    def __post_init__(self) -> None:
        c = self.config
        _check_length('b', len(self.b), c.n)
        _check_length('additive mask', len(self.additive_mask), c.n)
        _check_length('share pad', len(self.share_pad), c.pad)
        _check_length('xor mask', len(self.xor_mask), c.n)
        _check_length('label mask', len(self.label_mask), c.n)
        _check_length('length pad', len(self.length_pad), c.pad)
        _check_length('OT pads', len(self.ot_pads), c.ot_slots)
        self._labels: Optional[List[SenderInput]] = None

    @classmethod
    def from_randomness(cls, b: BitVector, config: SessionConfig,
                        sources: Mapping[str, RandomnessSource]) -> 'W2State':
        session, q = config.session_id, config.prime
        return cls(
            config=config, b=b,
            additive_mask=draw_elements(sources['w2'], session, 'additive_mask',
                                        config.n, q),
            share_pad=draw_elements(sources['w2'], session, 'share_pad',
                                    config.pad, q),
            xor_mask=draw_bits(sources['w2'], session, 'xor_mask', config.n),
            label_mask=draw_elements(sources['w2'], session, 'label_mask',
                                     config.n, q),
            length_pad=draw_elements(sources['w1_w2'], session, 'length_pad',
                                     config.pad, q),
            key_blind=_key_blind(sources['w1_w2'], config),
            ot_pads=tuple(_draw_ot_pads(sources['w2_master'], session, slot, q)
                          for slot in range(config.ot_slots)),
            sources={name: sources[name] for name in PARTY_SEEDS[PartyId.W2]})

    def sender_input(self, slot: int) -> SenderInput:
        if self._labels is None:
            self._labels = w2_prepare_labels(self)
            if self.config.pad_transport is PadTransport.OBLIVIOUS:
                self._labels += w2_prepare_pad_labels(self)
        return self._labels[slot]

    def start(self) -> List[ProtocolMessage]:
        return [w2_make_additive_share(self), w2_xor_mask_input(self)]

    def receive(self, message: ProtocolMessage) -> List[ProtocolMessage]:
        self._check_sender(message, PartyId.W1)
        if (message.tag is not StepTag.OT_MASKED_CHOICE or self.finished
                or message.ot_index != self.choices_received):
            raise self._out_of_order(message, self.awaiting)
        bits = message.bit_values()
        if len(bits) != 1:
            raise ProtocolError(f'{message.describe()} must carry one bit')
        gammas = triot.sender_mask_labels(self.sender_input(message.ot_index),
                                          bits[0])
        out = [field_message(PartyId.W2, PartyId.W1, StepTag.OT_MASKED_LABELS,
                             [gamma.value for gamma in gammas],
                             self.config.prime, message.ot_index)]
        self.choices_received += 1
        if self.choices_received == self.config.ot_slots:
            out.append(w2_key_sum_message(self))
            self.finished = True
        return out

    @property
    def done(self) -> bool:
        return self.finished

    @property
    def awaiting(self) -> str:
        if self.finished:
            return 'nothing'
        return f'OtMaskedChoice[{self.choices_received}] from W1'


@dataclass
class MasterState(Party):
    """The master knows n + n' but not n. Shared OT randomness is drawn per
    slot on first use, or given explicitly."""
    length: int
    prime: int
    pad_transport: PadTransport = PadTransport.OBLIVIOUS
    session_id: str = 'bimpc'
    ot_pads: Dict[int, Tuple[FieldElement, FieldElement]] = field(default_factory=dict)
    ot_choice_masks: Dict[int, int] = field(default_factory=dict)
    sources: Mapping[str, RandomnessSource] = field(default_factory=dict, repr=False)
    enforce_bound: bool = True
    share_1: Optional[FieldVector] = None
    share_2: Optional[FieldVector] = None
    unmasked: List[int] = field(default_factory=list)  # outputs of the OT slots
    pad_vector: Optional[FieldVector] = None  # direct transport only
    xor_closed: bool = False
    key_sum_1: Optional[FieldElement] = None
    key_sum_2: Optional[FieldElement] = None
    output: Optional[int] = None

    party_id = PartyId.MASTER

    @classmethod
    def from_config(cls, config: SessionConfig,
                    sources: Mapping[str, RandomnessSource],
                    enforce_bound: bool = True) -> 'MasterState':
        return cls(length=config.length, prime=config.prime,
                   pad_transport=config.pad_transport,
                   session_id=config.session_id,
                   sources={name: sources[name]
                            for name in PARTY_SEEDS[PartyId.MASTER]},
                   enforce_bound=enforce_bound)

    def shared_for_slot(self, slot: int) -> ReceiverSharedState:
        if slot not in self.ot_pads or slot not in self.ot_choice_masks:
            if 'w2_master' not in self.sources or 'w1_master' not in self.sources:
                raise ProtocolError(f'no shared randomness for OT slot {slot}')
            self.ot_pads[slot] = _draw_ot_pads(self.sources['w2_master'],
                                               self.session_id, slot, self.prime)
            self.ot_choice_masks[slot] = self.sources['w1_master'].derive_stream(
                StreamLabel(self.session_id, 'ot_choice_mask', slot)).next_bit()
        pad_0, pad_1 = self.ot_pads[slot]
        return ReceiverSharedState(pad_0, pad_1, self.ot_choice_masks[slot])

    def record_unmasked(self, slot: int, value: FieldElement) -> None:
        if self.xor_closed or slot != len(self.unmasked):
            raise ProtocolError(f'OT slot {slot} completed out of order')
        self.unmasked.append(value.value)
        if (self.pad_transport is PadTransport.OBLIVIOUS
                and len(self.unmasked) == self.length):
            self.xor_closed = True

    def receive(self, message: ProtocolMessage) -> List[ProtocolMessage]:
        self._check_sender(message, PartyId.W1, PartyId.W2)
        if message.sender is PartyId.W1:
            self._receive_from_w1(message)
        else:
            self._receive_from_w2(message)
        if self.complete and self.output is None:
            self.output = master_finalize(self)
        return []

    def _shares(self, message: ProtocolMessage) -> FieldVector:
        values = message.field_values(self.prime)
        if len(values) != self.length:
            raise ProtocolError(f'{message.describe()} carries {len(values)} '
                                f'elements, expected {self.length}')
        return FieldVector(values, self.prime)

    def _scalar(self, message: ProtocolMessage) -> FieldElement:
        values = message.field_values(self.prime)
        if len(values) != 1:
            raise ProtocolError(f'{message.describe()} must carry one element')
        return FieldElement(values[0], self.prime)

    def _receive_from_w1(self, message: ProtocolMessage) -> None:
        tag = message.tag
        if tag is StepTag.ADDITIVE_SHARE and self.share_1 is None:
            self.share_1 = self._shares(message)
        elif (tag is StepTag.OT_DELIVERY and self.share_1 is not None
                and not self.xor_closed and message.ot_index == len(self.unmasked)
                and message.ot_index < self.length):
            slot = message.ot_index
            self.record_unmasked(slot, triot.receiver_unmask(
                self._scalar(message), self.shared_for_slot(slot)))
        elif (tag is StepTag.PAD_VECTOR and self.share_1 is not None
                and not self.xor_closed
                and self.pad_transport is PadTransport.DIRECT):
            pad = FieldVector(message.field_values(self.prime), self.prime)
            if len(self.unmasked) + len(pad) != self.length:
                raise ProtocolError(f'{len(self.unmasked)} OT outputs and '
                                    f'{len(pad)} pad elements do not add up '
                                    f'to {self.length}')
            self.pad_vector = pad
            self.xor_closed = True
        elif tag is StepTag.KEY_SUM and self.xor_closed and self.key_sum_1 is None:
            self.key_sum_1 = self._scalar(message)
        else:
            raise self._out_of_order(message, self.awaiting)

    def _receive_from_w2(self, message: ProtocolMessage) -> None:
        if message.tag is StepTag.ADDITIVE_SHARE and self.share_2 is None:
            self.share_2 = self._shares(message)
        elif (message.tag is StepTag.KEY_SUM and self.share_2 is not None
                and self.key_sum_2 is None):
            self.key_sum_2 = self._scalar(message)
        else:
            raise self._out_of_order(message, self.awaiting)

    @property
    def complete(self) -> bool:
        return (self.share_1 is not None and self.share_2 is not None
                and self.xor_closed and self.key_sum_1 is not None
                and self.key_sum_2 is not None)

    def masked_xor(self) -> FieldVector:
        """OT outputs followed by the length pad."""
        vector = FieldVector(tuple(self.unmasked), self.prime)
        if self.pad_vector is not None:
            vector = vector.concat(self.pad_vector)
        return vector

    def differences(self) -> FieldVector:
        """Summed shares minus the masked XOR vector."""
        assert self.share_1 is not None and self.share_2 is not None
        return master_sum_shares(self.share_1, self.share_2) - self.masked_xor()

    def cancellation_residue(self) -> FieldElement:
        """Σ differences minus both key sums, which equals 2y in F_q."""
        assert self.key_sum_1 is not None and self.key_sum_2 is not None
        return self.differences().total() - self.key_sum_1 - self.key_sum_2

    @property
    def done(self) -> bool:
        return self.output is not None

    @property
    def awaiting(self) -> str:
        if self.share_1 is None:
            return 'AdditiveShare from W1'
        if self.share_2 is None:
            return 'AdditiveShare from W2'
        if not self.xor_closed:
            if self.pad_transport is PadTransport.DIRECT:
                return (f'OtDelivery[{len(self.unmasked)}] or PadVector '
                        f'from W1')
            return f'OtDelivery[{len(self.unmasked)}] from W1'
        if self.key_sum_1 is None:
            return 'KeySum from W1'
        if self.key_sum_2 is None:
            return 'KeySum from W2'
        return 'nothing'


def _embed_bits(bits: BitVector, modulus: int) -> FieldVector:
    return FieldVector(bits.bits, modulus)


def w1_make_additive_share(state: W1State) -> ProtocolMessage:
    """a + additive mask, followed by the share pad."""
    q = state.config.prime
    share = (_embed_bits(state.a, q) + state.additive_mask).concat(state.share_pad)
    return field_message(PartyId.W1, PartyId.MASTER, StepTag.ADDITIVE_SHARE,
                         share.values, q)


def w2_make_additive_share(state: W2State) -> ProtocolMessage:
    """b + additive mask, followed by the share pad."""
    q = state.config.prime
    share = (_embed_bits(state.b, q) + state.additive_mask).concat(state.share_pad)
    return field_message(PartyId.W2, PartyId.MASTER, StepTag.ADDITIVE_SHARE,
                         share.values, q)


def master_sum_shares(share_1: FieldVector, share_2: FieldVector) -> FieldVector:
    if len(share_1) != len(share_2):
        raise ProtocolError(f'shares have lengths {len(share_1)} and {len(share_2)}')
    return share_1 + share_2


def w2_xor_mask_input(state: W2State) -> ProtocolMessage:
    return bit_message(PartyId.W2, PartyId.W1, StepTag.XOR_MASKED_INPUT,
                       (state.b ^ state.xor_mask).bits)


def w1_compute_selector_bits(state: W1State, masked_b: BitVector) -> BitVector:
    """a XOR the masked b received from W2."""
    if len(masked_b) != len(state.a):
        raise ProtocolError(f'masked input has length {len(masked_b)}, '
                            f'expected {len(state.a)}')
    return state.a ^ masked_b


def w2_prepare_labels(state: W2State) -> List[SenderInput]:
    """Labels xor_mask + label_mask and 1 - xor_mask + label_mask, paired
    with the OT pads of the first n slots."""
    q = state.config.prime
    inputs = []
    for i in range(state.config.n):
        mask_bit, label_mask = state.xor_mask[i], state.label_mask.values[i]
        pad_0, pad_1 = state.ot_pads[i]
        inputs.append(SenderInput(FieldElement.embed(mask_bit + label_mask, q),
                                  FieldElement.embed(1 - mask_bit + label_mask, q),
                                  pad_0, pad_1))
    return inputs


def w2_prepare_pad_labels(state: W2State) -> List[SenderInput]:
    """Both labels of pad slot n + j equal length_pad[j], so the receiver obtains
    the pad whatever the dummy selector bit."""
    config = state.config
    if config.pad_transport is not PadTransport.OBLIVIOUS:
        raise ProtocolError('pad slots exist only with oblivious pad transport')
    inputs = []
    for j, pad in enumerate(state.length_pad):
        pad_0, pad_1 = state.ot_pads[config.n + j]
        inputs.append(SenderInput(pad, pad, pad_0, pad_1))
    return inputs


def execute_xor_phase(w1: W1State, w2: W2State,
                      master: MasterState) -> FieldVector:
    """Runs the OT slots directly, without messages, and returns the n
    values m + k obtained by the master. With oblivious pad transport the
    dummy pad slots run as well, which completes the master's XOR phase."""
    if w1.selector_bits is None:
        raise ProtocolError('selector bits are not computed yet')
    sender_inputs = w2_prepare_labels(w2)
    if w1.config.pad_transport is PadTransport.OBLIVIOUS:
        sender_inputs += w2_prepare_pad_labels(w2)
    for slot, sender in enumerate(sender_inputs):
        selector = SelectorInput(w1.slot_choice(slot), w1.ot_choice_masks[slot])
        master.record_unmasked(slot, triot.run_triot_instance(
            selector, sender, master.shared_for_slot(slot)))
    return FieldVector(tuple(master.unmasked[:w1.config.n]), master.prime)


def w1_send_pad(state: W1State) -> ProtocolMessage:
    return field_message(PartyId.W1, PartyId.MASTER, StepTag.PAD_VECTOR,
                         state.length_pad.values, state.config.prime)


def w1_key_sum(state: W1State) -> FieldElement:
    """Σ additive mask + Σ (share pad - length pad)."""
    return state.additive_mask.total() + (state.share_pad - state.length_pad).total()


def w2_key_sum(state: W2State) -> FieldElement:
    """Σ (additive mask - label mask) + Σ share pad."""
    return (state.additive_mask - state.label_mask).total() + state.share_pad.total()


def w1_key_sum_message(state: W1State) -> ProtocolMessage:
    blinded = w1_key_sum(state) + state.key_blind
    return field_message(PartyId.W1, PartyId.MASTER, StepTag.KEY_SUM,
                         [blinded.value], state.config.prime)


def w2_key_sum_message(state: W2State) -> ProtocolMessage:
    blinded = w2_key_sum(state) - state.key_blind
    return field_message(PartyId.W2, PartyId.MASTER, StepTag.KEY_SUM,
                         [blinded.value], state.config.prime)


def master_finalize(state: MasterState) -> int:
    """y = 2^{-1} · cancellation residue mod q."""
    if not state.complete:
        raise ProtocolError(f'cannot finalize while awaiting {state.awaiting}')
    y = (state.cancellation_residue()
         * mod_inv(FieldElement(2, state.prime))).value
    if state.enforce_bound and y > state.length:
        raise IntegrityError(f'reconstructed y = {y} exceeds the vector '
                             f'length {state.length}')
    return y


def build_parties(a: BitVector, b: BitVector, config: SessionConfig,
                  sources: Optional[Mapping[str, RandomnessSource]] = None,
                  enforce_bound: bool = True) -> Dict[PartyId, Party]:
    """Sets up W1, W2 and the master. Without explicit sources the seeded
    sources of config are used."""
    n = check_same_length([a, b])
    _check_length('inputs', n, config.n)
    if sources is None:
        sources = config.seeds.sources()
    return {
        PartyId.W1: W1State.from_randomness(a, config, sources),
        PartyId.W2: W2State.from_randomness(b, config, sources),
        PartyId.MASTER: MasterState.from_config(config, sources, enforce_bound),
    }


def run_session(a: BitVector, b: BitVector, config: SessionConfig,
                schedule: str = 'fifo',
                sources: Optional[Mapping[str, RandomnessSource]] = None,
                schedule_seed: Union[int, str] = 0,
                ) -> Tuple[int, 'Transcript']:
    """Runs a full session and returns y together with the transcript.
    schedule_seed drives the interleaved delivery order."""
    from bimpctools.harness import run_parties

    parties = build_parties(a, b, config, sources)
    transcript = run_parties(parties, schedule, schedule_seed)
    transcript.config = config
    master = parties[PartyId.MASTER]
    assert isinstance(master, MasterState)
    if master.output is None:
        raise ProtocolError(f'the master has no output, awaiting {master.awaiting}')
    if master.output > config.n:
        raise IntegrityError(f'reconstructed y = {master.output} exceeds n = {config.n}')
    log.debug(f'Session {config.session_id}: y = {master.output} after '
              f'{len(transcript)} messages')
    return master.output, transcript
