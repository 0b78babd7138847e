"""Three-party oblivious transfer (triOT).

The selector holds a choice bit, the sender two labels, and the receiver
obtains the chosen label without learning the choice. The selector and the
receiver share a mask bit; the sender and the receiver share a pad pair.
Messages flow selector → sender (masked choice), sender → selector (both
labels under their pads) and selector → receiver (the chosen one).
"""
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

from bimpctools.lib import InvalidInput, ProtocolError
from bimpctools.field import FieldElement, mod_add, mod_sub


def check_bit(value: int, name: str = 'bit') -> int:
    if value not in (0, 1):
        raise InvalidInput(f'{name} must be 0 or 1, got {value!r}')
    return value


@dataclass(frozen=True)
class SelectorInput:
    choice_bit: int
    shared_mask: int

    def __post_init__(self) -> None:
        check_bit(self.choice_bit, 'choice bit')
        check_bit(self.shared_mask, 'shared mask')


@dataclass(frozen=True)
class SenderInput:
    label_0: FieldElement
    label_1: FieldElement
    pad_0: FieldElement
    pad_1: FieldElement

    def pads(self) -> Tuple[FieldElement, FieldElement]:
        return (self.pad_0, self.pad_1)


@dataclass(frozen=True)
class ReceiverSharedState:
    pad_0: FieldElement
    pad_1: FieldElement
    shared_mask: int

    def __post_init__(self) -> None:
        check_bit(self.shared_mask, 'shared mask')

    def pads(self) -> Tuple[FieldElement, FieldElement]:
        return (self.pad_0, self.pad_1)


@dataclass(frozen=True)
class TriOtMessages:
    masked_choice: int
    masked_labels: Tuple[FieldElement, FieldElement]
    delivery: FieldElement


def selector_mask_choice(selector: SelectorInput) -> int:
    return selector.choice_bit ^ selector.shared_mask


def sender_mask_labels(sender: SenderInput,
                       masked_choice: int) -> Tuple[FieldElement, FieldElement]:
    """label_0 + pads[masked_choice] and label_1 + pads[1 - masked_choice]."""
    check_bit(masked_choice, 'masked choice')
    pads = sender.pads()
    return (mod_add(sender.label_0, pads[masked_choice]),
            mod_add(sender.label_1, pads[1 - masked_choice]))


def selector_forward(gamma_0: FieldElement, gamma_1: FieldElement,
                     choice_bit: int) -> FieldElement:
    check_bit(choice_bit, 'choice bit')
    return (gamma_0, gamma_1)[choice_bit]


def receiver_unmask(delivery: FieldElement,
                    shared: ReceiverSharedState) -> FieldElement:
    return mod_sub(delivery, shared.pads()[shared.shared_mask])


def run_triot_instance(
        selector: SelectorInput, sender: SenderInput,
        receiver: ReceiverSharedState,
        on_message: Optional[Callable[[str, object], None]] = None
        ) -> FieldElement:
    """Runs the three roles of one OT instance in order and returns the
    label obtained by the receiver. on_message, when given, is called with
    ('masked_choice', bit), ('masked_labels', (masked_0, masked_1)) and
    ('delivery', masked label), in that order."""
    if selector.shared_mask != receiver.shared_mask:
        raise ProtocolError('selector and receiver disagree on the shared mask')
    if sender.pads() != receiver.pads():
        raise ProtocolError('sender and receiver disagree on the shared pads')
    notify = on_message or (lambda name, payload: None)
    masked_choice = selector_mask_choice(selector)
    notify('masked_choice', masked_choice)
    gammas = sender_mask_labels(sender, masked_choice)
    notify('masked_labels', gammas)
    delivery = selector_forward(gammas[0], gammas[1], selector.choice_bit)
    notify('delivery', delivery)
    return receiver_unmask(delivery, receiver)


def record_instance(selector: SelectorInput, sender: SenderInput,
                    receiver: ReceiverSharedState
                    ) -> Tuple[FieldElement, TriOtMessages]:
    """Runs one instance and also returns the three messages it produced."""
    seen = {}

    def keep(name: str, payload: object) -> None:
        assert name not in seen
        seen[name] = payload

    label = run_triot_instance(selector, sender, receiver, keep)
    return label, TriOtMessages(seen['masked_choice'],  # type: ignore
                                seen['masked_labels'],  # type: ignore
                                seen['delivery'])  # type: ignore
