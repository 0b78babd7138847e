import dataclasses
from typing import Sequence

import pytest

from bimpctools import doma, protocol, triot
from bimpctools.doma import BitVector, DomaDecomposition
from bimpctools.field import mod_add


@pytest.fixture
def zero_xor_mask(monkeypatch):
    """W2 sends b to W1 in the clear."""
    original = protocol.W2State.from_randomness.__func__

    def from_randomness(cls, b, config, sources):
        state = original(cls, b, config, sources)
        return dataclasses.replace(state,
                                   xor_mask=BitVector.zeros(len(state.xor_mask)))

    monkeypatch.setattr(protocol.W2State, 'from_randomness',
                        classmethod(from_randomness))


@pytest.fixture
def key_sum_without_label_mask(monkeypatch):
    """W2 forgets to subtract k from its key sum."""
    def w2_key_sum(state):
        return state.additive_mask.total() + state.share_pad.total()

    monkeypatch.setattr(protocol, 'w2_key_sum', w2_key_sum)


@pytest.fixture
def doma_mod_l_plus_one(monkeypatch):
    """DoMA residues taken modulo l + 1 instead of l."""
    def and_via_modadd(inputs: Sequence[BitVector]) -> DomaDecomposition:
        l = len(inputs)
        s = tuple(sum(column) for column in zip(*(v.bits for v in inputs)))
        m = tuple(total % (l + 1) for total in s)
        d = tuple((total - residue) // l for total, residue in zip(s, m))
        return DomaDecomposition(s, m, BitVector(d))

    monkeypatch.setattr(doma, 'and_via_modadd', and_via_modadd)


@pytest.fixture
def triot_same_pad(monkeypatch):
    """The sender masks both labels with the same pad."""
    def sender_mask_labels(sender, masked_choice):
        pad = sender.pads()[masked_choice]
        return (mod_add(sender.label_0, pad), mod_add(sender.label_1, pad))

    monkeypatch.setattr(triot, 'sender_mask_labels', sender_mask_labels)
