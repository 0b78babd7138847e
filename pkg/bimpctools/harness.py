"""In-memory simulated network for protocol sessions.

Parties exchange ProtocolMessages through the harness, which serializes and
parses every message on the way, records deliveries in a Transcript and
projects per-party views from it. Three drivers exist: the canonical FIFO
scheduler, a seeded interleaving scheduler (random choice among the heads of
the per-pair queues) and a threaded driver with one thread per party. All of
them keep per-sender-pair FIFO order.
"""
from collections import deque, OrderedDict
from dataclasses import dataclass, field
from pathlib import Path
import queue
import random
import threading
from typing import (Any, Deque, Dict, Iterable, List, Mapping, Optional,
                    Tuple, Union, TYPE_CHECKING)

import yaml

from bimpctools.lib import (log, HarnessError, InvalidInput,
                            write_text_atomic)
from bimpctools.randomness import BIT_PURPOSES, PRG_NAME
from bimpctools.wire import PartyId, StepTag, ProtocolMessage

if TYPE_CHECKING:
    from bimpctools.protocol import Party, SessionConfig

Pending = Tuple[ProtocolMessage, Optional[int]]
ViewKey = Tuple[Tuple[Any, ...], Tuple[int, ...]]


@dataclass(frozen=True)
class TranscriptEntry:
    index: int
    message: ProtocolMessage
    # delivery during whose handling the message was emitted
    cause: Optional[int] = None


@dataclass
class Transcript:
    entries: List[TranscriptEntry] = field(default_factory=list)
    preshared: Dict[PartyId, Tuple[Tuple[Any, ...], ...]] = field(default_factory=dict)
    prime: Optional[int] = None
    config: Optional['SessionConfig'] = None

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def messages(self) -> List[ProtocolMessage]:
        return [entry.message for entry in self.entries]

    def count(self, tag: StepTag) -> int:
        return sum(1 for message in self.messages if message.tag is tag)

    def encode(self) -> bytes:
        """Concatenated wire encoding of all deliveries, in order."""
        return b''.join(message.encode() for message in self.messages)

    def records(self) -> List[Dict[str, Any]]:
        return [{'index': entry.index,
                 'from': entry.message.sender.label,
                 'to': entry.message.recipient.label,
                 'tag': entry.message.tag.label,
                 'ot_index': entry.message.ot_index,
                 'payload': entry.message.payload.hex(),
                 'cause': entry.cause}
                for entry in self.entries]

    def header(self, redact: bool = False) -> Dict[str, Any]:
        if self.config is not None:
            return self.config.describe(redact)
        return {'prime': self.prime, 'prg': PRG_NAME}

    def serialize(self, redact: bool = False) -> str:
        return yaml.safe_dump({'header': self.header(redact),
                               'messages': self.records()},
                              sort_keys=False)

    def dump(self, path: Union[str, Path], redact: bool = False) -> None:
        """Writes the transcript as YAML. Redacted dumps omit n and n'."""
        write_text_atomic(path, self.serialize(redact))
        log.info(f'Transcript written to {path}')


@dataclass(frozen=True)
class View:
    """Everything a party observes: received messages, grouped by sender in
    party order, and its pre-shared randomness."""
    party: PartyId
    messages: Tuple[ProtocolMessage, ...]
    preshared: Tuple[Tuple[Any, ...], ...]
    prime: int

    def split(self) -> ViewKey:
        """Separates the view into a skeleton (headers, bit values, seeds)
        and the vector of its field-valued entries."""
        skeleton: List[Any] = []
        values: List[int] = []
        for message in self.messages:
            bits = message.bit_values() if message.tag.carries_bits else None
            skeleton.append(('msg', int(message.sender), int(message.tag),
                             message.ot_index, len(message.payload), bits))
            if bits is None:
                values.extend(message.field_values(self.prime))
        for record in self.preshared:
            name, kind = record[0], record[1]
            if kind != 'values':
                skeleton.append(record)
                continue
            for (purpose, index), assigned in record[2]:
                if purpose in BIT_PURPOSES:
                    skeleton.append(('bits', name, purpose, index, assigned))
                else:
                    skeleton.append(('field', name, purpose, index, len(assigned)))
                    values.extend(assigned)
        return tuple(skeleton), tuple(values)

    def key(self) -> ViewKey:
        return self.split()

    def canonical(self) -> bytes:
        return canonical_bytes(self.split())


def canonical_bytes(key: ViewKey) -> bytes:
    return repr(key).encode()


def project_view(transcript: Transcript, party: Union[PartyId, str]) -> View:
    if isinstance(party, str):
        party = PartyId.parse(party)
    elif party not in tuple(PartyId):
        raise InvalidInput(f'unknown party {party!r}')
    if transcript.prime is None:
        raise InvalidInput('transcript has no session prime')
    received = [message for message in transcript.messages
                if message.recipient == party]
    received.sort(key=lambda message: int(message.sender))
    return View(party, tuple(received), transcript.preshared.get(party, ()),
                transcript.prime)


class FifoScheduler:
    """Single logical queue, delivery in emission order."""
    def __init__(self) -> None:
        self._queue: Deque[Pending] = deque()

    def push(self, message: ProtocolMessage, cause: Optional[int]) -> None:
        self._queue.append((message, cause))

    def pop(self) -> Pending:
        return self._queue.popleft()

    def __bool__(self) -> bool:
        return bool(self._queue)


class InterleavingScheduler:
    """Picks a random nonempty sender→recipient queue at each step."""
    def __init__(self, seed: Union[int, str] = 0) -> None:
        self._random = random.Random(seed)
        self._queues: Dict[Tuple[PartyId, PartyId], Deque[Pending]] = OrderedDict()

    def push(self, message: ProtocolMessage, cause: Optional[int]) -> None:
        pair = (message.sender, message.recipient)
        self._queues.setdefault(pair, deque()).append((message, cause))

    def pop(self) -> Pending:
        pairs = sorted(pair for pair, waiting in self._queues.items() if waiting)
        return self._queues[self._random.choice(pairs)].popleft()

    def __bool__(self) -> bool:
        return any(self._queues.values())


def session_prime(parties: Mapping[PartyId, 'Party']) -> Optional[int]:
    primes = {getattr(party, 'prime') for party in parties.values()}
    if len(primes) > 1:
        raise HarnessError('parties disagree on the session prime: '
                           + ', '.join(str(q) for q in sorted(primes)))
    return primes.pop() if primes else None


def start_messages(parties: Mapping[PartyId, 'Party']) -> List[ProtocolMessage]:
    return [message for party_id in sorted(parties)
            for message in parties[party_id].start()]


def _check_finished(parties: Mapping[PartyId, 'Party']) -> None:
    stalled = [party for _, party in sorted(parties.items()) if not party.done]
    if stalled:
        raise HarnessError('protocol stalled: ' + '; '.join(
            f'{party.party_id.label} awaiting {party.awaiting}'
            for party in stalled))


def deliver_until_quiescent(parties: Mapping[PartyId, 'Party'],
                            pending: Optional[Iterable[ProtocolMessage]] = None,
                            scheduler: Optional[Union[FifoScheduler,
                                                      InterleavingScheduler]] = None
                            ) -> Transcript:
    """Delivers pending messages, oldest first by default, until none remain.
    Without explicit pending messages, each party's start messages are
    used, in party order."""
    scheduler = scheduler or FifoScheduler()
    transcript = Transcript(prime=session_prime(parties))
    for message in (start_messages(parties) if pending is None else pending):
        scheduler.push(message, None)
    while scheduler:
        message, cause = scheduler.pop()
        if message.recipient not in parties:
            raise HarnessError(f'no party to deliver {message.describe()} to')
        delivered = ProtocolMessage.decode(message.encode())
        index = len(transcript.entries)
        transcript.entries.append(TranscriptEntry(index, delivered, cause))
        log.debug(f'#{index}: {delivered.describe()}')
        for emitted in parties[delivered.recipient].receive(delivered):
            scheduler.push(emitted, index)
    _check_finished(parties)
    transcript.preshared = {party_id: party.preshared()
                            for party_id, party in parties.items()}
    return transcript


def run_threaded(parties: Mapping[PartyId, 'Party'],
                 timeout: float = 10.0) -> Transcript:
    """Runs every party in its own thread with a mailbox queue."""
    transcript = Transcript(prime=session_prime(parties))
    inboxes: Dict[PartyId, 'queue.Queue[Optional[Pending]]'] = {
        party_id: queue.Queue() for party_id in parties}
    lock = threading.Lock()
    errors: List[Exception] = []

    def post(message: ProtocolMessage, cause: Optional[int]) -> None:
        if message.recipient not in inboxes:
            raise HarnessError(f'no party to deliver {message.describe()} to')
        inboxes[message.recipient].put((message, cause))

    def abort(error: Exception) -> None:
        with lock:
            errors.append(error)
        for inbox in inboxes.values():
            inbox.put(None)

    def work(party: 'Party') -> None:
        inbox = inboxes[party.party_id]
        while not party.done:
            try:
                item = inbox.get(timeout=timeout)
            except queue.Empty:
                abort(HarnessError(f'{party.party_id.label} timed out awaiting '
                                   f'{party.awaiting}'))
                return
            if item is None:
                return
            message, cause = item
            try:
                delivered = ProtocolMessage.decode(message.encode())
                with lock:
                    index = len(transcript.entries)
                    transcript.entries.append(
                        TranscriptEntry(index, delivered, cause))
                for emitted in party.receive(delivered):
                    post(emitted, index)
            except Exception as err: # pylint: disable=broad-except
                abort(err)
                return

    for message in start_messages(parties):
        post(message, None)
    threads = [threading.Thread(target=work, args=(parties[party_id],),
                                name=f'bimpc-{party_id.label}', daemon=True)
               for party_id in sorted(parties)]
    for thread in threads:
        thread.start()
    for thread in threads:
        thread.join()
    if errors:
        raise errors[0]
    undelivered = [item for inbox in inboxes.values()
                   for item in list(inbox.queue) if item is not None]
    if undelivered:
        raise HarnessError(f'{len(undelivered)} messages left undelivered')
    _check_finished(parties)
    transcript.preshared = {party_id: party.preshared()
                            for party_id, party in parties.items()}
    return transcript


SCHEDULES = ('fifo', 'interleaved', 'threaded')


def run_parties(parties: Mapping[PartyId, 'Party'], schedule: str = 'fifo',
                seed: Union[int, str] = 0) -> Transcript:
    if schedule == 'fifo':
        return deliver_until_quiescent(parties)
    if schedule == 'interleaved':
        return deliver_until_quiescent(parties,
                                       scheduler=InterleavingScheduler(seed))
    if schedule == 'threaded':
        return run_threaded(parties)
    raise InvalidInput(f'unknown schedule {schedule!r}, use one of '
                       + ', '.join(SCHEDULES))
