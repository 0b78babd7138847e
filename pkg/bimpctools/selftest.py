"""Correctness suites run by `bimpc selftest`.

Each suite compares an implementation against its direct oracle and stops
at the first counterexample.
"""
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from itertools import product
import os
import random
from typing import (Any, Callable, Dict, Iterator, List, Optional, Sequence,
                    Tuple)

from tqdm import tqdm # type: ignore

from bimpctools.lib import log, BiMPCError, ProtocolError
from bimpctools.field import FieldElement
from bimpctools import doma, protocol, triot
from bimpctools.doma import BitVector
from bimpctools.harness import deliver_until_quiescent
from bimpctools.triot import ReceiverSharedState, SelectorInput, SenderInput
from bimpctools.wire import PartyId

# exhaustive DoMA cases up to 2^16 input combinations
EXHAUSTIVE_AND_BITS = 16
MAX_AND_INPUTS = 5
MAX_RANDOM_AND_BITS = 8
TRIOT_MODULUS = 5


@dataclass
class SuiteResult:
    name: str
    cases: int
    counterexample: Optional[Dict[str, Any]] = None

    @property
    def passed(self) -> bool:
        return self.counterexample is None

    def asdict(self) -> Dict[str, Any]:
        return {k: v for k, v in asdict(self).items() if v is not None}

    def summary(self) -> str:
        if self.passed:
            return f'{self.name}: {self.cases} cases passed'
        return f'{self.name}: FAILED after {self.cases} cases: {self.counterexample}'


def _vectors(n: int) -> Iterator[BitVector]:
    for bits in product((0, 1), repeat=n):
        yield BitVector(bits)


def _random_vector(rng: random.Random, n: int) -> BitVector:
    return BitVector(tuple(rng.randint(0, 1) for _ in range(n)))


def _and_cases(random_cases: int, seed: int) -> Iterator[List[BitVector]]:
    for l in range(2, MAX_AND_INPUTS + 1):
        for n in range(1, EXHAUSTIVE_AND_BITS // l + 1):
            for inputs in product(list(_vectors(n)), repeat=l):
                yield list(inputs)
    rng = random.Random(seed)
    for _ in range(random_cases):
        l, n = rng.randint(2, MAX_AND_INPUTS), rng.randint(1, MAX_RANDOM_AND_BITS)
        yield [_random_vector(rng, n) for _ in range(l)]


def check_doma_and(random_cases: int = 1000, seed: int = 0) -> SuiteResult:
    """DoMA conjunction against the bitwise AND: exhaustively while
    l·n ≤ 16, then on random vectors."""
    cases = 0
    for inputs in _and_cases(random_cases, seed):
        cases += 1
        got = doma.and_via_modadd(inputs).d
        expected = doma.bitwise_and(inputs)
        if got != expected:
            return SuiteResult('doma-and', cases, {
                'inputs': [str(v) for v in inputs],
                'got': str(got), 'expected': str(expected)})
    return SuiteResult('doma-and', cases)


def check_doma_dot(max_length: int = 6) -> SuiteResult:
    """Dot product of every pair of vectors up to max_length bits."""
    cases = 0
    for n in range(1, max_length + 1):
        vectors = list(_vectors(n))
        for a, b in product(vectors, repeat=2):
            cases += 1
            got, expected = doma.dot_via_modadd(a, b), doma.brute_force_dot(a, b)
            if got != expected:
                return SuiteResult('doma-dot', cases, {
                    'a': str(a), 'b': str(b), 'got': got, 'expected': expected})
    return SuiteResult('doma-dot', cases)


def check_triot(modulus: int = TRIOT_MODULUS) -> SuiteResult:
    """Every choice bit, shared mask, label pair and pad pair in F_q."""
    q, cases = modulus, 0
    elements = [FieldElement(v, q) for v in range(q)]
    for choice, mask in product((0, 1), repeat=2):
        for label_0, label_1, pad_0, pad_1 in product(elements, repeat=4):
            cases += 1
            got = triot.run_triot_instance(
                SelectorInput(choice, mask),
                SenderInput(label_0, label_1, pad_0, pad_1),
                ReceiverSharedState(pad_0, pad_1, mask))
            expected = (label_0, label_1)[choice]
            if got != expected:
                return SuiteResult('triot', cases, {
                    'choice': choice, 'shared_mask': mask,
                    'labels': [label_0.value, label_1.value],
                    'pads': [pad_0.value, pad_1.value],
                    'got': got.value, 'expected': expected.value})
    return SuiteResult('triot', cases)


def check_sessions(sessions: int = 100, seed: int = 0,
                   max_length: int = 8) -> SuiteResult:
    """Randomized full sessions, alternating pad transports."""
    rng = random.Random(seed)
    transports = list(protocol.PadTransport)
    for index in tqdm(range(sessions), desc='sessions', unit='',
                      leave=False, disable=sessions < 10):
        n = rng.randint(1, max_length)
        config = protocol.SessionConfig.create(
            n, pad=rng.randint(0, n), seed=f'{seed}/{index}',
            pad_transport=transports[index % len(transports)])
        a, b = _random_vector(rng, n), _random_vector(rng, n)
        expected = doma.brute_force_dot(a, b)
        try:
            y: Any = protocol.run_session(a, b, config)[0]
        except ProtocolError as err:
            y = f'{type(err).__name__}: {err}'
        if y != expected:
            return SuiteResult('sessions', index + 1, {
                'a': str(a), 'b': str(b), 'pad': config.pad,
                'prime': config.prime, 'seed': f'{seed}/{index}',
                'got': y, 'expected': expected})
    return SuiteResult('sessions', sessions)


SweepTask = Tuple[int, int, int]


def _sweep_chunk(task: SweepTask) -> Tuple[int, Optional[Dict[str, Any]]]:
    """All b against one a of length n, under seeds 0, ..., seeds - 1."""
    n, a_index, seeds = task
    a = BitVector(tuple(int(bit) for bit in format(a_index, f'0{n}b')))
    configs = [protocol.SessionConfig.create(n, seed=seed) for seed in range(seeds)]
    cases = 0
    for b in _vectors(n):
        y = doma.brute_force_dot(a, b)
        for seed, config in enumerate(configs):
            cases += 1
            parties = protocol.build_parties(a, b, config)
            try:
                deliver_until_quiescent(parties)
            except BiMPCError as err:
                return cases, {'a': str(a), 'b': str(b), 'seed': seed,
                               'got': f'{type(err).__name__}: {err}',
                               'expected': y}
            master = parties[PartyId.MASTER]
            assert isinstance(master, protocol.MasterState)
            residue = master.cancellation_residue().value
            if master.output != y or residue != 2 * y % config.prime:
                return cases, {'a': str(a), 'b': str(b), 'seed': seed,
                               'got': master.output, 'residue': residue,
                               'expected': y}
    return cases, None


def check_sweep(max_length: int = 6, seeds: int = 20,
                jobs: Optional[int] = None) -> SuiteResult:
    """Every input pair up to max_length bits under seeds 0, ..., seeds - 1,
    checking the output and that the masks cancel to 2y. Runs on jobs worker
    processes, all cores by default."""
    jobs = jobs or os.cpu_count() or 1
    tasks = [(n, a_index, seeds) for n in range(1, max_length + 1)
             for a_index in range(2 ** n)]
    cases = 0
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            results = list(tqdm(executor.map(_sweep_chunk, tasks),
                                total=len(tasks), desc='sweep', unit='chunk',
                                leave=False))
    else:
        results = [_sweep_chunk(task) for task in tasks]
    for done, counterexample in results:
        cases += done
        if counterexample is not None:
            return SuiteResult('sweep', cases, counterexample)
    return SuiteResult('sweep', cases)


def run_selftest(random_cases: int = 1000, sessions: int = 100,
                 seed: int = 0) -> List[SuiteResult]:
    suites: Sequence[Callable[[], SuiteResult]] = (
        lambda: check_doma_and(random_cases, seed),
        check_doma_dot,
        check_triot,
        lambda: check_sessions(sessions, seed),
    )
    results = []
    for suite in suites:
        result = suite()
        log.info(result.summary())
        results.append(result)
    return results
