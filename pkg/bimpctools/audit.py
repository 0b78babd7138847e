"""Privacy audit by enumeration of the protocol randomness.

A party's view is split into a skeleton (message headers, bit values,
pairwise bits) and a vector of field values. Two strategies compute the
distribution of views over all randomness assignments:

* exhaustive: runs the protocol once per assignment of every field scalar
  and every bit, and counts views exactly;
* affine: for a fixed assignment of the bits, every message is an affine
  function of the field scalars, so the view is uniform on an affine
  subspace. The subspace is found from n_f + 1 runs and checked on two
  more. Distributions are compared coset by coset.

'auto' picks exhaustive whenever its total cost stays below
EXHAUSTIVE_LIMIT runs.
"""
from collections import Counter, defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
import functools
from itertools import product
from typing import (Any, Callable, Dict, Hashable, Iterable, List, Mapping,
                    Optional, Sequence, Tuple, Union)

from tqdm import tqdm # type: ignore

from bimpctools.lib import (log, DEFAULT_CAP, EXHAUSTIVE_LIMIT, InvalidInput,
                            EnumerationCapExceeded, EnumerationError)
from bimpctools.field import (Row, quotient_basis, reduce_against, row_reduce,
                              span_intersection)
from bimpctools.doma import BitVector, brute_force_dot
from bimpctools.randomness import SlotKey, counting_sources, enumerated_sources
from bimpctools.protocol import (SessionConfig, build_parties,
                                 run_session)
from bimpctools.harness import (Transcript, ViewKey, canonical_bytes,
                                deliver_until_quiescent, project_view)
from bimpctools.graph import master_bound_shape
from bimpctools.report import AuditReport, Verdict
from bimpctools.wire import PartyId

STRATEGIES = ('auto', 'exhaustive', 'affine')
Assignment = Dict[str, Dict[SlotKey, Tuple[int, ...]]]
InputPair = Tuple[BitVector, BitVector]

# coset representatives probed per affine distribution comparison
SUBCOSET_LIMIT = 10**6


@dataclass(frozen=True)
class RandomSlot:
    seed: str
    purpose: str
    index: int
    kind: str  # 'field' or 'bit'
    count: int = 1


def randomness_layout(config: SessionConfig) -> Tuple[RandomSlot, ...]:
    """Every raw random value a session consumes, in enumeration order."""
    n, pad, slots = config.n, config.pad, config.ot_slots
    layout = [RandomSlot('w1', 'additive_mask', i, 'field') for i in range(n)]
    layout += [RandomSlot('w1', 'share_pad', j, 'field') for j in range(pad)]
    layout += [RandomSlot('w2', 'additive_mask', i, 'field') for i in range(n)]
    layout += [RandomSlot('w2', 'share_pad', j, 'field') for j in range(pad)]
    layout += [RandomSlot('w2', 'xor_mask', i, 'bit') for i in range(n)]
    layout += [RandomSlot('w2', 'label_mask', i, 'field') for i in range(n)]
    layout += [RandomSlot('w1_w2', 'length_pad', j, 'field') for j in range(pad)]
    if config.blind_key_sums:
        layout.append(RandomSlot('w1_w2', 'key_blind', 0, 'field'))
    layout += [RandomSlot('w1_master', 'ot_choice_mask', s, 'bit')
               for s in range(slots)]
    layout += [RandomSlot('w2_master', 'ot_pad', s, 'field', 2)
               for s in range(slots)]
    return tuple(layout)


def dry_run_layout(config: SessionConfig) -> Dict[Tuple[str, str, int], Tuple[str, ...]]:
    """Draws actually made by a session, recorded by counting sources."""
    sources = counting_sources()
    zeros = BitVector.zeros(config.n)
    parties = build_parties(zeros, zeros, config, sources, enforce_bound=False)
    deliver_until_quiescent(parties)
    return {(name, purpose, index): kinds
            for name, source in sources.items()
            for (purpose, index), kinds in source.consumption().items()}


@dataclass(frozen=True)
class EnumerationCost:
    field_scalars: int  # n_f
    random_bits: int  # n_b
    modulus: int

    @property
    def assignments(self) -> int:
        return self.modulus ** self.field_scalars * 2 ** self.random_bits

    @property
    def affine_runs(self) -> int:
        return 2 ** self.random_bits * (self.field_scalars + 3)

    def runs(self, strategy: str) -> int:
        """Protocol runs per input pair."""
        if strategy == 'exhaustive':
            return self.assignments
        if strategy == 'affine':
            return self.affine_runs
        raise InvalidInput(f'unknown audit strategy {strategy!r}, use one of '
                           + ', '.join(STRATEGIES))


@functools.lru_cache(maxsize=None)
def enumeration_cost(config: SessionConfig) -> EnumerationCost:
    """n_f and n_b of a configuration, after checking the layout against a
    dry run of the protocol."""
    layout = randomness_layout(config)
    expected = {(slot.seed, slot.purpose, slot.index): (slot.kind,) * slot.count
                for slot in layout}
    actual = dry_run_layout(config)
    if expected != actual:
        drift = sorted(set(expected.items()) ^ set(actual.items()))
        raise EnumerationError('randomness layout does not match the draws of '
                               f'a session: {drift}')
    return EnumerationCost(
        field_scalars=sum(s.count for s in layout if s.kind == 'field'),
        random_bits=sum(s.count for s in layout if s.kind == 'bit'),
        modulus=config.prime)


def build_assignment(layout: Sequence[RandomSlot], field_values: Sequence[int],
                     bit_values: Sequence[int]) -> Assignment:
    assignment: Assignment = defaultdict(dict)
    fields_used = bits_used = 0
    for slot in layout:
        if slot.kind == 'field':
            values = tuple(field_values[fields_used:fields_used + slot.count])
            fields_used += slot.count
        else:
            values = tuple(bit_values[bits_used:bits_used + slot.count])
            bits_used += slot.count
        assignment[slot.seed][(slot.purpose, slot.index)] = values
    if fields_used != len(field_values) or bits_used != len(bit_values):
        raise EnumerationError(f'assignment of {len(field_values)} field values '
                               f'and {len(bit_values)} bits does not fit a layout '
                               f'of {fields_used} and {bits_used}')
    return dict(assignment)


def run_enumerated_session(a: BitVector, b: BitVector, config: SessionConfig,
                           assignment: Mapping[str, Mapping[SlotKey, Sequence[int]]]
                           ) -> Transcript:
    """One session under an explicit assignment of every random value. The
    master's range check is off: audits run every assignment, admissible
    output or not."""
    parties = build_parties(a, b, config, enumerated_sources(assignment),
                            enforce_bound=False)
    return deliver_until_quiescent(parties)


def _digits(number: int, base: int, count: int) -> Tuple[int, ...]:
    digits = []
    for _ in range(count):
        number, digit = divmod(number, base)
        digits.append(digit)
    return tuple(digits)


@dataclass
class ViewDistribution:
    """Exact view counts over all randomness assignments."""
    counts: Dict[ViewKey, int]
    total: int

    def __post_init__(self) -> None:
        if sum(self.counts.values()) != self.total:
            raise EnumerationError(f'view counts add up to '
                                   f'{sum(self.counts.values())}, not {self.total}')

    def probabilities(self) -> Dict[bytes, Fraction]:
        return {canonical_bytes(key): Fraction(count, self.total)
                for key, count in self.counts.items()}

    def probability(self, key: ViewKey) -> Fraction:
        return Fraction(self.counts.get(key, 0), self.total)

    @property
    def support_size(self) -> int:
        return len(self.counts)

    def is_point(self) -> bool:
        return self.support_size == 1

    def marginal(self, project: Callable[[ViewKey], Hashable]
                 ) -> Dict[Hashable, Fraction]:
        grouped: Dict[Hashable, int] = Counter()
        for key, count in self.counts.items():
            grouped[project(key)] += count
        return {value: Fraction(count, self.total)
                for value, count in grouped.items()}

    def same_as(self, other: 'ViewDistribution') -> bool:
        if self.counts.keys() != other.counts.keys():
            return False
        return all(count * other.total == other.counts[key] * self.total
                   for key, count in self.counts.items())


# (skeleton, RREF basis of the field-value subspace, reduced representative)
Component = Tuple[Tuple[Any, ...], Tuple[Row, ...], Row]


@dataclass
class AffineViewDistribution:
    """Views as a multiset of affine subspaces, one per bit assignment. Each
    component is hit uniformly by the q^{n_f} field assignments."""
    components: Dict[Component, int]
    field_scalars: int
    random_bits: int
    modulus: int

    @property
    def total(self) -> int:
        return self.modulus ** self.field_scalars * 2 ** self.random_bits

    def expand(self) -> ViewDistribution:
        """Pointwise counts. Only for small subspaces."""
        q = self.modulus
        counts: Dict[ViewKey, int] = Counter()
        for (skeleton, basis, representative), multiplicity in self.components.items():
            weight = multiplicity * q ** (self.field_scalars - len(basis))
            for coefficients in product(range(q), repeat=len(basis)):
                counts[(skeleton, _combine(representative, basis,
                                           coefficients, q))] += weight
        return ViewDistribution(dict(counts), self.total)

    def skeletons(self) -> Dict[Tuple[Any, ...], List[Tuple[Tuple[Row, ...], Row, int]]]:
        grouped: Dict[Tuple[Any, ...], List[Tuple[Tuple[Row, ...], Row, int]]] = defaultdict(list)
        for (skeleton, basis, representative), multiplicity in self.components.items():
            grouped[skeleton].append((basis, representative, multiplicity))
        return dict(grouped)


Distribution = Union[ViewDistribution, AffineViewDistribution]


def _combine(base: Sequence[int], basis: Sequence[Row],
             coefficients: Sequence[int], modulus: int) -> Row:
    point = list(base)
    for coefficient, row in zip(coefficients, basis):
        if coefficient:
            point = [(value + coefficient * entry) % modulus
                     for value, entry in zip(point, row)]
    return tuple(point)


def _coset_weights(distribution: AffineViewDistribution,
                   entries: Sequence[Tuple[Tuple[Row, ...], Row, int]],
                   common: Sequence[Row]) -> Dict[Row, Fraction]:
    """Probability of each coset of the common subspace."""
    q, n_f = distribution.modulus, distribution.field_scalars
    weights: Dict[Row, Fraction] = defaultdict(Fraction)
    for basis, representative, multiplicity in entries:
        complement = quotient_basis(basis, common, q)
        if q ** len(complement) > SUBCOSET_LIMIT:
            raise EnumerationCapExceeded(q ** len(complement), SUBCOSET_LIMIT,
                                         'coset comparison')
        share = Fraction(multiplicity * q ** (n_f - len(basis) + len(common)),
                         distribution.total)
        for coefficients in product(range(q), repeat=len(complement)):
            point = _combine(representative, complement, coefficients, q)
            weights[reduce_against(point, common, q)] += share
    return dict(weights)


def _affine_equal(first: AffineViewDistribution,
                  second: AffineViewDistribution) -> bool:
    if first.modulus != second.modulus:
        return False
    q = first.modulus
    first_groups, second_groups = first.skeletons(), second.skeletons()
    if first_groups.keys() != second_groups.keys():
        return False
    for skeleton, entries in first_groups.items():
        others = second_groups[skeleton]
        common: Optional[List[Row]] = None
        for basis, _, _ in list(entries) + list(others):
            common = (list(basis) if common is None
                      else span_intersection(common, basis, q))
        assert common is not None
        if (_coset_weights(first, entries, common)
                != _coset_weights(second, others, common)):
            return False
    return True


def distributions_equal(first: Distribution, second: Distribution) -> bool:
    if isinstance(first, AffineViewDistribution) and isinstance(
            second, AffineViewDistribution):
        return _affine_equal(first, second)
    if isinstance(first, AffineViewDistribution):
        first = first.expand()
    if isinstance(second, AffineViewDistribution):
        second = second.expand()
    return first.same_as(second)


ExhaustiveTask = Tuple[BitVector, BitVector, SessionConfig,
                       Tuple[PartyId, ...], int, int]


def _exhaustive_chunk(task: ExhaustiveTask) -> Dict[PartyId, Counter]:
    a, b, config, parties, start, stop = task
    layout = randomness_layout(config)
    cost = enumeration_cost(config)
    field_space = config.prime ** cost.field_scalars
    counts: Dict[PartyId, Counter] = {party: Counter() for party in parties}
    for index in range(start, stop):
        bits_index, field_index = divmod(index, field_space)
        assignment = build_assignment(
            layout, _digits(field_index, config.prime, cost.field_scalars),
            _digits(bits_index, 2, cost.random_bits))
        transcript = run_enumerated_session(a, b, config, assignment)
        for party in parties:
            counts[party][project_view(transcript, party).split()] += 1
    return counts


def _check_points(count: int, modulus: int) -> List[Tuple[int, ...]]:
    return [(1,) * count, tuple((j + 2) % modulus for j in range(count))]


def _affine_chunk(task: ExhaustiveTask) -> Dict[PartyId, Counter]:
    a, b, config, parties, start, stop = task
    q = config.prime
    layout = randomness_layout(config)
    cost = enumeration_cost(config)
    n_f = cost.field_scalars
    origin = (0,) * n_f
    units = [tuple(int(i == j) for i in range(n_f)) for j in range(n_f)]
    checks = _check_points(n_f, q)
    counts: Dict[PartyId, Counter] = {party: Counter() for party in parties}
    for bits_index in range(start, stop):
        bits = _digits(bits_index, 2, cost.random_bits)
        views = [{party: project_view(run_enumerated_session(
                      a, b, config, build_assignment(layout, point, bits)),
                      party).split()
                  for party in parties}
                 for point in [origin] + units + checks]
        for party in parties:
            keys = [view[party] for view in views]
            skeleton, base = keys[0]
            if any(key[0] != skeleton for key in keys):
                raise EnumerationError(f'{party.label} view structure depends '
                                       f'on field randomness, bits {bits}')
            columns = [tuple((value - origin_value) % q
                             for value, origin_value in zip(key[1], base))
                       for key in keys[1:n_f + 1]]
            for point, (_, observed) in zip(checks, keys[n_f + 1:]):
                expected = _combine(base, columns, point, q)
                if expected != tuple(observed):
                    raise EnumerationError(f'{party.label} view is not affine '
                                           f'in the field randomness, bits {bits}')
            basis = tuple(row_reduce(columns, q))
            counts[party][(skeleton, basis,
                           reduce_against(base, basis, q))] += 1
    return counts


def _chunks(total: int, jobs: int) -> List[Tuple[int, int]]:
    size = max(1, -(-total // (8 * max(jobs, 2))))
    return [(start, min(start + size, total)) for start in range(0, total, size)]


def _run_tasks(worker: Callable[[ExhaustiveTask], Dict[PartyId, Counter]],
               tasks: Sequence[ExhaustiveTask], jobs: int,
               desc: str) -> Dict[PartyId, Counter]:
    merged: Dict[PartyId, Counter] = defaultdict(Counter)

    def merge(results: Iterable[Dict[PartyId, Counter]]) -> None:
        for partial in tqdm(results, total=len(tasks), desc=desc,
                            unit='chunk', leave=False):
            for party, counter in partial.items():
                merged[party].update(counter)

    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            merge(executor.map(worker, tasks))
    else:
        merge(map(worker, tasks))
    return dict(merged)


def plan(config: SessionConfig, strategy: str = 'auto',
         cap: int = DEFAULT_CAP, pairs: int = 1) -> Tuple[str, EnumerationCost]:
    """Resolves 'auto' and refuses enumerations above cap runs per input
    pair."""
    if strategy not in STRATEGIES:
        raise InvalidInput(f'unknown audit strategy {strategy!r}, use one of '
                           + ', '.join(STRATEGIES))
    cost = enumeration_cost(config)
    if strategy == 'auto':
        strategy = ('exhaustive' if cost.assignments * pairs <= EXHAUSTIVE_LIMIT
                    else 'affine')
    runs = cost.runs(strategy)
    if runs > cap:
        raise EnumerationCapExceeded(runs, cap, f'{strategy} enumeration')
    return strategy, cost


def enumerate_party_views(a: BitVector, b: BitVector, config: SessionConfig,
                          parties: Sequence[PartyId], strategy: str = 'auto',
                          cap: int = DEFAULT_CAP, jobs: int = 1
                          ) -> Dict[PartyId, Distribution]:
    """View distributions of several parties from one pass over the
    randomness."""
    strategy, cost = plan(config, strategy, cap)
    parties = tuple(parties)
    label = f'{strategy} a={a} b={b}'
    if strategy == 'exhaustive':
        tasks = [(a, b, config, parties, start, stop)
                 for start, stop in _chunks(cost.assignments, jobs)]
        counts = _run_tasks(_exhaustive_chunk, tasks, jobs, label)
        return {party: ViewDistribution(dict(counts[party]), cost.assignments)
                for party in parties}
    tasks = [(a, b, config, parties, start, stop)
             for start, stop in _chunks(2 ** cost.random_bits, jobs)]
    counts = _run_tasks(_affine_chunk, tasks, jobs, label)
    return {party: AffineViewDistribution(dict(counts[party]),
                                          cost.field_scalars, cost.random_bits,
                                          cost.modulus)
            for party in parties}


def enumerate_views(a: BitVector, b: BitVector, config: SessionConfig,
                    party: Union[PartyId, str], cap: int = DEFAULT_CAP,
                    strategy: str = 'exhaustive', jobs: int = 1) -> Distribution:
    """Distribution of one party's view for fixed inputs."""
    if isinstance(party, str):
        party = PartyId.parse(party)
    return enumerate_party_views(a, b, config, [party], strategy, cap, jobs)[party]


def input_pairs(n: int) -> List[InputPair]:
    vectors = [BitVector(bits) for bits in product((0, 1), repeat=n)]
    return [(a, b) for a in vectors for b in vectors]


def _pair_text(pair: InputPair) -> Dict[str, str]:
    return {'a': str(pair[0]), 'b': str(pair[1])}


def _survey(config: SessionConfig, parties: Sequence[PartyId], strategy: str,
            cap: int, jobs: int) -> Tuple[str, Dict[InputPair, Dict[PartyId, Distribution]]]:
    pairs = input_pairs(config.n)
    strategy, cost = plan(config, strategy, cap, len(pairs))
    log.info(f'Enumerating {len(pairs)} input pairs ({strategy}, '
             f'{cost.runs(strategy)} runs each)')
    return strategy, {pair: enumerate_party_views(pair[0], pair[1], config,
                                                  parties, strategy, cap, jobs)
                      for pair in pairs}


def _compare_classes(classes: Mapping[Any, Sequence[InputPair]],
                     distributions: Mapping[InputPair, Dict[PartyId, Distribution]],
                     party: PartyId) -> Tuple[int, Optional[Dict[str, Any]]]:
    violations, witness = 0, None
    for cls, members in classes.items():
        reference = members[0]
        for pair in members[1:]:
            if not distributions_equal(distributions[reference][party],
                                       distributions[pair][party]):
                violations += 1
                if witness is None:
                    witness = {'party': party.label, 'class': cls,
                               'reference': _pair_text(reference),
                               'differing': _pair_text(pair)}
    return violations, witness


def _verdict(check: str, strategy: str, config_list: Sequence[SessionConfig],
             pairs: int, violations: int, witness: Optional[Dict[str, Any]],
             note: Optional[str] = None) -> Verdict:
    runs = sum(enumeration_cost(c).runs(strategy) for c in config_list) * pairs
    assignments = sum(enumeration_cost(c).assignments for c in config_list) * pairs
    return Verdict(check=check, passed=violations == 0, strategy=strategy,
                   sessions=runs, assignments=assignments,
                   configs=[c.describe() for c in config_list],
                   witness=witness, violations=violations or None, note=note)


def check_client_privacy(config: SessionConfig, strategy: str = 'auto',
                         cap: int = DEFAULT_CAP, jobs: int = 1) -> Verdict:
    """Each client's view distribution is the same for every input pair."""
    clients = (PartyId.W1, PartyId.W2)
    strategy, distributions = _survey(config, clients, strategy, cap, jobs)
    pairs = list(distributions)
    violations, witness = 0, None
    for client in clients:
        count, found = _compare_classes({'all': pairs}, distributions, client)
        violations += count
        witness = witness or found
    return _verdict('client_privacy', strategy, [config], len(pairs),
                    violations, witness)


def check_master_privacy(config: SessionConfig, strategy: str = 'auto',
                         cap: int = DEFAULT_CAP, jobs: int = 1) -> Verdict:
    """The master's view distribution depends on the inputs only through
    y = a·b."""
    strategy, distributions = _survey(config, (PartyId.MASTER,), strategy,
                                      cap, jobs)
    classes: Dict[Any, List[InputPair]] = defaultdict(list)
    for pair in distributions:
        classes[brute_force_dot(*pair)].append(pair)
    violations, witness = _compare_classes(classes, distributions, PartyId.MASTER)
    return _verdict('master_privacy', strategy, [config], len(distributions),
                    violations, witness)


def length_hiding_configs(split_a: Tuple[int, int], split_b: Tuple[int, int],
                          prime: int, **options: Any
                          ) -> Tuple[SessionConfig, SessionConfig]:
    """Two configurations (n, n') with the same total length."""
    if sum(split_a) != sum(split_b):
        raise InvalidInput(f'splits {split_a} and {split_b} have different '
                           f'total lengths')
    return (SessionConfig.create(split_a[0], split_a[1], prime, **options),
            SessionConfig.create(split_b[0], split_b[1], prime, **options))


def _bound_shape(config: SessionConfig) -> Dict[PartyId, Any]:
    ones = BitVector.ones(config.n)
    _, transcript = run_session(ones, ones, config)
    return master_bound_shape(transcript)


def check_length_hiding(config_a: SessionConfig, config_b: SessionConfig,
                        strategy: str = 'auto', cap: int = DEFAULT_CAP,
                        jobs: int = 1) -> Verdict:
    """The master cannot tell (n_1, n'_1) from (n_2, n'_2) when
    n_1 + n'_1 = n_2 + n'_2: same message shapes, and for every y both
    configurations give the same view distribution."""
    if config_a.length != config_b.length:
        raise InvalidInput(f'total lengths {config_a.length} and '
                           f'{config_b.length} differ')
    if config_a.prime != config_b.prime:
        raise InvalidInput(f'primes {config_a.prime} and {config_b.prime} differ')
    shape_a, shape_b = _bound_shape(config_a), _bound_shape(config_b)
    if shape_a != shape_b:
        witness = {'structure': {config.n: {party.label: [list(entry) for entry in shape]
                                            for party, shape in s.items()}
                                 for config, s in ((config_a, shape_a),
                                                   (config_b, shape_b))}}
        strategy, _ = plan(config_a, strategy, cap)
        return _verdict('length_hiding', strategy, [config_a, config_b], 0,
                        1, witness, note='message shapes differ')
    if config_a == config_b:
        strategy, _ = plan(config_a, strategy, cap)
        return _verdict('length_hiding', strategy, [config_a], 0, 0, None,
                        note='single configuration for this length')
    master = (PartyId.MASTER,)
    strategy, first = _survey(config_a, master, strategy, cap, jobs)
    _, second = _survey(config_b, master, strategy, cap, jobs)
    references: Dict[int, InputPair] = {}
    for pair in first:
        references.setdefault(brute_force_dot(*pair), pair)
    violations, witness = 0, None
    for side, distributions in (('first', first), ('second', second)):
        for pair, dists in distributions.items():
            y = brute_force_dot(*pair)
            if y not in references:
                continue
            if not distributions_equal(first[references[y]][PartyId.MASTER],
                                       dists[PartyId.MASTER]):
                violations += 1
                if witness is None:
                    witness = {'party': 'Master', 'y': y,
                               'reference': {'n': config_a.n,
                                             **_pair_text(references[y])},
                               'differing': {'n': (config_a if side == 'first'
                                                   else config_b).n,
                                             **_pair_text(pair)}}
    cost_a, cost_b = enumeration_cost(config_a), enumeration_cost(config_b)
    return Verdict(
        check='length_hiding', passed=violations == 0, strategy=strategy,
        sessions=(len(first) * cost_a.runs(strategy)
                  + len(second) * cost_b.runs(strategy)),
        assignments=len(first) * cost_a.assignments + len(second) * cost_b.assignments,
        configs=[config_a.describe(), config_b.describe()],
        witness=witness, violations=violations or None)


def alternative_splits(config: SessionConfig) -> List[SessionConfig]:
    """Other (n, n') splits of the same total length that the prime admits."""
    return [SessionConfig(n=n, pad=config.length - n, prime=config.prime,
                          seeds=config.seeds, session_id=config.session_id,
                          pad_transport=config.pad_transport,
                          blind_key_sums=config.blind_key_sums)
            for n in range(1, config.length + 1)
            if n != config.n and config.prime > 2 * n]


def run_audit(config: SessionConfig, strategy: str = 'auto', cap: int = DEFAULT_CAP,
              jobs: int = 1) -> AuditReport:
    """Client privacy, master privacy and length hiding of one
    configuration. Every enumeration is planned before any runs."""
    alternatives = alternative_splits(config)
    pairs = 4 ** config.n
    plan(config, strategy, cap, pairs)
    for other in alternatives:
        plan(other, strategy, cap, 4 ** other.n)
    report = AuditReport()
    report.add(check_client_privacy(config, strategy, cap, jobs))
    report.add(check_master_privacy(config, strategy, cap, jobs))
    for other in alternatives or [config]:
        report.add(check_length_hiding(config, other, strategy, cap, jobs))
    return report
