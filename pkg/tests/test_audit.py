from fractions import Fraction
from itertools import product

import pytest
import yaml

from bimpctools.lib import (EnumerationCapExceeded, EnumerationError,
    InvalidInput, SetupError)
from bimpctools.doma import BitVector, brute_force_dot
from bimpctools.audit import (AffineViewDistribution, ViewDistribution,
    alternative_splits, build_assignment, check_client_privacy,
    check_length_hiding, check_master_privacy, distributions_equal,
    dry_run_layout, enumerate_views, enumeration_cost, length_hiding_configs,
    plan, randomness_layout, run_audit, run_enumerated_session)
from bimpctools.harness import deliver_until_quiescent, project_view
from bimpctools.protocol import PadTransport, SessionConfig, build_parties
from bimpctools.randomness import enumerated_sources
from bimpctools.wire import PartyId, StepTag


def config(n=1, pad=0, prime=3, **options):
    return SessionConfig.create(n, pad, prime, **options)

ZERO, ONE = BitVector((0,)), BitVector((1,))

@pytest.mark.parametrize('n, pad, transport, blind, n_f, n_b', [
    (1, 0, PadTransport.OBLIVIOUS, True, 6, 2),
    (1, 0, PadTransport.OBLIVIOUS, False, 5, 2),
    (2, 3, PadTransport.DIRECT, True, 20, 4),
    (2, 3, PadTransport.OBLIVIOUS, True, 26, 7),
    (3, 1, PadTransport.OBLIVIOUS, False, 20, 7),
])
def test_enumeration_cost(n, pad, transport, blind, n_f, n_b):
    cost = enumeration_cost(config(n, pad, 7, pad_transport=transport,
                                   blind_key_sums=blind))
    assert (cost.field_scalars, cost.random_bits) == (n_f, n_b)

def test_cost_example():
    cost = enumeration_cost(config())
    assert cost.assignments == 3**6 * 2**2
    assert cost.affine_runs == 4 * 9

def test_layout_matches_dry_run():
    c = config(2, 1, 5)
    layout = {(s.seed, s.purpose, s.index) for s in randomness_layout(c)}
    assert layout == set(dry_run_layout(c))

def test_cost_monotone():
    costs = [enumeration_cost(config(n, pad, 11)).assignments
             for n, pad in [(1, 0), (1, 1), (2, 1), (2, 2)]]
    assert costs == sorted(costs)

def test_cap():
    with pytest.raises(EnumerationCapExceeded) as err:
        plan(config(), 'exhaustive', cap=100)
    assert err.value.cost == 3**6 * 4
    assert err.value.cap == 100
    with pytest.raises(EnumerationCapExceeded):
        plan(config(20, 1, 41), 'auto')
    with pytest.raises(InvalidInput):
        plan(config(), 'sampling')

def test_auto_strategy():
    assert plan(config(), 'auto', pairs=4)[0] == 'exhaustive'
    assert plan(config(1, 1), 'auto', pairs=4)[0] == 'affine'

def test_assignment_must_fit_layout():
    layout = randomness_layout(config())
    with pytest.raises(EnumerationError):
        build_assignment(layout, (0,) * 5, (0, 0))

def test_enumerated_session_replays_assignment():
    c = config()
    layout = randomness_layout(c)
    assignment = build_assignment(layout, (1, 2, 0, 1, 2, 0), (1, 0))
    transcript = run_enumerated_session(ONE, ONE, c, assignment)
    assert transcript.count(StepTag.KEY_SUM) == 2
    view = project_view(transcript, PartyId.MASTER)
    assert view.split()[1][-2:] == (2, 0)

def test_w2_sees_uniform_masked_choice():
    distribution = enumerate_views(ONE, ZERO, config(), 'W2')
    assert isinstance(distribution, ViewDistribution)
    assert distribution.total == 3**6 * 4

    def masked_choice(key):
        skeleton, _ = key
        return next(entry[5] for entry in skeleton
                    if entry[0] == 'msg' and entry[2] == StepTag.OT_MASKED_CHOICE)

    assert distribution.marginal(masked_choice) == {(0,): Fraction(1, 2),
                                                   (1,): Fraction(1, 2)}

def test_master_golden_distribution():
    distribution = enumerate_views(ZERO, ZERO, config(), PartyId.MASTER)
    probabilities = distribution.probabilities()
    assert distribution.support_size == 2 * 3**6
    assert set(probabilities.values()) == {Fraction(1, 2 * 3**6)}
    assert sum(probabilities.values()) == 1
    assert not distribution.is_point()

def test_point_distribution():
    key = ((('msg', 1, 1, None, 1, None),), (0,))
    distribution = ViewDistribution({key: 5}, 5)
    assert distribution.is_point()
    assert distribution.probability(key) == 1
    with pytest.raises(EnumerationError):
        ViewDistribution({key: 4}, 5)

def test_same_as_normalizes():
    key = ((), (0,))
    other = ((), (1,))
    assert ViewDistribution({key: 1, other: 1}, 2).same_as(
        ViewDistribution({key: 3, other: 3}, 6))
    assert not ViewDistribution({key: 1, other: 1}, 2).same_as(
        ViewDistribution({key: 1, other: 2}, 3))

def test_strategies_agree():
    c = config()
    for party in PartyId:
        exhaustive = enumerate_views(ONE, ONE, c, party, strategy='exhaustive')
        affine = enumerate_views(ONE, ONE, c, party, strategy='affine')
        assert isinstance(affine, AffineViewDistribution)
        assert affine.expand().same_as(exhaustive)
        assert distributions_equal(affine, exhaustive)

def test_affine_detects_distinct_distributions():
    c = config(blind_key_sums=False)
    zero = enumerate_views(ZERO, ONE, c, 'Master', strategy='affine')
    one = enumerate_views(ONE, ZERO, c, 'Master', strategy='affine')
    assert not distributions_equal(zero, one)
    assert distributions_equal(zero, enumerate_views(ZERO, ZERO, c, 'Master',
                                                     strategy='affine'))

def test_client_privacy():
    verdict = check_client_privacy(config(), strategy='affine')
    assert verdict.passed
    assert verdict.sessions == 4 * 4 * 9

@pytest.mark.slow
def test_client_privacy_exhaustive():
    verdict = check_client_privacy(config(), strategy='exhaustive')
    assert verdict.passed
    assert verdict.assignments == 4 * 3**6 * 4

def test_client_privacy_with_pad():
    assert check_client_privacy(config(1, 1), strategy='affine').passed

def test_client_privacy_sabotage(zero_xor_mask):
    verdict = check_client_privacy(config(), strategy='affine')
    assert not verdict.passed
    assert verdict.witness['party'] == 'W1'
    assert verdict.witness['reference']['b'] != verdict.witness['differing']['b']

def test_master_privacy():
    assert check_master_privacy(config(), strategy='affine').passed
    assert check_master_privacy(config(1, 1), strategy='affine').passed

@pytest.mark.slow
def test_master_privacy_exhaustive():
    assert check_master_privacy(config(), strategy='exhaustive').passed

def test_unblinded_key_sums_leak_to_master():
    verdict = check_master_privacy(config(blind_key_sums=False), strategy='affine')
    assert not verdict.passed
    assert verdict.witness['class'] == 0

def test_length_hiding():
    first, second = length_hiding_configs((1, 1), (2, 0), 5)
    verdict = check_length_hiding(first, second, strategy='affine')
    assert verdict.passed
    assert len(verdict.configs) == 2

def test_length_hiding_direct_transport_fails():
    first, second = length_hiding_configs((1, 1), (2, 0), 5,
                                          pad_transport=PadTransport.DIRECT)
    verdict = check_length_hiding(first, second)
    assert not verdict.passed
    assert verdict.note == 'message shapes differ'

def test_length_hiding_identical():
    c = config(1, 1)
    assert check_length_hiding(c, c).passed

def test_length_hiding_preconditions():
    with pytest.raises(InvalidInput):
        check_length_hiding(config(1, 1, 5), config(1, 0, 5))
    with pytest.raises(InvalidInput):
        check_length_hiding(config(1, 1, 5), config(1, 1, 7))
    with pytest.raises(InvalidInput):
        length_hiding_configs((1, 1), (2, 1), 5)
    with pytest.raises(SetupError):
        length_hiding_configs((1, 1), (2, 0), 3)

def test_alternative_splits():
    assert alternative_splits(config(1, 1)) == []
    assert [c.n for c in alternative_splits(config(1, 2, 7))] == [2, 3]

def test_run_audit(tmp_path):
    report = run_audit(config(1, 1))
    assert report.passed
    assert [v.check for v in report.verdicts] == ['client_privacy',
                                                  'master_privacy',
                                                  'length_hiding']
    path = tmp_path/'audit.yaml'
    report.write(path)
    dumped = yaml.safe_load(path.read_text())
    assert dumped['passed'] is True
    assert dumped['checks'][0]['strategy'] == 'affine'
    assert 'witness' not in dumped['checks'][0]

def test_audit_report_deterministic():
    c = config(1, 1)
    assert run_audit(c).serialize() == run_audit(c).serialize()

def test_run_audit_refuses_before_running():
    with pytest.raises(EnumerationCapExceeded):
        run_audit(config(20, 1, 41))

def assert_correct(a, b, c, field_values, bits):
    assignment = build_assignment(randomness_layout(c), field_values, bits)
    parties = build_parties(a, b, c, enumerated_sources(assignment),
                            enforce_bound=False)
    deliver_until_quiescent(parties)
    master = parties[PartyId.MASTER]
    y = brute_force_dot(a, b)
    assert master.output == y, (a, b, field_values, bits)
    assert master.cancellation_residue().value == 2 * y % c.prime

@pytest.mark.slow
@pytest.mark.parametrize('prime', [3, 5])
def test_correct_under_every_assignment(prime):
    c = config(prime=prime)
    cost = enumeration_cost(c)
    for a, b in product((ZERO, ONE), repeat=2):
        for bits in product((0, 1), repeat=cost.random_bits):
            for field_values in product(range(prime), repeat=cost.field_scalars):
                assert_correct(a, b, c, field_values, bits)

@pytest.mark.slow
def test_correct_with_pad_on_affine_points():
    c = config(1, 1)
    cost = enumeration_cost(c)
    n_f = cost.field_scalars
    points = [(0,) * n_f, (1,) * n_f, tuple((j + 2) % 3 for j in range(n_f))]
    points += [tuple(int(i == j) for i in range(n_f)) for j in range(n_f)]
    for a, b in product((ZERO, ONE), repeat=2):
        for bits in product((0, 1), repeat=cost.random_bits):
            for field_values in points:
                assert_correct(a, b, c, field_values, bits)
