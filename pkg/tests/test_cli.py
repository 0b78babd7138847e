import pytest
from click.testing import CliRunner
import yaml

from bimpctools import __version__
from bimpctools.bimpc import cli
from bimpctools.doma import BitVector
from bimpctools.protocol import SessionConfig, run_session


@pytest.fixture
def inputs(tmp_path):
    def write(a, b):
        (tmp_path/'a.txt').write_text(a + '\n')
        (tmp_path/'b.txt').write_text(b + '\n')
        return ['--input-a', str(tmp_path/'a.txt'),
                '--input-b', str(tmp_path/'b.txt')]
    return write

def invoke(*args, env=None):
    return CliRunner().invoke(cli, list(args), env=env)

def last_line(result):
    return result.output.strip().splitlines()[-1]

@pytest.mark.parametrize('a, b, y', [('101101', '111001', '3'),
                                     ('0', '1', '0'),
                                     ('1 1 1', '111', '3')])
def test_run(inputs, a, b, y):
    result = invoke('run', *inputs(a, b), '--seed', '1')
    assert result.exit_code == 0
    assert last_line(result) == y

def test_run_direct_transport(inputs):
    result = invoke('run', *inputs('1101', '0111'), '--pad', '2',
                    '--pad-transport', 'direct', '--no-key-blinding')
    assert result.exit_code == 0
    assert last_line(result) == '2'

def test_run_not_prime(inputs, caplog):
    result = invoke('run', *inputs('1', '1'), '--prime', '4')
    assert result.exit_code == 3
    assert 'not prime' in caplog.text

def test_run_small_prime(inputs):
    assert invoke('run', *inputs('101', '111'), '--prime', '5').exit_code == 3

def test_run_bad_input(inputs, caplog):
    result = invoke('run', *inputs('10x1', '1011'))
    assert result.exit_code == 2
    assert 'a.txt' in caplog.text

def test_run_length_mismatch(inputs):
    assert invoke('run', *inputs('101', '10')).exit_code == 2

def test_run_deterministic(inputs, tmp_path):
    args = inputs('1101', '1011')
    first, second = tmp_path/'first.yaml', tmp_path/'second.yaml'
    assert invoke('run', *args, '--seed', '42', '--transcript', str(first)).exit_code == 0
    assert invoke('run', *args, '--seed', '42', '--transcript', str(second)).exit_code == 0
    assert first.read_bytes() == second.read_bytes()
    assert 'n' not in yaml.safe_load(first.read_text())['header']

def test_run_interleaved_follows_seed(inputs, tmp_path):
    path, expected = tmp_path/'cli.yaml', tmp_path/'expected.yaml'
    result = invoke('run', *inputs('1101', '1011'), '--seed', '9',
                    '--schedule', 'interleaved', '--transcript', str(path))
    assert result.exit_code == 0
    assert last_line(result) == '2'
    _, transcript = run_session(BitVector.from_text('1101'),
                                BitVector.from_text('1011'),
                                SessionConfig.create(4, seed='9'),
                                'interleaved', schedule_seed='9')
    transcript.dump(expected, redact=True)
    assert path.read_bytes() == expected.read_bytes()

def test_run_graph(inputs, tmp_path):
    path = tmp_path/'flow.graphml'
    result = invoke('run', *inputs('11', '11'), '--graph', str(path))
    assert result.exit_code == 0
    assert path.exists()

def test_settings_precedence(inputs, tmp_path):
    args = inputs('10', '11')
    config = tmp_path/'bimpc.toml'
    config.write_text('[session]\nprime = 4\n')
    result = invoke('--config', str(config), 'run', *args)
    assert result.exit_code == 3
    result = invoke('--config', str(config), 'run', *args, '--prime', '7')
    assert result.exit_code == 0
    result = invoke('--config', str(config), 'run', *args,
                    env={'BIMPC_PRIME': '7'})
    assert result.exit_code == 0
    config.write_text('[session]\nprime = 7\n')
    result = invoke('run', *args, env={'BIMPC_PRIME': '4',
                                       'BIMPC_CONFIG': str(config)})
    assert result.exit_code == 3

def test_broken_settings(inputs, tmp_path, caplog):
    config = tmp_path/'bimpc.toml'
    config.write_text('[session\n')
    result = invoke('--config', str(config), 'run', *inputs('1', '1'))
    assert result.exit_code == 3
    assert 'Cannot read settings file' in caplog.text

def test_audit(tmp_path):
    out = tmp_path/'report.yaml'
    result = invoke('audit', '--out', str(out))
    assert result.exit_code == 0
    assert result.output.count('pass') == 3
    report = yaml.safe_load(out.read_text())
    assert report['passed'] is True
    assert [c['check'] for c in report['checks']] == ['client_privacy',
                                                      'master_privacy',
                                                      'length_hiding']

@pytest.mark.slow
def test_audit_exhaustive(tmp_path):
    out = tmp_path/'report.yaml'
    result = invoke('audit', '--n', '1', '--pad', '0', '--prime', '3',
                    '--out', str(out))
    assert result.exit_code == 0
    assert all(c['strategy'] == 'exhaustive'
               for c in yaml.safe_load(out.read_text())['checks'])

def test_audit_leak_exits_1(tmp_path):
    out = tmp_path/'report.yaml'
    result = invoke('audit', '--no-key-blinding', '--strategy', 'affine',
                    '--out', str(out))
    assert result.exit_code == 1
    report = yaml.safe_load(out.read_text())
    assert not report['passed']
    failed = [c for c in report['checks'] if not c['passed']]
    assert [c['check'] for c in failed] == ['master_privacy']
    assert 'witness' in failed[0]

def test_audit_cap(tmp_path, caplog):
    result = invoke('audit', '--n', '20', '--out', str(tmp_path/'report.yaml'))
    assert result.exit_code == 5
    assert 'above the cap' in caplog.text
    assert not (tmp_path/'report.yaml').exists()

def test_audit_cap_from_settings(tmp_path):
    config = tmp_path/'bimpc.toml'
    config.write_text('[audit]\ncap = 10\n')
    result = invoke('--config', str(config), 'audit',
                    '--out', str(tmp_path/'report.yaml'))
    assert result.exit_code == 5

def test_selftest():
    result = invoke('selftest', '--random-cases', '10', '--sessions', '5')
    assert result.exit_code == 0
    lines = result.output.strip().splitlines()
    assert len(lines) >= 3
    assert all('passed' in line for line in lines)

def test_check_alias():
    result = invoke('check', '--random-cases', '0', '--sessions', '1')
    assert result.exit_code == 0
    assert 'triot' in result.output

def test_selftest_detects_broken_triot(triot_same_pad):
    result = invoke('selftest', '--random-cases', '0', '--sessions', '1')
    assert result.exit_code == 1
    assert 'triot: FAILED' in result.output

def test_selftest_detects_broken_doma(doma_mod_l_plus_one):
    result = invoke('selftest', '--random-cases', '0', '--sessions', '1')
    assert result.exit_code == 1
    assert "doma-and: FAILED after 4 cases: {'inputs': ['1', '1']" in result.output

def test_prefix_and_version(inputs):
    result = invoke('r', *inputs('11', '01'), '--seed', '3')
    assert result.exit_code == 0
    assert last_line(result) == '1'
    result = invoke('--version')
    assert __version__ in result.output

def test_debug_raises(inputs):
    result = invoke('--debug', 'run', *inputs('10', '11'), '--prime', '4')
    assert result.exit_code != 0
    assert result.exception is not None
