import logging
import secrets
import sys
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Type

import click

from bimpctools import __version__
from bimpctools.lib import (log, load_settings, BiMPCError, InvalidInput,
    ConfigurationError, ProtocolError, HarnessError, EnumerationError,
    EnumerationCapExceeded, DEFAULT_CAP)
from bimpctools.doma import BitVector, check_same_length
from bimpctools.protocol import PadTransport, SessionConfig, run_session
from bimpctools.harness import SCHEDULES
from bimpctools.graph import MessageFlowGraph
from bimpctools.audit import STRATEGIES, run_audit
from bimpctools.selftest import run_selftest

# Click aliases from Stephen Rauch at
# https://stackoverflow.com/questions/46641928
class CustomMultiCommand(click.Group):
    def command(self, *args, **kwargs):
        """Behaves the same as `click.Group.command()` except if passed
        a list of names, all after the first will be aliases for the first.
        """
        def decorator(f):
            # Click consumes f.__click_params__ on each registration, so
            # give every alias its own copy of the decorated options.
            params = list(getattr(f, '__click_params__', []))
            if args and isinstance(args[0], list):
                _args = [args[0][0]] + list(args[1:])
                for alias in args[0][1:]:
                    f.__click_params__ = list(params)
                    cmd = super(CustomMultiCommand, self).command(
                        alias, *args[1:], **kwargs)(f)
                    cmd.short_help = "Alias for '{}'".format(_args[0])
                    cmd.hidden = True
            else:
                _args = args
            f.__click_params__ = list(params)
            cmd = super(CustomMultiCommand, self).command(
                *_args, **kwargs)(f)
            return cmd

        return decorator

    """Allows the user to shorten commands to a (unique) prefix."""
    def get_command(self, ctx, cmd_name):
        rv = click.Group.get_command(self, ctx, cmd_name)
        if rv is not None:
            return rv
        matches = [x for x in self.list_commands(ctx)
                   if x.startswith(cmd_name)]
        if not matches:
            return None
        elif len(matches) == 1:
            return click.Group.get_command(self, ctx, matches[0])
        ctx.fail('Too many matches: %s' % ', '.join(sorted(matches)))

# Global state set by the group callback, as a lazy way of propagating
# the global options.
debug = False

# Most specific classes first.
EXIT_CODES: Tuple[Tuple[Type[BaseException], int], ...] = (
    (EnumerationCapExceeded, 5),
    (InvalidInput, 2),
    (ConfigurationError, 3),
    (ProtocolError, 4),
    (HarnessError, 4),
    (EnumerationError, 4),
)
INTERNAL_ERROR = 4

def exit_code(exc: BaseException) -> int:
    for cls, code in EXIT_CODES:
        if isinstance(exc, cls):
            return code
    return INTERNAL_ERROR

def handle_exception(exc, msg):
    if debug:
        raise exc
    else:
        log.error(msg)
        sys.exit(exit_code(exc))

def read_input(path: str) -> BitVector:
    """One bit vector per file, whitespace ignored."""
    try:
        text = Path(path).read_text()
    except (OSError, UnicodeDecodeError) as err:
        raise InvalidInput(f'Cannot read {path}: {err}')
    try:
        return BitVector.from_text(text)
    except InvalidInput as err:
        raise InvalidInput(f'{path}: {err}')

@click.group(cls=CustomMultiCommand, context_settings={ 'help_option_names':['-h', '--help']})
@click.option('--config', 'config_path', default=None, envvar='BIMPC_CONFIG',
              type=click.Path(dir_okay=False),
              help='Settings file with [session] and [audit] tables '
                   '(default: ./bimpc.toml when present).')
@click.option('--debug', 'python_debug', default=False, is_flag=True,
              envvar='BIMPC_DEBUG',
              help='Log every delivery and display python tracebacks in case of error.')
@click.version_option(__version__)
@click.pass_context
def cli(ctx: click.Context, config_path: Optional[str], python_debug: bool) -> None:
    """Simulate and audit BiMPC, the two-client private binary dot product.
    Use bimpc COMMAND --help to get more help on any specific command."""
    global debug
    debug = python_debug
    log.setLevel(logging.DEBUG if debug else logging.INFO)
    try:
        settings = load_settings(config_path)
    except BiMPCError as err:
        handle_exception(err, str(err))
    defaults: Dict[str, Dict[str, Any]] = {'run': settings['session'],
                                           'audit': settings['audit']}
    ctx.default_map = defaults

@cli.command()
@click.option('--input-a', required=True, envvar='BIMPC_INPUT_A',
              type=click.Path(exists=True, dir_okay=False),
              help="File holding W1's bit vector a.")
@click.option('--input-b', required=True, envvar='BIMPC_INPUT_B',
              type=click.Path(exists=True, dir_okay=False),
              help="File holding W2's bit vector b.")
@click.option('--prime', type=int, default=None, envvar='BIMPC_PRIME',
              help='Field size q, a prime above 2n (default: smallest such prime).')
@click.option('--pad', type=int, default=None, envvar='BIMPC_PAD',
              help="Length pad n' hiding n from the master (default: n).")
@click.option('--seed', default=None, envvar='BIMPC_SEED',
              help='Harness seed. A fresh one is drawn and logged when omitted.')
@click.option('--transcript', 'transcript_path', default=None,
              envvar='BIMPC_TRANSCRIPT', type=click.Path(dir_okay=False),
              help='Write the message transcript as YAML.')
@click.option('--graph', 'graph_path', default=None, envvar='BIMPC_GRAPH',
              type=click.Path(dir_okay=False),
              help='Write the message-flow graph (.dot, .gexf, .graphml, .pdf, ...).')
@click.option('--pad-transport', default=PadTransport.OBLIVIOUS.value,
              envvar='BIMPC_PAD_TRANSPORT',
              type=click.Choice([t.value for t in PadTransport]),
              help='Deliver the length pad through dummy OT slots or as a plain vector.')
@click.option('--key-blinding/--no-key-blinding', 'blind_key_sums',
              default=True, envvar='BIMPC_KEY_BLINDING',
              help='Blind the key sums with a scalar shared by the clients.')
@click.option('--schedule', default='fifo', envvar='BIMPC_SCHEDULE',
              type=click.Choice(SCHEDULES),
              help='Message delivery order.')
def run(input_a: str, input_b: str, prime: Optional[int], pad: Optional[int],
        seed: Optional[str], transcript_path: Optional[str],
        graph_path: Optional[str], pad_transport: str, blind_key_sums: bool,
        schedule: str) -> None:
    """Run one session on two input files and print y = a·b."""
    try:
        a, b = read_input(input_a), read_input(input_b)
        n = check_same_length([a, b])
        if seed is None:
            seed = str(secrets.randbits(64))
            log.info(f'Chosen seed {seed}, replay with --seed {seed}')
        config = SessionConfig.create(n, pad, prime, seed,
                                      pad_transport=PadTransport(pad_transport),
                                      blind_key_sums=blind_key_sums)
        y, transcript = run_session(a, b, config, schedule, schedule_seed=seed)
        if transcript_path:
            transcript.dump(transcript_path, redact=not debug)
        if graph_path:
            MessageFlowGraph.from_transcript(transcript).write(Path(graph_path))
    except BiMPCError as err:
        handle_exception(err, str(err))
    click.echo(y)

@cli.command()
@click.option('--n', 'n', type=int, default=1, envvar='BIMPC_N',
              help='Input length n.')
@click.option('--pad', type=int, default=1, envvar='BIMPC_PAD',
              help="Length pad n'.")
@click.option('--prime', type=int, default=None, envvar='BIMPC_PRIME',
              help='Field size q (default: smallest prime above 2n).')
@click.option('--cap', type=int, default=DEFAULT_CAP, envvar='BIMPC_CAP',
              help='Refuse enumerations needing more protocol runs per input pair.')
@click.option('--jobs', type=click.IntRange(min=1), default=1,
              envvar='BIMPC_JOBS', help='Worker processes for the enumeration.')
@click.option('--strategy', default='auto', envvar='BIMPC_STRATEGY',
              type=click.Choice(STRATEGIES),
              help='Exhaustive counting, affine subspaces, or the cheapest exact one.')
@click.option('--pad-transport', default=PadTransport.OBLIVIOUS.value,
              envvar='BIMPC_PAD_TRANSPORT',
              type=click.Choice([t.value for t in PadTransport]))
@click.option('--key-blinding/--no-key-blinding', 'blind_key_sums',
              default=True, envvar='BIMPC_KEY_BLINDING')
@click.option('--out', required=True, envvar='BIMPC_OUT',
              type=click.Path(dir_okay=False),
              help='Path of the YAML audit report.')
def audit(n: int, pad: int, prime: Optional[int], cap: int, jobs: int,
          strategy: str, pad_transport: str, blind_key_sums: bool,
          out: str) -> None:
    """Check client privacy, master privacy and length hiding by
    enumerating all protocol randomness."""
    try:
        config = SessionConfig.create(n, pad, prime, seed=0,
                                      pad_transport=PadTransport(pad_transport),
                                      blind_key_sums=blind_key_sums)
        report = run_audit(config, strategy, cap, jobs)
        report.write(out)
    except BiMPCError as err:
        handle_exception(err, str(err))
    for verdict in report.verdicts:
        click.echo(verdict.summary())
    if not report.passed:
        sys.exit(1)

@cli.command(['selftest', 'check'])
@click.option('--random-cases', type=int, default=10**4,
              envvar='BIMPC_RANDOM_CASES',
              help='Random DoMA cases after the exhaustive ones.')
@click.option('--sessions', type=int, default=100, envvar='BIMPC_SESSIONS',
              help='Randomized end-to-end sessions.')
@click.option('--seed', type=int, default=0, envvar='BIMPC_SEED')
def selftest(random_cases: int, sessions: int, seed: int) -> None:
    """Check DoMA, triOT and full sessions against their oracles."""
    try:
        results = run_selftest(random_cases, sessions, seed)
    except BiMPCError as err:
        handle_exception(err, str(err))
    for result in results:
        click.echo(result.summary())
    if not all(result.passed for result in results):
        sys.exit(1)


def safe_cli():
    try:
        cli() # pylint: disable=no-value-for-parameter
    except Exception as err:
        handle_exception(err, str(err))

if __name__ == "__main__":
    # This allows `python3 -m bimpctools.bimpc`.
    safe_cli()
