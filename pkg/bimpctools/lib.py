"""Shared plumbing for bimpctools: logging, errors, settings and file output."""
from pathlib import Path
import logging
import os
from typing import Any, Dict, Optional, Union

import toml
from atomicwrites import atomic_write

log = logging.getLogger("BiMPC tools")
log.setLevel(logging.INFO)
if (log.hasHandlers()):
    log.handlers.clear()
log.addHandler(logging.StreamHandler())


class BiMPCError(Exception):
    pass

class InvalidInput(BiMPCError):
    """Malformed bit vectors, mismatched lengths or unknown parties."""
    pass

class ConfigurationError(BiMPCError):
    pass

class SetupError(ConfigurationError):
    """Session parameters violate the field-size or length requirements."""
    pass

class ProtocolError(BiMPCError):
    pass

class IntegrityError(ProtocolError):
    """The reconstructed output is outside its admissible range."""
    pass

class HarnessError(BiMPCError):
    pass

class EnumerationError(BiMPCError):
    pass

class EnumerationCapExceeded(BiMPCError):
    def __init__(self, cost: int, cap: int, what: str = 'enumeration') -> None:
        super().__init__(f'{what} needs {cost} protocol runs, '
                         f'above the cap of {cap}')
        self.cost = cost
        self.cap = cap


MAX_MODULUS = 2**31
DEFAULT_CAP = 10**8
EXHAUSTIVE_LIMIT = 10**6

SETTINGS_FILE = 'bimpc.toml'
SETTINGS_TABLES = ('session', 'audit')


def settings_path(path: Optional[Union[str, Path]] = None) -> Optional[Path]:
    """Locate the settings file: explicit path, then $BIMPC_CONFIG, then
    bimpc.toml in the working directory when it exists."""
    if path:
        return Path(path)
    if os.environ.get('BIMPC_CONFIG'):
        return Path(os.environ['BIMPC_CONFIG'])
    local = Path(SETTINGS_FILE)
    return local if local.exists() else None


def load_settings(path: Optional[Union[str, Path]] = None) -> Dict[str, Dict[str, Any]]:
    """Read the [session] and [audit] tables of a toml settings file.
    Missing file or tables give empty dictionaries."""
    found = settings_path(path)
    settings: Dict[str, Dict[str, Any]] = {table: {} for table in SETTINGS_TABLES}
    if found is None:
        return settings
    try:
        raw = toml.loads(found.read_text())
    except (OSError, toml.TomlDecodeError) as err:
        raise ConfigurationError(f'Cannot read settings file {found}: {err}')
    for table in SETTINGS_TABLES:
        value = raw.get(table, {})
        if not isinstance(value, dict):
            raise ConfigurationError(f'[{table}] in {found} is not a table')
        settings[table] = value
    unknown = set(raw) - set(SETTINGS_TABLES)
    if unknown:
        log.warning(f'Ignoring unknown tables in {found}: '
                    + ', '.join(sorted(unknown)))
    log.debug(f'Loaded settings from {found}')
    return settings


def write_text_atomic(path: Union[str, Path], text: str) -> None:
    """Write text to path so that readers never see a partial file."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with atomic_write(str(path), overwrite=True) as out:
        out.write(text)
