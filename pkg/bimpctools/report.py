from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import yaml

from bimpctools.lib import log, write_text_atomic


@dataclass
class Verdict:
    check: str
    passed: bool
    strategy: str
    # protocol runs actually executed
    sessions: int = 0
    # randomness assignments covered, over all input pairs
    assignments: int = 0
    configs: List[Dict[str, Any]] = field(default_factory=list)
    witness: Optional[Dict[str, Any]] = None
    violations: Optional[int] = None
    note: Optional[str] = None

    def asdict(self) -> Dict[str, Any]:
        return {k: v for k, v in asdict(self).items() if v is not None}

    def summary(self) -> str:
        status = 'pass' if self.passed else 'FAIL'
        return (f'{self.check}: {status} ({self.strategy}, '
                f'{self.sessions} sessions)')


@dataclass
class AuditReport:
    verdicts: List[Verdict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(verdict.passed for verdict in self.verdicts)

    def add(self, verdict: Verdict) -> Verdict:
        self.verdicts.append(verdict)
        log.info(verdict.summary())
        return verdict

    def asdict(self) -> Dict[str, Any]:
        return {'passed': self.passed,
                'checks': [verdict.asdict() for verdict in self.verdicts]}

    def serialize(self) -> str:
        return yaml.safe_dump(self.asdict(), sort_keys=False)

    def write(self, path: Union[str, Path]) -> None:
        write_text_atomic(path, self.serialize())
        log.info(f'Audit report written to {path}')
