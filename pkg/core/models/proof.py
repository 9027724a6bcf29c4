from enum import Enum
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field


class Severity(str, Enum):
    ERROR = 'error'
    MEDIUM = 'medium'
    WARNING = 'warning'
    INFO = 'info'


class Diagnostic(BaseModel):
    model_config = ConfigDict(frozen=True)

    severity: Severity
    file: str
    line: int = Field(ge=1)
    column: int = Field(ge=1)
    message: str
    counterexample: Optional[str] = None


class ProofReport(BaseModel):
    diagnostics: list[Diagnostic] = []
    exit_status: int = 0
    raw_output: str = ''
    duration: float = 0.0
    # Timed out or crashed: neither verified nor a genuine failure
    unresolved: bool = False

    def of_severity(self, severity):
        return [d for d in self.diagnostics if d.severity == severity]

    @property
    def errors(self):
        return self.of_severity(Severity.ERROR)

    @property
    def mediums(self):
        return self.of_severity(Severity.MEDIUM)

    @property
    def verified(self):
        return (
            not self.unresolved
            and self.exit_status == 0
            and not self.errors
            and not self.mediums
        )

    def counts(self):
        return {severity.value: len(self.of_severity(severity)) for severity in Severity}


class ProverBackend(str, Enum):
    SUBPROCESS = 'subprocess'
    REPLAY = 'replay'
    RECORD = 'record'


class ProverSettings(BaseModel):
    model_config = ConfigDict(frozen=True)

    binary: str = 'gnatprove'
    mode: str = 'all'
    level: Optional[int] = None
    steps: Optional[int] = None
    timeout_secs: int = Field(default=300, ge=1)
    extra_args: tuple[str, ...] = ()

    def key_fields(self):
        """Settings that influence the proof result (the timeout only bounds wall time)"""
        return {
            'mode': self.mode,
            'level': self.level,
            'steps': self.steps,
            'extra_args': list(self.extra_args),
        }
