"""
GNATprove invocation and output parsing.

Three backends share one entry point: `subprocess` runs the real tool in a
scratch copy of the project, `replay` answers from a recorded cassette and
`record` runs the tool and appends what it saw to the cassette.
"""
import hashlib
import logging
import re
import shutil
import subprocess
import tempfile
import time
from pathlib import Path

from django.conf import settings
from django.core.exceptions import ValidationError

from ..exceptions import ProverFailure, ToolNotFound
from ..models import Diagnostic, ProofReport, ProverBackend, ProverSettings, Severity
from ..utils.validators import validate_overlay
from .cassette import Cassette, request_digest

logger = logging.getLogger(__name__)

_DIAGNOSTIC_RE = re.compile(
    r'^(?P<file>.+?):(?P<line>\d+):(?P<column>\d+):\s(?P<severity>error|medium|high|low|warning|info):\s(?P<message>.*)$'
)

# Unproved checks ranked "high"/"low" by GNATprove are reported as mediums
_SEVERITY_ALIASES = {'high': Severity.MEDIUM, 'low': Severity.MEDIUM}

# Build artifacts never copied into the scratch project
_SCRATCH_IGNORE = shutil.ignore_patterns('obj', 'gnatprove', '*.ali', '*.o', '.git')

TIMEOUT_EXIT_STATUS = -1


def _decode(output):
    """GNATprove output as text; undecodable bytes become U+FFFD"""
    if isinstance(output, bytes):
        return output.decode('utf-8', errors='replace')
    return output or ''


def parse_diagnostics(raw):
    """Extract `<file>:<line>:<col>: <severity>: <message>` lines from GNATprove output"""
    diagnostics = []
    attach_to = None  # index of the medium collecting continuation lines
    continuation = []

    def flush():
        if attach_to is not None and continuation:
            diagnostics[attach_to] = diagnostics[attach_to].model_copy(
                update={'counterexample': '\n'.join(continuation)}
            )

    for line in (raw or '').splitlines():
        match = _DIAGNOSTIC_RE.match(line)
        if match:
            flush()
            continuation = []
            severity = match.group('severity')
            severity = _SEVERITY_ALIASES.get(severity) or Severity(severity)
            line_number = int(match.group('line'))
            column = int(match.group('column'))
            if line_number < 1 or column < 1:
                attach_to = None
                continue
            diagnostics.append(Diagnostic(
                severity=severity,
                file=match.group('file'),
                line=line_number,
                column=column,
                message=match.group('message'),
            ))
            attach_to = len(diagnostics) - 1 if severity == Severity.MEDIUM else None
        elif attach_to is not None and line[:1].isspace() and line.strip():
            continuation.append(line)
        else:
            flush()
            continuation = []
            attach_to = None

    flush()
    return diagnostics


def build_report(raw_output, exit_status, duration):
    diagnostics = parse_diagnostics(raw_output)
    has_errors = any(d.severity == Severity.ERROR for d in diagnostics)
    # A non-zero exit without any error message means the tool itself failed
    unresolved = exit_status == TIMEOUT_EXIT_STATUS or (exit_status != 0 and not has_errors)
    return ProofReport(
        diagnostics=diagnostics,
        exit_status=exit_status,
        raw_output=raw_output,
        duration=duration,
        unresolved=unresolved,
    )


def report_digest(report):
    return hashlib.sha256(report.raw_output.encode('utf-8')).hexdigest()


def default_prover_settings(**overrides):
    values = {
        'binary': settings.GNATPROVE_BIN,
        'mode': settings.GNATPROVE_MODE,
        'level': settings.GNATPROVE_LEVEL,
        'steps': settings.GNATPROVE_STEPS,
        'timeout_secs': settings.GNATPROVE_TIMEOUT,
    }
    values.update({k: v for k, v in overrides.items() if v is not None})
    return ProverSettings(**values)


class ProverService:
    """A prover handle: backend, invocation settings and optional cassette"""

    def __init__(self, backend=ProverBackend.SUBPROCESS, prover_settings=None, cassette=None, scratch_dir=None):
        self.backend = ProverBackend(backend)
        self.settings = prover_settings or default_prover_settings()
        self.scratch_dir = scratch_dir if scratch_dir is not None else settings.PRAGMA_BENCH_SCRATCH_DIR

        if self.backend in (ProverBackend.REPLAY, ProverBackend.RECORD) and cassette is None:
            raise ValidationError(f"The {self.backend.value} prover backend requires a cassette")
        if self.backend == ProverBackend.REPLAY and not isinstance(cassette, Cassette):
            if not Path(cassette).exists():
                raise ValidationError(f"Prover cassette {cassette} does not exist")
        self.cassette = cassette if isinstance(cassette, Cassette) or cassette is None else Cassette(cassette)

    def request_key(self, project, overlay=None):
        """Digest of every project source (after overlay) plus the result-relevant settings"""
        overlay = validate_overlay(project, overlay)
        files = {}
        for relative in project.files():
            text = overlay[relative] if relative in overlay else project.read(relative)
            files[relative] = hashlib.sha256(text.encode('utf-8')).hexdigest()
        return request_digest({'files': files, 'settings': self.settings.key_fields()})

    def command(self, project):
        command = [self.settings.binary, '-P', project.project_file, f'--mode={self.settings.mode}']
        if self.settings.level is not None:
            command.append(f'--level={self.settings.level}')
        if self.settings.steps is not None:
            command.append(f'--steps={self.settings.steps}')
        command.extend(self.settings.extra_args)
        return command

    def run(self, project, overlay=None):
        """Prove `project` with `overlay` files substituted"""
        overlay = validate_overlay(project, overlay)

        if self.backend == ProverBackend.REPLAY:
            key = self.request_key(project, overlay)
            entry = self.cassette.get(key)
            logger.debug(f"Replayed proof {key[:12]} for {project.name}")
            return build_report(entry['raw_output'], entry['exit_status'], entry['duration'])

        report = self._run_subprocess(project, overlay)

        if self.backend == ProverBackend.RECORD:
            key = self.request_key(project, overlay)
            self.cassette.put(key, {
                'raw_output': report.raw_output,
                'exit_status': report.exit_status,
                'duration': report.duration,
            })
            logger.info(f"Recorded proof {key[:12]} for {project.name}")

        return report

    def _run_subprocess(self, project, overlay):
        with tempfile.TemporaryDirectory(prefix='pragma-bench-', dir=self.scratch_dir) as scratch:
            workdir = Path(scratch) / 'project'
            shutil.copytree(project.root, workdir, ignore=_SCRATCH_IGNORE)
            for relative, text in overlay.items():
                (workdir / relative).write_text(text, encoding='utf-8')

            command = self.command(project)
            logger.info(f"Running {' '.join(command)} for {project.name}")
            started = time.monotonic()
            try:
                completed = subprocess.run(
                    command,
                    cwd=workdir,
                    stdout=subprocess.PIPE,
                    stderr=subprocess.STDOUT,
                    timeout=self.settings.timeout_secs,
                    check=False,
                )
            except FileNotFoundError as exc:
                raise ToolNotFound(f"{self.settings.binary} not found on PATH") from exc
            except subprocess.TimeoutExpired as exc:
                output = _decode(exc.output)
                logger.warning(f"GNATprove timed out after {self.settings.timeout_secs}s on {project.name}")
                return build_report(output, TIMEOUT_EXIT_STATUS, round(time.monotonic() - started, 3))
            except OSError as exc:
                raise ProverFailure(f"Could not run {self.settings.binary}: {exc}") from exc

            duration = round(time.monotonic() - started, 3)

        report = build_report(_decode(completed.stdout), completed.returncode, duration)
        if report.unresolved:
            logger.warning(f"GNATprove exited with {completed.returncode} on {project.name} without diagnostics")
        return report
