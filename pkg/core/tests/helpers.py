"""Fixture access and test doubles shared by the test modules"""
import threading
from pathlib import Path

from django.conf import settings

from core.models import BenchmarkCase, Manifest, ManifestCase, ProofReport, Schema, SparkProject
from core.services.bench_service import enumerate_cases, load_corpus
from core.services.llm_service import oracle_body
from core.services.prover_service import build_report

FIXTURES = Path(settings.PRAGMA_BENCH_FIXTURES)
CORPUS = FIXTURES / 'corpus'
GNATPROVE_OUTPUTS = FIXTURES / 'gnatprove'

DOUBLE_BODY = (CORPUS / 'double' / 'double.adb').read_text(encoding='utf-8')

DOUBLE_WITHOUT_INVARIANTS = (
    "procedure Double_Number (X : in Natural; Result : out Natural) is\n"
    "   Count : Natural := 0;\n"
    "begin\n"
    "   Result := 0;\n"
    "   while Count < X loop\n"
    "      Result := Result + 2;\n"
    "      Count := Count + 1;\n"
    "   end loop;\n"
    "end Double_Number;\n"
)


def gnatprove_output(name):
    return (GNATPROVE_OUTPUTS / f'{name}.out').read_text(encoding='utf-8')


def fixture_report(name, exit_status=0, duration=1.0):
    return build_report(gnatprove_output(name), exit_status, duration)


def corpus_projects():
    return {project.name: project for project in load_corpus(CORPUS)}


def corpus_source_files():
    return sorted(path for path in CORPUS.rglob('*') if path.suffix in ('.adb', '.ads', '.gpr'))


def make_draft(project_name, schema, index=0):
    return enumerate_cases(corpus_projects()[project_name], Schema(schema))[index]


def make_case(project_name='double', schema=Schema.ALL_PRAGMAS, index=0,
              output='double_invariants_removed', exit_status=0):
    draft = make_draft(project_name, schema, index)
    return BenchmarkCase(**dict(draft), baseline=fixture_report(output, exit_status))


def fenced(body, tag='ada', prose='Here is the completed package body.'):
    if not body.endswith('\n'):
        body += '\n'
    return f"{prose}\n\n```{tag}\n{body}```\n"


def oracle_reply(case):
    return fenced(oracle_body(case))


def insert_after(body, anchor, addition):
    """Body with `addition` inserted on its own line after the line containing `anchor`"""
    lines = body.splitlines(keepends=True)
    for index, line in enumerate(lines):
        if anchor in line:
            lines.insert(index + 1, addition + '\n')
            return ''.join(lines)
    raise AssertionError(f"{anchor!r} not found")


class StubProver:
    """Proves the unmodified target body; every other body gets the `failing` output"""

    def __init__(self, failing='double_invariants_removed', exit_status=0, outputs=None, error=None):
        self.failing = failing
        self.exit_status = exit_status
        # body text -> fixture output name, checked before the defaults
        self.outputs = outputs or {}
        self.error = error
        self.calls = []
        self._lock = threading.Lock()

    def run(self, project, overlay=None):
        body = (overlay or {}).get(project.target_body)
        if body is None:
            body = project.read(project.target_body)
        with self._lock:
            self.calls.append(body)
        if self.error is not None:
            raise self.error
        if body in self.outputs:
            return fixture_report(self.outputs[body])
        if body == project.read(project.target_body):
            return fixture_report('double_verified')
        return fixture_report(self.failing, self.exit_status)


def synthetic_manifest(totals):
    """Manifest with `totals[benchmark display name]` placeholder cases per benchmark"""
    project = SparkProject(name='p', root=Path('.'), project_file='p.gpr', target_body='p.adb')
    cases = []
    for schema in Schema:
        for index in range(totals.get(schema.display_name, 0)):
            cases.append(ManifestCase(
                case_id=f"p.{schema.value}.{index}",
                project=project,
                schema_id=schema,
                removed_sites=[],
                mutated_body='',
                original_digest='',
                baseline=ProofReport(),
            ))
    return Manifest(cases=cases)
