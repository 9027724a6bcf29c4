from enum import Enum
from pathlib import Path
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field

from .lexing import Cut, PragmaSite
from .proof import ProofReport


class Schema(str, Enum):
    ALL_PRAGMAS = 'AllPragmas'
    LAST_INVARIANT_ALL_LOOPS = 'LastInvariantAllLoops'
    ALL_PRAGMAS_ONE_LOOP = 'AllPragmasOneLoop'
    LAST_INVARIANT_ONE_LOOP = 'LastInvariantOneLoop'
    ONE_ASSERT = 'OneAssert'

    @property
    def display_name(self):
        return SCHEMA_DISPLAY_NAMES[self]


SCHEMA_DISPLAY_NAMES = {
    Schema.ALL_PRAGMAS: 'All pragmas',
    Schema.LAST_INVARIANT_ALL_LOOPS: 'Last invariant all loops',
    Schema.ONE_ASSERT: 'One assert',
    Schema.ALL_PRAGMAS_ONE_LOOP: 'All pragmas one loop',
    Schema.LAST_INVARIANT_ONE_LOOP: 'Last invariant one loop',
}

# Column order of the result tables
REPORT_SCHEMA_ORDER = (
    Schema.ALL_PRAGMAS,
    Schema.LAST_INVARIANT_ALL_LOOPS,
    Schema.ONE_ASSERT,
    Schema.ALL_PRAGMAS_ONE_LOOP,
    Schema.LAST_INVARIANT_ONE_LOOP,
)


class SparkProject(BaseModel):
    """A verified SPARK project; all file paths are relative to root"""
    model_config = ConfigDict(frozen=True)

    name: str
    root: Path
    project_file: str
    config_files: tuple[str, ...] = ()
    spec_files: tuple[str, ...] = ()
    body_files: tuple[str, ...] = ()
    target_body: str

    def files(self):
        """Every source the prover reads, relative to root, in stable order"""
        return (
            self.project_file,
            *sorted(self.config_files),
            *sorted(self.spec_files),
            *sorted(self.body_files),
        )

    def path(self, relative):
        return Path(self.root) / relative

    def read(self, relative):
        return self.path(relative).read_text(encoding='utf-8')


class CaseDraft(BaseModel):
    case_id: str
    project: SparkProject
    schema_id: Schema = Field(alias='schema')
    removed_sites: list[PragmaSite]
    mutated_body: str
    original_digest: str
    cuts: list[Cut] = []

    model_config = ConfigDict(populate_by_name=True)

    @property
    def benchmark(self):
        return self.schema_id.display_name


class BenchmarkCase(CaseDraft):
    baseline: ProofReport


class FilterStatus(str, Enum):
    ACCEPTED = 'accepted'
    REJECTED = 'rejected'
    UNRESOLVED = 'unresolved'


class FilterResult(BaseModel):
    status: FilterStatus
    draft: CaseDraft
    case: Optional[BenchmarkCase] = None
    reason: str = ''


class ManifestFile(BaseModel):
    """A project file referenced by relative path and digest"""
    path: str
    sha256: str


class ManifestCase(BenchmarkCase):
    files: list[ManifestFile] = []


class Manifest(BaseModel):
    version: int = 1
    cases: list[ManifestCase] = []

    def case_ids(self):
        return [case.case_id for case in self.cases]

    def get(self, case_id):
        for case in self.cases:
            if case.case_id == case_id:
                return case
        return None
