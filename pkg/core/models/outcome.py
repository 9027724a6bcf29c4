from enum import Enum
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field

from .chat import ChatUsage
from .proof import Diagnostic, ProofReport, ProverBackend, ProverSettings
from .prompt import PromptBundle, PromptMode


class Extraction(str, Enum):
    ADA_FENCE = 'ada_fence'
    GENERIC_FENCE = 'generic_fence'


class CandidateOrigin(BaseModel):
    attempt_index: int = 0
    completion_index: int = 0


class Candidate(BaseModel):
    body: str = Field(min_length=1)
    origin: CandidateOrigin = CandidateOrigin()
    extraction: Extraction


class Verdict(str, Enum):
    ACCEPTED = 'accepted'
    REJECTED = 'rejected'


class Violation(BaseModel):
    start: int
    end: int
    reason: str


class InsertedRegion(BaseModel):
    start: int
    end: int
    description: str


class ValidationResult(BaseModel):
    verdict: Verdict
    violations: list[Violation] = []
    inserted_regions: list[InsertedRegion] = []

    @property
    def accepted(self):
        return self.verdict == Verdict.ACCEPTED


class CandidateRecord(BaseModel):
    completion_index: int
    candidate: Optional[Candidate] = None
    extraction_error: Optional[str] = None
    validation: Optional[ValidationResult] = None
    # None when the prover was skipped
    proof: Optional[ProofReport] = None
    error: Optional[str] = None

    @property
    def verified(self):
        return bool(
            self.validation is not None and self.validation.accepted
            and self.proof is not None and self.proof.verified
        )


class AttemptRecord(BaseModel):
    attempt_index: int
    prompt: PromptBundle
    candidates: list[CandidateRecord] = []
    feedback_diagnostics: list[Diagnostic] = []
    usage: Optional[ChatUsage] = None
    error: Optional[str] = None


class SolvingCandidate(BaseModel):
    attempt_index: int
    completion_index: int


class CaseOutcome(BaseModel):
    case_id: str
    benchmark: str = ''
    n: int = 1
    r: int = 0
    run_label: str = ''
    solved: bool = False
    solving_candidate: Optional[SolvingCandidate] = None
    attempts: list[AttemptRecord] = []
    candidates_used: int = 0
    wall_time: float = 0.0
    # A proof run timed out or crashed somewhere in this case
    unresolved: bool = False


class RunConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    n: int = Field(default=1, ge=1)
    r: int = Field(default=0, ge=0)
    mode: PromptMode = PromptMode()
    prover_backend: ProverBackend = ProverBackend.SUBPROCESS
    prover_settings: ProverSettings = ProverSettings()
    provider: str = 'openai'
    model_id: str = 'gpt-4o-2024-05-13'
    temperature: float = Field(default=1.0, ge=0)
    seed_metadata: str = ''
    # Parallel prover runs inside one attempt; results are read in completion order
    prover_width: int = Field(default=1, ge=1)
    # Off for replay verification so repeated runs log identical bytes
    record_timings: bool = True
