# Models package - domain types shared by the services (pydantic, not database tables)
from .lexing import (
    ANNOTATION_KINDS,
    TRIVIA_KINDS,
    Cut,
    LoopRegion,
    PragmaKind,
    PragmaSite,
    Span,
    StructureMap,
    Token,
    TokenKind,
)
from .proof import Diagnostic, ProofReport, ProverBackend, ProverSettings, Severity
from .bench import (
    REPORT_SCHEMA_ORDER,
    SCHEMA_DISPLAY_NAMES,
    BenchmarkCase,
    CaseDraft,
    FilterResult,
    FilterStatus,
    Manifest,
    ManifestCase,
    ManifestFile,
    Schema,
    SparkProject,
)
from .chat import SYSTEM_MESSAGE_CAP, ChatRequest, ChatResponse, ChatUsage, ProviderKind
from .prompt import PromptBundle, PromptMode, PromptProvenance, PromptVariant, RetryContext
from .outcome import (
    AttemptRecord,
    Candidate,
    CandidateOrigin,
    CandidateRecord,
    CaseOutcome,
    Extraction,
    InsertedRegion,
    RunConfig,
    SolvingCandidate,
    ValidationResult,
    Verdict,
    Violation,
)
from .report import BenchmarkTally, ConfigRow, RunReport, Sweep, SweepPoint, Totals

__all__ = [
    'ANNOTATION_KINDS',
    'TRIVIA_KINDS',
    'Cut',
    'LoopRegion',
    'PragmaKind',
    'PragmaSite',
    'Span',
    'StructureMap',
    'Token',
    'TokenKind',
    'Diagnostic',
    'ProofReport',
    'ProverBackend',
    'ProverSettings',
    'Severity',
    'REPORT_SCHEMA_ORDER',
    'SCHEMA_DISPLAY_NAMES',
    'BenchmarkCase',
    'CaseDraft',
    'FilterResult',
    'FilterStatus',
    'Manifest',
    'ManifestCase',
    'ManifestFile',
    'Schema',
    'SparkProject',
    'SYSTEM_MESSAGE_CAP',
    'ChatRequest',
    'ChatResponse',
    'ChatUsage',
    'ProviderKind',
    'PromptBundle',
    'PromptMode',
    'PromptProvenance',
    'PromptVariant',
    'RetryContext',
    'AttemptRecord',
    'Candidate',
    'CandidateOrigin',
    'CandidateRecord',
    'CaseOutcome',
    'Extraction',
    'InsertedRegion',
    'RunConfig',
    'SolvingCandidate',
    'ValidationResult',
    'Verdict',
    'Violation',
    'BenchmarkTally',
    'ConfigRow',
    'RunReport',
    'Sweep',
    'SweepPoint',
    'Totals',
]
