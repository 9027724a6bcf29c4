# Services package - one module per pipeline stage
from .ada_lex import remove_sites, restore_cuts, scan_structure, tokenize
from .cassette import Cassette, request_digest
from .prover_service import ProverService, parse_diagnostics
from .llm_service import (
    OpenAIChatProvider,
    RecordingProvider,
    ReplayProvider,
    ScriptedProvider,
    build_provider,
    complete,
    oracle_responder,
)
from .prompt_service import build_prompt, format_mediums, system_message_for
from .candidate_service import extract_code, validate_diff
from .bench_service import (
    build_benchmark,
    emit_manifest,
    enumerate_cases,
    filter_case,
    load_corpus,
    load_manifest,
)
from .orchestrator_service import OutcomeLog, max_candidates, run_benchmark, select_retry_context, solve_case
from .report_service import aggregate, load_outcomes

__all__ = [
    'remove_sites',
    'restore_cuts',
    'scan_structure',
    'tokenize',
    'Cassette',
    'request_digest',
    'ProverService',
    'parse_diagnostics',
    'OpenAIChatProvider',
    'RecordingProvider',
    'ReplayProvider',
    'ScriptedProvider',
    'build_provider',
    'complete',
    'oracle_responder',
    'build_prompt',
    'format_mediums',
    'system_message_for',
    'extract_code',
    'validate_diff',
    'build_benchmark',
    'emit_manifest',
    'enumerate_cases',
    'filter_case',
    'load_corpus',
    'load_manifest',
    'OutcomeLog',
    'max_candidates',
    'run_benchmark',
    'select_retry_context',
    'solve_case',
    'aggregate',
    'load_outcomes',
]
