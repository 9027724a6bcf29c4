"""Argument groups and object construction shared by the pragma_bench commands"""
from pathlib import Path

import pydantic
from django.conf import settings
from django.core.exceptions import ValidationError
from django.core.management.base import CommandError

from core.exceptions import PragmaBenchError
from core.models import PromptMode, PromptVariant, ProverBackend, RunConfig
from core.services.llm_service import build_provider
from core.services.prover_service import ProverService, default_prover_settings
from core.utils.validators import validate_budget, validate_temperature

PROMPT_VARIANTS = {
    'base': PromptVariant.BASE,
    'cot': PromptVariant.CHAIN_OF_THOUGHT,
}

# Errors a command reports as a nonzero exit instead of a traceback
COMMAND_ERRORS = (PragmaBenchError, ValidationError, pydantic.ValidationError, OSError, ValueError)


def add_prover_arguments(parser, backends=('subprocess', 'replay', 'record')):
    parser.add_argument('--prover', choices=backends, default=backends[0], help='GNATprove backend')
    parser.add_argument('--cassette', type=str, help='Prover cassette (JSON) for replay/record')
    parser.add_argument('--timeout-secs', type=int, help='Per-run GNATprove timeout in seconds')


def add_run_arguments(parser):
    parser.add_argument('manifest', type=str, help='Benchmark manifest written by gen_bench')
    parser.add_argument('--n', type=int, default=1, help='N-Solutions: completions per prompt')
    parser.add_argument('--retries', type=int, default=0, help='Retries after a failed first attempt')
    parser.add_argument('--prompt', choices=sorted(PROMPT_VARIANTS), default='base', help='Prompt variant')
    parser.add_argument('--medium-in-prompt', action='store_true', help='Embed baseline mediums in the prompt')
    parser.add_argument('--provider', choices=('openai', 'replay', 'oracle'), default='openai')
    parser.add_argument('--llm-cassette', type=str, help='Chat cassette (JSON) for the replay provider')
    parser.add_argument('--model', type=str, help='Model id (default LLM_MODEL)')
    parser.add_argument('--temperature', type=float, help='Sampling temperature (default LLM_TEMPERATURE)')
    parser.add_argument('--out', type=str, help='Output directory (default PRAGMA_BENCH_OUTPUT_DIR)')
    parser.add_argument('--label', type=str, default='', help='Run label recorded with every outcome')
    parser.add_argument('--case', action='append', dest='cases', help='Only run this case id (repeatable)')
    parser.add_argument('--workers', type=int, default=1, help='Cases solved concurrently')
    parser.add_argument('--prover-width', type=int, default=1, help='Parallel prover runs within one attempt')
    add_prover_arguments(parser)


def output_dir(options):
    return Path(options.get('out') or settings.PRAGMA_BENCH_OUTPUT_DIR)


def build_prover(options, backend=None):
    backend = ProverBackend(backend or options['prover'])
    prover_settings = default_prover_settings(timeout_secs=options.get('timeout_secs'))
    return ProverService(backend=backend, prover_settings=prover_settings, cassette=options.get('cassette'))


def build_run_config(options, record_timings=True):
    validate_budget(options['n'], options['retries'])
    mode = PromptMode(
        variant=PROMPT_VARIANTS[options['prompt']],
        medium_in_prompt=options['medium_in_prompt'],
    )
    temperature = options.get('temperature')
    temperature = validate_temperature(temperature if temperature is not None else settings.LLM_TEMPERATURE)
    return RunConfig(
        n=options['n'],
        r=options['retries'],
        mode=mode,
        prover_backend=ProverBackend(options['prover']),
        prover_settings=default_prover_settings(timeout_secs=options.get('timeout_secs')),
        provider=options['provider'],
        model_id=options.get('model') or settings.LLM_MODEL,
        temperature=temperature,
        seed_metadata=options.get('label') or '',
        prover_width=options.get('prover_width') or 1,
        record_timings=record_timings,
    )


def build_chat_provider(options, cases, record_to=None):
    return build_provider(
        options['provider'],
        cassette=options.get('llm_cassette'),
        cases=cases,
        record_to=record_to,
    )


def select_cases(manifest, case_ids):
    if not case_ids:
        return list(manifest.cases)
    selected = []
    for case_id in case_ids:
        case = manifest.get(case_id)
        if case is None:
            raise CommandError(f"Case {case_id} is not in the manifest")
        selected.append(case)
    return selected


def outcome_log_path(directory, label):
    return Path(directory) / f"outcomes-{label or 'run'}.jsonl"
