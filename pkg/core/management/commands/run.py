import logging

from django.core.management.base import BaseCommand, CommandError

from core.management.options import (
    COMMAND_ERRORS,
    add_run_arguments,
    build_chat_provider,
    build_prover,
    build_run_config,
    outcome_log_path,
    output_dir,
    select_cases,
)
from core.services.bench_service import load_manifest
from core.services.orchestrator_service import OutcomeLog, max_candidates, run_benchmark

logger = logging.getLogger(__name__)


class Command(BaseCommand):
    help = 'Run the annotation loop over a benchmark manifest and append outcomes to a JSON-lines log'

    def add_arguments(self, parser):
        add_run_arguments(parser)

    def handle(self, *args, **options):
        try:
            manifest = load_manifest(options['manifest'])
            cases = select_cases(manifest, options['cases'])
            config = build_run_config(options)
            provider = build_chat_provider(options, cases)
            prover = build_prover(options)
            log = OutcomeLog(outcome_log_path(output_dir(options), config.seed_metadata))

            self.stdout.write(
                f'Running {len(cases)} case(s) with n={config.n}, r={config.r} '
                f'(at most {max_candidates(config)} candidates each)'
            )
            outcomes = run_benchmark(cases, config, provider, prover, log=log, workers=options['workers'])
        except COMMAND_ERRORS as e:
            raise CommandError(str(e))

        for outcome in outcomes:
            if outcome.solved:
                solving = outcome.solving_candidate
                self.stdout.write(
                    f'  ✓ {outcome.case_id} (attempt {solving.attempt_index}, completion {solving.completion_index})'
                )
            else:
                suffix = ' [unresolved]' if outcome.unresolved else ''
                self.stdout.write(f'  ✗ {outcome.case_id}{suffix}')

        solved = sum(1 for outcome in outcomes if outcome.solved)
        self.stdout.write(self.style.SUCCESS(f'Solved {solved}/{len(outcomes)}; outcomes in {log.path}'))
