import tempfile
from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from core.management.options import (
    COMMAND_ERRORS,
    PROMPT_VARIANTS,
    build_chat_provider,
    build_prover,
    build_run_config,
    select_cases,
)
from core.services.bench_service import load_manifest
from core.services.orchestrator_service import OutcomeLog, run_benchmark


class Command(BaseCommand):
    help = 'Run a manifest twice from cassettes and check that both outcome logs are byte-identical'

    def add_arguments(self, parser):
        parser.add_argument('manifest', type=str, help='Benchmark manifest')
        parser.add_argument('--cassette', required=True, type=str, help='Prover cassette to replay')
        parser.add_argument('--provider', choices=('oracle', 'replay'), default='oracle')
        parser.add_argument('--llm-cassette', type=str, help='Chat cassette for the replay provider')
        parser.add_argument('--n', type=int, default=1)
        parser.add_argument('--retries', type=int, default=0)
        parser.add_argument('--prompt', choices=sorted(PROMPT_VARIANTS), default='base')
        parser.add_argument('--medium-in-prompt', action='store_true')
        parser.add_argument('--case', action='append', dest='cases')
        parser.add_argument('--out', type=str, help='Directory for the two outcome logs (default: temporary)')
        parser.add_argument(
            '--require-solved',
            action='store_true',
            help='Fail unless every case is solved at attempt 0 with a single candidate',
        )

    def handle(self, *args, **options):
        options.update({'prover': 'replay', 'label': 'replay-verify', 'model': None, 'temperature': None})

        if options['out']:
            self._verify(Path(options['out']), options)
        else:
            with tempfile.TemporaryDirectory(prefix='replay-verify-') as directory:
                self._verify(Path(directory), options)

    def _verify(self, directory, options):
        logs = []
        try:
            manifest = load_manifest(options['manifest'])
            cases = select_cases(manifest, options['cases'])
            config = build_run_config(options, record_timings=False)

            for run_index in (1, 2):
                path = directory / f'replay-{run_index}.jsonl'
                if path.exists():
                    path.unlink()
                outcomes = run_benchmark(
                    cases,
                    config,
                    build_chat_provider(options, cases),
                    build_prover(options),
                    log=OutcomeLog(path),
                )
                logs.append(path.read_bytes())
        except COMMAND_ERRORS as e:
            raise CommandError(str(e))

        if logs[0] != logs[1]:
            raise CommandError('Outcome logs differ between the two replay runs')
        self.stdout.write('  ✓ outcome logs are byte-identical')

        solved = [outcome for outcome in outcomes if outcome.solved]
        if options['require_solved']:
            failures = [
                outcome.case_id for outcome in outcomes
                if not outcome.solved
                or outcome.candidates_used != 1
                or outcome.solving_candidate.attempt_index != 0
            ]
            if failures:
                raise CommandError(f'Not solved by the first candidate: {", ".join(failures)}')

        self.stdout.write(self.style.SUCCESS(f'Replay verified: {len(solved)}/{len(outcomes)} solved'))
