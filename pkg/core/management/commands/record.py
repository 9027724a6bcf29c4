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
from core.models import ProverBackend
from core.services.bench_service import load_manifest
from core.services.orchestrator_service import OutcomeLog, run_benchmark


class Command(BaseCommand):
    help = 'Run against the real toolchain and model while capturing prover and chat cassettes'

    def add_arguments(self, parser):
        add_run_arguments(parser)
        parser.add_argument('--record-llm', type=str, help='Chat cassette to append model exchanges to')

    def handle(self, *args, **options):
        if not options['cassette']:
            raise CommandError('--cassette is required: proof runs are recorded there')

        options['prover'] = ProverBackend.RECORD.value
        try:
            manifest = load_manifest(options['manifest'])
            cases = select_cases(manifest, options['cases'])
            config = build_run_config(options)
            provider = build_chat_provider(options, cases, record_to=options['record_llm'])
            prover = build_prover(options)
            log = OutcomeLog(outcome_log_path(output_dir(options), config.seed_metadata or 'record'))

            # Baselines first, so replayed gen_bench runs find every mutated project
            for case in cases:
                prover.run(case.project, {case.project.target_body: case.mutated_body})
                self.stdout.write(f'  ✓ baseline {case.case_id}')

            outcomes = run_benchmark(cases, config, provider, prover, log=log, workers=options['workers'])
        except COMMAND_ERRORS as e:
            raise CommandError(str(e))

        solved = sum(1 for outcome in outcomes if outcome.solved)
        self.stdout.write(self.style.SUCCESS(
            f'Recorded {len(prover.cassette)} proof run(s) to {options["cassette"]}; solved {solved}/{len(outcomes)}'
        ))
        if options['record_llm']:
            self.stdout.write(self.style.SUCCESS(f'Chat exchanges recorded to {options["record_llm"]}'))
