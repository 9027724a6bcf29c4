import logging
from collections import Counter

from django.core.management.base import BaseCommand, CommandError

from core.management.options import COMMAND_ERRORS, add_prover_arguments, build_prover, output_dir
from core.models import FilterStatus, Schema
from core.services.bench_service import build_benchmark, emit_manifest, load_corpus

logger = logging.getLogger(__name__)


class Command(BaseCommand):
    help = 'Generate a pragma-removal benchmark manifest from a corpus of verified SPARK projects'

    def add_arguments(self, parser):
        parser.add_argument('corpus', type=str, help='corpus.json index or a single project directory')
        parser.add_argument(
            '--schema',
            action='append',
            dest='schemata',
            choices=[schema.value for schema in Schema],
            help='Removal schema to apply (repeatable, default all five)',
        )
        parser.add_argument('--out', type=str, help='Output directory or manifest path')
        parser.add_argument('--workers', type=int, default=1, help='Drafts filtered concurrently')
        add_prover_arguments(parser)

    def handle(self, *args, **options):
        try:
            projects = load_corpus(options['corpus'])
            prover = build_prover(options)
            results = build_benchmark(
                projects,
                prover,
                schemata=options['schemata'],
                workers=options['workers'],
            )
        except COMMAND_ERRORS as e:
            raise CommandError(str(e))

        accepted = []
        for result in results:
            case_id = result.draft.case_id
            if result.status == FilterStatus.ACCEPTED:
                accepted.append(result.case)
                mediums = len(result.case.baseline.mediums)
                self.stdout.write(f'  ✓ {case_id} ({mediums} medium(s))')
            elif result.status == FilterStatus.REJECTED:
                self.stdout.write(f'  ✗ {case_id}: {result.reason}')
            else:
                self.stdout.write(self.style.WARNING(f'  ⚠ {case_id} unresolved: {result.reason}'))

        try:
            manifest = emit_manifest(accepted, output_dir(options))
        except COMMAND_ERRORS as e:
            raise CommandError(f'Could not write manifest: {e}')

        per_schema = Counter(case.benchmark for case in manifest.cases)
        for schema in Schema:
            self.stdout.write(f'{schema.display_name}: {per_schema.get(schema.display_name, 0)}')

        unresolved = sum(1 for result in results if result.status == FilterStatus.UNRESOLVED)
        if unresolved:
            self.stdout.write(self.style.WARNING(f'{unresolved} draft(s) unresolved; rerun them with a longer timeout'))

        self.stdout.write(
            self.style.SUCCESS(f'Benchmark with {len(manifest.cases)} case(s) from {len(projects)} program(s) written')
        )
