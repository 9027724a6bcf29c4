from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from core.management.options import COMMAND_ERRORS
from core.services.bench_service import load_manifest
from core.services.report_service import REPORT_FORMATS, aggregate, load_outcomes, render


class Command(BaseCommand):
    help = 'Aggregate outcome logs into result tables, CSV or plot data'

    def add_arguments(self, parser):
        parser.add_argument('logs', nargs='+', type=str, help='Outcome logs written by run/replay_verify')
        parser.add_argument('--manifest', required=True, type=str, help='Manifest the runs used')
        parser.add_argument('--format', choices=REPORT_FORMATS, default='table')
        parser.add_argument('--out', type=str, help='Write to this file instead of stdout')

    def handle(self, *args, **options):
        try:
            manifest = load_manifest(options['manifest'], verify=False)
            report = aggregate(load_outcomes(options['logs']), manifest)
            text = render(report, options['format'])
            if options['out']:
                out = Path(options['out'])
                out.parent.mkdir(parents=True, exist_ok=True)
                out.write_text(text, encoding='utf-8')
        except COMMAND_ERRORS as e:
            raise CommandError(str(e))

        if options['out']:
            self.stdout.write(self.style.SUCCESS(f'Report written to {options["out"]}'))
        else:
            self.stdout.write(text, ending='')
