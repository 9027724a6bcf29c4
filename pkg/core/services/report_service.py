import csv
import io
import json
import logging
from decimal import ROUND_HALF_UP, Decimal
from pathlib import Path

from ..exceptions import UnknownCase
from ..models import (
    REPORT_SCHEMA_ORDER,
    BenchmarkTally,
    CaseOutcome,
    ConfigRow,
    RunReport,
    Sweep,
    SweepPoint,
    Totals,
)

logger = logging.getLogger(__name__)

REPORT_FORMATS = ('table', 'csv', 'plotdata')

CSV_HEADER = ('config', 'n', 'r', 'benchmark', 'solved', 'total')


def load_outcomes(paths):
    """CaseOutcome records from the case_concluded events of one or more outcome logs"""
    if isinstance(paths, (str, Path)):
        paths = [paths]

    outcomes = []
    for path in paths:
        with open(path, 'r', encoding='utf-8') as f:
            for line in f:
                line = line.strip()
                if not line:
                    continue
                event = json.loads(line)
                if event.get('event') == 'case_concluded':
                    outcomes.append(CaseOutcome.model_validate(event['outcome']))
        logger.debug(f"Read outcome log {path}")
    return outcomes


def solve_rate(solved, total):
    """Percentage with one decimal, halves rounded up"""
    if not total:
        return 0.0
    rate = Decimal(100 * solved) / Decimal(total)
    return float(rate.quantize(Decimal('0.1'), rounding=ROUND_HALF_UP))


def _sweeps(n, r, outcomes):
    solved = [outcome for outcome in outcomes if outcome.solved]

    def count(predicate):
        return len({outcome.case_id for outcome in solved if predicate(outcome.solving_candidate)})

    by_n = Sweep(
        name=f"solved-vs-n r={r}",
        parameter='n',
        n=n,
        r=r,
        points=[SweepPoint(x=k, y=count(lambda s, k=k: s.completion_index < k)) for k in range(1, n + 1)],
    )
    by_r = Sweep(
        name=f"solved-vs-r n={n}",
        parameter='r',
        n=n,
        r=r,
        points=[SweepPoint(x=j, y=count(lambda s, j=j: s.attempt_index <= j)) for j in range(0, r + 1)],
    )
    return [by_n, by_r]


def aggregate(outcomes, manifest):
    """Fold outcomes into per-benchmark and per-configuration solved counts"""
    benchmark_of = {case.case_id: case.benchmark for case in manifest.cases}
    for outcome in outcomes:
        if outcome.case_id not in benchmark_of:
            raise UnknownCase(f"Outcome for {outcome.case_id}, which is not in the manifest")

    benchmarks = [schema.display_name for schema in REPORT_SCHEMA_ORDER]
    totals = {name: 0 for name in benchmarks}
    for benchmark in benchmark_of.values():
        totals[benchmark] = totals.get(benchmark, 0) + 1

    solved_ids = {outcome.case_id for outcome in outcomes if outcome.solved}
    per_benchmark = {
        name: BenchmarkTally(
            solved=sum(1 for case_id in solved_ids if benchmark_of[case_id] == name),
            total=totals[name],
        )
        for name in benchmarks
    }

    configs = {}
    for outcome in outcomes:
        configs.setdefault((outcome.n, outcome.r), []).append(outcome)

    per_config = []
    sweeps = []
    for n, r in sorted(configs, key=lambda key: (-key[0], key[1])):
        group = configs[(n, r)]
        solved_here = {outcome.case_id for outcome in group if outcome.solved}
        per_config.append(ConfigRow(
            n=n,
            r=r,
            solved={
                name: sum(1 for case_id in solved_here if benchmark_of[case_id] == name)
                for name in benchmarks
            },
        ))
        sweeps.extend(_sweeps(n, r, group))

    flagged = sorted({
        outcome.case_id for outcome in outcomes
        if outcome.unresolved and not outcome.solved
    })

    total_solved = sum(tally.solved for tally in per_benchmark.values())
    total_cases = sum(tally.total for tally in per_benchmark.values())
    return RunReport(
        benchmarks=benchmarks,
        per_benchmark=per_benchmark,
        per_config=per_config,
        totals=Totals(solved=total_solved, total=total_cases, rate=solve_rate(total_solved, total_cases)),
        parameter_sweeps=sweeps,
        flagged=flagged,
        run_labels=sorted({outcome.run_label for outcome in outcomes if outcome.run_label}),
    )


def render_table(report):
    header = ['Configuration', *report.benchmarks, 'Sum']
    rows = [
        [row.label, *(str(row.solved.get(name, 0)) for name in report.benchmarks), str(row.total_solved)]
        for row in report.per_config
    ]
    rows.append([
        'Total solved',
        *(str(report.per_benchmark[name].solved) for name in report.benchmarks),
        str(report.totals.solved),
    ])
    rows.append([
        'Total in benchmark',
        *(str(report.per_benchmark[name].total) for name in report.benchmarks),
        str(report.totals.total),
    ])

    widths = [max(len(line[column]) for line in [header, *rows]) for column in range(len(header))]

    def format_line(cells, numeric):
        parts = [cells[0].ljust(widths[0])]
        for column, cell in enumerate(cells[1:], start=1):
            parts.append(cell.rjust(widths[column]) if numeric else cell.ljust(widths[column]))
        return '  '.join(parts).rstrip()

    lines = [format_line(header, numeric=False), '-' * (sum(widths) + 2 * (len(widths) - 1))]
    lines.extend(format_line(row, numeric=True) for row in rows)
    lines.append('')
    lines.append(f"Solved {report.totals.solved}/{report.totals.total} ({report.totals.rate:.1f}%)")
    if report.run_labels:
        lines.append(f"Runs: {', '.join(report.run_labels)}")
    if report.flagged:
        lines.append(f"Unresolved (counted unsolved): {', '.join(report.flagged)}")
    return '\n'.join(lines) + '\n'


def render_csv(report):
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(CSV_HEADER)
    for row in report.per_config:
        for name in report.benchmarks:
            writer.writerow([row.label, row.n, row.r, name, row.solved.get(name, 0), report.per_benchmark[name].total])
    return buffer.getvalue()


def render_plotdata(report):
    """gnuplot-style blocks, one per series, separated by two blank lines"""
    legend = [f"# {index} = {name}" for index, name in enumerate(report.benchmarks, start=1)]
    blocks = []

    for row in report.per_config:
        lines = [f"# series: stacked {row.label}", '# columns: benchmark solved', *legend]
        lines.extend(f"{index} {row.solved.get(name, 0)}" for index, name in enumerate(report.benchmarks, start=1))
        blocks.append(lines)

    lines = ['# series: percent-solved', '# columns: benchmark percent', *legend]
    for index, name in enumerate(report.benchmarks, start=1):
        tally = report.per_benchmark[name]
        lines.append(f"{index} {solve_rate(tally.solved, tally.total):.1f}")
    blocks.append(lines)

    for sweep in report.parameter_sweeps:
        lines = [f"# series: {sweep.name}", f"# columns: {sweep.parameter} solved"]
        lines.extend(f"{point.x} {point.y}" for point in sweep.points)
        blocks.append(lines)

    return '\n\n\n'.join('\n'.join(lines) for lines in blocks) + '\n'


def render(report, fmt='table'):
    if fmt == 'table':
        return render_table(report)
    if fmt == 'csv':
        return render_csv(report)
    if fmt == 'plotdata':
        return render_plotdata(report)
    raise ValueError(f"Unknown report format {fmt}; expected one of {', '.join(REPORT_FORMATS)}")
