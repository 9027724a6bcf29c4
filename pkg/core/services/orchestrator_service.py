"""
Per-case solving loop.

attempt 0 prompt -> n completions -> extract -> validate -> prove, then up to
r retries whose prompts carry the selected failed candidate and its mediums.
The first verified candidate ends the case.
"""
import json
import logging
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from ..exceptions import AuthError, NoCodeFound, ProverError, ProviderError, ToolNotFound
from ..models import (
    AttemptRecord,
    CandidateOrigin,
    CandidateRecord,
    CaseOutcome,
    ChatRequest,
    RetryContext,
    Severity,
    SolvingCandidate,
)
from .candidate_service import extract_code, validate_diff
from .llm_service import complete
from .prompt_service import build_prompt, prompt_digest
from .prover_service import report_digest

logger = logging.getLogger(__name__)

# Fixed choices recorded with every run
RUN_RULES = {
    'retry_feedback': 'accepted-unverified candidate with fewest mediums, earliest completion first',
    'early_stop': 'first verified candidate ends the case; later completions are not proved',
    'dependencies': 'all .ads files plus non-target .adb files, sorted, each headed by its file name',
    'validation': 'token-level, insertion-only; pragmas optionally wrapped in for loops and if statements',
}


def max_candidates(config):
    """Candidate budget n * (r + 1)"""
    return config.n * (config.r + 1)


class OutcomeLog:
    """Append-only JSON-lines event log; no timestamps, so replays compare byte for byte"""

    def __init__(self, path):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()

    def write(self, event, **fields):
        self.write_events([{'event': event, **fields}])

    def write_events(self, events):
        lines = [json.dumps(event, sort_keys=True, ensure_ascii=False) + '\n' for event in events]
        with self._lock:
            with open(self.path, 'a', encoding='utf-8') as f:
                f.writelines(lines)


def _mediums(diagnostics):
    return tuple(d for d in diagnostics if d.severity == Severity.MEDIUM)


def select_retry_context(attempt, case):
    """Failed candidate (and its mediums) to show the model in the next attempt"""
    proved = [
        record for record in attempt.candidates
        if record.validation is not None and record.validation.accepted
        and record.proof is not None and not record.proof.verified and not record.proof.unresolved
    ]
    if proved:
        best = min(proved, key=lambda record: (len(record.proof.mediums), record.completion_index))
        return RetryContext(previous_body=best.candidate.body, previous_diagnostics=_mediums(best.proof.diagnostics))

    for record in attempt.candidates:
        if record.candidate is not None:
            diagnostics = _mediums(record.proof.diagnostics) if record.proof is not None else ()
            return RetryContext(previous_body=record.candidate.body, previous_diagnostics=diagnostics)

    return RetryContext(previous_body=case.mutated_body, previous_diagnostics=_mediums(case.baseline.diagnostics))


class CaseSolver:
    """Runs one case under a RunConfig with a chat provider and a prover"""

    def __init__(self, config, provider, prover):
        self.config = config
        self.provider = provider
        self.prover = prover

    def solve(self, case, events=None):
        events = events if events is not None else []
        config = self.config
        started = time.monotonic()

        attempts = []
        used = 0
        solving = None
        unresolved = False

        for attempt_index in range(config.r + 1):
            if attempt_index == 0:
                mode = config.mode.model_copy(update={'retry_context': None})
            else:
                context = select_retry_context(attempts[-1], case)
                attempts[-1] = attempts[-1].model_copy(
                    update={'feedback_diagnostics': list(context.previous_diagnostics)}
                )
                mode = config.mode.for_retry(context)

            prompt = build_prompt(case, mode, attempt_index)
            events.append({
                'event': 'prompt_built',
                'case_id': case.case_id,
                'attempt_index': attempt_index,
                'mode': prompt.provenance.mode,
                'prompt_digest': prompt_digest(prompt),
            })

            attempt, verified_at, attempt_unresolved = self._attempt(case, attempt_index, prompt, events)
            attempts.append(attempt)
            used += len(attempt.candidates)
            unresolved = unresolved or attempt_unresolved

            if verified_at is not None:
                solving = SolvingCandidate(attempt_index=attempt_index, completion_index=verified_at)
                break

        outcome = CaseOutcome(
            case_id=case.case_id,
            benchmark=case.benchmark,
            n=config.n,
            r=config.r,
            run_label=config.seed_metadata,
            solved=solving is not None,
            solving_candidate=solving,
            attempts=attempts,
            candidates_used=used,
            wall_time=round(time.monotonic() - started, 3) if config.record_timings else 0.0,
            unresolved=unresolved,
        )
        events.append({'event': 'case_concluded', 'outcome': outcome.model_dump(mode='json')})

        status = "solved" if outcome.solved else "unsolved"
        logger.info(f"{case.case_id}: {status} after {used} candidate(s)")
        return outcome

    def _attempt(self, case, attempt_index, prompt, events):
        config = self.config
        attempt = AttemptRecord(attempt_index=attempt_index, prompt=prompt)
        request = ChatRequest(
            system_message=prompt.system_message,
            user_prompt=prompt.user_prompt,
            n=config.n,
            temperature=config.temperature,
            model_id=config.model_id,
        )

        try:
            response = complete(self.provider, request)
        except AuthError:
            raise
        except (ProviderError, ProverError) as e:
            # CassetteMiss from a replayed provider lands here too
            logger.warning(f"{case.case_id}: attempt {attempt_index} got no completions: {e}")
            events.append({
                'event': 'provider_error',
                'case_id': case.case_id,
                'attempt_index': attempt_index,
                'error': str(e),
            })
            return attempt.model_copy(update={'error': str(e)}), None, False

        attempt = attempt.model_copy(update={'usage': response.usage})
        completions = response.completions[:config.n]

        records = []
        verified_at = None
        unresolved = False
        width = config.prover_width
        for chunk_start in range(0, len(completions), width):
            chunk = list(enumerate(completions[chunk_start:chunk_start + width], start=chunk_start))
            # Per-candidate event buffers; candidates after a verified one leave no trace
            buffers = [[] for _ in chunk]
            prepared = [
                self._prepare(case, attempt_index, index, text, buffer)
                for (index, text), buffer in zip(chunk, buffers)
            ]
            proved = self._prove_all(case, prepared)

            for record, buffer in zip(proved, buffers):
                records.append(record)
                events.extend(buffer)
                self._log_proof(case, attempt_index, record, events)
                if record.proof is not None and record.proof.unresolved:
                    unresolved = True
                if record.verified:
                    verified_at = record.completion_index
                    break
            if verified_at is not None:
                break

        return attempt.model_copy(update={'candidates': records}), verified_at, unresolved

    def _prepare(self, case, attempt_index, completion_index, text, events):
        """Extraction and validation; the prover runs later"""
        origin = CandidateOrigin(attempt_index=attempt_index, completion_index=completion_index)
        base_event = {'case_id': case.case_id, 'attempt_index': attempt_index, 'completion_index': completion_index}

        try:
            candidate = extract_code(text, origin)
        except NoCodeFound as e:
            events.append({'event': 'candidate_extracted', **base_event, 'extraction': None, 'error': str(e)})
            return CandidateRecord(completion_index=completion_index, extraction_error=str(e))

        events.append({'event': 'candidate_extracted', **base_event, 'extraction': candidate.extraction.value})

        validation = validate_diff(case.mutated_body, candidate.body)
        events.append({
            'event': 'validation_verdict',
            **base_event,
            'verdict': validation.verdict.value,
            'violations': [violation.reason for violation in validation.violations],
            'inserted_regions': len(validation.inserted_regions),
        })
        return CandidateRecord(completion_index=completion_index, candidate=candidate, validation=validation)

    def _prove(self, case, record):
        if record.validation is None or not record.validation.accepted:
            return record

        body = record.candidate.body
        if not body.endswith('\n'):
            body += '\n'
        try:
            report = self.prover.run(case.project, {case.project.target_body: body})
        except ToolNotFound:
            raise
        except ProverError as e:
            logger.warning(f"{case.case_id}: prover failed on completion {record.completion_index}: {e}")
            return record.model_copy(update={'error': str(e)})
        return record.model_copy(update={'proof': report})

    def _prove_all(self, case, records):
        if self.config.prover_width > 1 and len(records) > 1:
            with ThreadPoolExecutor(max_workers=self.config.prover_width) as pool:
                return list(pool.map(lambda record: self._prove(case, record), records))
        return [self._prove(case, record) for record in records]

    @staticmethod
    def _log_proof(case, attempt_index, record, events):
        if record.proof is None and record.error is None:
            return
        event = {
            'event': 'proof_report',
            'case_id': case.case_id,
            'attempt_index': attempt_index,
            'completion_index': record.completion_index,
        }
        if record.proof is None:
            event['error'] = record.error
        else:
            event.update({
                'report_digest': report_digest(record.proof),
                'verified': record.proof.verified,
                'unresolved': record.proof.unresolved,
                'exit_status': record.proof.exit_status,
                'counts': record.proof.counts(),
            })
        events.append(event)


def solve_case(case, config, provider, prover, events=None):
    return CaseSolver(config, provider, prover).solve(case, events)


def run_started_event(config, provider):
    return {
        'event': 'run_started',
        'run_label': config.seed_metadata,
        'config': config.model_dump(mode='json'),
        'provider': provider.describe(),
        'max_candidates': max_candidates(config),
        'rules': RUN_RULES,
    }


def run_benchmark(cases, config, provider, prover, log=None, workers=1):
    """Solve every case; events reach the log grouped per case, in input order"""
    solver = CaseSolver(config, provider, prover)
    cases = list(cases)

    if log is not None:
        log.write_events([run_started_event(config, provider)])

    def run_one(case):
        events = []
        outcome = solver.solve(case, events)
        return outcome, events

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run_one, cases))
    else:
        results = []
        for case in cases:
            results.append(run_one(case))
            if log is not None:
                log.write_events(results[-1][1])

    if log is not None and workers > 1:
        for _, events in results:
            log.write_events(events)

    outcomes = [outcome for outcome, _ in results]
    solved = sum(1 for outcome in outcomes if outcome.solved)
    logger.info(f"Run {config.seed_metadata or '(unlabelled)'}: {solved}/{len(outcomes)} solved")
    return outcomes
