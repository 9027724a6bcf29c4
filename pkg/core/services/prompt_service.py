import logging
from pathlib import PurePosixPath

from django.conf import settings

from ..exceptions import CapExceeded
from ..models import SYSTEM_MESSAGE_CAP, PromptBundle, PromptMode, PromptProvenance, PromptVariant, Severity
from .cassette import request_digest

logger = logging.getLogger(__name__)

FENCE_EXAMPLE = "```ada\n\ncode here\n\n```"

DELIMITER_SENTENCE = "The final answer should then be delimited in the following way:"

OPENINGS = {
    PromptVariant.BASE: (
        "Try to solve the following problem logically and step by step. " + DELIMITER_SENTENCE
    ),
    PromptVariant.CHAIN_OF_THOUGHT: (
        "Try to solve the following problem by first explaining in natural language what the "
        "underlying problem, leading to the medium, might be and how it could be solved. "
        + DELIMITER_SENTENCE
    ),
}

DEPENDENCIES_HEADER = "The following are the specifications and dependencies of a Spark2014/ADA project:"

BODY_HEADER = "This is the package body (implementation):"

INSTRUCTIONS = (
    "Add one or multiple pragma statements (e.g. pragma Loop_Invariant, pragma Assert) to the "
    "package body, so that the code runs error and medium free.",
    "Make use of the mediums provided in the prompt to guide your solution.",
    "You must not modify the code in any other way, except to add \"for\" loops and \"if\" "
    "statements that enclose only pragma statements.",
    "Do not modify the functionality in any way. Return the entire implementation file with the "
    "required additions.",
)

MEDIUM_HEADER = "The following mediums were raised by GNATprove for the package body:"

RETRY_HEADER = "The following implementation was a previous attempt which failed verification:"

RETRY_MEDIUM_HEADER = "The following mediums were raised by GNATprove for the previous attempt:"

RETRY_NO_MEDIUMS = "GNATprove reported no mediums for the previous attempt."

SYSTEM_MESSAGE = "\n\n".join((
    "You are a Spark2014/ADA programmer with strong logical reasoning abilities.",
    "You will be given an Implementation of a program, a specification of the program and the "
    "mediums that GnatProve raised for it.",
    "You must complete the package body of the given program, inserting one or multiple pragma "
    "statements.",
    "You must not modify the code in any other way, except to add for loops and if statements "
    "that enclose only pragma statements, and do not modify the functionality.",
))


def system_message_for(mode=None):
    """System message for a prompt mode; identical for both variants"""
    override = None
    if mode is not None:
        override = mode.system_message_override
    if override is None:
        override = getattr(settings, 'SYSTEM_MESSAGE_OVERRIDE', None)

    message = override or SYSTEM_MESSAGE
    if len(message) > SYSTEM_MESSAGE_CAP:
        raise CapExceeded(
            f"System message is {len(message)} characters, the cap is {SYSTEM_MESSAGE_CAP}"
        )
    return message


def mode_label(mode):
    parts = [mode.variant.value]
    if mode.medium_in_prompt:
        parts.append('medium_in_prompt')
    if mode.retry_context is not None:
        parts.append('retry')
    return '+'.join(parts)


def _basename(path):
    return PurePosixPath(str(path).replace('\\', '/')).name


def format_mediums(diagnostics, body, body_name=None, sources=None):
    """One block per medium: message, line number, the offending line and the one below.

    When `body_name` and `sources` are given, mediums reported against
    another file take their code lines from that file.
    """
    sources = sources or {}
    blocks = []
    for diagnostic in diagnostics:
        if diagnostic.severity != Severity.MEDIUM:
            continue

        text = body
        if body_name is not None and _basename(diagnostic.file) != _basename(body_name):
            text = sources.get(_basename(diagnostic.file))

        lines = [f"medium: {diagnostic.message}", f"at line {diagnostic.line}:"]
        if text is not None:
            source_lines = text.splitlines()
            lines.extend(source_lines[diagnostic.line - 1:diagnostic.line + 1])
        blocks.append("\n".join(lines))

    return "\n\n".join(blocks)


def dependency_sources(project):
    """basename -> text for every file quoted as a dependency"""
    names = sorted(project.spec_files) + sorted(
        path for path in project.body_files if path != project.target_body
    )
    return {_basename(name): project.read(name) for name in names}


def format_dependencies(project):
    blocks = [
        f"-- file: {name}\n{text.rstrip()}"
        for name, text in dependency_sources(project).items()
    ]
    return "\n\n".join(blocks)


def _retry_block(context, body_name, sources):
    previous = context.previous_body.rstrip('\n')
    mediums = format_mediums(context.previous_diagnostics, context.previous_body, body_name, sources)
    parts = [RETRY_HEADER, f"```ada\n{previous}\n```"]
    if mediums:
        parts.extend([RETRY_MEDIUM_HEADER, mediums])
    else:
        parts.append(RETRY_NO_MEDIUMS)
    return "\n\n".join(parts)


def build_prompt(case, mode=None, attempt_index=0):
    """Assemble the system message and user prompt for one attempt on a case"""
    mode = mode or PromptMode()
    project = case.project
    sources = dependency_sources(project)

    sections = [
        OPENINGS[mode.variant],
        FENCE_EXAMPLE,
        DEPENDENCIES_HEADER,
        format_dependencies(project),
        BODY_HEADER,
        case.mutated_body.rstrip('\n'),
        *INSTRUCTIONS,
    ]

    if mode.medium_in_prompt:
        mediums = format_mediums(case.baseline.diagnostics, case.mutated_body, project.target_body, sources)
        if mediums:
            sections.extend([MEDIUM_HEADER, mediums])

    if mode.retry_context is not None:
        sections.append(_retry_block(mode.retry_context, project.target_body, sources))

    bundle = PromptBundle(
        system_message=system_message_for(mode),
        user_prompt="\n\n".join(sections) + "\n",
        provenance=PromptProvenance(case_id=case.case_id, mode=mode_label(mode), attempt_index=attempt_index),
    )
    logger.debug(f"Built {bundle.provenance.mode} prompt for {case.case_id} (attempt {attempt_index})")
    return bundle


def prompt_digest(bundle):
    return request_digest({'system': bundle.system_message, 'user': bundle.user_prompt})
