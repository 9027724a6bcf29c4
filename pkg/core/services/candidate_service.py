"""
Candidate extraction and annotation-only diff validation.

A candidate is legal when it is the original token stream with nothing but
annotation statements inserted at statement boundaries: pragmas, optionally
wrapped in `for` loops and `if` statements whose bodies are themselves
annotation statements.
Comments, whitespace and the case of identifiers/keywords never matter.
"""
import difflib
import logging
import re

from ..exceptions import NoCodeFound
from ..models import (
    Candidate,
    CandidateOrigin,
    Extraction,
    InsertedRegion,
    TokenKind,
    ValidationResult,
    Verdict,
    Violation,
)
from .ada_lex import significant_tokens, tokenize

logger = logging.getLogger(__name__)

_FENCE_RE = re.compile(
    r'^[ \t]*```[ \t]*(?P<tag>[^\s`]*)[^\n]*\n(?P<body>.*?)^[ \t]*```',
    re.MULTILINE | re.DOTALL,
)

# Pragmas a candidate may add. Assume is excluded: it is taken on trust by the prover.
ALLOWED_PRAGMAS = frozenset({'loop_invariant', 'loop_variant', 'assert', 'assert_and_cut'})

_EXCERPT_LENGTH = 60

# Tokens after which a statement or declaration may begin
_STATEMENT_OPENERS = frozenset({';', 'begin', 'declare', 'loop', 'then', 'else', 'is'})


def extract_code(response, origin=None):
    """Last ```ada block of a response, else the last untagged block"""
    ada_blocks = []
    plain_blocks = []
    for match in _FENCE_RE.finditer(response or ''):
        body = match.group('body')
        if body.endswith('\r\n'):
            body = body[:-2]
        elif body.endswith('\n'):
            body = body[:-1]
        if not body.strip():
            continue

        tag = match.group('tag').lower()
        if tag == 'ada':
            ada_blocks.append(body)
        elif tag == '':
            plain_blocks.append(body)

    if ada_blocks:
        body, extraction = ada_blocks[-1], Extraction.ADA_FENCE
    elif plain_blocks:
        body, extraction = plain_blocks[-1], Extraction.GENERIC_FENCE
    else:
        raise NoCodeFound("Response contains no fenced code block")

    return Candidate(body=body, origin=origin or CandidateOrigin(), extraction=extraction)


class StatementReader:
    """Reads allowed annotation statements from a significant-token list"""

    def __init__(self, tokens):
        self.tokens = tokens
        self._memo = {}
        # paren depth in front of each token
        self._depths = []
        depth = 0
        for token in tokens:
            self._depths.append(depth)
            if token.text == '(':
                depth += 1
            elif token.text == ')':
                depth -= 1
        self._depths.append(depth)

    def word(self, index):
        if index >= len(self.tokens):
            return None
        token = self.tokens[index]
        if token.kind in (TokenKind.KEYWORD, TokenKind.IDENTIFIER):
            return token.text.lower()
        return token.text

    def at_boundary(self, index):
        """True when a statement may start at index: the start of the file or after an opener at depth 0"""
        if index == 0:
            return True
        if self._depths[index] != 0:
            return False
        previous = self.word(index - 1)
        if previous not in _STATEMENT_OPENERS:
            return False
        # `and then` and `or else` continue a condition
        return not (previous in ('then', 'else') and index >= 2 and self.word(index - 2) in ('and', 'or'))

    def statement(self, index):
        """(end, description) of the allowed statement starting at index, or None"""
        if index not in self._memo:
            self._memo[index] = self._read(index)
        return self._memo[index]

    def statements(self, start, end):
        """Descriptions if tokens[start:end] is exactly a run of allowed statements"""
        descriptions = []
        position = start
        while position < end:
            read = self.statement(position)
            if read is None or read[0] > end:
                return None
            position, description = read
            descriptions.append(description)
        return descriptions if descriptions else None

    def _read(self, index):
        word = self.word(index)
        if word == 'pragma':
            return self._pragma(index)
        if word == 'for':
            return self._for_loop(index)
        if word == 'if':
            return self._if_statement(index)
        return None

    def _pragma(self, index):
        name = self.word(index + 1)
        if name not in ALLOWED_PRAGMAS:
            return None
        depth = 0
        for position in range(index + 2, len(self.tokens)):
            text = self.tokens[position].text
            if text == '(':
                depth += 1
            elif text == ')':
                depth -= 1
                if depth < 0:
                    return None
            elif text == ';':
                if depth != 0:
                    return None
                return position + 1, f"pragma {self.tokens[index + 1].text}"
        return None

    def _header_end(self, index, keyword):
        """Index just past the `keyword` that ends a for/if/elsif header at paren depth 0"""
        depth = 0
        for position in range(index + 1, len(self.tokens)):
            text = self.tokens[position].text
            word = self.word(position)
            if text == '(':
                depth += 1
            elif text == ')':
                depth -= 1
                if depth < 0:
                    return None
            elif text == ';':
                return None
            elif depth == 0 and word == keyword:
                # `and then` is part of the condition
                if keyword == 'then' and self.word(position - 1) == 'and':
                    continue
                return position + 1
        return None

    def _body(self, index, terminators):
        """Read statements until one of `terminators`; at least one statement required"""
        position = index
        count = 0
        while position < len(self.tokens):
            if self.word(position) in terminators:
                return (position, count) if count else None
            read = self.statement(position)
            if read is None:
                return None
            position = read[0]
            count += 1
        return None

    def _for_loop(self, index):
        position = self._header_end(index, 'loop')
        if position is None:
            return None
        body = self._body(position, ('end',))
        if body is None:
            return None
        position, _ = body
        if self.word(position + 1) != 'loop' or self.word(position + 2) != ';':
            return None
        return position + 3, "for loop enclosing annotations"

    def _if_statement(self, index):
        position = self._header_end(index, 'then')
        while position is not None:
            body = self._body(position, ('elsif', 'else', 'end'))
            if body is None:
                return None
            position, _ = body
            word = self.word(position)
            if word == 'elsif':
                position = self._header_end(position, 'then')
            elif word == 'else':
                body = self._body(position + 1, ('end',))
                if body is None:
                    return None
                position, _ = body
                break
            else:
                break
        if position is None:
            return None
        if self.word(position + 1) != 'if' or self.word(position + 2) != ';':
            return None
        return position + 3, "if statement enclosing annotations"


def _align(original, candidate, reader):
    """Insertion-only alignment as a list of inserted (start, end) candidate ranges, or None"""
    target = (len(original), len(candidate))
    parents = {(0, 0): None}
    stack = [(0, 0)]

    while stack:
        state = stack.pop()
        if state == target:
            break
        i, j = state

        successors = []
        read = reader.statement(j) if j < len(candidate) and reader.at_boundary(j) else None
        if read is not None:
            successors.append(((i, read[0]), (j, read[0])))
        if i < len(original) and j < len(candidate) and original[i] == candidate[j]:
            successors.append(((i + 1, j + 1), None))

        # Matching steps are explored first
        for successor, insertion in successors:
            if successor not in parents:
                parents[successor] = (state, insertion)
                stack.append(successor)
    else:
        return None

    insertions = []
    state = target
    while parents[state] is not None:
        state, insertion = parents[state]
        if insertion is not None:
            insertions.append(insertion)
    insertions.reverse()
    return insertions


def _excerpt(tokens):
    text = ' '.join(token.text for token in tokens)
    if len(text) > _EXCERPT_LENGTH:
        text = text[:_EXCERPT_LENGTH - 3] + '...'
    return text


def _violations(original_tokens, candidate_tokens, reader):
    """Explain a rejection from a token-level difflib comparison"""
    matcher = difflib.SequenceMatcher(
        None,
        [token.folded for token in original_tokens],
        [token.folded for token in candidate_tokens],
        autojunk=False,
    )

    def candidate_span(j1, j2):
        if j1 < j2:
            return candidate_tokens[j1].span.start, candidate_tokens[j2 - 1].span.end
        if j1 < len(candidate_tokens):
            position = candidate_tokens[j1].span.start
        elif candidate_tokens:
            position = candidate_tokens[-1].span.end
        else:
            position = 0
        return position, position

    violations = []
    for tag, i1, i2, j1, j2 in matcher.get_opcodes():
        if tag == 'equal':
            continue
        start, end = candidate_span(j1, j2)
        if tag == 'delete':
            reason = f"deleted '{_excerpt(original_tokens[i1:i2])}'"
        elif tag == 'replace':
            reason = (
                f"replaced '{_excerpt(original_tokens[i1:i2])}' "
                f"with '{_excerpt(candidate_tokens[j1:j2])}'"
            )
        else:
            if reader.statements(j1, j2) is None:
                reason = f"inserted '{_excerpt(candidate_tokens[j1:j2])}', which is not an annotation statement"
            elif not reader.at_boundary(j1):
                reason = f"inserted '{_excerpt(candidate_tokens[j1:j2])}' inside a statement"
            else:
                continue
        violations.append(Violation(start=start, end=end, reason=reason))
    return violations


def validate_diff(original, candidate):
    """Accept iff candidate only adds annotation statements to original"""
    original_tokens = significant_tokens(tokenize(original))
    candidate_tokens = significant_tokens(tokenize(candidate))
    reader = StatementReader(candidate_tokens)

    insertions = _align(
        [token.folded for token in original_tokens],
        [token.folded for token in candidate_tokens],
        reader,
    )

    if insertions is None:
        violations = _violations(original_tokens, candidate_tokens, reader)
        if not violations:
            violations = [Violation(
                start=0,
                end=len(candidate),
                reason="no insertion-only alignment with the original exists",
            )]
        logger.debug(f"Candidate rejected: {violations[0].reason}")
        return ValidationResult(verdict=Verdict.REJECTED, violations=violations)

    # Merge back-to-back inserted statements into maximal regions
    regions = []
    for start, end in insertions:
        description = reader.statement(start)[1]
        if regions and regions[-1][1] == start:
            regions[-1] = (regions[-1][0], end, regions[-1][2] + [description])
        else:
            regions.append((start, end, [description]))

    inserted = [
        InsertedRegion(
            start=candidate_tokens[start].span.start,
            end=candidate_tokens[end - 1].span.end,
            description='; '.join(descriptions),
        )
        for start, end, descriptions in regions
    ]
    return ValidationResult(verdict=Verdict.ACCEPTED, inserted_regions=inserted)
