"""
Lossless lexing of SPARK/Ada source.

Only as much structure is recovered as the removal schemata need: pragma
statements, loop regions and their nesting. Comments and string/character
literals are single tokens, so nothing inside them is ever taken for code.
"""
import hashlib
import logging
import re

from ..exceptions import MalformedPragma, StaleSites, UnbalancedLoop
from ..models import (
    Cut,
    LoopRegion,
    PragmaKind,
    PragmaSite,
    Span,
    StructureMap,
    Token,
    TokenKind,
)

logger = logging.getLogger(__name__)

ADA_KEYWORDS = frozenset({
    'abort', 'abs', 'abstract', 'accept', 'access', 'aliased', 'all', 'and',
    'array', 'at', 'begin', 'body', 'case', 'constant', 'declare', 'delay',
    'delta', 'digits', 'do', 'else', 'elsif', 'end', 'entry', 'exception',
    'exit', 'for', 'function', 'generic', 'goto', 'if', 'in', 'interface',
    'is', 'limited', 'loop', 'mod', 'new', 'not', 'null', 'of', 'or',
    'others', 'out', 'overriding', 'package', 'pragma', 'private',
    'procedure', 'protected', 'raise', 'range', 'record', 'rem', 'renames',
    'requeue', 'return', 'reverse', 'select', 'separate', 'some', 'subtype',
    'synchronized', 'tagged', 'task', 'terminate', 'then', 'type', 'until',
    'use', 'when', 'while', 'with', 'xor',
})

_TOKEN_RE = re.compile(r"""
    (?P<newline>\r\n|\n|\r)
  | (?P<whitespace>[^\S\r\n]+)
  | (?P<comment>--[^\r\n]*)
  | (?P<string>"(?:[^"\r\n]|"")*")
  | (?P<character>'[^\r\n]')
  | (?P<number>\d[\d_]*(?:\#[0-9A-Za-z_.]*\#|\.\d[\d_]*)?(?:[eE][+-]?\d[\d_]*)?)
  | (?P<identifier>[^\W\d]\w*)
  | (?P<delimiter>=>|\.\.|\*\*|:=|/=|>=|<=|<<|>>|<>)
  | (?P<other>[\s\S])
""", re.VERBOSE)

_GROUP_KINDS = {
    'newline': TokenKind.NEWLINE,
    'whitespace': TokenKind.WHITESPACE,
    'comment': TokenKind.COMMENT,
    'string': TokenKind.STRING_LITERAL,
    'character': TokenKind.CHARACTER_LITERAL,
    'number': TokenKind.NUMERIC_LITERAL,
    'delimiter': TokenKind.PUNCTUATION,
    'other': TokenKind.PUNCTUATION,
}

# After these a quote is an attribute tick (X'First, T'(...)), not a character literal
_TICK_PRECEDERS = (TokenKind.IDENTIFIER, TokenKind.STRING_LITERAL, TokenKind.CHARACTER_LITERAL)

# Tokens that end the backward search for a loop header
_HEADER_BOUNDARIES = frozenset({'begin', 'loop', 'is', 'declare', 'do'})

_LINE_RE = re.compile(r'[^\r\n]*(?:\r\n|\n|\r)?')


def source_digest(source):
    return hashlib.sha256(source.encode('utf-8')).hexdigest()


def tokenize(source):
    """Split source into tokens whose texts concatenate back to source"""
    tokens = []
    line, line_start = 1, 0
    previous = None  # last non-trivia token
    pos = 0
    length = len(source)

    while pos < length:
        match = _TOKEN_RE.match(source, pos)
        group = match.lastgroup
        text = match.group()

        if group == 'character' and previous is not None and (
            previous.kind in _TICK_PRECEDERS or previous.text == ')'
        ):
            # Attribute tick: emit the quote alone and rescan after it
            text = "'"
            kind = TokenKind.PUNCTUATION
        elif group == 'identifier':
            kind = TokenKind.KEYWORD if text.lower() in ADA_KEYWORDS else TokenKind.IDENTIFIER
        else:
            kind = _GROUP_KINDS[group]

        end = pos + len(text)
        token = Token(
            kind=kind,
            text=text,
            span=Span(start=pos, end=end, line=line, column=pos - line_start + 1),
        )
        tokens.append(token)

        if kind == TokenKind.NEWLINE:
            line += 1
            line_start = end
        elif not token.is_trivia:
            previous = token
        pos = end

    return tokens


def render(tokens):
    return ''.join(token.text for token in tokens)


def significant_tokens(tokens):
    return [token for token in tokens if not token.is_trivia]


def scan_structure(source):
    """Locate pragma statements and loop regions in an implementation file"""
    sig = significant_tokens(tokenize(source))

    open_loops = []  # stack of loop indices
    headers = []  # per loop index: (header token, depth)
    ends = {}  # loop index -> closing ';' token
    raw_sites = []  # (kind, start token, end token, loop path)

    i = 0
    while i < len(sig):
        token = sig[i]

        if token.is_keyword('pragma'):
            end_index = _pragma_terminator(sig, i)
            name = sig[i + 1].text if i + 1 < len(sig) and sig[i + 1].kind == TokenKind.IDENTIFIER else ''
            raw_sites.append((PragmaKind.classify(name), token, sig[end_index], tuple(open_loops)))
            i = end_index + 1
            continue

        if token.is_keyword('loop'):
            if i > 0 and sig[i - 1].is_keyword('end'):
                if not open_loops:
                    raise UnbalancedLoop(
                        f"'end loop' without matching loop at line {token.span.line}"
                    )
                terminator = _statement_terminator(sig, i + 1)
                if terminator is None:
                    raise UnbalancedLoop(f"'end loop' at line {token.span.line} is not terminated")
                ends[open_loops.pop()] = sig[terminator]
                i = terminator + 1
                continue

            headers.append((_loop_header(sig, i), len(open_loops)))
            open_loops.append(len(headers) - 1)

        i += 1

    if open_loops:
        header, _ = headers[open_loops[-1]]
        raise UnbalancedLoop(f"loop opened at line {header.span.line} is never closed")

    sites = []
    ordinals = {}
    invariant_counts = {}
    for kind, start, end, path in raw_sites:
        innermost = path[-1] if path else None
        ordinal = ordinals.get((innermost, kind), 0)
        ordinals[(innermost, kind)] = ordinal + 1
        if kind == PragmaKind.LOOP_INVARIANT and innermost is not None:
            invariant_counts[innermost] = invariant_counts.get(innermost, 0) + 1
        sites.append(PragmaSite(
            kind=kind,
            span=Span(start=start.span.start, end=end.span.end, line=start.span.line, column=start.span.column),
            loop_path=path,
            ordinal_in_loop=ordinal,
            text=source[start.span.start:end.span.end],
        ))

    loops = []
    for index, (header, depth) in enumerate(headers):
        loops.append(LoopRegion(
            index=index,
            span=Span(
                start=header.span.start,
                end=ends[index].span.end,
                line=header.span.line,
                column=header.span.column,
            ),
            depth=depth,
            invariant_count=invariant_counts.get(index, 0),
        ))

    return StructureMap(sites=tuple(sites), loops=tuple(loops), source_digest=source_digest(source))


def _pragma_terminator(sig, start):
    """Index of the ';' closing the pragma at `start`; parentheses must balance"""
    depth = 0
    for j in range(start + 1, len(sig)):
        text = sig[j].text
        if text == '(':
            depth += 1
        elif text == ')':
            depth -= 1
            if depth < 0:
                break
        elif text == ';':
            if depth == 0:
                return j
            break
    raise MalformedPragma(f"pragma at line {sig[start].span.line} has unbalanced parentheses")


def _statement_terminator(sig, start):
    """Index of the ';' after `end loop [name]`"""
    for j in range(start, min(start + 2, len(sig))):
        if sig[j].text == ';':
            return j
        if sig[j].kind != TokenKind.IDENTIFIER:
            return None
    return None


def _loop_header(sig, loop_index):
    """Walk back from a `loop` keyword to its `for`/`while`, if the statement has one"""
    depth = 0
    for j in range(loop_index - 1, -1, -1):
        token = sig[j]
        if token.text == ')':
            depth += 1
        elif token.text == '(':
            depth -= 1
            if depth < 0:
                break
        elif depth == 0:
            if token.is_keyword('for') or token.is_keyword('while'):
                return token
            if token.text in (';', '=>') or (
                token.kind == TokenKind.KEYWORD and token.text.lower() in _HEADER_BOUNDARIES
            ):
                break
    return sig[loop_index]


def removal_cuts(source, sites):
    """Deleted stretches for `sites`: each span, widened to its line when the line empties"""
    deleted = bytearray(len(source))
    for site in sites:
        deleted[site.span.start:site.span.end] = b'\x01' * (site.span.end - site.span.start)

    for match in _LINE_RE.finditer(source):
        line_start, line_end = match.span()
        if line_start == line_end:
            continue
        content = match.group().rstrip('\r\n')
        content_end = line_start + len(content)
        if not any(deleted[line_start:content_end]):
            continue
        remaining = (
            ch for offset, ch in enumerate(content)
            if not deleted[line_start + offset]
        )
        if all(ch.isspace() for ch in remaining):
            deleted[line_start:line_end] = b'\x01' * (line_end - line_start)

    cuts = []
    pos = 0
    length = len(source)
    while pos < length:
        if deleted[pos]:
            end = pos
            while end < length and deleted[end]:
                end += 1
            cuts.append(Cut(start=pos, text=source[pos:end]))
            pos = end
        else:
            pos += 1
    return cuts


def apply_cuts(source, cuts):
    pieces = []
    pos = 0
    for cut in sorted(cuts, key=lambda c: c.start):
        pieces.append(source[pos:cut.start])
        pos = cut.end
    pieces.append(source[pos:])
    return ''.join(pieces)


def restore_cuts(mutated, cuts):
    """Inverse of apply_cuts: splice deleted text back into the mutated source"""
    pieces = []
    original_pos = 0
    mutated_pos = 0
    for cut in sorted(cuts, key=lambda c: c.start):
        keep = cut.start - original_pos
        pieces.append(mutated[mutated_pos:mutated_pos + keep])
        pieces.append(cut.text)
        mutated_pos += keep
        original_pos = cut.end
    pieces.append(mutated[mutated_pos:])
    return ''.join(pieces)


def remove_sites(source, sites, digest=None):
    """Delete the given pragma sites (and any line they leave blank) from source"""
    sites = list(sites)
    if digest is not None and digest != source_digest(source):
        raise StaleSites("source digest does not match the scanned file")
    if not sites:
        return source

    known = set(scan_structure(source).sites)
    for site in sites:
        if site not in known:
            raise StaleSites(f"site at line {site.span.line} was not scanned from this source")

    mutated = apply_cuts(source, removal_cuts(source, sites))
    logger.debug(f"Removed {len(sites)} pragma site(s)")
    return mutated
