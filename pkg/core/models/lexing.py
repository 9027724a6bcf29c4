from enum import Enum

from pydantic import BaseModel, ConfigDict


class TokenKind(str, Enum):
    IDENTIFIER = 'identifier'
    KEYWORD = 'keyword'
    STRING_LITERAL = 'string-literal'
    CHARACTER_LITERAL = 'character-literal'
    NUMERIC_LITERAL = 'numeric-literal'
    COMMENT = 'comment'
    PUNCTUATION = 'punctuation'
    WHITESPACE = 'whitespace'
    NEWLINE = 'newline'


# Kinds that carry no program meaning
TRIVIA_KINDS = frozenset({TokenKind.COMMENT, TokenKind.WHITESPACE, TokenKind.NEWLINE})


class Span(BaseModel):
    """Half-open range [start, end) of string offsets plus the 1-based line/column of start"""
    model_config = ConfigDict(frozen=True)

    start: int
    end: int
    line: int = 1
    column: int = 1

    def contains(self, other):
        return self.start <= other.start and other.end <= self.end


class Token(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: TokenKind
    text: str
    span: Span

    @property
    def is_trivia(self):
        return self.kind in TRIVIA_KINDS

    @property
    def folded(self):
        """Comparison key: Ada identifiers and keywords are case-insensitive"""
        if self.kind in (TokenKind.IDENTIFIER, TokenKind.KEYWORD):
            return (self.kind.value, self.text.lower())
        return (self.kind.value, self.text)

    def is_keyword(self, word):
        return self.kind == TokenKind.KEYWORD and self.text.lower() == word


class PragmaKind(str, Enum):
    LOOP_INVARIANT = 'Loop_Invariant'
    LOOP_VARIANT = 'Loop_Variant'
    ASSERT = 'Assert'
    OTHER = 'Other'

    @classmethod
    def classify(cls, name):
        lowered = (name or '').lower()
        for kind in (cls.LOOP_INVARIANT, cls.LOOP_VARIANT, cls.ASSERT):
            if kind.value.lower() == lowered:
                return kind
        return cls.OTHER


# Pragma kinds the removal schemata operate on
ANNOTATION_KINDS = frozenset({PragmaKind.LOOP_INVARIANT, PragmaKind.LOOP_VARIANT, PragmaKind.ASSERT})


class PragmaSite(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: PragmaKind
    span: Span
    loop_path: tuple[int, ...] = ()
    ordinal_in_loop: int = 0
    text: str = ''

    @property
    def innermost_loop(self):
        return self.loop_path[-1] if self.loop_path else None


class LoopRegion(BaseModel):
    model_config = ConfigDict(frozen=True)

    index: int
    span: Span
    depth: int
    invariant_count: int = 0


class StructureMap(BaseModel):
    model_config = ConfigDict(frozen=True)

    sites: tuple[PragmaSite, ...] = ()
    loops: tuple[LoopRegion, ...] = ()
    source_digest: str

    def sites_in_loop(self, loop_index, kinds=None):
        """Sites whose innermost enclosing loop is `loop_index`"""
        return [
            site for site in self.sites
            if site.innermost_loop == loop_index and (kinds is None or site.kind in kinds)
        ]


class Cut(BaseModel):
    """One deleted stretch of the original text, in original coordinates"""
    model_config = ConfigDict(frozen=True)

    start: int
    text: str

    @property
    def end(self):
        return self.start + len(self.text)
