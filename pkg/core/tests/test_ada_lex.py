from itertools import combinations

from django.test import SimpleTestCase

from core.exceptions import MalformedPragma, StaleSites, UnbalancedLoop
from core.models import PragmaKind, TokenKind
from core.services.ada_lex import (
    apply_cuts,
    removal_cuts,
    remove_sites,
    render,
    restore_cuts,
    scan_structure,
    significant_tokens,
    tokenize,
)
from core.tests.helpers import CORPUS, DOUBLE_BODY, DOUBLE_WITHOUT_INVARIANTS, corpus_source_files

NESTED_LOOPS = """procedure P is
begin
   for I in 1 .. 3 loop
      pragma Loop_Invariant (I >= 1);
      for J in 1 .. 3 loop
         pragma Loop_Invariant (J >= 1);
         null;
      end loop;
   end loop;
end P;
"""

MATRIX_BODY = (CORPUS / 'matrix' / 'matrix_ops.adb').read_text(encoding='utf-8')
SEARCH_BODY = (CORPUS / 'search' / 'search.adb').read_text(encoding='utf-8')


def texts(source):
    return [token.text for token in significant_tokens(tokenize(source))]


class TokenizeTests(SimpleTestCase):

    def test_empty_source(self):
        self.assertEqual(tokenize(''), [])
        self.assertEqual(render([]), '')

    def test_round_trip_over_fixture_corpus(self):
        files = corpus_source_files()
        self.assertGreaterEqual(len(files), 10)
        for path in files:
            with self.subTest(path=path.name):
                source = path.read_text(encoding='utf-8')
                self.assertEqual(render(tokenize(source)), source)

    def test_double_number_has_two_pragma_keywords(self):
        pragmas = [token for token in tokenize(DOUBLE_BODY) if token.is_keyword('pragma')]
        self.assertEqual(len(pragmas), 2)
        self.assertTrue(all(token.kind == TokenKind.KEYWORD for token in pragmas))

    def test_replacing_one_token_changes_only_its_slice(self):
        tokens = tokenize(DOUBLE_BODY)
        index = next(i for i, token in enumerate(tokens) if token.text == '2')
        token = tokens[index]
        tokens[index] = token.model_copy(update={'text': '3'})
        rendered = render(tokens)
        self.assertEqual(rendered[:token.span.start], DOUBLE_BODY[:token.span.start])
        self.assertEqual(rendered[token.span.start], '3')
        self.assertEqual(rendered[token.span.end:], DOUBLE_BODY[token.span.end:])

    def test_spans_carry_line_and_column(self):
        tokens = tokenize(DOUBLE_BODY)
        pragma = next(token for token in tokens if token.is_keyword('pragma'))
        self.assertEqual((pragma.span.line, pragma.span.column), (6, 7))

    def test_attribute_tick_is_not_a_character_literal(self):
        self.assertEqual(texts("X := S'First;"), ['X', ':=', 'S', "'", 'First', ';'])
        self.assertEqual(texts("Character'('a')"), ['Character', "'", '(', "'a'", ')'])
        self.assertEqual(texts("N := A (I)'Length;"), ['N', ':=', 'A', '(', 'I', ')', "'", 'Length', ';'])

    def test_character_literals(self):
        tokens = significant_tokens(tokenize("C := ' ';"))
        self.assertEqual(tokens[-2].kind, TokenKind.CHARACTER_LITERAL)
        self.assertEqual(tokens[-2].text, "' '")

    def test_comments_and_strings_are_single_tokens(self):
        tokens = tokenize('Put_Line ("pragma Assert (X);"); -- pragma Assert (Y);\n')
        kinds = [token.kind for token in tokens]
        self.assertIn(TokenKind.STRING_LITERAL, kinds)
        self.assertIn(TokenKind.COMMENT, kinds)
        self.assertFalse(any(token.is_keyword('pragma') for token in tokens))

    def test_keywords_are_case_insensitive(self):
        tokens = significant_tokens(tokenize('PRAGMA Loop_Invariant (True);'))
        self.assertTrue(tokens[0].is_keyword('pragma'))
        self.assertEqual(tokens[0].folded, significant_tokens(tokenize('pragma'))[0].folded)


class ScanStructureTests(SimpleTestCase):

    def test_double_number(self):
        structure = scan_structure(DOUBLE_BODY)
        self.assertEqual(len(structure.loops), 1)
        self.assertEqual(structure.loops[0].invariant_count, 2)
        self.assertEqual(structure.loops[0].span.line, 5)
        self.assertEqual([site.kind for site in structure.sites], [PragmaKind.LOOP_INVARIANT] * 2)
        self.assertEqual([site.loop_path for site in structure.sites], [(0,), (0,)])
        self.assertEqual([site.ordinal_in_loop for site in structure.sites], [0, 1])
        self.assertEqual(structure.sites[1].text, 'pragma Loop_Invariant (Count < X);')

    def test_comment_only_source(self):
        structure = scan_structure('-- pragma Assert (X);\n')
        self.assertEqual(structure.sites, ())
        self.assertEqual(structure.loops, ())

    def test_nested_loops(self):
        structure = scan_structure(NESTED_LOOPS)
        self.assertEqual([loop.depth for loop in structure.loops], [0, 1])
        self.assertEqual([site.loop_path for site in structure.sites], [(0,), (0, 1)])

    def test_named_loops_and_multi_line_pragmas(self):
        structure = scan_structure(MATRIX_BODY)
        self.assertEqual([loop.depth for loop in structure.loops], [0, 1, 0, 1])
        self.assertEqual([loop.invariant_count for loop in structure.loops], [1, 2, 1, 1])
        self.assertEqual([loop.span.line for loop in structure.loops], [6, 7, 23, 25])
        self.assertEqual([site.span.line for site in structure.sites], [9, 10, 14, 24, 26])
        self.assertEqual(
            [site.loop_path for site in structure.sites],
            [(0, 1), (0, 1), (0,), (2,), (2, 3)],
        )
        self.assertTrue(MATRIX_BODY[:structure.loops[0].span.end].endswith('end loop Rows;'))
        for site in structure.sites:
            for index in site.loop_path:
                self.assertTrue(structure.loops[index].span.contains(site.span))

    def test_while_loops_variants_and_asserts(self):
        structure = scan_structure(SEARCH_BODY)
        self.assertEqual(len(structure.loops), 2)
        kinds = [(site.kind, site.span.line, site.innermost_loop) for site in structure.sites]
        self.assertEqual(kinds, [
            (PragmaKind.LOOP_INVARIANT, 8, 0),
            (PragmaKind.ASSERT, 12, 0),
            (PragmaKind.LOOP_INVARIANT, 24, 1),
            (PragmaKind.LOOP_INVARIANT, 25, 1),
            (PragmaKind.LOOP_VARIANT, 26, 1),
            (PragmaKind.ASSERT, 29, None),
        ])

    def test_unclosed_loop(self):
        with self.assertRaises(UnbalancedLoop):
            scan_structure('begin\n   loop\n      null;\nend;\n')

    def test_end_loop_without_loop(self):
        with self.assertRaises(UnbalancedLoop):
            scan_structure('begin\n   null;\n   end loop;\nend;\n')

    def test_unbalanced_pragma(self):
        with self.assertRaises(MalformedPragma):
            scan_structure('pragma Assert ((X > 0);\n')

    def test_other_pragmas_are_classified(self):
        structure = scan_structure('pragma Assume (X > 0);\npragma Inline (P);\n')
        self.assertEqual([site.kind for site in structure.sites], [PragmaKind.OTHER, PragmaKind.OTHER])


class RemoveSitesTests(SimpleTestCase):

    def test_removing_both_invariants(self):
        structure = scan_structure(DOUBLE_BODY)
        mutated = remove_sites(DOUBLE_BODY, structure.sites, digest=structure.source_digest)
        self.assertEqual(mutated, DOUBLE_WITHOUT_INVARIANTS)

    def test_empty_set_is_identity(self):
        self.assertEqual(remove_sites(DOUBLE_BODY, []), DOUBLE_BODY)

    def test_multi_line_pragma_takes_its_lines(self):
        structure = scan_structure(MATRIX_BODY)
        site = structure.sites[1]
        mutated = remove_sites(MATRIX_BODY, [site])
        lines = MATRIX_BODY.splitlines(keepends=True)
        self.assertEqual(mutated, ''.join(lines[:9] + lines[12:]))

    def test_pragma_sharing_a_line_keeps_the_code(self):
        source = 'begin\n   X := 1; pragma Assert (X = 1);\nend;\n'
        structure = scan_structure(source)
        self.assertEqual(remove_sites(source, structure.sites), 'begin\n   X := 1; \nend;\n')

    def test_stale_digest(self):
        structure = scan_structure(DOUBLE_BODY)
        with self.assertRaises(StaleSites):
            remove_sites(DOUBLE_BODY, structure.sites, digest='0' * 64)

    def test_site_from_another_source(self):
        foreign = scan_structure(MATRIX_BODY).sites[0]
        with self.assertRaises(StaleSites):
            remove_sites(DOUBLE_BODY, [foreign])

    def test_every_subset_restores(self):
        for source in (DOUBLE_BODY, MATRIX_BODY, SEARCH_BODY):
            sites = scan_structure(source).sites
            for size in range(len(sites) + 1):
                for subset in combinations(sites, size):
                    cuts = removal_cuts(source, subset)
                    mutated = apply_cuts(source, cuts)
                    pragmas = sum(1 for token in tokenize(mutated) if token.is_keyword('pragma'))
                    self.assertEqual(pragmas, len(sites) - size)
                    self.assertEqual(restore_cuts(mutated, cuts), source)
