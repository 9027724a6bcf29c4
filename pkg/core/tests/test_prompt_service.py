from itertools import product

from django.test import SimpleTestCase, override_settings

from core.exceptions import CapExceeded
from core.models import SYSTEM_MESSAGE_CAP, Diagnostic, PromptMode, PromptVariant, RetryContext, Schema, Severity
from core.services.prompt_service import (
    BODY_HEADER,
    DEPENDENCIES_HEADER,
    MEDIUM_HEADER,
    RETRY_HEADER,
    RETRY_MEDIUM_HEADER,
    RETRY_NO_MEDIUMS,
    SYSTEM_MESSAGE,
    build_prompt,
    dependency_sources,
    format_mediums,
    mode_label,
    prompt_digest,
    system_message_for,
)
from core.tests.helpers import DOUBLE_WITHOUT_INVARIANTS, fixture_report, insert_after, make_case


def medium(line, message='assertion might fail', file='double.adb'):
    return Diagnostic(severity=Severity.MEDIUM, file=file, line=line, column=1, message=message)


class SystemMessageTests(SimpleTestCase):

    def test_built_in_message_fits_the_cap(self):
        self.assertLessEqual(len(SYSTEM_MESSAGE), SYSTEM_MESSAGE_CAP)
        self.assertTrue(SYSTEM_MESSAGE.startswith('You are a Spark2014/ADA programmer'))

    def test_identical_for_both_variants(self):
        self.assertEqual(
            system_message_for(PromptMode(variant=PromptVariant.BASE)),
            system_message_for(PromptMode(variant=PromptVariant.CHAIN_OF_THOUGHT)),
        )

    def test_override(self):
        self.assertEqual(system_message_for(PromptMode(system_message_override='Be brief.')), 'Be brief.')

    def test_override_over_the_cap(self):
        with self.assertRaises(CapExceeded):
            system_message_for(PromptMode(system_message_override='x' * 600))

    @override_settings(SYSTEM_MESSAGE_OVERRIDE='y' * 600)
    def test_configured_override_over_the_cap(self):
        with self.assertRaises(CapExceeded):
            build_prompt(make_case())


class FormatMediumsTests(SimpleTestCase):

    def test_empty(self):
        self.assertEqual(format_mediums([], DOUBLE_WITHOUT_INVARIANTS), '')

    def test_line_and_the_one_below(self):
        block = format_mediums(
            [medium(6, 'overflow check might fail, cannot prove upper bound for Result + 2')],
            DOUBLE_WITHOUT_INVARIANTS,
        )
        self.assertEqual(block, (
            "medium: overflow check might fail, cannot prove upper bound for Result + 2\n"
            "at line 6:\n"
            "      Result := Result + 2;\n"
            "      Count := Count + 1;"
        ))

    def test_last_line(self):
        block = format_mediums([medium(9)], DOUBLE_WITHOUT_INVARIANTS)
        self.assertEqual(block, "medium: assertion might fail\nat line 9:\nend Double_Number;")

    def test_only_mediums_are_quoted(self):
        warning = Diagnostic(severity=Severity.WARNING, file='double.adb', line=4, column=4, message='unused')
        block = format_mediums([warning, medium(5)], DOUBLE_WITHOUT_INVARIANTS)
        self.assertNotIn('unused', block)
        self.assertEqual(block.count('medium: '), 1)

    def test_mediums_in_other_files_quote_that_file(self):
        case = make_case()
        sources = dependency_sources(case.project)
        block = format_mediums(case.baseline.diagnostics, case.mutated_body, 'double.adb', sources)
        blocks = block.split('\n\n')
        self.assertEqual(len(blocks), 2)
        self.assertIn('at line 3:', blocks[1])
        self.assertIn('Post => Result = X * 2;', blocks[1])
        self.assertNotIn('Result := Result + 2;', blocks[1])

    def test_unknown_file_has_no_code_lines(self):
        block = format_mediums([medium(1, file='elsewhere.ads')], DOUBLE_WITHOUT_INVARIANTS, 'double.adb', {})
        self.assertEqual(block, "medium: assertion might fail\nat line 1:")


class BuildPromptTests(SimpleTestCase):

    def setUp(self):
        self.case = make_case()

    def test_base_opening(self):
        prompt = build_prompt(self.case, PromptMode())
        self.assertTrue(prompt.user_prompt.startswith('Try to solve the following problem logically and step by step.'))
        self.assertIn("```ada\n\ncode here\n\n```", prompt.user_prompt)

    def test_chain_of_thought_opening(self):
        prompt = build_prompt(self.case, PromptMode(variant=PromptVariant.CHAIN_OF_THOUGHT))
        self.assertTrue(prompt.user_prompt.startswith(
            'Try to solve the following problem by first explaining in natural language'
        ))

    def test_sections(self):
        user_prompt = build_prompt(self.case).user_prompt
        self.assertIn(DEPENDENCIES_HEADER, user_prompt)
        self.assertIn('-- file: double.ads', user_prompt)
        self.assertIn(f"{BODY_HEADER}\n\n{DOUBLE_WITHOUT_INVARIANTS.rstrip()}\n\n", user_prompt)
        self.assertIn('so that the code runs error and medium free.', user_prompt)
        self.assertNotIn(MEDIUM_HEADER, user_prompt)
        self.assertNotIn(RETRY_HEADER, user_prompt)
        self.assertTrue(user_prompt.endswith('\n'))

    def test_dependency_order(self):
        case = make_case('search', Schema.ALL_PRAGMAS, output='search_invariants_removed')
        user_prompt = build_prompt(case).user_prompt
        positions = [user_prompt.index(f'-- file: {name}') for name in ('search.ads', 'text_utils.ads', 'text_utils.adb')]
        self.assertEqual(positions, sorted(positions))
        self.assertNotIn('-- file: search.adb', user_prompt)

    def test_medium_in_prompt(self):
        user_prompt = build_prompt(self.case, PromptMode(medium_in_prompt=True)).user_prompt
        self.assertIn(MEDIUM_HEADER, user_prompt)
        for diagnostic in self.case.baseline.mediums:
            self.assertIn(f"medium: {diagnostic.message}\nat line {diagnostic.line}:", user_prompt)
        self.assertIn("      Result := Result + 2;\n      Count := Count + 1;", user_prompt)

    def test_medium_in_prompt_without_mediums(self):
        case = make_case(output='double_verified')
        user_prompt = build_prompt(case, PromptMode(medium_in_prompt=True)).user_prompt
        self.assertNotIn(MEDIUM_HEADER, user_prompt)

    def test_deterministic(self):
        first = build_prompt(self.case, PromptMode(medium_in_prompt=True))
        second = build_prompt(self.case, PromptMode(medium_in_prompt=True))
        self.assertEqual(first, second)
        self.assertEqual(prompt_digest(first), prompt_digest(second))
        other = build_prompt(self.case, PromptMode(variant=PromptVariant.CHAIN_OF_THOUGHT))
        self.assertNotEqual(prompt_digest(first), prompt_digest(other))

    def test_provenance(self):
        prompt = build_prompt(self.case, PromptMode(variant=PromptVariant.CHAIN_OF_THOUGHT, medium_in_prompt=True), 2)
        self.assertEqual(prompt.provenance.case_id, 'double.AllPragmas.0')
        self.assertEqual(prompt.provenance.mode, 'chain_of_thought+medium_in_prompt')
        self.assertEqual(prompt.provenance.attempt_index, 2)

    def test_mode_label(self):
        self.assertEqual(mode_label(PromptMode()), 'base')
        context = RetryContext(previous_body='x')
        self.assertEqual(mode_label(PromptMode().for_retry(context)), 'base+retry')


class RetryPromptTests(SimpleTestCase):

    def test_retry_prompts_extend_the_first_prompt(self):
        case = make_case()
        candidate = insert_after(DOUBLE_WITHOUT_INVARIANTS, 'begin', '   pragma Assert (X >= 0);')
        contexts = {
            'proved candidate': RetryContext(
                previous_body=candidate,
                previous_diagnostics=tuple(fixture_report('double_first_iteration').mediums),
            ),
            'unproved candidate': RetryContext(previous_body=candidate),
            'mutated body': RetryContext(
                previous_body=case.mutated_body,
                previous_diagnostics=tuple(case.baseline.mediums),
            ),
        }

        scenarios = product(PromptVariant, (False, True), contexts.items())
        for variant, medium_in_prompt, (label, context) in scenarios:
            with self.subTest(variant=variant.value, medium_in_prompt=medium_in_prompt, context=label):
                mode = PromptMode(variant=variant, medium_in_prompt=medium_in_prompt)
                first = build_prompt(case, mode, 0)
                retry = build_prompt(case, mode.for_retry(context), 1)

                self.assertTrue(retry.user_prompt.startswith(
                    first.user_prompt.rstrip('\n') + '\n\n' + RETRY_HEADER
                ))
                self.assertIn(f"```ada\n{context.previous_body.rstrip()}\n```", retry.user_prompt)
                self.assertEqual(retry.system_message, first.system_message)
                self.assertTrue(retry.provenance.mode.endswith('+retry'))
                if context.previous_diagnostics:
                    self.assertIn(RETRY_MEDIUM_HEADER, retry.user_prompt)
                    self.assertNotIn(RETRY_NO_MEDIUMS, retry.user_prompt)
                    tail = retry.user_prompt[len(first.user_prompt.rstrip('\n')):]
                    for diagnostic in context.previous_diagnostics:
                        self.assertIn(f"medium: {diagnostic.message}", tail)
                else:
                    self.assertIn(RETRY_NO_MEDIUMS, retry.user_prompt)
                    self.assertNotIn(RETRY_MEDIUM_HEADER, retry.user_prompt)

    def test_retry_quotes_the_previous_body_lines(self):
        case = make_case('double', Schema.LAST_INVARIANT_ONE_LOOP, output='double_first_iteration')
        context = RetryContext(
            previous_body=case.mutated_body,
            previous_diagnostics=tuple(case.baseline.mediums),
        )
        retry = build_prompt(case, PromptMode().for_retry(context), 1)
        tail = retry.user_prompt.split(RETRY_MEDIUM_HEADER, 1)[1]
        self.assertIn(
            "at line 6:\n      pragma Loop_Invariant (Result = Count * 2);\n      Result := Result + 2;",
            tail,
        )
