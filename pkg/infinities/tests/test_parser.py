from fractions import Fraction

from django.test import SimpleTestCase
from hypothesis import given

from infinities.exceptions import ContextError, ParseError
from infinities.limits import InNumber, as_in_number
from infinities.parser import (
    Context,
    infer_context,
    parse_expr,
    parse_prototype,
    parse_sequence,
    parse_value,
    tokenize,
)
from infinities.prototypes import OMEGA, UNIT, Prototype, log_tower, pow
from infinities.rendering import render_expr, render_limit, render_prototype, render_term
from infinities.sequences import Add, Const, Div, Exp, IndexN, Mul, PowConst, SeqExpr, Sin, Sub

from .strategies import chain_prototypes, limits, prototypes

S = parse_sequence
P = parse_prototype


# ==================================================
# 字句解析と構文エラー
# ==================================================

class SyntaxErrorTests(SimpleTestCase):

    def assertParseErrorAt(self, source, position):
        with self.assertRaises(ParseError) as context:
            parse_sequence(source)
        self.assertEqual(context.exception.position, position)
        self.assertIn(f"(offset {position})", context.exception.message)

    def test_tokens_end_with_end_marker(self):
        tokens = list(tokenize('exp(n) + 2'))
        self.assertEqual([t.kind for t in tokens], ['name', 'op', 'name', 'op', 'op', 'number', 'end'])
        self.assertEqual(tokens[-1].position, len('exp(n) + 2'))

    def test_unclosed_call(self):
        self.assertParseErrorAt('sin(', 4)

    def test_missing_parenthesis(self):
        self.assertParseErrorAt('(n + 1', 6)

    def test_unknown_name(self):
        self.assertParseErrorAt('foo(n)', 0)

    def test_bad_character(self):
        self.assertParseErrorAt('n $ 2', 2)

    def test_trailing_input(self):
        self.assertParseErrorAt('n 2', 2)

    def test_empty_input(self):
        self.assertParseErrorAt('', 0)

    def test_exponent_must_be_a_number(self):
        self.assertParseErrorAt('n^x', 2)
        self.assertParseErrorAt('n^(1/0)', 5)

    def test_parse_error_reports_position_in_json(self):
        with self.assertRaises(ParseError) as context:
            parse_sequence('sin(')
        self.assertEqual(context.exception.to_dict()['position'], 4)
        self.assertEqual(context.exception.exit_code, 2)


# ==================================================
# 文脈
# ==================================================

class ContextTests(SimpleTestCase):

    def test_omega_in_sequence(self):
        with self.assertRaises(ContextError):
            parse_sequence('w + 1')

    def test_index_in_limit(self):
        with self.assertRaises(ContextError):
            parse_value('n + 1')

    def test_tower_in_sequence(self):
        with self.assertRaises(ContextError):
            parse_sequence('expw(w)')

    def test_tower_argument(self):
        with self.assertRaises(ParseError):
            parse_value('lnw(2)')

    def test_infer_context(self):
        self.assertIs(infer_context('n^2 + 1'), Context.SEQUENCE)
        self.assertIs(infer_context('exp(w)/w'), Context.LIMIT)
        self.assertIs(infer_context('ω'), Context.LIMIT)
        self.assertIs(infer_context('3'), Context.SEQUENCE)
        with self.assertRaises(ContextError):
            infer_context('n + w')

    def test_parse_expr_dispatch(self):
        self.assertIsInstance(parse_expr('n^2'), SeqExpr)
        self.assertEqual(parse_expr('w^2'), P('w^2'))
        self.assertIsInstance(parse_expr('2*w + 1'), InNumber)
        with self.assertRaises(ContextError):
            parse_expr('2*w', Context.PROTOTYPE)

    def test_prototype_requires_unit_coefficient(self):
        for source in ('2*w', 'w + 1', '0', '1/(w + 1)'):
            with self.subTest(source=source):
                with self.assertRaises(ContextError):
                    parse_prototype(source)


# ==================================================
# 構文木
# ==================================================

class TreeTests(SimpleTestCase):

    def test_precedence(self):
        self.assertEqual(
            S('n + 2*n^2'),
            Add(IndexN(), Mul(Const(2), PowConst(IndexN(), 2))))
        self.assertEqual(S('1 - n/2'), Sub(Const(1), Div(IndexN(), Const(2))))

    def test_unary_minus(self):
        self.assertEqual(S('-3'), Const(-3))
        self.assertEqual(S('-n^2'), Mul(Const(-1), PowConst(IndexN(), 2)))
        self.assertEqual(S('+n'), IndexN())

    def test_exponent_forms(self):
        self.assertEqual(S('n^(1/2)'), PowConst(IndexN(), Fraction(1, 2)))
        self.assertEqual(S('n^-1'), PowConst(IndexN(), -1))
        self.assertEqual(S('n^(-3/4)'), PowConst(IndexN(), Fraction(-3, 4)))
        self.assertEqual(S('n^2.5'), PowConst(IndexN(), Fraction(5, 2)))

    def test_decimal_constants_are_exact(self):
        self.assertEqual(S('0.1'), Const(Fraction(1, 10)))
        self.assertEqual(S('1e-3'), Const(Fraction(1, 1000)))

    def test_functions(self):
        self.assertEqual(S('exp(sin(n))'), Exp(Sin(IndexN())))

    def test_unicode_omega(self):
        self.assertEqual(parse_value('ω^2'), P('w^2'))


# ==================================================
# ω 文脈の値
# ==================================================

class ValueTests(SimpleTestCase):

    def test_prototype_or_in_number(self):
        self.assertEqual(parse_value('w'), OMEGA)
        self.assertEqual(parse_value('1'), UNIT)
        self.assertIsInstance(parse_value('w - 1'), InNumber)

    def test_rational_values_are_exact(self):
        value = parse_value('1/(w - 1)', depth=2)
        self.assertFalse(value.den.is_one)

    def test_series_values_are_truncated(self):
        value = parse_value('exp(1/w)', depth=3)
        self.assertEqual(value.num, as_in_number(parse_value('1 + 1/w + 1/(2*w^2)')).num)

    def test_towers(self):
        self.assertEqual(parse_value('lnw(w)^2'), pow(log_tower(), 2))
        with self.assertRaises(ContextError):
            parse_value('expw(w) + 1')


# ==================================================
# 表示と読み戻し
# ==================================================

class RenderingTests(SimpleTestCase):

    def test_prototype_spelling(self):
        self.assertEqual(render_prototype(P('w^2*ln(w)')), 'w^2*ln(w)')
        self.assertEqual(render_prototype(P('1/w')), '1/w')
        self.assertEqual(render_prototype(UNIT), '1')
        self.assertEqual(render_prototype(P('exp(w)/ln(w)'), unicode=True), 'exp(ω)/ln(ω)')

    def test_limit_spelling(self):
        self.assertEqual(render_limit(parse_value('1 + 2/w + 2/w^2').num), '1 + 2/w + 2/w^2')
        self.assertEqual(render_limit(parse_value('-w + 1/(2*w)').num), '-w + (1/2)/w')

    def test_term_spelling(self):
        lead = parse_value('-3*w').num.terms[0]
        self.assertEqual(render_term(lead), '-3*w')

    @given(prototypes)
    def test_prototype_round_trip(self, p):
        self.assertEqual(parse_prototype(render_prototype(p)), p)

    @given(chain_prototypes)
    def test_chain_round_trip(self, p):
        self.assertEqual(parse_prototype(render_prototype(p, unicode=True)), p)

    @given(limits)
    def test_limit_round_trip(self, limit):
        value = as_in_number(parse_value(render_limit(limit)))
        self.assertEqual(value.num, limit)

    def test_expression_round_trip(self):
        for source in (
            '(n+1)/(n-1)',
            'exp(n)*sin(1/n)^2',
            'n^(1/2) - ln(n)',
            'n^-2 + cos(3*n)',
            '-(n + 2)',
        ):
            with self.subTest(source=source):
                expr = S(source)
                self.assertEqual(S(render_expr(expr)), expr)

    def test_prototype_type(self):
        self.assertIsInstance(P('exp(exp(w))'), Prototype)
