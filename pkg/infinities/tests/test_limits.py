from fractions import Fraction

from django.test import SimpleTestCase
from hypothesis import assume, given

from infinities.exceptions import DivisionByZero
from infinities.limits import (
    ONE_LIMIT,
    ZERO_LIMIT,
    InNumber,
    Limit,
    Term,
    archimedean_class,
    as_in_number,
    in_abs,
    in_add,
    in_compare,
    in_div,
    in_inv,
    in_mul,
    in_neg,
    in_pow,
    in_sign,
    in_sub,
    leading_term,
    lim_add,
    lim_compare,
    lim_mul,
    lim_neg,
    magnitude,
    same_class,
    split_parts,
    term_at,
    truncate,
)
from infinities.parser import parse_prototype, parse_value
from infinities.prototypes import OMEGA, UNIT, Ordering, div, is_infinite

from .strategies import in_numbers, limits, nonzero_in_numbers


def V(source):
    """ω の式を InNumber にする"""
    return as_in_number(parse_value(source))


def L(source):
    return V(source).num


# ==================================================
# 極限（Σ c·p）
# ==================================================

class LimitArithmeticTests(SimpleTestCase):

    def test_add_cancels(self):
        self.assertEqual(lim_add(L('2*w + 3'), L('-2*w + 1/w')), L('3 + 1/w'))

    def test_add_zero(self):
        a = L('w^2 + ln(w)')
        self.assertEqual(lim_add(a, ZERO_LIMIT), a)

    def test_add_same_class(self):
        self.assertEqual(lim_add(L('w^2 + w'), L('w^2 - w')), L('2*w^2'))

    def test_mul_cross_product(self):
        self.assertEqual(lim_mul(L('w + 1'), L('w - 1')), L('w^2 - 1'))

    def test_mul_single_terms(self):
        product = lim_mul(Limit((Term(2, OMEGA),)), Limit((Term(3, parse_prototype('ln(w)')),)))
        self.assertEqual(product, Limit((Term(6, parse_prototype('w*ln(w)')),)))

    def test_mul_zero(self):
        self.assertTrue(lim_mul(L('w + 1'), ZERO_LIMIT).is_zero)

    def test_compare_examples(self):
        self.assertIs(lim_compare(L('w + 1'), L('w')), Ordering.GREATER)
        self.assertIs(lim_compare(L('exp(w) - w'), L('w^100')), Ordering.GREATER)
        self.assertIs(lim_compare(ZERO_LIMIT, L('-1/w')), Ordering.GREATER)

    def test_terms_are_strictly_decreasing(self):
        limit = L('1/w + w^2 + 3 + ln(w)')
        protos = [term.proto for term in limit.terms]
        for left, right in zip(protos, protos[1:]):
            self.assertGreater(left, right)

    @given(limits, limits, limits)
    def test_ring_laws(self, a, b, c):
        self.assertEqual(lim_add(a, b), lim_add(b, a))
        self.assertEqual(lim_add(lim_add(a, b), c), lim_add(a, lim_add(b, c)))
        self.assertTrue(lim_add(a, lim_neg(a)).is_zero)
        self.assertEqual(lim_mul(a, b), lim_mul(b, a))
        self.assertEqual(lim_mul(lim_mul(a, b), c), lim_mul(a, lim_mul(b, c)))
        self.assertEqual(lim_mul(a, lim_add(b, c)), lim_add(lim_mul(a, b), lim_mul(a, c)))
        self.assertEqual(lim_mul(a, ONE_LIMIT), a)

    @given(limits, limits)
    def test_single_term_closure(self, a, b):
        assume(len(a.terms) == 1 and len(b.terms) == 1)
        self.assertEqual(len(lim_mul(a, b).terms), 1)


# ==================================================
# InNumber（体）
# ==================================================

class InNumberTests(SimpleTestCase):

    def test_inverse_of_sum(self):
        inverse = in_inv(V('w + 1'))
        self.assertEqual(inverse.num, ONE_LIMIT)
        self.assertEqual(inverse.den, L('w + 1'))

    def test_single_term_denominator_is_folded(self):
        value = in_div(V('w^2 + 1'), V('w'))
        self.assertTrue(value.den.is_one)
        self.assertEqual(value.num, L('w + 1/w'))

    def test_inverse_of_zero(self):
        with self.assertRaises(DivisionByZero):
            in_inv(InNumber(ZERO_LIMIT))

    def test_zero_denominator(self):
        with self.assertRaises(DivisionByZero):
            InNumber(ONE_LIMIT, ZERO_LIMIT)

    def test_compare_examples(self):
        self.assertIs(in_compare(V('1/w'), V('1/w^2')), Ordering.GREATER)
        self.assertIs(in_compare(V('w/(w + 1)'), V('(w - 1)/w')), Ordering.GREATER)

    def test_equality_is_semantic(self):
        self.assertEqual(V('(w^2 - 1)/(w + 1)'), V('w - 1'))
        self.assertEqual(V('2*(w + 1)/(2*w + 2)'), InNumber(ONE_LIMIT))

    def test_integer_powers(self):
        self.assertEqual(in_pow(V('w + 1'), 2), V('w^2 + 2*w + 1'))
        self.assertEqual(in_pow(V('w + 1'), -1), in_inv(V('w + 1')))
        self.assertEqual(in_pow(V('w + 1'), 0), InNumber(ONE_LIMIT))

    def test_sign_and_abs(self):
        self.assertEqual(in_sign(V('-w + exp(w)')), 1)
        self.assertEqual(in_sign(V('1/(1 - w)')), -1)
        self.assertEqual(in_abs(V('1/(1 - w)')), V('1/(w - 1)'))

    @given(in_numbers, in_numbers, in_numbers)
    def test_field_laws(self, a, b, c):
        zero, one = InNumber(ZERO_LIMIT), InNumber(ONE_LIMIT)
        self.assertEqual(in_add(a, b), in_add(b, a))
        self.assertEqual(in_add(in_add(a, b), c), in_add(a, in_add(b, c)))
        self.assertEqual(in_add(a, zero), a)
        self.assertEqual(in_add(a, in_neg(a)), zero)
        self.assertEqual(in_mul(a, b), in_mul(b, a))
        self.assertEqual(in_mul(in_mul(a, b), c), in_mul(a, in_mul(b, c)))
        self.assertEqual(in_mul(a, one), a)
        self.assertEqual(in_mul(a, in_add(b, c)), in_add(in_mul(a, b), in_mul(a, c)))
        self.assertEqual(in_sub(a, b), in_add(a, in_neg(b)))

    @given(nonzero_in_numbers)
    def test_multiplicative_inverse(self, a):
        self.assertEqual(in_mul(a, in_inv(a)), InNumber(ONE_LIMIT))

    @given(in_numbers, in_numbers, in_numbers)
    def test_order_is_compatible(self, a, b, c):
        order = in_compare(a, b)
        self.assertIs(in_compare(b, a), order.reversed())
        self.assertIs(in_compare(in_add(a, c), in_add(b, c)), order)
        if in_sign(c) > 0:
            self.assertIs(in_compare(in_mul(a, c), in_mul(b, c)), order)
        elif in_sign(c) < 0:
            self.assertIs(in_compare(in_mul(a, c), in_mul(b, c)), order.reversed())

    @given(in_numbers, in_numbers, in_numbers)
    def test_order_is_transitive(self, a, b, c):
        if in_compare(a, b) is not Ordering.GREATER and in_compare(b, c) is not Ordering.GREATER:
            self.assertIsNot(in_compare(a, c), Ordering.GREATER)

    @given(in_numbers, in_numbers, limits)
    def test_scaling_num_and_den_keeps_order(self, a, b, k):
        assume(not k.is_zero and k.terms[0].coeff > 0)
        scaled = InNumber(lim_mul(a.num, k), lim_mul(a.den, k))
        self.assertEqual(scaled, a)
        self.assertIs(in_compare(scaled, b), in_compare(a, b))

    @given(limits, limits)
    def test_real_multiples_of_one_class(self, a, b):
        # c·p の係数部分は実数として振る舞う
        assume(len(a.terms) == 1 and len(b.terms) == 1)
        p = OMEGA
        x = Limit((Term(a.terms[0].coeff, p),))
        y = Limit((Term(b.terms[0].coeff, p),))
        self.assertIs(lim_compare(x, y), Ordering.of(a.terms[0].coeff - b.terms[0].coeff))


# ==================================================
# 展開と分類
# ==================================================

class ExpansionTests(SimpleTestCase):

    def test_truncate_geometric_series(self):
        self.assertEqual(truncate(V('1/(w - 1)'), 3), L('1/w + 1/w^2 + 1/w^3'))

    def test_truncate_exact_division(self):
        self.assertEqual(truncate(V('(w^2 + 1)/w'), 2), L('w + 1/w'))

    def test_truncate_terminates(self):
        self.assertEqual(truncate(V('5'), 4), Limit.constant(5))

    @given(in_numbers)
    def test_truncate_prefix_stability(self, x):
        three = truncate(x, 3)
        four = truncate(x, 4)
        self.assertEqual(Limit(four.terms[:len(three.terms)]), three)

    @given(in_numbers)
    def test_truncate_remainder_is_smaller(self, x):
        r = truncate(x, 3)
        assume(not r.is_zero)
        rest = in_sub(x, InNumber(r))
        if not rest.is_zero:
            self.assertLess(archimedean_class(rest), r.terms[-1].proto)

    def test_leading_term(self):
        self.assertEqual(leading_term(V('(3*w^2 + w)/(w^2 + 1)')), Term(3, UNIT))
        self.assertIsNone(leading_term(InNumber(ZERO_LIMIT)))

    def test_term_at(self):
        self.assertEqual(term_at(V('1/(w - 1)'), 2), Term(1, parse_prototype('1/w^2')))
        self.assertIsNone(term_at(V('w + 1'), 3))

    def test_archimedean_class(self):
        self.assertEqual(archimedean_class(V('(w^3 + 1)/(w + 2)')), parse_prototype('w^2'))
        self.assertIsNone(archimedean_class(InNumber(ZERO_LIMIT)))

    def test_same_class(self):
        self.assertTrue(same_class(V('3*w + 1'), V('w/2')))
        self.assertFalse(same_class(V('w'), V('w*ln(w)')))
        self.assertFalse(same_class(InNumber(ZERO_LIMIT), InNumber(ZERO_LIMIT)))

    def test_magnitude(self):
        self.assertEqual(magnitude(InNumber(ZERO_LIMIT)), 'zero')
        self.assertEqual(magnitude(V('1/w')), 'infinitesimal')
        self.assertEqual(magnitude(V('(w + 1)/w')), 'finite')
        self.assertEqual(magnitude(V('w/ln(w)')), 'infinite')

    def test_split_parts(self):
        parts = split_parts(V('w^2 - w + 3 + 1/w'))
        self.assertEqual(parts.infinite, L('w^2 - w'))
        self.assertIsNone(parts.feedback)
        self.assertEqual(parts.finite, Fraction(3))
        self.assertEqual(parts.infinitesimal, V('1/w'))

    def test_split_parts_of_ratio(self):
        parts = split_parts(V('(w^2 + 1)/(w - 1)'))
        self.assertEqual(parts.infinite, L('w'))
        self.assertEqual(parts.finite, Fraction(1))
        self.assertTrue(in_sign(parts.infinitesimal) > 0)

    def test_split_parts_keeps_feedback(self):
        parts = split_parts(V('exp(w)/(w + 1)'))
        self.assertTrue(parts.infinite.is_zero)
        self.assertEqual(parts.feedback, V('exp(w)/(w + 1)'))
        self.assertTrue(is_infinite(div(archimedean_class(parts.feedback), OMEGA)))
