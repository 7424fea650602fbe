"""
数列式の極限計算

n ↦ ω の置換で数列式を InNumber に写す。有理演算は厳密に行い、
ln / exp / sin / cos は先頭項まわりのマクローリン級数を有限項で打ち切る。

評価中の各値には 2 種類の不確かさ（アルキメデス類の上界）を持たせる。
  - error: 級数の打ち切りによる誤差。項数を増やせば下がる
  - noise: sin / cos が無限大の引数で生む有界な振動。項数を増やしても消えない
要求された項がすべて両者より真に大きい類に属するときだけ結果を返す。
"""

import logging
from dataclasses import dataclass
from math import factorial

from .conf import engine_setting
from .exceptions import OmegalimError, Oscillatory, Undefined
from .limits import (
    InNumber,
    Limit,
    Term,
    archimedean_class,
    as_limit,
    in_inv,
    in_pow,
    leading_term,
    split_parts,
)
from .prototypes import OMEGA, UNIT, Ordering, compare, div, from_log, is_infinitesimal, log_of, mul
from .scalars import ONE, cos_scalar, exp_scalar, log_scalar, sin_scalar
from .sequences import Add, Const, Cos, Div, Exp, IndexN, Ln, Mul, PowConst, Sin, Sub

logger = logging.getLogger(__name__)

# 打ち切り誤差で項が決まらないとき、作業項数を倍にして再評価する回数
MAX_REFINEMENTS = 4


class _NeedMoreTerms(Exception):
    """作業項数が足りず値が決まらない（内部用）"""


# ==================================================
# 類の上界（None は 0）
# ==================================================

def _bmax(*bounds):
    result = None
    for bound in bounds:
        if bound is None:
            continue
        if result is None or compare(bound, result) is Ordering.GREATER:
            result = bound
    return result


def _bmul(a, b):
    if a is None or b is None:
        return None
    return mul(a, b)


def _above(proto, bound):
    return bound is None or compare(proto, bound) is Ordering.GREATER


@dataclass(frozen=True)
class Approx:
    """評価途中の値と、その不確かさの類"""

    value: InNumber
    error: object = None
    noise: object = None

    @property
    def cls(self):
        return archimedean_class(self.value)

    @property
    def bound(self):
        """|値| の上界となる類"""
        return _bmax(self.cls, self.error, self.noise)

    @property
    def is_exact(self):
        return self.error is None and self.noise is None


def _exact(value):
    return Approx(value)


# ==================================================
# 打ち切り級数
# ==================================================

@dataclass(frozen=True)
class _Series:
    limit: Limit
    error: object = None

    @property
    def bound(self):
        return _bmax(archimedean_class(self.limit) if not self.limit.is_zero else None, self.error)


def _expand(x, count):
    """
    x の先頭 count 項と、その次の項の類（無ければ None）を返す
    """
    if x.den.is_one:
        terms = x.num.terms
        following = terms[count].proto if len(terms) > count else None
        return terms[:count], following
    out = []
    remainder = x.num
    lead = x.den.terms[0]
    while not remainder.is_zero and len(out) < count:
        quotient = remainder.terms[0] / lead
        out.append(quotient)
        remainder = remainder - x.den.scale(quotient)
    following = None
    if not remainder.is_zero:
        following = div(remainder.terms[0].proto, lead.proto)
    return tuple(out), following


def _series_of(x, work):
    terms, following = _expand(x, work)
    return _Series(Limit(tuple(terms)), following)


def _series_add(a, b):
    return _Series(a.limit + b.limit, _bmax(a.error, b.error))


def _series_scale(a, c):
    return _Series(a.limit.scale(c), a.error)


def _series_mul(a, b, work):
    product = a.limit * b.limit
    error = _bmax(_bmul(a.error, b.bound), _bmul(a.bound, b.error))
    if len(product.terms) > work:
        error = _bmax(error, product.terms[work].proto)
        product = product.truncated(work)
    return _Series(product, error)


def _power_series(u, coefficients, work):
    """
    Σ coefficients[k]·uᵏ（k = 0, 1, ...）を work 項で打ち切る

    u は無限小。級数の残りは u の類の (次数 + 1) 乗で押さえる。
    """
    total = _Series(Limit.constant(coefficients[0]))
    power = _Series(Limit.constant(ONE))
    for coeff in coefficients[1:]:
        power = _series_mul(power, u, work)
        if power.limit.is_zero and power.error is None:
            return total
        if coeff:
            total = _series_add(total, _series_scale(power, coeff))
    tail = _series_mul(power, u, work).bound
    return _Series(total.limit, _bmax(total.error, tail))


def _ln1p_coefficients(count):
    return [0] + [ONE * (-1) ** (k + 1) / k for k in range(1, count + 1)]


def _exp_coefficients(count):
    return [ONE / factorial(k) for k in range(count + 1)]


def _sin_coefficients(count):
    return [0 if k % 2 == 0 else ONE * (-1) ** (k // 2) / factorial(k) for k in range(count + 1)]


def _cos_coefficients(count):
    return [ONE * (-1) ** (k // 2) / factorial(k) if k % 2 == 0 else 0 for k in range(count + 1)]


# ==================================================
# 四則演算
# ==================================================

def _add(a, b):
    return Approx(a.value + b.value, _bmax(a.error, b.error), _bmax(a.noise, b.noise))


def _neg(a):
    return Approx(-a.value, a.error, a.noise)


def _mul(a, b):
    return Approx(
        a.value * b.value,
        _bmax(_bmul(a.error, b.bound), _bmul(a.bound, b.error)),
        _bmax(_bmul(a.noise, b.bound), _bmul(a.bound, b.noise)),
    )


def _require_dominant(a, operation):
    """値の先頭項が不確かさより真に大きいことを確認する"""
    cls = a.cls
    if a.noise is not None and (cls is None or not _above(cls, a.noise)):
        raise Oscillatory(f"{operation} の引数が振動しています")
    if a.error is not None and (cls is None or not _above(cls, a.error)):
        raise _NeedMoreTerms(operation)
    return cls


def _inv(a):
    cls = _require_dominant(a, '除算')
    if cls is None:
        raise Undefined("0 の極限で割ることはできません")
    inverse_square = div(UNIT, mul(cls, cls))
    return Approx(in_inv(a.value), _bmul(a.error, inverse_square), _bmul(a.noise, inverse_square))


# ==================================================
# 超越関数
# ==================================================

def _ln(a, work):
    cls = _require_dominant(a, 'ln')
    if cls is None:
        raise Undefined("0 の対数は定義されません")
    lead = leading_term(a.value)
    if lead.coeff <= 0:
        raise Undefined(f"先頭係数が正でない極限の対数は定義されません: {lead}")
    scaled = a.value * InNumber(Limit((lead.inverse(),)))
    u = _series_of(scaled - InNumber(Limit.constant(ONE)), work)
    series = _power_series(u, _ln1p_coefficients(work), work)
    value = log_of(lead.proto) + InNumber(Limit.constant(log_scalar(lead.coeff))) + InNumber(series.limit)
    relative = div(UNIT, cls)
    return Approx(value, _bmax(series.error, _bmul(a.error, relative)), _bmul(a.noise, relative))


def _exp(a, work):
    if a.noise is not None and not is_infinitesimal(a.noise):
        raise Oscillatory("exp の引数が有界でない振動を含みます")
    if a.error is not None and not is_infinitesimal(a.error):
        raise _NeedMoreTerms('exp')
    parts = split_parts(a.value)
    proto = UNIT
    if not parts.infinite.is_zero or parts.feedback is not None:
        proto = from_log(parts.infinite, parts.feedback)
    scale = Term(exp_scalar(parts.finite), proto)
    u = _series_of(parts.infinitesimal, work)
    series = _power_series(u, _exp_coefficients(work), work)
    value = InNumber(series.limit.scale(scale))
    return Approx(value, _bmul(proto, _bmax(series.error, a.error)), _bmul(proto, a.noise))


def _trig(a, work, is_sine):
    name = 'sin' if is_sine else 'cos'
    if a.noise is not None and not is_infinitesimal(a.noise):
        return Approx(InNumber(Limit()), None, UNIT)
    parts = split_parts(a.value)
    if not parts.infinite.is_zero or parts.feedback is not None:
        logger.debug(f"{name} の引数が無限大のため振動成分として扱います")
        return Approx(InNumber(Limit()), None, UNIT)
    if a.error is not None and not is_infinitesimal(a.error):
        raise _NeedMoreTerms(name)
    k = parts.finite
    u = _series_of(parts.infinitesimal, work)
    sin_u = _power_series(u, _sin_coefficients(work), work)
    cos_u = _power_series(u, _cos_coefficients(work), work)
    if is_sine:
        series = _series_add(_series_scale(cos_u, sin_scalar(k)), _series_scale(sin_u, cos_scalar(k)))
    else:
        series = _series_add(_series_scale(cos_u, cos_scalar(k)), _series_scale(sin_u, -sin_scalar(k)))
    return Approx(InNumber(series.limit), _bmax(series.error, a.error), a.noise)


def _pow_const(a, exponent, work):
    if exponent.denominator == 1:
        k = int(exponent)
        if a.is_exact:
            if k < 0 and a.value.is_zero:
                raise Undefined("0 の負の冪は定義されません")
            return _exact(in_pow(a.value, k))
        base = a if k >= 0 else _inv(a)
        result = _exact(InNumber(Limit.constant(ONE)))
        for _ in range(abs(k)):
            result = _mul(result, base)
        return result
    scaled = _ln(a, work)
    factor = InNumber(Limit.constant(exponent))
    return _exp(Approx(scaled.value * factor, scaled.error, scaled.noise), work)


# ==================================================
# 評価
# ==================================================

def _evaluate(expr, work):
    if isinstance(expr, Const):
        return _exact(InNumber(Limit.constant(expr.value)))
    if isinstance(expr, IndexN):
        return _exact(InNumber(as_limit(OMEGA)))
    if isinstance(expr, Add):
        return _add(_evaluate(expr.left, work), _evaluate(expr.right, work))
    if isinstance(expr, Sub):
        return _add(_evaluate(expr.left, work), _neg(_evaluate(expr.right, work)))
    if isinstance(expr, Mul):
        return _mul(_evaluate(expr.left, work), _evaluate(expr.right, work))
    if isinstance(expr, Div):
        left = _evaluate(expr.left, work)
        right = _evaluate(expr.right, work)
        if right.is_exact and right.value.is_zero:
            raise Undefined("0 の極限で割ることはできません")
        if left.is_exact and right.is_exact:
            return _exact(left.value / right.value)
        return _mul(left, _inv(right))
    if isinstance(expr, PowConst):
        return _pow_const(_evaluate(expr.base, work), expr.exponent, work)
    if isinstance(expr, Exp):
        return _exp(_evaluate(expr.arg, work), work)
    if isinstance(expr, Ln):
        return _ln(_evaluate(expr.arg, work), work)
    if isinstance(expr, Sin):
        return _trig(_evaluate(expr.arg, work), work, is_sine=True)
    if isinstance(expr, Cos):
        return _trig(_evaluate(expr.arg, work), work, is_sine=False)
    raise TypeError(f"未知の式です: {type(expr).__name__}")


def evaluate(expr, work=None):
    """
    式を 1 回評価して Approx を返す

    打ち切り誤差で値が決まらない場合は作業項数を増やして再評価する。
    """
    work = work or engine_setting('GUARD_TERMS') + 1
    for _ in range(MAX_REFINEMENTS + 1):
        try:
            return _evaluate(expr, work)
        except _NeedMoreTerms as exc:
            logger.debug(f"{exc} の評価で項数が不足しました（作業項数 {work}）")
            work *= 2
    raise Undefined(f"作業項数 {work} でも値が定まりません: {expr}")


def limit_of(expr, depth):
    """
    数列式の極限を depth 項まで求める

    Args:
        expr: 数列式（SeqExpr）
        depth: 求める項数（1 以上）

    Returns:
        Limit（式の展開が有限なら depth 項未満のこともある）
    """
    if depth < 1:
        raise ValueError(f"depth は 1 以上です: {depth}")
    work = depth + engine_setting('GUARD_TERMS')
    verified = ()
    for _ in range(MAX_REFINEMENTS + 1):
        approx = evaluate(expr, work)
        terms, _ = _expand(approx.value, depth)
        uncertainty = _bmax(approx.error, approx.noise)
        verified = tuple(t for t in terms if _above(t.proto, uncertainty))
        missing = len(verified) < len(terms) or (len(terms) < depth and uncertainty is not None)
        if not missing:
            return Limit(verified)
        noise_blocks = approx.noise is not None and (
            approx.error is None or compare(approx.noise, approx.error) is not Ordering.LESS)
        if noise_blocks:
            raise Oscillatory(
                f"第 {len(verified) + 1} 項が振動成分に埋もれています: {expr}",
                known_terms=verified)
        logger.debug(f"打ち切り誤差で第 {len(verified) + 1} 項が定まりません（作業項数 {work}）")
        work *= 2
    logger.warning(f"作業項数 {work} でも {depth} 項に届きません: {expr}")
    return Limit(verified)


def exact_value(expr, depth):
    """
    ω 文脈の式の値（InNumber）

    有理演算だけで厳密に決まる値はそのまま返し、級数が必要なら depth 項の極限を返す。
    """
    approx = evaluate(expr)
    if approx.is_exact:
        return approx.value
    return InNumber(limit_of(expr, depth))


def leading_term_limit(expr):
    """先頭項の極限 ¹lim。恒等的に 0 なら None"""
    limit = limit_of(expr, 1)
    return limit.leading


def is_leading_limitable(expr):
    try:
        leading_term_limit(expr)
    except OmegalimError:
        return False
    return True


@dataclass(frozen=True)
class Smoothness:
    """is_smooth の結果。bool として使える"""

    smooth: bool
    reason: str = ''

    def __bool__(self):
        return self.smooth


def is_smooth(expr, depth):
    try:
        limit_of(expr, depth)
    except OmegalimError as exc:
        return Smoothness(False, exc.message)
    return Smoothness(True)


def cauchy_check(expr):
    """先頭項が実数の類（単位プロトタイプ）なら係数 c を返す"""
    lead = leading_term_limit(expr)
    if lead is None or compare(lead.proto, UNIT) is not Ordering.EQUAL:
        return None
    return lead.coeff
