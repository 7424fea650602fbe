"""
スカラー（係数・指数）の扱い

係数と指数はすべて fractions.Fraction で厳密に保持する。
無理数の定数（ln c, e^k, sin a, cos a）だけは有理数に丸める。
"""

import contextlib
import contextvars
import decimal
import math
from decimal import Decimal
from fractions import Fraction

from .conf import engine_setting
from .exceptions import Undefined

ZERO = Fraction(0)
ONE = Fraction(1)

# exp_scalar / log_scalar の有効桁数
DECIMAL_PRECISION = 40

_rounding_denominator = contextvars.ContextVar('rounding_denominator', default=None)


def to_scalar(value):
    """
    int / str / Decimal / float / Fraction を Fraction に変換する

    文字列の小数表記（'0.001' など）は厳密に変換される。
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("bool はスカラーとして使えません")
    if isinstance(value, (int, str, Decimal)):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise Undefined(f"有限でない値はスカラーにできません: {value}")
        return Fraction(value)
    raise TypeError(f"スカラーに変換できない型です: {type(value).__name__}")


def rounding_denominator():
    override = _rounding_denominator.get()
    if override is not None:
        return override
    return engine_setting('ROUNDING_DENOMINATOR')


@contextlib.contextmanager
def precision(max_denominator):
    """無理数定数の丸め精度を一時的に変更する（CLI の --precision 用）"""
    token = _rounding_denominator.set(int(max_denominator))
    try:
        yield
    finally:
        _rounding_denominator.reset(token)


def rounded(value):
    """浮動小数点の値を丸め精度内の最も近い有理数にする"""
    if not math.isfinite(value):
        raise Undefined(f"定数が有限の範囲を超えました: {value}")
    return Fraction(value).limit_denominator(rounding_denominator())


def _rounded_decimal(value):
    return Fraction(value).limit_denominator(rounding_denominator())


def _decimal_context():
    # 浮動小数点の範囲に縛られない 10 進演算（e^710 や ln(1e400) も有限）
    return decimal.localcontext(decimal.Context(prec=DECIMAL_PRECISION))


def exp_scalar(k):
    """e^k を丸めた有理数。float の範囲を超える k も扱う"""
    if k == 0:
        return ONE
    k = to_scalar(k)
    try:
        with _decimal_context():
            value = (Decimal(k.numerator) / Decimal(k.denominator)).exp()
    except decimal.Overflow as exc:
        raise Undefined(f"exp({k}) が大きすぎて表せません") from exc
    return _rounded_decimal(value)


def log_scalar(c):
    """ln c を丸めた有理数。分子と分母の対数の差で計算する"""
    if c <= 0:
        raise Undefined(f"正でない値の対数は定義されません: {c}")
    if c == 1:
        return ZERO
    c = to_scalar(c)
    with _decimal_context():
        value = Decimal(c.numerator).ln() - Decimal(c.denominator).ln()
    return _rounded_decimal(value)


def _trig_scalar(function, a):
    try:
        return rounded(function(a))
    except OverflowError as exc:
        raise Undefined(f"{function.__name__}({a}) の引数が大きすぎます") from exc


def sin_scalar(a):
    return ZERO if a == 0 else _trig_scalar(math.sin, a)


def cos_scalar(a):
    return ONE if a == 0 else _trig_scalar(math.cos, a)


def sign(value):
    return (value > 0) - (value < 0)


def format_scalar(value):
    """'2', '-3', '1/2' の形式で表示する"""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"
