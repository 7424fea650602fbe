"""
数値オラクル

プロトタイプ・極限・数列式を大きな有限の n で数値評価する。
値は exp の塔 TowerValue(height, mantissa) で表すので、exp(exp(n)) でも
オーバーフローしない。記号的な比較の検算と、標本からの先頭項推定に使う。
"""

import csv
import io
import json
import logging
import math
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from .conf import engine_setting
from .exceptions import DomainError, NoStableCandidate, TowerAtomNotEvaluable, UsageError
from .limits import InNumber, Limit, as_in_number
from .prototypes import ExpBase, LogAtom, Ordering, TowerAtom, div
from .sequences import Add, Const, Cos, Div, Exp, IndexN, Ln, Mul, PowConst, Sin, Sub

logger = logging.getLogger(__name__)

# 仮数の帯: 高さ 0 は CEILING 以下、高さ 1 以上は (MAX_LOG, CEILING]
MAX_LOG = 709.0
CEILING = math.exp(MAX_LOG)


# ==================================================
# TowerValue
# ==================================================

@dataclass(frozen=True, eq=False)
class TowerValue:
    """
    sign · exp^height(mantissa)

    正規形: mantissa ≤ CEILING、height > 0 なら mantissa > MAX_LOG。
    この帯の中では (height, mantissa) の辞書式順序が大きさの順序と一致する。
    0 は sign = 0。
    """

    height: int
    mantissa: float
    sign: int = 1

    def __post_init__(self):
        height, mantissa, sign = int(self.height), float(self.mantissa), self.sign
        if height < 0:
            raise ValueError(f"height は 0 以上です: {height}")
        if math.isnan(mantissa):
            raise DomainError("数値評価の結果が NaN になりました")
        if height == 0 and mantissa < 0:
            mantissa, sign = -mantissa, -sign
        while height > 0 and mantissa <= MAX_LOG:
            mantissa = math.exp(mantissa)
            height -= 1
        while mantissa > CEILING:
            mantissa = math.log(mantissa)
            height += 1
        if mantissa == 0 or sign == 0:
            height, mantissa, sign = 0, 0.0, 0
        object.__setattr__(self, 'height', height)
        object.__setattr__(self, 'mantissa', mantissa)
        object.__setattr__(self, 'sign', sign)

    @classmethod
    def of(cls, value):
        """int / float / Fraction / TowerValue から作る"""
        if isinstance(value, TowerValue):
            return value
        if isinstance(value, (int, Fraction)) and abs(value) > sys.float_info.max:
            return cls(1, _rational_log(abs(value)), 1 if value > 0 else -1)
        number = float(value)
        if math.isinf(number):
            raise DomainError(f"浮動小数点の範囲外の値です: {value}")
        return cls(0, number)

    @property
    def is_zero(self):
        return self.sign == 0

    def __abs__(self):
        return TowerValue(self.height, self.mantissa, abs(self.sign))

    def __neg__(self):
        return TowerValue(self.height, self.mantissa, -self.sign)

    def __float__(self):
        if self.height == 0:
            return self.sign * self.mantissa
        return self.sign * math.inf

    # ------------------------------------------------------------------
    # 比較
    # ------------------------------------------------------------------

    def _magnitude_key(self):
        return (self.height, self.mantissa)

    def compare(self, other, tolerance=0.0):
        other = TowerValue.of(other)
        if self.sign != other.sign:
            return Ordering.of(self.sign - other.sign)
        if self.sign == 0:
            return Ordering.EQUAL
        if self.height == other.height:
            scale = max(self.mantissa, other.mantissa)
            if abs(self.mantissa - other.mantissa) <= tolerance * scale:
                return Ordering.EQUAL
        order = Ordering.EQUAL
        if self._magnitude_key() > other._magnitude_key():
            order = Ordering.GREATER
        elif self._magnitude_key() < other._magnitude_key():
            order = Ordering.LESS
        return order if self.sign > 0 else order.reversed()

    def __eq__(self, other):
        if not isinstance(other, (TowerValue, int, float)):
            return NotImplemented
        return self.compare(other, engine_setting('EQUAL_TOLERANCE')) is Ordering.EQUAL

    __hash__ = None

    def __lt__(self, other):
        return self.compare(other) is Ordering.LESS

    def __le__(self, other):
        return self.compare(other) is not Ordering.GREATER

    def __gt__(self, other):
        return self.compare(other) is Ordering.GREATER

    def __ge__(self, other):
        return self.compare(other) is not Ordering.LESS

    # ------------------------------------------------------------------
    # 演算
    # ------------------------------------------------------------------

    def __add__(self, other):
        return tv_add(self, TowerValue.of(other))

    __radd__ = __add__

    def __sub__(self, other):
        return tv_add(self, -TowerValue.of(other))

    def __rsub__(self, other):
        return tv_add(TowerValue.of(other), -self)

    def __mul__(self, other):
        return tv_mul(self, TowerValue.of(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return tv_div(self, TowerValue.of(other))

    def __str__(self):
        if self.height == 0:
            return repr(self.sign * self.mantissa)
        text = repr(self.mantissa)
        for _ in range(self.height):
            text = f"exp({text})"
        return text if self.sign > 0 else f"-{text}"

    def to_dict(self):
        return {'height': self.height, 'mantissa': self.mantissa, 'sign': self.sign}


ZERO_VALUE = TowerValue(0, 0.0, 0)
ONE_VALUE = TowerValue(0, 1.0)


def _rational_log(value):
    """正の int / Fraction の自然対数（float に直すと溢れる値でもよい）"""
    value = Fraction(value)
    return math.log(value.numerator) - math.log(value.denominator)


def tv_ln(value):
    if value.sign <= 0:
        raise DomainError(f"正でない値の対数です: {value}")
    if value.height == 0:
        return TowerValue.of(math.log(value.mantissa))
    return TowerValue(value.height - 1, value.mantissa)


def tv_exp(value):
    if value.sign == 0:
        return ONE_VALUE
    if value.sign < 0:
        if value.height == 0:
            return TowerValue.of(math.exp(-value.mantissa))
        return ZERO_VALUE
    if value.height == 0 and value.mantissa <= MAX_LOG:
        return TowerValue.of(math.exp(value.mantissa))
    return TowerValue(value.height + 1, value.mantissa)


def tv_add(a, b):
    """和。高さが違えば大きい方が支配する"""
    if a.is_zero:
        return b
    if b.is_zero:
        return a
    if a._magnitude_key() < b._magnitude_key():
        a, b = b, a
    if a.height == 0:
        total = a.sign * a.mantissa + b.sign * b.mantissa
        if math.isfinite(total):
            return TowerValue.of(total)
        return TowerValue(1, math.log(a.mantissa) + math.log1p(b.mantissa / a.mantissa), a.sign)
    if a.height == 1:
        # e^M (1 ± e^(ln|b| − M))
        log_b = b.mantissa if b.height == 1 else math.log(b.mantissa)
        ratio = math.exp(log_b - a.mantissa)
        if a.sign != b.sign:
            if ratio >= 1.0:
                return ZERO_VALUE
            return TowerValue(1, a.mantissa + math.log1p(-ratio), a.sign)
        return TowerValue(1, a.mantissa + math.log1p(ratio), a.sign)
    if a.height == b.height and a.mantissa == b.mantissa and a.sign != b.sign:
        return ZERO_VALUE
    return a


def tv_mul(a, b):
    if a.is_zero or b.is_zero:
        return ZERO_VALUE
    if a.height == 0 and b.height == 0:
        product = a.mantissa * b.mantissa
        if math.isfinite(product) and product > 0:
            return TowerValue(0, product, a.sign * b.sign)
    magnitude = tv_exp(tv_add(tv_ln(abs(a)), tv_ln(abs(b))))
    return TowerValue(magnitude.height, magnitude.mantissa, a.sign * b.sign * magnitude.sign)


def tv_div(a, b):
    """商。ln|a| − ln|b| を経由するので、高い塔どうしの商も潰れない"""
    if b.is_zero:
        raise DomainError("0 で割ることはできません")
    if a.is_zero:
        return ZERO_VALUE
    if a.height == 0 and b.height == 0:
        quotient = a.mantissa / b.mantissa
        if math.isfinite(quotient) and quotient > 0:
            return TowerValue(0, quotient, a.sign * b.sign)
    return _from_log(a.sign * b.sign, tv_add(tv_ln(abs(a)), -tv_ln(abs(b))))


def _from_log(sign, log):
    """sign · e^log"""
    if sign == 0:
        return ZERO_VALUE
    magnitude = tv_exp(log)
    return TowerValue(magnitude.height, magnitude.mantissa, sign * magnitude.sign)


def _require_height_zero(value, name):
    if value.height != 0:
        raise DomainError(f"{name} は高さ 0 の引数でのみ評価できます: {value}")
    return value.sign * value.mantissa


# ==================================================
# プロトタイプ・極限・数列式の評価
# ==================================================

def _as_index(n):
    value = TowerValue.of(n)
    if value < 3:
        raise DomainError(f"評価点は 3 以上です: {n}")
    return value


def _log_summands(p, n):
    """ln p(n) = Σ rⱼ·ln baseⱼ(n) の各項"""
    summands = []
    for base, exponent in p.factors:
        if isinstance(base, TowerAtom):
            raise TowerAtomNotEvaluable(f"塔のプロトタイプは数値評価できません: {p}")
        if isinstance(base, LogAtom):
            log_base = n
            for _ in range(base.depth + 1):
                log_base = tv_ln(log_base)
        elif isinstance(base, ExpBase):
            log_base = eval_limit(base.arg, n)
        else:
            raise TypeError(f"未知の基底です: {base!r}")
        summands.append(tv_mul(TowerValue.of(exponent), log_base))
    return summands


def _log_value(p, n):
    total = ZERO_VALUE
    for summand in _log_summands(p, n):
        total = tv_add(total, summand)
    return total


def eval_proto(p, n):
    """
    プロトタイプ p の n での値

    Args:
        p: 塔を含まないプロトタイプ
        n: 3 以上の評価点（int / float / TowerValue）

    Returns:
        TowerValue
    """
    return tv_exp(_log_value(p, _as_index(n)))


def eval_limit(x, n):
    """Limit または InNumber の n での値"""
    n = _as_index(n)
    x = as_in_number(x) if not isinstance(x, Limit) else InNumber(x)
    num = _eval_sum(x.num, n)
    if x.den.is_one:
        return num
    return tv_div(num, _eval_sum(x.den, n))


def _eval_sum(limit, n):
    total = ZERO_VALUE
    for term in limit.terms:
        total = tv_add(total, tv_mul(TowerValue.of(term.coeff), tv_exp(_log_value(term.proto, n))))
    return total


def eval_seq(expr, n):
    """数列式 expr の n での値"""
    n = TowerValue.of(n)
    return _eval_seq(expr, n)


def _eval_seq(expr, n):
    if isinstance(expr, Const):
        return TowerValue.of(expr.value)
    if isinstance(expr, IndexN):
        return n
    if isinstance(expr, Add):
        return tv_add(_eval_seq(expr.left, n), _eval_seq(expr.right, n))
    if isinstance(expr, Sub):
        return tv_add(_eval_seq(expr.left, n), -_eval_seq(expr.right, n))
    if isinstance(expr, (Mul, Div, PowConst)):
        return _from_log(*_signed_log(expr, n))
    if isinstance(expr, Exp):
        return tv_exp(_eval_seq(expr.arg, n))
    if isinstance(expr, Ln):
        return tv_ln(_eval_seq(expr.arg, n))
    if isinstance(expr, Sin):
        return TowerValue.of(math.sin(_require_height_zero(_eval_seq(expr.arg, n), 'sin')))
    if isinstance(expr, Cos):
        return TowerValue.of(math.cos(_require_height_zero(_eval_seq(expr.arg, n), 'cos')))
    raise TypeError(f"未知の式です: {type(expr).__name__}")


def _signed_log(expr, n):
    """
    (符号, ln|値|) を返す。値が 0 なら (0, None)

    積・商・冪・exp は対数のまま合成するので、exp(n)·exp(−n) のように
    途中の因子が浮動小数点の下限を割っても結果は失われない。
    """
    if isinstance(expr, Exp):
        return 1, _eval_seq(expr.arg, n)
    if isinstance(expr, (Mul, Div)):
        left_sign, left_log = _signed_log(expr.left, n)
        right_sign, right_log = _signed_log(expr.right, n)
        if isinstance(expr, Div):
            if right_sign == 0:
                raise DomainError("0 で割ることはできません")
            right_log = -right_log
        if left_sign == 0 or right_sign == 0:
            return 0, None
        return left_sign * right_sign, tv_add(left_log, right_log)
    if isinstance(expr, PowConst):
        return _signed_log_pow(*_signed_log(expr.base, n), float(expr.exponent))
    if isinstance(expr, Const):
        if expr.value == 0:
            return 0, None
        return (1 if expr.value > 0 else -1), TowerValue.of(_rational_log(abs(expr.value)))
    value = _eval_seq(expr, n)
    if value.is_zero:
        return 0, None
    return value.sign, tv_ln(abs(value))


def _signed_log_pow(sign, log, exponent):
    if sign == 0:
        if exponent <= 0:
            raise DomainError("0 の 0 以下の冪は定義されません")
        return 0, None
    if sign < 0:
        if not exponent.is_integer():
            raise DomainError(f"負の値の非整数冪です: 指数 {exponent}")
        sign = -1 if int(exponent) % 2 else 1
    return sign, tv_mul(TowerValue.of(exponent), log)


# ==================================================
# 数値比較
# ==================================================

@dataclass(frozen=True)
class NumericComparison:
    """numeric_compare の結果"""

    ordering: Ordering
    stable: bool
    points: tuple = field(default_factory=tuple)

    def agrees_with(self, ordering):
        return self.stable and self.ordering is ordering

    def to_dict(self):
        return {
            'ordering': self.ordering.symbol,
            'stable': self.stable,
            'points': [{'n': str(n), 'ordering': o.symbol} for n, o in self.points],
        }


def _relatively_zero(total, largest, tolerance):
    if total.is_zero:
        return True
    if largest.is_zero:
        return False
    log_ratio = tv_add(tv_ln(abs(total)), -tv_ln(abs(largest)))
    return log_ratio < math.log(tolerance)


def ordering_at(p, q, n):
    """n での p と q の大小（ln(p/q) の符号、許容誤差内は EQUAL）"""
    n = _as_index(n)
    summands = _log_summands(div(p, q), n)
    total = ZERO_VALUE
    largest = ZERO_VALUE
    for summand in summands:
        total = tv_add(total, summand)
        if abs(summand) > largest:
            largest = abs(summand)
    if _relatively_zero(total, largest, engine_setting('EQUAL_TOLERANCE')):
        return Ordering.EQUAL
    return Ordering.of(total.sign)


def numeric_compare(p, q, schedule=None):
    """
    評価点の列で p と q を比べる

    Args:
        p, q: 塔を含まないプロトタイプ
        schedule: 評価点の列（省略時は設定 SCHEDULE）

    Returns:
        NumericComparison（後半の評価点で順序が一定なら stable）
    """
    schedule = list(schedule or engine_setting('SCHEDULE'))
    if not schedule:
        raise ValueError("評価点が空です")
    points = tuple((n, ordering_at(p, q, n)) for n in schedule)
    tail = [ordering for _, ordering in points[len(points) // 2:]]
    stable = all(ordering is tail[-1] for ordering in tail)
    logger.debug(f"数値比較: {p} vs {q} -> {[o.symbol for _, o in points]}")
    return NumericComparison(points[-1][1], stable, points)


# ==================================================
# 先頭項の推定
# ==================================================

@dataclass(frozen=True)
class LeadingTermEstimate:
    """estimate_leading_term の結果"""

    coeff: float
    proto: object
    drift: float
    tail_size: int
    candidates: tuple = field(default_factory=tuple)

    def to_dict(self):
        return {
            'coeff': self.coeff,
            'proto': str(self.proto),
            'drift': self.drift,
            'tail_size': self.tail_size,
            'candidates': [{'proto': str(p), 'drift': d} for p, d in self.candidates],
        }


def _ratio_drift(ns, values, proto):
    scale = np.array([float(eval_proto(proto, n)) for n in ns])
    if not np.all(np.isfinite(scale)) or np.any(scale == 0):
        return math.inf, math.nan
    ratios = values / scale
    mean = float(ratios.mean())
    if mean == 0 or not math.isfinite(mean):
        return math.inf, mean
    return float(np.ptp(ratios) / abs(mean)), mean


def estimate_leading_term(samples, candidates, tolerance=None):
    """
    標本 (n, 値) の列から先頭項 c·p を推定する

    後半の標本で 値 / p(n) の変動が最も小さい候補を選び、その平均を c とする。

    Args:
        samples: (n, 値) の列（n は狭義単調増加）
        candidates: 候補プロトタイプの列
        tolerance: 許容する相対変動（省略時は設定 DRIFT_TOLERANCE）

    Returns:
        LeadingTermEstimate
    """
    tolerance = engine_setting('DRIFT_TOLERANCE') if tolerance is None else tolerance
    minimum = engine_setting('MIN_SAMPLES')
    samples = list(samples)
    if len(samples) < minimum:
        raise NoStableCandidate(f"標本が {minimum} 個未満です（{len(samples)} 個）")
    ns = np.array([float(n) for n, _ in samples])
    values = np.array([float(v) for _, v in samples])
    if np.any(np.diff(ns) <= 0):
        raise DomainError("標本の n は狭義単調増加でなければなりません")
    if not candidates:
        raise NoStableCandidate("候補プロトタイプがありません")

    tail = len(samples) // 2
    tail_ns = [n for n, _ in samples[tail:]]
    tail_values = values[tail:]
    report = []
    best = None
    for proto in candidates:
        drift, mean = _ratio_drift(tail_ns, tail_values, proto)
        report.append((proto, drift))
        logger.debug(f"候補 {proto}: 相対変動 {drift:.3g}")
        if drift < tolerance and (best is None or drift < best[1]):
            best = (proto, drift, mean)
    if best is None:
        raise NoStableCandidate(
            "どの候補でも比が収束しません: "
            + ", ".join(f"{p}={d:.3g}" for p, d in report))
    proto, drift, mean = best
    return LeadingTermEstimate(mean, proto, drift, len(tail_ns), tuple(report))


def load_samples(source, allow_paths=True):
    """
    標本を読み込む

    CSV の `n,value` 行、または JSON の配列（[[n, value], ...] か
    [{"n": ..., "value": ...}, ...]）。

    Args:
        source: パスかテキスト
        allow_paths: False ならパスとして読まず、常にテキストとして扱う

    Raises:
        UsageError: ファイルが読めない場合や、形式が正しくない場合
    """
    text = _sample_text(source) if allow_paths else str(source)
    try:
        return _parse_samples(text)
    except (ValueError, IndexError, KeyError, TypeError, csv.Error) as exc:
        raise UsageError(f"標本の形式が正しくありません: {exc}") from exc


def _sample_text(source):
    if isinstance(source, Path) or (isinstance(source, str) and '\n' not in source
                                     and ',' not in source and not source.lstrip().startswith('[')):
        try:
            return Path(source).read_text(encoding='utf-8')
        except OSError as exc:
            raise UsageError(f"標本ファイルを読めません: {source}") from exc
    return source


def _parse_samples(text):
    stripped = text.lstrip()
    samples = []
    if stripped.startswith('['):
        for item in json.loads(stripped):
            if isinstance(item, dict):
                samples.append((_sample_index(item['n']), float(item['value'])))
            else:
                samples.append((_sample_index(item[0]), float(item[1])))
        return samples
    for row in csv.reader(io.StringIO(text)):
        if not row or row[0].strip().startswith('#'):
            continue
        if row[0].strip() == 'n':
            continue
        samples.append((_sample_index(row[0].strip()), float(row[1])))
    return samples


def _sample_index(value):
    text = str(value)
    try:
        return int(text)
    except ValueError:
        return float(text)
