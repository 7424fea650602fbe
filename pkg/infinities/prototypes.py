"""
アルキメデス類のプロトタイプ

プロトタイプは log-exp 階層の基底（lnᵏ(ω)、exp(引数)、基数ジャンプの塔）に
実数指数を付けた単項式で、アルキメデス類を一つ代表する。
比較・乗除・冪・対数・指数の各操作はすべて純粋関数で、値は不変。
"""

from __future__ import annotations

import enum
import functools
import logging
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

from .exceptions import (
    FeedbackConditionViolated,
    NonPositiveLeading,
    NotPurelyInfinite,
    PrototypeError,
    TowerArithmeticError,
)
from .scalars import ONE, sign, to_scalar

if TYPE_CHECKING:
    from .limits import InNumber, Limit

logger = logging.getLogger(__name__)


class Ordering(enum.IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1
    # プロトタイプ同士では「同じ類」を意味する
    EQUAL_CLASS = 0

    @classmethod
    def of(cls, value):
        return cls(sign(value))

    def reversed(self):
        return Ordering(-int(self))

    @property
    def symbol(self):
        return {-1: '<', 0: '=', 1: '>'}[int(self)]


# ==================================================
# 基底
# ==================================================

@dataclass(frozen=True)
class LogAtom:
    """lnᵏ(ω)。depth = 0 は ω 自身"""

    depth: int = 0

    def __post_init__(self):
        if isinstance(self.depth, bool) or not isinstance(self.depth, int) or self.depth < 0:
            raise PrototypeError(f"LogAtom の深さは 0 以上の整数です: {self.depth!r}")

    @property
    def height(self):
        return -self.depth


class TowerDirection(enum.Enum):
    EXP = 'exp'
    LOG = 'log'


@dataclass(frozen=True)
class TowerAtom:
    """基数ジャンプ規則の exp^ω(ω) / ln^ω(ω)"""

    direction: TowerDirection

    @property
    def height(self):
        return math.inf if self.direction is TowerDirection.EXP else -math.inf


@dataclass(frozen=True, eq=False)
class ExpBase:
    """
    exp(arg)

    arg は純無限で先頭係数 1 の InNumber。有限和で書ける引数は 1 項だけ
    （exp(P)）、展開が終わらない引数（帰還規則）は分母付きの比で保持する。
    """

    arg: InNumber

    def __eq__(self, other):
        if not isinstance(other, ExpBase):
            return NotImplemented
        return compare_bases(self, other) is Ordering.EQUAL

    __hash__ = None

    @property
    def is_feedback(self):
        return not self.arg.den.is_one

    @property
    def height(self):
        from .limits import archimedean_class
        return cardinal_height(archimedean_class(self.arg)) + 1


def _base_log_proto(base):
    """ln(base) が係数 1 の単項になる場合、その類を返す"""
    if isinstance(base, LogAtom):
        return Prototype(((LogAtom(base.depth + 1), ONE),))
    if isinstance(base, ExpBase) and not base.is_feedback:
        return base.arg.num.terms[0].proto
    return None


def _base_log(base):
    from .limits import InNumber, Limit, Term
    proto = _base_log_proto(base)
    if proto is not None:
        return InNumber(Limit((Term(ONE, proto),)))
    return base.arg


def compare_bases(a, b):
    """基底の全順序（ln(base) の値の順序）"""
    if isinstance(a, TowerAtom) or isinstance(b, TowerAtom):
        return Ordering.of(_tower_rank(a) - _tower_rank(b))
    if isinstance(a, LogAtom) and isinstance(b, LogAtom):
        return Ordering.of(b.depth - a.depth)
    pa, pb = _base_log_proto(a), _base_log_proto(b)
    if pa is not None and pb is not None:
        return compare(pa, pb)
    from .limits import in_compare
    return in_compare(_base_log(a), _base_log(b))


def _tower_rank(base):
    if isinstance(base, TowerAtom):
        return 1 if base.direction is TowerDirection.EXP else -1
    return 0


# ==================================================
# プロトタイプ
# ==================================================

@dataclass(frozen=True, eq=False)
class Prototype:
    """
    (基底, 指数) の列。基底は互いに異なり、compare_bases の降順に並ぶ。
    空の列は単位プロトタイプ（実数の類 1）。
    """

    factors: tuple = ()

    @classmethod
    def from_factors(cls, factors):
        """任意の順序の (基底, 指数) 列から正準形を作る"""
        items = [(base, to_scalar(exponent)) for base, exponent in factors]
        items.sort(key=functools.cmp_to_key(lambda x, y: compare_bases(y[0], x[0])))
        merged = []
        for base, exponent in items:
            if merged and compare_bases(merged[-1][0], base) is Ordering.EQUAL:
                merged[-1] = (merged[-1][0], merged[-1][1] + exponent)
            else:
                merged.append((base, exponent))
        result = tuple((base, e) for base, e in merged if e != 0)
        _check_towers(result)
        return cls(result)

    # ------------------------------------------------------------------
    # 分類
    # ------------------------------------------------------------------

    @property
    def is_unit(self):
        return not self.factors

    @property
    def has_towers(self):
        return any(isinstance(base, TowerAtom) for base, _ in self.factors)

    @property
    def has_feedback(self):
        return any(isinstance(base, ExpBase) and base.is_feedback for base, _ in self.factors)

    # ------------------------------------------------------------------
    # 演算子
    # ------------------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, Prototype):
            return NotImplemented
        return compare(self, other) is Ordering.EQUAL

    __hash__ = None

    def __lt__(self, other):
        return compare(self, other) is Ordering.LESS

    def __le__(self, other):
        return compare(self, other) is not Ordering.GREATER

    def __gt__(self, other):
        return compare(self, other) is Ordering.GREATER

    def __ge__(self, other):
        return compare(self, other) is not Ordering.LESS

    def __mul__(self, other):
        if not isinstance(other, Prototype):
            return NotImplemented
        return mul(self, other)

    def __truediv__(self, other):
        if not isinstance(other, Prototype):
            return NotImplemented
        return div(self, other)

    def __pow__(self, exponent):
        return pow(self, exponent)

    def __str__(self):
        from .rendering import render_prototype
        return render_prototype(self)

    def __repr__(self):
        return f"Prototype({self})"


UNIT = Prototype()
OMEGA = Prototype(((LogAtom(0), ONE),))


def log_atom(depth):
    """lnᵏ(ω) のプロトタイプ"""
    return Prototype(((LogAtom(depth), ONE),))


def exp_tower():
    return Prototype(((TowerAtom(TowerDirection.EXP), ONE),))


def log_tower():
    return Prototype(((TowerAtom(TowerDirection.LOG), ONE),))


def _check_towers(factors):
    directions = {base.direction for base, _ in factors if isinstance(base, TowerAtom)}
    if len(directions) > 1:
        raise TowerArithmeticError("exp 塔と log 塔の積は定義されていません")


# ==================================================
# 比較
# ==================================================

def _tower_exponent(p, direction):
    for base, exponent in p.factors:
        if isinstance(base, TowerAtom) and base.direction is direction:
            return exponent
    return 0


def _finite_part(p):
    return Prototype(tuple((b, e) for b, e in p.factors if not isinstance(b, TowerAtom)))


def compare(p, q):
    """
    プロトタイプの全順序

    塔の指数（exp 塔が最外、log 塔が最内）を先に比べ、残りは
    帰還規則の基底が無ければ因子列の辞書式比較、あれば ln(p) − ln(q) の符号で決める。
    """
    if p is q:
        return Ordering.EQUAL
    if p.has_towers or q.has_towers:
        order = Ordering.of(
            _tower_exponent(p, TowerDirection.EXP) - _tower_exponent(q, TowerDirection.EXP))
        if order is not Ordering.EQUAL:
            return order
        order = _compare_finite(_finite_part(p), _finite_part(q))
        if order is not Ordering.EQUAL:
            return order
        return Ordering.of(
            _tower_exponent(p, TowerDirection.LOG) - _tower_exponent(q, TowerDirection.LOG))
    return _compare_finite(p, q)


def _compare_finite(p, q):
    if p.has_feedback or q.has_feedback:
        from .limits import in_sign
        return Ordering.of(in_sign(log_of(p) - log_of(q)))

    # 異なる基底の対数は異なる類に属するので、最大の基底で指数が違えば決まる
    a, b = p.factors, q.factors
    i = j = 0
    while i < len(a) or j < len(b):
        if j >= len(b):
            return Ordering.of(a[i][1])
        if i >= len(a):
            return Ordering.of(-b[j][1])
        order = compare_bases(a[i][0], b[j][0])
        if order is Ordering.GREATER:
            return Ordering.of(a[i][1])
        if order is Ordering.LESS:
            return Ordering.of(-b[j][1])
        diff = a[i][1] - b[j][1]
        if diff:
            return Ordering.of(diff)
        i += 1
        j += 1
    return Ordering.EQUAL


def is_infinite(p):
    return compare(p, UNIT) is Ordering.GREATER


def is_infinitesimal(p):
    return compare(p, UNIT) is Ordering.LESS


def is_unit(p):
    return compare(p, UNIT) is Ordering.EQUAL


def cardinal_height(p):
    """
    支配的な因子の exp 塔の高さ

    LogAtom(k) → −k、exp(引数) → 引数の高さ + 1、塔は ±∞、単位プロトタイプは 0。
    """
    if not p.factors:
        return 0
    return p.factors[0][0].height


# ==================================================
# 乗除と冪
# ==================================================

def mul(p, q):
    a, b = p.factors, q.factors
    merged = []
    i = j = 0
    while i < len(a) and j < len(b):
        order = compare_bases(a[i][0], b[j][0])
        if order is Ordering.GREATER:
            merged.append(a[i])
            i += 1
        elif order is Ordering.LESS:
            merged.append(b[j])
            j += 1
        else:
            exponent = a[i][1] + b[j][1]
            if exponent:
                merged.append((a[i][0], exponent))
            i += 1
            j += 1
    merged.extend(a[i:])
    merged.extend(b[j:])
    result = tuple(merged)
    _check_towers(result)
    return Prototype(result)


def pow(p, a):  # noqa: A001 - 演算名に合わせる
    exponent = to_scalar(a)
    if exponent == 0:
        raise PrototypeError("指数 0 の冪は使えません（単位プロトタイプは UNIT を使ってください）")
    return Prototype(tuple((base, e * exponent) for base, e in p.factors))


def div(p, q):
    if q.is_unit:
        return p
    return mul(p, pow(q, -1))


# ==================================================
# 対数と指数
# ==================================================

def log_of(p):
    """
    Σ rⱼ·ln(baseⱼ) を InNumber で返す

    ln(LogAtom(k)) = LogAtom(k+1)、ln(exp(L)) = L、ln(UNIT) = 0。
    塔を含むプロトタイプの対数は扱わない。
    """
    from .limits import InNumber, Limit, Term
    if p.has_towers:
        raise TowerArithmeticError(f"塔を含むプロトタイプの対数は定義されていません: {p}")
    terms = []
    feedback = []
    for base, exponent in p.factors:
        proto = _base_log_proto(base)
        if proto is not None:
            terms.append(Term(exponent, proto))
        else:
            feedback.append(base.arg.scale(exponent))
    result = InNumber(Limit.from_terms(terms))
    for part in feedback:
        result = result + part
    return result


def log_class(p):
    """ln(p) の類（p は無限）"""
    from .limits import archimedean_class
    return archimedean_class(log_of(p))


def _log_inverse_base(proto):
    """exp(1·proto) の基底。proto が lnᵏ⁺¹(ω) なら LogAtom(k) に簡約する"""
    from .limits import InNumber, Limit, Term
    if len(proto.factors) == 1:
        base, exponent = proto.factors[0]
        if isinstance(base, LogAtom) and base.depth >= 1 and exponent == 1:
            return LogAtom(base.depth - 1)
        if isinstance(base, TowerAtom):
            raise TowerArithmeticError("塔の指数関数は定義されていません")
    if proto.has_towers:
        raise TowerArithmeticError("塔の指数関数は定義されていません")
    return ExpBase(InNumber(Limit((Term(ONE, proto),))))


def from_log(infinite, feedback=None):
    """
    純無限の対数値からプロトタイプを作る（符号は問わない）

    Args:
        infinite: 有限個の無限項からなる Limit
        feedback: 展開が終わらない部分の InNumber、無ければ None
    """
    factors = [(_log_inverse_base(term.proto), term.coeff) for term in infinite.terms]
    if feedback is not None and not feedback.is_zero:
        from .limits import leading_term
        lead = leading_term(feedback).coeff
        factors.append((ExpBase(feedback.scale(1 / lead)), lead))
    return Prototype.from_factors(factors)


def exp_of(value):
    """
    exp(L) のプロトタイプ

    L は純無限で先頭係数が正であること。有限部分・無限小部分は呼び出し側で分離する。
    """
    from .limits import as_in_number, in_sign, split_parts
    x = as_in_number(value)
    if x.is_zero:
        raise NotPurelyInfinite("exp(0) はプロトタイプではありません")
    parts = split_parts(x)
    if parts.finite != 0 or not parts.infinitesimal.is_zero:
        raise NotPurelyInfinite(f"引数に有限項または無限小項があります: {x}")
    if in_sign(x) <= 0:
        raise NonPositiveLeading(f"引数の先頭係数が正ではありません: {x}")
    return from_log(parts.infinite, parts.feedback)


# ==================================================
# 帰還規則
# ==================================================

def _log_dominates(log_f, t):
    """ln(f) > tⁿ（全ての整数 n）を ln(f) の値から判定する"""
    from .limits import archimedean_class, in_sign
    if t.is_zero or t.terms[0].coeff <= 0:
        raise FeedbackConditionViolated(f"t は正でなければなりません: {t}")
    if any(is_infinitesimal(term.proto) for term in t.terms):
        raise FeedbackConditionViolated(f"t に無限小項があります: {t}")
    if log_f.is_zero or in_sign(log_f) <= 0:
        return False
    lead = archimedean_class(log_f)
    if not is_infinite(lead):
        return False
    t_lead = t.terms[0].proto
    if not is_infinite(t_lead):
        return True
    # n は係数しか変えないので類の比較一回で決まる
    return compare(log_class(lead), log_class(t_lead)) is Ordering.GREATER


def dominates_all_powers(f, t):
    """ln(f) が t の全ての冪より大きいか"""
    from .limits import as_limit
    return _log_dominates(log_of(f), as_limit(t))


def pow_by_limit(f, g):
    """
    f^g のプロトタイプ

    exp(g·ln f) の無限部分から作る。無限部分が無ければ単位プロトタイプ（例: ω^(1/ω)）。
    展開の終わらない部分が現れる場合は帰還規則の条件を確認する。
    """
    from .limits import Term, as_in_number, split_parts
    exponent = as_in_number(g)
    if exponent.is_zero:
        return UNIT
    log_f = log_of(f)
    product = log_f * exponent
    if product.is_zero:
        return UNIT
    parts = split_parts(product)
    if parts.feedback is not None and not exponent.den.is_one:
        last = exponent.num.terms[-1]
        scaled_num = exponent.num.scale(Term(1 / abs(last.coeff), div(UNIT, last.proto)))
        if not _log_dominates(log_f * scaled_num, exponent.den):
            raise FeedbackConditionViolated(
                f"ln({f}) が分母 {exponent.den} の全ての冪を上回りません")
        logger.debug(f"帰還規則を適用しました: {f}^({exponent})")
    if parts.infinite.is_zero and parts.feedback is None:
        return UNIT
    return from_log(parts.infinite, parts.feedback)
