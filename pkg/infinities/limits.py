"""
極限（プロトタイプの有限線形結合）と InNumber（極限の比）
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction

from .conf import engine_setting
from .exceptions import DivisionByZero, ExpansionLimitExceeded
from .prototypes import (
    UNIT,
    Ordering,
    compare,
    div,
    is_infinite,
    is_infinitesimal,
    log_class,
    mul,
)
from .scalars import ONE, ZERO, sign, to_scalar

logger = logging.getLogger(__name__)


# ==================================================
# 項
# ==================================================

@dataclass(frozen=True)
class Term:
    """係数 × プロトタイプ（係数は 0 以外）"""

    coeff: Fraction
    proto: object

    def __post_init__(self):
        coeff = to_scalar(self.coeff)
        if coeff == 0:
            raise ValueError("係数 0 の項は作れません")
        object.__setattr__(self, 'coeff', coeff)

    __hash__ = None

    def __neg__(self):
        return Term(-self.coeff, self.proto)

    def __mul__(self, other):
        if isinstance(other, Term):
            return Term(self.coeff * other.coeff, mul(self.proto, other.proto))
        return Term(self.coeff * to_scalar(other), self.proto)

    def __truediv__(self, other):
        if isinstance(other, Term):
            return Term(self.coeff / other.coeff, div(self.proto, other.proto))
        return Term(self.coeff / to_scalar(other), self.proto)

    def inverse(self):
        return Term(1 / self.coeff, div(UNIT, self.proto))

    def __str__(self):
        from .rendering import render_term
        return render_term(self)


# ==================================================
# 極限
# ==================================================

def _merge(a, b):
    """降順に並んだ 2 つの項列を足し合わせる"""
    out = []
    i = j = 0
    while i < len(a) and j < len(b):
        order = compare(a[i].proto, b[j].proto)
        if order is Ordering.GREATER:
            out.append(a[i])
            i += 1
        elif order is Ordering.LESS:
            out.append(b[j])
            j += 1
        else:
            coeff = a[i].coeff + b[j].coeff
            if coeff:
                out.append(Term(coeff, a[i].proto))
            i += 1
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return tuple(out)


@dataclass(frozen=True, eq=False)
class Limit:
    """
    Σ cⱼ·Pⱼ

    terms はプロトタイプの降順で、同じプロトタイプは現れない。空なら 0。
    """

    terms: tuple = ()

    @classmethod
    def from_terms(cls, terms):
        result = ()
        for term in terms:
            result = _merge(result, (term,))
        return cls(result)

    @classmethod
    def constant(cls, value):
        value = to_scalar(value)
        return cls() if value == 0 else cls((Term(value, UNIT),))

    @property
    def is_zero(self):
        return not self.terms

    @property
    def is_one(self):
        return (len(self.terms) == 1 and self.terms[0].coeff == 1
                and self.terms[0].proto.is_unit)

    @property
    def leading(self):
        return self.terms[0] if self.terms else None

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def scale(self, factor):
        """項または数を掛ける（順序は保たれる）"""
        if isinstance(factor, Term):
            return Limit(tuple(t * factor for t in self.terms))
        factor = to_scalar(factor)
        if factor == 0:
            return Limit()
        return Limit(tuple(Term(t.coeff * factor, t.proto) for t in self.terms))

    def truncated(self, depth):
        return Limit(self.terms[:depth])

    # ------------------------------------------------------------------
    # 演算子
    # ------------------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, InNumber):
            return NotImplemented
        return lim_add(self, as_limit(other))

    __radd__ = __add__

    def __neg__(self):
        return lim_neg(self)

    def __sub__(self, other):
        if isinstance(other, InNumber):
            return NotImplemented
        return lim_add(self, lim_neg(as_limit(other)))

    def __rsub__(self, other):
        return lim_add(as_limit(other), lim_neg(self))

    def __mul__(self, other):
        if isinstance(other, InNumber):
            return NotImplemented
        if isinstance(other, Term):
            return self.scale(other)
        return lim_mul(self, as_limit(other))

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, InNumber):
            return NotImplemented
        try:
            other = as_limit(other)
        except TypeError:
            return NotImplemented
        if len(self.terms) != len(other.terms):
            return False
        return all(a.coeff == b.coeff and compare(a.proto, b.proto) is Ordering.EQUAL
                   for a, b in zip(self.terms, other.terms))

    __hash__ = None

    def __lt__(self, other):
        return lim_compare(self, as_limit(other)) is Ordering.LESS

    def __gt__(self, other):
        return lim_compare(self, as_limit(other)) is Ordering.GREATER

    def __str__(self):
        from .rendering import render_limit
        return render_limit(self)

    def __repr__(self):
        return f"Limit({self})"


ZERO_LIMIT = Limit()
ONE_LIMIT = Limit((Term(ONE, UNIT),))


def as_limit(value):
    if isinstance(value, Limit):
        return value
    if isinstance(value, Term):
        return Limit((value,))
    if isinstance(value, InNumber):
        if not value.den.is_one:
            raise TypeError(f"分母を持つ InNumber は極限ではありません: {value}")
        return value.num
    if hasattr(value, 'factors'):
        return Limit((Term(ONE, value),))
    return Limit.constant(value)


def lim_add(a, b):
    return Limit(_merge(a.terms, b.terms))


def lim_neg(a):
    return Limit(tuple(-t for t in a.terms))


def lim_sub(a, b):
    return lim_add(a, lim_neg(b))


def lim_mul(a, b):
    """a の各項で b を拡大して足し合わせる"""
    result = ZERO_LIMIT
    for term in a.terms:
        result = lim_add(result, b.scale(term))
    return result


def lim_sign(a):
    return sign(a.terms[0].coeff) if a.terms else 0


def lim_compare(a, b):
    return Ordering.of(lim_sign(lim_sub(a, b)))


# ==================================================
# InNumber
# ==================================================

@dataclass(frozen=True, eq=False)
class InNumber:
    """
    num / den

    正規形: 分母が 1 項なら分子に畳み込み（den = 1）、
    そうでなければ分母の先頭係数を 1 にそろえる。
    """

    num: Limit
    den: Limit = field(default_factory=lambda: ONE_LIMIT)

    def __post_init__(self):
        num, den = self.num, self.den
        if den.is_zero:
            raise DivisionByZero("分母が 0 の InNumber は作れません")
        if num.is_zero:
            den = ONE_LIMIT
        elif len(den.terms) == 1:
            if not den.is_one:
                num = num.scale(den.terms[0].inverse())
                den = ONE_LIMIT
        else:
            lead = den.terms[0].coeff
            if lead != 1:
                num = num.scale(1 / lead)
                den = den.scale(1 / lead)
            if num == den:
                num, den = ONE_LIMIT, ONE_LIMIT
        object.__setattr__(self, 'num', num)
        object.__setattr__(self, 'den', den)

    @property
    def is_zero(self):
        return self.num.is_zero

    @property
    def is_limit(self):
        return self.den.is_one

    def scale(self, factor):
        return InNumber(self.num.scale(factor), self.den)

    def __add__(self, other):
        return in_add(self, as_in_number(other))

    __radd__ = __add__

    def __neg__(self):
        return in_neg(self)

    def __sub__(self, other):
        return in_sub(self, as_in_number(other))

    def __rsub__(self, other):
        return in_sub(as_in_number(other), self)

    def __mul__(self, other):
        return in_mul(self, as_in_number(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return in_div(self, as_in_number(other))

    def __rtruediv__(self, other):
        return in_div(as_in_number(other), self)

    def __pow__(self, exponent):
        return in_pow(self, exponent)

    def __eq__(self, other):
        try:
            other = as_in_number(other)
        except TypeError:
            return NotImplemented
        return in_compare(self, other) is Ordering.EQUAL

    __hash__ = None

    def __lt__(self, other):
        return in_compare(self, as_in_number(other)) is Ordering.LESS

    def __le__(self, other):
        return in_compare(self, as_in_number(other)) is not Ordering.GREATER

    def __gt__(self, other):
        return in_compare(self, as_in_number(other)) is Ordering.GREATER

    def __ge__(self, other):
        return in_compare(self, as_in_number(other)) is not Ordering.LESS

    def __str__(self):
        from .rendering import render_in_number
        return render_in_number(self)

    def __repr__(self):
        return f"InNumber({self})"


def as_in_number(value):
    if isinstance(value, InNumber):
        return value
    return InNumber(as_limit(value))


def in_add(a, b):
    if a.den == b.den:
        return InNumber(a.num + b.num, a.den)
    return InNumber(a.num * b.den + b.num * a.den, a.den * b.den)


def in_neg(a):
    return InNumber(-a.num, a.den)


def in_sub(a, b):
    return in_add(a, in_neg(b))


def in_mul(a, b):
    # 片方の分母がもう片方の分子と一致すれば約分する
    if not a.den.is_one and a.den == b.num:
        return InNumber(a.num, b.den)
    if not b.den.is_one and b.den == a.num:
        return InNumber(b.num, a.den)
    return InNumber(a.num * b.num, a.den * b.den)


def in_inv(a):
    if a.is_zero:
        raise DivisionByZero("0 の逆数は定義されません")
    return InNumber(a.den, a.num)


def in_div(a, b):
    return in_mul(a, in_inv(b))


def in_pow(a, k):
    """整数冪（負なら逆数の冪）"""
    if isinstance(k, bool) or int(k) != k:
        raise TypeError(f"InNumber の冪は整数だけです: {k}")
    k = int(k)
    if k < 0:
        return in_pow(in_inv(a), -k)
    result = InNumber(ONE_LIMIT)
    base = a
    while k:
        if k & 1:
            result = in_mul(result, base)
        base = in_mul(base, base)
        k >>= 1
    return result


def in_sign(a):
    return lim_sign(a.num) * lim_sign(a.den)


def in_abs(a):
    return in_neg(a) if in_sign(a) < 0 else a


def in_compare(a, b):
    return Ordering.of(in_sign(in_sub(a, b)))


# ==================================================
# 展開と類
# ==================================================

def truncate(x, depth):
    """
    x を長除法で展開し、先頭から depth 項の Limit を返す

    Args:
        x: InNumber または Limit
        depth: 1 以上の項数

    Returns:
        Limit（展開が有限なら depth 項未満のこともある）
    """
    if depth < 1:
        raise ValueError(f"depth は 1 以上です: {depth}")
    x = as_in_number(x)
    if x.den.is_one:
        return x.num.truncated(depth)
    out = []
    remainder = x.num
    lead = x.den.terms[0]
    while not remainder.is_zero and len(out) < depth:
        quotient = remainder.terms[0] / lead
        out.append(quotient)
        remainder = remainder - x.den.scale(quotient)
    return Limit(tuple(out))


def leading_term(x):
    x = as_in_number(x)
    if x.is_zero:
        return None
    return x.num.terms[0] / x.den.terms[0]


def term_at(x, index):
    """1 始まりで index 番目の項。無ければ None"""
    terms = truncate(x, index).terms
    return terms[index - 1] if len(terms) >= index else None


def archimedean_class(x):
    """x の属する類（先頭項のプロトタイプ）。0 なら None"""
    term = leading_term(x)
    return term.proto if term is not None else None


def same_class(a, b):
    """どちらも 0 でなく、先頭の類が同じか"""
    ca, cb = archimedean_class(a), archimedean_class(b)
    if ca is None or cb is None:
        return False
    return compare(ca, cb) is Ordering.EQUAL


def magnitude(x):
    """'infinite' / 'finite' / 'infinitesimal' / 'zero'"""
    proto = archimedean_class(x)
    if proto is None:
        return 'zero'
    if is_infinite(proto):
        return 'infinite'
    if is_infinitesimal(proto):
        return 'infinitesimal'
    return 'finite'


# ==================================================
# 無限部・有限部・無限小部への分解
# ==================================================

@dataclass(frozen=True)
class SplitParts:
    """
    x = infinite + feedback + finite + infinitesimal

    feedback は展開が終わらない無限部分（帰還規則の対象）で、無ければ None。
    """

    infinite: Limit
    feedback: InNumber | None
    finite: Fraction
    infinitesimal: InNumber


def _exceeds_all_powers(ratio, inverse_step):
    """ratio × (1/inverse_step)ⁿ が全ての n で無限か"""
    return compare(log_class(ratio), log_class(inverse_step)) is Ordering.GREATER


def split_parts(x):
    """
    InNumber を無限部・有限部・無限小部に分ける

    分母が多項の場合、分子の各項 t について t/q₁（q₁ は分母の先頭類）が
    分母の比 q₁/q₂ の全ての冪を上回るものは展開が終わらない部分として
    そのまま残し、それ以外は長除法で単位の類を下回るまで展開する。
    """
    x = as_in_number(x)
    if x.den.is_one:
        infinite, small = [], []
        finite = ZERO
        for term in x.num.terms:
            order = compare(term.proto, UNIT)
            if order is Ordering.GREATER:
                infinite.append(term)
            elif order is Ordering.EQUAL:
                finite = term.coeff
            else:
                small.append(term)
        return SplitParts(Limit(tuple(infinite)), None, finite, InNumber(Limit(tuple(small))))

    den = x.den
    lead = den.terms[0]
    inverse_step = div(lead.proto, den.terms[1].proto)
    big, small = [], []
    for term in x.num.terms:
        ratio = div(term.proto, lead.proto)
        if is_infinite(ratio) and _exceeds_all_powers(ratio, inverse_step):
            big.append(term)
        else:
            small.append(term)

    limit = engine_setting('EXPANSION_STEP_LIMIT')
    infinite = []
    finite = ZERO
    remainder = Limit(tuple(small))
    steps = 0
    while not remainder.is_zero:
        quotient = remainder.terms[0] / lead
        order = compare(quotient.proto, UNIT)
        if order is Ordering.LESS:
            break
        if order is Ordering.GREATER:
            infinite.append(quotient)
        else:
            finite = quotient.coeff
        remainder = remainder - den.scale(quotient)
        steps += 1
        if steps > limit:
            raise ExpansionLimitExceeded(
                f"無限部の展開が {limit} 手で終わりません: {x}")
    feedback = InNumber(Limit(tuple(big)), den) if big else None
    if big:
        logger.debug(f"展開の終わらない部分を保持します: {feedback}")
    return SplitParts(Limit(tuple(infinite)), feedback, finite, InNumber(remainder, den))

