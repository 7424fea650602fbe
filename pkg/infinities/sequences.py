"""
数列式の構文木

添字 n の有限な式を表す不変な木。ω 文脈（プロトタイプ・極限の入力）でも
同じ木を使い、IndexN を ω と読み替える。
"""

from dataclasses import dataclass
from fractions import Fraction

from .scalars import to_scalar


class SeqExpr:
    """数列式の基底クラス"""

    def __add__(self, other):
        return Add(self, as_expr(other))

    def __radd__(self, other):
        return Add(as_expr(other), self)

    def __sub__(self, other):
        return Sub(self, as_expr(other))

    def __rsub__(self, other):
        return Sub(as_expr(other), self)

    def __mul__(self, other):
        return Mul(self, as_expr(other))

    def __rmul__(self, other):
        return Mul(as_expr(other), self)

    def __truediv__(self, other):
        return Div(self, as_expr(other))

    def __rtruediv__(self, other):
        return Div(as_expr(other), self)

    def __neg__(self):
        return Mul(Const(-1), self)

    def __pow__(self, exponent):
        return PowConst(self, to_scalar(exponent))

    def __str__(self):
        from .rendering import render_expr
        return render_expr(self)


def as_expr(value):
    if isinstance(value, SeqExpr):
        return value
    return Const(to_scalar(value))


@dataclass(frozen=True, eq=True)
class Const(SeqExpr):
    value: Fraction

    def __post_init__(self):
        object.__setattr__(self, 'value', to_scalar(self.value))


@dataclass(frozen=True)
class IndexN(SeqExpr):
    pass


@dataclass(frozen=True)
class Add(SeqExpr):
    left: SeqExpr
    right: SeqExpr


@dataclass(frozen=True)
class Sub(SeqExpr):
    left: SeqExpr
    right: SeqExpr


@dataclass(frozen=True)
class Mul(SeqExpr):
    left: SeqExpr
    right: SeqExpr


@dataclass(frozen=True)
class Div(SeqExpr):
    left: SeqExpr
    right: SeqExpr


@dataclass(frozen=True)
class PowConst(SeqExpr):
    base: SeqExpr
    exponent: Fraction

    def __post_init__(self):
        object.__setattr__(self, 'exponent', to_scalar(self.exponent))


@dataclass(frozen=True)
class Exp(SeqExpr):
    arg: SeqExpr


@dataclass(frozen=True)
class Ln(SeqExpr):
    arg: SeqExpr


@dataclass(frozen=True)
class Sin(SeqExpr):
    arg: SeqExpr


@dataclass(frozen=True)
class Cos(SeqExpr):
    arg: SeqExpr


N = IndexN()
