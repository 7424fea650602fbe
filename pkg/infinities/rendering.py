"""
表示用の文字列化

出力はそのまま parse_value に戻せる ASCII 表記（'w' は ω）。
unicode=True なら 'w' を 'ω' にする。
"""

from .prototypes import ExpBase, LogAtom, TowerAtom, TowerDirection
from .scalars import format_scalar
from .sequences import Add, Const, Cos, Div, Exp, IndexN, Ln, Mul, PowConst, Sin, Sub


def _unicode(text, unicode):
    return text.replace('w', 'ω') if unicode else text


# ==================================================
# プロトタイプ
# ==================================================

def _render_base(base):
    if isinstance(base, LogAtom):
        return 'ln(' * base.depth + 'w' + ')' * base.depth
    if isinstance(base, TowerAtom):
        return 'expw(w)' if base.direction is TowerDirection.EXP else 'lnw(w)'
    if isinstance(base, ExpBase):
        return f"exp({render_in_number(base.arg)})"
    raise TypeError(f"未知の基底です: {base!r}")


def _render_power(base, exponent):
    text = _render_base(base)
    if exponent == 1:
        return text
    if exponent.denominator == 1:
        return f"{text}^{exponent.numerator}"
    return f"{text}^({format_scalar(exponent)})"


def _split_factors(proto):
    numerator = [_render_power(b, e) for b, e in proto.factors if e > 0]
    denominator = [_render_power(b, -e) for b, e in proto.factors if e < 0]
    return numerator, denominator


def render_prototype(proto, unicode=False):
    """例: 'w^2*ln(w)', 'exp(w)/ln(w)', '1/w', 単位プロトタイプは '1'"""
    numerator, denominator = _split_factors(proto)
    text = '*'.join(numerator) or '1'
    for factor in denominator:
        text += f"/{factor}"
    return _unicode(text, unicode)


# ==================================================
# 項・極限・InNumber
# ==================================================

def _render_magnitude(coeff, proto):
    """符号を除いた項の表記"""
    numerator, denominator = _split_factors(proto)
    if coeff.denominator != 1:
        head = f"({format_scalar(coeff)})"
    else:
        head = format_scalar(coeff)
    if coeff == 1 and numerator:
        text = '*'.join(numerator)
    elif numerator:
        text = f"{head}*{'*'.join(numerator)}"
    else:
        text = head
    for factor in denominator:
        text += f"/{factor}"
    return text


def render_term(term, unicode=False):
    """例: '2/w', '(1/2)*ln(w)/w', '-3*w'"""
    text = _render_magnitude(abs(term.coeff), term.proto)
    if term.coeff < 0:
        text = f"-{text}"
    return _unicode(text, unicode)


def render_limit(limit, unicode=False):
    """例: '1 + 2/w + 2/w^2'、0 は '0'"""
    if limit.is_zero:
        return '0'
    parts = []
    for index, term in enumerate(limit.terms):
        magnitude = _render_magnitude(abs(term.coeff), term.proto)
        if index == 0:
            parts.append(f"-{magnitude}" if term.coeff < 0 else magnitude)
        else:
            parts.append(f"{'-' if term.coeff < 0 else '+'} {magnitude}")
    return _unicode(' '.join(parts), unicode)


def render_in_number(value, unicode=False):
    """分母が 1 なら極限と同じ、そうでなければ '(num)/(den)'"""
    if value.den.is_one:
        return render_limit(value.num, unicode)
    num = render_limit(value.num, unicode)
    den = render_limit(value.den, unicode)
    return f"({num})/({den})"


def render_value(value, unicode=False):
    """Prototype / Term / Limit / InNumber のいずれでも文字列にする"""
    from .limits import InNumber, Limit, Term
    from .prototypes import Prototype
    if isinstance(value, Prototype):
        return render_prototype(value, unicode)
    if isinstance(value, Term):
        return render_term(value, unicode)
    if isinstance(value, Limit):
        return render_limit(value, unicode)
    if isinstance(value, InNumber):
        return render_in_number(value, unicode)
    return str(value)


# ==================================================
# 数列式
# ==================================================

_BINARY = {Add: '+', Sub: '-', Mul: '*', Div: '/'}
_UNARY = {Exp: 'exp', Ln: 'ln', Sin: 'sin', Cos: 'cos'}


def render_expr(expr):
    """数列式を括弧付きで文字列にする（parse_sequence で読み戻せる）"""
    if isinstance(expr, Const):
        text = format_scalar(expr.value)
        return f"({text})" if expr.value < 0 or expr.value.denominator != 1 else text
    if isinstance(expr, IndexN):
        return 'n'
    if type(expr) in _BINARY:
        return f"({render_expr(expr.left)} {_BINARY[type(expr)]} {render_expr(expr.right)})"
    if type(expr) in _UNARY:
        return f"{_UNARY[type(expr)]}({render_expr(expr.arg)})"
    if isinstance(expr, PowConst):
        exponent = expr.exponent
        if exponent.denominator == 1 and exponent >= 0:
            return f"{render_expr(expr.base)}^{exponent.numerator}"
        return f"{render_expr(expr.base)}^({format_scalar(exponent)})"
    name = getattr(expr, 'name', None)
    if name is not None:
        return f"{name}(w)"
    raise TypeError(f"未知の式です: {type(expr).__name__}")
