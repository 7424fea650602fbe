"""
式の構文解析

    expr   := term (('+'|'-') term)*
    term   := unary (('*'|'/') unary)*
    unary  := ('-'|'+') unary | power
    power  := atom ('^' exponent)?
    exponent := signed-number | '(' signed-number ('/' number)? ')'
    atom   := number | 'n' | 'w' | func '(' expr ')' | '(' expr ')'
    func   := 'exp' | 'ln' | 'sin' | 'cos' | 'expw' | 'lnw'

'n' は数列の文脈、'w'（ω）は極限・プロトタイプの文脈でだけ使える。
expw(w) / lnw(w) は基数ジャンプの塔を表す。
"""

import enum
import logging
import re
from dataclasses import dataclass

from .conf import default_depth
from .exceptions import ContextError, ParseError
from .limits import InNumber
from .prototypes import Prototype, div, exp_tower, log_tower, mul, pow
from .scalars import to_scalar
from .sequences import Add, Const, Cos, Div, Exp, IndexN, Ln, Mul, PowConst, SeqExpr, Sin, Sub

logger = logging.getLogger(__name__)


class Context(enum.Enum):
    SEQUENCE = 'sequence'
    LIMIT = 'limit'
    PROTOTYPE = 'prototype'


# ==================================================
# 字句解析
# ==================================================

TOKEN_PATTERN = re.compile(r"""
    (?P<space>\s+)
  | (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-zω]+)
  | (?P<op>[-+*/^()])
""", re.VERBOSE)

FUNCTIONS = {'exp': Exp, 'ln': Ln, 'sin': Sin, 'cos': Cos}
TOWERS = {'expw', 'lnw'}
OMEGA_NAMES = {'w', 'ω'}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    position: int


def tokenize(source):
    position = 0
    while position < len(source):
        match = TOKEN_PATTERN.match(source, position)
        if match is None:
            raise ParseError(f"解釈できない文字 {source[position]!r} です", position)
        kind = match.lastgroup
        if kind != 'space':
            yield Token(kind, match.group(), position)
        position = match.end()
    yield Token('end', '', len(source))


@dataclass(frozen=True)
class TowerNode(SeqExpr):
    """expw(w) / lnw(w)"""

    name: str


# ==================================================
# 構文解析
# ==================================================

class Parser:
    """再帰下降パーサ"""

    def __init__(self, source, context):
        self.source = source
        self.context = context
        self.tokens = list(tokenize(source))
        self.index = 0

    @property
    def current(self):
        return self.tokens[self.index]

    def advance(self):
        token = self.current
        self.index += 1
        return token

    def accept(self, text):
        if self.current.kind == 'op' and self.current.text == text:
            return self.advance()
        return None

    def expect(self, text):
        token = self.accept(text)
        if token is None:
            found = self.current.text or '入力の終わり'
            raise ParseError(f"{text!r} が必要ですが {found!r} があります", self.current.position)
        return token

    def parse(self):
        node = self.expression()
        if self.current.kind != 'end':
            raise ParseError(f"余分な入力 {self.current.text!r} があります", self.current.position)
        return node

    def expression(self):
        node = self.term()
        while True:
            if self.accept('+'):
                node = Add(node, self.term())
            elif self.accept('-'):
                node = Sub(node, self.term())
            else:
                return node

    def term(self):
        node = self.unary()
        while True:
            if self.accept('*'):
                node = Mul(node, self.unary())
            elif self.accept('/'):
                node = Div(node, self.unary())
            else:
                return node

    def unary(self):
        if self.accept('-'):
            operand = self.unary()
            if isinstance(operand, Const):
                return Const(-operand.value)
            return Mul(Const(-1), operand)
        if self.accept('+'):
            return self.unary()
        return self.power()

    def power(self):
        node = self.atom()
        if self.accept('^'):
            node = PowConst(node, self.exponent())
        return node

    def signed_number(self):
        negative = False
        if self.accept('-'):
            negative = True
        elif self.accept('+'):
            pass
        token = self.current
        if token.kind != 'number':
            raise ParseError("指数には数が必要です", token.position)
        self.advance()
        value = to_scalar(token.text)
        return -value if negative else value

    def exponent(self):
        if self.accept('('):
            value = self.signed_number()
            if self.accept('/'):
                token = self.current
                if token.kind != 'number':
                    raise ParseError("指数の分母には数が必要です", token.position)
                self.advance()
                denominator = to_scalar(token.text)
                if denominator == 0:
                    raise ParseError("指数の分母が 0 です", token.position)
                value = value / denominator
            self.expect(')')
            return value
        return self.signed_number()

    def atom(self):
        token = self.current
        if token.kind == 'number':
            self.advance()
            return Const(to_scalar(token.text))
        if token.kind == 'name':
            return self.name(self.advance())
        if self.accept('('):
            node = self.expression()
            self.expect(')')
            return node
        found = token.text or '入力の終わり'
        raise ParseError(f"式が必要ですが {found!r} があります", token.position)

    def name(self, token):
        if token.text == 'n':
            if self.context is not Context.SEQUENCE:
                raise ContextError(f"'n' は数列の式でだけ使えます（位置 {token.position}）")
            return IndexN()
        if token.text in OMEGA_NAMES:
            if self.context is Context.SEQUENCE:
                raise ContextError(f"'w' は極限・プロトタイプの式でだけ使えます（位置 {token.position}）")
            return IndexN()
        if token.text in TOWERS:
            if self.context is Context.SEQUENCE:
                raise ContextError(f"{token.text} は数列の式では使えません（位置 {token.position}）")
            self.expect('(')
            argument = self.current
            if argument.kind != 'name' or argument.text not in OMEGA_NAMES:
                raise ParseError(f"{token.text} の引数は w だけです", argument.position)
            self.advance()
            self.expect(')')
            return TowerNode(token.text)
        if token.text in FUNCTIONS:
            self.expect('(')
            node = self.expression()
            self.expect(')')
            return FUNCTIONS[token.text](node)
        raise ParseError(f"未知の名前 {token.text!r} です", token.position)


# ==================================================
# 公開関数
# ==================================================

def infer_context(source):
    """'n' を含めば数列、'w' を含めば極限の文脈（どちらも無ければ数列）"""
    names = {token.text for token in tokenize(source) if token.kind == 'name'}
    has_omega = bool(names & (OMEGA_NAMES | TOWERS))
    if 'n' in names and has_omega:
        raise ContextError("'n' と 'w' を同じ式で使うことはできません")
    return Context.LIMIT if has_omega else Context.SEQUENCE


def parse_sequence(source):
    """数列式（SeqExpr）を返す"""
    return Parser(source, Context.SEQUENCE).parse()


def _contains_tower(node):
    if isinstance(node, TowerNode):
        return True
    return any(_contains_tower(getattr(node, name)) for name in ('left', 'right', 'base', 'arg')
               if isinstance(getattr(node, name, None), SeqExpr))


def _tower_prototype(node, depth):
    """塔を含む式は積・商・冪だけを許し、プロトタイプとして組み立てる"""
    if isinstance(node, TowerNode):
        return exp_tower() if node.name == 'expw' else log_tower()
    if not _contains_tower(node):
        proto = as_prototype(_evaluate_omega(node, depth))
        if proto is None:
            raise ContextError("塔と組み合わせられるのはプロトタイプだけです")
        return proto
    if isinstance(node, Mul):
        return mul(_tower_prototype(node.left, depth), _tower_prototype(node.right, depth))
    if isinstance(node, Div):
        return div(_tower_prototype(node.left, depth), _tower_prototype(node.right, depth))
    if isinstance(node, PowConst):
        return pow(_tower_prototype(node.base, depth), node.exponent)
    raise ContextError("塔は積・商・冪の中でだけ使えます")


def _evaluate_omega(node, depth):
    from .engine import exact_value
    return exact_value(node, depth)


def as_prototype(value):
    """係数 1 の単項ならそのプロトタイプ、そうでなければ None"""
    if isinstance(value, Prototype):
        return value
    if isinstance(value, InNumber) and value.den.is_one and len(value.num.terms) == 1:
        term = value.num.terms[0]
        if term.coeff == 1:
            return term.proto
    return None


def parse_value(source, depth=None):
    """
    ω 文脈の式を評価する

    Returns:
        係数 1 の単項なら Prototype、そうでなければ InNumber
    """
    depth = depth or default_depth()
    node = Parser(source, Context.LIMIT).parse()
    if _contains_tower(node):
        return _tower_prototype(node, depth)
    value = _evaluate_omega(node, depth)
    return as_prototype(value) or value


def parse_prototype(source):
    value = parse_value(source)
    if not isinstance(value, Prototype):
        raise ContextError(f"プロトタイプ（係数 1 の単項）ではありません: {source}")
    return value


def parse_expr(source, context=None, depth=None):
    """
    式を解析する

    Args:
        source: 式のテキスト
        context: Context（省略時は 'n' / 'w' の有無から推定）
        depth: ω 文脈で級数が必要な場合の項数

    Returns:
        数列の文脈なら SeqExpr、ω の文脈なら Prototype または InNumber
    """
    context = context or infer_context(source)
    if context is Context.SEQUENCE:
        return parse_sequence(source)
    if context is Context.PROTOTYPE:
        return parse_prototype(source)
    return parse_value(source, depth)

