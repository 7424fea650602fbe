"""
コマンドの実行

CLI（manage.py omegalim）と HTTP API が共有する。
run() は CommandRequest を受け取り、終了コードと出力文書を返す。
"""

import contextlib
import json
import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional

from .conf import default_depth
from .engine import evaluate, exact_value, leading_term_limit, limit_of
from .exceptions import DomainError, OmegalimError, Oscillatory, UsageError
from .generations import ordering_chain
from .limits import InNumber, as_in_number, in_compare, leading_term, truncate
from .oracle import (
    eval_limit,
    eval_proto,
    eval_seq,
    estimate_leading_term,
    load_samples,
    numeric_compare,
)
from .parser import Context, as_prototype, infer_context, parse_prototype, parse_sequence, parse_value
from .prototypes import Prototype, compare
from .rendering import render_limit, render_prototype, render_term, render_value
from .scalars import format_scalar, precision

logger = logging.getLogger(__name__)

# ------------------------------------------------------------------
# 定数
# ------------------------------------------------------------------
COMMANDS = ('limit', 'lead', 'compare', 'table', 'eval', 'fit', 'check')
OUTPUT_FORMATS = ('text', 'json')
DEFAULT_CANDIDATES = ('1', 'ln(w)', 'w', 'w*ln(w)', 'w^2', 'w^3', 'exp(w)')
ARITY = {'limit': 1, 'lead': 1, 'compare': 2, 'table': 0, 'eval': 1, 'fit': 1, 'check': 2}


@dataclass
class CommandRequest:
    """1 回のコマンド呼び出し"""

    command: str
    args: List[str] = field(default_factory=list)
    depth: Optional[int] = None
    output: str = 'text'
    unicode: bool = False
    generation: Optional[int] = None
    at: Optional[str] = None
    candidates: Optional[List[str]] = None
    schedule: Optional[List[str]] = None
    precision: Optional[int] = None
    # False なら fit の引数を標本テキストとしてのみ扱う（HTTP API 用）
    allow_paths: bool = True

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError(f"未知のコマンドです: {self.command}")
        if self.output not in OUTPUT_FORMATS:
            raise UsageError(f"出力形式は text / json のいずれかです: {self.output}")
        if self.depth is None:
            self.depth = default_depth()
        if int(self.depth) < 1:
            raise UsageError(f"--depth は 1 以上です: {self.depth}")
        self.depth = int(self.depth)
        self.args = list(self.args)
        if len(self.args) != ARITY[self.command]:
            raise UsageError(
                f"{self.command} には引数が {ARITY[self.command]} 個必要です（{len(self.args)} 個）")


@dataclass
class CommandResult:
    """run() の結果"""

    exit_code: int
    document: Dict[str, Any]
    text: str
    output: str = 'text'

    @property
    def ok(self):
        return self.exit_code == 0

    def render(self):
        if self.output == 'json':
            return json.dumps(self.document, ensure_ascii=False, indent=2)
        return self.text


@dataclass
class _Outcome:
    result: Any
    text: str
    terms: list = field(default_factory=list)
    diagnostics: dict = field(default_factory=dict)


# ------------------------------------------------------------------
# ヘルパー関数
# ------------------------------------------------------------------

def _terms_json(terms, unicode):
    return [
        {'coeff': format_scalar(term.coeff), 'proto': render_prototype(term.proto, unicode)}
        for term in terms
    ]


def _operand(text: str, depth: int):
    """
    比較の引数を評価する

    Returns:
        係数 1 の単項なら Prototype、そうでなければ InNumber
    """
    if infer_context(text) is Context.SEQUENCE:
        value = exact_value(parse_sequence(text), depth)
        return as_prototype(value) or value
    return parse_value(text, depth)


def _evaluation_point(text: Optional[str]):
    if text is None:
        raise UsageError("eval には --at が必要です")
    try:
        return int(text)
    except ValueError:
        try:
            return float(text)
        except ValueError as exc:
            raise UsageError(f"--at は数で指定してください: {text}") from exc


# ------------------------------------------------------------------
# 各コマンド
# ------------------------------------------------------------------

def _run_limit(request: CommandRequest) -> _Outcome:
    source = request.args[0]
    diagnostics = {'depth': request.depth}
    if infer_context(source) is Context.SEQUENCE:
        expr = parse_sequence(source)
        limit = limit_of(expr, request.depth)
        approx = evaluate(expr)
        if approx.is_exact and not approx.value.den.is_one:
            diagnostics['ratio'] = render_value(approx.value, request.unicode)
    else:
        value = parse_value(source, request.depth)
        limit = truncate(as_in_number(value), request.depth)
        if isinstance(value, InNumber) and not value.den.is_one:
            diagnostics['ratio'] = render_value(value, request.unicode)
    text = render_limit(limit, request.unicode)
    if 'ratio' in diagnostics:
        text += f"\n= {diagnostics['ratio']}"
    return _Outcome(render_limit(limit, request.unicode), text, list(limit.terms), diagnostics)


def _run_lead(request: CommandRequest) -> _Outcome:
    source = request.args[0]
    if infer_context(source) is Context.SEQUENCE:
        lead = leading_term_limit(parse_sequence(source))
    else:
        lead = leading_term(as_in_number(parse_value(source, request.depth)))
    if lead is None:
        return _Outcome('0', '0')
    text = render_term(lead, request.unicode)
    return _Outcome(text, text, [lead])


def _run_compare(request: CommandRequest) -> _Outcome:
    a = _operand(request.args[0], request.depth)
    b = _operand(request.args[1], request.depth)
    if isinstance(a, Prototype) and isinstance(b, Prototype):
        ordering = compare(a, b)
        mode = 'class'
    else:
        ordering = in_compare(as_in_number(a), as_in_number(b))
        mode = 'value'
    return _Outcome(ordering.symbol, ordering.symbol, diagnostics={'mode': mode})


def _run_table(request: CommandRequest) -> _Outcome:
    generation = request.generation
    if generation is None:
        raise UsageError("table には --generation が必要です")
    entries = ordering_chain(int(generation))
    lines = []
    for index, entry in enumerate(entries, start=1):
        line = f"{index:3d}. {render_prototype(entry.proto, request.unicode)}"
        if len(entry.spellings) > 1:
            line += f"  [{' = '.join(entry.spellings)}]"
        lines.append(line)
    result = [render_prototype(entry.proto, request.unicode) for entry in entries]
    diagnostics = {
        'generation': int(generation),
        'entries': [entry.to_dict() for entry in entries],
    }
    return _Outcome(result, '\n'.join(lines), diagnostics=diagnostics)


def _run_eval(request: CommandRequest) -> _Outcome:
    source = request.args[0]
    n = _evaluation_point(request.at)
    if infer_context(source) is Context.SEQUENCE:
        value = eval_seq(parse_sequence(source), n)
    else:
        parsed = parse_value(source, request.depth)
        value = eval_proto(parsed, n) if isinstance(parsed, Prototype) else eval_limit(parsed, n)
    text = str(value)
    return _Outcome(text, text, diagnostics={'at': request.at, 'tower': value.to_dict()})


def _run_fit(request: CommandRequest) -> _Outcome:
    samples = load_samples(request.args[0], allow_paths=request.allow_paths)
    spellings = request.candidates or list(DEFAULT_CANDIDATES)
    candidates = [parse_prototype(spelling) for spelling in spellings]
    estimate = estimate_leading_term(samples, candidates)
    proto = render_prototype(estimate.proto, request.unicode)
    text = f"{estimate.coeff:.6g}*{proto}  (drift {estimate.drift:.3g})"
    terms = [{'coeff': repr(estimate.coeff), 'proto': proto}]
    return _Outcome(text, text, terms, estimate.to_dict())


def _run_check(request: CommandRequest) -> _Outcome:
    p = parse_prototype(request.args[0])
    q = parse_prototype(request.args[1])
    schedule = [_evaluation_point(point) for point in request.schedule] if request.schedule else None
    symbolic = compare(p, q)
    numeric = numeric_compare(p, q, schedule)
    agree = numeric.agrees_with(symbolic)
    stability = 'stable' if numeric.stable else 'unstable'
    text = (f"symbolic: {symbolic.symbol}  numeric: {numeric.ordering.symbol} ({stability})  "
            f"{'agree' if agree else 'DISAGREE'}")
    diagnostics = {'symbolic': symbolic.symbol, 'agree': agree, **numeric.to_dict()}
    return _Outcome(numeric.ordering.symbol, text, diagnostics=diagnostics)


HANDLERS: Dict[str, Callable[[CommandRequest], _Outcome]] = {
    'limit': _run_limit,
    'lead': _run_lead,
    'compare': _run_compare,
    'table': _run_table,
    'eval': _run_eval,
    'fit': _run_fit,
    'check': _run_check,
}


# ==================================================
# 実行
# ==================================================

def _failure(request: CommandRequest, document: Dict[str, Any], exc: OmegalimError) -> CommandResult:
    logger.warning(f"{request.command} が失敗しました: {exc.message}")
    diagnostics = exc.to_dict()
    if isinstance(exc, Oscillatory) and exc.known_terms:
        diagnostics['known_terms'] = _terms_json(exc.known_terms, request.unicode)
    document.update({'result': None, 'terms': [], 'diagnostics': diagnostics})
    return CommandResult(exc.exit_code, document, f"error: {exc.message}", request.output)


def run(request: CommandRequest) -> CommandResult:
    """
    コマンドを実行する

    Args:
        request: CommandRequest

    Returns:
        CommandResult（エラー時も文書を持ち、exit_code にエラーの終了コードが入る）
    """
    document = {'command': request.command, 'input': list(request.args)}
    scope = precision(request.precision) if request.precision else contextlib.nullcontext()
    try:
        with scope:
            outcome = HANDLERS[request.command](request)
    except OverflowError as exc:
        error = DomainError(f"数値が浮動小数点の範囲を超えました: {exc}")
        return _failure(request, document, error)
    except OmegalimError as exc:
        return _failure(request, document, exc)

    logger.info(f"{request.command} {request.args} -> {outcome.result}")
    terms = outcome.terms
    if terms and not isinstance(terms[0], dict):
        terms = _terms_json(terms, request.unicode)
    diagnostics = {'exit_code': 0, **outcome.diagnostics}
    document.update({'result': outcome.result, 'terms': terms, 'diagnostics': diagnostics})
    return CommandResult(0, document, outcome.text, request.output)
