import json
import logging
from typing import Any, Dict, Tuple

from django.http import JsonResponse
from django.views.decorators.csrf import csrf_exempt
from django.views.decorators.http import require_http_methods

from .apps import InfinitiesConfig
from .commands import CommandRequest, run
from .exceptions import UsageError

# ロガーの設定
logger = logging.getLogger(__name__)

# ------------------------------------------------------------------
# 定数
# ------------------------------------------------------------------
MAX_BODY_SIZE = 64 * 1024  # 64KB
ALLOWED_OPTIONS = {'unicode', 'generation', 'at', 'candidates', 'schedule', 'precision'}


# ------------------------------------------------------------------
# ヘルパー関数
# ------------------------------------------------------------------
def parse_request_body(body: bytes) -> Tuple[Dict[str, Any], str]:
    """
    リクエストボディの JSON を読み込む

    Args:
        body: リクエストボディ

    Returns:
        (読み込んだ辞書, エラーメッセージ)。成功時のエラーメッセージは空文字列
    """
    if len(body) > MAX_BODY_SIZE:
        return {}, f"リクエストが大きすぎます（上限 {MAX_BODY_SIZE // 1024}KB）"
    try:
        data = json.loads(body.decode('utf-8') or '{}')
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        return {}, f"JSON の読み込みエラー: {e}"
    if not isinstance(data, dict):
        return {}, "JSON オブジェクトを送ってください"
    return data, ''


def build_command_request(data: Dict[str, Any]) -> CommandRequest:
    """
    JSON の辞書から CommandRequest を作る

    Raises:
        UsageError: 未知のオプションや不正な値の場合
    """
    options = data.get('options') or {}
    unknown = set(options) - ALLOWED_OPTIONS
    if unknown:
        raise UsageError(f"未知のオプションです: {', '.join(sorted(unknown))}")
    args = data.get('args') or []
    if not isinstance(args, list):
        raise UsageError("args は配列で指定してください")
    return CommandRequest(
        command=str(data.get('command', '')),
        args=[str(arg) for arg in args],
        depth=data.get('depth'),
        output='json',
        # サーバー上のファイルは読ませない
        allow_paths=False,
        **options,
    )


def error_document(data: Dict[str, Any], message: str, exit_code: int = 2) -> Dict[str, Any]:
    return {
        'command': data.get('command'),
        'input': data.get('args') or [],
        'result': None,
        'terms': [],
        'diagnostics': {'error': 'UsageError', 'message': message, 'exit_code': exit_code},
    }


# ------------------------------------------------------------------
# ビュー
# ------------------------------------------------------------------
@csrf_exempt
@require_http_methods(["POST"])
def run_command(request):
    """
    コマンドを実行して JSON 文書を返す

    成功時は 200、エラー時は 400（diagnostics.exit_code に CLI の終了コード）
    """
    data, error = parse_request_body(request.body)
    if error:
        logger.warning(error)
        return JsonResponse(error_document(data, error), status=400)

    try:
        command_request = build_command_request(data)
    except UsageError as e:
        logger.warning(f"不正なリクエスト: {e.message}")
        return JsonResponse(error_document(data, e.message, e.exit_code), status=400)
    except (TypeError, ValueError) as e:
        logger.warning(f"不正なリクエスト: {e}")
        return JsonResponse(error_document(data, str(e)), status=400)

    result = run(command_request)
    status = 200 if result.ok else 400
    return JsonResponse(result.document, status=status, json_dumps_params={'ensure_ascii': False})


@require_http_methods(["GET"])
def engine_config(request):
    """
    有効なエンジン設定を返す
    """
    return JsonResponse(InfinitiesConfig.get_engine_info())
