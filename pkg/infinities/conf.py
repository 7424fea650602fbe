"""
エンジン設定

settings.OMEGALIM の値を読み、未設定の項目はデフォルト値で補う。
Django の設定が無い状態（ライブラリとして直接 import した場合）でも動作する。
"""

from django.conf import settings

DEFAULTS = {
    'GUARD_TERMS': 2,
    'EXPANSION_STEP_LIMIT': 256,
    'ROUNDING_DENOMINATOR': 10 ** 12,
    'SCHEDULE': [10 ** k for k in range(2, 10)],
    'EQUAL_TOLERANCE': 1e-12,
    'DRIFT_TOLERANCE': 1e-2,
    'MIN_SAMPLES': 8,
}

DEFAULT_DEPTH = 4


def engine_setting(name):
    """
    エンジン設定値を取得する

    Args:
        name: DEFAULTS のキー

    Returns:
        settings.OMEGALIM[name]、未設定ならデフォルト値
    """
    if name not in DEFAULTS:
        raise KeyError(f"未知のエンジン設定です: {name}")
    if settings.configured:
        overrides = getattr(settings, 'OMEGALIM', None) or {}
        if name in overrides:
            return overrides[name]
    return DEFAULTS[name]


def default_depth():
    if settings.configured:
        return getattr(settings, 'OMEGALIM_DEPTH', DEFAULT_DEPTH)
    return DEFAULT_DEPTH


def effective_config():
    """現在有効なエンジン設定を辞書で返す"""
    config = {name: engine_setting(name) for name in DEFAULTS}
    config['DEPTH'] = default_depth()
    return config
