"""
infinities のテスト

hypothesis のプロファイル:
    default     普段の実行用（性質ごとに数百例）
    acceptance  受け入れ確認用（OMEGALIM_FUZZ_PROFILE=acceptance で選ぶ）
"""

from decouple import config
from hypothesis import HealthCheck, settings

settings.register_profile(
    'default',
    max_examples=200,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile(
    'acceptance',
    max_examples=10_000,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much],
)
settings.load_profile(config('OMEGALIM_FUZZ_PROFILE', default='default'))
