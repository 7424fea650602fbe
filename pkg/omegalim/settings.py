"""
Django settings for omegalim project.

For more information on this file, see
https://docs.djangoproject.com/en/5.0/topics/settings/

For the full list of settings and their values, see
https://docs.djangoproject.com/en/5.0/ref/settings/
"""

from pathlib import Path

from decouple import Csv, config

# ==============================================================================
# CORE SETTINGS
# ==============================================================================

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent


# ==============================================================================
# SECURITY SETTINGS
# ==============================================================================

# SECURITY WARNING: keep the secret key used in production secret!
# 本番環境では環境変数から取得すること
SECRET_KEY = config(
    'DJANGO_SECRET_KEY',
    default='django-insecure-omegalim-local-development-key'
)

# SECURITY WARNING: don't run with debug turned on in production!
DEBUG = config('DJANGO_DEBUG', default=True, cast=bool)

# 本番環境では必ず制限すること
ALLOWED_HOSTS = config('DJANGO_ALLOWED_HOSTS', default='*', cast=Csv())

# セキュリティ設定（本番環境用）
if not DEBUG:
    SECURE_SSL_REDIRECT = True
    SECURE_CONTENT_TYPE_NOSNIFF = True
    X_FRAME_OPTIONS = 'DENY'
    SECURE_HSTS_SECONDS = 31536000  # 1年
    SECURE_HSTS_INCLUDE_SUBDOMAINS = True


# ==============================================================================
# APPLICATION DEFINITION
# ==============================================================================

INSTALLED_APPS = [
    # エンジンはデータベースもモデルも使わない
    'infinities.apps.InfinitiesConfig',
]

MIDDLEWARE = [
    'django.middleware.security.SecurityMiddleware',
    'django.middleware.common.CommonMiddleware',
    'django.middleware.csrf.CsrfViewMiddleware',
    'django.middleware.clickjacking.XFrameOptionsMiddleware',
]

ROOT_URLCONF = 'omegalim.urls'

WSGI_APPLICATION = 'omegalim.wsgi.application'


# ==============================================================================
# INTERNATIONALIZATION
# ==============================================================================

LANGUAGE_CODE = 'ja'

TIME_ZONE = 'Asia/Tokyo'

USE_I18N = True

USE_TZ = True


# ==============================================================================
# LOGGING
# ==============================================================================

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '[{levelname}] {asctime} {module} {process:d} {thread:d} {message}',
            'style': '{',
        },
        'simple': {
            'format': '[{levelname}] {asctime} {message}',
            'style': '{',
        },
    },
    'filters': {
        'require_debug_true': {
            '()': 'django.utils.log.RequireDebugTrue',
        },
    },
    'handlers': {
        'console': {
            'level': 'INFO',
            'filters': ['require_debug_true'],
            'class': 'logging.StreamHandler',
            'formatter': 'simple'
        },
        'file': {
            'level': 'INFO',
            'class': 'logging.handlers.RotatingFileHandler',
            'filename': BASE_DIR / 'logs' / 'omegalim.log',
            'maxBytes': 1024 * 1024 * 10,  # 10MB
            'backupCount': 5,
            'formatter': 'verbose',
        },
        'error_file': {
            'level': 'ERROR',
            'class': 'logging.handlers.RotatingFileHandler',
            'filename': BASE_DIR / 'logs' / 'error.log',
            'maxBytes': 1024 * 1024 * 10,  # 10MB
            'backupCount': 5,
            'formatter': 'verbose',
        },
    },
    'loggers': {
        'django': {
            'handlers': ['console', 'file'],
            'level': 'INFO',
            'propagate': False,
        },
        'django.request': {
            'handlers': ['error_file'],
            'level': 'ERROR',
            'propagate': False,
        },
        'infinities': {
            'handlers': ['console', 'file'],
            'level': 'DEBUG' if DEBUG else 'INFO',
            'propagate': False,
        },
    },
}

# logsディレクトリを作成
LOGS_DIR = BASE_DIR / 'logs'
LOGS_DIR.mkdir(exist_ok=True)


# ==============================================================================
# CUSTOM SETTINGS (極限計算エンジン)
# ==============================================================================

# CLI の --depth の既定値
OMEGALIM_DEPTH = config('OMEGALIM_DEPTH', default=4, cast=int)

OMEGALIM = {
    # 級数を内部で余分に計算する項数
    'GUARD_TERMS': config('OMEGALIM_GUARD_TERMS', default=2, cast=int),
    # 無限部を切り出す長除法の手数の上限
    'EXPANSION_STEP_LIMIT': config('OMEGALIM_EXPANSION_STEP_LIMIT', default=256, cast=int),
    # ln c, e^k, sin a, cos a を有理数に丸めるときの分母の上限
    'ROUNDING_DENOMINATOR': config('OMEGALIM_ROUNDING_DENOMINATOR', default=10 ** 12, cast=int),
    # 数値比較の評価点
    'SCHEDULE': [10 ** k for k in range(2, 10)],
    # 同じ高さの TowerValue を等しいとみなす相対誤差
    'EQUAL_TOLERANCE': 1e-12,
    # 先頭項推定で許す比の相対変動
    'DRIFT_TOLERANCE': config('OMEGALIM_DRIFT_TOLERANCE', default=1e-2, cast=float),
    # 先頭項推定に必要な標本数
    'MIN_SAMPLES': 8,
}


# ==============================================================================
# ENVIRONMENT VARIABLES VALIDATION
# ==============================================================================

# 本番環境で必要な環境変数のチェック
if not DEBUG:
    required_env_vars = ['DJANGO_SECRET_KEY', 'DJANGO_ALLOWED_HOSTS']
    missing_vars = [var for var in required_env_vars if not config(var, default='')]
    if missing_vars:
        raise EnvironmentError(
            f"本番環境では以下の環境変数が必須です: {', '.join(missing_vars)}"
        )
