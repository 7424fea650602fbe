"""
infinities app URL Configuration

極限計算 API のURLルーティング設定
"""

from django.urls import path
from . import views

app_name = 'infinities'

urlpatterns = [
    # ==================================================
    # コマンド実行
    # ==================================================

    # CLI と同じコマンドを JSON で実行
    path(
        'run/',
        views.run_command,
        name='run'
    ),

    # ==================================================
    # 設定
    # ==================================================

    # 有効なエンジン設定
    path(
        'config/',
        views.engine_config,
        name='config'
    ),
]
