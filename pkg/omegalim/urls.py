"""
omegalim URL Configuration

メインのURLルーティング設定
"""

from django.urls import path, include

urlpatterns = [
    # ==================================================
    # アプリケーションのURL
    # ==================================================
    path('api/', include('infinities.urls')),
]
