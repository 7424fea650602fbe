import logging

from django.apps import AppConfig

logger = logging.getLogger(__name__)


class InfinitiesConfig(AppConfig):
    name = 'infinities'
    verbose_name = 'ω の極限とアルキメデス類'

    def ready(self):
        """
        アプリケーション起動時に一度だけ実行される初期化処理
        """
        from .conf import effective_config

        config = effective_config()
        logger.debug(f"{self.verbose_name} の設定: {config}")

    @classmethod
    def get_engine_info(cls):
        """
        エンジン設定を辞書形式で取得する

        Returns:
            設定名と値の辞書
        """
        from .conf import effective_config

        config = effective_config()
        config['SCHEDULE'] = [str(point) for point in config['SCHEDULE']]
        return config
