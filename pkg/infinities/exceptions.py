"""
infinities 例外定義

エンジン全体で使う例外階層。各クラスは CLI の終了コードを exit_code に持つ。
"""


class OmegalimError(Exception):
    """エンジンの全例外の基底クラス"""

    exit_code = 4

    def __init__(self, message=''):
        super().__init__(message)
        self.message = message

    def to_dict(self):
        """JSON 出力用の診断情報"""
        return {
            'error': self.__class__.__name__,
            'message': self.message,
            'exit_code': self.exit_code,
        }


# ==================================================
# 構文エラー（終了コード 2）
# ==================================================

class ParseError(OmegalimError):
    exit_code = 2

    def __init__(self, message, position):
        super().__init__(f"{message} (offset {position})")
        self.position = position

    def to_dict(self):
        data = super().to_dict()
        data['position'] = self.position
        return data


class ContextError(OmegalimError):
    """'n' / 'w' を誤った文脈で使った場合"""

    exit_code = 2


class UsageError(OmegalimError):
    """コマンドの引数・オプションの誤り"""

    exit_code = 2


# ==================================================
# 極限計算のエラー
# ==================================================

class Oscillatory(OmegalimError):
    exit_code = 3

    def __init__(self, message, known_terms=()):
        super().__init__(message)
        # 振動成分より上で確定した項
        self.known_terms = tuple(known_terms)


class Undefined(OmegalimError):
    exit_code = 4


class DivisionByZero(OmegalimError, ZeroDivisionError):
    exit_code = 4


# ==================================================
# プロトタイプ構築のエラー
# ==================================================

class PrototypeError(OmegalimError):
    exit_code = 4


class NotPurelyInfinite(PrototypeError):
    pass


class NonPositiveLeading(PrototypeError):
    pass


class FeedbackConditionViolated(PrototypeError):
    pass


class TowerArithmeticError(PrototypeError):
    pass


class ExpansionLimitExceeded(PrototypeError):
    pass


# ==================================================
# 数値オラクルのエラー
# ==================================================

class DomainError(OmegalimError):
    exit_code = 4


class TowerAtomNotEvaluable(DomainError):
    pass


class NoStableCandidate(OmegalimError):
    exit_code = 5
