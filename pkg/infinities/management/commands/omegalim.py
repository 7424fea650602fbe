"""
python manage.py omegalim <command> ...

limit / lead / compare / table / eval / fit / check をサブコマンドとして持つ。
（Django 組み込みの check と衝突しないよう 1 つの管理コマンドにまとめている）
"""

import logging

from django.core.management.base import BaseCommand, CommandError

from infinities.commands import CommandRequest, run
from infinities.conf import default_depth
from infinities.exceptions import UsageError

logger = logging.getLogger(__name__)


def _csv(value):
    return [item.strip() for item in value.split(',') if item.strip()]


class Command(BaseCommand):
    help = 'ω を含む極限・アルキメデス類の計算'

    def add_arguments(self, parser):
        subparsers = parser.add_subparsers(dest='command', required=True)

        limit = subparsers.add_parser('limit', help='数列式の極限を depth 項まで求める')
        limit.add_argument('expr')

        lead = subparsers.add_parser('lead', help='先頭項の極限')
        lead.add_argument('expr')

        compare = subparsers.add_parser('compare', help='2 つのプロトタイプ（または極限）の大小')
        compare.add_argument('a')
        compare.add_argument('b')

        table = subparsers.add_parser('table', help='世代ごとの順序表')
        table.add_argument('--generation', type=int, choices=(1, 2, 3), required=True)

        evaluate = subparsers.add_parser('eval', help='有限の n での数値評価')
        evaluate.add_argument('expr')
        evaluate.add_argument('--at', required=True)

        fit = subparsers.add_parser('fit', help='標本ファイルから先頭項を推定する')
        fit.add_argument('file')
        fit.add_argument('--candidates', type=_csv)

        check = subparsers.add_parser('check', help='記号的な比較を数値で検算する')
        check.add_argument('a')
        check.add_argument('b')
        check.add_argument('--schedule', type=_csv)

        for sub in (limit, lead, compare, table, evaluate, fit, check):
            sub.add_argument('--depth', type=int, default=None,
                             help=f'展開の項数（既定 {default_depth()}、環境変数 OMEGALIM_DEPTH）')
            sub.add_argument('--output', choices=('text', 'json'), default='text')
            sub.add_argument('--json', dest='output', action='store_const', const='json')
            sub.add_argument('--unicode', action='store_true', help='w を ω で表示する')
            sub.add_argument('--precision', type=int, default=None,
                             help='無理数定数を丸めるときの分母の上限')

    def handle(self, *args, **options):
        command = options['command']
        positional = {
            'limit': ('expr',), 'lead': ('expr',), 'compare': ('a', 'b'), 'table': (),
            'eval': ('expr',), 'fit': ('file',), 'check': ('a', 'b'),
        }[command]
        try:
            request = CommandRequest(
                command=command,
                args=[options[name] for name in positional],
                depth=options.get('depth'),
                output=options.get('output') or 'text',
                unicode=options.get('unicode', False),
                generation=options.get('generation'),
                at=options.get('at'),
                candidates=options.get('candidates'),
                schedule=options.get('schedule'),
                precision=options.get('precision'),
            )
        except UsageError as exc:
            raise CommandError(exc.message, returncode=exc.exit_code) from exc

        result = run(request)
        if result.ok or request.output == 'json':
            self.stdout.write(result.render())
        if not result.ok:
            message = result.document['diagnostics']['message']
            raise CommandError(message, returncode=result.exit_code)
