"""
世代ごとのアルキメデス類の順序表

各世代までのプロトタイプを、パラメータをすべて 1 にした形で小さい順に並べたもの。
同じ類になる隣接項目は 1 つにまとめる。
"""

import logging
from dataclasses import dataclass

from .prototypes import Ordering, compare

logger = logging.getLogger(__name__)

# ln(ω) < ω^α < exp(ω)
GENERATION_1 = (
    'ln(w)',
    'w',
    'exp(w)',
)

# exp(αω) と exp(ω^α) は α = 1 で同じ類になる
GENERATION_2 = (
    'ln(ln(w))',
    'ln(w)',
    'w/ln(w)',
    'w',
    'w*ln(w)',
    'exp(w)/w',
    'exp(w)/ln(w)',
    'exp(1*w)',
    'exp(w^1)',
    'exp(w)*ln(w)',
    'exp(w)*w',
    'exp(exp(w))',
)

GENERATION_3 = (
    'ln(ln(ln(w)))',
    'ln(ln(w))',
    'ln(w)/ln(ln(w))',
    'ln(w)',
    'ln(w)*ln(ln(w))',

    'w/ln(w)/ln(ln(w))',
    'w/ln(w)',
    'w*ln(ln(w))/ln(w)',
    'w/ln(ln(w))',
    'exp(ln(w))',
    'w*ln(ln(w))',
    'w*ln(w)/ln(ln(w))',
    'w*ln(w)',
    'w*ln(w)*ln(ln(w))',

    'exp(w/ln(w))',

    'exp(w)/w/ln(w)',
    'exp(w)/w/ln(ln(w))',
    'exp(w)/w',
    'exp(w)*ln(ln(w))/w',
    'exp(w)*ln(w)/w',
    'exp(w)/ln(w)/ln(ln(w))',
    'exp(w)/ln(w)',
    'exp(w)*ln(ln(w))/ln(w)',
    'exp(w)/ln(ln(w))',
    'exp(w)',
    'exp(w)*ln(ln(w))',
    'exp(w)*ln(w)/ln(ln(w))',
    'exp(w)*ln(w)',
    'exp(w)*ln(w)*ln(ln(w))',
    'exp(w)*w/ln(w)',
    'exp(w)*w/ln(ln(w))',
    'exp(w)*w',
    'exp(w)*w*ln(ln(w))',
    'exp(w)*w*ln(w)',

    'exp(w*ln(w))',
    'exp(exp(w)/w)',
    'exp(exp(w)/ln(w))',

    'exp(exp(w)-w)/w',
    'exp(exp(w)-w)/ln(w)',
    'exp(exp(w)-w)',
    'exp(exp(w)-w)*ln(w)',
    'exp(exp(w)-w)*w',

    'exp(exp(w))/w/ln(w)',
    'exp(exp(w))/w',
    'exp(exp(w))*ln(w)/w',
    'exp(exp(w))/ln(w)',
    'exp(exp(w))/ln(ln(w))',
    'exp(exp(w))',
    'exp(exp(w))*ln(ln(w))',
    'exp(exp(w))*ln(w)',
    'exp(exp(w))*w/ln(w)',
    'exp(exp(w))*w',
    'exp(exp(w))*w*ln(w)',

    'exp(exp(w)+w)/w',
    'exp(exp(w)+w)/ln(w)',
    'exp(exp(w)+w)',
    'exp(exp(w)+w)*ln(w)',
    'exp(exp(w)+w)*w',
)

GENERATIONS = {1: GENERATION_1, 2: GENERATION_2, 3: GENERATION_3}


@dataclass(frozen=True)
class ChainEntry:
    """順序表の 1 項目（同じ類の表記はまとめる）"""

    proto: object
    spellings: tuple

    def to_dict(self):
        return {'proto': str(self.proto), 'spellings': list(self.spellings)}


def ordering_chain(generation):
    """
    世代 generation までの順序表

    Args:
        generation: 1, 2, 3 のいずれか

    Returns:
        ChainEntry のタプル（小さい順、同じ類の隣接項目はまとめる）
    """
    from .parser import parse_prototype
    if generation not in GENERATIONS:
        raise ValueError(f"世代は 1, 2, 3 のいずれかです: {generation}")
    entries = []
    for spelling in GENERATIONS[generation]:
        proto = parse_prototype(spelling)
        if entries and compare(entries[-1].proto, proto) is Ordering.EQUAL:
            previous = entries.pop()
            entries.append(ChainEntry(previous.proto, previous.spellings + (spelling,)))
        else:
            entries.append(ChainEntry(proto, (spelling,)))
    logger.debug(f"第 {generation} 世代: {len(GENERATIONS[generation])} 項目 -> {len(entries)} 類")
    return tuple(entries)


def chain_violations(entries):
    """隣接する項目で小さい順になっていない位置を返す"""
    return [
        index for index in range(len(entries) - 1)
        if compare(entries[index].proto, entries[index + 1].proto) is not Ordering.LESS
    ]
