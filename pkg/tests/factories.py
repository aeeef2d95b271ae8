"""测试用的小型偏序与随机生成策略"""

import numpy as np
from hypothesis import strategies as st

from dposet.dposet import DPoset
from order.poset import FinPoset, build_poset


@st.composite
def random_posets(draw, max_size: int = 7) -> FinPoset:
    # 只取下标 i < j 的关系，闭包后必为偏序
    n = draw(st.integers(min_value=1, max_value=max_size))
    names = [f"e{i}" for i in range(n)]
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    chosen = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    relations = [(names[i], names[j]) for (i, j), on in zip(pairs, chosen) if on]
    return build_poset(names, relations)


def chain_poset(n: int) -> FinPoset:
    names = [str(k) for k in range(1, n + 1)]
    return build_poset(names, list(zip(names, names[1:])))


def finite_dposet(leq_flat, n: int) -> DPoset:
    points = [f"p{i}" for i in range(n)]
    return DPoset(FinPoset(points, np.array(leq_flat, dtype=bool).reshape(n, n)))
