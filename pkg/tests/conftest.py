import random

import numpy as np
import pytest

from contile.pqtree import PQTree


def random_reduced_tree(rng: random.Random, n: int, min_sets: int = 1, max_sets: int = 3) -> PQTree:
    """Tree built from random successful reductions (failed ones are skipped)."""
    tree = PQTree.universal(n)
    want = rng.randint(min_sets, max_sets)
    done = 0
    for _ in range(12):
        if done >= want:
            break
        s = frozenset(rng.sample(range(n), rng.randint(2, n)))
        if tree.reduce(s):
            done += 1
    return tree


def compatible_and_border_sets(tree: PQTree):
    """All compatible sets (incl. empty) and border-compatible sets, from the
    enumerated order set.  Exponential; test scale only."""
    comp = {frozenset()}
    bord = set()
    for o in tree.enumerate_orders():
        n = len(o)
        for i in range(n):
            for j in range(i + 1, n + 1):
                comp.add(frozenset(o[i:j]))
        for j in range(1, n + 1):
            bord.add(frozenset(o[:j]))
            bord.add(frozenset(o[-j:]))
    return comp, bord


def random_binary(rng: random.Random, n: int, m: int, density: float = 0.4) -> np.ndarray:
    return np.array([[rng.random() < density for _ in range(m)] for _ in range(n)])


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)
