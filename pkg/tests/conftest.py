import random

import pytest

from laminatron.curves import Curve, MappingClassWord
from laminatron.exactnum import make_esequence
from laminatron.family import generate_s05
from laminatron.surface import S05


@pytest.fixture(scope="session")
def sides():
    return [Curve.side(S05, i) for i in range(5)]


@pytest.fixture(scope="session")
def small_seq():
    """Doubling powers, nine curves: the workhorse prefix for exact checks."""
    eseq = make_esequence(2, 1, 12, "geometric")
    return generate_s05(eseq, 9)


@pytest.fixture(scope="session")
def small_table(small_seq):
    return small_seq.intersection_table(len(small_seq.curves) - 1)


def random_mapping_word(rng: random.Random, max_len: int = 6) -> MappingClassWord:
    mc = MappingClassWord([], S05)
    names = ["r", "s1", "s2", "s3", "s4"]
    for _ in range(rng.randint(1, max_len)):
        if rng.random() < 0.6:
            g = MappingClassWord.named(S05, rng.choice(names))
            if rng.random() < 0.5:
                g = g.inverse()
            mc = mc * g
        else:
            blk = rng.choice([(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)])
            mc = mc * MappingClassWord.block_twist(S05, blk, rng.randint(-3, 3))
    return mc
