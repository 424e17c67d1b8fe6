import random
from fractions import Fraction

import pytest

from tstarh3 import liealg, linalg, metric


@pytest.fixture(scope="session")
def alg():
    return liealg.tstar_h3()


@pytest.fixture()
def rng():
    return random.Random(20260809)


def push(g: metric.MetricMatrix, f: liealg.Automorphism) -> metric.MetricMatrix:
    return metric.MetricMatrix(linalg.congruence(g.entries, f.matrix), g.backend)


def diag_metric(*vals) -> metric.MetricMatrix:
    return metric.metric_from_rows(
        [[vals[i] if i == j else 0 for j in range(6)] for i in range(6)])


def rand_fraction(rng, lo=-4, hi=4, den=3):
    return Fraction(rng.randint(lo * den, hi * den), den)
