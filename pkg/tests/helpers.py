"""Shared fixtures-in-spirit: small distribution builders and oracles."""

from __future__ import annotations

import random
import string
from fractions import Fraction

from testlab import FiniteDistribution, p_value


def bernoulli(p, labels=("a", "b")) -> FiniteDistribution:
    p = Fraction(p) if not isinstance(p, float) else p
    q = (1 - p) if isinstance(p, Fraction) else 1.0 - p
    return FiniteDistribution(labels, (p, q))


def random_rational_dist(
    rng: random.Random, k: int, max_weight: int = 12, allow_zero: bool = False
) -> FiniteDistribution:
    """Random exact distribution over the first k letters."""
    low = 0 if allow_zero else 1
    weights = [rng.randint(low, max_weight) for _ in range(k)]
    if sum(weights) == 0:
        weights[rng.randrange(k)] = 1
    total = sum(weights)
    labels = tuple(string.ascii_letters[:k])
    return FiniteDistribution(labels, tuple(Fraction(w, total) for w in weights))


def random_float_dist(rng: random.Random, k: int) -> FiniteDistribution:
    weights = [rng.random() + 1e-3 for _ in range(k)]
    total = sum(weights)
    labels = tuple(string.ascii_letters[:k])
    return FiniteDistribution(labels, tuple(w / total for w in weights))


def total_variation(p: FiniteDistribution, q: FiniteDistribution) -> float:
    return 0.5 * sum(
        abs(float(a) - float(b)) for a, b in zip(p.probs, q.probs)
    )


def super_uniformity_holds(d: FiniteDistribution, direction) -> bool:
    """P_H(p <= u) <= u for all u, checked by exhaustive summation.

    The p-value takes finitely many values, so checking at each achieved
    value covers every u in [0, 1].
    """
    pvals = [p_value(d, x, direction).p for x in d.alphabet]
    for u in sorted(set(pvals)):
        mass = sum(prob for prob, pv in zip(d.probs, pvals) if pv <= u)
        if mass > u:
            return False
    return True
