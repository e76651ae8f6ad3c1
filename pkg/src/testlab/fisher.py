"""Single-hypothesis significance testing: directed tail p-values over
ordered finite alphabets, exact binomial tails, and the conventional
significance levels.

Tails are inclusive of the observed value, and rational inputs give exact
rational p-values, so astronomically small tails keep their exact
numerator and denominator instead of a rounded double.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .dist import FiniteDistribution, Probability, as_probability, log_probability
from .errors import InputError, UnorderedAlphabetError


class TailDirection(Enum):
    GREATER_EQUAL = "ge"
    LESS_EQUAL = "le"
    TWO_SIDED_ABS = "abs"

    @classmethod
    def parse(cls, text: str) -> "TailDirection":
        try:
            return cls(text.strip().lower())
        except ValueError:
            raise InputError(
                f"unknown tail direction {text!r}; expected ge, le or abs"
            ) from None


#: Conventional significance levels, strongest last.
CONVENTIONAL_LEVELS = (0.05, 0.01, 0.001)


@dataclass(frozen=True)
class PValueReport:
    """A directed tail probability together with how it was built.

    The observed value always sits inside its own tail, so
    0 <= point_prob <= p <= 1.
    """

    p: Probability
    direction: TailDirection
    point_prob: Probability
    n_extreme: int

    def __post_init__(self):
        if not 0 <= self.point_prob <= self.p <= 1:
            raise InputError(
                f"inconsistent report: point={self.point_prob!r} p={self.p!r}"
            )

    def significant(self, level: float = 0.05) -> bool:
        return significance_verdict(self.p, level)


def p_value(d: FiniteDistribution, x, direction: TailDirection) -> PValueReport:
    """Probability of the observed symbol and everything more extreme.

    GREATER_EQUAL / LESS_EQUAL read extremeness off the alphabet's declared
    order; TWO_SIDED_ABS needs signed numeric labels and sums P(|X| >= |x|).
    Exact Fractions in, exact Fraction out.
    """
    pos = d.index(x)
    if direction is TailDirection.GREATER_EQUAL:
        tail = range(pos, d.size)
    elif direction is TailDirection.LESS_EQUAL:
        tail = range(0, pos + 1)
    elif direction is TailDirection.TWO_SIDED_ABS:
        try:
            cut = abs(d.alphabet[pos])
            tail = [i for i, y in enumerate(d.alphabet) if abs(y) >= cut]
        except TypeError:
            raise UnorderedAlphabetError(
                "two-sided tails need signed numeric labels"
            ) from None
    else:  # pragma: no cover
        raise InputError(f"unknown direction {direction!r}")

    p = sum(d.probs[i] for i in tail)
    if not d.is_exact:
        p = min(float(p), 1.0)
    return PValueReport(
        p=p, direction=direction, point_prob=d.prob(x), n_extreme=len(tail)
    )


def binomial_tail(
    n: int,
    k: int,
    theta,
    direction: TailDirection = TailDirection.GREATER_EQUAL,
) -> PValueReport:
    """Exact rational tail of Binomial(n, theta) at the observed count k.

    theta may be a Fraction, an int, a decimal/fraction string, or a float
    (floats are taken at their exact binary value). For theta = 1/2 the
    resulting denominator divides 2**n.
    """
    if n < 1:
        raise InputError(f"n must be positive, got {n}")
    if not 0 <= k <= n:
        raise InputError(f"k must be in [0, {n}], got {k}")
    theta = as_probability(theta)
    if isinstance(theta, float):
        theta = Fraction(theta)
    if not 0 <= theta <= 1:
        raise InputError(f"theta must be in [0, 1], got {theta}")
    one = Fraction(1)
    probs = tuple(
        math.comb(n, j) * theta**j * (one - theta) ** (n - j) for j in range(n + 1)
    )
    counts = FiniteDistribution(tuple(range(n + 1)), probs)
    return p_value(counts, k, direction)


def significance_verdict(p, level: float = 0.05) -> bool:
    """True iff p <= level. The boundary counts as significant."""
    if not 0 < level < 1:
        raise InputError(f"level must be in (0, 1), got {level!r}")
    return p <= level


def identical_point_prob_pair():
    """Two four-point distributions with the same probability 1/50 at the
    observed value but lower-tail p-values of 3/100 and 42/100.

    Returns (sharp_tail, heavy_tail, observed_symbol); a one-sided test at
    5% rejects the first hypothesis and is nowhere near rejecting the
    second, although the observed value itself is equally likely under
    both.
    """
    alphabet = (1, 2, 3, 4)
    sharp = FiniteDistribution(
        alphabet,
        (Fraction(1, 100), Fraction(1, 50), Fraction(57, 100), Fraction(2, 5)),
    )
    heavy = FiniteDistribution(
        alphabet,
        (Fraction(2, 5), Fraction(1, 50), Fraction(29, 100), Fraction(29, 100)),
    )
    return sharp, heavy, 2


def float_with_exponent(p: Probability) -> float:
    """Render a possibly huge-denominator rational as a float, going
    through log space when direct conversion would overflow."""
    if isinstance(p, float):
        return p
    try:
        return float(p)
    except OverflowError:
        if p == 0:
            return 0.0
        return math.exp(log_probability(p))
