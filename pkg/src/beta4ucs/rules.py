"""Rule data structures and the reference (scalar) matching semantics.

A rule is a conjunction of per-dimension fuzzy sets plus a consequent
class and bookkeeping statistics.  The vectorized training engine keeps
its own array-based population; this module is the plain-object reference
that the engine is tested against, and the form rules take when exported
or serialized.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .beta_math import Beta4Params, membership


@dataclass(frozen=True)
class TriangleSet:
    """Triangular fuzzy set with strictly ordered vertices a < b < c."""

    a: float
    b: float
    c: float

    def __post_init__(self):
        if not (self.a < self.b < self.c):
            raise ValueError("triangle vertices must satisfy a < b < c")


FuzzySet = Beta4Params | TriangleSet


def triangular_membership(x: float, tri: TriangleSet) -> float:
    """Piecewise-linear ramp, open at ``a``: 0 at the left vertex exactly."""
    if tri.a < x <= tri.b:
        return (x - tri.a) / (tri.b - tri.a)
    if tri.b < x <= tri.c:
        return (tri.c - x) / (tri.c - tri.b)
    return 0.0


def set_membership(fs: FuzzySet, x: float) -> float:
    if isinstance(fs, TriangleSet):
        return triangular_membership(x, fs)
    return membership(x, fs)


@dataclass
class Rule:
    """One IF-condition-THEN-class unit with fitness statistics.

    ``fitness`` is the penalized certainty factor
    ``(cm_max - sum of the other cm entries) / exp`` and stays in
    ``[-1, 1]``.  ``num`` counts identical micro-copies; ``cs`` is the
    correct-set-size estimate used by the deletion vote; ``ga_ts`` is the
    iteration of last GA participation.
    """

    condition: tuple[FuzzySet, ...]
    consequent: int
    cm: np.ndarray
    fitness: float = 0.0
    exp: float = 0.0
    num: int = 1
    cs: float = 1.0
    ga_ts: int = 0

    @property
    def n_dims(self) -> int:
        return len(self.condition)


def matching_degree(rule: Rule, x) -> float:
    """Product of per-dimension memberships; NaN inputs contribute 1."""
    if len(x) != rule.n_dims:
        raise ValueError("input dimensionality does not match rule condition")
    mu = 1.0
    for fs, xi in zip(rule.condition, x):
        if xi is None or (isinstance(xi, float) and math.isnan(xi)):
            continue
        mu *= set_membership(fs, float(xi))
        if mu == 0.0:
            break
    return mu


def recompute_fitness(cm: np.ndarray, exp: float, nu: float = 1.0) -> float:
    """Penalized certainty factor, with the optional exponent ``nu``."""
    if exp <= 0.0:
        return 0.0
    best = float(cm.max())
    raw = (2.0 * best - float(cm.sum())) / exp
    if nu == 1.0:
        return raw
    return math.copysign(abs(raw) ** nu, raw)


def update_on_match(rule: Rule, mu: float, correct: bool, class_idx: int,
                    nu: float = 1.0) -> Rule:
    """Reinforce a matched rule in place and return it.

    ``class_idx`` is the true class of the observed sample; its certainty
    grade grows only when ``correct`` (always the case when the caller
    passes the sample's class).  The consequent follows the argmax of the
    certainty grades.
    """
    if not 0.0 < mu <= 1.0:
        raise ValueError("matching degree must be in (0, 1]")
    rule.exp += mu
    if correct:
        rule.cm[class_idx] += mu
    rule.consequent = int(np.argmax(rule.cm))
    rule.fitness = recompute_fitness(rule.cm, rule.exp, nu)
    return rule


def make_rule(condition, consequent: int, n_classes: int, ga_ts: int = 0) -> Rule:
    return Rule(condition=tuple(condition), consequent=consequent,
                cm=np.zeros(n_classes), ga_ts=ga_ts)
