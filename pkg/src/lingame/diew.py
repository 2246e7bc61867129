"""Device-independent witnesses of genuine tripartite entanglement.

A three-player behavior is biseparable for the split where player X plays
alone if it mixes strategies in which X is uncorrelated with the other
two.  The best such behavior obeys

    omega_B^X = max_c (1/|G|) (1 + sqrt(Q_i Q_j) sum_{k != e} ||Phi_k^B(c)||)

where c assigns one fixed answer to each of X's questions and

    Phi_k^B(c)[x_i, x_j] = sum_{x_X} p(x) chi_k(f(x) - c(x_X)).

Observed success above omega_B = max over the three splits certifies
genuine tripartite entanglement from statistics alone.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from typing import Optional

from .errors import NoThresholdError, ResourceLimitError, ValidationError
from .linalg import max_singular_value
from .tolerances import BISEPARABLE_ASSIGNMENT_CAP, WITNESS_MARGIN

import numpy as np


def _check_tripartite(game):
    if game.players != 3:
        raise ValidationError(
            f"biseparable analysis needs exactly 3 players, got {game.players}")


def biseparable_matrix(game, lone, k, assignment):
    """Game matrix of the two joint players once the lone player's answers
    are fixed by ``assignment`` (one group element per lone question)."""
    _check_tripartite(game)
    if lone not in (0, 1, 2):
        raise ValidationError(f"lone player must be 0, 1 or 2, got {lone!r}")
    k = game.group.coerce(k)
    if k == game.group.identity:
        raise ValidationError("the trivial character gives no constraint")
    assignment = tuple(game.group.coerce(a) for a in assignment)
    if len(assignment) != game.question_counts[lone]:
        raise ValidationError(
            f"assignment has {len(assignment)} entries, lone player has "
            f"{game.question_counts[lone]} questions")

    pair = tuple(i for i in range(3) if i != lone)
    rows, cols = game.question_counts[pair[0]], game.question_counts[pair[1]]
    out = np.zeros((rows, cols), dtype=complex)
    group = game.group
    for x in game.inputs():
        shifted = group.sub(game.predicate_value(x), assignment[x[lone]])
        out[x[pair[0]], x[pair[1]]] += (float(game.probability(x))
                                        * group.character(k, shifted))
    return out


@dataclass(frozen=True)
class BiseparablePartition:
    """Bound for one lone-player split."""

    lone: int
    assignment: tuple
    norms: dict
    raw: float
    value: float


@dataclass(frozen=True)
class BiseparableReport:
    partitions: tuple
    raw_bound: float
    bound: float
    best_lone: int

    def partition(self, lone):
        for part in self.partitions:
            if part.lone == lone:
                return part
        raise KeyError(lone)


def biseparable_bound_partition(game, lone, cap=BISEPARABLE_ASSIGNMENT_CAP):
    """Maximize the split bound over all answer assignments for the lone
    player; ties keep the lexicographically first assignment."""
    _check_tripartite(game)
    if lone not in (0, 1, 2):
        raise ValidationError(f"lone player must be 0, 1 or 2, got {lone!r}")
    g = game.group.size
    count = g**game.question_counts[lone]
    if count > cap:
        raise ResourceLimitError(
            f"{count} lone-player assignments exceed the cap of {cap}",
            required=count, cap=cap)

    pair = tuple(i for i in range(3) if i != lone)
    factor = math.sqrt(game.question_counts[pair[0]]
                       * game.question_counts[pair[1]])
    best = None
    for assignment in itertools.product(game.group.elements(),
                                        repeat=game.question_counts[lone]):
        norms = {}
        total = 0.0
        for k in game.group.elements():
            if k == game.group.identity:
                continue
            norms[k] = max_singular_value(
                biseparable_matrix(game, lone, k, assignment))
            total += norms[k]
        raw = (1.0 + factor * total) / g
        if best is None or raw > best.raw:
            best = BiseparablePartition(lone=lone, assignment=assignment,
                                        norms=norms, raw=raw,
                                        value=min(raw, 1.0))
    return best


def biseparable_bound(game, cap=BISEPARABLE_ASSIGNMENT_CAP):
    """Largest winning probability of biseparable (hybrid) strategies,
    maximized over the three lone-player splits."""
    _check_tripartite(game)
    partitions = tuple(biseparable_bound_partition(game, lone, cap=cap)
                       for lone in range(3))
    best = max(partitions, key=lambda part: part.raw)
    return BiseparableReport(partitions=partitions, raw_bound=best.raw,
                             bound=min(best.raw, 1.0), best_lone=best.lone)


class Verdict(enum.Enum):
    GENUINE_TRIPARTITE_ENTANGLEMENT = "genuine tripartite entanglement"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class WitnessResult:
    verdict: Verdict
    observed: float
    bound: float
    gap: float
    report: BiseparableReport


def witness_verdict(game, observed, margin=WITNESS_MARGIN,
                    report: Optional[BiseparableReport] = None):
    """Compare an observed winning probability against the biseparable
    bound.  Certification requires clearing the bound by ``margin``."""
    observed = float(observed)
    if not 0.0 <= observed <= 1.0 + 1e-12:
        raise ValidationError(
            f"observed success must be a probability, got {observed}")
    if report is None:
        report = biseparable_bound(game)
    gap = observed - report.bound
    if gap > margin:
        verdict = Verdict.GENUINE_TRIPARTITE_ENTANGLEMENT
    else:
        verdict = Verdict.INCONCLUSIVE
    return WitnessResult(verdict=verdict, observed=observed,
                         bound=report.bound, gap=gap, report=report)


def visibility_threshold(game, strategy, bound=None):
    """Least visibility V at which mixing a strategy's state with white
    noise still beats the biseparable bound.

    For rank-one projective strategies the noisy success is affine in V
    and equals 1/|G| at V = 0, so the threshold solving
    V * omega_psi + (1 - V)/|G| = omega_B is
    (omega_B - 1/|G|) / (omega_psi - 1/|G|), clamped to [0, 1].

    ``strategy`` may also be the noiseless success probability itself,
    for thresholds against an externally evaluated value.
    """
    if isinstance(strategy, (int, float)):
        ideal = float(strategy)
    else:
        from .games import success_probability
        from .strategies import strategy_behavior
        if not strategy.rank_one:
            raise ValidationError(
                "the affine noise formula needs rank-one projectors")
        ideal = success_probability(game, strategy_behavior(strategy, game))
    base = 1.0 / game.group.size
    if bound is None:
        bound = biseparable_bound(game).bound
    bound = float(bound)
    if ideal <= base + 1e-12:
        raise NoThresholdError(
            f"ideal success {ideal} does not exceed the random baseline {base}")
    v = (bound - base) / (ideal - base)
    return min(max(v, 0.0), 1.0)
