"""Norm-based upper bounds on the quantum success of linear games.

For a bipartition S | S^c of the players and a nontrivial character
index k, the game matrix is

    Phi_k^S[x_S, x_{S^c}] = p(x) * chi_k(f(x)),

rows and columns indexed lexicographically by the question tuples on each
side.  Quantum strategies obey

    omega <= min_S (1/|G|) * (1 + sqrt(Q_1 ... Q_n) * sum_{k != e} ||Phi_k^S||)

with ||.|| the largest singular value, so the right-hand side minimized
over the 2^(n-1) - 1 inequivalent bipartitions is a certified upper
bound on every quantum (hence every classical) strategy.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .games import _prime_power
from .linalg import max_singular_value


def _validate_partition(game, s_players):
    try:
        s = tuple(sorted(set(int(i) for i in s_players)))
    except TypeError:
        raise ValidationError(f"bad partition {s_players!r}")
    if not s or len(s) >= game.players:
        raise ValidationError(
            f"partition must be a nonempty proper subset of the players, "
            f"got {s_players!r}")
    if any(not 0 <= i < game.players for i in s):
        raise ValidationError(
            f"partition {s_players!r} names players outside 0..{game.players - 1}")
    return s


def game_matrix(game, s_players, k):
    """The matrix Phi_k^S of a game, for a side S of a bipartition and a
    nontrivial character index k."""
    s = _validate_partition(game, s_players)
    k = game.group.coerce(k)
    if k == game.group.identity:
        raise ValidationError(
            "the trivial character carries no game information; use k != e")
    comp = tuple(i for i in range(game.players) if i not in s)

    grid = np.array(game.inputs(), dtype=np.intp)
    def side_index(side):
        idx = np.zeros(len(grid), dtype=np.intp)
        for i in side:
            idx = idx * game.question_counts[i] + grid[:, i]
        return idx

    rows = side_index(s)
    cols = side_index(comp)
    n_rows = math.prod(game.question_counts[i] for i in s)
    n_cols = math.prod(game.question_counts[i] for i in comp)

    chi = game.group.character_table()
    values = game.probabilities_float() * chi[game.group.index(k), game.predicate_indices()]
    out = np.zeros((n_rows, n_cols), dtype=complex)
    out[rows, cols] = values
    return out


def _nontrivial_elements(group):
    return [a for a in group.elements() if a != group.identity]


def quantum_bound_partition(game, s_players, *, _norms=None):
    """The norm bound for one bipartition (raw, not clamped)."""
    s = _validate_partition(game, s_players)
    group = game.group
    if _norms is None:
        _norms = {k: max_singular_value(game_matrix(game, s, k))
                  for k in _nontrivial_elements(group)}
    scale = math.sqrt(math.prod(game.question_counts))
    return (1.0 + scale * sum(_norms.values())) / group.size


@dataclass(frozen=True)
class PartitionBound:
    """Bound data for one bipartition: S, per-character norms, raw value,
    and the value clamped into [0, 1]."""

    players: tuple
    norms: dict
    raw: float
    value: float


@dataclass(frozen=True)
class BoundReport:
    """Per-partition norm bounds and their minimum."""

    partitions: tuple
    raw_bound: float
    bound: float
    best_partition: tuple

    def partition(self, s_players):
        s = tuple(sorted(s_players))
        for p in self.partitions:
            if p.players == s:
                return p
        raise KeyError(f"no partition {s_players!r} in this report")


def _partitions_containing_first_player(n):
    """One representative per unordered bipartition: every proper subset
    containing player 0."""
    out = []
    for mask in range(1, 2**n - 1):
        if mask & 1:
            out.append(tuple(i for i in range(n) if mask >> i & 1))
    return out


def quantum_bound(game, threads=1):
    """Norm bound minimized over all inequivalent bipartitions.

    ``threads`` > 1 evaluates the independent (partition, character) norms
    on a thread pool; results are reduced in a fixed order, so the report
    does not depend on the thread count.
    """
    threads = int(threads)
    if threads < 1:
        raise ValidationError(f"threads must be >= 1, got {threads}")
    group = game.group
    subsets = _partitions_containing_first_player(game.players)
    ks = _nontrivial_elements(group)
    jobs = [(s, k) for s in subsets for k in ks]

    def norm(job):
        s, k = job
        return max_singular_value(game_matrix(game, s, k))

    if threads == 1:
        results = [norm(job) for job in jobs]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(norm, jobs))

    norms = {}
    for (s, k), sigma in zip(jobs, results):
        norms.setdefault(s, {})[k] = sigma

    partitions = []
    for s in subsets:
        raw = quantum_bound_partition(game, s, _norms=norms[s])
        partitions.append(PartitionBound(
            players=s, norms=norms[s], raw=raw, value=min(raw, 1.0)))

    best = min(partitions, key=lambda p: p.raw)
    return BoundReport(
        partitions=tuple(partitions),
        raw_bound=best.raw,
        bound=min(best.raw, 1.0),
        best_partition=best.players)


def chsh_bound_analytic(players, outcomes):
    """Closed-form bound 1/d + (d-1)/(d*sqrt(d)) for the quadratic games;
    it does not depend on the number of players."""
    players = int(players)
    if players < 2:
        raise ValidationError("the quadratic game needs at least 2 players")
    d = int(outcomes)
    _prime_power(d)  # validates d
    return 1.0 / d + (d - 1) / (d * math.sqrt(d))
