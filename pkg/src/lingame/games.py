"""Linear games: each of n players answers with an element of a finite
Abelian group G, and the team wins on question tuple x when the answers
sum to f(x).

A game is the data (question counts, group, distribution p over question
tuples, predicate f).  Promise games keep the full question grid and put
probability zero on excluded rows, so matrix code never special-cases
them.  Probabilities are exact rationals until numeric matrix building.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .algebra import AbelianGroup, FiniteField
from .errors import GameFormatError, ValidationError
from .tolerances import BEHAVIOR_ROW_TOL, DISTRIBUTION_SUM_TOL


def _as_fraction(value, where="probability"):
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as e:
            raise ValidationError(f"bad rational {where}: {value!r} ({e})") from None
    if isinstance(value, float):
        return Fraction(value)
    raise ValidationError(f"bad {where}: {value!r}")


class LinearGame:
    """An n-player linear game over a finite Abelian group."""

    def __init__(self, group, question_counts, distribution, predicate,
                 field=None):
        if not isinstance(group, AbelianGroup):
            raise ValidationError("group must be an AbelianGroup")
        question_counts = tuple(int(q) for q in question_counts)
        if len(question_counts) < 2:
            raise ValidationError("a game needs at least two players")
        if any(q < 1 for q in question_counts):
            raise ValidationError("every player needs at least one question")
        self.group = group
        self.question_counts = question_counts
        self.field = field
        self._inputs = list(itertools.product(*(range(q) for q in question_counts)))
        self._input_index = {x: i for i, x in enumerate(self._inputs)}

        if len(distribution) != len(self._inputs):
            raise ValidationError(
                f"distribution covers {len(distribution)} inputs, grid has "
                f"{len(self._inputs)}")
        dist = [_as_fraction(p) for p in distribution]
        for x, p in zip(self._inputs, dist):
            if p < 0:
                raise ValidationError(f"negative probability {p} at input {x}")
        total = sum(dist)
        if abs(total - 1) > DISTRIBUTION_SUM_TOL:
            raise ValidationError(
                f"distribution sums to {float(total)!r}, not 1")
        self.distribution = tuple(dist)

        if len(predicate) != len(self._inputs):
            raise ValidationError(
                f"predicate defined on {len(predicate)} inputs, grid has "
                f"{len(self._inputs)} (the predicate must be total)")
        values = []
        for x, a in zip(self._inputs, predicate):
            try:
                values.append(group.coerce(a))
            except ValueError:
                raise ValidationError(
                    f"predicate value {a!r} at input {x} is not in {group!r}")
        self.predicate = tuple(values)

    @property
    def players(self):
        return len(self.question_counts)

    @property
    def n_inputs(self):
        return len(self._inputs)

    def inputs(self):
        """All question tuples in lexicographic order."""
        return list(self._inputs)

    def input_index(self, x):
        try:
            return self._input_index[tuple(x)]
        except KeyError:
            raise ValidationError(f"{x!r} is not a question tuple of this game")

    def input_tuple(self, i):
        return self._inputs[i]

    def probability(self, x):
        return self.distribution[self.input_index(x)]

    def predicate_value(self, x):
        return self.predicate[self.input_index(x)]

    def probabilities_float(self):
        return np.array([float(p) for p in self.distribution])

    def predicate_indices(self):
        """Group-element index of f(x) for every input, in grid order."""
        return np.array([self.group.index(a) for a in self.predicate])

    def support(self):
        return [x for x, p in zip(self._inputs, self.distribution) if p > 0]

    def __eq__(self, other):
        return (isinstance(other, LinearGame)
                and self.group == other.group
                and self.question_counts == other.question_counts
                and self.distribution == other.distribution
                and self.predicate == other.predicate)

    def __hash__(self):
        return hash((self.group, self.question_counts, self.distribution,
                     self.predicate))

    def __repr__(self):
        return (f"LinearGame(players={self.players}, "
                f"questions={list(self.question_counts)}, group={self.group!r})")


def make_game(group, questions, predicate, distribution="uniform", field=None):
    """Build a validated LinearGame from flexible pieces.

    predicate may be a callable on question tuples, a dict keyed by them,
    or a full-grid list in lexicographic order.  distribution may be
    "uniform", a dict {"support": [...]} for uniform-over-support, a dict
    keyed by question tuples (missing entries are zero), or a full-grid
    list.
    """
    questions = tuple(int(q) for q in questions)
    grid = list(itertools.product(*(range(q) for q in questions)))
    n_inputs = len(grid)

    if callable(predicate):
        f_values = [predicate(x) for x in grid]
    elif isinstance(predicate, dict):
        try:
            f_values = [predicate[x] for x in grid]
        except KeyError as e:
            raise ValidationError(f"predicate missing input {e.args[0]!r}")
    else:
        f_values = list(predicate)

    if isinstance(distribution, str):
        if distribution != "uniform":
            raise ValidationError(f"unknown distribution {distribution!r}")
        p_values = [Fraction(1, n_inputs)] * n_inputs
    elif isinstance(distribution, dict) and set(distribution) == {"support"}:
        grid_set = set(grid)
        support = [tuple(x) for x in distribution["support"]]
        if not support:
            raise ValidationError("distribution support is empty")
        seen = set()
        for x in support:
            if x not in grid_set:
                raise ValidationError(f"support input {x!r} is off the grid")
            if x in seen:
                raise ValidationError(f"support input {x!r} listed twice")
            seen.add(x)
        p = Fraction(1, len(support))
        p_values = [p if x in seen else Fraction(0) for x in grid]
    elif isinstance(distribution, dict):
        grid_set = set(grid)
        table = {tuple(x): _as_fraction(v) for x, v in distribution.items()}
        for x in table:
            if x not in grid_set:
                raise ValidationError(f"distribution input {x!r} is off the grid")
        p_values = [table.get(x, Fraction(0)) for x in grid]
    else:
        p_values = list(distribution)

    return LinearGame(group, questions, p_values, f_values, field=field)


def _prime_power(d):
    """Return (p, r) with d = p**r, or raise."""
    if d < 2:
        raise ValidationError(f"alphabet size must be >= 2, got {d}")
    for p in range(2, d + 1):
        if d % p == 0:
            r = 0
            m = d
            while m % p == 0:
                m //= p
                r += 1
            if m == 1:
                return p, r
            raise ValidationError(
                f"alphabet size {d} is not a prime power")
    raise ValidationError(f"alphabet size {d} is not a prime power")


def chsh_game(players, outcomes):
    """The n-player, GF(d)-output game with predicate
    f(x) = sum_{i<j} x_i * x_j, all products in GF(d), uniform questions.

    Every player gets d questions identified with the field elements in
    enumeration order.
    """
    players = int(players)
    if players < 2:
        raise ValidationError("the quadratic game needs at least 2 players")
    p, r = _prime_power(int(outcomes))
    field = FiniteField(p, r)
    group = field.additive_group()
    questions = (field.size,) * players

    def f(x):
        elems = [field.element(q) for q in x]
        total = field.zero
        for i in range(players):
            for j in range(i + 1, players):
                total = field.add(total, field.mul(elems[i], elems[j]))
        return total

    return make_game(group, questions, f, "uniform", field=field)


def mermin_ghz3_game():
    """The ternary GHZ game: questions x, y, z in Z_3 promised to satisfy
    x + y + z = 0 mod 3 (uniform over the nine such tuples), win when
    a + b + c = x*y*z mod 3."""
    group = AbelianGroup((3,))
    questions = (3, 3, 3)
    support = [x for x in itertools.product(range(3), repeat=3)
               if sum(x) % 3 == 0]
    return make_game(group, questions,
                     lambda x: ((x[0] * x[1] * x[2]) % 3,),
                     {"support": support})


@lru_cache(maxsize=None)
def _output_tuples(group, players):
    return tuple(itertools.product(group.elements(), repeat=players))


def output_tuples(group, players):
    """All answer tuples in lexicographic order (per-player enumeration)."""
    return list(_output_tuples(group, players))


def output_index(group, answers):
    i = 0
    for a in answers:
        i = i * group.size + group.index(a)
    return i


class Behavior:
    """Conditional answer distributions P(a | x), one row per question
    tuple, columns indexed by answer tuples in lexicographic order."""

    def __init__(self, group, question_counts, table):
        self.group = group
        self.question_counts = tuple(int(q) for q in question_counts)
        n_inputs = math.prod(self.question_counts)
        n_outputs = group.size ** len(self.question_counts)
        table = np.asarray(table, dtype=float)
        if table.shape != (n_inputs, n_outputs):
            raise ValidationError(
                f"behavior table has shape {table.shape}, expected "
                f"{(n_inputs, n_outputs)}")
        if table.min() < -BEHAVIOR_ROW_TOL:
            raise ValidationError(
                f"behavior has a negative probability {table.min()!r}")
        sums = table.sum(axis=1)
        bad = np.nonzero(np.abs(sums - 1) > BEHAVIOR_ROW_TOL)[0]
        if bad.size:
            raise ValidationError(
                f"behavior rows {bad.tolist()} are not normalized "
                f"(sums {sums[bad].tolist()})")
        self.table = table

    @property
    def players(self):
        return len(self.question_counts)

    def outputs(self):
        return output_tuples(self.group, self.players)

    def prob(self, answers, x):
        row = 0
        for q, count in zip(x, self.question_counts):
            row = row * count + q
        return self.table[row, output_index(self.group, answers)]


@dataclass(frozen=True)
class DeterministicStrategy:
    """One answer per question per player: outputs[i][x_i] is player i's
    group element on question x_i."""

    outputs: tuple

    def answer(self, player, question):
        return self.outputs[player][question]

    def behavior(self, group, question_counts):
        n = len(question_counts)
        n_inputs = math.prod(question_counts)
        table = np.zeros((n_inputs, group.size**n))
        for row, x in enumerate(itertools.product(*(range(q) for q in question_counts))):
            answers = tuple(self.outputs[i][x[i]] for i in range(n))
            table[row, output_index(group, answers)] = 1.0
        return Behavior(group, question_counts, table)


def success_probability(game, behavior):
    """Winning probability sum_x p(x) * P(sum_i a_i = f(x) | x)."""
    if behavior.group != game.group:
        raise ValidationError("behavior and game use different groups")
    if behavior.question_counts != game.question_counts:
        raise ValidationError("behavior and game have different question grids")
    group = game.group
    outputs = behavior.outputs()
    # Column j corresponds to an answer tuple; bucket columns by answer sum.
    sums = np.empty(len(outputs), dtype=int)
    for j, answers in enumerate(outputs):
        total = group.identity
        for a in answers:
            total = group.add(total, a)
        sums[j] = group.index(total)
    p = game.probabilities_float()
    f_idx = game.predicate_indices()
    total = 0.0
    for row in range(game.n_inputs):
        if p[row] == 0.0:
            continue
        total += p[row] * behavior.table[row, sums == f_idx[row]].sum()
    return float(total)


# ---------------------------------------------------------------------------
# Game files


_GAME_KEYS = {"players", "questions", "group", "distribution", "predicate"}


def _expect_keys(obj, required, optional=frozenset(), path="document"):
    if not isinstance(obj, dict):
        raise GameFormatError(f"{path}: expected an object")
    keys = set(obj)
    missing = required - keys
    if missing:
        raise GameFormatError(f"{path}: missing key(s) {sorted(missing)}")
    unknown = keys - required - optional
    if unknown:
        raise GameFormatError(f"{path}: unknown key(s) {sorted(unknown)}")


def _parse_element(raw, group, path):
    if isinstance(raw, bool):
        raise GameFormatError(f"{path}: expected a group element, got {raw!r}")
    if isinstance(raw, int):
        raw = [raw]
    if (not isinstance(raw, list)
            or not all(isinstance(c, int) and not isinstance(c, bool) for c in raw)):
        raise GameFormatError(f"{path}: expected a group element, got {raw!r}")
    try:
        return group.coerce(tuple(raw))
    except ValueError as e:
        raise GameFormatError(f"{path}: {e}") from None


def _parse_input(raw, questions, path):
    if (not isinstance(raw, list) or len(raw) != len(questions)
            or not all(isinstance(q, int) and not isinstance(q, bool) for q in raw)):
        raise GameFormatError(
            f"{path}: expected a question tuple of length {len(questions)}")
    x = tuple(raw)
    if any(not 0 <= q < n for q, n in zip(x, questions)):
        raise GameFormatError(f"{path}: question tuple {list(x)} out of range")
    return x


def parse_game_file(text):
    """Parse the JSON game-file format into a LinearGame."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise GameFormatError(f"invalid JSON: {e}") from None
    _expect_keys(doc, _GAME_KEYS)

    players = doc["players"]
    if not isinstance(players, int) or isinstance(players, bool) or players < 2:
        raise GameFormatError(f"players: expected an integer >= 2, got {players!r}")
    questions = doc["questions"]
    if (not isinstance(questions, list) or len(questions) != players
            or not all(isinstance(q, int) and not isinstance(q, bool) and q >= 1
                       for q in questions)):
        raise GameFormatError(
            f"questions: expected {players} integers >= 1, got {questions!r}")
    questions = tuple(questions)

    raw_group = doc["group"]
    if not isinstance(raw_group, dict) or len(raw_group) != 1:
        raise GameFormatError(
            'group: expected exactly one of {"cyclic": [...]} or '
            '{"field": {"p": ..., "r": ...}}')
    field = None
    if "cyclic" in raw_group:
        orders = raw_group["cyclic"]
        if (not isinstance(orders, list) or not orders
                or not all(isinstance(d, int) and not isinstance(d, bool) and d >= 2
                           for d in orders)):
            raise GameFormatError(f"group.cyclic: bad factor list {orders!r}")
        group = AbelianGroup(orders)
    elif "field" in raw_group:
        _expect_keys(raw_group["field"], {"p", "r"}, path="group.field")
        p, r = raw_group["field"]["p"], raw_group["field"]["r"]
        if not isinstance(p, int) or not isinstance(r, int):
            raise GameFormatError("group.field: p and r must be integers")
        try:
            field = FiniteField(p, r)
        except ValueError as e:
            raise GameFormatError(f"group.field: {e}") from None
        group = field.additive_group()
    else:
        raise GameFormatError(f"group: unknown form {sorted(raw_group)}")

    grid = list(itertools.product(*(range(q) for q in questions)))
    raw_dist = doc["distribution"]
    if raw_dist == "uniform":
        dist = [Fraction(1, len(grid))] * len(grid)
    elif isinstance(raw_dist, dict) and set(raw_dist) == {"support"}:
        support = raw_dist["support"]
        if not isinstance(support, list) or not support:
            raise GameFormatError("distribution.support: expected a non-empty list")
        seen = []
        for i, raw_x in enumerate(support):
            x = _parse_input(raw_x, questions, f"distribution.support[{i}]")
            if x in seen:
                raise GameFormatError(
                    f"distribution.support[{i}]: duplicate input {list(x)}")
            seen.append(x)
        p = Fraction(1, len(seen))
        in_support = set(seen)
        dist = [p if x in in_support else Fraction(0) for x in grid]
    elif isinstance(raw_dist, dict) and set(raw_dist) == {"table"}:
        entries = raw_dist["table"]
        if not isinstance(entries, list):
            raise GameFormatError("distribution.table: expected a list")
        by_input = {}
        for i, entry in enumerate(entries):
            path = f"distribution.table[{i}]"
            _expect_keys(entry, {"x", "p"}, path=path)
            x = _parse_input(entry["x"], questions, f"{path}.x")
            if x in by_input:
                raise GameFormatError(f"{path}: duplicate input {list(x)}")
            raw_p = entry["p"]
            if isinstance(raw_p, bool) or not isinstance(raw_p, (str, int)):
                raise GameFormatError(
                    f'{path}.p: expected "num/den" or an integer, got {raw_p!r}')
            try:
                by_input[x] = Fraction(raw_p)
            except (ValueError, ZeroDivisionError) as e:
                raise GameFormatError(f"{path}.p: {e}") from None
        dist = [by_input.get(x, Fraction(0)) for x in grid]
    else:
        raise GameFormatError(
            'distribution: expected "uniform", {"support": ...} or {"table": ...}')

    raw_pred = doc["predicate"]
    if isinstance(raw_pred, dict) and set(raw_pred) == {"table"}:
        entries = raw_pred["table"]
        if not isinstance(entries, list):
            raise GameFormatError("predicate.table: expected a list")
        by_input = {}
        for i, entry in enumerate(entries):
            path = f"predicate.table[{i}]"
            _expect_keys(entry, {"x", "f"}, path=path)
            x = _parse_input(entry["x"], questions, f"{path}.x")
            if x in by_input:
                raise GameFormatError(f"{path}: duplicate input {list(x)}")
            by_input[x] = _parse_element(entry["f"], group, f"{path}.f")
        missing = [x for x in grid if x not in by_input]
        if missing:
            raise GameFormatError(
                f"predicate.table: missing input(s) {[list(x) for x in missing[:5]]}"
                f"{' ...' if len(missing) > 5 else ''} (the predicate must be total)")
        predicate = [by_input[x] for x in grid]
    elif isinstance(raw_pred, dict) and set(raw_pred) == {"builtin"}:
        builtin = raw_pred["builtin"]
        if builtin == "chsh":
            if field is None:
                if len(group.orders) == 1:
                    try:
                        field = FiniteField(group.orders[0], 1)
                    except ValueError as e:
                        raise GameFormatError(f"predicate.builtin chsh: {e}") from None
                else:
                    raise GameFormatError(
                        "predicate.builtin chsh: multi-factor groups need the "
                        '{"field": ...} group form')
            if any(q != field.size for q in questions):
                raise GameFormatError(
                    f"predicate.builtin chsh: every player needs {field.size} "
                    f"questions")
            def f(x):
                elems = [field.element(q) for q in x]
                total = field.zero
                for i in range(players):
                    for j in range(i + 1, players):
                        total = field.add(total, field.mul(elems[i], elems[j]))
                return total
            predicate = [f(x) for x in grid]
        elif builtin == "ghz3":
            if (players != 3 or questions != (3, 3, 3)
                    or group != AbelianGroup((3,))):
                raise GameFormatError(
                    "predicate.builtin ghz3: needs players=3, questions "
                    "[3,3,3] and group {\"cyclic\": [3]}")
            predicate = [((x[0] * x[1] * x[2]) % 3,) for x in grid]
        else:
            raise GameFormatError(f"predicate.builtin: unknown builtin {builtin!r}")
    else:
        raise GameFormatError(
            'predicate: expected {"table": ...} or {"builtin": ...}')

    try:
        return LinearGame(group, questions, dist, predicate, field=field)
    except ValidationError as e:
        raise GameFormatError(str(e)) from None


def _element_json(a):
    return a[0] if len(a) == 1 else list(a)


def serialize_game(game):
    """Canonical JSON for a game: fixed key order, explicit tables in grid
    order, rational probabilities as "num/den" strings."""
    if game.field is not None:
        group_doc = {"field": {"p": game.field.p, "r": game.field.r}}
    else:
        group_doc = {"cyclic": list(game.group.orders)}

    uniform = Fraction(1, game.n_inputs)
    if all(p == uniform for p in game.distribution):
        dist_doc = "uniform"
    else:
        dist_doc = {"table": [
            {"x": list(x), "p": f"{p.numerator}/{p.denominator}"}
            for x, p in zip(game.inputs(), game.distribution) if p > 0]}

    doc = {
        "players": game.players,
        "questions": list(game.question_counts),
        "group": group_doc,
        "distribution": dist_doc,
        "predicate": {"table": [
            {"x": list(x), "f": _element_json(a)}
            for x, a in zip(game.inputs(), game.predicate)]},
    }
    return json.dumps(doc, indent=2) + "\n"


def game_hash(game):
    """Stable identifier: SHA-256 of the canonical serialization."""
    return hashlib.sha256(serialize_game(game).encode()).hexdigest()


def load_game(path):
    with open(path, encoding="utf-8") as fh:
        return parse_game_file(fh.read())
