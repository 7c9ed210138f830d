"""Evaluation points, their deduplication, and the function-value cache.

Every point a scheme touches is ``x0`` plus an integer combination of
*atoms*. Atoms are the distinct direction columns of a configuration, where a
column and its exact negation share one atom. A point's coordinates are
always rebuilt from its combination by one fixed summation order, so two
routes to the same combination give bit-identical coordinates. That is what
makes bitwise deduplication sound: ``x0 + s^j + t`` with ``t = -s^j`` is
exactly ``x0``.
"""
from __future__ import annotations

import itertools
import math
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .directions import DirectionFamily, DirectionMatrix, as_direction, as_family

Combo = tuple[tuple[int, int], ...]  # sorted (atom index, nonzero integer coefficient)


class MissingEvaluationError(KeyError):
    def __init__(self, point):
        self.point = np.asarray(point)
        super().__init__(f"no function value cached for point {self.point.tolist()}")


class NonFiniteValueError(ValueError):
    def __init__(self, point, value):
        self.point = np.asarray(point)
        self.value = value
        super().__init__(f"function returned {value!r} at point {self.point.tolist()}")


def combine(*combos: Combo) -> Combo:
    acc: dict[int, int] = {}
    for c in combos:
        for a, k in c:
            acc[a] = acc.get(a, 0) + k
    return tuple(sorted((a, k) for a, k in acc.items() if k != 0))


def negate(c: Combo) -> Combo:
    return tuple((a, -k) for a, k in c)


def point_key(x: np.ndarray) -> bytes:
    # + 0.0 folds -0.0 into 0.0
    return (np.asarray(x, dtype=float) + 0.0).tobytes()


class AtomTable:
    """Distinct direction columns, matched exactly up to sign."""

    def __init__(self, n: int):
        self.n = n
        self.vectors: list[np.ndarray] = []
        self.labels: list[str] = []
        self._index: dict[bytes, tuple[int, int]] = {}

    def add(self, column: np.ndarray, label: str) -> Combo:
        column = np.asarray(column, dtype=float)
        if not np.any(column != 0.0):
            return ()
        key = point_key(column)
        if key not in self._index:
            a = len(self.vectors)
            self.vectors.append(column.copy())
            self.labels.append(label)
            self._index[key] = (a, 1)
            self._index[point_key(-column)] = (a, -1)
        a, sign = self._index[key]
        return ((a, sign),)

    def combos(self, D: DirectionMatrix) -> list[Combo]:
        out = []
        for col in D.columns:
            hit = self._index.get(point_key(col))
            if hit is None and np.any(col != 0.0):
                raise KeyError("direction column not registered in atom table")
            out.append(() if hit is None else (hit,))
        return out

    def coordinates(self, x0: np.ndarray, combo: Combo) -> np.ndarray:
        x = np.array(x0, dtype=float)
        for a, k in combo:
            x = x + (self.vectors[a] if k == 1 else -self.vectors[a] if k == -1 else k * self.vectors[a])
        return x + 0.0

    def describe(self, combo: Combo) -> str:
        if not combo:
            return "x0"
        parts = ["x0"]
        for a, k in combo:
            sign = "+" if k > 0 else "-"
            mult = "" if abs(k) == 1 else f"{abs(k)}*"
            parts.append(f"{sign} {mult}{self.labels[a]}")
        return " ".join(parts)


def build_atoms(n: int, S: DirectionMatrix, inner: Iterable[tuple[str, DirectionMatrix]] = ()) -> AtomTable:
    table = AtomTable(n)
    for j, col in enumerate(S.columns):
        table.add(col, f"s{j + 1}")
    for name, T in inner:
        for l, col in enumerate(T.columns):
            table.add(col, f"{name}[{l + 1}]")
    return table


def _family_atoms(S: DirectionMatrix, family: DirectionFamily | None) -> AtomTable:
    inner: list[tuple[str, DirectionMatrix]] = []
    if family is not None:
        if family.common_matrix is not None:
            inner.append(("T", family.common_matrix))
        else:
            inner.extend((f"T{j + 1}", T) for j, T in enumerate(family))
    return build_atoms(S.n, S, inner)


@dataclass(frozen=True)
class SamplePoint:
    coordinates: np.ndarray
    provenance: tuple[str, ...]  # every symbolic route reaching this point
    combo: Combo


@dataclass(frozen=True, eq=False)
class SamplePlan:
    x0: np.ndarray
    atoms: AtomTable
    points: tuple[SamplePoint, ...]
    scheme: str = ""

    @property
    def count(self) -> int:
        return len(self.points)

    def coordinates(self) -> np.ndarray:
        return np.array([p.coordinates for p in self.points])

    def keys(self) -> set[bytes]:
        return {point_key(p.coordinates) for p in self.points}


def _combo_sort_key(c: Combo):
    return (len(c), c)


def _make_plan(x0: np.ndarray, atoms: AtomTable, combos: Iterable[Combo], scheme: str) -> SamplePlan:
    by_key: dict[bytes, tuple[np.ndarray, list[Combo]]] = {}
    for c in sorted(set(combos), key=_combo_sort_key):
        x = atoms.coordinates(x0, c)
        entry = by_key.setdefault(point_key(x), (x, []))
        entry[1].append(c)
    points = tuple(
        SamplePoint(x, tuple(atoms.describe(c) for c in cs), cs[0])
        for x, cs in sorted(by_key.values(), key=lambda e: _combo_sort_key(e[1][0]))
    )
    return SamplePlan(np.asarray(x0, dtype=float), atoms, points, scheme)


def _gsh_combos(S_c: list[Combo], T_c: list[list[Combo]]) -> list[Combo]:
    combos: list[Combo] = [()]
    combos.extend(S_c)
    for s, T in zip(S_c, T_c):
        combos.extend(T)
        combos.extend(combine(s, t) for t in T)
    return combos


def enumerate_plan(x0, S, family=None, *, centered: bool = False, scheme: str = "") -> SamplePlan:
    """Distinct points read by one estimator.

    ==============  ========  ===================================================
    ``family``      centered  points
    ==============  ========  ===================================================
    ``None``        no        ``x0``, ``x0 + S`` (simplex gradient)
    ``None``        yes       ``x0``, ``x0 +- S`` (centered diagonal)
    given           no        ``x0``, ``x0+S``, ``x0+T_j``, ``x0+s^j+T_j``
    given           yes       the above plus the same sets for ``(-S, -T)``
    ==============  ========  ===================================================

    Points are ordered by their symbolic combination (``x0`` first).
    """
    x0 = np.asarray(x0, dtype=float).reshape(-1)
    S = as_direction(S)
    if S.n != x0.size:
        raise ValueError(f"x0 has length {x0.size} but directions have {S.n} rows")
    fam = None if family is None else as_family(family, S.m)
    atoms = _family_atoms(S, fam)
    S_c = atoms.combos(S)
    if fam is None:
        combos = [(), *S_c]
        if centered:
            combos.extend(negate(c) for c in S_c)
    else:
        T_c = [atoms.combos(T) for T in fam]
        combos = _gsh_combos(S_c, T_c)
        if centered:
            combos.extend(_gsh_combos([negate(c) for c in S_c], [[negate(t) for t in T] for T in T_c]))
    return _make_plan(x0, atoms, combos, scheme)


def enumerate_tensor_plan(x0, matrices: Sequence, *, scheme: str = "") -> SamplePlan:
    """Points of the order-P recursion: ``x0 + ({0} u S_1) + ... + ({0} u S_P)``."""
    x0 = np.asarray(x0, dtype=float).reshape(-1)
    mats = [as_direction(M) for M in matrices]
    atoms = tensor_atoms(mats)
    levels = [[()] + atoms.combos(M) for M in mats]
    combos = (combine(*choice) for choice in itertools.product(*levels))
    return _make_plan(x0, atoms, combos, scheme)


def tensor_atoms(mats: Sequence[DirectionMatrix]) -> AtomTable:
    return build_atoms(mats[0].n, mats[0], [(f"S{p + 2}", M) for p, M in enumerate(mats[1:])])


class EvalCache:
    """Function values keyed by the exact bits of each point.

    Safe for concurrent writers: a key's value is stored at most once and the
    miss counter counts distinct evaluations issued.
    """

    def __init__(self):
        self._values: dict[bytes, float] = {}
        self._points: dict[bytes, np.ndarray] = {}
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0

    def __len__(self) -> int:
        return len(self._values)

    def __contains__(self, x) -> bool:
        return point_key(x) in self._values

    def get(self, x) -> float:
        key = point_key(x)
        try:
            value = self._values[key]
        except KeyError:
            raise MissingEvaluationError(x) from None
        with self._lock:
            self.hits += 1
        return value

    def put(self, x, value: float) -> None:
        key = point_key(x)
        with self._lock:
            if key not in self._values:
                self._values[key] = float(value)
                self._points[key] = np.array(x, dtype=float)

    def items(self):
        for key, value in self._values.items():
            yield self._points[key], value

    @classmethod
    def from_table(cls, X, values) -> "EvalCache":
        cache = cls()
        for x, fx in zip(np.asarray(X, dtype=float), values):
            cache.put(x, fx)
        return cache


def evaluate(f: Callable[[np.ndarray], float], plan: SamplePlan, cache: EvalCache | None = None,
             *, workers: int | None = None) -> EvalCache:
    """Fill ``cache`` with ``f`` at every plan point it does not hold yet."""
    cache = EvalCache() if cache is None else cache
    todo = []
    with cache._lock:
        for p in plan.points:
            key = point_key(p.coordinates)
            if key not in cache._values:
                todo.append(p.coordinates)
                cache.misses += 1
            else:
                cache.hits += 1

    def run(x):
        value = float(f(x.copy()))
        if not math.isfinite(value):
            raise NonFiniteValueError(x, value)
        return x, value

    if workers and workers > 1 and len(todo) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, todo))
    else:
        results = [run(x) for x in todo]
    for x, value in results:
        cache.put(x, value)
    return cache


@dataclass
class Stencil:
    """Reads function values at symbolic points from a populated cache."""

    x0: np.ndarray
    atoms: AtomTable
    cache: EvalCache
    _memo: dict = field(default_factory=dict, repr=False)

    def point(self, combo: Combo) -> np.ndarray:
        return self.atoms.coordinates(self.x0, combo)

    def value(self, combo: Combo) -> float:
        try:
            return self._memo[combo]
        except KeyError:
            v = self._memo[combo] = self.cache.get(self.point(combo))
            return v
