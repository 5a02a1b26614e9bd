"""Combinatorics of k nonintersecting particles on a discrete circle of size n.

A configuration is a strictly decreasing k-tuple of positions in
{0, ..., n-1}.  The vertex set of size C(n, k) carries a directed edge
rule (total position advances by 1 mod n, exactly one particle moves),
a bijection with partitions in the k x (n-k) box, a duality, and an
embedding into the set T_k of decreasing angle k-tuples on the circle.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Iterator, NamedTuple, Sequence

TWO_PI = 2.0 * math.pi


# ---------------------------------------------------------------------------
# core types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Configuration:
    """Positions of k nonintersecting particles on the circle Z/nZ.

    Parts are stored strictly decreasing so that ``parts - (k-1, ..., 0)``
    is a partition without any reordering.
    """

    parts: tuple[int, ...]
    n: int

    def __post_init__(self):
        k = len(self.parts)
        if k < 1 or self.n < 1 or k > self.n:
            raise ValueError(f"need 1 <= k <= n, got k={k}, n={self.n}")
        for j, p in enumerate(self.parts):
            if not 0 <= p <= self.n - 1:
                raise ValueError(f"part {p} outside [0, {self.n - 1}]")
            if j > 0 and self.parts[j - 1] <= p:
                raise ValueError(f"parts not strictly decreasing: {self.parts}")

    @property
    def k(self) -> int:
        return len(self.parts)

    @property
    def size(self) -> int:
        """Sum of the particle positions."""
        return sum(self.parts)

    def __iter__(self) -> Iterator[int]:
        return iter(self.parts)

    def __repr__(self):
        return f"Configuration({list(self.parts)}, n={self.n})"


@dataclass(frozen=True)
class AnglePoint:
    """Element of T_k: angles with 2*pi > u_1 >= ... >= u_k >= 0."""

    angles: tuple[float, ...]

    def __post_init__(self):
        u = self.angles
        if len(u) < 1:
            raise ValueError("empty angle tuple")
        if any(a < 0.0 or a >= TWO_PI for a in u):
            raise ValueError(f"angles must lie in [0, 2*pi): {u}")
        if any(u[i] < u[i + 1] for i in range(len(u) - 1)):
            raise ValueError(f"angles must be weakly decreasing: {u}")

    @property
    def k(self) -> int:
        return len(self.angles)

    @property
    def total(self) -> float:
        return sum(self.angles)

    @staticmethod
    def from_raw(values: Sequence[float]) -> "AnglePoint":
        """Reduce arbitrary reals mod 2*pi and sort decreasingly."""
        reduced = sorted((v % TWO_PI for v in values), reverse=True)
        return AnglePoint(tuple(reduced))


class ShiftData(NamedTuple):
    size: int
    tilde: tuple[Fraction, ...]
    hat: tuple[int, ...]
    dual: Configuration


# ---------------------------------------------------------------------------
# construction and enumeration
# ---------------------------------------------------------------------------

def root_configuration(k: int, n: int) -> Configuration:
    """The stacked configuration (k-1, k-2, ..., 0)."""
    return Configuration(tuple(range(k - 1, -1, -1)), n)


def step_configuration(k: int, n: int) -> Configuration:
    """The unique out-neighbor (k, k-2, ..., 0) of the root."""
    if k == n:
        raise ValueError("k = n leaves no room to move")
    if k == 1:
        return Configuration((1,), n)
    return Configuration((k,) + tuple(range(k - 2, -1, -1)), n)


def enumerate_configs(k: int, n: int) -> list[Configuration]:
    """All C(n, k) configurations, sorted by their decreasing parts tuple.

    The order is deterministic and the root (k-1, ..., 0) comes first.
    """
    if k < 1 or n < 1 or k > n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    tuples = sorted(tuple(reversed(c)) for c in combinations(range(n), k))
    return [Configuration(t, n) for t in tuples]


# ---------------------------------------------------------------------------
# partitions
# ---------------------------------------------------------------------------

def is_partition(lam: Sequence[int]) -> bool:
    return all(a >= b for a, b in zip(lam, lam[1:])) and all(a >= 0 for a in lam)


def normalize_partition(lam: Sequence[int]) -> tuple[int, ...]:
    """Strip trailing zeros."""
    lam = tuple(lam)
    while lam and lam[-1] == 0:
        lam = lam[:-1]
    return lam


def in_box(lam: Sequence[int], k: int, n: int) -> bool:
    """Membership in the k x (n-k) box."""
    lam = normalize_partition(lam)
    return is_partition(lam) and len(lam) <= k and (not lam or lam[0] <= n - k)


def to_partition(config: Configuration) -> tuple[int, ...]:
    """Subtract the root; trailing zeros dropped."""
    k = config.k
    return normalize_partition(
        tuple(config.parts[j] - (k - 1 - j) for j in range(k)))


def from_partition(lam: Sequence[int], k: int, n: int) -> Configuration:
    """Add the root to a partition in the k x (n-k) box."""
    lam = normalize_partition(lam)
    if not is_partition(lam):
        raise ValueError(f"not a partition: {lam}")
    if not in_box(lam, k, n):
        raise ValueError(f"partition {lam} outside the {k} x {n - k} box")
    full = tuple(lam) + (0,) * (k - len(lam))
    return Configuration(tuple(full[j] + (k - 1 - j) for j in range(k)), n)


def complement_partition(lam: Sequence[int], k: int, n: int) -> tuple[int, ...]:
    """lam^c with lam_i + lam^c_{k+1-i} = n-k."""
    if not in_box(lam, k, n):
        raise ValueError(f"partition {lam} outside the {k} x {n - k} box")
    lam = normalize_partition(lam)
    full = tuple(lam) + (0,) * (k - len(lam))
    return normalize_partition(tuple(n - k - full[k - 1 - j] for j in range(k)))


def partitions_of(total: int, max_parts: int, max_part: int | None = None) -> Iterator[tuple[int, ...]]:
    """Partitions of `total` with at most `max_parts` parts, parts <= max_part."""
    if max_part is None:
        max_part = total
    if total == 0:
        yield ()
        return
    if max_parts == 0:
        return
    for first in range(min(total, max_part), 0, -1):
        for rest in partitions_of(total - first, max_parts - 1, first):
            yield (first,) + rest


def box_partitions(k: int, n: int) -> list[tuple[int, ...]]:
    """All partitions in the k x (n-k) box, same order as enumerate_configs."""
    return [to_partition(c) for c in enumerate_configs(k, n)]


# ---------------------------------------------------------------------------
# shifts, duality, statistics
# ---------------------------------------------------------------------------

def tilde(parts: Sequence[int]) -> tuple[Fraction, ...]:
    """Center: subtract the mean of the parts (exact rationals)."""
    mean = Fraction(sum(parts), len(parts))
    return tuple(Fraction(p) - mean for p in parts)


def hat(config: Configuration) -> tuple[int, ...]:
    """Shift so the smallest part is 0."""
    last = config.parts[-1]
    return tuple(p - last for p in config.parts)


def dual(config: Configuration) -> Configuration:
    """Reflect positions: (n-1-I_{k+1-j})_j."""
    n = config.n
    return Configuration(tuple(n - 1 - p for p in reversed(config.parts)), n)


def tilde_root_sq_norm(k: int) -> Fraction:
    """Squared norm of the centered root, sum of ((k+1-2i)/2)^2."""
    return sum((Fraction(k + 1 - 2 * i, 2)) ** 2 for i in range(1, k + 1))


def k_stat(x: Sequence) -> Fraction | float:
    """K(x) = ||x||^2 - ||centered root||^2 for a length-k vector."""
    k = len(x)
    sq = sum(v * v for v in x)
    ref = tilde_root_sq_norm(k)
    if isinstance(sq, (int, Fraction)):
        return sq - ref
    return sq - float(ref)


def shifts_and_dual(config: Configuration) -> ShiftData:
    """Size, centered vector, base-shifted vector and dual in one call."""
    return ShiftData(config.size, tilde(config.parts), hat(config), dual(config))


# ---------------------------------------------------------------------------
# edge rule
# ---------------------------------------------------------------------------

def pieri_neighbors(config: Configuration) -> list[Configuration]:
    """Out-neighbors: move exactly one particle one step clockwise.

    Particle at position p moves to p+1 mod n provided that slot is free;
    equivalently the targets J share k-1 positions with I and satisfy
    size(J) = size(I)+1 mod n.
    """
    n = config.n
    occupied = set(config.parts)
    out = []
    for p in config.parts:
        q = (p + 1) % n
        if q in occupied:
            continue
        moved = sorted((occupied - {p}) | {q}, reverse=True)
        out.append(Configuration(tuple(moved), n))
    return sorted(out, key=lambda c: c.parts)


def pieri_neighbors_by_partition(config: Configuration) -> list[Configuration]:
    """Same edge set through the partition picture.

    Add one box inside the k x (n-k) box, plus the wrap move
    lam -> (lam_2 - 1, ..., lam_k - 1, 0) when lam_1 = n-k and lam_k > 0.
    """
    k, n = config.k, config.n
    lam = to_partition(config)
    full = list(lam) + [0] * (k - len(lam))
    out = []
    for i in range(k):
        if (i == 0 or full[i] < full[i - 1]) and full[i] < n - k:
            grown = full[:i] + [full[i] + 1] + full[i + 1:]
            out.append(from_partition(grown, k, n))
    if full[0] == n - k and full[k - 1] > 0:
        wrapped = [p - 1 for p in full[1:]] + [0]
        out.append(from_partition(wrapped, k, n))
    return sorted(out, key=lambda c: c.parts)


def verify_neighbor_rules(k: int, n: int) -> None:
    """Check the subset rule and the partition rule agree on every vertex."""
    for config in enumerate_configs(k, n):
        a = pieri_neighbors(config)
        b = pieri_neighbors_by_partition(config)
        if a != b:
            raise AssertionError(
                f"neighbor rules disagree at {config}: {a} vs {b}")


def is_strongly_connected(k: int, n: int) -> bool:
    """BFS from the root along directed edges reaches every vertex."""
    configs = enumerate_configs(k, n)
    seen = {root_configuration(k, n).parts}
    queue = deque([root_configuration(k, n)])
    while queue:
        c = queue.popleft()
        for nb in pieri_neighbors(c):
            if nb.parts not in seen:
                seen.add(nb.parts)
                queue.append(nb)
    return len(seen) == len(configs)


# ---------------------------------------------------------------------------
# circle embedding
# ---------------------------------------------------------------------------

def embed(config: Configuration) -> AnglePoint:
    """Angles (2*pi/n) * (I_j - (k-1)/2), reduced mod 2*pi, sorted decreasing."""
    k, n = config.k, config.n
    return AnglePoint.from_raw(
        [TWO_PI * (p - (k - 1) / 2.0) / n for p in config.parts])


def embed_raw(config: Configuration) -> list[float]:
    """Unreduced, unsorted embedding angles (same point of T_k as embed)."""
    k, n = config.k, config.n
    return [TWO_PI * (p - (k - 1) / 2.0) / n for p in config.parts]


def rotate(point: AnglePoint, angle: float) -> AnglePoint:
    """Shift every coordinate by -angle (radians), reduce and resort."""
    return AnglePoint.from_raw([u - angle for u in point.angles])


def serialize_config(config: Configuration) -> list[int]:
    return list(config.parts)


def parse_config(parts: Iterable[int], n: int) -> Configuration:
    return Configuration(tuple(int(p) for p in parts), n)
