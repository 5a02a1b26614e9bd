"""Quantum cohomology of the Grassmannian at desk scale.

Structure constants come from two routes: exact integer arithmetic with
the single-box multiplication rule (which tracks the q-degree), and the
eigendata synthesis collapsed at q = 1 whose outputs are rounded to the
underlying nonnegative integers.  A classical tableau counter gives an
extra degree-zero oracle.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .configurations import (
    Configuration,
    complement_partition,
    from_partition,
    in_box,
    normalize_partition,
    to_partition,
)
from .spectral import NumericalDegradationError, ROUNDING_TOL, SpectralData

Partition = tuple[int, ...]
QKey = tuple[Partition, int]


class DegreeBalanceWarning(UserWarning):
    pass


@dataclass(frozen=True)
class CohomologyClass:
    """Integer combination of Schubert classes inside one box."""

    k: int
    n: int
    coeffs: dict[Partition, int]

    def __post_init__(self):
        for lam in self.coeffs:
            if not in_box(lam, self.k, self.n):
                raise ValueError(f"{lam} outside the {self.k} x {self.n - self.k} box")
            if lam != normalize_partition(lam):
                raise ValueError(f"key {lam} not normalized")

    @property
    def degree(self) -> int | None:
        """Common codegree when homogeneous, else None."""
        degs = {sum(lam) for lam, c in self.coeffs.items() if c != 0}
        if len(degs) == 1:
            return degs.pop()
        return None


def schubert(lam: Sequence[int], k: int, n: int, coeff: int = 1) -> CohomologyClass:
    return CohomologyClass(k, n, {normalize_partition(lam): coeff})


def single_box(k: int, n: int) -> CohomologyClass:
    return schubert((1,), k, n)


def is_single_box(cls: CohomologyClass) -> bool:
    support = {lam for lam, c in cls.coeffs.items() if c != 0}
    return support == {(1,)}


# ---------------------------------------------------------------------------
# exact route: iterated single-box multiplication with q tracked
# ---------------------------------------------------------------------------

def as_qclass(cls: CohomologyClass) -> dict[QKey, int]:
    return {(lam, 0): c for lam, c in cls.coeffs.items() if c != 0}


def pieri_multiply(qclass: Mapping[QKey, int] | CohomologyClass,
                   k: int | None = None, n: int | None = None) -> dict[QKey, int]:
    """Multiply by the single-box class; exact integers, q-power tracked.

    The rule adds one box inside the k x (n-k) box and, when the first
    part is full and the last is positive, wraps to
    (lam_2 - 1, ..., lam_k - 1, 0) with one extra power of q.
    """
    if isinstance(qclass, CohomologyClass):
        k, n = qclass.k, qclass.n
        qclass = as_qclass(qclass)
    if k is None or n is None:
        raise ValueError("k and n are required with a raw q-class mapping")
    out: dict[QKey, int] = {}
    for (lam, d), coeff in qclass.items():
        full = list(lam) + [0] * (k - len(lam))
        for i in range(k):
            if (i == 0 or full[i] < full[i - 1]) and full[i] < n - k:
                grown = normalize_partition(full[:i] + [full[i] + 1] + full[i + 1:])
                key = (grown, d)
                out[key] = out.get(key, 0) + coeff
        if full[0] == n - k and full[k - 1] > 0:
            wrapped = normalize_partition([p - 1 for p in full[1:]] + [0])
            key = (wrapped, d + 1)
            out[key] = out.get(key, 0) + coeff
    return {key: c for key, c in out.items() if c != 0}


def pieri_power(p: int, k: int, n: int) -> dict[QKey, int]:
    """The p-th power of the single-box class."""
    out: dict[QKey, int] = {((), 0): 1}
    for _ in range(p):
        out = pieri_multiply(out, k, n)
    return out


# ---------------------------------------------------------------------------
# eigendata route, collapsed at q = 1
# ---------------------------------------------------------------------------

def verlinde_product(factors: Sequence[Configuration],
                     sd: SpectralData) -> dict[Configuration, int]:
    """Structure constants of prod_j s_{v_j} on the distinguished basis.

    c^v = sum_L prod_j theta_{v_j}(L) u^(L)(v), rounded to integers;
    a rounding residual beyond tolerance raises with the worst offender.
    """
    weights = sd.mu_h.astype(complex)
    for f in factors:
        weights = weights * sd.s_table[sd.vertex_index(f), :]
    raw = sd.s_table.conj() @ weights
    out: dict[Configuration, int] = {}
    worst = 0.0
    worst_v = None
    for i, v in enumerate(sd.vertices):
        val = raw[i]
        guess = round(val.real)
        resid = max(abs(val.real - guess), abs(val.imag))
        if resid > worst:
            worst, worst_v = resid, v
        if guess != 0:
            out[v] = guess
    if worst > ROUNDING_TOL:
        raise NumericalDegradationError(
            f"structure constant at {worst_v} off an integer by {worst:.3e}")
    if any(c < 0 for c in out.values()):
        raise NumericalDegradationError("negative structure constant")
    return out


def verlinde_class_product(classes: Sequence[CohomologyClass],
                           sd: SpectralData) -> dict[Configuration, float]:
    """Unrounded product of integer classes through the eigendata."""
    weights = sd.mu_h.astype(complex)
    for cls in classes:
        theta = np.zeros(sd.num_vertices, dtype=complex)
        for lam, c in cls.coeffs.items():
            theta += c * sd.s_table[sd.vertex_index(from_partition(lam, sd.k, sd.n)), :]
        weights = weights * theta
    raw = sd.s_table.conj() @ weights
    return {v: raw[i] for i, v in enumerate(sd.vertices)}


def qlr(lam: Sequence[int], mu: Sequence[int],
        sd: SpectralData) -> dict[QKey, int]:
    """Quantum Littlewood-Richardson table of s_lam * s_mu.

    The q = 1 product is split by the forced degree
    d = (|lam| + |mu| - |nu|) / n; a nonzero coefficient at a
    non-integral degree is a consistency failure.
    """
    k, n = sd.k, sd.n
    lam = normalize_partition(lam)
    mu = normalize_partition(mu)
    for p in (lam, mu):
        if not in_box(p, k, n):
            raise ValueError(f"{p} outside the {k} x {n - k} box")
    product = verlinde_product(
        [from_partition(lam, k, n), from_partition(mu, k, n)], sd)
    total = sum(lam) + sum(mu)
    out: dict[QKey, int] = {}
    for v, coeff in product.items():
        nu = to_partition(v)
        d, rem = divmod(total - sum(nu), n)
        if rem != 0 or d < 0:
            raise NumericalDegradationError(
                f"coefficient {coeff} at {nu} violates the degree grading")
        out[(nu, d)] = coeff
    return out


# ---------------------------------------------------------------------------
# classical tableau oracle (degree zero)
# ---------------------------------------------------------------------------

def lr_coefficient(lam: Partition, mu: Partition, nu: Partition) -> int:
    """Classical c_{lam, mu}^{nu} by brute-force tableau enumeration.

    Counts semistandard fillings of nu/lam with content mu whose reverse
    reading word is a lattice word.
    """
    lam, mu, nu = (normalize_partition(p) for p in (lam, mu, nu))
    if sum(lam) + sum(mu) != sum(nu):
        return 0
    rows = len(nu)
    if rows == 0:
        return 1
    lam_full = tuple(lam) + (0,) * (rows - len(lam))
    if any(lam_full[i] > nu[i] for i in range(rows)):
        return 0

    count = 0
    entries = len(mu)
    grid = [[0] * nu[i] for i in range(rows)]

    # Boxes are filled in reverse reading order (right to left along each
    # row, rows top to bottom) so prefix counts enforce the lattice
    # condition directly.
    def fill(row: int, col: int, remaining: list[int], counts: list[int]) -> None:
        nonlocal count
        if row == rows:
            count += 1
            return
        if col < lam_full[row]:
            nxt = row + 1
            fill(nxt, (nu[nxt] - 1) if nxt < rows else 0, remaining, counts)
            return
        for entry in range(1, entries + 1):
            if remaining[entry - 1] == 0:
                continue
            # rows weakly increase left to right
            if col + 1 < nu[row] and grid[row][col + 1] < entry:
                continue
            # columns strictly increase downward (above-box only if skew)
            if row > 0 and col >= lam_full[row - 1] and col < nu[row - 1]:
                if grid[row - 1][col] >= entry:
                    continue
            # lattice prefix condition
            if entry > 1 and counts[entry - 1] + 1 > counts[entry - 2]:
                continue
            grid[row][col] = entry
            remaining[entry - 1] -= 1
            counts[entry - 1] += 1
            fill(row, col - 1, remaining, counts)
            remaining[entry - 1] += 1
            counts[entry - 1] -= 1
            grid[row][col] = 0

    fill(0, nu[0] - 1, list(mu), [0] * max(entries, 1))
    return count


# ---------------------------------------------------------------------------
# quantum dimension and enumerative counting
# ---------------------------------------------------------------------------

def qdim(cls: CohomologyClass, sd: SpectralData) -> float:
    """sum_I c_I S_I(xi_n(I_0)) for a homogeneous nonnegative class."""
    if cls.degree is None:
        raise ValueError("quantum dimension needs a degree-homogeneous class")
    if any(c < 0 for c in cls.coeffs.values()):
        raise ValueError("quantum dimension needs nonnegative coefficients")
    total = 0.0
    for lam, c in cls.coeffs.items():
        idx = sd.vertex_index(from_partition(lam, sd.k, sd.n))
        total += c * float(sd.h_l[idx])
    return total


def class_stats(cls: CohomologyClass, sd: SpectralData):
    """Normalized Perron weights of a class and its centered moments.

    Returns (weights keyed by configuration, m2, m3) where
    m_a = sum_I p_I sum_j (I_j - size(I)/k)^a.
    """
    qd = qdim(cls, sd)
    weights: dict[Configuration, float] = {}
    m2 = 0.0
    m3 = 0.0
    for lam, c in cls.coeffs.items():
        v = from_partition(lam, sd.k, sd.n)
        p = c * float(sd.h_l[sd.vertex_index(v)]) / qd
        weights[v] = p
        centered = [x - v.size / sd.k for x in v.parts]
        m2 += p * sum(t ** 2 for t in centered)
        m3 += p * sum(t ** 3 for t in centered)
    return weights, m2, m3


def class_measure(cls: CohomologyClass, sd: SpectralData):
    """The h-probability measure with weights p_I = c_I S_I(xi_n(I_0)) / qDim."""
    from .harmonic import HMeasure

    w = np.zeros(sd.num_vertices)
    for v, p in class_stats(cls, sd)[0].items():
        w[sd.vertex_index(v)] = p
    return HMeasure(sd, w)


def enumerative_count(classes: Sequence[CohomologyClass], d: int,
                      sd: SpectralData) -> int:
    """Number of degree-d maps meeting the listed generic constraints.

    The product of all classes but the last is expanded and paired with
    the complement dual of the last.  A degree imbalance
    (sum of codegrees != k(n-k) + dn) gives 0 with a warning.
    """
    k, n = sd.k, sd.n
    if len(classes) < 2:
        raise ValueError("need at least two constraint classes")
    degs = [cls.degree for cls in classes]
    if any(g is None for g in degs):
        raise ValueError("constraint classes must be degree-homogeneous")
    if sum(degs) != k * (n - k) + d * n:
        warnings.warn(
            f"degree balance {sum(degs)} != {k * (n - k) + d * n}; count is 0",
            DegreeBalanceWarning)
        return 0

    head, last = classes[:-1], classes[-1]
    if all(is_single_box(c) for c in head[1:]):
        scale = 1
        for c in head[1:]:
            scale *= c.coeffs[(1,)]
        q = as_qclass(head[0])
        for _ in range(len(head) - 1):
            q = pieri_multiply(q, k, n)
        total = 0
        for mu, cmu in last.coeffs.items():
            total += cmu * q.get((complement_partition(mu, k, n), d), 0)
        return scale * total

    product = verlinde_class_product(list(head), sd)
    head_degree = sum(cls.degree for cls in head)
    total_f = 0.0
    for mu, cmu in last.coeffs.items():
        v = from_partition(complement_partition(mu, k, n), k, n)
        dv, rem = divmod(head_degree - sum(to_partition(v)), n)
        if rem != 0 or dv != d:
            continue
        total_f += cmu * product[v].real
    guess = round(total_f)
    if abs(total_f - guess) > ROUNDING_TOL * max(1.0, abs(total_f)):
        raise NumericalDegradationError(
            f"count {total_f} is not near an integer")
    return guess
