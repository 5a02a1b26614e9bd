"""Schur polynomial evaluation at points of the circle embedding.

S_J(u) = s_{lam_J}(e^{i u_1}, ..., e^{i u_k}) is computed as a ratio of
generalized Vandermonde determinants det(e^{i u_l J_m}) / det(e^{i u_l (k-m)}).
The ratio is invariant under permuting the angles and shifting them by
multiples of 2*pi, so callers may pass raw angle vectors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .configurations import (
    AnglePoint,
    Configuration,
    embed_raw,
    k_stat,
    tilde,
)

#: global tolerance for complex cross-identity assertions
EPS_NUM = 1e-9

#: pairwise angle separation below which determinant ratios are rejected
SINGULAR_GAP = 1e-12


@dataclass(frozen=True)
class SchurValue:
    value: complex
    condition_estimate: float


def _angles(u) -> np.ndarray:
    if isinstance(u, AnglePoint):
        return np.asarray(u.angles, dtype=float)
    return np.asarray(u, dtype=float)


def _min_gap(u: np.ndarray) -> float:
    z = np.exp(1j * u)
    diff = np.abs(z[:, None] - z[None, :])
    diff[np.diag_indices_from(diff)] = np.inf
    return float(diff.min())


def _alt_det(u: np.ndarray, exponents: Sequence[int]) -> complex:
    """det(e^{i u_l e_m}) for integer exponents e."""
    mat = np.exp(1j * np.outer(u, np.asarray(exponents, dtype=float)))
    return complex(np.linalg.det(mat))


def vandermonde(u) -> complex:
    """prod_{j<j'} (e^{i u_{j'}} - e^{i u_j})."""
    u = _angles(u)
    z = np.exp(1j * u)
    out = 1.0 + 0.0j
    for j in range(len(z)):
        for jp in range(j + 1, len(z)):
            out *= z[jp] - z[j]
    return complex(out)


def vandermonde_abs_config(config: Configuration) -> float:
    """|V(xi_n(I))| through the sine product, strictly positive."""
    k, n = config.k, config.n
    out = 2.0 ** (k * (k - 1) // 2)
    for j in range(k):
        for jp in range(j + 1, k):
            out *= math.sin(math.pi * (config.parts[j] - config.parts[jp]) / n)
    return out


def schur_at(exponents: Sequence[int], u) -> SchurValue:
    """Evaluate S_J at angles u for a strictly decreasing integer tuple J.

    Raises ValueError when two angles coincide (the denominator vanishes).
    """
    exponents = tuple(int(e) for e in exponents)
    if any(a <= b for a, b in zip(exponents, exponents[1:])):
        raise ValueError(f"exponents must be strictly decreasing: {exponents}")
    u = _angles(u)
    k = len(u)
    if len(exponents) != k:
        raise ValueError("exponent tuple and angle tuple differ in length")
    gap = _min_gap(u)
    if gap < SINGULAR_GAP:
        raise ValueError(f"angles too close to degenerate (gap {gap:.3e})")
    num = _alt_det(u, exponents)
    den = _alt_det(u, range(k - 1, -1, -1))
    cond = np.finfo(float).eps * k * k / gap ** (k - 1)
    return SchurValue(num / den, cond)


def schur_config(exponents: Sequence[int], config: Configuration) -> complex:
    """S_J at the circle embedding of a configuration."""
    return schur_at(exponents, embed_raw(config)).value


def schur_batch(exponent_rows: np.ndarray, u) -> np.ndarray:
    """Vectorized S_J(u) for many J at one angle vector u.

    exponent_rows has shape (m, k); returns an (m,) complex array.
    """
    u = _angles(u)
    k = len(u)
    exponent_rows = np.asarray(exponent_rows, dtype=float)
    mats = np.exp(1j * u[None, :, None] * exponent_rows[:, None, :])
    nums = np.linalg.det(mats)
    den = _alt_det(u, range(k - 1, -1, -1))
    return nums / den


def weyl_dimension(exponents: Sequence[int]) -> int:
    """S_J(0, ..., 0) = prod_{i<j} (J_i - J_j) / (j - i), exactly."""
    exponents = tuple(int(e) for e in exponents)
    k = len(exponents)
    out = Fraction(1)
    for i in range(k):
        for j in range(i + 1, k):
            out *= Fraction(exponents[i] - exponents[j], j - i)
    assert out.denominator == 1
    return int(out)


def weyl_dimension_partition(lam: Sequence[int], k: int) -> int:
    """Dimension of the GL(k) representation with highest weight lam."""
    full = tuple(lam) + (0,) * (k - len(lam))
    return weyl_dimension(tuple(full[j] + (k - 1 - j) for j in range(k)))


def asymptotic_schur_ratio(lam: Sequence[int], u: Sequence[float], n: int) -> tuple[complex, complex]:
    """Main term and exact value of s_lam(exp(2*pi*i*u/n)) / s_lam(exp(2*pi*i*r0/n)).

    Here r0 is the centered root, lam must have last part 0 and u must sum
    to 0.  Returns (main_term, exact_ratio); the main term is
    1 - (2*pi)^2 K(tilde I_lam) K(u) / (2 (k^2 - 1) n^2).
    """
    k = len(u)
    if k < 2:
        raise ValueError("asymptotic ratio needs k >= 2")
    full = tuple(lam) + (0,) * (k - len(lam))
    if len(full) != k:
        raise ValueError("partition longer than the angle vector")
    # a positive last part is a ladder shift; it cancels from both sides
    # on the zero-sum domain, so reduce to last part 0
    full = tuple(p - full[-1] for p in full)
    if abs(sum(u)) > 1e-12:
        raise ValueError("angle vector must sum to 0")
    size = sum(full)
    if size * max(max(abs(v) for v in u), k / 3.0) > n:
        raise ValueError("outside the validity window")

    exponents = tuple(full[j] + (k - 1 - j) for j in range(k))
    kt_lam = float(k_stat(tilde(exponents)))
    ku = float(k_stat(list(u)))
    main = 1.0 - (2.0 * math.pi) ** 2 * kt_lam * ku / (2.0 * (k * k - 1) * n * n)

    r0 = [(k - 1) / 2.0 - j for j in range(k)]
    num = schur_at(exponents, [2.0 * math.pi * v / n for v in u]).value
    den = schur_at(exponents, [2.0 * math.pi * v / n for v in r0]).value
    return complex(main), num / den
