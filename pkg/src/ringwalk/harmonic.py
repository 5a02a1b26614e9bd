"""h-probability measures on the particle graph: Fourier transform,
convolution and moment statistics.

A measure is stored through its probability weights p(I) >= 0 summing to
one; the coefficient vector on the indicator basis is p(I) / mu_h(I).
The Fourier transform diagonalizes convolution, so long convolution
sequences reduce to pointwise products of coefficient vectors.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .configurations import Configuration, tilde
from .spectral import SpectralData

CLAMP_TOL = 1e-9


@dataclass
class HMeasure:
    """Probability weights over the vertex set of a fixed (k, n) graph."""

    sd: SpectralData
    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.shape != (self.sd.num_vertices,):
            raise ValueError("weight vector has wrong length")
        if w.min() < -CLAMP_TOL:
            raise ValueError(f"negative weight {w.min():.3e}")
        if abs(w.sum() - 1.0) > 1e-8:
            raise ValueError(f"weights sum to {w.sum()}, not 1")
        w = np.clip(w, 0.0, None)
        self.weights = w / w.sum()

    @property
    def e_coeffs(self) -> np.ndarray:
        """Coefficients on the indicator basis, p(I) / mu_h(I)."""
        return self.weights / self.sd.mu_h

    def weight_of(self, config: Configuration) -> float:
        return float(self.weights[self.sd.vertex_index(config)])


@dataclass
class FourierCoeffs:
    sd: SpectralData
    values: np.ndarray

    def value_at(self, config: Configuration) -> complex:
        return complex(self.values[self.sd.vertex_index(config)])


def dirac(config: Configuration, sd: SpectralData) -> HMeasure:
    w = np.zeros(sd.num_vertices)
    w[sd.vertex_index(config)] = 1.0
    return HMeasure(sd, w)


def uniform_neighbors(config: Configuration, sd: SpectralData) -> HMeasure:
    from .configurations import pieri_neighbors

    nbs = pieri_neighbors(config)
    w = np.zeros(sd.num_vertices)
    for nb in nbs:
        w[sd.vertex_index(nb)] = 1.0 / len(nbs)
    return HMeasure(sd, w)


def mix(measures: Sequence[HMeasure], coeffs: Sequence[float]) -> HMeasure:
    if len(measures) != len(coeffs) or not measures:
        raise ValueError("need matching nonempty measure/coefficient lists")
    total = sum(coeffs)
    w = sum(c / total * m.weights for c, m in zip(coeffs, measures))
    return HMeasure(measures[0].sd, w)


# ---------------------------------------------------------------------------
# Fourier transform
# ---------------------------------------------------------------------------

def fourier(mu: HMeasure, sd: SpectralData) -> FourierCoeffs:
    """Phi[mu](J) = sum_I p(I) S_I(xi_n(J)) / S_I(xi_n(I_0))."""
    if mu.sd is not sd and (mu.sd.k, mu.sd.n) != (sd.k, sd.n):
        raise ValueError("measure and spectral data have mismatched (k, n)")
    ratios = mu.weights / sd.h_l
    return FourierCoeffs(sd, sd.s_table.T @ ratios)


def fourier_vector(x: np.ndarray, sd: SpectralData) -> np.ndarray:
    """Transform of an arbitrary indicator-basis vector x."""
    return sd.s_table.T @ (sd.h_r * x)


def inverse_fourier(coeffs: FourierCoeffs, sd: SpectralData,
                    clamp: float = CLAMP_TOL) -> tuple[np.ndarray, HMeasure | None]:
    """Invert on the eigenbasis; returns (indicator-basis vector, measure).

    The measure slot is filled when the result is a valid h-probability
    measure after clamping round-off negatives; otherwise it is None.
    """
    x = (coeffs.sd.s_table.conj() @ (coeffs.sd.mu_h * coeffs.values)) / coeffs.sd.h_r
    if np.abs(x.imag).max() > 1e-7 * max(1.0, np.abs(x).max()):
        return x, None
    p = x.real * sd.mu_h
    measure = None
    if p.min() >= -clamp and abs(p.sum() - 1.0) <= 1e-7:
        measure = HMeasure(sd, np.clip(p, 0.0, None) / np.clip(p, 0.0, None).sum())
    return x, measure


# ---------------------------------------------------------------------------
# convolution
# ---------------------------------------------------------------------------

def convolve(mu: HMeasure, nu: HMeasure, sd: SpectralData) -> HMeasure:
    """Fourier-side product; the result is again an h-probability measure."""
    c = fourier(mu, sd).values * fourier(nu, sd).values
    _, measure = inverse_fourier(FourierCoeffs(sd, c), sd)
    if measure is None:
        raise ArithmeticError("convolution left the h-probability cone")
    return measure


def convolve_sequence(measures: Sequence[HMeasure], base: HMeasure,
                      sd: SpectralData) -> HMeasure:
    """base * m_1 * ... * m_r through one pass of coefficient products.

    Repeated factors (the same object appearing several times) are
    transformed once.
    """
    c = fourier(base, sd).values.copy()
    transforms: dict[int, np.ndarray] = {}
    for m in measures:
        if id(m) not in transforms:
            transforms[id(m)] = fourier(m, sd).values
        c *= transforms[id(m)]
    _, measure = inverse_fourier(FourierCoeffs(sd, c), sd)
    if measure is None:
        raise ArithmeticError("convolution left the h-probability cone")
    return measure


def convolve_direct(mu: HMeasure, nu: HMeasure, sd: SpectralData) -> np.ndarray:
    """Definition-level oracle: sum_I h_r(I) x(I) A_I^h(y) / h_l(I).

    Returns the probability weights; quadratic in the vertex count and
    kept as an independent check of the Fourier path.
    """
    from .spectral import adjacency

    x = mu.e_coeffs
    y = nu.e_coeffs
    out = np.zeros(sd.num_vertices)
    for i, v in enumerate(sd.vertices):
        if x[i] == 0.0:
            continue
        a = adjacency(v, sd)
        transformed = (a @ (sd.h_r * y)) / sd.h_r / sd.h_l[i]
        out += sd.mu_h[i] * x[i] * transformed
    return out * sd.mu_h


# ---------------------------------------------------------------------------
# moments
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MomentSummary:
    mean: float                  # expected total position
    var2: float
    var3: float
    tilde_norm2: float           # E ||centered I||^2
    tilde_norm3: float           # E ||centered I||^3
    k_stat: float                # tilde_norm2 - ||centered root||^2
    hat_shift3: float            # E (size(hat I) - size(root))^3


def _stat_arrays(sd: SpectralData):
    """Per-vertex size, centered norm and base-shift arrays, cached on sd."""
    cached = getattr(sd, "_moment_arrays", None)
    if cached is not None:
        return cached
    parts = np.array([v.parts for v in sd.vertices], dtype=float)
    sizes = parts.sum(axis=1)
    centered = parts - sizes[:, None] / sd.k
    tn = np.sqrt((centered ** 2).sum(axis=1))
    root_size = sd.k * (sd.k - 1) / 2.0
    hshift = (parts - parts[:, -1][:, None]).sum(axis=1) - root_size
    arrays = (sizes, tn, hshift)
    sd._moment_arrays = arrays
    return arrays


def moments(mu: HMeasure) -> MomentSummary:
    cached = getattr(mu, "_moments", None)
    if cached is not None:
        return cached
    sd = mu.sd
    sizes, tn, hshift = _stat_arrays(sd)
    p = mu.weights
    mean = float(p @ sizes)
    tilde_root_sq = sum(float(t) ** 2 for t in tilde(tuple(range(sd.k - 1, -1, -1))))
    out = MomentSummary(
        mean=mean,
        var2=float(p @ (sizes - mean) ** 2),
        var3=float(p @ np.abs(sizes - mean) ** 3),
        tilde_norm2=float(p @ tn ** 2),
        tilde_norm3=float(p @ tn ** 3),
        k_stat=float(p @ tn ** 2) - tilde_root_sq,
        hat_shift3=float(p @ hshift ** 3),
    )
    mu._moments = out
    return out


def root_summary(k: int) -> MomentSummary:
    """Moments of the Dirac measure at the root."""
    root_sq = sum(float(t) ** 2 for t in tilde(tuple(range(k - 1, -1, -1))))
    return MomentSummary(
        mean=k * (k - 1) / 2.0,
        var2=0.0, var3=0.0,
        tilde_norm2=root_sq,
        tilde_norm3=root_sq ** 1.5,
        k_stat=0.0,
        hat_shift3=0.0,
    )


def aggregate(measure_seq: Sequence[HMeasure]) -> MomentSummary:
    """Average the per-measure statistics and subtract the root values."""
    if not measure_seq:
        raise ValueError("empty measure sequence")
    k = measure_seq[0].sd.k
    ref = root_summary(k)
    sums = [moments(m) for m in measure_seq]
    m = len(sums)

    def avg(attr):
        return sum(getattr(s, attr) for s in sums) / m - getattr(ref, attr)

    return MomentSummary(
        mean=avg("mean"),
        var2=avg("var2"),
        var3=avg("var3"),
        tilde_norm2=avg("tilde_norm2"),
        tilde_norm3=avg("tilde_norm3"),
        k_stat=avg("k_stat"),
        hat_shift3=avg("hat_shift3"),
    )


def measure_to_json(mu: HMeasure, cutoff: float = 1e-12) -> dict[str, float]:
    """Sparse weight map; entries below cutoff are dropped as round-off."""
    out = {}
    for i, v in enumerate(mu.sd.vertices):
        if mu.weights[i] > cutoff:
            out[",".join(str(p) for p in v.parts)] = float(mu.weights[i])
    return out


def measure_from_json(data: dict[str, float], sd: SpectralData) -> HMeasure:
    w = np.zeros(sd.num_vertices)
    for key, val in data.items():
        parts = tuple(int(t) for t in key.split(","))
        w[sd.index[parts]] = float(val)
    return HMeasure(sd, w)
