"""Heat kernels of the invariant diffusions on the eigenvalue torus.

The kernels are character series over decreasing integer exponent
tuples: the traceless kernel sums over tuples with last entry 0, the
full unitary kernel adds a lattice of diagonal shifts with Gaussian
weights.  Every evaluation carries a rigorous bound on the dropped
mass, so truncation is certified rather than heuristic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .configurations import AnglePoint, k_stat, partitions_of, tilde
from .schur import schur_batch, vandermonde

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class HeatParams:
    alpha: float
    gamma: float
    t: float

    def __post_init__(self):
        if self.alpha < 0 or self.gamma < 0 or (self.alpha == 0 and self.gamma == 0):
            raise ValueError("need alpha, gamma >= 0 and not both zero")
        if self.t <= 0:
            raise ValueError("need t > 0")


@dataclass(frozen=True)
class KernelEvaluation:
    value: float
    truncation_radius: int
    tail_bound: float


class TruncationError(RuntimeError):
    def __init__(self, message: str, achieved: float):
        super().__init__(message)
        self.achieved = achieved


def kappa(exponents: Sequence[int], alpha: float, gamma: float, k: int) -> float:
    """(gamma/k) K(centered J) + (alpha/k^2) (size(J) - size(root))^2."""
    exponents = tuple(int(e) for e in exponents)
    if len(exponents) != k:
        raise ValueError("exponent tuple has wrong length")
    kt = float(k_stat(tilde(exponents)))
    shift = sum(exponents) - k * (k - 1) // 2
    return gamma / k * kt + alpha / k ** 2 * shift ** 2


def kappa_heat(exponents: Sequence[int], k: int) -> float:
    """Regularization exponent with alpha = gamma = k."""
    return kappa(exponents, float(k), float(k), k)


def dyson_fourier_multiplier(exponents: Sequence[int], params: HeatParams,
                             k: int | None = None) -> float:
    """exp(-kappa_{alpha,gamma}(J) t), the coefficient-wise heat action."""
    if k is None:
        k = len(exponents)
    return math.exp(-kappa(exponents, params.alpha, params.gamma, k) * params.t)


def _angles(u) -> np.ndarray:
    if isinstance(u, AnglePoint):
        return np.asarray(u.angles, dtype=float)
    return np.asarray(u, dtype=float)


# ---------------------------------------------------------------------------
# term tables with certified tails
# ---------------------------------------------------------------------------

def _dim_cap(s: int, k: int) -> float:
    """Upper bound on the Weyl dimension of a size-s highest weight."""
    out = 1.0
    for i in range(1, k + 1):
        for j in range(i + 1, k + 1):
            out *= (s + j - i) / (j - i)
    return out


def _npart_cap(s: int, k: int) -> float:
    """Upper bound on the number of partitions of s into < k parts."""
    return float((s + 1) ** max(k - 2, 0))


def _kmin(s: int, k: int) -> float:
    """Lower bound on K(centered J) over size-s weights with < k parts.

    The largest part is at least s/(k-1), so the exponent spread is at
    least s/(k-1) + k-1 and K >= (sup-norm)^2 / k >= (spread/2)^2 / k.
    """
    if s == 0:
        return 0.0
    spread = s / (k - 1) + (k - 1)
    return spread * spread / (4.0 * k)


def _series_tail(start: int, k: int, gt: float, max_iter: int = 200000) -> float:
    """Bound sum_{s > start} #partitions * dim^2 * exp(-gt * Kmin / k).

    The summand ratio is strictly decreasing in s, so once it drops below
    0.9 the remainder closes geometrically.
    """
    if k == 1:
        return 0.0  # the only traceless weight is the root itself
    total = 0.0
    prev = None
    s = start + 1
    for _ in range(max_iter):
        term = _npart_cap(s, k) * _dim_cap(s, k) ** 2 * math.exp(-gt * _kmin(s, k) / k)
        total += term
        if term == 0.0:
            return total + 1e-300
        if prev is not None and 0.0 < term < prev and term / prev < 0.9:
            r = term / prev
            total += term * r / (1.0 - r)
            return total
        prev = term
        s += 1
    return math.inf


@lru_cache(maxsize=256)
def _suk_term_table(k: int, gt: float, tol: float, shell_cap: int):
    """Exponent rows and weights for the traceless series at gamma*t = gt.

    Shells are partition sizes; growth stops when three consecutive
    shells are individually below tol/10 and the analytic tail is below
    tol.  Returns (rows, weights, radius, tail_bound).
    """
    if gt <= 0:
        raise ValueError("need gamma * t > 0")
    rows: list[tuple[int, ...]] = []
    weights: list[float] = []
    quiet = 0
    s = 0
    while True:
        shell_mass = 0.0
        for lam in partitions_of(s, k - 1):
            full = lam + (0,) * (k - len(lam))
            exps = tuple(full[j] + (k - 1 - j) for j in range(k))
            kt = float(k_stat(tilde(exps)))
            w = math.exp(-gt * kt / k)
            d = 1.0
            for i in range(k):
                for j in range(i + 1, k):
                    d *= (exps[i] - exps[j]) / (j - i)
            shell_mass += d * d * w
            rows.append(exps)
            weights.append(w)
        quiet = quiet + 1 if shell_mass < tol / 10.0 else 0
        if quiet >= 3:
            tail = _series_tail(s, k, gt)
            if tail < tol:
                return (np.array(rows, dtype=np.int64), np.array(weights), s, tail)
        s += 1
        if s > shell_cap:
            tail = _series_tail(s - 1, k, gt)
            raise TruncationError(
                f"no certified tail below {tol} within {shell_cap} shells "
                f"(best bound {tail:.3e}); increase gamma*t or the cap", tail)


def heat_kernel_suk(u, v, gamma: float, t: float, tol: float = 1e-10,
                    shell_cap: int = 4000, congruence_tol: float = 1e-8) -> KernelEvaluation:
    """Traceless-diffusion density between angle tuples with equal totals.

    Returns 0 when the angle totals differ mod 2*pi (the kernel lives on
    one congruence slice).  Otherwise evaluates the raw character
    series, which only depends on the angles mod 2*pi.
    """
    ua, va = _angles(u), _angles(v)
    k = len(ua)
    if len(va) != k:
        raise ValueError("angle tuples differ in length")
    gap = (float(ua.sum()) - float(va.sum())) / TWO_PI
    if abs(gap - round(gap)) > congruence_tol:
        return KernelEvaluation(0.0, 0, 0.0)
    if k == 1:
        # the traceless slice is a point; the density is identically 1
        return KernelEvaluation(1.0, 0, 0.0)
    if gamma * t <= 0:
        raise ValueError("need gamma * t > 0")
    rows, weights, radius, tail = _suk_term_table(k, gamma * t, tol, shell_cap)
    su = schur_batch(rows, ua)
    sv = schur_batch(rows, va)
    total = complex(np.sum(weights * np.conj(su) * sv))
    return KernelEvaluation(total.real, radius, tail + abs(total.imag))


def _gauss_lattice_sum(a: float, center: float, delta: float,
                       tol: float) -> tuple[complex, float]:
    """sum_l exp(-a (center + l)^2) exp(i l delta) with a certified tail.

    Terms are added outward from the minimizing integer until they are
    below tol and the step ratio permits a geometric closure.
    """
    l0 = int(round(-center))
    total = complex(math.exp(-a * (center + l0) ** 2)) * np.exp(1j * l0 * delta)
    tail = 0.0
    for direction in (1, -1):
        prev = math.exp(-a * (center + l0) ** 2)
        l = l0 + direction
        while True:
            term = math.exp(-a * (center + l) ** 2)
            total += term * np.exp(1j * l * delta)
            ratio = term / prev if prev > 0 else 0.0
            if term < tol and ratio < 0.9:
                tail += term * ratio / (1.0 - ratio) if ratio > 0 else 0.0
                break
            prev = term
            l += direction
    return complex(total), tail


def _gauss_lattice_cap(a: float) -> float:
    """sup over offsets of sum_l exp(-a (offset + l)^2)."""
    cap = 2.0
    j = 1
    while True:
        term = 2.0 * math.exp(-a * j * j)
        cap += term
        if term < 1e-16:
            return cap
        j += 1


def heat_kernel_uk(u, v, params: HeatParams, tol: float = 1e-10,
                   shell_cap: int = 4000) -> KernelEvaluation:
    """Full unitary heat kernel: traceless shells times a Gaussian lattice.

    Exponent tuples split as a last-entry-0 tuple plus an integer
    multiple of the all-ones vector; the diagonal multiples contribute a
    theta factor decaying at rate alpha * t.
    """
    if params.alpha <= 0 or params.gamma <= 0:
        raise ValueError("the full kernel needs alpha, gamma, t > 0")
    ua, va = _angles(u), _angles(v)
    k = len(ua)
    if len(va) != k:
        raise ValueError("angle tuples differ in length")
    delta = float(va.sum()) - float(ua.sum())
    a = params.alpha * params.t
    root_size = k * (k - 1) // 2

    if k == 1:
        theta, theta_tail = _gauss_lattice_sum(a, 0.0, delta, tol / 4.0)
        return KernelEvaluation(theta.real, 0, theta_tail + abs(theta.imag))

    theta_cap = _gauss_lattice_cap(a)
    rows, weights, radius, su_tail = _suk_term_table(
        k, params.gamma * params.t, tol / (2.0 * theta_cap), shell_cap)
    su = schur_batch(rows, ua)
    sv = schur_batch(rows, va)
    base = weights * np.conj(su) * sv
    base_mass = float(np.abs(base).sum())

    total = 0.0 + 0.0j
    theta_tails = 0.0
    per_row_tol = tol / (4.0 * max(base_mass, 1.0))
    for idx in range(len(rows)):
        center = (int(rows[idx].sum()) - root_size) / k
        theta, theta_tail = _gauss_lattice_sum(a, center, delta, per_row_tol)
        total += base[idx] * theta
        theta_tails += abs(base[idx]) * theta_tail
    tail = su_tail * theta_cap + theta_tails + abs(total.imag)
    return KernelEvaluation(total.real, radius, tail)


# ---------------------------------------------------------------------------
# determinantal form of the nonintersecting circular motion
# ---------------------------------------------------------------------------

def wrapped_gaussian_propagator(x: float, y: float, t: float, k: int,
                                theta_terms: int) -> float:
    """sqrt(k/(2 pi t)) sum_l (-1)^(l(k+1)) exp(-k (y - x + 2 pi l)^2 / (2 t))."""
    out = 0.0
    for ell in range(-theta_terms, theta_terms + 1):
        sign = -1.0 if (ell * (k + 1)) % 2 else 1.0
        out += sign * math.exp(-k * (y - x + TWO_PI * ell) ** 2 / (2.0 * t))
    return math.sqrt(k / (TWO_PI * t)) * out


def determinantal_kernel_11(u, v, t: float, theta_terms: int = 12) -> float:
    """|V(v)|/|V(u)| times det of the wrapped one-particle propagators.

    Transition density (in v) of k circular Brownian particles
    conditioned never to collide.
    """
    if theta_terms < 1:
        raise ValueError("need at least one lattice term")
    ua, va = _angles(u), _angles(v)
    k = len(ua)
    vu = abs(vandermonde(ua))
    if vu < 1e-12:
        raise ValueError("start point has coinciding angles; use the series kernel")
    mat = np.empty((k, k))
    for i in range(k):
        for j in range(k):
            mat[i, j] = wrapped_gaussian_propagator(ua[i], va[j], t, k, theta_terms)
    return float(abs(vandermonde(va)) / vu * np.linalg.det(mat))


def series_kernel_density_11(u, v, t: float, tol: float = 1e-12) -> float:
    """(1,1)-series kernel in transition-density normalization.

    Poisson summation of the signed wrapped propagators turns the
    determinantal form into the character series on a lattice shifted by
    the centered root: the density equals
    exp(-t ||centered root||^2 / (2k)) |V(v)|^2 / (2 pi)^k times the
    series at half the time (the series generator carries no 1/2 in
    front of the Laplacian).
    """
    ua, va = _angles(u), _angles(v)
    k = len(ua)
    ev = heat_kernel_uk(ua, va, HeatParams(1.0, 1.0, t / 2.0), tol=tol)
    root_sq = k * (k * k - 1) / 12.0
    return (math.exp(-t * root_sq / (2.0 * k))
            * abs(vandermonde(va)) ** 2 / TWO_PI ** k * ev.value)


# ---------------------------------------------------------------------------
# slice quadrature helpers
# ---------------------------------------------------------------------------

def _slice_grid(k: int, total_angle: float, points: int) -> np.ndarray:
    """Grid on the slice of fixed total angle, first k-1 coordinates free."""
    axes = [np.arange(points) * TWO_PI / points] * (k - 1)
    grids = np.meshgrid(*axes, indexing="ij")
    flat = np.stack([g.ravel() for g in grids], axis=1)
    last = total_angle - flat.sum(axis=1)
    return np.concatenate([flat, last[:, None]], axis=1)


def _alt_dets(vs: np.ndarray, exponents: np.ndarray) -> np.ndarray:
    """det(e^{i v_l e_m}) for a batch of angle rows."""
    return np.linalg.det(np.exp(1j * vs[:, :, None] * exponents[None, None, :].astype(float)))


def suk_slice_integral(u, gamma: float, t: float, points: int = 256,
                       tol: float = 1e-12) -> float:
    """Slice integral of the traceless kernel against the orbit volume.

    Parametrizes the congruence slice through u by the first k-1 angles
    over [0, 2*pi)^(k-1) and returns
    integral(K(u, v) |V(v)|^2) / (k! (2 pi)^(k-1)), which is 1 for a
    normalized kernel.  Works division-free via K |V|^2 = sum a_J
    conj(a_root).
    """
    ua = _angles(u)
    k = len(ua)
    rows, weights, _, _ = _suk_term_table(k, gamma * t, tol, 4000)
    su = np.conj(schur_batch(rows, ua)) * weights

    vs = _slice_grid(k, float(ua.sum()), points)
    den = _alt_dets(vs, np.arange(k - 1, -1, -1))
    acc = np.zeros(len(vs), dtype=complex)
    for idx in range(len(rows)):
        acc += su[idx] * _alt_dets(vs, rows[idx])
    integrand = (acc * np.conj(den)).real
    cell = (TWO_PI / points) ** (k - 1)
    return float(integrand.sum() * cell / (math.factorial(k) * TWO_PI ** (k - 1)))


def suk_chapman_kolmogorov_residual(u, w, gamma: float, t: float, s: float,
                                    points: int = 256, tol: float = 1e-12) -> float:
    """|K_{t+s}(u, w) - slice-integral of K_t(u, .) K_s(., w)|."""
    ua, wa = _angles(u), _angles(w)
    k = len(ua)
    direct = heat_kernel_suk(ua, wa, gamma, t + s, tol=tol).value

    rows_t, wt, _, _ = _suk_term_table(k, gamma * t, tol, 4000)
    rows_s, ws, _, _ = _suk_term_table(k, gamma * s, tol, 4000)
    cu = np.conj(schur_batch(rows_t, ua)) * wt      # coefficients of K_t(u, .)
    cw = schur_batch(rows_s, wa) * ws               # coefficients of K_s(., w)

    vs = _slice_grid(k, float(ua.sum()), points)
    left = np.zeros(len(vs), dtype=complex)
    for idx in range(len(rows_t)):
        left += cu[idx] * _alt_dets(vs, rows_t[idx])
    right = np.zeros(len(vs), dtype=complex)
    for idx in range(len(rows_s)):
        right += np.conj(cw[idx]) * _alt_dets(vs, rows_s[idx])
    # K_t(u,v) K_s(v,w) |V(v)|^2 = (left/den) conj(right/den) |den|^2
    integrand = (left * np.conj(right)).real
    cell = (TWO_PI / points) ** (k - 1)
    composed = float(integrand.sum() * cell / (math.factorial(k) * TWO_PI ** (k - 1)))
    return abs(composed - direct)
