"""Numerical validation of the large-convolution limit behavior.

Four checks: pointwise coefficient decay of long convolutions against
the diffusion multiplier, the local comparison of a long convolution
with the traceless heat kernel, a transport-distance upper bound from
coefficient differences, and the asymptotic form of large enumerative
counts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .configurations import (
    Configuration,
    dual,
    embed_raw,
    k_stat,
    partitions_of,
    tilde,
)
from .harmonic import HMeasure, aggregate, convolve_sequence, dirac, fourier, moments
from .heat import (
    TWO_PI,
    _gauss_lattice_cap,
    _suk_term_table,
    heat_kernel_suk,
)
from .qcoh import CohomologyClass, class_measure, class_stats, enumerative_count, qdim
from .schur import schur_batch
from .spectral import SpectralData

GAMMA_MODES = ("k_stat", "norm2", "local_limit")


def gamma_coefficient(stats, k: int, mode: str = "k_stat") -> float:
    """Diffusion coefficient matching the coefficient-decay exponent.

    ``k_stat`` is the default, k K(m) / (2 (k^2 - 1)); the alternatives
    (selectable for comparison) rescale by the other published choices.
    """
    if mode == "k_stat":
        return k * stats.k_stat / (2.0 * (k * k - 1))
    if mode == "norm2":
        return k * stats.tilde_norm2 / (2.0 * (k * k - 1))
    if mode == "local_limit":
        return k * stats.k_stat / (k * k - 1)
    raise ValueError(f"unknown gamma mode {mode!r}")


def m_candidates(measures: Sequence[HMeasure]) -> dict[str, float]:
    """Third-over-second moment ratios controlling the error terms."""
    stats = aggregate(measures)
    k = measures[0].sd.k
    out = {}
    out["var_ratio"] = (stats.var3 / stats.var2 ** 1.5) if stats.var2 > 1e-14 else 0.0
    out["k_ratio"] = (stats.hat_shift3 / stats.k_stat ** 1.5) if stats.k_stat > 1e-14 else 0.0
    out["norm_ratio"] = (stats.tilde_norm3 / (k ** 3 * stats.tilde_norm2 ** 1.5)
                         if stats.tilde_norm2 > 1e-14 else 0.0)
    return out


# ---------------------------------------------------------------------------
# coefficient decay
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DecayRow:
    exponents: tuple[int, ...]
    predicted: complex
    actual: complex
    error: float
    in_window: bool


def decay_window(measures: Sequence[HMeasure], c: float = 1.0) -> tuple[float, float]:
    """(sup-norm bound on centered J, bound on the size shift) for validity."""
    stats = aggregate(measures)
    k = measures[0].sd.k
    m = len(measures)
    cands = m_candidates(measures)
    m_const = max(cands["var_ratio"], cands["k_ratio"], 1e-12)
    n = measures[0].sd.n
    sup_bound = c * n / (m ** (1 / 3) * m_const ** (1 / 3) * max(stats.k_stat, 1e-12) ** 0.5)
    if stats.var2 > 1e-14:
        size_bound = c * k * n / (m ** (1 / 3) * m_const ** (1 / 3) * stats.var2 ** 0.5)
    else:
        size_bound = math.inf
    return sup_bound, size_bound


def fourier_decay_check(measures: Sequence[HMeasure], exponents: Sequence[int],
                        sd: SpectralData, window_c: float = 1.0) -> DecayRow:
    """Compare the coefficient of a long convolution with its Gaussian form.

    predicted = phase(size shift) * exp(-(m (2 pi)^2 / 2 n^2)
    [K(m) K(centered J)/(k^2-1) + Var(m) shift^2 / k^2]); actual is the
    product of the individual transforms at the reduced index.
    """
    if not measures:
        raise ValueError("empty measure sequence")
    k, n = sd.k, sd.n
    exponents = tuple(int(e) for e in exponents)
    stats = aggregate(measures)
    m = len(measures)
    shift = sum(exponents) - k * (k - 1) // 2
    kt = float(k_stat(tilde(exponents)))

    phase = np.exp(2j * math.pi * m * stats.mean * shift / (k * n))
    spread_term = stats.k_stat * kt / (k * k - 1) if k > 1 else 0.0
    damp = math.exp(-(m * TWO_PI ** 2 / (2.0 * n * n))
                    * (spread_term + stats.var2 * shift ** 2 / (k * k)))
    predicted = complex(phase * damp)

    reduced = reduce_mod_n(exponents, n)
    j_idx = sd.index[reduced]
    transforms: dict[int, np.ndarray] = {}
    actual = 1.0 + 0.0j
    for mu in measures:
        if id(mu) not in transforms:
            transforms[id(mu)] = fourier(mu, sd).values
        actual *= transforms[id(mu)][j_idx]
    actual = complex(actual)

    sup_bound, size_bound = decay_window(measures, window_c)
    sup_norm = max(abs(float(v)) for v in tilde(exponents))
    in_window = sup_norm <= sup_bound and abs(shift) <= size_bound
    return DecayRow(exponents, predicted, actual, abs(predicted - actual), in_window)


def reduce_mod_n(exponents: Sequence[int], n: int) -> tuple[int, ...]:
    """The vertex whose parts agree with the exponents mod n.

    Defined for strictly decreasing tuples whose spread is below n.
    """
    exponents = tuple(int(e) for e in exponents)
    if exponents[0] - exponents[-1] >= n:
        raise ValueError("spread >= n has no single-vertex reduction")
    reduced = sorted((e % n for e in exponents), reverse=True)
    if len(set(reduced)) != len(reduced):
        raise ValueError("exponents collide mod n")
    return tuple(reduced)


# ---------------------------------------------------------------------------
# local comparison with the traceless kernel
# ---------------------------------------------------------------------------

@dataclass
class LimitReport:
    k: int
    n: int
    m: int
    alpha: float
    gamma: float
    t0: float
    mean_shift: float
    k_stat: float
    var2: float
    m_candidates: dict[str, float]
    sup_error: float
    mean_error: float
    l1_error: float
    off_class_mass: float
    supported_class: int | None
    congruence_convention: str
    truncation_radius: int
    rows: list[dict] = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = dict(self.__dict__)
        out["rows"] = list(self.rows)
        out["metadata"] = dict(self.metadata)
        return out


def local_limit_check(measures: Sequence[HMeasure], start: Configuration,
                      sd: SpectralData, gamma_mode: str = "k_stat",
                      kernel_tol: float = 1e-10,
                      keep_rows: bool = True) -> LimitReport:
    """Compare n^{-1} (convolution coefficients) with the kernel density.

    Every factor must have a deterministic total position (second
    central moment of the size equal to zero); the convolution then
    lives on a single size class mod n and is matched there against the
    traceless kernel at a rotated start point.
    """
    k, n = sd.k, sd.n
    if not measures:
        result = dirac(start, sd)
        return LimitReport(
            k=k, n=n, m=0, alpha=0.0, gamma=0.0, t0=0.0, mean_shift=0.0,
            k_stat=0.0, var2=0.0, m_candidates={}, sup_error=math.nan,
            mean_error=math.nan, l1_error=math.nan,
            off_class_mass=float(result.weights[
                np.array([v.size % n for v in sd.vertices]) != start.size % n
            ].max(initial=0.0)),
            supported_class=start.size % n,
            congruence_convention="degenerate", truncation_radius=0)
    for i, mu in enumerate(measures):
        if moments(mu).var2 > 1e-10:
            raise ValueError(f"factor {i} has nonzero size variance")
    stats = aggregate(measures)
    m = len(measures)
    t0 = TWO_PI ** 2 * m / (n * n)
    gamma = gamma_coefficient(stats, k, gamma_mode) if k > 1 else 0.0
    alpha = 0.5 * stats.var2

    result = convolve_sequence(measures, dirac(start, sd), sd)
    coeffs = result.e_coeffs

    shift_total = m * stats.mean
    class_full = int(round(start.size + shift_total)) % n
    class_over_k = int(round(start.size + shift_total / k)) % n
    sizes = np.array([v.size % n for v in sd.vertices])
    mass_by_class = np.zeros(n)
    for i in range(sd.num_vertices):
        mass_by_class[sizes[i]] += result.weights[i]
    observed = int(mass_by_class.argmax())
    off_class = float(result.weights[sizes != observed].max(initial=0.0))
    if observed == class_full:
        convention = "size + total_shift"
    elif observed == class_over_k:
        convention = "size + total_shift / k"
    else:
        convention = "neither"

    rotated = [a + TWO_PI * shift_total / (k * n) for a in embed_raw(start)]
    rows = []
    errs = []
    radius = 0
    for i, v in enumerate(sd.vertices):
        lhs = float(coeffs[i]) / n
        if sizes[i] == observed:
            ev = heat_kernel_suk(embed_raw(v), rotated, gamma, t0, tol=kernel_tol)
            rhs, radius = ev.value, max(radius, ev.truncation_radius)
        else:
            rhs = 0.0
        err = abs(lhs - rhs)
        errs.append(err)
        if keep_rows:
            rows.append({"vertex": list(v.parts), "lhs": lhs, "rhs": rhs,
                         "error": err, "in_class": bool(sizes[i] == observed)})

    errs_arr = np.array(errs)
    in_class = sizes == observed
    return LimitReport(
        k=k, n=n, m=m, alpha=alpha, gamma=gamma, t0=t0,
        mean_shift=stats.mean, k_stat=stats.k_stat, var2=stats.var2,
        m_candidates=m_candidates(measures),
        sup_error=float(errs_arr[in_class].max()),
        mean_error=float(errs_arr[in_class].mean()),
        l1_error=float(errs_arr.sum()),
        off_class_mass=off_class,
        supported_class=observed,
        congruence_convention=convention,
        truncation_radius=radius,
        rows=rows,
    )


# ---------------------------------------------------------------------------
# transport-distance upper bound from coefficient differences
# ---------------------------------------------------------------------------

def coefficient_window(k: int, k_stat_max: float, shift_max: int) -> list[tuple[int, ...]]:
    """Exponent tuples with K(centered J) <= k_stat_max, |shift| <= shift_max."""
    if k == 1:
        return [(s,) for s in range(-shift_max, shift_max + 1)]
    s_cap = int(2 * (k - 1) * math.sqrt(k * max(k_stat_max, 0.0))) + k
    out = []
    for s in range(s_cap + 1):
        for lam in partitions_of(s, k - 1):
            full = lam + (0,) * (k - len(lam))
            base = tuple(full[j] + (k - 1 - j) for j in range(k))
            kt = float(k_stat(tilde(base)))
            if kt > k_stat_max:
                continue
            base_shift = sum(base) - k * (k - 1) // 2
            ell_lo = math.ceil((-shift_max - base_shift) / k)
            ell_hi = math.floor((shift_max - base_shift) / k)
            for ell in range(ell_lo, ell_hi + 1):
                out.append(tuple(e + ell for e in base))
    return sorted(set(out))


def _gauss_tail_beyond(a: float, cutoff: float) -> float:
    """Bound sum over lattice points x with |x| > cutoff of exp(-a x^2)."""
    total = 0.0
    prev = None
    j = 0
    while True:
        term = 2.0 * math.exp(-a * (cutoff + j) ** 2)
        total += term
        if term == 0.0:
            return total + 1e-300
        if prev is not None and prev > 0 and term / prev < 0.9:
            r = term / prev
            return total + term * r / (1.0 - r)
        prev = term
        j += 1


def _wasserstein_remainder(k: int, t: float, k_stat_max: float,
                           shift_max: int) -> float:
    """Certified bound on 4 sum d^2 e^{-2 kappa t} / kappa off the window.

    Valid when both coefficient families are transforms of normalized
    positive measures, so each coefficient is at most the weight
    dimension.
    """
    try:
        rows, weights, _, table_tail = _suk_term_table(k, 2.0 * t * k, 1e-9, 4000)
    except Exception:
        return math.inf
    theta_cap = _gauss_lattice_cap(2.0 * t / k)
    total = 0.0
    root_size = k * (k - 1) // 2
    for idx in range(len(rows)):
        exps = rows[idx]
        kt = float(k_stat(tilde(tuple(int(e) for e in exps))))
        d = 1.0
        for i in range(k):
            for j in range(i + 1, k):
                d *= (exps[i] - exps[j]) / (j - i)
        w = weights[idx]  # e^{-2 t K}
        if kt > k_stat_max:
            total += 4.0 * d * d * w * theta_cap / kt
        else:
            beyond = _gauss_tail_beyond(2.0 * t / k, float(shift_max))
            total += 4.0 * d * d * w * beyond * k / max(shift_max, 1) ** 2
    # kappa >= 1 off the root for every k, so 1/kappa <= 1 on the far tail
    total += 4.0 * table_tail * theta_cap
    return total


def wasserstein_upper_bound(c1: dict[tuple[int, ...], complex],
                            c2: dict[tuple[int, ...], complex],
                            k: int, t_grid: Sequence[float],
                            include_tail: bool = True) -> float:
    """min over t of 2 k sqrt(2 t) + sqrt(sum e^{-2 kappa t} |dc|^2 / kappa).

    kappa is the regularization exponent with alpha = gamma = k.  The
    sum runs over the provided index set; with include_tail the dropped
    indices are bounded through the dimension cap |c| <= d_J.
    """
    if not t_grid:
        raise ValueError("empty time grid")
    if set(c1) != set(c2):
        raise ValueError("coefficient maps must share an index set")
    root = tuple(range(k - 1, -1, -1))
    entries = []
    k_stat_max = 0.0
    shift_max = 0
    for exps in c1:
        if tuple(exps) == root:
            continue
        kt = float(k_stat(tilde(exps)))
        shift = sum(exps) - k * (k - 1) // 2
        kap = kt + shift ** 2 / k
        entries.append((kap, abs(c1[exps] - c2[exps]) ** 2))
        k_stat_max = max(k_stat_max, kt)
        shift_max = max(shift_max, abs(shift))

    best = math.inf
    for t in t_grid:
        if t <= 0:
            raise ValueError("time grid must be positive")
        s = sum(math.exp(-2.0 * kap * t) / kap * dc2 for kap, dc2 in entries)
        if include_tail:
            s += _wasserstein_remainder(k, t, k_stat_max, shift_max)
        best = min(best, 2.0 * k * math.sqrt(2.0 * t) + math.sqrt(s))
    return best


def embedded_fourier_table(mu: HMeasure, windows: Sequence[tuple[int, ...]],
                           rotation: float = 0.0) -> dict[tuple[int, ...], complex]:
    """Transform of the embedded measure over many exponent tuples at once.

    Each value is sum_I p(I) S_J(xi_n(I)) times the rotation phase
    exp(i * rotation * shift(J)).
    """
    sd = mu.sd
    rows = np.array([tuple(int(e) for e in w) for w in windows], dtype=np.int64)
    totals = np.zeros(len(rows), dtype=complex)
    for i, v in enumerate(sd.vertices):
        if mu.weights[i] == 0.0:
            continue
        totals += mu.weights[i] * schur_batch(rows, embed_raw(v))
    shifts = rows.sum(axis=1) - sd.k * (sd.k - 1) // 2
    totals = totals * np.exp(1j * rotation * shifts)
    return {tuple(int(e) for e in rows[i]): complex(totals[i])
            for i in range(len(rows))}


def embedded_fourier(mu: HMeasure, exponents: Sequence[int],
                     rotation: float = 0.0) -> complex:
    """Transform of the embedded measure at one exponent tuple."""
    return embedded_fourier_table(mu, [tuple(exponents)], rotation)[
        tuple(int(e) for e in exponents)]


def multiplier_prediction(start: Configuration,
                          windows: Sequence[tuple[int, ...]],
                          alpha: float, gamma: float,
                          t: float) -> dict[tuple[int, ...], complex]:
    """Heat-multiplier coefficients exp(-kappa t) S_J(start embedding)."""
    from .heat import kappa as kappa_fn

    k = start.k
    rows = np.array([tuple(int(e) for e in w) for w in windows], dtype=np.int64)
    svals = schur_batch(rows, embed_raw(start))
    out = {}
    for i, w in enumerate(windows):
        kap = kappa_fn(tuple(int(e) for e in w), alpha, gamma, k)
        out[tuple(int(e) for e in w)] = complex(math.exp(-kap * t) * svals[i])
    return out


# ---------------------------------------------------------------------------
# enumerative asymptotics
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CorollaryResult:
    exact: int
    log_exact: float
    log_asymptotic: float
    asymptotic: float
    ratio: float
    gamma: float
    t0: float


def corollary_check(classes: Sequence[CohomologyClass], d: int,
                    sd: SpectralData, gamma_mode: str = "k_stat",
                    kernel_tol: float = 1e-10) -> CorollaryResult:
    """Exact enumerative count against its kernel asymptotics.

    The asymptotic value is |V(root embedding)|^2 prod qdims / n^(k-1)
    times the kernel average over the end-class weights, evaluated at
    the rotated embeddings.
    """
    k, n = sd.k, sd.n
    exact = enumerative_count(classes, d, sd)
    if exact == 0:
        return CorollaryResult(0, -math.inf, -math.inf, 0.0, math.nan, 0.0, 0.0)
    mids = list(classes[1:-1])
    m = len(mids)
    mid_degree = sum(c.degree for c in mids)
    measures = [class_measure(c, sd) for c in mids]
    stats = aggregate(measures)
    # the traceless kernel is trivial for a single particle
    gamma = gamma_coefficient(stats, k, gamma_mode) if k > 1 else 0.0
    t0 = TWO_PI ** 2 * m / (n * n)

    p0, _, _ = class_stats(classes[0], sd)
    p1, _, _ = class_stats(classes[-1], sd)
    kernel_avg = 0.0
    for v0, w0 in p0.items():
        x = [a + TWO_PI * mid_degree / (k * n) for a in embed_raw(v0)]
        for v1, w1 in p1.items():
            y = embed_raw(dual(v1))
            kernel_avg += w0 * w1 * heat_kernel_suk(x, y, gamma, t0,
                                                    tol=kernel_tol).value
    if kernel_avg <= 0:
        return CorollaryResult(exact, math.log(exact), -math.inf,
                               0.0, math.inf, gamma, t0)

    vmod_root = sd.vmod[sd.root_index]
    log_asym = (2.0 * math.log(vmod_root)
                + sum(math.log(qdim(c, sd)) for c in classes)
                - (k - 1) * math.log(n)
                + math.log(kernel_avg))
    log_exact = math.log(exact)
    ratio = math.exp(log_exact - log_asym)
    asym = math.exp(log_asym) if log_asym < 700 else math.inf
    return CorollaryResult(exact, log_exact, log_asym, asym, ratio, gamma, t0)
