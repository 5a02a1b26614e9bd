"""Spectral data for the particle graph: eigen-table, Perron vectors,
adjacency operators and their stochastic transforms.

For fixed (k, n) every operator A_J in the commuting family is
diagonalized by the vectors w^(I) with entries conj(S_J(xi_n(I))), with
eigenvalue S_J(xi_n(I)).  All tables below are dense; the vertex count
C(n, k) is capped.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field

import numpy as np

from .configurations import (
    Configuration,
    embed_raw,
    enumerate_configs,
    root_configuration,
    step_configuration,
)
from .schur import EPS_NUM, schur_batch, vandermonde_abs_config

DEFAULT_VERTEX_CAP = 5000
ROUNDING_TOL = 1e-6
CACHE_FORMAT_VERSION = 1


class VertexCapError(ValueError):
    pass


class NumericalDegradationError(RuntimeError):
    """Raised when synthesized structure constants fail to be near integers."""


@dataclass
class SpectralData:
    k: int
    n: int
    vertices: list[Configuration]
    index: dict[tuple[int, ...], int]
    s_table: np.ndarray          # s_table[J_idx, I_idx] = S_J(xi_n(I))
    vmod: np.ndarray             # |V(xi_n(I))|
    mu_h: np.ndarray             # invariant probability weights
    h_l: np.ndarray              # left Perron vector, S_I(xi_n(I_0))
    h_r: np.ndarray              # right Perron vector
    _adjacency_cache: dict[int, np.ndarray] = field(default_factory=dict, repr=False)

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    def vertex_index(self, config: Configuration) -> int:
        if config.n != self.n or config.k != self.k:
            raise KeyError(f"{config} belongs to another graph, not ({self.k},{self.n})")
        try:
            return self.index[config.parts]
        except KeyError:
            raise KeyError(f"{config} is not a vertex of this graph") from None

    @property
    def root_index(self) -> int:
        return self.index[root_configuration(self.k, self.n).parts]


@dataclass
class MarkovKernel:
    """Row-stochastic transition matrix; rows index the current state."""

    source: Configuration
    matrix: np.ndarray


def build_spectral(k: int, n: int, cap: int = DEFAULT_VERTEX_CAP,
                   check: bool = True) -> SpectralData:
    """Populate the eigen-table and Perron data for (k, n).

    Fails fast when the orthogonality or Perron identities degrade beyond
    EPS_NUM.
    """
    count = math.comb(n, k)
    if count > cap:
        raise VertexCapError(
            f"C({n},{k}) = {count} exceeds the vertex cap {cap}")
    vertices = enumerate_configs(k, n)
    index = {v.parts: i for i, v in enumerate(vertices)}
    exps = np.array([v.parts for v in vertices], dtype=np.int64)

    s_table = np.empty((count, count), dtype=complex)
    for i, v in enumerate(vertices):
        s_table[:, i] = schur_batch(exps, embed_raw(v))

    vmod = np.array([vandermonde_abs_config(v) for v in vertices])
    mu_h = vmod ** 2 / float(n) ** k
    i0 = index[root_configuration(k, n).parts]
    h_l = s_table[:, i0].real.copy()
    h_r = vmod[i0] * vmod / float(n) ** k

    sd = SpectralData(k, n, vertices, index, s_table, vmod, mu_h, h_l, h_r)
    if check:
        _verify(sd)
    return sd


def _verify(sd: SpectralData) -> None:
    n_k = float(sd.n) ** sd.k
    # Cauchy-type orthogonality of the table columns
    gram = sd.s_table.conj().T @ sd.s_table
    target = np.diag(n_k / sd.vmod ** 2)
    if np.abs(gram - target).max() > 1e-7 * max(1.0, np.abs(target).max()):
        raise NumericalDegradationError("orthogonality of the eigen-table failed")
    # left Perron column is real positive with rel_S_V
    imag = np.abs(sd.s_table[:, sd.root_index].imag).max()
    if imag > EPS_NUM:
        raise NumericalDegradationError("Perron column has imaginary drift")
    if np.abs(sd.vmod[sd.root_index] * sd.h_l - sd.vmod).max() > 1e-8 * sd.vmod.max():
        raise NumericalDegradationError("V-to-Perron identity failed")
    checks = [
        abs(sd.mu_h.sum() - 1.0),
        abs(sd.h_l[sd.root_index] - 1.0),
        abs(float(sd.h_l @ sd.h_r) - 1.0),
        np.abs(sd.h_l * sd.h_r - sd.mu_h).max(),
    ]
    if max(checks) > 1e-8:
        raise NumericalDegradationError(f"Perron normalization failed: {checks}")


# ---------------------------------------------------------------------------
# operators
# ---------------------------------------------------------------------------

def adjacency_raw(j_index: int, sd: SpectralData) -> np.ndarray:
    """Unrounded operator A_J synthesized from the eigendata.

    Entry (I', I) is sum_L S_J(L) S_I(L) mu_h(L) conj(S_{I'}(L)).
    """
    weighted = sd.s_table * (sd.s_table[j_index, :] * sd.mu_h)[None, :]
    return sd.s_table.conj() @ weighted.T


def adjacency(config: Configuration, sd: SpectralData) -> np.ndarray:
    """A_J with entries rounded to the underlying nonnegative integers."""
    j = sd.vertex_index(config)
    cached = sd._adjacency_cache.get(j)
    if cached is not None:
        return cached
    raw = adjacency_raw(j, sd)
    mat = _round_structure_constants(raw)
    sd._adjacency_cache[j] = mat
    return mat


def _round_structure_constants(raw: np.ndarray) -> np.ndarray:
    if np.abs(raw.imag).max() > ROUNDING_TOL:
        raise NumericalDegradationError(
            f"imaginary part {np.abs(raw.imag).max():.3e} exceeds {ROUNDING_TOL}")
    rounded = np.rint(raw.real)
    resid = np.abs(raw.real - rounded).max()
    if resid > ROUNDING_TOL:
        idx = np.unravel_index(np.abs(raw.real - rounded).argmax(), raw.shape)
        raise NumericalDegradationError(
            f"rounding residual {resid:.3e} at {idx} exceeds {ROUNDING_TOL}")
    if rounded.min() < 0:
        raise NumericalDegradationError("negative structure constant after rounding")
    return rounded


def perron_eigenvalue(config: Configuration, sd: SpectralData) -> float:
    """S_J(xi_n(I_0)), the common positive eigenvalue on the Perron vector."""
    return float(sd.h_l[sd.vertex_index(config)])


def markov_kernel(config: Configuration, sd: SpectralData) -> MarkovKernel:
    """Doob transform P^J = diag(1/h_r) A_J diag(h_r) / S_J(xi_n(I_0))."""
    a = adjacency(config, sd)
    lam = perron_eigenvalue(config, sd)
    mat = (a * sd.h_r[None, :]) / (sd.h_r[:, None] * lam)
    rows = mat.sum(axis=1)
    if np.abs(rows - 1.0).max() > 1e-8:
        raise NumericalDegradationError(
            f"kernel rows deviate from 1 by {np.abs(rows - 1.0).max():.3e}")
    np.clip(mat, 0.0, None, out=mat)
    return MarkovKernel(config, mat)


def sample_path(kernel: MarkovKernel, start: Configuration, steps: int,
                seed: int, sd: SpectralData) -> list[Configuration]:
    """Simulate the chain for `steps` transitions; deterministic in seed."""
    if steps < 0:
        raise ValueError("steps must be >= 0")
    state = sd.vertex_index(start)
    rng = np.random.default_rng(seed)
    cums = np.cumsum(kernel.matrix, axis=1)
    cums /= cums[:, -1][:, None]
    path = [sd.vertices[state]]
    draws = rng.random(steps)
    for t in range(steps):
        state = int(np.searchsorted(cums[state], draws[t], side="right"))
        state = min(state, sd.num_vertices - 1)
        path.append(sd.vertices[state])
    return path


def step_kernel(sd: SpectralData) -> MarkovKernel:
    """Kernel of the single-step operator, J = (k, k-2, ..., 0)."""
    return markov_kernel(step_configuration(sd.k, sd.n), sd)


# ---------------------------------------------------------------------------
# persistence
# ---------------------------------------------------------------------------

def cache_filename(k: int, n: int) -> str:
    return f"spectral_k{k}_n{n}_v{CACHE_FORMAT_VERSION}.json"


def default_cache_dir() -> str:
    return os.environ.get("RINGWALK_CACHE_DIR", os.path.join(".", ".ringwalk_cache"))


def save_cache(sd: SpectralData, path: str) -> None:
    payload = {
        "format_version": CACHE_FORMAT_VERSION,
        "k": sd.k,
        "n": sd.n,
        "vertices": [list(v.parts) for v in sd.vertices],
        "s_table": [[[z.real, z.imag] for z in row] for row in sd.s_table],
        "vmod": sd.vmod.tolist(),
    }
    with open(path, "w") as fh:
        json.dump(payload, fh)


def load_cache(path: str) -> SpectralData:
    with open(path) as fh:
        payload = json.load(fh)
    if payload.get("format_version") != CACHE_FORMAT_VERSION:
        raise ValueError(
            f"cache format {payload.get('format_version')} unsupported "
            f"(expected {CACHE_FORMAT_VERSION})")
    k, n = payload["k"], payload["n"]
    vertices = [Configuration(tuple(p), n) for p in payload["vertices"]]
    index = {v.parts: i for i, v in enumerate(vertices)}
    s_table = np.array(
        [[complex(re, im) for re, im in row] for row in payload["s_table"]])
    vmod = np.array(payload["vmod"], dtype=float)
    mu_h = vmod ** 2 / float(n) ** k
    i0 = index[root_configuration(k, n).parts]
    h_l = s_table[:, i0].real.copy()
    h_r = vmod[i0] * vmod / float(n) ** k
    sd = SpectralData(k, n, vertices, index, s_table, vmod, mu_h, h_l, h_r)
    _verify(sd)
    return sd
