"""Cumulative spectral density estimation.

The spectral CDF P(z) is the fraction of Laplacian eigenvalues at or below
z.  Small graphs get the exact step function from a dense factorization;
large graphs get a stochastic estimate: Hutchinson trace probes combined
with Jackson-damped Chebyshev approximations of spectral step functions,
interpolated monotonically between grid points.

The energy CDF replaces eigenvalue counts with the spectral energy of
training signals (DC component excluded), and is used to adapt filter banks
to a signal class.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import PchipInterpolator

from . import _kernels
from .chebyshev import jackson_coefficients
from .graphs import as_signal


@dataclass
class SpectralCDF:
    """Nondecreasing map [0, lambda_bar] -> [0, 1] with value 1 at the top.

    When built from an exact eigendecomposition the eigenvalues are kept and
    evaluation is the exact step function; otherwise evaluation goes through
    a monotone piecewise-cubic interpolant of the grid values.
    """

    grid: np.ndarray
    values: np.ndarray
    eigenvalues: np.ndarray | None = None
    _interp: PchipInterpolator = field(init=False, repr=False)

    def __post_init__(self):
        self.grid = np.asarray(self.grid, dtype=np.float64)
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.grid.ndim != 1 or self.grid.size < 2:
            raise ValueError("grid must hold at least two points")
        if np.any(np.diff(self.grid) <= 0):
            raise ValueError("grid must be strictly increasing")
        if self.values.shape != self.grid.shape:
            raise ValueError("values must match grid")
        if np.any(np.diff(self.values) < 0):
            raise ValueError("values must be nondecreasing")
        self._interp = PchipInterpolator(self.grid, self.values)

    @property
    def lambda_bar(self):
        return float(self.grid[-1])

    def __call__(self, z, side="right"):
        """Fraction of spectrum <= z (side='right') or < z (side='left').

        The side distinction only matters for exact step evaluation.
        """
        z = np.asarray(z, dtype=np.float64)
        if self.eigenvalues is not None:
            n = self.eigenvalues.size
            out = np.searchsorted(self.eigenvalues, z, side=side) / n
        else:
            out = np.clip(self._interp(np.clip(z, 0.0, self.lambda_bar)),
                          0.0, 1.0)
            out = np.where(z >= self.lambda_bar, 1.0, out)
            out = np.where(z < 0.0, 0.0, out)
        return out if out.ndim else float(out)

    def quantile(self, q):
        """Generalized inverse: smallest z with P(z) >= q."""
        q = np.asarray(q, dtype=np.float64)
        if np.any((q < 0) | (q > 1)):
            raise ValueError("quantile levels must lie in [0, 1]")
        if self.eigenvalues is not None:
            n = self.eigenvalues.size
            k = np.clip(np.ceil(q * n).astype(np.int64), 1, n)
            out = self.eigenvalues[k - 1]
        else:
            zs = np.linspace(0.0, self.lambda_bar, 4001)
            ps = np.clip(self._interp(zs), 0.0, 1.0)
            ps = np.maximum.accumulate(ps)
            idx = np.searchsorted(ps, q, side="left")
            out = zs[np.clip(idx, 0, zs.size - 1)]
        return out if out.ndim else float(out)

    def density(self, z):
        """Derivative of the interpolant (zero floor); a spectral-density
        proxy used to locate sparse regions of the spectrum."""
        z = np.clip(np.asarray(z, dtype=np.float64), 0.0, self.lambda_bar)
        out = np.maximum(self._interp.derivative()(z), 0.0)
        return out if out.ndim else float(out)


def exact_spectral_cdf(eig, lambda_bar=None):
    """Step CDF from an exact eigendecomposition.

    The stored grid carries a point just before and at every distinct
    eigenvalue so the interpolant hugs the steps; evaluation itself uses the
    eigenvalues and is exact.
    """
    vals = np.sort(np.asarray(eig.values, dtype=np.float64))
    n = vals.size
    top = float(vals[-1]) if lambda_bar is None else float(lambda_bar)
    if top < vals[-1]:
        raise ValueError("lambda_bar below the largest eigenvalue")
    uniq, counts = np.unique(vals, return_counts=True)
    cum = np.cumsum(counts) / n
    eps = max(top, 1.0) * 1e-9
    pts = [(0.0, counts[0] / n if uniq[0] == 0.0 else 0.0)]
    prev_cum = pts[0][1]
    for u, c in zip(uniq, cum):
        if u <= 0.0:
            continue
        if u - eps > pts[-1][0] + eps:
            pts.append((u - eps, prev_cum))
        pts.append((u, c))
        prev_cum = c
    if top > pts[-1][0] + eps:
        pts.append((top, 1.0))
    grid = np.array([p[0] for p in pts])
    values = np.array([p[1] for p in pts])
    return SpectralCDF(grid=grid, values=values, eigenvalues=vals)


def _step_coefficients(z, lambda_bar, degree):
    """Chebyshev coefficients of the indicator 1{lambda <= z} on the mapped
    interval; closed form via the arccos of the mapped threshold."""
    s = np.clip(2.0 * z / lambda_bar - 1.0, -1.0, 1.0)
    theta = np.arccos(s)
    k = np.arange(1, degree + 1)
    c = np.empty(degree + 1)
    c[0] = 1.0 - theta / np.pi
    c[1:] = -2.0 * np.sin(k * theta) / (np.pi * k)
    return c


def rademacher_probe(n, seed, index):
    """Sign probe from a stream keyed by (seed, probe index), so results do
    not depend on how probes are batched."""
    rng = np.random.default_rng([seed, index])
    return rng.integers(0, 2, n).astype(np.float64) * 2.0 - 1.0


def estimate_spectral_cdf(lap, n_probes=10, kpm_degree=30, n_grid=50,
                          seed=0):
    """Stochastic spectral CDF on n_grid points spanning [0, lambda_bar].

    For each grid point z the quantity tr(p_z(L)) / N is estimated with
    Rademacher probes, where p_z is the degree-kpm_degree Jackson-damped
    Chebyshev approximation of the step at z.  One Chebyshev moment
    recurrence per probe serves every grid point.  Estimates are clamped to
    [0, 1], repaired to be nondecreasing by a running maximum, and the last
    value is pinned to 1.
    """
    if n_probes < 1 or kpm_degree < 1 or n_grid < 2:
        raise ValueError("n_probes, kpm_degree >= 1 and n_grid >= 2 required")
    lam_bar = lap.lambda_max_bound
    half = lam_bar / 2.0
    moments = np.zeros(kpm_degree + 1)
    rows = lap._row_index()
    for t in range(n_probes):
        eta = rademacher_probe(lap.n, seed, t)
        moments += _kernels.cheb_moments(lap.indptr, lap.indices, lap.data,
                                         kpm_degree + 1, half, half, eta,
                                         rows)
    moments /= n_probes
    damp = jackson_coefficients(kpm_degree)
    grid = np.linspace(0.0, lam_bar, n_grid)
    values = np.empty(n_grid)
    for i, z in enumerate(grid):
        c = _step_coefficients(z, lam_bar, kpm_degree) * damp
        values[i] = (c @ moments) / lap.n
    values = np.clip(values, 0.0, 1.0)
    values = np.maximum.accumulate(values)
    values[-1] = 1.0
    return SpectralCDF(grid=grid, values=values)


def _dc_direction(lap):
    # null vector of the connected-graph Laplacian for each kind
    if lap.kind == "normalized":
        d = np.sqrt(lap.graph.degrees()) if lap.graph is not None else None
        if d is None:
            raise ValueError("normalized energy CDF needs the source graph")
        return d / np.linalg.norm(d)
    return np.full(lap.n, 1.0 / np.sqrt(lap.n))


def estimate_energy_cdf(lap, signals, mode="stochastic", eig=None, n_grid=50,
                        kpm_degree=30):
    """Cumulative spectral energy distribution of training signals.

    Each signal is normalized by its full norm, then its DC component (the
    Laplacian's null direction) is removed; the value at z is the summed
    energy at frequencies in (0, z] over the summed non-DC energy.  Exact
    mode uses Fourier coefficients; stochastic mode filters each signal with
    Jackson-Chebyshev step approximants on the grid.

    Raises on an all-zero or constant training signal, which carries no
    non-DC energy to distribute.
    """
    y = np.atleast_2d(np.asarray(signals, dtype=np.float64))
    if y.shape[1] != lap.n:
        raise ValueError("training signals must have one column per vertex")
    lam_bar = lap.lambda_max_bound
    grid = np.linspace(0.0, lam_bar, n_grid)
    dc = _dc_direction(lap)
    num = np.zeros(n_grid)
    den = 0.0
    damp = jackson_coefficients(kpm_degree)
    half = lam_bar / 2.0
    rows = lap._row_index()
    for t in range(y.shape[0]):
        yt = as_signal(lap.n, y[t])
        nrm = np.linalg.norm(yt)
        if nrm == 0:
            raise ValueError(f"training signal {t} is identically zero")
        yc = yt - dc * (dc @ yt)
        if np.linalg.norm(yc) <= 1e-12 * nrm:
            raise ValueError(f"training signal {t} is constant (DC only)")
        yc = yc / nrm
        den += float(yc @ yc)
        if mode == "exact":
            if eig is None:
                raise ValueError("exact mode needs an eigendecomposition")
            co = eig.fourier(yc) ** 2
            lower = np.searchsorted(eig.values, 1e-12 * lam_bar, side="left")
            for i, z in enumerate(grid):
                hi = np.searchsorted(eig.values, z, side="right")
                num[i] += float(np.sum(co[lower:hi]))
        elif mode == "stochastic":
            for i, z in enumerate(grid):
                c = _step_coefficients(z, lam_bar, kpm_degree) * damp
                fz = _kernels.cheb_apply(lap.indptr, lap.indices, lap.data,
                                         c, half, half, yc, rows)
                num[i] += float(fz @ fz)
        else:
            raise ValueError(f"unknown mode {mode!r}")
    values = np.clip(num / den, 0.0, 1.0)
    values = np.maximum.accumulate(values)
    values[-1] = 1.0
    return SpectralCDF(grid=grid, values=values)
