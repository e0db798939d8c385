"""Denoising and sparse-approximation tasks built on filter-frame analysis.

Denoising soft-thresholds analysis coefficients with per-band thresholds
chosen by minimizing an unbiased estimate of the coefficient-domain risk;
the threshold scales with each atom's norm, so centers with weak atoms are
shrunk more aggressively.  Compression either greedily refits a small atom
subset (orthogonal matching pursuit) or keeps the largest normalized
analysis coefficients.
"""

from dataclasses import dataclass, field

import numpy as np

from .frames import (analysis, atom_norm_estimate, atom_norms_exact,
                     frame_bounds, inverse_cg, inverse_frame_iteration,
                     inverse_single_pass, synthesis)

DELTA_SNR_CAP_DB = 300.0


@dataclass
class Metrics:
    nmse: float
    delta_snr_db: float | None = None


def metrics(clean, estimate, noisy=None):
    """NMSE of the estimate and, given the noisy input, the SNR gain.

    Exact reconstructions (and any gain beyond it) report the sentinel cap
    of 300 dB instead of infinity.
    """
    clean = np.asarray(clean, dtype=np.float64)
    estimate = np.asarray(estimate, dtype=np.float64)
    err = float(np.sum((estimate - clean) ** 2))
    sig = float(np.sum(clean ** 2))
    if sig == 0:
        raise ValueError("clean signal is identically zero")
    nmse = err / sig
    delta = None
    if noisy is not None:
        noise = float(np.sum((np.asarray(noisy) - clean) ** 2))
        if err == 0 or (noise > 0 and
                        10.0 * np.log10(noise / err) >= DELTA_SNR_CAP_DB):
            delta = DELTA_SNR_CAP_DB
        elif noise == 0:
            delta = -DELTA_SNR_CAP_DB if err > 0 else DELTA_SNR_CAP_DB
        else:
            delta = 10.0 * np.log10(noise / err)
    return Metrics(nmse=nmse, delta_snr_db=delta)


def sure_threshold_band(alpha, norms, sigma, candidates=None):
    """Threshold minimizing the unbiased risk estimate for one band.

    The objective sums min(alpha_i^2, t^2 sigma^2 n_i^2) plus twice the
    coefficient noise variance for every coefficient surviving the
    threshold.  It is piecewise in t with breakpoints |alpha_i| / (sigma
    n_i), and each candidate is scored in the limit from above, where the
    survival indicator of the breakpoint coefficient has just switched off.
    Ties pick the smaller threshold.
    """
    alpha = np.asarray(alpha, dtype=np.float64)
    norms = np.asarray(norms, dtype=np.float64)
    if alpha.shape != norms.shape:
        raise ValueError("alpha and norms must align")
    if alpha.size == 0:
        return 0.0
    if sigma <= 0 or np.any(norms <= 0):
        raise ValueError("sigma and atom norms must be positive")
    b = np.abs(alpha) / (sigma * norms)
    if candidates is None:
        candidates = np.unique(np.concatenate([[0.0], b]))
    else:
        candidates = np.unique(np.asarray(candidates, dtype=np.float64))
        if candidates[0] < 0:
            raise ValueError("candidate thresholds must be nonnegative")
    order = np.argsort(b, kind="stable")
    b_s = b[order]
    pref_a2 = np.concatenate([[0.0], np.cumsum(alpha[order] ** 2)])
    suff_n2 = np.concatenate([np.cumsum((norms[order] ** 2)[::-1])[::-1],
                              [0.0]])
    m = np.searchsorted(b_s, candidates, side="right")
    obj = pref_a2[m] + sigma ** 2 * (candidates ** 2 + 2.0) * suff_n2[m]
    return float(candidates[int(np.argmin(obj))])


def sure_thresholds(coeffs, norms, sigma, scaling_bands=(),
                    candidates=None):
    """Per-band thresholds; bands passing DC are exempt (threshold zero).

    Scaling-type coefficients carry the signal's local mean, whose
    magnitude says nothing about noise, so they are never shrunk.
    """
    out = np.zeros(coeffs.n_bands)
    scaling = set(int(j) for j in scaling_bands)
    for j in range(coeffs.n_bands):
        if j in scaling:
            continue
        a = np.asarray(coeffs.bands[j], dtype=np.float64)
        n = np.asarray(norms[j], dtype=np.float64)
        # zero-norm atoms come from bands with no spectral support; their
        # coefficients are zero and need no threshold
        ok = n > 0
        if not np.any(ok):
            continue
        out[j] = sure_threshold_band(a[ok], n[ok], sigma,
                                     candidates=candidates)
    return out


def soft_threshold(coeffs, norms, sigma, thresholds):
    """Shrink each coefficient by its own threshold Upsilon_j sigma n_ij."""
    thresholds = np.asarray(thresholds, dtype=np.float64)
    bands = []
    for j in range(coeffs.n_bands):
        a = coeffs.bands[j]
        cut = thresholds[j] * sigma * np.asarray(norms[j])
        bands.append(np.sign(a) * np.maximum(0.0, np.abs(a) - cut))
    return coeffs.copy_with(bands)


@dataclass
class DenoiseConfig:
    sigma: float
    inverse: str = "cg"
    cg_tol: float = 1e-10
    cg_max_iter: int = 1000
    frame_iterations: int = 10
    norm_probes: int = 50
    norm_seed: int = 0
    candidates: np.ndarray | None = None
    bounds_basis: str | None = None


def _atom_norms(d, cfg):
    if d.mode == "exact":
        return atom_norms_exact(d)
    return atom_norm_estimate(d, n_probes=cfg.norm_probes,
                              seed=cfg.norm_seed)


def _reconstruct(d, coeffs, cfg):
    if cfg.inverse == "cg":
        return inverse_cg(d, coeffs, tol=cfg.cg_tol,
                          max_iter=cfg.cg_max_iter)
    basis = cfg.bounds_basis or ("exact_sigma" if d.mode == "exact"
                                 else "grid")
    bounds = frame_bounds(d, basis=basis)
    if cfg.inverse == "frame_iter":
        f = inverse_frame_iteration(d, coeffs, bounds,
                                    cfg.frame_iterations)
        return f, None
    if cfg.inverse == "single_pass":
        return inverse_single_pass(d, coeffs, bounds), None
    raise ValueError(f"unknown inverse {cfg.inverse!r}")


def denoise(d, noisy, cfg):
    """Analysis, per-band SURE soft thresholding, approximate inversion.

    Returns the estimate and a report holding the thresholds, atom norms
    and any solver info.
    """
    coeffs = analysis(d, noisy)
    norms = _atom_norms(d, cfg)
    thresholds = sure_thresholds(coeffs, norms, cfg.sigma,
                                 scaling_bands=d.bank.scaling_indices(),
                                 candidates=cfg.candidates)
    shrunk = soft_threshold(coeffs, norms, cfg.sigma, thresholds)
    fhat, info = _reconstruct(d, shrunk, cfg)
    report = {"thresholds": thresholds, "norms": norms, "solver": info}
    return fhat, report


def add_noise(f, sigma, seed=0):
    rng = np.random.default_rng(seed)
    return np.asarray(f, dtype=np.float64) + sigma * rng.standard_normal(
        np.asarray(f).size)


# ---------------------------------------------------------------------------
# sparse approximation
# ---------------------------------------------------------------------------

@dataclass
class OmpResult:
    indices: np.ndarray
    coefficients: np.ndarray
    reconstruction: np.ndarray
    residual_norms: np.ndarray
    nmse_path: np.ndarray = field(default=None)


def omp(atoms, f, n_terms):
    """Orthogonal matching pursuit over an explicit atom matrix.

    Atoms are normalized internally; returned coefficients multiply the
    original unnormalized columns.  Argmax ties resolve to the lowest
    column index and selected atoms are never reconsidered.
    """
    atoms = np.asarray(atoms, dtype=np.float64)
    f = np.asarray(f, dtype=np.float64)
    n, m = atoms.shape
    if f.shape != (n,):
        raise ValueError("signal length must match atom rows")
    nrm = np.linalg.norm(atoms, axis=0)
    # bands whose response sits entirely above the true spectrum yield
    # all-zero atoms; they are simply never selectable
    usable = nrm > nrm.max() * 1e-14 if nrm.max() > 0 else \
        np.zeros(m, dtype=bool)
    if not 1 <= n_terms <= int(usable.sum()):
        raise ValueError("n_terms must be between 1 and the count of "
                         "nonzero atoms")
    psi = np.where(usable, atoms / np.where(usable, nrm, 1.0), 0.0)
    resid = f.copy()
    selected = []
    res_norms = np.empty(n_terms)
    sol = np.empty(0)
    for t in range(n_terms):
        corr = np.abs(psi.T @ resid)
        corr[~usable] = -np.inf
        corr[selected] = -np.inf
        pick = int(np.argmax(corr))
        selected.append(pick)
        block = psi[:, selected]
        sol, *_ = np.linalg.lstsq(block, f, rcond=None)
        resid = f - block @ sol
        res_norms[t] = np.linalg.norm(resid)
    idx = np.array(selected, dtype=np.int64)
    coefs = sol / nrm[idx]
    recon = atoms[:, idx] @ coefs
    fnorm2 = float(f @ f)
    path = res_norms ** 2 / fnorm2 if fnorm2 > 0 else res_norms * 0
    return OmpResult(indices=idx, coefficients=coefs, reconstruction=recon,
                     residual_norms=res_norms, nmse_path=path)


def flat_index_to_atom(d, flat):
    """Map a flat atom column index to its (band, center vertex) pair."""
    offset = 0
    for j in range(d.n_bands):
        size = d.centers[j].size
        if flat < offset + size:
            return j, int(d.centers[j][flat - offset])
        offset += size
    raise IndexError("flat index out of range")


def compress_omp(d, f, n_terms):
    """OMP over the materialized dictionary; returns the pursuit result and
    the (band, vertex) pair of every selected atom."""
    atoms = d.materialize()
    result = omp(atoms, f, n_terms)
    pairs = [flat_index_to_atom(d, int(i)) for i in result.indices]
    return result, pairs


def compress_hard_threshold(d, f, n_terms, cfg=None):
    """Keep the n_terms largest normalized analysis coefficients and invert.

    Selection scores are |alpha| over the atom norm; ties resolve to the
    lexicographically first (band, center position).
    """
    if cfg is None:
        cfg = DenoiseConfig(sigma=1.0)
    coeffs = analysis(d, f)
    norms = _atom_norms(d, cfg)
    # atoms from bands outside the occupied spectrum have ~zero norm and
    # carry ~zero coefficients; score them zero instead of dividing by zero
    parts = []
    for j in range(d.n_bands):
        nj = np.asarray(norms[j], dtype=np.float64)
        ok = nj > 1e-14
        parts.append(np.where(ok, np.abs(coeffs.bands[j])
                              / np.where(ok, nj, 1.0), 0.0))
    flat_scores = np.concatenate(parts)
    if not 1 <= n_terms <= flat_scores.size:
        raise ValueError("n_terms must be between 1 and the atom count")
    order = np.lexsort((np.arange(flat_scores.size), -flat_scores))
    keep = np.zeros(flat_scores.size, dtype=bool)
    keep[order[:n_terms]] = True
    bands = []
    offset = 0
    for j in range(d.n_bands):
        size = coeffs.bands[j].size
        mask = keep[offset:offset + size]
        bands.append(np.where(mask, coeffs.bands[j], 0.0))
        offset += size
    kept = coeffs.copy_with(bands)
    fhat, info = _reconstruct(d, kept, cfg)
    return fhat, kept, info
