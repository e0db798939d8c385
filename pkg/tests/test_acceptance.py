"""End-to-end acceptance sweep.

One test per numbered criterion; each prints a single "criterion N: PASS"
line with the measured figures, so `pytest -s tests/test_acceptance.py`
doubles as a report.  Criteria that carry a runtime budget assert it.
"""

import time

import numpy as np

from lsgf.chebyshev import (apply_poly_filter, chebyshev_fit, poly_atom,
                            sup_error)
from lsgf.filters import (Kernel, effective_support,
                          make_adapted_translates, make_ideal_partition,
                          make_sgwt, make_uniform_translates,
                          shift_edges_to_sparse_regions)
from lsgf.frames import (analysis, dictionary_exact, dictionary_poly,
                         frame_bounds, inverse_frame_iteration,
                         inverse_single_pass, single_pass_error_bound)
from lsgf.generators import (clique_chain_graph, cycle_graph,
                             erdos_renyi_graph, grid_graph, path_graph,
                             piecewise_smooth_signal, sensor_graph)
from lsgf.graphs import build_laplacian, eigendecompose, lanczos_lambda_max
from lsgf.sampling import (band_reconstruct, default_band_penalty,
                           draw_centers, signal_adapted_weights,
                           uniform_weights, uniqueness_partition)
from lsgf.spectrum import estimate_spectral_cdf, exact_spectral_cdf
from lsgf.tasks import (DenoiseConfig, add_noise, compress_omp, denoise,
                        metrics)


def test_criterion_01_tight_designs_conserve_energy():
    t0 = time.perf_counter()
    graphs = [sensor_graph(140, seed=0), grid_graph(10, 12),
              path_graph(130), cycle_graph(120),
              erdos_renyi_graph(110, 0.08, seed=5)]
    worst = 0.0
    for gi, g in enumerate(graphs):
        lap = build_laplacian(g, kind="normalized")
        eig = eigendecompose(lap)
        lb = lap.lambda_max_bound
        banks = [make_uniform_translates(lb, 5, proto)
                 for proto in ("itersine", "hann", "meyer")]
        banks.append(make_ideal_partition(lb, 4))
        for bank in banks:
            d = dictionary_exact(lap, bank, eig)
            rng = np.random.default_rng(10 * gi)
            for _ in range(100):
                f = rng.standard_normal(g.n)
                c = analysis(d, f)
                energy = sum(float(b @ b) for b in c.bands)
                fn2 = float(f @ f)
                worst = max(worst, abs(energy - fn2) / fn2)
    dt = time.perf_counter() - t0
    assert worst <= 1e-9
    assert dt < 60.0
    print(f"criterion 1: PASS (worst energy mismatch {worst:.2e}, "
          f"{dt:.1f}s)")


def test_criterion_02_atoms_are_hop_localized():
    pool = [sensor_graph(80, seed=3), grid_graph(8, 11), path_graph(70),
            cycle_graph(66), erdos_renyi_graph(75, 0.07, seed=6),
            sensor_graph(95, seed=8)]
    laps = [build_laplacian(g) for g in pool]
    rng = np.random.default_rng(2)
    worst = 0.0
    for _ in range(50):
        gi = int(rng.integers(len(pool)))
        g, lap = pool[gi], laps[gi]
        center = int(rng.integers(g.n))
        degree = int(rng.integers(2, 11))
        kern = Kernel("diffusion", lap.lambda_max_bound, {"tau": 1.5})
        p = chebyshev_fit(kern, degree, lap.lambda_max_bound)
        atom = poly_atom(p, lap, center)
        hops = g.hop_distances(center)
        outside = atom[(hops > degree) | (hops < 0)]
        if outside.size:
            worst = max(worst, float(np.abs(outside).max()))
    assert worst <= 1e-13
    print(f"criterion 2: PASS (max leakage past the hop limit {worst:.2e} "
          f"over 50 cases)")


def test_criterion_03_poly_analysis_matches_exact_within_sup_error():
    configs = [(sensor_graph(150, seed=1), 5, 20),
               (grid_graph(12, 13), 5, 40),
               (sensor_graph(220, seed=6), 4, 30)]
    worst_ratio = 0.0
    for ci, (g, n_bands, degree) in enumerate(configs):
        lap = build_laplacian(g, kind="normalized")
        eig = eigendecompose(lap)
        bank = make_uniform_translates(lap.lambda_max_bound, n_bands,
                                       "itersine")
        de = dictionary_exact(lap, bank, eig)
        dp = dictionary_poly(lap, bank, degree)
        max_sup = max(sup_error(dp.approx[j], bank.kernels[j])
                      for j in range(n_bands))
        budget_scale = n_bands * max_sup
        rng = np.random.default_rng(30 + ci)
        for _ in range(20):
            f = rng.standard_normal(g.n)
            ce = analysis(de, f)
            cp = analysis(dp, f)
            err = np.sqrt(sum(float(np.sum((a - b) ** 2))
                              for a, b in zip(cp.bands, ce.bands)))
            worst_ratio = max(worst_ratio,
                              err / (budget_scale * np.linalg.norm(f)))
    assert worst_ratio <= 1.0
    heat = Kernel("diffusion", 2.0, {"tau": 2.0})
    heat_sup = sup_error(chebyshev_fit(heat, 40, 2.0), heat)
    assert heat_sup <= 1e-8
    print(f"criterion 3: PASS (worst error over budget {worst_ratio:.3f}, "
          f"degree-40 diffusion sup error {heat_sup:.2e})")


def test_criterion_04_spectral_cdf_estimate_accuracy():
    t0 = time.perf_counter()
    g = erdos_renyi_graph(500, 0.2, seed=0)
    lap = build_laplacian(g)
    lap = lap.with_lambda_bound(lanczos_lambda_max(lap))
    eig = eigendecompose(lap)
    exact = exact_spectral_cdf(eig, lambda_bar=lap.lambda_max_bound)
    grid = np.linspace(0.0, lap.lambda_max_bound, 2001)
    ref = exact(grid)
    sup_def = float(np.max(np.abs(estimate_spectral_cdf(lap)(grid) - ref)))
    est_hi = estimate_spectral_cdf(lap, n_probes=100, kpm_degree=100)
    sup_hi = float(np.max(np.abs(est_hi(grid) - ref)))
    dt = time.perf_counter() - t0
    assert sup_def <= 0.05
    assert sup_hi <= 0.02
    assert dt < 30.0
    print(f"criterion 4: PASS (sup distance {sup_def:.4f} at defaults, "
          f"{sup_hi:.4f} at 100 probes / degree 100, {dt:.1f}s)")


def test_criterion_05_inverse_error_bounds_hold():
    configs = [(sensor_graph(90, seed=1), 4), (grid_graph(9, 10), 5),
               (path_graph(80), 3), (cycle_graph(75), 4),
               (erdos_renyi_graph(85, 0.08, seed=3), 5)]
    worst_sp, worst_fi, trials = 0.0, 0.0, 0
    for gi, (g, n_kernels) in enumerate(configs):
        lap = build_laplacian(g, kind="normalized")
        eig = eigendecompose(lap)
        bank = make_sgwt(lap.lambda_max_bound, n_kernels)
        d = dictionary_exact(lap, bank, eig)
        fb = frame_bounds(d, basis="exact_sigma")
        sp_bound = single_pass_error_bound(fb)
        q = (fb.upper - fb.lower) / (fb.upper + fb.lower)
        rng = np.random.default_rng(100 + gi)
        for k in range(100):
            f = rng.standard_normal(g.n)
            fn = float(np.linalg.norm(f))
            c = analysis(d, f)
            fr = inverse_single_pass(d, c, fb)
            worst_sp = max(worst_sp,
                           float(np.linalg.norm(fr - f)) / (sp_bound * fn))
            trials += 1
            if k < 10:
                for t in range(11):
                    fi = inverse_frame_iteration(d, c, fb, n_iter=t)
                    lim = q ** (t + 1) * fn + 1e-9
                    worst_fi = max(worst_fi,
                                   float(np.linalg.norm(fi - f)) / lim)
    assert trials == 500
    assert worst_sp <= 1.0
    assert worst_fi <= 1.0
    print(f"criterion 5: PASS (single pass at {worst_sp:.3f} of its bound "
          f"over 500 trials, frame iteration at {worst_fi:.3f})")


def test_criterion_06_adapted_designs_tighten_frame_ratio():
    g = clique_chain_graph([25] * 8)
    lap = build_laplacian(g)
    lap = lap.with_lambda_bound(lanczos_lambda_max(lap))
    cdf = estimate_spectral_cdf(lap, seed=0)
    lb = lap.lambda_max_bound
    ideal = make_ideal_partition(lb, 6, cdf=cdf)
    shifted = shift_edges_to_sparse_regions(ideal, cdf)
    adapted = make_adapted_translates(lb, 6, cdf, "itersine")
    ratios = []
    for bank in (ideal, shifted, adapted):
        d = dictionary_poly(lap, bank, 40)
        ratios.append(frame_bounds(d, basis="grid").ratio)
    assert ratios[0] > ratios[1] > ratios[2]
    print(f"criterion 6: PASS (bound ratios {ratios[0]:.3f} ideal > "
          f"{ratios[1]:.3f} shifted > {ratios[2]:.3f} adapted)")


def test_criterion_07_adapted_sampling_beats_uniform():
    t0 = time.perf_counter()
    g = sensor_graph(300, seed=0)
    lap = build_laplacian(g, kind="normalized")
    eig = eigendecompose(lap)
    bank = make_uniform_translates(lap.lambda_max_bound, 8, "itersine")
    dp = dictionary_poly(lap, bank, 40)
    band = 2
    p = dp.approx[band]
    lo, hi = effective_support(bank.kernels[band])
    dim = int(np.count_nonzero((eig.values >= lo) & (eig.values <= hi)))
    rng = np.random.default_rng(42)
    spikes = np.zeros(g.n)
    spikes[rng.choice(g.n, 6, replace=False)] = rng.standard_normal(6) * 3
    z = apply_poly_filter(p, lap, spikes)
    zn2 = float(z @ z)
    w_adapted = signal_adapted_weights(dp, z, seed=0)[band:band + 1]
    w_uniform = uniform_weights(1, g.n)
    phi = default_band_penalty(p, fit_degree=50)

    def mean_nmse(weights, budget):
        out = 0.0
        for seed in range(50):
            cs = draw_centers(weights, np.array([budget]), seed=seed)
            zr, _ = band_reconstruct(lap, cs.sets[0], cs.weights[0],
                                     z[cs.sets[0]], phi, kappa=1e4,
                                     tol=1e-6, max_iter=400)
            out += float(np.sum((zr - z) ** 2)) / zn2
        return out / 50.0

    margins = []
    for budget in range(dim, 3 * dim + 1):
        ma = mean_nmse(w_adapted, budget)
        mu = mean_nmse(w_uniform, budget)
        assert ma < mu, (budget, ma, mu)
        margins.append(mu / ma)
    dt = time.perf_counter() - t0
    assert dt < 300.0
    print(f"criterion 7: PASS (adapted below uniform at all "
          f"{dim}..{3 * dim} budgets, min margin {min(margins):.2f}x, "
          f"{dt:.1f}s)")


def test_criterion_08_critical_sampling_is_invertible():
    graphs = [
        sensor_graph(40, seed=0), sensor_graph(55, seed=1),
        sensor_graph(70, seed=2), sensor_graph(85, seed=3),
        sensor_graph(100, seed=4), sensor_graph(64, seed=5),
        grid_graph(5, 8), grid_graph(6, 10), grid_graph(7, 7),
        grid_graph(8, 9),
        path_graph(50), path_graph(75), path_graph(96),
        cycle_graph(48), cycle_graph(63), cycle_graph(90),
        erdos_renyi_graph(60, 0.12, seed=7),
        erdos_renyi_graph(72, 0.1, seed=8),
        erdos_renyi_graph(84, 0.09, seed=9),
        erdos_renyi_graph(96, 0.08, seed=10),
    ]
    worst_rel, worst_cond = 0.0, 0.0
    for i, g in enumerate(graphs):
        lap = build_laplacian(g)
        eig = eigendecompose(lap)
        bank = make_ideal_partition(float(eig.values[-1]), 2 + i % 3)
        cs = uniqueness_partition(eig, bank)
        assert cs.total == g.n
        cols = []
        for j, kern in enumerate(bank.kernels):
            bm = (eig.vectors * kern(eig.values)) @ eig.vectors.T
            cols.append(bm[:, cs.sets[j]])
        m = np.hstack(cols)
        cond = float(np.linalg.cond(m))
        assert np.isfinite(cond)
        worst_cond = max(worst_cond, cond)
        rng = np.random.default_rng(1000 + i)
        for _ in range(20):
            f = rng.standard_normal(g.n)
            fhat = np.linalg.solve(m.T, m.T @ f)
            rel = float(np.linalg.norm(fhat - f) / np.linalg.norm(f))
            worst_rel = max(worst_rel, rel)
    assert worst_rel <= 1e-8
    print(f"criterion 8: PASS (20 graphs, worst reconstruction "
          f"{worst_rel:.2e}, worst condition number {worst_cond:.1f})")


def _sure_objective(alpha, norms, sigma, t):
    # right limit at the breakpoints, matching the scan in sure_threshold_band
    b = np.abs(alpha) / (sigma * norms)
    surv = b > t * (1.0 + 1e-12)
    n2 = norms ** 2
    return float((alpha ** 2)[~surv].sum()) \
        + sigma ** 2 * (t ** 2 + 2.0) * float(n2[surv].sum())


def test_criterion_09_sure_denoising_gains_snr():
    g = sensor_graph(150, seed=2)
    lap = build_laplacian(g, kind="normalized")
    eig = eigendecompose(lap)
    clean = piecewise_smooth_signal(g, n_parts=4, seed=2, eig=eig)
    bank = make_uniform_translates(lap.lambda_max_bound, 6, "itersine")
    d = dictionary_exact(lap, bank, eig)
    sigma_f = float(np.sqrt(np.mean(clean ** 2)))
    means = []
    for ratio in (0.25, 0.5):
        sigma = ratio * sigma_f
        gains = []
        for seed in range(20):
            noisy = add_noise(clean, sigma, seed=seed)
            fhat, _ = denoise(d, noisy, DenoiseConfig(sigma=sigma))
            gains.append(metrics(clean, fhat, noisy).delta_snr_db)
        means.append(float(np.mean(gains)))
        assert means[-1] > 0.0
    # the threshold objective is an unbiased risk estimate up to the
    # constant sigma^2 sum n^2, checked by Monte Carlo
    rng = np.random.default_rng(11)
    a0 = rng.standard_normal(8) * np.array(
        [3.0, 2.0, 1.5, 1.0, 0.8, 0.5, 0.3, 0.1])
    nn = rng.uniform(0.4, 1.6, 8)
    sigma = 0.5
    draws = a0 + sigma * nn * rng.standard_normal((4000, 8))
    offset = sigma ** 2 * float(np.sum(nn ** 2))
    worst_mc = 0.0
    for t in (0.4, 1.0, 2.2):
        cut = t * sigma * nn
        den = np.sign(draws) * np.maximum(0.0, np.abs(draws) - cut)
        risk = float(np.mean(np.sum((den - a0) ** 2, axis=1)))
        est = float(np.mean([_sure_objective(row, nn, sigma, t)
                             for row in draws]))
        worst_mc = max(worst_mc, abs(est - (risk + offset)) / (risk + offset))
    assert worst_mc < 0.05
    print(f"criterion 9: PASS (mean gains {means[0]:.2f} / {means[1]:.2f} dB "
          f"at noise ratios 0.25 / 0.5, risk estimate off by {worst_mc:.4f})")


def test_criterion_10_omp_compression_beats_gft():
    g = sensor_graph(150, seed=2)
    lap = build_laplacian(g, kind="normalized")
    eig = eigendecompose(lap)
    clean = piecewise_smooth_signal(g, n_parts=4, seed=2, eig=eig)
    bank = make_uniform_translates(lap.lambda_max_bound, 6, "itersine")
    d = dictionary_exact(lap, bank, eig)
    result, _ = compress_omp(d, clean, 50)
    assert np.all(np.diff(result.nmse_path) <= 1e-12)
    omp_nmse = float(result.nmse_path[-1])
    gft = eig.vectors.T @ clean
    keep = np.argsort(-np.abs(gft))[:50]
    mask = np.zeros(g.n)
    mask[keep] = gft[keep]
    gft_nmse = float(np.sum((eig.vectors @ mask - clean) ** 2)
                     / np.sum(clean ** 2))
    assert omp_nmse < gft_nmse
    print(f"criterion 10: PASS (50-term pursuit NMSE {omp_nmse:.2e} < "
          f"Fourier-basis {gft_nmse:.2e}, error path nonincreasing)")
