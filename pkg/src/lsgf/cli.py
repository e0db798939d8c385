"""Command-line interface.

Subcommands cover the full workflow: generate graphs and test signals,
estimate spectral CDFs, design filter banks, select sampling centers, run
the forward and inverse transforms, and execute the denoise / compress
pipelines with JSON metric reports.  Any flag can also be supplied through
a key = value config file via --config; explicit flags win.
"""

import argparse
import json
import os
import sys

import numpy as np

from . import generators, io, sampling, tasks
from .filters import (Warping, make_adapted_translates, make_dct_bands,
                      make_ideal_partition, make_log_warped_translates,
                      make_sgwt, make_uniform_translates,
                      shift_edges_to_sparse_regions)
from .frames import (analysis, dictionary_exact, dictionary_poly,
                     frame_bounds, inverse_cg, inverse_frame_iteration,
                     inverse_single_pass, synthesis)
from .graphs import build_laplacian, eigendecompose
from .spectrum import estimate_energy_cdf, estimate_spectral_cdf, \
    exact_spectral_cdf

THREADS_ENV = "LSGF_NUM_THREADS"

BANK_KEYS = ("design", "n_bands", "spacing", "warp", "nu",
             "k_scale", "cdf_file", "energy_cdf_file", "shift_edges")


def _add_bank_options(p):
    g = p.add_argument_group("filter bank")
    g.add_argument("--bank-spec", help="key = value file with bank options")
    g.add_argument("--design",
                   choices=["ideal", "hann", "itersine", "meyer", "dct",
                            "sgwt"])
    g.add_argument("--n-bands", type=int)
    g.add_argument("--spacing", choices=["uniform", "octave"])
    g.add_argument("--warp",
                   choices=["none", "log", "spectrum_cdf",
                            "log_spectrum_cdf", "energy_cdf"])
    g.add_argument("--nu", type=float)
    g.add_argument("--k-scale", type=float)
    g.add_argument("--cdf-file")
    g.add_argument("--energy-cdf-file")
    g.add_argument("--shift-edges", action="store_true", default=None)


def _bank_spec_from_args(args):
    spec = {"design": "itersine", "n_bands": 6, "spacing": "uniform",
            "warp": "none", "nu": 10.0, "k_scale": 20.0, "cdf_file": None,
            "energy_cdf_file": None, "shift_edges": False}
    if getattr(args, "bank_spec", None):
        raw = io.read_keyvalue_file(args.bank_spec, allowed=set(BANK_KEYS))
        for key, value in raw.items():
            if key in ("n_bands",):
                spec[key] = int(value)
            elif key in ("nu", "k_scale"):
                spec[key] = float(value)
            elif key == "shift_edges":
                spec[key] = value.lower() in ("1", "true", "yes")
            else:
                spec[key] = value
    for key in BANK_KEYS:
        flag = getattr(args, key, None)
        if flag is not None:
            spec[key] = flag
    if spec["warp"] in (None, ""):
        spec["warp"] = "none"
    return spec


def _resolve_cdf(spec, lap, args, energy=False):
    path = spec["energy_cdf_file"] if energy else spec["cdf_file"]
    if path:
        return io.load_cdf_csv(path)
    if energy:
        raise ValueError("energy_cdf warp needs --energy-cdf-file")
    if lap is None:
        raise ValueError("spectral adaptation needs a graph or --cdf-file")
    return estimate_spectral_cdf(lap, seed=getattr(args, "seed", 0))


def build_bank(spec, lambda_bar, lap=None, args=None):
    """Construct a filter bank from a resolved spec dictionary."""
    design = spec["design"]
    n_bands = int(spec["n_bands"])
    warp_kind = spec["warp"]
    if design == "ideal":
        cdf = None
        if spec["cdf_file"] or spec["shift_edges"]:
            cdf = _resolve_cdf(spec, lap, args)
        bank = make_ideal_partition(lambda_bar, n_bands,
                                    spacing=spec["spacing"], cdf=cdf)
        if spec["shift_edges"]:
            bank = shift_edges_to_sparse_regions(bank, cdf)
        return bank
    if design == "sgwt":
        return make_sgwt(lambda_bar, n_bands, k_scale=float(spec["k_scale"]))
    if design == "dct":
        warp = None
        if warp_kind == "log":
            warp = Warping("log", lambda_bar, nu=float(spec["nu"]))
        elif warp_kind != "none":
            raise ValueError("dct bands support warp none or log")
        return make_dct_bands(lambda_bar, n_bands, warp=warp)
    # translate prototypes
    if warp_kind == "none":
        return make_uniform_translates(lambda_bar, n_bands, design)
    if warp_kind == "log":
        return make_log_warped_translates(lambda_bar, n_bands, design,
                                          nu=float(spec["nu"]))
    if warp_kind in ("spectrum_cdf", "log_spectrum_cdf"):
        cdf = _resolve_cdf(spec, lap, args)
        return make_adapted_translates(lambda_bar, n_bands, cdf, design,
                                       wavelet=warp_kind == "log_spectrum_cdf",
                                       nu=float(spec["nu"]))
    if warp_kind == "energy_cdf":
        ecdf = _resolve_cdf(spec, lap, args, energy=True)
        return make_adapted_translates(lambda_bar, n_bands, ecdf, design,
                                       energy=True)
    raise ValueError(f"unsupported warp {warp_kind!r}")


def _load_lap(args):
    graph = io.load_graph(args.graph)
    return graph, build_laplacian(graph, kind=args.laplacian)


def _build_dictionary(args, lap, bank, centers=None):
    if args.mode == "exact":
        eig = eigendecompose(lap)
        return dictionary_exact(lap, bank, eig, centers=centers)
    return dictionary_poly(lap, bank, args.degree, jackson=args.jackson,
                           centers=centers)


def _add_transform_options(p):
    p.add_argument("--laplacian", choices=["combinatorial", "normalized"],
                   default="combinatorial")
    p.add_argument("--mode", choices=["exact", "poly"], default="poly")
    p.add_argument("--degree", type=int, default=40)
    p.add_argument("--jackson", action="store_true")


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_generate(args):
    kind = args.kind
    if kind == "path":
        g = generators.path_graph(args.n)
    elif kind == "cycle":
        g = generators.cycle_graph(args.n)
    elif kind == "grid":
        g = generators.grid_graph(args.rows, args.cols)
    elif kind == "erdos-renyi":
        g = generators.erdos_renyi_graph(args.n, args.p, seed=args.seed)
    elif kind == "sensor":
        g = generators.sensor_graph(args.n, k=args.k, seed=args.seed)
    else:
        raise ValueError(f"unknown graph kind {kind!r}")
    if str(args.out).endswith((".mtx", ".mm")):
        io.save_graph_mm(args.out, g)
    else:
        io.save_graph_csv(args.out, g)
    if args.signal != "none":
        if args.signal_out is None:
            raise ValueError("--signal-out required when generating a signal")
        if args.signal == "piecewise-smooth":
            f = generators.piecewise_smooth_signal(g, n_parts=args.n_parts,
                                                  seed=args.seed)
        else:
            f = generators.piecewise_constant_signal(g, n_parts=args.n_parts,
                                                    seed=args.seed)
        io.save_signal_csv(args.signal_out, f)
    print(f"{kind} graph: {g.n} vertices, {g.n_edges} edges, "
          f"connected={g.is_connected()}")
    return 0


def cmd_spectrum_cdf(args):
    _, lap = _load_lap(args)
    if args.cdf_mode == "exact":
        eig = eigendecompose(lap)
        cdf = exact_spectral_cdf(eig, lambda_bar=lap.lambda_max_bound)
    else:
        cdf = estimate_spectral_cdf(lap, n_probes=args.n_probes,
                                    kpm_degree=args.kpm_degree,
                                    n_grid=args.n_grid, seed=args.seed)
    io.save_cdf_csv(args.out, cdf)
    print(f"spectral CDF ({args.cdf_mode}) -> {args.out}")
    return 0


def cmd_design(args):
    lap = None
    if args.graph:
        _, lap = _load_lap(args)
        lambda_bar = lap.lambda_max_bound
    elif args.lambda_bar:
        lambda_bar = args.lambda_bar
    else:
        raise ValueError("need --graph or --lambda-bar")
    spec = _bank_spec_from_args(args)
    bank = build_bank(spec, lambda_bar, lap=lap, args=args)
    grid = np.linspace(0.0, lambda_bar, args.n_grid)
    vals = bank.evaluate(grid)
    with open(args.out, "w") as fh:
        fh.write("z," + ",".join(f"g{j}" for j in range(bank.n_kernels))
                 + "\n")
        for i, z in enumerate(grid):
            fh.write(f"{float(z)!r}," + ",".join(f"{float(v)!r}" for v in vals[:, i])
                     + "\n")
    gmin, gmax = bank.squared_sum(grid).min(), bank.squared_sum(grid).max()
    print(f"{bank.design}: {bank.n_kernels} kernels, G in "
          f"[{gmin:.6f}, {gmax:.6f}] -> {args.out}")
    return 0


def cmd_sample(args):
    _, lap = _load_lap(args)
    spec = _bank_spec_from_args(args)
    bank = build_bank(spec, lap.lambda_max_bound, lap=lap, args=args)
    if args.method == "uniqueness":
        eig = eigendecompose(lap)
        centers = sampling.uniqueness_partition(eig, bank)
    else:
        d = dictionary_poly(lap, bank, args.degree, jackson=args.jackson)
        if args.counts:
            counts = np.array([int(c) for c in args.counts.split(",")])
            if counts.size != bank.n_kernels:
                raise ValueError("need one count per band")
        elif args.total <= 0:
            raise ValueError("need --counts or a positive --total")
        else:
            cdf = (io.load_cdf_csv(args.cdf_file) if args.cdf_file
                   else estimate_spectral_cdf(lap, seed=args.seed))
            counts = sampling.allocate_samples(cdf, bank, args.total)
        if args.method == "greedy":
            sets = [sampling.greedy_centers(lap, d.approx[j], int(counts[j]))
                    for j in range(bank.n_kernels)]
            centers = sampling.CenterSets(
                sets=sets, weights=[np.ones(s.size) for s in sets])
        else:
            if args.weights == "uniform":
                w = sampling.uniform_weights(bank.n_kernels, lap.n)
            elif args.weights == "signal":
                if not args.signal:
                    raise ValueError("--signal required for adapted weights")
                f = io.load_signal_csv(args.signal)
                w = sampling.signal_adapted_weights(d, f,
                                                    n_probes=args.n_probes,
                                                    seed=args.seed)
            else:
                w = sampling.nonuniform_weights(d, n_probes=args.n_probes,
                                                seed=args.seed)
            centers = sampling.draw_centers(w, counts, seed=args.seed)
    io.save_centers_csv(args.out, centers)
    print(f"{centers.total} centers over {centers.n_bands} bands "
          f"-> {args.out}")
    return 0


def cmd_transform(args):
    _, lap = _load_lap(args)
    f = io.load_signal_csv(args.signal)
    spec = _bank_spec_from_args(args)
    bank = build_bank(spec, lap.lambda_max_bound, lap=lap, args=args)
    centers = None
    if args.centers:
        centers = io.load_centers_csv(args.centers,
                                      n_bands=bank.n_kernels).sets
    d = _build_dictionary(args, lap, bank, centers=centers)
    coeffs = analysis(d, f)
    io.save_coefficients(args.out, coeffs)
    if args.csv_out:
        io.export_coefficients_csv(args.csv_out, coeffs)
    print(f"{coeffs.n_atoms} coefficients over {coeffs.n_bands} bands "
          f"-> {args.out}")
    return 0


def cmd_inverse(args):
    _, lap = _load_lap(args)
    spec = _bank_spec_from_args(args)
    bank = build_bank(spec, lap.lambda_max_bound, lap=lap, args=args)
    coeffs = io.load_coefficients(args.coefficients, lap.n)
    d = _build_dictionary(args, lap, bank, centers=coeffs.centers)
    if args.method == "cg":
        f, info = inverse_cg(d, coeffs, tol=args.tol,
                             max_iter=args.max_iter)
        note = (f"cg: converged={info.converged} iter={info.n_iter} "
                f"residual={info.residual:.3e}")
    else:
        basis = "exact_sigma" if args.mode == "exact" else "grid"
        bounds = frame_bounds(d, basis=basis)
        if args.method == "frame-iter":
            f = inverse_frame_iteration(d, coeffs, bounds, args.iterations)
            note = f"frame iteration x{args.iterations}"
        else:
            f = inverse_single_pass(d, coeffs, bounds)
            note = "single pass"
    io.save_signal_csv(args.out, f)
    print(f"inverse ({note}) -> {args.out}")
    return 0


def _pipeline_dictionary(args, lap):
    spec = _bank_spec_from_args(args)
    bank = build_bank(spec, lap.lambda_max_bound, lap=lap, args=args)
    return _build_dictionary(args, lap, bank)


def cmd_denoise(args):
    if args.sigma is None or args.sigma <= 0:
        raise ValueError("--sigma must be a positive noise level")
    _, lap = _load_lap(args)
    clean = io.load_signal_csv(args.signal)
    if args.noisy:
        noisy = io.load_signal_csv(args.noisy)
    else:
        noisy = tasks.add_noise(clean, args.sigma, seed=args.noise_seed)
    d = _pipeline_dictionary(args, lap)
    method = {"cg": "cg", "frame-iter": "frame_iter",
              "single-pass": "single_pass"}[args.method]
    cfg = tasks.DenoiseConfig(sigma=args.sigma, inverse=method,
                              frame_iterations=args.iterations)
    fhat, report = tasks.denoise(d, noisy, cfg)
    m = tasks.metrics(clean, fhat, noisy=noisy)
    out = {"nmse": m.nmse, "delta_snr_db": m.delta_snr_db,
           "sigma": args.sigma, "method": args.method,
           "thresholds": [float(t) for t in report["thresholds"]]}
    with open(args.out, "w") as fh:
        json.dump(out, fh, indent=2)
        fh.write("\n")
    if args.denoised_out:
        io.save_signal_csv(args.denoised_out, fhat)
    print(f"denoise: delta_snr_db={m.delta_snr_db:.3f} nmse={m.nmse:.5f} "
          f"-> {args.out}")
    return 0


def cmd_compress(args):
    _, lap = _load_lap(args)
    f = io.load_signal_csv(args.signal)
    d = _pipeline_dictionary(args, lap)
    budgets = sorted({int(t) for t in args.n_terms.split(",")})
    if budgets[0] < 1:
        raise ValueError("sparsity budgets must be positive")
    rows = []
    if args.method == "omp":
        result, _ = tasks.compress_omp(d, f, max(budgets))
        for t0 in budgets:
            rows.append((t0, float(result.nmse_path[t0 - 1])))
        recon = result.reconstruction
    else:
        recon = None
        for t0 in budgets:
            fhat, _, _ = tasks.compress_hard_threshold(d, f, t0)
            rows.append((t0, tasks.metrics(f, fhat).nmse))
            recon = fhat
    out = {"method": args.method,
           "curve": [{"n_terms": t, "nmse": v} for t, v in rows]}
    with open(args.out, "w") as fh:
        json.dump(out, fh, indent=2)
        fh.write("\n")
    if args.curve_out:
        with open(args.curve_out, "w") as fh:
            fh.write("n_terms,nmse\n")
            for t, v in rows:
                fh.write(f"{t},{float(v)!r}\n")
    if args.recon_out and recon is not None:
        io.save_signal_csv(args.recon_out, recon)
    summary = ", ".join(f"{t}:{v:.4g}" for t, v in rows)
    print(f"compress ({args.method}): nmse {summary} -> {args.out}")
    return 0


# ---------------------------------------------------------------------------
# parser assembly
# ---------------------------------------------------------------------------

def build_parser():
    """Return the argument parser plus a dict of its subparsers."""
    ap = argparse.ArgumentParser(
        prog="lsgf",
        description="Localized spectral graph filter frames")
    ap.add_argument("--config", help="key = value file of default flags; "
                                     "place before the subcommand")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate a graph and test signal")
    p.add_argument("--kind", required=True,
                   choices=["path", "cycle", "grid", "erdos-renyi",
                            "sensor"])
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--rows", type=int, default=10)
    p.add_argument("--cols", type=int, default=10)
    p.add_argument("--p", type=float, default=0.1)
    p.add_argument("--k", type=int, default=6)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--signal", default="none",
                   choices=["none", "piecewise-smooth", "piecewise-constant"])
    p.add_argument("--signal-out")
    p.add_argument("--n-parts", type=int, default=4)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("spectrum-cdf", help="estimate the spectral CDF")
    p.add_argument("--graph", required=True)
    p.add_argument("--laplacian", choices=["combinatorial", "normalized"],
                   default="combinatorial")
    p.add_argument("--cdf-mode", choices=["exact", "estimate"],
                   default="estimate")
    p.add_argument("--n-probes", type=int, default=10)
    p.add_argument("--kpm-degree", type=int, default=30)
    p.add_argument("--n-grid", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_spectrum_cdf)

    p = sub.add_parser("design", help="design a filter bank and export it")
    p.add_argument("--graph")
    p.add_argument("--laplacian", choices=["combinatorial", "normalized"],
                   default="combinatorial")
    p.add_argument("--lambda-bar", type=float)
    p.add_argument("--n-grid", type=int, default=256)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    _add_bank_options(p)
    p.set_defaults(func=cmd_design)

    p = sub.add_parser("sample", help="select center vertices per band")
    p.add_argument("--graph", required=True)
    _add_transform_options(p)
    _add_bank_options(p)
    p.add_argument("--method", choices=["random", "greedy", "uniqueness"],
                   default="random")
    p.add_argument("--weights", choices=["uniform", "probe", "signal"],
                   default="probe")
    p.add_argument("--signal")
    p.add_argument("--counts", help="comma-separated per-band counts")
    p.add_argument("--total", type=int, default=0)
    p.add_argument("--n-probes", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("transform", help="analysis coefficients of a signal")
    p.add_argument("--graph", required=True)
    p.add_argument("--signal", required=True)
    p.add_argument("--centers")
    _add_transform_options(p)
    _add_bank_options(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--csv-out")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("inverse", help="reconstruct a signal from "
                                       "coefficients")
    p.add_argument("--graph", required=True)
    p.add_argument("--coefficients", required=True)
    _add_transform_options(p)
    _add_bank_options(p)
    p.add_argument("--method", choices=["cg", "frame-iter", "single-pass"],
                   default="cg")
    p.add_argument("--iterations", type=int, default=10)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--max-iter", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_inverse)

    p = sub.add_parser("denoise", help="noise, threshold, reconstruct, "
                                       "report")
    p.add_argument("--graph", required=True)
    p.add_argument("--signal", required=True, help="clean reference signal")
    p.add_argument("--noisy", help="noisy input; generated when omitted")
    p.add_argument("--sigma", type=float)
    p.add_argument("--noise-seed", type=int, default=0)
    _add_transform_options(p)
    _add_bank_options(p)
    p.add_argument("--method", choices=["cg", "frame-iter", "single-pass"],
                   default="cg")
    p.add_argument("--iterations", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--denoised-out")
    p.set_defaults(func=cmd_denoise)

    p = sub.add_parser("compress", help="sparse approximation error curve")
    p.add_argument("--graph", required=True)
    p.add_argument("--signal", required=True)
    _add_transform_options(p)
    _add_bank_options(p)
    p.add_argument("--method", choices=["omp", "hard"], default="omp")
    p.add_argument("--n-terms", default="50",
                   help="comma-separated sparsity budgets")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--curve-out")
    p.add_argument("--recon-out")
    p.set_defaults(func=cmd_compress)

    return ap, sub.choices


def _apply_thread_env():
    raw = os.environ.get(THREADS_ENV, "").strip()
    if not raw:
        return
    try:
        count = max(1, int(raw))
    except ValueError:
        raise ValueError(f"{THREADS_ENV} must be an integer, got {raw!r}")
    try:
        import numba
        numba.set_num_threads(min(count, numba.config.NUMBA_NUM_THREADS))
    except ImportError:
        pass


def _apply_config_defaults(subparser, defaults):
    # config keys become action defaults, converted with the action's own
    # type so later flag parsing behaves as if they came from the command
    # line
    pending = {key.replace("-", "_"): value
               for key, value in defaults.items()}
    for action in subparser._actions:
        if action.dest not in pending:
            continue
        raw = pending.pop(action.dest)
        if isinstance(action.const, bool):
            action.default = raw.strip().lower() in ("1", "true", "yes")
        elif action.type is not None:
            action.default = action.type(raw)
        else:
            action.default = raw
        if action.choices is not None and action.default not in \
                action.choices:
            raise ValueError(f"config value {raw!r} invalid for "
                             f"{action.dest}")
    if pending:
        raise ValueError(f"unknown config keys: {sorted(pending)}")


def main(argv=None):
    ap, subparsers = build_parser()
    args, _ = ap.parse_known_args(argv)
    try:
        if getattr(args, "config", None):
            defaults = io.read_keyvalue_file(args.config)
            _apply_config_defaults(subparsers[args.command], defaults)
            args = ap.parse_args(argv)
        _apply_thread_env()
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
