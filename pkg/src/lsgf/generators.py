"""Deterministic graph and test-signal generators.

Every randomized generator takes an explicit seed and draws from its own
numpy Generator, so artifacts are reproducible across runs and machines.
"""

import numpy as np
import scipy.spatial

from .graphs import SparseGraph, build_laplacian, eigendecompose


def path_graph(n):
    """Path on n vertices with unit weights."""
    src = np.arange(n - 1)
    return SparseGraph.from_edges(n, src, src + 1, np.ones(n - 1),
                                  coords=np.column_stack(
                                      [np.arange(n), np.zeros(n)]))


def cycle_graph(n):
    """Cycle on n vertices with unit weights."""
    src = np.arange(n)
    dst = (src + 1) % n
    t = 2 * np.pi * np.arange(n) / n
    return SparseGraph.from_edges(n, src, dst, np.ones(n),
                                  coords=np.column_stack(
                                      [np.cos(t), np.sin(t)]))


def grid_graph(rows, cols):
    """rows x cols lattice with unit weights."""
    idx = np.arange(rows * cols).reshape(rows, cols)
    src = np.concatenate([idx[:, :-1].ravel(), idx[:-1, :].ravel()])
    dst = np.concatenate([idx[:, 1:].ravel(), idx[1:, :].ravel()])
    rr, cc = np.divmod(np.arange(rows * cols), cols)
    return SparseGraph.from_edges(rows * cols, src, dst,
                                  np.ones(src.size),
                                  coords=np.column_stack([cc, rr]))


def erdos_renyi_graph(n, p, seed=0):
    """G(n, p) with unit weights.  Disconnected draws trigger a warning."""
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(n, k=1)
    keep = rng.random(iu.size) < p
    return SparseGraph.from_edges(n, iu[keep], ju[keep],
                                  np.ones(int(keep.sum())))


def sensor_graph(n, k=6, seed=0):
    """Random sensor graph: k-NN on uniform points with Gaussian weights.

    The k-nearest-neighbor graph is symmetrized; edge weights are
    exp(-d^2 / (2 theta^2)) with theta the mean neighbor distance.  If the
    k-NN graph is disconnected, closest pairs across components are bridged
    so the result is always connected.
    """
    rng = np.random.default_rng(seed)
    pts = rng.random((n, 2))
    tree = scipy.spatial.cKDTree(pts)
    dists, nbrs = tree.query(pts, k=k + 1)
    dists, nbrs = dists[:, 1:], nbrs[:, 1:]
    theta = float(dists.mean())

    pairs = {}
    for i in range(n):
        for d, j in zip(dists[i], nbrs[i]):
            key = (i, j) if i < j else (j, i)
            pairs.setdefault(key, float(d))

    # bridge components until connected
    while True:
        comp = _component_labels(n, pairs)
        n_comp = comp.max() + 1
        if n_comp == 1:
            break
        best = None
        for ca in range(n_comp - 1):
            ia = np.flatnonzero(comp == ca)
            ib = np.flatnonzero(comp != ca)
            d2 = scipy.spatial.distance.cdist(pts[ia], pts[ib])
            a, b = np.unravel_index(np.argmin(d2), d2.shape)
            cand = (float(d2[a, b]), int(ia[a]), int(ib[b]))
            if best is None or cand < best:
                best = cand
        d, i, j = best
        key = (i, j) if i < j else (j, i)
        pairs[key] = d

    keys = sorted(pairs)
    src = np.array([a for a, _ in keys])
    dst = np.array([b for _, b in keys])
    dd = np.array([pairs[kk] for kk in keys])
    w = np.exp(-dd ** 2 / (2 * theta ** 2))
    return SparseGraph.from_edges(n, src, dst, w, coords=pts)


def _component_labels(n, pairs):
    parent = np.arange(n)

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for a, b in pairs:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    roots = np.array([find(i) for i in range(n)])
    _, labels = np.unique(roots, return_inverse=True)
    return labels


def clique_chain_graph(sizes, link_weight=0.01):
    """Disjoint cliques joined in a chain by weak links.

    Produces a spectrum with tight eigenvalue clusters near each clique size
    (and near zero), separated by wide gaps; useful for stressing filter
    designs against repeated eigenvalues.
    """
    src, dst, w = [], [], []
    offset = 0
    anchors = []
    for m in sizes:
        iu, ju = np.triu_indices(m, k=1)
        src.append(iu + offset)
        dst.append(ju + offset)
        w.append(np.ones(iu.size))
        anchors.append(offset)
        offset += m
    anchors = np.array(anchors)
    if anchors.size > 1:
        src.append(anchors[:-1])
        dst.append(anchors[1:])
        w.append(np.full(anchors.size - 1, link_weight))
    return SparseGraph.from_edges(offset, np.concatenate(src),
                                  np.concatenate(dst), np.concatenate(w))


# ---------------------------------------------------------------------------
# test signals
# ---------------------------------------------------------------------------

def fiedler_partition(graph, n_parts, eig=None):
    """Split vertices into n_parts equal-count bins along the Fiedler vector."""
    if eig is None:
        eig = eigendecompose(build_laplacian(graph))
    fiedler = eig.vectors[:, 1]
    order = np.argsort(fiedler, kind="stable")
    labels = np.empty(graph.n, dtype=np.int64)
    for part, chunk in enumerate(np.array_split(order, n_parts)):
        labels[chunk] = part
    return labels


def piecewise_constant_signal(graph, n_parts=4, seed=0, eig=None):
    """Constant value per Fiedler-partition cluster, distinct across clusters."""
    rng = np.random.default_rng(seed)
    labels = fiedler_partition(graph, n_parts, eig=eig)
    levels = rng.permutation(np.linspace(-1.0, 1.0, n_parts))
    return levels[labels]


def piecewise_smooth_signal(graph, n_parts=4, n_modes=3, seed=0, eig=None):
    """Low-order eigenvector mixture per cluster plus jumps across clusters.

    Within each Fiedler-partition cluster the signal is an offset plus a
    random combination of the first few nonconstant global eigenvectors, so
    it is smooth inside clusters and discontinuous across their boundaries.
    """
    rng = np.random.default_rng(seed)
    if eig is None:
        eig = eigendecompose(build_laplacian(graph))
    labels = fiedler_partition(graph, n_parts, eig=eig)
    levels = rng.permutation(np.linspace(-1.0, 1.0, n_parts))
    f = levels[labels].astype(np.float64)
    modes = eig.vectors[:, 1:1 + n_modes] * np.sqrt(graph.n)
    for part in range(n_parts):
        mask = labels == part
        coeff = rng.normal(0.0, 0.35, n_modes) / np.arange(1, n_modes + 1)
        f[mask] += modes[mask] @ coeff
    return f


def bandpass_localized_signal(eig, band, centers, seed=0):
    """Band-limited signal concentrated around the given center vertices.

    Projects a few deltas (with random signs/amplitudes) onto the span of
    the eigenvectors indexed by band, then normalizes to unit norm.
    """
    rng = np.random.default_rng(seed)
    centers = np.atleast_1d(np.asarray(centers, dtype=np.int64))
    u = eig.vectors[:, np.asarray(band, dtype=np.int64)]
    mix = np.zeros(eig.n)
    amps = rng.normal(1.0, 0.25, centers.size) * rng.choice(
        [-1.0, 1.0], centers.size)
    mix[centers] = amps
    f = u @ (u.T @ mix)
    nrm = np.linalg.norm(f)
    if nrm == 0:
        raise ValueError("band projection of the seed deltas is zero")
    return f / nrm
