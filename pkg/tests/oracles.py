"""Independent reference implementations used to check the library.

Everything here is deliberately written with different algorithms from
the package: exhaustive edge relaxation instead of Dijkstra, the literal
double sum for the mean absolute difference, pure-Python BFS instead of
sparse component labeling, and nearest-site sampling instead of
polygon construction.
"""

from collections import deque

import numpy as np


def relaxation_distances(n, edges):
    """All-pairs shortest distances by exhaustive relaxation.

    ``edges`` are (src, dst, weight) with traversal cost 1/weight.
    Repeatedly relaxes every edge until a full pass changes nothing.
    """
    dist = np.full((n, n), np.inf)
    np.fill_diagonal(dist, 0.0)
    lengths = [(u, v, 1.0 / w) for u, v, w in edges]
    for _ in range(n):
        changed = False
        for u, v, cost in lengths:
            candidate = dist[:, u] + cost
            better = candidate < dist[:, v]
            if better.any():
                dist[better, v] = candidate[better]
                changed = True
        if not changed:
            break
    return dist


def efficiency_by_relaxation(n, edges):
    """Global efficiency from :func:`relaxation_distances`."""
    dist = relaxation_distances(n, edges)
    with np.errstate(divide="ignore"):
        inv = np.where(np.isfinite(dist), 1.0 / dist, 0.0)
    np.fill_diagonal(inv, 0.0)
    return float(inv.sum() / (n * (n - 1)))


def gini_double_sum(values):
    """Literal double-sum mean absolute difference, halved and scaled."""
    arr = [float(v) for v in values]
    n = len(arr)
    delta = sum(abs(a - b) for a in arr for b in arr) / (n * n)
    mean = sum(arr) / n
    return delta / (2.0 * mean)


def bfs_components(node_ids, edge_pairs):
    """Weak components via BFS over an undirected adjacency dict."""
    neighbors = {v: set() for v in node_ids}
    for a, b in edge_pairs:
        neighbors[a].add(b)
        neighbors[b].add(a)
    seen = set()
    components = []
    for start in node_ids:
        if start in seen:
            continue
        queue = deque([start])
        seen.add(start)
        component = {start}
        while queue:
            v = queue.popleft()
            for w in neighbors[v]:
                if w not in seen:
                    seen.add(w)
                    component.add(w)
                    queue.append(w)
        components.append(component)
    return components


def lwcc_of(node_ids, edge_pairs):
    """Largest weak component; ties go to the one holding the smallest id."""
    components = bfs_components(node_ids, edge_pairs)
    if not components:
        return set()
    best = max(len(c) for c in components)
    return min((c for c in components if len(c) == best), key=min)


def resimulate_persistence(edges, direction):
    """Re-run a weight-ordered sweep and score node persistence.

    ``edges`` are (origin_id, destination_id, weight); returns the same
    mapping contract as ``mobnet.percolation.node_persistence``.
    """
    nodes = sorted({a for a, _, _ in edges} | {b for _, b, _ in edges})
    thresholds = sorted({w for _, _, w in edges})
    if direction == "decreasing":
        thresholds = thresholds[::-1]
    k = len(thresholds)

    initial = lwcc_of(nodes, [(a, b) for a, b, _ in edges])
    last_inside = {v: 0 for v in nodes}
    for i, t in enumerate(thresholds, start=1):
        if direction == "increasing":
            survivors = [(a, b) for a, b, w in edges if w > t]
        else:
            survivors = [(a, b) for a, b, w in edges if w < t]
        support = sorted({v for pair in survivors for v in pair})
        for v in lwcc_of(support, survivors):
            last_inside[v] = i

    rho = {}
    for v in nodes:
        if v not in initial:
            rho[v] = 0.0
        elif k == 1:
            rho[v] = 1.0
        else:
            rho[v] = last_inside[v] / (k - 1)
    return rho


def rasterization_agreement(cells, registry, bounds, samples):
    """Fraction of sample points whose containing cell owns the nearest
    site, with distances taken in the projected plane.

    ``samples`` are (lon, lat) rows; cells are convex, so containment is
    a half-plane test against the counterclockwise ring.
    """
    import math

    scale = math.cos(math.radians((bounds.min_lat + bounds.max_lat) / 2))
    sites = np.array([(s.longitude * scale, s.latitude) for s in registry])
    pts = np.column_stack((samples[:, 0] * scale, samples[:, 1]))
    d2 = ((pts[:, None, :] - sites[None, :, :]) ** 2).sum(axis=2)
    nearest = d2.argmin(axis=1)

    agree = 0
    for k, cell in enumerate(cells):
        ring = np.asarray(cell.polygon)[:-1]
        ring = np.column_stack((ring[:, 0] * scale, ring[:, 1]))
        nxt = np.roll(ring, -1, axis=0)
        mine = pts[nearest == k]
        if len(mine) == 0:
            continue
        cross = (
            (nxt[None, :, 0] - ring[None, :, 0])
            * (mine[:, None, 1] - ring[None, :, 1])
            - (nxt[None, :, 1] - ring[None, :, 1])
            * (mine[:, None, 0] - ring[None, :, 0])
        )
        agree += int((cross >= -1e-9).all(axis=1).sum())
    return agree / len(samples)


def random_directed_graph(rng, max_nodes=40, edge_prob=0.2, max_weight=10.0):
    """Seeded random directed edge list over string-labeled nodes."""
    n = int(rng.integers(3, max_nodes + 1))
    edges = []
    for i in range(n):
        for j in range(n):
            if i != j and rng.random() < edge_prob:
                w = float(rng.uniform(0.0, max_weight))
                if w == 0.0:
                    w = max_weight  # open interval (0, max]
                edges.append((f"v{i:02d}", f"v{j:02d}", w))
    return edges
