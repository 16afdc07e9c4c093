"""2-D geometry for rate regions: hulls, Pareto frontiers, containment, distances."""

from __future__ import annotations

import itertools

import numpy as np

# Cross products below this magnitude count as collinear; collinear boundary
# points are excluded from hulls (strict turns only).
CROSS_TOL = 1e-12


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points) -> np.ndarray:
    """Convex hull of a 2-D point cloud, counterclockwise, strict turns.

    A single input point is returned as is; a collinear cloud collapses to
    its two extreme points.
    """
    pts = np.unique(np.asarray(points, dtype=float).reshape(-1, 2), axis=0)
    if len(pts) == 0:
        raise ValueError("convex_hull needs at least one point")
    if len(pts) == 1:
        return pts.copy()

    def half(seq):
        out = []
        for p in seq:
            while len(out) > 1 and _cross(out[-2], out[-1], p) <= CROSS_TOL:
                out.pop()
            out.append(p)
        return out

    lower = half(pts)
    upper = half(pts[::-1])
    hull = lower[:-1] + upper[:-1]
    if not hull:  # all points coincide after dedupe tolerance
        hull = [pts[0]]
    return np.array(hull)


def pareto_indices(points) -> np.ndarray:
    """Indices of the Pareto-maximal points (maximize both coordinates)."""
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    order = np.lexsort((-pts[:, 1], -pts[:, 0]))  # r1 desc, then r2 desc
    sorted_pts = pts[order]
    keep = []
    best_r2 = -np.inf
    i = 0
    n = len(sorted_pts)
    while i < n:
        j = i
        r1 = sorted_pts[i, 0]
        while j < n and sorted_pts[j, 0] == r1:
            j += 1
        top = sorted_pts[i, 1]  # max r2 within this r1 group
        if top > best_r2:
            keep.append(order[i])
            best_r2 = top
        i = j
    return np.array(sorted(keep), dtype=int)


def pareto_frontier(points) -> np.ndarray:
    """Pareto-maximal subset, sorted by increasing r1."""
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    fro = pts[pareto_indices(pts)]
    return fro[np.argsort(fro[:, 0])]


def signed_edge_distances(hull: np.ndarray, pts: np.ndarray) -> np.ndarray:
    """Per-edge signed perpendicular distance of each point (CCW hull).

    Positive everywhere means strictly inside. Shape (n_pts, n_edges).
    """
    v1 = hull
    v2 = np.roll(hull, -1, axis=0)
    edge = v2 - v1
    length = np.hypot(edge[:, 0], edge[:, 1])
    length[length == 0] = 1.0
    d = pts[:, None, 0] - v1[None, :, 0]
    e = pts[:, None, 1] - v1[None, :, 1]
    cross = edge[None, :, 0] * e - edge[None, :, 1] * d
    return cross / length[None, :]


def points_in_hull(hull: np.ndarray, pts, tol: float = 0.0) -> np.ndarray:
    """Boolean mask: which points lie inside/on the hull within `tol`."""
    pts = np.asarray(pts, dtype=float).reshape(-1, 2)
    hull = np.asarray(hull, dtype=float).reshape(-1, 2)
    if len(hull) == 1:
        return np.hypot(*(pts - hull[0]).T) <= tol
    if len(hull) == 2:
        return _segment_distances(hull[0], hull[1], pts) <= tol
    return signed_edge_distances(hull, pts).min(axis=1) >= -tol


def _segment_distances(p, q, pts):
    pq = q - p
    denom = float(pq @ pq)
    t = np.clip(((pts - p) @ pq) / denom, 0.0, 1.0) if denom > 0 else np.zeros(len(pts))
    proj = p + t[:, None] * pq
    return np.hypot(*(pts - proj).T)


def hull_distances(hull: np.ndarray, pts) -> np.ndarray:
    """Euclidean distance of each point to the hull region (0 if inside)."""
    pts = np.asarray(pts, dtype=float).reshape(-1, 2)
    hull = np.asarray(hull, dtype=float).reshape(-1, 2)
    if len(hull) == 1:
        return np.hypot(*(pts - hull[0]).T)
    if len(hull) == 2:
        return _segment_distances(hull[0], hull[1], pts)
    inside = signed_edge_distances(hull, pts).min(axis=1) >= 0.0
    v1 = hull
    v2 = np.roll(hull, -1, axis=0)
    per_edge = np.stack(
        [_segment_distances(v1[i], v2[i], pts) for i in range(len(hull))], axis=1
    )
    dist = per_edge.min(axis=1)
    dist[inside] = 0.0
    return dist


def contains(outer, inner, slack: float = 0.0) -> bool:
    """True iff every hull vertex of `inner` lies in `outer`'s hull within slack."""
    return bool(np.all(points_in_hull(outer.hull, inner.hull, tol=slack)))


def containment_slack(outer, inner) -> float:
    """Worst-case signed margin of inner's hull vertices inside outer's hull.

    Nonnegative means contained; -x means some vertex sticks out by x.
    """
    outer_hull = np.asarray(outer.hull, dtype=float)
    inner_pts = np.asarray(inner.hull, dtype=float).reshape(-1, 2)
    if len(outer_hull) < 3:
        d = hull_distances(outer_hull, inner_pts)
        return float(-d.max())
    return float(signed_edge_distances(outer_hull, inner_pts).min(axis=1).min())


def region_distance(a, b) -> float:
    """Directed Hausdorff distance from a's frontier to b's region, in bits."""
    return float(hull_distances(b.hull, a.frontier).max())


def polygon_vertices(normals: np.ndarray, rhs: np.ndarray, tol: float = 1e-9):
    """Vertices of {x : normals @ x <= rhs} for a batch of right-hand sides.

    normals: (m, 2) fixed constraint normals.
    rhs:     (m,) or (m, n) right-hand sides (n independent polygons).
    Returns (points, mask, column): candidate vertices stacked over all
    normal pairs, a feasibility mask, and the batch column of each point.
    """
    normals = np.asarray(normals, dtype=float)
    rhs = np.asarray(rhs, dtype=float)
    squeeze = rhs.ndim == 1
    if squeeze:
        rhs = rhs[:, None]
    m, n = rhs.shape
    pts = []
    cols = []
    for i, j in itertools.combinations(range(m), 2):
        det = normals[i, 0] * normals[j, 1] - normals[i, 1] * normals[j, 0]
        if abs(det) < 1e-12:
            continue
        bi, bj = rhs[i], rhs[j]
        x = (bi * normals[j, 1] - bj * normals[i, 1]) / det
        y = (normals[i, 0] * bj - normals[j, 0] * bi) / det
        pts.append(np.stack([x, y], axis=1))
        cols.append(np.arange(n))
    points = np.concatenate(pts, axis=0)
    column = np.concatenate(cols, axis=0)
    lhs = points @ normals.T
    mask = np.all(lhs <= rhs.T[column] + tol, axis=1)
    return points, mask, column
