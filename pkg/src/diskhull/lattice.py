"""Outer boundary of the topological hull of a nearest-neighbour lattice path.

The trace is the union of the unit edges joining consecutive sites. Its
topological hull (trace plus all bounded complementary faces) is bounded by
the outer face of that planar graph, which a right-hand wall follower walks
in counterclockwise order.
"""

from __future__ import annotations

import numba
import numpy as np

# direction bits, counterclockwise: E, N, W, S
_DX = np.array([1, 0, -1, 0], dtype=np.int64)
_DY = np.array([0, 1, 0, -1], dtype=np.int64)


@numba.njit(cache=True)
def _bounds(sites):
    x0 = x1 = sites[0, 0]
    y0 = y1 = sites[0, 1]
    for i in range(1, sites.shape[0]):
        x = sites[i, 0]
        y = sites[i, 1]
        if x < x0 or (x == x0 and y < y0):
            x0 = x
            y0 = y
        if x > x1:
            x1 = x
        if y > y1:
            y1 = y
    ymin = y0
    for i in range(sites.shape[0]):
        if sites[i, 1] < ymin:
            ymin = sites[i, 1]
    # (x0, y0) is the lexicographically smallest site
    return x0, y0, ymin, x1, y1


@numba.njit(cache=True)
def _edge_grid(sites, x0, y0, w, h):
    """Per-site bitmask of incident trace edges (bit d for direction d).
    Returns (grid, valid) where valid is False if some step is not a unit move."""
    grid = np.zeros((w, h), dtype=np.uint8)
    valid = True
    for i in range(sites.shape[0] - 1):
        ax = sites[i, 0] - x0
        ay = sites[i, 1] - y0
        ddx = sites[i + 1, 0] - sites[i, 0]
        ddy = sites[i + 1, 1] - sites[i, 1]
        if ddx == 1 and ddy == 0:
            d = 0
        elif ddx == 0 and ddy == 1:
            d = 1
        elif ddx == -1 and ddy == 0:
            d = 2
        elif ddx == 0 and ddy == -1:
            d = 3
        else:
            if ddx != 0 or ddy != 0:
                valid = False
            continue
        grid[ax, ay] |= np.uint8(1 << d)
        grid[ax + ddx, ay + ddy] |= np.uint8(1 << ((d + 2) % 4))
    return grid, valid


@numba.njit(cache=True)
def _wall_follow(grid, sx, sy, dx, dy):
    """Right-hand rule from (sx, sy), the lexicographically smallest site,
    pretending to arrive heading north. Stops when the first directed edge
    would be repeated."""
    cap = 16
    loop = np.empty((cap, 2), dtype=np.int64)
    n = 0
    x, y, heading = sx, sy, 1
    first_dir = -1
    while True:
        bits = grid[x, y]
        d = -1
        # right, straight, left, back
        for turn in (3, 0, 1, 2):
            cand = (heading + turn) % 4
            if bits & (1 << cand):
                d = cand
                break
        if d < 0:
            break  # isolated site
        if first_dir < 0:
            first_dir = d
        elif x == sx and y == sy and d == first_dir:
            break
        if n == cap:
            cap *= 2
            grown = np.empty((cap, 2), dtype=np.int64)
            grown[:n] = loop[:n]
            loop = grown
        loop[n, 0] = x
        loop[n, 1] = y
        n += 1
        x += dx[d]
        y += dy[d]
        heading = d
    if n == 0:
        loop[0, 0] = sx
        loop[0, 1] = sy
        n = 1
    return loop[:n].copy()


def trace_outer_boundary(walk) -> np.ndarray:
    """Closed outer-boundary loop (counterclockwise, first site not repeated)
    of the topological hull of the lattice path ``walk``."""
    sites = np.ascontiguousarray(getattr(walk, "sites", walk), dtype=np.int64)
    if sites.ndim != 2 or sites.shape[1] != 2 or sites.shape[0] < 1:
        raise ValueError("expected an (n, 2) integer array of lattice sites")
    sx, sy, ymin, x1, y1 = _bounds(sites)
    grid, valid = _edge_grid(sites, sx, ymin, x1 - sx + 1, y1 - ymin + 1)
    if not valid:
        raise ValueError("consecutive lattice sites must be nearest neighbours")
    loop = _wall_follow(grid, 0, sy - ymin, _DX, _DY)
    loop[:, 0] += sx
    loop[:, 1] += ymin
    return loop


@numba.njit(cache=True)
def _twice_area(loop):
    n = loop.shape[0]
    s = 0
    for i in range(n):
        j = (i + 1) % n
        s += loop[i, 0] * loop[j, 1] - loop[j, 0] * loop[i, 1]
    return s


def loop_area(loop: np.ndarray) -> int:
    """Integer shoelace area of a closed lattice loop traversed counterclockwise."""
    twice = int(_twice_area(np.ascontiguousarray(loop, dtype=np.int64)))
    if twice % 2:
        raise ValueError("lattice loop with half-integer area; not a unit-edge loop")
    return twice // 2


def topological_area(walk) -> int:
    """Number of unit cells enclosed by the trace of ``walk``."""
    return loop_area(trace_outer_boundary(walk))
