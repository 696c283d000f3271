from __future__ import annotations

from collections import deque

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from diskhull.lattice import loop_area, topological_area, trace_outer_boundary
from diskhull.sampling import sample_lattice_walk

_MOVES = {0: (1, 0), 1: (0, 1), 2: (-1, 0), 3: (0, -1)}


def flood_fill_area(sites: np.ndarray) -> int:
    """Unit cells not reachable from outside the bounding box when the trace
    edges are walls. Cell (i, j) is the square [i, i+1] x [j, j+1]."""
    walls = set()
    for (x0, y0), (x1, y1) in zip(sites[:-1].tolist(), sites[1:].tolist()):
        if (x0, y0) != (x1, y1):
            walls.add(frozenset(((x0, y0), (x1, y1))))
    xmin, ymin = sites.min(axis=0) - 1
    xmax, ymax = sites.max(axis=0) + 1
    seen = {(xmin, ymin)}
    queue = deque(seen)
    while queue:
        i, j = queue.popleft()
        # crossing to the right means passing the edge (i+1, j)-(i+1, j+1)
        for di, dj, edge in (
            (1, 0, ((i + 1, j), (i + 1, j + 1))),
            (-1, 0, ((i, j), (i, j + 1))),
            (0, 1, ((i, j + 1), (i + 1, j + 1))),
            (0, -1, ((i, j), (i + 1, j))),
        ):
            n = (i + di, j + dj)
            if not (xmin <= n[0] < xmax and ymin <= n[1] < ymax) or n in seen:
                continue
            if frozenset(edge) in walls:
                continue
            seen.add(n)
            queue.append(n)
    return (xmax - xmin) * (ymax - ymin) - len(seen)


def random_walk(rng, n: int) -> np.ndarray:
    d = rng.integers(0, 4, size=n)
    steps = np.array([_MOVES[k] for k in d], dtype=np.int64)
    return np.vstack([[0, 0], np.cumsum(steps, axis=0)])


def test_flood_fill_oracle_on_500_random_walks():
    rng = np.random.default_rng(2024)
    for _ in range(500):
        w = random_walk(rng, 200)
        assert topological_area(w) == flood_fill_area(w)


@given(st.lists(st.integers(0, 3), min_size=1, max_size=120))
def test_flood_fill_oracle_property(moves):
    steps = np.array([_MOVES[k] for k in moves], dtype=np.int64)
    w = np.vstack([[0, 0], np.cumsum(steps, axis=0)])
    assert topological_area(w) == flood_fill_area(w)


def test_killed_walks_match_oracle():
    for sid in range(30):
        w = sample_lattice_walk(15, 3, sid)
        assert topological_area(w) == flood_fill_area(w.sites)


def test_unit_square_and_degenerate_walks():
    square = np.array([(0, 0), (1, 0), (1, 1), (0, 1), (0, 0)])
    assert topological_area(square) == 1
    assert topological_area(np.array([(0, 0), (1, 0), (2, 0), (1, 0)])) == 0
    assert topological_area(np.array([(0, 0)])) == 0
    # two squares joined at a corner
    bowtie = np.array([(0, 0), (1, 0), (1, 1), (2, 1), (2, 2), (1, 2), (1, 1), (0, 1), (0, 0)])
    assert topological_area(bowtie) == 2


def test_boundary_loop_is_counterclockwise_closed_unit_loop():
    rng = np.random.default_rng(8)
    w = random_walk(rng, 400)
    loop = trace_outer_boundary(w)
    steps = np.abs(np.diff(np.vstack([loop, loop[:1]]), axis=0)).sum(axis=1)
    assert np.all(steps == 1)
    assert loop_area(loop) >= 0
    visited = set(map(tuple, w.tolist()))
    assert set(map(tuple, loop.tolist())) <= visited


def test_enclosed_hole_is_filled():
    # ring of side 3 with an empty centre cell block
    ring = [(0, 0), (1, 0), (2, 0), (3, 0), (3, 1), (3, 2), (3, 3), (2, 3), (1, 3), (0, 3), (0, 2), (0, 1), (0, 0)]
    assert topological_area(np.array(ring)) == 9


def test_rejects_non_neighbour_steps():
    with pytest.raises(ValueError):
        trace_outer_boundary(np.array([(0, 0), (2, 0)]))
