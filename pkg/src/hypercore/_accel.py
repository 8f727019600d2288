"""
Co-occurrence kernels behind every g-neighbour computation.

Two interchangeable backends compute the same thing: for a node ``v``, walk
the alive hyperedges containing it, count how often each alive node co-occurs
with ``v``, and keep the nodes whose count reaches ``g``.

The numba backend is used when numba imports and ``HYPERCORE_DISABLE_NUMBA``
is unset (or "0"). The numpy backend is the reference fallback and is also
what the benchmark compares against.
"""

import os

import numpy as np

try:
    from numba import njit

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - exercised only without numba
    NUMBA_AVAILABLE = False

    def njit(*args, **kwargs):
        def decorator(func):
            return func

        if args and callable(args[0]):
            return args[0]
        return decorator


def _env_disabled() -> bool:
    return os.environ.get("HYPERCORE_DISABLE_NUMBA", "0") not in ("", "0", "false", "False")


BACKEND = "numba" if NUMBA_AVAILABLE and not _env_disabled() else "numpy"


def use_backend(name: str) -> str:
    """Switch the active backend; returns the previous one."""
    global BACKEND
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and not NUMBA_AVAILABLE:
        raise RuntimeError("numba is not installed")
    previous, BACKEND = BACKEND, name
    return previous


# ---------------------------------------------------------------------------
# numba kernels
# ---------------------------------------------------------------------------


@njit(cache=True)
def _count_numba(v, node_ptr, node_edges, edge_ptr, edge_nodes, node_alive, edge_alive, counts, touched):
    # counts must be all-zero on entry; caller is responsible for clearing.
    nt = 0
    for i in range(node_ptr[v], node_ptr[v + 1]):
        e = node_edges[i]
        if not edge_alive[e]:
            continue
        for j in range(edge_ptr[e], edge_ptr[e + 1]):
            u = edge_nodes[j]
            if u == v or not node_alive[u]:
                continue
            if counts[u] == 0:
                touched[nt] = u
                nt += 1
            counts[u] += 1
    return nt


@njit(cache=True)
def _neighbours_numba(v, g, node_ptr, node_edges, edge_ptr, edge_nodes, node_alive, edge_alive, counts, touched):
    nt = _count_numba(v, node_ptr, node_edges, edge_ptr, edge_nodes, node_alive, edge_alive, counts, touched)
    m = 0
    for i in range(nt):
        if counts[touched[i]] >= g:
            m += 1
    ids = np.empty(m, np.int64)
    sups = np.empty(m, np.int64)
    m = 0
    for i in range(nt):
        u = touched[i]
        if counts[u] >= g:
            ids[m] = u
            sups[m] = counts[u]
            m += 1
        counts[u] = 0
    order = np.argsort(ids)
    return ids[order], sups[order]


@njit(cache=True)
def _sizes_numba(nodes, g, node_ptr, node_edges, edge_ptr, edge_nodes, node_alive, edge_alive, counts, touched):
    out = np.zeros(nodes.shape[0], np.int64)
    for idx in range(nodes.shape[0]):
        v = nodes[idx]
        nt = _count_numba(v, node_ptr, node_edges, edge_ptr, edge_nodes, node_alive, edge_alive, counts, touched)
        c = 0
        for i in range(nt):
            u = touched[i]
            if counts[u] >= g:
                c += 1
            counts[u] = 0
        out[idx] = c
    return out


# ---------------------------------------------------------------------------
# numpy fallback
# ---------------------------------------------------------------------------


def _members_numpy(v, node_ptr, node_edges, edge_ptr, edge_nodes, node_alive, edge_alive):
    inc = node_edges[node_ptr[v]:node_ptr[v + 1]]
    inc = inc[edge_alive[inc]]
    if inc.size == 0:
        return np.empty(0, np.int64)
    starts = edge_ptr[inc]
    lens = edge_ptr[inc + 1] - starts
    # flat gather of every member slot of the selected hyperedges
    shift = np.repeat(starts - (np.cumsum(lens) - lens), lens)
    members = edge_nodes[shift + np.arange(int(lens.sum()))]
    return members[node_alive[members] & (members != v)]


def _neighbours_numpy(v, g, node_ptr, node_edges, edge_ptr, edge_nodes, node_alive, edge_alive, counts, touched):
    members = _members_numpy(v, node_ptr, node_edges, edge_ptr, edge_nodes, node_alive, edge_alive)
    ids, sups = np.unique(members, return_counts=True)
    keep = sups >= g
    return ids[keep].astype(np.int64), sups[keep].astype(np.int64)


def _sizes_numpy(nodes, g, node_ptr, node_edges, edge_ptr, edge_nodes, node_alive, edge_alive, counts, touched):
    out = np.zeros(len(nodes), np.int64)
    for idx, v in enumerate(nodes):
        members = _members_numpy(v, node_ptr, node_edges, edge_ptr, edge_nodes, node_alive, edge_alive)
        _, sups = np.unique(members, return_counts=True)
        out[idx] = int(np.count_nonzero(sups >= g))
    return out


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------


def neighbour_arrays(v, g, csr, node_alive, edge_alive, scratch):
    """Sorted g-neighbour ids of ``v`` and their supports, as two int64 arrays."""
    fn = _neighbours_numba if BACKEND == "numba" else _neighbours_numpy
    return fn(np.int64(v), np.int64(g), *csr, node_alive, edge_alive, *scratch)


def neighbour_sizes(nodes, g, csr, node_alive, edge_alive, scratch):
    """``|N^g(v)|`` for each node in ``nodes`` (one kernel call for the batch)."""
    nodes = np.ascontiguousarray(nodes, dtype=np.int64)
    fn = _sizes_numba if BACKEND == "numba" else _sizes_numpy
    return fn(nodes, np.int64(g), *csr, node_alive, edge_alive, *scratch)


def warmup() -> None:
    """Compile (or load from cache) the numba kernels so timings exclude JIT."""
    if not NUMBA_AVAILABLE:
        return
    ptr = np.array([0, 2, 4], np.int64)
    members = np.array([0, 1, 0, 1], np.int64)
    alive = np.ones(2, np.bool_)
    scratch = (np.zeros(2, np.int64), np.zeros(2, np.int64))
    csr = (ptr, np.array([0, 1, 0, 1], np.int64), ptr, members)
    _neighbours_numba(np.int64(0), np.int64(1), *csr, alive, alive, *scratch)
    _sizes_numba(np.array([0, 1], np.int64), np.int64(1), *csr, alive, alive, *scratch)
