"""
Hypergraph storage, text ingest, and the primitive quantities the peeling
algorithms are built from: pairwise support, g-neighbour maps, and the
fraction of a hyperedge that is still inside a node set.

Hyperedges and incidence lists are kept as two CSR arrays so the kernels in
``_accel`` can walk them without Python objects in the loop.
"""

from __future__ import annotations

import io
import logging
import os
from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction
from typing import Iterable, Iterator, NamedTuple, Optional, Sequence, TextIO, Union

import numpy as np

from . import _accel
from .errors import FormatError, ParameterError

log = logging.getLogger(__name__)

WEAK = "weak"
STRONG = "strong"


# ---------------------------------------------------------------------------
# Hypergraph
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Hypergraph:
    """Immutable simple hypergraph over dense node ids ``0..node_count-1``.

    ``edge_ptr``/``edge_nodes`` hold node(e) for every hyperedge (members
    sorted), ``node_ptr``/``node_edges`` hold the sorted incidence list edge(v).
    """

    node_count: int
    edge_ptr: np.ndarray
    edge_nodes: np.ndarray
    node_ptr: np.ndarray
    node_edges: np.ndarray
    labels: Optional[tuple] = None
    duplicates_dropped: int = 0
    _label_index: dict = field(default=None, repr=False)

    # construction -----------------------------------------------------------

    @classmethod
    def from_edges(
        cls,
        edges: Iterable[Iterable[int]],
        node_count: Optional[int] = None,
        labels: Optional[Sequence[str]] = None,
    ) -> "Hypergraph":
        """Build from node-id collections. Repeated ids inside one hyperedge
        are merged; a hyperedge repeating an earlier node set is dropped and
        counted in ``duplicates_dropped``."""
        seen = set()
        kept = []
        dropped = 0
        for raw in edges:
            members = tuple(sorted(set(int(u) for u in raw)))
            if not members:
                raise ValueError("hyperedges must contain at least one node")
            if members[0] < 0:
                raise ValueError(f"negative node id {members[0]}")
            if members in seen:
                dropped += 1
                continue
            seen.add(members)
            kept.append(members)

        max_id = max((m[-1] for m in kept), default=-1)
        if node_count is None:
            node_count = len(labels) if labels is not None else max_id + 1
        if max_id >= node_count:
            raise ValueError(f"node id {max_id} out of range for node_count={node_count}")
        if labels is not None and len(labels) != node_count:
            raise ValueError("labels must name every node")

        cards = np.fromiter((len(m) for m in kept), dtype=np.int64, count=len(kept))
        edge_ptr = np.zeros(len(kept) + 1, dtype=np.int64)
        np.cumsum(cards, out=edge_ptr[1:])
        edge_nodes = np.fromiter((u for m in kept for u in m), dtype=np.int64, count=int(edge_ptr[-1]))

        # transpose: stable sort by node keeps edge ids ascending per node
        edge_of_slot = np.repeat(np.arange(len(kept), dtype=np.int64), cards)
        order = np.argsort(edge_nodes, kind="stable")
        node_edges = edge_of_slot[order]
        degree = np.bincount(edge_nodes, minlength=node_count).astype(np.int64)
        node_ptr = np.zeros(node_count + 1, dtype=np.int64)
        np.cumsum(degree, out=node_ptr[1:])

        label_tuple = tuple(labels) if labels is not None else None
        index = {lab: i for i, lab in enumerate(label_tuple)} if label_tuple is not None else None
        return cls(node_count, edge_ptr, edge_nodes, node_ptr, node_edges, label_tuple, dropped, index)

    # basic accessors --------------------------------------------------------

    @property
    def edge_count(self) -> int:
        return len(self.edge_ptr) - 1

    @property
    def cardinalities(self) -> np.ndarray:
        return np.diff(self.edge_ptr)

    @property
    def degrees(self) -> np.ndarray:
        return np.diff(self.node_ptr)

    @property
    def csr(self) -> tuple:
        return (self.node_ptr, self.node_edges, self.edge_ptr, self.edge_nodes)

    def members(self, e: int) -> np.ndarray:
        """node(e), sorted."""
        return self.edge_nodes[self.edge_ptr[e]:self.edge_ptr[e + 1]]

    def incident(self, v: int) -> np.ndarray:
        """edge(v), sorted."""
        return self.node_edges[self.node_ptr[v]:self.node_ptr[v + 1]]

    @property
    def hyperedges(self) -> list:
        return [frozenset(self.members(e).tolist()) for e in range(self.edge_count)]

    def label(self, v: int) -> str:
        return self.labels[v] if self.labels is not None else str(v)

    def node_id(self, label: str) -> int:
        if self._label_index is None:
            return int(label)
        return self._label_index[label]

    def ids(self, labels: Iterable[str]) -> list:
        return [self.node_id(x) for x in labels]

    def __repr__(self) -> str:
        return f"Hypergraph(nodes={self.node_count}, hyperedges={self.edge_count})"


# ---------------------------------------------------------------------------
# Text format
# ---------------------------------------------------------------------------


def load_hypergraph(source: Union[TextIO, str, bytes, "os.PathLike"]) -> Hypergraph:
    """Read one hyperedge per line, whitespace-separated node tokens.

    ``source`` may be an open text/binary stream or a filesystem path. Lines
    starting with ``#`` and blank lines are skipped. Tokens get dense ids in
    order of first appearance.
    """
    if isinstance(source, (str, bytes)) or hasattr(source, "__fspath__"):
        with open(source, "rb") as fh:
            return load_hypergraph(fh)

    try:
        text = source.read()
    except UnicodeDecodeError as exc:
        raise FormatError(f"input is not UTF-8 text: {exc}") from exc
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise FormatError(f"input is not UTF-8 text: {exc}") from exc
    if not isinstance(text, str):
        raise FormatError("input stream did not yield text")
    if "\x00" in text:
        raise FormatError("input contains NUL bytes; not a text hypergraph file")

    index: dict = {}
    labels: list = []
    edges = []
    for line in text.splitlines():
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        members = []
        for tok in stripped.split():
            nid = index.get(tok)
            if nid is None:
                nid = index[tok] = len(labels)
                labels.append(tok)
            members.append(nid)
        edges.append(members)

    hg = Hypergraph.from_edges(edges, node_count=len(labels), labels=labels)
    if hg.duplicates_dropped:
        log.warning("dropped %d duplicate hyperedge(s) at ingest", hg.duplicates_dropped)
    return hg


def loads_hypergraph(text: str) -> Hypergraph:
    return load_hypergraph(io.StringIO(text))


def dump_hypergraph(hg: Hypergraph, fh: TextIO) -> None:
    """Write ``hg`` in the same line format ``load_hypergraph`` reads."""
    for e in range(hg.edge_count):
        fh.write(" ".join(hg.label(int(u)) for u in hg.members(e)))
        fh.write("\n")


def dumps_hypergraph(hg: Hypergraph) -> str:
    buf = io.StringIO()
    dump_hypergraph(hg, buf)
    return buf.getvalue()


# ---------------------------------------------------------------------------
# Node sets and thresholds
# ---------------------------------------------------------------------------


class NodeSet:
    """Membership over dense node ids backed by a boolean mask."""

    __slots__ = ("mask", "_size")

    def __init__(self, node_count: int, members: Iterable[int] = ()):
        self.mask = np.zeros(node_count, dtype=np.bool_)
        for v in members:
            self.mask[v] = True
        self._size = int(self.mask.sum())

    @classmethod
    def full(cls, node_count: int) -> "NodeSet":
        ns = cls(node_count)
        ns.mask[:] = True
        ns._size = node_count
        return ns

    @classmethod
    def from_mask(cls, mask: np.ndarray) -> "NodeSet":
        ns = cls(0)
        ns.mask = np.array(mask, dtype=np.bool_)
        ns._size = int(ns.mask.sum())
        return ns

    def __contains__(self, v) -> bool:
        return 0 <= v < len(self.mask) and bool(self.mask[v])

    def add(self, v: int) -> None:
        if not self.mask[v]:
            self.mask[v] = True
            self._size += 1

    def discard(self, v: int) -> None:
        if self.mask[v]:
            self.mask[v] = False
            self._size -= 1

    def __len__(self) -> int:
        return self._size

    def __iter__(self) -> Iterator[int]:
        return iter(np.flatnonzero(self.mask).tolist())

    def ids(self) -> np.ndarray:
        return np.flatnonzero(self.mask)

    def copy(self) -> "NodeSet":
        return NodeSet.from_mask(self.mask)

    def __eq__(self, other) -> bool:
        if isinstance(other, NodeSet):
            return np.array_equal(self.mask, other.mask)
        if isinstance(other, (set, frozenset)):
            return set(self) == other
        return NotImplemented

    def __le__(self, other: "NodeSet") -> bool:
        return not np.any(self.mask & ~other.mask)

    def __repr__(self) -> str:
        return f"NodeSet({sorted(self)})"


def parse_threshold(p) -> Fraction:
    """Exact rational fraction threshold in [0, 1].

    Strings and floats are read through their decimal text, so ``"0.7"`` and
    ``0.7`` both become 7/10 rather than the nearest binary double.
    """
    if isinstance(p, Fraction):
        value = p
    else:
        try:
            value = Fraction(p if isinstance(p, str) else str(p))
        except (ValueError, ZeroDivisionError) as exc:
            raise ParameterError(f"invalid fraction threshold {p!r}") from exc
    if not 0 <= value <= 1:
        raise ParameterError(f"fraction threshold must lie in [0, 1], got {p}")
    return value


def check_params(k: int, g: int, p=None) -> Optional[Fraction]:
    if int(k) != k or k < 1:
        raise ParameterError(f"k must be a positive integer, got {k}")
    if int(g) != g or g < 1:
        raise ParameterError(f"g must be a positive integer, got {g}")
    return None if p is None else parse_threshold(p)


class EdgeFraction(NamedTuple):
    """``inside / size`` for one hyperedge, kept as two integers."""

    inside: int
    size: int

    @property
    def numerator(self) -> int:
        return self.inside

    @property
    def denominator(self) -> int:
        return self.size

    @property
    def value(self) -> Fraction:
        return Fraction(self.inside, self.size)

    def below(self, p: Fraction) -> bool:
        return self.inside * p.denominator < p.numerator * self.size

    def __float__(self) -> float:
        return self.inside / self.size


def is_weak(inside: int, size: int, p: Fraction) -> bool:
    return inside * p.denominator < p.numerator * size


# ---------------------------------------------------------------------------
# Workspace and primitive quantities
# ---------------------------------------------------------------------------


class Workspace:
    """Scratch buffers reused by the co-occurrence kernel; one per peeling run."""

    __slots__ = ("counts", "touched")

    def __init__(self, node_count: int):
        self.counts = np.zeros(max(node_count, 1), dtype=np.int64)
        self.touched = np.zeros(max(node_count, 1), dtype=np.int64)

    def as_tuple(self) -> tuple:
        return (self.counts, self.touched)


def _node_mask(hg: Hypergraph, alive_nodes) -> np.ndarray:
    if alive_nodes is None:
        return np.ones(hg.node_count, dtype=np.bool_)
    if isinstance(alive_nodes, NodeSet):
        return alive_nodes.mask
    if isinstance(alive_nodes, np.ndarray) and alive_nodes.dtype == np.bool_:
        return alive_nodes
    mask = np.zeros(hg.node_count, dtype=np.bool_)
    mask[list(alive_nodes)] = True
    return mask


def _edge_mask(hg: Hypergraph, alive_edges) -> np.ndarray:
    if alive_edges is None:
        return np.ones(hg.edge_count, dtype=np.bool_)
    if isinstance(alive_edges, np.ndarray) and alive_edges.dtype == np.bool_:
        return alive_edges
    mask = np.zeros(hg.edge_count, dtype=np.bool_)
    mask[list(alive_edges)] = True
    return mask


def support(hg: Hypergraph, u: int, v: int, alive_edges=None) -> int:
    """Number of alive hyperedges containing both ``u`` and ``v``."""
    if u == v:
        raise ValueError("support is defined only between distinct nodes")
    emask = _edge_mask(hg, alive_edges)
    shared = np.intersect1d(hg.incident(u), hg.incident(v), assume_unique=True)
    return int(np.count_nonzero(emask[shared]))


def g_neighbours(hg: Hypergraph, v: int, alive_nodes, alive_edges, g: int, counter=None) -> dict:
    """Map every alive node sharing at least ``g`` alive hyperedges with ``v``
    to that shared count.

    ``counter``, if given, is an object with a ``tick()`` method called once
    per invocation (see ``report.Instrumentation``).
    """
    if g < 1:
        raise ParameterError("g must be >= 1")
    nmask = _node_mask(hg, alive_nodes)
    if not nmask[v]:
        raise ValueError(f"node {v} is not alive")
    emask = _edge_mask(hg, alive_edges)
    if counter is not None:
        counter.tick()
    ids, sups = _accel.neighbour_arrays(v, g, hg.csr, nmask, emask, Workspace(hg.node_count).as_tuple())
    return dict(zip(ids.tolist(), sups.tolist()))


def fraction(hg: Hypergraph, e: int, alive_nodes) -> EdgeFraction:
    """Share of node(e) inside ``alive_nodes``; the denominator is always the
    original cardinality of ``e``."""
    members = hg.members(e)
    if members.size == 0:
        raise ValueError(f"hyperedge {e} is empty")
    nmask = _node_mask(hg, alive_nodes)
    return EdgeFraction(int(np.count_nonzero(nmask[members])), int(members.size))


def classify_edge(hg: Hypergraph, e: int, alive_nodes, p) -> str:
    """``"weak"`` if the fraction of ``e`` is strictly below ``p``, else ``"strong"``."""
    threshold = parse_threshold(p)
    return WEAK if fraction(hg, e, alive_nodes).below(threshold) else STRONG


def format_threshold(p: Fraction) -> str:
    """Decimal text for terminating fractions (``7/10`` -> ``"0.7"``), else ``"a/b"``."""
    den = p.denominator
    for prime in (2, 5):
        while den % prime == 0:
            den //= prime
    if den != 1:
        return f"{p.numerator}/{p.denominator}"
    text = format(Decimal(p.numerator) / Decimal(p.denominator), "f")
    return text if text in ("0", "1") or "." not in text else text.rstrip("0").rstrip(".")
