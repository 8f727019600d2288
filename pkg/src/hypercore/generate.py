"""Synthetic hypergraphs with a heavy-tailed node degree profile."""

from __future__ import annotations

import os
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from .errors import ParameterError
from .hypergraph import Hypergraph, loads_hypergraph


def default_seed() -> int:
    return int(os.environ.get("HYPERCORE_SEED", "0"))


@dataclass
class GenConfig:
    """Hyperedge sizes are uniform on ``[min_card, max_card]``; members are
    drawn without replacement with node ``i`` weighted ``(i+1) ** -skew``."""

    node_count: int
    edge_count: int
    min_card: int = 2
    max_card: int = 10
    skew: float = 1.0
    seed: Optional[int] = None

    def validate(self) -> "GenConfig":
        if self.node_count < 1 or self.edge_count < 0:
            raise ParameterError("node_count must be >= 1 and edge_count >= 0")
        if not 1 <= self.min_card <= self.max_card:
            raise ParameterError(f"bad cardinality range [{self.min_card}, {self.max_card}]")
        if self.max_card > self.node_count:
            raise ParameterError(
                f"cardinality range [{self.min_card}, {self.max_card}] exceeds node_count={self.node_count}"
            )
        if self.skew < 0:
            raise ParameterError("skew must be >= 0")
        return self

    def to_dict(self) -> dict:
        return asdict(self)


def _draw(rng, cdf, c, n, weights):
    # sequential weighted sampling without replacement == draw with
    # replacement and discard repeats
    chosen = []
    seen = set()
    for _ in range(64):
        for u in np.searchsorted(cdf, rng.random(2 * c), side="right").tolist():
            u = min(u, n - 1)
            if u not in seen:
                seen.add(u)
                chosen.append(u)
                if len(chosen) == c:
                    return chosen
    rest = np.ones(n, dtype=np.bool_)
    rest[chosen] = False
    pool = np.flatnonzero(rest)
    w = weights[pool] / weights[pool].sum()
    chosen.extend(rng.choice(pool, size=c - len(chosen), replace=False, p=w).tolist())
    return chosen


def generate_lines(cfg: GenConfig) -> list:
    cfg.validate()
    seed = default_seed() if cfg.seed is None else cfg.seed
    rng = np.random.default_rng(seed)
    n = cfg.node_count
    weights = np.arange(1, n + 1, dtype=np.float64) ** (-cfg.skew)
    cdf = np.cumsum(weights)
    cdf /= cdf[-1]
    lines = []
    for _ in range(cfg.edge_count):
        c = int(rng.integers(cfg.min_card, cfg.max_card + 1))
        lines.append(" ".join(str(u) for u in _draw(rng, cdf, c, n, weights)))
    return lines


def gen_hypergraph_text(cfg: GenConfig) -> str:
    return "".join(line + "\n" for line in generate_lines(cfg))


def gen_hypergraph(cfg: GenConfig, path: Optional[str] = None) -> Hypergraph:
    """Generate, optionally write to ``path``, and load back through the
    normal ingest path (so duplicate hyperedges are dropped the same way)."""
    text = gen_hypergraph_text(cfg)
    if path is not None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    return loads_hypergraph(text)
