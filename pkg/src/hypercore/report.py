"""Run instrumentation: g-neighbour call counts, iteration profile, timings."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

PHASES = ("kg", "post")


class Instrumentation:
    """Per-run counter threaded through the algorithms (never global)."""

    __slots__ = ("phase", "calls")

    def __init__(self):
        self.phase = "kg"
        self.calls = {name: 0 for name in PHASES}

    def tick(self, n: int = 1) -> None:
        self.calls[self.phase] += n

    @property
    def total(self) -> int:
        return sum(self.calls.values())


@dataclass
class RunReport:
    algo: str
    k: int
    g: int
    p: Optional[str] = None
    gnbr_calls_kg: int = 0
    gnbr_calls_post: int = 0
    kg_core_nodes: int = 0
    iterations: int = 0
    per_iteration: list = field(default_factory=list)  # [(nodes_removed, edges_removed)]
    edge_lb_skips: int = 0
    node_lb_skips: int = 0
    result_nodes: int = 0
    result_edges: int = 0
    wall_time: float = 0.0
    kg_time: float = 0.0
    post_time: float = 0.0
    bound_checks: int = 0
    bound_violations: list = field(default_factory=list)
    exactness_checks: int = 0
    exactness_violations: list = field(default_factory=list)
    trace: Optional[list] = None

    @property
    def gnbr_calls(self) -> int:
        return self.gnbr_calls_kg + self.gnbr_calls_post

    @property
    def result_sizes(self) -> tuple:
        return (self.result_nodes, self.result_edges)

    def removal_share(self, first: int = 3) -> float:
        """Fraction of all removed nodes and hyperedges removed in the first
        ``first`` iterations; 1.0 when nothing was removed."""
        total = sum(n + e for n, e in self.per_iteration)
        if total == 0:
            return 1.0
        early = sum(n + e for n, e in self.per_iteration[:first])
        return early / total

    def to_dict(self, timing: bool = True) -> dict:
        out = {
            "algo": self.algo,
            "params": {"k": self.k, "g": self.g, "p": self.p},
            "result": {"nodes": self.result_nodes, "strong_edges": self.result_edges},
            "kg_core_nodes": self.kg_core_nodes,
            "gnbr_calls": {
                "kg": self.gnbr_calls_kg,
                "post": self.gnbr_calls_post,
                "total": self.gnbr_calls,
            },
            "iterations": self.iterations,
            "per_iteration": [
                {"nodes_removed": n, "edges_removed": e} for n, e in self.per_iteration
            ],
            "pruning": {
                "edge_lb_skips": self.edge_lb_skips,
                "node_lb_skips": self.node_lb_skips,
            },
        }
        if self.bound_checks or self.exactness_checks:
            out["soundness"] = {
                "bound_checks": self.bound_checks,
                "bound_violations": len(self.bound_violations),
                "exactness_checks": self.exactness_checks,
                "exactness_violations": len(self.exactness_violations),
            }
        if timing:
            out["timing"] = {
                "wall_time": self.wall_time,
                "kg_time": self.kg_time,
                "post_time": self.post_time,
            }
        return out

    def to_json(self, timing: bool = True) -> str:
        return json.dumps(self.to_dict(timing=timing), indent=2) + "\n"
