"""Run configurations shared by the CLI, the scripts and the acceptance suite."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .scalars import FieldContext


@dataclass(frozen=True)
class CheckConfig:
    """How a verifier runs: violation cap, worker threads and evaluation method."""

    limit: int | None = 10
    threads: int = 1
    method: str = "auto"       # "auto" | "fast" | "naive"
    progress: bool = False     # report chunk progress on stderr

    def __post_init__(self):
        if self.method not in ("auto", "fast", "naive"):
            raise ValueError(f"unknown method {self.method!r}")
        if self.threads < 1:
            raise ValueError("threads must be positive")
        if self.limit is not None and self.limit < 0:
            raise ValueError("limit must be non-negative")


@dataclass(frozen=True)
class SweepConfig:
    """Parameter grid for the exhaustive sweeps over Kan(n) and V(alpha)."""

    kan_ranks: tuple[int, ...] = (2, 3, 4)
    module_ranks: tuple[int, ...] = (2, 3)
    alphas: tuple = (0, 1, -1, 2, Fraction(1, 2))
    embed_alphas: tuple = (0, 1, -1, 2)
    parities: tuple[int, ...] = (0, 1)
    fields: tuple[str, ...] = ("Q", "F5", "F7")
    tensor_rank: int = 2
    tensor_order: int = 4
    mutations: int = 20
    seed: int = 20240611

    def contexts(self) -> list[FieldContext]:
        return [FieldContext.from_name(f) for f in self.fields]


@dataclass
class RunRecord:
    """One line of a sweep: what was checked and how it went."""

    name: str
    ok: bool
    seconds: float = 0.0
    details: dict = field(default_factory=dict)

    def line(self) -> str:
        return f"[{'PASS' if self.ok else 'FAIL'}] {self.name} ({self.seconds:.2f} s)"
