"""Tunables for the nonnegative-rank machinery."""

from __future__ import annotations

import os
from dataclasses import dataclass


@dataclass(frozen=True)
class SearchConfig:
    """Knobs for the factorization search and the exact covering solver.

    The numeric gate epsilon (infinity norm) decides when a float solution is
    worth rationalizing; rationalization rounds through continued fractions
    with denominators capped at den_bound, then re-solves exactly.  bb_budget
    caps the total work (enumeration steps plus branch-and-bound nodes) of the
    exact rectangle covering solver.
    """
    seed: int = 42
    restarts: int = 200
    iters: int = 2000
    epsilon: float = 1e-9
    bb_budget: int = 10_000_000
    den_bound: int = 10 ** 6
    support_tol: float = 1e-7

    @property
    def threads(self) -> int:
        """Worker cap for parallel restarts; XCLAB_THREADS, default 1."""
        try:
            return max(1, int(os.environ.get("XCLAB_THREADS", "1")))
        except ValueError:
            return 1
