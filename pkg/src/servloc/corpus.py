"""Deterministic random instance corpora shared by tests and scripts."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .instance import Instance, generate_random


@dataclass(frozen=True)
class CorpusConfig:
    count: int
    max_m: int
    max_n: int
    seed: int = 0


def corpus(cfg: CorpusConfig) -> list[Instance]:
    """``cfg.count`` instances cycling through every shape up to ``max_m`` x ``max_n``."""
    shapes = [(m, n) for m in range(1, cfg.max_m + 1) for n in range(1, cfg.max_n + 1)]
    out = []
    for k in range(cfg.count):
        m, n = shapes[k % len(shapes)]
        out.append(generate_random(m, n, cfg.seed + k))
    return out


def opening_costs(inst: Instance, seed: int, low: int = 0, high: int = 6) -> tuple[Fraction, ...]:
    rng = random.Random(seed)
    return tuple(Fraction(rng.randint(low, high)) for _ in range(inst.n))
