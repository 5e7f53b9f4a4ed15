"""The q-color coincidence experiment and its exponential lower bound.

z balls of each of q colors land independently in n boxes under a measure mu;
the event of interest is some box receiving at least one ball of every color.
Whenever z >= 2 n^(1-1/q), the probability is at least
1 - exp(-c z / n^(1-1/q)) for c <= -(1/4) ln(1 - 2^-q), in particular for the
default c = 2^-(q+2).  The bound holds for every mu.

coincidence_exact is the brute-force oracle (full enumeration over n^(qz)
outcomes); coincidence_simulate is the Monte Carlo estimator with
deterministic chunked streams.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import NamedTuple

import numpy as np

from .rng import RandomSource, as_generator
from .words import ResourceLimitError

#: Trials per simulation chunk; fixed so that results do not depend on threading.
CHUNK_TRIALS = 1 << 13


class HypothesisError(ValueError):
    """A stated precondition of the coincidence bound fails."""


def default_bound_constant(q: int) -> Fraction:
    """The headline constant 2^-(q+2)."""
    return Fraction(1, 2 ** (q + 2))


def uniform_measure(n: int) -> tuple[Fraction, ...]:
    return tuple(Fraction(1, n) for _ in range(n))


def geometric_measure(n: int) -> tuple[Fraction, ...]:
    """mu_i proportional to 2^-i, normalized."""
    total = 2**n - 1
    return tuple(Fraction(2 ** (n - i), total) for i in range(1, n + 1))


@dataclass(frozen=True)
class PigeonholeConfig:
    """n boxes, q colors, z balls per color, measure mu, bound constant c."""

    n: int
    q: int
    z: int
    mu: tuple
    c: Fraction | None = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if self.q < 2:
            raise ValueError(f"q must be >= 2, got {self.q}")
        if self.z < 1:
            raise ValueError(f"z must be >= 1, got {self.z}")
        if len(self.mu) != self.n:
            raise ValueError(f"mu has length {len(self.mu)}, expected n={self.n}")
        if any(p < 0 for p in self.mu):
            raise ValueError("mu entries must be nonnegative")
        if sum(self.mu) != 1:
            raise ValueError("mu must sum to exactly 1")
        if self.c is None:
            object.__setattr__(self, "c", default_bound_constant(self.q))
        if self.c <= 0:
            raise ValueError("bound constant c must be positive")

    @property
    def hypothesis_met(self) -> bool:
        """z >= 2 n^(1-1/q), decided exactly as z^q >= 2^q n^(q-1)."""
        return self.z**self.q >= (2**self.q) * self.n ** (self.q - 1)

    @classmethod
    def uniform(cls, n: int, q: int, z: int, c: Fraction | None = None) -> "PigeonholeConfig":
        return cls(n, q, z, uniform_measure(n), c)

    @classmethod
    def geometric(cls, n: int, q: int, z: int, c: Fraction | None = None) -> "PigeonholeConfig":
        return cls(n, q, z, geometric_measure(n), c)


def coincidence_bound(cfg: PigeonholeConfig) -> float:
    """The lower bound 1 - exp(-c z / n^(1-1/q)); requires the hypothesis."""
    scale = cfg.n ** (1.0 - 1.0 / cfg.q)
    if not cfg.hypothesis_met:
        raise HypothesisError(
            f"hypothesis z >= 2*n^(1-1/q) fails: z={cfg.z}, 2*n^(1-1/q)={2 * scale:.6g}"
        )
    cap = -0.25 * math.log1p(-(2.0**-cfg.q))
    if float(cfg.c) > cap * (1 + 1e-12):
        raise HypothesisError(
            f"hypothesis c <= -(1/4)ln(1-2^-q) fails: c={float(cfg.c):.6g}, cap={cap:.6g}"
        )
    return -math.expm1(-float(cfg.c) * cfg.z / scale)


def _group_outcomes(cfg: PigeonholeConfig) -> list[tuple[int, Fraction]]:
    """(hit-box bitmask, weight) over all n^z placements of one color group."""
    out = []
    for combo in product(range(cfg.n), repeat=cfg.z):
        w = Fraction(1)
        mask = 0
        for b in combo:
            w *= cfg.mu[b]
            mask |= 1 << b
        out.append((mask, w))
    return out


def coincidence_exact(cfg: PigeonholeConfig, max_outcomes: int = 1 << 21) -> Fraction:
    """Exact coincidence probability by enumeration over all n^(qz) outcomes."""
    total_outcomes = cfg.n ** (cfg.q * cfg.z)
    if total_outcomes > max_outcomes:
        raise ResourceLimitError(
            f"enumeration over n^(qz) = {total_outcomes} outcomes exceeds budget {max_outcomes}"
        )
    groups = _group_outcomes(cfg)
    prob = Fraction(0)
    for picks in product(groups, repeat=cfg.q):
        inter = ~0
        w = Fraction(1)
        for mask, gw in picks:
            inter &= mask
            w *= gw
        if inter != 0:
            prob += w
    return prob


class SimResult(NamedTuple):
    estimate: float
    stderr: float
    successes: int
    trials: int


def _simulate_chunk(gen: np.random.Generator, cfg: PigeonholeConfig, count: int,
                    cum: np.ndarray) -> int:
    u = gen.random(size=(count, cfg.q, cfg.z))
    draws = np.searchsorted(cum, u, side="right")
    hit = np.zeros((count, cfg.q, cfg.n), dtype=bool)
    ti = np.arange(count)[:, None, None]
    ci = np.arange(cfg.q)[None, :, None]
    hit[ti, ci, draws] = True
    all_colors = hit.all(axis=1)
    return int(all_colors.any(axis=1).sum())


def coincidence_simulate(cfg: PigeonholeConfig, trials: int, rng,
                         threads: int = 1) -> SimResult:
    """Monte Carlo estimate of the coincidence probability.

    Trials are processed in fixed-size chunks; with a RandomSource each chunk
    draws from its own child stream, so the result depends only on
    (seed, trials), never on threading.  A plain Generator is consumed
    sequentially instead.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    cum = np.cumsum(np.array([float(p) for p in cfg.mu]))
    cum[-1] = 1.0

    counts = [min(CHUNK_TRIALS, trials - s) for s in range(0, trials, CHUNK_TRIALS)]
    if isinstance(rng, RandomSource):
        gens = [rng.child(i).generator() for i in range(len(counts))]
    elif isinstance(rng, (int, np.integer)):
        src = RandomSource(int(rng))
        gens = [src.child(i).generator() for i in range(len(counts))]
    else:
        # One shared stream cannot be split across threads.
        gen = as_generator(rng)
        gens = [gen] * len(counts)
        threads = 1

    if threads > 1 and len(counts) > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            per_chunk = list(pool.map(_simulate_chunk, gens, [cfg] * len(counts),
                                      counts, [cum] * len(counts)))
        successes = sum(per_chunk)
    else:
        successes = 0
        for g, cnt in zip(gens, counts):
            successes += _simulate_chunk(g, cfg, cnt, cum)

    est = successes / trials
    stderr = math.sqrt(est * (1.0 - est) / trials)
    return SimResult(est, stderr, successes, trials)
