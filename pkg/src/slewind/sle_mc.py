"""Monte Carlo oracle: chordal SLE_kappa by discretized Loewner evolution.

Marked points are followed in the moving frame Z_t = g_t(z) - W_t. One step
of length dt is a Strang splitting of dZ = 2/Z dt - dW: half the Brownian
increment, the exact vertical-slit flow Z -> sqrt(Z^2 + 4 dt), then the other
half. A point is resolved once Z is (nearly) real: the trace has passed it,
and the sign of Re Z tells on which side.

Samples are processed in blocks; each block draws from its own Philox stream
keyed by (seed, block index), so results do not depend on scheduling.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .core_cft import as_points, check_point
from .winding import WindingPattern

# Re Z_final > 0 means the trace went to the left of z; the one-point
# probability of this event at z = 1+i is above 1/2, which is the convention
# of the pattern bits in module winding ("separated").
SEPARATED_SIGN = 1.0


class ResolutionError(ValueError):
    """The time step cannot resolve the requested length scale."""


@dataclass(frozen=True)
class McConfig:
    """Sampler settings.

    With ``adaptive`` the step is dt = dt_scale * min |Z|^2 over unresolved
    points of the sample, floored at ``dt_min``; otherwise ``dt`` is fixed.
    """

    kappa: float = 8 / 3
    n_samples: int = 100_000
    dt: float = 1e-4
    adaptive: bool = True
    dt_scale: float = 0.01
    dt_min: float = 1e-12
    t_max: float = 1e8
    seed: int = 0
    swallow_tol: float = 1e-3
    block_size: int = 4096
    workers: int = 1

    def __post_init__(self):
        if self.n_samples < 1:
            raise ValueError("n_samples must be >= 1")
        if self.dt <= 0 or self.dt_scale <= 0:
            raise ValueError("time steps must be positive")
        if not 0 < self.kappa <= 4:
            raise ValueError("the sampler tracks simple traces only (0 < kappa <= 4)")


@dataclass(frozen=True)
class Estimate:
    mean: float
    std_err: float
    n: int
    seed: int
    excluded: int = 0

    @classmethod
    def bernoulli(cls, hits: int, n: int, seed: int, excluded: int = 0) -> "Estimate":
        p = hits / n
        return cls(p, math.sqrt(p * (1 - p) / n), n, seed, excluded)


def _rng(seed: int, block: int) -> np.random.Generator:
    key = np.array([seed & (2 ** 64 - 1), block], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _run_block(points: tuple, n: int, cfg: McConfig, block: int, track_radius: bool):
    """Evolve one block; returns (side bitmask, excluded flag, min conformal-radius proxy)."""
    rng = _rng(cfg.seed, block)
    m = len(points)
    Z = np.tile(np.asarray(points, complex), (n, 1))
    dZ = np.ones((n, m), complex)  # g_t'(z)
    open_ = np.ones((n, m), bool)
    t = np.zeros(n)
    side = np.zeros(n, np.int64)
    live = np.arange(n)
    half_k = cfg.kappa / 2
    while live.size:
        Zl, Ol = Z[live], open_[live]
        if cfg.adaptive:
            r2 = np.where(Ol, np.abs(Zl) ** 2, np.inf).min(axis=1)
            dt = np.maximum(cfg.dt_scale * r2, cfg.dt_min)
        else:
            dt = np.full(live.size, cfg.dt)
        sd = np.sqrt(half_k * dt)
        g = rng.standard_normal((2, live.size))
        Zl = Zl - (g[0] * sd)[:, None]
        w = np.sqrt(Zl * Zl + 4 * dt[:, None])
        w = np.where(w.imag < 0, -w, w)
        if track_radius:
            dZ[live] = np.where(Ol, dZ[live] * Zl / w, dZ[live])
        Zl = np.where(Ol, w - (g[1] * sd)[:, None], Zl)
        t[live] += dt
        done = Ol & (Zl.imag < cfg.swallow_tol * np.abs(Zl))
        bits = (np.sign(Zl.real) == SEPARATED_SIGN) & done
        side[live] |= (bits * (1 << np.arange(m))).sum(axis=1)
        Ol = Ol & ~done
        Z[live] = Zl
        open_[live] = Ol
        finished = ~Ol.any(axis=1) | (t[live] >= cfg.t_max)
        live = live[~finished]
    excluded = open_.any(axis=1)
    radius = Z.imag / np.abs(dZ) if track_radius else None
    return side, excluded, radius


def _blocks(cfg: McConfig):
    full, rest = divmod(cfg.n_samples, cfg.block_size)
    sizes = [cfg.block_size] * full + ([rest] if rest else [])
    return list(enumerate(sizes))


def _run(points, cfg: McConfig, track_radius=False):
    pts = tuple(as_points(points))
    jobs = _blocks(cfg)
    workers = cfg.workers or 1
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(workers) as pool:
            outs = list(pool.map(_run_block, [pts] * len(jobs), [n for _, n in jobs], [cfg] * len(jobs),
                                 [b for b, _ in jobs], [track_radius] * len(jobs)))
    else:
        outs = [_run_block(pts, n, cfg, b, track_radius) for b, n in jobs]
    side = np.concatenate([o[0] for o in outs])
    excl = np.concatenate([o[1] for o in outs])
    radius = np.concatenate([o[2] for o in outs]) if track_radius else None
    return side, excl, radius


def simulate_side(points: Sequence[complex], cfg: McConfig = McConfig()):
    """Per-sample bitmask (bit i set: point i separated) and the exclusion flags."""
    side, excl, _ = _run(points, cfg)
    return side, excl


def estimate_patterns(points: Sequence[complex], cfg: McConfig = McConfig()) -> list[Estimate]:
    """Estimates for all 2^N patterns from one shared set of traces."""
    side, excl = simulate_side(points, cfg)
    n = len(side)
    counts = np.bincount(side[~excl], minlength=1 << len(points))
    return [Estimate.bernoulli(int(c), n, cfg.seed, int(excl.sum())) for c in counts]


def estimate_pattern(points: Sequence[complex], pattern: WindingPattern, cfg: McConfig = McConfig()) -> Estimate:
    if pattern.n_points != len(points):
        raise ValueError("pattern size does not match the number of points")
    return estimate_patterns(points, cfg)[pattern.separated]


def estimate_near_passage(z: complex, eps_list: Sequence[float], cfg: McConfig = McConfig()) -> list[Estimate]:
    """Frequency with which the trace comes within eps of z, for each eps.

    Closeness is measured by Im Z / |g'(z)| at the end of the evolution, the
    conformal-radius proxy for the distance from z to the trace (they agree
    up to a factor between 1/4 and 4 by Koebe's theorem). Only the overall
    constant of the near-passage probability depends on this choice.
    """
    z = check_point(z)
    eps = [float(e) for e in eps_list]
    if not eps or min(eps) <= 0:
        raise ValueError("eps values must be positive")
    if max(eps) >= z.imag:
        raise ValueError("eps must be smaller than Im z")
    if not cfg.adaptive and math.sqrt(cfg.kappa * cfg.dt) > min(eps) / 4:
        raise ResolutionError("fixed dt too coarse for the smallest eps")
    _, excl, radius = _run([z], cfg, track_radius=True)
    r = radius[:, 0]
    n = len(r)
    return [Estimate.bernoulli(int(np.sum((r < e) & ~excl)), n, cfg.seed, int(excl.sum())) for e in eps]


def default_workers() -> int:
    env = os.environ.get("WINDING_THREADS")
    if env:
        return max(1, int(env))
    return 1


def with_workers(cfg: McConfig, workers: int | None) -> McConfig:
    return replace(cfg, workers=workers or default_workers())
