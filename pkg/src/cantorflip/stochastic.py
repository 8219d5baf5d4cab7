"""Branching occupancy simulation over labeled M-ary trees.

Every edge of the full M-ary tree carries a label in {1..N}; a root path of
depth n therefore carries a label word in {1..N}^n. The occupancy map of a
level records, for each label word, how many of the M^n root paths carry it;
``z_n`` counts the distinct occupied words and ``measure`` normalizes the
counts into a probability measure on words (equivalently, on the basic
intervals of an interval system with N maps).

With labels drawn i.i.d. from a probability vector p, the M*c children of
the c paths sharing a word w split among the N one-letter extensions as a
single multinomial(M*c, p) draw, independently across words. ``evolve``
advances whole levels this way; it has exactly the per-edge i.i.d. label
distribution while keeping the state linear in the number of distinct words
rather than in the number of paths.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import BudgetError
from .ifs import IfsSpec, interval
from .symbolic import EdgeIndex, LabelWord, child_indices

__all__ = [
    "ProbVector",
    "LabelSource",
    "OccupancyMap",
    "RandomMeasure",
    "TrialStats",
    "evolve",
    "z_n",
    "measure",
    "run_trials",
    "z_distribution",
    "estimate_dim",
    "energy_estimate",
    "occupancy_from_source",
]

_DENSE_STATE_CAP = 1 << 24  # dense level arrays: at most 2^24 words
_WORK_CAP = 1 << 34  # trials * N^depth
_EXPLICIT_CAP = 1 << 16  # per-path walk budget (M^depth)
_COUNT_CAP = 1 << 63  # path counts are int64


@dataclass(frozen=True)
class ProbVector:
    """Probability vector p = (p_1..p_N) with open-interval entries.

    Each entry must lie strictly inside (0,1) and the entries must sum to 1
    within 1e-12.
    """

    values: tuple[float, ...]

    def __post_init__(self) -> None:
        values = tuple(float(x) for x in self.values)
        object.__setattr__(self, "values", values)
        if len(values) < 2:
            raise ValueError("a probability vector needs at least 2 entries")
        for x in values:
            if not 0.0 < x < 1.0:
                raise ValueError(f"probability {x} outside the open interval (0,1)")
        total = math.fsum(values)
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"probabilities sum to {total!r}, not 1 within 1e-12")

    @property
    def N(self) -> int:
        return len(self.values)

    @classmethod
    def uniform(cls, N: int) -> "ProbVector":
        return cls((1.0 / N,) * N)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=np.float64)


@dataclass(frozen=True)
class LabelSource:
    """Assignment of a label in {1..N} to every edge index.

    Two kinds:

    * ``random(seed, p)``: i.i.d. draws from p, one independent stream per
      edge index (derived from ``(seed, index)``), so labels are
      reproducible and independent of query order.
    * ``periodic(m, offset)``: binary sources over symbols {1, 2} that mark
      symbol 2 exactly at edge indices congruent to ``offset`` mod m and
      symbol 1 elsewhere. The default offset m-1 marks every m-th edge in
      breadth-first order, counting from the first edge as number one.
    """

    kind: str
    p: ProbVector | None = None
    seed: int | None = None
    m: int | None = None
    offset: int | None = None

    def __post_init__(self) -> None:
        if self.kind == "random":
            if self.p is None or self.seed is None:
                raise ValueError("random label source needs a seed and a ProbVector")
            if self.seed < 0:
                raise ValueError(f"seed must be nonnegative, got {self.seed}")
        elif self.kind == "periodic":
            if self.m is None or self.m < 2:
                raise ValueError(f"period must be at least 2, got {self.m}")
            offset = self.m - 1 if self.offset is None else self.offset
            if not 0 <= offset < self.m:
                raise ValueError(f"offset {offset} outside 0..{self.m - 1}")
            object.__setattr__(self, "offset", offset)
        else:
            raise ValueError(f"unknown label source kind {self.kind!r}")

    @classmethod
    def random(cls, seed: int, p: ProbVector) -> "LabelSource":
        return cls("random", p=p, seed=seed)

    @classmethod
    def periodic(cls, m: int, offset: int | None = None) -> "LabelSource":
        return cls("periodic", m=m, offset=offset)

    @property
    def N(self) -> int:
        return self.p.N if self.kind == "random" else 2

    def label(self, k: EdgeIndex) -> int:
        if k < 0:
            raise ValueError(f"edge index must be nonnegative, got {k}")
        if self.kind == "periodic":
            return 2 if k % self.m == self.offset else 1
        rng = np.random.Generator(
            np.random.PCG64(np.random.SeedSequence(entropy=self.seed, spawn_key=(int(k),)))
        )
        u = rng.random()
        acc = 0.0
        for i, x in enumerate(self.p.values, start=1):
            acc += x
            if u < acc:
                return i
        return self.p.N


@dataclass(frozen=True)
class OccupancyMap:
    """Level-n occupancy: label word -> number of paths carrying it.

    Counts are positive and sum to M^level exactly; the number of entries is
    the occupancy count Z_n.
    """

    level: int
    M: int
    entries: dict[tuple[int, ...], int]

    def __post_init__(self) -> None:
        if self.level < 0:
            raise ValueError(f"level must be nonnegative, got {self.level}")
        if self.M < 2:
            raise ValueError(f"arity must be at least 2, got {self.M}")
        total = 0
        for word, count in self.entries.items():
            if len(word) != self.level:
                raise ValueError(f"word {word} has length {len(word)}, not {self.level}")
            if count <= 0:
                raise ValueError(f"count for {word} must be positive, got {count}")
            total += count
        if total != self.M**self.level:
            raise ValueError(
                f"counts sum to {total}, expected M^level = {self.M**self.level}"
            )

    @classmethod
    def root(cls, M: int) -> "OccupancyMap":
        return cls(0, M, {(): 1})


@dataclass(frozen=True)
class RandomMeasure:
    """Normalized occupancy: word -> exact rational weight count / M^level."""

    level: int
    weights: dict[tuple[int, ...], Fraction]

    def __post_init__(self) -> None:
        if sum(self.weights.values(), Fraction(0)) != 1:
            raise ValueError("measure weights must sum to 1 exactly")


def _as_generator(rng: np.random.Generator | int | None) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    if isinstance(rng, (int, np.integer)):
        return np.random.default_rng(int(rng))
    raise ValueError("rng must be a numpy Generator or an integer seed")


def _tail_probs(p: np.ndarray) -> np.ndarray:
    # suffix sums p_l + ... + p_N, computed right to left for stability
    return np.cumsum(p[::-1])[::-1]


def _multinomial_split(rng: np.random.Generator, n: np.ndarray, p: np.ndarray) -> np.ndarray:
    """Exact multinomial(n_i, p) draw for every entry of ``n``.

    Sequential conditional binomials: column l is Binomial(remaining, p_l /
    tail_l) and the last column takes what is left, so mass is conserved
    exactly. The generator's binomial sampler is exact (inversion for small
    mean, transformed rejection above), so no normal approximation enters at
    any count size.
    """
    n = np.asarray(n, dtype=np.int64)
    N = p.shape[0]
    tails = _tail_probs(p)
    out = np.empty((n.shape[0], N), dtype=np.int64)
    rem = n.copy()
    for l in range(N - 1):
        ratio = min(1.0, p[l] / tails[l])
        draw = rng.binomial(rem, ratio)
        out[:, l] = draw
        rem -= draw
    out[:, N - 1] = rem
    return out


def evolve(
    occ: OccupancyMap,
    p: ProbVector,
    M: int | None = None,
    rng: np.random.Generator | int | None = None,
) -> OccupancyMap:
    """Advance an occupancy map one level under i.i.d. labels from ``p``.

    For each entry (w, c) the M*c child paths split among the N one-letter
    extensions of w by one multinomial(M*c, p) draw; the output drops zero
    counts. Raises OverflowError once M^(level+1) no longer fits the 64-bit
    path counters.
    """
    if M is None:
        M = occ.M
    elif M != occ.M:
        raise ValueError(f"arity {M} does not match the map's {occ.M}")
    if occ.M ** (occ.level + 1) >= _COUNT_CAP:
        raise OverflowError(
            "path counts overflow 64-bit at the next level; "
            "lower the depth or switch to trial sampling"
        )
    gen = _as_generator(rng)
    words = list(occ.entries.keys())
    counts = np.fromiter((occ.entries[w] for w in words), dtype=np.int64, count=len(words))
    splits = _multinomial_split(gen, M * counts, p.as_array())
    entries: dict[tuple[int, ...], int] = {}
    for i, w in enumerate(words):
        for l in range(p.N):
            c = int(splits[i, l])
            if c > 0:
                entries[w + (l + 1,)] = c
    return OccupancyMap(occ.level + 1, occ.M, entries)


def z_n(occ: OccupancyMap) -> int:
    """Number of distinct occupied label words at the map's level."""
    return len(occ.entries)


def measure(occ: OccupancyMap) -> RandomMeasure:
    """Normalize an occupancy map to exact rational weights count / M^level."""
    denominator = occ.M**occ.level
    weights = {w: Fraction(c, denominator) for w, c in occ.entries.items()}
    return RandomMeasure(occ.level, weights)


def occupancy_from_source(source: LabelSource, M: int, depth: int) -> list[OccupancyMap]:
    """Occupancy maps for levels 0..depth by walking every path explicitly.

    Labels each edge through ``source.label``; exponential in the depth
    (M^depth paths), so it is a cross-check for the aggregated evolution and
    for deterministic word sets, not a production path.
    """
    if depth < 0:
        raise ValueError(f"depth must be nonnegative, got {depth}")
    if M**depth > _EXPLICIT_CAP:
        raise BudgetError(f"M^depth = {M**depth} exceeds the per-path walk budget")
    maps = [OccupancyMap.root(M)]
    frontier: list[tuple[tuple[int, ...], EdgeIndex | None]] = [((), None)]
    for level in range(1, depth + 1):
        nxt: list[tuple[tuple[int, ...], EdgeIndex]] = []
        counts: dict[tuple[int, ...], int] = {}
        for word, k in frontier:
            edges = range(M) if k is None else child_indices(k, M)
            for k2 in edges:
                w2 = word + (source.label(k2),)
                nxt.append((w2, k2))
                counts[w2] = counts.get(w2, 0) + 1
        maps.append(OccupancyMap(level, M, counts))
        frontier = nxt
    return maps


@dataclass(frozen=True)
class TrialStats:
    """Per-level occupancy statistics over independent trials.

    ``z_mean``/``z_var`` are the sample mean and variance (ddof=1, zero for a
    single trial), ``z_min``/``z_max`` the per-level extremes, and ``z_union``
    the pooled occupancy: how many words were occupied in at least one trial.
    All are indexed by level 0..depth and were reduced with commutative,
    exact integer accumulators, so they are independent of trial order.
    """

    depth: int
    trials: int
    master_seed: int
    z_mean: tuple[float, ...]
    z_var: tuple[float, ...]
    z_min: tuple[int, ...]
    z_max: tuple[int, ...]
    z_union: tuple[int, ...]


def _trial_rng(master_seed: int, t: int) -> np.random.Generator:
    # counter-style stream derivation: one child stream per (master_seed, t)
    return np.random.Generator(
        np.random.PCG64(np.random.SeedSequence(entropy=master_seed, spawn_key=(t,)))
    )


def _trial_z(
    rng: np.random.Generator,
    parr: np.ndarray,
    M: int,
    depth: int,
    union: list[np.ndarray] | None,
) -> list[int]:
    N = parr.shape[0]
    state = np.ones(1, dtype=np.int64)
    zs = [1]
    for k in range(depth):
        occupied = np.nonzero(state)[0]
        child = np.zeros(state.size * N, dtype=np.int64)
        splits = _multinomial_split(rng, M * state[occupied], parr)
        child.reshape(state.size, N)[occupied, :] = splits
        state = child
        zs.append(int(np.count_nonzero(state)))
        if union is not None:
            union[k] |= state > 0
    return zs


def _check_budgets(N: int, M: int, depth: int, trials: int) -> None:
    if depth < 1:
        raise ValueError(f"depth must be at least 1, got {depth}")
    if trials < 1:
        raise ValueError(f"trials must be at least 1, got {trials}")
    if M**depth >= _COUNT_CAP:
        raise BudgetError(f"M^depth = {M**depth} overflows 64-bit path counts")
    if N**depth > _DENSE_STATE_CAP:
        raise BudgetError(f"N^depth = {N**depth} exceeds the dense state budget")
    if trials * N**depth > _WORK_CAP:
        raise BudgetError(f"trials * N^depth = {trials * N**depth} exceeds the work budget")


def run_trials(
    spec: IfsSpec,
    p: ProbVector,
    M: int,
    depth: int,
    trials: int,
    master_seed: int,
    *,
    threads: int = 1,
) -> TrialStats:
    """Simulate ``trials`` independent labelings and aggregate Z statistics.

    Trial t draws from Generator(PCG64(SeedSequence(master_seed,
    spawn_key=(t,)))), a documented counter-style derivation: trials are
    independent streams, results do not depend on execution order, and a
    parallel run reproduces a serial one bit for bit. The interval geometry
    of ``spec`` does not enter the counts; it is accepted to pin N and to
    keep one config object per experiment.
    """
    N = p.N
    if spec.N != N:
        raise ValueError(f"spec has N={spec.N} but p has {N} entries")
    if M < 2:
        raise ValueError(f"arity must be at least 2, got {M}")
    if master_seed < 0:
        raise ValueError(f"master seed must be nonnegative, got {master_seed}")
    if threads < 1:
        raise ValueError(f"threads must be at least 1, got {threads}")
    _check_budgets(N, M, depth, trials)

    def run_chunk(t0: int, t1: int):
        sums = [0] * (depth + 1)
        sums2 = [0] * (depth + 1)
        mins = [None] * (depth + 1)
        maxs = [None] * (depth + 1)
        union = [np.zeros(N ** (k + 1), dtype=bool) for k in range(depth)]
        for t in range(t0, t1):
            zs = _trial_z(_trial_rng(master_seed, t), p.as_array(), M, depth, union)
            for k, z in enumerate(zs):
                sums[k] += z
                sums2[k] += z * z
                if mins[k] is None or z < mins[k]:
                    mins[k] = z
                if maxs[k] is None or z > maxs[k]:
                    maxs[k] = z
        return sums, sums2, mins, maxs, union

    if threads == 1:
        parts = [run_chunk(0, trials)]
    else:
        bounds_ = [trials * i // threads for i in range(threads + 1)]
        spans = [(a, b) for a, b in zip(bounds_, bounds_[1:]) if b > a]
        with ThreadPoolExecutor(max_workers=len(spans)) as pool:
            parts = list(pool.map(lambda ab: run_chunk(*ab), spans))

    sums = [0] * (depth + 1)
    sums2 = [0] * (depth + 1)
    mins = [None] * (depth + 1)
    maxs = [None] * (depth + 1)
    union = [np.zeros(N ** (k + 1), dtype=bool) for k in range(depth)]
    for s, s2, mn, mx, un in parts:
        for k in range(depth + 1):
            sums[k] += s[k]
            sums2[k] += s2[k]
            mins[k] = mn[k] if mins[k] is None else min(mins[k], mn[k])
            maxs[k] = mx[k] if maxs[k] is None else max(maxs[k], mx[k])
        for k in range(depth):
            union[k] |= un[k]

    T = trials
    z_mean = tuple(s / T for s in sums)
    if T > 1:
        z_var = tuple((T * s2 - s * s) / (T * (T - 1)) for s, s2 in zip(sums, sums2))
    else:
        z_var = (0.0,) * (depth + 1)
    z_union = (1,) + tuple(int(np.count_nonzero(u)) for u in union)
    return TrialStats(
        depth=depth,
        trials=trials,
        master_seed=master_seed,
        z_mean=z_mean,
        z_var=z_var,
        z_min=tuple(mins),
        z_max=tuple(maxs),
        z_union=z_union,
    )


def z_distribution(
    p: ProbVector, M: int, depth: int, trials: int, master_seed: int
) -> list[dict[int, int]]:
    """Empirical distribution of the occupancy count at each level 0..depth.

    Returns one ``{z: number of trials}`` histogram per level. All trials
    advance together through one deterministic stream seeded by
    ``master_seed``: every occupied word of every trial splits in one batched
    draw. The per-trial law is identical to ``run_trials``; only the stream
    layout differs.
    """
    N = p.N
    if M < 2:
        raise ValueError(f"arity must be at least 2, got {M}")
    _check_budgets(N, M, depth, trials)
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy=master_seed)))
    parr = p.as_array()
    state = np.ones((trials, 1), dtype=np.int64)
    hists: list[dict[int, int]] = [{1: trials}]
    for _ in range(depth):
        T, S = state.shape
        flat = state.reshape(-1)
        occupied = np.nonzero(flat)[0]
        child = np.zeros((T * S, N), dtype=np.int64)
        child[occupied, :] = _multinomial_split(rng, M * flat[occupied], parr)
        state = child.reshape(T, S * N)
        zs = np.count_nonzero(state, axis=1)
        values, counts = np.unique(zs, return_counts=True)
        hists.append({int(z): int(c) for z, c in zip(values, counts)})
    return hists


def estimate_dim(z_series: Sequence[float], r: float, window: tuple[int, int]) -> float:
    """Box-count style slope: least squares of ln Z_n on n, over -ln r.

    ``window`` is an inclusive (lo, hi) level range into ``z_series`` (indexed
    by level) and needs at least two points with strictly positive Z.
    """
    if not 0 < r < 1:
        raise ValueError(f"ratio must be inside (0,1), got {r}")
    lo, hi = window
    if lo < 0 or hi >= len(z_series) or hi - lo < 1:
        raise ValueError(f"window {window} is degenerate for a series of length {len(z_series)}")
    levels = np.arange(lo, hi + 1, dtype=np.float64)
    values = np.asarray([z_series[n] for n in range(lo, hi + 1)], dtype=np.float64)
    if np.any(values < 1):
        raise ValueError("occupancy values inside the window must be at least 1")
    slope = np.polyfit(levels, np.log(values), 1)[0]
    return float(slope / -math.log(r))


def energy_estimate(occ: OccupancyMap, spec: IfsSpec, t: float) -> float:
    """Discrete t-energy of the normalized occupancy at its level.

    Sum over ordered pairs of distinct occupied words of
    weight(w) * weight(w') * |mid(I_w) - mid(I_w')|^(-t), where I_w is the
    basic interval of w under ``spec``. This truncates the pair interaction
    at the level's scale r^n (the diagonal is excluded entirely), so it is a
    finite, diagnostic-only reading of the energy, not a convergent value.
    """
    if t <= 0:
        raise ValueError(f"energy exponent must be positive, got {t}")
    words = sorted(occ.entries.keys())
    if len(words) < 2:
        return 0.0
    denominator = float(occ.M**occ.level)
    weights = np.asarray([occ.entries[w] / denominator for w in words])
    mids = np.asarray([interval(spec, w).midpoint for w in words])
    total = 0.0
    block = 512
    for i0 in range(0, len(words), block):
        i1 = min(i0 + block, len(words))
        diff = np.abs(mids[i0:i1, None] - mids[None, :])
        rows = np.arange(i0, i1)
        diff[rows - i0, rows] = np.inf  # excludes the diagonal: inf^-t = 0
        contrib = (weights[i0:i1, None] * weights[None, :]) * diff**-t
        total += float(contrib.sum())
    return total
