"""Exact occupancy probabilities and their enumeration oracles.

The probability a_w that some root path of the labeled M-ary tree carries
the label word w obeys a closed recursion over prefixes,

    a_{l,w} = 1 - (1 - p_l * a_w)^M,    a_empty = 1,

which this module evaluates directly (``a_probability``), sums over whole
levels (``expected_zn``), and specializes to the uniform case
(``pi_sequence``, ``gamma_fixed_point``). ``brute_force_a`` and
``enumerate_z_distribution`` recompute the same quantities by exhausting
every labeling of the truncated tree; they exist so the recursions are
tested against something that cannot share their bugs.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import BudgetError
from .stochastic import ProbVector
from .symbolic import LabelWord, PathWord, kappa

__all__ = [
    "PiSequence",
    "a_probability",
    "brute_force_a",
    "pi_sequence",
    "gamma_fixed_point",
    "expected_zn",
    "multinomial_bound",
    "enumerate_z_distribution",
]

_ENUM_CAP = 1 << 24  # labelings a brute-force enumeration may visit
_WORD_CAP = 1 << 20  # words a full-level sum may hold
_COMPOSITION_CAP = 500_000
_MASK_BITS = 63  # word bitmasks live in one int64
_CHUNK = 1 << 18


def _as_labels(w, N: int) -> tuple[int, ...]:
    if isinstance(w, LabelWord):
        if w.N != N:
            raise ValueError(f"word alphabet {w.N} does not match the {N}-entry p")
        return w.symbols
    symbols = tuple(int(s) for s in w)
    for s in symbols:
        if not 1 <= s <= N:
            raise ValueError(f"label {s} outside 1..{N}")
    return symbols


def a_probability(w, p: ProbVector, M: int) -> float:
    """Occupancy probability of the label word ``w`` under i.i.d. labels.

    Evaluates the recursion suffix-to-prefix: starting from a = 1 for the
    empty suffix, each step applies a = 1 - (1 - p_l a)^M in the stable form
    -expm1(M * log1p(-p_l a)).
    """
    symbols = _as_labels(w, p.N)
    if not symbols:
        raise ValueError("word must be nonempty")
    if M < 2:
        raise ValueError(f"arity must be at least 2, got {M}")
    a = 1.0
    for l in reversed(symbols):
        a = -math.expm1(M * math.log1p(-p.values[l - 1] * a))
    return a


def _prefix_edge_indices(M: int, depth: int) -> np.ndarray:
    """kappa indices of every prefix of every depth-``depth`` path, (M^depth, depth)."""
    rows = []
    for path in itertools.product(range(1, M + 1), repeat=depth):
        rows.append([kappa(PathWord(path[: j + 1], M)) for j in range(depth)])
    return np.asarray(rows, dtype=np.int64)


def _edge_count(M: int, depth: int) -> int:
    return (M ** (depth + 1) - M) // (M - 1)


def _exact_probs(p: ProbVector) -> list[Fraction] | None:
    """Small-denominator rationals reproducing p bit-for-bit, else None."""
    out = []
    for x in p.values:
        q = Fraction(x).limit_denominator(1000)
        if float(q) != x:
            return None
        out.append(q)
    if sum(out) != 1:
        return None
    return out


def _digit_count_groups(
    M: int, depth: int, N: int, keep, reduce_row=None
) -> dict[tuple, int]:
    """Group the kept labelings of the depth-``depth`` tree by digit counts.

    Enumerates all N^E labelings (E edges) in chunks; ``keep`` maps the
    (chunk, E) digit matrix to a boolean keep-mask, and ``reduce_row``, when
    given, maps it to an extra integer per row that becomes part of the
    group key. Returns {(extra?, c_0..c_{N-1}): multiplicity}.
    """
    E = _edge_count(M, depth)
    # log-space guard: N**E itself is unrepresentable for deep trees
    if E * math.log2(N) > math.log2(_ENUM_CAP):
        raise BudgetError(f"N^{E} labelings exceed the enumeration budget")
    total = N**E
    powers = N ** np.arange(E, dtype=np.int64)
    groups: dict[tuple, int] = {}
    for start in range(0, total, _CHUNK):
        vals = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        digits = ((vals[:, None] // powers) % N).astype(np.int8)
        mask = keep(digits)
        if not mask.any():
            continue
        kept = digits[mask]
        counts = np.stack([(kept == i).sum(axis=1) for i in range(N)], axis=1)
        if reduce_row is None:
            keyed = counts
        else:
            extra = reduce_row(kept)
            keyed = np.concatenate([extra[:, None], counts], axis=1)
        uniq, mult = np.unique(keyed, axis=0, return_counts=True)
        for row, m_ in zip(uniq.tolist(), mult.tolist()):
            key = tuple(int(v) for v in row)
            groups[key] = groups.get(key, 0) + m_
    return groups


def brute_force_a(w, p: ProbVector, M: int):
    """Enumeration oracle for ``a_probability``.

    Sums the probability weight of every labeling of the depth-|w| tree in
    which some root path carries ``w``, grouping labelings by digit counts
    so each weight is formed once. When the entries of p round-trip through
    small rationals the result is an exact Fraction; otherwise a float.
    """
    symbols = _as_labels(w, p.N)
    if not symbols:
        raise ValueError("word must be nonempty")
    if M < 2:
        raise ValueError(f"arity must be at least 2, got {M}")
    depth = len(symbols)
    N = p.N
    # budget check must precede the M^depth prefix table
    if _edge_count(M, depth) * math.log2(N) > math.log2(_ENUM_CAP):
        raise BudgetError("word too deep for the enumeration budget")
    prefix = _prefix_edge_indices(M, depth)
    target = np.asarray(symbols, dtype=np.int8) - 1

    def keep(digits: np.ndarray) -> np.ndarray:
        return (digits[:, prefix] == target).all(axis=2).any(axis=1)

    groups = _digit_count_groups(M, depth, N, keep)
    rational = _exact_probs(p)
    if rational is not None:
        acc = Fraction(0)
        for counts, mult in groups.items():
            weight = Fraction(1)
            for q, c in zip(rational, counts):
                weight *= q**c
            acc += mult * weight
        return acc
    return math.fsum(
        mult * math.prod(x**c for x, c in zip(p.values, counts))
        for counts, mult in groups.items()
    )


@dataclass(frozen=True)
class PiSequence:
    """Uniform-label occupancy probabilities pi_0..pi_n.

    pi_n is a_w for any length-n word under uniform p; the recursion is
    pi_n = 1 - (1 - pi_{n-1}/N)^M from pi_0 = 1. Values are monotone
    non-increasing; mathematically they stay positive but can underflow to
    0.0 in float once M < N drives them below the denormal range.
    """

    N: int
    M: int
    values: tuple[float, ...]

    def __post_init__(self) -> None:
        if self.N < 2 or self.M < 2:
            raise ValueError("N and M must both be at least 2")
        if not self.values or self.values[0] != 1.0:
            raise ValueError("sequence must start at pi_0 = 1")
        for a, b in zip(self.values, self.values[1:]):
            if b > a + 1e-12 or not 0.0 <= b <= 1.0:
                raise ValueError("pi values must be non-increasing within [0,1]")

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, n: int) -> float:
        return self.values[n]


def pi_sequence(N: int, M: int, n_max: int) -> PiSequence:
    """pi_0..pi_{n_max} for uniform labels over N symbols on the M-ary tree."""
    if N < 2 or M < 2:
        raise ValueError("N and M must both be at least 2")
    if n_max < 0:
        raise ValueError(f"n_max must be nonnegative, got {n_max}")
    values = [1.0]
    x = 1.0
    for _ in range(n_max):
        x = -math.expm1(M * math.log1p(-x / N))
        values.append(x)
    return PiSequence(N, M, tuple(values))


def gamma_fixed_point(N: int, M: int) -> float:
    """Attracting fixed point of x = 1 - (1 - x/N)^M on (0,1] when M > N.

    For M <= N the recursion drives pi_n to 0 and 0.0 is returned. Otherwise
    the nonzero root is bracketed and bisected to a residual below 1e-12.
    """
    if N < 2 or M < 2:
        raise ValueError("N and M must both be at least 2")
    if M <= N:
        return 0.0

    def f(x: float) -> float:
        return -math.expm1(M * math.log1p(-x / N)) - x

    lo = 0.5
    halvings = 0
    while f(lo) <= 0.0:
        lo /= 2
        halvings += 1
        if halvings > 200:
            raise RuntimeError("failed to bracket the nonzero fixed point")
    hi = 1.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if f(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    x = 0.5 * (lo + hi)
    residual = abs(f(x))
    if residual >= 1e-12:
        raise RuntimeError(f"fixed-point residual {residual} not below 1e-12")
    return x


def expected_zn(p: ProbVector, M: int, n: int) -> float:
    """Exact E[Z_n]: the sum of a_probability over all N^n label words.

    Computed by evolving the full vector of a-values one prefix letter at a
    time, so the cost is the output size N^n, not N^n recursion calls.
    """
    if M < 2:
        raise ValueError(f"arity must be at least 2, got {M}")
    if n < 0:
        raise ValueError(f"level must be nonnegative, got {n}")
    N = p.N
    if N**n > _WORD_CAP:
        raise BudgetError(f"N^n = {N**n} words exceed the level-sum budget")
    if n == 0:
        return 1.0
    parr = p.as_array()
    values = np.ones(1, dtype=np.float64)
    for _ in range(n):
        values = -np.expm1(M * np.log1p(-np.outer(parr, values).reshape(-1)))
    return math.fsum(values.tolist())


def _compositions(n: int, parts: int):
    if parts == 1:
        yield (n,)
        return
    for k in range(n + 1):
        for rest in _compositions(n - k, parts - 1):
            yield (k,) + rest


def multinomial_bound(p: ProbVector, M: int, n: int, *, log: bool = False) -> float:
    """Digit-frequency upper bound on E[Z_n].

    Words sharing digit counts (k_1..k_N) share their occupancy probability,
    and each probability is at most min(1, M^n prod p_i^{k_i}); the bound is
    the count-weighted sum over compositions of n. Terms are accumulated in
    log domain (log-gamma coefficients, log-sum-exp); ``log=True`` returns
    the natural log, which is the usable form once the value overflows
    float range.
    """
    if M < 2:
        raise ValueError(f"arity must be at least 2, got {M}")
    if n < 0:
        raise ValueError(f"level must be nonnegative, got {n}")
    N = p.N
    n_comp = math.comb(n + N - 1, N - 1)
    if n_comp > _COMPOSITION_CAP:
        raise BudgetError(f"{n_comp} compositions exceed the bound-sum budget")
    if n == 0:
        return 0.0 if log else 1.0
    log_p = [math.log(x) for x in p.values]
    cap_base = n * math.log(M)
    lg_n = math.lgamma(n + 1)
    terms = np.empty(n_comp, dtype=np.float64)
    for idx, ks in enumerate(_compositions(n, N)):
        log_coeff = lg_n - math.fsum(math.lgamma(k + 1) for k in ks)
        log_prob = cap_base + math.fsum(k * lp for k, lp in zip(ks, log_p))
        terms[idx] = log_coeff + min(0.0, log_prob)
    peak = float(terms.max())
    log_total = peak + math.log(float(np.exp(terms - peak).sum()))
    if log:
        return log_total
    if log_total > 700.0:
        raise OverflowError("bound exceeds float range; call with log=True")
    return math.exp(log_total)


def enumerate_z_distribution(
    p_exact: Sequence[Fraction], M: int, depth: int
) -> list[dict[int, Fraction]]:
    """Exact law of the occupancy count Z_k for every level k = 0..depth.

    Exhausts all labelings of the depth-k tree for each level, encoding each
    labeling's occupied word set as a bitmask and weighting by exact
    rational probabilities (entries of ``p_exact`` must sum to 1 exactly).
    Budgets bind fast: N^depth <= 63 for the bitmask and N^E <= 2^24
    labelings at the deepest level.
    """
    probs = [Fraction(q) for q in p_exact]
    N = len(probs)
    if N < 2:
        raise ValueError("need at least 2 label probabilities")
    if any(not 0 < q < 1 for q in probs):
        raise ValueError("exact probabilities must lie strictly inside (0,1)")
    if sum(probs) != 1:
        raise ValueError("exact probabilities must sum to 1 exactly")
    if M < 2:
        raise ValueError(f"arity must be at least 2, got {M}")
    if depth < 0:
        raise ValueError(f"depth must be nonnegative, got {depth}")
    if N**depth > _MASK_BITS:
        raise BudgetError(f"N^depth = {N**depth} words do not fit a 63-bit mask")
    if _edge_count(M, depth) * math.log2(N) > math.log2(_ENUM_CAP):
        raise BudgetError("deepest level exceeds the enumeration budget")

    result: list[dict[int, Fraction]] = [{1: Fraction(1)}]
    for level in range(1, depth + 1):
        E = _edge_count(M, level)
        prefix = _prefix_edge_indices(M, level)
        code_pow = N ** np.arange(level, dtype=np.int64)

        def z_of(digits: np.ndarray) -> np.ndarray:
            codes = (digits[:, prefix].astype(np.int64) * code_pow).sum(axis=2)
            masks = np.bitwise_or.reduce(
                np.left_shift(np.int64(1), codes), axis=1
            ).astype(np.uint64)
            return np.bitwise_count(masks).astype(np.int64)

        groups = _digit_count_groups(
            M, level, N, keep=lambda d: np.ones(d.shape[0], dtype=bool), reduce_row=z_of
        )
        dist: dict[int, Fraction] = {}
        for (z, *counts), mult in groups.items():
            weight = Fraction(1)
            for q, c in zip(probs, counts):
                weight *= q**c
            dist[z] = dist.get(z, Fraction(0)) + mult * weight
        result.append(dist)
    return result
