"""Deterministic labelings that mark every m-th edge of the binary tree.

Edges are marked in breadth-first index order (symbol 1 at indices
congruent to the offset mod m, symbol 0 elsewhere; this module writes words
over {0,1} and maps to the library's {1,2} alphabet only at the boundary).
The level-n word sets grow like rho_L^n where L is determined by the block
2^(L+1)-1 <= m <= 2^(L+2)-2 and rho_L is the positive root of
x^(L+1) = x^L + 1, which makes the limit set's dimension
log rho_L / log(1/r). Three independent generators produce the word sets:
the tree labeling itself, walks on the mod-m digraph, and the subshift
forbidding 1 0^k 1 for k < L; their agreement is the module's main
correctness check.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass

from .errors import BudgetError

__all__ = [
    "DeterministicSpec",
    "ModGraph",
    "GrowthEstimate",
    "level_of",
    "rho",
    "dim_Fm",
    "mod_graph",
    "tree_words",
    "graph_words",
    "sft_words",
    "sft_count",
    "growth_rate",
    "to_label_symbols",
    "from_label_symbols",
    "dimension_rows",
    "dump_words",
]

Word01 = tuple[int, ...]

_STATE_CAP = 1 << 22  # aggregated frontier entries (words x residues/vertices)
_WORDS_CAP = 1 << 20  # words an enumeration may return


def level_of(m: int) -> int:
    """Block level L with 2^(L+1) - 1 <= m <= 2^(L+2) - 2.

    Defined for m >= 3; m = 2 marks every other edge and reproduces the full
    construction, so it has no block level.
    """
    if m < 3:
        raise ValueError(f"no block level for m = {m}; defined for m >= 3")
    return (m + 1).bit_length() - 2


@dataclass(frozen=True)
class DeterministicSpec:
    """Period m and marking offset (default m-1: indices m-1, 2m-1, ... are marked)."""

    m: int
    offset: int | None = None

    def __post_init__(self) -> None:
        if self.m < 2:
            raise ValueError(f"period must be at least 2, got {self.m}")
        offset = self.m - 1 if self.offset is None else self.offset
        if not 0 <= offset < self.m:
            raise ValueError(f"offset {offset} outside 0..{self.m - 1}")
        object.__setattr__(self, "offset", offset)

    @property
    def L(self) -> int | None:
        return level_of(self.m) if self.m >= 3 else None


def rho(L: int) -> float:
    """Positive root of x^(L+1) = x^L + 1, bisected on (1,2) to residual < 1e-13."""
    if L < 1:
        raise ValueError(f"L must be at least 1, got {L}")
    lo, hi = 1.0, 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid ** (L + 1) - mid**L - 1.0 < 0.0:
            lo = mid
        else:
            hi = mid
    x = 0.5 * (lo + hi)
    residual = abs(x ** (L + 1) - x**L - 1.0)
    if residual >= 1e-13:
        raise RuntimeError(f"root residual {residual} not below 1e-13")
    return x


def dim_Fm(m: int, r: float) -> float:
    """log rho_L(m) / log(1/r); for m = 2 the full construction's log 2 / log(1/r)."""
    if m < 2:
        raise ValueError(f"period must be at least 2, got {m}")
    if not 0.0 < r <= 0.5:
        raise ValueError(f"ratio {r} outside (0, 1/2]")
    top = math.log(2.0) if m == 2 else math.log(rho(level_of(m)))
    return top / math.log(1.0 / r)


@dataclass(frozen=True)
class ModGraph:
    """Digraph on residues 0..m-1 with j -> (2j+1) mod m and (2j+2) mod m.

    The two targets can coincide (a double edge); m-1 always carries a
    self-loop plus an edge to 0.
    """

    m: int
    edges: tuple[tuple[int, int], ...]

    def successors(self, j: int) -> tuple[int, int]:
        return self.edges[j]


def mod_graph(m: int) -> ModGraph:
    if m < 3:
        raise ValueError(f"graph defined for m >= 3, got {m}")
    return ModGraph(m, tuple(((2 * j + 1) % m, (2 * j + 2) % m) for j in range(m)))


def tree_words(spec: DeterministicSpec | int, n: int) -> set[Word01]:
    """Distinct level-n label words of the marked binary tree, over {0,1}.

    Aggregates the 2^n paths by (word, edge index mod m): a pseudo-root with
    residue m-1 spawns the real first-level edges at residues 0 and 1, and
    each edge at residue c spawns children at residues 2c+2 and 2c+3 mod m.
    Cost is the word-set size times m rather than 2^n.
    """
    if isinstance(spec, int):
        spec = DeterministicSpec(spec)
    if n < 0:
        raise ValueError(f"level must be nonnegative, got {n}")
    m, offset = spec.m, spec.offset
    state: dict[Word01, frozenset[int]] = {(): frozenset({(m - 1) % m})}
    for _ in range(n):
        grown: dict[Word01, set[int]] = {}
        for word, residues in state.items():
            for c in residues:
                for child in ((2 * c + 2) % m, (2 * c + 3) % m):
                    symbol = 1 if child == offset else 0
                    grown.setdefault(word + (symbol,), set()).add(child)
        if sum(len(s) for s in grown.values()) > _STATE_CAP:
            raise BudgetError("aggregated frontier exceeds the state budget")
        state = {w: frozenset(s) for w, s in grown.items()}
    return set(state.keys())


def graph_words(m: int, n: int) -> set[Word01]:
    """Words emitted by length-n walks on the mod-m digraph from vertices 1 and 2.

    Each visited vertex emits 1 if it is 0 and 0 otherwise. Determinized by
    propagating, per emitted word, the set of vertices a matching walk can
    occupy. Matches tree_words at the default offset.
    """
    if n < 0:
        raise ValueError(f"level must be nonnegative, got {n}")
    graph = mod_graph(m)
    # pseudo-start: vertex 0's successors are exactly the real starts 1 and 2
    state: dict[Word01, frozenset[int]] = {(): frozenset({0})}
    for _ in range(n):
        grown: dict[Word01, set[int]] = {}
        for word, vertices in state.items():
            zeros: set[int] = set()
            ones: set[int] = set()
            for v in vertices:
                for u in graph.successors(v):
                    (ones if u == 0 else zeros).add(u)
            if zeros:
                grown.setdefault(word + (0,), set()).update(zeros)
            if ones:
                grown.setdefault(word + (1,), set()).update(ones)
        if sum(len(s) for s in grown.values()) > _STATE_CAP:
            raise BudgetError("aggregated frontier exceeds the state budget")
        state = {w: frozenset(s) for w, s in grown.items()}
    return set(state.keys())


def sft_count(L: int, n: int) -> int:
    """Number of words sft_words(L, n) would return, by gap-state counting."""
    if L < 1:
        raise ValueError(f"L must be at least 1, got {L}")
    if n < 0:
        raise ValueError(f"length must be nonnegative, got {n}")
    head = min(L, n)
    counts = {L: 1}  # gap since the last 1, clamped at L; L doubles as "no 1 yet"
    for pos in range(n):
        grown: dict[int, int] = {}
        for gap, c in counts.items():
            bumped = min(gap + 1, L)
            grown[bumped] = grown.get(bumped, 0) + c
            if pos >= head and gap >= L:
                grown[0] = grown.get(0, 0) + c
        counts = grown
    return sum(counts.values())


def sft_words(L: int, n: int) -> set[Word01]:
    """Length-n binary words starting with 0^min(L,n) and avoiding 1 0^k 1, k < L."""
    total = sft_count(L, n)
    if total > _WORDS_CAP:
        raise BudgetError(f"{total} words exceed the enumeration budget")
    head = min(L, n)
    out: set[Word01] = set()

    def grow(word: Word01, gap: int) -> None:
        if len(word) == n:
            out.add(word)
            return
        grow(word + (0,), min(gap + 1, L))
        if len(word) >= head and gap >= L:
            grow(word + (1,), 0)

    grow((), L)
    return out


@dataclass(frozen=True)
class GrowthEstimate:
    last_ratio: float
    regression: float  # exp of the log-linear slope


def growth_rate(word_counts) -> GrowthEstimate:
    """Geometric growth of consecutive word counts, two ways.

    Needs at least 5 consecutive positive counts; reports the final
    consecutive ratio and the exponential of the least-squares slope of the
    log counts.
    """
    counts = [float(c) for c in word_counts]
    if len(counts) < 5:
        raise ValueError("need at least 5 consecutive counts")
    if any(c <= 0.0 for c in counts):
        raise ValueError("counts must be positive")
    logs = [math.log(c) for c in counts]
    slope = statistics.linear_regression(range(len(logs)), logs).slope
    return GrowthEstimate(counts[-1] / counts[-2], math.exp(slope))


def to_label_symbols(word: Word01) -> tuple[int, ...]:
    """Map this module's {0,1} words onto the library's {1,2} label alphabet."""
    if any(s not in (0, 1) for s in word):
        raise ValueError(f"word {word} is not binary")
    return tuple(s + 1 for s in word)


def from_label_symbols(word) -> Word01:
    if any(s not in (1, 2) for s in word):
        raise ValueError(f"word {tuple(word)} is not over labels {{1,2}}")
    return tuple(s - 1 for s in word)


def dimension_rows(ms, r: float) -> list[tuple[int, int | None, float | None, float]]:
    """(m, L, rho_L, dim) rows for CSV emission; L and rho are None at m = 2."""
    rows = []
    for m in ms:
        if m == 2:
            rows.append((2, None, None, dim_Fm(2, r)))
        else:
            L = level_of(m)
            rows.append((m, L, rho(L), dim_Fm(m, r)))
    return rows


def dump_words(words) -> str:
    """Sorted one-word-per-line text form, for golden files and diffs."""
    lines = ["".join(str(s) for s in w) for w in words]
    return "\n".join(sorted(lines)) + "\n" if lines else ""
