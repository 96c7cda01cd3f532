"""Couplings and the bottleneck transport metric on idempotent measures.

A coupling of two finite-support measures is a measure on the product
space whose pushforwards under the two projections recover the operands.
Its support pattern is the set of atom-index pairs carrying finite
weight, and the cost of a pair (j, k) is the absolute weight gap plus the
ground distance:  |w2[k] - w1[j]| + d(x1[j], x2[k]).  The transport value
is the minimum over couplings of the worst pair cost, and the measure
metric truncates it at the space diameter.

Because pair costs depend only on the support pattern and the marginal
weights, the minimum runs over feasible patterns, never over the
continuum of weight assignments.  The fast path avoids enumeration with a
witness argument:

* any feasible pattern must contain, in each row j, a pair whose second
  weight dominates (w2[k] >= w1[j]) -- otherwise the row marginal cannot
  be attained, since pair weights are capped at min(w1[j], w2[k]) -- and
  symmetrically a dominating pair per column;
* the worst cost of a feasible pattern is therefore at least the best
  witness cost of every row and column;
* the union of per-row and per-column best witnesses is itself feasible
  and attains that bound exactly.

Hence the transport value equals
``max(max_j min-witness-cost(row j), max_k min-witness-cost(col k))``.
Witness sets are never empty because normalization gives both measures a
weight-0 atom.  :func:`bottleneck_distance_bruteforce` enumerates all
support patterns with independent feasibility filtering and exists to
keep this argument honest in tests.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import defects
from .measures import IdempotentMeasure, SpaceMismatchError, _resolve_atom
from .tropical import MaxPlusValue, big_oplus

__all__ = [
    "Coupling",
    "SupportPattern",
    "cost",
    "pattern_feasible",
    "bottleneck_distance",
    "bottleneck_distance_bruteforce",
    "ORACLE_CELL_LIMIT",
    "measure_distance",
    "distance_to_dirac",
    "distance_to_diracs",
]

#: Size guard for exhaustive pattern enumeration (support product).
ORACLE_CELL_LIMIT = 20


def _same_space(mu1: IdempotentMeasure, mu2: IdempotentMeasure):
    if mu1.ground is not mu2.ground:
        raise SpaceMismatchError("measures live on different spaces")


@dataclass(frozen=True)
class SupportPattern:
    """A support relation: pairs (j, k) of entry indices into mu1, mu2."""

    relation: frozenset

    def __post_init__(self):
        rel = frozenset((int(j), int(k)) for j, k in self.relation)
        if not rel:
            raise ValueError("a support pattern must be nonempty")
        object.__setattr__(self, "relation", rel)

    @classmethod
    def full(cls, mu1: IdempotentMeasure, mu2: IdempotentMeasure) -> "SupportPattern":
        return cls(frozenset(
            (j, k)
            for j in range(mu1.support_size)
            for k in range(mu2.support_size)
        ))


@dataclass(frozen=True)
class Coupling:
    """A coupling given by weighted support pairs (j, k, gamma)."""

    mu1: IdempotentMeasure
    mu2: IdempotentMeasure
    pairs: tuple

    def pattern(self) -> SupportPattern:
        return SupportPattern(frozenset((j, k) for j, k, _ in self.pairs))

    def validate(self) -> str | None:
        """Report the first violated coupling invariant, or None."""
        _same_space(self.mu1, self.mu2)
        w1, w2 = self.mu1.weights, self.mu2.weights
        seen = set()
        rows: dict[int, list] = {}
        cols: dict[int, list] = {}
        for j, k, g in self.pairs:
            if not (0 <= j < len(w1) and 0 <= k < len(w2)):
                return f"pair ({j}, {k}) out of range"
            if (j, k) in seen:
                return f"duplicate pair ({j}, {k})"
            seen.add((j, k))
            if not math.isfinite(g):
                return f"non-finite pair weight {g!r} at ({j}, {k})"
            if g > min(w1[j], w2[k]):
                return (
                    f"pair weight {g!r} at ({j}, {k}) exceeds the marginal cap "
                    f"min({w1[j]!r}, {w2[k]!r})"
                )
            rows.setdefault(j, []).append(MaxPlusValue(g))
            cols.setdefault(k, []).append(MaxPlusValue(g))
        for j, wj in enumerate(w1):
            m = big_oplus(rows.get(j, ()))
            if m.is_bottom or m.value != wj:
                return f"row marginal at {j}: fold is {m!r}, expected {wj!r}"
        for k, wk in enumerate(w2):
            m = big_oplus(cols.get(k, ()))
            if m.is_bottom or m.value != wk:
                return f"column marginal at {k}: fold is {m!r}, expected {wk!r}"
        top = big_oplus(MaxPlusValue(g) for _, _, g in self.pairs)
        if top != MaxPlusValue(0.0):
            return f"induced measure is not normalized: max pair weight {top!r}"
        return None


def cost(j: int, k: int, mu1: IdempotentMeasure, mu2: IdempotentMeasure) -> float:
    """Pair cost |w2[k] - w1[j]| + d(x1[j], x2[k])."""
    _same_space(mu1, mu2)
    gap = mu2.weights[k] - mu1.weights[j]
    if not defects.enabled("drop-cost-abs"):
        gap = abs(gap)
    return gap + mu1.ground._rows[mu1.atoms[j]][mu2.atoms[k]]


def pattern_feasible(pattern, mu1: IdempotentMeasure, mu2: IdempotentMeasure) -> bool:
    """Whether the pattern supports some coupling.

    Decided by the maximal construction: put gamma = min(w1[j], w2[k]) on
    every pair of the pattern (no feasible coupling can exceed this) and
    check that both families of marginals are attained.
    """
    _same_space(mu1, mu2)
    if isinstance(pattern, SupportPattern):
        rel = pattern.relation
    else:
        rel = frozenset((int(j), int(k)) for j, k in pattern)
        if not rel:
            return False
    w1, w2 = mu1.weights, mu2.weights
    n1, n2 = len(w1), len(w2)
    rowmax = [-math.inf] * n1
    colmax = [-math.inf] * n2
    for j, k in rel:
        if not (0 <= j < n1 and 0 <= k < n2):
            raise ValueError(f"pair ({j}, {k}) out of range")
        g = min(w1[j], w2[k])
        if g > rowmax[j]:
            rowmax[j] = g
        if g > colmax[k]:
            colmax[k] = g
    return all(rowmax[j] == w1[j] for j in range(n1)) and all(
        colmax[k] == w2[k] for k in range(n2)
    )


def bottleneck_distance(mu1: IdempotentMeasure, mu2: IdempotentMeasure) -> float:
    """Min over couplings of the worst pair cost, via the witness bound."""
    _same_space(mu1, mu2)
    w1, w2 = mu1.weights, mu2.weights
    rows = mu1.ground._rows
    p1 = [rows[a] for a in mu1.atoms]
    a2 = mu2.atoms
    drop_abs = defects.enabled("drop-cost-abs")
    skip_cols = defects.enabled("skip-column-witnesses")

    best = -math.inf
    for j, wj in enumerate(w1):
        dj = p1[j]
        m = math.inf
        for k, wk in enumerate(w2):
            if wk >= wj:
                # gap is nonnegative here, so |wk - wj| == wk - wj exactly
                c = (wk - wj) + dj[a2[k]]
                if c < m:
                    m = c
        if m > best:
            best = m
    if not skip_cols:
        for k, wk in enumerate(w2):
            m = math.inf
            for j, wj in enumerate(w1):
                if wj >= wk:
                    gap = (wk - wj) if drop_abs else (wj - wk)
                    c = gap + p1[j][a2[k]]
                    if c < m:
                        m = c
            if m > best:
                best = m
    return best


def bottleneck_distance_bruteforce(mu1: IdempotentMeasure,
                                   mu2: IdempotentMeasure) -> float:
    """Exhaustive reference value: minimum worst pair cost over all
    feasible support patterns.

    Enumerates every nonempty subset of the support-pair grid, filters by
    the maximal-coupling marginal check, and minimizes the pattern's worst
    cost.  Test oracle only; guarded to ORACLE_CELL_LIMIT grid cells.
    """
    _same_space(mu1, mu2)
    w1 = np.array(mu1.weights)
    w2 = np.array(mu2.weights)
    n1, n2 = len(w1), len(w2)
    cells = n1 * n2
    if cells > ORACLE_CELL_LIMIT:
        raise ValueError(
            f"support product {n1}x{n2} exceeds the enumeration guard "
            f"({ORACLE_CELL_LIMIT} cells)"
        )
    dsub = mu1.ground.dist[np.ix_(mu1.atoms, mu2.atoms)]
    costs = (np.abs(w2[None, :] - w1[:, None]) + dsub).ravel()
    caps = np.minimum(w1[:, None], w2[None, :]).ravel()

    masks = np.arange(1, 1 << cells, dtype=np.uint32)
    bits = ((masks[:, None] >> np.arange(cells, dtype=np.uint32)[None, :]) & 1).astype(bool)

    feasible = np.ones(len(masks), dtype=bool)
    for j in range(n1):
        sel = bits[:, j * n2:(j + 1) * n2]
        rowmax = np.where(sel, caps[j * n2:(j + 1) * n2], -np.inf).max(axis=1)
        feasible &= rowmax == w1[j]
    for k in range(n2):
        sel = bits[:, k::n2]
        colmax = np.where(sel, caps[k::n2], -np.inf).max(axis=1)
        feasible &= colmax == w2[k]

    worst = np.where(bits, costs, -np.inf).max(axis=1)
    return float(worst[feasible].min())


def measure_distance(mu1: IdempotentMeasure, mu2: IdempotentMeasure) -> float:
    """The metric on measures: transport value truncated at the diameter."""
    h = bottleneck_distance(mu1, mu2)
    if defects.enabled("skip-truncation"):
        return h
    d = mu1.ground.truncation_diam
    return h if h <= d else d


def distance_to_dirac(mu: IdempotentMeasure, x0) -> float:
    """Closed form of the metric against a Dirac target.

    The coupling with a Dirac is unique, so the value is
    min(diam, max_i(|w_i| + d(x_i, x0))) with no optimization.  Must agree
    exactly with measure_distance(mu, dirac(x0)); tests enforce this.
    """
    x0i = _resolve_atom(mu.ground, x0)
    rows = mu.ground._rows
    h = max(abs(w) + rows[a][x0i] for a, w in zip(mu.atoms, mu.weights))
    d = mu.ground.truncation_diam
    return h if h <= d else d


def distance_to_diracs(mu: IdempotentMeasure) -> float:
    """Distance from ``mu`` to the set of all Dirac measures of its space."""
    return min(distance_to_dirac(mu, x) for x in range(len(mu.ground)))
