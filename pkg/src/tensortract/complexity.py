"""Exact information complexity for weighted tensor product problems.

A tuple (n_1, ..., n_d) qualifies at threshold E = log(1/eps) when its
additive cost sum_{k: n_k >= 2} (G(k) + L(n_k)) stays strictly below the
budget B = 2E.  The count of qualifying tuples equals the number of tensor
eigenvalues exceeding eps**2, which is the information complexity.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

from .errors import BudgetExceeded, NonCompact
from .seqcore import EigenSeq, ExtLogMag, WeightSeq

DEFAULT_NODE_BUDGET = 10**8
_SEARCH_CAP = 2**62


@dataclass(frozen=True)
class Query:
    """Error threshold in log form (E = log(1/eps), natural units) plus dimension."""

    E: float
    d: int

    def __post_init__(self):
        e = float(self.E)
        if not math.isfinite(e) or e <= 0.0:
            raise ValueError(f"E must be positive and finite, got {self.E!r}")
        object.__setattr__(self, "E", e)
        if isinstance(self.d, bool) or not isinstance(self.d, int) or self.d < 1:
            raise ValueError(f"d must be a positive integer, got {self.d!r}")


@dataclass(frozen=True)
class CountResult:
    """Exact qualifying-tuple count plus search statistics."""

    count: int
    nodes_visited: int
    truncated_dimension: int


def _check_threshold(E: float) -> float:
    e = float(E)
    if not math.isfinite(e) or e <= 0.0:
        raise ValueError(f"threshold E must be positive and finite, got {E!r}")
    return e


def _adjust_candidate(eval_at, budget: float, cand: int) -> int | None:
    """Turn a closed-form candidate into the exact strict threshold index.

    Brackets the candidate multiplicatively (float hints can be off by many
    integers at astronomical scales) and bisects with the exact predicate.
    """
    cand = max(1, cand)
    for slack in (1e-12, 1e-9, 1e-6, 1e-3, 0.5):
        lo = max(1, int(cand * (1.0 - slack)) - 2)
        hi = int(cand * (1.0 + slack)) + 2
        if eval_at(lo) < budget and not (eval_at(hi) < budget):
            while hi - lo > 1:
                mid = (lo + hi) // 2
                if eval_at(mid) < budget:
                    lo = mid
                else:
                    hi = mid
            return lo
    return None


def _max_index_below(eval_at, family, budget: float, cap: int) -> int | None:
    """max{j >= 1 : eval_at(j) < budget}; 0 when none; None when unresolvable.

    Uses an exact table lookup when the family provides one, then a galloping
    search with bisection, then a closed-form hint refined to exactness.
    """
    if family is not None:
        exact = family.threshold_exact(budget)
        if exact is not None:
            return exact
    if not (eval_at(1) < budget):
        return 0
    lo, hi = 1, 2
    while eval_at(hi) < budget:
        lo, hi = hi, hi * 2
        if lo > cap:
            if family is None:
                return None
            hint = family.threshold_hint(budget)
            if hint is None:
                return None
            return _adjust_candidate(eval_at, budget, hint)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if eval_at(mid) < budget:
            lo = mid
        else:
            hi = mid
    return lo


def j_of_eps(seq: EigenSeq, E: float, *, cap: int | None = None) -> int:
    """Largest index whose eigenvalue exceeds eps**2, i.e. max{j : L(j) < 2E}.

    With a caller-supplied cap the result is truncated at the cap instead of
    raising NonCompact when the threshold lies beyond it.
    """
    budget = 2.0 * _check_threshold(E)
    fam = seq.family
    if not fam.compact:
        if cap is not None:
            return cap
        raise NonCompact("eigenvalues do not decay to zero; supply a search cap")
    res = _max_index_below(fam.log_inv, fam, budget, cap if cap is not None else _SEARCH_CAP)
    if res is None:
        if cap is not None:
            return cap
        raise NonCompact(
            "threshold index could not be resolved within the search cap "
            "(no closed form, or the index exceeds the representable range)")
    return res


def d_of_eps(seq: WeightSeq, E: float, *, cap: int | None = None) -> int:
    """Largest index whose weight exceeds eps**2; 0 when already gamma_1 <= eps**2."""
    budget = 2.0 * _check_threshold(E)
    fam = seq.family
    if not fam.compact:
        if cap is not None:
            return cap
        raise NonCompact("weights do not decay to zero; supply a search cap")
    res = _max_index_below(fam.log_inv, fam, budget, cap if cap is not None else _SEARCH_CAP)
    if res is None:
        if cap is not None:
            return cap
        raise NonCompact(
            "weight threshold could not be resolved within the search cap "
            "(no closed form, or the index exceeds the representable range)")
    return res


def info_complexity(lam: EigenSeq, gam: WeightSeq, q: Query,
                    node_budget: int = DEFAULT_NODE_BUDGET) -> CountResult:
    """Exact count of tuples with cost strictly below 2E, in arbitrary precision.

    Coordinates whose cheapest nontrivial level already exhausts the budget
    are forced to level 1 and dropped up front (weights are non-increasing,
    so the active coordinates form a prefix).  Level 1 always costs nothing,
    matching the convention that the first tensor factor is unweighted.
    """
    B = 2.0 * q.E
    L2 = lam.L(2)
    G = gam.G

    if not (G(1) + L2 < B):
        return CountResult(1, 1, 0)
    # Active prefix: largest m <= d with G(m) + L(2) < B (monotone in m).
    if G(q.d) + L2 < B:
        m = q.d
    else:
        lo, hi = 1, q.d  # predicate true at lo, false at hi
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if G(mid) + L2 < B:
                lo = mid
            else:
                hi = mid
        m = lo

    # Level table shared by all coordinates: levels j >= 2 usable anywhere
    # satisfy G(1) + L(j) < B (coordinate 1 has the most slack).
    g1 = G(1)
    jmax = _max_index_below(lambda j: g1 + lam.L(j), None, B, node_budget)
    if jmax is None:
        raise BudgetExceeded(
            f"admissible level range exceeds the node budget ({node_budget})")
    Ltab = [lam.L(j) for j in range(2, jmax + 1)]
    Gs = [G(k) for k in range(1, m + 1)]

    nodes = 0
    total = 0
    stack = [(0, 0.0)]
    while stack:
        idx, cost = stack.pop()
        nodes += 1
        if nodes > node_budget:
            raise BudgetExceeded(f"node budget exceeded ({node_budget} nodes)")
        g = Gs[idx]
        if idx == m - 1:
            # Count admissible levels of the last coordinate by bisection on
            # the exact qualifying predicate (monotone in the level index).
            lo, hi = 0, len(Ltab)
            while lo < hi:
                mid = (lo + hi) // 2
                if cost + (g + Ltab[mid]) < B:
                    lo = mid + 1
                else:
                    hi = mid
            total += 1 + lo
            continue
        stack.append((idx + 1, cost))
        for lv in Ltab:
            c2 = cost + (g + lv)
            if not (c2 < B):
                break
            stack.append((idx + 1, c2))
    return CountResult(total, nodes, m)


def top_eigenvalues(lam: EigenSeq, gam: WeightSeq, d: int, K: int,
                    frontier_cap: int | None = None) -> list:
    """K largest tensor eigenvalues as non-decreasing log(1/value) costs.

    Best-first expansion from the all-ones tuple, one coordinate increment at
    a time, with a visited set for deduplication.  Cost ties are emitted in
    full (lexicographic tuple order), so the result may exceed K entries.
    """
    if isinstance(d, bool) or not isinstance(d, int) or d < 1:
        raise ValueError(f"d must be a positive integer, got {d!r}")
    if isinstance(K, bool) or not isinstance(K, int) or K < 1:
        raise ValueError(f"K must be a positive integer, got {K!r}")
    cap = frontier_cap if frontier_cap is not None else max(4096, 32 * K * max(d, 2))

    Gs = [gam.G(k) for k in range(1, d + 1)]
    lcache = [0.0, 0.0]  # 1-based levels; level 1 unused in costs

    def level_cost(lv: int) -> float:
        while len(lcache) <= lv:
            lcache.append(lam.L(len(lcache)))
        return lcache[lv]

    def tuple_cost(t: tuple) -> float:
        cost = 0.0
        for k, lv in enumerate(t):
            if lv >= 2:
                cost = cost + (Gs[k] + level_cost(lv))
        return cost

    start = (1,) * d
    heap = [(0.0, start)]
    seen = {start}
    pushes = 1
    out: list[float] = []
    while heap:
        c, t = heapq.heappop(heap)
        if len(out) >= K and (math.isinf(c) or c != out[K - 1]):
            break
        out.append(c)
        for k in range(d):
            t2 = t[:k] + (t[k] + 1,) + t[k + 1:]
            if t2 in seen:
                continue
            seen.add(t2)
            pushes += 1
            if pushes > cap:
                raise BudgetExceeded(
                    f"frontier cap exceeded ({cap} states) while extracting {K} eigenvalues")
            heapq.heappush(heap, (tuple_cost(t2), t2))
    return [ExtLogMag(c) for c in out]


def nth_minimal_error(lam: EigenSeq, gam: WeightSeq, d: int, n: int) -> ExtLogMag:
    """log(1/e(n)): half the cost of the (n+1)-th largest tensor eigenvalue."""
    if isinstance(n, bool) or not isinstance(n, int) or n < 0:
        raise ValueError(f"n must be a nonnegative integer, got {n!r}")
    ev = top_eigenvalues(lam, gam, d, n + 1)
    return ExtLogMag(0.5 * float(ev[n]))
