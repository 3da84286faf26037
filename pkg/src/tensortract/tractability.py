"""Exponential-tractability estimators, condition checkers, and the classifier.

The limit constants characterizing EXP-SPT and EXP-QPT are estimated on
finite threshold grids (a true limsup is not computable from finitely many
probes) and decided exactly when the sequence families carry analytic
growth metadata.  Verdicts are Holds/Fails only when the analytic route
resolves them or a concrete refutation witness exists; otherwise they are
Inconclusive with full evidence attached.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .complexity import d_of_eps, j_of_eps
from .errors import DivergentTail, NonCompact, UnsupportedNotion
from .seqcore import (
    SUPER_POLYNOMIAL,
    EigenSeq,
    Growth,
    LOG_BUDGET,
    SuperPolynomial,
    WeightSeq,
)

#: Doubly-exponential default threshold grid (E = log(1/eps), natural units).
DEFAULT_E_GRID = (1e3, 1e6, 1e12, 1e100, 1e300)

#: Default index grid for divergence probes.
DEFAULT_J_GRID = (4, 16, 256, 65536, 2**24, 2**48)

#: Default dimension net for the s < 1, t = 1 ratio probes.
DEFAULT_NET_D = (4, 16, 64, 256, 1024)


class NotionKind(str, Enum):
    EXP_SPT = "EXP-SPT"
    EXP_PT = "EXP-PT"
    EXP_QPT = "EXP-QPT"
    EXP_WT = "EXP-WT"
    EXP_ST_WT = "EXP-(s,t)-WT"


@dataclass(frozen=True)
class Notion:
    """A tractability notion; (s, t) parameters apply to the weak family only."""

    kind: NotionKind
    s: float | None = None
    t: float | None = None

    def __post_init__(self):
        if self.kind in (NotionKind.EXP_SPT, NotionKind.EXP_PT, NotionKind.EXP_QPT):
            if self.s is not None or self.t is not None:
                raise UnsupportedNotion(f"{self.kind.value} takes no (s, t) parameters")
            return
        if self.kind is NotionKind.EXP_WT:
            object.__setattr__(self, "s", 1.0)
            object.__setattr__(self, "t", 1.0)
            return
        if self.s is None or self.t is None:
            raise UnsupportedNotion("EXP-(s,t)-WT requires both s and t")
        s, t = float(self.s), float(self.t)
        if not (math.isfinite(s) and math.isfinite(t) and s > 0.0 and t > 0.0):
            raise UnsupportedNotion(f"s and t must be positive and finite, got ({self.s}, {self.t})")
        if max(s, t) < 1.0:
            raise UnsupportedNotion(
                f"EXP-(s,t)-WT with max(s,t) < 1 is not supported (got s={s}, t={t})")
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "t", t)
        if s == 1.0 and t == 1.0:
            object.__setattr__(self, "kind", NotionKind.EXP_WT)

    @classmethod
    def spt(cls) -> "Notion":
        return cls(NotionKind.EXP_SPT)

    @classmethod
    def pt(cls) -> "Notion":
        return cls(NotionKind.EXP_PT)

    @classmethod
    def qpt(cls) -> "Notion":
        return cls(NotionKind.EXP_QPT)

    @classmethod
    def wt(cls) -> "Notion":
        return cls(NotionKind.EXP_WT)

    @classmethod
    def st_weak(cls, s: float, t: float) -> "Notion":
        return cls(NotionKind.EXP_ST_WT, s, t)

    @property
    def label(self) -> str:
        if self.kind is NotionKind.EXP_ST_WT:
            return f"EXP-({self.s:g},{self.t:g})-WT"
        return self.kind.value


class VerdictStatus(str, Enum):
    HOLDS = "holds"
    FAILS = "fails"
    INCONCLUSIVE = "inconclusive"


class VerdictMode(str, Enum):
    ANALYTIC = "analytic"
    NUMERIC = "numeric"


@dataclass(frozen=True)
class Diagnostic:
    """One named piece of evidence attached to a verdict."""

    name: str
    value: object
    note: str = ""


@dataclass(frozen=True)
class LimitEstimate:
    """Finite-grid surrogate for a limit: probes, running tail supremum, trend."""

    probes: tuple
    tail_sup: float
    trend: str
    skipped: tuple = ()


@dataclass(frozen=True)
class DivergenceResult:
    kind: str  # "diverges" | "bounded" | "inconclusive"
    limit: float | None
    mode: str  # "analytic" | "numeric"
    evidence: LimitEstimate | None = None


@dataclass(frozen=True)
class SummabilityResult:
    value: float
    tail_bound: float | None  # None = unknown
    terms: int


@dataclass(frozen=True)
class SupCriterionResult:
    sup: float
    argmax_d: int
    still_growing: bool
    m_star: float


@dataclass(frozen=True)
class FitResult:
    p_hat: float
    c_hat: float
    residual: float
    degenerate: bool


@dataclass(frozen=True)
class ProbePolicy:
    """Probe-grid configuration for the classifier and estimators."""

    E_grid: tuple = DEFAULT_E_GRID
    j_grid: tuple = DEFAULT_J_GRID
    net_d: tuple = DEFAULT_NET_D
    promote_numeric_trends: bool = False


DEFAULT_POLICY = ProbePolicy()


@dataclass(frozen=True)
class Verdict:
    notion: Notion
    status: VerdictStatus
    exponent: float | None
    evidence: tuple
    mode: VerdictMode


def _trend(ratios) -> str:
    vals = [r for r in ratios]
    if len(vals) < 2:
        return "flat"
    finite = [abs(v) for v in vals if math.isfinite(v)]
    tol = 1e-9 * max([1.0] + finite)
    inc = dec = False
    for a, b in zip(vals, vals[1:]):
        d = b - a
        if math.isnan(d):
            continue
        if d > tol:
            inc = True
        elif d < -tol:
            dec = True
    if inc and dec:
        return "oscillating"
    if inc:
        return "increasing"
    if dec:
        return "decreasing"
    return "flat"


def _limit_estimate(probes, skipped=()) -> LimitEstimate:
    probes = tuple(probes)
    ratios = [r for _, r in probes]
    tail = ratios[len(ratios) // 2:] if ratios else []
    tail_sup = max(tail) if tail else 0.0
    return LimitEstimate(probes, tail_sup, _trend(ratios), tuple(skipped))


def _check_egrid(Egrid) -> list:
    grid = [float(E) for E in Egrid]
    if not grid:
        raise ValueError("threshold grid must be non-empty")
    for E in grid:
        if not math.isfinite(E) or E <= 1.0:
            raise ValueError(f"threshold probes must satisfy E > 1, got {E!r}")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("threshold grid must be strictly increasing")
    return grid


def b_spt_estimate(lam: EigenSeq, gam: WeightSeq, Egrid=DEFAULT_E_GRID) -> LimitEstimate:
    """Probe d(eps) * log j(eps) / log log(1/eps) along the grid.

    Probes with d(eps) = 0 are skipped (and recorded); j(eps) = 1 contributes
    a zero ratio.
    """
    probes = []
    skipped = []
    for E in _check_egrid(Egrid):
        deps = d_of_eps(gam, E)
        if deps == 0:
            skipped.append((E, "d(eps) = 0"))
            continue
        jeps = j_of_eps(lam, E)
        ratio = deps * math.log(jeps) / math.log(E) if jeps >= 1 else 0.0
        probes.append((E, ratio))
    return _limit_estimate(probes, skipped)


def b_qpt_estimate(lam: EigenSeq, gam: WeightSeq, Egrid=DEFAULT_E_GRID) -> LimitEstimate:
    """Probe d(eps) * log j(eps) / (log d(eps) * log log(1/eps)).

    Probes with d(eps) < 2 would divide by log 1 = 0 and are skipped."""
    probes = []
    skipped = []
    for E in _check_egrid(Egrid):
        deps = d_of_eps(gam, E)
        if deps < 2:
            skipped.append((E, f"d(eps) = {deps} < 2"))
            continue
        jeps = j_of_eps(lam, E)
        ratio = deps * math.log(jeps) / (math.log(deps) * math.log(E)) if jeps >= 1 else 0.0
        probes.append((E, ratio))
    return _limit_estimate(probes, skipped)


def divergence_check(seq, s: float, jgrid=DEFAULT_J_GRID, mode: str = "auto") -> DivergenceResult:
    """Classify (log(1/x_j))**s / log j as j -> inf.

    Analytic mode answers from family metadata; numeric mode only reports
    probe ratios and a trend (never a Diverges/Bounded claim).
    """
    if not (s > 0.0 and math.isfinite(s)):
        raise ValueError(f"s must be positive and finite, got {s!r}")
    probes = []
    for j in jgrid:
        if j < 2:
            raise ValueError("divergence probes require j >= 2")
        lv = seq.log_inv(int(j))
        ratio = math.inf if math.isinf(lv) else lv**s / math.log(j)
        probes.append((float(j), ratio))
    est = _limit_estimate(probes)
    if mode == "auto":
        rc = seq.ratio_class(s)
        if rc is not None:
            return DivergenceResult(rc.kind, rc.limit, "analytic", est)
    elif mode != "numeric":
        raise ValueError(f"mode must be 'auto' or 'numeric', got {mode!r}")
    return DivergenceResult("inconclusive", None, "numeric", est)


def summability(seq, c: float, J: int) -> SummabilityResult:
    """Truncated power sum sum_{j<=J} x_j**c with a rigorous tail bound when
    the family admits one (None marks an unknown tail).

    Raises DivergentTail when the family certifies divergence of the series.
    """
    if not (c > 0.0 and math.isfinite(c)):
        raise ValueError(f"c must be positive and finite, got {c!r}")
    if J < 2:
        raise ValueError(f"J must be >= 2, got {J!r}")
    fam = seq.family
    if fam.summable(c) is False:
        raise DivergentTail(f"sum of x_j**{c} diverges for this family")
    js = np.arange(1, J + 1, dtype=np.int64)
    with np.errstate(over="ignore"):
        ls = fam.log_inv_many(js)
        terms = np.exp(-c * ls)
    value = float(terms.sum())
    return SummabilityResult(value, fam.tail_bound(c, J), J)


def converged_sum_from_two(seq, c: float, rel_tol: float = 1e-9,
                           j_cap: int = 2**22) -> tuple:
    """sum_{j>=2} x_j**c with the truncation grown until the tail bound is
    below rel_tol of the partial sum; returns (value, tail_bound or None)."""
    fam = seq.family
    if fam.summable(c) is False:
        raise DivergentTail(f"sum of x_j**{c} diverges for this family")
    J = 64
    while True:
        res = summability(seq, c, J)
        from_two = res.value - math.exp(-c * seq.log_inv(1))
        bound = res.tail_bound
        if bound is not None and bound <= rel_tol * max(from_two, 1e-300):
            return from_two, bound
        if J >= j_cap:
            return from_two, bound if bound is not None else None
        J *= 8


def wt_sup_criterion(lam: EigenSeq, gam: WeightSeq, c: float, t: float,
                     dmax: int) -> SupCriterionResult:
    """Evaluate sup_d (sum_{k<=d} log(1 + gamma_k**c * M*) - c * d**t) over d <= dmax.

    M* is the converged from-two eigenvalue power sum.  The growth flag marks
    an expression still increasing at dmax (an unbounded supremum refutes
    the corresponding weak-tractability notion).
    """
    if dmax < 1:
        raise ValueError(f"dmax must be >= 1, got {dmax!r}")
    m_star, _ = converged_sum_from_two(lam, c)
    ks = np.arange(1, dmax + 1, dtype=np.int64)
    with np.errstate(over="ignore"):
        gs = gam.family.log_inv_many(ks)
        w = np.exp(-c * gs)
        increments = np.log1p(w * m_star)
        values = np.cumsum(increments) - c * np.power(ks.astype(float), t)
    idx = int(np.argmax(values))
    sup = float(values[idx])
    if dmax == 1:
        growing = bool(values[0] > 0.0)
    else:
        growing = bool(values[-1] - values[-2] > 0.0) and idx == dmax - 1
    return SupCriterionResult(sup, idx + 1, growing, m_star)


def wt_s_below_one_check(lam: EigenSeq, gam: WeightSeq, s: float,
                         triples) -> LimitEstimate:
    """Probe ((log 1/gamma_k)**s + (log 1/lambda_j)**s) / (d**(1-s) * log j)
    on (d, k, j) triples; reports the minimum ratio at each scale."""
    if not (0.0 < s < 1.0):
        raise ValueError(f"s must lie in (0, 1), got {s!r}")
    by_scale: dict = {}
    for d, k, j in triples:
        if j < 2:
            raise ValueError("triples require j >= 2")
        if not (1 <= k <= d):
            raise ValueError("triples require 1 <= k <= d")
        g = gam.G(k)
        l = lam.L(j)
        num = (math.inf if math.isinf(g) else g**s) + (math.inf if math.isinf(l) else l**s)
        ratio = num / (d**(1.0 - s) * math.log(j))
        scale = float(max(d, j))
        by_scale[scale] = min(by_scale.get(scale, math.inf), ratio)
    probes = sorted(by_scale.items())
    return _limit_estimate(probes)


def witness_ratio(lam: EigenSeq, gam: WeightSeq, s: float, t: float,
                  d: int, k_list) -> float:
    """(d**t + (sum log 1/gamma)**s + (sum log 1/lambda_{k_j})**s) / sum log k_j.

    A sequence of these ratios staying bounded along a growing net refutes
    exponential (s,t)-weak tractability.
    """
    ks = list(k_list)
    if len(ks) != d:
        raise ValueError(f"k_list must have length d = {d}")
    if any(k < 2 for k in ks):
        raise ValueError("all k_j must be >= 2")
    sum_g = 0.0
    for j in range(1, d + 1):
        sum_g += gam.G(j)
    sum_l = 0.0
    for k in ks:
        sum_l += lam.L(k)
    num = d**t
    num += math.inf if math.isinf(sum_g) else sum_g**s
    num += math.inf if math.isinf(sum_l) else sum_l**s
    den = sum(math.log(k) for k in ks)
    return num / den


def eta_exponent(s: float, t: float) -> float:
    """Effective divergence exponent s*(t-1)/(t-s) for the s < 1 < t regime."""
    if t == s:
        raise ValueError("eta requires t != s")
    return s * (t - 1.0) / (t - s)


def fit_exponent(samples) -> FitResult:
    """Least-squares slope of log(count) against log(1 + E).

    Recovers the exponent of a count growing like C * (1 + log(1/eps))**p.
    """
    pts = [(float(E), int(n)) for E, n in samples]
    if len(pts) < 3:
        raise ValueError("need at least 3 samples")
    if any(n < 1 for _, n in pts):
        raise ValueError("counts must be >= 1")
    es = [E for E, _ in pts]
    if len(set(es)) != len(es):
        raise ValueError("E values must be distinct")
    counts = [n for _, n in pts]
    if len(set(counts)) == 1:
        return FitResult(0.0, float(counts[0]), 0.0, True)
    xs = np.array([math.log1p(E) for E, _ in pts])
    ys = np.array([math.log(n) for _, n in pts])
    A = np.column_stack([xs, np.ones_like(xs)])
    sol, *_ = np.linalg.lstsq(A, ys, rcond=None)
    p_hat, intercept = float(sol[0]), float(sol[1])
    resid = float(np.linalg.norm(A @ sol - ys))
    return FitResult(p_hat, math.exp(intercept), resid, False)


def _attach_probe_estimates(lam, gam, policy, ev, want_qpt: bool) -> None:
    try:
        ev.append(Diagnostic("b_spt_probes", b_spt_estimate(lam, gam, policy.E_grid)))
    except (NonCompact, ValueError) as exc:
        ev.append(Diagnostic("b_spt_probes", None, note=f"skipped: {exc}"))
    if want_qpt:
        try:
            ev.append(Diagnostic("b_qpt_probes", b_qpt_estimate(lam, gam, policy.E_grid)))
        except (NonCompact, ValueError) as exc:
            ev.append(Diagnostic("b_qpt_probes", None, note=f"skipped: {exc}"))


def _polynomial_limit_constant(lam, gam, qpt: bool, ev) -> float | None:
    """Analytic limit constant for the SPT (or QPT) characterization.

    Returns +inf/0/finite value, or None when the growth metadata cannot
    resolve the limit.
    """
    d_growth = gam.family.threshold_growth()
    lnj_growth = lam.family.log_threshold_growth()
    if isinstance(d_growth, SuperPolynomial):
        # The effective dimension outgrows every power of the budget while
        # log j(eps) eventually stays >= log 2, so the limit is infinite.
        ev.append(Diagnostic("threshold_growth", "super-polynomial effective dimension"))
        return math.inf
    if d_growth is None or lnj_growth is None:
        return None
    if not qpt:
        mon = d_growth.mul(lnj_growth).div(LOG_BUDGET)
        ev.append(Diagnostic("b_spt_growth", mon))
        return mon.limit()
    log_d = d_growth.log()
    if log_d is None:
        # Bounded effective dimension with log d(eps) -> 0: the polynomial
        # and quasi-polynomial notions coincide, so reuse the plain limit.
        spt = d_growth.mul(lnj_growth).div(LOG_BUDGET)
        ev.append(Diagnostic("b_qpt_growth", spt,
                             note="bounded effective dimension; delegated to the plain limit"))
        return spt.limit()
    mon = d_growth.mul(lnj_growth).div(log_d.mul(LOG_BUDGET))
    ev.append(Diagnostic("b_qpt_growth", mon))
    return mon.limit()


def _classify_polynomial(lam, gam, notion, policy) -> Verdict:
    qpt = notion.kind is NotionKind.EXP_QPT
    ev: list[Diagnostic] = []
    lz_l = lam.limit_zero
    lz_g = gam.limit_zero
    ev.append(Diagnostic("limit_lambda_zero", lz_l))
    ev.append(Diagnostic("limit_gamma_zero", lz_g))
    if not lz_l or not lz_g:
        _attach_probe_estimates(lam, gam, policy, ev, qpt)
        return Verdict(notion, VerdictStatus.FAILS, None, tuple(ev), VerdictMode.ANALYTIC)
    limit = _polynomial_limit_constant(lam, gam, qpt, ev)
    _attach_probe_estimates(lam, gam, policy, ev, qpt)
    if limit is None:
        return Verdict(notion, VerdictStatus.INCONCLUSIVE, None, tuple(ev), VerdictMode.NUMERIC)
    name = "b_qpt_limit" if qpt else "b_spt_limit"
    ev.append(Diagnostic(name, limit))
    if math.isinf(limit):
        return Verdict(notion, VerdictStatus.FAILS, None, tuple(ev), VerdictMode.ANALYTIC)
    return Verdict(notion, VerdictStatus.HOLDS, limit, tuple(ev), VerdictMode.ANALYTIC)


def _classify_weak(lam, gam, notion, policy) -> Verdict:
    s, t = notion.s, notion.t
    ev: list[Diagnostic] = []
    required: list[DivergenceResult] = []
    analytic_fail = False

    def add_div(seq, expo, name):
        res = divergence_check(seq, expo, policy.j_grid)
        ev.append(Diagnostic(name, res))
        required.append(res)
        return res

    if s == 1.0 and t == 1.0:
        ev.append(Diagnostic("limit_gamma_zero", gam.limit_zero))
        if not gam.limit_zero:
            analytic_fail = True
        add_div(lam, 1.0, "lambda_log_ratio[s=1]")
    elif s == 1.0 and t < 1.0:
        add_div(gam, 1.0, "gamma_log_ratio[s=1]")
        add_div(lam, 1.0, "lambda_log_ratio[s=1]")
    elif s == 1.0 and t > 1.0:
        ev.append(Diagnostic("gamma_condition", True, note="weights unconstrained in this regime"))
        add_div(lam, 1.0, "lambda_log_ratio[s=1]")
    elif s > 1.0:
        lambda2_unit = lam.L(2) == 0.0
        ev.append(Diagnostic("lambda2_is_one", lambda2_unit))
        if t <= 1.0 and lambda2_unit:
            below = not gam.all_ones
            ev.append(Diagnostic("exists_gamma_below_one", below))
            if not below:
                analytic_fail = True
        add_div(lam, s, f"lambda_log_ratio[s={s:g}]")
    elif t > 1.0:  # s < 1 < t
        eta = eta_exponent(s, t)
        ev.append(Diagnostic("eta", eta, note="effective divergence exponent s(t-1)/(t-s)"))
        add_div(lam, eta, f"lambda_log_ratio[s={eta:.12g}]")
    else:  # s < 1, t == 1
        return _classify_weak_boundary(lam, gam, notion, policy, ev)

    if analytic_fail:
        return Verdict(notion, VerdictStatus.FAILS, None, tuple(ev), VerdictMode.ANALYTIC)
    kinds = {r.kind for r in required}
    if "bounded" in kinds:
        return Verdict(notion, VerdictStatus.FAILS, None, tuple(ev), VerdictMode.ANALYTIC)
    if kinds <= {"diverges"}:
        return Verdict(notion, VerdictStatus.HOLDS, None, tuple(ev), VerdictMode.ANALYTIC)
    if policy.promote_numeric_trends and all(
            r.kind == "diverges" or (r.evidence and r.evidence.trend == "increasing")
            for r in required):
        return Verdict(notion, VerdictStatus.HOLDS, None, tuple(ev), VerdictMode.NUMERIC)
    return Verdict(notion, VerdictStatus.INCONCLUSIVE, None, tuple(ev), VerdictMode.NUMERIC)


def _classify_weak_boundary(lam, gam, notion, policy, ev) -> Verdict:
    """s < 1, t = 1: the ratio must diverge along every admissible (d, k, j) net."""
    s = notion.s
    g1 = gam.G(1)
    triples = []
    for d in policy.net_d:
        triples.append((d, 1, 2))            # d grows, k and j fixed
        triples.append((d, 1, d + 1))        # diagonal in d and j
        triples.append((4 * max(policy.net_d), 1, d + 1))  # j grows, d fixed
    est = wt_s_below_one_check(lam, gam, s, triples)
    ev.append(Diagnostic("boundary_ratio_probes", est))
    if math.isinf(g1):
        # gamma_1 = 0 makes the problem trivial (count is always 1).
        ev.append(Diagnostic("trivial_problem", True, note="gamma_1 = 0"))
        return Verdict(notion, VerdictStatus.HOLDS, None, tuple(ev), VerdictMode.ANALYTIC)
    # Along the net with k = 1 and j = 2 fixed and d -> inf the numerator is
    # the constant G(1)**s + L(2)**s while the denominator d**(1-s) log 2
    # grows, so the required divergence fails.
    witness = (g1**s + lam.L(2)**s)
    ev.append(Diagnostic(
        "bounded_net_witness",
        {"net": "k=1, j=2, d->inf", "numerator": witness, "ratio_limit": 0.0},
        note="constant numerator against a growing denominator"))
    return Verdict(notion, VerdictStatus.FAILS, None, tuple(ev), VerdictMode.ANALYTIC)


def classify(lam: EigenSeq, gam: WeightSeq, notion: Notion,
             policy: ProbePolicy = DEFAULT_POLICY) -> Verdict:
    """Decide a tractability notion for the given eigenvalue/weight pair.

    The polynomial notions reduce to the finiteness of a limit constant
    (whose value is the optimal exponent); the weak family dispatches on
    (s, t) to the matching combination of weight conditions and divergence
    checks.  The plain polynomial notion delegates to the strong one, to
    which it is equivalent.
    """
    if math.isinf(gam.G(1)):
        # All weights vanish: the only positive eigenvalue is the all-ones
        # tuple and every notion holds trivially.
        ev = (Diagnostic("trivial_problem", True, note="gamma_1 = 0 (count is always 1)"),)
        exponent = 0.0 if notion.kind in (NotionKind.EXP_SPT, NotionKind.EXP_PT,
                                          NotionKind.EXP_QPT) else None
        return Verdict(notion, VerdictStatus.HOLDS, exponent, ev, VerdictMode.ANALYTIC)
    if notion.kind is NotionKind.EXP_PT:
        base = classify(lam, gam, Notion.spt(), policy)
        ev = base.evidence + (Diagnostic(
            "delegated", "EXP-SPT", note="the polynomial and strong polynomial notions coincide"),)
        return Verdict(notion, base.status, base.exponent, ev, base.mode)
    if notion.kind in (NotionKind.EXP_SPT, NotionKind.EXP_QPT):
        return _classify_polynomial(lam, gam, notion, policy)
    return _classify_weak(lam, gam, notion, policy)
