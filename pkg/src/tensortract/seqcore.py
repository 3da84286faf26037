"""Log-domain sequence families for eigenvalues and product weights.

Everything downstream works with T = log(1/x) for x in [0, 1] (natural log):
products of eigenvalues become additive costs, error thresholds become
additive budgets, and underflow disappears.  T = +inf encodes x = 0, and
saturating to +inf is order-correct for every threshold comparison made by
the counting and classification layers.
"""

from __future__ import annotations

import math
import sys
from bisect import bisect_left
from dataclasses import dataclass, fields
from typing import ClassVar

import numpy as np

from .errors import InvalidIndex, SequenceError

_LOG_MAX = math.log(sys.float_info.max)  # ~709.78; exp beyond this saturates


def _sat_exp(x: float) -> float:
    """exp with overflow saturated to +inf."""
    try:
        return math.exp(x)
    except OverflowError:
        return math.inf


def _sat_float(j) -> float:
    """float(j) with overflow saturated to +inf (j may be a huge int)."""
    try:
        return float(j)
    except OverflowError:
        return math.inf


def _sat_pow(x: float, b: float) -> float:
    """x**b for x >= 1, b > 0, saturated to +inf."""
    if math.isinf(x):
        return math.inf
    try:
        return math.pow(x, b)
    except OverflowError:
        return math.inf


def _check_index(j) -> int:
    if isinstance(j, bool) or not isinstance(j, int):
        raise InvalidIndex(f"index must be a positive integer, got {j!r}")
    if j < 1:
        raise InvalidIndex(f"index must be >= 1, got {j}")
    return j


def _positive_param(name: str, value) -> float:
    try:
        v = float(value)
    except (TypeError, ValueError):
        raise SequenceError(f"{name} must be a positive finite number, got {value!r}") from None
    if not math.isfinite(v) or v <= 0.0:
        raise SequenceError(f"{name} must be a positive finite number, got {value!r}")
    return v


class ExtLogMag(float):
    """Nonnegative extended real T = log(1/x) for x in [0, 1].

    Ordering follows T, so it reverses the ordering of the underlying x
    (T1 < T2 iff x1 > x2).  Adding two values corresponds to multiplying
    the underlying x values; T = +inf encodes x = 0 and is absorbing.
    """

    __slots__ = ()

    def __new__(cls, value) -> "ExtLogMag":
        v = float(value)
        if math.isnan(v) or v < 0.0:
            raise ValueError(f"log-magnitude must be >= 0 (or +inf), got {value!r}")
        return super().__new__(cls, v)

    @classmethod
    def from_linear(cls, x: float) -> "ExtLogMag":
        """Build from x in [0, 1]; x = 0 maps to +inf."""
        xf = float(x)
        if math.isnan(xf) or xf < 0.0 or xf > 1.0:
            raise ValueError(f"linear value must be in [0, 1], got {x!r}")
        if xf == 0.0:
            return cls(math.inf)
        return cls(-math.log(xf))

    def to_linear(self) -> float:
        return math.exp(-float(self))

    @property
    def is_zero(self) -> bool:
        """True when the underlying x equals 0 (T = +inf)."""
        return math.isinf(self)

    def __add__(self, other) -> "ExtLogMag":
        return ExtLogMag(float.__add__(self, float(other)))

    def __radd__(self, other) -> "ExtLogMag":
        return ExtLogMag(float.__radd__(self, float(other)))

    def __repr__(self) -> str:
        return f"ExtLogMag({float.__repr__(self)})"


@dataclass(frozen=True)
class RatioClass:
    """Analytic behaviour of (log(1/x_j))**s / log j as j grows."""

    kind: str  # "diverges" | "bounded"
    limit: float  # +inf for diverges, the limit value otherwise


DIVERGES = RatioClass("diverges", math.inf)


@dataclass(frozen=True)
class Growth:
    """Leading-order growth coef * exp(e*B) * B**p * (log B)**q * (loglog B)**r * (logloglog B)**u.

    The exponent tuple is ordered by dominance, so a lexicographic sign test
    on (e, p, q, r, u) decides the limit of the expression as B -> inf.
    """

    coef: float
    e: float = 0.0
    p: float = 0.0
    q: float = 0.0
    r: float = 0.0
    u: float = 0.0

    def mul(self, other: "Growth") -> "Growth":
        return Growth(self.coef * other.coef, self.e + other.e, self.p + other.p,
                      self.q + other.q, self.r + other.r, self.u + other.u)

    def div(self, other: "Growth") -> "Growth":
        return Growth(self.coef / other.coef, self.e - other.e, self.p - other.p,
                      self.q - other.q, self.r - other.r, self.u - other.u)

    def limit(self) -> float:
        """Limit as B -> inf: 0.0, the coefficient, or +inf."""
        for a in (self.e, self.p, self.q, self.r, self.u):
            if a > 0.0:
                return math.inf
            if a < 0.0:
                return 0.0
        return self.coef

    def log(self) -> "Growth | None":
        """Leading term of log(self); None when it degenerates or leaves the taxonomy."""
        if self.e > 0.0:
            return Growth(self.e, p=1.0)
        if self.p > 0.0:
            return Growth(self.p, q=1.0)
        if self.q > 0.0:
            return Growth(self.q, r=1.0)
        if self.r > 0.0:
            return Growth(self.r, u=1.0)
        if self.u > 0.0:
            return None
        if self.coef > 1.0:
            return Growth(math.log(self.coef))
        return None


#: The comparison scale log(B) used by the limit estimators.
LOG_BUDGET = Growth(1.0, q=1.0)


@dataclass(frozen=True)
class SuperPolynomial:
    """Marker for thresholds growing faster than any power of the budget
    (but sub-exponentially), outside the Growth taxonomy."""


SUPER_POLYNOMIAL = SuperPolynomial()


class _FamilyBase:
    """Shared defaults for sequence families; subclasses override as needed."""

    name: ClassVar[str]
    limit_zero: ClassVar[bool] = True      # x_j -> 0
    all_ones: ClassVar[bool] = False       # x_j == 1 for every j
    compact: ClassVar[bool] = True         # threshold searches terminate

    def log_inv(self, j: int) -> float:
        raise NotImplementedError

    def log_inv_many(self, js: np.ndarray) -> np.ndarray:
        return np.array([self.log_inv(int(j)) for j in js], dtype=float)

    def threshold_exact(self, budget: float) -> int | None:
        """Exact max{j : log_inv(j) < budget} when cheaply available."""
        return None

    def threshold_hint(self, budget: float) -> int | None:
        """Closed-form candidate for the threshold index (to be adjusted)."""
        return None

    def threshold_growth(self):
        """Growth of the threshold index in the budget, or SUPER_POLYNOMIAL, or None."""
        return None

    def log_threshold_growth(self) -> Growth | None:
        """Growth of log(threshold index) in the budget."""
        return None

    def ratio_class(self, s: float) -> RatioClass | None:
        return None

    def summable(self, c: float) -> bool | None:
        """Whether sum_j x_j**c converges."""
        rc = self.ratio_class(1.0)
        if rc is None:
            return None
        if rc.kind == "diverges":
            return True
        if rc.limit == 0.0:
            return False
        prod = c * rc.limit
        return prod > 1.0

    def _geometric_tail(self) -> bool:
        """Whether log_inv increments are non-decreasing (geometric tail valid)."""
        return False

    def _tail_exponent(self, c: float, J: int) -> float | None:
        """Lower bound on c * log_inv(j)/log(j) over j >= J, when available."""
        return None

    def tail_bound(self, c: float, J: int) -> float | None:
        """Upper bound on sum_{j > J} x_j**c, or None when unavailable."""
        if self._geometric_tail():
            l1 = self.log_inv(J + 1)
            if math.isinf(l1):
                return 0.0
            t1 = math.exp(-c * l1)
            l2 = self.log_inv(J + 2)
            if math.isinf(l2):
                return t1
            delta = l2 - l1
            if delta <= 0.0:
                return None
            rho = math.exp(-c * delta)
            if rho >= 1.0:
                return None
            # tiny inflation keeps the reported bound conservative under the
            # float rounding of t1 and rho
            return t1 / (1.0 - rho) * (1.0 + 1e-12)
        p = self._tail_exponent(c, J)
        if p is None or p <= 1.0 or not math.isfinite(p):
            if p is not None and math.isinf(p):
                return 0.0
            return None
        return math.pow(J, 1.0 - p) / (p - 1.0)

    def descriptor(self) -> dict:
        out = {"family": self.name}
        for f in fields(self):  # type: ignore[arg-type]
            v = getattr(self, f.name)
            out[f.name] = list(v) if isinstance(v, tuple) else v
        return out


@dataclass(frozen=True)
class PowerLaw(_FamilyBase):
    """x_j = j**(-a); log_inv(j) = a * log(j)."""

    a: float
    name: ClassVar[str] = "power_law"

    def __post_init__(self):
        object.__setattr__(self, "a", _positive_param("a", self.a))

    def log_inv(self, j: int) -> float:
        return self.a * math.log(j)

    def log_inv_many(self, js: np.ndarray) -> np.ndarray:
        return self.a * np.log(np.asarray(js, dtype=float))

    def threshold_hint(self, budget: float) -> int | None:
        x = budget / self.a
        if x >= _LOG_MAX:
            return None
        return max(1, int(math.exp(x)))

    def threshold_growth(self) -> Growth:
        return Growth(1.0, e=1.0 / self.a)

    def log_threshold_growth(self) -> Growth:
        return Growth(1.0 / self.a, p=1.0)

    def ratio_class(self, s: float) -> RatioClass:
        if s > 1.0:
            return DIVERGES
        if s == 1.0:
            return RatioClass("bounded", self.a)
        return RatioClass("bounded", 0.0)

    def summable(self, c: float) -> bool:
        return self.a * c > 1.0

    def tail_bound(self, c: float, J: int) -> float | None:
        p = self.a * c
        if p <= 1.0:
            return None
        return math.pow(J, 1.0 - p) / (p - 1.0)


@dataclass(frozen=True)
class ExpPower(_FamilyBase):
    """x_j = exp(-alpha * (j**beta - 1)); the j = 1 exponent is subtracted so x_1 = 1."""

    alpha: float
    beta: float
    name: ClassVar[str] = "exp_power"

    def __post_init__(self):
        object.__setattr__(self, "alpha", _positive_param("alpha", self.alpha))
        object.__setattr__(self, "beta", _positive_param("beta", self.beta))

    def log_inv(self, j: int) -> float:
        if j == 1:
            return 0.0
        p = _sat_pow(_sat_float(j), self.beta)
        if math.isinf(p):
            return math.inf
        return self.alpha * (p - 1.0)

    def log_inv_many(self, js: np.ndarray) -> np.ndarray:
        a = np.asarray(js, dtype=float)
        with np.errstate(over="ignore"):
            return self.alpha * (np.power(a, self.beta) - 1.0)

    def threshold_hint(self, budget: float) -> int | None:
        x = budget / self.alpha + 1.0
        cand = _sat_pow(x, 1.0 / self.beta)
        if math.isinf(cand):
            return None
        return max(1, int(cand))

    def threshold_growth(self) -> Growth:
        return Growth(math.pow(self.alpha, -1.0 / self.beta), p=1.0 / self.beta)

    def log_threshold_growth(self) -> Growth:
        return Growth(1.0 / self.beta, q=1.0)

    def ratio_class(self, s: float) -> RatioClass:
        return DIVERGES

    def _geometric_tail(self) -> bool:
        return self.beta >= 1.0

    def _tail_exponent(self, c: float, J: int) -> float | None:
        # log_inv(j)/log(j) is unimodal with a dip near exp(1/beta); take the
        # minimum over that dip and J to lower-bound the exponent on [J, inf).
        def u(j: int) -> float:
            return self.log_inv(j) / math.log(j)

        cands = {max(2, J)}
        dip = _sat_exp(1.0 / self.beta)
        if math.isfinite(dip) and dip < 2**40:
            base = int(dip)
            cands.update(x for x in (base, base + 1) if x >= max(2, J))
        return c * min(u(x) for x in cands)


@dataclass(frozen=True)
class DoubleExpPower(_FamilyBase):
    """x_j = exp(-(exp(alpha * j**beta) - exp(alpha))); normalized so x_1 = 1."""

    alpha: float
    beta: float
    name: ClassVar[str] = "double_exp_power"

    def __post_init__(self):
        object.__setattr__(self, "alpha", _positive_param("alpha", self.alpha))
        object.__setattr__(self, "beta", _positive_param("beta", self.beta))

    def log_inv(self, j: int) -> float:
        if j == 1:
            return 0.0
        t = _sat_exp(self.alpha * _sat_pow(_sat_float(j), self.beta))
        if math.isinf(t):
            return math.inf
        return t - _sat_exp(self.alpha)

    def log_inv_many(self, js: np.ndarray) -> np.ndarray:
        a = np.asarray(js, dtype=float)
        with np.errstate(over="ignore"):
            t = np.exp(self.alpha * np.power(a, self.beta))
            out = t - math.exp(min(self.alpha, _LOG_MAX))
            out = np.where(np.isinf(t), np.inf, out)
        out = np.where(a == 1.0, 0.0, out)
        return out

    def threshold_hint(self, budget: float) -> int | None:
        base = _sat_exp(self.alpha)
        if math.isinf(base):
            return 1
        y = budget + base
        if math.isinf(y):
            return None
        cand = _sat_pow(math.log(y) / self.alpha, 1.0 / self.beta)
        if math.isinf(cand):
            return None
        return max(1, int(cand))

    def threshold_growth(self) -> Growth:
        return Growth(math.pow(self.alpha, -1.0 / self.beta), q=1.0 / self.beta)

    def log_threshold_growth(self) -> Growth:
        return Growth(1.0 / self.beta, r=1.0)

    def ratio_class(self, s: float) -> RatioClass:
        return DIVERGES

    def _geometric_tail(self) -> bool:
        return True


@dataclass(frozen=True)
class TripleExp(_FamilyBase):
    """x_j = exp(-(exp(exp(alpha * j)) - exp(exp(alpha)))); normalized so x_1 = 1."""

    alpha: float
    name: ClassVar[str] = "triple_exp"

    def __post_init__(self):
        object.__setattr__(self, "alpha", _positive_param("alpha", self.alpha))

    def log_inv(self, j: int) -> float:
        if j == 1:
            return 0.0
        t = _sat_exp(_sat_exp(self.alpha * _sat_float(j)))
        if math.isinf(t):
            return math.inf
        return t - _sat_exp(_sat_exp(self.alpha))

    def log_inv_many(self, js: np.ndarray) -> np.ndarray:
        a = np.asarray(js, dtype=float)
        with np.errstate(over="ignore"):
            t = np.exp(np.exp(self.alpha * a))
            base = _sat_exp(_sat_exp(self.alpha))
            out = np.where(np.isinf(t), np.inf, t - min(base, sys.float_info.max))
        out = np.where(a == 1.0, 0.0, out)
        return out

    def threshold_hint(self, budget: float) -> int | None:
        base = _sat_exp(_sat_exp(self.alpha))
        if math.isinf(base):
            return 1
        y = budget + base
        if math.isinf(y):
            return None
        return max(1, int(math.log(math.log(y)) / self.alpha))

    def threshold_growth(self) -> Growth:
        return Growth(1.0 / self.alpha, r=1.0)

    def log_threshold_growth(self) -> Growth:
        return Growth(1.0, u=1.0)

    def ratio_class(self, s: float) -> RatioClass:
        return DIVERGES

    def _geometric_tail(self) -> bool:
        return True


@dataclass(frozen=True)
class LogPower(_FamilyBase):
    """x_j = exp(-(log j)**beta) for beta > 1; x_1 = 1 automatically."""

    beta: float
    name: ClassVar[str] = "log_power"

    def __post_init__(self):
        b = _positive_param("beta", self.beta)
        if b <= 1.0:
            raise SequenceError(f"beta must exceed 1, got {self.beta!r}")
        object.__setattr__(self, "beta", b)

    def log_inv(self, j: int) -> float:
        if j == 1:
            return 0.0
        return _sat_pow(math.log(j), self.beta)

    def log_inv_many(self, js: np.ndarray) -> np.ndarray:
        a = np.asarray(js, dtype=float)
        with np.errstate(over="ignore", divide="ignore"):
            out = np.power(np.log(a), self.beta)
        return np.where(a == 1.0, 0.0, out)

    def threshold_hint(self, budget: float) -> int | None:
        x = _sat_pow(budget, 1.0 / self.beta)
        if x >= _LOG_MAX:
            return None
        return max(1, int(math.exp(x)))

    def threshold_growth(self):
        return SUPER_POLYNOMIAL

    def log_threshold_growth(self) -> Growth:
        return Growth(1.0, p=1.0 / self.beta)

    def ratio_class(self, s: float) -> RatioClass:
        sb = s * self.beta
        if sb > 1.0:
            return DIVERGES
        if sb == 1.0:
            return RatioClass("bounded", 1.0)
        return RatioClass("bounded", 0.0)

    def _tail_exponent(self, c: float, J: int) -> float:
        return c * math.pow(math.log(max(J, 2)), self.beta - 1.0)


_ITERLOG_DEFAULT_PREFIX = (0.0, -math.log(0.95))


@dataclass(frozen=True)
class IterLog(_FamilyBase):
    """x_j = j**(-loglog j) beyond a tabulated prefix (default prefix: 1, 0.95).

    The tail formula is undefined below j = 3, so the prefix must cover at
    least the first two indices.
    """

    prefix: tuple = _ITERLOG_DEFAULT_PREFIX
    name: ClassVar[str] = "iter_log"

    def __post_init__(self):
        pref = tuple(float(v) for v in self.prefix)
        if len(pref) < 2:
            raise SequenceError("prefix must cover at least indices 1 and 2")
        _validate_table(pref, allow_inf=False)
        tail_start = len(pref) + 1
        lj = math.log(tail_start)
        if pref[-1] > math.log(lj) * lj:
            raise SequenceError("prefix must not exceed the tail value at its junction")
        object.__setattr__(self, "prefix", pref)

    def log_inv(self, j: int) -> float:
        if j <= len(self.prefix):
            return self.prefix[j - 1]
        lj = math.log(j)
        return math.log(lj) * lj

    def threshold_hint(self, budget: float) -> int | None:
        # Solve u * log(u) = budget for u = log(j) by Newton iteration.
        if budget <= 1.0:
            return 1
        u = max(2.0, budget / max(math.log(budget), 1.0))
        for _ in range(80):
            f = u * math.log(u) - budget
            u_next = u - f / (math.log(u) + 1.0)
            if u_next < 1.5:
                u_next = 1.5
            if abs(u_next - u) <= 1e-12 * u:
                u = u_next
                break
            u = u_next
        if u >= _LOG_MAX:
            return None
        return max(1, int(math.exp(u)))

    def threshold_growth(self):
        return SUPER_POLYNOMIAL

    def log_threshold_growth(self) -> Growth:
        return Growth(1.0, p=1.0, q=-1.0)

    def ratio_class(self, s: float) -> RatioClass:
        if s >= 1.0:
            return DIVERGES
        return RatioClass("bounded", 0.0)

    def _tail_exponent(self, c: float, J: int) -> float:
        return c * math.log(math.log(max(J, 3)))


@dataclass(frozen=True)
class Tabulated(_FamilyBase):
    """Finite table of log(1/x_j) values; x_j = 0 beyond the table end.

    The zero tail makes every tabulated sequence compact and gives exact
    threshold lookups by bisection.
    """

    values: tuple
    name: ClassVar[str] = "tabulated"

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        if not vals:
            raise SequenceError("table must be non-empty")
        _validate_table(vals, allow_inf=True)
        object.__setattr__(self, "values", vals)

    @property
    def effective_len(self) -> int:
        """Number of leading finite entries (positive underlying values)."""
        for i, v in enumerate(self.values):
            if math.isinf(v):
                return i
        return len(self.values)

    def log_inv(self, j: int) -> float:
        if j <= len(self.values):
            return self.values[j - 1]
        return math.inf

    def log_inv_many(self, js: np.ndarray) -> np.ndarray:
        a = np.asarray(js)
        table = np.asarray(self.values, dtype=float)
        idx = np.minimum(a.astype(np.int64), len(table)) - 1
        out = table[idx]
        return np.where(a > len(table), np.inf, out)

    def threshold_exact(self, budget: float) -> int:
        return bisect_left(self.values, budget)

    def threshold_growth(self) -> Growth:
        return Growth(float(max(self.effective_len, 1)))

    def log_threshold_growth(self) -> Growth:
        return Growth(math.log(self.effective_len) if self.effective_len >= 2 else 0.0)

    def ratio_class(self, s: float) -> RatioClass:
        return DIVERGES

    def summable(self, c: float) -> bool:
        return True

    def tail_bound(self, c: float, J: int) -> float:
        if J >= len(self.values):
            return 0.0
        return float(np.exp(-c * np.asarray(self.values[J:], dtype=float)).sum())


@dataclass(frozen=True)
class ConstantOne(_FamilyBase):
    """x_j = 1 for every j (the un-moderated weight sequence)."""

    name: ClassVar[str] = "constant_one"
    limit_zero: ClassVar[bool] = False
    all_ones: ClassVar[bool] = True
    compact: ClassVar[bool] = False

    def log_inv(self, j: int) -> float:
        return 0.0

    def log_inv_many(self, js: np.ndarray) -> np.ndarray:
        return np.zeros(len(js), dtype=float)

    def ratio_class(self, s: float) -> RatioClass:
        return RatioClass("bounded", 0.0)

    def summable(self, c: float) -> bool:
        return False


@dataclass(frozen=True)
class EventuallyZero(_FamilyBase):
    """Weights with a hard zero tail: x_k from the prefix for k < j_star, else 0."""

    j_star: int
    prefix: tuple
    name: ClassVar[str] = "eventually_zero"

    def __post_init__(self):
        if isinstance(self.j_star, bool) or not isinstance(self.j_star, int) or self.j_star < 1:
            raise SequenceError(f"j_star must be a positive integer, got {self.j_star!r}")
        pref = tuple(float(v) for v in self.prefix)
        if len(pref) != self.j_star - 1:
            raise SequenceError("prefix length must be j_star - 1")
        if pref:
            _validate_table(pref, allow_inf=False)
        object.__setattr__(self, "prefix", pref)

    def log_inv(self, j: int) -> float:
        if j < self.j_star:
            return self.prefix[j - 1]
        return math.inf

    def log_inv_many(self, js: np.ndarray) -> np.ndarray:
        a = np.asarray(js)
        table = np.asarray(self.prefix + (np.inf,), dtype=float)
        idx = np.minimum(a.astype(np.int64), len(table)) - 1
        return table[idx]

    def threshold_exact(self, budget: float) -> int:
        return bisect_left(self.prefix, budget)

    def threshold_growth(self) -> Growth | None:
        if self.j_star < 2:
            return None
        return Growth(float(self.j_star - 1))

    def ratio_class(self, s: float) -> RatioClass:
        return DIVERGES

    def summable(self, c: float) -> bool:
        return True

    def tail_bound(self, c: float, J: int) -> float:
        if J >= len(self.prefix):
            return 0.0
        return float(np.exp(-c * np.asarray(self.prefix[J:], dtype=float)).sum())


def _validate_table(values: tuple, *, allow_inf: bool) -> None:
    prev = -math.inf
    for i, v in enumerate(values):
        if math.isnan(v) or v < 0.0:
            raise SequenceError(f"table entry {i + 1} must be >= 0, got {v!r}")
        if not allow_inf and math.isinf(v):
            raise SequenceError(f"table entry {i + 1} must be finite")
        if v < prev:
            raise SequenceError(
                f"table must be non-decreasing in log(1/x); entry {i + 1} = {v!r} "
                f"drops below {prev!r}")
        prev = v


_FAMILY_TYPES = {
    cls.name: cls
    for cls in (PowerLaw, ExpPower, DoubleExpPower, TripleExp, LogPower,
                IterLog, Tabulated, ConstantOne, EventuallyZero)
}

_WEIGHT_ONLY = (ConstantOne, EventuallyZero)


def family_from_descriptor(desc: dict):
    """Rebuild a family from its descriptor dict ({"family": name, **params})."""
    if not isinstance(desc, dict) or "family" not in desc:
        raise SequenceError(f"family descriptor must be a dict with a 'family' key, got {desc!r}")
    kind = desc["family"]
    cls = _FAMILY_TYPES.get(kind)
    if cls is None:
        raise SequenceError(f"unknown family {kind!r}; expected one of {sorted(_FAMILY_TYPES)}")
    kwargs = {}
    for f in fields(cls):
        if f.name in desc:
            v = desc[f.name]
            kwargs[f.name] = tuple(v) if isinstance(v, list) else v
    extra = set(desc) - {"family"} - {f.name for f in fields(cls)}
    if extra:
        raise SequenceError(f"unknown parameters {sorted(extra)} for family {kind!r}")
    try:
        return cls(**kwargs)
    except TypeError as exc:
        raise SequenceError(f"bad parameters for family {kind!r}: {exc}") from None


class _SeqView:
    """Common behaviour of the eigenvalue and weight wrappers."""

    family: object

    def log_inv(self, j: int) -> float:
        _check_index(j)
        return self.family.log_inv(j)

    @property
    def limit_zero(self) -> bool:
        return self.family.limit_zero

    @property
    def compact(self) -> bool:
        return self.family.compact

    def ratio_class(self, s: float) -> RatioClass | None:
        return self.family.ratio_class(s)

    def descriptor(self) -> dict:
        return self.family.descriptor()


@dataclass(frozen=True)
class EigenSeq(_SeqView):
    """Non-increasing squared singular values in log(1/x) form.

    The closed-form families are normalized so the first value is exactly 1;
    tabulated data may be un-normalized (log_inv(1) > 0) but the second value
    must stay positive.
    """

    family: object

    def __post_init__(self):
        if isinstance(self.family, _WEIGHT_ONLY):
            raise SequenceError(
                f"family {self.family.name!r} is weight-only and cannot serve as eigenvalues")
        if not isinstance(self.family, _FamilyBase):
            raise SequenceError(f"not a sequence family: {self.family!r}")
        if math.isinf(self.family.log_inv(2)):
            raise SequenceError("the second eigenvalue must be positive")

    def L(self, j: int) -> float:
        """log(1/lambda_j) as a raw float (saturated to +inf)."""
        return self.log_inv(j)


@dataclass(frozen=True)
class WeightSeq(_SeqView):
    """Non-increasing product weights in log(1/x) form (all values <= 1)."""

    family: object

    def __post_init__(self):
        if not isinstance(self.family, _FamilyBase):
            raise SequenceError(f"not a sequence family: {self.family!r}")

    def G(self, k: int) -> float:
        """log(1/gamma_k) as a raw float (+inf for zero weights)."""
        return self.log_inv(k)

    @property
    def all_ones(self) -> bool:
        return self.family.all_ones


def eval_L(seq: EigenSeq, j: int) -> ExtLogMag:
    """log(1/lambda_j) with index validation; +inf when lambda_j = 0."""
    return ExtLogMag(seq.L(j))


def eval_G(seq: WeightSeq, k: int) -> ExtLogMag:
    """log(1/gamma_k) with index validation; +inf for zero weights."""
    return ExtLogMag(seq.G(k))


def load_log_table(path) -> tuple:
    """Read a two-column text table "index log_inv_value" with '#' comments.

    Indices must run consecutively from 1; values must be non-decreasing
    and nonnegative ('inf' marks zeros).
    """
    values = []
    expected = 1
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise SequenceError(f"{path}:{lineno}: expected 'index value', got {raw!r}")
            try:
                idx = int(parts[0])
                val = float(parts[1])
            except ValueError:
                raise SequenceError(f"{path}:{lineno}: unparsable entry {raw!r}") from None
            if idx != expected:
                raise SequenceError(f"{path}:{lineno}: index {idx} out of order (expected {expected})")
            values.append(val)
            expected += 1
    vals = tuple(values)
    _validate_table(vals, allow_inf=True)
    return vals


def dump_log_table(values, path) -> None:
    """Write a table read back bit-identically by load_log_table."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("# index log_inv_value\n")
        for i, v in enumerate(values, start=1):
            fh.write(f"{i} {float(v)!r}\n")
