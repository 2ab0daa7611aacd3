"""Deterministic expansion parameters of a start-destination pair.

All quantities are read off a :class:`~bidiexp.search.LayerCostProfile`.
Step indices are 1-based throughout, as in the cost definitions: step ``i``
from ``s`` costs ``cs[i - 1]``.

Two comparisons are done carefully because landmark steps flip on them:

* budget tests ``cost <= m**alpha`` run in log space with a relative slack
  of ``REL_EPS`` so that an alpha produced by :func:`alpha_breakpoints`
  satisfies its own defining inequality;
* expansion tests ``c(k+1) >= b * c(k)`` are exact, with ``b`` held as a
  :class:`~fractions.Fraction`.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import asdict, dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

import numpy as np

from .search import LayerCostProfile

REL_EPS = 1e-12

MIN_EXPONENT = "min_exponent"
MIN_RHO_GAP = "min_rho_gap"
OBJECTIVES = (MIN_EXPONENT, MIN_RHO_GAP)


class InfeasibleAlpha(ValueError):
    """Cheap landmarks are undefined for the requested alpha."""


class Classification(str, Enum):
    SUBLINEAR_GUARANTEED = "SUBLINEAR_GUARANTEED"
    NO_GUARANTEE = "NO_GUARANTEE"


@lru_cache(maxsize=256)
def as_fraction(b) -> Fraction:
    """Exact rational form of an expansion base; floats keep their decimal spelling."""
    if isinstance(b, Fraction):
        return b
    if isinstance(b, float):
        return Fraction(repr(b))
    return Fraction(b)


def fits_budget(cost: int, m: int, alpha: float) -> bool:
    """``cost <= m**alpha`` for a positive integer cost."""
    if cost <= 1:
        return cost <= 1
    if m <= 1:
        return False
    return math.log(cost) <= alpha * math.log(m) * (1.0 + REL_EPS)


def _check_alpha(alpha: float) -> None:
    if not 0.0 <= alpha < 1.0:
        raise ValueError(f"alpha must lie in [0, 1), got {alpha}")


def _log_base(x: float, b) -> float:
    b = float(b)
    if b <= 1.0:
        return math.nan
    return math.log(x) / math.log(b)


@lru_cache(maxsize=4096)
def budget_ceiling(m: int, alpha: float) -> int:
    """Largest integer cost that passes :func:`fits_budget` (at least 1)."""
    if m <= 1:
        return 1
    limit = alpha * math.log(m) * (1.0 + REL_EPS)
    c = max(1, int(math.exp(limit)))
    # exp/log round-trip can be off by one either way near integers
    while fits_budget(c + 1, m, alpha):
        c += 1
    while c > 1 and not fits_budget(c, m, alpha):
        c -= 1
    return c


def compute_cheap(profile: LayerCostProfile, alpha: float) -> tuple[int | None, int | None]:
    """Latest cheap prefix step from ``s`` and earliest cheap suffix step to ``t``.

    ``None`` marks an undefined landmark (first step already over budget).
    """
    _check_alpha(alpha)
    ceiling = budget_ceiling(profile.m, alpha)
    # running costs only grow, so the cheap steps form an initial run
    cheap_s = bisect_right(profile.prefix_costs, ceiling)
    cheap_t = profile.d + 1 - bisect_right(profile.suffix_costs, ceiling)
    return (cheap_s or None), (cheap_t if cheap_t <= profile.d else None)


def compute_expan(profile: LayerCostProfile, b) -> tuple[int, int]:
    """Ends of the longest b-expanding prefix from ``s`` and suffix towards ``t``."""
    memo = profile.expan_memo
    if b in memo:
        return memo[b]
    bf = as_fraction(b)
    num, den = bf.numerator, bf.denominator
    if num < den:
        raise ValueError(f"expansion base must be >= 1, got {b}")
    cs = profile.cs_list
    ct = profile.ct_list
    d = profile.d
    expan_s = 1
    while expan_s < d and cs[expan_s] * den >= num * cs[expan_s - 1]:
        expan_s += 1
    expan_t = d
    while expan_t > 1 and ct[expan_t - 2] * den >= num * ct[expan_t - 1]:
        expan_t -= 1
    memo[b] = expan_s, expan_t
    return expan_s, expan_t


def highest_expansion(profile: LayerCostProfile, b) -> float:
    """Largest single-step growth factor in either direction, at least ``b``."""
    return max(float(b), profile.max_growth)


def rho_max(alpha: float, b, b_plus: float) -> float:
    """Largest ratio for which sublinear cost is still guaranteed."""
    return (1.0 - alpha) / (1.0 - alpha + alpha * _log_base(b_plus, b))


def delta_rho(rho: float, rho_max_value: float) -> float:
    """``1/(1+rho) - 1/(1+rho_max)``; negative ratios count as 0."""
    return 1.0 / (1.0 + max(rho, 0.0)) - 1.0 / (1.0 + rho_max_value)


def theorem4_bound(b, c: float, m: int) -> float:
    """Cost ceiling for a pair whose expansion overlap has ``c * log_b(m)`` steps."""
    b = float(b)
    if b <= 1 or c <= 0 or m < 1:
        raise ValueError("need b > 1, c > 0, m >= 1")
    return 8.0 * _log_base(2 * m, b) * b * b / (b - 1.0) * m ** (1.0 - c / 2.0)


def thm5_exponents(c: float, alpha: float, b, b_plus: float) -> tuple[float, float]:
    """(theorem form ``1 - eps``, experimental form ``1 - eps/2``)."""
    eps = c * (1.0 - alpha) / (_log_base(b_plus, b) + c)
    return 1.0 - eps, 1.0 - eps / 2.0


@dataclass(frozen=True)
class ExpansionParams:
    alpha: float
    b: float
    b_plus: float
    d: int
    cheap_s: int
    cheap_t: int
    expan_s: int
    expan_t: int
    overlap: int
    d_alpha: int
    S1: int
    S2: int
    T1: int
    T2: int
    rho: float
    rho_max: float
    delta_rho: float
    covered: bool
    c_rel: float | None
    eps_thm5: float
    predicted_exponent_thm: float
    predicted_exponent_exp: float

    def to_json(self) -> dict:
        return asdict(self)


def compute_params(profile: LayerCostProfile, alpha: float, b, empty_cheap: bool = False) -> ExpansionParams:
    """Fill in every landmark, segment length and derived exponent for one (alpha, b).

    With ``empty_cheap`` an undefined cheap landmark is read as the empty
    prefix (``cheap_s = 0``) or suffix (``cheap_t = d + 1``) instead of
    raising :class:`InfeasibleAlpha`.

    When the cheap prefix and suffix already meet (``d_alpha <= 0``) the pair
    is flagged ``covered``; ``c_rel`` is then ``None`` and the exponents take
    their limits for unbounded ``c``.
    """
    d = profile.d
    cheap_s, cheap_t = compute_cheap(profile, alpha)
    if cheap_s is None or cheap_t is None:
        if not empty_cheap:
            raise InfeasibleAlpha(f"alpha={alpha} too small for this pair")
        cheap_s = cheap_s or 0
        cheap_t = cheap_t or d + 1
    expan_s, expan_t = compute_expan(profile, b)
    b_plus = highest_expansion(profile, b)

    S1 = expan_s
    S2 = cheap_t - expan_s - 1
    T1 = d - expan_t + 1
    T2 = expan_t - cheap_s - 1
    rho = max(S2, T2) / min(S1, T1)
    r_max = rho_max(alpha, b, b_plus)
    overlap = expan_s - expan_t + 1
    d_alpha = cheap_t - cheap_s - 1

    covered = d_alpha <= 0
    if covered:
        c_rel = None
        eps = 1.0 - alpha
        exp_thm, exp_exp = alpha, 1.0 - eps / 2.0
    else:
        c_rel = overlap / d_alpha
        exp_thm, exp_exp = thm5_exponents(max(c_rel, 0.0), alpha, b, b_plus)
        eps = 1.0 - exp_thm
    return ExpansionParams(
        alpha=float(alpha),
        b=float(b),
        b_plus=b_plus,
        d=d,
        cheap_s=cheap_s,
        cheap_t=cheap_t,
        expan_s=expan_s,
        expan_t=expan_t,
        overlap=overlap,
        d_alpha=d_alpha,
        S1=S1,
        S2=S2,
        T1=T1,
        T2=T2,
        rho=rho,
        rho_max=r_max,
        delta_rho=delta_rho(rho, r_max),
        covered=covered,
        c_rel=c_rel,
        eps_thm5=eps,
        predicted_exponent_thm=exp_thm,
        predicted_exponent_exp=exp_exp,
    )


def predicted_exponent_thm5(params: ExpansionParams) -> dict[str, float]:
    """Both published forms of the relative-overlap exponent for a pair."""
    if params.c_rel is None or params.c_rel <= 0:
        raise ValueError("exponent needs a positive relative overlap c_rel")
    thm, exp = thm5_exponents(params.c_rel, params.alpha, params.b, params.b_plus)
    return {"theorem": thm, "experimental": exp}


def corollary6_exponent(deg_s: int, deg_t: int, m: int, c: float, b, b_plus: float) -> float:
    """Exponent bound when the cheap regions come from the endpoint degrees."""
    if deg_t > deg_s:
        raise ValueError("expects deg(t) <= deg(s); swap the pair")
    if deg_s > m or deg_s < 1:
        raise ValueError(f"degree {deg_s} impossible with m={m}")
    if not 0 < c <= 1:
        raise ValueError("c must lie in (0, 1]")
    delta = math.log(deg_s) / math.log(m) if m > 1 else 0.0
    return 1.0 - c * (1.0 - delta) / (_log_base(b_plus, b) + c)


def alpha_breakpoints(profile: LayerCostProfile) -> list[float]:
    """Every alpha in [0, 1) at which a cheap landmark moves."""
    sums = set(np.cumsum(profile.cs).tolist()) | set(np.cumsum(profile.ct[::-1]).tolist())
    m = profile.m
    if m <= 1:
        return [0.0] if 1 in sums else []
    log_m = math.log(m)
    values = {math.log(x) / log_m for x in sums}
    return sorted(v for v in values if 0.0 <= v < 1.0)


def optimize_alpha(
    profile: LayerCostProfile,
    b,
    objective: str = MIN_EXPONENT,
    alpha_cap: float | None = None,
    candidates: Iterable[float] | None = None,
    empty_cheap: bool = False,
) -> tuple[float, ExpansionParams]:
    """Pick the alpha minimising ``objective`` over the pair's breakpoints.

    ``min_exponent`` minimises the predicted exponent; ``min_rho_gap``
    minimises ``rho - rho_max``, i.e. the alpha under which the pair sits
    deepest inside the sublinear regime.  Ties go to the smallest alpha.
    """
    if objective not in OBJECTIVES:
        raise ValueError(f"unknown objective {objective!r}; expected one of {OBJECTIVES}")
    alphas = alpha_breakpoints(profile) if candidates is None else sorted(set(candidates))
    if alpha_cap is not None:
        alphas = [a for a in alphas if a <= alpha_cap]
    best: tuple[float, ExpansionParams] | None = None
    best_score = math.inf
    for a in alphas:
        try:
            params = compute_params(profile, a, b, empty_cheap=empty_cheap)
        except InfeasibleAlpha:
            continue
        if objective == MIN_EXPONENT:
            score = params.predicted_exponent_exp
        else:
            score = params.rho - params.rho_max
        if best is None or score < best_score:
            best, best_score = (a, params), score
    if best is None:
        raise InfeasibleAlpha("no alpha candidate defines both cheap landmarks")
    return best


def dichotomy_classify(params: ExpansionParams) -> Classification:
    if params.rho < params.rho_max:
        return Classification.SUBLINEAR_GUARANTEED
    return Classification.NO_GUARANTEE


# Invariant checks. Each returns True when the stated bound holds for the pair.


def check_distance_bound(profile: LayerCostProfile, b) -> bool:
    """Expanding prefix/suffix of length L forces ``b**L <= 2m``.

    With ``c = L / d`` this is ``d <= log_b(2m) / c``; checked exactly.
    """
    bf = as_fraction(b)
    num, den = bf.numerator, bf.denominator
    expan_s, expan_t = compute_expan(profile, b)
    two_m = 2 * profile.m
    return all(num**L <= two_m * den**L for L in (expan_s, profile.d - expan_t + 1))


def check_distance_bound_shifted(profile: LayerCostProfile, b) -> bool:
    """The bound that the growth argument actually yields: ``b**(L-1) <= 2m``.

    Step ``L`` of a b-expanding run from a root of degree >= 1 costs at least
    ``b**(L-1)``, and no step costs more than ``2m``.
    """
    bf = as_fraction(b)
    num, den = bf.numerator, bf.denominator
    expan_s, expan_t = compute_expan(profile, b)
    two_m = 2 * profile.m
    return all(num ** (L - 1) <= two_m * den ** (L - 1) for L in (expan_s, profile.d - expan_t + 1))


def check_last_step_fraction(profile: LayerCostProfile, b) -> bool:
    """Along any b-expanding prefix the last step carries >= (b-1)/b of the cost."""
    bf = as_fraction(b)
    num, den = bf.numerator, bf.denominator
    expan_s, expan_t = compute_expan(profile, b)
    # last/total >= (b-1)/b  <=>  last * num >= (num - den) * total
    for seq in (profile.cs_list[:expan_s], profile.ct_list[expan_t - 1 :][::-1]):
        total = 0
        for last in seq:
            total += last
            if last * num < (num - den) * total:
                return False
    return True


def check_cheap_length(profile: LayerCostProfile, alpha: float, b) -> bool:
    """An expanding cheap prefix (suffix) has at most ``log_b(m**alpha) + 1`` steps."""
    cheap_s, cheap_t = compute_cheap(profile, alpha)
    expan_s, expan_t = compute_expan(profile, b)
    limit = alpha * math.log(profile.m) / math.log(float(b)) + 1.0 if profile.m > 1 else 1.0
    limit *= 1.0 + REL_EPS
    ok = True
    if cheap_s is not None and cheap_s <= expan_s:
        ok &= cheap_s <= limit
    if cheap_t is not None and cheap_t >= expan_t:
        ok &= profile.d - cheap_t + 1 <= limit
    return ok
