"""Beta approximation of W = Y1/(Y1+Y2) and the envelope-bound machinery.

The approximating law for W depends on the second numerator df only:
Beta((m2+0.5)/2, m2/2).  The joint density of (U, W) = (Y1+Y2, W) can be
sandwiched between products of a u-envelope and a w-envelope density,
scaled by closed-form constants.  Everything here is evaluated in log
space; certificates measure the bounds on grids instead of assuming them.

A note on validity: integrating the upper bound over the whole domain
shows the upper constant is always >= 1, and the lower constant always
<= 1.  Pointwise `w_envelope <= marginal` can therefore not hold
everywhere (both integrate to 1); `certify_bounds` reports both the
plain and the constant-scaled form of the marginal sandwich.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import quad

from .dist import BetaShape
from .errors import DomainError, NumericError, RegimeError
from .specfun import ln_beta, reg_inc_beta

__all__ = [
    "RatioSetting",
    "BoundConstants",
    "approx_shape",
    "w_envelope_density",
    "u_envelope_upper_density",
    "u_envelope_lower_density",
    "joint_density",
    "upper_constant",
    "lower_constant",
    "bound_constants",
    "marginal_w_density",
    "joint_total_mass",
    "tv_bound",
    "certify_bounds",
    "default_w_grid",
    "CERTIFICATE_SETTINGS",
]

# canonical settings exercised by the certificate suite
CERTIFICATE_SETTINGS = (
    (3.0, 2.0, 50.0, 50.0),
    (2.5, 2.0, 50.0, 50.0),
    (11.0, 10.0, 150.0, 150.0),
    (6.0, 5.0, 50.0, 50.0),
    (30.0, 25.0, 50.0, 50.0),
)


def _positive(name, value) -> float:
    v = float(value)
    if not np.isfinite(v) or v <= 0.0:
        raise DomainError(f"{name} must be strictly positive and finite, got {value!r}")
    return v


@dataclass(frozen=True)
class RatioSetting:
    """Degrees of freedom (m1, nu1) and (m2, nu2) of the two F variates."""

    m1: float
    m2: float
    nu1: float
    nu2: float

    def __post_init__(self):
        for name in ("m1", "m2", "nu1", "nu2"):
            object.__setattr__(self, name, _positive(name, getattr(self, name)))

    def bound_regime_violations(self) -> list[str]:
        """Conditions of the envelope-bound regime that fail, if any."""
        bad = []
        if not self.m1 - self.m2 > self.nu2 - self.nu1:
            bad.append("m1 - m2 > nu2 - nu1")
        if not self.m1 / self.nu1 >= self.m2 / self.nu2:
            bad.append("m1/nu1 >= m2/nu2")
        if not self.m1 - self.m2 + 2.0 * self.nu1 > 0:
            bad.append("m1 - m2 + 2*nu1 > 0")
        if not self.nu2 > self.m1:
            bad.append("nu2 > m1")
        return bad

    def in_bound_regime(self) -> bool:
        return not self.bound_regime_violations()

    def require_bound_regime(self):
        bad = self.bound_regime_violations()
        if bad:
            raise RegimeError(
                f"setting {self} violates the bound regime: {', '.join(bad)}"
            )

    def in_approx_regime(self) -> bool:
        """Shared denominator df with nu > m1 >= m2 (approximation regime)."""
        return self.nu1 == self.nu2 and self.nu1 > self.m1 >= self.m2


@dataclass(frozen=True)
class BoundConstants:
    """Scale constants of the upper/lower envelope products."""

    a1: float
    a2: float

    def __post_init__(self):
        if not (np.isfinite(self.a1) and np.isfinite(self.a2)):
            raise DomainError("bound constants must be finite")


def approx_shape(m2) -> BetaShape:
    """Shape of the approximating Beta law; depends on m2 only."""
    m2 = _positive("m2", m2)
    return BetaShape((m2 + 0.5) / 2.0, m2 / 2.0)


def _log_w_envelope(w, m1, m2):
    return (
        (0.5 * m1 - 1.0) * np.log(w)
        + (0.5 * m2 - 1.0) * np.log1p(-w)
        - ln_beta(0.5 * m1, 0.5 * m2)
    )


def w_envelope_density(w, m1, m2):
    """Beta(m1/2, m2/2) density: the w-factor of both envelope products."""
    m1 = _positive("m1", m1)
    m2 = _positive("m2", m2)
    arr = np.asarray(w, dtype=float)
    if np.any(arr <= 0.0) or np.any(arr >= 1.0):
        raise DomainError("w must lie strictly inside (0, 1)")
    out = np.exp(_log_w_envelope(arr, m1, m2))
    return float(out) if out.ndim == 0 else out


def _upper_beta_args(s: RatioSetting):
    return 0.5 * (s.m1 + s.m2), 0.5 * (s.nu2 - s.m1)


def _lower_beta_args(s: RatioSetting):
    return 0.5 * (s.m1 + s.m2), 0.5 * (s.m1 - s.m2 + 2.0 * s.nu1)


def _require_upper_args(s: RatioSetting):
    if s.nu2 <= s.m1:
        raise RegimeError(f"upper envelope needs nu2 > m1, got {s}")


def _require_lower_args(s: RatioSetting):
    if s.m1 - s.m2 + 2.0 * s.nu1 <= 0:
        raise RegimeError(f"lower envelope needs m1 - m2 + 2*nu1 > 0, got {s}")


def _log_u_upper(u, s: RatioSetting):
    t1, t2 = _upper_beta_args(s)
    return (
        t1 * np.log(s.m2 / s.nu2)
        + (t1 - 1.0) * np.log(u)
        - 0.5 * (s.m2 + s.nu2) * np.log1p(s.m2 * u / s.nu2)
        - ln_beta(t1, t2)
    )


def _log_u_lower(u, s: RatioSetting):
    t1, t2 = _lower_beta_args(s)
    return (
        t1 * np.log(s.m1 / (2.0 * s.nu1))
        + (t1 - 1.0) * np.log(u)
        - (s.m1 + s.nu1) * np.log1p(s.m1 * u / (2.0 * s.nu1))
        - ln_beta(t1, t2)
    )


def u_envelope_upper_density(u, s: RatioSetting):
    """u-factor of the upper envelope product; integrates to 1 on (0, inf)."""
    _require_upper_args(s)
    arr = np.asarray(u, dtype=float)
    if np.any(arr <= 0.0):
        raise DomainError("u must be strictly positive")
    out = np.exp(_log_u_upper(arr, s))
    return float(out) if out.ndim == 0 else out


def u_envelope_lower_density(u, s: RatioSetting):
    """u-factor of the lower envelope product; integrates to 1 on (0, inf)."""
    _require_lower_args(s)
    arr = np.asarray(u, dtype=float)
    if np.any(arr <= 0.0):
        raise DomainError("u must be strictly positive")
    out = np.exp(_log_u_lower(arr, s))
    return float(out) if out.ndim == 0 else out


def _log_k0(s: RatioSetting):
    return (
        0.5 * s.m1 * math.log(s.m1 / s.nu1)
        + 0.5 * s.m2 * math.log(s.m2 / s.nu2)
        - ln_beta(0.5 * s.m1, 0.5 * s.nu1)
        - ln_beta(0.5 * s.m2, 0.5 * s.nu2)
    )


def _log_joint(u, w, s: RatioSetting):
    return (
        _log_k0(s)
        + (0.5 * (s.m1 + s.m2) - 1.0) * np.log(u)
        + (0.5 * s.m1 - 1.0) * np.log(w)
        + (0.5 * s.m2 - 1.0) * np.log1p(-w)
        - 0.5 * (s.m1 + s.nu1) * np.log1p(s.m1 * u * w / s.nu1)
        - 0.5 * (s.m2 + s.nu2) * np.log1p(s.m2 * u * (1.0 - w) / s.nu2)
    )


def joint_density(u, w, s: RatioSetting):
    """Joint density of (U, W) = (Y1+Y2, Y1/(Y1+Y2)) from the Jacobian map."""
    uu = np.asarray(u, dtype=float)
    ww = np.asarray(w, dtype=float)
    if np.any(uu <= 0.0):
        raise DomainError("u must be strictly positive")
    if np.any(ww <= 0.0) or np.any(ww >= 1.0):
        raise DomainError("w must lie strictly inside (0, 1)")
    out = np.exp(_log_joint(uu, ww, s))
    return float(out) if out.ndim == 0 else out


def _log_upper_constant(s: RatioSetting):
    t1, t2 = _upper_beta_args(s)
    return (
        0.5 * s.m1 * math.log(s.m1 * s.nu2 / (s.m2 * s.nu1))
        + ln_beta(t1, t2)
        + ln_beta(0.5 * s.m1, 0.5 * s.m2)
        - ln_beta(0.5 * s.m1, 0.5 * s.nu1)
        - ln_beta(0.5 * s.m2, 0.5 * s.nu2)
    )


def _log_lower_constant(s: RatioSetting):
    t1, t2 = _lower_beta_args(s)
    return (
        t1 * math.log(2.0)
        + 0.5 * s.m2 * math.log(s.m2 * s.nu1 / (s.m1 * s.nu2))
        + ln_beta(t1, t2)
        + ln_beta(0.5 * s.m1, 0.5 * s.m2)
        - ln_beta(0.5 * s.m1, 0.5 * s.nu1)
        - ln_beta(0.5 * s.m2, 0.5 * s.nu2)
    )


def upper_constant(s: RatioSetting, check_regime: bool = True) -> float:
    """Closed-form constant scaling the upper envelope product."""
    if check_regime:
        s.require_bound_regime()
    else:
        _require_upper_args(s)
    return math.exp(_log_upper_constant(s))


def lower_constant(s: RatioSetting, check_regime: bool = True) -> float:
    """Closed-form constant scaling the lower envelope product."""
    if check_regime:
        s.require_bound_regime()
    else:
        _require_lower_args(s)
    return math.exp(_log_lower_constant(s))


def bound_constants(s: RatioSetting, check_regime: bool = True) -> BoundConstants:
    return BoundConstants(
        upper_constant(s, check_regime), lower_constant(s, check_regime)
    )


@lru_cache(maxsize=64)
def _u_tail_cutoff_cached(m1, m2, nu1, nu2, tail):
    s = RatioSetting(m1, m2, nu1, nu2)
    t1, t2 = _upper_beta_args(s)

    def tail_mass(u):
        x = s.m2 * u / s.nu2
        return 1.0 - reg_inc_beta(x / (1.0 + x), t1, t2)

    lo, hi = 1.0, 2.0
    while tail_mass(hi) > tail:
        hi *= 2.0
        if hi > 1e12:
            raise NumericError("could not bracket the u tail cutoff", setting=str(s))
    for _ in range(200):
        mid = math.sqrt(lo * hi)
        if tail_mass(mid) > tail:
            lo = mid
        else:
            hi = mid
        if hi / lo < 1.0 + 1e-6:
            break
    return hi


def u_tail_cutoff(s: RatioSetting, tail: float = 1e-12) -> float:
    """u beyond which the upper u-envelope holds less than `tail` mass."""
    _require_upper_args(s)
    return _u_tail_cutoff_cached(s.m1, s.m2, s.nu1, s.nu2, float(tail))


def marginal_w_density(w, s: RatioSetting, quad_nodes: int = 200) -> float:
    """Exact marginal density of W at w, by adaptive quadrature over u.

    The integration is cut at a point where the analytic envelope tail
    holds less than 1e-12 of the upper-bound mass.
    """
    if quad_nodes < 64:
        raise DomainError("quad_nodes must be at least 64")
    w = float(w)
    if not 0.0 < w < 1.0:
        raise DomainError("w must lie strictly inside (0, 1)")
    cutoff = u_tail_cutoff(s, 1e-12) if s.nu2 > s.m1 else _fallback_cutoff(s)
    res = quad(
        lambda u: math.exp(_log_joint(u, w, s)),
        0.0,
        cutoff,
        limit=int(quad_nodes),
        epsabs=1e-13,
        epsrel=1e-11,
        full_output=1,
    )
    if len(res) > 3:
        raise NumericError(
            f"marginal quadrature did not converge at w={w}: {res[3]}",
            w=w,
            setting=str(s),
            abserr=float(res[1]),
            subintervals=int(res[2].get("last", -1)),
        )
    return float(res[0])


def _fallback_cutoff(s: RatioSetting) -> float:
    # joint tail decays like u^(-1-(nu1+nu2)/2); crude but safe bound
    return 1e6 ** (2.0 / (s.nu1 + s.nu2)) * 1e4


def joint_total_mass(s: RatioSetting, quad_nodes: int = 200) -> float:
    """Double integral of the joint density over (0, inf) x (0, 1)."""
    res = quad(
        lambda w: marginal_w_density(w, s, quad_nodes),
        0.0,
        1.0,
        limit=int(quad_nodes),
        epsabs=1e-10,
        epsrel=1e-9,
        full_output=1,
    )
    if len(res) > 3:
        raise NumericError(
            f"joint mass quadrature did not converge: {res[3]}", setting=str(s)
        )
    return float(res[0])


def tv_bound(m2, nu, n: int) -> float:
    """Total-variation error bound: upper constant at m1 = m2 + 0.5 over n."""
    m2 = _positive("m2", m2)
    nu = _positive("nu", nu)
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    s = RatioSetting(m2 + 0.5, m2, nu, nu)
    return upper_constant(s) / float(n)


def default_w_grid(n: int = 99) -> np.ndarray:
    """Interior w grid; boundary strips are excluded (integrable singularities)."""
    return np.linspace(0.01, 0.99, n)


def certify_bounds(
    s: RatioSetting,
    n_u: int = 200,
    n_w: int = 99,
    slack: float = 1e-9,
    quad_nodes: int = 200,
    max_violations: int = 20,
) -> dict:
    """Measure the envelope bounds on a log-u x uniform-w grid.

    Returns a report with the constants, the extreme ratios of the joint
    sandwich, and the marginal sandwich in both the plain form
    (w_envelope <= marginal <= a1 * w_envelope) and the constant-scaled
    form (a2 * w_envelope <= marginal).  Violating grid points are listed
    with their ratios rather than hidden.
    """
    s.require_bound_regime()
    a1 = upper_constant(s)
    a2 = lower_constant(s)
    log_a1 = _log_upper_constant(s)
    log_a2 = _log_lower_constant(s)

    w_grid = default_w_grid(n_w)
    u_hi = u_tail_cutoff(s, 1e-10)
    u_grid = np.logspace(-4.0, math.log10(u_hi), n_u)
    uu, ww = np.meshgrid(u_grid, w_grid, indexing="ij")

    log_h = _log_joint(uu, ww, s)
    log_env_w = _log_w_envelope(ww, s.m1, s.m2)
    log_up = log_a1 + _log_u_upper(uu, s) + log_env_w
    log_lo = log_a2 + _log_u_lower(uu, s) + log_env_w

    upper_ratio = np.exp(log_h - log_up)  # <= 1 when the upper bound holds
    lower_ratio = np.exp(log_h - log_lo)  # >= 1 when the lower bound holds

    joint_violations = []
    bad_up = np.argwhere(upper_ratio > 1.0 + slack)
    bad_lo = np.argwhere(lower_ratio < 1.0 - slack)
    for i, j in bad_up[:max_violations]:
        joint_violations.append(
            {"side": "upper", "u": float(u_grid[i]), "w": float(w_grid[j]),
             "ratio": float(upper_ratio[i, j])}
        )
    for i, j in bad_lo[:max_violations]:
        joint_violations.append(
            {"side": "lower", "u": float(u_grid[i]), "w": float(w_grid[j]),
             "ratio": float(lower_ratio[i, j])}
        )

    marginal = np.array([marginal_w_density(w, s, quad_nodes) for w in w_grid])
    env_w = np.exp(log_env_w[0])
    plain_lower = marginal / env_w          # >= 1 iff env <= marginal
    scaled_upper = marginal / (a1 * env_w)  # <= 1 iff marginal <= a1 * env
    scaled_lower = marginal / (a2 * env_w)  # >= 1 iff a2 * env <= marginal

    marginal_violations = []
    for j in np.flatnonzero(plain_lower < 1.0 - slack)[:max_violations]:
        marginal_violations.append(
            {"side": "plain_lower", "w": float(w_grid[j]), "ratio": float(plain_lower[j])}
        )
    for j in np.flatnonzero(scaled_upper > 1.0 + slack)[:max_violations]:
        marginal_violations.append(
            {"side": "upper", "w": float(w_grid[j]), "ratio": float(scaled_upper[j])}
        )
    for j in np.flatnonzero(scaled_lower < 1.0 - slack)[:max_violations]:
        marginal_violations.append(
            {"side": "scaled_lower", "w": float(w_grid[j]), "ratio": float(scaled_lower[j])}
        )

    plain_ok = bool(plain_lower.min() >= 1.0 - slack and scaled_upper.max() <= 1.0 + slack)
    scaled_ok = bool(scaled_lower.min() >= 1.0 - slack and scaled_upper.max() <= 1.0 + slack)

    return {
        "setting": {"m1": s.m1, "m2": s.m2, "nu1": s.nu1, "nu2": s.nu2},
        "grid": {"n_u": int(n_u), "n_w": int(n_w), "u_max": float(u_hi), "slack": float(slack)},
        "a1": float(a1),
        "a2": float(a2),
        "a1_ge_1": bool(a1 >= 1.0),
        "joint": {
            "upper_ratio_max": float(upper_ratio.max()),
            "lower_ratio_min": float(lower_ratio.min()),
            "ok": bool(not joint_violations),
            "violations": joint_violations,
        },
        "marginal": {
            "plain_lower_ratio_min": float(plain_lower.min()),
            "scaled_lower_ratio_min": float(scaled_lower.min()),
            "upper_ratio_max": float(scaled_upper.max()),
            "plain_sandwich_ok": plain_ok,
            "scaled_sandwich_ok": scaled_ok,
            "violations": marginal_violations,
        },
    }
