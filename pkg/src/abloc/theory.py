"""Closed-form performance limits for bias-corrected combining."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InfeasibleError
from .types import AgentSpec, TheoryReport


def learnability_ratio(f_sq_norm: float, tau_sq: float) -> float:
    if f_sq_norm < 0 or tau_sq < 0:
        raise ValueError("squared norms must be nonnegative")
    total = f_sq_norm + tau_sq
    if total == 0:
        raise InfeasibleError("learnability ratio is undefined when the bias is identically zero")
    return f_sq_norm / total


def residual_variance(agent: AgentSpec) -> float:
    """Per-dimension error variance left after the learnable bias is removed."""
    return agent.tau_sq + agent.sigma**2


def optimal_weights(variances) -> np.ndarray:
    v = np.asarray(variances, dtype=float)
    if v.ndim != 1 or v.size == 0:
        raise ValueError("variances must be a non-empty vector")
    if np.any(~np.isfinite(v)) or np.any(v <= 0):
        raise ValueError(f"variances must be finite and positive: {v}")
    prec = 1.0 / v
    return prec / prec.sum()


def mse_baseline(agents) -> float:
    """MSE of the uncorrected uniform average."""
    K = len(agents)
    if K < 1:
        raise ValueError("need at least one agent")
    return sum(a.beta**2 + a.sigma**2 for a in agents) / K**2


def mse_optimal(variances) -> float:
    v = np.asarray(variances, dtype=float)
    if np.any(v <= 0):
        raise ValueError("variances must be positive")
    return float(1.0 / np.sum(1.0 / v))


def simplified_bound(lambda_bar: float, beta_bar_sq: float, sigma_bar_sq: float) -> float:
    if min(lambda_bar, beta_bar_sq, sigma_bar_sq) < 0:
        raise ValueError("inputs must be nonnegative")
    denom = beta_bar_sq + sigma_bar_sq
    if denom <= 0:
        raise InfeasibleError("beta_bar_sq + sigma_bar_sq must be positive")
    return lambda_bar * beta_bar_sq / denom


def efficiency_bound(agents) -> TheoryReport:
    agents = list(agents)
    v = np.array([residual_variance(a) for a in agents])
    w = optimal_weights(v)
    base = mse_baseline(agents)
    best = mse_optimal(v)
    lam = np.array([a.lam for a in agents])
    beta_sq = np.array([a.beta**2 for a in agents])
    sigma_sq = np.array([a.sigma**2 for a in agents])
    ratio_form = float(np.dot(w, lam * beta_sq) / np.dot(w, beta_sq + sigma_sq))
    return TheoryReport(
        v_star=v,
        w_star=w,
        mse_baseline=base,
        mse_optimal=best,
        eta_bound=(base - best) / base,
        eta_ratio_form=ratio_form,
        eta_simplified=simplified_bound(lam.mean(), beta_sq.mean(), sigma_sq.mean()),
        oracle_mse_noise_only=float(1.0 / np.sum(1.0 / sigma_sq)),
    )


def sample_requirement(C, d, p_list, eps, lambda_bar, delta, K) -> int:
    """Smallest ``N`` with ``N >= C (d + sum p) log(K / delta) / (eps^2 lambda_bar^2)``."""
    if lambda_bar == 0:
        raise InfeasibleError("mean learnability is zero: bias learning cannot help")
    if not (0 < eps < 1) or not (0 < delta < 1):
        raise ValueError(f"eps and delta must lie in (0, 1), got eps={eps}, delta={delta}")
    if not (0 < lambda_bar <= 1):
        raise ValueError(f"lambda_bar must lie in (0, 1], got {lambda_bar}")
    if C <= 0 or K < 1:
        raise ValueError("C must be positive and K >= 1")
    bound = C * (d + sum(p_list)) / (eps**2 * lambda_bar**2) * math.log(K / delta)
    return max(1, math.ceil(bound))


@dataclass
class Recommendation:
    decision: str  # "learn_bias" or "simple_average"
    checks: dict = field(default_factory=dict)

    @property
    def failed(self):
        return [name for name, c in self.checks.items() if not c["passed"]]


def decision_rule(lambda_bar, beta_bar_sq, sigma_bar_sq, T, d, p_list) -> Recommendation:
    """Recommend bias learning only if learnability, SNR and data volume all suffice."""
    snr = beta_bar_sq / sigma_bar_sq if sigma_bar_sq > 0 else math.inf
    needed = 10 * (d + sum(p_list))
    checks = {
        "learnability": {"value": lambda_bar, "threshold": 0.5, "passed": lambda_bar > 0.5},
        "signal_to_noise": {"value": snr, "threshold": 0.5, "passed": snr > 0.5},
        "data": {"value": T, "threshold": needed, "passed": T > needed},
    }
    ok = all(c["passed"] for c in checks.values())
    return Recommendation("learn_bias" if ok else "simple_average", checks)


def decision_for_agents(agents, T, d) -> Recommendation:
    lam = np.mean([a.lam for a in agents])
    b2 = np.mean([a.beta**2 for a in agents])
    s2 = np.mean([a.sigma**2 for a in agents])
    return decision_rule(float(lam), float(b2), float(s2), T, d, [a.p for a in agents])
