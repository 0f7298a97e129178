"""Person-period construction and proportional-hazards fitting.

One row per state per year at risk: adopters accumulate rows from the
policy's first adoption year through their own adoption year (event true
only in the last row); never-adopters are right-censored at the policy's
final adoption year. The partial likelihood is maximized over calendar-year
risk sets. Annual data produces heavy ties, handled with the Efron
correction by default (Breslow available for sensitivity runs).

Numerics: covariates are standardized internally (the likelihood surface
for ratios in the tens is steep on raw scales), maximized by Newton
iterations with step-halving, and estimates are mapped back to the original
scale on output. Constant and collinear columns are dropped up front rather
than failing the fit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateDesign, NoEvents, PanelCoverageGap, UnknownPolicy
from .ingest import AdoptionTable, CovariatePanel

MAX_ITER = 100
COEF_TOL = 1e-7
MAX_HALVINGS = 40
COLLINEAR_TOL = 1e-10
SEPARATION_BOUND = 30.0  # on the standardized scale


@dataclass(frozen=True)
class PersonPeriodRow:
    state: str
    year: int
    covariates: np.ndarray
    event: bool


@dataclass(frozen=True)
class PersonPeriodTable:
    policy_id: str
    factors: tuple[str, ...]
    rows: tuple[PersonPeriodRow, ...]

    def design(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        X = np.array([r.covariates for r in self.rows], dtype=float)
        years = np.array([r.year for r in self.rows], dtype=np.int64)
        events = np.array([r.event for r in self.rows], dtype=bool)
        return X, years, events


@dataclass(frozen=True)
class CoxFit:
    policy_id: str
    factors: tuple[str, ...]
    coefficients: np.ndarray
    hazard_ratios: np.ndarray
    std_errors: np.ndarray
    wald_p_values: np.ndarray
    ci_low: np.ndarray
    ci_high: np.ndarray
    converged: bool
    iterations: int
    log_partial_likelihood: float
    dropped_factors: tuple[tuple[str, str], ...]  # (factor, reason)
    warnings: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        def _clean(arr):
            return [None if (isinstance(v, float) and math.isnan(v)) else v for v in arr.tolist()]
        return {
            "policy_id": self.policy_id,
            "factors": list(self.factors),
            "coefficients": _clean(self.coefficients),
            "hazard_ratios": _clean(self.hazard_ratios),
            "std_errors": _clean(self.std_errors),
            "wald_p_values": _clean(self.wald_p_values),
            "ci_low": _clean(self.ci_low),
            "ci_high": _clean(self.ci_high),
            "converged": self.converged,
            "iterations": self.iterations,
            "log_partial_likelihood": self.log_partial_likelihood,
            "dropped_factors": [list(d) for d in self.dropped_factors],
            "warnings": list(self.warnings),
        }


def build_person_periods(policy_id: str, table: AdoptionTable, panel: CovariatePanel) -> PersonPeriodTable:
    """Rows span first_year..(adoption year or last adoption year) per state.

    The at-risk universe is the panel's state list (all 50 for the reference
    panel). Adopting states missing from the panel, or policy years outside
    the panel, raise PanelCoverageGap.
    """
    if policy_id not in table.policies:
        raise UnknownPolicy(policy_id)
    meta = table.policies[policy_id]
    adopted = {r.state: r.year for r in table.records if r.policy_id == policy_id}

    for state in adopted:
        if state not in panel.states:
            raise PanelCoverageGap(state, meta.first_year)
    if meta.first_year < panel.year_start or meta.last_year > panel.year_end:
        missing = meta.first_year if meta.first_year < panel.year_start else meta.last_year
        raise PanelCoverageGap(next(iter(adopted)), missing)

    rows = []
    for si, state in enumerate(panel.states):
        end = adopted.get(state, meta.last_year)
        for year in range(meta.first_year, end + 1):
            covs = panel.values[si, year - panel.year_start, :].copy()
            if np.isnan(covs).any():
                raise PanelCoverageGap(state, year)
            rows.append(PersonPeriodRow(
                state=state, year=year, covariates=covs,
                event=(state in adopted and year == adopted[state]),
            ))
    return PersonPeriodTable(policy_id=policy_id, factors=panel.factors, rows=tuple(rows))


def _partial_likelihood_parts(X, years, events, beta, tie_method):
    """Log partial likelihood, gradient, and Hessian over calendar-year
    risk sets. Each (state, year) row represents exposure during exactly
    that year, so the risk set at an event year is the set of rows carrying
    that year."""
    n, d = X.shape
    eta = X @ beta
    shift = eta.max() if n else 0.0  # likelihood is shift-invariant; keep exp() bounded
    phi = np.exp(eta - shift)

    lpl = 0.0
    grad = np.zeros(d)
    hess = np.zeros((d, d))
    for year in np.unique(years[events]):
        at_risk = years == year
        dead = at_risk & events
        m = int(dead.sum())

        Xr = X[at_risk]
        pr = phi[at_risk]
        s0_full = pr.sum()
        s1_full = Xr.T @ pr
        s2_full = (Xr * pr[:, None]).T @ Xr

        Xd = X[dead]
        pd_ = phi[dead]
        d0 = pd_.sum()
        d1 = Xd.T @ pd_
        d2 = (Xd * pd_[:, None]).T @ Xd

        lpl += float((eta[dead] - shift).sum())
        grad += Xd.sum(axis=0)
        for ell in range(m):
            frac = ell / m if tie_method == "efron" else 0.0
            s0 = s0_full - frac * d0
            s1 = s1_full - frac * d1
            s2 = s2_full - frac * d2
            lpl -= math.log(s0)
            grad -= s1 / s0
            hess -= s2 / s0 - np.outer(s1, s1) / (s0 * s0)
    return lpl, grad, hess


def _drop_degenerate(X, factors):
    """Standardize columns; flag constants, then exactly collinear columns
    via a progressive orthogonalization sweep (keeps earlier columns)."""
    n, d = X.shape
    mean = X.mean(axis=0)
    sd = X.std(axis=0)
    dropped = []
    keep = []
    basis = []
    for j in range(d):
        if sd[j] < 1e-12:
            dropped.append((factors[j], "constant"))
            continue
        col = (X[:, j] - mean[j]) / sd[j]
        resid = col.copy()
        for q in basis:
            resid -= (q @ resid) * q
        if np.linalg.norm(resid) <= COLLINEAR_TOL * np.linalg.norm(col):
            dropped.append((factors[j], "collinear"))
            continue
        basis.append(resid / np.linalg.norm(resid))
        keep.append(j)
    Xs = (X[:, keep] - mean[keep]) / sd[keep] if keep else np.empty((n, 0))
    return Xs, np.array(keep, dtype=int), sd, dropped


def fit_cox(periods: PersonPeriodTable, tie_method: str = "efron") -> CoxFit:
    """Newton maximization of the partial likelihood with step-halving.

    Convergence: coefficient-change max-norm below 1e-7 (standardized
    scale) within 100 iterations. Standard errors come from the inverse
    observed information; Wald tests are two-sided; confidence intervals
    are exp(beta +- 1.96 se).
    """
    if tie_method not in ("efron", "breslow"):
        raise ValueError(f"unknown tie method {tie_method!r}")
    X, years, events = periods.design()
    if not events.any():
        raise NoEvents(f"policy {periods.policy_id} has no adoption events")

    factors = periods.factors
    Xs, keep, sd, dropped = _drop_degenerate(X, factors)
    if Xs.shape[1] == 0:
        raise DegenerateDesign(f"policy {periods.policy_id}: no usable covariate columns")

    d = Xs.shape[1]
    beta = np.zeros(d)
    lpl, grad, hess = _partial_likelihood_parts(Xs, years, events, beta, tie_method)
    converged = False
    warnings = []
    iterations = 0

    for iterations in range(1, MAX_ITER + 1):
        try:
            step = np.linalg.solve(-hess, grad)
        except np.linalg.LinAlgError:
            step = np.linalg.solve(-hess + 1e-9 * np.eye(d), grad)

        scale = 1.0
        improved = False
        for _ in range(MAX_HALVINGS):
            cand = beta + scale * step
            new_lpl, new_grad, new_hess = _partial_likelihood_parts(Xs, years, events, cand, tie_method)
            if new_lpl >= lpl:
                improved = True
                break
            scale *= 0.5
        if not improved:
            # gradient direction exhausted; treat as converged if flat
            converged = bool(np.abs(grad).max() < 1e-6)
            break

        delta = scale * step
        beta, lpl, grad, hess = cand, new_lpl, new_grad, new_hess
        if np.abs(beta).max() > SEPARATION_BOUND:
            warnings.append("separation_detected")
            break
        if np.abs(delta).max() < COEF_TOL:
            converged = True
            break
    else:
        iterations = MAX_ITER

    if not converged and "separation_detected" not in warnings:
        warnings.append("nonconvergence")

    se_std = np.full(d, np.nan)
    try:
        cov = np.linalg.inv(-hess)
        diag = np.diag(cov)
        if (diag > 0).all():
            se_std = np.sqrt(diag)
        else:
            warnings.append("information_not_positive_definite")
    except np.linalg.LinAlgError:
        warnings.append("singular_information")

    n_factors = len(factors)
    coefficients = np.zeros(n_factors)
    std_errors = np.full(n_factors, np.nan)
    for pos, j in enumerate(keep):
        coefficients[j] = beta[pos] / sd[j]
        std_errors[j] = se_std[pos] / sd[j]

    dropped_names = {name for name, _ in dropped}
    wald_p = np.full(n_factors, np.nan)
    ci_low = np.full(n_factors, np.nan)
    ci_high = np.full(n_factors, np.nan)
    for j, name in enumerate(factors):
        if name in dropped_names or not np.isfinite(std_errors[j]) or std_errors[j] == 0:
            continue
        z = coefficients[j] / std_errors[j]
        wald_p[j] = math.erfc(abs(z) / math.sqrt(2.0))
        ci_low[j] = math.exp(coefficients[j] - 1.96 * std_errors[j])
        ci_high[j] = math.exp(coefficients[j] + 1.96 * std_errors[j])

    return CoxFit(
        policy_id=periods.policy_id,
        factors=factors,
        coefficients=coefficients,
        hazard_ratios=np.exp(coefficients),
        std_errors=std_errors,
        wald_p_values=wald_p,
        ci_low=ci_low,
        ci_high=ci_high,
        converged=converged,
        iterations=iterations,
        log_partial_likelihood=lpl,
        dropped_factors=tuple(dropped),
        warnings=tuple(warnings),
    )


def hazard_report(fit: CoxFit) -> list[dict]:
    """Factors sorted by descending hazard ratio, significance markers where
    p < 0.05, dropped factors last with their reason."""
    dropped = dict(fit.dropped_factors)
    active, tail = [], []
    for j, name in enumerate(fit.factors):
        entry = {
            "factor": name,
            "coefficient": float(fit.coefficients[j]),
            "hazard_ratio": float(fit.hazard_ratios[j]),
            "std_error": None if math.isnan(fit.std_errors[j]) else float(fit.std_errors[j]),
            "p_value": None if math.isnan(fit.wald_p_values[j]) else float(fit.wald_p_values[j]),
            "ci_low": None if math.isnan(fit.ci_low[j]) else float(fit.ci_low[j]),
            "ci_high": None if math.isnan(fit.ci_high[j]) else float(fit.ci_high[j]),
            "significant": bool((not math.isnan(fit.wald_p_values[j])) and fit.wald_p_values[j] < 0.05),
            "dropped": dropped.get(name),
        }
        (tail if name in dropped else active).append(entry)
    active.sort(key=lambda e: (-e["hazard_ratio"], e["factor"]))
    return active + tail
