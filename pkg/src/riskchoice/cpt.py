"""Prospect-theoretic choice model: piecewise power value function, Prelec
probability weighting, and bounded maximum-likelihood estimation.

The value function is v(x) = x^alpha for gains and -lambda * (-x)^beta for
losses; the weighting function is w(p) = exp(-(-ln p)^gamma). A scenario's
risky option is valued at w(p) v(R), the safe option at v(S), and the choice
probability is the logistic transform of eta times their difference.

Estimation runs a derivative-free simplex search from multiple random start
points in an unconstrained reparameterization (logit-type transforms for the
box-bounded shape parameters, log transforms for the positive ones), so every
visited point maps inside the constraint box. Standard errors come from the
observed Fisher information, a finite-difference Hessian of the total
log-likelihood in the original coordinates. Parameters the data carry no
information about (a zero row of the information matrix) get no standard
error rather than a fabricated one; gain-only payoffs leave beta and lambda
in exactly that position because the loss branch is never evaluated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize
from scipy.special import expit, logit

from .errors import EstimationError, InputError
from .glm import sigmoid
from .scenario import Scenario, ScenarioArrays, as_arrays

PARAM_NAMES = ("alpha", "beta", "lambda", "gamma", "eta")

DEFAULT_GAMMA_MAX = 5.0
DEFAULT_RESTARTS = 20
DEFAULT_FIT_SEED = 7

# simplex search budget per restart
_NM_OPTIONS = {"xatol": 1e-8, "fatol": 1e-12, "maxiter": 2000, "maxfev": 12000}

# relative step for the finite-difference observed information
_FD_REL_STEP = 1e-4

_DEFAULT_X_GRID = (-100.0, 150.0, 251)
_DEFAULT_P_GRID = (0.01, 0.99, 99)


@dataclass(frozen=True)
class CptParams:
    """Parameters (alpha, beta, lambda, gamma, eta) of the choice model.

    alpha and beta are the gain and loss curvature exponents in (0, 1];
    lam is the loss-aversion multiplier; gamma the weighting exponent; eta
    the choice sensitivity. All are finite; lam, gamma, eta strictly
    positive.
    """

    alpha: float
    beta: float
    lam: float
    gamma: float
    eta: float

    def __post_init__(self):
        vals = (self.alpha, self.beta, self.lam, self.gamma, self.eta)
        if not all(math.isfinite(v) for v in vals):
            raise InputError("parameters must be finite")
        if not 0.0 < self.alpha <= 1.0:
            raise InputError(f"alpha must lie in (0, 1], got {self.alpha}")
        if not 0.0 < self.beta <= 1.0:
            raise InputError(f"beta must lie in (0, 1], got {self.beta}")
        if self.lam <= 0.0:
            raise InputError(f"lambda must be positive, got {self.lam}")
        if self.gamma <= 0.0:
            raise InputError(f"gamma must be positive, got {self.gamma}")
        if self.eta <= 0.0:
            raise InputError(f"eta must be positive, got {self.eta}")

    def as_tuple(self) -> tuple[float, float, float, float, float]:
        return (self.alpha, self.beta, self.lam, self.gamma, self.eta)


def value(x: float, params: CptParams) -> float:
    """Piecewise power value: x^alpha on gains, -lam*(-x)^beta on losses."""
    if x >= 0.0:
        return float(x**params.alpha)
    return float(-params.lam * (-x) ** params.beta)


def value_array(x, params: CptParams) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    pos = x >= 0.0
    out[pos] = x[pos] ** params.alpha
    out[~pos] = -params.lam * (-x[~pos]) ** params.beta
    return out


def weight(p: float, params: CptParams) -> float:
    """Prelec weighting exp(-(-ln p)^gamma); fixes p=1 and p=1/e."""
    if not 0.0 < p <= 1.0:
        raise InputError(f"probability must lie in (0, 1], got {p}")
    return float(np.exp(-((-np.log(p)) ** params.gamma)))


def weight_array(p, params: CptParams) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if np.any(p <= 0.0) or np.any(p > 1.0):
        raise InputError("probabilities must lie in (0, 1]")
    return np.exp(-((-np.log(p)) ** params.gamma))


def choice_prob(s: Scenario, params: CptParams) -> float:
    """P(risky) = sigmoid(eta * (w(p) v(R) - v(S)))."""
    u_risky = weight(s.win_prob, params) * value(s.risky_payoff, params)
    u_safe = value(s.safe_payoff, params)
    return float(sigmoid(params.eta * (u_risky - u_safe)))


def choice_prob_array(scenarios, params: CptParams) -> np.ndarray:
    """Vectorized choice_prob over a scenario list or array bundle."""
    arrays = scenarios if isinstance(scenarios, ScenarioArrays) else as_arrays(scenarios)
    u_risky = weight_array(arrays.p, params) * value_array(arrays.risky, params)
    u_safe = value_array(arrays.safe, params)
    return sigmoid(params.eta * (u_risky - u_safe))


def cpt_log_likelihood(params: CptParams, scenarios) -> float:
    """Bernoulli log-likelihood of the observed choices under the model."""
    arrays = scenarios if isinstance(scenarios, ScenarioArrays) else as_arrays(scenarios)
    return _Prepared(arrays).total_ll(params.as_tuple())


class _Prepared:
    """Dataset preprocessed for repeated likelihood evaluation.

    Power terms are evaluated as exp(a * log x) on precomputed logs, which is
    what the simplex search spends nearly all its time on. Evaluation is
    total: parameter vectors slightly outside the constraint box (as visited
    by finite differences at a near-boundary optimum) still get a value.
    """

    def __init__(self, arrays: ScenarioArrays):
        if np.any(arrays.p <= 0.0) or np.any(arrays.p >= 1.0):
            raise InputError("win probabilities must lie strictly in (0, 1)")
        self.n = len(arrays)
        self.sign = 1.0 - 2.0 * arrays.choice.astype(float)
        self.loglogp = np.log(-np.log(arrays.p))

        risky = arrays.risky
        safe = arrays.safe
        self.r_pos = risky > 0.0
        self.r_neg = risky < 0.0
        self.s_pos = safe > 0.0
        self.s_neg = safe < 0.0
        self.log_r_pos = np.log(risky[self.r_pos])
        self.log_r_neg = np.log(-risky[self.r_neg])
        self.log_s_pos = np.log(safe[self.s_pos])
        self.log_s_neg = np.log(-safe[self.s_neg])
        self.has_loss = bool(self.r_neg.any() or self.s_neg.any())

    def _latent(self, theta) -> np.ndarray:
        alpha, beta, lam, gamma, eta = theta
        v_risky = np.zeros(self.n)
        v_risky[self.r_pos] = np.exp(alpha * self.log_r_pos)
        if self.r_neg.any():
            v_risky[self.r_neg] = -lam * np.exp(beta * self.log_r_neg)
        v_safe = np.zeros(self.n)
        v_safe[self.s_pos] = np.exp(alpha * self.log_s_pos)
        if self.s_neg.any():
            v_safe[self.s_neg] = -lam * np.exp(beta * self.log_s_neg)
        w = np.exp(-np.exp(gamma * self.loglogp))
        return eta * (w * v_risky - v_safe)

    def neg_mean_ll(self, theta) -> float:
        """Negative per-observation log-likelihood; +inf when evaluation
        breaks down numerically (the minimizer then backs away)."""
        with np.errstate(over="ignore", invalid="ignore", under="ignore"):
            z = self._latent(theta)
            terms = np.logaddexp(0.0, self.sign * z)
            total = float(np.sum(terms))
        if not np.isfinite(total):
            return np.inf
        return total / self.n

    def total_ll(self, theta) -> float:
        v = self.neg_mean_ll(theta)
        return float(-v * self.n)


def _to_unconstrained(theta, gamma_max: float) -> np.ndarray:
    alpha, beta, lam, gamma, eta = theta
    return np.array(
        [
            logit(alpha),
            logit(beta),
            np.log(lam),
            logit(gamma / gamma_max),
            np.log(eta),
        ]
    )


def _from_unconstrained(t, gamma_max: float) -> np.ndarray:
    return np.array(
        [
            expit(t[0]),
            expit(t[1]),
            np.exp(t[2]),
            gamma_max * expit(t[3]),
            np.exp(t[4]),
        ]
    )


@dataclass(frozen=True)
class RestartRecord:
    """One simplex-search restart: where it started and where it ended."""

    index: int
    seed: int
    start: tuple[float, float, float, float, float]
    log_likelihood: float
    converged: bool
    n_evals: int

    def to_json_dict(self) -> dict:
        return {
            "index": self.index,
            "seed": self.seed,
            "start": dict(zip(PARAM_NAMES, self.start)),
            "log_likelihood": self.log_likelihood,
            "converged": self.converged,
            "n_evals": self.n_evals,
        }


@dataclass
class CptFit:
    """Result of the multi-restart maximum-likelihood fit.

    ``std_errors`` holds one entry per parameter in the order
    (alpha, beta, lambda, gamma, eta); an entry is None when the observed
    information carries nothing about that parameter (its row is zero) or the
    identified block could not be inverted, in which case
    ``information_singular`` is also set.
    """

    params: CptParams
    std_errors: tuple[float | None, ...]
    log_likelihood: float
    restart_log: tuple[RestartRecord, ...]
    converged: bool
    information_singular: bool
    n_obs: int
    gamma_max: float
    unconstrained_optimum: np.ndarray

    def to_json_dict(self) -> dict:
        d = dict(zip(PARAM_NAMES, self.params.as_tuple()))
        d["std_errors"] = {
            name: (None if se is None else float(se))
            for name, se in zip(PARAM_NAMES, self.std_errors)
        }
        d["log_likelihood"] = float(self.log_likelihood)
        d["converged"] = self.converged
        d["information_singular"] = self.information_singular
        d["n_obs"] = self.n_obs
        d["gamma_max"] = float(self.gamma_max)
        d["restarts"] = [r.to_json_dict() for r in self.restart_log]
        return d


def _observed_information(prep: _Prepared, theta: np.ndarray) -> np.ndarray:
    """Negative Hessian of the total log-likelihood at theta, by central
    finite differences in the original coordinates."""
    k = theta.shape[0]
    h = _FD_REL_STEP * np.maximum(np.abs(theta), 1.0)
    hess = np.zeros((k, k))
    f0 = prep.total_ll(theta)

    for i in range(k):
        ei = np.zeros(k)
        ei[i] = h[i]
        f_plus = prep.total_ll(theta + ei)
        f_minus = prep.total_ll(theta - ei)
        hess[i, i] = (f_plus - 2.0 * f0 + f_minus) / h[i] ** 2
        for j in range(i + 1, k):
            ej = np.zeros(k)
            ej[j] = h[j]
            f_pp = prep.total_ll(theta + ei + ej)
            f_pm = prep.total_ll(theta + ei - ej)
            f_mp = prep.total_ll(theta - ei + ej)
            f_mm = prep.total_ll(theta - ei - ej)
            hess[i, j] = hess[j, i] = (f_pp - f_pm - f_mp + f_mm) / (4.0 * h[i] * h[j])
    return -hess


def _standard_errors(info: np.ndarray) -> tuple[tuple[float | None, ...], bool]:
    """Invert the identified block of the information matrix.

    Rows that are numerically zero mark parameters the likelihood does not
    depend on; their entries come back None. Returns (std_errors, singular).
    """
    k = info.shape[0]
    scale = max(1.0, float(np.max(np.abs(info))))
    live = [i for i in range(k) if np.any(np.abs(info[i]) > 1e-10 * scale)]
    ses: list[float | None] = [None] * k
    singular = len(live) < k
    if not live:
        return tuple(ses), True
    sub = info[np.ix_(live, live)]
    try:
        sub_cov = np.linalg.inv(sub)
    except np.linalg.LinAlgError:
        return tuple(ses), True
    diag = np.diag(sub_cov)
    for pos, i in enumerate(live):
        d = diag[pos]
        if np.isfinite(d) and d >= 0.0:
            ses[i] = float(np.sqrt(d))
        else:
            singular = True
    return tuple(ses), singular


def fit_cpt(
    scenarios,
    n_restarts: int = DEFAULT_RESTARTS,
    seed: int = DEFAULT_FIT_SEED,
    gamma_max: float = DEFAULT_GAMMA_MAX,
) -> CptFit:
    """Fit the choice model by maximum likelihood with random restarts.

    Each restart draws a start point uniformly over a box of canonical
    parameter values, maps it to unconstrained coordinates, and runs
    Nelder-Mead there. The best final log-likelihood wins; exact ties go to
    the lowest restart index, so the result is a pure function of
    (data, n_restarts, seed, gamma_max).

    Raises
    ------
    EstimationError
        If no restart converges; the error carries the restart log.
    """
    arrays = scenarios if isinstance(scenarios, ScenarioArrays) else as_arrays(scenarios)
    if n_restarts < 1:
        raise InputError("n_restarts must be at least 1")
    if not gamma_max > 0.0:
        raise InputError("gamma_max must be positive")

    prep = _Prepared(arrays)

    def objective(t):
        return prep.neg_mean_ll(_from_unconstrained(t, gamma_max))

    restart_seeds = np.random.SeedSequence(seed).generate_state(n_restarts)
    gamma_hi = min(2.0, gamma_max)
    gamma_lo = min(0.2, gamma_hi / 2.0)

    records: list[RestartRecord] = []
    results = []
    for idx in range(n_restarts):
        rng = np.random.Generator(np.random.PCG64(int(restart_seeds[idx])))
        start = np.array(
            [
                rng.uniform(0.2, 1.0),
                rng.uniform(0.2, 1.0),
                rng.uniform(0.5, 3.0),
                rng.uniform(gamma_lo, gamma_hi),
                rng.uniform(0.01, 1.0),
            ]
        )
        res = minimize(
            objective,
            _to_unconstrained(start, gamma_max),
            method="Nelder-Mead",
            options=_NM_OPTIONS,
        )
        results.append(res)
        records.append(
            RestartRecord(
                index=idx,
                seed=int(restart_seeds[idx]),
                start=tuple(float(v) for v in start),
                log_likelihood=float(-res.fun * prep.n),
                converged=bool(res.success),
                n_evals=int(res.nfev),
            )
        )

    if not any(r.converged for r in records):
        raise EstimationError(
            f"none of the {n_restarts} restarts converged", restart_log=records
        )

    best_idx = 0
    for idx in range(1, n_restarts):
        if records[idx].log_likelihood > records[best_idx].log_likelihood:
            best_idx = idx
    best = results[best_idx]

    theta = _from_unconstrained(best.x, gamma_max)
    # the transforms keep iterates inside the open box, but a simplex walking
    # far into a flat direction can underflow a coordinate to exactly 0
    theta = np.maximum(theta, 1e-300)
    params = CptParams(
        alpha=min(float(theta[0]), 1.0),
        beta=min(float(theta[1]), 1.0),
        lam=float(theta[2]),
        gamma=min(float(theta[3]), gamma_max),
        eta=float(theta[4]),
    )

    info = _observed_information(prep, np.asarray(params.as_tuple()))
    std_errors, singular = _standard_errors(info)

    return CptFit(
        params=params,
        std_errors=std_errors,
        log_likelihood=float(-best.fun * prep.n),
        restart_log=tuple(records),
        converged=bool(records[best_idx].converged),
        information_singular=singular,
        n_obs=prep.n,
        gamma_max=float(gamma_max),
        unconstrained_optimum=np.asarray(best.x, dtype=float),
    )


def sample_value_curve(params: CptParams, x_grid=None) -> np.ndarray:
    """Tabulate (x, v(x)) for plotting; default grid spans losses and gains."""
    if x_grid is None:
        lo, hi, m = _DEFAULT_X_GRID
        x_grid = np.linspace(lo, hi, m)
    x_grid = np.asarray(x_grid, dtype=float)
    if not np.all(np.isfinite(x_grid)):
        raise InputError("x_grid must be finite")
    return np.column_stack([x_grid, value_array(x_grid, params)])


def sample_weight_curve(params: CptParams, p_grid=None) -> np.ndarray:
    """Tabulate (p, w(p)) for plotting."""
    if p_grid is None:
        lo, hi, m = _DEFAULT_P_GRID
        p_grid = np.linspace(lo, hi, m)
    p_grid = np.asarray(p_grid, dtype=float)
    if not np.all(np.isfinite(p_grid)):
        raise InputError("p_grid must be finite")
    return np.column_stack([p_grid, weight_array(p_grid, params)])
