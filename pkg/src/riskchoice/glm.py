"""Maximum-likelihood logistic regression, written from scratch.

Fitting is Newton/IRLS with a step-halving line search on the penalized
log-likelihood. The optional L2 penalty never touches the intercept, which by
convention is column 0 of the design matrix. The covariance of the estimates
is the inverse of the negative penalized Hessian at the optimum.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InputError, NumericalError

DEFAULT_TOL = 1e-8
DEFAULT_MAX_ITER = 100


def sigmoid(z):
    """Logistic function 1/(1+exp(-z)), overflow-safe for any finite z.

    Uses the sign-split form so exp is only ever taken of a nonpositive
    argument. Accepts scalars or arrays; returns a float for scalar input.
    """
    z_arr = np.asarray(z, dtype=float)
    out = np.empty_like(z_arr)
    pos = z_arr >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z_arr[pos]))
    ez = np.exp(z_arr[~pos])
    out[~pos] = ez / (1.0 + ez)
    if np.isscalar(z) or z_arr.ndim == 0:
        return float(out)
    return out


def _check_shapes(coeffs, X, y):
    coeffs = np.asarray(coeffs, dtype=float)
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if X.ndim != 2:
        raise InputError("X must be a 2-d design matrix")
    if coeffs.shape != (X.shape[1],):
        raise InputError(
            f"coefficient length {coeffs.shape} does not match {X.shape[1]} columns"
        )
    if y.shape != (X.shape[0],):
        raise InputError("y length does not match the number of rows of X")
    if not np.all((y == 0) | (y == 1)):
        raise InputError("y must contain only 0 and 1")
    return coeffs, X, y


def log_likelihood(coeffs, X, y) -> float:
    """Bernoulli log-likelihood of y under the logistic model.

    Evaluated as -sum(logaddexp(0, (1-2y) z)), which is exact in the well-
    scaled region and never returns -inf for finite inputs.
    """
    coeffs, X, y = _check_shapes(coeffs, X, y)
    z = X @ coeffs
    return float(-np.sum(np.logaddexp(0.0, (1.0 - 2.0 * y) * z)))


def _penalty_mask(k: int) -> np.ndarray:
    # column 0 is the intercept: never penalized
    mask = np.ones(k)
    mask[0] = 0.0
    return mask


def gradient_and_hessian(coeffs, X, y, l2_strength: float = 0.0):
    """Analytic gradient and Hessian of the penalized log-likelihood.

    Gradient: X^T (y - sigma(X b)) - l2 * b~ ; Hessian: -X^T W X - l2 * I~,
    where b~ and I~ zero out the intercept entry.
    """
    coeffs, X, y = _check_shapes(coeffs, X, y)
    if l2_strength < 0:
        raise InputError("l2_strength must be nonnegative")
    mu = sigmoid(X @ coeffs)
    mask = _penalty_mask(X.shape[1])
    grad = X.T @ (y - mu) - l2_strength * mask * coeffs
    w = mu * (1.0 - mu)
    hess = -(X.T * w) @ X - l2_strength * np.diag(mask)
    return grad, hess


def _penalized_ll(coeffs, X, y, l2_strength, mask) -> float:
    ll = float(-np.sum(np.logaddexp(0.0, (1.0 - 2.0 * y) * (X @ coeffs))))
    return ll - 0.5 * l2_strength * float(np.sum(mask * coeffs**2))


@dataclass
class FittedLogistic:
    """A fitted logistic regression model.

    ``log_likelihood`` is the unpenalized value at the estimates.
    ``covariance`` is None when the information matrix could not be inverted;
    ``diagnostics`` then says why, as it does for suspected separation.
    """

    feature_names: tuple[str, ...]
    coeffs: np.ndarray
    covariance: np.ndarray | None
    log_likelihood: float
    converged: bool
    iterations: int
    l2_strength: float
    diagnostics: list[str] = field(default_factory=list)

    @property
    def std_errors(self) -> np.ndarray | None:
        if self.covariance is None:
            return None
        return np.sqrt(np.clip(np.diag(self.covariance), 0.0, None))

    def predict(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[1] != self.coeffs.shape[0]:
            raise InputError("design matrix does not match the fitted coefficients")
        return sigmoid(X @ self.coeffs)

    def to_json_dict(self) -> dict:
        se = self.std_errors
        return {
            "features": list(self.feature_names),
            "coeffs": [float(c) for c in self.coeffs],
            "std_errors": None if se is None else [float(s) for s in se],
            "covariance": None
            if self.covariance is None
            else [[float(v) for v in row] for row in self.covariance],
            "log_likelihood": float(self.log_likelihood),
            "converged": self.converged,
            "iterations": self.iterations,
            "l2": float(self.l2_strength),
        }


def fit_logistic(
    X,
    y,
    l2_strength: float = 0.0,
    *,
    feature_names=None,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    standardize: bool = False,
) -> FittedLogistic:
    """Fit a logistic regression by Newton/IRLS.

    Maximizes the log-likelihood minus (l2_strength/2) times the squared norm
    of the non-intercept coefficients. Convergence means the gradient
    max-norm fell below ``tol`` within ``max_iter`` Newton steps; each step
    is halved until the penalized objective does not decrease.

    With ``standardize=True`` the non-intercept columns are centered and
    scaled before fitting and the estimates (and covariance) are mapped back
    to the original scale, which helps when raw columns differ by orders of
    magnitude. Reported probabilities are unaffected.

    Raises
    ------
    NumericalError
        If the normal equations are singular (collinear design). Perfect
        separation is not an error: it returns a non-converged fit with a
        "possible separation" diagnostic.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if X.ndim != 2:
        raise InputError("X must be a 2-d design matrix")
    n, k = X.shape
    if y.shape != (n,):
        raise InputError("y length does not match the number of rows of X")
    if not np.all((y == 0) | (y == 1)):
        raise InputError("y must contain only 0 and 1")
    if not np.all(np.isfinite(X)):
        raise InputError("X must be finite")
    if n < k:
        raise InputError(f"need at least {k} rows to fit {k} coefficients, got {n}")
    if l2_strength < 0:
        raise InputError("l2_strength must be nonnegative")
    if feature_names is not None:
        feature_names = tuple(feature_names)
        if len(feature_names) != k:
            raise InputError("feature_names length does not match X columns")
    else:
        feature_names = tuple(f"x{j}" for j in range(k))

    if standardize:
        means = X.mean(axis=0)
        scales = X.std(axis=0)
        means[0] = 0.0
        scales[0] = 1.0
        scales[scales == 0.0] = 1.0
        X_fit = (X - means) / scales
    else:
        X_fit = X

    mask = _penalty_mask(k)
    beta = np.zeros(k)
    obj = _penalized_ll(beta, X_fit, y, l2_strength, mask)
    converged = False
    iterations = 0
    diagnostics: list[str] = []

    for _ in range(max_iter):
        grad, hess = gradient_and_hessian(beta, X_fit, y, l2_strength)
        if np.max(np.abs(grad)) < tol:
            converged = True
            break
        info = -hess
        try:
            step = np.linalg.solve(info, grad)
        except np.linalg.LinAlgError:
            cond = np.linalg.cond(info)
            raise NumericalError(
                f"singular normal equations (condition number {cond:.3g}); "
                "check for collinear features"
            ) from None
        if not np.all(np.isfinite(step)):
            cond = np.linalg.cond(info)
            raise NumericalError(
                f"non-finite Newton step (condition number {cond:.3g})"
            )

        # halve the step until the penalized objective stops decreasing
        t = 1.0
        improved = False
        for _ in range(40):
            candidate = beta + t * step
            new_obj = _penalized_ll(candidate, X_fit, y, l2_strength, mask)
            if new_obj >= obj:
                beta, obj = candidate, new_obj
                improved = True
                break
            t *= 0.5
        iterations += 1
        if not improved:
            break

    if not converged:
        grad, _ = gradient_and_hessian(beta, X_fit, y, l2_strength)
        converged = bool(np.max(np.abs(grad)) < tol)

    # all margins strictly positive with no penalty means every observation
    # sits on the correct side: the likelihood improves without bound along
    # the separating direction, so a small gradient there is saturation, not
    # a maximum
    margins = (2.0 * y - 1.0) * (X_fit @ beta)
    if l2_strength == 0.0 and np.all(margins > 0):
        converged = False
        diagnostics.append(
            "possible separation: all observations classified perfectly, "
            "coefficients diverge without regularization"
        )
    elif not converged and np.max(np.abs(beta)) > 1e3:
        diagnostics.append("coefficients diverging; model may be ill-posed")

    _, hess = gradient_and_hessian(beta, X_fit, y, l2_strength)
    info = -hess
    try:
        cov = np.linalg.inv(info)
        cov = (cov + cov.T) / 2.0
    except np.linalg.LinAlgError:
        cov = None
        diagnostics.append("covariance unavailable: singular information matrix")

    if standardize:
        # map back to the original scale: beta_std applies to (x - m)/s
        transform = np.eye(k)
        for j in range(1, k):
            transform[j, j] = 1.0 / scales[j]
            transform[0, j] = -means[j] / scales[j]
        beta = transform @ beta
        if cov is not None:
            cov = transform @ cov @ transform.T
            cov = (cov + cov.T) / 2.0

    ll = log_likelihood(beta, X, y)
    return FittedLogistic(
        feature_names=feature_names,
        coeffs=beta,
        covariance=cov,
        log_likelihood=ll,
        converged=converged,
        iterations=iterations,
        l2_strength=float(l2_strength),
        diagnostics=diagnostics,
    )


def predict_prob(model: FittedLogistic, fv) -> float:
    """Choice probability for a single feature vector under a fitted model.

    The vector's names must match the model's feature names exactly, in
    order; a silent reordering would scramble the coefficients.
    """
    if tuple(fv.names) != tuple(model.feature_names):
        raise InputError(
            f"feature names {tuple(fv.names)} do not match model features "
            f"{tuple(model.feature_names)}"
        )
    return float(sigmoid(float(np.dot(model.coeffs, fv.values))))
