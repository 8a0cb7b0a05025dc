"""
Trend models for normalized series.

Three model families are fitted by least squares: linear, polynomial of a
given degree and exponential with an additive offset. Every fit reports
its parameters together with the coefficient of determination R^2.

@var MAX_ITERATIONS: iteration limit of the exponential fit
@type MAX_ITERATIONS: L{int}
@var STEP_TOLERANCE: relative step size at which the exponential fit converged
@type STEP_TOLERANCE: L{float}
"""
from dataclasses import dataclass, field
from typing import Dict, Tuple

import numpy as np
import scipy.linalg
from twisted.logger import Logger
from zope.interface import implementer

from .errors import ComputationError, ConvergenceError, DomainError
from .isimploscore import ITrendModel


log = Logger()

MAX_ITERATIONS = 200
STEP_TOLERANCE = 1e-10

DEGENERATE_R2 = "degenerate_r2"
NONCONVERGED = "nonconverged"

_ARMIJO = 1e-4
_MIN_STEP = 1e-12


@dataclass(frozen=True)
class FitResult:
    """
    Parameters and goodness of a fitted model.

    Parameters are ordered as: linear (slope, intercept); poly_n
    (c_n, ..., c_0); exponential (A, alpha, C) for A exp(alpha x) + C.

    @ivar flags: markers such as L{DEGENERATE_R2} (constant data, R^2
        defined as 1) or L{NONCONVERGED}
    """
    model: str
    parameters: Tuple[float, ...]
    r_squared: float
    residuals: Dict[str, float] = field(default_factory=dict)
    flags: Tuple[str, ...] = ()
    iterations: int = 0

    def to_json(self):
        return {
            "model": self.model,
            "params": [float(p) for p in self.parameters],
            "r2": float(self.r_squared),
            "residuals": {k: float(v) for k, v in sorted(self.residuals.items())},
            "flags": list(self.flags),
        }


def _as_arrays(x, y, minimum):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.ndim != 1 or x.shape != y.shape:
        raise DomainError("x and y must be one dimensional of equal length")
    if len(x) < minimum:
        raise DomainError("need at least {} points, got {}".format(minimum, len(x)))
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise DomainError("data contains non-finite values")
    return x, y


def _result(model, parameters, x, y, predicted, flags=(), iterations=0):
    residual = y - predicted
    ss_res = float(residual @ residual)
    centered = y - y.mean()
    ss_tot = float(centered @ centered)
    flags = tuple(flags)
    if ss_tot == 0:
        r_squared = 1.0
        flags += (DEGENERATE_R2,)
    else:
        r_squared = 1.0 - ss_res / ss_tot
    summary = {
        "rss": ss_res,
        "rmse": float(np.sqrt(ss_res / len(y))),
        "max_abs": float(np.max(np.abs(residual))),
    }
    return FitResult(
        model,
        tuple(float(p) for p in parameters),
        r_squared,
        summary,
        flags,
        iterations,
    )


def fit_linear(x, y):
    """
    Fit y = a x + b by ordinary least squares (closed form).

    @param x: abscissae, not all equal
    @param y: ordinates
    @return: parameters (a, b)
    @rtype: L{FitResult}
    @raises DomainError: if x is constant or fewer than two points are given
    """
    x, y = _as_arrays(x, y, 2)
    dx = x - x.mean()
    sxx = float(dx @ dx)
    if sxx == 0:
        raise DomainError("x values are all equal, the slope is undefined")
    slope = float(dx @ (y - y.mean())) / sxx
    intercept = float(y.mean()) - slope * float(x.mean())
    return _result("linear", (slope, intercept), x, y, slope * x + intercept)


def fit_poly(x, y, n):
    """
    Fit a polynomial of degree n by least squares.

    The Vandermonde system is solved through its QR decomposition.

    @param n: the degree
    @type n: L{int}
    @return: parameters (c_n, ..., c_0)
    @rtype: L{FitResult}
    @raises ComputationError: if the design matrix is rank deficient
    """
    if n < 0:
        raise DomainError("polynomial degree must not be negative")
    x, y = _as_arrays(x, y, n + 1)
    design = np.vander(x, n + 1)
    if np.linalg.matrix_rank(design) < n + 1:
        raise ComputationError("design matrix of degree {} is rank deficient".format(n))
    q, r = np.linalg.qr(design)
    coefficients = scipy.linalg.solve_triangular(r, q.T @ y)
    return _result("poly_{}".format(n), coefficients, x, y, design @ coefficients)


def _exponential(parameters, x):
    amplitude, rate, offset = parameters
    return amplitude * np.exp(rate * x) + offset


def _exponential_seed(x, y, pin_offset):
    """
    Seed (A, alpha, C): a log-linear fit for alpha, then A and C exactly.
    """
    if pin_offset:
        candidates = [(0.0, 1.0 if y[0] >= 0 else -1.0)]
    else:
        margin = 1e-3 * float(np.ptp(y))
        candidates = [(float(y.min()) - margin, 1.0), (float(y.max()) + margin, -1.0)]
    best = None
    for offset, sign in candidates:
        shifted = sign * (y - offset)
        if np.any(shifted <= 0):
            continue
        rate, _ = np.polyfit(x, np.log(shifted), 1)
        basis = np.exp(rate * x)
        if pin_offset:
            amplitude = float(basis @ y) / float(basis @ basis)
            seed = (amplitude, float(rate), 0.0)
        else:
            design = np.column_stack((basis, np.ones_like(x)))
            (amplitude, offset), _, _, _ = np.linalg.lstsq(design, y, rcond=None)
            seed = (float(amplitude), float(rate), float(offset))
        residual = _exponential(seed, x) - y
        rss = float(residual @ residual)
        if best is None or rss < best[0]:
            best = (rss, seed)
    if best is None:
        return (float(y[0]) or 1.0, 0.0, 0.0)
    return best[1]


def _gauss_newton(x, y, seed, pin_offset, max_iter, tol):
    """
    Damped Gauss-Newton with Armijo backtracking.

    @return: parameters, iteration count and whether the step tolerance was met
    """
    columns = 2 if pin_offset else 3

    def residual(p):
        return _exponential(p, x) - y

    def jacobian(p):
        amplitude, rate, _ = p
        basis = np.exp(rate * x)
        return np.column_stack((basis, amplitude * x * basis, np.ones_like(x)))[:, :columns]

    p = np.array(seed, dtype=float)
    r = residual(p)
    f = float(r @ r)
    for iteration in range(1, max_iter + 1):
        jac = jacobian(p)
        step = np.zeros(3)
        step[:columns] = np.linalg.lstsq(jac, -r, rcond=None)[0]
        directional = 2.0 * float((jac.T @ r) @ step[:columns])
        scale = 1.0
        while True:
            candidate = p + scale * step
            rc = residual(candidate)
            fc = float(rc @ rc)
            if np.isfinite(fc) and fc <= f + _ARMIJO * scale * directional:
                break
            scale *= 0.5
            if scale < _MIN_STEP:
                # no descent left: stationary up to rounding
                converged = np.linalg.norm(step) <= np.sqrt(tol) * (1.0 + np.linalg.norm(p))
                return p, iteration, bool(converged)
        taken = scale * step
        p, r, f = candidate, rc, fc
        if np.linalg.norm(taken) <= tol * (1.0 + np.linalg.norm(p)):
            return p, iteration, True
    return p, max_iter, False


def fit_exponential(x, y, pin_offset=False, max_iter=MAX_ITERATIONS, tol=STEP_TOLERANCE):
    """
    Fit y = A exp(alpha x) + C.

    The offset starts just below (or above) the data, a log-linear fit
    seeds alpha, and damped Gauss-Newton refines all parameters.

    @param pin_offset: keep C = 0
    @type pin_offset: L{bool}
    @return: parameters (A, alpha, C)
    @rtype: L{FitResult}
    @raises ConvergenceError: if the iteration limit is reached; the error
        carries the best parameters found
    """
    x, y = _as_arrays(x, y, 3)
    if np.ptp(y) == 0:
        mean = float(y.mean())
        parameters = (mean, 0.0, 0.0) if pin_offset else (0.0, 0.0, mean)
        return _result("exponential", parameters, x, y, _exponential(parameters, x))
    seed = _exponential_seed(x, y, pin_offset)
    parameters, iterations, converged = _gauss_newton(x, y, seed, pin_offset, max_iter, tol)
    if not converged:
        best = _result(
            "exponential", parameters, x, y, _exponential(parameters, x),
            flags=(NONCONVERGED,), iterations=iterations,
        )
        log.warn("Exponential fit did not converge after {n} iterations", n=iterations)
        raise ConvergenceError("exponential fit did not converge", best=best)
    return _result(
        "exponential", parameters, x, y, _exponential(parameters, x), iterations=iterations,
    )


@implementer(ITrendModel)
class LinearModel(object):
    name = "linear"

    def fit(self, x, y):
        return fit_linear(x, y)

    def evaluate(self, parameters, x):
        slope, intercept = parameters
        return slope * np.asarray(x, dtype=float) + intercept


@implementer(ITrendModel)
class PolynomialModel(object):
    """
    Polynomial of a fixed degree.
    """
    def __init__(self, degree):
        if degree < 0:
            raise DomainError("polynomial degree must not be negative")
        self.degree = degree
        self.name = "poly_{}".format(degree)

    def fit(self, x, y):
        return fit_poly(x, y, self.degree)

    def evaluate(self, parameters, x):
        return np.polyval(parameters, np.asarray(x, dtype=float))


@implementer(ITrendModel)
class ExponentialModel(object):
    """
    A exp(alpha x) + C, optionally with C pinned to zero.
    """
    name = "exponential"

    def __init__(self, pin_offset=False):
        self.pin_offset = pin_offset

    def fit(self, x, y):
        return fit_exponential(x, y, pin_offset=self.pin_offset)

    def evaluate(self, parameters, x):
        return _exponential(parameters, np.asarray(x, dtype=float))


def model_from_spec(spec, pin_offset=False):
    """
    Create a model from its command line name.

    @param spec: C{"linear"}, C{"exp"} (or C{"exponential"}) or C{"poly:N"}
    @type spec: L{str}
    @rtype: L{ITrendModel} provider
    @raises DomainError: on an unknown name or invalid degree
    """
    spec = spec.strip().lower()
    if spec == "linear":
        return LinearModel()
    if spec in ("exp", "exponential"):
        return ExponentialModel(pin_offset=pin_offset)
    if spec.startswith("poly:"):
        try:
            degree = int(spec[5:])
        except ValueError:
            raise DomainError("invalid polynomial degree in {!r}".format(spec))
        return PolynomialModel(degree)
    raise DomainError("unknown model {!r}, expected linear, exp or poly:N".format(spec))


def default_models(pin_offset=False, degree=4):
    """
    Return the models reported side by side: linear, exponential and poly.
    """
    return [LinearModel(), ExponentialModel(pin_offset=pin_offset), PolynomialModel(degree)]


def fit_all(x, y, models=None):
    """
    Fit several models to the same data.

    A non-converged exponential fit is reported with its best parameters
    and the L{NONCONVERGED} flag instead of failing the whole report.

    @param models: models to fit. Defaults to L{default_models}.
    @type models: L{list} of L{ITrendModel} providers
    @rtype: L{list} of L{FitResult}
    """
    if models is None:
        models = default_models()
    results = []
    for model in models:
        try:
            results.append(model.fit(x, y))
        except ConvergenceError as e:
            results.append(e.best)
    return results
