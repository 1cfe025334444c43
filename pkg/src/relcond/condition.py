"""Direct condition numbers of ``y0 -> exp(tA) y0`` and related error curves.

Propagators are evaluated as ``exp(t (A - s I))`` with ``s`` the spectral
abscissa; every quantity below is a ratio of norms and so unaffected by the
shift, while entries stay representable over long horizons.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import InputError, RangeError, RLGEError, UnsupportedStructureError
from .linalg import (P2, Norm, as_matrix, as_vector, expm_grid, induced_matrix_norm,
                     vector_norm)
from .spectrum import characteristic_time

__all__ = [
    "ConditionCurve",
    "PerturbationSpec",
    "default_grid",
    "propagators",
    "k_directional",
    "k_worst",
    "delta_curve",
    "componentwise_errors",
    "transient_growth_bounds",
    "max_growth_error",
]


@dataclass(frozen=True)
class ConditionCurve:
    """Values sampled on a strictly increasing time grid.

    ``meta`` records the norm, the kind of curve and the inputs.
    """

    times: np.ndarray
    values: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if t.shape != v.shape:
            raise InputError("times and values must have equal length")
        if t.size > 1 and np.any(np.diff(t) <= 0):
            raise InputError("times must be strictly increasing")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "values", v)

    def max(self) -> float:
        return float(self.values.max())

    def __len__(self):
        return self.values.size


@dataclass(frozen=True)
class PerturbationSpec:
    """Initial value, unit perturbation direction and initial relative error."""

    y0: np.ndarray
    z0_dir: np.ndarray | None = None
    epsilon: float = 0.0

    @classmethod
    def from_perturbed(cls, y0, y0_tilde, norm: Norm = P2) -> "PerturbationSpec":
        """Derive ``z0_dir`` and ``epsilon`` from ``y0_tilde = y0 + epsilon ||y0|| z0_dir``."""
        y0 = as_vector(y0, "y0", nonzero=True)
        yt = as_vector(y0_tilde, "y0_tilde", n=y0.size)
        d = yt - y0
        nd = vector_norm(d, norm)
        if nd == 0:
            return cls(y0, None, 0.0)
        return cls(y0, d / nd, nd / vector_norm(y0, norm))

    def y0_tilde(self, norm: Norm = P2):
        """Perturbed initial value ``y0 + epsilon ||y0|| z0_dir``."""
        if self.z0_dir is None:
            return self.y0
        return self.y0 + self.epsilon * vector_norm(self.y0, norm) * self.z0_dir


def default_grid(A, chars: float = 50.0, points: int = 1000) -> np.ndarray:
    """``points`` equally spaced times on ``[0, chars * t_hat]``."""
    A = as_matrix(A, "A", square=True)
    if points < 2:
        raise InputError("grid needs at least 2 points")
    t_hat = characteristic_time(np.linalg.eigvals(A))
    return np.linspace(0.0, chars * t_hat, int(points))


def _times(times):
    t = np.atleast_1d(np.asarray(times, dtype=float))
    if t.ndim != 1 or t.size == 0 or not np.all(np.isfinite(t)):
        raise InputError("time grid must be a nonempty finite 1-D array")
    if t.size > 1 and np.any(np.diff(t) <= 0):
        raise InputError("time grid must be strictly increasing")
    return t


def propagators(A, times):
    """Shifted propagators ``exp(t (A - s I))`` and the shift ``s``."""
    A = as_matrix(A, "A", square=True)
    t = _times(times)
    s = float(np.max(np.linalg.eigvals(A).real))
    return expm_grid(A, t, shift=s), s


def _unit(x, norm, name):
    x = as_vector(x, name, nonzero=True)
    return x / vector_norm(x, norm)


def _denominator(E, yh, norm, times):
    den = vector_norm(E @ yh, norm, axis=-1)
    bad = ~(den > 0) | ~np.isfinite(den)
    if np.any(bad):
        raise RangeError(f"||exp(tA) y0|| underflowed at t={float(times[np.argmax(bad)]):.17g}")
    return den


def k_directional(A, y0, z0_dir, norm: Norm = P2, times=None, props=None) -> ConditionCurve:
    """Directional condition number ``||exp(tA) z0|| / ||exp(tA) y0_hat||``.

    Parameters
    ----------
    A : (n, n) array_like
    y0, z0_dir : (n,) array_like
        Initial value and perturbation direction (normalized internally).
    norm : Norm
    times : array_like, optional
        Strictly increasing grid; defaults to :func:`default_grid`.
    props : ndarray, optional
        Precomputed output of :func:`propagators` for ``times``.
    """
    A = as_matrix(A, "A", square=True)
    t = default_grid(A) if times is None else _times(times)
    E = propagators(A, t)[0] if props is None else props
    yh = _unit(y0, norm, "y0")
    zh = _unit(z0_dir, norm, "z0_dir")
    den = _denominator(E, yh, norm, t)
    val = vector_norm(E @ zh, norm, axis=-1) / den
    return ConditionCurve(t, val, {"kind": "K_directional", "norm": str(norm)})


def k_worst(A, y0, norm: Norm = P2, times=None, props=None) -> ConditionCurve:
    """Worst-case condition number ``||exp(tA)|| / ||exp(tA) y0_hat||``."""
    A = as_matrix(A, "A", square=True)
    t = default_grid(A) if times is None else _times(times)
    E = propagators(A, t)[0] if props is None else props
    yh = _unit(y0, norm, "y0")
    den = _denominator(E, yh, norm, t)
    val = induced_matrix_norm(E, norm) / den
    return ConditionCurve(t, np.atleast_1d(val), {"kind": "K", "norm": str(norm)})


def delta_curve(A, spec: PerturbationSpec, norm: Norm = P2, times=None, props=None):
    """Relative error ``delta(t)`` and absolute error ``||y~(t) - y(t)||``.

    Returns
    -------
    dict
        ``{"delta": ConditionCurve, "abs_err": ConditionCurve}``.
    """
    if spec.z0_dir is None:
        raise InputError("perturbation direction is required")
    A = as_matrix(A, "A", square=True)
    t = default_grid(A) if times is None else _times(times)
    if props is None:
        E, s = propagators(A, t)
    else:
        E, s = props, float(np.max(np.linalg.eigvals(A).real))
    K = k_directional(A, spec.y0, spec.z0_dir, norm, t, props=E)
    y0 = as_vector(spec.y0, "y0", nonzero=True)
    d = spec.epsilon * vector_norm(y0, norm) * _unit(spec.z0_dir, norm, "z0_dir")
    with np.errstate(over="ignore"):
        growth = np.exp(s * t)
        abs_err = vector_norm(E @ d, norm, axis=-1) * growth
    if not np.all(np.isfinite(abs_err)):
        raise RangeError("absolute error overflowed")
    meta = {"norm": str(norm), "epsilon": spec.epsilon}
    return {
        "delta": ConditionCurve(t, K.values * spec.epsilon, {**meta, "kind": "delta"}),
        "abs_err": ConditionCurve(t, abs_err, {**meta, "kind": "abs_err"}),
    }


def componentwise_errors(y, y_tilde, norm: Norm = P2, y0=None, y0_tilde=None) -> dict:
    """Componentwise versus normwise relative errors.

    Components of ``y`` (or ``y0``) equal to zero give NaN and are excluded
    from maxima. Norms of the ratio bounds use the plain p-norm.

    Returns
    -------
    dict
        ``delta_l``, ``delta``, ``ratio_l`` (``||y|| / |y_l|``),
        ``bound2_residual`` (``max delta_l - delta``),
        ``bound3_residual`` (min over l of ``ratio_l * delta - delta_l``),
        and when ``y0`` is given ``eps_l``, ``eps`` and ``bound1_residual``.
    """
    base = norm.base
    y = as_vector(y, "y", nonzero=True)
    yt = as_vector(y_tilde, "y_tilde", n=y.size)
    ay = np.abs(y)
    with np.errstate(divide="ignore", invalid="ignore"):
        dl = np.where(ay > 0, np.abs(yt - y) / ay, np.nan)
        ratio = np.where(ay > 0, vector_norm(y, base) / ay, np.nan)
    delta = vector_norm(yt - y, base) / vector_norm(y, base)
    out = {
        "delta_l": dl,
        "delta": delta,
        "ratio_l": ratio,
        "undefined": np.flatnonzero(ay == 0),
        "bound2_residual": float(np.nanmax(dl) - delta) if np.any(ay > 0) else np.nan,
        "bound3_residual": float(np.nanmin(ratio * delta - dl)) if np.any(ay > 0) else np.nan,
    }
    if y0 is not None:
        y0 = as_vector(y0, "y0", n=y.size, nonzero=True)
        y0t = as_vector(y0_tilde, "y0_tilde", n=y.size)
        a0 = np.abs(y0)
        with np.errstate(divide="ignore", invalid="ignore"):
            el = np.where(a0 > 0, np.abs(y0t - y0) / a0, np.nan)
        eps = vector_norm(y0t - y0, base) / vector_norm(y0, base)
        out.update(eps_l=el, eps=eps, bound1_residual=float(np.nanmax(el) - eps))
    return out


def transient_growth_bounds(A, y0, epsilon: float, norm: Norm = P2, times=None) -> dict:
    """Error bounds on the maximal transient growth.

    ``E`` is the grid maximum of ``K(t, y0) * epsilon``; ``E_inf`` the grid
    maximum of the asymptotic worst-case condition number times ``epsilon``.

    Returns
    -------
    dict
        ``E``, ``E_inf`` (None if unavailable), ``E_inf_reason`` and ``grid``.
    """
    from .asymptotic import AsymptoticModel

    A = as_matrix(A, "A", square=True)
    t = default_grid(A) if times is None else _times(times)
    E = float(k_worst(A, y0, norm, t).values.max() * epsilon)
    e_inf, reason = None, None
    try:
        model = AsymptoticModel.from_matrix(A, norm)
        e_inf = float(model.k_inf_worst(y0, t).values.max() * epsilon)
    except (RLGEError, UnsupportedStructureError) as exc:
        reason = str(exc)
    return {"E": E, "E_inf": e_inf, "E_inf_reason": reason,
            "grid": f"linspace({t[0]:g}, {t[-1]:g}, {t.size})"}


def _max_norm_on(A, y0, norm, t):
    from .linalg import mat_exp

    E = expm_grid(A, t)
    vals = vector_norm(E @ y0, norm, axis=-1)
    k = int(np.argmax(vals))
    best = float(vals[k])
    lo, hi = t[max(k - 1, 0)], t[min(k + 1, t.size - 1)]
    if hi > lo:
        res = minimize_scalar(lambda s: -vector_norm(mat_exp(A, s) @ y0, norm),
                              bounds=(lo, hi), method="bounded", options={"xatol": 1e-12})
        best = max(best, -float(res.fun))
    return best


def max_growth_error(A, y0, y0_tilde, norm: Norm = P2, times=None) -> dict:
    """Error in the maximal norm of the solution caused by perturbing ``y0``.

    Maxima are taken over a grid then refined locally.

    Returns
    -------
    dict
        ``max_y``, ``max_y_tilde``, ``abs_err`` and ``rel_err``
        (``(max ||y~|| - max ||y||) / max ||y||``).
    """
    A = as_matrix(A, "A", square=True)
    y0 = as_vector(y0, "y0", nonzero=True)
    yt = as_vector(y0_tilde, "y0_tilde", n=y0.size)
    t = default_grid(A, 50.0, 2001) if times is None else _times(times)
    m = _max_norm_on(A, y0, norm, t)
    mt = _max_norm_on(A, yt, norm, t)
    return {"max_y": m, "max_y_tilde": mt, "abs_err": mt - m, "rel_err": (mt - m) / m}
