"""Long-time condition numbers from the rightmost eigenstructure.

For large ``t`` the propagator behaves like ``exp(r1 t) t**(M1-1) Q1(t)``
with ``Q1(t) = sum_k exp(i omega_k t) col_k row_k``. The scalar factor
cancels in every condition number, so the asymptotic forms are

* directional: ``||Q1(t) z0|| / ||Q1(t) y0_hat||``
* worst case: ``||Q1(t)|| / ||Q1(t) y0_hat||``

When the rightmost level is a simple real eigenvalue both are constants.
For a simple conjugate pair they factor into a constant oscillation scale
factor (OSF) times a periodic oscillating term (OT) of period ``pi/omega``.
Under the 2-norm the OT admits closed forms in terms of the two scalars
``V1 = |v^T v|`` and ``W1 = |w w^T|`` of the normalized eigenvectors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .condition import ConditionCurve, default_grid
from .errors import InputError, RLGEError, UnsupportedStructureError
from .linalg import (P2, EigenDecomposition, Norm, as_matrix, as_vector, dual_row_norm,
                     eig_full, induced_matrix_norm, vector_norm)
from .spectrum import (COMPLEX_PAIR, NONGENERIC, REAL, LevelData, SpectralPartition,
                       characteristic_time, partition_spectrum, rightmost_data)

__all__ = [
    "Q1Operator",
    "q1_build",
    "q1_eval",
    "q1_apply",
    "AsymptoticModel",
    "k_inf_worst",
    "k_inf_directional",
    "theta_vec",
    "theta_mat",
    "theta_mat_norm",
    "osf",
    "EuclidGeometry",
    "euclid_geometry",
    "ot_bounds",
    "ot_extrema",
    "oscillation_cap",
]

ANGLE_TOL = 1e-6


@dataclass(frozen=True)
class Q1Operator:
    """``Q1(t) = sum_k exp(i omegas[k] t) outer(cols[:, k], rows[k])``.

    Attributes
    ----------
    kind : str
        ``"constant_rank_one"``, ``"oscillating_pair"``, ``"semisimple"``
        or ``"jordan"``.
    omegas : ndarray, shape (m,)
    cols : ndarray, shape (n, m)
    rows : ndarray, shape (m, n)
        Left rows whose action on ``u`` decides the RLGE condition.
    M1 : int
        Longest chain length on the rightmost level.
    r1 : float
        Rightmost real part.
    """

    kind: str
    omegas: np.ndarray
    cols: np.ndarray
    rows: np.ndarray
    M1: int = 1
    r1: float = 0.0

    @property
    def n(self) -> int:
        return self.cols.shape[0]

    @property
    def real(self) -> bool:
        """Whether ``Q1(t)`` is real for real ``t``."""
        return bool(getattr(self, "_real", False))

    def __post_init__(self):
        om = np.asarray(self.omegas, dtype=float).ravel()
        C = np.asarray(self.cols, dtype=complex)
        R = np.asarray(self.rows, dtype=complex)
        if C.ndim != 2 or R.ndim != 2 or C.shape[1] != om.size or R.shape[0] != om.size \
                or C.shape[0] != R.shape[1]:
            raise InputError("inconsistent Q1 term shapes")
        object.__setattr__(self, "omegas", om)
        object.__setattr__(self, "cols", C)
        object.__setattr__(self, "rows", R)
        # Real iff the term set is closed under conjugation.
        real = True
        for k in range(om.size):
            match = np.flatnonzero(np.isclose(om, -om[k], atol=1e-12, rtol=0))
            if not any(np.allclose(C[:, m], np.conj(C[:, k]), atol=1e-13 * (1 + np.abs(C).max()))
                       and np.allclose(R[m], np.conj(R[k]), atol=1e-13 * (1 + np.abs(R).max()))
                       for m in match):
                real = False
                break
        object.__setattr__(self, "_real", real)

    def phases(self, times):
        t = np.atleast_1d(np.asarray(times, dtype=float))
        return np.exp(1j * np.outer(t, self.omegas))

    def eval(self, times):
        """Stack of ``Q1(t)`` for each ``t``; shape ``(T, n, n)``."""
        P = self.phases(times)
        Q = np.einsum("tk,ik,kj->tij", P, self.cols, self.rows)
        return Q.real if self.real else Q

    def apply(self, times, u):
        """Stack of ``Q1(t) u``; shape ``(T, n)``."""
        u = np.asarray(u)
        P = self.phases(times)
        out = (P * (self.rows @ u)[None, :]) @ self.cols.T
        return out.real if self.real else out

    def margin(self, u, norm: Norm = P2) -> float:
        """Largest ``|row_k u_hat| / ||row_k||`` over the rows."""
        u = np.asarray(u)
        uh = u / vector_norm(u, norm)
        return float(max(abs(r @ uh) / dual_row_norm(r, norm, "complex") for r in self.rows))


def q1_build(dec: EigenDecomposition, part: SpectralPartition, norm: Norm | None = None) -> Q1Operator:
    """Assemble ``Q1`` from an eigendecomposition.

    A non-generic rightmost level is accepted only when the decomposition is
    trustworthy, in which case the level is treated as semisimple.

    Raises
    ------
    UnsupportedStructureError
        Non-generic rightmost level with an unreliable (near-defective)
        decomposition.
    """
    lv = part.levels[0]
    idx = list(lv.members)
    cols = dec.V[:, idx]
    rows = dec.W[idx]
    om = dec.values[idx].imag
    if lv.kind == REAL:
        kind = "constant_rank_one"
        om = np.zeros(1)
    elif lv.kind == COMPLEX_PAIR:
        kind = "oscillating_pair"
    else:
        if not dec.trustworthy:
            raise UnsupportedStructureError(
                f"rightmost level at real part {lv.r:.6g} is non-generic and the "
                f"eigendecomposition is unreliable (resid {dec.resid:.2e}); "
                "supply a Jordan structure")
        kind = "semisimple"
    return Q1Operator(kind, om, cols, rows, 1, lv.r)


def q1_eval(op: Q1Operator, t: float) -> np.ndarray:
    return op.eval([t])[0]


def q1_apply(op: Q1Operator, t: float, u) -> np.ndarray:
    return op.apply([t], u)[0]


# --- oscillating-pair representations -------------------------------------


def _need_pair(rm):
    if rm is None or rm.kind != COMPLEX_PAIR:
        raise InputError("requires a rightmost complex conjugate pair")


def theta_vec(rm: LevelData, times, u) -> np.ndarray:
    """``Re(exp(i (omega t + gamma(u))) v_hat)`` for each ``t``; shape ``(T, n)``.

    ``gamma(u)`` is the polar angle of ``w_hat u``.
    """
    _need_pair(rm)
    wu = rm.w_hat @ np.asarray(u)
    if wu == 0:
        raise RLGEError("angle of w_hat u undefined: w_hat u = 0", 0.0)
    g = np.angle(wu)
    t = np.atleast_1d(np.asarray(times, dtype=float))
    return np.real(np.exp(1j * (rm.omega * t + g))[:, None] * rm.v_hat[None, :])


def theta_mat(rm: LevelData, times) -> np.ndarray:
    """``Re(exp(i omega t) v_hat w_hat)`` for each ``t``; shape ``(T, n, n)``."""
    _need_pair(rm)
    t = np.atleast_1d(np.asarray(times, dtype=float))
    return np.real(np.exp(1j * rm.omega * t)[:, None, None] * np.outer(rm.v_hat, rm.w_hat)[None])


def _two_by_two_top(G, H):
    """Largest eigenvalue of ``G @ H`` for symmetric PSD 2x2 ``G`` (stack) and ``H``."""
    w, U = np.linalg.eigh(H)
    L = U * np.sqrt(np.maximum(w, 0.0))
    S = np.einsum("ki,tkl,lj->tij", L, G, L)
    a, d, b = S[..., 0, 0], S[..., 1, 1], 0.5 * (S[..., 0, 1] + S[..., 1, 0])
    return 0.5 * (a + d) + np.hypot(0.5 * (a - d), b)


def theta_mat_norm(rm: LevelData, times, norm: Norm | None = None) -> np.ndarray:
    """Induced norm of :func:`theta_mat` at each ``t``.

    Under the 2-norm the matrix has rank at most two and its norm comes from
    a 2x2 Gram product; other norms go through :func:`induced_matrix_norm`.
    """
    norm = rm.norm if norm is None else norm
    t = np.atleast_1d(np.asarray(times, dtype=float))
    if norm.p == 2.0:
        x = np.exp(1j * rm.omega * t)[:, None] * rm.v_hat[None, :]
        X = np.stack([x.real, x.imag], axis=-1)
        G = np.einsum("tki,tkj->tij", X, X)
        Y = np.vstack([rm.w_hat.real, -rm.w_hat.imag])
        H = Y @ Y.T
        return np.sqrt(_two_by_two_top(G, H))
    return np.atleast_1d(induced_matrix_norm(theta_mat(rm, t), norm))


def osf(rm: LevelData, y0, z0_dir=None) -> float:
    """Oscillation scale factor ``|w_hat z0_hat| / |w_hat y0_hat|`` (``1/|w_hat y0_hat|`` without ``z0``)."""
    norm = rm.norm
    y0 = as_vector(y0, "y0", n=rm.w.size, nonzero=True)
    d = abs(rm.w_hat @ (y0 / vector_norm(y0, norm)))
    if d == 0:
        raise RLGEError("y0 has no component along the rightmost eigenvector", 0.0)
    if z0_dir is None:
        return 1.0 / d
    z = as_vector(z0_dir, "z0_dir", n=rm.w.size, nonzero=True)
    return abs(rm.w_hat @ (z / vector_norm(z, norm))) / d


def oscillation_cap(V1: float) -> float:
    """``sqrt(2 / (1 - V1))``."""
    if V1 >= 1.0:
        raise UnsupportedStructureError("V1 = 1: singular geometry")
    return math.sqrt(2.0 / (1.0 - V1))


# --- Euclidean geometry ----------------------------------------------------


@dataclass(frozen=True)
class EuclidGeometry:
    """2-norm geometry of a rightmost conjugate pair.

    Attributes
    ----------
    V1, W1 : float
        ``|v_hat^T v_hat|`` and ``|w_hat w_hat^T|`` (plain transposes).
    phi_v, phi_w : float
        Arguments of ``v_hat^T v_hat`` and ``w_hat w_hat^T``.
    R1 : ndarray, shape (2, n)
        ``[Re w_hat; Im w_hat]``.
    sigma1, mu1 : float
        Singular values of ``R1``.
    alpha1, beta1 : ndarray, shape (2,)
        Left singular vectors.
    right_sv1, right_sv2 : ndarray, shape (n,)
        Right singular vectors.
    theta1 : float
        Polar angle of ``alpha1`` seen as a complex number, in ``(-pi/2, pi/2]``.
    """

    V1: float
    W1: float
    phi_v: float
    phi_w: float
    R1: np.ndarray
    sigma1: float
    mu1: float
    alpha1: np.ndarray
    beta1: np.ndarray
    right_sv1: np.ndarray
    right_sv2: np.ndarray
    theta1: float
    omega: float
    w_hat: np.ndarray
    v_hat: np.ndarray

    def c1(self, u) -> float:
        u = np.asarray(u)
        return float(np.real(self.right_sv1 @ (u / np.linalg.norm(u))))

    def d1(self, u) -> float:
        u = np.asarray(u)
        return float(np.real(self.right_sv2 @ (u / np.linalg.norm(u))))

    def gamma(self, u) -> float:
        return float(np.angle(self.w_hat @ np.asarray(u)))

    def osf(self, y0) -> float:
        """``sqrt(2 / ((1 + W1) c1^2 + (1 - W1) d1^2))`` for real ``y0``."""
        c, d = self.c1(y0), self.d1(y0)
        den = (1 + self.W1) * c * c + (1 - self.W1) * d * d
        if den <= 0:
            raise RLGEError("y0 has no component along the rightmost eigenvectors", 0.0)
        return math.sqrt(2.0 / den)

    def theta_vec_norm(self, times, u) -> np.ndarray:
        """``||Theta(t, u)||_2 = sqrt((1 + V1 cos(2 (omega t + gamma) + phi_v)) / 2)``."""
        t = np.atleast_1d(np.asarray(times, dtype=float))
        g = self.gamma(u)
        return np.sqrt(0.5 * (1.0 + self.V1 * np.cos(2 * (self.omega * t + g) + self.phi_v)))

    def theta_mat_norm(self, times) -> np.ndarray:
        """``||Theta(t)||_2`` from ``V1, W1`` and the two phases."""
        t = np.atleast_1d(np.asarray(times, dtype=float))
        c = self.V1 * np.cos(2 * self.omega * t + self.phi_v)
        s = self.V1 * np.sin(2 * self.omega * t + self.phi_v)
        G = 0.5 * np.stack([np.stack([1 + c, s], -1), np.stack([s, 1 - c], -1)], -2)
        cw = self.W1 * math.cos(self.phi_w)
        sw = self.W1 * math.sin(self.phi_w)
        H = 0.5 * np.array([[1 + cw, -sw], [-sw, 1 - cw]])
        return np.sqrt(_two_by_two_top(G, H))

    @property
    def k_cap(self) -> float:
        return oscillation_cap(self.V1)


def euclid_geometry(rm: LevelData) -> EuclidGeometry:
    """Geometry of the rightmost pair under the 2-norm (recomputed if ``rm`` uses another norm)."""
    _need_pair(rm)
    w = rm.w / np.linalg.norm(rm.w)
    v = rm.v / np.linalg.norm(rm.v)
    vv = v @ v
    ww = w @ w
    R1 = np.vstack([w.real, w.imag])
    U, S, Vh = np.linalg.svd(R1)
    V1 = float(min(abs(vv), 1.0))
    W1 = float(min(abs(ww), 1.0))
    a = U[:, 0]
    theta = float(np.arctan2(a[1], a[0]))
    if theta <= -np.pi / 2:
        theta += np.pi
    elif theta > np.pi / 2:
        theta -= np.pi
    return EuclidGeometry(V1, W1, float(np.angle(vv)), float(np.angle(ww)), R1,
                          float(S[0]), float(S[1]), U[:, 0], U[:, 1], Vh[0], Vh[1],
                          theta, rm.omega, w, v)


def _odd_half_pi(angle, tol=ANGLE_TOL):
    d = np.mod(angle, np.pi)
    return abs(d - np.pi / 2) <= tol


def ot_bounds(geom: EuclidGeometry, y0=None, z0_dir=None) -> dict:
    """Bounds on the oscillating term over all ``t``.

    With ``z0_dir`` the directional bounds are returned, otherwise the
    worst-case ones. ``attained`` reports whether the input angles make
    the bounds sharp (within 1e-6 rad).

    Returns
    -------
    dict
        ``lo``, ``hi``, ``attained`` (None if ``y0`` missing), ``kind``, ``k``.
    """
    V, W = geom.V1, geom.W1
    if V >= 1.0:
        raise UnsupportedStructureError("V1 = 1: singular geometry")
    if z0_dir is not None:
        lo = math.sqrt((1 - V) / (1 + V))
        hi = math.sqrt((1 + V) / (1 - V))
        att = None
        if y0 is not None:
            att = bool(_odd_half_pi(geom.gamma(z0_dir) - geom.gamma(y0)))
        kind = "directional"
    else:
        if V <= W:
            lo = math.sqrt((1 + W) * (1 - V) / (2 * (1 + V)))
        else:
            lo = math.sqrt((1 - W) / 2)
        hi = math.sqrt((1 + W) * (1 + V) / (2 * (1 - V)))
        att = None if y0 is None else bool(_odd_half_pi(geom.gamma(y0) - geom.theta1))
        kind = "worst"
    return {"lo": lo, "hi": hi, "attained": att, "kind": kind, "k": oscillation_cap(V)}


# --- model -----------------------------------------------------------------


@dataclass(frozen=True)
class AsymptoticModel:
    """Everything needed to evaluate asymptotic condition numbers.

    Build with :meth:`from_matrix` or, for a supplied Jordan structure, with
    :func:`relcond.models.jordan_model`.
    """

    q1: Q1Operator
    norm: Norm = P2
    A: np.ndarray | None = None
    dec: EigenDecomposition | None = None
    part: SpectralPartition | None = None
    rm: LevelData | None = None
    rlge_tol: float = 1e-8

    @classmethod
    def from_matrix(cls, A, norm: Norm = P2, tol_group: float = 1e-9,
                    rlge_tol: float = 1e-8, dec: EigenDecomposition | None = None):
        A = as_matrix(A, "A", square=True)
        dec = eig_full(A) if dec is None else dec
        part = partition_spectrum(dec.values, tol_group)
        return cls.from_decomposition(dec, part, norm, A=A, rlge_tol=rlge_tol)

    @classmethod
    def from_decomposition(cls, dec, part, norm: Norm = P2, A=None, rlge_tol=1e-8):
        q1 = q1_build(dec, part, norm)
        rm = rightmost_data(dec, part, norm) if part.levels[0].kind != NONGENERIC else None
        return cls(q1, norm, A, dec, part, rm, rlge_tol)

    @property
    def kind(self) -> str:
        return self.q1.kind

    @property
    def t_hat(self) -> float:
        if self.dec is not None:
            return characteristic_time(self.dec.values)
        return 1.0 / abs(self.q1.r1) if self.q1.r1 != 0 else 1.0

    @property
    def period(self) -> float:
        om = np.abs(self.q1.omegas)
        om = om[om > 0]
        return float(np.pi / om.min()) if om.size else math.inf

    def margin(self, u) -> float:
        if self.rm is not None:
            u = np.asarray(u)
            return float(abs(self.rm.w_hat @ (u / vector_norm(u, self.norm))))
        return self.q1.margin(u, self.norm)

    def rlge(self, u):
        m = self.margin(as_vector(u, "u", n=self.q1.n, nonzero=True))
        return m > self.rlge_tol, m

    def require_rlge(self, u, name="y0"):
        ok, m = self.rlge(u)
        if not ok:
            raise RLGEError(
                f"{name} violates the RLGE condition (margin {m:.3e} <= {self.rlge_tol:g}); "
                "asymptotic formulas for such inputs are not provided", m)
        return m

    def _grid(self, times):
        if times is None:
            if self.A is not None:
                return default_grid(self.A)
            return np.linspace(0.0, 50.0 * self.t_hat, 1000)
        return np.atleast_1d(np.asarray(times, dtype=float))

    def _method(self, method):
        if method == "auto":
            if self.rm is None:
                return "q1"
            return "constant" if self.rm.kind == REAL else "theta"
        if method in ("theta", "euclid") and (self.rm is None or self.rm.kind != COMPLEX_PAIR):
            raise InputError(f"method {method!r} requires a rightmost conjugate pair")
        if method == "euclid" and self.norm.p != 2.0:
            raise InputError("method 'euclid' requires the 2-norm")
        if method not in ("q1", "theta", "euclid", "constant"):
            raise InputError(f"unknown method {method!r}")
        if method == "constant" and (self.rm is None or self.rm.kind != REAL):
            raise InputError("method 'constant' requires a simple real rightmost eigenvalue")
        return method

    def k_inf_worst(self, y0, times=None, method: str = "auto") -> ConditionCurve:
        """Asymptotic worst-case condition number on ``times``."""
        y0 = as_vector(y0, "y0", n=self.q1.n, nonzero=True)
        self.require_rlge(y0, "y0")
        t = self._grid(times)
        m = self._method(method)
        yh = y0 / vector_norm(y0, self.norm)
        if m == "constant":
            val = np.full(t.size, 1.0 / abs(self.rm.w_hat @ yh))
        elif m == "theta":
            o = osf(self.rm, yh)
            val = o * theta_mat_norm(self.rm, t) / vector_norm(theta_vec(self.rm, t, yh),
                                                               self.norm, axis=-1)
        elif m == "euclid":
            g = euclid_geometry(self.rm)
            val = g.osf(y0) * g.theta_mat_norm(t) / g.theta_vec_norm(t, y0)
        else:
            Q = self.q1.eval(t)
            val = np.atleast_1d(induced_matrix_norm(Q, self.norm)) / \
                vector_norm(np.einsum("tij,j->ti", Q, yh), self.norm, axis=-1)
        return ConditionCurve(t, val, {"kind": "K_inf", "method": m, "norm": str(self.norm)})

    def k_inf_directional(self, y0, z0_dir, times=None, method: str = "auto") -> ConditionCurve:
        """Asymptotic directional condition number on ``times``."""
        y0 = as_vector(y0, "y0", n=self.q1.n, nonzero=True)
        z0 = as_vector(z0_dir, "z0_dir", n=self.q1.n, nonzero=True)
        self.require_rlge(y0, "y0")
        self.require_rlge(z0, "z0_dir")
        t = self._grid(times)
        m = self._method(method)
        yh = y0 / vector_norm(y0, self.norm)
        zh = z0 / vector_norm(z0, self.norm)
        if m == "constant":
            val = np.full(t.size, abs(self.rm.w_hat @ zh) / abs(self.rm.w_hat @ yh))
        elif m == "theta":
            num = vector_norm(theta_vec(self.rm, t, zh), self.norm, axis=-1)
            den = vector_norm(theta_vec(self.rm, t, yh), self.norm, axis=-1)
            val = osf(self.rm, yh, zh) * num / den
        elif m == "euclid":
            g = euclid_geometry(self.rm)
            o = abs(g.w_hat @ (z0 / np.linalg.norm(z0))) / abs(g.w_hat @ (y0 / np.linalg.norm(y0)))
            val = o * g.theta_vec_norm(t, z0) / g.theta_vec_norm(t, y0)
        else:
            val = vector_norm(self.q1.apply(t, zh), self.norm, axis=-1) / \
                vector_norm(self.q1.apply(t, yh), self.norm, axis=-1)
        return ConditionCurve(t, val, {"kind": "K_inf_directional", "method": m,
                                       "norm": str(self.norm)})

    def ot(self, y0, times, z0_dir=None) -> np.ndarray:
        """Oscillating term: K_inf divided by the OSF."""
        if self.rm is None or self.rm.kind != COMPLEX_PAIR:
            return np.ones(np.size(times))
        if z0_dir is None:
            c = self.k_inf_worst(y0, times)
            return c.values / osf(self.rm, y0)
        c = self.k_inf_directional(y0, z0_dir, times)
        return c.values / osf(self.rm, y0, z0_dir)


def k_inf_worst(model: AsymptoticModel, y0, times=None, method="auto") -> ConditionCurve:
    return model.k_inf_worst(y0, times, method)


def k_inf_directional(model: AsymptoticModel, y0, z0_dir, times=None,
                      method="auto") -> ConditionCurve:
    return model.k_inf_directional(y0, z0_dir, times, method)


def ot_extrema(model: AsymptoticModel, y0, z0_dir=None, samples: int = 720) -> dict:
    """Minimum and maximum of the asymptotic condition number over one period.

    Seeded by ``samples`` equally spaced points on ``[0, pi/omega)``, each
    extremum is refined by a bounded scalar search.

    Returns
    -------
    dict
        ``min``, ``max``, ``t_min``, ``t_max``, ``period``, ``osf``,
        ``ot_min``, ``ot_max``.
    """
    if model.rm is None or model.rm.kind != COMPLEX_PAIR:
        raise InputError("requires a rightmost conjugate pair")
    T = model.period
    t = np.linspace(0.0, T, samples, endpoint=False)
    dt = T / samples

    def f(s):
        s = np.atleast_1d(s)
        if z0_dir is None:
            return model.k_inf_worst(y0, s).values
        return model.k_inf_directional(y0, z0_dir, s).values

    vals = f(t)
    out = {}
    for sign, key in ((1.0, "min"), (-1.0, "max")):
        k = int(np.argmin(sign * vals))
        res = minimize_scalar(lambda s: sign * f(s)[0], bounds=(t[k] - dt, t[k] + dt),
                              method="bounded", options={"xatol": 1e-12 * max(T, 1.0)})
        if sign * res.fun < sign * vals[k]:
            out[key], out["t_" + key] = float(res.fun * sign), float(res.x % T)
        else:
            out[key], out["t_" + key] = float(vals[k]), float(t[k])
    o = osf(model.rm, y0, z0_dir)
    out.update(period=T, osf=o, ot_min=out["min"] / o, ot_max=out["max"] / o, samples=samples)
    return out
