"""How soon the direct condition numbers settle onto their asymptotic forms.

For a generic spectrum with levels ``1..q`` the relative gap between the
direct and asymptotic condition numbers is controlled by

    eps(t, u) = sum_{j>=2} exp((r_j - r_1) t) (f_j / f_1) (|w_j u| / |w_1 u|) G_j(t, u)
    eps(t)    = sum_{j>=2} exp((r_j - r_1) t) (f_j / f_1) G_j(t)

where ``G_j`` depends on whether level ``j`` and level 1 are real or
complex pairs. Whenever ``eps(t, y0) < 1``

    |K(t, y0) / K_inf(t, y0) - 1| <= (eps(t) + eps(t, y0)) / (1 - eps(t, y0))

and similarly for the directional numbers with ``eps(t, z0)`` in place of
``eps(t)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .asymptotic import AsymptoticModel, euclid_geometry, theta_mat_norm, theta_vec
from .condition import k_directional, k_worst, propagators
from .errors import InputError, UnsupportedStructureError
from .linalg import as_vector, vector_norm
from .spectrum import COMPLEX_PAIR, REAL, LevelData, f_values, level_data

__all__ = [
    "OnsetReport",
    "g_terms",
    "g_bounds",
    "eps_curves",
    "onset_time",
    "measured_onset",
]


def _levels(model: AsymptoticModel):
    if model.dec is None or model.part is None or model.rm is None:
        raise UnsupportedStructureError("onset analysis needs a generic eigendecomposition")
    if not model.part.generic:
        raise UnsupportedStructureError("onset analysis needs every level to be generic")
    return [level_data(model.dec, model.part, j, model.norm) for j in range(model.part.q)]


def _theta_u_norm(ld: LevelData, t, u, norm):
    wu = ld.w_hat @ u
    if wu == 0:
        return np.zeros(t.size)
    return vector_norm(theta_vec(ld, t, u), norm, axis=-1)


def g_terms(model: AsymptoticModel, times, u=None, levels=None) -> dict:
    """Case-dependent factors ``G_j`` for ``j = 2..q``.

    Returns
    -------
    dict
        ``"G"``: array ``(q-1, T)`` of ``G_j(t)``; ``"G_u"``: array of
        ``G_j(t, u)`` or None; ``"cases"``: list of ``(kind_j, kind_1)``.
    """
    lv = _levels(model) if levels is None else levels
    norm = model.norm
    t = np.atleast_1d(np.asarray(times, dtype=float))
    l1 = lv[0]
    c1 = l1.kind == COMPLEX_PAIR
    if u is not None:
        u = as_vector(u, "u", n=l1.w.size, nonzero=True)
        u = u / vector_norm(u, norm)
    if c1:
        th1 = theta_mat_norm(l1, t, norm)
        th1u = _theta_u_norm(l1, t, u, norm) if u is not None else None
    G, Gu, cases = [], [], []
    for lj in lv[1:]:
        cj = lj.kind == COMPLEX_PAIR
        cases.append((lj.kind, l1.kind))
        if not cj and not c1:
            G.append(np.ones(t.size))
            Gu.append(np.ones(t.size))
            continue
        if cj:
            thj = theta_mat_norm(lj, t, norm)
            thju = _theta_u_norm(lj, t, u, norm) if u is not None else None
        with np.errstate(divide="ignore", invalid="ignore"):
            if cj and not c1:
                G.append(2 * thj)
                Gu.append(2 * thju if u is not None else None)
            elif c1 and not cj:
                G.append(1.0 / (2 * th1))
                Gu.append(1.0 / (2 * th1u) if u is not None else None)
            else:
                G.append(thj / th1)
                Gu.append(thju / th1u if u is not None else None)
    G = np.array(G).reshape(len(lv) - 1, t.size)
    Gu = np.array(Gu, dtype=float).reshape(len(lv) - 1, t.size) if u is not None else None
    return {"G": G, "G_u": Gu, "cases": cases}


def g_bounds(model: AsymptoticModel, levels=None) -> list:
    """Closed-form upper bounds on each ``G_j(t, u)`` and ``G_j(t)``.

    The complex-level bounds assume the 2-norm; for other norms only the
    real/real and complex/real cases are bounded.

    Returns
    -------
    list of dict
        ``{"u": bound on G_j(t,u), "worst": bound on G_j(t)}`` per ``j >= 2``.
    """
    lv = _levels(model) if levels is None else levels
    l1 = lv[0]
    out = []
    p2 = model.norm.p == 2.0
    if l1.kind == COMPLEX_PAIR and p2:
        g1 = euclid_geometry(l1)
        V1, W1 = g1.V1, g1.W1
        a = (1 - V1) * (1 + W1) if V1 <= W1 else (1 + V1) * (1 - W1)
    for lj in lv[1:]:
        if lj.kind == REAL and l1.kind == REAL:
            out.append({"u": 1.0, "worst": 1.0})
        elif l1.kind == REAL:
            out.append({"u": 2.0, "worst": 2.0})
        elif not p2:
            out.append({"u": math.inf, "worst": math.inf})
        elif lj.kind == REAL:
            out.append({"u": math.sqrt(1 / (2 * (1 - V1))), "worst": math.sqrt(1 / a)})
        else:
            gj = euclid_geometry(lj)
            out.append({"u": math.sqrt((1 + gj.V1) / (1 - V1)),
                        "worst": math.sqrt((1 + gj.W1) * (1 + gj.V1) / a)})
    return out


@dataclass(frozen=True)
class OnsetReport:
    """Curves bounding the gap between direct and asymptotic condition numbers.

    Precision curves are ``inf`` where ``eps(t, y0) >= 1`` (no guarantee).
    """

    times: np.ndarray
    eps_y: np.ndarray
    eps_worst: np.ndarray
    precision_worst: np.ndarray
    eps_z: np.ndarray | None = None
    precision_directional: np.ndarray | None = None
    t_star: float | None = None
    formula_t_star: float | None = None
    meta: dict = field(default_factory=dict)


def _eps_sum(lv, f, times, G, weights):
    r1 = lv[0].r
    t = times
    out = np.zeros(t.size)
    for k, lj in enumerate(lv[1:]):
        out += np.exp((lj.r - r1) * t) * (f[k + 1] / f[0]) * weights[k] * G[k]
    return out


def _precision(eps_a, eps_y):
    with np.errstate(divide="ignore", invalid="ignore"):
        p = (eps_a + eps_y) / (1.0 - eps_y)
    return np.where(eps_y < 1.0, p, np.inf)


def eps_curves(model: AsymptoticModel, y0, z0_dir=None, times=None,
               target: float | None = None) -> OnsetReport:
    """Evaluate ``eps(t, y0)``, ``eps(t)`` and the precision guarantees.

    Parameters
    ----------
    model : AsymptoticModel
    y0, z0_dir : array_like
    times : array_like, optional
        Defaults to 1000 points over 50 characteristic times.
    target : float, optional
        If given, ``t_star`` is the first grid time with worst-case
        precision at most ``target``.
    """
    lv = _levels(model)
    t = model._grid(times)
    y0 = as_vector(y0, "y0", n=lv[0].w.size, nonzero=True)
    model.require_rlge(y0)
    f = f_values(model.dec, model.part, model.norm).f
    norm = model.norm
    yh = y0 / vector_norm(y0, norm)

    def weights(u):
        d = abs(lv[0].w_hat @ u)
        return [abs(lj.w_hat @ u) / d for lj in lv[1:]]

    if len(lv) == 1:
        z = np.zeros(t.size)
        ez = z if z0_dir is not None else None
        return OnsetReport(t, z, z, z.copy(), ez, z.copy() if z0_dir is not None else None,
                           float(t[0]) if target is not None else None, 0.0,
                           {"q": 1, "norm": str(norm)})
    gy = g_terms(model, t, yh, lv)
    eps_y = _eps_sum(lv, f, t, gy["G_u"], weights(yh))
    eps_w = _eps_sum(lv, f, t, gy["G"], [1.0] * (len(lv) - 1))
    prec_w = _precision(eps_w, eps_y)
    eps_z = prec_d = None
    if z0_dir is not None:
        z0 = as_vector(z0_dir, "z0_dir", n=y0.size, nonzero=True)
        model.require_rlge(z0, "z0_dir")
        zh = z0 / vector_norm(z0, norm)
        gz = g_terms(model, t, zh, lv)
        eps_z = _eps_sum(lv, f, t, gz["G_u"], weights(zh))
        prec_d = _precision(eps_z, eps_y)
    t_star = None
    if target is not None:
        ok = np.flatnonzero(prec_w <= target)
        t_star = float(t[ok[0]]) if ok.size else None
    return OnsetReport(t, eps_y, eps_w, prec_w, eps_z, prec_d, t_star, None,
                       {"q": len(lv), "norm": str(norm), "f": f.tolist()})


def onset_time(model: AsymptoticModel, y0, target: float, t_hat: float | None = None) -> dict:
    """Closed-form time after which the worst-case precision is at most ``target``.

    The value is expressed in units of ``t_hat`` (default: the
    characteristic time) and equals the maximum over ``j >= 2`` of

        (log 2 + log((2 + e)/e) + log(q - 1) [+ 0.5 log(1/(1 - V1))]
         + log(f_j/f_1) + max(0, log(|w_j y0| / |w_1 y0|))) / ((r_1 - r_j) t_hat)

    with the bracketed term present when the rightmost level is a
    conjugate pair (2-norm only).

    Returns
    -------
    dict
        ``value`` (None if unavailable), ``reason``, ``t_hat`` and
        ``terms``, a list of per-level dicts with each summand already
        divided by ``(r_1 - r_j) t_hat``.
    """
    if not target > 0:
        raise InputError("target precision must be positive")
    lv = _levels(model)
    t_hat = model.t_hat if t_hat is None else float(t_hat)
    if not t_hat > 0:
        raise InputError("t_hat must be positive")
    q = len(lv)
    if q == 1:
        return {"value": 0.0, "reason": None, "t_hat": t_hat, "terms": []}
    l1 = lv[0]
    extra = 0.0
    if l1.kind == COMPLEX_PAIR:
        if model.norm.p != 2.0:
            return {"value": None, "t_hat": t_hat, "terms": [],
                    "reason": "no onset formula for a rightmost conjugate pair outside the 2-norm"}
        extra = 0.5 * math.log(1.0 / (1.0 - euclid_geometry(l1).V1))
    y0 = as_vector(y0, "y0", n=l1.w.size, nonzero=True)
    model.require_rlge(y0)
    yh = y0 / vector_norm(y0, model.norm)
    f = f_values(model.dec, model.part, model.norm).f
    d1 = abs(l1.w_hat @ yh)
    terms = []
    for j, lj in enumerate(lv[1:], start=1):
        s = (l1.r - lj.r) * t_hat
        dj = abs(lj.w_hat @ yh)
        parts = {
            "log2": math.log(2.0),
            "log_target": math.log((2.0 + target) / target),
            "log_q": math.log(q - 1),
            "log_V1": extra,
            "log_f": math.log(f[j] / f[0]),
            "log_w": max(0.0, math.log(dj / d1)) if dj > 0 else 0.0,
        }
        row = {k: v / s for k, v in parts.items()}
        row["j"] = j + 1
        row["total"] = sum(parts.values()) / s
        terms.append(row)
    return {"value": max(r["total"] for r in terms), "reason": None,
            "t_hat": t_hat, "terms": terms}


def measured_onset(model: AsymptoticModel, y0, target: float, times=None,
                   z0_dir=None) -> dict:
    """First grid time from which ``|K / K_inf - 1| <= target`` holds to the end of the grid.

    Returns
    -------
    dict
        ``t`` (None if never), ``t_chars`` (in characteristic times),
        ``deviation`` (the curve), ``times``.
    """
    if model.A is None:
        raise InputError("measured onset needs the matrix")
    t = model._grid(times)
    E, _ = propagators(model.A, t)
    if z0_dir is None:
        K = k_worst(model.A, y0, model.norm, t, props=E).values
        Ki = model.k_inf_worst(y0, t).values
    else:
        K = k_directional(model.A, y0, z0_dir, model.norm, t, props=E).values
        Ki = model.k_inf_directional(y0, z0_dir, t).values
    dev = np.abs(K / Ki - 1.0)
    bad = np.flatnonzero(dev > target)
    if bad.size == 0:
        k = 0
    elif bad[-1] == t.size - 1:
        k = None
    else:
        k = int(bad[-1] + 1)
    tt = None if k is None else float(t[k])
    return {"t": tt, "t_chars": None if tt is None else tt / model.t_hat,
            "deviation": dev, "times": t}
