"""Preset scenarios with reference values, and the supplied-Jordan-basis path.

Each preset bundles a matrix, initial data, a norm and a list of
:class:`Expected` reference values. :func:`evaluate_preset` recomputes every
quantity with the library and compares it against its reference.

Presets
-------
gdp-nd
    Two-dimensional growth model with eigenvalues 0.05 and 0.01.
building-heating
    Three-room heat exchange, symmetric tridiagonal matrix.
wall-model
    Four-node heat conduction chain, infinity norm.
magnetic
    Three-dimensional rotation with damping; rightmost conjugate pair.
hilbert
    ``A = H D H^{-1}`` with ``H`` the order-8 Hilbert matrix.
oscillating
    Rightmost pair ``+-i`` with nearly parallel real and imaginary parts.
jordan
    Defective 3x3 matrix with a supplied Jordan basis, 1-norm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import scipy.linalg
from scipy.optimize import bisect

from .asymptotic import AsymptoticModel, Q1Operator, euclid_geometry, ot_bounds, ot_extrema
from .condition import (PerturbationSpec, delta_curve, k_directional, k_worst,
                        max_growth_error, propagators)
from .errors import InputError
from .linalg import P1, P2, PINF, EigenDecomposition, Norm, as_matrix, expm_grid, vector_norm
from .onset import measured_onset, onset_time
from .spectrum import f_values, partition_spectrum, rlge_check

__all__ = [
    "Expected",
    "Check",
    "Scenario",
    "PRESETS",
    "preset",
    "preset_names",
    "evaluate_preset",
    "JordanStructure",
    "jordan_q1",
    "jordan_model",
    "building_heating_assemble",
    "threshold_time",
    "transient_growth_table",
]


@dataclass(frozen=True)
class Expected:
    """A reference value.

    ``mode`` is ``"rel"`` or ``"abs"`` (tolerance on the difference),
    ``"range"`` (``value`` is a ``(lo, hi)`` pair) or ``"le"`` (upper bound).
    """

    quantity: str
    value: object
    tol: float = 0.0
    mode: str = "rel"
    note: str = ""

    def check(self, computed) -> bool:
        c = float(computed)
        if not math.isfinite(c):
            return False
        if self.mode == "rel":
            return abs(c - self.value) <= self.tol * abs(self.value)
        if self.mode == "abs":
            return abs(c - self.value) <= self.tol
        if self.mode == "range":
            lo, hi = self.value
            return lo <= c <= hi
        if self.mode == "le":
            return c <= self.value
        raise InputError(f"unknown comparison mode {self.mode!r}")

    def describe(self) -> str:
        if self.mode == "range":
            return f"in [{self.value[0]:g}, {self.value[1]:g}]"
        if self.mode == "le":
            return f"<= {self.value:g}"
        sym = "rel" if self.mode == "rel" else "abs"
        return f"{self.value:.6g} ({sym} {self.tol:g})"


@dataclass(frozen=True)
class Check:
    quantity: str
    expected: Expected
    computed: float
    passed: bool


@dataclass(frozen=True)
class Scenario:
    """A preset problem.

    Attributes
    ----------
    name : str
    A : ndarray
    y0 : ndarray
    norm : Norm
    horizon : float
        End of the default time window.
    t_hat : float
        Characteristic time.
    y0_tilde, z0_dir : ndarray or None
    expected : tuple of Expected
    extra : dict
        Further inputs (alternative initial values, supplied bases, ...).
    """

    name: str
    A: np.ndarray
    y0: np.ndarray
    norm: Norm
    horizon: float
    t_hat: float
    y0_tilde: np.ndarray | None = None
    z0_dir: np.ndarray | None = None
    expected: tuple = ()
    extra: dict = field(default_factory=dict)
    description: str = ""

    def model(self) -> AsymptoticModel:
        """Asymptotic model, using a supplied basis when the preset carries one."""
        if "jordan" in self.extra:
            return jordan_model(self.extra["jordan"], self.norm)
        if "decomposition" in self.extra:
            dec = self.extra["decomposition"]
            return AsymptoticModel.from_decomposition(
                dec, partition_spectrum(dec.values), self.norm, A=self.A)
        return AsymptoticModel.from_matrix(self.A, self.norm)

    def grid(self, points: int = 1000) -> np.ndarray:
        return np.linspace(0.0, self.horizon, points)


# --- supplied Jordan bases --------------------------------------------------


@dataclass(frozen=True)
class JordanStructure:
    """Jordan basis ``V`` with chain layout ``blocks``.

    Columns of ``V`` are grouped chain by chain; within a chain of
    eigenvalue ``lam`` and length ``m`` the columns ``v_1, ..., v_m`` satisfy
    ``A v_1 = lam v_1`` and ``A v_k = lam v_k + v_{k-1}``.

    Parameters
    ----------
    V : (n, n) array_like
    blocks : sequence of (eigenvalue, length)
    W : (n, n) array_like, optional
        ``inv(V)`` if known exactly.
    """

    V: np.ndarray
    blocks: tuple
    W: np.ndarray | None = None

    def __post_init__(self):
        V = np.asarray(self.V)
        if V.ndim != 2 or V.shape[0] != V.shape[1]:
            raise InputError("Jordan basis must be square")
        blocks = tuple((complex(lam), int(m)) for lam, m in self.blocks)
        if any(m < 1 for _, m in blocks) or sum(m for _, m in blocks) != V.shape[0]:
            raise InputError("chain lengths must be positive and sum to the dimension")
        W = np.linalg.inv(V) if self.W is None else np.asarray(self.W)
        object.__setattr__(self, "V", V)
        object.__setattr__(self, "blocks", blocks)
        object.__setattr__(self, "W", W)

    @property
    def n(self) -> int:
        return self.V.shape[0]

    @property
    def J(self) -> np.ndarray:
        n = self.n
        real = all(lam.imag == 0 for lam, _ in self.blocks)
        J = np.zeros((n, n), dtype=float if real else complex)
        k = 0
        for lam, m in self.blocks:
            for i in range(m):
                J[k + i, k + i] = lam.real if real else lam
                if i:
                    J[k + i - 1, k + i] = 1.0
            k += m
        return J

    @property
    def A(self) -> np.ndarray:
        A = self.V @ self.J @ self.W
        return A.real if np.isrealobj(self.V) and np.isrealobj(A) else A

    @property
    def starts(self) -> list:
        out, k = [], 0
        for _, m in self.blocks:
            out.append(k)
            k += m
        return out

    @property
    def r1(self) -> float:
        return max(lam.real for lam, _ in self.blocks)

    @property
    def M1(self) -> int:
        return max(m for lam, m in self.blocks if abs(lam.real - self.r1) <= 1e-12 * (1 + abs(self.r1)))


def jordan_q1(js: JordanStructure) -> Q1Operator:
    """``Q1(t) = sum exp(i omega t) v_first w_last`` over the longest rightmost chains."""
    r1, M1 = js.r1, js.M1
    om, cols, rows = [], [], []
    for (lam, m), s in zip(js.blocks, js.starts):
        if abs(lam.real - r1) <= 1e-12 * (1 + abs(r1)) and m == M1:
            om.append(lam.imag)
            cols.append(js.V[:, s])
            rows.append(js.W[s + m - 1])
    return Q1Operator("jordan", np.array(om), np.array(cols).T, np.array(rows), M1, r1)


def jordan_model(js: JordanStructure, norm: Norm = P1, rlge_tol: float = 1e-8) -> AsymptoticModel:
    return AsymptoticModel(jordan_q1(js), norm, A=js.A, rlge_tol=rlge_tol)


# --- building heating -------------------------------------------------------


def building_heating_assemble(k, xg: float = 0.0, xa: float = 0.0, f=(0.0, 0.0, 0.0)) -> dict:
    """Matrix, forcing and equilibrium of the three-room heating model.

    Parameters
    ----------
    k : sequence of 5 floats
        ``(k_g1, k_a2, k_a3, k_12, k_23)``, all positive.
    xg, xa : float
        Ground and air temperatures.
    f : sequence of 3 floats
        Heater inputs.

    Returns
    -------
    dict
        ``A``, ``b`` and ``x_eq = -A^{-1} b``.
    """
    kg1, ka2, ka3, k12, k23 = (float(v) for v in k)
    if min(kg1, ka2, ka3, k12, k23) <= 0:
        raise InputError("all heat-exchange constants must be positive")
    A = np.array([[-kg1 - k12, k12, 0.0],
                  [k12, -ka2 - k12 - k23, k23],
                  [0.0, k23, -ka3 - k23]])
    f1, f2, f3 = (float(v) for v in f)
    b = np.array([kg1 * xg + f1, ka2 * xa + f2, ka3 * xa + f3])
    x_eq = -np.linalg.solve(A, b)
    assert np.all(np.isfinite(x_eq))
    return {"A": A, "b": b, "x_eq": x_eq}


def threshold_time(A, y0, level: float, norm: Norm = P2, t_max: float = 100.0,
                   points: int = 4001) -> float:
    """First time at which ``||exp(tA) y0||`` crosses ``level`` (grid scan plus bisection)."""
    t = np.linspace(0.0, t_max, points)
    vals = vector_norm(expm_grid(A, t) @ np.asarray(y0, dtype=float), norm, axis=-1) - level
    s = np.sign(vals)
    idx = np.flatnonzero(s[1:] != s[:-1])
    if idx.size == 0:
        raise InputError(f"norm does not cross {level} on [0, {t_max}]")
    i = int(idx[0])

    def g(x):
        return vector_norm(scipy.linalg.expm(x * np.asarray(A)) @ y0, norm) - level

    return float(bisect(g, t[i], t[i + 1], xtol=1e-13, maxiter=200))


# --- preset constructors ----------------------------------------------------


def _gdp_nd():
    A = np.array([[0.08, -0.07], [0.03, -0.02]])
    y0 = np.array([1.0, 0.61])
    exp = (
        Expected("eigenvalue_1", 0.05, 1e-12),
        Expected("eigenvalue_2", 0.01, 1e-12),
        Expected("K_inf_directional", 3.0035, 1e-3),
        Expected("K_inf_directional_B0_060", 2.29, 1e-2, note="initial value (1, 0.60)"),
        Expected("delta_ratio_t50", (1.8, 2.4), mode="range", note="delta(50)/delta(0)"),
        Expected("delta_limit", 0.025641, 1e-3, note="K_inf_directional * delta(0)"),
        Expected("rlge_margin_y0_11", 1e-12, mode="le", note="initial value (1, 1)"),
    )
    return Scenario("gdp-nd", A, y0, P2, 50.0, 20.0, np.array([1.0, 0.60]),
                    np.array([0.0, 1.0]), exp,
                    description="GDP Q and debt B; Q(0)=1, B(0)=0.61, simulated with B(0)=0.60")


def _building_heating():
    A = building_heating_assemble((0.5, 0.25, 0.25, 0.5, 1.0))["A"]
    y0 = np.array([3.5, -4.4, 2.5])
    yt = np.array([4.0, -4.0, 3.0])
    exp = (
        Expected("eigenvalue_1", -0.31519, 1e-4, "abs"),
        Expected("eigenvalue_2", -1.0560, 1e-4, "abs"),
        Expected("eigenvalue_3", -2.6288, 1e-4, "abs"),
        Expected("w_hat_1", -0.4462, 1e-3, "abs", "sign fixed so entries are negative"),
        Expected("w_hat_2", -0.6111, 1e-3, "abs"),
        Expected("w_hat_3", -0.6538, 1e-3, "abs"),
        Expected("K_inf_directional", 11.8648, 1e-3),
        Expected("K_inf", 12.1330, 1e-3),
        Expected("K_inf_swapped", 4.9195, 1e-3, note="roles of y0 and y0_tilde exchanged"),
        Expected("one_sign_bound", 2.2411, 1e-3, note="1/min|w_hat_k|"),
        Expected("delta_0", 0.1320, 1e-3),
        Expected("delta_max_ratio_6h", (11.0, 13.0), mode="range", note="max delta/delta(0) on [0,6]"),
        Expected("t_star", 1.6362, 1e-3, "abs", "||y(t)|| = 0.5"),
        Expected("t_tilde_star", 3.0876, 1e-3, "abs", "||y~(t)|| = 0.5"),
        Expected("norm_ratio_at_t_tilde_star", 2.3882, 1e-3),
        Expected("t_star_rel_error", 0.8871, 1e-3, "abs"),
        Expected("rlge_margin_singular_y0", 1e-4, mode="le", note="initial value (3.5, -5.2298, 2.5)"),
    )
    return Scenario("building-heating", A, y0, P2, 6.0, 1 / 0.315193, yt, None, exp,
                    {"singular_y0": np.array([3.5, -5.2298, 2.5])},
                    "basement, main floor and attic temperatures relative to equilibrium (hours)")


def _wall_model():
    A = np.array([[-5.7215, 5.7215, 0, 0],
                  [0.23076, -0.39276, 0.162, 0],
                  [0, 0.081, -0.162, 0.081],
                  [0, 0, 0.162, -0.91116]])
    y0 = np.array([1.0, 0.0, 0.0, 0.0])
    exp = (
        Expected("K_inf", 65.987, 1e-3),
        Expected("K_at_30_chars", 65.987, 1e-2),
    )
    return Scenario("wall-model", A, y0, PINF, 30 / 0.038938, 1 / 0.038938, None, None, exp,
                    description="heat conduction through a layered wall, infinity norm")


def _magnetic():
    A = np.array([[-0.4, -0.4, 1.3], [0.4, -0.8, -0.5], [-1.3, 0.5, -0.2]])
    v0 = np.array([0.5, 1.0, 0.5])
    exp = (
        Expected("eigenvalue_1_real", -0.3433, 1e-4, "abs"),
        Expected("eigenvalue_1_imag", 1.4326, 1e-4, "abs"),
        Expected("V1", 0.0587, 1e-2, "abs"),
        Expected("W1", 0.0937, 1e-2, "abs"),
        Expected("OSF", 5.92, 1e-2, "abs"),
        Expected("OT_max_dev_from_sqrt_half", 0.1, mode="le",
                 note="max |OT(t) - sqrt(1/2)| over a period"),
    )
    return Scenario("magnetic", A, v0, P2, 50 / 0.34335, 1 / 0.34335, None, None, exp,
                    description="damped rotation of a magnetic particle")


def _hilbert_exact(order=8, diag=None):
    diag = [Fraction(-(i + 1), 10) for i in range(order)] if diag is None else diag
    H = [[Fraction(1, i + j + 1) for j in range(order)] for i in range(order)]
    Hinv = scipy.linalg.invhilbert(order, exact=True)
    Hi = [[Fraction(int(Hinv[i][j])) for j in range(order)] for i in range(order)]
    A = [[sum(H[i][k] * diag[k] * Hi[k][j] for k in range(order)) for j in range(order)]
         for i in range(order)]
    return (np.array([[float(x) for x in row] for row in A]),
            np.array([[float(x) for x in row] for row in H]),
            np.array([[float(x) for x in row] for row in Hi]),
            np.array([float(d) for d in diag]))


def _hilbert():
    A, H, Hi, d = _hilbert_exact()
    dec = EigenDecomposition.from_basis(d, H, Hi, A=A)
    f_ref = (5.2554e5, 1.677e7, 1.6347e8, 7.1819e8, 1.6407e9, 2.0252e9, 1.2815e9, 3.2603e8)
    exp = tuple(Expected(f"f_{j + 1}", v, 1e-3) for j, v in enumerate(f_ref)) + (
        Expected("onset_f_term", 3.4629, 1e-3, note="max_j log(f_j/f_1)/((r_1-r_j) t_hat)"),
        Expected("measured_onset_chars_y0a", 5.0, mode="le", note="precision 0.1, y0 = ones"),
        Expected("measured_onset_chars_y0b", 5.0, mode="le", note="precision 0.1, y0 = (1,1,1,1,-1,-1,-1,-1)"),
        Expected("maxK_over_K_inf_y0a", 3.0, mode="le"),
        Expected("maxK_over_K_inf_y0b", 3.0, mode="le"),
    )
    return Scenario("hilbert", A, np.ones(8), P2, 500.0, 10.0, None, None, exp,
                    {"decomposition": dec, "y0b": np.array([1, 1, 1, 1, -1, -1, -1, -1.0])},
                    "A = H D H^-1, H Hilbert of order 8, D = diag(-0.1, ..., -0.8)")


def _oscillating():
    A = np.array([[-1.0, 20.0, -20.0], [0.0, 19.0, -20.0], [0.0, 18.1, -19.0]])
    g = euclid_geometry(AsymptoticModel.from_matrix(A, P2).rm)
    y0 = g.right_sv2 * np.sign(g.right_sv2[np.argmax(np.abs(g.right_sv2))])
    exp = (
        Expected("V1", 0.9988, 1e-3, "abs"),
        Expected("W1", 0.9986, 1e-3, "abs"),
        Expected("OSF", 38.1, 1e-2),
        Expected("a_min", 0.0263, 1e-2),
        Expected("a_max", 41.0, 1e-2),
        Expected("K_inf_max", 1563.0, 1e-2),
        Expected("K_inf_min", 1.0, 1e-2),
        Expected("f_1", 23.5245, 1e-3),
        Expected("f_2_over_f_1", 0.0601, 1e-3),
        Expected("onset_f_term", -2.8115, 1e-3, note="log(f_2/f_1)/((r_1-r_2) t_hat)"),
        Expected("onset_V1_term_example", 1.6844, 1e-3,
                 note="0.5*log(1/sqrt(1-V1)); the onset formula itself adds twice this"),
    )
    return Scenario("oscillating", A, y0, P2, 50.0, 1.0, None, None, exp,
                    description="rightmost pair +-i, y0 the second right singular vector of R1")


def _jordan():
    V = np.array([[0, 0, 1], [1, 0, -1], [-1, 1, 0]], dtype=float)
    W = np.array([[1, 1, 0], [1, 1, 1], [1, 0, 0]], dtype=float)
    js = JordanStructure(V, ((0.0, 2), (-1.0, 1)), W)
    ys = (np.array([-0.8, -2.9, 1.4]), np.array([-1.0, 1.0, 0.05]), np.array([1.0, 2.0, 3.0]))
    exp = []
    for k, y in enumerate(ys, start=1):
        exp.append(Expected(f"K_inf_y0_{k}", float(np.abs(y).sum() / abs(y.sum())), 1e-9,
                            note="||y0||_1 / |y01 + y02 + y03|"))
    for k in range(1, 4):
        exp.append(Expected(f"gap_ratio_25_50_y0_{k}", (1.6, 2.4), mode="range",
                            note="(K-K_inf)(25) / (K-K_inf)(50)"))
    exp.append(Expected("matrix_residual", 1e-12, mode="le", note="A - V J V^-1"))
    exp.append(Expected("chain_residual", 1e-12, mode="le", note="A v2 - r1 v2 - v1"))
    A = np.array([[-1, 0, 0], [2, 1, 1], [-1, -1, -1]], dtype=float)
    return Scenario("jordan", A, ys[0], P1, 50.0, 1.0, None, None, tuple(exp),
                    {"jordan": js, "y0s": ys}, "defective eigenvalue 0 with a chain of length 2")


PRESETS = {
    "gdp-nd": _gdp_nd,
    "building-heating": _building_heating,
    "wall-model": _wall_model,
    "magnetic": _magnetic,
    "hilbert": _hilbert,
    "oscillating": _oscillating,
    "jordan": _jordan,
}


def preset_names() -> list:
    return list(PRESETS)


def preset(name: str) -> Scenario:
    """Return the named :class:`Scenario`."""
    try:
        return PRESETS[name]()
    except KeyError:
        raise InputError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}") from None


# --- evaluation -------------------------------------------------------------


def _eval_gdp_nd(sc):
    m = sc.model()
    out = {"eigenvalue_1": m.dec.values[0].real, "eigenvalue_2": m.dec.values[1].real}
    out["K_inf_directional"] = m.k_inf_directional(sc.y0, sc.z0_dir, [0.0]).values[0]
    out["K_inf_directional_B0_060"] = m.k_inf_directional(sc.y0_tilde, sc.z0_dir, [0.0]).values[0]
    spec = PerturbationSpec.from_perturbed(sc.y0, sc.y0_tilde, sc.norm)
    d = delta_curve(sc.A, spec, sc.norm, [0.0, 50.0])["delta"].values
    out["delta_ratio_t50"] = d[1] / d[0]
    out["delta_limit"] = out["K_inf_directional"] * spec.epsilon
    out["rlge_margin_y0_11"] = rlge_check(m.rm, [1.0, 1.0])[1]
    return out


def _eval_building(sc):
    m = sc.model()
    out = {f"eigenvalue_{k + 1}": m.dec.values[k].real for k in range(3)}
    w = m.rm.w_hat * (-np.sign(m.rm.w_hat[0]))
    out.update({f"w_hat_{k + 1}": w[k] for k in range(3)})
    spec = PerturbationSpec.from_perturbed(sc.y0, sc.y0_tilde, sc.norm)
    out["K_inf_directional"] = m.k_inf_directional(sc.y0, spec.z0_dir, [0.0]).values[0]
    out["K_inf"] = m.k_inf_worst(sc.y0, [0.0]).values[0]
    out["K_inf_swapped"] = m.k_inf_worst(sc.y0_tilde, [0.0]).values[0]
    out["one_sign_bound"] = 1.0 / np.abs(m.rm.w_hat).min()
    t = np.linspace(0.0, 6.0, 601)
    d = delta_curve(sc.A, spec, sc.norm, t)["delta"].values
    out["delta_0"] = d[0]
    out["delta_max_ratio_6h"] = d.max() / d[0]
    ts = threshold_time(sc.A, sc.y0, 0.5, sc.norm, 20.0)
    tts = threshold_time(sc.A, sc.y0_tilde, 0.5, sc.norm, 20.0)
    E = scipy.linalg.expm(tts * sc.A)
    out["t_star"], out["t_tilde_star"] = ts, tts
    out["norm_ratio_at_t_tilde_star"] = (vector_norm(E @ sc.y0_tilde, sc.norm)
                                         / vector_norm(E @ sc.y0, sc.norm))
    out["t_star_rel_error"] = (tts - ts) / ts
    out["rlge_margin_singular_y0"] = rlge_check(m.rm, sc.extra["singular_y0"])[1]
    return out


def _eval_wall(sc):
    m = sc.model()
    out = {"K_inf": m.k_inf_worst(sc.y0, [0.0]).values[0]}
    out["K_at_30_chars"] = k_worst(sc.A, sc.y0, sc.norm, [30 * m.t_hat]).values[0]
    return out


def _eval_magnetic(sc):
    m = sc.model()
    g = euclid_geometry(m.rm)
    out = {"eigenvalue_1_real": m.rm.lam.real, "eigenvalue_1_imag": m.rm.lam.imag,
           "V1": g.V1, "W1": g.W1}
    ex = ot_extrema(m, sc.y0)
    out["OSF"] = ex["osf"]
    out["OT_max_dev_from_sqrt_half"] = max(abs(ex["ot_max"] - math.sqrt(0.5)),
                                           abs(ex["ot_min"] - math.sqrt(0.5)))
    return out


def _eval_hilbert(sc):
    m = sc.model()
    f = f_values(m.dec, m.part, m.norm).f
    out = {f"f_{j + 1}": f[j] for j in range(f.size)}
    ot = onset_time(m, sc.y0, 0.1)
    out["onset_f_term"] = max(r["log_f"] for r in ot["terms"])
    t = np.linspace(0.0, 50 * m.t_hat, 1000)
    for key, y in (("y0a", sc.y0), ("y0b", sc.extra["y0b"])):
        mo = measured_onset(m, y, 0.1, t)
        out[f"measured_onset_chars_{key}"] = math.inf if mo["t"] is None else mo["t_chars"]
        K = k_worst(sc.A, y, sc.norm, t).values
        out[f"maxK_over_K_inf_{key}"] = K.max() / m.k_inf_worst(y, [0.0]).values[0]
    return out


def _eval_oscillating(sc):
    m = sc.model()
    g = euclid_geometry(m.rm)
    b = ot_bounds(g, sc.y0)
    ex = ot_extrema(m, sc.y0)
    f = f_values(m.dec, m.part, m.norm).f
    ot = onset_time(m, sc.y0, 0.1, t_hat=1.0)
    return {"V1": g.V1, "W1": g.W1, "OSF": ex["osf"], "a_min": b["lo"], "a_max": b["hi"],
            "K_inf_max": ex["max"], "K_inf_min": ex["min"], "f_1": f[0],
            "f_2_over_f_1": f[1] / f[0], "onset_f_term": ot["terms"][0]["log_f"],
            "onset_V1_term_example": 0.5 * math.log(1.0 / math.sqrt(1.0 - g.V1))}


def _eval_jordan(sc):
    js = sc.extra["jordan"]
    m = sc.model()
    out = {}
    for k, y in enumerate(sc.extra["y0s"], start=1):
        Ki = m.k_inf_worst(y, [0.0]).values[0]
        out[f"K_inf_y0_{k}"] = Ki
        K = k_worst(sc.A, y, sc.norm, [25.0, 50.0]).values
        out[f"gap_ratio_25_50_y0_{k}"] = (K[0] - Ki) / (K[1] - Ki)
    out["matrix_residual"] = float(np.abs(js.A - sc.A).max())
    v1, v2 = js.V[:, 0], js.V[:, 1]
    out["chain_residual"] = float(np.abs(sc.A @ v2 - js.r1 * v2 - v1).max())
    return out


_EVALUATORS = {
    "gdp-nd": _eval_gdp_nd,
    "building-heating": _eval_building,
    "wall-model": _eval_wall,
    "magnetic": _eval_magnetic,
    "hilbert": _eval_hilbert,
    "oscillating": _eval_oscillating,
    "jordan": _eval_jordan,
}


def evaluate_preset(name: str) -> list:
    """Recompute every reference quantity of a preset.

    Returns
    -------
    list of Check
    """
    sc = preset(name)
    vals = _EVALUATORS[name](sc)
    return [Check(e.quantity, e, float(vals[e.quantity]), e.check(vals[e.quantity]))
            for e in sc.expected]


def transient_growth_table(a_values=(50.0, 500.0, 5000.0), norm: Norm = PINF) -> list:
    """Errors in the maximal growth of ``y' = [[-1, a], [0, -2]] y``.

    Uses ``y0 = (1, 1)`` and ``y0_tilde = (1.01, 0.99)``.

    Returns
    -------
    list of dict
        One row per ``a`` with ``abs_err``, ``rel_err``, ``E`` and ``E_inf``.
    """
    from .condition import transient_growth_bounds

    y0, yt = np.array([1.0, 1.0]), np.array([1.01, 0.99])
    eps = vector_norm(yt - y0, norm) / vector_norm(y0, norm)
    rows = []
    for a in a_values:
        A = np.array([[-1.0, a], [0.0, -2.0]])
        g = max_growth_error(A, y0, yt, norm)
        b = transient_growth_bounds(A, y0, eps, norm)
        rows.append({"a": a, **g, "E": b["E"], "E_inf": b["E_inf"], "epsilon": eps})
    return rows
