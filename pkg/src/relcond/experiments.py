"""Seeded Monte-Carlo studies.

Every instance ``i`` draws from its own generator,
``numpy.random.Generator(PCG64(SeedSequence(seed, spawn_key=(i,))))``, and
normal variates come from ``Generator.standard_normal``. Instances that do
not meet a study's requirements are redrawn from the same stream and the
rejections are tallied by reason. Results are ordered by instance index, so
output does not depend on the number of worker processes.
"""

from __future__ import annotations

import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial

import numpy as np
import scipy.linalg

from .asymptotic import AsymptoticModel, euclid_geometry
from .condition import k_worst
from .errors import InputError, RangeError, RLGEError, UnsupportedStructureError
from .linalg import P2, Norm, eig_full
from .spectrum import COMPLEX_PAIR, REAL, f_values, partition_spectrum

__all__ = [
    "RNG_ALGORITHM",
    "instance_rng",
    "StatSummary",
    "summarize",
    "StudyResult",
    "sample_gaussian_instance",
    "sample_qut_instance",
    "SAMPLERS",
    "census_v1w1",
    "ratio_r_study",
    "componentwise_ratio_study",
    "fj_maxima_study",
]

RNG_ALGORITHM = "PCG64 seeded by SeedSequence(seed, spawn_key=(instance,)); ziggurat normals"


def instance_rng(seed: int, stream: int) -> np.random.Generator:
    """Independent generator for instance ``stream``."""
    ss = np.random.SeedSequence(int(seed), spawn_key=(int(stream),))
    return np.random.Generator(np.random.PCG64(ss))


@dataclass(frozen=True)
class StatSummary:
    """Order statistics (nearest rank) and mean of a sample."""

    count: int
    min: float
    max: float
    median: float
    decile1: float
    decile9: float
    percentile99: float
    mean: float

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def summarize(x) -> StatSummary:
    x = np.asarray(x, dtype=float).ravel()
    if x.size == 0:
        nan = float("nan")
        return StatSummary(0, nan, nan, nan, nan, nan, nan, nan)

    def q(p):
        return float(np.percentile(x, p, method="inverted_cdf"))

    return StatSummary(int(x.size), float(x.min()), float(x.max()), q(50), q(10), q(90), q(99),
                       float(x.mean()))


@dataclass
class StudyResult:
    """Per-instance records plus aggregate statistics.

    Attributes
    ----------
    records : dict of str -> ndarray
        Equal-length columns, one row per instance.
    summary : dict of str -> StatSummary
    extra : dict
        Exceedance percentages and similar aggregates.
    tallies : dict
        Rejected draws by reason, plus ``"draws"``.
    meta : dict
        Seed, trial count, dimension, norm, grid.
    """

    records: dict
    summary: dict
    extra: dict = field(default_factory=dict)
    tallies: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    @property
    def rejection_rate(self) -> float:
        d = self.tallies.get("draws", 0)
        return (d - self.meta.get("trials", 0)) / d if d else 0.0


# --- samplers ---------------------------------------------------------------


def sample_gaussian_instance(n: int, rng: np.random.Generator):
    """``A`` and ``y0`` with i.i.d. standard normal entries."""
    if n < 2:
        raise InputError("n must be at least 2")
    A = rng.standard_normal((n, n))
    y0 = rng.standard_normal(n)
    return A, y0


def sample_qut_instance(n: int, rng: np.random.Generator):
    """``A = Q U Q^T`` with ``Q`` orthogonal and ``U`` upper triangular.

    ``Q`` comes from the QR factorization of a standard normal matrix with
    signs fixed so that ``R`` has a positive diagonal; ``U`` has standard
    normal entries on and above the diagonal.
    """
    if n < 2:
        raise InputError("n must be at least 2")
    G = rng.standard_normal((n, n))
    Q, R = np.linalg.qr(G)
    Q = Q * np.sign(np.diag(R))[None, :]
    U = np.triu(rng.standard_normal((n, n)))
    y0 = rng.standard_normal(n)
    return Q @ U @ Q.T, y0


def _sample_symmetric(n, rng):
    G = rng.standard_normal((n, n))
    return (G + G.T) / math.sqrt(2.0), rng.standard_normal(n)


SAMPLERS = {
    "gaussian": sample_gaussian_instance,
    "qut": sample_qut_instance,
    "symmetric": _sample_symmetric,
}


def _run(fn, trials, workers):
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            return list(ex.map(fn, range(trials), chunksize=max(1, trials // (8 * workers))))
    return [fn(i) for i in range(trials)]


def _merge_tallies(rows, trials):
    c = Counter()
    for r in rows:
        c.update(r["tally"])
    c["draws"] = int(c.get("draws", 0))
    return dict(c)


# --- V1 / W1 census ---------------------------------------------------------


def _census_one(i, n, seed, sampler, max_draws=10_000):
    rng = instance_rng(seed, i)
    tally = Counter()
    for _ in range(max_draws):
        tally["draws"] += 1
        A, _ = SAMPLERS[sampler](n, rng)
        dec = eig_full(A)
        part = partition_spectrum(dec.values)
        lv = part.levels[0]
        if lv.kind != COMPLEX_PAIR:
            tally["real" if lv.kind == REAL else "nongeneric"] += 1
            continue
        g = euclid_geometry(AsymptoticModel.from_decomposition(dec, part, P2).rm)
        return {"V1": g.V1, "W1": g.W1, "tally": tally}
    raise RuntimeError("too many rejected draws")


def census_v1w1(n: int, trials: int, seed: int = 0, thresholds=(0.9, 0.99, 0.999, 0.9999),
                sampler: str = "gaussian", workers: int | None = None) -> StudyResult:
    """Distribution of ``V1`` and ``W1`` over instances with a rightmost conjugate pair.

    ``extra["pct_V1_gt"]`` maps each threshold to the percentage of
    instances with ``V1`` above it.
    """
    rows = _run(partial(_census_one, n=n, seed=seed, sampler=sampler), trials, workers)
    V1 = np.array([r["V1"] for r in rows])
    W1 = np.array([r["W1"] for r in rows])
    pct = {float(th): float(100.0 * np.mean(V1 > th)) for th in thresholds}
    return StudyResult({"V1": V1, "W1": W1}, {"V1": summarize(V1), "W1": summarize(W1)},
                       {"pct_V1_gt": pct}, _merge_tallies(rows, trials),
                       {"study": "census", "n": n, "trials": trials, "seed": seed,
                        "sampler": sampler, "rng": RNG_ALGORITHM})


# --- ratio R ----------------------------------------------------------------


def _ratio_one(i, n, seed, norm, sampler, rightmost, chars, points, max_draws=10_000):
    rng = instance_rng(seed, i)
    tally = Counter()
    want = {"real": REAL, "complex": COMPLEX_PAIR}.get(rightmost)
    if rightmost == "balanced":
        want = REAL if i % 2 == 0 else COMPLEX_PAIR
    for _ in range(max_draws):
        tally["draws"] += 1
        A, y0 = SAMPLERS[sampler](n, rng)
        dec = eig_full(A)
        part = partition_spectrum(dec.values)
        kind = part.levels[0].kind
        if kind not in (REAL, COMPLEX_PAIR):
            tally["nongeneric"] += 1
            continue
        if want is not None and kind != want:
            tally["kind"] += 1
            continue
        try:
            model = AsymptoticModel.from_decomposition(dec, part, norm, A=A)
            t_hat = model.t_hat
            t = np.linspace(0.0, chars * t_hat, points)
            Ki = model.k_inf_worst(y0, t).values
            K = k_worst(A, y0, norm, t).values
        except RLGEError:
            tally["rlge"] += 1
            continue
        except (RangeError, UnsupportedStructureError):
            tally["numeric"] += 1
            continue
        return {"R": float(K.max() / Ki.max()), "kind": kind, "maxK": float(K.max()),
                "maxKinf": float(Ki.max()), "r1": float(part.levels[0].r), "tally": tally}
    raise RuntimeError("too many rejected draws")


def ratio_r_study(n: int, trials: int, seed: int = 0, norm: Norm = P2, sampler: str = "gaussian",
                  rightmost: str = "auto", chars: float = 50.0, points: int = 1000,
                  workers: int | None = None) -> StudyResult:
    """Ratio of grid maxima ``max K(t, y0) / max K_inf(t, y0)`` over ``[0, chars * t_hat]``.

    Parameters
    ----------
    rightmost : {"auto", "balanced", "real", "complex", "any"}
        Which rightmost structure to keep. ``"balanced"`` alternates real
        (even instances) and conjugate pair (odd instances). ``"auto"`` is
        ``"balanced"`` for the gaussian sampler and ``"any"`` otherwise
        (the other samplers have real spectra).
    """
    if sampler not in SAMPLERS:
        raise InputError(f"unknown sampler {sampler!r}")
    if rightmost not in ("auto", "balanced", "real", "complex", "any"):
        raise InputError(f"unknown rightmost filter {rightmost!r}")
    if rightmost == "auto":
        rightmost = "balanced" if sampler == "gaussian" else "any"
    fn = partial(_ratio_one, n=n, seed=seed, norm=norm, sampler=sampler, rightmost=rightmost,
                 chars=chars, points=points)
    rows = _run(fn, trials, workers)
    R = np.array([r["R"] for r in rows])
    kinds = np.array([r["kind"] for r in rows])
    rec = {"R": R, "kind": kinds, "maxK": np.array([r["maxK"] for r in rows]),
           "maxKinf": np.array([r["maxKinf"] for r in rows]),
           "r1": np.array([r["r1"] for r in rows])}
    summ = {"R": summarize(R)}
    for k in (REAL, COMPLEX_PAIR):
        if np.any(kinds == k):
            summ[f"R_{k}"] = summarize(R[kinds == k])
    extra = {"frac_R_gt_10": float(np.mean(R > 10)), "frac_R_gt_100": float(np.mean(R > 100))}
    return StudyResult(rec, summ, extra, _merge_tallies(rows, trials),
                       {"study": "ratio", "n": n, "trials": trials, "seed": seed,
                        "norm": str(norm), "sampler": sampler, "rightmost": rightmost,
                        "grid": f"linspace(0, {chars:g}*t_hat, {points})", "rng": RNG_ALGORITHM})


# --- componentwise ratios ---------------------------------------------------


def _gdpnd_one(i, seed, t, a22_sign=1.0):
    rng = instance_rng(seed, i)
    c = rng.uniform(0.01, 0.10, size=4)
    B0 = rng.uniform(0.0, 1.0)
    A = np.array([[c[0], -c[1]], [c[2], a22_sign * c[3]]])
    y = scipy.linalg.expm(t * A) @ np.array([1.0, B0])
    nrm = float(np.linalg.norm(y))
    with np.errstate(divide="ignore"):
        R = float(max(nrm / abs(y[0]), nrm / abs(y[1])))
    return {"R": R, "B0": B0, "a11": c[0], "a12": -c[1], "a21": c[2], "a22": a22_sign * c[3],
            "tally": Counter(draws=1)}


def _general_one(i, seed, n, times, Ms):
    rng = instance_rng(seed, i)
    A, y0 = sample_gaussian_instance(n, rng)
    out = {"tally": Counter(draws=1)}
    for t in times:
        y = scipy.linalg.expm(t * A) @ y0
        ay = np.abs(y)
        with np.errstate(divide="ignore"):
            ratio = ay.max() / ay
        out[f"R_t{t:g}"] = float(ratio.max())
        for M in Ms:
            out[f"r_t{t:g}_M{M:g}"] = float(np.mean(ratio > M))
    return out


def componentwise_ratio_study(kind: str = "gdpnd", trials: int = 2000, seed: int = 0,
                              n: int = 100, times=(0.1, 1.0, 10.0), Ms=(10.0, 100.0),
                              t_gdpnd: float = 50.0, a22_sign: float = 1.0,
                              workers: int | None = None) -> StudyResult:
    """How often components are small relative to the solution norm.

    ``kind="gdpnd"``: random growth models with ``a11, -a12, a21`` and
    ``a22_sign * a22`` on ``[0.01, 0.10]``, ``Q(0) = 1``, ``B(0)`` on
    ``[0, 1]``; records ``R = max(||y||_2/|Q|, ||y||_2/|B|)`` at ``t_gdpnd``.

    ``kind="general"``: Gaussian ``A`` and ``y0`` of size ``n``; records
    ``R(t) = max_l ||y||_inf / |y_l|`` and the fraction ``r(t, M)`` of
    components with ratio above ``M``.
    """
    if kind == "gdpnd":
        if a22_sign not in (1.0, -1.0):
            raise InputError("a22_sign must be 1 or -1")
        rows = _run(partial(_gdpnd_one, seed=seed, t=t_gdpnd, a22_sign=float(a22_sign)),
                    trials, workers)
        keys = ["R", "B0", "a11", "a12", "a21", "a22"]
        rec = {k: np.array([r[k] for r in rows]) for k in keys}
        R = rec["R"]
        extra = {f"pct_R_gt_{th:g}": float(100 * np.mean(R > th)) for th in (10, 100, 1000)}
        extra["min_R"] = float(R.min())
        summ = {"R": summarize(R)}
        meta = {"t": t_gdpnd, "a22_sign": a22_sign}
    elif kind == "general":
        rows = _run(partial(_general_one, seed=seed, n=n, times=tuple(times), Ms=tuple(Ms)),
                    trials, workers)
        keys = [k for k in rows[0] if k != "tally"]
        rec = {k: np.array([r[k] for r in rows]) for k in keys}
        summ = {k: summarize(v) for k, v in rec.items()}
        extra = {f"mean_{k}": float(v.mean()) for k, v in rec.items() if k.startswith("r_")}
        extra.update({f"max_{k}": float(v.max()) for k, v in rec.items() if k.startswith("r_")})
        meta = {"n": n, "times": list(times), "M": list(Ms)}
    else:
        raise InputError(f"unknown componentwise study {kind!r}")
    meta.update(study=f"components-{kind}", trials=trials, seed=seed, rng=RNG_ALGORITHM)
    return StudyResult(rec, summ, extra, _merge_tallies(rows, trials), meta)


# --- f_j maxima -------------------------------------------------------------


def _fj_one(i, n, seed, sampler, norm, max_draws=10_000):
    rng = instance_rng(seed, i)
    tally = Counter()
    for _ in range(max_draws):
        tally["draws"] += 1
        A, _ = SAMPLERS[sampler](n, rng)
        dec = eig_full(A)
        part = partition_spectrum(dec.values)
        if not part.generic:
            tally["nongeneric"] += 1
            continue
        f = f_values(dec, part, norm).f
        lf = np.log(f)
        Mh = float(np.max(lf[1:] - lf[0])) if f.size > 1 else 0.0
        return {"M": float(lf.max()), "M_hat": Mh, "f1": float(f[0]), "tally": tally}
    raise RuntimeError("too many rejected draws")


def fj_maxima_study(n: int, trials: int, seed: int = 0, sampler: str = "gaussian",
                    norm: Norm = P2, workers: int | None = None) -> StudyResult:
    """``M = max_j log f_j`` and ``M_hat = max_{j>=2} log(f_j / f_1)`` per instance."""
    rows = _run(partial(_fj_one, n=n, seed=seed, sampler=sampler, norm=norm), trials, workers)
    rec = {k: np.array([r[k] for r in rows]) for k in ("M", "M_hat", "f1")}
    return StudyResult(rec, {"M": summarize(rec["M"]), "M_hat": summarize(rec["M_hat"])},
                       {"all_M_hat_le_M": bool(np.all(rec["M_hat"] <= rec["M"] + 1e-12))},
                       _merge_tallies(rows, trials),
                       {"study": "fjmax", "n": n, "trials": trials, "seed": seed,
                        "sampler": sampler, "norm": str(norm), "rng": RNG_ALGORITHM})
