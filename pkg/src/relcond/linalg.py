"""Dense kernels: norms, dual norms of row functionals, exponentials, eigendecomposition.

All functions accept real or complex ``numpy`` arrays and never modify their
inputs. Norms belong to the p-norm family, optionally in the "mean" variant
``n**(-1/p) * ||x||_p``, which leaves every ratio of norms unchanged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
from scipy.optimize import minimize_scalar

from .errors import InputError, RangeError

__all__ = [
    "Norm",
    "P1",
    "P2",
    "PINF",
    "mean_p",
    "parse_norm",
    "vector_norm",
    "dual_row_norm",
    "induced_matrix_norm",
    "mat_exp",
    "expm_grid",
    "EigenDecomposition",
    "eig_full",
    "as_matrix",
    "as_vector",
]


@dataclass(frozen=True)
class Norm:
    """A p-norm on C^n, optionally scaled to its mean variant.

    Parameters
    ----------
    p : float
        Exponent, ``1 <= p <= inf``.
    mean : bool
        If True the norm is ``n**(-1/p) * ||x||_p``.
    """

    p: float
    mean: bool = False

    def __post_init__(self):
        p = float(self.p)
        if not (p >= 1.0):
            raise InputError(f"norm exponent must be >= 1, got {self.p!r}")
        object.__setattr__(self, "p", p)

    @property
    def q(self) -> float:
        """Conjugate exponent, ``1/p + 1/q = 1``."""
        if self.p == 1.0:
            return math.inf
        if math.isinf(self.p):
            return 1.0
        return self.p / (self.p - 1.0)

    def scale(self, n: int) -> float:
        """Factor multiplying ``||x||_p`` for vectors of length ``n``."""
        if not self.mean or math.isinf(self.p):
            return 1.0
        return n ** (-1.0 / self.p)

    @property
    def base(self) -> "Norm":
        return Norm(self.p, False)

    def __str__(self):
        p = "inf" if math.isinf(self.p) else f"{self.p:g}"
        return f"mean-p:{p}" if self.mean else p


P1 = Norm(1.0)
P2 = Norm(2.0)
PINF = Norm(math.inf)


def mean_p(p: float) -> Norm:
    return Norm(p, True)


def parse_norm(text) -> Norm:
    """Parse ``"1"``, ``"2"``, ``"inf"`` or ``"mean-p:P"`` into a :class:`Norm`."""
    if isinstance(text, Norm):
        return text
    s = str(text).strip().lower()
    mean = False
    if s.startswith("mean-p:"):
        mean = True
        s = s[len("mean-p:"):]
    if s in ("inf", "infinity", "pinf"):
        return Norm(math.inf, mean)
    try:
        return Norm(float(s), mean)
    except (ValueError, InputError) as exc:
        raise InputError(f"unrecognised norm {text!r}") from exc


def as_matrix(M, name="matrix", square=False) -> np.ndarray:
    """Validate and convert to a 2-D finite array (real if possible)."""
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] < 1 or M.shape[1] < 1:
        raise InputError(f"{name} must be a nonempty 2-D array, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise InputError(f"{name} has non-finite entries")
    if square and M.shape[0] != M.shape[1]:
        raise InputError(f"{name} must be square, got shape {M.shape}")
    if np.iscomplexobj(M) and not np.any(M.imag):
        M = M.real
    return M.astype(np.complex128 if np.iscomplexobj(M) else np.float64)


def as_vector(x, name="vector", n=None, nonzero=False) -> np.ndarray:
    x = np.asarray(x)
    if x.ndim != 1 or x.size < 1:
        raise InputError(f"{name} must be a nonempty 1-D array, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise InputError(f"{name} has non-finite entries")
    if n is not None and x.size != n:
        raise InputError(f"{name} has length {x.size}, expected {n}")
    if nonzero and not np.any(x):
        raise InputError(f"{name} must be nonzero")
    return x.astype(np.complex128 if np.iscomplexobj(x) else np.float64)


def _pnorm(x, p, axis=-1):
    a = np.abs(x)
    if p == 1.0:
        return a.sum(axis=axis)
    if math.isinf(p):
        return a.max(axis=axis)
    m = a.max(axis=axis, keepdims=True)
    m = np.where(m > 0, m, 1.0)
    return np.squeeze(m, axis=axis) * ((a / m) ** p).sum(axis=axis) ** (1.0 / p)


def vector_norm(x, norm: Norm = P2, axis=-1):
    """Norm of ``x`` (or of each slice along ``axis``).

    Examples
    --------
    >>> float(vector_norm([3.0, 4.0], P2))
    5.0
    """
    x = np.asarray(x)
    if x.size == 0:
        raise InputError("vector must be nonempty")
    if not np.all(np.isfinite(x)):
        raise InputError("vector has non-finite entries")
    n = x.shape[axis]
    val = _pnorm(x, norm.p, axis=axis) * norm.scale(n)
    return float(val) if np.ndim(val) == 0 else val


def _real_field_pinf(w):
    """max over real u with ||u||_inf <= 1 of |w u| for complex w (exact)."""
    ang = np.angle(w[np.abs(w) > 0])
    if ang.size == 0:
        return 0.0
    # Sign pattern s_k = sign(cos(phi - arg w_k)) only changes at phi = arg w_k +- pi/2.
    brk = np.sort(np.mod(np.concatenate([ang + np.pi / 2, ang - np.pi / 2]), 2 * np.pi))
    brk = np.append(brk, brk[0] + 2 * np.pi)
    mids = 0.5 * (brk[:-1] + brk[1:])
    s = np.sign(np.cos(mids[:, None] - np.angle(w)[None, :]))
    return float(np.abs(s @ w).max())


def _real_field_general(w, q):
    """max over phi of ||Re(exp(-i phi) w)||_q, by sampling plus bounded refinement."""

    def f(phi):
        return _pnorm(np.real(np.exp(-1j * phi) * w), q)

    phis = np.linspace(0.0, np.pi, 361)
    vals = np.array([f(p) for p in phis])
    k = int(np.argmax(vals))
    lo, hi = phis[max(k - 1, 0)], phis[min(k + 1, len(phis) - 1)]
    res = minimize_scalar(lambda p: -f(p), bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-13})
    return float(max(vals[k], -res.fun))


def dual_row_norm(w, norm: Norm = P2, field: str = "complex") -> float:
    """Operator norm of the row functional ``u -> w u``.

    Parameters
    ----------
    w : array_like
        Row of length n.
    norm : Norm
        Norm on the domain.
    field : {"complex", "real"}
        Whether ``u`` ranges over complex or real unit vectors.

    Returns
    -------
    float
        ``max |w u|`` over unit ``u``. Over the complex field this is the
        conjugate-exponent norm of ``w``; over the reals with complex ``w``
        and the 2-norm it is the largest singular value of ``[Re w; Im w]``.
    """
    w = as_vector(w, "row")
    n = w.size
    fld = field.lower()
    if fld not in ("complex", "real"):
        raise InputError(f"field must be 'complex' or 'real', got {field!r}")
    q = norm.q
    if fld == "complex" or not np.iscomplexobj(w) or not np.any(w.imag):
        val = float(_pnorm(w, q))
    elif norm.p == 2.0:
        val = float(np.linalg.svd(np.vstack([w.real, w.imag]), compute_uv=False)[0])
    elif norm.p == 1.0:
        val = float(np.abs(w).max())
    elif math.isinf(norm.p):
        val = _real_field_pinf(w)
    else:
        val = _real_field_general(w, q)
    return val / norm.scale(n)


def _dual_vec(x, p):
    """Unit-q-norm vector attaining Re(d^H x) = ||x||_p."""
    a = np.abs(x)
    ph = np.where(a > 0, np.exp(1j * np.angle(x)), 0.0) if np.iscomplexobj(x) else np.sign(x)
    nx = _pnorm(x, p)
    if nx == 0:
        return np.zeros_like(x)
    return ph * (a / nx) ** (p - 1.0)


def _pnorm_estimate(M, p, maxiter=100):
    """Power-method estimate of the induced p-norm (a lower bound)."""
    q = p / (p - 1.0)
    m, n = M.shape
    starts = [np.ones(n, dtype=complex)]
    cols = _pnorm(M.T, p)
    starts.append(np.eye(n, dtype=complex)[int(np.argmax(cols))])
    rng = np.random.default_rng(0)
    starts.append(rng.standard_normal(n) + 0j)
    best = 0.0
    for x in starts:
        x = x / _pnorm(x, p)
        est = _pnorm(M @ x, p)
        for _ in range(maxiter):
            y = M @ x
            z = M.conj().T @ _dual_vec(y, p)
            zq = _pnorm(z, q)
            if zq <= np.real(np.vdot(z, x)) * (1 + 1e-14):
                break
            x = _dual_vec(z, q)
            x = x / _pnorm(x, p)
            new = _pnorm(M @ x, p)
            if new <= est * (1 + 1e-15):
                est = max(est, new)
                break
            est = new
        best = max(best, est)
    return float(best)


def induced_matrix_norm(M, norm: Norm = P2):
    """Matrix norm induced by ``norm``; accepts a single matrix or a stack.

    Exact for p in {1, 2, inf}; other p use a power-method estimate.
    Mean variants are scaled by ``(n/m)**(1/p)`` for an ``m x n`` matrix.
    """
    M = np.asarray(M)
    if M.ndim < 2 or M.shape[-1] < 1 or M.shape[-2] < 1:
        raise InputError(f"matrix must have at least 2 dimensions, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise InputError("matrix has non-finite entries")
    m, n = M.shape[-2:]
    p = norm.p
    a = np.abs(M)
    if p == 1.0:
        val = a.sum(axis=-2).max(axis=-1)
    elif math.isinf(p):
        val = a.sum(axis=-1).max(axis=-1)
    elif p == 2.0:
        val = np.linalg.svd(M, compute_uv=False)[..., 0]
    else:
        flat = M.reshape((-1, m, n)).astype(complex)
        val = np.array([_pnorm_estimate(X, p) for X in flat]).reshape(M.shape[:-2])
    if norm.mean and not math.isinf(p):
        val = val * (n / m) ** (1.0 / p)
    return float(val) if np.ndim(val) == 0 else val


def _check_finite(E, what):
    if not np.all(np.isfinite(E)):
        raise RangeError(f"{what} overflowed")
    return E


def mat_exp(A, t: float = 1.0) -> np.ndarray:
    """``exp(t A)`` by scaling and squaring with a Pade approximant.

    Raises
    ------
    RangeError
        If the result is not finite.
    """
    A = as_matrix(A, "A", square=True)
    if not np.isfinite(t):
        raise InputError("t must be finite")
    if t == 0:
        return np.eye(A.shape[0], dtype=A.dtype)
    with np.errstate(over="ignore", invalid="ignore"):
        E = scipy.linalg.expm(t * A)
    return _check_finite(E, f"exp(tA) at t={float(t):.17g}")


def expm_grid(A, times, shift: float = 0.0, chunk: int = 256) -> np.ndarray:
    """Stack of ``exp(t (A - shift I))`` for every ``t`` in ``times``.

    The shift leaves every ratio of norms unchanged while keeping entries
    of moderate size over long horizons.
    """
    A = as_matrix(A, "A", square=True)
    times = np.asarray(times, dtype=float).ravel()
    n = A.shape[0]
    B = A - shift * np.eye(n)
    out = np.empty((times.size, n, n), dtype=B.dtype)
    with np.errstate(over="ignore", invalid="ignore"):
        for s in range(0, times.size, chunk):
            tt = times[s:s + chunk]
            out[s:s + chunk] = scipy.linalg.expm(tt[:, None, None] * B[None])
    if not np.all(np.isfinite(out)):
        bad = times[~np.all(np.isfinite(out.reshape(times.size, -1)), axis=1)]
        raise RangeError(f"exp(tA) overflowed at t={float(bad[0]):.17g}")
    return out


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenvalues with right eigenvectors (columns of ``V``) and left rows (rows of ``inv(V)``).

    Attributes
    ----------
    values : ndarray
        Eigenvalues ordered by decreasing real part, then decreasing imaginary part.
    V : ndarray
        Right eigenvectors as columns.
    W : ndarray
        ``inv(V)``; row ``i`` is the left eigenvector paired with ``values[i]``.
    resid : float
        Backward-error estimate relative to ``||A||``.
    cond : float
        2-norm condition number of ``V``.
    tol : float
        Threshold on ``resid`` for :attr:`trustworthy`.
    """

    values: np.ndarray
    V: np.ndarray
    W: np.ndarray
    resid: float
    cond: float
    tol: float = 1e-8
    supplied: bool = field(default=False)

    @property
    def n(self) -> int:
        return self.values.size

    @property
    def trustworthy(self) -> bool:
        return bool(self.resid <= self.tol)

    @classmethod
    def from_basis(cls, values, V, W=None, A=None, tol=1e-8):
        """Build from a supplied eigenbasis (``W`` defaults to ``inv(V)``)."""
        values = np.asarray(values, dtype=complex)
        V = np.asarray(V)
        W = np.linalg.inv(V) if W is None else np.asarray(W)
        cond = float(np.linalg.cond(V))
        resid = float(np.linalg.norm(W @ V - np.eye(V.shape[0])) / math.sqrt(V.shape[0]))
        if A is not None:
            A = np.asarray(A)
            nA = np.linalg.norm(A) or 1.0
            resid = max(resid, float(np.linalg.norm(A @ V - V * values) /
                                     (nA * np.linalg.norm(V))))
        return cls(values, V.astype(complex), W.astype(complex), resid, cond, tol, True)


def _rotate(V):
    idx = np.argmax(np.abs(V), axis=0)
    piv = V[idx, np.arange(V.shape[1])]
    return V * (np.abs(piv) / np.where(piv == 0, 1, piv))[None, :]


def eig_full(A, tol: float = 1e-8) -> EigenDecomposition:
    """Full eigendecomposition with left rows taken from ``inv(V)``.

    Each right eigenvector is rotated so its largest-modulus entry is real
    and positive. For real ``A`` conjugate eigenvalues carry exactly
    conjugate eigenvectors.
    """
    A = as_matrix(A, "A", square=True)
    n = A.shape[0]
    lam, V = np.linalg.eig(A)
    lam = lam.astype(complex)
    V = V.astype(complex)
    if np.isrealobj(A):
        sc = max(1.0, float(np.abs(lam).max()))
        lam = np.where(np.abs(lam.imag) <= 1e-15 * sc, lam.real + 0j, lam)
    order = np.lexsort((-lam.imag, -lam.real))
    lam, V = lam[order], V[:, order]
    V = _rotate(V)
    if np.isrealobj(A):
        for i in range(n):
            if lam[i].imag > 0:
                j = int(np.argmin(np.abs(lam - np.conj(lam[i])) +
                                  np.where(np.arange(n) == i, np.inf, 0)))
                if lam[j].imag < 0 and abs(lam[j] - np.conj(lam[i])) <= 1e-8 * (1 + abs(lam[i])):
                    lam[j] = np.conj(lam[i])
                    V[:, j] = np.conj(V[:, i])
            elif lam[i].imag == 0:
                V[:, i] = V[:, i].real
    try:
        with np.errstate(all="ignore"):
            W = np.linalg.inv(V)
        cond = float(np.linalg.cond(V))
    except np.linalg.LinAlgError:
        W = np.full_like(V, np.nan)
        cond = math.inf
    nA = float(np.linalg.norm(A)) or 1.0
    eps = np.finfo(float).eps
    if np.all(np.isfinite(W)):
        rec = float(np.linalg.norm((V * lam) @ W - A)) / nA
        bio = float(np.linalg.norm(W @ V - np.eye(n))) / math.sqrt(n)
        resid = max(rec, bio, eps * min(cond, 1e300))
    else:
        resid = math.inf
    return EigenDecomposition(lam, V, W, resid, cond, tol)
