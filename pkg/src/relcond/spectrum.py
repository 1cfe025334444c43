"""Spectral levels, rightmost eigenstructure and amplification factors.

Eigenvalues are grouped into levels of equal real part, ordered from the
rightmost level down. A level is ``"real"`` (one simple real eigenvalue),
``"complex_pair"`` (one simple conjugate pair) or ``"nongeneric"``
(anything else).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError, UnsupportedStructureError
from .linalg import P2, EigenDecomposition, Norm, as_vector, dual_row_norm, vector_norm

__all__ = [
    "REAL",
    "COMPLEX_PAIR",
    "NONGENERIC",
    "Level",
    "SpectralPartition",
    "partition_spectrum",
    "LevelData",
    "RightmostData",
    "level_data",
    "rightmost_data",
    "FAmplification",
    "f_values",
    "rlge_check",
    "characteristic_time",
]

REAL = "real"
COMPLEX_PAIR = "complex_pair"
NONGENERIC = "nongeneric"


@dataclass(frozen=True)
class Level:
    """One level of the spectrum.

    Attributes
    ----------
    r : float
        Common real part.
    members : tuple of int
        Indices into the eigenvalue list.
    kind : str
        ``"real"``, ``"complex_pair"`` or ``"nongeneric"``.
    omega : float
        Imaginary part of the representative (0 for real levels).
    rep : int or None
        Index of the representative: the real member, or the member with
        positive imaginary part. None for non-generic levels.
    """

    r: float
    members: tuple
    kind: str
    omega: float = 0.0
    rep: int | None = None


@dataclass(frozen=True)
class SpectralPartition:
    levels: tuple
    tol_group: float
    scale: float
    binding: bool = False  # True if some decision sat within 100x of the tolerance

    @property
    def q(self) -> int:
        return len(self.levels)

    @property
    def generic(self) -> bool:
        return all(lv.kind != NONGENERIC for lv in self.levels)

    def __getitem__(self, j):
        return self.levels[j]

    def __len__(self):
        return len(self.levels)


def partition_spectrum(eigs, tol_group: float = 1e-9) -> SpectralPartition:
    """Group eigenvalues by real part and classify each level.

    Two eigenvalues share a level iff their real parts differ by at most
    ``tol_group * max(1, spectral radius)``.

    Examples
    --------
    >>> part = partition_spectrum([0.05, 0.01])
    >>> part.q, [lv.kind for lv in part.levels]
    (2, ['real', 'real'])
    """
    eigs = np.asarray(eigs, dtype=complex).ravel()
    if eigs.size == 0:
        raise InputError("eigenvalue list is empty")
    if not tol_group > 0:
        raise InputError("tol_group must be positive")
    scale = max(1.0, float(np.abs(eigs).max()))
    tol = tol_group * scale
    order = np.lexsort((-eigs.imag, -eigs.real))
    groups = []
    for i in order:
        if groups and abs(eigs[groups[-1][0]].real - eigs[i].real) <= tol:
            groups[-1].append(int(i))
        else:
            groups.append([int(i)])
    binding = False
    for a, b in zip(groups, groups[1:]):
        gap = eigs[a[-1]].real - eigs[b[0]].real
        binding |= gap <= 100 * tol
    levels = []
    for g in groups:
        lam = eigs[g]
        r = float(lam.real.mean())
        binding |= bool(np.any((np.abs(lam.imag) > tol) & (np.abs(lam.imag) <= 100 * tol)))
        if len(g) == 1 and abs(lam[0].imag) <= tol:
            levels.append(Level(r, tuple(g), REAL, 0.0, g[0]))
        elif (len(g) == 2 and abs(lam[0] - np.conj(lam[1])) <= tol
              and abs(lam[0].imag) > tol):
            k = 0 if lam[0].imag > 0 else 1
            levels.append(Level(r, tuple(g), COMPLEX_PAIR, float(lam[k].imag), g[k]))
        else:
            levels.append(Level(r, tuple(g), NONGENERIC, 0.0, None))
    return SpectralPartition(tuple(levels), tol_group, scale, bool(binding))


@dataclass(frozen=True)
class LevelData:
    """Normalized left/right eigenvectors of one generic level.

    Attributes
    ----------
    kind : str
        ``"real"`` or ``"complex_pair"``.
    lam : complex
        Representative eigenvalue (positive imaginary part for pairs).
    r, omega : float
        Real and imaginary parts of ``lam``.
    w, v : ndarray
        Left row (row of ``inv(V)``) and right column.
    w_hat, v_hat : ndarray
        ``w`` divided by its dual norm (real field for real levels, complex
        field for pairs) and ``v`` divided by its norm.
    w_norm, v_norm : float
        The two normalizing constants.
    alpha, beta : ndarray
        Polar angles of the entries of ``v_hat`` and ``w_hat``.
    norm : Norm
    """

    kind: str
    lam: complex
    r: float
    omega: float
    w: np.ndarray
    v: np.ndarray
    w_hat: np.ndarray
    v_hat: np.ndarray
    w_norm: float
    v_norm: float
    alpha: np.ndarray
    beta: np.ndarray
    norm: Norm

    @property
    def is_complex(self) -> bool:
        return self.kind == COMPLEX_PAIR

    def gamma(self, u) -> float:
        """Polar angle of ``w_hat u``."""
        return float(np.angle(self.w_hat @ np.asarray(u)))


RightmostData = LevelData


def level_data(dec: EigenDecomposition, part: SpectralPartition, j: int,
               norm: Norm = P2) -> LevelData:
    """Normalized eigenvector data of level ``j`` (0-based)."""
    lv = part.levels[j]
    if lv.kind == NONGENERIC:
        raise UnsupportedStructureError(
            f"level {j + 1} (real part {lv.r:.6g}) is non-generic; "
            "supply a Jordan structure instead")
    i = lv.rep
    lam = complex(dec.values[i])
    w = dec.W[i].copy()
    v = dec.V[:, i].copy()
    if lv.kind == REAL:
        if np.all(np.abs(w.imag) <= 1e-10 * np.abs(w).max()) and \
                np.all(np.abs(v.imag) <= 1e-10 * np.abs(v).max()):
            w, v = w.real, v.real
        wn = dual_row_norm(w, norm, "real")
    else:
        wn = dual_row_norm(w, norm, "complex")
    vn = vector_norm(v, norm)
    wh, vh = w / wn, v / vn
    return LevelData(lv.kind, lam, lam.real, lv.omega if lv.kind == COMPLEX_PAIR else 0.0,
                     w, v, wh, vh, wn, vn, np.angle(vh), np.angle(wh), norm)


def rightmost_data(dec: EigenDecomposition, part: SpectralPartition,
                   norm: Norm = P2) -> LevelData:
    """Normalized data of the rightmost level.

    Raises
    ------
    UnsupportedStructureError
        If the rightmost level is non-generic.
    """
    return level_data(dec, part, 0, norm)


@dataclass(frozen=True)
class FAmplification:
    """Per-level products ``||w_j|| * ||v_j||`` (each at least 1)."""

    f: np.ndarray

    @property
    def ratios(self) -> np.ndarray:
        return self.f / self.f[0]

    def __getitem__(self, j):
        return self.f[j]

    def __len__(self):
        return len(self.f)


def f_values(dec: EigenDecomposition, part: SpectralPartition,
             norm: Norm = P2) -> FAmplification:
    """Amplification factors ``f_j = ||w_j|| ||v_j||`` for every level."""
    out = []
    for j, lv in enumerate(part.levels):
        if lv.kind == NONGENERIC:
            raise UnsupportedStructureError(f"level {j + 1} is non-generic")
        i = lv.rep
        out.append(dual_row_norm(dec.W[i], norm, "complex") * vector_norm(dec.V[:, i], norm))
    return FAmplification(np.array(out))


def rlge_check(rm: LevelData, u, tol: float = 1e-8):
    """Whether ``u`` has a nonzero component along the rightmost eigenvector(s).

    Returns
    -------
    satisfied : bool
    margin : float
        ``|w_hat u_hat|`` with ``u_hat = u / ||u||``.
    """
    u = as_vector(u, "u", n=rm.w.size, nonzero=True)
    uh = u / vector_norm(u, rm.norm)
    margin = float(abs(rm.w_hat @ uh))
    return margin > tol, margin


def characteristic_time(eigs, tol: float = 1e-12) -> float:
    """``1/|r1|`` with ``r1`` the spectral abscissa, or 1 when ``r1 == 0``.

    ``r1`` counts as zero when ``|r1| <= tol * max|lambda|``.
    """
    lam = np.asarray(eigs)
    r1 = float(np.max(np.real(lam)))
    if abs(r1) <= tol * float(np.max(np.abs(lam))):
        return 1.0
    return 1.0 / abs(r1)
