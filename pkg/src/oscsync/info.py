"""Lab-frame covariance matrices, initial states, and Gaussian information measures.

All information formulas work on the 4x4 covariance matrix over
``(q1, p1, q2, p2)`` in shot-noise units, where ``q_i = sqrt(2 omega_i) x_i``
and ``p_i = sqrt(2 / omega_i) p_i`` so the two-oscillator vacuum is the
identity matrix.  Conversion from the normal-mode moment vector (physical
units) is owned by :func:`to_lab_covariance`; everything downstream is
dimensionless.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import xlogy

from .dynamics import IDX_PP, IDX_XP, IDX_XX, MomentState, Trajectory
from .errors import DegenerateState, DomainError, NumericalError, UnphysicalState
from .model import NormalModeBasis, SystemParams

__all__ = [
    "CovarianceMatrix",
    "InitialStateSpec",
    "SymplecticSpectrum",
    "make_initial",
    "to_lab_covariance",
    "symplectic_spectrum",
    "entropy",
    "mutual_information",
    "gaussian_discord",
    "log_negativity",
    "min_symplectic_eigenvalue",
    "lab_variance_series",
    "information_series",
]

# Symplectic form for the ordering (q1, p1, q2, p2).
OMEGA_SYMP = np.array(
    [
        [0.0, 1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [0.0, 0.0, -1.0, 0.0],
    ]
)


@dataclass(frozen=True)
class CovarianceMatrix:
    """4x4 lab-frame covariance and means, shot-noise units (vacuum = identity)."""

    sigma: np.ndarray
    means: np.ndarray

    def __post_init__(self) -> None:
        sigma = np.asarray(self.sigma, dtype=float)
        means = np.asarray(self.means, dtype=float)
        if sigma.shape != (4, 4) or means.shape != (4,):
            raise DomainError("covariance must be 4x4 with a 4-vector of means")
        if np.max(np.abs(sigma - sigma.T)) > 1e-12 * max(
            1.0, float(np.max(np.abs(sigma)))
        ):
            raise DomainError("covariance matrix must be symmetric")
        sigma = 0.5 * (sigma + sigma.T)
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "means", means)


@dataclass(frozen=True)
class InitialStateSpec:
    """One of the supported Gaussian initial states.

    Kinds: ``vacuum``; ``tms`` (two-mode squeezed, generated by
    ``exp[-r (a1+ a2+ - a1 a2) / 2]``, i.e. squeeze parameter ``r/2``,
    giving ``cosh r`` diagonal blocks); ``sq`` (product of two
    position-squeezed single-mode vacua with parameters ``r1``, ``r2``).
    """

    kind: str
    r: float = 0.0
    r1: float = 0.0
    r2: float = 0.0

    def __post_init__(self) -> None:
        if self.kind not in ("vacuum", "tms", "sq"):
            raise DomainError(f"unknown initial-state kind {self.kind!r}")
        for value in (self.r, self.r1, self.r2):
            if not math.isfinite(value) or abs(value) > 10.0:
                raise DomainError(
                    f"squeezing parameters must be finite with |r| <= 10,"
                    f" got {value}"
                )

    @classmethod
    def vacuum(cls) -> "InitialStateSpec":
        return cls(kind="vacuum")

    @classmethod
    def two_mode_squeezed(cls, r: float) -> "InitialStateSpec":
        return cls(kind="tms", r=r)

    @classmethod
    def separable_squeezed(cls, r1: float, r2: float) -> "InitialStateSpec":
        return cls(kind="sq", r1=r1, r2=r2)

    @classmethod
    def parse(cls, text: str) -> "InitialStateSpec":
        """Parse ``vacuum``, ``tms:R``, or ``sq:R1:R2``."""
        parts = text.split(":")
        try:
            if parts[0] == "vacuum" and len(parts) == 1:
                return cls.vacuum()
            if parts[0] == "tms" and len(parts) == 2:
                return cls.two_mode_squeezed(float(parts[1]))
            if parts[0] == "sq" and len(parts) == 3:
                return cls.separable_squeezed(float(parts[1]), float(parts[2]))
        except ValueError as exc:
            raise DomainError(f"bad initial state {text!r}: {exc}") from exc
        raise DomainError(
            f"bad initial state {text!r}; expected vacuum, tms:R, or sq:R1:R2"
        )


class SymplecticSpectrum:
    """Global pair (nu1 <= nu2) and single-mode reduced values (nu_a, nu_b)."""

    __slots__ = ("nu", "reduced")

    def __init__(self, nu, reduced):
        self.nu = tuple(nu)
        self.reduced = tuple(reduced)


def _shot_noise_scale(sys: SystemParams) -> np.ndarray:
    return np.diag(
        [
            math.sqrt(2.0 * sys.omega1),
            math.sqrt(2.0 / sys.omega1),
            math.sqrt(2.0 * sys.omega2),
            math.sqrt(2.0 / sys.omega2),
        ]
    )


def _mode_rotation(basis: NormalModeBasis) -> np.ndarray:
    # Maps (x1, p1, x2, p2) -> (X-, P-, X+, P+); orthogonal.
    c, s = basis.c, basis.s
    return np.array(
        [
            [c, 0.0, -s, 0.0],
            [0.0, c, 0.0, -s],
            [s, 0.0, c, 0.0],
            [0.0, s, 0.0, c],
        ]
    )


def _spec_to_shot_noise_sigma(spec: InitialStateSpec) -> np.ndarray:
    if spec.kind == "vacuum":
        return np.eye(4)
    if spec.kind == "sq":
        return np.diag(
            [
                math.exp(-2.0 * spec.r1),
                math.exp(2.0 * spec.r1),
                math.exp(-2.0 * spec.r2),
                math.exp(2.0 * spec.r2),
            ]
        )
    ch, sh = math.cosh(spec.r), math.sinh(spec.r)
    sigma = np.eye(4) * ch
    sigma[0, 2] = sigma[2, 0] = sh
    sigma[1, 3] = sigma[3, 1] = -sh
    return sigma


def make_initial(
    spec: InitialStateSpec, sys: SystemParams, basis: NormalModeBasis
) -> MomentState:
    """Build the normal-mode moment vector for a named lab-frame Gaussian state.

    The state is specified by its shot-noise-unit lab covariance, converted
    to physical units, rotated into the mode basis, and packed into the
    10-vector of raw second moments (first moments zero).
    """
    sn = _spec_to_shot_noise_sigma(spec)
    scale = _shot_noise_scale(sys)
    inv = np.diag(1.0 / np.diag(scale))
    sigma_lab = inv @ sn @ inv
    rot = _mode_rotation(basis)
    sm = rot @ sigma_lab @ rot.T
    r = np.empty(10)
    r[IDX_XX[0, 0]] = sm[0, 0]
    r[IDX_XX[1, 1]] = sm[2, 2]
    r[IDX_XX[0, 1]] = sm[0, 2]
    r[IDX_PP[0, 0]] = sm[1, 1]
    r[IDX_PP[1, 1]] = sm[3, 3]
    r[IDX_PP[0, 1]] = sm[1, 3]
    r[IDX_XP[0, 0]] = 2.0 * sm[0, 1]
    r[IDX_XP[1, 1]] = 2.0 * sm[2, 3]
    r[IDX_XP[0, 1]] = 2.0 * sm[0, 3]
    r[IDX_XP[1, 0]] = 2.0 * sm[2, 1]
    return MomentState(first_moments=np.zeros(4), second_moments=r, time=0.0)


def _mode_covariance(state: MomentState) -> tuple[np.ndarray, np.ndarray]:
    # Central 4x4 covariance over (X-, P-, X+, P+) from raw moments.
    r = state.second_moments
    xm, pm, xp, pp = state.first_moments
    m = np.array([xm, pm, xp, pp])
    cov = np.empty((4, 4))
    x = (0, 2)  # position slots per mode
    p = (1, 3)
    for i in (0, 1):
        for j in (0, 1):
            cov[x[i], x[j]] = r[IDX_XX[i, j]] - m[x[i]] * m[x[j]]
            cov[p[i], p[j]] = r[IDX_PP[i, j]] - m[p[i]] * m[p[j]]
            cov[x[i], p[j]] = 0.5 * r[IDX_XP[i, j]] - m[x[i]] * m[p[j]]
            cov[p[j], x[i]] = cov[x[i], p[j]]
    return cov, m


def to_lab_covariance(
    state: MomentState, basis: NormalModeBasis, sys: SystemParams
) -> CovarianceMatrix:
    """Rotate mode moments back to the lab frame, in shot-noise units."""
    cov, m = _mode_covariance(state)
    rot = _mode_rotation(basis)
    sigma_lab = rot.T @ cov @ rot
    means_lab = rot.T @ m
    scale = _shot_noise_scale(sys)
    return CovarianceMatrix(
        sigma=scale @ sigma_lab @ scale, means=np.diag(scale) * means_lab
    )


def symplectic_spectrum(cov: CovarianceMatrix) -> SymplecticSpectrum:
    """Global and reduced symplectic eigenvalues of the covariance."""
    try:
        ev = np.linalg.eigvals(1j * OMEGA_SYMP @ cov.sigma)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - rare
        raise NumericalError(f"eigensolver failed: {exc}") from exc
    nus = np.sort(np.abs(ev))
    nu_a = math.sqrt(max(float(np.linalg.det(cov.sigma[:2, :2])), 0.0))
    nu_b = math.sqrt(max(float(np.linalg.det(cov.sigma[2:, 2:])), 0.0))
    return SymplecticSpectrum(nu=(nus[0], nus[2]), reduced=(nu_a, nu_b))


def entropy(nu: float) -> float:
    """Entropy contribution f(nu) of one symplectic eigenvalue.

    ``f(nu) = ((nu+1)/2) ln((nu+1)/2) - ((nu-1)/2) ln((nu-1)/2)``; values in
    ``[1 - 1e-6, 1]`` clamp to 1 (f = 0), anything lower is unphysical.
    """
    if nu < 1.0 - 1e-6:
        raise UnphysicalState(
            f"symplectic eigenvalue {nu} < 1 violates the uncertainty bound"
        )
    nu = max(nu, 1.0)
    up = 0.5 * (nu + 1.0)
    dn = 0.5 * (nu - 1.0)
    return float(xlogy(up, up) - xlogy(dn, dn))


def mutual_information(cov: CovarianceMatrix) -> float:
    """Total correlations I = f(nu_a) + f(nu_b) - f(nu1) - f(nu2), >= 0."""
    spec = symplectic_spectrum(cov)
    total = entropy(spec.reduced[0]) + entropy(spec.reduced[1])
    total -= entropy(spec.nu[0]) + entropy(spec.nu[1])
    return max(total, 0.0)


def gaussian_discord(cov: CovarianceMatrix, measured: int = 2) -> float:
    """Gaussian quantum discord under the optimal Gaussian measurement.

    Uses the closed-form minimum over Gaussian measurements on one party
    (by default oscillator 2; ``measured=1`` swaps the roles).  With
    ``A = det A``, ``B = det B``, ``C = det C``, ``D = det sigma``::

        delta = f(sqrt(B)) - f(nu1) - f(nu2) + f(sqrt(Emin))

    where ``Emin`` takes its first closed-form branch when
    ``(D - A*B)^2 <= (1 + B) C^2 (A + D)`` and the generic second branch
    otherwise.

    Raises ``DegenerateState`` for the inconsistent combination B = 1
    (pure measured mode) with nonzero cross correlations.
    """
    if measured not in (1, 2):
        raise DomainError(f"measured party must be 1 or 2, got {measured}")
    sigma = cov.sigma
    if measured == 1:
        order = [2, 3, 0, 1]
        sigma = sigma[np.ix_(order, order)]
    a = float(np.linalg.det(sigma[:2, :2]))
    b = float(np.linalg.det(sigma[2:, 2:]))
    c = float(np.linalg.det(sigma[:2, 2:]))
    d = float(np.linalg.det(sigma))
    if b == 1.0:
        if abs(c) < 1e-15:
            return 0.0
        raise DegenerateState(
            "measured mode is pure (det B = 1) yet carries correlations"
        )
    if (d - a * b) ** 2 <= (1.0 + b) * c * c * (a + d):
        root = math.sqrt(max(c * c + (b - 1.0) * (d - a), 0.0))
        e_min = (2.0 * c * c + (b - 1.0) * (d - a) + 2.0 * abs(c) * root) / (
            (b - 1.0) ** 2
        )
    else:
        disc = c**4 + (d - a * b) ** 2 - 2.0 * c * c * (a * b + d)
        e_min = (a * b - c * c + d - math.sqrt(max(disc, 0.0))) / (2.0 * b)
    spec = symplectic_spectrum(cov)
    delta = (
        entropy(math.sqrt(max(b, 0.0)))
        - entropy(spec.nu[0])
        - entropy(spec.nu[1])
        + entropy(math.sqrt(max(e_min, 0.0)))
    )
    return max(delta, 0.0)


def log_negativity(cov: CovarianceMatrix) -> float:
    """E_N = max(0, -ln nu~_-) from the partially transposed covariance."""
    flip = np.diag([1.0, 1.0, 1.0, -1.0])
    tilde = flip @ cov.sigma @ flip
    ev = np.linalg.eigvals(1j * OMEGA_SYMP @ tilde)
    nu_min = float(np.min(np.abs(ev)))
    if nu_min <= 0:
        raise UnphysicalState("partial transpose produced a zero eigenvalue")
    return max(0.0, -math.log(nu_min))


def min_symplectic_eigenvalue(cov: CovarianceMatrix) -> float:
    """Physicality margin: the smallest global symplectic eigenvalue."""
    return symplectic_spectrum(cov).nu[0]


def lab_variance_series(
    traj: Trajectory, basis: NormalModeBasis, sys: SystemParams
) -> tuple[np.ndarray, np.ndarray]:
    """Shot-noise-normalized <x1^2>, <x2^2> series from a trajectory.

    Raw lab second moments are linear in the mode moments:
    ``<x1^2> = c^2 <X-^2> + s^2 <X+^2> + 2cs <X-X+>`` and
    ``<x2^2> = s^2 <X-^2> + c^2 <X+^2> - 2cs <X-X+>``; shot-noise
    normalization multiplies by ``2 omega_i``.
    """
    c, s = basis.c, basis.s
    r = traj.second_moments
    x1 = c * c * r[:, 0] + s * s * r[:, 1] + 2.0 * c * s * r[:, 2]
    x2 = s * s * r[:, 0] + c * c * r[:, 1] - 2.0 * c * s * r[:, 2]
    return 2.0 * sys.omega1 * x1, 2.0 * sys.omega2 * x2


def information_series(
    traj: Trajectory, basis: NormalModeBasis, sys: SystemParams
) -> dict[str, np.ndarray]:
    """Mutual information, discord, log-negativity, and nu_min per sample."""
    n = len(traj.times)
    out = {
        "mutualInfo": np.empty(n),
        "discord": np.empty(n),
        "logNegativity": np.empty(n),
        "nuMin": np.empty(n),
    }
    for k in range(n):
        state = MomentState(
            first_moments=traj.first_moments[k],
            second_moments=traj.second_moments[k],
            time=float(traj.times[k]),
        )
        cov = to_lab_covariance(state, basis, sys)
        spec = symplectic_spectrum(cov)
        out["nuMin"][k] = spec.nu[0]
        out["mutualInfo"][k] = mutual_information(cov)
        out["discord"][k] = gaussian_discord(cov)
        out["logNegativity"][k] = log_negativity(cov)
    return out
