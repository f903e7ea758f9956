"""Разложения σ = Σ σ_cl Σ^T на чистое состояние и классический шум.

Σ→ = L(r1, r2) S2(r) (прямое), Σ← = S2(r') L(r'1, r'2) (обратное).
Минимальное двухмодовое сжатие r₋, локальные сжатия r'1, r'2 в
замкнутой форме и отображение k(r') из обратной формы в прямую.
"""
import logging
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from gauss_eof.errors import InvalidInput, NotEntangled, NumericalDomain, SingularTransform
from gauss_eof.gs_core import (
    PHYSICAL_TOL,
    CovarianceMatrix,
    StandardForm,
    SymplecticMatrix,
    apply,
    clamped_sqrt,
    expand,
    local_squeezer,
    pt_spectrum,
    two_mode_squeezer,
)

logger = logging.getLogger(__name__)

BOUNDARY_TOL = 1e-12
PURE_TOL = 1e-9
# относительный допуск для радикала γ(ζ1 + ζ2): члены порядка a²b² взаимно сокращаются
ZETA_TOL = 1e-9
VALID_TOL = 1e-9


class Direction(str, Enum):
    FORWARD = "forward"
    REVERSE = "reverse"


@dataclass(frozen=True)
class SymplecticDecomposition:
    direction: Direction
    r: float
    r1: float = 0.0
    r2: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "direction", Direction(self.direction))
        for name in ("r", "r1", "r2"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise InvalidInput(f"squeezing {name} is not finite")
            object.__setattr__(self, name, value)
        if self.r < 0.0:
            raise InvalidInput(f"two-mode squeezing must be non-negative, got r={self.r}")

    @classmethod
    def forward(cls, r: float, r1: float = 0.0, r2: float = 0.0) -> "SymplecticDecomposition":
        return cls(Direction.FORWARD, r, r1, r2)

    @classmethod
    def reverse(cls, r: float, r1: float = 0.0, r2: float = 0.0) -> "SymplecticDecomposition":
        return cls(Direction.REVERSE, r, r1, r2)


@dataclass(frozen=True)
class LowerBoundScalars:
    kappa: float
    lambda_plus: float
    lambda_minus: float


@dataclass(frozen=True)
class LocalSqueezingScalars:
    xi_plus: float
    xi_minus: float
    theta: float
    omega: float
    gamma: float
    zeta1: float
    zeta2: float
    chi: float


@dataclass(frozen=True, eq=False)
class Residual:
    phi: np.ndarray
    min_eigenvalue: float

    @property
    def is_valid(self) -> bool:
        return self.min_eigenvalue >= -VALID_TOL


def _is_pure(sf: StandardForm) -> bool:
    return abs(sf.det - 1.0) <= PURE_TOL


# --- r₋ -----------------------------------------------------------------------


def lower_bound_scalars(sf: StandardForm) -> LowerBoundScalars:
    a, b, c1, c2 = sf.a, sf.b, sf.c1, sf.c2
    h = (a + b) / 2.0
    kappa = 2.0 * (sf.det + 1.0) - (a - b) ** 2
    # факторизованные формы: прямое раскрытие теряет точность при h ≈ c1
    lambda_minus = 4.0 * (h - c1) * (h + c2)
    lambda_plus = 4.0 * (h + c1) * (h - c2)
    return LowerBoundScalars(kappa, lambda_plus, lambda_minus)


def r_lower(sf: StandardForm) -> tuple[float, LowerBoundScalars]:
    """Минимальное двухмодовое сжатие r₋, совместимое с разложением σ."""
    nu = pt_spectrum(expand(sf)).nu_minus
    if nu >= 1.0 - PHYSICAL_TOL:
        raise NotEntangled(f"state is separable (partial-transpose ν₋ = {nu:.9g})")
    sc = lower_bound_scalars(sf)
    if _is_pure(sf):
        disc = 0.0
    else:
        disc = clamped_sqrt(
            sc.kappa ** 2 - sc.lambda_plus * sc.lambda_minus,
            scale=sc.kappa ** 2,
            what="κ² - λ₊λ₋",
        )
    if sc.lambda_minus <= 0.0:
        raise NumericalDomain(f"λ₋ = {sc.lambda_minus:.6e} is not positive")
    ratio = (sc.kappa - disc) / sc.lambda_minus
    if ratio <= 1.0:
        raise NumericalDomain(f"r₋ log argument {ratio:.12g} does not exceed 1")
    r_minus = 0.25 * math.log(ratio)
    logger.debug("r_minus=%.12g kappa=%.6g lambda=(%.6g, %.6g)", r_minus, sc.kappa, sc.lambda_plus, sc.lambda_minus)
    return r_minus, sc


# --- r'1, r'2 -----------------------------------------------------------------


def _terms(sf: StandardForm, rp, boundary):
    """Общие промежуточные величины; rp может быть числом или массивом."""
    a, b, c1, c2 = sf.a, sf.b, sf.c1, sf.c2
    ab = a * b
    det = sf.det
    xi_plus = ab - c1 ** 2 + 1.0
    xi_minus = ab - c1 ** 2 - 1.0
    theta = ab * c2 - c1 ** 2 * c2 + c1
    sh2, ch2 = np.sinh(2.0 * rp), np.cosh(2.0 * rp)
    sh4 = 2.0 * sh2 * ch2
    # cosh 4r' - 1 без сокращения при малых r'
    ch4 = 1.0 + 2.0 * sh2 ** 2
    omega = (a - b) * ((a + b) * ch2 + (c2 - c1) * sh2)
    gamma = 0.5 * (a * a * (b * b - 1.0) - ab * (c1 ** 2 + c2 ** 2) - b * b + (c1 * c2 - 1.0) ** 2)
    zeta1 = a * a * (2.0 * b * b - 1.0) - 2.0 * ab * (c1 ** 2 + c2 ** 2 - 1.0) - b * b + 2.0 * c1 ** 2 * c2 ** 2 + 2.0
    zeta2 = 2.0 * (a + b) * (c1 - c2) * sh4 - ch4 * ((a + b) ** 2 - 4.0 * c1 * c2)

    radicand = gamma * (zeta1 + zeta2)
    scale = abs(gamma) * (abs(zeta1) + np.abs(zeta2))
    radicand = np.where(boundary | (np.abs(radicand) <= ZETA_TOL * scale), 0.0, radicand)

    base = (a - b) * xi_plus
    swing = 2.0 * theta * sh2 + (a + b) * xi_minus * ch2
    return {
        "xi_plus": xi_plus,
        "xi_minus": xi_minus,
        "theta": theta,
        "omega": omega,
        "gamma": gamma,
        "zeta1": zeta1,
        "zeta2": zeta2,
        "radicand": radicand,
        "num1": base - swing,
        "num2": base + swing,
        "den1": omega - det + 1.0,
        "den2": omega + det - 1.0,
    }


def _chi(rp, r1, r2):
    t = np.tanh(rp) ** 2
    return np.sqrt((np.exp(-2.0 * r1) + np.exp(-2.0 * r2) * t) / (np.exp(2.0 * r1) + np.exp(2.0 * r2) * t))


def _snap_to_boundary(rp: float, r_minus: float) -> float:
    if rp < r_minus - BOUNDARY_TOL:
        raise NumericalDomain(f"r'={rp:.12g} lies below r₋={r_minus:.12g}")
    return max(rp, r_minus)


def local_squeezings_at(sf: StandardForm, r_prime: float, r_minus: float) -> tuple[float, float, LocalSqueezingScalars]:
    """То же, что :func:`local_squeezings`, с заранее вычисленным r₋."""
    rp = _snap_to_boundary(float(r_prime), r_minus)
    boundary = abs(rp - r_minus) <= BOUNDARY_TOL
    t = _terms(sf, rp, boundary)

    if _is_pure(sf):
        # 0/0 в замкнутых формулах: чистому состоянию локальное сжатие не нужно
        if not boundary:
            raise NumericalDomain(f"pure state admits no decomposition with r'={rp:.12g} > r₋")
        r1 = r2 = 0.0
    else:
        radicand = float(t["radicand"])
        if radicand < 0.0:
            raise NumericalDomain(f"γ(ζ1 + ζ2) = {radicand:.6e} is negative at r'={rp:.12g}")
        root = math.sqrt(radicand)
        q1 = float(t["num1"]) / (float(t["den1"]) + root)
        q2 = float(t["num2"]) / (float(t["den2"]) + root)
        if not (q1 > 0.0 and q2 > 0.0 and math.isfinite(q1) and math.isfinite(q2)):
            raise NumericalDomain(f"local squeezing log arguments ({q1:.6e}, {q2:.6e}) at r'={rp:.12g}")
        r1, r2 = 0.5 * math.log(q1), 0.5 * math.log(q2)

    scalars = LocalSqueezingScalars(
        xi_plus=float(t["xi_plus"]),
        xi_minus=float(t["xi_minus"]),
        theta=float(t["theta"]),
        omega=float(t["omega"]),
        gamma=float(t["gamma"]),
        zeta1=float(t["zeta1"]),
        zeta2=float(t["zeta2"]),
        chi=float(_chi(rp, r1, r2)),
    )
    return r1, r2, scalars


def local_squeezings(sf: StandardForm, r_prime: float) -> tuple[float, float, LocalSqueezingScalars]:
    r_minus, _ = r_lower(sf)
    return local_squeezings_at(sf, r_prime, r_minus)


def local_squeezings_many(sf: StandardForm, r_primes: np.ndarray, r_minus: float) -> tuple[np.ndarray, np.ndarray]:
    """Векторная версия для сеток: NaN там, где формулы вне области определения."""
    rp = np.maximum(np.asarray(r_primes, dtype=float), r_minus)
    boundary = np.abs(rp - r_minus) <= BOUNDARY_TOL
    if _is_pure(sf):
        zeros = np.where(boundary, 0.0, np.nan)
        return zeros, zeros.copy()
    t = _terms(sf, rp, boundary)
    with np.errstate(invalid="ignore", divide="ignore"):
        root = np.sqrt(np.where(t["radicand"] < 0.0, np.nan, t["radicand"]))
        q1 = t["num1"] / (t["den1"] + root)
        q2 = t["num2"] / (t["den2"] + root)
        ok = (q1 > 0.0) & (q2 > 0.0) & np.isfinite(q1) & np.isfinite(q2)
        r1 = np.where(ok, 0.5 * np.log(np.where(ok, q1, 1.0)), np.nan)
        r2 = np.where(ok, 0.5 * np.log(np.where(ok, q2, 1.0)), np.nan)
    return r1, r2


# --- k(r') ------------------------------------------------------------------


def _sinh_2k(rp, r1, r2):
    # cosh 2k = χ (cosh²r' e^{2r1} + sinh²r' e^{2r2}) тождественно
    # sinh 2k = sinh 2r' cosh(r1 - r2); вторая форма точна и при k -> 0
    return np.sinh(2.0 * rp) * np.cosh(r1 - r2)


def k_of(r_prime: float, r1: float, r2: float) -> float:
    """Двухмодовое сжатие прямой формы для чистого состояния S2(r') L(r1, r2)|0>."""
    return 0.5 * math.asinh(float(_sinh_2k(r_prime, r1, r2)))


def k_of_many(r_primes: np.ndarray, r1: np.ndarray, r2: np.ndarray) -> np.ndarray:
    return 0.5 * np.arcsinh(_sinh_2k(np.asarray(r_primes, dtype=float), r1, r2))


# --- сборка -----------------------------------------------------------------


def decomposition_matrix(dec: SymplecticDecomposition) -> SymplecticMatrix:
    squeezer = two_mode_squeezer(dec.r)
    local = local_squeezer(dec.r1, dec.r2)
    if dec.direction is Direction.FORWARD:
        return local @ squeezer
    return squeezer @ local


def assemble_pure(dec: SymplecticDecomposition) -> CovarianceMatrix:
    sigma = decomposition_matrix(dec).m
    return CovarianceMatrix.symmetrized(sigma @ sigma.T)


def to_forward(dec: SymplecticDecomposition) -> SymplecticDecomposition:
    """Параметры (k, k1, k2) того же чистого состояния в прямой форме."""
    if dec.direction is Direction.FORWARD:
        return dec
    c2, s2 = math.cosh(dec.r) ** 2, math.sinh(dec.r) ** 2
    e1, e2 = math.exp(2.0 * dec.r1), math.exp(2.0 * dec.r2)
    ax, ap = c2 * e1 + s2 * e2, c2 / e1 + s2 / e2
    bx, bp = s2 * e1 + c2 * e2, s2 / e1 + c2 / e2
    k = k_of(dec.r, dec.r1, dec.r2)
    return SymplecticDecomposition.forward(k, 0.25 * math.log(ax / ap), 0.25 * math.log(bx / bp))


def residual(sf: StandardForm, dec: SymplecticDecomposition) -> Residual:
    phi = expand(sf).m - assemble_pure(dec).m
    phi = 0.5 * (phi + phi.T)
    phi.setflags(write=False)
    return Residual(phi, float(np.linalg.eigvalsh(phi)[0]))


def classical_core(sf: StandardForm, dec: SymplecticDecomposition) -> CovarianceMatrix:
    """Σ⁻¹ σ Σ⁻ᵀ: состояние, из которого Σ готовит σ."""
    inv = decomposition_matrix(dec).inverse()
    core = inv.m @ expand(sf).m @ inv.m.T
    if not np.all(np.isfinite(core)):
        raise SingularTransform(f"inverse of {dec} overflows")
    return CovarianceMatrix.symmetrized(core)


# --- численная проверка r₋ ----------------------------------------------------


def _pt_gap(sf: StandardForm, rp: float) -> float:
    unsqueezed = apply(two_mode_squeezer(-rp), expand(sf))
    return pt_spectrum(unsqueezed).nu_minus - 1.0


def separability_squeezing(sf: StandardForm, grid_points: int = 400) -> float:
    """Наименьшее r', при котором S2(-r') σ S2(-r')ᵀ сепарабельно.

    Ищется численно (сетка + brentq), независимо от замкнутой формы r₋.
    """
    if _pt_gap(sf, 0.0) >= -PHYSICAL_TOL:
        raise NotEntangled("state is already separable")
    # cosh 2k <= a для любого допустимого чистого состояния, а r₋ <= k
    r_hi = 0.5 * math.acosh(max(sf.a, sf.b))
    grid = np.linspace(0.0, r_hi, grid_points)
    gaps = np.array([_pt_gap(sf, rp) for rp in grid])
    crossing = np.flatnonzero(gaps >= 0.0)
    if crossing.size:
        i = int(crossing[0])
        if gaps[i] == 0.0:
            return float(grid[i])
        return float(brentq(lambda rp: _pt_gap(sf, rp), grid[i - 1], grid[i], xtol=1e-14))
    # чистые состояния только касаются границы
    i = int(np.argmax(gaps))
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, grid_points - 1)]
    res = minimize_scalar(lambda rp: -_pt_gap(sf, rp), bounds=(lo, hi), method="bounded", options={"xatol": 1e-12})
    if -res.fun < -PHYSICAL_TOL:
        raise NumericalDomain(f"no squeezing in [0, {r_hi:.6g}] makes the state separable")
    return float(res.x)
