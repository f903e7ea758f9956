"""Двухмодовые гауссовы состояния: ковариационные матрицы, стандартная форма,
симплектические спектры и критерии классичности/сепарабельности.

Соглашение: x = a + a^†, ковариационная матрица вакуума равна единичной.
Порядок квадратур (x1, p1, x2, p2).
"""
import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import block_diag

from gauss_eof.errors import (
    InvalidInput,
    InvalidParams,
    NotPhysical,
    NumericalDomain,
    ParametrizationMismatch,
)

logger = logging.getLogger(__name__)

SYMMETRY_TOL = 1e-12
PHYSICAL_TOL = 1e-9
CLAMP_TOL = 1e-12
PURITY_TOL = 1e-6
SYMPLECTIC_TOL = 1e-12

Z = np.diag([1.0, -1.0])
_J = np.array([[0.0, 1.0], [-1.0, 0.0]])
OMEGA = block_diag(_J, _J)
OMEGA.setflags(write=False)


def symplectic_form() -> np.ndarray:
    return OMEGA.copy()


def clamped_sqrt(x: float, scale: float = 1.0, what: str = "radicand") -> float:
    """sqrt, прижимающий к нулю аргументы в пределах CLAMP_TOL от границы."""
    tol = CLAMP_TOL * max(1.0, abs(scale))
    if abs(x) <= tol:
        if abs(x) > CLAMP_TOL:
            logger.warning("%s %.3e clamped to zero (tolerance %.3e)", what, x, tol)
        return 0.0
    if x < 0:
        raise NumericalDomain(f"{what} is negative: {x:.6e}")
    return math.sqrt(x)


def _readonly(m) -> np.ndarray:
    arr = np.array(m, dtype=float)
    arr.setflags(write=False)
    return arr


# --- типы -------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CovarianceMatrix:
    """Симметричная 4x4 матрица вторых моментов.

    Конструктор проверяет только форму и симметрию; физичность проверяется
    через :meth:`require_physical`, потому что промежуточные матрицы
    (частичное транспонирование, остаток разложения) физичными быть не обязаны.
    """

    m: np.ndarray

    def __post_init__(self):
        try:
            arr = np.array(self.m, dtype=float)
        except (TypeError, ValueError) as exc:
            raise InvalidInput(f"covariance matrix is not a numeric 4x4 array: {exc}") from exc
        if arr.shape != (4, 4):
            raise InvalidInput(f"covariance matrix must be 4x4, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise InvalidInput("covariance matrix has non-finite entries")
        asym = float(np.max(np.abs(arr - arr.T)))
        if asym > SYMMETRY_TOL:
            raise InvalidInput(f"covariance matrix is not symmetric (max |m - m^T| = {asym:.3e})")
        object.__setattr__(self, "m", _readonly(0.5 * (arr + arr.T)))

    @classmethod
    def symmetrized(cls, m) -> "CovarianceMatrix":
        """Для результатов S m S^T, где асимметрия вызвана только округлением."""
        arr = np.asarray(m, dtype=float)
        return cls(0.5 * (arr + arr.T))

    def blocks(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return self.m[:2, :2], self.m[2:, 2:], self.m[:2, 2:]

    @property
    def det(self) -> float:
        return float(np.linalg.det(self.m))

    def is_positive_definite(self) -> bool:
        return bool(np.linalg.eigvalsh(self.m)[0] > 0.0)

    def is_physical(self) -> bool:
        if not self.is_positive_definite():
            return False
        try:
            return symplectic_spectrum(self).nu_minus >= 1.0 - PHYSICAL_TOL
        except NumericalDomain:
            return False

    def require_physical(self) -> "CovarianceMatrix":
        if not self.is_positive_definite():
            raise NotPhysical("covariance matrix is not positive definite")
        nu_minus = symplectic_spectrum(self).nu_minus
        if nu_minus < 1.0 - PHYSICAL_TOL:
            raise NotPhysical(f"smallest symplectic eigenvalue {nu_minus:.9g} < 1")
        return self

    def tolist(self) -> list[list[float]]:
        return self.m.tolist()


@dataclass(frozen=True)
class StandardForm:
    a: float
    b: float
    c1: float
    c2: float

    def __post_init__(self):
        for name in ("a", "b", "c1", "c2"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise InvalidInput(f"standard form entry {name} is not finite")
            object.__setattr__(self, name, value)

    def swapped(self) -> "StandardForm":
        # перестановка мод: C -> C^T, а C диагональна
        return StandardForm(self.b, self.a, self.c1, self.c2)

    @property
    def det(self) -> float:
        ab = self.a * self.b
        return (ab - self.c1 ** 2) * (ab - self.c2 ** 2)

    @property
    def is_symmetric(self) -> bool:
        return self.a == self.b

    def validate(self) -> "StandardForm":
        tol = PHYSICAL_TOL
        if self.a < 1.0 - tol or self.b < 1.0 - tol:
            raise NotPhysical(f"local variances must be >= 1, got a={self.a}, b={self.b}")
        if self.a < self.b - tol:
            raise InvalidInput(f"standard form requires a >= b, got a={self.a}, b={self.b}")
        if self.c1 < abs(self.c2) - tol:
            raise InvalidInput(f"standard form requires c1 >= |c2|, got c1={self.c1}, c2={self.c2}")
        expand(self).require_physical()
        return self


@dataclass(frozen=True)
class PurityParams:
    """Параметризация стандартной формы через локальные и глобальную чистоты."""

    mu_a: float
    mu_b: float
    mu: float
    beta: float

    @property
    def a(self) -> float:
        return 1.0 / self.mu_a

    @property
    def b(self) -> float:
        return 1.0 / self.mu_b

    @property
    def s(self) -> float:
        return (self.a + self.b) / 2.0

    @property
    def d(self) -> float:
        return (self.a - self.b) / 2.0

    @property
    def g(self) -> float:
        return 1.0 / self.mu

    def _shift(self) -> float:
        # общий для z и w член: (β-1)(1+g²) - 2(β+1)(2d²+g)
        g, d, beta = self.g, self.d, self.beta
        return (beta - 1.0) * (1.0 + g * g) - 2.0 * (beta + 1.0) * (2.0 * d * d + g)

    def _radical(self, lead: float, what: str) -> float:
        bracket = lead + self._shift()
        rad = bracket * bracket - 16.0 * self.g ** 2
        try:
            return clamped_sqrt(rad, scale=max(bracket * bracket, 16.0 * self.g ** 2), what=what)
        except NumericalDomain as exc:
            raise InvalidParams(f"{what} radicand is negative for {self}") from exc

    @property
    def z(self) -> float:
        return self._radical(8.0 * self.d ** 2, "z")

    @property
    def w(self) -> float:
        return self._radical(8.0 * self.s ** 2, "w")

    def validate(self) -> "PurityParams":
        for name in ("mu_a", "mu_b", "mu"):
            value = getattr(self, name)
            if not (0.0 < value <= 1.0):
                raise InvalidParams(f"{name} must lie in (0, 1], got {value}")
        if not (-1.0 <= self.beta <= 1.0):
            raise InvalidParams(f"beta must lie in [-1, 1], got {self.beta}")
        s, d, g = self.s, self.d, self.g
        tol = PHYSICAL_TOL
        if s < 1.0 - tol or abs(d) > s - 1.0 + tol:
            raise InvalidParams(f"need s >= 1 and |d| <= s - 1, got s={s}, d={d}")
        if g < 2.0 * abs(d) + 1.0 - tol:
            raise InvalidParams(f"need g >= 2|d| + 1, got g={g}, d={d}")
        # радикалы z, w бросают InvalidParams сами
        self.z, self.w
        return self


@dataclass(frozen=True)
class SymplecticSpectrum:
    nu_minus: float
    nu_plus: float
    delta: float


@dataclass(frozen=True, eq=False)
class SymplecticMatrix:
    m: np.ndarray

    def __post_init__(self):
        arr = np.array(self.m, dtype=float)
        if arr.shape != (4, 4):
            raise InvalidInput(f"symplectic matrix must be 4x4, got shape {arr.shape}")
        if not is_symplectic(arr):
            raise InvalidInput("matrix does not preserve the symplectic form")
        object.__setattr__(self, "m", _readonly(arr))

    def __matmul__(self, other: "SymplecticMatrix") -> "SymplecticMatrix":
        return SymplecticMatrix(self.m @ other.m)

    def inverse(self) -> "SymplecticMatrix":
        # S^{-1} = -Ω S^T Ω
        return SymplecticMatrix(-OMEGA @ self.m.T @ OMEGA)


def is_symplectic(m) -> bool:
    arr = np.asarray(m, dtype=float)
    if arr.shape != (4, 4):
        return False
    scale = max(1.0, float(np.max(np.abs(arr))) ** 2)
    return bool(np.max(np.abs(arr @ OMEGA @ arr.T - OMEGA)) <= SYMPLECTIC_TOL * scale)


# --- конструкторы состояний --------------------------------------------------


def vacuum() -> CovarianceMatrix:
    return CovarianceMatrix(np.eye(4))


def thermal(n_a: float, n_b: float) -> CovarianceMatrix:
    """Произведение тепловых состояний с дисперсиями n_a, n_b (>= 1)."""
    return CovarianceMatrix(np.diag([n_a, n_a, n_b, n_b]))


def tmsv(r: float) -> CovarianceMatrix:
    return expand(tmsv_standard_form(r))


def tmsv_standard_form(r: float) -> StandardForm:
    ch, sh = math.cosh(2.0 * r), math.sinh(2.0 * abs(r))
    return StandardForm(ch, ch, sh, -sh)


def glems(mu_a: float, mu_b: float, mu: float) -> StandardForm:
    return from_purity_params(PurityParams(mu_a, mu_b, mu, -1.0))


def gmems(mu_a: float, mu_b: float, mu: float) -> StandardForm:
    return from_purity_params(PurityParams(mu_a, mu_b, mu, 1.0))


# --- операции ---------------------------------------------------------------


def expand(sf: StandardForm) -> CovarianceMatrix:
    m = np.array([
        [sf.a, 0.0, sf.c1, 0.0],
        [0.0, sf.a, 0.0, sf.c2],
        [sf.c1, 0.0, sf.b, 0.0],
        [0.0, sf.c2, 0.0, sf.b],
    ])
    return CovarianceMatrix(m)


def purities(c: CovarianceMatrix) -> tuple[float, float, float]:
    """(μ, μ_a, μ_b) = 1/sqrt(det σ), 1/sqrt(det A), 1/sqrt(det B)."""
    A, B, _ = c.blocks()
    dets = (c.det, float(np.linalg.det(A)), float(np.linalg.det(B)))
    if min(dets) <= 0.0:
        raise NumericalDomain(f"non-positive determinant in purities: {dets}")
    return tuple(1.0 / math.sqrt(x) for x in dets)


def from_purity_params(p: PurityParams) -> StandardForm:
    p.validate()
    a, b = p.a, p.b
    root = math.sqrt(p.mu_a * p.mu_b) / 8.0
    z, w = p.z, p.w
    raw = StandardForm(a, b, (z + w) * root, (z - w) * root)
    try:
        mu, mu_a, mu_b = purities(expand(raw))
    except NumericalDomain as exc:
        raise ParametrizationMismatch(f"expanded matrix for {p} has non-positive determinant") from exc
    mismatch = max(abs(mu - p.mu), abs(mu_a - p.mu_a), abs(mu_b - p.mu_b))
    if mismatch > PURITY_TOL:
        raise ParametrizationMismatch(
            f"recomputed purities ({mu:.9g}, {mu_a:.9g}, {mu_b:.9g}) differ from {p} by {mismatch:.3e}"
        )
    return raw if raw.a >= raw.b else raw.swapped()


def _williamson_pair(m: np.ndarray) -> tuple[float, float]:
    """Симплектические собственные значения через эрмитову i σ^{1/2} Ω σ^{1/2}.

    Собственные значения этой матрицы равны ±ν; она эрмитова, поэтому
    вырожденный случай ν₋ = ν₊ (чистые состояния) не теряет точность.
    """
    w, v = np.linalg.eigh(m)
    if w[0] <= 0.0:
        raise NotPhysical("matrix is not positive definite")
    root = (v * np.sqrt(w)) @ v.T
    ev = np.linalg.eigvalsh(1j * root @ OMEGA @ root)
    return float(ev[2]), float(ev[3])


def _check_discriminant(invariant: float, det: float, what: str) -> None:
    disc = invariant * invariant - 4.0 * det
    if disc < -PHYSICAL_TOL:
        raise NumericalDomain(f"{what}^2 - 4 det σ = {disc:.3e} < 0")


def symplectic_spectrum(c: CovarianceMatrix) -> SymplecticSpectrum:
    A, B, C = c.blocks()
    delta = float(np.linalg.det(A) + np.linalg.det(B) + 2.0 * np.linalg.det(C))
    _check_discriminant(delta, c.det, "Δ")
    nu_minus, nu_plus = _williamson_pair(c.m)
    return SymplecticSpectrum(nu_minus, nu_plus, delta)


def partial_transpose(c: CovarianceMatrix) -> CovarianceMatrix:
    flip = block_diag(np.eye(2), Z)
    return CovarianceMatrix(flip @ c.m @ flip)


def pt_spectrum(c: CovarianceMatrix) -> SymplecticSpectrum:
    A, B, C = c.blocks()
    e = float(np.linalg.det(A) + np.linalg.det(B) - 2.0 * np.linalg.det(C))
    _check_discriminant(e, c.det, "E")
    nu_minus, nu_plus = _williamson_pair(partial_transpose(c).m)
    return SymplecticSpectrum(nu_minus, nu_plus, e)


def is_separable(c: CovarianceMatrix) -> bool:
    c.require_physical()
    return pt_spectrum(c).nu_minus >= 1.0 - PHYSICAL_TOL


def is_classical(c: CovarianceMatrix) -> bool:
    try:
        sf, _ = _standardize(c)
    except (NotPhysical, NumericalDomain):
        return False
    return bool(np.linalg.eigvalsh(expand(sf).m)[0] >= 1.0 - PHYSICAL_TOL)


# --- симплектические преобразования ------------------------------------------


def two_mode_squeezer(r: float) -> SymplecticMatrix:
    ch, sh = math.cosh(r), math.sinh(r)
    return SymplecticMatrix(np.block([[ch * np.eye(2), sh * Z], [sh * Z, ch * np.eye(2)]]))


def local_squeezer(r1: float, r2: float) -> SymplecticMatrix:
    return SymplecticMatrix(np.diag([math.exp(r1), math.exp(-r1), math.exp(r2), math.exp(-r2)]))


def _rotation(theta: float) -> np.ndarray:
    cs, sn = math.cos(theta), math.sin(theta)
    return np.array([[cs, sn], [-sn, cs]])


def local_rotation(theta1: float, theta2: float) -> SymplecticMatrix:
    return SymplecticMatrix(block_diag(_rotation(theta1), _rotation(theta2)))


def beam_splitter(theta: float) -> SymplecticMatrix:
    cs, sn = math.cos(theta), math.sin(theta)
    return SymplecticMatrix(np.block([[cs * np.eye(2), sn * np.eye(2)], [-sn * np.eye(2), cs * np.eye(2)]]))


def apply(S: SymplecticMatrix, c: CovarianceMatrix) -> CovarianceMatrix:
    return CovarianceMatrix.symmetrized(S.m @ c.m @ S.m.T)


# --- приведение к стандартной форме ------------------------------------------


def _normalizer(block: np.ndarray) -> np.ndarray:
    """det(block)^{1/4} block^{-1/2}: симплектика 2x2, переводящая block в sqrt(det)·1."""
    w, v = np.linalg.eigh(block)
    if w[0] <= 0.0:
        raise NotPhysical("local block is not positive definite")
    return math.sqrt(math.sqrt(w[0] * w[1])) * (v / np.sqrt(w)) @ v.T


def _proper_svd(C: np.ndarray) -> tuple[np.ndarray, np.ndarray, float, float]:
    """C = U diag(c1, c2) V^T с U, V из SO(2), c1 >= |c2|."""
    U, sv, Vt = np.linalg.svd(C)
    V = Vt.T
    c1, c2 = float(sv[0]), float(sv[1])
    if np.linalg.det(U) < 0:
        U = U @ Z
        c2 = -c2
    if np.linalg.det(V) < 0:
        V = V @ Z
        c2 = -c2
    return U, V, c1, c2


def _standardize(c: CovarianceMatrix) -> tuple[StandardForm, np.ndarray]:
    A, B, _ = c.blocks()
    N = block_diag(_normalizer(A), _normalizer(B))
    normal = N @ c.m @ N.T
    a, b = float(normal[0, 0] + normal[1, 1]) / 2.0, float(normal[2, 2] + normal[3, 3]) / 2.0
    U, V, c1, c2 = _proper_svd(normal[:2, 2:])
    # вырожденный случай c1 = |c2|: знак c2 задаёт det C, он инвариантен
    R = block_diag(U.T, V.T)
    S = R @ N
    sf = StandardForm(a, b, c1, c2)
    if sf.a < sf.b:
        swap = np.block([[np.zeros((2, 2)), np.eye(2)], [np.eye(2), np.zeros((2, 2))]])
        S = swap @ S
        sf = sf.swapped()
    return sf, S


def reduce_to_standard_form(c: CovarianceMatrix) -> tuple[StandardForm, SymplecticMatrix]:
    """Локальными симплектиками (и, при a < b, перестановкой мод) приводит σ
    к стандартной форме. Возвращает (sf, S) с S σ S^T = expand(sf)."""
    c.require_physical()
    sf, S = _standardize(c)
    logger.debug("standard form %s", sf)
    return sf, SymplecticMatrix(S)
