"""Запутанность формирования двухмодовых гауссовых состояний.

Нижняя и верхняя границы получаются из минимального двухмодового сжатия r₋
и чистого состояния, собранного при r₋. Точное значение минимизирует
H(k(r')) по r' из [r₋, r₊], где r₊ = k(r₋). :func:`eof_oracle` перебирает
чистые состояния без поворотов независимо от оптимизатора и служит для сверки.
"""
import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize
from scipy.special import xlogy

from gauss_eof import config
from gauss_eof.decomp import (
    SymplecticDecomposition,
    k_of,
    k_of_many,
    local_squeezings_at,
    local_squeezings_many,
    r_lower,
    residual,
)
from gauss_eof.errors import (
    NoConvergence,
    NoFeasiblePoint,
    NotApplicable,
    NotEntangled,
    NumericalDomain,
)
from gauss_eof.gs_core import (
    PHYSICAL_TOL,
    CovarianceMatrix,
    StandardForm,
    expand,
    pt_spectrum,
    reduce_to_standard_form,
    symplectic_spectrum,
    tmsv,
)

logger = logging.getLogger(__name__)

MAX_REFINEMENTS = 200
FEASIBLE_TOL = 1e-9
TIGHT_TOL = 1e-6
FAMILY_TOL = 1e-6
_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def entropy_of_entanglement(r):
    """H(r) = cosh²r log₂ cosh²r - sinh²r log₂ sinh²r, в ebit. Работает и с массивами."""
    x = np.sinh(r) ** 2
    value = (xlogy(1.0 + x, 1.0 + x) - xlogy(x, x)) / math.log(2.0)
    return float(value) if np.ndim(value) == 0 else value


@dataclass(frozen=True)
class EofBounds:
    lower: float
    upper: float
    r_minus: float
    r_plus: float
    r1: float
    r2: float


@dataclass(frozen=True)
class EofResult:
    lower: float
    upper: float
    exact: float
    r_minus: float
    r_plus: float
    r_opt: float
    evaluations: int
    converged: bool


@dataclass(frozen=True)
class ConjectureResult:
    applicable: bool
    tight: bool
    gap: float
    squeezing_mismatch: float
    threshold: float


SEPARABLE_BOUNDS = EofBounds(0.0, 0.0, 0.0, 0.0, 0.0, 0.0)


def _is_separable(sf: StandardForm) -> bool:
    return pt_spectrum(expand(sf)).nu_minus >= 1.0 - PHYSICAL_TOL


def eof_bounds(sf: StandardForm) -> EofBounds:
    """Обе границы из одного вычисления r₋; для сепарабельных состояний нули."""
    if _is_separable(sf):
        return SEPARABLE_BOUNDS
    r_minus, _ = r_lower(sf)
    r1, r2, _ = local_squeezings_at(sf, r_minus, r_minus)
    r_plus = max(k_of(r_minus, r1, r2), r_minus)
    return EofBounds(
        lower=entropy_of_entanglement(r_minus),
        upper=entropy_of_entanglement(r_plus),
        r_minus=r_minus,
        r_plus=r_plus,
        r1=r1,
        r2=r2,
    )


def eof_lower(sf: StandardForm) -> float:
    return eof_bounds(sf).lower


def eof_upper(sf: StandardForm) -> float:
    return eof_bounds(sf).upper


def _objective(sf: StandardForm, r_minus: float):
    """k(r') при r'1, r'2 из замкнутой формы; +inf вне области определения."""

    def k(rp: float) -> float:
        try:
            r1, r2, _ = local_squeezings_at(sf, rp, r_minus)
            return k_of(rp, r1, r2)
        except NumericalDomain:
            return math.inf

    return k


def _golden_section(f, lo: float, hi: float, tol: float) -> tuple[float, float, int, bool]:
    c = hi - _INV_PHI * (hi - lo)
    d = lo + _INV_PHI * (hi - lo)
    fc, fd = f(c), f(d)
    evaluations = 2
    for _ in range(MAX_REFINEMENTS):
        if hi - lo <= tol:
            break
        # при равенстве оставляем левую часть: меньшее r'
        if fc <= fd:
            hi, d, fd = d, c, fc
            c = hi - _INV_PHI * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + _INV_PHI * (hi - lo)
            fd = f(d)
        evaluations += 1
    else:
        return (c, fc, evaluations, False) if fc <= fd else (d, fd, evaluations, False)
    return (c, fc, evaluations, True) if fc <= fd else (d, fd, evaluations, True)


def eof_exact(sf: StandardForm, grid_points: int | None = None, tol_r: float | None = None) -> EofResult:
    grid_points = config.GRID_POINTS if grid_points is None else max(3, int(grid_points))
    tol_r = config.TOL_R if tol_r is None else float(tol_r)
    expand(sf).require_physical()

    bounds = eof_bounds(sf)
    if bounds is SEPARABLE_BOUNDS:
        return EofResult(0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0, True)

    r_minus, r_plus = bounds.r_minus, bounds.r_plus
    if r_plus - r_minus <= tol_r:
        return EofResult(bounds.lower, bounds.upper, bounds.lower, r_minus, r_plus, r_minus, 1, True)

    grid = np.linspace(r_minus, r_plus, grid_points)
    r1, r2 = local_squeezings_many(sf, grid, r_minus)
    ks = k_of_many(grid, r1, r2)
    ks = np.where(np.isfinite(ks), ks, np.inf)
    # на r₋ значение известно точно, сетка его только повторяет
    ks[0] = r_plus
    i = int(np.argmin(ks))
    best_r, best_k = float(grid[i]), float(ks[i])

    lo, hi = float(grid[max(i - 1, 0)]), float(grid[min(i + 1, grid_points - 1)])
    r_ref, k_ref, evaluations, converged = _golden_section(_objective(sf, r_minus), lo, hi, tol_r)
    evaluations += grid_points
    if not converged:
        raise NoConvergence(f"golden-section bracket [{lo:.12g}, {hi:.12g}] did not shrink below {tol_r:g}")
    if k_ref < best_k:
        best_r, best_k = r_ref, k_ref

    r1_opt, r2_opt, _ = local_squeezings_at(sf, best_r, r_minus)
    check = residual(sf, SymplecticDecomposition.reverse(best_r, r1_opt, r2_opt))
    if not check.is_valid:
        logger.warning("decomposition at r_opt=%.12g leaves residual eigenvalue %.3e", best_r, check.min_eigenvalue)

    exact = entropy_of_entanglement(best_k)
    logger.debug("eof_exact r_minus=%.10g r_opt=%.10g r_plus=%.10g exact=%.10g", r_minus, best_r, r_plus, exact)
    return EofResult(
        lower=bounds.lower,
        upper=bounds.upper,
        exact=exact,
        r_minus=r_minus,
        r_plus=r_plus,
        r_opt=best_r,
        evaluations=evaluations,
        converged=True,
    )


def eof(state: CovarianceMatrix, **opts) -> EofResult:
    """EoF произвольной ковариационной матрицы: сначала стандартная форма."""
    sf, _ = reduce_to_standard_form(state)
    return eof_exact(sf, **opts)


# --- оракул ---------------------------------------------------------------------


def _residual_min_eig(sigma: np.ndarray, pure: np.ndarray, l1, l2) -> np.ndarray:
    """λmin(σ - L T L) на сетке (l1, l2); L = diag(e^l1, e^-l1, e^l2, e^-l2)."""
    l1, l2 = np.broadcast_arrays(np.asarray(l1, dtype=float), np.asarray(l2, dtype=float))
    scale = np.stack([np.exp(l1), np.exp(-l1), np.exp(l2), np.exp(-l2)], axis=-1)
    phi = sigma - pure * scale[..., :, None] * scale[..., None, :]
    return np.linalg.eigvalsh(phi)[..., 0]


def _feasibility(sigma: np.ndarray, r: float, axis: np.ndarray) -> float:
    """max по (r1, r2) наименьшего собственного значения остатка."""
    pure = tmsv(r).m
    l1, l2 = np.meshgrid(axis, axis, indexing="ij")
    grid = _residual_min_eig(sigma, pure, l1, l2)
    j = np.unravel_index(int(np.argmax(grid)), grid.shape)
    start = np.array([l1[j], l2[j]])

    def neg(x):
        return -float(_residual_min_eig(sigma, pure, x[0], x[1]))

    best = -float(grid[j])
    # перезапуск из найденной точки: симплекс Нелдера-Мида застревает на изломах λmin
    for _ in range(2):
        res = minimize(neg, start, method="Nelder-Mead", options={"xatol": 1e-10, "fatol": 1e-14, "maxiter": 2000})
        if res.fun < best:
            best, start = float(res.fun), res.x
    return -best


def eof_oracle(sf: StandardForm, n_r: int = 400, n_local: int = 120, range_local: float = 2.5) -> float:
    """Минимум H(r) по допустимым чистым состояниям L(r1, r2) T(r) L(r1, r2)."""
    if _is_separable(sf):
        return 0.0
    bounds = eof_bounds(sf)
    width = bounds.r_plus - bounds.r_minus
    tol = 1e-9 + 1e-3 * width
    r_grid = np.linspace(max(bounds.r_minus - tol, 0.0), bounds.r_plus + tol, n_r)
    axis = np.linspace(-range_local, range_local, n_local)
    sigma = expand(sf).m

    def feasible(r: float) -> bool:
        return _feasibility(sigma, r, axis) >= -FEASIBLE_TOL

    previous = None
    for r in r_grid:
        if feasible(float(r)):
            break
        previous = float(r)
    else:
        raise NoFeasiblePoint(f"no feasible pure state with r in [{r_grid[0]:.9g}, {r_grid[-1]:.9g}]")

    hi = float(r)
    if previous is not None:
        lo = previous
        while hi - lo > 1e-10:
            mid = 0.5 * (lo + hi)
            if feasible(mid):
                hi = mid
            else:
                lo = mid
    logger.debug("oracle r=%.10g (r_minus=%.10g, r_plus=%.10g)", hi, bounds.r_minus, bounds.r_plus)
    return entropy_of_entanglement(hi)


# --- гипотеза для β = -1 ----------------------------------------------------


def conjecture_check(sf: StandardForm, grid_points: int | None = None) -> ConjectureResult:
    """Диагностика для семейства β = -1: верхняя граница точна, если
    |r'1 - r'2| при r₋ не превосходит ½ ln ν₊. Ничего не утверждает."""
    spectrum = symplectic_spectrum(expand(sf))
    if abs(spectrum.nu_minus - 1.0) > FAMILY_TOL:
        raise NotApplicable(f"state is not in the β = -1 family (ν₋ = {spectrum.nu_minus:.9g})")
    if _is_separable(sf):
        raise NotEntangled("conjecture check needs an entangled state")
    result = eof_exact(sf, grid_points=grid_points)
    bounds = eof_bounds(sf)
    mismatch = abs(bounds.r1 - bounds.r2)
    threshold = 0.5 * math.log(spectrum.nu_plus)
    gap = result.upper - result.exact
    return ConjectureResult(
        applicable=mismatch <= threshold,
        tight=abs(gap) <= TIGHT_TOL,
        gap=gap,
        squeezing_mismatch=mismatch,
        threshold=threshold,
    )
