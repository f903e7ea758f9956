"""Случайные запутанные состояния, разброс δ± по чистоте и запись результатов."""
import csv
import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from gauss_eof import config
from gauss_eof.eof import EofResult, conjecture_check, eof_exact
from gauss_eof.errors import (
    DivisionByZero,
    ExhaustedAttempts,
    InvalidInput,
    InvalidParams,
    NotPhysical,
    OutputError,
    ParametrizationMismatch,
)
from gauss_eof.gs_core import PHYSICAL_TOL, PurityParams, StandardForm, expand, from_purity_params, pt_spectrum

logger = logging.getLogger(__name__)

MAX_REJECTIONS = 1_000_000
MIN_EXACT = 1e-12

CSV_COLUMNS = [
    "index", "mu_a", "mu_b", "mu", "beta", "a", "b", "c1", "c2",
    "nu_gamma_minus", "r_minus", "r_plus",
    "eof_lower", "eof_exact", "eof_upper",
    "delta_minus_pct", "delta_plus_pct",
]


@dataclass(frozen=True)
class SweepConfig:
    n_states: int
    s_max: float = 5.0
    seed: int = 0
    min_purity: float = 0.0
    output_path: str | None = None
    bins: int = 20
    plot_path: str | None = None
    grid_points: int | None = None
    # None: β ~ U[-1, 1]; иначе фиксированное семейство
    beta: float | None = None

    def validate(self) -> "SweepConfig":
        if self.n_states < 1:
            raise InvalidInput(f"n_states must be >= 1, got {self.n_states}")
        if self.seed < 0:
            raise InvalidInput(f"seed must be a non-negative integer, got {self.seed}")
        if not self.s_max > 1.0:
            raise InvalidInput(f"s_max must exceed 1, got {self.s_max}")
        if not 0.0 <= self.min_purity < 1.0:
            raise InvalidInput(f"min_purity must lie in [0, 1), got {self.min_purity}")
        if self.bins < 1:
            raise InvalidInput(f"bins must be >= 1, got {self.bins}")
        if self.beta is not None and not -1.0 <= self.beta <= 1.0:
            raise InvalidInput(f"beta must lie in [-1, 1], got {self.beta}")
        return self


@dataclass(frozen=True)
class EnsembleRecord:
    index: int
    params: PurityParams
    sf: StandardForm
    mu: float
    nu_gamma_minus: float
    r_minus: float
    r_plus: float
    lower: float
    upper: float
    exact: float
    delta_minus: float
    delta_plus: float

    def row(self) -> dict[str, str]:
        values = {
            "mu_a": self.params.mu_a,
            "mu_b": self.params.mu_b,
            "mu": self.mu,
            "beta": self.params.beta,
            "a": self.sf.a,
            "b": self.sf.b,
            "c1": self.sf.c1,
            "c2": self.sf.c2,
            "nu_gamma_minus": self.nu_gamma_minus,
            "r_minus": self.r_minus,
            "r_plus": self.r_plus,
            "eof_lower": self.lower,
            "eof_exact": self.exact,
            "eof_upper": self.upper,
            "delta_minus_pct": self.delta_minus,
            "delta_plus_pct": self.delta_plus,
        }
        row = {"index": str(self.index)}
        row.update({key: format(value, ".12g") for key, value in values.items()})
        return row


@dataclass(frozen=True)
class BinStat:
    center: float
    count: int
    mean_delta_minus: float | None
    mean_delta_plus: float | None


@dataclass(frozen=True)
class SweepSummary:
    n_states: int
    rejections: int
    mean_delta_minus: float
    mean_delta_plus: float
    upper_closer_on_average: bool
    bins: list[BinStat] = field(default_factory=list)
    spearman_delta_minus: float | None = None
    spearman_delta_plus: float | None = None


@dataclass(frozen=True)
class ConjectureSummary:
    n_states: int
    applicable: int
    tight: int
    tight_when_applicable: int
    max_gap: float


# --- выборка -----------------------------------------------------------------


def _draw_params(rng: np.random.Generator, cfg: SweepConfig) -> PurityParams | None:
    """Один розыгрыш (s, d, g, β); None, если ограничение по чистоте пустое."""
    s = rng.uniform(1.0, cfg.s_max)
    d = rng.uniform(-(s - 1.0), s - 1.0)
    g_min = 2.0 * abs(d) + 1.0
    g_max = s * s - d * d
    if cfg.min_purity > 0.0:
        g_max = min(g_max, 1.0 / cfg.min_purity)
    if g_max < g_min:
        return None
    g = rng.uniform(g_min, g_max)
    beta = rng.uniform(-1.0, 1.0) if cfg.beta is None else cfg.beta
    return PurityParams(1.0 / (s + d), 1.0 / (s - d), 1.0 / g, beta)


def _sample(rng: np.random.Generator, cfg: SweepConfig) -> tuple[PurityParams, StandardForm, float, int]:
    rejections = 0
    while rejections < MAX_REJECTIONS:
        params = _draw_params(rng, cfg)
        if params is not None:
            try:
                sf = from_purity_params(params)
                expand(sf).require_physical()
                nu = pt_spectrum(expand(sf)).nu_minus
                if nu < 1.0 - PHYSICAL_TOL:
                    return params, sf, nu, rejections
            except (InvalidParams, ParametrizationMismatch, NotPhysical):
                pass
        rejections += 1
    raise ExhaustedAttempts(f"no entangled state after {MAX_REJECTIONS} draws with {cfg}")


def sample_entangled(rng: np.random.Generator, cfg: SweepConfig) -> StandardForm:
    """Случайное запутанное состояние в стандартной форме (отбор с отклонением)."""
    return _sample(rng, cfg.validate())[1]


def relative_differences(lower: float, upper: float, exact: float) -> tuple[float, float]:
    """δ± = |E - E±| / E в процентах."""
    if exact <= MIN_EXACT:
        raise DivisionByZero(f"relative difference undefined for EoF {exact:.3e}")
    return abs(exact - lower) / exact * 100.0, abs(exact - upper) / exact * 100.0


def _build_record(index: int, seed: np.random.SeedSequence, cfg: SweepConfig) -> tuple[EnsembleRecord, int]:
    rng = np.random.default_rng(seed)
    rejections = 0
    while True:
        params, sf, nu, rejected = _sample(rng, cfg)
        rejections += rejected
        result: EofResult = eof_exact(sf, grid_points=cfg.grid_points)
        if result.exact > MIN_EXACT:
            break
        rejections += 1
        if rejections >= MAX_REJECTIONS:
            raise ExhaustedAttempts(f"record {index}: every draw had vanishing EoF")
    delta_minus, delta_plus = relative_differences(result.lower, result.upper, result.exact)
    record = EnsembleRecord(
        index=index,
        params=params,
        sf=sf,
        mu=1.0 / math.sqrt(sf.det),
        nu_gamma_minus=nu,
        r_minus=result.r_minus,
        r_plus=result.r_plus,
        lower=result.lower,
        upper=result.upper,
        exact=result.exact,
        delta_minus=delta_minus,
        delta_plus=delta_plus,
    )
    return record, rejections


# --- сводка ------------------------------------------------------------------


def spearman(x, y) -> float | None:
    """Ранговая корреляция; None, если её нельзя определить."""
    if len(x) < 2:
        return None
    rho = stats.spearmanr(x, y).statistic
    return None if rho is None or not math.isfinite(rho) else float(rho)


def summarize(records: list[EnsembleRecord], rejections: int, bins: int) -> SweepSummary:
    mu = np.array([rec.mu for rec in records])
    dm = np.array([rec.delta_minus for rec in records])
    dp = np.array([rec.delta_plus for rec in records])
    edges = np.linspace(0.0, 1.0, bins + 1)
    which = np.clip(np.digitize(mu, edges[1:-1], right=True), 0, bins - 1)

    stats_per_bin = []
    for k in range(bins):
        mask = which == k
        count = int(mask.sum())
        stats_per_bin.append(BinStat(
            center=float(0.5 * (edges[k] + edges[k + 1])),
            count=count,
            mean_delta_minus=float(dm[mask].mean()) if count else None,
            mean_delta_plus=float(dp[mask].mean()) if count else None,
        ))
    filled = [b for b in stats_per_bin if b.count]

    mean_minus, mean_plus = float(dm.mean()), float(dp.mean())
    return SweepSummary(
        n_states=len(records),
        rejections=rejections,
        mean_delta_minus=mean_minus,
        mean_delta_plus=mean_plus,
        upper_closer_on_average=mean_plus <= mean_minus,
        bins=stats_per_bin,
        spearman_delta_minus=spearman([b.center for b in filled], [b.mean_delta_minus for b in filled]),
        spearman_delta_plus=spearman([b.center for b in filled], [b.mean_delta_plus for b in filled]),
    )


# --- файлы -------------------------------------------------------------------


def _ensure_parent(path: str) -> None:
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)


def write_csv(records: list[EnsembleRecord], path: str) -> None:
    try:
        _ensure_parent(path)
        with open(path, "w", newline="", encoding="utf-8") as f:
            w = csv.DictWriter(f, fieldnames=CSV_COLUMNS, lineterminator="\n")
            w.writeheader()
            for rec in records:
                w.writerow(rec.row())
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc}") from exc


def read_csv(path: str) -> list[dict[str, float]]:
    with open(path, newline="", encoding="utf-8") as f:
        return [
            {key: (int(value) if key == "index" else float(value)) for key, value in row.items()}
            for row in csv.DictReader(f)
        ]


def write_plot_data(records: list[EnsembleRecord], path: str) -> None:
    """Колонки для gnuplot: mu delta_minus_pct delta_plus_pct."""
    try:
        _ensure_parent(path)
        with open(path, "w", encoding="utf-8", newline="") as f:
            f.write("# mu delta_minus_pct delta_plus_pct\n")
            for rec in records:
                f.write(f"{rec.mu:.12g} {rec.delta_minus:.12g} {rec.delta_plus:.12g}\n")
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc}") from exc


# --- прогоны -----------------------------------------------------------------


def _records(cfg: SweepConfig) -> tuple[list[EnsembleRecord], int]:
    seeds = np.random.SeedSequence(cfg.seed).spawn(cfg.n_states)
    step = max(1, cfg.n_states // 10)
    records, rejections = [], 0
    # map сохраняет порядок индексов независимо от порядка завершения
    with ThreadPoolExecutor(max_workers=config.max_workers()) as pool:
        for record, rejected in pool.map(lambda i: _build_record(i, seeds[i], cfg), range(cfg.n_states)):
            records.append(record)
            rejections += rejected
            if len(records) % step == 0:
                logger.info("sweep: %d/%d states", len(records), cfg.n_states)
    return records, rejections


def run_sweep(cfg: SweepConfig) -> tuple[list[EnsembleRecord], SweepSummary]:
    cfg.validate()
    records, rejections = _records(cfg)
    summary = summarize(records, rejections, cfg.bins)
    if cfg.output_path:
        write_csv(records, cfg.output_path)
    if cfg.plot_path:
        write_plot_data(records, cfg.plot_path)
    logger.info(
        "sweep done: n=%d rejections=%d mean delta-=%.4g%% delta+=%.4g%%",
        summary.n_states, rejections, summary.mean_delta_minus, summary.mean_delta_plus,
    )
    return records, summary


def conjecture_sweep(n_states: int, seed: int = 0, s_max: float = 5.0, grid_points: int | None = None) -> ConjectureSummary:
    """Проверка точности верхней границы на случайных состояниях с β = -1."""
    cfg = SweepConfig(n_states=n_states, s_max=s_max, seed=seed, beta=-1.0, grid_points=grid_points).validate()
    seeds = np.random.SeedSequence(seed).spawn(n_states)

    def check(i: int):
        _, sf, _, _ = _sample(np.random.default_rng(seeds[i]), cfg)
        return conjecture_check(sf, grid_points=grid_points)

    with ThreadPoolExecutor(max_workers=config.max_workers()) as pool:
        results = list(pool.map(check, range(n_states)))
    return ConjectureSummary(
        n_states=n_states,
        applicable=sum(r.applicable for r in results),
        tight=sum(r.tight for r in results),
        tight_when_applicable=sum(r.applicable and r.tight for r in results),
        max_gap=max(r.gap for r in results),
    )
