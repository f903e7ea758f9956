import logging
from pathlib import Path, PurePath

from fastapi import APIRouter

from gauss_eof import config
from gauss_eof.ensemble import SweepConfig, run_sweep
from gauss_eof.errors import GaussEofError, InvalidInput
from gauss_eof.routers.states import domain_error
from gauss_eof.schemas import EnsembleRecordRead, SweepRequest, SweepSummaryRead

logger = logging.getLogger(__name__)

router = APIRouter(prefix="/sweeps", tags=["sweeps"])


def results_path(relative: str) -> str:
    """Путь внутри GAUSS_EOF_RESULTS_DIR; абсолютные пути и выход наружу запрещены."""
    name = PurePath(relative)
    if name.is_absolute() or name.anchor or ".." in name.parts or not name.parts:
        raise InvalidInput(f"output_path must be relative to the results directory, got {relative!r}")
    root = Path(config.RESULTS_DIR).resolve()
    target = (root / name).resolve()
    if not target.is_relative_to(root):
        raise InvalidInput(f"output_path {relative!r} leaves the results directory")
    return str(target)


@router.post("/", response_model=SweepSummaryRead)
def create_sweep(request: SweepRequest):
    """Запустить ансамбль случайных запутанных состояний"""
    try:
        output_path = results_path(request.output_path) if request.output_path else None
        cfg = SweepConfig(
            n_states=request.n_states,
            s_max=request.s_max,
            seed=request.seed,
            min_purity=request.min_purity,
            output_path=output_path,
            bins=request.bins,
            grid_points=request.grid_points,
        )
        logger.info("sweep requested: n=%d seed=%d", cfg.n_states, cfg.seed)
        records, summary = run_sweep(cfg)
    except GaussEofError as exc:
        raise domain_error(exc)
    read = SweepSummaryRead.model_validate(summary)
    if request.include_records:
        read.records = [EnsembleRecordRead.model_validate(rec.row()) for rec in records]
    return read
