from fastapi import APIRouter, HTTPException

from gauss_eof.eof import conjecture_check, eof_bounds, eof_exact, eof_oracle
from gauss_eof.errors import GaussEofError
from gauss_eof.schemas import (
    BoundsRead,
    CheckRead,
    ConjectureRead,
    EofRead,
    OracleRead,
    StateIn,
    check_state,
)

router = APIRouter(prefix="/states", tags=["states"])


def domain_error(exc: GaussEofError) -> HTTPException:
    return HTTPException(status_code=exc.http_status, detail=str(exc))


@router.post("/check", response_model=CheckRead)
def check(state: StateIn):
    """Физичность, классичность, сепарабельность, спектры"""
    try:
        return check_state(state)
    except GaussEofError as exc:
        raise domain_error(exc)


@router.post("/bounds", response_model=BoundsRead)
def bounds(state: StateIn):
    """Нижняя и верхняя аналитические границы EoF"""
    try:
        return eof_bounds(state.to_standard_form())
    except GaussEofError as exc:
        raise domain_error(exc)


@router.post("/exact", response_model=EofRead)
def exact(state: StateIn, grid_points: int | None = None, tol_r: float | None = None):
    """Точное значение EoF"""
    try:
        return eof_exact(state.to_standard_form(), grid_points=grid_points, tol_r=tol_r)
    except GaussEofError as exc:
        raise domain_error(exc)


@router.post("/oracle", response_model=OracleRead)
def oracle(state: StateIn, n_r: int = 400, n_local: int = 120, range_local: float = 2.5):
    """Перебор по чистым состояниям для сверки с точным значением"""
    try:
        sf = state.to_standard_form()
        value = eof_oracle(sf, n_r=n_r, n_local=n_local, range_local=range_local)
        reference = eof_exact(sf).exact
    except GaussEofError as exc:
        raise domain_error(exc)
    return OracleRead(oracle=value, exact=reference, gap=value - reference)


@router.post("/conjecture", response_model=ConjectureRead)
def conjecture(state: StateIn):
    """Точность верхней границы для семейства β = -1"""
    try:
        return conjecture_check(state.to_standard_form())
    except GaussEofError as exc:
        raise domain_error(exc)
