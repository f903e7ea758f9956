import json

from pydantic import BaseModel, Field, ValidationError, model_validator

from gauss_eof.errors import InvalidInput, NotPhysical, NumericalDomain
from gauss_eof.gs_core import (
    CovarianceMatrix,
    PurityParams,
    StandardForm,
    expand,
    from_purity_params,
    is_classical,
    is_separable,
    pt_spectrum,
    purities,
    reduce_to_standard_form,
    symplectic_spectrum,
)


class StandardFormIn(BaseModel):
    a: float
    b: float
    c1: float
    c2: float


class PurityParamsIn(BaseModel):
    mu_a: float
    mu_b: float
    mu: float
    beta: float


class StateIn(BaseModel):
    """Состояние задаётся ровно одним способом."""

    matrix: list[list[float]] | None = None
    standard_form: StandardFormIn | None = None
    purity_params: PurityParamsIn | None = None

    @model_validator(mode="after")
    def exactly_one(self):
        given = [name for name in ("matrix", "standard_form", "purity_params") if getattr(self, name) is not None]
        if len(given) != 1:
            raise ValueError(f"state needs exactly one of matrix, standard_form, purity_params (got {given or 'none'})")
        return self

    def covariance(self) -> CovarianceMatrix:
        if self.matrix is not None:
            return CovarianceMatrix(self.matrix)
        return expand(self.to_standard_form())

    def to_standard_form(self) -> StandardForm:
        """Стандартная форма с проверкой физичности."""
        if self.standard_form is not None:
            return StandardForm(**self.standard_form.model_dump()).validate()
        if self.purity_params is not None:
            sf = from_purity_params(PurityParams(**self.purity_params.model_dump()))
            expand(sf).require_physical()
            return sf
        sf, _ = reduce_to_standard_form(CovarianceMatrix(self.matrix))
        return sf


def parse_state(raw: str) -> StateIn:
    try:
        return StateIn.model_validate(json.loads(raw))
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"state is not valid JSON: {exc}") from exc
    except ValidationError as exc:
        raise InvalidInput(f"state does not match the schema: {exc}") from exc


def load_state(path: str) -> StateIn:
    """Читает JSON-файл состояния; OSError пробрасывается как есть."""
    with open(path, encoding="utf-8") as f:
        try:
            raw = f.read()
        except UnicodeDecodeError as exc:
            raise InvalidInput(f"state file {path} is not UTF-8 text: {exc}") from exc
    return parse_state(raw)


class StandardFormRead(BaseModel):
    a: float
    b: float
    c1: float
    c2: float
    model_config = {
        "from_attributes": True
    }


class SpectrumRead(BaseModel):
    nu_minus: float
    nu_plus: float
    delta: float
    model_config = {
        "from_attributes": True
    }


class CheckRead(BaseModel):
    physical: bool
    classical: bool | None = None
    separable: bool | None = None
    standard_form: StandardFormRead | None = None
    purities: list[float] | None = None
    spectrum: SpectrumRead | None = None
    pt_spectrum: SpectrumRead | None = None
    detail: str | None = None


class BoundsRead(BaseModel):
    lower: float
    upper: float
    r_minus: float
    r_plus: float
    r1: float
    r2: float
    model_config = {
        "from_attributes": True
    }


class EofRead(BaseModel):
    lower: float
    upper: float
    exact: float
    r_minus: float
    r_plus: float
    r_opt: float
    evaluations: int
    converged: bool
    model_config = {
        "from_attributes": True
    }


class OracleRead(BaseModel):
    oracle: float
    exact: float
    gap: float


class ConjectureRead(BaseModel):
    applicable: bool
    tight: bool
    gap: float
    squeezing_mismatch: float
    threshold: float
    model_config = {
        "from_attributes": True
    }


class ConjectureSweepRead(BaseModel):
    n_states: int
    applicable: int
    tight: int
    tight_when_applicable: int
    tight_fraction: float
    max_gap: float


class SweepRequest(BaseModel):
    n_states: int = Field(ge=1, le=5000)
    s_max: float = Field(default=5.0, gt=1.0)
    seed: int = Field(default=0, ge=0)
    min_purity: float = Field(default=0.0, ge=0.0, lt=1.0)
    bins: int = Field(default=20, ge=1)
    output_path: str | None = None
    grid_points: int | None = Field(default=None, ge=3)
    include_records: bool = False


class BinRead(BaseModel):
    center: float
    count: int
    mean_delta_minus: float | None = None
    mean_delta_plus: float | None = None
    model_config = {
        "from_attributes": True
    }


class EnsembleRecordRead(BaseModel):
    index: int
    mu_a: float
    mu_b: float
    mu: float
    beta: float
    a: float
    b: float
    c1: float
    c2: float
    nu_gamma_minus: float
    r_minus: float
    r_plus: float
    eof_lower: float
    eof_exact: float
    eof_upper: float
    delta_minus_pct: float
    delta_plus_pct: float


class SweepSummaryRead(BaseModel):
    n_states: int
    rejections: int
    mean_delta_minus: float
    mean_delta_plus: float
    upper_closer_on_average: bool
    bins: list[BinRead]
    spearman_delta_minus: float | None = None
    spearman_delta_plus: float | None = None
    records: list[EnsembleRecordRead] | None = None
    model_config = {
        "from_attributes": True
    }


def check_state(state: StateIn) -> CheckRead:
    """Физичность, классичность, сепарабельность и спектры.

    Нефизичное состояние не ошибка: в ответе physical=False и причина.
    """
    try:
        sf = state.to_standard_form()
        c = state.covariance()
        c.require_physical()
    except (NotPhysical, NumericalDomain) as exc:
        return CheckRead(physical=False, detail=str(exc))
    return CheckRead(
        physical=True,
        classical=is_classical(c),
        separable=is_separable(c),
        standard_form=StandardFormRead.model_validate(sf),
        purities=list(purities(c)),
        spectrum=SpectrumRead.model_validate(symplectic_spectrum(c)),
        pt_spectrum=SpectrumRead.model_validate(pt_spectrum(c)),
    )
