import math
import os

import hypothesis
import numpy as np
import pytest
from hypothesis import HealthCheck, assume
from hypothesis import strategies as st

from gauss_eof.ensemble import SweepConfig, sample_entangled
from gauss_eof.errors import InvalidParams, NotPhysical, ParametrizationMismatch
from gauss_eof.gs_core import (
    PurityParams,
    StandardForm,
    expand,
    from_purity_params,
    glems,
    pt_spectrum,
    symplectic_spectrum,
    tmsv_standard_form,
)

np.seterr(all="warn")

hypothesis.settings.register_profile(
    "default",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.filter_too_much, HealthCheck.too_slow],
)
hypothesis.settings.register_profile("fast", max_examples=5, deadline=None)
hypothesis.settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "default"))


@st.composite
def entangled_forms(draw, s_max: float = 4.0, beta=None, symmetric: bool = False):
    """Запутанные стандартные формы через параметризацию по чистотам."""
    s = draw(st.floats(1.05, s_max))
    d = 0.0 if symmetric else draw(st.floats(-(s - 1.0), s - 1.0))
    g_min = 2.0 * abs(d) + 1.0
    g = draw(st.floats(g_min, max(g_min, s * s - d * d)))
    b = draw(st.floats(-1.0, 1.0)) if beta is None else beta
    try:
        sf = from_purity_params(PurityParams(1.0 / (s + d), 1.0 / (s - d), 1.0 / g, b))
        expand(sf).require_physical()
    except (InvalidParams, ParametrizationMismatch, NotPhysical):
        assume(False)
    assume(pt_spectrum(expand(sf)).nu_minus < 1.0 - 1e-6)
    return sf


@st.composite
def separable_forms(draw):
    """Сепарабельные формы: шумный TMSV за границей или det C >= 0."""
    if draw(st.booleans()):
        r = draw(st.floats(0.05, 1.5))
        # ν^Γ₋ = e^{-2r} + n, граница n = 1 - e^{-2r}
        n = (1.0 - math.exp(-2.0 * r)) * draw(st.floats(1.0, 3.0))
        return StandardForm(math.cosh(2 * r) + n, math.cosh(2 * r) + n, math.sinh(2 * r), -math.sinh(2 * r))
    b = draw(st.floats(1.0, 5.0))
    a = draw(st.floats(b, 6.0))
    c1 = draw(st.floats(0.0, math.sqrt(a * b - 1.0)))
    c2 = draw(st.floats(0.0, c1))
    sf = StandardForm(a, b, c1, c2)
    # запас над границей физичности: тогда ν^Γ₋ >= ν₋ >= 1 без влияния округления
    assume(expand(sf).is_physical() and symplectic_spectrum(expand(sf)).nu_minus >= 1.0)
    return sf


@st.composite
def classical_forms(draw):
    """Формы с σ >= 1: оба блока [[a-1, c], [c, b-1]] неотрицательны."""
    b = draw(st.floats(1.0, 5.0))
    a = draw(st.floats(b, 6.0))
    edge = math.sqrt((a - 1.0) * (b - 1.0))
    c1 = draw(st.floats(0.0, edge))
    c2 = draw(st.floats(-c1, c1))
    return StandardForm(a, b, c1, c2)


@pytest.fixture
def mixed():
    # несимметричное смешанное состояние с разными границами
    return StandardForm(2.0, 1.5, 1.2, -1.0)


@pytest.fixture
def symmetric():
    return StandardForm(2.0, 2.0, 1.5, -1.2)


@pytest.fixture
def glems_state():
    return glems(0.5, 0.7, 0.5)


@pytest.fixture
def tmsv_half():
    return tmsv_standard_form(0.5)


@pytest.fixture(scope="session")
def random_states():
    rng = np.random.default_rng(1234)
    cfg = SweepConfig(n_states=1, s_max=4.0)
    return [sample_entangled(rng, cfg) for _ in range(25)]


@pytest.fixture
def H():
    return lambda r: (
        math.cosh(r) ** 2 * math.log2(math.cosh(r) ** 2)
        - (math.sinh(r) ** 2 * math.log2(math.sinh(r) ** 2) if r else 0.0)
    )
