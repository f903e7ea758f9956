import numpy as np
import pytest

from gauss_eof.ensemble import (
    CSV_COLUMNS,
    SweepConfig,
    conjecture_sweep,
    read_csv,
    relative_differences,
    run_sweep,
    sample_entangled,
)
from gauss_eof.errors import DivisionByZero, InvalidInput
from gauss_eof.gs_core import expand, pt_spectrum


def small(tmp_path, **kwargs) -> SweepConfig:
    opts = {"n_states": 6, "seed": 11, "grid_points": 200, "output_path": str(tmp_path / "out.csv")}
    opts.update(kwargs)
    return SweepConfig(**opts)


# --- δ± -----------------------------------------------------------------------


def test_relative_differences():
    assert relative_differences(0.9, 1.2, 1.0) == pytest.approx((10.0, 20.0))
    assert relative_differences(0.5, 0.5, 0.5) == (0.0, 0.0)


def test_relative_differences_need_positive_eof():
    with pytest.raises(DivisionByZero):
        relative_differences(0.0, 0.0, 0.0)


# --- выборка ------------------------------------------------------------------


def test_sampling_is_deterministic():
    cfg = SweepConfig(n_states=1)
    first = [sample_entangled(np.random.default_rng(5), cfg) for _ in range(3)]
    second = [sample_entangled(np.random.default_rng(5), cfg) for _ in range(3)]
    assert first == second


def test_samples_are_entangled():
    rng = np.random.default_rng(9)
    cfg = SweepConfig(n_states=1, s_max=3.0)
    for _ in range(50):
        sf = sample_entangled(rng, cfg)
        assert sf.a >= sf.b
        assert pt_spectrum(expand(sf)).nu_minus < 1.0


def test_sampled_purities_are_spread():
    rng = np.random.default_rng(2024)
    cfg = SweepConfig(n_states=1)
    mu = np.array([1.0 / np.sqrt(sample_entangled(rng, cfg).det) for _ in range(1000)])
    counts, _ = np.histogram(mu, bins=10, range=(0.0, 1.0))
    assert counts.max() <= 900
    assert mu.min() > 0.0 and mu.max() <= 1.0 + 1e-9


def test_min_purity_is_respected():
    rng = np.random.default_rng(3)
    cfg = SweepConfig(n_states=1, min_purity=0.6)
    for _ in range(30):
        assert 1.0 / np.sqrt(sample_entangled(rng, cfg).det) >= 0.6 - 1e-9


@pytest.mark.parametrize("kwargs", [
    {"n_states": 0},
    {"n_states": 5, "s_max": 1.0},
    {"n_states": 5, "min_purity": 1.0},
    {"n_states": 5, "bins": 0},
    {"n_states": 5, "beta": 2.0},
    {"n_states": 5, "seed": -1},
])
def test_invalid_config(kwargs):
    with pytest.raises(InvalidInput):
        SweepConfig(**kwargs).validate()


# --- прогоны ------------------------------------------------------------------


def test_sweep_writes_csv(tmp_path):
    cfg = small(tmp_path)
    records, summary = run_sweep(cfg)
    lines = (tmp_path / "out.csv").read_text(encoding="utf-8").splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert len(lines) == 1 + cfg.n_states
    assert [rec.index for rec in records] == list(range(cfg.n_states))
    assert summary.n_states == cfg.n_states
    assert sum(b.count for b in summary.bins) == cfg.n_states
    for rec in records:
        assert rec.lower <= rec.exact + 1e-9
        assert rec.exact <= rec.upper + 1e-9
        assert rec.delta_minus >= 0.0 and rec.delta_plus >= 0.0


def test_sweep_is_reproducible(tmp_path):
    run_sweep(small(tmp_path, output_path=str(tmp_path / "a.csv")))
    run_sweep(small(tmp_path, output_path=str(tmp_path / "b.csv")))
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()


def test_sweep_does_not_depend_on_thread_count(tmp_path, monkeypatch):
    monkeypatch.setenv("GAUSS_EOF_THREADS", "1")
    run_sweep(small(tmp_path, output_path=str(tmp_path / "one.csv")))
    monkeypatch.setenv("GAUSS_EOF_THREADS", "4")
    run_sweep(small(tmp_path, output_path=str(tmp_path / "four.csv")))
    assert (tmp_path / "one.csv").read_bytes() == (tmp_path / "four.csv").read_bytes()


def test_different_seeds_differ(tmp_path):
    run_sweep(small(tmp_path, output_path=str(tmp_path / "a.csv")))
    run_sweep(small(tmp_path, seed=12, output_path=str(tmp_path / "b.csv")))
    assert (tmp_path / "a.csv").read_bytes() != (tmp_path / "b.csv").read_bytes()


def test_csv_round_trip(tmp_path):
    records, _ = run_sweep(small(tmp_path, n_states=3))
    rows = read_csv(str(tmp_path / "out.csv"))
    assert len(rows) == 3
    for rec, row in zip(records, rows):
        assert row["index"] == rec.index
        assert row["eof_exact"] == pytest.approx(rec.exact, rel=1e-11)
        assert row["mu"] == pytest.approx(rec.mu, rel=1e-11)
        assert row["r_minus"] <= row["r_plus"]


def test_plot_data(tmp_path):
    path = tmp_path / "plots" / "delta.dat"
    run_sweep(small(tmp_path, n_states=4, plot_path=str(path)))
    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "# mu delta_minus_pct delta_plus_pct"
    assert len(lines) == 5
    assert all(len(line.split()) == 3 for line in lines[1:])


def test_sweep_without_output_writes_nothing(tmp_path):
    records, _ = run_sweep(SweepConfig(n_states=2, seed=1, grid_points=200))
    assert len(records) == 2
    assert list(tmp_path.iterdir()) == []


def test_sweep_with_purity_floor(tmp_path):
    records, _ = run_sweep(small(tmp_path, n_states=4, min_purity=0.5))
    assert all(rec.mu >= 0.5 - 1e-9 for rec in records)


def test_conjecture_sweep():
    summary = conjecture_sweep(4, seed=3, s_max=3.0, grid_points=200)
    assert summary.n_states == 4
    assert 0 <= summary.tight_when_applicable <= summary.applicable <= 4
    assert summary.tight_when_applicable <= summary.tight
    assert summary.max_gap >= -1e-9


@pytest.mark.slow
def test_bounds_degrade_with_mixedness(tmp_path):
    _, summary = run_sweep(SweepConfig(n_states=500, seed=42, grid_points=400))
    assert summary.spearman_delta_minus is not None
    assert summary.spearman_delta_minus <= -0.5
    assert summary.spearman_delta_plus is not None
    assert summary.spearman_delta_plus <= -0.5
    assert summary.upper_closer_on_average


def test_conjecture_sweep_rejects_negative_seed():
    with pytest.raises(InvalidInput):
        conjecture_sweep(2, seed=-3)
