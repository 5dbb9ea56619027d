import csv
import io
import math

import numpy as np
import pytest

from spdenoise.bench import (
    CSV_HEADER,
    BenchmarkReport,
    Row,
    Scenario,
    derive_seed,
    parse_method,
    run_sweep,
    write_csv,
)
from spdenoise.image import load_pgm
from spdenoise.transforms import dwt_db4

from conftest import smooth_image

RATIOS = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7]


@pytest.fixture(scope="module")
def small():
    return [("smooth", smooth_image(32, 32))]


def test_aggregate_cardinality(small):
    report = run_sweep(small, RATIOS, ["imat", "median3", "amf"], trials_per_cell=2, base_seed=4)
    assert len(report.aggregates()) == 21
    assert len(report.rows) == 21 * 3


def test_single_cell_two_rows(small):
    report = run_sweep(small, [0.1], ["imat"], trials_per_cell=1)
    lines = write_csv(report).decode().splitlines()
    assert len(lines) == 3  # header, trial, mean
    assert lines[1].split(",")[4] == "1"
    assert lines[2].split(",")[4] == "mean"


def test_sweep_is_byte_deterministic(small):
    args = (small, [0.2, 0.5], ["imat", "median3", "amf", "noisy"])
    assert write_csv(run_sweep(*args, base_seed=9)) == write_csv(run_sweep(*args, base_seed=9))


def test_parallel_matches_serial(small):
    args = (small + [("other", smooth_image(16, 32))], [0.3, 0.6], ["imat", "amf"])
    serial = run_sweep(*args, trials_per_cell=2)
    parallel = run_sweep(*args, trials_per_cell=2, workers=2)
    assert write_csv(serial) == write_csv(parallel)


def test_row_order_and_mean(small):
    report = run_sweep(small, [0.4, 0.2], ["median3", "imat"], trials_per_cell=2)
    keys = [(r.noise_ratio, r.method, r.trial) for r in report.rows]
    assert keys[:6] == [(0.4, "median3", 1), (0.4, "median3", 2), (0.4, "median3", "mean"),
                        (0.4, "imat", 1), (0.4, "imat", 2), (0.4, "imat", "mean")]
    trials = [r.psnr_db for r in report.rows[:2]]
    assert report.rows[2].psnr_db == pytest.approx(sum(trials) / 2)


def test_methods_share_the_corrupted_input(small):
    report = run_sweep(small, [0.3], ["median3", "amf", "imat"], trials_per_cell=1)
    seeds = {r.seed for r in report.rows if not r.is_aggregate}
    assert len(seeds) == 1
    assert seeds == {derive_seed(0, "smooth", 0.3, 1)}


def test_seed_derivation_is_stable():
    assert derive_seed(0, "lena", 0.1, 1) == derive_seed(0, "lena", 0.1, 1)
    assert derive_seed(0, "lena", 0.1, 1) != derive_seed(0, "lena", 0.1, 2)
    assert derive_seed(0, "lena", 0.1, 1) != derive_seed(1, "lena", 0.1, 1)
    assert 0 <= derive_seed(5, "x", 0.5, 3) < 2**64


def test_scenario_two_uses_sparsified_reference(small):
    s2 = Scenario(0.2)
    report = run_sweep(small, [0.1], ["noisy"], s2, trials_per_cell=1)
    assert report.rows[0].scenario == "sparsified0.2"
    # noisy-input PSNR is measured against the sparsified image, so it differs from scenario 1
    s1 = run_sweep(small, [0.1], ["noisy"], trials_per_cell=1)
    assert s1.rows[0].psnr_db != report.rows[0].psnr_db


def test_unreadable_image_flagged_not_fatal(small):
    report = run_sweep(small + [("broken", None)], [0.2], ["median3"], trials_per_cell=2)
    broken = [r for r in report.rows if r.image == "broken"]
    assert len(broken) == 3
    assert all(math.isnan(r.psnr_db) and r.error for r in broken)
    ok = [r for r in report.rows if r.image == "smooth"]
    assert all(not math.isnan(r.psnr_db) for r in ok)


def test_method_failure_is_flagged():
    # 32x24 is not divisible by 2**4, so the wavelet IMAT fails on this cell only
    bad = parse_method("imat-db4")
    assert bad.imat.transform == dwt_db4(4)
    report = run_sweep([("odd", smooth_image(24, 32))], [0.2], [bad, "median3"], trials_per_cell=1)
    rows = {(r.method, r.trial): r for r in report.rows}
    assert math.isnan(rows[("imat-db4", 1)].psnr_db)
    assert "divide" in rows[("imat-db4", 1)].error
    assert not math.isnan(rows[("median3", "mean")].psnr_db)


def test_dump_images(tmp_path, small):
    run_sweep(small, [0.3], ["median3"], Scenario(0.5), trials_per_cell=1, dump_dir=tmp_path)
    dumped = tmp_path / "smooth_sparsified0.5_0.3_median3_1.pgm"
    assert load_pgm(dumped).shape == (32, 32)


def test_timing_only_when_requested(small):
    plain = run_sweep(small, [0.3], ["median3"], trials_per_cell=1)
    assert plain.rows[0].wall_time_ms is None
    timed = run_sweep(small, [0.3], ["median3"], trials_per_cell=1, record_timing=True)
    assert timed.rows[0].wall_time_ms >= 0


@pytest.mark.parametrize("bad", [dict(ratios=[]), dict(ratios=[0.0]), dict(ratios=[1.0]),
                                 dict(methods=[]), dict(trials_per_cell=0)])
def test_sweep_validation(small, bad):
    kwargs = dict(images=small, ratios=[0.1], methods=["median3"], trials_per_cell=1)
    kwargs.update(bad)
    with pytest.raises(ValueError):
        run_sweep(**kwargs)


def test_parse_method():
    assert parse_method("median5").window == 5
    assert parse_method("amf").window == 39
    assert parse_method("AMF11").window == 11
    assert parse_method("imat").kind == "imat"
    for bad in ("median", "median4", "amf2", "bm3d"):
        with pytest.raises(ValueError):
            parse_method(bad)


# --- CSV -------------------------------------------------------------------

def test_empty_report_is_header_only():
    assert write_csv(BenchmarkReport()) == (",".join(CSV_HEADER) + "\n").encode()


def test_csv_formatting():
    report = BenchmarkReport([
        Row("lena", "original", 0.1, "imat", 1, 44.54123, 17, 80, None),
        Row("lena", "original", 0.1, "imat", "mean", 44.54125, 0),
        Row("lena", "original", 0.1, "x", "mean", math.inf, 0),
        Row("lena", "original", 0.1, "y", "mean", math.nan, 0, error="boom"),
    ])
    data = write_csv(report)
    assert b"\r" not in data
    lines = data.decode().splitlines()
    assert lines[1] == "lena,original,0.1,imat,1,44.5412,17,80,"
    assert lines[2].split(",")[5] == "44.5412"  # round-half-even on the exact tie
    assert lines[3].split(",")[5] == "inf"
    assert lines[4].split(",")[5] == "nan"
    parsed = list(csv.reader(io.StringIO(data.decode())))
    assert parsed[0] == CSV_HEADER
    assert all(len(row) == len(CSV_HEADER) for row in parsed)


def test_csv_quotes_awkward_names():
    report = BenchmarkReport([Row('a,"b"', "original", 0.5, "imat", 1, 30.0, 1)])
    parsed = list(csv.reader(io.StringIO(write_csv(report).decode())))
    assert parsed[1][0] == 'a,"b"'


def test_imat_beats_median_on_smooth_image(small):
    report = run_sweep(small, [0.5], ["imat", "median3", "noisy"], trials_per_cell=2)
    imat = report.mean_psnr("smooth", 0.5, "imat")
    assert imat > report.mean_psnr("smooth", 0.5, "median3")
    assert imat > report.mean_psnr("smooth", 0.5, "noisy") + 10
    assert np.isfinite(imat)
