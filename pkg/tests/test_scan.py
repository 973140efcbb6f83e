import math

import numpy as np
import pytest

from oqgt.scan import HEADER, Range, ScanConfig, preamble, read_scan, run_scan
from oqgt.xy import XYParams, chain_oqgt


def small(tmp_path, name="s.csv", **kw):
    base = dict(gamma=1.0, phi=0.2, n_spins=21, lambda_range=(0.5, 1.5, 5),
                t_range=(0.0, 10.0, 4), output_path=str(tmp_path / name))
    base.update(kw)
    return ScanConfig(**base)


def data_lines(path):
    return [l for l in open(path).read().splitlines() if l and not l.startswith("#")]


def test_single_point_at_t0(tmp_path):
    cfg = small(tmp_path, lambda_range=(0.7, 0.7, 1), t_range=(0.0, 0.0, 1))
    lines = data_lines(run_scan(cfg))
    assert lines[0] == HEADER
    assert len(lines) == 2
    fields = lines[1].split(",")
    assert all(float(v) == 0.0 for v in fields[5:])


def test_row_order_and_values(tmp_path):
    cfg = small(tmp_path)
    _, data, warnings = read_scan(run_scan(cfg))
    assert warnings == []
    assert data.shape == (20, 14)
    lam, t = data[:, 0], data[:, 3]
    assert np.array_equal(lam, np.repeat(np.linspace(0.5, 1.5, 5), 4))
    assert np.array_equal(t, np.tile(np.linspace(0, 10, 4), 5))
    row = data[7]
    q = chain_oqgt(XYParams(row[0], 1.0, 0.2, row[3], 21)).Q / 21
    assert row[5] == pytest.approx(q[0, 0].real, rel=1e-14)
    assert row[8] == pytest.approx(q[0, 1].real, rel=1e-14)
    assert row[12] == pytest.approx(q[0, 2].imag, rel=1e-14)
    assert row[13] == pytest.approx(q[1, 2].imag, rel=1e-14)
    assert np.all(data[:, [9, 10, 11]] == 0)


def test_rescale_flag(tmp_path):
    _, a, _ = read_scan(run_scan(small(tmp_path, "a.csv")))
    _, b, _ = read_scan(run_scan(small(tmp_path, "b.csv", rescale_by_n=False)))
    assert np.allclose(b[:, 5:], 21 * a[:, 5:], rtol=1e-13, atol=0)


def test_thread_count_does_not_change_bytes(tmp_path):
    one = run_scan(small(tmp_path, "one.csv", threads=1))
    four = run_scan(small(tmp_path, "four.csv", threads=4))
    assert open(one, "rb").read() == open(four, "rb").read()


def test_round_trip_formatting(tmp_path):
    path = run_scan(small(tmp_path))
    for line in data_lines(path)[1:]:
        for text in line.split(","):
            assert repr(float(text)) == text or text == "21"


def test_critical_points_become_nan(tmp_path):
    crit = math.cos(2 * math.pi / 5)
    cfg = small(tmp_path, gamma=0.0, n_spins=5, lambda_range=(crit, crit, 1), t_range=(0, 1, 2))
    _, data, warnings = read_scan(run_scan(cfg))
    assert len(warnings) == 1 and "critical" in warnings[0]
    assert np.all(np.isnan(data[:, 5:]))


def test_preamble_records_config_not_threads():
    text = preamble(ScanConfig(threads=3, output_path="x.csv"))
    assert text.startswith("# oqgt ")
    assert '"n_spins": 1001' in text and "threads" not in text


@pytest.mark.parametrize("kw", [
    dict(lambda_range=(1.0, 0.0, 3)),
    dict(t_range=(0.0, 1.0, 0)),
    dict(t_range=(0.0, 1.0, 1)),
    dict(n_spins=10),
    dict(threads=0),
])
def test_invalid_configs(kw):
    with pytest.raises(ValueError):
        ScanConfig(**kw)


def test_range_from_dict():
    cfg = ScanConfig(lambda_range={"min": 0, "max": 1, "steps": 3})
    assert cfg.lambda_range == Range(0.0, 1.0, 3)
    with pytest.raises(ValueError):
        ScanConfig.from_dict({"bogus": 1})


def test_unwritable_path(tmp_path):
    with pytest.raises(OSError):
        run_scan(small(tmp_path / "missing" / "dir"))
