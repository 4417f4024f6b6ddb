import io
import math

import numpy as np
import pytest

from dsamp.lattice import Bandwidth, MultiIndex, TruncationWindow, enum_multi_indices, enum_window
from dsamp.sampleio import DsampFormatError, SampleSet, read_samples, write_field, write_samples


def _empty_set():
    return SampleSet(sigma=Bandwidth((math.pi,)), theta=2, tau=TruncationWindow((1,)),
                     p=1.0, value_kind="real", records={})


def _writeback(samples):
    buf = io.StringIO()
    write_samples(samples, buf)
    return buf.getvalue()


def test_empty_set_writes_header_only():
    text = _writeback(_empty_set())
    lines = text.splitlines()
    assert len(lines) == 7
    assert lines[0] == "dsamp 1"
    assert lines[1] == "dim 1"
    assert lines[3] == "theta 2"
    assert lines[6] == "kind real"


def test_single_record_round_trip():
    s = SampleSet(sigma=Bandwidth((math.pi,)), theta=2, tau=TruncationWindow((0,)),
                  p=1.0, value_kind="real",
                  records={(MultiIndex((0,)), (0,)): 1.0})
    text = _writeback(s)
    back = read_samples(io.StringIO(text))
    assert back == s
    assert back.value(MultiIndex((0,)), (0,)) == 1.0


def test_full_window_record_count():
    sig = Bandwidth((math.pi, math.pi))
    tau = TruncationWindow((2, 2))
    records = {}
    val = 0.0
    for k in enum_multi_indices(2):
        for m in enum_window(tau):
            records[(k, m)] = val
            val += 0.25
    s = SampleSet(sigma=sig, theta=2, tau=tau, p=2.0, value_kind="real", records=records)
    lines = _writeback(s).splitlines()
    assert len(lines) == 7 + 4 * 25


def _random_sample_set(rng):
    n = int(rng.integers(1, 4))
    sigma = Bandwidth(tuple(rng.uniform(0.3, 9.0, n)))
    theta = int(rng.choice([1, 2]))
    tau = TruncationWindow(tuple(int(t) for t in rng.integers(0, 4, n)))
    kind = str(rng.choice(["real", "complex"]))
    ks = [MultiIndex.zero(n)] if theta == 1 else enum_multi_indices(n)
    records = {}
    for k in ks:
        for m in enum_window(tau):
            if rng.random() < 0.15:
                continue  # partial channels are legal in the format
            re = float(rng.normal() * 10.0 ** rng.integers(-12, 12))
            im = 0.0 if kind == "real" else float(rng.normal())
            records[(k, m)] = complex(re, im)
    return SampleSet(sigma=sigma, theta=theta, tau=tau,
                     p=float(rng.choice([1.0, 2.0, 3.5])), value_kind=kind, records=records)


def test_round_trip_identity_randomized():
    rng = np.random.default_rng(42)
    for _ in range(100):
        s = _random_sample_set(rng)
        back = read_samples(io.StringIO(_writeback(s)))
        assert back == s


def test_canonical_record_order_gives_identical_bytes():
    rng = np.random.default_rng(1)
    s = _random_sample_set(rng)
    # same records inserted in reversed order
    rev = dict(reversed(list(s.records.items())))
    s2 = SampleSet(sigma=s.sigma, theta=s.theta, tau=s.tau, p=s.p,
                   value_kind=s.value_kind, records=rev)
    assert _writeback(s) == _writeback(s2)


def test_file_round_trip(tmp_path):
    s = _random_sample_set(np.random.default_rng(2))
    path = tmp_path / "samples.dsamp"
    write_samples(s, path)
    assert read_samples(path) == s


def _good_text():
    s = SampleSet(sigma=Bandwidth((math.pi, 2.0)), theta=2, tau=TruncationWindow((1, 1)),
                  p=1.0, value_kind="real",
                  records={(MultiIndex((0, 0)), (0, 0)): 0.5,
                           (MultiIndex((1, 1)), (1, -1)): -2.0})
    return _writeback(s)


def test_read_rejects_bad_version():
    text = _good_text().replace("dsamp 1", "dsamp 2")
    with pytest.raises(DsampFormatError) as exc:
        read_samples(io.StringIO(text))
    assert exc.value.line == 1


def test_read_rejects_out_of_window_node():
    text = _good_text() + "00 2 0 1 0\n"
    with pytest.raises(DsampFormatError) as exc:
        read_samples(io.StringIO(text))
    assert "outside" in str(exc.value)
    assert exc.value.line == 10


def test_read_rejects_duplicate_key():
    text = _good_text() + "00 0 0 0.5 0\n"
    with pytest.raises(DsampFormatError) as exc:
        read_samples(io.StringIO(text))
    assert "duplicate" in str(exc.value)


def test_read_rejects_non_finite_value():
    text = _good_text() + "01 0 0 nan 0\n"
    with pytest.raises(DsampFormatError):
        read_samples(io.StringIO(text))
    text = _good_text() + "01 0 0 inf 0\n"
    with pytest.raises(DsampFormatError):
        read_samples(io.StringIO(text))


def test_read_rejects_malformed_record():
    text = _good_text() + "00 0 0 1.0\n"
    with pytest.raises(DsampFormatError):
        read_samples(io.StringIO(text))
    text = _good_text() + "0x 0 0 1.0 0\n"
    with pytest.raises(DsampFormatError):
        read_samples(io.StringIO(text))


def test_read_rejects_dimension_mismatch():
    text = _good_text().replace("dim 2", "dim 3")
    with pytest.raises(DsampFormatError):
        read_samples(io.StringIO(text))


def test_read_rejects_derivative_records_on_nyquist_lattice():
    s = SampleSet(sigma=Bandwidth((1.0,)), theta=1, tau=TruncationWindow((1,)),
                  p=1.0, value_kind="real", records={(MultiIndex((0,)), (0,)): 1.0})
    text = _writeback(s).replace("0 0 1 0", "1 0 1 0")
    with pytest.raises(DsampFormatError):
        read_samples(io.StringIO(text))


def test_read_rejects_imag_in_real_kind():
    text = _good_text() + "01 0 0 1.0 0.5\n"
    with pytest.raises(DsampFormatError):
        read_samples(io.StringIO(text))


def test_sample_set_invariants_enforced():
    sig = Bandwidth((1.0,))
    tau = TruncationWindow((1,))
    with pytest.raises(ValueError):
        SampleSet(sigma=sig, theta=1, tau=tau, p=1.0, value_kind="real",
                  records={(MultiIndex((1,)), (0,)): 1.0})
    with pytest.raises(ValueError):
        SampleSet(sigma=sig, theta=2, tau=tau, p=1.0, value_kind="real",
                  records={(MultiIndex((0,)), (2,)): 1.0})
    with pytest.raises(ValueError):
        SampleSet(sigma=sig, theta=2, tau=tau, p=0.5, value_kind="real", records={})
    with pytest.raises(ValueError):
        SampleSet(sigma=sig, theta=2, tau=tau, p=1.0, value_kind="real",
                  records={(MultiIndex((0,)), (0,)): math.nan})


def test_write_field_single_point():
    buf = io.StringIO()
    write_field(np.array([2.5]), [[0.0]], buf)
    lines = buf.getvalue().splitlines()
    assert lines == ["x1,value", "0,2.5"]


def test_write_field_row_major_order():
    vals = np.arange(12.0).reshape(3, 4)
    buf = io.StringIO()
    write_field(vals, [[0.0, 1.0, 2.0], [10.0, 11.0, 12.0, 13.0]], buf)
    lines = buf.getvalue().splitlines()
    assert len(lines) == 1 + 12
    assert lines[1] == "0,10,0"
    assert lines[2] == "0,11,1"   # second axis varies fastest
    assert lines[5] == "1,10,4"   # first column varies slowest
    assert lines[-1] == "2,13,11"


def test_write_field_complex_columns():
    buf = io.StringIO()
    write_field(np.array([1.0 + 2.0j]), [[0.5]], buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "x1,re,im"
    assert lines[1] == "0.5,1,2"


def test_write_field_coordinate_round_trip():
    xs = [0.1, 1.0 / 3.0, math.pi]
    buf = io.StringIO()
    write_field(np.zeros(3), [xs], buf)
    lines = buf.getvalue().splitlines()[1:]
    back = [float(line.split(",")[0]) for line in lines]
    assert back == xs


def test_write_field_shape_mismatch():
    with pytest.raises(ValueError):
        write_field(np.zeros((2, 2)), [[0.0], [0.0, 1.0]], io.StringIO())
    with pytest.raises(ValueError):
        write_field(np.zeros((0,)), [[]], io.StringIO())
