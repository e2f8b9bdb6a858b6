import numpy as np
import pytest

from auxnet import (AvailabilitySchedule, ContractViolation, DataFormatError,
                    base_only_stream, load_ucr, make_schedule, split_stream)


def test_load_italy(italy):
    assert len(italy) == 1096
    assert italy.num_features == 24
    assert italy.num_classes == 2
    assert set(np.unique(italy.labels)) == {0, 1}


def test_load_single_line(tmp_path):
    f = tmp_path / "one.tsv"
    f.write_text("1\t0.5\t0.5\n")
    ds = load_ucr(f)
    assert len(ds) == 1
    assert ds.num_features == 2
    assert ds.labels.tolist() == [0]  # {1} remapped to {0}


def test_load_comma_separated(tmp_path):
    f = tmp_path / "c.csv"
    f.write_text("2,0.1,0.2\n1,0.3,0.4\n")
    ds = load_ucr(f)
    assert ds.labels.tolist() == [1, 0]  # sorted originals {1,2} -> {0,1}
    assert ds.features[0].tolist() == [0.1, 0.2]


def test_load_ragged_rows_names_line(tmp_path):
    f = tmp_path / "bad.tsv"
    f.write_text("1\t0.5\t0.5\n2\t0.1\n")
    with pytest.raises(DataFormatError, match=":2"):
        load_ucr(f)


def test_load_unparseable_value(tmp_path):
    f = tmp_path / "bad.tsv"
    f.write_text("1\t0.5\tfoo\n")
    with pytest.raises(DataFormatError, match=":1"):
        load_ucr(f)


def test_load_no_delimiter(tmp_path):
    f = tmp_path / "bad.txt"
    f.write_text("1 0.5 0.5\n")
    with pytest.raises(DataFormatError):
        load_ucr(f)


def test_schedule_extremes():
    assert make_schedule(50, 4, 1.0, 0).masks.all()
    assert not make_schedule(50, 4, 0.0, 0).masks.any()


def test_schedule_empirical_mean():
    sched = make_schedule(1096, 12, 0.9, 123)
    # binomial concentration: 3 sigma around 0.9 for 1096*12 draws
    assert 0.873 <= sched.masks.mean() <= 0.927


def test_schedule_bad_p():
    with pytest.raises(ContractViolation):
        make_schedule(10, 2, 1.5, 0)


def test_schedule_round_trip(tmp_path):
    sched = make_schedule(200, 7, 0.35, 99)
    path = tmp_path / "sched.txt"
    sched.save(path)
    loaded = AvailabilitySchedule.load(path)
    assert np.array_equal(loaded.masks, sched.masks)
    assert loaded.p == sched.p and loaded.seed == sched.seed
    header = path.read_text().splitlines()[0]
    assert header.startswith("#") and "p=" in header and "seed=99" in header and "A=7" in header


def test_schedule_load_rejects_bad_files(tmp_path):
    f = tmp_path / "s.txt"
    f.write_text("0 1 0\n")
    with pytest.raises(DataFormatError):
        AvailabilitySchedule.load(f)
    f.write_text("# p=0.5 seed=1 A=3\n0 1\n")
    with pytest.raises(DataFormatError, match=":2"):
        AvailabilitySchedule.load(f)


def test_split_stream_all_available(italy):
    sched = make_schedule(len(italy), 12, 1.0, 0)
    stream = split_stream(italy, 12, sched)
    assert len(stream) == len(italy)
    assert all(len(inst.x_aux) == 12 for inst in stream)
    assert all(len(inst.x_base) == 12 for inst in stream)
    # column B + a - 1 becomes aux index a
    assert stream[0].x_aux[1] == italy.features[0][12]
    assert stream[0].x_aux[12] == italy.features[0][23]


def test_split_stream_single_aux(italy):
    sched = make_schedule(len(italy), 1, 1.0, 0)
    stream = split_stream(italy, 23, sched)
    assert all(set(inst.x_aux) == {1} for inst in stream)


def test_split_stream_none_available(italy):
    sched = make_schedule(len(italy), 12, 0.0, 0)
    stream = split_stream(italy, 12, sched)
    assert all(inst.x_aux == {} for inst in stream)


def test_split_stream_rejects_bad_base_count(italy):
    with pytest.raises(ContractViolation):
        split_stream(italy, 24, make_schedule(len(italy), 0, 0.5, 0))
    with pytest.raises(ContractViolation):
        split_stream(italy, 0, make_schedule(len(italy), 24, 0.5, 0))


def test_split_stream_rejects_short_schedule(italy):
    with pytest.raises(ContractViolation):
        split_stream(italy, 12, make_schedule(10, 12, 0.5, 0))


def test_split_stream_conserves_instances_and_dimension(italy):
    sched = make_schedule(len(italy), 12, 0.6, 7)
    stream = split_stream(italy, 12, sched)
    assert [inst.label for inst in stream] == italy.labels.tolist()
    total_dim = sum(len(inst.x_base) + len(inst.x_aux) for inst in stream)
    assert total_dim == len(italy) * 12 + int(sched.masks.sum())


def test_base_only_stream(italy):
    stream = base_only_stream(italy, 12)
    assert all(len(i.x_base) == 12 and not i.x_aux for i in stream)
    full = base_only_stream(italy)
    assert len(full[0].x_base) == 24
    with pytest.raises(ContractViolation):
        base_only_stream(italy, 25)
