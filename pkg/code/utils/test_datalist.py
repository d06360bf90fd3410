import dataclasses

import pytest

from .datalist import match_records, select_by_attributes


@dataclasses.dataclass
class Record:
    instance_id: str
    seed: int
    mode: str = "rens"


RECORDS = [Record("a", 0), Record("a", 1, "mrens"), Record("b", 0)]


def test_select_by_attributes():

    assert select_by_attributes(RECORDS, instance_id="a") == RECORDS[:2]
    assert select_by_attributes(RECORDS, instance_id="a", seed=1) == [RECORDS[1]]
    assert select_by_attributes(RECORDS, mode="*") == RECORDS
    assert select_by_attributes(RECORDS, status="*") == []


def test_match_records():

    other = [Record("b", 0, "mrens"), Record("a", 0, "mrens"), Record("c", 0)]

    out_a, out_b = match_records(RECORDS, other)

    assert out_a == [RECORDS[0], RECORDS[2]]
    assert out_b == [other[1], other[0]]


def test_match_records_not_unique():

    with pytest.raises(ValueError, match="found 2 records"):
        match_records(RECORDS, RECORDS, select_by=("instance_id",))

    out_a, out_b = match_records(RECORDS, RECORDS, select_by=("instance_id",), check=False)
    assert len(out_b) == 5
