import pytest

from .instance_files import find_instances, instance_name, natural_keys


def test_natural_keys_sort():

    lst = ["p10.mps", "p2.mps"]
    lst.sort(key=natural_keys)

    assert lst == ["p2.mps", "p10.mps"]


@pytest.mark.parametrize(
    "filename, expected",
    [("p0033.mps", "p0033"), ("/data/miplib/gen-ip002.mps", "gen-ip002"), ("a.lp", "a")],
)
def test_instance_name(filename, expected):

    assert instance_name(filename) == expected


def write(path, *names):

    for name in names:
        (path / name).write_text("NAME\nENDATA\n")


def test_find_instances_in_directory(tmp_path):

    write(tmp_path, "p10.mps", "p2.mps", "notes.txt")

    df = find_instances(str(tmp_path))

    assert list(df.instance) == ["p2", "p10"]
    assert list(df.filename) == [str(tmp_path / "p2.mps"), str(tmp_path / "p10.mps")]


def test_find_instances_files_and_patterns(tmp_path):

    write(tmp_path, "a.mps", "b.mps", "c.mps")

    df = find_instances([str(tmp_path / "c.mps"), str(tmp_path / "[ab].mps")])

    assert list(df.instance) == ["a", "b", "c"]


def test_find_instances_deduplicates(tmp_path):

    write(tmp_path, "a.mps")

    df = find_instances([str(tmp_path / "a.mps"), str(tmp_path)])

    assert list(df.instance) == ["a"]


def test_find_instances_missing_file(tmp_path):

    with pytest.raises(RuntimeError, match="missing"):
        find_instances(str(tmp_path / "none.mps"))


def test_find_instances_nothing_found(tmp_path):

    with pytest.raises(ValueError, match="no instance files"):
        find_instances(str(tmp_path))


def test_find_instances_duplicate_names(tmp_path):

    (tmp_path / "x").mkdir()
    (tmp_path / "y").mkdir()
    write(tmp_path / "x", "a.mps")
    write(tmp_path / "y", "a.mps")

    with pytest.raises(ValueError, match="unique"):
        find_instances([str(tmp_path / "x"), str(tmp_path / "y")])
