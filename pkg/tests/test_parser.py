import itertools
import os

import numpy as np
import pytest
from pytest import raises

from zoprox.objects import ConfigException, InvalidArgumentException, LibsvmParseException
from zoprox.parser import format_libsvm, parse_libsvm, read_libsvm
from zoprox.parser.reader import parse_line
from tests.helpers import for_feature


@for_feature(libsvm="LIBSVM reader")
def test_parse_line():
    """Labels map to 0/1 and indices become 0-based."""
    assert parse_line("+1 3:0.5 7:1", 1) == (1, [(2, 0.5), (6, 1.0)])
    assert parse_line("-1", 1) == (0, [])
    assert parse_line("0 1:-2.5e-3", 1) == (0, [(0, -2.5e-3)])


@for_feature(libsvm="LIBSVM reader")
def test_parse_document():
    """A small document becomes a CSR dataset."""
    data = parse_libsvm("+1 3:0.5 7:1\n-1\n1 1:2\n")
    assert (data.n, data.d) == (3, 7)
    assert list(data.labels) == [1, 0, 1]
    assert data.row(0) == {2: 0.5, 6: 1.0}
    assert data.row(1) == {}
    assert data.features[2, 0] == 2.0


@for_feature(libsvm="LIBSVM reader")
def test_malformed_value():
    """A value that is not a number names its line and token."""
    with raises(LibsvmParseException) as e:
        parse_libsvm("1 2:a")
    assert e.value.line == 1
    assert e.value.token == "2:a"
    assert "line 1" in str(e.value)


@for_feature(libsvm="LIBSVM reader")
def test_index_rules():
    """Indices start at 1 and strictly ascend."""
    for text, token in (("1 5:1 3:1", "3:1"), ("1 3:1 3:2", "3:2"), ("1 0:1", "0:1")):
        with raises(LibsvmParseException) as e:
            parse_libsvm(text)
        assert e.value.token == token


@for_feature(libsvm="LIBSVM reader")
def test_whitespace_inside_pair():
    """``3 : 0.5`` is not one index:value token."""
    with raises(LibsvmParseException) as e:
        parse_line("1 3 : 0.5", 1)
    assert "whitespace" in str(e.value)


@for_feature(libsvm="LIBSVM reader")
def test_bad_label():
    """Only +1/-1 and 1/0 are labels."""
    with raises(LibsvmParseException) as e:
        parse_libsvm("2 1:1")
    assert e.value.token == "2"


@for_feature(libsvm="LIBSVM reader")
def test_line_numbers_count_skipped_lines():
    """Blank and comment lines still count towards the reported line."""
    text = "# header\n\n1 1:1  # trailing\n1 x\n"
    with raises(LibsvmParseException) as e:
        parse_libsvm(text)
    assert e.value.line == 4
    assert e.value.token == "x"


@for_feature(libsvm="LIBSVM reader")
def test_declared_width():
    """n_features pads the width but cannot cut it."""
    assert parse_libsvm("1 2:1\n", n_features=10).d == 10
    with raises(InvalidArgumentException):
        parse_libsvm("1 5:1\n", n_features=3)


@for_feature(libsvm="LIBSVM reader")
def test_format_and_reparse():
    """Formatting a parsed document and reading it back changes nothing."""
    rng = np.random.default_rng(0)
    lines = []
    for _ in range(1000):
        label = rng.choice(["+1", "-1", "1", "0"])
        cols = np.sort(rng.choice(50, size=rng.integers(0, 8), replace=False)) + 1
        values = rng.standard_normal(cols.size) * 10.0 ** rng.integers(-4, 5, size=cols.size)
        lines.append(" ".join([label] + [f"{c}:{float(v)!r}" for c, v in zip(cols, values)]))
    first = parse_libsvm("\n".join(lines), n_features=50)
    text = format_libsvm(first)
    second = parse_libsvm(text, n_features=50)
    assert np.array_equal(first.labels, second.labels)
    assert (first.features != second.features).nnz == 0
    assert format_libsvm(second) == text


@for_feature(libsvm="LIBSVM reader")
def test_a9a_head(a9a_location):
    """The first rows of a9a have 123 features at most and 0/1 labels."""
    if not os.path.exists(a9a_location):
        pytest.skip(f"no a9a file at {a9a_location}")
    with open(a9a_location, encoding="utf-8") as f:
        data = parse_libsvm(itertools.islice(f, 100))
    assert data.n == 100
    assert data.d <= 123
    assert set(data.labels) <= {0, 1}
    assert read_libsvm(a9a_location, n_features=123).d == 123


@for_feature(libsvm="LIBSVM reader")
def test_read_errors(tmp_path):
    """Bytes that are not UTF-8 name their line; a missing file is a config error."""
    path = tmp_path / "bad.libsvm"
    path.write_bytes(b"+1 1:0.5\n-1 2:\xff\n")
    with raises(LibsvmParseException) as e:
        read_libsvm(str(path))
    assert e.value.line == 2
    assert e.value.column == 5
    with raises(ConfigException) as e:
        read_libsvm(str(tmp_path / "missing.libsvm"))
    assert e.value.fields == ["dataset"]
