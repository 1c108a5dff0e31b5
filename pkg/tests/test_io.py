import numpy as np
import pytest

from poisdep.io import ParseError, ingest_csv, parse_csv, series_to_csv, series_to_wide_csv
from poisdep.structures import CountSeries


def test_wide_32_by_29(tmp_path):
    rng = np.random.default_rng(0)
    X = rng.poisson(20, (29, 32))
    header = "year," + ",".join(f"state{j}" for j in range(1, 33))
    rows = [f"{1990 + i}," + ",".join(map(str, X[i])) for i in range(29)]
    path = tmp_path / "w.csv"
    path.write_text("\n".join([header] + rows) + "\n")
    series = ingest_csv(path, "wide")
    assert len(series) == 32 and all(s.T == 29 for s in series)
    assert series[3].name == "state4" and series[0].labels[0] == 1990
    np.testing.assert_array_equal(series[5].x, X[:, 5])


def test_long(tmp_path):
    path = tmp_path / "l.csv"
    path.write_text("series_id,label,count\n" + "".join(f"a,{t},{t * 2}\n" for t in range(5)))
    s = ingest_csv(path, "long")
    assert len(s) == 1 and s[0].T == 5 and s[0].name == "a"
    s = parse_csv("a,1,3\nb,1,4\na,2,5\n", "long")
    assert [x.name for x in s] == ["a", "b"] and s[0].x.tolist() == [3, 5]


def test_errors(tmp_path):
    empty = tmp_path / "e.csv"
    empty.write_text("")
    with pytest.raises(ParseError):
        ingest_csv(empty)
    with pytest.raises(ParseError, match="row 3"):
        parse_csv("label,a\n1,2\n2,-1\n")
    with pytest.raises(ParseError, match="row 2"):
        parse_csv("label,a\n1,2.5\n")
    with pytest.raises(ParseError, match="ragged"):
        parse_csv("label,a,b\n1,2,3\n2,3\n")
    with pytest.raises(ParseError, match="row 2"):
        parse_csv("x,1,1\ny,2,abc\n", "long")
    with pytest.raises(ParseError):
        ingest_csv(tmp_path / "missing.csv")


def test_roundtrip():
    s = [CountSeries((1, 2, 3), np.array([4, 0, 2]), "a"),
         CountSeries((1, 2, 3), np.array([1, 1, 9]), "b")]
    back = parse_csv(series_to_wide_csv(s))
    assert [b.x.tolist() for b in back] == [[4, 0, 2], [1, 1, 9]]
    one = parse_csv(series_to_csv(s[0]))[0]
    assert one.x.tolist() == [4, 0, 2] and one.labels == (1, 2, 3)
