import pytest

from km_forge import errors
from km_forge.density import delta_table
from km_forge.formats import load_algebra, save_algebra, to_dot, to_document


def test_load_order_form(chain3_file):
    H = load_algebra(chain3_file)
    assert H.names == ("0", "m", "1")
    assert H.label == "3-chain"
    assert H.name(delta_table(H)[H.bot]) == "m"


def test_load_poset_form(boolean4_file):
    H = load_algebra(boolean4_file)
    assert H.n == 4
    # unnamed documents take the file stem
    assert H.label == "b4"


def test_poset_labels(json_file):
    path = json_file("v.json", {"poset": {"points": 2, "leq": [[True, True], [False, True]], "labels": ["x", "y"]}})
    assert load_algebra(path).names == ("{}", "{y}", "{x,y}")


def test_load_rejects_m3(m3_file):
    with pytest.raises(errors.AlgebraValidationError) as e:
        load_algebra(m3_file)
    assert e.value.report.algebra == "M3"


def test_missing_file(tmp_path):
    with pytest.raises(errors.AlgebraIOError):
        load_algebra(tmp_path / "missing.json")


@pytest.mark.parametrize("content", [
    "{not json",
    '{"elements": ["0", "1"]}',
    '{"elements": ["0"], "leq": [[true]], "poset": {"points": 1, "leq": [[true]]}}',
    '{"elements": ["0", "0"], "leq": [[true, true], [false, true]]}',
    '{"elements": ["0", "1"], "leq": [[true, true]]}',
    '{"poset": {"points": 2, "leq": [[true, false]]}}',
])
def test_malformed_documents(tmp_path, content):
    path = tmp_path / "bad.json"
    path.write_text(content, encoding="utf-8")
    with pytest.raises(errors.AlgebraFormatError):
        load_algebra(path)


def test_save_and_load(chain3, tmp_path):
    path = tmp_path / "saved.json"
    save_algebra(chain3, path)
    H = load_algebra(path)
    assert H.names == chain3.names
    assert H.meet == chain3.meet and H.impl == chain3.impl
    assert to_document(chain3).name == "chain-3"


def test_to_dot(chain3):
    dot = to_dot(chain3, delta_table(chain3), highlight={1: "lightblue"})
    assert dot.startswith("digraph")
    assert "rankdir=BT" in dot
    assert "blue" in dot and "dashed" in dot
    assert "lightblue" in dot
    plain = to_dot(chain3)
    assert "dashed" not in plain
