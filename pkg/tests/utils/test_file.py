import pytest

from utils.file import file as file_module
from utils.error.errors import SourceNotFound
from utils.file.file import FileOps, PosetFile, infer_file_category


@pytest.mark.parametrize(
    "path, category",
    [
        ("fig3.poset", "poset"),
        ("finite.SPACE", "poset"),
        ("run.jsonl", "report"),
        ("hasse.dot", "dot"),
        ("README", "default"),
        ("notes.md", "default"),
    ],
)
def test_category_inference(path, category):
    assert PosetFile(path=path).category == category


def test_suffix_is_returned():
    assert infer_file_category("/a/b/fig3.poset") == ("poset", ".poset")


def test_missing_file(tmp_path):
    with pytest.raises(SourceNotFound, match="none.poset"):
        FileOps.read_text(PosetFile(path=str(tmp_path / "none.poset")))


def test_bom_is_stripped(tmp_path):
    path = tmp_path / "bom.poset"
    path.write_bytes("\ufeffposet p { }\n".encode("utf-8"))
    assert FileOps.read_text(PosetFile(path=str(path))) == "poset p { }\n"


def test_non_utf8_falls_back_to_detection(tmp_path):
    path = tmp_path / "latin.poset"
    text = "# ordre partiel étiqueté à la main, élément été\nposet p { elem a; }\n"
    path.write_bytes(text.encode("latin-1"))
    decoded = FileOps.read_text(PosetFile(path=str(path)))
    assert "poset p { elem a; }" in decoded


def test_size_limit(tmp_path, monkeypatch):
    monkeypatch.setattr(file_module, "MAX_FILE_SIZE", 8)
    path = tmp_path / "big.poset"
    path.write_text("poset big { }\n")
    with pytest.raises(ValueError):
        FileOps.read_bytes(PosetFile(path=str(path)))


def test_write_then_read_uses_cache(tmp_path):
    target = PosetFile(path=str(tmp_path / "out" / "fig3_4.poset"))
    FileOps.write_text(target, "poset fig3_4 { }\n")
    assert target.exists
    assert FileOps.read_text(PosetFile(path=target.path)) == "poset fig3_4 { }\n"
