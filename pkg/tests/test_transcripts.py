import pytest
from hypothesis import given, settings, strategies as st

from abhinaw.errors import (
    DuplicateKey,
    DuplicateReferenceId,
    EmptyReferenceText,
    MalformedCsv,
    UnknownReferenceId,
)
from abhinaw.transcripts import (
    Category,
    TranscriptRecord,
    load_references,
    load_transcripts,
    write_transcripts,
)

REF_HEADER = "reference_id,reference_text,category\n"
TR_HEADER = "reference_id,image_index,repetition_index,text\n"


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


def test_load_references_rows(tmp_path):
    path = write(tmp_path, "r.csv", REF_HEADER + "k3,the,known\nu7,ymbkgrc,unknown\nx,Sale  ends!,Other\n")
    refs = load_references(path)
    assert [(r.reference_id, r.text_length, r.category) for r in refs] == [
        ("k3", 3, Category.KNOWN),
        ("u7", 7, Category.UNKNOWN),
        ("x", 10, Category.OTHER),
    ]


@pytest.mark.parametrize(
    "body, error",
    [
        ('k1,"",known\n', EmptyReferenceText),
        ("k1,a,known\nk1,b,known\n", DuplicateReferenceId),
        ("k1,a\n", MalformedCsv),
        ("k1,a,famous\n", MalformedCsv),
        ('k1,"unterminated,known\n', MalformedCsv),
    ],
)
def test_load_references_errors(tmp_path, body, error):
    with pytest.raises(error):
        load_references(write(tmp_path, "r.csv", REF_HEADER + body))


def test_bad_header(tmp_path):
    with pytest.raises(MalformedCsv, match="row 1"):
        load_references(write(tmp_path, "r.csv", "id,text,category\nk1,a,known\n"))


def test_empty_file(tmp_path):
    with pytest.raises(MalformedCsv, match="header"):
        load_transcripts(write(tmp_path, "t.csv", ""))


def test_load_transcripts_rows(tmp_path):
    path = write(tmp_path, "t.csv", TR_HEADER + 'k3,1,1,"the the"\nk3,2,1,\n')
    assert load_transcripts(path) == [
        TranscriptRecord("k3", 1, 1, "the the"),
        TranscriptRecord("k3", 2, 1, ""),
    ]


def test_load_transcripts_full_protocol(tmp_path):
    rows = "".join(f"k3,{i},{r},the\n" for i in range(1, 11) for r in range(1, 11))
    assert len(load_transcripts(write(tmp_path, "t.csv", TR_HEADER + rows))) == 100


@pytest.mark.parametrize(
    "body, error, row",
    [
        ("k3,1,1,a\nk3,1,1,b\n", DuplicateKey, 3),
        ("k3,1,1\n", MalformedCsv, 2),
        ("k3,1,1,a\nk3,x,1,b\n", MalformedCsv, 3),
        ("k3,0,1,a\n", MalformedCsv, 2),
        ("k3,1,1,a,extra\n", MalformedCsv, 2),
    ],
)
def test_load_transcripts_errors(tmp_path, body, error, row):
    with pytest.raises(error) as info:
        load_transcripts(write(tmp_path, "t.csv", TR_HEADER + body))
    assert info.value.row == row
    assert f"row {row}" in str(info.value)


def test_unknown_reference_id(tmp_path):
    path = write(tmp_path, "t.csv", TR_HEADER + "k3,1,1,a\nzz,1,1,b\n")
    with pytest.raises(UnknownReferenceId, match="row 3"):
        load_transcripts(path, known_ids={"k3"})


def test_awkward_text_round_trips(tmp_path):
    records = [
        TranscriptRecord("k1", 1, 1, "Sale, ends Sunday!"),
        TranscriptRecord("k1", 1, 2, 'he said "hi"'),
        TranscriptRecord("k1", 1, 3, "two\nlines\r\nand more"),
        TranscriptRecord("k1", 2, 1, ""),
        TranscriptRecord("k1", 2, 2, "  padded  "),
    ]
    path = tmp_path / "t.csv"
    write_transcripts(records, path)
    assert load_transcripts(path) == records


texts = st.text(st.characters(blacklist_categories=("Cs",), blacklist_characters="\x00"), max_size=30)


@settings(max_examples=200)
@given(st.lists(texts, max_size=12), st.text("abc_", min_size=1, max_size=4))
def test_round_trip_property(tmp_path_factory, items, ref_id):
    records = [TranscriptRecord(ref_id, i // 3 + 1, i % 3 + 1, t) for i, t in enumerate(items)]
    path = tmp_path_factory.mktemp("rt") / "t.csv"
    write_transcripts(records, path)
    assert load_transcripts(path) == records
