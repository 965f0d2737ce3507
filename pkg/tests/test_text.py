import string
import unicodedata

import pytest
from hypothesis import given, strategies as st

from lyricmood.errors import DecodeError
from lyricmood.text import (
    build_frequency_table,
    clean,
    decode,
    document_frequencies,
    load_stopwords,
    normalize,
    parse_stopwords,
    tokenize,
)

PUNCT = string.punctuation + "।॥…“”‘’–—"

devanagari = st.characters(min_codepoint=0x0900, max_codepoint=0x097F)
mixed_text = st.text(
    alphabet=st.one_of(devanagari, st.sampled_from(list(PUNCT + " \t\n \r")), st.sampled_from("abcXYZ09")),
    max_size=60,
)


def test_normalize_collapses_whitespace():
    assert normalize("चला  जाता\nहूँ") == "चला जाता हूँ"
    assert normalize("  चला\t जाता \r\n") == "चला जाता"


def test_normalize_empty():
    assert normalize("") == ""


def test_nukta_spellings_are_identical():
    decomposed = "क" + "़"
    precomposed = "क़"
    assert normalize(decomposed) == normalize(precomposed)
    assert normalize(decomposed).encode() == normalize(precomposed).encode()


def test_normalize_lowercases_latin_only():
    assert normalize("Dil DEEWANA") == "dil deewana"
    assert normalize("ÀB दिल") == "àb दिल"


def test_normalize_bytes_and_decode_errors():
    assert normalize("हूँ".encode()) == "हूँ"
    bad = "चला".encode() + b"\xff" + "जाता".encode()
    with pytest.raises(DecodeError) as exc:
        normalize(bad)
    assert exc.value.offset == len("चला".encode())
    assert "offset 9" in str(exc.value)


def test_decode_strips_bom():
    assert decode(b"\xef\xbb\xbf" + "जय".encode()) == "जय"


@given(mixed_text)
def test_normalize_idempotent(s):
    once = normalize(s)
    assert normalize(once) == once
    assert unicodedata.is_normalized("NFC", once)


def test_tokenize_opening_line():
    assert tokenize("चला जाता हूँ, किसी की धुन में") == ["चला", "जाता", "हूँ", "किसी", "की", "धुन", "में"]


def test_tokenize_drops_ellipsis():
    assert tokenize("सुहाने लिये, चला जाता हूँ ...") == ["सुहाने", "लिये", "चला", "जाता", "हूँ"]


def test_tokenize_empty():
    assert tokenize("") == []


def test_tokenize_dandas_and_glued_punctuation():
    assert tokenize("जय हो।माँ॥ अम्बे!") == ["जय", "हो", "माँ", "अम्बे"]
    assert tokenize("...!!! ।।") == []


def test_tokenize_keeps_digits_and_marks():
    assert tokenize("२०२० saal 5") == ["२०२०", "saal", "5"]
    # virama, nukta, candrabindu, anusvara stay inside the token
    assert tokenize("क्ष ज़ माँ संग") == ["क्ष", "ज़", "माँ", "संग"]


@given(mixed_text)
def test_tokens_have_no_separators(s):
    for tok in tokenize(normalize(s)):
        assert tok
        assert not any(ch.isspace() for ch in tok)
        assert not any(unicodedata.category(ch)[0] in "PS" for ch in tok)
        assert "।" not in tok and "॥" not in tok


@given(mixed_text, mixed_text)
def test_tokenize_concatenation(a, b):
    a, b = normalize(a), normalize(b)
    assert tokenize(a + " " + b) == tokenize(a) + tokenize(b)


def test_clean():
    assert clean(["चला", "जाता", "हूँ"], {"हूँ"}) == ["चला", "जाता"]
    toks = ["की", "धुन", "में"]
    assert clean(toks, set()) == toks
    assert clean(["की", "की"], {"की"}) == []


def test_frequency_table():
    assert build_frequency_table(["क", "ख", "क"]) == {"क": 2, "ख": 1}
    assert build_frequency_table([]) == {}


@given(st.lists(st.sampled_from(["क", "ख", "ग", "जय", "माँ"]), max_size=80))
def test_frequency_table_conserves_count(tokens):
    table = build_frequency_table(tokens)
    assert sum(table.values()) == len(tokens)
    assert all(v >= 1 for v in table.values())


def test_sample_lyric_refrain_count(sample_lyric):
    freq = document_frequencies(sample_lyric)
    # counted by hand: the opening line plus the refrain closing each of the four stanzas
    assert freq["चला"] >= 4
    assert freq["चला"] == 5
    assert freq["जाता"] == 5
    assert "..." not in freq and "," not in freq


def test_stopword_file(tmp_path):
    p = tmp_path / "stop.txt"
    p.write_text("# function words\nकी\n\n  में  \nहूँ\n", encoding="utf-8")
    assert load_stopwords(p) == {"की", "में", "हूँ"}
    assert load_stopwords(None) == frozenset()
    assert parse_stopwords("क" + "़") == {normalize("क़")}
