import pytest
from hypothesis import given, strategies as st

from ctcfuse import NormalizationConfig, NormalizedTranscript, TranscriptNormalizer, normalize, render
from ctcfuse.textnorm import load_replacements

CZECH = "aábcčdďeéěfghiíjklmnňoópqrřsštťuúůvwxyýzž"
czech_text = st.text(alphabet=CZECH + CZECH.upper() + " ,.!?;:-\"'()[]„“\t\n0123456789", max_size=60)


@pytest.mark.parametrize(
    "text,expected",
    [
        ("Dobrý den, pane!", ["dobrý", "den", "pane"]),
        ("[cough] ano  ano.", ["ano", "ano"]),
        ("", []),
        ("Řekl: „Ať žije Česko“", ["řekl", "ať", "žije", "česko"]),
        ("česko-slovenský", ["česko", "slovenský"]),
        ("<noise> ne [laugh ter] ne", ["ne", "ne"]),
    ],
)
def test_normalize_examples(text, expected):
    assert list(normalize(text).words) == expected


def test_render():
    assert render(NormalizedTranscript(["ano", "ne"])) == "ano ne"
    assert render(NormalizedTranscript([])) == ""


def test_keep_case():
    assert normalize("Praha", NormalizationConfig(lowercase=False)).words == ("Praha",)


def test_hyphen_kept_when_configured():
    cfg = NormalizationConfig(split_hyphens=False)
    assert normalize("česko-slovenský - a", cfg).words == ("česko-slovenský", "a")


def test_custom_punctuation_set():
    cfg = NormalizationConfig(punctuation_set={"#"})
    assert normalize("a#b, c", cfg).words == ("a", "b,", "c")


def test_bad_marker_pattern():
    with pytest.raises(ValueError):
        NormalizationConfig(nonspeech_patterns=("[",))
    with pytest.raises(ValueError):
        NormalizationConfig(nonspeech_patterns=("...]",))


def test_replacement_table(tmp_path):
    path = tmp_path / "rep.tsv"
    path.write_text("ČT24\tčt dvacet čtyři\n\\bmladej\\b\tmladý\n", encoding="utf-8")
    table = load_replacements(path)
    cfg = NormalizationConfig(replacements=table)
    assert normalize("ČT24 hlásí: mladej muž", cfg).words == ("čt", "dvacet", "čtyři", "hlásí", "mladý", "muž")


def test_replacement_table_bad_row(tmp_path):
    path = tmp_path / "rep.tsv"
    path.write_text("only-one-column\n", encoding="utf-8")
    with pytest.raises(ValueError, match="rep.tsv:1"):
        load_replacements(path)


def test_transformer_api():
    norm = TranscriptNormalizer(lowercase=False)
    assert norm.get_params()["lowercase"] is False
    out = norm.fit_transform(["Ano, ne.", "Dobrý den"])
    assert [t.words for t in out] == [("Ano", "ne"), ("Dobrý", "den")]
    assert norm.inverse_transform(out) == ["Ano ne", "Dobrý den"]
    with pytest.raises(TypeError):
        norm.transform("not a list")


@given(st.text(max_size=80))
def test_idempotent_any_text(text):
    once = normalize(text)
    assert normalize(render(once)) == once


@given(st.text(max_size=80))
def test_invariants(text):
    t = normalize(text)
    cfg = NormalizationConfig()
    for w in t.words:
        assert w
        assert not any(ch.isspace() for ch in w)
        assert not any(cfg.is_punctuation(ch) for ch in w)


@given(czech_text)
def test_case_erasure(text):
    assert normalize(text) == normalize(text.upper())


@given(st.lists(st.text(alphabet=CZECH, min_size=1, max_size=8), max_size=10))
def test_order_preserved(words):
    assert list(normalize(", ".join(words)).words) == words
