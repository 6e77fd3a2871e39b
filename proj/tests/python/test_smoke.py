import math
import os
import subprocess

import pytest

import lexitrend as lt


def test_scan_boundaries_and_handles():
    hits = lt.scan(["lol", "brb"], "LOL @lol lolz, brb!")
    assert hits == [("lol", 0, 3), ("brb", 15, 18)]


def test_lowercase_unicode():
    assert lt.lowercase("ÉCOLE") == "école"


def test_significance_matches_t_distribution():
    assert lt.significance(0.7, 12) == pytest.approx(0.011257326210937495, abs=1e-12)


def test_benjamini_hochberg():
    q, rejected = lt.benjamini_hochberg([0.001, 0.008, 0.039, 0.041, 0.042], 0.05)
    assert rejected == [True, True, True, True, True]
    _, none = lt.benjamini_hochberg([0.001, 0.5], 0.0)
    assert none == [False, False]


def test_lag_recovery():
    tw = [math.sin(i * 1.3) + 0.1 * i % 3 for i in range(30)]
    ud = tw[:]  # same values two months later
    r = lt.cross_correlation("2012-03", ud, "2012-01", tw)
    assert lt.best_lag(r)[0] == 2
    assert r[2] == pytest.approx(1.0)


def test_pelt_and_trends():
    cps, cost = lt.pelt([0, 0, 0, 0, 10, 10, 10, 10], penalty=1.0)
    assert cps == [4] and cost == pytest.approx(1.0)
    months = lt.trending_months("2012-01", [1, 1, 1, 1, 1, 1, 5, 10, 1, 1, 1, 1, 1, 1])
    assert "2012-08" in months


def test_pmi():
    assert lt.pmi(20, 100, 100, 1000) == pytest.approx(math.log(2), abs=1e-12)
    assert lt.pmi(10, 100, 100, 1000) == pytest.approx(0.0, abs=1e-12)


def test_config_errors_are_value_errors():
    with pytest.raises(ValueError):
        lt.config_hash({"alpha": "two"})
    assert lt.config_hash({"threads": "4"}) == lt.config_hash({"threads": "1"})


@pytest.mark.skipif("LEXITREND_CLI" not in os.environ, reason="needs the lexitrend CLI to generate a corpus")
def test_pipeline_on_synthetic_corpus(tmp_path):
    corpus = tmp_path / "corpus"
    subprocess.run(
        [os.environ["LEXITREND_CLI"], "synth", "--out", str(corpus), "--window", "2012-01:2013-12",
         "--terms", "8", "--seed", "5"],
        check=True, capture_output=True)
    settings = {
        "window": "2012-01:2013-12",
        "events": str(corpus / "events-*.jsonl"),
        "dict": str(corpus / "dictionary.jsonl"),
        "stopwords": str(corpus / "stopwords.txt"),
        "out": str(tmp_path / "out"),
        "min-occurrences": "50",
        "alpha": "0.05",
    }
    files, patterns = lt.match(settings)
    assert files == 24 and patterns >= 8
    summary = lt.analyze(settings)
    assert summary["analyzed"] == 8
    assert summary["positive"] + summary["negative"] >= 6
    with pytest.raises(RuntimeError, match="not analyzed"):
        lt.plotdata(settings, "definitely-not-a-term-xyz")
    header = lt.plotdata(settings, summary_term(corpus)).splitlines()[0]
    assert header.startswith("month,ud_value,twitter_value")


def summary_term(corpus):
    import json

    manifest = json.loads((corpus / "manifest.json").read_text())
    return manifest["terms"][0]["term"]
