"""Exit criteria for the build, one test per criterion.

Run with ``pytest tests/test_acceptance.py``; a PASS/FAIL line per criterion
is printed in the terminal summary.
"""

import json
import random
import time
from contextlib import contextmanager
from fractions import Fraction
from math import isclose
from pathlib import Path

import pytest

from compose_patterns.classifier import classify_image
from compose_patterns.itemsets import Transaction, mine_frequent_itemsets, support
from compose_patterns.merge import apply_override
from compose_patterns.parser import load_compose
from compose_patterns.patterns import PatternId, detect_all
from compose_patterns.report import render_report
from compose_patterns.scanner import ScanOptions, analyse_text, scan_path
from compose_patterns.stats import cliffs_delta, magnitude, mann_whitney_u
from compose_patterns.taxonomy import ServiceType

from .generators import anchored_pair, random_samples
from .known_images import KNOWN_IMAGES
from .oracles import brute_force_delta, brute_force_itemsets

FIXTURES = Path(__file__).parent / "fixtures"
PATTERNS = FIXTURES / "patterns"
acceptance = pytest.mark.acceptance


@contextmanager
def within(seconds: float):
    start = time.perf_counter()
    yield
    elapsed = time.perf_counter() - start
    assert elapsed < seconds, f"took {elapsed:.2f}s, budget {seconds}s"


@acceptance(1, "two-service example document parses exactly")
def test_example_document():
    with within(1):
        doc = load_compose((FIXTURES / "web_db" / "docker-compose.yml").read_text())
        assert sorted(doc.services) == ["db", "web"]
        web, db = doc.services["web"], doc.services["db"]
        assert [(p.host_port, p.container_port) for p in web.ports] == [(80, 8000)]
        assert len(web.volumes) == 1
        assert "replicas" in web.deploy
        assert db.image == "postgres:13"
        assert db.hostname == "db"


@acceptance(2, "pattern fixture suite (positive and negative per pattern)")
def test_pattern_fixture_suite():
    with within(5):
        checked = 0
        seen: dict[PatternId, set[bool]] = {p: set() for p in PatternId}
        for folder in sorted(PATTERNS.iterdir()):
            pid = PatternId[folder.name.upper()]
            for path in sorted(folder.iterdir()):
                positive = path.name.startswith("positive")
                fired = pid in {f.pattern for f in detect_all(analyse_text(path.read_text(), path.name))}
                assert fired is positive, path
                seen[pid].add(positive)
                checked += 1
        assert checked >= 28
        assert all(v == {True, False} for v in seen.values())


@acceptance(3, "Apriori equals brute-force enumeration on 200 random corpora")
def test_itemset_oracle():
    rng = random.Random(20240501)
    types = list(ServiceType)[:6]
    thresholds = [Fraction(k, 20) for k in range(1, 11)]
    with within(30):
        for _ in range(200):
            corpus = [
                Transaction(str(i), frozenset(t for t in types if rng.random() < 0.4)) for i in range(rng.randint(1, 12))
            ]
            threshold = rng.choice(thresholds)
            found = mine_frequent_itemsets(corpus, threshold)
            expected = brute_force_itemsets([t.items for t in corpus], threshold)
            assert {r.items: r.support for r in found} == expected
            for r in found:
                for item in r.items:
                    if len(r.items) > 1:
                        assert support(r.items - {item}, corpus) >= r.support


@acceptance(4, "support of 27/51 prints as 0.529412")
def test_support_formatting():
    corpus = [Transaction(f"f{i}", frozenset({ServiceType.DATABASE} if i < 27 else set())) for i in range(51)]
    (db,) = [r for r in mine_frequent_itemsets(corpus, 0.05) if r.items == {ServiceType.DATABASE}]
    assert db.support_text == "0.529412"
    assert db.to_dict()["support"] == "0.529412"


@acceptance(5, "Cliff's delta and Mann-Whitney against oracles")
def test_stats_oracles():
    rng = random.Random(77)
    with within(30):
        for _ in range(100):
            a, b = random_samples(rng, 1, 25)
            d = cliffs_delta(a, b).delta
            assert d == brute_force_delta(a, b)
            assert cliffs_delta(b, a).delta == -d
        assert magnitude(0.474) == "large" and magnitude(-0.474) == "large"
        assert magnitude(0.82) == "large"
        assert isclose(mann_whitney_u([1, 2], [3, 4]).p_value, 1 / 3, abs_tol=1e-12)
        for _ in range(50):
            a, b = random_samples(rng, 8, 15, ties=False)
            exact = mann_whitney_u(a, b, method="exact").p_value
            approx = mann_whitney_u(a, b, method="asymptotic").p_value
            assert abs(exact - approx) <= 0.02


@acceptance(6, "override merge reproduces all 10 golden documents")
def test_merge_goldens():
    cases = sorted((FIXTURES / "merge").iterdir())
    assert len(cases) == 10
    for case in cases:
        base = load_compose((case / "base.yml").read_text(), "base.yml")
        over = load_compose((case / "override.yml").read_text(), "override.yml")
        merged, _ = apply_override(base, over)
        assert merged.canonical() == load_compose((case / "expected.yml").read_text()).canonical(), case.name


@acceptance(7, "anchored documents equal their expanded twins")
def test_anchor_equivalence():
    rng = random.Random(4242)
    for _ in range(50):
        anchored, expanded = anchored_pair(rng)
        a, b = load_compose(anchored), load_compose(expanded)
        assert a == b
        assert a.syntax_meta.alias_count != b.syntax_meta.alias_count


@acceptance(8, "mutual exclusion, per-file counting and byte-identical re-scan")
def test_counting_invariants():
    opts = ScanOptions(root=str(FIXTURES), strictness="both")
    report = scan_path(opts)
    exclusive = {PatternId.APP_WITH_DATABASE, PatternId.APP_WITH_DATABASE_AND_CACHING}
    per_pattern: dict[PatternId, set[str]] = {}
    for record in report.files + report.merged:
        fired = {f.pattern for f in record.findings}
        assert not exclusive <= fired, record.path
    for record in report.files:
        for f in record.findings:
            per_pattern.setdefault(f.pattern, set()).add(record.path)
    for pid in PatternId:
        assert report.pattern_counts.get(pid, 0) == len(per_pattern.get(pid, set()))
    first = render_report(report)
    second = render_report(scan_path(opts))
    assert first.encode() == second.encode()
    assert json.loads(first)["summary"]["files"] == len(report.files)


@acceptance(9, "well-known images classify correctly regardless of registry and tag")
def test_classifier_fidelity():
    assert len(KNOWN_IMAGES) == 18
    for image, expected in KNOWN_IMAGES.items():
        repo = image.split("/", 1)[1] if image.startswith("quay.io/") else image
        hub = "docker.io/" + (repo if "/" in repo else "library/" + repo)
        variants = [image, repo, repo + ":1.0", repo + ":latest", repo + "@sha256:" + "b" * 64, hub, hub + ":2", "registry.example.com:5000/" + repo + ":x"]
        for ref in variants:
            assert classify_image(ref)[0] is expected, ref


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
