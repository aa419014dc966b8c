import random
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from compose_patterns.classifier import canonical_image, classify_image
from compose_patterns.itemsets import Transaction, mine_frequent_itemsets, support
from compose_patterns.parser import load_compose
from compose_patterns.patterns import detect_all
from compose_patterns.scanner import analyse_text
from compose_patterns.stats import cliffs_delta, mann_whitney_u
from compose_patterns.taxonomy import ServiceType

from .generators import anchored_pair
from .known_images import KNOWN_IMAGES
from .oracles import brute_force_itemsets

TYPES = [t for t in ServiceType if t is not ServiceType.UNCLASSIFIED][:6]
seeds = st.integers(min_value=0, max_value=2**32 - 1)
samples = st.lists(st.integers(min_value=-5, max_value=5), min_size=1, max_size=12)


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_anchor_expansion_is_transparent(seed):
    anchored, expanded = anchored_pair(random.Random(seed))
    a, b = load_compose(anchored), load_compose(expanded)
    assert a == b
    assert a.syntax_meta.alias_count > 0
    assert b.syntax_meta.alias_count == 0


@settings(max_examples=80, deadline=None)
@given(st.lists(st.sets(st.sampled_from(TYPES)), min_size=1, max_size=12), st.integers(min_value=1, max_value=10))
def test_apriori_matches_enumeration(sets, tenths):
    threshold = Fraction(tenths, 20)
    corpus = [Transaction(str(i), frozenset(s)) for i, s in enumerate(sets)]
    found = mine_frequent_itemsets(corpus, threshold)
    assert {r.items: r.support for r in found} == brute_force_itemsets([t.items for t in corpus], threshold)
    for r in found:
        assert r.support == support(r.items, corpus)
        for item in r.items:
            smaller = r.items - {item}
            if smaller:
                assert support(smaller, corpus) >= r.support


@given(samples, samples)
def test_delta_antisymmetric_and_bounded(a, b):
    d = cliffs_delta(a, b).delta
    assert -1 <= d <= 1
    assert cliffs_delta(b, a).delta == -d


@given(samples, samples)
def test_p_values_are_probabilities(a, b):
    two = mann_whitney_u(a, b).p_value
    greater = mann_whitney_u(a, b, "greater").p_value
    less = mann_whitney_u(a, b, "less").p_value
    assert 0 <= two <= 1 and 0 <= greater <= 1 and 0 <= less <= 1
    assert two >= min(greater, less) - 1e-12


@given(
    st.sampled_from(sorted(KNOWN_IMAGES)),
    st.sampled_from(["", "docker.io/", "registry.example.com:5000/", "ghcr.io/"]),
    st.sampled_from(["", ":latest", ":1.2.3-alpine", "@sha256:" + "a" * 64]),
)
def test_registry_and_tag_do_not_change_type(image, registry, tag):
    ref = image
    if registry == "docker.io/" and "/" not in image:
        ref = "library/" + image
    expected = KNOWN_IMAGES[image]
    assert classify_image(registry + ref + tag)[0] is expected
    if registry in ("", "docker.io/"):
        assert canonical_image(registry + ref + tag) == canonical_image(image)


SERVICES = {
    "api": "{build: ./api, depends_on: [db]}",
    "db": "{image: 'postgres:13', ports: ['5432:5432']}",
    "cache": "{image: redis}",
    "proxy": "{image: nginx, ports: ['80:80']}",
    "mail": "{image: mailhog/mailhog}",
    "admin": "{image: adminer, depends_on: [db]}",
}


@settings(max_examples=40, deadline=None)
@given(st.permutations(sorted(SERVICES)))
def test_findings_ignore_service_order(order):
    text = "services:\n" + "".join(f"  {name}: {SERVICES[name]}\n" for name in order)
    reference = "services:\n" + "".join(f"  {name}: {SERVICES[name]}\n" for name in sorted(SERVICES))

    def summary(t):
        return sorted((f.pattern.code, f.services_involved, tuple(sorted(f.evidence)), f.strictness) for f in detect_all(analyse_text(t)))

    assert summary(text) == summary(reference)
