import pytest

from compose_patterns.classifier import (
    ClassificationRule,
    Confidence,
    ClassifiedService,
    canonical_image,
    classify_image,
    classify_service,
    load_rules,
    parse_rules,
    type_histogram,
)
from compose_patterns.errors import InvalidImageRef, RuleTableError
from compose_patterns.model import BuildContext, ServiceSpec
from compose_patterns.taxonomy import CATEGORIES, Category, ServiceType

from .known_images import KNOWN_IMAGES

T = ServiceType



def test_taxonomy_shape():
    assert len([t for t in T if t is not T.UNCLASSIFIED]) == 33
    assert len(Category) == 7
    assert set(CATEGORIES) == set(T) - {T.UNCLASSIFIED}
    assert T.parse("Reverse proxy service") is T.REVERSE_PROXY
    assert T.parse("REVERSE_PROXY") is T.REVERSE_PROXY
    with pytest.raises(ValueError):
        T.parse("Spaceship")


@pytest.mark.parametrize("image,expected", sorted(KNOWN_IMAGES.items()))
def test_known_images(image, expected):
    assert classify_image(image)[0] is expected


@pytest.mark.parametrize(
    "ref,expected",
    [
        ("postgres:13", (None, "postgres")),
        ("library/postgres", (None, "postgres")),
        ("docker.io/library/postgres:13@sha256:abc", (None, "postgres")),
        ("localhost:5000/team/app:1", ("team", "app")),
        ("ghcr.io/org/sub/tool:v1", ("sub", "tool")),
        ("Bitnami/PostgreSQL", ("bitnami", "postgresql")),
    ],
)
def test_canonical_image(ref, expected):
    assert canonical_image(ref) == expected


@pytest.mark.parametrize("ref", ["", "   ", "docker.io/", ":tag"])
def test_invalid_image(ref):
    with pytest.raises(InvalidImageRef):
        classify_image(ref)


def test_unknown_image():
    assert classify_image("unknowncorp/thing") == (T.UNCLASSIFIED, None)


def test_priority_and_tie_break():
    rules = parse_rules("exact\tfoo\tCaching\t20\nprefix\tfo\tDatabase\t10\n")
    assert classify_image("foo", rules)[0] is T.DATABASE
    tie = parse_rules("prefix\tfoo\tCaching\t10\nprefix\tfo\tDatabase\t10\n")
    # equal priority: lexicographically smaller pattern wins
    assert classify_image("foo", tie)[0] is T.DATABASE


def test_rule_table_errors():
    with pytest.raises(RuleTableError):
        parse_rules("exact\tfoo\tCaching\n")
    with pytest.raises(RuleTableError):
        parse_rules("glob\tfoo\tCaching\t1\n")
    with pytest.raises(RuleTableError):
        parse_rules("regex\t(\tCaching\t1\n")
    with pytest.raises(RuleTableError):
        parse_rules("exact\tfoo\tSpaceship\t1\n")


def test_env_rules_take_part(tmp_path, monkeypatch):
    table = tmp_path / "extra.tsv"
    table.write_text("# house images\nexact\tacme/ledger\tDatabase\t5\n")
    monkeypatch.setenv("COMPOSE_PATTERNS_RULES", str(table))
    rules = load_rules()
    assert rules[0].origin == str(table)
    assert classify_image("acme/ledger:2", rules)[0] is T.DATABASE
    assert classify_image("acme/ledger:2", load_rules(use_env=False))[0] is T.UNCLASSIFIED


def test_service_order_of_evidence():
    by_image = classify_service(ServiceSpec("cache", image="redis:7"))
    assert (by_image.service_type, by_image.confidence) == (T.CACHING, Confidence.RULE_MATCH)
    base = classify_service(ServiceSpec("web", build=BuildContext(".")), dockerfile_base="node:18")
    assert (base.service_type, base.confidence) == (T.FRONTEND, Confidence.DOCKERFILE_BASE)
    api = classify_service(ServiceSpec("api", build=BuildContext(".")), dockerfile_base="python:3.12")
    assert api.service_type is T.BACKEND
    from_base_rule = classify_service(ServiceSpec("store", build=BuildContext(".")), dockerfile_base="postgres:15")
    assert (from_base_rule.service_type, from_base_rule.confidence) == (T.DATABASE, Confidence.DOCKERFILE_BASE)
    by_name = classify_service(ServiceSpec("db", build=BuildContext(".")))
    assert (by_name.service_type, by_name.confidence) == (T.DATABASE, Confidence.NAME_HEURISTIC)
    built = classify_service(ServiceSpec("api-server", build=BuildContext(".")))
    assert (built.service_type, built.confidence) == (T.BACKEND, Confidence.NAME_HEURISTIC)
    web = classify_service(ServiceSpec("web", image="ubuntu"))
    assert (web.service_type, web.confidence) == (T.UNCLASSIFIED, Confidence.UNKNOWN)


def test_classified_service_invariant():
    with pytest.raises(ValueError):
        ClassifiedService(ServiceSpec("x"), T.DATABASE, Confidence.UNKNOWN)


def test_histogram_flat_and_nested():
    cs = [classify_service(ServiceSpec(n, image=i)) for n, i in [("a", "redis"), ("b", "postgres"), ("c", "redis")]]
    assert type_histogram(cs) == {T.CACHING: 2, T.DATABASE: 1}
    assert type_histogram([cs[:1], cs[1:]]) == {T.CACHING: 2, T.DATABASE: 1}
    assert list(type_histogram(cs)) == [T.CACHING, T.DATABASE]


def test_bundled_rules_are_valid():
    rules = load_rules(use_env=False)
    assert len(rules) > 100
    assert all(isinstance(r, ClassificationRule) for r in rules)
