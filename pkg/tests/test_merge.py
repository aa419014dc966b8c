import pytest

from compose_patterns.errors import DepthExceeded, ExtendsCycle, ExtendsFileMissing, ExtendsTargetMissing, OverrideShapeConflict
from compose_patterns.merge import apply_override, apply_overrides, deep_merge, is_self_sufficient, resolve_extends
from compose_patterns.parser import load_compose

MERGE_CASES = sorted(p.name for p in (__import__("pathlib").Path(__file__).parent / "fixtures" / "merge").iterdir())


def load(path):
    return load_compose(path.read_text(), path.name)


@pytest.mark.parametrize("case", MERGE_CASES)
def test_golden_merge(fixtures, case):
    d = fixtures / "merge" / case
    merged, trace = apply_override(load(d / "base.yml"), load(d / "override.yml"))
    assert merged.canonical() == load(d / "expected.yml").canonical()
    assert trace.steps


def test_golden_case_count():
    assert len(MERGE_CASES) == 10


def test_trace_keys():
    base = load_compose("services:\n  web:\n    image: a\n    ports: ['80:80']\n")
    over = load_compose("services:\n  web:\n    image: b\n    environment: {X: '1'}\n", "override.yml")
    _, trace = apply_override(base, over)
    (step,) = trace.for_service("web")
    assert step.source == "override.yml"
    assert step.keys_overridden == {"image"}
    assert step.keys_inherited == {"ports"}
    assert step.keys_added == {"environment"}


def test_fold_matches_pairwise():
    a = load_compose("services:\n  s: {image: a, environment: {A: '1'}}\n")
    b = load_compose("services:\n  s: {environment: {B: '2'}}\n")
    c = load_compose("services:\n  s: {image: c}\n")
    folded, _ = apply_overrides([a, b, c])
    step1, _ = apply_override(a, b)
    step2, _ = apply_override(step1, c)
    assert folded == step2
    assert folded.services["s"].environment == {"A": "1", "B": "2"}


def test_shape_conflict():
    with pytest.raises(OverrideShapeConflict):
        deep_merge({"a": {"b": 1}}, {"a": [1]})
    base = load_compose("services:\n  s: {image: a, healthcheck: {test: x}}\n")
    over = load_compose("services:\n  s: {healthcheck: [x]}\n")
    with pytest.raises(OverrideShapeConflict):
        apply_override(base, over)


def test_self_sufficiency():
    assert is_self_sufficient(load_compose("services:\n  a: {image: x}\n  b: {build: .}\n"))
    assert not is_self_sufficient(load_compose("services:\n  a: {image: x}\n  b: {ports: ['80']}\n"))


def test_extends_same_file():
    doc = load_compose(
        "services:\n  base:\n    image: app\n    environment: {A: '1', B: '1'}\n"
        "  web:\n    extends: base\n    environment: {B: '2'}\n    command: web\n",
        "docker-compose.yml",
    )
    resolved, trace = resolve_extends(doc)
    web = resolved.services["web"]
    assert web.image == "app" and web.command == "web" and web.extends is None
    assert web.environment == {"A": "1", "B": "2"}
    (step,) = trace.for_service("web")
    assert step.source == "self"


def test_extends_chain_and_other_file():
    common = load_compose("services:\n  root:\n    image: r\n    labels: {a: '1'}\n", "common/services.yml")
    doc = load_compose(
        "services:\n  mid:\n    extends: {file: common/services.yml, service: root}\n    labels: {b: '2'}\n"
        "  leaf:\n    extends: mid\n",
        "docker-compose.yml",
    )
    seen = []

    def loader(path):
        seen.append(path)
        return common

    resolved, _ = resolve_extends(doc, loader)
    assert resolved.services["leaf"].image == "r"
    assert resolved.services["leaf"].labels == {"a": "1", "b": "2"}
    assert seen == ["common/services.yml"]


def test_extends_path_relative_to_extending_file():
    base = load_compose("services:\n  x: {image: r}\n", "shared/base.yml")
    inner = load_compose("services:\n  y:\n    extends: {file: base.yml, service: x}\n", "shared/inner.yml")
    doc = load_compose("services:\n  z:\n    extends: {file: shared/inner.yml, service: y}\n", "docker-compose.yml")
    files = {"shared/base.yml": base, "shared/inner.yml": inner}
    resolved, _ = resolve_extends(doc, files.__getitem__)
    assert resolved.services["z"].image == "r"


def test_extends_errors():
    with pytest.raises(ExtendsCycle):
        resolve_extends(load_compose("services:\n  a: {extends: b}\n  b: {extends: a}\n"))
    with pytest.raises(ExtendsTargetMissing):
        resolve_extends(load_compose("services:\n  a: {extends: ghost}\n"))
    with pytest.raises(ExtendsFileMissing):
        resolve_extends(load_compose("services:\n  a:\n    extends: {file: other.yml, service: b}\n"))
    chain = "services:\n" + "".join(f"  s{i}: {{extends: s{i + 1}}}\n" for i in range(12)) + "  s12: {image: x}\n"
    with pytest.raises(DepthExceeded):
        resolve_extends(load_compose(chain))
    resolved, _ = resolve_extends(load_compose(chain), max_depth=20)
    assert resolved.services["s0"].image == "x"
