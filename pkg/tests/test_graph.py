import pytest

from compose_patterns.classifier import classify_service
from compose_patterns.graph import EXTERNAL_PROXY, EdgeKind, build_graph, detect_env_references
from compose_patterns.parser import load_compose

from .helpers import edge_set, graph_of


def test_web_db_has_no_pairwise_edges(fixtures):
    _, g = graph_of((fixtures / "web_db" / "docker-compose.yml").read_text())
    assert g.edges == []
    assert g.flags["swarm_deploy"]
    assert [n.name for n in g.nodes] == ["db", "web"]


def test_depends_on_and_links():
    _, g = graph_of("services:\n  web: {image: a, depends_on: [db], links: ['db:database']}\n  db: {image: postgres}\n")
    assert edge_set(g) == {("web", "db", "DependsOn", None), ("web", "db", "Link", None)}


def test_depends_condition_is_attribute():
    _, g = graph_of("services:\n  web:\n    image: a\n    depends_on:\n      db: {condition: service_healthy}\n  db: {image: b}\n")
    assert edge_set(g) == {("web", "db", "DependsOn", "service_healthy")}


def test_dangling_reference_is_recorded():
    _, g = graph_of("services:\n  web: {image: a, depends_on: [ghost]}\n")
    assert g.edges == []
    assert [(d.service, d.missing, d.via) for d in g.dangling] == [("web", "ghost", "depends_on")]


def test_classified_must_cover_document():
    doc = load_compose("services:\n  a: {image: x}\n  b: {image: y}\n")
    with pytest.raises(ValueError):
        build_graph(doc, [classify_service(doc.services["a"])])


@pytest.mark.parametrize(
    "value,expected",
    [
        ("postgres://db:5432/app", {"db"}),
        ("db", {"db"}),
        ("db:5432", {"db"}),
        ("production", set()),
        ("dbg_mode", set()),
        ("my-db", set()),
        ("redis://cache-1:6379", {"cache-1"}),
        ("mongodb://user:pw@db:27017,cache-1:27017/x", {"db", "cache-1"}),
        ("http://DB:80", {"db"}),
    ],
)
def test_env_reference_tokens(value, expected):
    doc = load_compose(
        "services:\n  web:\n    image: a\n    environment:\n      X: '" + value + "'\n  db: {image: b}\n  cache-1: {image: c}\n  cache: {image: d}\n"
    )
    assert {e.target for e in detect_env_references(doc)} == expected
    assert all(e.attribute == "X" and e.source == "web" for e in detect_env_references(doc))


def test_env_reference_via_hostname_and_no_self_loop():
    doc = load_compose(
        "services:\n  web:\n    image: a\n    environment: {SELF: 'http://web', DB: 'pg.internal:5432'}\n"
        "  db: {image: b, hostname: pg.internal}\n"
    )
    assert [(e.source, e.target, e.attribute) for e in detect_env_references(doc)] == [("web", "db", "DB")]


def test_shared_volumes():
    _, g = graph_of(
        "services:\n  nginx: {image: nginx, volumes: ['certs:/etc/ssl']}\n  certbot: {image: certbot/certbot, volumes: ['certs:/etc/letsencrypt']}\n"
        "  c: {image: x, volumes: ['certs:/c', './data:/d']}\n  d: {image: y, volumes: ['./data/:/e']}\nvolumes: {certs: {}}\n"
    )
    assert edge_set(g, "SharedVolume") == {
        ("certbot", "nginx", "SharedVolume", "certs"),
        ("c", "certbot", "SharedVolume", "certs"),
        ("c", "nginx", "SharedVolume", "certs"),
        ("c", "d", "SharedVolume", "data"),
    }


def test_web_db_volume_not_shared(fixtures):
    _, g = graph_of((fixtures / "web_db" / "docker-compose.yml").read_text())
    assert not g.edges_of(EdgeKind.SHARED_VOLUME)


def test_shared_env_file_normalized():
    _, g = graph_of("services:\n  backend: {build: ., env_file: ./.env}\n  db: {image: postgres, env_file: [.env]}\n  x: {image: y, env_file: other.env}\n")
    assert edge_set(g, "SharedEnvFile") == {("backend", "db", "SharedEnvFile", ".env")}


def test_label_proxy_config():
    _, g = graph_of(
        "services:\n  traefik: {image: 'traefik:v2', labels: {traefik.enable: 'true'}}\n"
        "  app: {image: x, labels: {traefik.http.routers.app.rule: 'Host(`a`)'}}\n"
        "  site: {image: y, environment: {VIRTUAL_HOST: a.example.com}}\n"
    )
    assert edge_set(g, "LabelProxyConfig") == {
        ("app", "traefik", "LabelProxyConfig", "traefik."),
        ("site", "traefik", "LabelProxyConfig", "VIRTUAL_HOST"),
    }
    assert not g.flags["external_proxy"]


def test_label_proxy_prefers_matching_proxy():
    _, g = graph_of(
        "services:\n  caddy: {image: caddy}\n  traefik: {image: traefik}\n  app: {image: x, labels: {traefik.enable: 'true'}}\n"
    )
    assert edge_set(g, "LabelProxyConfig") == {("app", "traefik", "LabelProxyConfig", "traefik.")}


def test_label_proxy_external():
    _, g = graph_of("services:\n  app: {image: x, labels: ['caddy=a.example.com']}\n")
    assert edge_set(g, "LabelProxyConfig") == {("app", EXTERNAL_PROXY, "LabelProxyConfig", "caddy")}
    assert g.flags["external_proxy"] and g.external_nodes == [EXTERNAL_PROXY]


def test_no_labels_no_edges():
    _, g = graph_of("services:\n  traefik: {image: traefik}\n  app: {image: x}\n")
    assert not g.edges_of(EdgeKind.LABEL_PROXY_CONFIG)


@pytest.mark.parametrize(
    "body,attribute",
    [
        ("command: puma\n  sidekiq:\n    image: app:latest\n    command: sidekiq", "different-commands"),
        ("environment: {A: '1'}\n  sidekiq:\n    image: app:latest\n    environment: {A: '2'}", "different-env"),
        ("command: run\n  sidekiq:\n    image: app:latest\n    command: run", "same-command"),
    ],
)
def test_duplicate_images(body, attribute):
    _, g = graph_of(f"services:\n  web:\n    image: app:latest\n    {body}\n")
    assert edge_set(g, "DuplicateImage") == {("sidekiq", "web", "DuplicateImage", attribute)}


def test_duplicate_build_context():
    _, g = graph_of("services:\n  a: {build: ./app}\n  b: {build: {context: app/, dockerfile: Dockerfile}}\n  c: {build: ./other}\n")
    assert edge_set(g, "DuplicateImage") == {("a", "b", "DuplicateImage", "same-command")}


def test_cluster_env_flag():
    _, g = graph_of(
        "services:\n  n1: {image: es, environment: {PEERS: 'n2'}}\n  n2: {image: es, environment: {PEERS: 'n1'}}\n"
    )
    assert g.flags["cluster_env"]


def test_edges_sorted_and_unique(fixtures):
    text = (fixtures / "patterns" / "certificate_generation_mapping" / "positive.docker-compose.yml").read_text()
    _, g = graph_of(text)
    keys = [e.sort_key for e in g.edges]
    assert keys == sorted(keys) and len(set(g.edges)) == len(g.edges)


def test_edge_codes():
    _, g = graph_of("services:\n  web: {build: ., depends_on: [db], environment: {DB: 'db:5432'}}\n  db: {image: postgres}\n")
    assert g.edge_codes() == {"DependsOn:Frontend->Database": 1, "EnvReference:Frontend->Database": 1}
