from __future__ import annotations

from compose_patterns.classifier import classify_service
from compose_patterns.graph import build_graph
from compose_patterns.parser import load_compose


def graph_of(text: str):
    doc = load_compose(text)
    classified = [classify_service(s) for s in doc.services.values()]
    return doc, build_graph(doc, classified)


def edge_set(graph, kind=None):
    return {(e.source, e.target, e.kind.value, e.attribute) for e in graph.edges if kind is None or e.kind.value == kind}
