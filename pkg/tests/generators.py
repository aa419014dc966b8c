"""Random inputs shared by the property tests and the acceptance suite."""

from __future__ import annotations

import json
import random
import string

IMAGES = ["redis:7", "postgres:13", "nginx", "traefik:v2", "mongo", "busybox", "myorg/app:1", "adminer"]


def _word(rng: random.Random, n: int = 6) -> str:
    return "".join(rng.choice(string.ascii_lowercase) for _ in range(n))


def anchored_pair(rng: random.Random) -> tuple[str, str]:
    """A compose document using anchors, aliases and merge keys, and its hand-expanded twin."""
    env = {f"K{i}_{_word(rng, 3).upper()}": _word(rng) for i in range(rng.randint(1, 3))}
    common = {"restart": rng.choice(["always", "unless-stopped", "no"]), "logging": {"driver": "json-file", "options": {"max-size": f"{rng.randint(1, 99)}m"}}}
    names = [f"s{i}_{_word(rng, 3)}" for i in range(rng.randint(2, 5))]

    anchored = [
        "x-common: &common",
        f"  restart: {json.dumps(common['restart'])}",
        "  logging:",
        "    driver: json-file",
        "    options:",
        f"      max-size: {json.dumps(common['logging']['options']['max-size'])}",
        "services:",
    ]
    expanded_services = {}
    for i, name in enumerate(names):
        image = rng.choice(IMAGES)
        use_merge = i > 0 and rng.random() < 0.6
        own = {"image": image}
        if rng.random() < 0.5:
            own["restart"] = "on-failure"
        anchored.append(f"  {name}:")
        if use_merge:
            anchored.append("    <<: *common")
        for key, value in own.items():
            anchored.append(f"    {key}: {json.dumps(value)}")
        if i == 0:
            anchored.append("    environment: &env")
            anchored += [f"      {k}: {json.dumps(v)}" for k, v in env.items()]
        elif i == 1 or rng.random() < 0.5:
            anchored.append("    environment: *env")
        body = dict(common) if use_merge else {}
        body.update(own)
        if i == 0 or "    environment: *env" == anchored[-1]:
            body["environment"] = dict(env)
        expanded_services[name] = body
    expanded = {"x-common": common, "services": expanded_services}
    return "\n".join(anchored) + "\n", json.dumps(expanded, indent=2) + "\n"


def random_samples(rng: random.Random, lo: int, hi: int, ties: bool = True) -> tuple[list[float], list[float]]:
    n, m = rng.randint(lo, hi), rng.randint(lo, hi)
    if ties:
        return [float(rng.randint(0, 9)) for _ in range(n)], [float(rng.randint(0, 9)) for _ in range(m)]
    pool = rng.sample(range(10_000), n + m)
    return [float(x) for x in pool[:n]], [float(x) for x in pool[n:]]
