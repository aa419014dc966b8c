"""Human-readable descriptions of each detected pattern, used by ``explain``."""

from __future__ import annotations

from dataclasses import dataclass

from .patterns import PatternId


@dataclass(frozen=True)
class CatalogEntry:
    pattern: PatternId
    title: str
    motivation: str
    applicability: str
    detection: str
    advantages: str
    issues: str

    def render(self) -> str:
        lines = [
            f"{self.pattern.code} ({self.title})",
            "",
            f"Motivation:    {self.motivation}",
            f"Applicability: {self.applicability}",
            f"Detection:     {self.detection}",
            f"Advantages:    {self.advantages}",
            f"Issues:        {self.issues}",
        ]
        return "\n".join(lines) + "\n"


_P = PatternId

CATALOG: dict[PatternId, CatalogEntry] = {
    e.pattern: e
    for e in [
        CatalogEntry(
            _P.AUTO_GENERATION,
            "Generated compose file",
            "Large or templated deployments are easier to keep consistent when a program emits the compose file.",
            "Projects whose service list depends on user choices or on an external configuration source.",
            "A header comment announcing generation or forbidding manual edits, or a repository script that writes a docker-compose YAML file.",
            "One source of truth; repetitive blocks are produced mechanically.",
            "Hand edits are lost on regeneration and the committed file may drift from its generator.",
        ),
        CatalogEntry(
            _P.YAML_ANCHOR_ALIAS,
            "YAML anchors and aliases",
            "Several services repeat the same block of settings.",
            "Files where services share logging, environment or restart policies.",
            "At least one YAML alias appears in the source text.",
            "Shared settings live in one place inside the same file.",
            "Merge keys are shallow and readers unfamiliar with YAML reuse can misread the result.",
        ),
        CatalogEntry(
            _P.SERVICE_INHERITANCE,
            "Service inheritance with extends",
            "A service should start from another service's definition and change only a few keys.",
            "Families of similar services, possibly defined in a separate shared file.",
            "Any service carries an extends record before resolution.",
            "Reuse across files, with compose-aware merging of lists and mappings.",
            "Inheritance chains hide the effective configuration; the referenced file may fall outside naming conventions.",
        ),
        CatalogEntry(
            _P.OVERRIDE_USE_CASE,
            "Override files",
            "The same stack needs small per-environment differences such as development mounts or exposed ports.",
            "Repositories that keep a base file and one or more files layered on top with -f.",
            "The file is an override candidate by name or content, or forms a base/override pair found by naming or in scripts.",
            "Environment differences stay small and separate from the base.",
            "The merge command is often not recorded anywhere, so the effective stack is implicit.",
        ),
        CatalogEntry(
            _P.CERTIFICATE_GENERATION_MAPPING,
            "Certificate issuer beside the proxy",
            "TLS certificates must be obtained and renewed without manual steps.",
            "Stacks that terminate HTTPS in a proxy container.",
            "A certificate service shares a volume with a reverse proxy or application service (structural), or simply coexists with a reverse proxy.",
            "Renewal runs next to the consumer and certificates reach it through a shared mount.",
            "Both containers must agree on paths, and the proxy may need a reload after renewal.",
        ),
        CatalogEntry(
            _P.CONTAINER_MANAGEMENT,
            "Container management service",
            "Running containers should be updated or supervised without an operator logging in.",
            "Self-hosted stacks that track moving image tags.",
            "A service is classified as container management (for example watchtower or portainer).",
            "Automatic image refresh and a single place to inspect containers.",
            "Such services usually need the Docker socket, which grants host-level control.",
        ),
        CatalogEntry(
            _P.DATABASE_INIT_WITH_DATABASE,
            "Database initialiser with its database",
            "Schemas, migrations or seed data must be applied before the application uses the database.",
            "Stacks where a short-lived job prepares a database service.",
            "A database-init service and a database service coexist; an environment reference from the initialiser to the database makes it structural.",
            "Preparation is repeatable and separated from the long-running services.",
            "Start-up ordering is not guaranteed unless health conditions are declared.",
        ),
        CatalogEntry(
            _P.DATABASE_ADMIN_WITH_DATABASE,
            "Database administration UI with its database",
            "Developers want to browse and edit data through a web interface.",
            "Development stacks with a relational or document database.",
            "A database administration service and a database service coexist; a dependency, link or environment reference makes it structural.",
            "Quick inspection of data without local client tools.",
            "Admin consoles left in production stacks widen the attack surface.",
        ),
        CatalogEntry(
            _P.LABELS_CONFIGURE_REVERSE_PROXY,
            "Routing declared through service labels",
            "Routing rules should live next to the service they route to.",
            "Stacks fronted by a label-driven proxy such as Traefik, Caddy or nginx-proxy.",
            "A service carries proxy labels (traefik., caddy) or a VIRTUAL_HOST setting, producing a proxy-configuration edge.",
            "Adding a service and its route is one edit in one place.",
            "Routing becomes scattered over many services and depends on a proxy that may live in another file.",
        ),
        CatalogEntry(
            _P.MAIL_SERVICE_TESTING,
            "Mail service",
            "Applications that send mail need a reachable SMTP endpoint.",
            "Stacks with sign-up, notification or password-reset mail.",
            "Any service classified as mail; known catcher images are flagged as test-oriented.",
            "Outgoing mail can be captured and inspected during development.",
            "A catcher image shipped to production silently swallows real mail.",
        ),
        CatalogEntry(
            _P.APP_WITH_DATABASE,
            "Application with a database",
            "An application persists its state in a database container.",
            "Typical web applications without a separate cache tier.",
            "A frontend or backend service and a database service exist and no caching service does; dependencies, database volumes and host ports add structural evidence.",
            "The whole stack starts with one command.",
            "Database data needs a volume to survive, and published database ports are often unnecessary.",
        ),
        CatalogEntry(
            _P.APP_WITH_DATABASE_AND_CACHING,
            "Application with a database and a cache",
            "Repeated reads or sessions are moved to an in-memory store next to the database.",
            "Web applications with sessions, queues or hot read paths.",
            "A frontend or backend service, a database service and a caching service all exist; dependencies, volumes and host ports add structural evidence.",
            "The full data tier is reproducible locally.",
            "More services to keep consistent, and caches are often run without persistence settings.",
        ),
        CatalogEntry(
            _P.HTTP_REVERSE_PROXY,
            "HTTP reverse proxy container",
            "External HTTP traffic should reach several internal services through one entry point.",
            "Stacks exposing more than one web service or terminating TLS.",
            "A reverse proxy service exists; publishing host port 80 or 443 makes it structural.",
            "Single ingress, central TLS and routing that can change without touching applications.",
            "The proxy is a single point of failure and its configuration must track service names.",
        ),
        CatalogEntry(
            _P.DUPLICATE_SERVICE_REUSE,
            "One image, several services",
            "The same code base runs in several roles, such as web process, worker and scheduler.",
            "Applications with background workers or several entry points.",
            "Two or more services share an image reference or build context, producing duplicate-image edges.",
            "A single build serves every role.",
            "Repeated settings drift apart unless factored out with anchors or extends.",
        ),
    ]
}


def explain(pattern: PatternId | str) -> str:
    pid = pattern if isinstance(pattern, PatternId) else PatternId.parse(pattern)
    return CATALOG[pid].render()
