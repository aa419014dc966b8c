"""Service-type taxonomy: 33 types in 7 categories, plus ``Unclassified``."""

from __future__ import annotations

import enum


class Category(str, enum.Enum):
    CORE = "Core"
    NETWORKING = "Networking"
    RELIABILITY = "Reliability"
    SETUP = "Setup"
    DATA = "Data"
    SCHEDULING = "Scheduling"
    MISCELLANEOUS = "Miscellaneous"


class ServiceType(str, enum.Enum):
    DATABASE = "Database"
    FRONTEND = "Frontend"
    BACKEND = "Backend"
    CACHING = "Caching"
    TESTING = "Testing"
    REVERSE_PROXY = "ReverseProxy"
    MAIL = "Mail"
    SEARCH = "Search"
    DATABASE_ADMINISTRATION = "DatabaseAdministration"
    OBJECT_STORAGE = "ObjectStorage"
    IDENTITY = "Identity"
    VISUALIZATION = "Visualization"
    JOB_SCHEDULING = "JobScheduling"
    CONTAINER_MANAGEMENT = "ContainerManagement"
    EVENT_MONITORING = "EventMonitoring"
    CERTIFICATE = "Certificate"
    DATABASE_INIT = "DatabaseInit"
    ZIPPING = "Zipping"
    MESSAGE_BROKER = "MessageBroker"
    DNS = "Dns"
    TRACING = "Tracing"
    IMAGE_RECOGNITION = "ImageRecognition"
    CRON = "Cron"
    CHAT = "Chat"
    OFFICE = "Office"
    SETUP = "Setup"
    WORKFLOW = "Workflow"
    LINUX_UTILITIES = "LinuxUtilities"
    SECRETS = "Secrets"
    HTTP_ACCELERATOR = "HttpAccelerator"
    HELLO_WORLD = "HelloWorld"
    DISCOVERY = "Discovery"
    DATA_STREAMING = "DataStreaming"
    UNCLASSIFIED = "Unclassified"

    @property
    def display_name(self) -> str:
        return DISPLAY_NAMES[self]

    @property
    def category(self) -> Category | None:
        return CATEGORIES.get(self)

    @classmethod
    def parse(cls, text: str) -> ServiceType:
        """Accept a code (``ReverseProxy``), enum name or display name."""
        key = text.strip()
        lowered = key.lower().replace("_", "").replace(" ", "")
        for member in cls:
            candidates = (member.value, member.name, member.display_name)
            if any(c.lower().replace("_", "").replace(" ", "") == lowered for c in candidates):
                return member
        raise ValueError(f"unknown service type {text!r}")


_T = ServiceType

DISPLAY_NAMES = {
    _T.DATABASE: "Database service",
    _T.FRONTEND: "Frontend service",
    _T.BACKEND: "Backend service",
    _T.CACHING: "Caching service",
    _T.TESTING: "Testing service",
    _T.REVERSE_PROXY: "Reverse proxy service",
    _T.MAIL: "Mail service",
    _T.SEARCH: "Search service",
    _T.DATABASE_ADMINISTRATION: "Database administration service",
    _T.OBJECT_STORAGE: "Object storage service",
    _T.IDENTITY: "Identity service",
    _T.VISUALIZATION: "Visualization service",
    _T.JOB_SCHEDULING: "Job scheduling service",
    _T.CONTAINER_MANAGEMENT: "Container management service",
    _T.EVENT_MONITORING: "Event monitoring service",
    _T.CERTIFICATE: "Certificate service",
    _T.DATABASE_INIT: "Database init service",
    _T.ZIPPING: "Zipping service",
    _T.MESSAGE_BROKER: "Message broker service",
    _T.DNS: "DNS service",
    _T.TRACING: "Tracing service",
    _T.IMAGE_RECOGNITION: "Image recognition service",
    _T.CRON: "Cron service",
    _T.CHAT: "Chat service",
    _T.OFFICE: "Office service",
    _T.SETUP: "Setup service",
    _T.WORKFLOW: "Workflow service",
    _T.LINUX_UTILITIES: "Linux utilities service",
    _T.SECRETS: "Secrets service",
    _T.HTTP_ACCELERATOR: "HTTP accelerator service",
    _T.HELLO_WORLD: "Hello world service",
    _T.DISCOVERY: "Discovery service",
    _T.DATA_STREAMING: "Data streaming service",
    _T.UNCLASSIFIED: "Unclassified",
}

_GROUPS = {
    Category.CORE: [_T.FRONTEND, _T.BACKEND],
    Category.NETWORKING: [_T.REVERSE_PROXY, _T.DISCOVERY, _T.DNS, _T.HTTP_ACCELERATOR],
    Category.RELIABILITY: [_T.TESTING, _T.CONTAINER_MANAGEMENT, _T.TRACING, _T.EVENT_MONITORING],
    Category.SETUP: [_T.DATABASE_INIT, _T.SETUP],
    Category.DATA: [_T.DATABASE, _T.CACHING, _T.DATABASE_ADMINISTRATION, _T.OBJECT_STORAGE, _T.DATA_STREAMING],
    Category.SCHEDULING: [_T.JOB_SCHEDULING, _T.CRON, _T.WORKFLOW],
    Category.MISCELLANEOUS: [
        _T.MAIL,
        _T.SEARCH,
        _T.IDENTITY,
        _T.VISUALIZATION,
        _T.CERTIFICATE,
        _T.ZIPPING,
        _T.MESSAGE_BROKER,
        _T.IMAGE_RECOGNITION,
        _T.CHAT,
        _T.OFFICE,
        _T.LINUX_UTILITIES,
        _T.SECRETS,
        _T.HELLO_WORLD,
    ],
}

CATEGORIES = {t: cat for cat, members in _GROUPS.items() for t in members}

APPLICATION_TYPES = frozenset({_T.FRONTEND, _T.BACKEND})
