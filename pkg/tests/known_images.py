from compose_patterns.taxonomy import ServiceType as T

# well-known images and the service type each one should receive
KNOWN_IMAGES = {
    "postgres": T.DATABASE,
    "mongo": T.DATABASE,
    "redis": T.CACHING,
    "nginx": T.REVERSE_PROXY,
    "traefik": T.REVERSE_PROXY,
    "varnish": T.HTTP_ACCELERATOR,
    "selenium/standalone-chrome": T.TESTING,
    "mailhog/mailhog": T.MAIL,
    "rnwood/smtp4dev": T.MAIL,
    "solr": T.SEARCH,
    "quay.io/keycloak/keycloak": T.IDENTITY,
    "kibana": T.VISUALIZATION,
    "confluentinc/cp-kafka": T.DATA_STREAMING,
    "minio/minio": T.OBJECT_STORAGE,
    "adminer": T.DATABASE_ADMINISTRATION,
    "containrrr/watchtower": T.CONTAINER_MANAGEMENT,
    "certbot/certbot": T.CERTIFICATE,
    "busybox": T.LINUX_UTILITIES,
}
