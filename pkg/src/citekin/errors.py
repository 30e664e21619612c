"""Exception hierarchy shared across the engine.

Every error family gets its own class so the CLI can map families to
distinct exit codes and the HTTP service can map them to status codes.
"""


class CitekinError(Exception):
    """Base class for all engine errors."""


# --- identifier parsing ---

class UnrecognizedIdentifier(CitekinError):
    """Input string matches neither the ORCID nor the OpenAlex author shape."""


class InvalidChecksum(CitekinError):
    """ORCID-shaped identifier failed ISO 7064 Mod 11,2 verification."""


# --- data sources ---

class AuthorNotFound(CitekinError):
    pass


class NetworkFailure(CitekinError):
    """Transport or server failure that survived the bounded retry policy."""


class PartialFetch(CitekinError):
    """Citation fetch could not cover every work; never silently truncated."""

    def __init__(self, missing_work_ids):
        self.missing_work_ids = sorted(missing_work_ids)
        super().__init__(
            "incomplete citation fetch; missing works: "
            + ", ".join(self.missing_work_ids)
        )


class FixtureMissing(CitekinError):
    """Fixture mode had no stored response for a request."""


class OrcidUnavailable(CitekinError):
    """ORCID record could not be retrieved; proceed only with the check disabled."""


class InstitutionUnknown(CitekinError):
    pass


class CycleDetected(CitekinError):
    """Institution parent relation contains a cycle."""


# --- identity validation ---

class UnknownWorkId(CitekinError):
    """Exclusion decision referenced a work id that was never flagged."""


# --- scoring ---

class NoClassifiableCitations(CitekinError):
    """Every citation is UNKNOWN (or there are none); scores are undefined."""


class UnknownLabel(CitekinError):
    pass


class WeightOutOfRange(CitekinError):
    pass


class MalformedDocument(CitekinError):
    pass


# --- audit ---

class IoFailure(CitekinError):
    pass


class SchemaMismatch(CitekinError):
    """Audit document failed schema validation.

    ``path`` is the JSON path of the first failing element.
    """

    def __init__(self, path, message):
        self.path = path
        super().__init__(f"{path}: {message}")


class VersionUnsupported(CitekinError):
    pass


class ReplayMismatch(CitekinError):
    """Recomputed scores disagree with the scores stored in the audit."""

    def __init__(self, stored, recomputed):
        self.stored = stored
        self.recomputed = recomputed
        super().__init__(
            f"replay mismatch: stored baron={stored.baron} herocon={stored.herocon}, "
            f"recomputed baron={recomputed.baron} herocon={recomputed.herocon}"
        )
