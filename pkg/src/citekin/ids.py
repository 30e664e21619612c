"""Researcher identifier parsing and validation.

Accepts bare ORCID iDs (``0000-0002-1825-0097``), bare OpenAlex author ids
(``A5023888391``) and the https/http URL forms of either. ORCID candidates
are verified against the ISO 7064 Mod 11,2 checksum.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum

from .errors import InvalidChecksum, UnrecognizedIdentifier


class IdKind(Enum):
    ORCID = "ORCID"
    OPENALEX = "OPENALEX"


@dataclass(frozen=True)
class ResearcherIdentifier:
    kind: IdKind
    value: str

    def __str__(self) -> str:
        return self.value


_ORCID_RE = re.compile(r"^\d{4}-\d{4}-\d{4}-\d{3}[\dX]$")
_OPENALEX_RE = re.compile(r"^A\d+$")
_OPENALEX_WORK_RE = re.compile(r"^W\d+$")

_URL_PREFIXES = (
    "https://orcid.org/",
    "http://orcid.org/",
    "https://www.orcid.org/",
    "https://openalex.org/",
    "http://openalex.org/",
    "https://api.openalex.org/authors/",
    "https://api.openalex.org/people/",
    "https://openalex.org/authors/",
)


def _strip_noise(raw: str) -> str:
    candidate = raw.strip().strip("/")
    lowered = candidate.lower()
    for prefix in _URL_PREFIXES:
        if lowered.startswith(prefix):
            candidate = candidate[len(prefix):].strip("/")
            break
    return candidate


def extract_id(raw: str) -> ResearcherIdentifier:
    """Parse a free-form string or URL into a canonical identifier.

    Raises UnrecognizedIdentifier when the string matches neither shape, and
    InvalidChecksum when an ORCID-shaped value fails checksum verification.
    """
    if not raw or not raw.strip():
        raise UnrecognizedIdentifier("empty identifier")

    candidate = _strip_noise(raw)

    orcid = candidate.upper()
    if _ORCID_RE.match(orcid):
        if not validate_orcid_checksum(orcid):
            raise InvalidChecksum(
                f"ORCID {orcid} fails ISO 7064 Mod 11,2 checksum; "
                "check the id for typos"
            )
        return ResearcherIdentifier(IdKind.ORCID, orcid)

    openalex = candidate.upper()
    if _OPENALEX_RE.match(openalex):
        return ResearcherIdentifier(IdKind.OPENALEX, openalex)
    if _OPENALEX_WORK_RE.match(openalex):
        raise UnrecognizedIdentifier(
            f"{openalex} is an OpenAlex work id; enter an author id "
            "(letter 'A' followed by digits)"
        )

    raise UnrecognizedIdentifier(
        f"could not recognize {raw!r} as an ORCID or OpenAlex author id"
    )


def orcid_check_character(digits: str) -> str:
    """ISO 7064 Mod 11,2 check character for a 15-digit base string."""
    total = 0
    for ch in digits:
        total = (total + int(ch)) * 2
    result = (12 - total % 11) % 11
    return "X" if result == 10 else str(result)


def validate_orcid_checksum(orcid: str) -> bool:
    """True iff the 16th character is the Mod 11,2 check of the first 15 digits.

    ``orcid`` must already be in the 19-character dashed format.
    """
    if len(orcid) != 19:
        raise ValueError(f"expected 19-character dashed ORCID, got {orcid!r}")
    compact = orcid.replace("-", "")
    return orcid_check_character(compact[:15]) == compact[15].upper()
