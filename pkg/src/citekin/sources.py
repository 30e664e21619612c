"""Data acquisition layer: works, citations, ORCID records, institutions.

One client serves two modes. LIVE talks to the open scholarly APIs (OpenAlex
works/institutions, ORCID public API) with disk caching, polite rate limiting
and bounded retries. FIXTURE replays stored response bodies from a directory
that mirrors the cache layout and performs zero network operations, which
makes every analysis bit-reproducible.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import re
import threading
import time
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import requests

from .errors import (
    AuthorNotFound,
    CycleDetected,
    FixtureMissing,
    InstitutionUnknown,
    NetworkFailure,
    OrcidUnavailable,
    PartialFetch,
)
from .ids import IdKind, ResearcherIdentifier

log = logging.getLogger(__name__)

OPENALEX_BASE = "https://api.openalex.org"
ORCID_BASE = "https://pub.orcid.org/v3.0"

PAGE_SIZE = 200
FILTER_BATCH = 25          # ids OR-ed into one filter value
RETRY_ATTEMPTS = 3
CONTACT_ENV_VAR = "CITEKIN_CONTACT"


class SourceMode(Enum):
    LIVE = "LIVE"
    FIXTURE = "FIXTURE"


@dataclass
class SourceConfig:
    mode: SourceMode = SourceMode.LIVE
    fixture_dir: Path | None = None
    cache_dir: Path | None = None
    contact: str | None = None
    requests_per_second: float = 5.0

    def __post_init__(self):
        if self.contact is None:
            self.contact = os.environ.get(CONTACT_ENV_VAR)
        if self.mode is SourceMode.FIXTURE and self.fixture_dir is None:
            raise ValueError("FIXTURE mode requires a fixture_dir")


# ---------------------------------------------------------------------------
# Domain records
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class InstitutionRef:
    """An institution attached to an author on one work."""
    institution_id: str
    display_name: str = ""
    department: str | None = None


@dataclass(frozen=True)
class AuthorRef:
    author_id: str
    display_name: str = ""
    institutions: tuple[InstitutionRef, ...] = ()


@dataclass(frozen=True)
class Work:
    work_id: str
    title: str
    doi: str | None
    publication_year: int | None
    authors: tuple[AuthorRef, ...]

    def author_ids(self) -> set[str]:
        return {a.author_id for a in self.authors}


@dataclass(frozen=True)
class CitationLink:
    """One citing-work -> cited-work edge."""
    citing_work: Work
    cited_work_id: str

    @property
    def citation_year(self) -> int | None:
        return self.citing_work.publication_year


@dataclass(frozen=True)
class InstitutionNode:
    institution_id: str
    display_name: str
    parent_ids: tuple[str, ...] = ()


@dataclass(frozen=True)
class OrcidEntry:
    title: str
    doi: str | None = None
    year: int | None = None


@dataclass
class InstitutionHierarchy:
    """Resolved institution nodes plus transitive ancestor lookup."""

    nodes: dict[str, InstitutionNode] = field(default_factory=dict)

    def known(self, institution_id: str) -> bool:
        return institution_id in self.nodes

    def ancestors(self, institution_id: str) -> frozenset[str]:
        """Transitive parent closure, excluding the institution itself."""
        seen: set[str] = set()
        stack = list(self.nodes[institution_id].parent_ids) if self.known(institution_id) else []
        while stack:
            parent = stack.pop()
            if parent in seen:
                continue
            seen.add(parent)
            node = self.nodes.get(parent)
            if node:
                stack.extend(node.parent_ids)
        return frozenset(seen)

    def shares_ancestor(self, a: str, b: str) -> set[str]:
        """Intersection of the two parent closures (selves included).

        Empty for identical institutions: that case is a same-institution
        match, not a parent-organization one.
        """
        if a == b:
            return set()
        return (self.ancestors(a) | {a}) & (self.ancestors(b) | {b})


# ---------------------------------------------------------------------------
# Normalization helpers
# ---------------------------------------------------------------------------

def bare_id(value: str) -> str:
    """Strip OpenAlex/ORCID URL prefixes from an entity id."""
    if value is None:
        return value
    for prefix in ("https://openalex.org/", "http://openalex.org/",
                   "https://orcid.org/", "http://orcid.org/",
                   "https://ror.org/", "http://ror.org/"):
        if value.startswith(prefix):
            return value[len(prefix):]
    return value


def normalize_doi(doi: str | None) -> str | None:
    if not doi:
        return None
    doi = doi.lower().strip()
    for prefix in ("https://doi.org/", "http://doi.org/",
                   "https://dx.doi.org/", "http://dx.doi.org/", "doi:"):
        if doi.startswith(prefix):
            doi = doi[len(prefix):]
    return doi.strip() or None


def _institution_refs(authorship: dict) -> tuple[InstitutionRef, ...]:
    """Normalize an authorship's institution list.

    Department labels come either from an explicit ``department`` key or, when
    a listed institution's lineage contains another institution in the same
    list, from that sub-institution's display name (attached to the parent).
    """
    entries = authorship.get("institutions") or []
    by_id = {bare_id(e["id"]): e for e in entries if e.get("id")}
    refs: list[InstitutionRef] = []
    departments: dict[str, str] = {}
    for entry in entries:
        iid = bare_id(entry.get("id") or "")
        if not iid:
            continue
        lineage = [bare_id(x) for x in entry.get("lineage", []) if bare_id(x) != iid]
        for ancestor in lineage:
            if ancestor in by_id and ancestor not in departments:
                departments[ancestor] = entry.get("display_name") or iid
    for entry in entries:
        iid = bare_id(entry.get("id") or "")
        if not iid:
            continue
        dept = entry.get("department") or departments.get(iid)
        refs.append(InstitutionRef(iid, entry.get("display_name") or "", dept))
    # one ref per (institution, department)
    unique: dict[tuple[str, str | None], InstitutionRef] = {}
    for ref in refs:
        unique.setdefault((ref.institution_id, ref.department), ref)
    return tuple(unique.values())


def normalize_work(js: dict) -> Work:
    authors = []
    for authorship in js.get("authorships", []):
        author = authorship.get("author") or {}
        aid = bare_id(author.get("id") or "")
        if not aid:
            continue
        authors.append(AuthorRef(
            author_id=aid,
            display_name=author.get("display_name") or "",
            institutions=_institution_refs(authorship),
        ))
    return Work(
        work_id=bare_id(js["id"]),
        title=js.get("title") or "",
        doi=normalize_doi(js.get("doi")),
        publication_year=js.get("publication_year"),
        authors=tuple(authors),
    )


def parse_institution(js: dict) -> InstitutionNode:
    parents = js.get("parents")
    if parents is None:
        parents = [bare_id(a["id"]) for a in js.get("associated_institutions", [])
                   if a.get("relationship") == "parent"]
    return InstitutionNode(
        institution_id=bare_id(js["id"]),
        display_name=js.get("display_name") or "",
        parent_ids=tuple(bare_id(p) for p in parents),
    )


def parse_orcid_record(js: dict) -> list[OrcidEntry]:
    """Flatten an ORCID v3 works summary into (title, doi, year) entries."""
    entries: list[OrcidEntry] = []
    for group in js.get("group", []):
        for summary in group.get("work-summary", []):
            title = (((summary.get("title") or {}).get("title") or {}).get("value")) or ""
            doi = None
            ext = (summary.get("external-ids") or {}).get("external-id", []) or []
            for item in ext:
                if (item.get("external-id-type") or "").lower() == "doi":
                    doi = normalize_doi(item.get("external-id-value"))
                    if doi:
                        break
            year = None
            pub_date = summary.get("publication-date") or {}
            year_value = (pub_date.get("year") or {}).get("value")
            if year_value:
                try:
                    year = int(year_value)
                except ValueError:
                    year = None
            entries.append(OrcidEntry(title=title, doi=doi, year=year))
    entries.sort(key=lambda e: (e.doi or "", e.title, e.year or 0))
    return entries


# ---------------------------------------------------------------------------
# Request keys
# ---------------------------------------------------------------------------

_SAFE_RE = re.compile(r"[^A-Za-z0-9._=,-]")


def cache_slug(endpoint: str, params: dict[str, str]) -> str:
    """Stable file name for one (endpoint, canonical query) pair.

    Readable prefix plus a content hash; the hash alone guarantees
    uniqueness, so truncating the prefix is safe.
    """
    canonical = "&".join(f"{k}={params[k]}" for k in sorted(params))
    digest = hashlib.sha1(f"{endpoint}?{canonical}".encode()).hexdigest()[:12]
    readable = _SAFE_RE.sub("-", canonical)[:100].strip("-") or "root"
    return f"{readable}--{digest}.json"


@dataclass
class FetchStats:
    """Counts one 'API call' per request key served, fixture reads included."""
    calls: int = 0
    by_endpoint: dict[str, int] = field(default_factory=dict)

    def record(self, endpoint: str) -> None:
        self.calls += 1
        self.by_endpoint[endpoint] = self.by_endpoint.get(endpoint, 0) + 1


# ---------------------------------------------------------------------------
# Client
# ---------------------------------------------------------------------------

class ScholarlyClient:
    """Fetch layer shared by the pipeline, the CLI and the HTTP service.

    Thread-safety: the disk cache tolerates concurrent readers and a single
    writer per key (atomic rename); the per-host pacing lock serializes
    outbound requests.
    """

    def __init__(self, config: SourceConfig):
        self.config = config
        self.stats = FetchStats()
        self._institution_cache: dict[str, InstitutionNode] = {}
        self._session = requests.Session()
        agent = "citekin/0.1"
        if config.contact:
            agent += f" (mailto:{config.contact})"
        self._session.headers["User-Agent"] = agent
        self._session.headers["Accept"] = "application/json"
        self._pace_lock = threading.Lock()
        self._last_request = 0.0

    # -- transport ----------------------------------------------------------

    def _get_json(self, endpoint: str, url: str, params: dict[str, str]) -> dict:
        self.stats.record(endpoint)
        slug = cache_slug(endpoint, params)

        if self.config.mode is SourceMode.FIXTURE:
            path = self.config.fixture_dir / endpoint / slug
            if not path.exists():
                raise FixtureMissing(f"no fixture for {endpoint}/{slug} ({params})")
            return json.loads(path.read_text(encoding="utf-8"))

        if self.config.cache_dir:
            cached = self.config.cache_dir / endpoint / slug
            if cached.exists():
                return json.loads(cached.read_text(encoding="utf-8"))["body"]

        body = self._request_with_retries(url, params)

        if self.config.cache_dir:
            target = self.config.cache_dir / endpoint / slug
            target.parent.mkdir(parents=True, exist_ok=True)
            tmp = target.with_suffix(".tmp")
            tmp.write_text(json.dumps(
                {"fetched_at": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
                 "url": url, "params": params, "body": body},
                ensure_ascii=False), encoding="utf-8")
            tmp.replace(target)
        return body

    def _request_with_retries(self, url: str, params: dict[str, str]) -> dict:
        query = dict(params)
        if self.config.contact and "openalex" in url:
            query["mailto"] = self.config.contact
        last_error: Exception | None = None
        for attempt in range(RETRY_ATTEMPTS):
            self._pace()
            try:
                resp = self._session.get(url, params=query, timeout=30)
            except requests.RequestException as exc:
                last_error = exc
                log.warning("transport error on %s (attempt %d): %s", url, attempt + 1, exc)
                time.sleep(2 ** attempt)
                continue
            if resp.status_code == 404:
                raise AuthorNotFound(f"{url} returned 404")
            if resp.status_code >= 500 or resp.status_code == 429:
                last_error = NetworkFailure(f"{url} returned {resp.status_code}")
                time.sleep(2 ** attempt)
                continue
            if resp.status_code != 200:
                raise NetworkFailure(f"{url} returned {resp.status_code}: {resp.text[:200]}")
            return resp.json()
        raise NetworkFailure(f"giving up on {url} after {RETRY_ATTEMPTS} attempts: {last_error}")

    def _pace(self) -> None:
        min_interval = 1.0 / max(self.config.requests_per_second, 0.01)
        with self._pace_lock:
            wait = self._last_request + min_interval - time.monotonic()
            if wait > 0:
                time.sleep(wait)
            self._last_request = time.monotonic()

    def _paged_works(self, endpoint: str, filter_value: str) -> list[dict]:
        results: list[dict] = []
        cursor = "*"
        while cursor:
            params = {"filter": filter_value, "per-page": str(PAGE_SIZE), "cursor": cursor}
            body = self._get_json(endpoint, f"{OPENALEX_BASE}/works", params)
            results.extend(body.get("results", []))
            cursor = (body.get("meta") or {}).get("next_cursor")
        return results

    # -- public operations ---------------------------------------------------

    def fetch_author_profile(self, identifier: ResearcherIdentifier) -> tuple[str, str]:
        """Resolve an identifier to (OpenAlex author id, display name).

        Works carry OpenAlex author ids, so an ORCID root must be mapped
        before any author-id comparison.
        """
        if identifier.kind is IdKind.ORCID:
            body = self._get_json("authors", f"{OPENALEX_BASE}/authors",
                                  {"filter": f"orcid:{identifier.value}"})
            results = body.get("results", [])
            if not results:
                raise AuthorNotFound(f"no OpenAlex author found for ORCID {identifier.value}")
            record = results[0]
        else:
            try:
                record = self._get_json("authors",
                                        f"{OPENALEX_BASE}/authors/{identifier.value}",
                                        {"id": identifier.value})
            except FixtureMissing as exc:
                raise AuthorNotFound(str(exc)) from exc
            if not record:
                raise AuthorNotFound(f"no OpenAlex author record for {identifier.value}")
        return bare_id(record["id"]), record.get("display_name") or identifier.value

    def fetch_author_works(self, identifier: ResearcherIdentifier,
                           since: int | None = None) -> list[Work]:
        """All works attributed to the author, sorted by (year, work_id)."""
        if identifier.kind is IdKind.ORCID:
            filter_value = f"author.orcid:{identifier.value}"
        else:
            filter_value = f"author.id:{identifier.value}"
        raw = self._paged_works("works", filter_value)
        works = [normalize_work(js) for js in raw]
        if not works:
            raise AuthorNotFound(f"no works found for {identifier.value}")
        if since is not None:
            works = [w for w in works if w.publication_year is None
                     or w.publication_year >= since]
        works.sort(key=lambda w: (w.publication_year is None,
                                  w.publication_year or 0, w.work_id))
        return works

    def fetch_incoming_citations(self, works: list[Work]) -> list[CitationLink]:
        """One CitationLink per (citing work, cited work) pair, deduplicated.

        Raises PartialFetch rather than silently returning a subset when any
        batch cannot be served.
        """
        if not works:
            raise ValueError("fetch_incoming_citations requires a non-empty work list")
        target_ids = {w.work_id for w in works}
        links: dict[tuple[str, str], CitationLink] = {}
        missing: set[str] = set()
        ordered = sorted(target_ids)
        for batch in _chunks(ordered, FILTER_BATCH):
            filter_value = "cites:" + "|".join(batch)
            try:
                raw = self._paged_works("citations", filter_value)
            except (FixtureMissing, NetworkFailure) as exc:
                log.warning("citation batch failed (%s): %s", batch[0], exc)
                missing.update(batch)
                continue
            for js in raw:
                citing = normalize_work(js)
                cited = {bare_id(r) for r in js.get("referenced_works", [])} & target_ids
                for cited_id in cited:
                    links.setdefault((citing.work_id, cited_id),
                                     CitationLink(citing, cited_id))
        if missing:
            raise PartialFetch(missing)
        out = list(links.values())
        out.sort(key=lambda l: (l.cited_work_id,
                                l.citing_work.publication_year or 0,
                                l.citing_work.work_id))
        return out

    def fetch_works_by_authors(self, author_ids: list[str]) -> list[Work]:
        """Works authored by any of the given authors (graph expansion)."""
        seen: dict[str, Work] = {}
        for batch in _chunks(sorted(set(author_ids)), FILTER_BATCH):
            filter_value = "author.id:" + "|".join(batch)
            for js in self._paged_works("works", filter_value):
                work = normalize_work(js)
                seen.setdefault(work.work_id, work)
        works = list(seen.values())
        works.sort(key=lambda w: (w.publication_year is None,
                                  w.publication_year or 0, w.work_id))
        return works

    def fetch_orcid_record(self, orcid: str) -> list[OrcidEntry]:
        try:
            body = self._get_json("orcid", f"{ORCID_BASE}/{orcid}/works", {"orcid": orcid})
        except (FixtureMissing, NetworkFailure, AuthorNotFound) as exc:
            raise OrcidUnavailable(
                f"ORCID record for {orcid} unavailable ({exc}); "
                "re-run with the ORCID check disabled to proceed"
            ) from exc
        return parse_orcid_record(body)

    def resolve_institution(self, institution_id: str) -> InstitutionNode:
        """Fetch one institution node; memoized for the client's lifetime."""
        if institution_id in self._institution_cache:
            return self._institution_cache[institution_id]
        try:
            body = self._get_json("institutions",
                                  f"{OPENALEX_BASE}/institutions/{institution_id}",
                                  {"id": institution_id})
        except (FixtureMissing, NetworkFailure, AuthorNotFound) as exc:
            raise InstitutionUnknown(f"cannot resolve institution {institution_id}: {exc}") from exc
        node = parse_institution(body)
        self._institution_cache[institution_id] = node
        return node

    def build_hierarchy(self, institution_ids: set[str]) -> tuple[InstitutionHierarchy, list[str]]:
        """Resolve institutions and their parents transitively to the roots.

        Returns the hierarchy plus the ids that could not be resolved (their
        affiliations are treated as missing downstream). Raises CycleDetected
        when the parent relation is not acyclic.
        """
        hierarchy = InstitutionHierarchy()
        unresolved: list[str] = []

        def resolve(iid: str, trail: tuple[str, ...]) -> None:
            if iid in trail:
                cycle = " -> ".join(trail + (iid,))
                raise CycleDetected(f"institution parent cycle: {cycle}")
            if iid in hierarchy.nodes or iid in unresolved:
                return
            try:
                node = self.resolve_institution(iid)
            except InstitutionUnknown:
                unresolved.append(iid)
                return
            hierarchy.nodes[iid] = node
            for parent in node.parent_ids:
                resolve(parent, trail + (iid,))

        for iid in sorted(institution_ids):
            resolve(iid, ())
        return hierarchy, sorted(unresolved)


def _chunks(items: list[str], size: int) -> list[list[str]]:
    return [items[i:i + size] for i in range(0, len(items), size)]
