"""Local HTTP/JSON boundary wrapping the analysis pipeline.

The web UI is a pure client of this service: start analysis, poll progress,
submit exclusion decisions, fetch the result audit, and validate uploaded
audits. Analyses are rate limited to 10 per rolling hour per session token;
validation and result fetches are unlimited.
"""

from __future__ import annotations

import argparse
import logging
import threading
import time
import uuid
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import Body, FastAPI, Header, HTTPException, Response
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from . import errors
from .audit import to_json_dict, validate_document
from .pipeline import AnalysisOptions, AnalysisSession, SessionState
from .scoring import load_weights
from .sources import SourceConfig, SourceMode

log = logging.getLogger(__name__)

RATE_LIMIT = 10
RATE_WINDOW_SECONDS = 3600.0


class AnalysisRequest(BaseModel):
    identifier: str
    since: int | None = None
    depth: int = 2
    max_phase: int = 3
    weights: dict[str, float] | None = None
    orcid_check: bool = True
    confirm: bool = False
    trajectory: bool = False


class DecisionRequest(BaseModel):
    exclude_work_ids: list[str] = []


class RateLimiter:
    """Rolling-window counter per session token."""

    def __init__(self, limit: int = RATE_LIMIT,
                 window: float = RATE_WINDOW_SECONDS, clock=time.monotonic):
        self.limit = limit
        self.window = window
        self.clock = clock
        self._events: dict[str, deque[float]] = {}
        self._lock = threading.Lock()

    def check(self, token: str) -> float | None:
        """Record one analysis; returns retry-after seconds when over limit."""
        now = self.clock()
        with self._lock:
            events = self._events.setdefault(token, deque())
            while events and events[0] <= now - self.window:
                events.popleft()
            if len(events) >= self.limit:
                return self.window - (now - events[0])
            events.append(now)
            return None


@dataclass
class _Task:
    session: AnalysisSession
    session_token: str
    thread: threading.Thread | None = None
    resuming: bool = False
    lock: threading.Lock = field(default_factory=threading.Lock)


def create_app(source_config: SourceConfig | None = None,
               audit_dir: str | Path = "./audits",
               write_audits: bool = True,
               rate_limiter: RateLimiter | None = None) -> FastAPI:
    app = FastAPI(title="citekin engine", version="0.1.0")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"],
        allow_headers=["*"])

    tasks: dict[str, _Task] = {}
    tasks_lock = threading.Lock()
    limiter = rate_limiter or RateLimiter()
    config = source_config or SourceConfig()

    def _get_task(analysis_id: str) -> _Task:
        with tasks_lock:
            task = tasks.get(analysis_id)
        if task is None:
            raise HTTPException(404, detail=f"no analysis {analysis_id}")
        return task

    @app.get("/api/health")
    def health() -> dict:
        return {"status": "ok", "mode": config.mode.value}

    @app.post("/api/analyses", status_code=202)
    def start_analysis(request: AnalysisRequest, response: Response,
                       x_session_token: str = Header(...)) -> dict:
        retry_after = limiter.check(x_session_token)
        if retry_after is not None:
            raise HTTPException(
                429,
                detail=f"rate limit: {RATE_LIMIT} analyses per hour per session",
                headers={"Retry-After": str(int(retry_after) + 1)})

        with tasks_lock:
            for task in tasks.values():
                if (task.session_token == x_session_token
                        and task.session.state in (SessionState.PENDING,
                                                   SessionState.RUNNING,
                                                   SessionState.AWAITING_DECISIONS)):
                    raise HTTPException(
                        409, detail="an analysis is already in flight for this session")

        try:
            weights = load_weights(request.weights) if request.weights else None
            options = AnalysisOptions(
                since=request.since, depth=request.depth,
                max_phase=request.max_phase, weights=weights,
                orcid_check=request.orcid_check, confirm=request.confirm,
                trajectory=request.trajectory, audit=write_audits,
                audit_dir=audit_dir)
            session = AnalysisSession(request.identifier, options,
                                      source_config=config)
        except (errors.UnknownLabel, errors.WeightOutOfRange,
                errors.MalformedDocument, ValueError) as exc:
            raise HTTPException(422, detail=str(exc))

        analysis_id = uuid.uuid4().hex[:12]
        task = _Task(session=session, session_token=x_session_token)

        def runner() -> None:
            try:
                session.start()
            except errors.CitekinError:
                pass  # state/error captured on the session

        task.thread = threading.Thread(target=runner, daemon=True)
        with tasks_lock:
            tasks[analysis_id] = task
        task.thread.start()
        response.headers["Location"] = f"/api/analyses/{analysis_id}"
        return {"analysis_id": analysis_id}

    @app.get("/api/analyses/{analysis_id}")
    def progress(analysis_id: str) -> dict:
        task = _get_task(analysis_id)
        session = task.session
        return {
            "analysis_id": analysis_id,
            "state": session.state.value,
            "events": [{"stage": e.stage, "detail": e.detail,
                        "fraction": e.fraction} for e in session.events],
            "error": str(session.error) if session.error else None,
        }

    @app.get("/api/analyses/{analysis_id}/flagged")
    def flagged(analysis_id: str) -> dict:
        task = _get_task(analysis_id)
        session = task.session
        if session.state is not SessionState.AWAITING_DECISIONS:
            raise HTTPException(409, detail=f"state is {session.state.value}, "
                                            "not AWAITING_DECISIONS")
        return {
            "flagged": [
                {"work_id": w.work_id, "title": w.title,
                 "publication_year": w.publication_year, "reason": reason}
                for w, reason in session.flagged
            ]
        }

    @app.post("/api/analyses/{analysis_id}/decisions", status_code=202)
    def decide(analysis_id: str, request: DecisionRequest) -> dict:
        task = _get_task(analysis_id)
        session = task.session
        with task.lock:
            if session.state is not SessionState.AWAITING_DECISIONS or task.resuming:
                raise HTTPException(409, detail=f"state is {session.state.value}, "
                                                "not awaiting decisions")
            flagged_ids = {w.work_id for w, _ in session.flagged}
            bad = set(request.exclude_work_ids) - flagged_ids
            if bad:
                raise HTTPException(
                    422, detail="not flagged: " + ", ".join(sorted(bad)))
            task.resuming = True

            def runner() -> None:
                try:
                    session.resume(set(request.exclude_work_ids))
                except errors.CitekinError:
                    pass

            task.thread = threading.Thread(target=runner, daemon=True)
        task.thread.start()
        return {"analysis_id": analysis_id, "state": "RUNNING"}

    @app.get("/api/analyses/{analysis_id}/result")
    def result(analysis_id: str) -> dict:
        task = _get_task(analysis_id)
        session = task.session
        if session.state is not SessionState.COMPLETE:
            detail = {"state": session.state.value,
                      "error": str(session.error) if session.error else None}
            raise HTTPException(409, detail=detail)
        return to_json_dict(session.result.report)

    @app.post("/api/audits/validate")
    def validate_audit(document: dict = Body(...)) -> dict:
        try:
            validate_document(document)
        except errors.SchemaMismatch as exc:
            raise HTTPException(422, detail={"valid": False, "path": exc.path,
                                             "error": str(exc)})
        return {"valid": True}

    return app


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="citekin-serve", description="Run the citekin engine HTTP service.")
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8300)
    parser.add_argument("--fixture-dir", metavar="DIR",
                        help="serve analyses from stored API fixtures (offline)")
    parser.add_argument("--cache-dir", metavar="DIR")
    parser.add_argument("--contact", metavar="EMAIL")
    parser.add_argument("--audit-dir", default="./audits", metavar="DIR")
    parser.add_argument("--no-audit", action="store_true")
    args = parser.parse_args(argv)

    if args.fixture_dir:
        config = SourceConfig(mode=SourceMode.FIXTURE,
                              fixture_dir=Path(args.fixture_dir),
                              contact=args.contact)
    else:
        config = SourceConfig(
            mode=SourceMode.LIVE,
            cache_dir=Path(args.cache_dir) if args.cache_dir else None,
            contact=args.contact)

    app = create_app(config, audit_dir=args.audit_dir,
                     write_audits=not args.no_audit)
    import uvicorn
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
