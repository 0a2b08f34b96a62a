"""Per-DOI lookups against the Crossref and Unpaywall REST APIs.

Meant for spot checks and incremental refresh, not bulk harvesting. Requests
go through one shared rate limiter; 429, 5xx and transport failures are
retried with capped exponential backoff, and a server ``Retry-After`` header
is honoured. Successful responses can be cached on disk per DOI.
"""

from __future__ import annotations

import email.utils
import hashlib
import json
import logging
import os
import random
import threading
import time
from contextlib import contextmanager
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, TypeVar
from urllib.parse import quote

import httpx

from .errors import HttpStatusError, NotFound, RetriesExhausted
from .ingest import CrossrefWork, UnpaywallRecord, parse_crossref_work, parse_unpaywall_record
from .logs import kv

log = logging.getLogger(__name__)

CROSSREF_BASE = "https://api.crossref.org"
UNPAYWALL_BASE = "https://api.unpaywall.org"
EMAIL_ENV = "OASTATUS_EMAIL"

T = TypeVar("T")

RETRY_STATUSES = frozenset({429, 500, 502, 503, 504})


@dataclass(frozen=True)
class RetryPolicy:
    max_attempts: int = 5
    base_backoff: float = 1.0
    max_backoff: float = 60.0
    requests_per_second: float = 5.0
    timeout: float = 30.0
    jitter: float = 0.5  # <= 1 keeps the delay sequence non-decreasing

    def __post_init__(self):
        if self.max_attempts < 1:
            raise ValueError("max_attempts must be >= 1")
        if not 0 <= self.base_backoff <= self.max_backoff:
            raise ValueError("need 0 <= base_backoff <= max_backoff")
        if self.requests_per_second <= 0:
            raise ValueError("requests_per_second must be > 0")
        if not 0 <= self.jitter <= 1:
            raise ValueError("jitter must be within [0, 1]")

    def backoff(self, retry: int, u: float) -> float:
        """Delay before retry number ``retry`` (1-based) for a uniform draw ``u``."""
        raw = self.base_backoff * (2 ** (retry - 1)) * (1 + self.jitter * u)
        return min(self.max_backoff, raw)


class RateLimiter:
    """Sliding-window limiter: at most ``capacity`` requests per ``window`` seconds.

    ``capacity = max(1, floor(rate))`` and ``window = max(1, capacity / rate)``,
    so no 1-second window ever holds more than ``rate`` requests.

    A slot is held from :meth:`acquire` until :meth:`release` and only starts
    to age once released. The server sees a request somewhere between those
    two moments, so counting from release keeps the bound true on the server
    side whatever the network latency.
    """

    def __init__(self, rate: float, clock: Callable[[], float] = time.monotonic,
                 sleep: Callable[[float], None] = time.sleep):
        self.capacity = max(1, int(rate))
        self.window = max(1.0, self.capacity / rate)
        self._clock = clock
        self._sleep = sleep
        self._slots: list[list] = []  # [released_at or None while in flight]
        self._cond = threading.Condition()

    def acquire(self) -> list:
        with self._cond:
            while True:
                now = self._clock()
                self._slots = [s for s in self._slots if s[0] is None or now < s[0] + self.window]
                if len(self._slots) < self.capacity:
                    slot = [None]
                    self._slots.append(slot)
                    return slot
                aged = [s[0] + self.window for s in self._slots if s[0] is not None]
                if not aged:
                    self._cond.wait()
                    continue
                self._cond.release()
                try:
                    self._sleep(min(aged) - now)
                finally:
                    self._cond.acquire()

    def release(self, slot: list) -> None:
        with self._cond:
            slot[0] = self._clock()
            self._cond.notify_all()

    @contextmanager
    def slot(self):
        token = self.acquire()
        try:
            yield
        finally:
            self.release(token)


def _retry_after(response: httpx.Response) -> float | None:
    value = response.headers.get("retry-after")
    if not value:
        return None
    value = value.strip()
    try:
        return max(0.0, float(value))
    except ValueError:
        pass
    try:
        when = email.utils.parsedate_to_datetime(value)
    except (TypeError, ValueError):
        return None
    return max(0.0, when.timestamp() - time.time())


class DiskCache:
    def __init__(self, directory: str | Path, ttl: float):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        self.ttl = ttl

    def _path(self, namespace: str, key: str) -> Path:
        digest = hashlib.sha256(key.encode("utf-8")).hexdigest()
        return self.directory / f"{namespace}-{digest}.json"

    def get(self, namespace: str, key: str) -> str | None:
        path = self._path(namespace, key)
        try:
            entry = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, ValueError):
            return None
        if time.time() - entry.get("fetched_at", 0) > self.ttl:
            return None
        return entry.get("body")

    def put(self, namespace: str, key: str, body: str) -> None:
        path = self._path(namespace, key)
        tmp = path.with_suffix(".tmp")
        tmp.write_text(json.dumps({"key": key, "fetched_at": time.time(), "body": body}), encoding="utf-8")
        os.replace(tmp, path)


class ApiClient:
    """Shared, thread-safe client for both APIs."""

    def __init__(
        self,
        policy: RetryPolicy = RetryPolicy(),
        crossref_base: str = CROSSREF_BASE,
        unpaywall_base: str = UNPAYWALL_BASE,
        contact_email: str | None = None,
        cache_dir: str | Path | None = None,
        cache_ttl: float = 7 * 86400,
        sleep: Callable[[float], None] = time.sleep,
        transport: httpx.BaseTransport | None = None,
        seed: int | None = None,
    ):
        self.policy = policy
        self.crossref_base = crossref_base.rstrip("/")
        self.unpaywall_base = unpaywall_base.rstrip("/")
        self.contact_email = contact_email or os.environ.get(EMAIL_ENV) or None
        self.cache = DiskCache(cache_dir, cache_ttl) if cache_dir else None
        self._sleep = sleep
        self._limiter = RateLimiter(policy.requests_per_second, sleep=sleep)
        self._random = random.Random(seed)
        agent = "oastatus/0.1"
        if self.contact_email:
            agent += f" (mailto:{self.contact_email})"
        self._http = httpx.Client(timeout=policy.timeout, headers={"User-Agent": agent}, transport=transport)
        self.requests_made = 0
        self.delays: list[float] = []

    def close(self) -> None:
        self._http.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()

    def _get(self, url: str, params: dict | None, namespace: str, key: str, parse: Callable[[str], T]) -> T:
        if self.cache is not None:
            cached = self.cache.get(namespace, key)
            if cached is not None:
                return parse(cached)
        delay = 0.0
        last_status = None
        for attempt in range(1, self.policy.max_attempts + 1):
            try:
                with self._limiter.slot():
                    self.requests_made += 1
                    response = self._http.get(url, params=params)
            except httpx.TransportError as exc:
                last_status = type(exc).__name__
                retry_after = None
            else:
                status = response.status_code
                if status == 200:
                    body = response.text
                    parsed = parse(body)
                    if self.cache is not None:
                        self.cache.put(namespace, key, body)
                    return parsed
                if status == 404:
                    raise NotFound(f"{namespace}: {key} not found")
                if status not in RETRY_STATUSES:
                    raise HttpStatusError(f"{namespace}: HTTP {status} for {key}", status)
                last_status = status
                retry_after = _retry_after(response)
            if attempt == self.policy.max_attempts:
                break
            delay = max(delay, self.policy.backoff(attempt, self._random.random()), retry_after or 0.0)
            self.delays.append(delay)
            log.info(kv("retry", api=namespace, doi=key, attempt=attempt, status=last_status, sleep=f"{delay:.3f}"))
            self._sleep(delay)
        raise RetriesExhausted(
            f"{namespace}: gave up on {key} after {self.policy.max_attempts} attempts (last: {last_status})",
            attempts=self.policy.max_attempts,
            last_status=last_status,
        )

    def fetch_crossref_work(self, doi: str) -> CrossrefWork:
        url = f"{self.crossref_base}/works/{quote(doi, safe='/')}"
        params = {"mailto": self.contact_email} if self.contact_email else None
        return self._get(url, params, "crossref", doi, parse_crossref_work)

    def fetch_unpaywall_record(self, doi: str, contact_email: str | None = None) -> UnpaywallRecord:
        email_addr = contact_email or self.contact_email
        if not email_addr:
            raise ValueError(f"Unpaywall requires a contact email (argument or ${EMAIL_ENV})")
        url = f"{self.unpaywall_base}/v2/{quote(doi, safe='/')}"
        return self._get(url, {"email": email_addr}, "unpaywall", doi, parse_unpaywall_record)


def fetch_crossref_work(doi: str, policy: RetryPolicy = RetryPolicy(), **client_kw) -> CrossrefWork:
    with ApiClient(policy, **client_kw) as client:
        return client.fetch_crossref_work(doi)


def fetch_unpaywall_record(doi: str, contact_email: str, policy: RetryPolicy = RetryPolicy(), **client_kw) -> UnpaywallRecord:
    if not contact_email:
        raise ValueError("Unpaywall requires a contact email")
    with ApiClient(policy, contact_email=contact_email, **client_kw) as client:
        return client.fetch_unpaywall_record(doi)
