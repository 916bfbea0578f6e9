"""OCR backends and the repeated-read fetch loop.

A backend is anything with ``transcribe(image: bytes) -> str``. It raises
:class:`TranscriptionError` for a failed call that may be retried and
:class:`BackendUnavailable` / :class:`AuthMissing` when no call can succeed.
"""

from __future__ import annotations

import base64
import hashlib
import json
import os
import threading
import time
import urllib.error
import urllib.request
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Protocol, Sequence

from .errors import (
    AuthMissing,
    BackendUnavailable,
    TranscriptionError,
    TranscriptionFailed,
)
from .transcripts import TranscriptRecord

KEY_ENV = "ABHINAW_OCR_KEY"
IMAGE_SUFFIXES = (".png", ".jpg", ".jpeg", ".webp", ".gif", ".bmp")


@dataclass(frozen=True)
class RetryPolicy:
    attempts: int = 3
    timeout: float = 60.0
    backoff: float = 0.5

    def __post_init__(self):
        if self.attempts < 1:
            raise ValueError("attempts must be >= 1")


class OcrBackend(Protocol):
    policy: RetryPolicy

    def transcribe(self, image: bytes) -> str: ...


def image_digest(image: bytes) -> str:
    return hashlib.sha256(image).hexdigest()


class FixtureBackend:
    """Deterministic backend that replays canned transcripts.

    ``responses`` maps an image's sha256 digest to the texts returned on
    successive calls for that image (cycling), or to an error message
    string wrapped as ``{"fail": msg}`` that every call raises.
    """

    def __init__(self, responses: Mapping[str, object], policy: RetryPolicy | None = None):
        self.responses = dict(responses)
        self.policy = policy or RetryPolicy(backoff=0.0)
        self._calls: dict[str, int] = {}
        self._lock = threading.Lock()

    @classmethod
    def from_json(cls, path, images: Mapping[str, bytes], policy: RetryPolicy | None = None):
        """Build from a JSON file keyed by image file name."""
        with open(path, encoding="utf-8") as fh:
            by_name = json.load(fh)
        responses = {}
        for name, value in by_name.items():
            if name not in images:
                continue
            responses[image_digest(images[name])] = value
        return cls(responses, policy)

    def transcribe(self, image: bytes) -> str:
        digest = image_digest(image)
        script = self.responses.get(digest)
        if script is None:
            raise TranscriptionError(f"no fixture for image {digest[:12]}")
        if isinstance(script, dict):
            raise TranscriptionError(str(script.get("fail", "scripted failure")))
        with self._lock:
            n = self._calls.get(digest, 0)
            self._calls[digest] = n + 1
        if isinstance(script, str):
            return script
        return script[n % len(script)]


@dataclass
class HttpBackend:
    """Generic JSON-over-HTTP vision OCR adapter.

    Sends ``{"image": <base64>}`` with a bearer token and expects
    ``{"text": ...}`` back.
    """

    endpoint: str
    key: str = field(repr=False)
    policy: RetryPolicy = field(default_factory=RetryPolicy)

    @classmethod
    def from_env(cls, endpoint: str, policy: RetryPolicy | None = None) -> "HttpBackend":
        key = os.environ.get(KEY_ENV)
        if not key:
            raise AuthMissing(f"environment variable {KEY_ENV} is not set")
        if not endpoint:
            raise BackendUnavailable("no OCR endpoint configured")
        return cls(endpoint, key, policy or RetryPolicy())

    def transcribe(self, image: bytes) -> str:
        body = json.dumps({"image": base64.b64encode(image).decode("ascii")}).encode()
        request = urllib.request.Request(
            self.endpoint,
            data=body,
            headers={
                "Content-Type": "application/json",
                "Authorization": f"Bearer {self.key}",
            },
            method="POST",
        )
        try:
            with urllib.request.urlopen(request, timeout=self.policy.timeout) as resp:
                payload = json.loads(resp.read().decode("utf-8"))
        except urllib.error.HTTPError as exc:
            if exc.code in (401, 403):
                raise AuthMissing(f"OCR endpoint rejected credential (HTTP {exc.code})") from exc
            raise TranscriptionError(f"HTTP {exc.code}") from exc
        except urllib.error.URLError as exc:
            raise BackendUnavailable(f"cannot reach {self.endpoint}: {exc.reason}") from exc
        except (TimeoutError, ValueError) as exc:
            raise TranscriptionError(str(exc)) from exc
        text = payload.get("text") if isinstance(payload, dict) else None
        if not isinstance(text, str):
            raise TranscriptionError("response has no 'text' string")
        return text


@dataclass
class FetchResult:
    records: list[TranscriptRecord]
    failures: list[TranscriptionFailed]


def _read_with_retry(backend: OcrBackend, image: bytes, sleep=time.sleep) -> str:
    policy = getattr(backend, "policy", RetryPolicy())
    last = ""
    for attempt in range(policy.attempts):
        try:
            return backend.transcribe(image)
        except TranscriptionError as exc:
            last = str(exc)
            if attempt + 1 < policy.attempts and policy.backoff > 0:
                sleep(policy.backoff * 2**attempt)
    raise TranscriptionError(f"{last} (after {policy.attempts} attempts)")


def fetch_transcripts(
    backend: OcrBackend,
    images: Sequence[bytes],
    repetitions: int,
    reference_id: str,
    jobs: int = 1,
) -> FetchResult:
    """Read every image ``repetitions`` times.

    Failed reads are returned in ``failures`` rather than dropped or
    replaced by empty text. Output is ordered by (image_index,
    repetition_index) whatever order the calls complete in.
    ``BackendUnavailable`` and ``AuthMissing`` abort the whole fetch.
    """
    if repetitions < 1:
        raise ValueError("repetitions must be >= 1")
    jobs = max(1, jobs)
    # repetition-major order so a replaying backend sees one pass over all
    # images per repetition, like re-submitting the batch
    tasks = [
        (i, r)
        for r in range(1, repetitions + 1)
        for i in range(1, len(images) + 1)
    ]

    def run(task):
        i, r = task
        try:
            return task, _read_with_retry(backend, images[i - 1]), None
        except TranscriptionError as exc:
            return task, None, TranscriptionFailed(i, r, str(exc))

    if jobs == 1:
        outcomes = [run(t) for t in tasks]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(run, tasks))

    outcomes.sort(key=lambda o: o[0])
    records, failures = [], []
    for (i, r), text, failure in outcomes:
        if failure is not None:
            failures.append(failure)
        else:
            records.append(TranscriptRecord(reference_id, i, r, text))
    return FetchResult(records, failures)


def list_images(images_dir: str | Path) -> list[Path]:
    """Image files in ``images_dir`` sorted by name; index i is position i+1."""
    return sorted(
        p for p in Path(images_dir).iterdir()
        if p.is_file() and p.suffix.lower() in IMAGE_SUFFIXES
    )
