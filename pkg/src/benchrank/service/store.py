"""Plain-document store: model files, an append-only record log, session files.

No database on purpose: benchmark artifacts should be diffable, citable and
greppable.  Layout under the store root:

    models/<model_id>.json      one criteria tree per file
    records/log.jsonl           append-only benchmark record log
    sessions/<session_id>.json  elicitation sessions with version counters
"""

from __future__ import annotations

import hashlib
import json
import os
import threading
import uuid
from pathlib import Path
from typing import Dict, List, Optional

from ..errors import ValidationError
from ..jsonutil import canonical_json, canonical_line
from ..mcda import CriteriaTree, model_from_doc, model_to_doc
from .records import BenchmarkRecord, IngestReport

#: environment variable naming the default store root
STORE_ENV_VAR = "BENCHRANK_STORE"


def default_store_root() -> Path:
    return Path(os.environ.get(STORE_ENV_VAR, "benchrank-store"))


class Store:
    """Single-writer document store with concurrent readers."""

    def __init__(self, root: Path | str):
        self.root = Path(root)
        self._lock = threading.Lock()
        for sub in ("models", "records", "sessions"):
            (self.root / sub).mkdir(parents=True, exist_ok=True)

    # -- models ------------------------------------------------------------

    def _model_path(self, model_id: str) -> Path:
        if not model_id or "/" in model_id or model_id.startswith("."):
            raise ValidationError(f"invalid model id {model_id!r}")
        return self.root / "models" / f"{model_id}.json"

    def save_model(self, model_id: str, tree: CriteriaTree) -> None:
        with self._lock:
            self._model_path(model_id).write_text(
                canonical_json(model_to_doc(tree)), encoding="utf-8"
            )

    def load_model(self, model_id: str) -> CriteriaTree:
        path = self._model_path(model_id)
        if not path.exists():
            raise KeyError(model_id)
        return model_from_doc(json.loads(path.read_text(encoding="utf-8")))

    def list_models(self) -> List[str]:
        return sorted(p.stem for p in (self.root / "models").glob("*.json"))

    def delete_model(self, model_id: str) -> None:
        path = self._model_path(model_id)
        if not path.exists():
            raise KeyError(model_id)
        with self._lock:
            path.unlink()

    # -- records -----------------------------------------------------------

    @property
    def _log_path(self) -> Path:
        return self.root / "records" / "log.jsonl"

    def load_records(
        self,
        alternative_id: Optional[str] = None,
        family: Optional[str] = None,
    ) -> List[BenchmarkRecord]:
        if not self._log_path.exists():
            return []
        records = []
        for line in self._log_path.read_text(encoding="utf-8").splitlines():
            if not line.strip():
                continue
            record = BenchmarkRecord.from_doc(json.loads(line))
            if alternative_id is not None and record.alternative_id != alternative_id:
                continue
            if family is not None and record.family != family:
                continue
            records.append(record)
        return records

    def append_records(self, report: IngestReport) -> IngestReport:
        """Persist accepted records, demoting duplicates of stored keys to rejects."""
        with self._lock:
            existing = {r.key for r in self.load_records()}
            accepted: List[BenchmarkRecord] = []
            rejected = list(report.rejected)
            for i, record in enumerate(report.accepted):
                if record.key in existing:
                    rejected.append((i, f"duplicate of stored record {record.key}"))
                    continue
                existing.add(record.key)
                accepted.append(record)
            if accepted:
                with self._log_path.open("a", encoding="utf-8") as fh:
                    for record in accepted:
                        fh.write(canonical_line(record.to_doc()) + "\n")
        return IngestReport(tuple(accepted), tuple(rejected))

    # -- sessions ----------------------------------------------------------

    def _session_path(self, session_id: str) -> Path:
        if not session_id or "/" in session_id or session_id.startswith("."):
            raise ValidationError(f"invalid session id {session_id!r}")
        return self.root / "sessions" / f"{session_id}.json"

    def create_session(self, doc: Dict[str, object]) -> Dict[str, object]:
        session_id = uuid.uuid4().hex[:12]
        stored = {**doc, "id": session_id, "version": 1, "finalized": False}
        with self._lock:
            self._session_path(session_id).write_text(
                canonical_json(stored), encoding="utf-8"
            )
        return stored

    def load_session(self, session_id: str) -> Dict[str, object]:
        path = self._session_path(session_id)
        if not path.exists():
            raise KeyError(session_id)
        return json.loads(path.read_text(encoding="utf-8"))

    def update_session(
        self, session_id: str, doc: Dict[str, object], expected_version: int
    ) -> Dict[str, object]:
        """Versioned update: a stale expected_version loses (last writer wins
        only within the matching version)."""
        with self._lock:
            current = self.load_session(session_id)
            if int(current["version"]) != int(expected_version):
                raise StaleSessionError(
                    f"session {session_id} is at version {current['version']}, "
                    f"submission was against {expected_version}"
                )
            stored = {
                **doc,
                "id": session_id,
                "version": int(expected_version) + 1,
            }
            self._session_path(session_id).write_text(
                canonical_json(stored), encoding="utf-8"
            )
        return stored

    def list_sessions(self) -> List[str]:
        return sorted(p.stem for p in (self.root / "sessions").glob("*.json"))

    # -- integrity ----------------------------------------------------------

    def content_hash(self) -> str:
        """Digest over every stored byte; what-if endpoints must not change it."""
        digest = hashlib.sha256()
        for path in sorted(self.root.rglob("*.json*")):
            if path.is_file():
                digest.update(str(path.relative_to(self.root)).encode())
                digest.update(path.read_bytes())
        return digest.hexdigest()


class StaleSessionError(ValidationError):
    """An update raced a newer submission; the client must reload."""
