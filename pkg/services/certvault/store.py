"""
Append-only cache of PASS certificates with monotone-closure lookup: a stored
PASS for dims d and claim (k, p) answers every query with dims >= d and claim
<= (k, p), same factor order and n, when it was checked in a mode at least as
strong as the query's. Only computed certificates (direct or plan routes) are
reused.

Targets: a JSON file holding an array of certificates (atomic rewrite) or a
SQLAlchemy database URL. Appends are idempotent on the certificate digest.
"""
from __future__ import annotations

import json
import logging
import os
import tempfile
from pathlib import Path
from typing import List, Optional, Sequence

from sqlalchemy import bindparam, text

from services.certvault.certificate import Certificate
from services.segre.model import Problem
from services.shared.db import get_engine, is_database_url
from services.shared.ids import problem_key

log = logging.getLogger(__name__)


class StoreError(RuntimeError):
    pass


MODE_STRENGTH = {"first-order": 0, "groebner": 1, "both": 2}
# Monotone closure holds for computed certificates, not for citations.
CACHEABLE_ROUTES = ("direct", "plan")


def modes_at_least(mode: str) -> List[str]:
    floor = MODE_STRENGTH[mode]
    return sorted(m for m, strength in MODE_STRENGTH.items() if strength >= floor)


def covers(cert: Certificate, problem: Problem, mode: str = "first-order") -> bool:
    return (
        cert.verdict == "PASS"
        and cert.route in CACHEABLE_ROUTES
        and MODE_STRENGTH.get(cert.mode, -1) >= MODE_STRENGTH[mode]
        and len(cert.format) == problem.n
        and all(a <= b for a, b in zip(cert.format, problem.dims))
        and cert.k >= problem.k
        and all(a >= b for a, b in zip(cert.p, problem.p))
    )


class _JsonBackend:
    def __init__(self, path: Path):
        self.path = path

    def load(self, modes: Optional[Sequence[str]] = None) -> List[Certificate]:
        if not self.path.exists():
            return []
        try:
            raw = json.loads(self.path.read_text(encoding="utf-8") or "[]")
        except json.JSONDecodeError as exc:
            raise StoreError(f"cache file {self.path} is not valid JSON: {exc}") from exc
        if not isinstance(raw, list):
            raise StoreError(f"cache file {self.path} must hold a JSON array")
        certs = [Certificate.model_validate(item) for item in raw]
        return certs if modes is None else [c for c in certs if c.mode in modes]

    def append(self, cert: Certificate) -> bool:
        certs = self.load()
        if any(c.digest == cert.digest for c in certs):
            return False
        certs.append(cert)
        body = "[" + ",\n".join(c.to_json() for c in certs) + "]\n"
        self.path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(prefix=".identcert-", suffix=".json", dir=self.path.parent)
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                fh.write(body)
            os.replace(tmp, self.path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        return True


class _SqlBackend:
    def __init__(self, url: str):
        self.engine = get_engine(url)
        with self.engine.begin() as conn:
            conn.execute(text("""
                CREATE TABLE IF NOT EXISTS identcert_certificates (
                    digest      VARCHAR(64) PRIMARY KEY,
                    problem_key VARCHAR(512) NOT NULL,
                    mode        VARCHAR(16) NOT NULL,
                    payload     TEXT NOT NULL
                )
            """))

    def load(self, modes: Optional[Sequence[str]] = None) -> List[Certificate]:
        with self.engine.connect() as conn:
            if modes is None:
                rows = conn.execute(text("""
                    SELECT payload
                    FROM identcert_certificates
                    ORDER BY problem_key, digest
                """)).scalars().all()
            else:
                query = text("""
                    SELECT payload
                    FROM identcert_certificates
                    WHERE mode IN :modes
                    ORDER BY problem_key, digest
                """).bindparams(bindparam("modes", expanding=True))
                rows = conn.execute(query, {"modes": list(modes)}).scalars().all()
        return [Certificate.from_json(payload) for payload in rows]

    def append(self, cert: Certificate) -> bool:
        with self.engine.begin() as conn:
            res = conn.execute(
                text("""
                    INSERT INTO identcert_certificates (digest, problem_key, mode, payload)
                    VALUES (:digest, :problem_key, :mode, :payload)
                    ON CONFLICT (digest) DO NOTHING
                """),
                {
                    "digest": cert.digest,
                    "problem_key": problem_key(cert.format, cert.k, cert.p),
                    "mode": cert.mode,
                    "payload": cert.to_json(),
                },
            )
        return res.rowcount == 1


class CertStore:
    def __init__(self, target: str):
        if not target:
            raise StoreError("empty cache target")
        self.target = target
        self._backend = _SqlBackend(target) if is_database_url(target) else _JsonBackend(Path(target))

    def certificates(self) -> List[Certificate]:
        return self._backend.load()

    def lookup(self, problem: Problem, mode: str = "first-order") -> Optional[Certificate]:
        """First stored PASS, checked in `mode` or a stronger one, that answers the problem by monotonicity."""
        for cert in self._backend.load(modes_at_least(mode)):
            if covers(cert, problem, mode):
                log.info("cache hit for %s: %s", problem, cert.digest[:12])
                return cert
        return None

    def append(self, cert: Certificate) -> bool:
        """Store a sealed PASS certificate; False when it was already there."""
        if cert.verdict != "PASS":
            raise StoreError(f"only PASS certificates are cached, got {cert.verdict}")
        if not cert.verify():
            raise StoreError("certificate digest does not match its contents")
        return self._backend.append(cert)
