"""
Certificate Store Check: identcert
Purpose:
- Prove the configured cache target (IDENTCERT_CACHE) is reachable
- Show what it holds
NO pytest. NO mocks. NO abstractions.
"""

import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT))

from services.certvault.store import CertStore
from services.shared.config import settings


def main():
    print("=== identcert Certificate Store Check ===")

    if not settings.cache:
        print("IDENTCERT_CACHE not set; nothing to check")
        return

    print("\n[Target]")
    print("cache:", settings.cache)
    store = CertStore(settings.cache)

    print("\n[Contents]")
    certs = store.certificates()
    print("certificates:", len(certs))
    for cert in certs:
        ok = "ok" if cert.verify() else "DIGEST MISMATCH"
        print(f"  {'x'.join(map(str, cert.format))} k={cert.k} p={list(cert.p)} {cert.route} {cert.digest[:12]} {ok}")

    print("\n=== Certificate Store Check COMPLETE ===")


if __name__ == "__main__":
    main()
