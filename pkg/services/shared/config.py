from dataclasses import dataclass
import os

@dataclass(frozen=True)
class Settings:
    # Field / sampling
    prime: int = int(os.getenv("IDENTCERT_PRIME", "32003"))
    seed: int = int(os.getenv("IDENTCERT_SEED", "0"))
    trials: int = int(os.getenv("IDENTCERT_TRIALS", "3"))

    # Check mode: first-order | groebner | both
    mode: str = os.getenv("IDENTCERT_MODE", "first-order")

    # Groebner budget (S-pair reductions); Hilbert/standard-monomial caps scale from it
    budget: int = int(os.getenv("IDENTCERT_BUDGET", "20000"))

    # Planner
    direct_check_max_ambient: int = int(os.getenv("IDENTCERT_DIRECT_MAX_AMBIENT", "4096"))
    groebner_max_vars: int = int(os.getenv("IDENTCERT_GROEBNER_MAX_VARS", "12"))
    workers: int = int(os.getenv("IDENTCERT_WORKERS", "1"))

    # Certificate cache: JSON file path or SQLAlchemy URL; empty = no cache
    cache: str = os.getenv("IDENTCERT_CACHE", "")

    log_level: str = os.getenv("IDENTCERT_LOG_LEVEL", "WARNING")

settings = Settings()
