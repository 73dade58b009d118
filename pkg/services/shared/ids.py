import uuid
from typing import Sequence


def new_id(prefix: str) -> str:
    """Run trace id. Logs only; never written into a certificate."""
    return f"{prefix}_{uuid.uuid4().hex[:12]}"


def problem_key(dims: Sequence[int], k: int, p: Sequence[int]) -> str:
    """Deterministic node id for a claim, e.g. ``4x4x8/5/7,6,0``."""
    return "x".join(str(a) for a in dims) + f"/{k}/" + ",".join(str(x) for x in p)
