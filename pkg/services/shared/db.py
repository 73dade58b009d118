from typing import Dict

from sqlalchemy import create_engine
from sqlalchemy.engine import Engine

_ENGINES: Dict[str, Engine] = {}


def is_database_url(target: str) -> bool:
    return "://" in target


def get_engine(url: str) -> Engine:
    engine = _ENGINES.get(url)
    if engine is not None:
        return engine

    engine = create_engine(
        url,
        pool_pre_ping=True,
        future=True,
    )
    _ENGINES[url] = engine
    return engine


def dispose_engines() -> None:
    for engine in _ENGINES.values():
        engine.dispose()
    _ENGINES.clear()
