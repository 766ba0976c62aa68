from typing import Optional
import os

from dotenv import load_dotenv
from pydantic import BaseModel, Field


class Settings(BaseModel):
    """
    Process-wide defaults resolved from the environment.
    - cache_dir: root of the write-once JSON cache
    - threads: worker count for independent sub-tasks
    - log_level: loguru sink level
    - log_json: serialized (JSON-lines) logs on stderr
    - log_file: optional JSON-lines copy of every run
    - bernoulli_bound: largest index served by the Bernoulli table
    - eisenstein_max_level: selftest computes Eisenstein quotients up to this level N*p
    """
    cache_dir: str = ".iwasawa-cache"
    threads: int = Field(default=1, ge=1)
    log_level: str = "INFO"
    log_json: bool = True
    log_file: Optional[str] = None
    bernoulli_bound: int = Field(default=200, ge=2)
    eisenstein_max_level: int = Field(default=100, ge=1)


def load_env(path: Optional[str] = None) -> None:
    env_path = path or os.path.join(os.path.dirname(os.path.dirname(__file__)), ".env")
    load_dotenv(dotenv_path=env_path, override=True)


def get_settings() -> Settings:
    return Settings(
        cache_dir=os.getenv("IWASAWA_CACHE_DIR", ".iwasawa-cache"),
        threads=int(os.getenv("IWASAWA_THREADS", "1")),
        log_level=os.getenv("IWASAWA_LOG_LEVEL", "INFO"),
        log_json=os.getenv("IWASAWA_LOG_JSON", "1").lower() not in ("0", "false", "no"),
        log_file=os.getenv("IWASAWA_LOG_FILE") or None,
        bernoulli_bound=int(os.getenv("IWASAWA_BERNOULLI_BOUND", "200")),
        eisenstein_max_level=int(os.getenv("IWASAWA_EISENSTEIN_MAX_LEVEL", "100")),
    )
