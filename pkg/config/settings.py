from pydantic_settings import BaseSettings, SettingsConfigDict
from typing import Optional, Literal


class Settings(BaseSettings):
    LOG_LEVEL: str = "INFO"
    LOG_FILE: Optional[str] = None
    MAX_WORKERS: int = 4
    ENABLE_DASK: bool = False
    SCAN_CHUNK_SIZE: int = 4
    CATALOG_FORMAT: Literal["jsonl", "csv"] = "jsonl"

    model_config = SettingsConfigDict(
        env_file=".env",
        env_prefix="PIPED_",
        # Allow extra fields or ignore them
        extra="ignore",
    )


settings = Settings()
