import sys

import dotenv
from loguru import logger

from viewsynth.core.registry import Registry, RuntimeSettings


def register_settings() -> RuntimeSettings:
    settings = RuntimeSettings.from_env()
    Registry().register(settings)
    return settings


def configure_logging(level: str) -> None:
    logger.remove()
    logger.add(sys.stderr, level=level, format="{time:HH:mm:ss} | {level: <7} | {message}")


def bootstrap() -> RuntimeSettings:
    dotenv.load_dotenv()
    settings = register_settings()
    configure_logging(settings.log_level)
    return settings
