"""
Configuration settings for different environments
"""

import logging
import os
import sys

import structlog
from dotenv import load_dotenv

load_dotenv()


class Config:
    """Base configuration class"""

    SERVICE_NAME = 'satforge'
    VERSION = '0.1.0'

    # TPTP library root for include() resolution
    TPTP_ROOT = os.getenv('TPTP')

    # Prover settings
    EPROVER_PATH = os.getenv('EPROVER_PATH', 'eprover')
    VAMPIRE_PATH = os.getenv('VAMPIRE_PATH', 'vampire')
    PROVER_TIMEOUT = float(os.getenv('PROVER_TIMEOUT', '10'))
    PROVER_MAX_CLAUSES = int(os.getenv('PROVER_MAX_CLAUSES', '4000'))
    PROVER_MAX_WEIGHT = int(os.getenv('PROVER_MAX_WEIGHT', '40'))
    WORKER_COUNT = int(os.getenv('WORKER_COUNT', '4'))

    # Pins the manifest timestamp when set
    SOURCE_DATE_EPOCH = os.getenv('SOURCE_DATE_EPOCH')

    # Logging settings
    LOG_LEVEL = os.getenv('LOG_LEVEL', 'INFO')
    LOG_FORMAT = os.getenv('LOG_FORMAT', 'console')

    @classmethod
    def init_logging(cls):
        configure_logging(cls.LOG_LEVEL, cls.LOG_FORMAT)


class DevelopmentConfig(Config):
    """Development environment configuration"""

    LOG_LEVEL = os.getenv('LOG_LEVEL', 'DEBUG')


class ProductionConfig(Config):
    """Batch runs: JSON logs, more workers"""

    LOG_FORMAT = os.getenv('LOG_FORMAT', 'json')
    WORKER_COUNT = int(os.getenv('WORKER_COUNT', '8'))


class TestingConfig(Config):
    """Testing environment configuration"""

    PROVER_TIMEOUT = 5.0
    WORKER_COUNT = 1

    @classmethod
    def init_logging(cls):
        configure_logging(cls.LOG_LEVEL, cls.LOG_FORMAT)
        logging.disable(logging.CRITICAL)


def configure_logging(level: str = 'INFO', fmt: str = 'console'):
    """
    Route structlog through the standard logging module

    Args:
        level: Log level name
        fmt: `console` for human-readable lines, `json` for one object per line
    """
    shared = [
        structlog.contextvars.merge_contextvars,
        structlog.stdlib.add_logger_name,
        structlog.stdlib.add_log_level,
        structlog.processors.TimeStamper(fmt='iso'),
    ]
    structlog.configure(
        processors=shared + [structlog.stdlib.ProcessorFormatter.wrap_for_formatter],
        logger_factory=structlog.stdlib.LoggerFactory(),
        wrapper_class=structlog.stdlib.BoundLogger,
        cache_logger_on_first_use=True,
    )
    renderer = structlog.processors.JSONRenderer() if fmt == 'json' else structlog.dev.ConsoleRenderer(colors=False)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(structlog.stdlib.ProcessorFormatter(
        foreign_pre_chain=shared,
        processors=[structlog.stdlib.ProcessorFormatter.remove_processors_meta, renderer],
    ))
    root = logging.getLogger()
    root.handlers = [handler]
    root.setLevel(level.upper())


# Configuration mapping
config = {
    'development': DevelopmentConfig,
    'production': ProductionConfig,
    'testing': TestingConfig,
    'default': DevelopmentConfig
}


def get_config():
    """Get configuration based on environment"""
    env = os.getenv('SATFORGE_ENV', 'development')
    return config.get(env, config['default'])
