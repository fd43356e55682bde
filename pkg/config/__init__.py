"""
Environment settings and pipeline configuration loading
"""

from .settings import Config, DevelopmentConfig, ProductionConfig, TestingConfig, configure_logging, get_config

__all__ = ['Config', 'DevelopmentConfig', 'ProductionConfig', 'TestingConfig', 'configure_logging', 'get_config']
