"""
Utility classes shared across the pipeline
"""

from .validation import ConfigValidator
from .seeding import SeedGenerator
from .szs_status import SzsStatus

__all__ = [
    'ConfigValidator',
    'SeedGenerator',
    'SzsStatus'
]
