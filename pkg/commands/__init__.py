"""
Command-line commands
"""

from .generate import generate
from .grade import grade
from .inspect_domain import inspect_domain

__all__ = ['generate', 'grade', 'inspect_domain']
