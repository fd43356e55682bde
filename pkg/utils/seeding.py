"""
SeedGenerator - Deterministic seeds, task identifiers and content fingerprints
"""

import hashlib
import random
from typing import Any

import orjson


class SeedGenerator:
    """Utility class deriving everything random in a run from one global seed"""

    @staticmethod
    def derive_seed(global_seed: int, domain: str, kind: str, level: int, index: int, attempt: int = 0) -> int:
        """
        Derive the seed of one generation attempt

        Args:
            global_seed: Seed of the whole run
            domain: Domain code
            kind: Task kind value
            level: Difficulty level
            index: Instance index within its configuration
            attempt: Retry number

        Returns:
            64-bit seed independent of scheduling order
        """
        material = f"{global_seed}:{domain}:{kind}:{level}:{index}:{attempt}".encode('utf-8')
        return int.from_bytes(hashlib.sha256(material).digest()[:8], 'big')

    @staticmethod
    def rng(seed: int) -> random.Random:
        return random.Random(seed)

    @staticmethod
    def task_id(domain: str, kind: str, level: int, index: int) -> str:
        return f"{domain}-{kind}-L{level}-{index:04d}"

    @staticmethod
    def fingerprint(value: Any) -> str:
        """SHA-256 of the canonical JSON form of a value"""
        return hashlib.sha256(orjson.dumps(value, option=orjson.OPT_SORT_KEYS)).hexdigest()

    @staticmethod
    def generate_hash(data: bytes) -> str:
        return hashlib.sha256(data).hexdigest()
