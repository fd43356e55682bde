"""
Interest rating models
"""

from dataclasses import dataclass
from typing import Dict


@dataclass(frozen=True)
class RaterConfig:
    """Constants of the clause interestingness score"""

    weight_cap: int = 60
    interest_threshold: float = 0.5
    complexity_weight: float = 1 / 3
    surprisingness_weight: float = 1 / 3
    usefulness_weight: float = 1 / 3
    top_n: int = 50

    def __post_init__(self):
        if self.weight_cap <= 0:
            raise ValueError("weight_cap must be positive")
        if not 0.0 <= self.interest_threshold <= 1.0:
            raise ValueError("interest_threshold must lie in [0, 1]")
        weights = (self.complexity_weight, self.surprisingness_weight, self.usefulness_weight)
        if any(weight < 0 for weight in weights) or abs(sum(weights) - 1.0) > 1e-9:
            raise ValueError("metric weights must be non-negative and sum to 1")
        if self.top_n <= 0:
            raise ValueError("top_n must be positive")

    @classmethod
    def from_dict(cls, data: Dict) -> 'RaterConfig':
        weights = data.get('weights') or {}
        return cls(
            weight_cap=data.get('weight_cap', cls.weight_cap),
            interest_threshold=data.get('interest_threshold', cls.interest_threshold),
            complexity_weight=weights.get('complexity', cls.complexity_weight),
            surprisingness_weight=weights.get('surprisingness', cls.surprisingness_weight),
            usefulness_weight=weights.get('usefulness', cls.usefulness_weight),
            top_n=data.get('top_n', cls.top_n),
        )


@dataclass(frozen=True)
class InterestScore:
    complexity: float
    surprisingness: float
    usefulness: float
    combined: float

    def to_dict(self) -> Dict[str, float]:
        return {
            'complexity': self.complexity,
            'surprisingness': self.surprisingness,
            'usefulness': self.usefulness,
            'combined': self.combined,
        }
