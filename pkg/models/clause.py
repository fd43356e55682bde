"""
Clause model - terms, literals and annotated CNF clauses
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, FrozenSet, Iterator, Tuple, Union

# Reserved predicate symbol for `X=Y` / `X!=Y` literals
EQUALITY = '='


@dataclass(frozen=True)
class Variable:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Compound:
    """Function or predicate application; constants have no arguments"""

    functor: str
    args: Tuple['Term', ...] = ()

    def __post_init__(self):
        if not self.functor:
            raise ValueError("Compound terms need a non-empty functor")

    @property
    def arity(self) -> int:
        return len(self.args)


Term = Union[Variable, Compound]


@dataclass(frozen=True)
class Literal:
    positive: bool
    atom: Compound

    def __post_init__(self):
        if not isinstance(self.atom, Compound):
            raise ValueError("A literal atom cannot be a bare variable")

    @property
    def predicate(self) -> str:
        return self.atom.functor

    @property
    def is_equality(self) -> bool:
        return self.atom.functor == EQUALITY and self.atom.arity == 2

    def negate(self) -> 'Literal':
        return Literal(not self.positive, self.atom)


@dataclass(frozen=True)
class Clause:
    """Disjunction of literals; no literals means the empty clause"""

    literals: Tuple[Literal, ...] = ()

    @property
    def is_empty(self) -> bool:
        return not self.literals

    @property
    def has_negative(self) -> bool:
        return any(not literal.positive for literal in self.literals)

    def __len__(self) -> int:
        return len(self.literals)

    def __iter__(self) -> Iterator[Literal]:
        return iter(self.literals)


class ClauseRole(str, Enum):
    AXIOM = 'axiom'
    DERIVED = 'derived'
    CONJECTURE = 'conjecture'


@dataclass(frozen=True)
class AnnotatedClause:
    """A named clause with its role, as read from a TPTP `cnf(...)` record"""

    name: str
    role: ClauseRole
    clause: Clause
    source_domain: str = ''

    def __repr__(self) -> str:
        return f'<AnnotatedClause {self.name} ({self.role.value})>'


@dataclass
class SignatureStats:
    """Per-clause symbol occurrence and pairwise co-occurrence counts"""

    occurrence: Dict[str, int] = field(default_factory=dict)
    cooccurrence: Dict[FrozenSet[str], int] = field(default_factory=dict)

    def occurrences(self, symbol: str) -> int:
        return self.occurrence.get(symbol, 0)

    def cooccurrences(self, first: str, second: str) -> int:
        return self.cooccurrence.get(frozenset((first, second)), 0)

    def to_dict(self) -> Dict:
        return {
            'occurrence': dict(sorted(self.occurrence.items())),
            'cooccurrence': {
                '|'.join(sorted(pair)): count
                for pair, count in sorted(self.cooccurrence.items(), key=lambda item: sorted(item[0]))
            },
        }
