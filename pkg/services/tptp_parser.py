"""
TptpParser - Reader for TPTP CNF problem files and annotated records
Handles comments, include directives and the annotation terms of TSTP output
"""

import os
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterator, List, NamedTuple, Optional, Sequence, Set, Tuple

import structlog

from models.clause import EQUALITY, AnnotatedClause, Clause, ClauseRole, Compound, Literal, Term, Variable
from utils.errors import TptpSyntaxError, UnsupportedRoleError

logger = structlog.get_logger(__name__)

_TOKEN_SPEC = [
    ('WS', r'[ \t\r\n]+'),
    ('LINE_COMMENT', r'%[^\n]*'),
    ('BLOCK_COMMENT', r'/\*.*?\*/'),
    ('NEQ', r'!='),
    ('DOLLAR_WORD', r'\$\$?[a-z][A-Za-z0-9_]*'),
    ('UPPER_WORD', r'[A-Z][A-Za-z0-9_]*'),
    ('LOWER_WORD', r'[a-z][A-Za-z0-9_]*'),
    ('SINGLE_QUOTED', r"'(?:[^'\\]|\\.)*'"),
    ('DISTINCT_OBJECT', r'"(?:[^"\\]|\\.)*"'),
    ('NUMBER', r'[+-]?[0-9]+(?:\.[0-9]+)?(?:[eE][+-]?[0-9]+)?(?:/[0-9]+)?'),
    ('PUNCT', r'[()\[\],.|~=:!&<>*+@^?/#-]'),
    ('MISMATCH', r'.'),
]
_TOKEN_RE = re.compile('|'.join(f'(?P<{kind}>{pattern})' for kind, pattern in _TOKEN_SPEC), re.DOTALL)
_SKIPPED = {'WS', 'LINE_COMMENT', 'BLOCK_COMMENT'}
_NAME_KINDS = {'LOWER_WORD', 'SINGLE_QUOTED', 'NUMBER'}
_FUNCTOR_KINDS = {'LOWER_WORD', 'SINGLE_QUOTED', 'DOLLAR_WORD', 'NUMBER', 'DISTINCT_OBJECT'}
_LANGUAGES = {'cnf', 'fof', 'tff', 'tcf', 'thf'}


class Token(NamedTuple):
    kind: str
    value: str
    line: int
    column: int


@dataclass(frozen=True)
class GeneralTerm:
    """Annotation term: `inference(...)`, `file(...)`, lists and atoms"""

    value: str
    args: Tuple['GeneralTerm', ...] = ()
    is_list: bool = False


@dataclass(frozen=True)
class TptpRecord:
    language: str
    name: str
    role: str
    clause: Optional[Clause]
    source: Optional[GeneralTerm]
    line: int
    column: int = 1
    include_path: Optional[str] = None
    include_names: Tuple[str, ...] = ()


def tokenize(text: str, first_line: int = 1) -> List[Token]:
    """
    Split TPTP text into tokens, dropping whitespace and comments

    Args:
        text: TPTP source text
        first_line: Line number reported for the first line of text

    Returns:
        List of tokens with 1-based line and column positions
    """
    tokens = []
    line = first_line
    line_start = 0
    for match in _TOKEN_RE.finditer(text):
        kind = match.lastgroup
        value = match.group()
        column = match.start() - line_start + 1
        if kind == 'MISMATCH':
            raise TptpSyntaxError(f"unexpected character {value!r}", line, column)
        if kind not in _SKIPPED:
            tokens.append(Token(kind, value, line, column))
        newlines = value.count('\n')
        if newlines:
            line += newlines
            line_start = match.start() + value.rindex('\n') + 1
    return tokens


class TptpParser:
    """Recursive-descent parser over a token list"""

    ROLE_MAP = {
        'axiom': ClauseRole.AXIOM,
        'hypothesis': ClauseRole.AXIOM,
        'definition': ClauseRole.AXIOM,
        'plain': ClauseRole.DERIVED,
        'lemma': ClauseRole.DERIVED,
        'theorem': ClauseRole.DERIVED,
        'conjecture': ClauseRole.CONJECTURE,
        'negated_conjecture': ClauseRole.CONJECTURE,
    }

    def __init__(self, text: str, first_line: int = 1):
        self.tokens = tokenize(text, first_line)
        self.position = 0
        self._end_line = first_line + text.count('\n')

    # Token stream helpers

    def _peek(self, offset: int = 0) -> Optional[Token]:
        index = self.position + offset
        return self.tokens[index] if index < len(self.tokens) else None

    def _next(self) -> Token:
        token = self._peek()
        if token is None:
            raise TptpSyntaxError("unexpected end of input", self._end_line, 1)
        self.position += 1
        return token

    def _error(self, message: str, token: Optional[Token] = None) -> TptpSyntaxError:
        token = token or self._peek()
        if token is None:
            return TptpSyntaxError(message, self._end_line, 1)
        return TptpSyntaxError(message, token.line, token.column)

    def _at(self, value: str) -> bool:
        token = self._peek()
        return token is not None and token.value == value and token.kind in ('PUNCT', 'NEQ')

    def _expect(self, value: str) -> Token:
        token = self._peek()
        if token is None or token.value != value:
            found = 'end of input' if token is None else repr(token.value)
            raise self._error(f"expected {value!r}, found {found}", token)
        return self._next()

    @property
    def exhausted(self) -> bool:
        return self.position >= len(self.tokens)

    # Records

    def records(self) -> Iterator[TptpRecord]:
        while not self.exhausted:
            yield self.record()

    def record(self) -> TptpRecord:
        start = self._next()
        if start.kind != 'LOWER_WORD' or (start.value not in _LANGUAGES and start.value != 'include'):
            raise self._error(f"expected a cnf(...) or include(...) record, found {start.value!r}", start)
        self._expect('(')
        if start.value == 'include':
            return self._include(start)

        name = self._name()
        self._expect(',')
        role_token = self._next()
        if role_token.kind != 'LOWER_WORD':
            raise self._error(f"expected a role, found {role_token.value!r}", role_token)
        self._expect(',')

        clause = None
        if start.value == 'cnf':
            clause = self.disjunction()
        else:
            self._skip_formula()

        source = None
        if self._at(','):
            self._next()
            source = self.general_term()
            if self._at(','):
                self._next()
                self.general_term()
        self._expect(')')
        self._expect('.')
        return TptpRecord(start.value, name, role_token.value, clause, source, start.line, start.column)

    def _include(self, start: Token) -> TptpRecord:
        path_token = self._next()
        if path_token.kind != 'SINGLE_QUOTED':
            raise self._error("include path must be a single-quoted string", path_token)
        names: List[str] = []
        if self._at(','):
            self._next()
            self._expect('[')
            while not self._at(']'):
                names.append(self._name())
                if not self._at(']'):
                    self._expect(',')
            self._expect(']')
        self._expect(')')
        self._expect('.')
        return TptpRecord('include', '', '', None, None, start.line, start.column,
                          include_path=unquote(path_token.value), include_names=tuple(names))

    def _name(self) -> str:
        token = self._next()
        if token.kind not in _NAME_KINDS:
            raise self._error(f"expected a record name, found {token.value!r}", token)
        return token.value

    def _skip_formula(self):
        depth = 0
        while True:
            token = self._peek()
            if token is None:
                raise self._error("unterminated formula")
            if token.kind == 'PUNCT':
                if token.value in '([':
                    depth += 1
                elif token.value in ')]':
                    if depth == 0:
                        return
                    depth -= 1
                elif token.value == ',' and depth == 0:
                    return
            self._next()

    # Clauses

    def disjunction(self) -> Clause:
        literals: List[Literal] = []
        self._disjunct(literals)
        while self._at('|'):
            self._next()
            self._disjunct(literals)
        return Clause(tuple(literals))

    def _disjunct(self, literals: List[Literal]):
        if self._at('('):
            self._next()
            literals.extend(self.disjunction().literals)
            self._expect(')')
            return
        negated = False
        if self._at('~'):
            self._next()
            negated = True
            if self._at('('):
                self._next()
                inner = self.disjunction()
                self._expect(')')
                if len(inner) != 1:
                    raise self._error("negation applies to a single literal in CNF")
                literals.append(inner.literals[0].negate())
                return
        literal = self._atomic_formula()
        if literal is None:
            if negated:
                raise self._error("negated $false is not supported in CNF")
            return
        literals.append(literal.negate() if negated else literal)

    def _atomic_formula(self) -> Optional[Literal]:
        token = self._peek()
        left = self.term()
        if self._at('=') or self._at('!='):
            positive = self._next().value == '='
            right = self.term()
            return Literal(positive, Compound(EQUALITY, (left, right)))
        if isinstance(left, Variable):
            raise self._error("a literal atom cannot be a bare variable", token)
        if left.functor == '$false' and not left.args:
            return None
        if left.functor == '$true' and not left.args:
            raise self._error("$true is not supported inside a clause", token)
        return Literal(True, left)

    def term(self) -> Term:
        token = self._next()
        if token.kind == 'UPPER_WORD':
            return Variable(token.value)
        if token.kind not in _FUNCTOR_KINDS:
            raise self._error(f"expected a term, found {token.value!r}", token)
        args: List[Term] = []
        if self._at('('):
            self._next()
            args.append(self.term())
            while self._at(','):
                self._next()
                args.append(self.term())
            self._expect(')')
        return Compound(token.value, tuple(args))

    # Annotations

    def general_term(self) -> GeneralTerm:
        token = self._peek()
        if token is None:
            raise self._error("expected an annotation term")
        if self._at('['):
            self._next()
            items: List[GeneralTerm] = []
            while not self._at(']'):
                items.append(self.general_term())
                if not self._at(']'):
                    self._expect(',')
            self._next()
            term = GeneralTerm('[]', tuple(items), is_list=True)
        else:
            token = self._next()
            if token.kind == 'PUNCT':
                raise self._error(f"unexpected {token.value!r} in annotation", token)
            args: List[GeneralTerm] = []
            if self._at('('):
                self._next()
                args.append(self.general_term())
                while self._at(','):
                    self._next()
                    args.append(self.general_term())
                self._expect(')')
            term = GeneralTerm(token.value, tuple(args))
        if self._at(':'):
            self._next()
            term = GeneralTerm(':', (term, self.general_term()))
        return term


def unquote(value: str) -> str:
    if len(value) >= 2 and value[0] == value[-1] == "'":
        return value[1:-1].replace("\\'", "'").replace('\\\\', '\\')
    return value


def map_role(role: str, line: int = 1, column: int = 1) -> ClauseRole:
    """
    Map a TPTP role string onto the three clause roles

    Raises:
        UnsupportedRoleError: For roles with no clause meaning (type, unknown, ...)
    """
    try:
        return TptpParser.ROLE_MAP[role]
    except KeyError:
        raise UnsupportedRoleError(f"unsupported role {role!r}", role=role, line=line, column=column) from None


def parse_clause(text: str) -> Clause:
    """Parse a bare clause such as `(p(X1)|~q(X1))`"""
    parser = TptpParser(text)
    clause = parser.disjunction()
    if not parser.exhausted:
        raise parser._error("unexpected text after clause")
    return clause


def parse_annotated_clause(text: str, source_domain: str = '') -> AnnotatedClause:
    """
    Parse exactly one `cnf(name,role,formula).` record; the final period may be omitted

    Args:
        text: Record text, whitespace tolerant
        source_domain: Domain code attached to the result

    Returns:
        AnnotatedClause for the record
    """
    text = text.strip()
    if not text.endswith('.'):
        text += '.'
    parser = TptpParser(text)
    record = parser.record()
    if record.language != 'cnf':
        raise TptpSyntaxError(f"expected a cnf record, found {record.language}", record.line, record.column)
    if not parser.exhausted:
        raise parser._error("expected a single record")
    role = map_role(record.role, record.line, record.column)
    return AnnotatedClause(record.name, role, record.clause, source_domain)


def resolve_include(include_path: str, base_dir: Optional[Path], tptp_root: Optional[str]) -> Optional[Path]:
    """Locate an included file under the TPTP root, falling back to the including file's directory"""
    candidates = []
    if tptp_root:
        candidates.append(Path(tptp_root) / include_path)
    if base_dir is not None:
        candidates.append(base_dir / include_path)
    candidates.append(Path(include_path))
    for candidate in candidates:
        if candidate.is_file():
            return candidate
    return None


def parse_tptp_text(text: str, source_domain: str = '', base_dir: Optional[Path] = None,
                    tptp_root: Optional[str] = None, names: Sequence[str] = (),
                    _loaded: Optional[Dict[Path, Set[str]]] = None,
                    _active: Optional[Set[Path]] = None) -> List[AnnotatedClause]:
    """
    Parse every cnf record of a TPTP text, expanding include directives

    A file included more than once contributes each of its records once; a
    later include with a different name selection adds only the records not
    yet loaded from that file.

    Args:
        text: TPTP problem or axiom text
        source_domain: Domain code attached to every clause
        base_dir: Directory of the file the text came from
        tptp_root: TPTP root for include resolution (defaults to $TPTP)
        names: When given, only records with these names are kept

    Returns:
        Annotated clauses in file order
    """
    tptp_root = tptp_root if tptp_root is not None else os.getenv('TPTP')
    loaded = _loaded if _loaded is not None else {}
    active = _active if _active is not None else set()
    wanted = set(names)
    clauses: List[AnnotatedClause] = []
    known: Set[str] = set()

    for record in TptpParser(text).records():
        if record.language == 'include':
            target = resolve_include(record.include_path, base_dir, tptp_root)
            if target is None:
                raise TptpSyntaxError(f"cannot resolve include {record.include_path!r}", record.line,
                                      record.column, error_code='INCLUDE_NOT_FOUND')
            resolved = target.resolve()
            if resolved in active:
                logger.debug("include cycle skipped", path=str(resolved))
                continue
            active.add(resolved)
            try:
                included = parse_tptp_text(resolved.read_text(encoding='utf-8'), source_domain, resolved.parent,
                                           tptp_root, record.include_names, loaded, active)
            finally:
                active.discard(resolved)
            previous = loaded.setdefault(resolved, set())
            batch = [clause for clause in included if clause.name not in previous]
            previous.update(clause.name for clause in batch)
            if not batch:
                logger.debug("include already loaded", path=str(resolved), names=list(record.include_names))
        elif record.language != 'cnf':
            logger.debug("skipping non-clausal record", name=record.name, language=record.language)
            continue
        else:
            role = map_role(record.role, record.line, record.column)
            batch = [AnnotatedClause(record.name, role, record.clause, source_domain)]

        for clause in batch:
            if wanted and clause.name not in wanted:
                continue
            if clause.name in known:
                raise TptpSyntaxError(f"duplicate clause name {clause.name!r}", record.line, record.column,
                                      error_code='DUPLICATE_NAME')
            known.add(clause.name)
            clauses.append(clause)
    return clauses


def parse_tptp_file(path, source_domain: str = '', tptp_root: Optional[str] = None,
                    names: Sequence[str] = ()) -> List[AnnotatedClause]:
    """Parse a TPTP file from disk; see parse_tptp_text"""
    path = Path(path)
    resolved = path.resolve()
    text = resolved.read_text(encoding='utf-8')
    clauses = parse_tptp_text(text, source_domain, resolved.parent, tptp_root, names, {}, {resolved})
    logger.info("loaded TPTP file", path=str(path), clauses=len(clauses), domain=source_domain or None)
    return clauses
