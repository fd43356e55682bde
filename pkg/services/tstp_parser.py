"""
Reader for TSTP derivations printed by external provers
"""

import re
from typing import Dict, List, Optional, Tuple

import structlog

from models.clause import ClauseRole
from models.prover import SaturationOutput, SaturationRecord
from services.tptp_parser import GeneralTerm, TptpParser, TptpRecord, unquote, map_role
from utils.errors import TptpSyntaxError, TstpParseError, UnsupportedRoleError
from utils.szs_status import SzsStatus

logger = structlog.get_logger(__name__)

_RECORD_START = re.compile(r'^(cnf|fof|tff|tcf|thf)\(')
_SKIPPED_SOURCES = {'theory', 'file', 'introduced', 'creator'}


def _record_chunks(text: str) -> List[Tuple[int, str]]:
    """Group prover output lines into record texts, dropping comments and chatter"""
    chunks: List[Tuple[int, str]] = []
    buffer: List[str] = []
    start = 0
    for number, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped[0] in '%#':
            continue
        if not buffer:
            if not _RECORD_START.match(stripped):
                logger.debug("ignoring prover output line", line=number)
                continue
            start = number
        buffer.append(stripped)
        if stripped.endswith(').'):
            chunks.append((start, '\n'.join(buffer)))
            buffer = []
    if buffer:
        logger.warning("dropping truncated record at end of prover output", line=start)
    return chunks


def collect_parents(term: GeneralTerm) -> List[str]:
    """Leaf parent names of an inference parent list, flattening nested inferences"""
    names: List[str] = []
    for item in term.args if term.is_list else (term,):
        if item.is_list:
            names.extend(collect_parents(item))
        elif item.value == 'inference' and len(item.args) >= 3:
            names.extend(collect_parents(item.args[2]))
        elif item.value == ':' and item.args:
            names.extend(collect_parents(item.args[0]))
        elif not item.args and item.value not in _SKIPPED_SOURCES:
            names.append(unquote(item.value))
    return names


def interpret_source(record: TptpRecord) -> Tuple[ClauseRole, Tuple[str, ...], Optional[str], Optional[str]]:
    """
    Read role, parents, rule label and original axiom name from a record's source

    Returns:
        Tuple of (role, parent names, rule, original name for file sources)
    """
    source = record.source
    if source is None:
        return map_role(record.role, record.line, record.column), (), None, None
    if source.value == 'file':
        original = None
        if len(source.args) > 1 and not source.args[1].args:
            original = unquote(source.args[1].value)
            if original == 'unknown':
                original = None
        return ClauseRole.AXIOM, (), None, original
    if source.value == 'introduced':
        return ClauseRole.AXIOM, (), 'introduced', None
    if source.value == 'inference' and len(source.args) >= 3:
        parents = tuple(dict.fromkeys(collect_parents(source.args[2])))
        role = ClauseRole.CONJECTURE if record.role in ('conjecture', 'negated_conjecture') else ClauseRole.DERIVED
        return role, parents, source.args[0].value, None
    if not source.args and not source.is_list:
        return ClauseRole.DERIVED, (unquote(source.value),), 'copy', None
    raise TstpParseError(f"unsupported source annotation {source.value!r}", record.line)


def parse_tstp_derivation(text: str, alias_axioms: bool = True, prover: str = 'external') -> SaturationOutput:
    """
    Parse a TSTP derivation into a saturation log

    Args:
        text: Prover stdout, possibly truncated by a timeout
        alias_axioms: Rename axiom records back to the name given in their file() source
        prover: Label stored on the output

    Returns:
        SaturationOutput with the SZS status of the run
    """
    records: List[SaturationRecord] = []
    aliases: Dict[str, str] = {}
    names = set()
    refutation = None

    for line, chunk in _record_chunks(text):
        try:
            record = TptpParser(chunk, first_line=line).record()
        except TptpSyntaxError as exc:
            raise TstpParseError(exc.reason, exc.line, column=exc.column) from exc
        if record.language != 'cnf':
            logger.debug("skipping non-clausal derivation record", name=record.name, language=record.language)
            continue
        try:
            role, parents, rule, original = interpret_source(record)
        except UnsupportedRoleError:
            logger.debug("skipping record with unsupported role", name=record.name, role=record.role)
            continue

        name = record.name
        if alias_axioms and original and original != name and original not in names:
            aliases[name] = original
            name = original
        parents = tuple(dict.fromkeys(aliases.get(parent, parent) for parent in parents))
        names.add(name)
        records.append(SaturationRecord(name, role, record.clause, parents, rule))
        if record.clause.is_empty and refutation is None:
            refutation = name

    status = SzsStatus.parse_status(text)
    complete = status in SzsStatus.NOT_ENTAILED_STATUSES
    logger.debug("parsed TSTP derivation", records=len(records), status=status, aliased=len(aliases))
    return SaturationOutput(records=records, complete=complete, refutation=refutation, prover=prover,
                            szs_status=status)
